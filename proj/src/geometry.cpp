#include "iifem/geometry.hpp"

#include "iifem/errors.hpp"

#include <algorithm>
#include <ostream>
#include <string>

namespace iifem {

double signed_area(const Triangle& t) { return 0.5 * cross(t[1] - t[0], t[2] - t[0]); }

double signed_area(const Polygon& p) {
    double s = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        s += cross(p[i], p[(i + 1) % p.size()]);
    }
    return 0.5 * s;
}

Point centroid(const Triangle& t) {
    return {(t[0].x + t[1].x + t[2].x) / 3.0, (t[0].y + t[1].y + t[2].y) / 3.0};
}

// ---------------------------------------------------------------------------
// Mesh

Triangle Mesh::triangle(int t) const {
    const auto& v = triangles[static_cast<std::size_t>(t)];
    return {vertices[v[0]], vertices[v[1]], vertices[v[2]]};
}

double Mesh::area(int t) const { return signed_area(triangle(t)); }

double Mesh::edge_length(int e) const {
    const auto& ed = edges[static_cast<std::size_t>(e)];
    return norm(vertices[ed[1]] - vertices[ed[0]]);
}

int Mesh::local_edge(int t, int e) const {
    const auto& te = triangle_edges[static_cast<std::size_t>(t)];
    for (int k = 0; k < 3; ++k) {
        if (te[k] == e) return k;
    }
    throw InvalidArgument("edge " + std::to_string(e) + " is not on triangle " + std::to_string(t));
}

Mesh build_uniform_mesh(int nx, int ny, const Rect& domain) {
    if (nx < 1 || ny < 1) {
        throw InvalidArgument("build_uniform_mesh: subdivision counts must be >= 1");
    }
    if (!(domain.x1 > domain.x0) || !(domain.y1 > domain.y0) || !std::isfinite(domain.x1 - domain.x0) ||
        !std::isfinite(domain.y1 - domain.y0)) {
        throw InvalidArgument("build_uniform_mesh: degenerate domain rectangle");
    }

    Mesh m;
    m.nx = nx;
    m.ny = ny;
    m.domain = domain;
    const double dx = (domain.x1 - domain.x0) / nx;
    const double dy = (domain.y1 - domain.y0) / ny;
    m.h = std::hypot(dx, dy);

    const auto vid = [nx](int i, int j) { return j * (nx + 1) + i; };
    m.vertices.reserve(static_cast<std::size_t>((nx + 1) * (ny + 1)));
    for (int j = 0; j <= ny; ++j) {
        for (int i = 0; i <= nx; ++i) {
            // Last row/column pinned to the rectangle so boundary coordinates are exact.
            const double x = i == nx ? domain.x1 : domain.x0 + i * dx;
            const double y = j == ny ? domain.y1 : domain.y0 + j * dy;
            m.vertices.push_back({x, y});
        }
    }

    // Edge numbering: horizontal, then vertical, then diagonal.
    const int n_h = nx * (ny + 1);
    const int n_v = (nx + 1) * ny;
    const auto horiz = [nx](int i, int j) { return j * nx + i; };
    const auto vert = [nx, n_h](int i, int j) { return n_h + j * (nx + 1) + i; };
    const auto diag = [nx, n_h, n_v](int i, int j) { return n_h + n_v + j * nx + i; };

    m.edges.resize(static_cast<std::size_t>(n_h + n_v + nx * ny));
    for (int j = 0; j <= ny; ++j) {
        for (int i = 0; i < nx; ++i) m.edges[horiz(i, j)] = {vid(i, j), vid(i + 1, j)};
    }
    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i <= nx; ++i) m.edges[vert(i, j)] = {vid(i, j), vid(i, j + 1)};
    }
    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) m.edges[diag(i, j)] = {vid(i, j), vid(i + 1, j + 1)};
    }

    m.triangles.reserve(static_cast<std::size_t>(2 * nx * ny));
    m.triangle_edges.reserve(m.triangles.capacity());
    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            const int v00 = vid(i, j), v10 = vid(i + 1, j), v11 = vid(i + 1, j + 1), v01 = vid(i, j + 1);
            m.triangles.push_back({v00, v10, v11});
            m.triangle_edges.push_back({vert(i + 1, j), diag(i, j), horiz(i, j)});
            m.triangles.push_back({v00, v11, v01});
            m.triangle_edges.push_back({horiz(i, j + 1), vert(i, j), diag(i, j)});
        }
    }

    m.edge_triangles.assign(m.edges.size(), {-1, -1});
    for (int t = 0; t < m.num_triangles(); ++t) {
        for (int e : m.triangle_edges[t]) {
            auto& et = m.edge_triangles[e];
            (et[0] < 0 ? et[0] : et[1]) = t;
        }
    }
    m.boundary.resize(m.edges.size());
    for (std::size_t e = 0; e < m.edges.size(); ++e) m.boundary[e] = m.edge_triangles[e][1] < 0;
    return m;
}

void dump_mesh(const Mesh& mesh, std::ostream& os) {
    const auto old_precision = os.precision(17);
    for (const auto& v : mesh.vertices) os << "v " << v.x << ' ' << v.y << '\n';
    for (const auto& t : mesh.triangles) os << "t " << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
    os.precision(old_precision);
}

// ---------------------------------------------------------------------------
// Level-set roots

namespace {

int snapped_sign(double v, double tol) { return v > tol ? 1 : (v < -tol ? -1 : 0); }

Point lerp(const Point& p0, const Point& p1, double t) {
    if (t == 0.0) return p0;
    if (t == 1.0) return p1;
    return p0 + t * (p1 - p0);
}

/// Segment parameter of the root given already-snapped endpoint signs.
std::optional<double> root_parameter(const Point& p0, const Point& p1, const LevelSet& phi, int s0, int s1,
                                     double vertex_snap) {
    if (s0 == s1) return std::nullopt;
    if (s0 == 0) return 0.0;
    if (s1 == 0) return 1.0;
    double lo = 0.0, hi = 1.0;
    while (hi - lo > 1e-13) {
        const double mid = 0.5 * (lo + hi);
        const double fm = phi(lerp(p0, p1, mid));
        if (fm == 0.0) {
            lo = hi = mid;
            break;
        }
        ((fm > 0.0) == (s0 > 0) ? lo : hi) = mid;
    }
    double t = 0.5 * (lo + hi);
    if (t < vertex_snap) t = 0.0;
    if (1.0 - t < vertex_snap) t = 1.0;
    return t;
}

/// True when the sampled sign pattern along the segment changes more than once.
bool crosses_more_than_once(const Point& p0, const Point& p1, const LevelSet& phi, int s0, int s1, int samples) {
    int changes = 0;
    int last = s0;
    const auto visit = [&](int s) {
        if (s == 0) return;
        if (last != 0 && s != last) ++changes;
        last = s;
    };
    for (int i = 1; i <= samples; ++i) {
        const double v = phi(lerp(p0, p1, static_cast<double>(i) / (samples + 1)));
        visit(v > 0.0 ? 1 : (v < 0.0 ? -1 : 0));
    }
    visit(s1);
    return changes > 1;
}

}  // namespace

std::optional<Point> edge_intersection(const Point& p0, const Point& p1, const LevelSet& phi, double tol,
                                       double vertex_snap) {
    const int s0 = snapped_sign(phi(p0), tol);
    const int s1 = snapped_sign(phi(p1), tol);
    const auto t = root_parameter(p0, p1, phi, s0, s1, vertex_snap);
    if (!t) return std::nullopt;
    return lerp(p0, p1, *t);
}

// ---------------------------------------------------------------------------
// CutInfo

std::vector<Triangle> Region::triangles() const {
    std::vector<Triangle> out;
    for (std::size_t i = 1; i + 1 < polygon.size(); ++i) out.push_back({polygon[0], polygon[i], polygon[i + 1]});
    return out;
}

Point Region::centroid() const {
    Point c;
    double a = 0.0;
    for (const auto& t : triangles()) {
        const double ta = signed_area(t);
        c += ta * iifem::centroid(t);
        a += ta;
    }
    return a > 0.0 ? c * (1.0 / a) : polygon.front();
}

double CutInfo::area_on(Side s) const {
    double a = 0.0;
    for (const auto& r : regions) {
        if (r.side == s) a += r.area;
    }
    return a;
}

Side CutInfo::side_of(const Point& p) const {
    if (!is_interface()) return side;
    return dot(normal, p - d) >= 0.0 ? Side::Plus : Side::Minus;
}

std::array<double, 3> CutInfo::barycentric(const Point& p) const {
    const double a = signed_area(vertices);
    const double l0 = 0.5 * cross(vertices[1] - p, vertices[2] - p) / a;
    const double l1 = 0.5 * cross(vertices[2] - p, vertices[0] - p) / a;
    return {l0, l1, 1.0 - l0 - l1};
}

std::vector<CutInfo::EdgePiece> CutInfo::edge_pieces(int local_edge) const {
    const Point a = vertices[(local_edge + 1) % 3];
    const Point b = vertices[(local_edge + 2) % 3];
    std::vector<EdgePiece> out;
    const auto add = [&](const Point& p, const Point& q) {
        const double len = norm(q - p);
        if (len > 0.0) {
            const Point m = midpoint(p, q);
            out.push_back({side_of(m), m, len});
        }
    };
    if (is_interface() && (cut_edges[0] == local_edge || cut_edges[1] == local_edge)) {
        const Point& c = cut_edges[0] == local_edge ? d : e;
        add(a, c);
        add(c, b);
    } else {
        add(a, b);
    }
    return out;
}

CutInfo make_plain_cut(const Triangle& tri, Side side) {
    CutInfo c;
    c.kind = ElementKind::NonInterface;
    c.vertices = tri;
    c.area = signed_area(tri);
    c.side = side;
    c.regions.push_back({side, Polygon(tri.begin(), tri.end()), c.area});
    return c;
}

CutInfo make_interface_cut(const Triangle& tri, const std::array<int, 3>& vertex_sign, int d_edge, const Point& d,
                           int e_edge, const Point& e) {
    if (d_edge < 0 || d_edge > 2 || e_edge < 0 || e_edge > 2 || d_edge == e_edge) {
        throw InvalidArgument("make_interface_cut: chord ends must lie on two distinct local edges");
    }

    struct RingEntry {
        Point p;
        int vertex;  // -1 for an inserted cut point
        int cut;     // 0 for D, 1 for E, -1 otherwise
    };
    std::vector<RingEntry> ring;
    const std::array<std::pair<int, Point>, 2> cuts{{{d_edge, d}, {e_edge, e}}};

    for (int k = 0; k < 3; ++k) ring.push_back({tri[k], k, -1});
    for (int c = 0; c < 2; ++c) {
        const auto& [edge, p] = cuts[c];
        const int va = (edge + 1) % 3, vb = (edge + 2) % 3;
        const double snap = 1e-12 * norm(tri[vb] - tri[va]);
        int at_vertex = -1;
        if (norm(p - tri[va]) <= snap) at_vertex = va;
        if (norm(p - tri[vb]) <= snap) at_vertex = vb;
        if (at_vertex >= 0) {
            auto it = std::find_if(ring.begin(), ring.end(), [&](const RingEntry& r) { return r.vertex == at_vertex; });
            if (it->cut >= 0) throw InvalidArgument("make_interface_cut: D and E coincide");
            it->cut = c;
        } else {
            // Edge (va, vb) runs from va to vb counter-clockwise; insert right after va.
            auto it = std::find_if(ring.begin(), ring.end(), [&](const RingEntry& r) { return r.vertex == va; });
            ring.insert(it + 1, {p, -1, c});
        }
    }

    const auto index_of = [&](int c) {
        return static_cast<std::size_t>(
            std::find_if(ring.begin(), ring.end(), [&](const RingEntry& r) { return r.cut == c; }) - ring.begin());
    };
    const std::size_t i_d = index_of(0), i_e = index_of(1), n = ring.size();

    const auto chain = [&](std::size_t from, std::size_t to) {
        std::vector<RingEntry> out;
        for (std::size_t i = from;; i = (i + 1) % n) {
            out.push_back(ring[i]);
            if (i == to) break;
        }
        return out;
    };
    auto first = chain(i_d, i_e);
    auto second = chain(i_e, i_d);
    std::rotate(second.begin(), second.end() - 1, second.end());  // start at D

    const auto side_of_chain = [&](const std::vector<RingEntry>& c) {
        int s = 0;
        for (const auto& r : c) {
            if (r.vertex < 0 || r.cut >= 0 || vertex_sign[r.vertex] == 0) continue;
            if (s != 0 && s != vertex_sign[r.vertex]) throw InvalidArgument("make_interface_cut: mixed signs in a region");
            s = vertex_sign[r.vertex];
        }
        if (s == 0) throw InvalidArgument("make_interface_cut: region without a signed vertex");
        return s < 0 ? Side::Minus : Side::Plus;
    };
    const auto to_polygon = [](const std::vector<RingEntry>& c) {
        Polygon p;
        for (const auto& r : c) p.push_back(r.p);
        return p;
    };

    const Side s1 = side_of_chain(first);
    const Side s2 = side_of_chain(second);
    if (s1 == s2) throw InvalidArgument("make_interface_cut: both regions on the same side");

    CutInfo ci;
    ci.kind = ElementKind::Interface;
    ci.vertices = tri;
    ci.area = signed_area(tri);
    ci.cut_edges = {d_edge, e_edge};
    ci.d = ring[i_d].p;
    ci.e = ring[i_e].p;

    Region r1{s1, to_polygon(first), 0.0};
    Region r2{s2, to_polygon(second), 0.0};
    r1.area = signed_area(r1.polygon);
    r2.area = signed_area(r2.polygon);
    if (r1.side == Side::Plus) std::swap(r1, r2);
    ci.regions = {std::move(r1), std::move(r2)};

    const Vec2 t = ci.e - ci.d;
    Vec2 nrm{t.y / norm(t), -t.x / norm(t)};
    if (dot(nrm, ci.regions[1].centroid() - ci.d) < 0.0) nrm = nrm * -1.0;
    ci.normal = nrm;

    if (ring[i_d].vertex >= 0) {
        ci.isolated_vertex = ring[i_d].vertex;
    } else if (ring[i_e].vertex >= 0) {
        ci.isolated_vertex = ring[i_e].vertex;
    } else {
        for (const auto& r : ci.regions) {
            int count = 0, last = -1;
            for (const auto& q : r.polygon) {
                for (int k = 0; k < 3; ++k) {
                    if (q == tri[k]) {
                        ++count;
                        last = k;
                    }
                }
            }
            if (count == 1) ci.isolated_vertex = last;
        }
    }
    return ci;
}

// ---------------------------------------------------------------------------
// Classification

std::vector<CutInfo> classify_elements(const Mesh& mesh, const LevelSet& phi, const CutTolerances& tol) {
    std::vector<double> values(mesh.vertices.size());
    double scale = 0.0;
    for (std::size_t v = 0; v < values.size(); ++v) {
        values[v] = phi(mesh.vertices[v]);
        scale = std::max(scale, std::abs(values[v]));
    }
    const double snap = tol.value_snap * scale;
    std::vector<int> sign(values.size());
    for (std::size_t v = 0; v < values.size(); ++v) sign[v] = snapped_sign(values[v], snap);

    // Roots per global edge in the edge's own orientation so neighbours agree on D/E.
    std::vector<std::optional<Point>> root(mesh.edges.size());
    std::vector<bool> multiple(mesh.edges.size(), false);
    for (int ed = 0; ed < mesh.num_edges(); ++ed) {
        const auto [a, b] = mesh.edges[ed];
        const Point& pa = mesh.vertices[a];
        const Point& pb = mesh.vertices[b];
        if (const auto t = root_parameter(pa, pb, phi, sign[a], sign[b], tol.vertex_snap)) root[ed] = lerp(pa, pb, *t);
        multiple[ed] = crosses_more_than_once(pa, pb, phi, sign[a], sign[b], tol.edge_samples);
    }

    std::vector<CutInfo> out;
    out.reserve(mesh.triangles.size());
    for (int t = 0; t < mesh.num_triangles(); ++t) {
        const Triangle tri = mesh.triangle(t);
        const auto& tv = mesh.triangles[t];
        const auto& te = mesh.triangle_edges[t];
        const std::array<int, 3> s{sign[tv[0]], sign[tv[1]], sign[tv[2]]};

        for (int k = 0; k < 3; ++k) {
            if (multiple[te[k]]) {
                throw UnsupportedGeometry(t, "interface crosses local edge " + std::to_string(k) + " more than once");
            }
        }

        const bool has_plus = std::count(s.begin(), s.end(), 1) > 0;
        const bool has_minus = std::count(s.begin(), s.end(), -1) > 0;
        if (!(has_plus && has_minus)) {
            Side side = has_minus ? Side::Minus : Side::Plus;
            if (!has_plus && !has_minus) side = phi(centroid(tri)) < 0.0 ? Side::Minus : Side::Plus;
            out.push_back(make_plain_cut(tri, side));
            continue;
        }

        const auto root_on = [&](int local) {
            const auto& r = root[te[local]];
            if (!r) throw UnsupportedGeometry(t, "missing interface root on local edge " + std::to_string(local));
            return *r;
        };

        CutInfo ci;
        const auto zero = std::find(s.begin(), s.end(), 0);
        if (zero == s.end()) {
            const int iso = s[0] == s[1] ? 2 : (s[0] == s[2] ? 1 : 0);
            const int d_edge = (iso + 2) % 3, e_edge = (iso + 1) % 3;
            const Point d = root_on(d_edge), e = root_on(e_edge);
            if (d == e || d == tri[iso] || e == tri[iso]) {
                // Both roots snapped so that nothing is cut off.
                out.push_back(make_plain_cut(tri, s[(iso + 1) % 3] < 0 ? Side::Minus : Side::Plus));
                continue;
            }
            ci = make_interface_cut(tri, s, d_edge, d, e_edge, e);
        } else {
            // Interface through vertex z, leaving through the opposite edge.
            const int z = static_cast<int>(zero - s.begin());
            const Point e = root_on(z);
            if (norm(e - tri[(z + 1) % 3]) == 0.0 || norm(e - tri[(z + 2) % 3]) == 0.0) {
                // Chord coincides with an edge: the element is touched, not crossed.
                const double mid = phi(centroid(tri));
                out.push_back(make_plain_cut(tri, mid < 0.0 ? Side::Minus : Side::Plus));
                continue;
            }
            ci = make_interface_cut(tri, s, (z + 1) % 3, tri[z], z, e);
        }

        const double minor = std::min(ci.regions[0].area, ci.regions[1].area);
        if (minor / ci.area < tol.sliver) {
            const Side major = ci.regions[0].area >= ci.regions[1].area ? ci.regions[0].side : ci.regions[1].side;
            out.push_back(make_plain_cut(tri, major));
            continue;
        }
        out.push_back(std::move(ci));
    }
    return out;
}

std::vector<CutInfo> uncut_elements(const Mesh& mesh, const LevelSet& phi) {
    std::vector<CutInfo> out;
    out.reserve(mesh.triangles.size());
    for (int t = 0; t < mesh.num_triangles(); ++t) {
        const Triangle tri = mesh.triangle(t);
        const Side side = phi && phi(centroid(tri)) < 0.0 ? Side::Minus : Side::Plus;
        out.push_back(make_plain_cut(tri, side));
    }
    return out;
}

}  // namespace iifem
