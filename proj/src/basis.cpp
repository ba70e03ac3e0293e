#include "iifem/basis.hpp"

#include "iifem/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace iifem {

double reference_determinant(double x0, double y0, double rho) {
    if (!(x0 > 0.0 && x0 <= 1.0) || !(y0 > 0.0 && y0 <= 1.0) || !(rho > 0.0) || !std::isfinite(rho)) {
        throw InvalidArgument("reference_determinant: need 0 < x0, y0 <= 1 and rho > 0");
    }
    const double xy = x0 * y0;
    return 0.25 * (x0 * x0 + y0 * y0) * (rho * (xy - 1.0) - xy);
}

ElementBasis build_standard_basis(const Triangle& tri) {
    const double area2 = cross(tri[1] - tri[0], tri[2] - tri[0]);
    const double scale = std::max({norm(tri[1] - tri[0]), norm(tri[2] - tri[1]), norm(tri[0] - tri[2])});
    if (!(std::abs(area2) > 1e-14 * scale * scale)) {
        throw InvalidArgument("build_standard_basis: degenerate triangle");
    }
    ElementBasis basis;
    for (int k = 0; k < 3; ++k) {
        // lambda_k = (cross(p_{k+1}-x, p_{k+2}-x)) / area2; phi_k = 1 - 2 lambda_k.
        const Point& p1 = tri[(k + 1) % 3];
        const Point& p2 = tri[(k + 2) % 3];
        const AffineFn lambda{cross(p1, p2) / area2, (p1.y - p2.y) / area2, (p2.x - p1.x) / area2};
        const AffineFn phi{1.0 - 2.0 * lambda.a, -2.0 * lambda.b, -2.0 * lambda.c};
        basis.functions[k] = {phi, phi};
    }
    return basis;
}

namespace {

using Matrix6 = std::array<std::array<double, 6>, 6>;
using Vector6 = std::array<double, 6>;

/// Gaussian elimination with partial pivoting; solves all right-hand sides at once.
std::array<Vector6, 3> solve6(Matrix6 a, std::array<Vector6, 3> rhs) {
    std::array<double, 6> row_norm{};
    for (int i = 0; i < 6; ++i) {
        for (double v : a[i]) row_norm[i] = std::max(row_norm[i], std::abs(v));
    }
    for (int col = 0; col < 6; ++col) {
        int piv = col;
        for (int r = col + 1; r < 6; ++r) {
            if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
        }
        if (std::abs(a[piv][col]) <= 1e-14 * row_norm[piv]) {
            throw SingularSystem("broken basis system is singular at column " + std::to_string(col));
        }
        std::swap(a[piv], a[col]);
        std::swap(row_norm[piv], row_norm[col]);
        for (auto& b : rhs) std::swap(b[piv], b[col]);
        for (int r = col + 1; r < 6; ++r) {
            const double f = a[r][col] / a[col][col];
            if (f == 0.0) continue;
            for (int c = col; c < 6; ++c) a[r][c] -= f * a[col][c];
            for (auto& b : rhs) b[r] -= f * b[col];
        }
    }
    for (auto& b : rhs) {
        for (int r = 5; r >= 0; --r) {
            double s = b[r];
            for (int c = r + 1; c < 6; ++c) s -= a[r][c] * b[c];
            b[r] = s / a[r][r];
        }
    }
    return rhs;
}

}  // namespace

ElementBasis build_broken_basis(const CutInfo& cut, const Coefficients& beta) {
    if (!cut.is_interface()) throw InvalidArgument("build_broken_basis: element is not an interface element");
    if (!(beta.beta_minus > 0.0) || !(beta.beta_plus > 0.0)) {
        throw InvalidArgument("build_broken_basis: coefficients must be positive");
    }

    // Unknowns (a+, b+, c+, a-, b-, c-) of pieces written in the local frame
    // xi = (x - xc)/s, eta = (y - yc)/s; converted to physical coefficients at the end.
    const Point xc = centroid(cut.vertices);
    const double s = std::max({norm(cut.vertices[1] - cut.vertices[0]), norm(cut.vertices[2] - cut.vertices[1]),
                               norm(cut.vertices[0] - cut.vertices[2])});
    const auto local = [&](const Point& p) { return Point{(p.x - xc.x) / s, (p.y - xc.y) / s}; };
    const auto offset = [](Side side) { return side == Side::Plus ? 0 : 3; };

    Matrix6 a{};
    for (int j = 0; j < 3; ++j) {
        const auto pieces = cut.edge_pieces(j);
        double length = 0.0;
        for (const auto& piece : pieces) length += piece.length;
        for (const auto& piece : pieces) {
            const double w = piece.length / length;
            const Point m = local(piece.mid);
            const int o = offset(piece.side);
            a[j][o] += w;
            a[j][o + 1] += w * m.x;
            a[j][o + 2] += w * m.y;
        }
    }
    const Point d = local(cut.d);
    const Point e = local(cut.e);
    a[3] = {1.0, d.x, d.y, -1.0, -d.x, -d.y};
    a[4] = {1.0, e.x, e.y, -1.0, -e.x, -e.y};
    const Vec2& n = cut.normal;
    a[5] = {0.0, n.x, n.y, 0.0, -beta.rho() * n.x, -beta.rho() * n.y};

    std::array<Vector6, 3> rhs{};
    for (int k = 0; k < 3; ++k) rhs[k][k] = 1.0;
    const auto sol = solve6(a, rhs);

    const auto to_physical = [&](double al, double bl, double cl) {
        const double b = bl / s, c = cl / s;
        return AffineFn{al - b * xc.x - c * xc.y, b, c};
    };
    ElementBasis basis;
    basis.broken = true;
    for (int k = 0; k < 3; ++k) {
        const auto& v = sol[k];
        basis.functions[k] = {to_physical(v[0], v[1], v[2]), to_physical(v[3], v[4], v[5])};
    }
    return basis;
}

std::vector<ElementBasis> build_bases(const std::vector<CutInfo>& cuts, const Coefficients& beta) {
    std::vector<ElementBasis> out;
    out.reserve(cuts.size());
    for (const auto& c : cuts) {
        out.push_back(c.is_interface() ? build_broken_basis(c, beta) : build_standard_basis(c.vertices));
    }
    return out;
}

PointValue evaluate(const AffinePair& fn, const CutInfo& cut, const Point& p) {
    const auto bary = cut.barycentric(p);
    if (*std::min_element(bary.begin(), bary.end()) < -1e-12) throw OutOfDomain("evaluate: point outside element");
    const AffineFn& piece = fn.on(cut.side_of(p));
    return {piece(p), piece.gradient()};
}

double chord_flux_jump(const AffinePair& fn, const CutInfo& cut, const Coefficients& beta) {
    if (!cut.is_interface()) return 0.0;
    return beta.beta_minus * dot(fn.minus.gradient(), cut.normal) -
           beta.beta_plus * dot(fn.plus.gradient(), cut.normal);
}

double edge_average(const AffinePair& fn, const CutInfo& cut, int local_edge) {
    double integral = 0.0, length = 0.0;
    for (const auto& piece : cut.edge_pieces(local_edge)) {
        integral += piece.length * fn.on(piece.side)(piece.mid);
        length += piece.length;
    }
    return integral / length;
}

AffinePair combine(const ElementBasis& basis, const std::array<double, 3>& weights) {
    AffinePair out;
    for (int k = 0; k < 3; ++k) {
        const auto& f = basis.functions[k];
        out.plus.a += weights[k] * f.plus.a;
        out.plus.b += weights[k] * f.plus.b;
        out.plus.c += weights[k] * f.plus.c;
        out.minus.a += weights[k] * f.minus.a;
        out.minus.b += weights[k] * f.minus.b;
        out.minus.c += weights[k] * f.minus.c;
    }
    return out;
}

}  // namespace iifem
