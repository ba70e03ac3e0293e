#include "iifem/assembly.hpp"

#include "iifem/errors.hpp"
#include "iifem/quadrature.hpp"

#include <string>

namespace iifem {

DofMap DofMap::from_mesh(const Mesh& mesh) {
    DofMap d;
    d.free_index.assign(mesh.edges.size(), -1);
    for (int e = 0; e < mesh.num_edges(); ++e) {
        if (!mesh.boundary[e]) {
            d.free_index[e] = static_cast<int>(d.free_edges.size());
            d.free_edges.push_back(e);
        }
    }
    return d;
}

std::vector<double> LinearSystem::expand(std::span<const double> free_values) const {
    if (static_cast<int>(free_values.size()) != dofs.num_free()) {
        throw InvalidArgument("LinearSystem::expand: size mismatch");
    }
    std::vector<double> full = boundary_values;
    for (int i = 0; i < dofs.num_free(); ++i) full[dofs.free_edges[i]] = free_values[i];
    return full;
}

LoadMode parse_load_mode(std::string_view name) {
    if (name == "pointwise") return LoadMode::Pointwise;
    if (name == "cellmean") return LoadMode::CellMean;
    throw InvalidArgument("unknown load mode '" + std::string(name) + "'");
}

namespace {

void check_sizes(const Mesh& mesh, const std::vector<CutInfo>& cuts, const std::vector<ElementBasis>* bases) {
    if (cuts.size() != mesh.triangles.size() || (bases && bases->size() != mesh.triangles.size())) {
        throw InvalidArgument("cut/basis lists do not match the mesh");
    }
}

}  // namespace

std::array<std::array<double, 3>, 3> local_stiffness(const CutInfo& cut, const ElementBasis& basis,
                                                     const Coefficients& beta) {
    std::array<std::array<double, 3>, 3> k{};
    for (const auto& region : cut.regions) {
        const double w = beta.on(region.side) * region.area;
        for (int i = 0; i < 3; ++i) {
            const Vec2 gi = basis.functions[i].on(region.side).gradient();
            for (int j = 0; j < 3; ++j) k[i][j] += w * dot(gi, basis.functions[j].on(region.side).gradient());
        }
    }
    return k;
}

CsrMatrix assemble_stiffness(const Mesh& mesh, const std::vector<CutInfo>& cuts,
                             const std::vector<ElementBasis>& bases, const Coefficients& beta) {
    check_sizes(mesh, cuts, &bases);
    std::vector<Triplet> triplets;
    triplets.reserve(9 * mesh.triangles.size());
    for (int t = 0; t < mesh.num_triangles(); ++t) {
        const auto k = local_stiffness(cuts[t], bases[t], beta);
        const auto& te = mesh.triangle_edges[t];
        for (int i = 0; i < 3; ++i) {
            for (int j = 0; j < 3; ++j) triplets.push_back({te[i], te[j], k[i][j]});
        }
    }
    return CsrMatrix::from_triplets(mesh.num_edges(), std::move(triplets));
}

std::vector<double> element_means(const Mesh& mesh, const std::vector<CutInfo>& cuts, const ScalarField& f) {
    check_sizes(mesh, cuts, nullptr);
    std::vector<double> out(cuts.size());
    for (std::size_t t = 0; t < cuts.size(); ++t) {
        double s = 0.0;
        for (const auto& region : cuts[t].regions) {
            for (const auto& tri : region.triangles()) s += integrate(tri, f);
        }
        out[t] = s / cuts[t].area;
    }
    return out;
}

std::vector<double> assemble_load(const Mesh& mesh, const std::vector<CutInfo>& cuts,
                                  const std::vector<ElementBasis>& bases, const ScalarField& f, LoadMode mode) {
    check_sizes(mesh, cuts, &bases);
    std::vector<double> load(mesh.edges.size(), 0.0);
    const std::vector<double> means =
        mode == LoadMode::CellMean ? element_means(mesh, cuts, f) : std::vector<double>{};

    for (int t = 0; t < mesh.num_triangles(); ++t) {
        const auto& te = mesh.triangle_edges[t];
        for (const auto& region : cuts[t].regions) {
            for (int k = 0; k < 3; ++k) {
                const AffineFn& phi = bases[t].functions[k].on(region.side);
                double v = 0.0;
                if (mode == LoadMode::CellMean) {
                    // Affine integrand: exact from the region centroid.
                    v = means[t] * region.area * phi(region.centroid());
                } else {
                    for (const auto& tri : region.triangles()) {
                        v += integrate(tri, [&](const Point& p) { return f(p) * phi(p); });
                    }
                }
                load[te[k]] += v;
            }
        }
    }
    return load;
}

double boundary_average(const Mesh& mesh, int edge, const ScalarField& g) {
    const auto [a, b] = mesh.edges[edge];
    double s = 0.0;
    for (const auto& q : segment_rule(mesh.vertices[a], mesh.vertices[b])) s += q.weight * g(q.point);
    return s / mesh.edge_length(edge);
}

LinearSystem apply_dirichlet(const CsrMatrix& stiffness, std::span<const double> load, const Mesh& mesh,
                             const DofMap& dofs, const ScalarField& g) {
    if (stiffness.rows() != dofs.num_dofs() || static_cast<int>(load.size()) != dofs.num_dofs()) {
        throw InvalidArgument("apply_dirichlet: system size does not match the dof map");
    }
    LinearSystem sys;
    sys.dofs = dofs;
    sys.boundary_values.assign(static_cast<std::size_t>(dofs.num_dofs()), 0.0);
    for (int e = 0; e < dofs.num_dofs(); ++e) {
        if (dofs.free_index[e] < 0 && g) sys.boundary_values[e] = boundary_average(mesh, e, g);
    }

    sys.rhs.resize(static_cast<std::size_t>(dofs.num_free()));
    std::vector<Triplet> triplets;
    const auto row_ptr = stiffness.row_ptr();
    const auto cols = stiffness.cols();
    const auto vals = stiffness.values();
    for (int i = 0; i < dofs.num_free(); ++i) {
        const int r = dofs.free_edges[i];
        double rhs = load[r];
        for (int k = row_ptr[r]; k < row_ptr[r + 1]; ++k) {
            const int c = cols[k];
            const int fc = dofs.free_index[c];
            if (fc >= 0) {
                triplets.push_back({i, fc, vals[k]});
            } else {
                rhs -= vals[k] * sys.boundary_values[c];
            }
        }
        sys.rhs[i] = rhs;
    }
    sys.matrix = CsrMatrix::from_triplets(dofs.num_free(), std::move(triplets));
    return sys;
}

}  // namespace iifem
