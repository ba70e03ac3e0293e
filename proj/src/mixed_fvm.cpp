#include "iifem/mixed_fvm.hpp"

#include "iifem/errors.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

namespace iifem {

std::vector<double> element_mean_source(const Mesh& mesh, const std::vector<CutInfo>& cuts, const ScalarField& f) {
    return element_means(mesh, cuts, f);
}

Vec2 mean_flux_density(const CutInfo& cut, const ElementBasis& basis, const ElementDofs& p, const Coefficients& beta) {
    const AffinePair ph = combine(basis, p);
    Vec2 s;
    for (const auto& region : cut.regions) s += (beta.on(region.side) * region.area) * ph.on(region.side).gradient();
    return s * (1.0 / cut.area);
}

RTVelocity recover_velocity(const CutInfo& cut, const ElementBasis& basis, const ElementDofs& p, double fbar,
                            const Coefficients& beta) {
    RTVelocity u;
    u.barycenter = centroid(cut.vertices);
    u.fbar = fbar;
    u.c = 0.5 * fbar;
    const Vec2 at_center = mean_flux_density(cut, basis, p, beta) * -1.0;
    u.a = at_center.x - u.c * u.barycenter.x;
    u.b = at_center.y - u.c * u.barycenter.y;
    return u;
}

double edge_flux(const CutInfo& cut, const ElementBasis& basis, const ElementDofs& p, double fbar, int local_edge,
                 const Coefficients& beta) {
    if (local_edge < 0 || local_edge > 2) throw InvalidArgument("edge_flux: local edge index out of range");
    const AffinePair ph = combine(basis, p);
    const AffinePair& phi = basis.functions[local_edge];
    double source = 0.0, diffusion = 0.0;
    for (const auto& region : cut.regions) {
        source += region.area * phi.on(region.side)(region.centroid());
        diffusion += beta.on(region.side) * region.area *
                     dot(ph.on(region.side).gradient(), phi.on(region.side).gradient());
    }
    return fbar * source - diffusion;
}

ElementFluxes element_fluxes(const CutInfo& cut, const ElementBasis& basis, const ElementDofs& p, double fbar,
                             const Coefficients& beta) {
    return {edge_flux(cut, basis, p, fbar, 0, beta), edge_flux(cut, basis, p, fbar, 1, beta),
            edge_flux(cut, basis, p, fbar, 2, beta)};
}

ElementDofs gather(const Mesh& mesh, int element, std::span<const double> edge_values) {
    const auto& te = mesh.triangle_edges[element];
    return {edge_values[te[0]], edge_values[te[1]], edge_values[te[2]]};
}

double check_flux_continuity(const Mesh& mesh, const std::vector<ElementFluxes>& fluxes) {
    if (fluxes.size() != mesh.triangles.size()) throw InvalidArgument("check_flux_continuity: size mismatch");
    double worst = 0.0;
    for (int e = 0; e < mesh.num_edges(); ++e) {
        const auto [t1, t2] = mesh.edge_triangles[e];
        if (t2 < 0) continue;
        const double sum = fluxes[t1][mesh.local_edge(t1, e)] + fluxes[t2][mesh.local_edge(t2, e)];
        worst = std::max(worst, std::abs(sum));
    }
    return worst;
}

MixedPostprocess postprocess(const Mesh& mesh, const std::vector<CutInfo>& cuts,
                             const std::vector<ElementBasis>& bases, std::span<const double> p_dofs,
                             const std::vector<double>& fbar, const Coefficients& beta) {
    if (cuts.size() != mesh.triangles.size() || bases.size() != cuts.size() || fbar.size() != cuts.size() ||
        static_cast<int>(p_dofs.size()) != mesh.num_edges()) {
        throw InvalidArgument("postprocess: inconsistent sizes");
    }
    MixedPostprocess out;
    out.fbar = fbar;
    out.velocity.reserve(cuts.size());
    out.fluxes.reserve(cuts.size());
    for (int t = 0; t < mesh.num_triangles(); ++t) {
        const ElementDofs p = gather(mesh, t, p_dofs);
        out.velocity.push_back(recover_velocity(cuts[t], bases[t], p, fbar[t], beta));
        out.fluxes.push_back(element_fluxes(cuts[t], bases[t], p, fbar[t], beta));
    }
    return out;
}

void dump_velocity(const std::vector<RTVelocity>& velocity, std::ostream& os) {
    const auto old_precision = os.precision(17);
    for (std::size_t t = 0; t < velocity.size(); ++t) {
        const auto& u = velocity[t];
        os << t << ' ' << u.a << ' ' << u.b << ' ' << u.c << ' ' << u.fbar << '\n';
    }
    os.precision(old_precision);
}

}  // namespace iifem
