#pragma once

#include "iifem/assembly.hpp"
#include "iifem/basis.hpp"
#include "iifem/geometry.hpp"

#include <array>
#include <iosfwd>
#include <span>
#include <vector>

namespace iifem {

/// Lowest-order Raviart-Thomas field u(x, y) = (a + c x, b + c y) on one element.
struct RTVelocity {
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;
    Point barycenter;
    double fbar = 0.0;

    Vec2 operator()(const Point& p) const { return {a + c * p.x, b + c * p.y}; }
    double divergence() const { return 2.0 * c; }
};

using ElementDofs = std::array<double, 3>;
using ElementFluxes = std::array<double, 3>;

/// Element averages of the source; same quadrature as the CellMean load.
std::vector<double> element_mean_source(const Mesh& mesh, const std::vector<CutInfo>& cuts, const ScalarField& f);

/// Area-weighted average of beta grad(p_h) over the element.
Vec2 mean_flux_density(const CutInfo& cut, const ElementBasis& basis, const ElementDofs& p, const Coefficients& beta);

/// u_h(x) = -avg(beta grad p_h) + (fbar/2)(x - x_B).
RTVelocity recover_velocity(const CutInfo& cut, const ElementBasis& basis, const ElementDofs& p, double fbar,
                            const Coefficients& beta);

/// Outward flux through local edge i from the local residual:
/// integral(fbar phi_i) - integral(beta grad p_h . grad phi_i).
double edge_flux(const CutInfo& cut, const ElementBasis& basis, const ElementDofs& p, double fbar, int local_edge,
                 const Coefficients& beta);

ElementFluxes element_fluxes(const CutInfo& cut, const ElementBasis& basis, const ElementDofs& p, double fbar,
                             const Coefficients& beta);

/// Element-local view of a per-edge vector.
ElementDofs gather(const Mesh& mesh, int element, std::span<const double> edge_values);

/// Maximum over interior edges of |outward flux from T1 + outward flux from T2|.
double check_flux_continuity(const Mesh& mesh, const std::vector<ElementFluxes>& fluxes);

struct MixedPostprocess {
    std::vector<double> fbar;
    std::vector<RTVelocity> velocity;
    std::vector<ElementFluxes> fluxes;
};

/// Velocity and fluxes on every element from a solved pressure vector.
MixedPostprocess postprocess(const Mesh& mesh, const std::vector<CutInfo>& cuts,
                             const std::vector<ElementBasis>& bases, std::span<const double> p_dofs,
                             const std::vector<double>& fbar, const Coefficients& beta);

/// "t a b c fbar" per element.
void dump_velocity(const std::vector<RTVelocity>& velocity, std::ostream& os);

}  // namespace iifem
