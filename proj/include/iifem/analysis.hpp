#pragma once

#include "iifem/assembly.hpp"
#include "iifem/basis.hpp"
#include "iifem/geometry.hpp"
#include "iifem/mixed_fvm.hpp"

#include <optional>
#include <span>
#include <vector>

namespace iifem {

struct ExactSolution {
    ScalarField p;
    VectorField grad_p;
    /// u = -beta grad p.
    VectorField u;
};

/// -div(beta grad p) = f off the interface, [p] = [beta dp/dn] = 0 across it, p = g on the boundary.
struct ProblemSpec {
    Rect domain{-1.0, 1.0, -1.0, 1.0};
    Coefficients beta;
    LevelSet level_set;
    ScalarField source;
    ScalarField boundary;
    std::optional<ExactSolution> exact;
};

/// Circular interface of radius r0 on [-1,1]^2 with
///   p = r^3 / beta-                                   inside,
///   p = r^3 / beta+ + (1/beta- - 1/beta+) r0^3        outside,
/// so beta grad p = 3 r (x, y) on both sides and f = -9 r.
ProblemSpec circle_r3_problem(double r0, const Coefficients& beta);

/// Average of p over a mesh edge: 3-point Gauss on each piece after
/// splitting at the level-set root, if any.
double edge_average(const Mesh& mesh, const LevelSet& phi, int edge, const ScalarField& p);

/// Edge-average interpolant, one value per mesh edge.
std::vector<double> interpolate(const Mesh& mesh, const LevelSet& phi, const ScalarField& p);

/// ||p - p_h||_0 with p_h given by per-edge averages.
double l2_error(const Mesh& mesh, const std::vector<CutInfo>& cuts, const std::vector<ElementBasis>& bases,
                std::span<const double> p_dofs, const ScalarField& p);

/// Broken H1 norm (L2 plus gradient part) of p - p_h.
double h1_broken_error(const Mesh& mesh, const std::vector<CutInfo>& cuts, const std::vector<ElementBasis>& bases,
                       std::span<const double> p_dofs, const ScalarField& p, const VectorField& grad_p);

struct HdivError {
    double u_l2 = 0.0;
    double div_l2 = 0.0;
};

/// ||u - u_h||_0 and ||div u - div u_h||_0 = ||f - div u_h||_0.
HdivError hdiv_error(const Mesh& mesh, const std::vector<CutInfo>& cuts, const std::vector<RTVelocity>& velocity,
                     const VectorField& u, const ScalarField& f);

/// Least-squares slope of log(error) against log(h).
double fit_order(std::span<const double> hs, std::span<const double> errors);

/// log2(e_coarse / e_fine) / log2(h_coarse / h_fine).
double step_order(double h_coarse, double e_coarse, double h_fine, double e_fine);

}  // namespace iifem
