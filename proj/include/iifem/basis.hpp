#pragma once

#include "iifem/geometry.hpp"

#include <array>
#include <vector>

namespace iifem {

/// Piecewise-constant diffusion coefficient.
struct Coefficients {
    double beta_minus = 1.0;
    double beta_plus = 1.0;

    double on(Side s) const { return s == Side::Plus ? beta_plus : beta_minus; }
    double rho() const { return beta_minus / beta_plus; }
};

/// a + b x + c y in physical coordinates.
struct AffineFn {
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;

    double operator()(const Point& p) const { return a + b * p.x + c * p.y; }
    Vec2 gradient() const { return {b, c}; }
};

/// One affine piece per side of the chord; both pieces coincide on
/// non-interface elements.
struct AffinePair {
    AffineFn plus;
    AffineFn minus;

    const AffineFn& on(Side s) const { return s == Side::Plus ? plus : minus; }
};

/// Local shape functions of one element; functions[k] has unit average on
/// local edge k and zero average on the other two.
struct ElementBasis {
    std::array<AffinePair, 3> functions;
    bool broken = false;
};

/// Determinant of the 6x6 interface system on the reference triangle
/// A(0,0), B(1,0), C(0,1) cut at D(x0,0), E(0,y0), with rho = beta-/beta+:
///
///   det = (x0^2 + y0^2) (rho (x0 y0 - 1) - x0 y0) / 4.
double reference_determinant(double x0, double y0, double rho);

/// Crouzeix-Raviart shape functions, phi_k(m_j) = delta_kj at edge midpoints.
ElementBasis build_standard_basis(const Triangle& tri);

/// Broken shape functions on an interface element: affine on each side of
/// the chord DE, continuous at D and E, with matching normal flux
/// beta+ d(phi+)/dn = beta- d(phi-)/dn, and unit edge averages.
///
/// Throws SingularSystem when elimination meets a pivot below 1e-14 times
/// the row norm.
ElementBasis build_broken_basis(const CutInfo& cut, const Coefficients& beta);

/// Standard basis on non-interface elements, broken basis on interface ones.
std::vector<ElementBasis> build_bases(const std::vector<CutInfo>& cuts, const Coefficients& beta);

struct PointValue {
    double value = 0.0;
    Vec2 gradient;
};

/// Evaluates the piece on the side of the chord containing `p`.
/// Throws OutOfDomain when p is outside the element.
PointValue evaluate(const AffinePair& fn, const CutInfo& cut, const Point& p);

/// beta- grad(minus).n - beta+ grad(plus).n across the chord. Zero on
/// non-interface elements.
double chord_flux_jump(const AffinePair& fn, const CutInfo& cut, const Coefficients& beta);

/// Exact average of a piecewise-affine function over a local edge.
double edge_average(const AffinePair& fn, const CutInfo& cut, int local_edge);

/// Sum of coefficient-weighted shape functions.
AffinePair combine(const ElementBasis& basis, const std::array<double, 3>& weights);

}  // namespace iifem
