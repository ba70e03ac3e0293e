#pragma once

#include "iifem/geometry.hpp"

#include <array>

namespace iifem {

struct QuadPoint {
    Point point;
    double weight;
};

/// Symmetric 6-point rule, exact for degree 4. Weights sum to the triangle area.
std::array<QuadPoint, 6> triangle_rule(const Triangle& t);

/// 3-point Gauss-Legendre on a segment. Weights sum to the segment length.
std::array<QuadPoint, 3> segment_rule(const Point& a, const Point& b);

template <class F>
double integrate(const Triangle& t, F&& f) {
    double s = 0.0;
    for (const auto& q : triangle_rule(t)) s += q.weight * f(q.point);
    return s;
}

}  // namespace iifem
