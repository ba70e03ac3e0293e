#include "iifem/quadrature.hpp"

#include <cmath>

namespace iifem {

std::array<QuadPoint, 6> triangle_rule(const Triangle& t) {
    constexpr double a1 = 0.44594849091596488632;
    constexpr double w1 = 0.22338158967801146570;
    constexpr double a2 = 0.09157621350977074346;
    constexpr double w2 = 0.10995174365532186764;
    const double area = std::abs(signed_area(t));
    const auto at = [&](double l0, double l1, double l2) {
        return Point{l0 * t[0].x + l1 * t[1].x + l2 * t[2].x, l0 * t[0].y + l1 * t[1].y + l2 * t[2].y};
    };
    const double b1 = 1.0 - 2.0 * a1;
    const double b2 = 1.0 - 2.0 * a2;
    return {{
        {at(a1, a1, b1), w1 * area},
        {at(a1, b1, a1), w1 * area},
        {at(b1, a1, a1), w1 * area},
        {at(a2, a2, b2), w2 * area},
        {at(a2, b2, a2), w2 * area},
        {at(b2, a2, a2), w2 * area},
    }};
}

std::array<QuadPoint, 3> segment_rule(const Point& a, const Point& b) {
    const double len = norm(b - a);
    const double g = std::sqrt(0.6);
    const auto at = [&](double s) { return a + (0.5 * (1.0 + s)) * (b - a); };
    return {{
        {at(-g), len * 5.0 / 18.0},
        {at(0.0), len * 8.0 / 18.0},
        {at(g), len * 5.0 / 18.0},
    }};
}

}  // namespace iifem
