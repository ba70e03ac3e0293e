// Oracles and generators shared by the unit tests and the acceptance suite.
#pragma once

#include "iifem/basis.hpp"
#include "iifem/geometry.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <random>

namespace iifem::testing {

using Matrix6 = std::array<std::array<double, 6>, 6>;

/// The 6x6 interface matrix on the reference triangle A(0,0), B(1,0), C(0,1)
/// cut at D(x0,0), E(0,y0), unknowns (a0,b0,c0,a1,b1,c1) for the plus and
/// minus pieces, written out row by row.
inline Matrix6 reference_matrix(double x0, double y0, double rho) {
    return {{
        {1, 0.5, 0.5, 0, 0, 0},
        {1 - y0, 0, 0.5 * (1 - y0 * y0), y0, 0, 0.5 * y0 * y0},
        {1 - x0, 0.5 * (1 - x0 * x0), 0, x0, 0.5 * x0 * x0, 0},
        {-1, -x0, 0, 1, x0, 0},
        {-1, 0, -y0, 1, 0, y0},
        {0, -y0, -x0, 0, rho * y0, rho * x0},
    }};
}

/// Leibniz expansion over all 720 permutations.
inline double leibniz_determinant(const Matrix6& m) {
    std::array<int, 6> perm;
    std::iota(perm.begin(), perm.end(), 0);
    double det = 0.0;
    do {
        int inversions = 0;
        for (int i = 0; i < 6; ++i) {
            for (int j = i + 1; j < 6; ++j) inversions += perm[i] > perm[j];
        }
        double term = inversions % 2 ? -1.0 : 1.0;
        for (int i = 0; i < 6; ++i) term *= m[i][perm[i]];
        det += term;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return det;
}

/// Interface cut of `tri` isolating vertex `iso` with the chord ends at
/// parameters s, t in (0,1) along the two edges leaving it.
inline CutInfo chord_cut(const Triangle& tri, int iso, double s, double t, Side iso_side) {
    const int a = (iso + 1) % 3, b = (iso + 2) % 3;
    std::array<int, 3> sign{};
    const int si = iso_side == Side::Minus ? -1 : 1;
    sign[iso] = si;
    sign[a] = sign[b] = -si;
    // Edge (iso+2)%3 joins iso and a; edge (iso+1)%3 joins b and iso.
    const Point d = tri[iso] + s * (tri[a] - tri[iso]);
    const Point e = tri[iso] + t * (tri[b] - tri[iso]);
    return make_interface_cut(tri, sign, (iso + 2) % 3, d, (iso + 1) % 3, e);
}

struct RandomCut {
    CutInfo cut;
    Coefficients beta;
};

/// Random element of a uniform mesh on [-1,1]^2 with a random chord and a
/// coefficient ratio log-uniform in [1e-3, 1e3].
inline RandomCut random_cut(std::mt19937_64& rng, const Mesh& mesh) {
    std::uniform_int_distribution<int> pick_t(0, mesh.num_triangles() - 1);
    std::uniform_int_distribution<int> pick_v(0, 2);
    std::uniform_real_distribution<double> param(0.02, 0.98);
    std::uniform_real_distribution<double> log_rho(-3.0, 3.0);
    std::bernoulli_distribution coin;
    const Triangle tri = mesh.triangle(pick_t(rng));
    const int iso = pick_v(rng);
    const double s = param(rng), t = param(rng);
    const Side side = coin(rng) ? Side::Minus : Side::Plus;
    const double rho = std::pow(10.0, log_rho(rng));
    const double beta_plus = std::pow(10.0, log_rho(rng) / 3.0);
    return {chord_cut(tri, iso, s, t, side), {rho * beta_plus, beta_plus}};
}

/// Magnitude of an affine pair over an element of diameter `diam`.
inline double scale_of(const AffinePair& f, double diam) {
    const auto one = [&](const AffineFn& g) { return std::abs(g.a) + (std::abs(g.b) + std::abs(g.c)) * diam; };
    return std::max({1.0, one(f.plus), one(f.minus)});
}

inline double diameter(const Triangle& t) {
    return std::max({norm(t[1] - t[0]), norm(t[2] - t[1]), norm(t[0] - t[2])});
}

/// Average of a piecewise-affine function over local edge k computed without
/// CutInfo::edge_pieces: split at the chord line, 3-point Gauss per piece.
inline double independent_edge_average(const AffinePair& fn, const CutInfo& cut, int k) {
    const Point a = cut.vertices[(k + 1) % 3], b = cut.vertices[(k + 2) % 3];
    std::vector<double> ts{0.0, 1.0};
    if (cut.is_interface()) {
        const Vec2 n = cut.normal;
        const double fa = dot(n, a - cut.d), fb = dot(n, b - cut.d);
        if (fa * fb < 0.0) ts.insert(ts.begin() + 1, fa / (fa - fb));
    }
    static const double g = std::sqrt(0.6);
    double sum = 0.0;
    for (std::size_t i = 0; i + 1 < ts.size(); ++i) {
        const Point p0 = a + ts[i] * (b - a), p1 = a + ts[i + 1] * (b - a);
        const Point mid = midpoint(p0, p1);
        const AffineFn& piece = fn.on(cut.side_of(mid));
        const double len = (ts[i + 1] - ts[i]);
        const double w[3] = {5.0 / 9, 8.0 / 9, 5.0 / 9};
        const double x[3] = {-g, 0.0, g};
        for (int q = 0; q < 3; ++q) sum += 0.5 * len * w[q] * piece(mid + 0.5 * x[q] * (p1 - p0));
    }
    return sum;
}

}  // namespace iifem::testing
