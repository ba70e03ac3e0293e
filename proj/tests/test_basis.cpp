#include "iifem/basis.hpp"
#include "iifem/errors.hpp"
#include "support.hpp"

#include <Eigen/Dense>
#include <gtest/gtest.h>

#include <random>

using namespace iifem;
using namespace iifem::testing;

namespace {

const Triangle reference{{{0, 0}, {1, 0}, {0, 1}}};

void expect_affine_near(const AffineFn& f, double a, double b, double c, double tol) {
    EXPECT_NEAR(f.a, a, tol);
    EXPECT_NEAR(f.b, b, tol);
    EXPECT_NEAR(f.c, c, tol);
}

}  // namespace

TEST(ReferenceDeterminant, Examples) {
    EXPECT_NEAR(reference_determinant(0.5, 0.5, 1), -0.125, 1e-15);
    EXPECT_NEAR(reference_determinant(0.5, 0.5, 2), -0.21875, 1e-15);
    for (double rho : {0.001, 1.0, 1000.0}) {
        EXPECT_NEAR(reference_determinant(1, 1, rho), -0.5, 1e-15);
        EXPECT_NEAR(leibniz_determinant(reference_matrix(1, 1, rho)), -0.5, 1e-12);
    }
    EXPECT_NEAR(leibniz_determinant(reference_matrix(0.5, 0.5, 1)), -0.125, 1e-15);
    EXPECT_NEAR(leibniz_determinant(reference_matrix(0.5, 0.5, 2)), -0.21875, 1e-15);
}

TEST(ReferenceDeterminant, MatchesBruteForceAndIsNegative) {
    for (int i = 1; i <= 20; ++i) {
        for (int j = 1; j <= 20; ++j) {
            for (double rho : {1e-3, 1e-1, 1.0, 10.0, 1e3}) {
                const double x0 = 0.05 * i, y0 = 0.05 * j;
                const double formula = reference_determinant(x0, y0, rho);
                const double brute = leibniz_determinant(reference_matrix(x0, y0, rho));
                EXPECT_LT(formula, 0.0);
                EXPECT_NEAR(formula, brute, 1e-12 * std::abs(brute)) << x0 << ' ' << y0 << ' ' << rho;
            }
        }
    }
}

TEST(ReferenceDeterminant, RejectsOutOfRange) {
    EXPECT_THROW(reference_determinant(0, 0.5, 1), InvalidArgument);
    EXPECT_THROW(reference_determinant(0.5, 1.5, 1), InvalidArgument);
    EXPECT_THROW(reference_determinant(0.5, 0.5, 0), InvalidArgument);
}

TEST(StandardBasis, HypotenuseFunction) {
    const ElementBasis b = build_standard_basis(reference);
    EXPECT_FALSE(b.broken);
    expect_affine_near(b.functions[0].plus, -1, 2, 2, 1e-14);
    expect_affine_near(b.functions[0].minus, -1, 2, 2, 1e-14);
}

TEST(StandardBasis, MidpointDualityAndPartitionOfUnity) {
    const Triangle tri{{{0.3, -0.2}, {1.1, 0.1}, {0.2, 0.9}}};
    const ElementBasis b = build_standard_basis(tri);
    AffineFn sum;
    for (int k = 0; k < 3; ++k) {
        for (int j = 0; j < 3; ++j) {
            const Point m = midpoint(tri[(j + 1) % 3], tri[(j + 2) % 3]);
            EXPECT_NEAR(b.functions[k].plus(m), k == j ? 1.0 : 0.0, 1e-14);
        }
        sum.a += b.functions[k].plus.a;
        sum.b += b.functions[k].plus.b;
        sum.c += b.functions[k].plus.c;
    }
    expect_affine_near(sum, 1, 0, 0, 1e-14);
}

TEST(StandardBasis, RejectsDegenerate) {
    EXPECT_THROW(build_standard_basis({{{0, 0}, {1, 1}, {2, 2}}}), InvalidArgument);
}

TEST(BrokenBasis, ReferenceCaseMatchesIndependentSolve) {
    // D = (0.35, 0), E = (0, 0.65), A isolated on the minus side.
    const double x0 = 0.35, y0 = 0.65;
    const Coefficients beta{1.0, 1000.0};
    const CutInfo cut = chord_cut(reference, 0, x0, y0, Side::Minus);
    const ElementBasis b = build_broken_basis(cut, beta);
    ASSERT_TRUE(b.broken);

    const Matrix6 a = reference_matrix(x0, y0, beta.rho());
    Eigen::Matrix<double, 6, 6> m;
    for (int i = 0; i < 6; ++i) {
        for (int j = 0; j < 6; ++j) m(i, j) = a[i][j];
    }
    const Eigen::FullPivLU<Eigen::Matrix<double, 6, 6>> lu(m);
    // Rows 0..2 of the matrix are the averages over e1 = BC, e2 = CA, e3 = AB,
    // which are local edges 0, 1, 2.
    for (int k = 0; k < 3; ++k) {
        Eigen::Matrix<double, 6, 1> rhs = Eigen::Matrix<double, 6, 1>::Zero();
        rhs(k) = 1.0;
        const Eigen::Matrix<double, 6, 1> x = lu.solve(rhs);
        expect_affine_near(b.functions[k].plus, x(0), x(1), x(2), 1e-10);
        expect_affine_near(b.functions[k].minus, x(3), x(4), x(5), 1e-10);
    }
}

TEST(BrokenBasis, PropertiesOnRandomCuts) {
    std::mt19937_64 rng(20240611);
    const Mesh mesh = build_uniform_mesh(8, 8, {-1, 1, -1, 1});
    for (int trial = 0; trial < 200; ++trial) {
        const auto [cut, beta] = random_cut(rng, mesh);
        const ElementBasis b = build_broken_basis(cut, beta);
        const double diam = diameter(cut.vertices);
        AffinePair sum;
        for (int k = 0; k < 3; ++k) {
            const AffinePair& f = b.functions[k];
            const double scale = scale_of(f, diam);
            for (int j = 0; j < 3; ++j) {
                EXPECT_NEAR(edge_average(f, cut, j), k == j ? 1.0 : 0.0, 1e-12 * scale);
                EXPECT_NEAR(independent_edge_average(f, cut, j), k == j ? 1.0 : 0.0, 1e-12 * scale);
            }
            EXPECT_NEAR(f.plus(cut.d), f.minus(cut.d), 1e-12 * scale);
            EXPECT_NEAR(f.plus(cut.e), f.minus(cut.e), 1e-12 * scale);
            const double grads = std::max(norm(f.plus.gradient()), norm(f.minus.gradient()));
            EXPECT_LE(std::abs(chord_flux_jump(f, cut, beta)),
                      1e-12 * (beta.beta_plus + beta.beta_minus) * std::max(grads, 1.0 / diam));
            sum.plus.a += f.plus.a, sum.plus.b += f.plus.b, sum.plus.c += f.plus.c;
            sum.minus.a += f.minus.a, sum.minus.b += f.minus.b, sum.minus.c += f.minus.c;
        }
        expect_affine_near(sum.plus, 1, 0, 0, 1e-12 / diam);
        expect_affine_near(sum.minus, 1, 0, 0, 1e-12 / diam);
    }
}

TEST(BrokenBasis, UnitRatioDegeneratesToStandard) {
    std::mt19937_64 rng(7);
    const Mesh mesh = build_uniform_mesh(4, 4, {-1, 1, -1, 1});
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
        auto [cut, beta] = random_cut(rng, mesh);
        beta.beta_minus = beta.beta_plus;
        const ElementBasis broken = build_broken_basis(cut, beta);
        const ElementBasis standard = build_standard_basis(cut.vertices);
        const double diam = diameter(cut.vertices);
        for (int k = 0; k < 3; ++k) {
            const AffineFn& s = standard.functions[k].plus;
            const double tol = 1e-12 * scale_of(standard.functions[k], diam) / diam;
            for (const AffineFn* piece : {&broken.functions[k].plus, &broken.functions[k].minus}) {
                expect_affine_near(*piece, s.a, s.b, s.c, tol);
            }
            for (int j = 0; j < 3; ++j) {
                EXPECT_NEAR(edge_average(broken.functions[k], cut, j), edge_average(standard.functions[k], cut, j),
                            1e-12);
            }
        }
        for (int p = 0; p < 50; ++p) {
            double l1 = u(rng), l2 = u(rng);
            if (l1 + l2 > 1.0) l1 = 1.0 - l1, l2 = 1.0 - l2;
            const Triangle& t = cut.vertices;
            const Point x = t[0] + l1 * (t[1] - t[0]) + l2 * (t[2] - t[0]);
            for (int k = 0; k < 3; ++k) {
                EXPECT_NEAR(evaluate(broken.functions[k], cut, x).value, standard.functions[k].plus(x), 1e-12);
            }
        }
    }
}

TEST(BrokenBasis, ConstantAveragesGiveConstant) {
    const CutInfo cut = chord_cut(reference, 1, 0.3, 0.6, Side::Plus);
    const ElementBasis b = build_broken_basis(cut, {1000.0, 1.0});
    const AffinePair f = combine(b, {2.5, 2.5, 2.5});
    expect_affine_near(f.plus, 2.5, 0, 0, 1e-11);
    expect_affine_near(f.minus, 2.5, 0, 0, 1e-11);
}

TEST(BrokenBasis, ChordThroughVertex) {
    // D at vertex A, E at the midpoint of BC.
    const CutInfo cut = make_interface_cut(reference, {0, 1, -1}, 1, reference[0], 0, {0.5, 0.5});
    const Coefficients beta{1.0, 1000.0};
    const ElementBasis b = build_broken_basis(cut, beta);
    for (int k = 0; k < 3; ++k) {
        for (int j = 0; j < 3; ++j) EXPECT_NEAR(edge_average(b.functions[k], cut, j), k == j, 1e-12);
        EXPECT_NEAR(b.functions[k].plus(cut.d), b.functions[k].minus(cut.d), 1e-12);
        EXPECT_NEAR(b.functions[k].plus(cut.e), b.functions[k].minus(cut.e), 1e-12);
    }
}

TEST(BuildBases, PicksBasisPerElement) {
    const Mesh mesh = build_uniform_mesh(8, 8, {-1, 1, -1, 1});
    const LevelSet phi = [](const Point& p) { return p.x * p.x + p.y * p.y - 0.25; };
    const auto cuts = classify_elements(mesh, phi);
    const auto bases = build_bases(cuts, {1.0, 1000.0});
    ASSERT_EQ(bases.size(), cuts.size());
    for (std::size_t t = 0; t < cuts.size(); ++t) EXPECT_EQ(bases[t].broken, cuts[t].is_interface());
}

TEST(Evaluate, ConstantAndPieces) {
    const CutInfo cut = chord_cut(reference, 0, 0.5, 0.5, Side::Minus);
    const AffinePair c{{3, 0, 0}, {3, 0, 0}};
    const auto v = evaluate(c, cut, {0.2, 0.2});
    EXPECT_EQ(v.value, 3.0);
    EXPECT_EQ(v.gradient, (Vec2{0, 0}));

    const AffinePair f{{1, 2, 3}, {4, 5, 6}};
    EXPECT_EQ(evaluate(f, cut, {0.6, 0.3}).gradient, (Vec2{2, 3}));
    EXPECT_EQ(evaluate(f, cut, {0.1, 0.1}).gradient, (Vec2{5, 6}));
    EXPECT_EQ(evaluate(f, cut, cut.d).gradient, (Vec2{2, 3}));  // chord points use the plus piece
}

TEST(Evaluate, ContinuityAtChordEnds) {
    const CutInfo cut = chord_cut(reference, 2, 0.4, 0.7, Side::Plus);
    const ElementBasis b = build_broken_basis(cut, {1.0, 1000.0});
    for (const auto& f : b.functions) {
        EXPECT_NEAR(f.plus(cut.d), f.minus(cut.d), 1e-12);
        EXPECT_NEAR(evaluate(f, cut, cut.e).value, f.minus(cut.e), 1e-12);
    }
}

TEST(Evaluate, OutsideThrows) {
    const CutInfo cut = make_plain_cut(reference, Side::Plus);
    const AffinePair f{{1, 0, 0}, {1, 0, 0}};
    EXPECT_THROW(evaluate(f, cut, {0.8, 0.8}), OutOfDomain);
    EXPECT_THROW(evaluate(f, cut, {-0.01, 0.5}), OutOfDomain);
    EXPECT_NO_THROW(evaluate(f, cut, {0.5, 0.5}));
}

TEST(ChordFluxJump, HandExample) {
    // Vertical chord x = 0.25 with the plus side to the right: normal (1, 0).
    const CutInfo cut = chord_cut(reference, 1, 0.75, 0.75, Side::Plus);
    ASSERT_NEAR(cut.normal.x, 1.0, 1e-15);
    ASSERT_NEAR(cut.normal.y, 0.0, 1e-15);
    const AffinePair f{{0, 1, 0}, {0, 0, 0}};
    EXPECT_NEAR(chord_flux_jump(f, cut, {1.0, 1.0}), -1.0, 1e-15);
    EXPECT_EQ(chord_flux_jump(f, make_plain_cut(reference, Side::Plus), {1.0, 1.0}), 0.0);
}

TEST(ChordFluxJump, UnitRatioMeansNoGradientJump) {
    const CutInfo cut = chord_cut(reference, 0, 0.3, 0.8, Side::Minus);
    const ElementBasis b = build_broken_basis(cut, {2.0, 2.0});
    for (const auto& f : b.functions) EXPECT_NEAR(chord_flux_jump(f, cut, {2.0, 2.0}), 0.0, 1e-12);
}
