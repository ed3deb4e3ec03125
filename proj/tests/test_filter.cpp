#include <cmath>
#include <cstring>
#include <vector>

#include <gtest/gtest.h>

#include "f2p/filter.hpp"
#include "f2p/random.hpp"
#include "f2p/synthetic.hpp"

using f2p::apply_filter;
using f2p::apply_filter_pair;
using f2p::Block;
using f2p::Contour;
using f2p::gauss_legendre;
using f2p::IntervalSpec;
using f2p::make_pair_contours;
using f2p::make_single_contour;
using f2p::scalar_filter;
using f2p::SolverOptions;
using f2p::SparseSymMatrix;

TEST(Contours, SingleContourGeometry) {
    const Contour g = make_single_contour(11.8, 12.0, gauss_legendre(8));
    EXPECT_NEAR(g.center, 11.9, 1e-15);
    EXPECT_NEAR(g.radius, 0.1, 1e-15);
    const Contour u = make_single_contour(-1.0, 1.0, gauss_legendre(4));
    EXPECT_DOUBLE_EQ(u.center, 0.0);
    EXPECT_DOUBLE_EQ(u.radius, 1.0);
    EXPECT_THROW(make_single_contour(0.0, 0.0, gauss_legendre(2)), f2p::EmptyInterval);
}

TEST(Contours, PairContourGeometry) {
    const auto [l, r] = make_pair_contours({11.8, 12.0, 5.0}, gauss_legendre(8));
    EXPECT_NEAR(l.center, 7.0, 1e-12);
    EXPECT_NEAR(r.center, 16.8, 1e-12);
    EXPECT_DOUBLE_EQ(l.radius, 5.0);
    EXPECT_DOUBLE_EQ(r.radius, 5.0);

    const auto [l2, r2] = make_pair_contours({-1.0, 1.0, 1.0}, gauss_legendre(8));
    EXPECT_DOUBLE_EQ(l2.center, 0.0);  // circles coincide at the minimum radius
    EXPECT_DOUBLE_EQ(r2.center, 0.0);

    EXPECT_THROW(make_pair_contours({0.0, 4.0, 1.0}, gauss_legendre(8)),
                 f2p::CirclesDoNotCover);
}

TEST(ScalarFilter, CenterValueNearOne) {
    for (double r : {0.1, 1.0, 5.0}) {
        const Contour g{3.0, r, gauss_legendre(8)};
        const double h = scalar_filter(3.0, g);
        EXPECT_GE(h, 0.998);
        EXPECT_LE(h, 1.002);
        // q = 64 oracle agrees that the enclosed response is essentially 1
        const Contour g64{3.0, r, gauss_legendre(64)};
        EXPECT_NEAR(scalar_filter(3.0, g64), 1.0, 1e-12);
    }
}

TEST(ScalarFilter, FarFieldDecay) {
    const Contour g{0.0, 1.0, gauss_legendre(8)};
    const Contour oracle{0.0, 1.0, gauss_legendre(64)};
    EXPECT_LE(std::abs(scalar_filter(10.0, g)), 0.01);   // lambda = c + 10 r
    EXPECT_LE(std::abs(scalar_filter(-10.0, g)), 0.01);
    // monotone decay beyond 2r until the response bottoms out near the
    // quadrature floor; the q = 64 oracle sits at or below the q = 8 curve
    double prev = std::abs(scalar_filter(2.0, g));
    for (double lam = 2.5; lam <= 12.0; lam += 0.5) {
        const double cur = std::abs(scalar_filter(lam, g));
        if (prev > 1e-7)
            EXPECT_LT(cur, prev);
        else
            EXPECT_LE(cur, 1e-7);
        EXPECT_LE(std::abs(scalar_filter(lam, oracle)), std::abs(scalar_filter(lam, g)) + 1e-12);
        prev = cur;
    }
}

TEST(ApplyFilter, DiagonalActsAsScalarFilter) {
    const SparseSymMatrix a = f2p::diagonal_matrix(std::vector<double>{1.0, 2.0, 3.0});
    const Contour g = make_single_contour(1.5, 2.5, gauss_legendre(8));
    Block y(3, 1);
    y(0, 0) = y(1, 0) = y(2, 0) = 1.0;
    SolverOptions opt;
    const Block z = apply_filter(a, y, g, opt);
    for (int i = 0; i < 3; ++i) {
        const double h = scalar_filter(i + 1.0, g);
        EXPECT_NEAR(z(i, 0), h, 1e-12);
    }
    EXPECT_NEAR(z(1, 0), 1.0, 2e-3);   // enclosed eigenvalue passes
    EXPECT_LE(std::abs(z(0, 0)), 0.7);  // neighbors attenuated
}

TEST(ApplyFilter, DiagonalEquivariance) {
    std::vector<double> d{0.5, 1.5, 2.5, 3.5, 4.5, 5.5};
    const SparseSymMatrix a = f2p::diagonal_matrix(d);
    const Contour g = make_single_contour(2.0, 4.0, gauss_legendre(8));
    const Block y = f2p::random_block(6, 3, 77);
    SolverOptions opt;
    const Block z = apply_filter(a, y, g, opt);
    for (int j = 0; j < 3; ++j)
        for (int i = 0; i < 6; ++i)
            EXPECT_NEAR(z(i, j), scalar_filter(d[i], g) * y(i, j), 10.0 * opt.tol);
}

TEST(ApplyFilter, ZeroBlockStaysZero) {
    const SparseSymMatrix a = f2p::diagonal_matrix(std::vector<double>{1.0, 2.0, 3.0});
    const Contour g = make_single_contour(1.5, 2.5, gauss_legendre(4));
    const Block z = apply_filter(a, Block(3, 2), g, SolverOptions{});
    for (std::size_t i = 0; i < z.size(); ++i) EXPECT_EQ(z.data()[i], 0.0);
}

TEST(ApplyFilter, EmptyEnclosureAttenuates) {
    const SparseSymMatrix a = f2p::diagonal_matrix(std::vector<double>{1.0, 2.0, 3.0});
    const Contour g = make_single_contour(10.0, 12.0, gauss_legendre(8));
    Block y(3, 1);
    y(0, 0) = y(1, 0) = y(2, 0) = 1.0;
    const Block z = apply_filter(a, y, g, SolverOptions{});
    EXPECT_LE(f2p::max_abs(z), 1e-2 * 1.0);
}

TEST(ApplyFilterPair, ComposedEqualsProductOfScalars) {
    std::vector<double> d{1.0, 2.0, 2.9, 3.4, 4.2, 6.0, 8.5};
    const SparseSymMatrix a = f2p::diagonal_matrix(d);
    const auto [l, r] = make_pair_contours({2.5, 3.5, 2.0}, gauss_legendre(8));
    const int n = static_cast<int>(d.size());
    Block y(n, 1);
    for (int i = 0; i < n; ++i) y(i, 0) = 1.0;
    SolverOptions opt;
    const Block z = apply_filter_pair(a, y, l, r, opt);
    for (int i = 0; i < n; ++i) {
        const double product = scalar_filter(d[i], l) * scalar_filter(d[i], r);
        EXPECT_NEAR(z(i, 0), product, 10.0 * opt.tol);
    }
}

TEST(ApplyFilterPair, InIntervalResponseNearOne) {
    // r = 2 (b - a): the composed response inside (a, b) stays close to 1
    const double a_lo = 2.5, b_hi = 3.5;
    const auto [l, r] = make_pair_contours({a_lo, b_hi, 2.0}, gauss_legendre(8));
    for (double lam : {2.6, 3.0, 3.4}) {
        const double composed = scalar_filter(lam, l) * scalar_filter(lam, r);
        EXPECT_NEAR(composed, 1.0, 2e-2);
    }
}

TEST(ApplyFilterPair, LeftOnlyEigenvalueSuppressed) {
    // lambda inside Gamma_L but left of (a, b): composed response falls well
    // below the single-circle response
    const double a_lo = 2.5, b_hi = 3.5, r = 2.0;
    const auto [l, right] = make_pair_contours({a_lo, b_hi, r}, gauss_legendre(8));
    for (double lam = b_hi - 2.0 * r + 0.2; lam < a_lo - 0.1; lam += 0.3) {
        const double single = std::abs(scalar_filter(lam, l));
        const double composed = std::abs(scalar_filter(lam, l) * scalar_filter(lam, right));
        EXPECT_LE(composed, 0.5 * single);
    }
}

TEST(ApplyFilter, IdempotentOnEnclosedEigenvector) {
    std::vector<double> d{1.0, 3.0, 5.0};
    const SparseSymMatrix a = f2p::diagonal_matrix(d);
    const Contour g = make_single_contour(2.0, 4.0, gauss_legendre(8));
    Block v(3, 1);
    v(1, 0) = 1.0;  // eigenvector of lambda = 3, well inside
    SolverOptions opt;
    const Block once = apply_filter(a, v, g, opt);
    const Block twice = apply_filter(a, once, g, opt);
    const double h = scalar_filter(3.0, g);
    double diff = 0.0;
    for (int i = 0; i < 3; ++i) diff += (twice(i, 0) - once(i, 0)) * (twice(i, 0) - once(i, 0));
    EXPECT_LE(std::sqrt(diff), std::abs(h * h - h) + 5e-10);
}

TEST(ApplyFilter, ParallelMatchesSequentialBitwise) {
    const SparseSymMatrix a = f2p::laplacian_1d(40);
    const Contour g = make_single_contour(1.0, 2.0, gauss_legendre(8));
    const Block y = f2p::random_block(40, 3, 5);
    SolverOptions seq;
    SolverOptions par;
    par.parallel = true;
    par.threads = 4;
    f2p::FilterStats s1, s2;
    const Block z1 = apply_filter(a, y, g, seq, &s1);
    const Block z2 = apply_filter(a, y, g, par, &s2);
    ASSERT_EQ(z1.size(), z2.size());
    EXPECT_EQ(std::memcmp(z1.data(), z2.data(), z1.size() * sizeof(double)), 0);
    EXPECT_EQ(s1.max_iterations, s2.max_iterations);
    EXPECT_EQ(s1.total_iterations, s2.total_iterations);
    EXPECT_EQ(s1.systems, 8 * 3);
}
