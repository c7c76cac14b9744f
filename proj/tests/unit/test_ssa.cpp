#include "ssann/errors.hpp"
#include "ssann/rng.hpp"
#include "ssann/ssa.hpp"
#include "support/expect_error.hpp"
#include "support/oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

using namespace ssann;
using support::expect_kind;

namespace {

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

ssa::ToeplitzCorrelation random_toeplitz(std::size_t m, std::uint64_t seed) {
    Rng rng(seed);
    ssa::ToeplitzCorrelation c;
    c.lags.resize(m);
    c.lags[0] = 1.0;
    for (std::size_t j = 1; j < m; ++j) c.lags[j] = rng.uniform(-0.9, 0.9) / static_cast<double>(j);
    return c;
}

} // namespace

TEST(LagCorrelation, AlternatingSeries) {
    const std::vector<double> x{1, -1, 1, -1};
    const auto c = ssa::lag_correlation(x, 2);
    ASSERT_EQ(c.window(), 2u);
    EXPECT_DOUBLE_EQ(c.lags[0], 1.0);
    EXPECT_DOUBLE_EQ(c.lags[1], -1.0);
    EXPECT_DOUBLE_EQ(c.at(0, 1), -1.0);
    EXPECT_DOUBLE_EQ(c.at(1, 0), -1.0);
}

TEST(LagCorrelation, StandardizedSeriesHasUnitLagZero) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto x = support::mixed_series(300, seed);
        EXPECT_NEAR(ssa::lag_correlation(x, 10).lags[0], 1.0, 1e-12);
    }
}

TEST(LagCorrelation, WhiteNoiseLagsAreSmall) {
    const std::size_t n = 10000;
    const double bound = 4.0 / std::sqrt(static_cast<double>(n));
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        Rng rng(seed);
        std::vector<double> x(n);
        for (double& v : x) v = rng.normal();
        const auto s = standardize(x);
        const auto c = ssa::lag_correlation(s, 35);
        for (std::size_t j = 1; j < 35; ++j) EXPECT_LT(std::abs(c.lags[j]), bound) << "seed " << seed << " lag " << j;
    }
}

TEST(LagCorrelation, WindowLimits) {
    const std::vector<double> x(10, 1.0);
    expect_kind(ErrorKind::WindowTooLarge, [&] { ssa::lag_correlation(x, 6); });
    expect_kind(ErrorKind::InvalidArgument, [&] { ssa::lag_correlation(x, 0); });
    EXPECT_NO_THROW(ssa::lag_correlation(x, 5));
    EXPECT_TRUE(ssa::window_exceeds_recommended(100, 34));
    EXPECT_FALSE(ssa::window_exceeds_recommended(105, 35));
}

TEST(Eigendecompose, IdentityMatrix) {
    const auto s = ssa::eigendecompose({{1.0, 0.0, 0.0, 0.0}});
    for (const double l : s.eigenvalues) EXPECT_DOUBLE_EQ(l, 1.0);
    for (std::size_t a = 0; a < 4; ++a)
        for (std::size_t b = 0; b < 4; ++b)
            EXPECT_NEAR(dot(s.eigenvectors[a], s.eigenvectors[b]), a == b ? 1.0 : 0.0, 1e-15);
}

TEST(Eigendecompose, TwoByTwo) {
    const auto s = ssa::eigendecompose({{1.0, 0.5}});
    EXPECT_NEAR(s.eigenvalues[0], 1.5, 1e-15);
    EXPECT_NEAR(s.eigenvalues[1], 0.5, 1e-15);
    const double r = 1.0 / std::sqrt(2.0);
    EXPECT_NEAR(s.eigenvectors[0][0], r, 1e-15);
    EXPECT_NEAR(s.eigenvectors[0][1], r, 1e-15);
    EXPECT_NEAR(s.eigenvectors[1][0], r, 1e-15);
    EXPECT_NEAR(s.eigenvectors[1][1], -r, 1e-15);
}

TEST(Eigendecompose, MatchesBisectionOracle) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto c = random_toeplitz(8, seed);
        const auto s = ssa::eigendecompose(c);
        const auto expected = support::bisection_eigenvalues(c.dense(), 8);
        for (std::size_t k = 0; k < 8; ++k) EXPECT_NEAR(s.eigenvalues[k], expected[k], 1e-9) << "seed " << seed;
    }
}

TEST(Eigendecompose, EigenEquationAndSignConvention) {
    for (std::uint64_t seed = 100; seed < 110; ++seed) {
        const auto c = random_toeplitz(12, seed);
        const auto s = ssa::eigendecompose(c);
        double trace = 0.0;
        for (std::size_t k = 0; k < 12; ++k) {
            const auto& v = s.eigenvectors[k];
            for (std::size_t r = 0; r < 12; ++r) {
                double cv = 0.0;
                for (std::size_t j = 0; j < 12; ++j) cv += c.at(r, j) * v[j];
                EXPECT_NEAR(cv, s.eigenvalues[k] * v[r], 1e-10);
            }
            double peak = 0.0;
            for (const double e : v) peak = std::max(peak, std::abs(e));
            for (const double e : v) {
                if (std::abs(e) >= peak * (1.0 - 1e-12)) {
                    EXPECT_GT(e, 0.0);
                    break;
                }
            }
            if (k > 0) EXPECT_GE(s.eigenvalues[k - 1], s.eigenvalues[k]);
            trace += s.eigenvalues[k];
        }
        EXPECT_NEAR(trace, 12.0, 1e-10);
    }
}

TEST(PrincipalComponents, HandExample) {
    const std::vector<double> x{1, 2, 3, 4};
    const double r = 1.0 / std::sqrt(2.0);
    ssa::SingularSpectrum s;
    s.eigenvalues = {1.5, 0.5};
    s.eigenvectors = {{r, r}, {r, -r}};
    const auto pcs = ssa::principal_components(x, s);
    ASSERT_EQ(pcs[0].size(), 3u);
    EXPECT_NEAR(pcs[0][0], 3 * r, 1e-15);
    EXPECT_NEAR(pcs[0][1], 5 * r, 1e-15);
    EXPECT_NEAR(pcs[0][2], 7 * r, 1e-15);
    for (const double a : pcs[1]) EXPECT_NEAR(a, -r, 1e-15);
}

TEST(PrincipalComponents, VarianceTracksEigenvalue) {
    const auto x = support::mixed_series(4000, 5);
    const auto d = ssa::decompose(x, 20);
    for (std::size_t k = 0; k < 3; ++k) {
        const auto& a = d.components.pcs[k];
        const double ms = dot(a, a) / static_cast<double>(a.size());
        EXPECT_NEAR(ms / d.spectrum.eigenvalues[k], 1.0, 0.10) << "component " << k;
    }
}

TEST(Reconstruction, WindowOneIsTheSeriesItself) {
    const auto x = support::mixed_series(50, 2);
    const auto d = ssa::decompose(x, 1);
    ASSERT_EQ(d.spectrum.eigenvalues.size(), 1u);
    EXPECT_NEAR(d.spectrum.eigenvalues[0], 1.0, 1e-12);
    EXPECT_DOUBLE_EQ(d.spectrum.eigenvectors[0][0], 1.0);
    for (std::size_t i = 0; i < x.size(); ++i) EXPECT_DOUBLE_EQ(d.components.rcs[0][i], x[i]);
}

TEST(Reconstruction, CompleteSumRecoversSeries) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto x = support::mixed_series(200 + 37 * seed, seed);
        const auto d = ssa::decompose(x, 5 + 3 * seed);
        EXPECT_LT(ssa::completeness_error(d.components, x), 1e-10);
        const auto full = ssa::partial_reconstruction(d.components, d.components.window);
        for (std::size_t i = 0; i < x.size(); ++i) EXPECT_NEAR(full[i], x[i], 1e-10);
    }
}

TEST(Reconstruction, PartialSumsTelescope) {
    const auto x = support::mixed_series(300, 9);
    const auto d = ssa::decompose(x, 12);
    for (std::size_t p = 1; p < 12; ++p) {
        const auto lo = ssa::partial_reconstruction(d.components, p);
        const auto hi = ssa::partial_reconstruction(d.components, p + 1);
        for (std::size_t i = 0; i < x.size(); ++i) EXPECT_NEAR(hi[i] - lo[i], d.components.rcs[p][i], 1e-12);
    }
    expect_kind(ErrorKind::BadComponentCount, [&] { ssa::partial_reconstruction(d.components, 0); });
    expect_kind(ErrorKind::BadComponentCount, [&] { ssa::partial_reconstruction(d.components, 13); });
}

TEST(Reconstruction, SinusoidLivesInLeadingPair) {
    std::vector<double> x(1000);
    for (std::size_t t = 0; t < x.size(); ++t) x[t] = std::sin(2.0 * M_PI * static_cast<double>(t) / 20.0);
    const auto s = standardize(x);
    const auto d = ssa::decompose(s, 40);
    const auto two = ssa::partial_reconstruction(d.components, 2);
    double resid = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) resid += (two[i] - s.values[i]) * (two[i] - s.values[i]);
    EXPECT_LT(resid / static_cast<double>(x.size()), 0.05);
}

TEST(Reconstruction, ResidualShrinksWithMoreComponents) {
    const auto x = support::mixed_series(500, 4);
    const auto d = ssa::decompose(x, 15);
    // the tail of the spectrum carries little variance, so the squared
    // residual of the partial sums should drop (up to noise) as p grows
    std::vector<double> resid;
    for (std::size_t p = 1; p <= 15; ++p) {
        const auto r = ssa::partial_reconstruction(d.components, p);
        double e = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) e += (r[i] - x[i]) * (r[i] - x[i]);
        resid.push_back(e / static_cast<double>(x.size()));
    }
    EXPECT_LT(resid.back(), 1e-20);
    EXPECT_LT(resid[9], resid[0]);
    EXPECT_LT(resid[4], resid[0]);
}

TEST(Reconstruction, MatchesDirectFormulas) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        Rng rng(seed + 500);
        const std::size_t n = 12 + rng.below(29);
        const std::size_t m = 2 + rng.below(5);
        const auto x = support::mixed_series(n, seed);
        const auto d = ssa::decompose(x, m);
        const auto ref = support::naive_ssa(x, m);
        for (std::size_t j = 0; j < m; ++j) EXPECT_NEAR(d.correlation.lags[j], ref.lags[j], 1e-12);
        for (std::size_t k = 0; k < m; ++k) {
            EXPECT_NEAR(d.spectrum.eigenvalues[k], ref.eigenvalues[k], 1e-10);
            for (std::size_t i = 0; i < n; ++i) EXPECT_NEAR(d.components.rcs[k][i], ref.rcs[k][i], 1e-10);
        }
    }
}

TEST(Reconstruction, ShiftStructureWithIdentityEigenvectors) {
    // with E = I, PC k is x shifted by k and RC k averages the x_t terms that PC k touches
    const std::vector<double> x{1, 2, 3, 4, 5, 6};
    ssa::SingularSpectrum s;
    s.eigenvalues = {1, 1, 1};
    s.eigenvectors = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
    const auto pcs = ssa::principal_components(x, s);
    EXPECT_EQ(pcs[1], (std::vector<double>{2, 3, 4, 5}));
    const auto set = ssa::reconstruct_all(pcs, s, x.size());
    // t = 0: only j = 0 is valid, average over one term
    EXPECT_DOUBLE_EQ(set.rcs[0][0], 1.0);
    EXPECT_DOUBLE_EQ(set.rcs[1][0], 0.0);
    // t = 2 is interior: three terms, each component contributes x_t / 3
    for (std::size_t k = 0; k < 3; ++k) EXPECT_DOUBLE_EQ(set.rcs[k][2], 1.0);
    EXPECT_LT(ssa::completeness_error(set, x), 1e-14);
}

TEST(SpectrumPlot, LogScaleAndClamping) {
    ssa::SingularSpectrum s;
    s.eigenvalues = {100.0, 1.0, 0.01, 0.0, -1e-17};
    s.eigenvectors.assign(5, std::vector<double>(5, 0.0));
    const auto pts = ssa::singular_spectrum_plot_data(s);
    EXPECT_EQ(pts[0].k, 1u);
    EXPECT_NEAR(pts[0].log10_lambda, 2.0, 1e-15);
    EXPECT_NEAR(pts[1].log10_lambda, 0.0, 1e-15);
    EXPECT_NEAR(pts[2].log10_lambda, -2.0, 1e-15);
    EXPECT_FALSE(pts[2].clamped);
    EXPECT_DOUBLE_EQ(pts[3].log10_lambda, -15.0);
    EXPECT_TRUE(pts[3].clamped);
    EXPECT_TRUE(pts[4].clamped);
}

TEST(Eigendecompose, LargeWindowsMatchReferenceSolver) {
    for (std::uint64_t seed = 0; seed < 4; ++seed) {
        const std::size_t m = 101 + 40 * seed;
        const auto x = support::mixed_series(3 * m, seed);
        const auto c = ssa::lag_correlation(x, m);
        const auto s = ssa::eigendecompose(c);
        EXPECT_EQ(s.solver, ssa::Eigensolver::TridiagonalQl);

        Eigen::MatrixXd dense(m, m);
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < m; ++j) dense(i, j) = c.at(i, j);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ref(dense);
        for (std::size_t k = 0; k < m; ++k) {
            EXPECT_NEAR(s.eigenvalues[k], ref.eigenvalues()(static_cast<long>(m - 1 - k)), 1e-10);
            if (k > 0) EXPECT_GE(s.eigenvalues[k - 1], s.eigenvalues[k]);
        }
        for (std::size_t a = 0; a < m; a += 7) {
            for (std::size_t b = 0; b < m; ++b)
                EXPECT_NEAR(dot(s.eigenvectors[a], s.eigenvectors[b]), a == b ? 1.0 : 0.0, 1e-12);
            for (std::size_t r = 0; r < m; ++r) {
                double cv = 0.0;
                for (std::size_t j = 0; j < m; ++j) cv += c.at(r, j) * s.eigenvectors[a][j];
                EXPECT_NEAR(cv, s.eigenvalues[a] * s.eigenvectors[a][r], 1e-11);
            }
        }
        EXPECT_LT(ssa::completeness_error(ssa::decompose(x, m).components, x), 1e-10);
    }
}

TEST(Eigendecompose, SmallWindowsUseJacobi) {
    EXPECT_EQ(ssa::eigendecompose(random_toeplitz(ssa::kJacobiMaxWindow, 3)).solver, ssa::Eigensolver::Jacobi);
    EXPECT_EQ(ssa::eigendecompose(random_toeplitz(ssa::kJacobiMaxWindow + 1, 3)).solver,
              ssa::Eigensolver::TridiagonalQl);
}

TEST(Eigendecompose, TridiagonalPathOnDiagonalAndRepeatedSpectra) {
    // identity: every vector is an eigenvector, the reduction must not break down
    ssa::ToeplitzCorrelation eye;
    eye.lags.assign(120, 0.0);
    eye.lags[0] = 1.0;
    const auto s = ssa::eigendecompose(eye);
    for (std::size_t k = 0; k < 120; ++k) {
        EXPECT_NEAR(s.eigenvalues[k], 1.0, 1e-14);
        EXPECT_NEAR(dot(s.eigenvectors[k], s.eigenvectors[k]), 1.0, 1e-14);
    }
}
