#pragma once

#include "ssann/series.hpp"

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace ssann::ssa {

/// Lagged correlations c_0 .. c_{M-1}; they fill the diagonals of a symmetric
/// Toeplitz matrix C with C(j, k) = c_{|j-k|}.
struct ToeplitzCorrelation {
    std::vector<double> lags;

    [[nodiscard]] std::size_t window() const noexcept { return lags.size(); }
    [[nodiscard]] double at(std::size_t row, std::size_t col) const {
        return lags[row > col ? row - col : col - row];
    }
    /// Dense row-major M x M copy.
    [[nodiscard]] std::vector<double> dense() const;
};

enum class Eigensolver { Jacobi, TridiagonalQl };
std::string_view to_string(Eigensolver s) noexcept;

/// Eigenpairs of the correlation matrix, eigenvalues descending.
/// eigenvectors[k] is the k-th empirical orthogonal function (length M). Its
/// first entry of (numerically) largest magnitude is positive.
struct SingularSpectrum {
    std::vector<double> eigenvalues;
    std::vector<std::vector<double>> eigenvectors;
    Eigensolver solver = Eigensolver::Jacobi;
    std::size_t iterations = 0;  // Jacobi sweeps or QL steps

    [[nodiscard]] std::size_t window() const noexcept { return eigenvalues.size(); }
};

struct ComponentSet {
    std::vector<std::vector<double>> pcs;  // M series of length N - M + 1
    std::vector<std::vector<double>> rcs;  // M series of length N
    std::size_t length = 0;                // N
    std::size_t window = 0;                // M
};

struct Decomposition {
    ToeplitzCorrelation correlation;
    SingularSpectrum spectrum;
    ComponentSet components;
};

struct SpectrumPoint {
    std::size_t k = 0;  // 1-based rank
    double log10_lambda = 0.0;
    bool clamped = false;
};

inline constexpr double kEigenvalueFloor = 1e-15;
inline constexpr std::size_t kMaxJacobiSweeps = 100;
inline constexpr double kJacobiTolerance = 1e-12;
/// Larger windows go through tridiagonal QL, which is several times cheaper.
inline constexpr std::size_t kJacobiMaxWindow = 100;
inline constexpr std::size_t kMaxQlIterations = 60;

/// c_j = (N - j)^-1 sum_{i} x_i x_{i+j} for 0 <= j < M. Requires 1 <= M <= N/2.
ToeplitzCorrelation lag_correlation(std::span<const double> series, std::size_t window);
inline ToeplitzCorrelation lag_correlation(const StandardizedSeries& series, std::size_t window) {
    return lag_correlation(std::span<const double>(series.values), window);
}

/// True when M exceeds N/3, past which the lag estimates get noisy.
[[nodiscard]] bool window_exceeds_recommended(std::size_t length, std::size_t window) noexcept;

/// Cyclic Jacobi on the dense matrix for M <= kJacobiMaxWindow. Stops when the
/// off-diagonal Frobenius norm falls to kJacobiTolerance * ||C||_F; throws
/// ConvergenceFailure after kMaxJacobiSweeps sweeps. Larger windows use
/// Householder tridiagonalization and implicit QL (ConvergenceFailure after
/// kMaxQlIterations steps on one eigenvalue).
SingularSpectrum eigendecompose(const ToeplitzCorrelation& corr);

/// a^k_i = sum_j x_{i+j} E^k_j for i = 0 .. N - M (0-based). Returns one row per component.
std::vector<std::vector<double>> principal_components(std::span<const double> series,
                                                      const SingularSpectrum& spectrum);

/// Diagonal averaging of one PC against its eigenvector. Each output sample
/// averages every available a_{i-j} E_j term, which is M in the interior and
/// fewer near both ends.
std::vector<double> reconstruct_component(std::span<const double> pc, std::span<const double> eigvec,
                                          std::size_t length, std::size_t window);

ComponentSet reconstruct_all(std::vector<std::vector<double>> pcs, const SingularSpectrum& spectrum,
                             std::size_t length);

/// Sum of the first p reconstructed components.
std::vector<double> partial_reconstruction(const ComponentSet& components, std::size_t p);

std::vector<SpectrumPoint> singular_spectrum_plot_data(const SingularSpectrum& spectrum);

/// Full pipeline: correlations, eigenpairs, PCs and RCs.
Decomposition decompose(std::span<const double> series, std::size_t window);
inline Decomposition decompose(const StandardizedSeries& series, std::size_t window) {
    return decompose(std::span<const double>(series.values), window);
}

/// max_i |sum_k rc_k(i) - series(i)|
double completeness_error(const ComponentSet& components, std::span<const double> series);

} // namespace ssann::ssa
