#include "ssann/ssa.hpp"

#include "ssann/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace ssann::ssa {

std::vector<double> ToeplitzCorrelation::dense() const {
    const std::size_t m = window();
    std::vector<double> out(m * m);
    for (std::size_t r = 0; r < m; ++r) {
        for (std::size_t c = 0; c < m; ++c) {
            out[r * m + c] = at(r, c);
        }
    }
    return out;
}

bool window_exceeds_recommended(std::size_t length, std::size_t window) noexcept {
    return 3 * window > length;
}

ToeplitzCorrelation lag_correlation(std::span<const double> series, std::size_t window) {
    const std::size_t n = series.size();
    if (window == 0) {
        throw Error(ErrorKind::InvalidArgument, "window must be at least 1");
    }
    if (2 * window > n) {
        throw Error(ErrorKind::WindowTooLarge, "window " + std::to_string(window) +
                                                   " exceeds half the series length " + std::to_string(n));
    }
    ToeplitzCorrelation corr;
    corr.lags.resize(window);
    for (std::size_t j = 0; j < window; ++j) {
        double sum = 0.0;
        for (std::size_t i = 0; i + j < n; ++i) {
            sum += series[i] * series[i + j];
        }
        corr.lags[j] = sum / static_cast<double>(n - j);
    }
    return corr;
}

namespace {

// Makes the first entry whose magnitude is within a relative 1e-12 of the
// largest magnitude positive. The slack keeps the choice stable when two
// entries are equal in exact arithmetic but differ in the last bit.
void fix_sign(std::vector<double>& v) {
    double peak = 0.0;
    for (const double x : v) peak = std::max(peak, std::abs(x));
    for (const double x : v) {
        if (std::abs(x) >= peak * (1.0 - 1e-12)) {
            if (x < 0.0) {
                for (double& y : v) y = -y;
            }
            return;
        }
    }
}

} // namespace

namespace {

// Cyclic Jacobi on the dense row-major matrix `a`. On return the diagonal of
// `a` holds the eigenvalues and row k of `vt` the matching eigenvector.
std::size_t jacobi(std::vector<double>& a, std::vector<double>& vt, std::size_t m) {
    double norm2 = 0.0;
    for (const double x : a) norm2 += x * x;
    const double threshold = kJacobiTolerance * std::sqrt(norm2);

    const auto off_norm = [&] {
        double s = 0.0;
        for (std::size_t r = 0; r < m; ++r) {
            for (std::size_t c = r + 1; c < m; ++c) s += a[r * m + c] * a[r * m + c];
        }
        return std::sqrt(2.0 * s);
    };

    std::size_t sweep = 0;
    while (off_norm() > threshold) {
        if (sweep == kMaxJacobiSweeps) {
            throw Error(ErrorKind::ConvergenceFailure,
                        "Jacobi did not converge in " + std::to_string(kMaxJacobiSweeps) + " sweeps");
        }
        ++sweep;
        for (std::size_t p = 0; p + 1 < m; ++p) {
            for (std::size_t q = p + 1; q < m; ++q) {
                const double apq = a[p * m + q];
                const double app = a[p * m + p];
                const double aqq = a[q * m + q];
                if (apq == 0.0) continue;
                // negligible next to both diagonal entries: drop it
                if (sweep > 4 && std::abs(apq) * 1e2 + std::abs(app) == std::abs(app) &&
                    std::abs(apq) * 1e2 + std::abs(aqq) == std::abs(aqq)) {
                    a[p * m + q] = 0.0;
                    a[q * m + p] = 0.0;
                    continue;
                }
                const double theta = (aqq - app) / (2.0 * apq);
                double t = 0.0;
                if (std::abs(theta) > 1e150) {
                    t = 0.5 / theta;
                } else {
                    t = 1.0 / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                    if (theta < 0.0) t = -t;
                }
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;

                double* row_p = a.data() + p * m;
                double* row_q = a.data() + q * m;
                for (std::size_t r = 0; r < m; ++r) {
                    if (r == p || r == q) continue;
                    const double arp = row_p[r];
                    const double arq = row_q[r];
                    row_p[r] = c * arp - s * arq;
                    row_q[r] = s * arp + c * arq;
                    a[r * m + p] = row_p[r];
                    a[r * m + q] = row_q[r];
                }
                row_p[p] = app - t * apq;
                row_q[q] = aqq + t * apq;
                row_p[q] = 0.0;
                row_q[p] = 0.0;

                double* vp = vt.data() + p * m;
                double* vq = vt.data() + q * m;
                for (std::size_t r = 0; r < m; ++r) {
                    const double x = vp[r];
                    const double y = vq[r];
                    vp[r] = c * x - s * y;
                    vq[r] = s * x + c * y;
                }
            }
        }
    }
    for (std::size_t k = 0; k < m; ++k) a[k] = a[k * m + k];
    a.resize(m);
    return sweep;
}

// Householder reduction to tridiagonal form followed by implicit-shift QL.
// All updates run along rows: the trailing block is kept symmetric in full
// and eigenvectors are stored as rows of `vt`. On return `a` holds the
// eigenvalues (unsorted).
std::size_t tridiagonal_ql(std::vector<double>& a, std::vector<double>& vt, std::size_t m) {
    std::vector<double> d(m);
    std::vector<double> e(m, 0.0);  // e[k] couples k and k + 1
    std::vector<std::vector<double>> reflectors(m > 2 ? m - 2 : 0);
    std::vector<double> betas(reflectors.size(), 0.0);
    std::vector<double> p(m);

    for (std::size_t k = 0; k + 2 < m; ++k) {
        const std::size_t len = m - k - 1;
        const double* x = a.data() + k * m + k + 1;
        double xnorm2 = 0.0;
        for (std::size_t i = 0; i < len; ++i) xnorm2 += x[i] * x[i];
        d[k] = a[k * m + k];
        if (xnorm2 == 0.0) {
            e[k] = 0.0;
            continue;
        }
        const double alpha = x[0] > 0.0 ? -std::sqrt(xnorm2) : std::sqrt(xnorm2);
        std::vector<double> v(x, x + len);
        v[0] -= alpha;
        double vv = 0.0;
        for (const double vi : v) vv += vi * vi;
        e[k] = alpha;
        if (vv == 0.0) continue;
        const double beta = 2.0 / vv;

        // p = beta * A22 v, w = p - (beta/2)(p.v) v, A22 -= v w^T + w v^T
        const std::size_t base = k + 1;
        double pv = 0.0;
        for (std::size_t i = 0; i < len; ++i) {
            const double* row = a.data() + (base + i) * m + base;
            double sum = 0.0;
            for (std::size_t j = 0; j < len; ++j) sum += row[j] * v[j];
            p[i] = beta * sum;
            pv += p[i] * v[i];
        }
        const double kappa = 0.5 * beta * pv;
        for (std::size_t i = 0; i < len; ++i) p[i] -= kappa * v[i];
        for (std::size_t i = 0; i < len; ++i) {
            double* row = a.data() + (base + i) * m + base;
            const double vi = v[i];
            const double wi = p[i];
            for (std::size_t j = 0; j < len; ++j) row[j] -= vi * p[j] + wi * v[j];
        }
        reflectors[k] = std::move(v);
        betas[k] = beta;
    }
    if (m >= 2) {
        d[m - 2] = a[(m - 2) * m + (m - 2)];
        e[m - 2] = a[(m - 1) * m + (m - 2)];
    }
    d[m - 1] = a[(m - 1) * m + (m - 1)];

    // vt = H_{m-3} ... H_1 H_0, built by applying each reflector on the left
    for (std::size_t k = 0; k < reflectors.size(); ++k) {
        if (betas[k] == 0.0) continue;
        const auto& v = reflectors[k];
        const std::size_t base = k + 1;
        std::fill(p.begin(), p.end(), 0.0);
        for (std::size_t i = 0; i < v.size(); ++i) {
            const double* row = vt.data() + (base + i) * m;
            for (std::size_t c = 0; c < m; ++c) p[c] += v[i] * row[c];
        }
        for (std::size_t i = 0; i < v.size(); ++i) {
            double* row = vt.data() + (base + i) * m;
            const double f = betas[k] * v[i];
            for (std::size_t c = 0; c < m; ++c) row[c] -= f * p[c];
        }
    }

    const double eps = std::numeric_limits<double>::epsilon();
    std::size_t total_iterations = 0;
    for (std::size_t l = 0; l < m; ++l) {
        std::size_t iterations = 0;
        while (true) {
            std::size_t s = l;
            for (; s + 1 < m; ++s) {
                const double dd = std::abs(d[s]) + std::abs(d[s + 1]);
                if (std::abs(e[s]) <= eps * dd) break;
            }
            if (s == l) break;
            if (++iterations > kMaxQlIterations) {
                throw Error(ErrorKind::ConvergenceFailure, "QL iteration did not converge for eigenvalue " +
                                                               std::to_string(l));
            }
            ++total_iterations;
            double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            double r = std::hypot(g, 1.0);
            g = d[s] - d[l] + e[l] / (g + (g >= 0.0 ? r : -r));
            double sn = 1.0;
            double cs = 1.0;
            double shift = 0.0;
            bool deflated = false;
            for (std::size_t i = s; i-- > l;) {
                const double f = sn * e[i];
                const double b = cs * e[i];
                r = std::hypot(f, g);
                e[i + 1] = r;
                if (r == 0.0) {
                    d[i + 1] -= shift;
                    e[s] = 0.0;
                    deflated = true;
                    break;
                }
                sn = f / r;
                cs = g / r;
                g = d[i + 1] - shift;
                r = (d[i] - g) * sn + 2.0 * cs * b;
                shift = sn * r;
                d[i + 1] = g + shift;
                g = cs * r - b;
                double* zi = vt.data() + i * m;
                double* zj = vt.data() + (i + 1) * m;
                for (std::size_t c = 0; c < m; ++c) {
                    const double zf = zj[c];
                    zj[c] = sn * zi[c] + cs * zf;
                    zi[c] = cs * zi[c] - sn * zf;
                }
            }
            if (deflated) continue;
            d[l] -= shift;
            e[l] = g;
            e[s] = 0.0;
        }
    }
    a = std::move(d);
    return total_iterations;
}

} // namespace

SingularSpectrum eigendecompose(const ToeplitzCorrelation& corr) {
    const std::size_t m = corr.window();
    if (m == 0) {
        throw Error(ErrorKind::InvalidArgument, "empty correlation");
    }
    for (const double c : corr.lags) {
        if (!std::isfinite(c)) throw Error(ErrorKind::NonFiniteInput, "correlation lags must be finite");
    }

    std::vector<double> a = corr.dense();
    std::vector<double> vt(m * m, 0.0);
    for (std::size_t i = 0; i < m; ++i) vt[i * m + i] = 1.0;

    SingularSpectrum spectrum;
    if (m <= kJacobiMaxWindow) {
        spectrum.solver = Eigensolver::Jacobi;
        spectrum.iterations = jacobi(a, vt, m);
    } else {
        spectrum.solver = Eigensolver::TridiagonalQl;
        spectrum.iterations = tridiagonal_ql(a, vt, m);
    }

    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return a[i] > a[j]; });

    spectrum.eigenvalues.reserve(m);
    spectrum.eigenvectors.reserve(m);
    for (const auto k : order) {
        spectrum.eigenvalues.push_back(a[k]);
        std::vector<double> v(vt.begin() + static_cast<std::ptrdiff_t>(k * m),
                              vt.begin() + static_cast<std::ptrdiff_t>((k + 1) * m));
        fix_sign(v);
        spectrum.eigenvectors.push_back(std::move(v));
    }
    return spectrum;
}

std::string_view to_string(Eigensolver s) noexcept {
    return s == Eigensolver::Jacobi ? "jacobi" : "tridiagonal_ql";
}

std::vector<std::vector<double>> principal_components(std::span<const double> series,
                                                      const SingularSpectrum& spectrum) {
    const std::size_t m = spectrum.window();
    const std::size_t n = series.size();
    if (m == 0 || n < m) {
        throw Error(ErrorKind::DimensionMismatch, "series shorter than the window");
    }
    const std::size_t len = n - m + 1;
    std::vector<std::vector<double>> pcs(m, std::vector<double>(len));
    for (std::size_t k = 0; k < m; ++k) {
        const auto& e = spectrum.eigenvectors[k];
        if (e.size() != m) {
            throw Error(ErrorKind::DimensionMismatch, "eigenvector length differs from window");
        }
        for (std::size_t i = 0; i < len; ++i) {
            double sum = 0.0;
            for (std::size_t j = 0; j < m; ++j) sum += series[i + j] * e[j];
            pcs[k][i] = sum;
        }
    }
    return pcs;
}

std::vector<double> reconstruct_component(std::span<const double> pc, std::span<const double> eigvec,
                                          std::size_t length, std::size_t window) {
    if (window == 0 || eigvec.size() != window || length < window || pc.size() != length - window + 1) {
        throw Error(ErrorKind::DimensionMismatch, "pc/eigenvector sizes inconsistent with N and M");
    }
    const std::size_t last_pc = length - window;
    std::vector<double> rc(length);
    for (std::size_t t = 0; t < length; ++t) {
        const std::size_t j_lo = t > last_pc ? t - last_pc : 0;
        const std::size_t j_hi = std::min(window - 1, t);
        double sum = 0.0;
        for (std::size_t j = j_lo; j <= j_hi; ++j) sum += pc[t - j] * eigvec[j];
        rc[t] = sum / static_cast<double>(j_hi - j_lo + 1);
    }
    return rc;
}

ComponentSet reconstruct_all(std::vector<std::vector<double>> pcs, const SingularSpectrum& spectrum,
                             std::size_t length) {
    const std::size_t m = spectrum.window();
    if (pcs.size() != m) {
        throw Error(ErrorKind::DimensionMismatch, "need one PC per eigenvector");
    }
    ComponentSet set;
    set.length = length;
    set.window = m;
    set.rcs.reserve(m);
    for (std::size_t k = 0; k < m; ++k) {
        set.rcs.push_back(reconstruct_component(pcs[k], spectrum.eigenvectors[k], length, m));
    }
    set.pcs = std::move(pcs);
    return set;
}

std::vector<double> partial_reconstruction(const ComponentSet& components, std::size_t p) {
    if (p == 0 || p > components.rcs.size()) {
        throw Error(ErrorKind::BadComponentCount, "component count " + std::to_string(p) +
                                                      " outside [1, " +
                                                      std::to_string(components.rcs.size()) + "]");
    }
    std::vector<double> out(components.length, 0.0);
    for (std::size_t k = 0; k < p; ++k) {
        const auto& rc = components.rcs[k];
        for (std::size_t i = 0; i < out.size(); ++i) out[i] += rc[i];
    }
    return out;
}

std::vector<SpectrumPoint> singular_spectrum_plot_data(const SingularSpectrum& spectrum) {
    std::vector<SpectrumPoint> points;
    points.reserve(spectrum.window());
    for (std::size_t k = 0; k < spectrum.window(); ++k) {
        const double lambda = spectrum.eigenvalues[k];
        const bool clamped = !(lambda > kEigenvalueFloor);
        points.push_back({k + 1, std::log10(clamped ? kEigenvalueFloor : lambda), clamped});
    }
    return points;
}

Decomposition decompose(std::span<const double> series, std::size_t window) {
    Decomposition d;
    d.correlation = lag_correlation(series, window);
    d.spectrum = eigendecompose(d.correlation);
    d.components = reconstruct_all(principal_components(series, d.spectrum), d.spectrum, series.size());
    return d;
}

double completeness_error(const ComponentSet& components, std::span<const double> series) {
    if (series.size() != components.length) {
        throw Error(ErrorKind::DimensionMismatch, "series length differs from the decomposition");
    }
    double worst = 0.0;
    for (std::size_t i = 0; i < series.size(); ++i) {
        double sum = 0.0;
        for (const auto& rc : components.rcs) sum += rc[i];
        worst = std::max(worst, std::abs(sum - series[i]));
    }
    return worst;
}

} // namespace ssann::ssa
