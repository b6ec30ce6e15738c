#pragma once

#include <span>

namespace cpd {

/// Mean/variance pair of a univariate normal distribution.
struct GaussianParams {
    double mean = 0.0;
    double variance = 1.0;
};

/// Variance floor applied by window_estimate so that log-densities stay
/// finite on constant (zero-spread) windows.
inline constexpr double kVarianceFloor = 1e-8;

/// Log-density ln f_p(x) = -0.5*ln(2*pi*var) - (x-mean)^2/(2*var).
/// Throws std::invalid_argument for non-finite x or variance <= 0.
double gaussian_loglik(double x, const GaussianParams& p);

/// KL divergence D(p || q) between two normals:
///   ln(sigma_q/sigma_p) + (var_p + (mean_p-mean_q)^2) / (2*var_q) - 1/2.
/// Non-negative, zero iff p == q.
double kl_gaussian(const GaussianParams& p, const GaussianParams& q);

/// D(p||q) + D(q||p). Symmetric in its arguments bit-for-bit.
double symmetric_kl(const GaussianParams& p, const GaussianParams& q);

/// Sample mean and population variance (divisor n) of a window, with the
/// variance floored at kVarianceFloor. Requires at least 2 samples.
GaussianParams window_estimate(std::span<const double> samples);

}  // namespace cpd
