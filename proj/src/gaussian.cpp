#include "cpd/gaussian.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cpd {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
}

double gaussian_loglik(double x, const GaussianParams& p) {
    if (!std::isfinite(x)) {
        throw std::invalid_argument("gaussian_loglik: non-finite sample");
    }
    if (!(p.variance > 0.0)) {
        throw std::invalid_argument("gaussian_loglik: variance must be positive");
    }
    const double d = x - p.mean;
    return -0.5 * std::log(kTwoPi * p.variance) - d * d / (2.0 * p.variance);
}

double kl_gaussian(const GaussianParams& p, const GaussianParams& q) {
    if (!(p.variance > 0.0) || !(q.variance > 0.0)) {
        throw std::invalid_argument("kl_gaussian: variances must be positive");
    }
    const double dm = p.mean - q.mean;
    return 0.5 * std::log(q.variance / p.variance) +
           (p.variance + dm * dm) / (2.0 * q.variance) - 0.5;
}

double symmetric_kl(const GaussianParams& p, const GaussianParams& q) {
    // IEEE addition is commutative, so swapping the arguments yields the
    // same bits.
    return kl_gaussian(p, q) + kl_gaussian(q, p);
}

GaussianParams window_estimate(std::span<const double> samples) {
    if (samples.size() < 2) {
        throw std::invalid_argument("window_estimate: need at least 2 samples");
    }
    const double n = static_cast<double>(samples.size());
    double sum = 0.0;
    for (double x : samples) sum += x;
    const double mean = sum / n;
    double ss = 0.0;
    for (double x : samples) {
        const double d = x - mean;
        ss += d * d;
    }
    return {mean, std::max(ss / n, kVarianceFloor)};
}

}  // namespace cpd
