#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "cpd/detectors.hpp"
#include "cpd/gaussian.hpp"

namespace cpd {

struct MonteCarloEstimate {
    double value = 0.0;      // samples
    double std_error = 0.0;  // samples
    int trials = 0;
    std::uint64_t master_seed = 0;
    int censored = 0;  // trials that hit the horizon without alarming
};

enum class CurveSource { theoretical, simulated };

struct CurvePoint {
    double arl = 0.0;
    double edd = 0.0;
    double threshold = 0.0;
    int window = 0;
    CurveSource source = CurveSource::simulated;
};

struct CurveScenario {
    GaussianParams theta0;
    GaussianParams theta1;
    DetectorKind kind = DetectorKind::das;
    DetectorConfig config;  // threshold is taken from the grid
    std::int64_t arl_horizon = 1'000'000;
    int arl_trials = 0;  // 0: use the shared trial count
};

/// Mean time to a false alarm under i.i.d. theta0 data. Each trial runs an
/// independent substream derived from (seed, trial index); trials that
/// reach `horizon` evaluations without alarming contribute the horizon and
/// are counted in `censored`. Bit-identical for a fixed seed and trial
/// count regardless of how many threads execute (`max_threads` 0 = all
/// hardware threads).
MonteCarloEstimate estimate_arl(const DetectorConfig& config, const GaussianParams& theta0,
                                DetectorKind kind, int trials, std::int64_t horizon,
                                std::uint64_t seed, int max_threads = 0);

/// Mean detection delay for data that is theta1-distributed from the first
/// sample (change at the origin). Delays include the future-window latency
/// of the windowed detector kinds.
MonteCarloEstimate estimate_edd(const DetectorConfig& config, const GaussianParams& theta0,
                                const GaussianParams& theta1, DetectorKind kind, int trials,
                                std::uint64_t seed, int max_threads = 0);

/// Bisection on the threshold over [1e-3, 1e2] until the estimated ARL is
/// within 10% of `target_arl` or 20 iterations elapse. All probes reuse the
/// same master seed, so the estimated ARL is exactly monotone in b across
/// probes. Throws on an unbracketable target, with diagnostics.
double calibrate_threshold(double target_arl, const DetectorConfig& config,
                           const GaussianParams& theta0, DetectorKind kind, int trials,
                           std::uint64_t seed, int max_threads = 0);

/// One simulated (arl, edd) point per threshold plus the matched
/// theoretical point (arl = exp(delta0*·b), edd from the asymptotic delay
/// formula with s = symmetric_kl(theta0, theta1)); sorted by arl.
std::vector<CurvePoint> edd_vs_arl_curve(std::span<const double> thresholds,
                                         const CurveScenario& scenario, int trials,
                                         std::uint64_t seed, int max_threads = 0);

}  // namespace cpd
