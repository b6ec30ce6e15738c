#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "cpd/gaussian.hpp"

namespace cpd {

enum class DetectorKind { cusum, adaptive, glr, das };

struct DetectorConfig {
    double threshold = 1.0;         // b
    int window = 40;                // w, future-window length
    double drift = 0.1;             // v, DAS drift term
    double min_sym_divergence = 1.0;  // s', smallest change worth detecting
    double target_arl = 5000.0;     // gamma
    // Hypothesised post-change distribution; required by the classical
    // CUSUM kind, ignored by the others.
    std::optional<GaussianParams> theta1;
    int glr_max_lookback = 500;
    int glr_min_segment = 2;
};

struct ChangeEvent {
    std::int64_t alarm_index = 0;     // evaluation position where S_t > b
    std::int64_t decision_index = 0;  // last sample consumed for the decision
    GaussianParams adopted;           // estimate adopted as the new theta0
};

/// One classical CUSUM update: (s_prev + llr(x))^+, clamp outside the sum.
double cusum_step(double s_prev, double x, const GaussianParams& theta0,
                  const GaussianParams& theta1);

/// Incremental DAS statistic
///   ln(f_that(x)/f_theta0(x)) + D(theta0 || that) - v,
/// evaluated in its expanded Gaussian form (the log-sigma terms cancel):
///   -(x-m^)^2/(2v^) + (x-m0)^2/(2v0) + (v0+(m0-m^)^2)/(2v^) - 1/2 - v.
/// Equals exactly -v when theta_hat == theta0.
double das_cusum_increment(double x, const GaussianParams& theta0,
                           const GaussianParams& theta_hat, double v);

/// One DAS update: max(s_prev, 0) + increment. The clamp applies to the
/// previous value only; the result may be negative.
double das_cusum_step(double s_prev, double increment);

struct GlrResult {
    double statistic = 0.0;
    std::int64_t change_index = 0;  // start of the maximizing segment
};

/// Window-limited GLR statistic over the tail of `history`: for each
/// candidate segment of length k in [min_segment, min(max_lookback, n)],
/// the Gaussian MLE profile likelihood reduces to k * D(mle(segment) || theta0);
/// returns the maximum and the segment start. Ties prefer the most recent
/// candidate (smallest k).
GlrResult glr_statistic(std::span<const double> history, const GaussianParams& theta0,
                        int max_lookback, int min_segment);

/// Per-sample change detector. Feed samples with push(); an event is
/// returned at the evaluation step whose statistic crosses the threshold.
/// The windowed kinds (adaptive, das) evaluate sample t only once the w
/// samples after it have arrived, so their events carry
/// decision_index = alarm_index + w. After an alarm the statistic resets to
/// zero, the adopted estimate becomes the new pre-change distribution, and
/// evaluation continues at t+1.
///
/// Value object: moving between threads is fine, sharing mutably is not.
class StreamingDetector {
public:
    StreamingDetector(DetectorKind kind, const DetectorConfig& config,
                      GaussianParams pre_change);

    std::optional<ChangeEvent> push(double x);

    double statistic() const { return statistic_; }
    const GaussianParams& pre_change() const { return theta0_; }
    std::int64_t samples_seen() const { return samples_seen_; }
    std::int64_t evaluations() const { return next_eval_; }
    /// Future-window latency in samples (0 for cusum/glr).
    int latency() const { return uses_window_ ? config_.window : 0; }

private:
    std::optional<ChangeEvent> evaluate(double x, std::int64_t t);
    GaussianParams window_params() const;
    void refresh_sums();

    DetectorKind kind_;
    DetectorConfig config_;
    GaussianParams theta0_;
    double statistic_ = 0.0;
    std::int64_t samples_seen_ = 0;
    std::int64_t next_eval_ = 0;
    bool uses_window_ = false;

    // Pending samples for the windowed kinds: ring of capacity w+1 whose
    // oldest entry is the next evaluation point and whose remaining w
    // entries form the future window. Sums cover the whole ring.
    std::vector<double> ring_;
    std::size_t ring_head_ = 0;
    std::size_t ring_size_ = 0;
    double sum_ = 0.0;
    double sum_sq_ = 0.0;
    std::int64_t steps_since_refresh_ = 0;

    // GLR history since the last restart, trimmed to the lookback horizon.
    std::vector<double> history_;
};

/// Runs a detector over a finite stream and collects every change event.
/// Samples at the tail that never obtain a full future window are
/// discarded without alarming. Deterministic for a fixed input sequence.
std::vector<ChangeEvent> run_detector(std::span<const double> stream, DetectorKind kind,
                                      const DetectorConfig& config,
                                      GaussianParams pre_change);

}  // namespace cpd
