#include "cpd/detectors.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cpd {

double cusum_step(double s_prev, double x, const GaussianParams& theta0,
                  const GaussianParams& theta1) {
    const double llr = gaussian_loglik(x, theta1) - gaussian_loglik(x, theta0);
    return std::max(0.0, s_prev + llr);
}

double das_cusum_increment(double x, const GaussianParams& theta0,
                           const GaussianParams& theta_hat, double v) {
    const double dh = x - theta_hat.mean;
    const double d0 = x - theta0.mean;
    const double dm = theta0.mean - theta_hat.mean;
    return -dh * dh / (2.0 * theta_hat.variance) + d0 * d0 / (2.0 * theta0.variance) +
           (theta0.variance + dm * dm) / (2.0 * theta_hat.variance) - 0.5 - v;
}

double das_cusum_step(double s_prev, double increment) {
    return std::max(s_prev, 0.0) + increment;
}

GlrResult glr_statistic(std::span<const double> history, const GaussianParams& theta0,
                        int max_lookback, int min_segment) {
    if (min_segment < 2) {
        throw std::invalid_argument("glr_statistic: min_segment must be >= 2");
    }
    if (max_lookback < min_segment) {
        throw std::invalid_argument("glr_statistic: max_lookback must be >= min_segment");
    }
    const std::int64_t n = static_cast<std::int64_t>(history.size());
    if (n < min_segment) {
        throw std::invalid_argument("glr_statistic: history shorter than min_segment");
    }

    // Suffix sums over the candidate range keep each segment's MLE O(1).
    const std::int64_t k_max = std::min<std::int64_t>(max_lookback, n);
    double sum = 0.0;
    double sum_sq = 0.0;
    GlrResult best{-1.0, n - min_segment};
    for (std::int64_t k = 1; k <= k_max; ++k) {
        const double x = history[static_cast<std::size_t>(n - k)];
        sum += x;
        sum_sq += x * x;
        if (k < min_segment) continue;
        const double kd = static_cast<double>(k);
        const double mean = sum / kd;
        const double variance = std::max(sum_sq / kd - mean * mean, kVarianceFloor);
        const double stat = kd * kl_gaussian({mean, variance}, theta0);
        if (stat > best.statistic) {
            best.statistic = stat;
            best.change_index = n - k;
        }
    }
    return best;
}

StreamingDetector::StreamingDetector(DetectorKind kind, const DetectorConfig& config,
                                     GaussianParams pre_change)
    : kind_(kind), config_(config), theta0_(pre_change) {
    if (!(config_.threshold > 0.0)) {
        throw std::invalid_argument("StreamingDetector: threshold must be positive");
    }
    if (!(theta0_.variance > 0.0)) {
        throw std::invalid_argument("StreamingDetector: pre-change variance must be positive");
    }
    uses_window_ = (kind == DetectorKind::adaptive || kind == DetectorKind::das);
    if (uses_window_) {
        if (config_.window < 2) {
            throw std::invalid_argument("StreamingDetector: window must be >= 2");
        }
        ring_.assign(static_cast<std::size_t>(config_.window) + 1, 0.0);
    }
    if (kind == DetectorKind::das && !(config_.drift > 0.0)) {
        throw std::invalid_argument("StreamingDetector: drift must be positive for das");
    }
    if (kind == DetectorKind::cusum && !config_.theta1.has_value()) {
        throw std::invalid_argument("StreamingDetector: cusum needs theta1");
    }
    if (kind == DetectorKind::glr) {
        if (config_.glr_min_segment < 2 || config_.glr_max_lookback < config_.glr_min_segment) {
            throw std::invalid_argument("StreamingDetector: bad glr lookback/segment");
        }
        history_.reserve(static_cast<std::size_t>(config_.glr_max_lookback) * 2);
    }
}

GaussianParams StreamingDetector::window_params() const {
    // The ring currently holds w+1 samples; the oldest is the evaluation
    // point and the other w form the future window.
    const double oldest = ring_[ring_head_];
    const double w = static_cast<double>(config_.window);
    const double mean = (sum_ - oldest) / w;
    const double variance = (sum_sq_ - oldest * oldest) / w - mean * mean;
    return {mean, std::max(variance, kVarianceFloor)};
}

void StreamingDetector::refresh_sums() {
    sum_ = 0.0;
    sum_sq_ = 0.0;
    for (std::size_t i = 0; i < ring_size_; ++i) {
        const double x = ring_[(ring_head_ + i) % ring_.size()];
        sum_ += x;
        sum_sq_ += x * x;
    }
    steps_since_refresh_ = 0;
}

std::optional<ChangeEvent> StreamingDetector::push(double x) {
    ++samples_seen_;
    if (!uses_window_) {
        return evaluate(x, next_eval_++);
    }
    const std::size_t cap = ring_.size();
    ring_[(ring_head_ + ring_size_) % cap] = x;
    sum_ += x;
    sum_sq_ += x * x;
    if (++ring_size_ < cap) {
        return std::nullopt;  // future window not complete yet
    }
    const double x_t = ring_[ring_head_];
    auto event = evaluate(x_t, next_eval_++);
    // Drop the evaluated sample; the remaining w entries already serve as
    // the next step's partial window.
    sum_ -= x_t;
    sum_sq_ -= x_t * x_t;
    ring_head_ = (ring_head_ + 1) % cap;
    --ring_size_;
    if (++steps_since_refresh_ >= (1 << 16)) {
        refresh_sums();  // cancel accumulated floating-point drift
    }
    return event;
}

std::optional<ChangeEvent> StreamingDetector::evaluate(double x, std::int64_t t) {
    GaussianParams adopted = theta0_;
    switch (kind_) {
        case DetectorKind::cusum:
            statistic_ = cusum_step(statistic_, x, theta0_, *config_.theta1);
            adopted = *config_.theta1;
            break;
        case DetectorKind::adaptive: {
            const GaussianParams that = window_params();
            statistic_ = cusum_step(statistic_, x, theta0_, that);
            adopted = that;
            break;
        }
        case DetectorKind::das: {
            const GaussianParams that = window_params();
            statistic_ = das_cusum_step(
                statistic_, das_cusum_increment(x, theta0_, that, config_.drift));
            adopted = that;
            break;
        }
        case DetectorKind::glr: {
            history_.push_back(x);
            // Samples beyond the lookback horizon can never enter a
            // candidate segment again; compact occasionally.
            const auto cap = static_cast<std::size_t>(config_.glr_max_lookback);
            if (history_.size() > 4 * cap) {
                history_.erase(history_.begin(),
                               history_.end() - static_cast<std::ptrdiff_t>(cap));
            }
            if (history_.size() < static_cast<std::size_t>(config_.glr_min_segment)) {
                return std::nullopt;
            }
            const GlrResult res = glr_statistic(history_, theta0_, config_.glr_max_lookback,
                                                config_.glr_min_segment);
            statistic_ = res.statistic;
            if (statistic_ > config_.threshold) {
                const auto begin = static_cast<std::size_t>(res.change_index);
                adopted = window_estimate(
                    std::span<const double>(history_).subspan(begin));
            }
            break;
        }
    }

    if (statistic_ <= config_.threshold) {
        return std::nullopt;
    }
    ChangeEvent event;
    event.alarm_index = t;
    event.decision_index = t + latency();
    event.adopted = adopted;
    theta0_ = adopted;
    statistic_ = 0.0;
    if (kind_ == DetectorKind::glr) {
        history_.clear();
    }
    return event;
}

std::vector<ChangeEvent> run_detector(std::span<const double> stream, DetectorKind kind,
                                      const DetectorConfig& config,
                                      GaussianParams pre_change) {
    StreamingDetector detector(kind, config, pre_change);
    std::vector<ChangeEvent> events;
    for (double x : stream) {
        if (auto event = detector.push(x)) {
            events.push_back(*event);
        }
    }
    return events;
}

}  // namespace cpd
