#include "cpd/tuning.hpp"

#include <cmath>
#include <stdexcept>

namespace cpd {

double delta0_star(double s, int w) {
    if (!(s > 0.0)) {
        throw std::invalid_argument("delta0_star: s must be positive");
    }
    if (w < 2) {
        throw std::invalid_argument("delta0_star: w must be >= 2");
    }
    return -1.0 / s + std::sqrt(1.0 / (s * s) + static_cast<double>(w));
}

double v_star(double delta0, int w) {
    if (!(delta0 > 0.0)) {
        throw std::invalid_argument("v_star: delta0 must be positive");
    }
    const double ratio = delta0 * delta0 / static_cast<double>(w);
    if (ratio >= 1.0) {
        throw std::domain_error("v_star: requires delta0^2 < w");
    }
    return -std::log1p(-ratio) / delta0;
}

double threshold_for_arl(double gamma, double delta0) {
    if (!(gamma > 1.0)) {
        throw std::invalid_argument("threshold_for_arl: gamma must exceed 1");
    }
    if (!(delta0 > 0.0)) {
        throw std::invalid_argument("threshold_for_arl: delta0 must be positive");
    }
    return std::log(gamma) / delta0;
}

double edd_theoretical(double gamma, double s, int w) {
    if (!(gamma >= 1.0)) {
        throw std::invalid_argument("edd_theoretical: gamma must be >= 1");
    }
    const double d = delta0_star(s, w);
    const double denom = d * s + std::log1p(-d * d / static_cast<double>(w));
    return std::log(gamma) / denom + static_cast<double>(w);
}

int optimal_window(double gamma, double s_prime, int w_floor, int w_max) {
    if (w_floor < 2 || w_max <= w_floor) {
        throw std::invalid_argument("optimal_window: need 2 <= w_floor < w_max");
    }
    int best_w = w_floor;
    double best = edd_theoretical(gamma, s_prime, w_floor);
    for (int w = w_floor + 1; w <= w_max; ++w) {
        const double value = edd_theoretical(gamma, s_prime, w);
        if (value < best) {
            best = value;
            best_w = w;
        }
    }
    return best_w;
}

TuningOutputs tune(double gamma, double s_prime, int w_floor, int w_max) {
    return tune_for_window(gamma, s_prime, optimal_window(gamma, s_prime, w_floor, w_max));
}

TuningOutputs tune_for_window(double gamma, double s_prime, int w) {
    TuningOutputs out;
    out.window_star = w;
    out.delta0 = delta0_star(s_prime, w);
    out.drift = v_star(out.delta0, w);
    out.threshold = threshold_for_arl(gamma, out.delta0);
    out.theoretical_edd = edd_theoretical(gamma, s_prime, w);
    return out;
}

}  // namespace cpd
