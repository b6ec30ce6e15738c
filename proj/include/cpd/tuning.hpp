#pragma once

namespace cpd {

/// Defaults for the optimal-window search. The asymptotic delay formula
/// drifts away from simulation below w of roughly 20-30, so the search is
/// floored there unless the caller overrides it.
inline constexpr int kDefaultWindowFloor = 20;
inline constexpr int kDefaultWindowMax = 500;

struct TuningInputs {
    double target_arl = 5000.0;   // gamma
    double sym_divergence = 1.0;  // s'
    int window = 40;              // w
};

struct TuningOutputs {
    double delta0 = 0.0;           // equivalence factor delta0*
    double drift = 0.0;            // v*
    double threshold = 0.0;        // b
    double theoretical_edd = 0.0;  // samples, window latency included
    int window_star = 0;           // w*
};

/// Equivalence factor minimizing the theoretical detection delay:
/// delta0* = -1/s + sqrt(1/s^2 + w). Always satisfies delta0*^2 < w.
double delta0_star(double s, int w);

/// Optimal drift v* = -ln(1 - delta0^2/w) / delta0.
/// Requires 0 < delta0^2 < w (domain error otherwise).
double v_star(double delta0, int w);

/// Detection threshold for a target average run length: b = ln(gamma)/delta0.
double threshold_for_arl(double gamma, double delta0);

/// Theoretical expected detection delay at the optimal delta0:
///   ln(gamma) / (delta0*·s + ln(1 - delta0*^2/w)) + w.
double edd_theoretical(double gamma, double s, int w);

/// Integer argmin of edd_theoretical over w in [w_floor, w_max]; ties break
/// toward the smaller window.
int optimal_window(double gamma, double s_prime, int w_floor = kDefaultWindowFloor,
                   int w_max = kDefaultWindowMax);

/// Full tuning pass: picks w* then derives delta0*, v*, b and the
/// theoretical delay.
TuningOutputs tune(double gamma, double s_prime, int w_floor = kDefaultWindowFloor,
                   int w_max = kDefaultWindowMax);

/// Same derivation at a caller-forced window size.
TuningOutputs tune_for_window(double gamma, double s_prime, int w);

}  // namespace cpd
