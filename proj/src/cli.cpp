#include "cpd/cli.hpp"

#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>

#include "cpd/csv.hpp"
#include "cpd/montecarlo.hpp"
#include "cpd/tuning.hpp"

namespace cpd {

namespace {

DetectorConfig resolve_config(const RunConfig& rc, std::string* notes) {
    DetectorConfig cfg;
    cfg.target_arl = rc.target_arl;
    cfg.min_sym_divergence = rc.sym_div;
    cfg.glr_max_lookback = rc.glr_max_lookback;
    cfg.glr_min_segment = rc.glr_min_segment;

    const bool windowed = rc.kind == DetectorKind::adaptive || rc.kind == DetectorKind::das;
    if (rc.window > 0) {
        cfg.window = rc.window;
    } else if (windowed) {
        cfg.window = optimal_window(rc.target_arl, rc.sym_div, rc.w_floor, rc.w_max);
        if (notes) {
            *notes += "window derived: w=" + std::to_string(cfg.window) + "\n";
        }
    } else {
        cfg.window = 40;
    }

    if (rc.kind == DetectorKind::das) {
        const double d0 = delta0_star(rc.sym_div, cfg.window);
        cfg.drift = rc.drift.value_or(v_star(d0, cfg.window));
        cfg.threshold = rc.threshold.value_or(threshold_for_arl(rc.target_arl, d0));
    } else {
        if (!rc.threshold.has_value()) {
            throw std::invalid_argument("--threshold is required for detector '" +
                                        std::string(rc.kind == DetectorKind::cusum ? "cusum"
                                                    : rc.kind == DetectorKind::adaptive
                                                        ? "adaptive"
                                                        : "glr") +
                                        "'");
        }
        cfg.threshold = *rc.threshold;
        if (rc.drift.has_value()) cfg.drift = *rc.drift;
    }

    if (rc.kind == DetectorKind::cusum) {
        if (!rc.mean1.has_value() || !rc.var1.has_value()) {
            throw std::invalid_argument("cusum needs --mean1 and --var1");
        }
        cfg.theta1 = GaussianParams{*rc.mean1, *rc.var1};
    }
    return cfg;
}

GaussianParams require_theta(const std::optional<double>& mean, const std::optional<double>& var,
                             const char* which) {
    if (!mean.has_value() || !var.has_value()) {
        throw std::invalid_argument(std::string("missing --") + which +
                                    " parameters (mean and variance)");
    }
    return {*mean, *var};
}

std::ostream& value_out(std::ofstream& file, std::ostream& fallback, const std::string& path) {
    if (path.empty()) return fallback;
    file.open(path);
    if (!file) {
        throw std::runtime_error("cannot open output file '" + path + "'");
    }
    return file;
}

void print_kv(std::ostream& out, bool tsv, const std::string& key, double value) {
    out << std::setprecision(6);
    if (tsv) {
        out << key << '\t' << value << '\n';
    } else {
        out << std::left << std::setw(14) << key << value << '\n';
    }
}

void print_kv(std::ostream& out, bool tsv, const std::string& key, std::int64_t value) {
    if (tsv) {
        out << key << '\t' << value << '\n';
    } else {
        out << std::left << std::setw(14) << key << value << '\n';
    }
}

DetectorConfig resolve_config_for_curve(const RunConfig& rc, const GaussianParams& theta0,
                                        const GaussianParams& theta1) {
    RunConfig adjusted = rc;
    // The curve derives its tuning scale from the actual scenario change.
    adjusted.sym_div = symmetric_kl(theta0, theta1);
    adjusted.threshold = rc.thresholds.front();  // replaced per grid point
    return resolve_config(adjusted, nullptr);
}

}  // namespace

int cmd_detect(const RunConfig& rc, std::istream& in, std::ostream& out, std::ostream& err) {
    std::string notes;
    const DetectorConfig cfg = resolve_config(rc, &notes);

    std::vector<Sample> rows;
    if (rc.input_path.empty() || rc.input_path == "-") {
        rows = ingest_csv(in);
    } else {
        rows = ingest_csv_file(rc.input_path);
    }
    if (rows.empty()) {
        throw std::runtime_error("detect: input is empty");
    }
    std::vector<double> values;
    values.reserve(rows.size());
    for (const auto& r : rows) values.push_back(r.value);

    GaussianParams theta0;
    std::size_t start = 0;
    if (rc.mean0.has_value() && rc.var0.has_value()) {
        theta0 = {*rc.mean0, *rc.var0};
    } else {
        const auto w = static_cast<std::size_t>(cfg.window);
        if (values.size() <= w) {
            throw std::runtime_error("detect: window is larger than the input");
        }
        theta0 = window_estimate(std::span<const double>(values).first(w));
        start = w;
        notes += "pre-change parameters estimated from the first " + std::to_string(cfg.window) +
                 " samples\n";
    }
    if (values.size() - start < static_cast<std::size_t>(cfg.window) + 1 &&
        (rc.kind == DetectorKind::adaptive || rc.kind == DetectorKind::das)) {
        throw std::runtime_error("detect: window is larger than the input");
    }

    auto events = run_detector(std::span<const double>(values).subspan(start), rc.kind, cfg,
                               theta0);
    for (auto& e : events) {
        e.alarm_index += static_cast<std::int64_t>(start);
        e.decision_index += static_cast<std::int64_t>(start);
    }

    std::ofstream file;
    std::ostream& dest = value_out(file, out, rc.output_path);
    write_events_csv(dest, events);
    err << notes;
    err << "events: " << events.size() << '\n';
    return 0;
}

int cmd_tune(const RunConfig& rc, std::ostream& out, std::ostream& err) {
    if (!(rc.target_arl > 1.0) || !(rc.sym_div > 0.0)) {
        throw std::invalid_argument("tune: need --arl > 1 and --sym-div > 0");
    }
    TuningOutputs t;
    bool forced = rc.window > 0;
    int unconstrained = 0;
    if (forced) {
        t = tune_for_window(rc.target_arl, rc.sym_div, rc.window);
    } else {
        t = tune(rc.target_arl, rc.sym_div, rc.w_floor, rc.w_max);
        unconstrained = optimal_window(rc.target_arl, rc.sym_div, 2, rc.w_max);
    }

    print_kv(out, rc.tsv, "w_star", static_cast<std::int64_t>(t.window_star));
    print_kv(out, rc.tsv, "delta0_star", t.delta0);
    print_kv(out, rc.tsv, "v_star", t.drift);
    print_kv(out, rc.tsv, "threshold", t.threshold);
    print_kv(out, rc.tsv, "edd", t.theoretical_edd);
    if (rc.tsv && !forced) {
        print_kv(out, rc.tsv, "unconstrained_w_star", static_cast<std::int64_t>(unconstrained));
    }
    if (!forced && unconstrained < t.window_star) {
        err << "note: unconstrained optimum w=" << unconstrained << " lies below the floor "
            << rc.w_floor << "; w* clamped\n";
    }
    return 0;
}

int cmd_simulate(const RunConfig& rc, std::ostream& out, std::ostream& err) {
    const DetectorConfig cfg = resolve_config(rc, nullptr);
    const GaussianParams theta0 = require_theta(rc.mean0, rc.var0, "mean0/--var0");

    MonteCarloEstimate est;
    if (rc.mode == "arl") {
        const std::int64_t horizon =
            rc.horizon > 0 ? rc.horizon
                           : static_cast<std::int64_t>(std::llround(50.0 * rc.target_arl));
        est = estimate_arl(cfg, theta0, rc.kind, rc.trials, horizon, rc.seed);
    } else if (rc.mode == "edd") {
        const GaussianParams theta1 = require_theta(rc.mean1, rc.var1, "mean1/--var1");
        est = estimate_edd(cfg, theta0, theta1, rc.kind, rc.trials, rc.seed);
    } else {
        throw std::invalid_argument("simulate: --mode must be arl or edd");
    }

    print_kv(out, rc.tsv, "value", est.value);
    print_kv(out, rc.tsv, "std_error", est.std_error);
    print_kv(out, rc.tsv, "trials", static_cast<std::int64_t>(est.trials));
    print_kv(out, rc.tsv, "censored", static_cast<std::int64_t>(est.censored));
    print_kv(out, rc.tsv, "seed", static_cast<std::int64_t>(est.master_seed));
    if (est.censored > 0) {
        err << "warning: " << est.censored << " of " << est.trials
            << " trials were censored at the horizon\n";
    }
    return 0;
}

int cmd_curve(const RunConfig& rc, std::ostream& out, std::ostream&) {
    if (rc.thresholds.empty()) {
        throw std::invalid_argument("curve: --thresholds grid must not be empty");
    }
    CurveScenario scenario;
    scenario.theta0 = require_theta(rc.mean0, rc.var0, "mean0/--var0");
    scenario.theta1 = require_theta(rc.mean1, rc.var1, "mean1/--var1");
    scenario.kind = rc.kind;
    scenario.config = resolve_config_for_curve(rc, scenario.theta0, scenario.theta1);
    if (rc.horizon > 0) scenario.arl_horizon = rc.horizon;

    const auto points = edd_vs_arl_curve(rc.thresholds, scenario, rc.trials, rc.seed);

    std::ofstream file;
    std::ostream& dest = value_out(file, out, rc.output_path);
    dest << std::setprecision(6);
    dest << "source\tarl\tedd\tthreshold\twindow\n";
    for (const auto& p : points) {
        dest << (p.source == CurveSource::simulated ? "simulated" : "theoretical") << '\t'
             << p.arl << '\t' << p.edd << '\t' << p.threshold << '\t' << p.window << '\n';
    }
    return 0;
}

int run_cli(int argc, const char* const* argv, std::istream& in, std::ostream& out,
            std::ostream& err) {
    CLI::App app{"Streaming change-point detection: detectors, tuning and Monte Carlo"};
    app.require_subcommand(1);

    RunConfig rc;
    const std::map<std::string, DetectorKind> kind_names{
        {"cusum", DetectorKind::cusum},
        {"adaptive", DetectorKind::adaptive},
        {"glr", DetectorKind::glr},
        {"das", DetectorKind::das},
    };

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--detector", rc.kind, "cusum|adaptive|glr|das")
            ->transform(CLI::CheckedTransformer(kind_names, CLI::ignore_case));
        cmd->add_option("--arl", rc.target_arl, "target average run length (gamma)");
        cmd->add_option("--sym-div", rc.sym_div, "minimum symmetric KL divergence (s')");
        cmd->add_option("--window", rc.window, "future-window length w (0 derives w*)");
        cmd->add_option("--threshold", rc.threshold, "detection threshold b");
        cmd->add_option("--drift", rc.drift, "drift term v");
        cmd->add_option("--seed", rc.seed, "master RNG seed");
        cmd->add_option("--trials", rc.trials, "Monte Carlo trials");
        cmd->add_flag("--tsv", rc.tsv, "machine-readable tab-separated output");
        cmd->add_option("--w-floor", rc.w_floor, "window search floor");
        cmd->add_option("--w-max", rc.w_max, "window search cap");
        cmd->add_option("--mean0", rc.mean0, "pre-change mean");
        cmd->add_option("--var0", rc.var0, "pre-change variance");
        cmd->add_option("--mean1", rc.mean1, "post-change mean");
        cmd->add_option("--var1", rc.var1, "post-change variance");
        cmd->add_option("--glr-lookback", rc.glr_max_lookback, "GLR candidate horizon");
        cmd->add_option("--glr-min-segment", rc.glr_min_segment, "GLR minimum segment");
        cmd->add_option("--output", rc.output_path, "output file (default stdout)");
        cmd->set_config("--config", "", "key=value configuration file");
    };

    CLI::App* detect = app.add_subcommand("detect", "detect change points in a CSV stream");
    add_common(detect);
    detect->add_option("input", rc.input_path, "CSV path ('-' for standard input)");

    CLI::App* tune_cmd = app.add_subcommand("tune", "derive w*, delta0*, v* and b");
    add_common(tune_cmd);

    CLI::App* simulate = app.add_subcommand("simulate", "estimate ARL or EDD by simulation");
    add_common(simulate);
    simulate->add_option("--mode", rc.mode, "arl|edd")
        ->check(CLI::IsMember({"arl", "edd"}));
    simulate->add_option("--horizon", rc.horizon, "censoring horizon (0: 50*arl)");

    CLI::App* curve = app.add_subcommand("curve", "EDD-versus-ARL curve over a threshold grid");
    add_common(curve);
    curve->add_option("--thresholds", rc.thresholds, "comma-separated threshold grid")
        ->delimiter(',');
    curve->add_option("--horizon", rc.horizon, "ARL censoring horizon");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err);
    }

    try {
        if (detect->parsed()) return cmd_detect(rc, in, out, err);
        if (tune_cmd->parsed()) return cmd_tune(rc, out, err);
        if (simulate->parsed()) return cmd_simulate(rc, out, err);
        if (curve->parsed()) return cmd_curve(rc, out, err);
    } catch (const std::invalid_argument& e) {
        err << "usage error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}

}  // namespace cpd
