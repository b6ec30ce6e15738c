#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "cpd/detectors.hpp"

namespace cpd {

struct RunConfig {
    std::string command;
    std::string input_path;   // detect; "-" reads standard input
    std::string output_path;  // empty writes to stdout
    DetectorKind kind = DetectorKind::das;

    double target_arl = 5000.0;
    double sym_div = 1.0;
    int window = 0;  // 0 derives w* from (target_arl, sym_div)
    std::optional<double> threshold;
    std::optional<double> drift;
    std::optional<double> mean0, var0;  // pre-change; estimated when absent
    std::optional<double> mean1, var1;  // post-change scenario / cusum hypothesis

    std::uint64_t seed = 1;
    int trials = 500;
    std::int64_t horizon = 0;  // 0 picks 50 * target_arl
    bool tsv = false;
    int w_floor = 20;
    int w_max = 500;
    int glr_max_lookback = 500;
    int glr_min_segment = 2;

    std::vector<double> thresholds;  // curve grid
    std::string mode = "arl";        // simulate: arl | edd
};

int cmd_detect(const RunConfig& rc, std::istream& in, std::ostream& out, std::ostream& err);
int cmd_tune(const RunConfig& rc, std::ostream& out, std::ostream& err);
int cmd_simulate(const RunConfig& rc, std::ostream& out, std::ostream& err);
int cmd_curve(const RunConfig& rc, std::ostream& out, std::ostream& err);

/// Full command-line entry point (argument parsing plus dispatch); used by
/// the binary and exercised directly by tests.
int run_cli(int argc, const char* const* argv, std::istream& in, std::ostream& out,
            std::ostream& err);

}  // namespace cpd
