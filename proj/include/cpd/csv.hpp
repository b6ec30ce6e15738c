#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "cpd/detectors.hpp"

namespace cpd {

struct Sample {
    std::int64_t index = 0;
    double value = 0.0;
};

/// Reads `index,value` rows. An optional header line (non-numeric first
/// field on line 1) is skipped. Gaps in the index column are tolerated;
/// samples are kept in row order. Unparsable rows and non-finite values
/// throw std::runtime_error naming the 1-based line number.
std::vector<Sample> ingest_csv(std::istream& in);
std::vector<Sample> ingest_csv_file(const std::string& path);

/// Writes `alarm_index,decision_index,adopted_mean,adopted_variance` with a
/// header row, 6 significant digits.
void write_events_csv(std::ostream& out, std::span<const ChangeEvent> events);

}  // namespace cpd
