#include "cpd/csv.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace cpd {

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return {};
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

bool parse_int(const std::string& field, std::int64_t& out) {
    if (field.empty()) return false;
    char* end = nullptr;
    out = std::strtoll(field.c_str(), &end, 10);
    return end == field.c_str() + field.size();
}

bool parse_double(const std::string& field, double& out) {
    if (field.empty()) return false;
    char* end = nullptr;
    out = std::strtod(field.c_str(), &end);
    return end == field.c_str() + field.size();
}

[[noreturn]] void fail(std::int64_t line, const std::string& what) {
    std::ostringstream msg;
    msg << "csv: line " << line << ": " << what;
    throw std::runtime_error(msg.str());
}

}  // namespace

std::vector<Sample> ingest_csv(std::istream& in) {
    std::vector<Sample> samples;
    std::string line;
    std::int64_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string row = trim(line);
        if (row.empty()) continue;
        const auto comma = row.find(',');
        if (comma == std::string::npos) {
            fail(line_no, "expected 'index,value'");
        }
        const std::string index_field = trim(row.substr(0, comma));
        const std::string value_field = trim(row.substr(comma + 1));

        std::int64_t index = 0;
        if (!parse_int(index_field, index)) {
            if (line_no == 1) continue;  // header row
            fail(line_no, "bad index field '" + index_field + "'");
        }
        double value = 0.0;
        if (!parse_double(value_field, value)) {
            fail(line_no, "bad value field '" + value_field + "'");
        }
        if (!std::isfinite(value)) {
            fail(line_no, "non-finite value");
        }
        samples.push_back({index, value});
    }
    return samples;
}

std::vector<Sample> ingest_csv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("csv: cannot open '" + path + "'");
    }
    return ingest_csv(in);
}

void write_events_csv(std::ostream& out, std::span<const ChangeEvent> events) {
    out << "alarm_index,decision_index,adopted_mean,adopted_variance\n";
    out << std::setprecision(6);
    for (const auto& e : events) {
        out << e.alarm_index << ',' << e.decision_index << ',' << e.adopted.mean << ','
            << e.adopted.variance << '\n';
    }
}

}  // namespace cpd
