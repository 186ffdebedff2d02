// serialize.hpp — JSON schemas for layouts, states, operators and system
// specs, plus deterministic CSV formatting.  All schemas carry a
// schema_version field; doubles print as the shortest round-trip text so
// files are stable byte-for-byte across runs.

#pragma once

#include "coopdyn/dynamics.hpp"

#include <string>

namespace coopdyn {

inline constexpr int kSchemaVersion = 1;

std::string to_json(const SpaceLayout& layout);
SpaceLayout layout_from_json(const std::string& text);

std::string to_json(const StateVector& state);
StateVector state_from_json(const std::string& text);

// Operators serialize as sparse triplets sorted by (row, col).
std::string to_json(const OperatorMatrix& op);
OperatorMatrix operator_from_json(const std::string& text);

std::string to_json(const SystemSpec& spec);
SystemSpec spec_from_json(const std::string& text);

// Shortest text that parses back to exactly the same double.
std::string format_double(double v);

// Minimal CSV assembly with deterministic numeric formatting.
class CsvTable {
public:
    explicit CsvTable(std::vector<std::string> columns);
    void add_row(const std::vector<std::string>& cells);
    std::string str() const;
    static std::string cell(double v) { return format_double(v); }
    static std::string cell(int v) { return std::to_string(v); }
    static std::string cell(std::size_t v) { return std::to_string(v); }

private:
    std::vector<std::string> columns_;
    std::vector<std::vector<std::string>> rows_;
};

std::string to_csv(const PropagationResult& result);
std::string to_csv(const RateScalingReport& report);

} // namespace coopdyn
