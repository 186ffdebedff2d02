// run_context.hpp — Shared plumbing for the coopdyn command-line tool:
// resolved configuration, output-directory handling, unit-conversion and
// seed logging, stage timings, and the run manifest with content hashes.

#pragma once

#include <json.hpp>

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace coopdyn::cli {

using json = nlohmann::json;

// Lowercase hex SHA-256 of a byte string.
std::string sha256_hex(const std::string& data);

// Built-in configuration every run starts from.
json default_config();

// The paper-defaults preset: the canonical headline configuration
// (feasibility-boundary alpha sweep on top of the built-in defaults).
json preset_config(const std::string& name);

// Deep-merges `patch` into `base` (objects merge recursively, everything
// else replaces).  Unknown keys are checked later, per section.
void merge_config(json& base, const json& patch);

// Throws ConfigError when `section` contains a key outside `allowed`.
void check_keys(const json& section, const std::string& path,
                const std::vector<std::string>& allowed);

// Typed field access with ConfigError diagnostics naming the field path.
double as_number(const json& section, const std::string& key, const std::string& path);
std::int64_t as_integer(const json& section, const std::string& key, const std::string& path);
bool as_boolean(const json& section, const std::string& key, const std::string& path);
std::vector<double> as_number_list(const json& section, const std::string& key,
                                   const std::string& path);
std::vector<int> as_integer_list(const json& section, const std::string& key,
                                 const std::string& path);

class RunContext {
public:
    RunContext(json config, std::filesystem::path out_dir, std::string command,
               std::uint64_t seed, int workers);

    const json& config() const { return config_; }
    const json& section(const std::string& name) const;
    std::uint64_t seed() const { return seed_; }
    int workers() const { return workers_; }
    const std::filesystem::path& out_dir() const { return out_dir_; }

    // Reads section[key], records the boundary conversion, and returns
    // value * factor (the internal-unit representation).
    double convert(const json& section, const std::string& section_name,
                   const std::string& key, const std::string& input_unit, double factor,
                   const std::string& internal_unit);

    void note_seed(const std::string& name, std::uint64_t value);
    void record_timing(const std::string& stage, double milliseconds);

    // Writes a file under the output directory and records its hash in the
    // manifest.  kind is "data" (byte-stable across reruns) or "plot".
    void write_data(const std::string& name, const std::string& content);
    void write_plot(const std::string& name, const std::string& content);

    void write_manifest(int exit_code);

private:
    void write_output(const std::string& name, const std::string& content,
                      const std::string& kind);

    json config_;
    std::filesystem::path out_dir_;
    std::string command_;
    std::uint64_t seed_ = 0;
    int workers_ = 0;
    std::chrono::steady_clock::time_point start_;
    json conversions_ = json::array();
    json seeds_ = json::object();
    json timings_ = json::object();
    json outputs_ = json::array();
};

} // namespace coopdyn::cli
