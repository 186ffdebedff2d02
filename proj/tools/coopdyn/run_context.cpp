#include "run_context.hpp"

#include <coopdyn/errors.hpp>

#include <openssl/evp.h>

#include <algorithm>
#include <fstream>

namespace coopdyn::cli {

std::string sha256_hex(const std::string& data) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int length = 0;
    if (EVP_Digest(data.data(), data.size(), digest, &length, EVP_sha256(), nullptr) != 1)
        throw std::runtime_error("sha256: digest computation failed");
    static const char hex[] = "0123456789abcdef";
    std::string out;
    out.reserve(std::size_t(length) * 2);
    for (unsigned int i = 0; i < length; ++i) {
        out.push_back(hex[digest[i] >> 4]);
        out.push_back(hex[digest[i] & 0x0f]);
    }
    return out;
}

json default_config() {
    return json::parse(R"({
      "schema_version": 1,
      "seed": 1,
      "workers": 0,
      "superradiance": {
        "max_sites": 6,
        "cutoff": 3,
        "gamma_per_ps": 0.1,
        "rwa": true
      },
      "supertransfer": {
        "max_sites_a": 4,
        "max_sites_b": 4,
        "gamma_per_ps": 0.1,
        "detuning_per_ps": 0.0
      },
      "sectors": {
        "sites_a": 3,
        "sites_b": 3,
        "bath_modes": 2,
        "bath_cutoff": 3,
        "inter_coupling_per_ps": 0.1,
        "intra_coupling_per_ps": 0.05,
        "bath_frequency_a_per_ps": 0.9,
        "bath_frequency_b_per_ps": 1.1,
        "bath_coupling_a_per_ps": 0.03,
        "bath_coupling_b_per_ps": 0.04,
        "disorder_widths_per_ps": [0.001, 0.002, 0.004, 0.008]
      },
      "dephasing": {
        "sites": 6,
        "n_values": [1, 2, 3, 4, 5],
        "gamma_phi_per_ps": 0.05
      },
      "diffusion": {
        "alpha": 1.0,
        "hop_rate_per_ps": 0.2,
        "coherence_time_ps": 20.0,
        "lifetime_ns": 1.0,
        "lifetime_endpoints_ns": [1.0, 1.5],
        "hop_rate_endpoints_per_ps": [0.2, 0.5],
        "lattice_dim": 2,
        "site_spacing_nm": 7.0,
        "target_sites": 300,
        "walkers": 100000,
        "exponential_lifetime": true,
        "sweep_alpha": [],
        "sweep_coherence_time_ps": [],
        "sweep_hop_rate_per_ps": []
      }
    })");
}

json preset_config(const std::string& name) {
    if (name != "paper-defaults")
        throw ConfigError("unknown preset: " + name);
    // Alpha values straddling the feasibility boundary
    // L / sqrt(gamma T) / (gamma tau) = 5.3033... for the canonical numbers.
    return json::parse(R"({
      "diffusion": {
        "alpha": 5.303300858899107,
        "sweep_alpha": [1.0, 2.0, 3.0, 4.0, 5.0, 5.303300858899107, 6.0, 8.0, 10.0]
      }
    })");
}

void merge_config(json& base, const json& patch) {
    if (!patch.is_object()) {
        base = patch;
        return;
    }
    if (!base.is_object()) base = json::object();
    for (const auto& [key, value] : patch.items()) {
        if (value.is_object())
            merge_config(base[key], value);
        else
            base[key] = value;
    }
}

void check_keys(const json& section, const std::string& path,
                const std::vector<std::string>& allowed) {
    if (!section.is_object())
        throw ConfigError(path + ": expected a JSON object");
    for (const auto& item : section.items())
        if (std::find(allowed.begin(), allowed.end(), item.key()) == allowed.end())
            throw ConfigError(path + ": unknown key '" + item.key() + "'");
}

namespace {
const json& require(const json& section, const std::string& key, const std::string& path) {
    auto it = section.find(key);
    if (it == section.end()) throw ConfigError(path + "." + key + ": missing");
    return *it;
}
} // namespace

double as_number(const json& section, const std::string& key, const std::string& path) {
    const json& v = require(section, key, path);
    if (!v.is_number()) throw ConfigError(path + "." + key + ": expected a number");
    return v.get<double>();
}

std::int64_t as_integer(const json& section, const std::string& key, const std::string& path) {
    const json& v = require(section, key, path);
    if (!v.is_number_integer()) throw ConfigError(path + "." + key + ": expected an integer");
    return v.get<std::int64_t>();
}

bool as_boolean(const json& section, const std::string& key, const std::string& path) {
    const json& v = require(section, key, path);
    if (!v.is_boolean()) throw ConfigError(path + "." + key + ": expected a boolean");
    return v.get<bool>();
}

std::vector<double> as_number_list(const json& section, const std::string& key,
                                   const std::string& path) {
    const json& v = require(section, key, path);
    if (!v.is_array()) throw ConfigError(path + "." + key + ": expected an array of numbers");
    std::vector<double> out;
    for (const json& item : v) {
        if (!item.is_number())
            throw ConfigError(path + "." + key + ": expected an array of numbers");
        out.push_back(item.get<double>());
    }
    return out;
}

std::vector<int> as_integer_list(const json& section, const std::string& key,
                                 const std::string& path) {
    const json& v = require(section, key, path);
    if (!v.is_array()) throw ConfigError(path + "." + key + ": expected an array of integers");
    std::vector<int> out;
    for (const json& item : v) {
        if (!item.is_number_integer())
            throw ConfigError(path + "." + key + ": expected an array of integers");
        out.push_back(item.get<int>());
    }
    return out;
}

RunContext::RunContext(json config, std::filesystem::path out_dir, std::string command,
                       std::uint64_t seed, int workers)
    : config_(std::move(config)),
      out_dir_(std::move(out_dir)),
      command_(std::move(command)),
      seed_(seed),
      workers_(workers),
      start_(std::chrono::steady_clock::now()) {}

const json& RunContext::section(const std::string& name) const {
    auto it = config_.find(name);
    if (it == config_.end() || !it->is_object())
        throw ConfigError("config." + name + ": missing section");
    return *it;
}

double RunContext::convert(const json& section, const std::string& section_name,
                           const std::string& key, const std::string& input_unit,
                           double factor, const std::string& internal_unit) {
    const double input = as_number(section, key, "config." + section_name);
    const double internal = input * factor;
    conversions_.push_back({{"field", section_name + "." + key},
                            {"input", input},
                            {"input_unit", input_unit},
                            {"internal", internal},
                            {"internal_unit", internal_unit}});
    return internal;
}

void RunContext::note_seed(const std::string& name, std::uint64_t value) {
    seeds_[name] = value;
}

void RunContext::record_timing(const std::string& stage, double milliseconds) {
    timings_[stage] = milliseconds;
}

void RunContext::write_output(const std::string& name, const std::string& content,
                              const std::string& kind) {
    std::filesystem::create_directories(out_dir_);
    const std::filesystem::path path = out_dir_ / name;
    std::ofstream file(path, std::ios::binary);
    if (!file) throw std::runtime_error("cannot open for writing: " + path.string());
    file.write(content.data(), std::streamsize(content.size()));
    file.close();
    if (!file) throw std::runtime_error("write failed: " + path.string());
    outputs_.push_back({{"path", name},
                        {"kind", kind},
                        {"bytes", content.size()},
                        {"sha256", sha256_hex(content)}});
}

void RunContext::write_data(const std::string& name, const std::string& content) {
    write_output(name, content, "data");
}

void RunContext::write_plot(const std::string& name, const std::string& content) {
    write_output(name, content, "plot");
}

void RunContext::write_manifest(int exit_code) {
    const double total_ms = std::chrono::duration<double, std::milli>(
                                std::chrono::steady_clock::now() - start_)
                                .count();
    json manifest{{"schema_version", 1},
                  {"artifact_version", COOPDYN_VERSION},
                  {"command", command_},
                  {"config", config_},
                  {"seeds", seeds_},
                  {"unit_conversions", conversions_},
                  {"timings_ms", {{"total", total_ms}, {"stages", timings_}}},
                  {"outputs", outputs_},
                  {"exit_code", exit_code}};
    std::filesystem::create_directories(out_dir_);
    const std::filesystem::path path = out_dir_ / "manifest.json";
    std::ofstream file(path, std::ios::binary);
    if (!file) throw std::runtime_error("cannot open for writing: " + path.string());
    const std::string text = manifest.dump(2) + "\n";
    file.write(text.data(), std::streamsize(text.size()));
}

} // namespace coopdyn::cli
