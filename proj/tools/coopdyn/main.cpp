// main.cpp — coopdyn command-line front end.
//
// Single binary with subcommands superradiance | supertransfer | sectors |
// dephasing | diffusion | all.  Configuration resolves in precedence order
// built-in defaults < --preset < --config file < individual flags; the
// output directory resolves --out > COOPDYN_OUT > config "out_dir" >
// ./coopdyn-out.  Exit codes: 0 all checks passed, 1 tolerance failure,
// 2 usage or configuration error (nothing is written in that case).
// Every run writes one manifest.json with the resolved config, seeds,
// unit conversions, timings, and a SHA-256 per output file.

#include "commands.hpp"
#include "run_context.hpp"

#include <coopdyn/errors.hpp>

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

using coopdyn::cli::json;
using coopdyn::cli::RunContext;

struct Args {
    std::string config_path;
    std::string out_dir;
    std::string preset;
    std::optional<std::uint64_t> seed;
    std::optional<int> workers;
};

json load_config(const Args& args) {
    json config = coopdyn::cli::default_config();
    if (!args.preset.empty())
        coopdyn::cli::merge_config(config, coopdyn::cli::preset_config(args.preset));
    if (!args.config_path.empty()) {
        std::ifstream file(args.config_path);
        if (!file)
            throw coopdyn::ConfigError("cannot open config file: " + args.config_path);
        std::stringstream buffer;
        buffer << file.rdbuf();
        json user;
        try {
            user = json::parse(buffer.str());
        } catch (const json::exception& e) {
            throw coopdyn::ConfigError("config file is not valid JSON: " +
                                       std::string(e.what()));
        }
        if (!user.is_object())
            throw coopdyn::ConfigError("config file must hold a JSON object");
        if (user.contains("schema_version") &&
            (!user["schema_version"].is_number_integer() || user["schema_version"] != 1))
            throw coopdyn::ConfigError("config.schema_version: expected 1");
        coopdyn::cli::merge_config(config, user);
    }
    if (args.seed) config["seed"] = *args.seed;
    if (args.workers) config["workers"] = *args.workers;
    coopdyn::cli::check_keys(config, "config",
                             {"schema_version", "seed", "workers", "out_dir",
                              "superradiance", "supertransfer", "sectors", "dephasing",
                              "diffusion"});
    return config;
}

std::string resolve_out_dir(const Args& args, const json& config) {
    if (!args.out_dir.empty()) return args.out_dir;
    if (const char* env = std::getenv("COOPDYN_OUT"); env != nullptr && env[0] != '\0')
        return env;
    if (config.contains("out_dir")) {
        if (!config["out_dir"].is_string())
            throw coopdyn::ConfigError("config.out_dir: expected a string");
        return config["out_dir"].get<std::string>();
    }
    return "coopdyn-out";
}

int run_stage(RunContext& ctx, const std::string& name) {
    using Command = int (*)(RunContext&);
    static const std::vector<std::pair<std::string, Command>> table{
        {"superradiance", coopdyn::cli::cmd_superradiance},
        {"supertransfer", coopdyn::cli::cmd_supertransfer},
        {"sectors", coopdyn::cli::cmd_sectors},
        {"dephasing", coopdyn::cli::cmd_dephasing},
        {"diffusion", coopdyn::cli::cmd_diffusion},
    };
    int code = 0;
    for (const auto& [stage, command] : table) {
        if (name != "all" && name != stage) continue;
        const auto start = std::chrono::steady_clock::now();
        code = std::max(code, command(ctx));
        ctx.record_timing(stage, std::chrono::duration<double, std::milli>(
                                     std::chrono::steady_clock::now() - start)
                                     .count());
    }
    return code;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"coopdyn — symmetry-enhanced quantum dynamics laboratory"};
    app.require_subcommand(1);

    Args args;
    app.add_option("--config", args.config_path, "JSON config file (merged over defaults)");
    app.add_option("--out", args.out_dir, "output directory (overrides COOPDYN_OUT)");
    app.add_option("--seed", args.seed, "master RNG seed (overrides config)");
    app.add_option("--workers", args.workers, "worker threads, 0 = hardware")
        ->check(CLI::NonNegativeNumber);
    app.add_option("--preset", args.preset, "named preset: paper-defaults")
        ->check(CLI::IsMember({"paper-defaults"}));

    const std::vector<std::pair<std::string, std::string>> subcommands{
        {"superradiance", "collective emission amplitudes and short-time rates"},
        {"supertransfer", "two-group transfer rates and Rabi verification"},
        {"sectors", "cooperative-sector decomposition and disorder leakage"},
        {"dephasing", "coherence decay exponents for both dephasing models"},
        {"diffusion", "random-walk transport and feasibility arithmetic"},
        {"all", "run every command into one output directory"},
    };
    for (const auto& [name, description] : subcommands)
        app.add_subcommand(name, description)->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }
    const std::string command = app.get_subcommands().front()->get_name();

    json config;
    std::string out_dir;
    try {
        config = load_config(args);
        out_dir = resolve_out_dir(args, config);
    } catch (const coopdyn::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    }

    const std::uint64_t seed = config["seed"].is_number_unsigned() ||
                                       config["seed"].is_number_integer()
                                   ? config["seed"].get<std::uint64_t>()
                                   : 0;
    const int workers = config["workers"].is_number_integer()
                            ? config["workers"].get<int>()
                            : 0;
    RunContext ctx(config, out_dir, command, seed, workers);

    int code = 0;
    try {
        code = run_stage(ctx, command);
    } catch (const coopdyn::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const coopdyn::CapacityError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        code = 1;
    }

    try {
        ctx.write_manifest(code);
    } catch (const std::exception& e) {
        std::cerr << "error writing manifest: " << e.what() << "\n";
        return code == 0 ? 1 : code;
    }
    std::printf("coopdyn %s: %s (outputs in %s)\n", command.c_str(),
                code == 0 ? "PASS" : "FAIL", out_dir.c_str());
    return code;
}
