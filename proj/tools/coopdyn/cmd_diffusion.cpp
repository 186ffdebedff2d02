// cmd_diffusion.cpp — Coarse-grained transport: the headline-number
// reproduction block (naive hop budget, hop time, and the two alpha*tau
// feasibility thresholds), a Monte Carlo walk at the configured point, a
// full-factorial sweep, and the feasibility boundary curve.

#include "commands.hpp"
#include "svg.hpp"

#include <coopdyn/diffusion.hpp>
#include <coopdyn/errors.hpp>
#include <coopdyn/serialize.hpp>

#include <cmath>
#include <cstdio>

namespace coopdyn::cli {

namespace {

// Pinned reproduction targets and rounding tolerances.  These encode the
// canonical L = 300 analysis: roughly 1e5 naive hops, a naive hop time in
// the 10-17 fs window, and alpha*tau thresholds near 100 ps (slow-hop
// reading) and near 20 ps (fast-hop reading).
constexpr double kHopsTarget = 1e5;
constexpr double kHopsMaxFactor = 1.5;
constexpr double kHopTimeLoFs = 10.0;
constexpr double kHopTimeHiFs = 17.0;
constexpr double kAlphaTauSlowTargetPs = 100.0;
constexpr double kAlphaTauSlowRelTol = 0.10;
constexpr double kAlphaTauFastTargetPs = 20.0;
constexpr double kAlphaTauFastMaxFactor = 1.5;

std::string sweep_csv(const std::vector<SweepRow>& rows) {
    CsvTable table({"alpha", "tau_ps", "gamma_per_ps", "ell", "rms_units", "rms_se",
                    "rms_nm", "hops_mean", "condition_met", "reaching_target"});
    for (const SweepRow& row : rows)
        table.add_row({CsvTable::cell(row.config.alpha), CsvTable::cell(row.config.tau),
                       CsvTable::cell(row.config.gamma),
                       CsvTable::cell(row.result.step_length_ell),
                       CsvTable::cell(row.result.rms_displacement_units),
                       CsvTable::cell(row.result.rms_standard_error),
                       CsvTable::cell(row.result.rms_displacement_nm),
                       CsvTable::cell(row.result.incoherent_hops_mean),
                       CsvTable::cell(int(row.result.condition_met)),
                       CsvTable::cell(row.result.walkers_reaching_target)});
    return table.str();
}

json result_json(const DiffusionResult& r) {
    return {{"ell", r.step_length_ell},
            {"rms_units", r.rms_displacement_units},
            {"rms_se", r.rms_standard_error},
            {"rms_nm", r.rms_displacement_nm},
            {"hops_mean", r.incoherent_hops_mean},
            {"condition_met", r.condition_met},
            {"reaching_target", r.walkers_reaching_target}};
}

} // namespace

int cmd_diffusion(RunContext& ctx) {
    const json& sec = ctx.section("diffusion");
    check_keys(sec, "config.diffusion",
               {"alpha", "hop_rate_per_ps", "coherence_time_ps", "lifetime_ns",
                "lifetime_endpoints_ns", "hop_rate_endpoints_per_ps", "lattice_dim",
                "site_spacing_nm", "target_sites", "walkers", "exponential_lifetime",
                "sweep_alpha", "sweep_coherence_time_ps", "sweep_hop_rate_per_ps"});

    DiffusionConfig base;
    base.alpha = as_number(sec, "alpha", "config.diffusion");
    base.gamma = ctx.convert(sec, "diffusion", "hop_rate_per_ps", "1/ps", 1.0, "1/ps");
    base.tau = ctx.convert(sec, "diffusion", "coherence_time_ps", "ps", 1.0, "ps");
    base.lifetime = ctx.convert(sec, "diffusion", "lifetime_ns", "ns", 1000.0, "ps");
    base.lattice_dim = int(as_integer(sec, "lattice_dim", "config.diffusion"));
    base.complex_diameter =
        ctx.convert(sec, "diffusion", "site_spacing_nm", "nm", 1.0, "nm");
    base.target_length = as_number(sec, "target_sites", "config.diffusion");
    const std::int64_t walkers = as_integer(sec, "walkers", "config.diffusion");
    if (walkers < 1) throw ConfigError("config.diffusion.walkers: expected >= 1");
    base.walkers = std::size_t(walkers);
    base.exponential_lifetime = as_boolean(sec, "exponential_lifetime", "config.diffusion");
    base.rng_seed = ctx.seed();
    base.validate();
    ctx.note_seed("diffusion.walkers", ctx.seed());

    const std::vector<double> lifetimes_ns =
        as_number_list(sec, "lifetime_endpoints_ns", "config.diffusion");
    const std::vector<double> hop_rates =
        as_number_list(sec, "hop_rate_endpoints_per_ps", "config.diffusion");
    if (lifetimes_ns.empty() || hop_rates.size() != 2)
        throw ConfigError("config.diffusion: lifetime_endpoints_ns must be non-empty and "
                          "hop_rate_endpoints_per_ps must hold exactly two rates");

    SweepAxes axes;
    axes.alpha = as_number_list(sec, "sweep_alpha", "config.diffusion");
    axes.tau = as_number_list(sec, "sweep_coherence_time_ps", "config.diffusion");
    axes.gamma = as_number_list(sec, "sweep_hop_rate_per_ps", "config.diffusion");

    // Reproduction block: pure closed-form arithmetic on the configured
    // target length and the lifetime / hop-rate endpoint readings.
    const double L = base.target_length;
    json hop_rows = json::array();
    bool hops_ok = true, hop_time_ok = true;
    double hops_value = 0.0;
    for (double t_ns : lifetimes_ns) {
        const NaiveHops naive = naive_hop_count_and_time(L, t_ns * 1000.0);
        const double fs = naive.hop_time * 1000.0;
        hops_value = naive.hops;
        const double factor = std::max(naive.hops / kHopsTarget, kHopsTarget / naive.hops);
        hops_ok = hops_ok && factor <= kHopsMaxFactor;
        hop_time_ok = hop_time_ok && fs >= kHopTimeLoFs && fs <= kHopTimeHiFs;
        hop_rows.push_back({{"lifetime_ns", t_ns},
                            {"naive_hops", naive.hops},
                            {"naive_hop_time_fs", fs}});
    }
    const double t0_ps = lifetimes_ns.front() * 1000.0;
    const double at_slow = required_step_length(L, hop_rates[0], t0_ps) / hop_rates[0];
    const double at_fast = required_step_length(L, hop_rates[1], t0_ps) / hop_rates[1];
    const bool at_slow_ok =
        std::abs(at_slow / kAlphaTauSlowTargetPs - 1.0) <= kAlphaTauSlowRelTol;
    const double fast_factor =
        std::max(at_fast / kAlphaTauFastTargetPs, kAlphaTauFastTargetPs / at_fast);
    const bool at_fast_ok = fast_factor <= kAlphaTauFastMaxFactor;

    // Monte Carlo: the configured point, then the sweep.
    const DiffusionResult walk = simulate_walk(base, ctx.workers());
    const std::vector<SweepRow> rows = sweep(base, axes, ctx.workers());
    ctx.write_data("diffusion_sweep.csv", sweep_csv(rows));

    // Feasibility boundary: required step length vs lifetime around the
    // configured point, against the achieved step length.
    const double ell = effective_step_length(base.alpha, base.gamma, base.tau);
    CsvTable boundary({"lifetime_ps", "required_ell", "achieved_ell", "condition_met"});
    PlotSeries required_curve{"required ell = L / sqrt(gamma T)", {}, true, false};
    PlotSeries achieved_line{"achieved ell = alpha gamma tau", {}, true, false};
    for (int k = 0; k <= 24; ++k) {
        const double t = base.lifetime * std::pow(10.0, -1.0 + 2.0 * double(k) / 24.0);
        const double need = required_step_length(L, base.gamma, t);
        boundary.add_row({CsvTable::cell(t), CsvTable::cell(need), CsvTable::cell(ell),
                          CsvTable::cell(int(ell > need))});
        required_curve.points.push_back({std::log10(t), need});
        achieved_line.points.push_back({std::log10(t), ell});
    }
    ctx.write_data("diffusion_boundary.csv", boundary.str());

    const bool all_pass = hops_ok && hop_time_ok && at_slow_ok && at_fast_ok;

    json summary{{"schema_version", 1},
                 {"command", "diffusion"},
                 {"config",
                  {{"alpha", base.alpha},
                   {"gamma_per_ps", base.gamma},
                   {"tau_ps", base.tau},
                   {"lifetime_ps", base.lifetime},
                   {"lattice_dim", base.lattice_dim},
                   {"site_spacing_nm", base.complex_diameter},
                   {"target_sites", base.target_length},
                   {"walkers", base.walkers},
                   {"exponential_lifetime", base.exponential_lifetime}}},
                 {"headline_checks",
                  {{"naive_hops",
                    {{"value", hops_value},
                     {"target", kHopsTarget},
                     {"max_factor", kHopsMaxFactor},
                     {"pass", hops_ok}}},
                   {"naive_hop_time_fs",
                    {{"rows", hop_rows},
                     {"window_fs", {kHopTimeLoFs, kHopTimeHiFs}},
                     {"pass", hop_time_ok}}},
                   {"alpha_tau_slow_ps",
                    {{"value", at_slow},
                     {"target", kAlphaTauSlowTargetPs},
                     {"rel_tol", kAlphaTauSlowRelTol},
                     {"pass", at_slow_ok}}},
                   {"alpha_tau_fast_ps",
                    {{"value", at_fast},
                     {"target", kAlphaTauFastTargetPs},
                     {"max_factor", kAlphaTauFastMaxFactor},
                     {"pass", at_fast_ok}}}}},
                 {"base_walk", result_json(walk)},
                 {"required_ell", required_step_length(L, base.gamma, base.lifetime)},
                 {"achieved_ell", ell},
                 {"sweep_rows", rows.size()},
                 {"all_pass", all_pass}};
    ctx.write_data("diffusion_summary.json", summary.dump(2) + "\n");

    // RMS against the first swept axis (falling back to alpha at the base
    // point when no axis is swept).
    PlotSeries rms{"RMS displacement (lattice units)", {}, true, true};
    std::string axis_label = "alpha";
    for (const SweepRow& row : rows) {
        double x = row.config.alpha;
        if (!axes.tau.empty() && axes.alpha.empty()) {
            x = row.config.tau;
            axis_label = "tau (ps)";
        } else if (!axes.gamma.empty() && axes.alpha.empty() && axes.tau.empty()) {
            x = row.config.gamma;
            axis_label = "gamma (1/ps)";
        }
        rms.points.push_back({x, row.result.rms_displacement_units});
    }
    PlotSeries target{"target L", {}, true, false};
    if (!rms.points.empty()) {
        target.points.push_back({rms.points.front()[0], L});
        target.points.push_back({rms.points.back()[0], L});
    }
    PlotOptions opt;
    opt.title = "Random-walk RMS displacement";
    opt.x_label = axis_label;
    opt.y_label = "RMS displacement (lattice units)";
    ctx.write_plot("diffusion_rms.svg", line_plot(opt, {rms, target}));

    PlotOptions bopt;
    bopt.title = "Feasibility boundary";
    bopt.x_label = "log10 lifetime (ps)";
    bopt.y_label = "step length ell (lattice units)";
    ctx.write_plot("diffusion_boundary.svg", line_plot(bopt, {required_curve, achieved_line}));

    std::printf("[diffusion] hops=%.0f at_slow=%.1fps at_fast=%.1fps rms=%.1f ell=%.2f "
                "(need %.2f) sweep_rows=%zu -> %s\n",
                hops_value, at_slow, at_fast, walk.rms_displacement_units, ell,
                required_step_length(L, base.gamma, base.lifetime), rows.size(),
                all_pass ? "PASS" : "FAIL");
    return all_pass ? 0 : 1;
}

} // namespace coopdyn::cli
