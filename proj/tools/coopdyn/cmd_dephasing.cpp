// cmd_dephasing.cpp — Coherence decay under pure dephasing: rate ratios
// and fitted exponents for independent-site and collective jump operators
// on the n-excitation symmetric states, plus the product-state fidelity
// rate as a reference for uncorrelated preparations.

#include "commands.hpp"
#include "svg.hpp"

#include <coopdyn/dynamics.hpp>
#include <coopdyn/errors.hpp>
#include <coopdyn/hamiltonians.hpp>
#include <coopdyn/serialize.hpp>
#include <coopdyn/state.hpp>

#include <Eigen/Dense>

#include <cmath>
#include <cstdio>

namespace coopdyn::cli {

namespace {

constexpr double kMaxIndependentDev = 0.02; // per-sample ratio vs n
constexpr double kMaxExponentDev = 0.04;    // fitted exponents vs 1 and 2
constexpr double kProductExpLo = 0.30;      // loose sanity band for the
constexpr double kProductExpHi = 0.80;      // sublinear product-state rate
constexpr double kZeroRateCeiling = 1e-10;  // gamma_phi = 0 residual rates

void add_samples(CsvTable& table, PlotSeries& series, const std::string& model,
                 const RateScalingReport& report) {
    for (const ScalingSample& s : report.samples) {
        table.add_row({model, CsvTable::cell(s.point.n), CsvTable::cell(s.predicted),
                       CsvTable::cell(s.measured), CsvTable::cell(s.abs_error)});
        if (s.point.n >= 1 && s.measured > 0.0)
            series.points.push_back(
                {std::log10(double(s.point.n)), std::log10(s.measured)});
    }
}

} // namespace

int cmd_dephasing(RunContext& ctx) {
    const json& sec = ctx.section("dephasing");
    check_keys(sec, "config.dephasing", {"sites", "n_values", "gamma_phi_per_ps"});
    const int sites = int(as_integer(sec, "sites", "config.dephasing"));
    const std::vector<int> n_values = as_integer_list(sec, "n_values", "config.dephasing");
    const double gamma_phi =
        ctx.convert(sec, "dephasing", "gamma_phi_per_ps", "1/ps", 1.0, "1/ps");
    if (sites < 1 || sites > 7) throw ConfigError("config.dephasing.sites: expected 1..7");
    if (n_values.empty()) throw ConfigError("config.dephasing.n_values: expected non-empty");
    for (int n : n_values)
        if (n < 1 || n > sites)
            throw ConfigError("config.dephasing.n_values: entries must lie in 1..sites");
    if (!(gamma_phi >= 0.0) || !std::isfinite(gamma_phi))
        throw ConfigError("config.dephasing.gamma_phi_per_ps: expected >= 0");

    if (gamma_phi == 0.0) {
        // Degenerate model: no jump operators act, so every coherence rate
        // must vanish and an exponent fit would divide zero by zero.
        SystemSpec spec;
        spec.group_a = {sites, 1.0};
        const SpaceLayout layout = build_layout(spec);
        const OperatorMatrix h = full_hamiltonian(spec);
        CsvTable table({"n", "coherence_rate_per_ps"});
        double worst = 0.0;
        for (int n : n_values) {
            const StateVector ground = dicke_state(layout, 0, 0);
            const StateVector dicke = dicke_state(layout, 0, n);
            StateVector mix = ground;
            mix.amplitudes = (ground.amplitudes + dicke.amplitudes) / std::sqrt(2.0);
            const Eigen::MatrixXcd rho0 = mix.amplitudes * mix.amplitudes.adjoint();
            DensityTracking tracking;
            tracking.coherences.push_back({"c", ground, dicke});
            const double t_end = 2.0;
            const PropagationResult res =
                dephasing_evolve(h, layout, {DephasingKind::Collective, 0.0}, rho0,
                                 {t_end / 2.0, t_end}, tracking);
            const double rate =
                std::log(res.values(0, 0) / res.values(1, 0)) / (t_end / 2.0);
            worst = std::max(worst, std::abs(rate));
            table.add_row({CsvTable::cell(n), CsvTable::cell(rate)});
        }
        const bool all_pass = worst <= kZeroRateCeiling;
        ctx.write_data("dephasing_zero_check.csv", table.str());
        json summary{{"schema_version", 1},
                     {"command", "dephasing"},
                     {"gamma_phi_per_ps", 0.0},
                     {"exponent_fit", "refused: zero dephasing rate makes the fit degenerate"},
                     {"max_abs_rate_per_ps", worst},
                     {"checks",
                      {{"rates_below_ceiling", all_pass},
                       {"rate_ceiling", kZeroRateCeiling}}},
                     {"all_pass", all_pass}};
        ctx.write_data("dephasing_summary.json", summary.dump(2) + "\n");
        std::printf("[dephasing] gamma_phi=0: max_rate=%.2e exponent fit refused -> %s\n",
                    worst, all_pass ? "PASS" : "FAIL");
        return all_pass ? 0 : 1;
    }

    const RateScalingReport ind = measure_decoherence_scaling(
        {DephasingKind::Independent, gamma_phi}, sites, n_values);
    const RateScalingReport col = measure_decoherence_scaling(
        {DephasingKind::Collective, gamma_phi}, sites, n_values);
    const RateScalingReport prod =
        measure_product_fidelity_scaling(sites, n_values, gamma_phi);

    CsvTable table({"model", "n", "predicted_ratio", "measured_ratio", "abs_error"});
    PlotSeries s_ind{"dicke, independent sites", {}, true, true};
    PlotSeries s_col{"dicke, collective", {}, true, true};
    PlotSeries s_prod{"product state, independent sites", {}, true, true};
    add_samples(table, s_ind, "dicke_independent", ind);
    add_samples(table, s_col, "dicke_collective", col);
    add_samples(table, s_prod, "product_independent", prod);

    double worst_ind = 0.0;
    for (const ScalingSample& s : ind.samples)
        worst_ind = std::max(worst_ind, std::abs(s.measured / s.predicted - 1.0));

    const bool ind_ok = worst_ind <= kMaxIndependentDev &&
                        std::abs(ind.fitted_exponent - 1.0) <= kMaxExponentDev;
    const bool col_ok = std::abs(col.fitted_exponent - 2.0) <= kMaxExponentDev;
    const bool prod_ok =
        prod.fitted_exponent > kProductExpLo && prod.fitted_exponent < kProductExpHi;
    const bool all_pass = ind_ok && col_ok && prod_ok;

    ctx.write_data("dephasing_rates.csv", table.str());

    json summary{
        {"schema_version", 1},
        {"command", "dephasing"},
        {"gamma_phi_per_ps", gamma_phi},
        {"models",
         {{"dicke_independent",
           {{"fitted_exponent", ind.fitted_exponent},
            {"fit_residual", ind.fit_residual},
            {"max_ratio_dev", worst_ind}}},
          {"dicke_collective",
           {{"fitted_exponent", col.fitted_exponent},
            {"fit_residual", col.fit_residual},
            {"differs_from_linear_claim", true},
            {"note", "collective dephasing of the n-excitation symmetric state measures "
                     "quadratic in n (exponent near 2), not linear; the linear-in-n law "
                     "holds for independent site dephasing instead. See the README "
                     "section on dephasing scaling."}}},
          {"product_independent",
           {{"fitted_exponent", prod.fitted_exponent},
            {"fit_residual", prod.fit_residual},
            {"note", "aggregate 1/e rate of uncorrelated sites grows sublinearly"}}}}},
        {"checks",
         {{"independent_matches_n", ind_ok},
          {"independent_ratio_tolerance", kMaxIndependentDev},
          {"collective_matches_n_squared", col_ok},
          {"exponent_tolerance", kMaxExponentDev},
          {"product_exponent_sublinear", prod_ok},
          {"product_exponent_band", {kProductExpLo, kProductExpHi}}}},
        {"all_pass", all_pass}};
    ctx.write_data("dephasing_summary.json", summary.dump(2) + "\n");

    PlotOptions opt;
    opt.title = "Dephasing rate scaling";
    opt.x_label = "log10 n";
    opt.y_label = "log10 rate ratio";
    ctx.write_plot("dephasing_scaling.svg", line_plot(opt, {s_ind, s_col, s_prod}));

    std::printf("[dephasing] exponents ind=%.3f col=%.3f prod=%.3f (col quadratic flagged) -> %s\n",
                ind.fitted_exponent, col.fitted_exponent, prod.fitted_exponent,
                all_pass ? "PASS" : "FAIL");
    return all_pass ? 0 : 1;
}

} // namespace coopdyn::cli
