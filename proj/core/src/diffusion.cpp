#include "coopdyn/diffusion.hpp"

#include "coopdyn/errors.hpp"
#include "coopdyn/parallel.hpp"
#include "coopdyn/rng.hpp"

#include <cmath>
#include <vector>

namespace coopdyn {

void DiffusionConfig::validate() const {
    if (!(alpha > 0.0) || !std::isfinite(alpha))
        throw ConfigError("diffusion: alpha must be positive and finite");
    if (!(gamma > 0.0) || !std::isfinite(gamma))
        throw ConfigError("diffusion: gamma must be positive and finite");
    if (!(tau > 0.0) || !std::isfinite(tau))
        throw ConfigError("diffusion: tau must be positive and finite");
    if (!(lifetime > 0.0) || !std::isfinite(lifetime))
        throw ConfigError("diffusion: lifetime must be positive and finite");
    if (lattice_dim != 1 && lattice_dim != 2)
        throw ConfigError("diffusion: lattice_dim must be 1 or 2");
    if (!(complex_diameter > 0.0)) throw ConfigError("diffusion: complex_diameter must be positive");
    if (!(target_length > 0.0)) throw ConfigError("diffusion: target_length must be positive");
    if (walkers == 0) throw ConfigError("diffusion: need at least one walker");
}

double effective_step_length(double alpha, double gamma, double tau) {
    if (!(alpha > 0.0) || !(gamma > 0.0) || !(tau > 0.0))
        throw ConfigError("effective_step_length: inputs must be positive");
    return alpha * gamma * tau;
}

double required_step_length(double target_length, double gamma, double lifetime) {
    if (!(target_length > 0.0) || !(gamma > 0.0) || !(lifetime > 0.0))
        throw ConfigError("required_step_length: inputs must be positive");
    return target_length / std::sqrt(gamma * lifetime);
}

NaiveHops naive_hop_count_and_time(double target_length, double lifetime) {
    if (!(target_length > 0.0) || !(lifetime > 0.0))
        throw ConfigError("naive_hop_count_and_time: inputs must be positive");
    NaiveHops out;
    out.hops = target_length * target_length;
    out.hop_time = lifetime / out.hops;
    return out;
}

namespace {

struct WalkerTally {
    double r2 = 0.0;     // squared displacement at death, lattice units²
    double hops = 0.0;
    bool reached = false;
};

// One walker, fully determined by its private stream.  Hops arrive as a
// Poisson process at rate γ (exponential inter-arrival times); each hop
// moves ℓ along a random axis direction.
WalkerTally walk_one(const DiffusionConfig& c, double ell, std::uint64_t index) {
    auto eng = stream_engine(c.rng_seed, index);
    const double t_death = c.exponential_lifetime
                               ? -c.lifetime * std::log1p(-uniform01(eng))
                               : c.lifetime;
    const double target2 = c.target_length * c.target_length;

    double x = 0.0, y = 0.0, t = 0.0, hops = 0.0;
    bool reached = false;
    for (;;) {
        t += -std::log1p(-uniform01(eng)) / c.gamma;
        if (t >= t_death) break;
        const double u = uniform01(eng);
        if (c.lattice_dim == 1) {
            x += u < 0.5 ? ell : -ell;
        } else {
            if (u < 0.25)
                x += ell;
            else if (u < 0.5)
                x -= ell;
            else if (u < 0.75)
                y += ell;
            else
                y -= ell;
        }
        hops += 1.0;
        if (!reached && x * x + y * y >= target2) reached = true;
    }
    return {x * x + y * y, hops, reached};
}

} // namespace

DiffusionResult simulate_walk(const DiffusionConfig& config, int workers) {
    config.validate();
    const double ell = effective_step_length(config.alpha, config.gamma, config.tau);

    std::vector<WalkerTally> tallies(config.walkers);
    parallel_for(config.walkers, workers, [&](std::size_t w) {
        tallies[w] = walk_one(config, ell, static_cast<std::uint64_t>(w));
    });

    // Serial reduction in walker order: the result is bitwise identical for
    // any worker count.
    double sum_r2 = 0.0, sum_r4 = 0.0, sum_hops = 0.0, reached = 0.0;
    for (const WalkerTally& t : tallies) {
        sum_r2 += t.r2;
        sum_r4 += t.r2 * t.r2;
        sum_hops += t.hops;
        reached += t.reached ? 1.0 : 0.0;
    }
    const double n = double(config.walkers);
    const double mean_r2 = sum_r2 / n;
    const double var_r2 = std::max(0.0, sum_r4 / n - mean_r2 * mean_r2);

    DiffusionResult out;
    out.step_length_ell = ell;
    out.rms_displacement_units = std::sqrt(mean_r2);
    // Standard error of √⟨r²⟩ by propagating the error of ⟨r²⟩.
    out.rms_standard_error =
        mean_r2 > 0.0 ? 0.5 * std::sqrt(var_r2 / n) / std::sqrt(mean_r2) : 0.0;
    out.rms_displacement_nm = out.rms_displacement_units * config.complex_diameter;
    out.incoherent_hops_mean = sum_hops / n;
    out.condition_met =
        ell > required_step_length(config.target_length, config.gamma, config.lifetime);
    out.walkers_reaching_target = reached / n;
    return out;
}

std::vector<SweepRow> sweep(const DiffusionConfig& base, const SweepAxes& axes, int workers) {
    const std::vector<double> alphas = axes.alpha.empty() ? std::vector<double>{base.alpha}
                                                          : axes.alpha;
    const std::vector<double> taus = axes.tau.empty() ? std::vector<double>{base.tau} : axes.tau;
    const std::vector<double> gammas = axes.gamma.empty() ? std::vector<double>{base.gamma}
                                                          : axes.gamma;
    std::vector<SweepRow> rows;
    for (double a : alphas)
        for (double t : taus)
            for (double g : gammas) {
                SweepRow row;
                row.config = base;
                row.config.alpha = a;
                row.config.tau = t;
                row.config.gamma = g;
                rows.push_back(row);
            }
    for (SweepRow& row : rows) row.result = simulate_walk(row.config, workers);
    return rows;
}

} // namespace coopdyn
