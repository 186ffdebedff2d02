// diffusion.hpp — Coarse-grained exciton transport: the coherent step
// length ℓ = αγτ, the required step length L/√(γT), hop-count arithmetic,
// and a Monte Carlo random walk with ℓ-unit steps.

#pragma once

#include <cstdint>
#include <vector>

namespace coopdyn {

struct DiffusionConfig {
    double alpha = 1.0;          // cooperative enhancement factor
    double gamma = 0.2;          // incoherent hop rate, 1/ps
    double tau = 20.0;           // hopping decoherence time, ps
    double lifetime = 1000.0;    // exciton lifetime T, ps
    int lattice_dim = 2;         // 1 or 2
    double complex_diameter = 7.0; // nm per lattice unit, reporting only
    double target_length = 300.0;  // required displacement L, lattice units
    std::size_t walkers = 100000;
    std::uint64_t rng_seed = 1;
    bool exponential_lifetime = true; // false: every walker lives exactly T

    void validate() const; // throws ConfigError
};

struct DiffusionResult {
    double step_length_ell = 0.0;       // αγτ
    double rms_displacement_units = 0.0;
    double rms_standard_error = 0.0;
    double rms_displacement_nm = 0.0;
    double incoherent_hops_mean = 0.0;
    bool condition_met = false;         // ℓ > L/√(γT)
    double walkers_reaching_target = 0.0; // fraction with |r| ≥ L
};

// ℓ = α γ τ.  Throws ConfigError on non-positive input.
double effective_step_length(double alpha, double gamma, double tau);

// L / √(γ T), the step length needed to cover L in lifetime T.
double required_step_length(double target_length, double gamma, double lifetime);

struct NaiveHops {
    double hops = 0.0;     // L²
    double hop_time = 0.0; // T / L²
};
NaiveHops naive_hop_count_and_time(double target_length, double lifetime);

// Walk `walkers` independent excitons: each lives for an (optionally
// exponential) lifetime, hops at rate γ, and each hop displaces it ℓ
// lattice units along a uniformly random axis direction.  Per-walker RNG
// streams derive from (seed, walker index), so the result is independent
// of execution order; `workers` = 0 uses the hardware thread count.
DiffusionResult simulate_walk(const DiffusionConfig& config, int workers = 1);

struct SweepAxes {
    std::vector<double> alpha; // empty axis = keep base value
    std::vector<double> tau;
    std::vector<double> gamma;
};

struct SweepRow {
    DiffusionConfig config;
    DiffusionResult result;
};

// Full-factorial sweep, rows ordered lexicographically by (alpha, tau,
// gamma); the walker loop inside each row is what parallelizes.
std::vector<SweepRow> sweep(const DiffusionConfig& base, const SweepAxes& axes, int workers = 1);

} // namespace coopdyn
