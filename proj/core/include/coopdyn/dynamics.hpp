// dynamics.hpp — Closed-system Krylov propagation, short-time rate
// extraction, Rabi frequency measurement, and Lindblad pure dephasing.

#pragma once

#include "coopdyn/sectors.hpp"

#include <Eigen/Dense>

#include <string>
#include <utility>
#include <vector>

namespace coopdyn {

// Observables recorded during state propagation: |⟨φ|ψ(t)⟩|² per named
// state, ⟨ψ|A|ψ⟩ per named Hermitian operator.
struct Tracking {
    std::vector<std::pair<std::string, StateVector>> overlaps;
    std::vector<std::pair<std::string, OperatorMatrix>> expectations;
};

struct PropagationResult {
    std::vector<double> times;
    std::vector<std::string> columns;
    Eigen::MatrixXd values; // times × columns

    double truncation_leak = 0.0; // max top-Fock-level population seen
    double norm_drift = 0.0;      // max |‖ψ‖−1| (unitary runs)
    double trace_drift = 0.0;     // max |tr ρ − 1| (dephasing runs)
    double min_eigenvalue = 0.0;  // most negative ρ eigenvalue seen

    bool valid = true;
    std::string flag_reason;
};

// Lanczos propagator for Hermitian H: ψ ← exp(−iH dt) ψ with a per-step
// error estimate kept below the tolerance by adaptive substepping.
class KrylovPropagator {
public:
    KrylovPropagator(const OperatorMatrix& h, StateVector psi0, double tol = 1e-10);

    void advance(double dt);
    const StateVector& state() const { return psi_; }
    double time() const { return t_; }
    double norm_drift() const { return norm_drift_; }

private:
    void step(double dt); // one Lanczos step, throws ConvergenceError

    const SparseCd* h_;
    StateVector psi_;
    double tol_;
    double t_ = 0.0;
    double norm_drift_ = 0.0;
    int max_krylov_ = 40;
};

// ψ(t) = exp(−iHt) ψ0 sampled on an increasing time grid.  The result is
// flagged invalid when the top Fock level of any mode exceeds `leak_tol`.
PropagationResult evolve(const OperatorMatrix& h, const StateVector& psi0,
                         const std::vector<double>& times, double tol = 1e-10,
                         const Tracking& tracking = {}, double leak_tol = 1e-6);

struct ShortTimeRate {
    double rate = 0.0;         // R in |⟨target|ψ(t)⟩|² ≈ R t²
    double fit_residual = 0.0; // relative RMS of the quadratic fit
    double max_population = 0.0;
};

// Fits the early-time transition probability to R t² (with a t⁴ correction
// absorbing the next order).  Requires ⟨target|ψ0⟩ = 0 and a window where
// the target population stays below 5% (throws RegimeError otherwise).
ShortTimeRate short_time_rate(const OperatorMatrix& h, const StateVector& psi0,
                              const StateVector& target, double t_max, int samples = 24);

// Angular frequency of the population oscillation |⟨b|ψ(t)⟩|² for dynamics
// confined to span{a, b}; found by locating the first population maximum
// (bisection on the exact derivative).  Throws RegimeError when more than
// 1% of the population leaks out of the span.
double rabi_frequency(const OperatorMatrix& h, const StateVector& a, const StateVector& b);

enum class DephasingKind {
    Independent, // one σz jump operator per site, each at rate γφ
    Collective,  // single jump operator Σ_j σz_j at rate γφ
};

struct DephasingModel {
    DephasingKind kind = DephasingKind::Independent;
    double rate = 0.0; // γφ ≥ 0
};

// Coherences |⟨a|ρ(t)|b⟩| to record during dephasing evolution.
struct CoherencePair {
    std::string name;
    StateVector a;
    StateVector b;
};

struct DensityTracking {
    std::vector<CoherencePair> coherences;
    std::vector<std::pair<std::string, StateVector>> populations;
};

// Lindblad evolution dρ/dt = −i[H,ρ] + γφ Σ_k (L_k ρ L_k − ½{L_k², ρ})
// with the σz jump operators of `model` acting on every spin of `layout`,
// integrated by fixed-step RK4.  Trace and positivity drift are recorded;
// ρ0 must be a valid density matrix and dim must stay within `dim_budget`.
PropagationResult dephasing_evolve(const OperatorMatrix& h, const SpaceLayout& layout,
                                   const DephasingModel& model, const Eigen::MatrixXcd& rho0,
                                   const std::vector<double>& times,
                                   const DensityTracking& tracking = {},
                                   std::size_t dim_budget = 2048);

// Decay rate of |⟨0…0|ρ(t)|Dicke n⟩| under `model` for each n, expressed
// relative to the measured single-site (N=1, n=1) rate of the same model.
// fitted_exponent is the log-log slope of that rate ratio against n (zero
// unless the range spans at least two distinct n).
RateScalingReport measure_decoherence_scaling(const DephasingModel& model, int N,
                                              const std::vector<int>& n_range);

// Companion measurement for uncorrelated states: n sites prepared in
// (|0⟩+|1⟩)/√2 under independent dephasing, rate defined as the inverse
// 1/e time of the normalized fidelity (F−F∞)/(1−F∞).  The per-site
// coherences factorize, so this aggregate rate grows sublinearly in n.
RateScalingReport measure_product_fidelity_scaling(int N, const std::vector<int>& n_range,
                                                   double gamma_phi);

} // namespace coopdyn
