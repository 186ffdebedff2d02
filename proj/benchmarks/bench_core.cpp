// bench_core.cpp — Microbenchmarks for the hot paths: Hamiltonian
// assembly, Krylov propagation, sector decomposition, Lindblad dephasing,
// and the Monte Carlo walker loop.
//
// Run: ./coopdyn_bench [--benchmark_filter=...]

#include <coopdyn/diffusion.hpp>
#include <coopdyn/dynamics.hpp>
#include <coopdyn/hamiltonians.hpp>
#include <coopdyn/sectors.hpp>
#include <coopdyn/state.hpp>

#include <benchmark/benchmark.h>

#include <Eigen/Dense>

#include <cmath>

namespace {

using namespace coopdyn;

SystemSpec dicke_spec(int sites, int cutoff, bool rwa) {
    SystemSpec spec;
    spec.group_a = {sites, 1.0};
    spec.field_mode = FieldModeSpec{1.0, cutoff};
    spec.inter_coupling = 0.1;
    spec.rwa = rwa;
    return spec;
}

SystemSpec bath_spec(int sites, int modes, int cutoff) {
    SystemSpec spec;
    spec.group_a = {sites, 1.0};
    spec.group_b = SpinGroupSpec{sites, 1.0};
    spec.inter_coupling = 0.1;
    spec.intra_coupling_a = Eigen::MatrixXd::Constant(sites, sites, 0.05);
    spec.intra_coupling_a.diagonal().setZero();
    spec.intra_coupling_b = spec.intra_coupling_a;
    BathSpec bath;
    bath.mode_frequencies.assign(std::size_t(modes), 0.9);
    bath.couplings = Eigen::MatrixXd::Constant(sites, modes, 0.03);
    bath.cutoff = cutoff;
    spec.bath_a = bath;
    spec.bath_b = bath;
    return spec;
}

void BM_DickeHamiltonianBuild(benchmark::State& state) {
    const SystemSpec spec = dicke_spec(int(state.range(0)), 3, false);
    for (auto _ : state) {
        OperatorMatrix h = dicke_hamiltonian(spec);
        benchmark::DoNotOptimize(h.entries);
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_DickeHamiltonianBuild)->DenseRange(4, 10, 2)->Complexity();

void BM_FullHamiltonianBuild(benchmark::State& state) {
    const SystemSpec spec = bath_spec(int(state.range(0)), 2, 3);
    for (auto _ : state) {
        OperatorMatrix h = full_hamiltonian(spec);
        benchmark::DoNotOptimize(h.entries);
    }
}
BENCHMARK(BM_FullHamiltonianBuild)->DenseRange(2, 4, 1);

void BM_KrylovEvolve(benchmark::State& state) {
    const SystemSpec spec = dicke_spec(int(state.range(0)), 4, false);
    const SpaceLayout layout = build_layout(spec);
    const OperatorMatrix h = dicke_hamiltonian(spec);
    const StateVector psi0 = dicke_state(layout, 0, 1);
    const std::vector<double> times{2.0, 4.0, 6.0, 8.0, 10.0};
    for (auto _ : state) {
        PropagationResult r = evolve(h, psi0, times, 1e-10, {}, 1.0);
        benchmark::DoNotOptimize(r.values);
    }
}
BENCHMARK(BM_KrylovEvolve)->DenseRange(4, 10, 2);

void BM_SectorDecompose(benchmark::State& state) {
    const SystemSpec spec = bath_spec(int(state.range(0)), 2, 3);
    const SpaceLayout layout = build_layout(spec);
    const OperatorMatrix h = full_hamiltonian(spec);
    const OperatorMatrix p = cooperative_projector(layout, spec);
    for (auto _ : state) {
        SectorDecomposition d = decompose(h, p);
        benchmark::DoNotOptimize(d.leakage_frobenius);
    }
}
BENCHMARK(BM_SectorDecompose)->DenseRange(2, 4, 1);

void BM_DephasingEvolve(benchmark::State& state) {
    const int sites = int(state.range(0));
    SystemSpec spec;
    spec.group_a = {sites, 1.0};
    const SpaceLayout layout = build_layout(spec);
    const OperatorMatrix h = full_hamiltonian(spec);
    const StateVector ground = dicke_state(layout, 0, 0);
    const StateVector excited = dicke_state(layout, 0, 1);
    StateVector mix = ground;
    mix.amplitudes = (ground.amplitudes + excited.amplitudes) / std::sqrt(2.0);
    const Eigen::MatrixXcd rho0 = mix.amplitudes * mix.amplitudes.adjoint();
    DensityTracking tracking;
    tracking.coherences.push_back({"c", ground, excited});
    for (auto _ : state) {
        PropagationResult r = dephasing_evolve(h, layout, {DephasingKind::Collective, 0.05},
                                               rho0, {5.0, 10.0}, tracking);
        benchmark::DoNotOptimize(r.values);
    }
}
BENCHMARK(BM_DephasingEvolve)->DenseRange(3, 5, 1);

void BM_SimulateWalk(benchmark::State& state) {
    DiffusionConfig config;
    config.walkers = std::size_t(state.range(0));
    config.rng_seed = 7;
    for (auto _ : state) {
        DiffusionResult r = simulate_walk(config, 1);
        benchmark::DoNotOptimize(r.rms_displacement_units);
    }
    state.SetItemsProcessed(std::int64_t(state.iterations()) * state.range(0));
}
BENCHMARK(BM_SimulateWalk)->RangeMultiplier(4)->Range(1000, 16000);

} // namespace

BENCHMARK_MAIN();
