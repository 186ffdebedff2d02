// Deterministic sample objects shared by the serialization tests and the
// golden-file generator.  Every value is written as a literal expression so
// both sides produce bit-identical doubles.

#pragma once

#include <coopdyn/dynamics.hpp>
#include <coopdyn/hamiltonians.hpp>
#include <coopdyn/sectors.hpp>
#include <coopdyn/state.hpp>

#include <cmath>
#include <cstddef>

namespace testsamples {

inline coopdyn::SpaceLayout sample_layout() {
    return coopdyn::SpaceLayout({2, 1}, {{1, 3}});
}

inline coopdyn::StateVector sample_state() {
    const coopdyn::SpaceLayout layout({3}, {});
    coopdyn::StateVector s = coopdyn::dicke_state(layout, 0, 1);
    s.amplitudes *= coopdyn::cplx(std::cos(0.3), std::sin(0.3));
    return s;
}

inline coopdyn::SystemSpec sample_dicke_spec() {
    coopdyn::SystemSpec s;
    s.group_a = {2, 1.0};
    s.field_mode = coopdyn::FieldModeSpec{1.0, 3};
    s.inter_coupling = 0.1;
    return s;
}

inline coopdyn::OperatorMatrix sample_operator() {
    return coopdyn::dicke_hamiltonian(sample_dicke_spec());
}

inline coopdyn::SystemSpec sample_full_spec() {
    using namespace coopdyn;
    SystemSpec s;
    s.group_a = {2, 1.0};
    s.group_b = SpinGroupSpec{2, 1.25};
    s.field_mode = FieldModeSpec{1.0, 3};
    s.inter_coupling = 0.1;
    s.intra_coupling_a = Eigen::MatrixXd::Zero(2, 2);
    s.intra_coupling_a(0, 1) = s.intra_coupling_a(1, 0) = 0.05;
    s.intra_coupling_b = Eigen::MatrixXd::Zero(2, 2);
    s.intra_coupling_b(0, 1) = s.intra_coupling_b(1, 0) = 0.04;
    BathSpec bath;
    bath.mode_frequencies = {0.9, 0.9};
    bath.couplings = Eigen::MatrixXd::Constant(2, 2, 0.03);
    bath.cutoff = 2;
    s.bath_a = bath;
    bath.mode_frequencies = {1.1, 1.1};
    bath.couplings = Eigen::MatrixXd::Constant(2, 2, 0.02);
    s.bath_b = bath;
    s.site_offsets_a = {0.01, -0.01};
    s.site_offsets_b = {0.0, 0.02};
    s.rwa = true;
    s.bath_coupling = BathCoupling::ExcitationConserving;
    s.bath_basis = BathBasis::Local;
    s.rng_seed = 99;
    s.dimension_budget = std::size_t(1) << 20;
    return s;
}

inline coopdyn::RateScalingReport sample_report() {
    std::vector<coopdyn::ScalingPoint> grid;
    for (int N = 1; N <= 3; ++N)
        for (int M = 1; M <= 3; ++M) grid.push_back({N, 1, M, 0});
    return coopdyn::verify_scaling(coopdyn::ScalingFormula::HoppingElement, grid, 0.1);
}

inline coopdyn::PropagationResult sample_propagation() {
    coopdyn::PropagationResult r;
    r.times = {0.0, 0.25, 0.5};
    r.columns = {"overlap_sq", "energy"};
    r.values.resize(3, 2);
    r.values << 1.0, std::sqrt(2.0) / 2.0,
                1.0 / 3.0, -0.125,
                std::exp(-0.5), 2.0 / 3.0;
    return r;
}

} // namespace testsamples
