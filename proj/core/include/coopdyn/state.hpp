// state.hpp — State vectors over a SpaceLayout and the named constructors
// (basis states, Dicke states, singlets, Fock excitations).

#pragma once

#include "coopdyn/layout.hpp"

#include <Eigen/Dense>

#include <complex>
#include <cstddef>

namespace coopdyn {

using cplx = std::complex<double>;

struct StateVector {
    Eigen::VectorXcd amplitudes;
    SpaceLayout layout;

    std::size_t dim() const { return static_cast<std::size_t>(amplitudes.size()); }
    double norm() const { return amplitudes.norm(); }
};

cplx overlap(const StateVector& bra, const StateVector& ket);

// Single basis state |index⟩.
StateVector basis_state(const SpaceLayout& layout, std::size_t index);
StateVector basis_state(const SpaceLayout& layout, const BasisConfig& config);

// Equal-amplitude superposition of all C(N,n) configurations with exactly
// n excitations in `group`; every other group and mode in vacuum.  Each
// nonzero amplitude is 1/√C(N,n).
StateVector dicke_state(const SpaceLayout& layout, std::size_t group, int n);

// (|1_j 0_j'⟩ − |0_j 1_j'⟩)/√2 within `group`, everything else in vacuum.
StateVector singlet_state(const SpaceLayout& layout, std::size_t group, int j, int jp);

// Basis state with occupation m in one mode, all else in vacuum.
StateVector mode_fock_state(const SpaceLayout& layout, std::size_t boson_group, int mode, int m);

// Product of two states with disjoint excitation support (each must be in
// vacuum wherever the other is excited), e.g. a Dicke state of group A
// combined with a Fock excitation of a bath mode.
StateVector tensor_combine(const StateVector& a, const StateVector& b);

} // namespace coopdyn
