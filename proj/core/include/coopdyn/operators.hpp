// operators.hpp — Sparse operators on a SpaceLayout: elementary site and
// mode operators, symmetric projectors, and the collective mode transform.

#pragma once

#include "coopdyn/state.hpp"

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include <cstddef>

namespace coopdyn {

using SparseCd = Eigen::SparseMatrix<cplx>;

struct OperatorMatrix {
    SparseCd entries;
    bool hermitian = false;

    Eigen::Index dim() const { return entries.rows(); }
};

// Max entry magnitude of H − H†.
double hermiticity_defect(const SparseCd& m);

// Wraps a sparse matrix; when `expect_hermitian`, verifies the defect is
// below `tol` (throws std::invalid_argument otherwise) and sets the flag.
OperatorMatrix make_operator(SparseCd m, bool expect_hermitian, double tol = 1e-14);

OperatorMatrix identity_op(const SpaceLayout& layout);

// Pauli operators acting on one site.  σz is +1 on the ground state |0⟩
// and −1 on the excited state |1⟩; σ+ raises the excitation (|0⟩→|1⟩).
OperatorMatrix sigma_z_site(const SpaceLayout& layout, std::size_t group, int site);
OperatorMatrix sigma_x_site(const SpaceLayout& layout, std::size_t group, int site);
OperatorMatrix sigma_plus_site(const SpaceLayout& layout, std::size_t group, int site);
OperatorMatrix sigma_minus_site(const SpaceLayout& layout, std::size_t group, int site);

// Bosonic ladder/number operators for one mode of one boson group, in the
// truncated Fock basis (a† at the cutoff annihilates).
OperatorMatrix mode_annihilator(const SpaceLayout& layout, std::size_t boson_group, int mode);
OperatorMatrix mode_creator(const SpaceLayout& layout, std::size_t boson_group, int mode);
OperatorMatrix mode_number(const SpaceLayout& layout, std::size_t boson_group, int mode);

// Σ_j n̂_j + Σ_modes a†a — the conserved charge of excitation-conserving models.
OperatorMatrix total_excitation(const SpaceLayout& layout);

// Orthogonal projector onto span{dicke_state(group, n) : 0 ≤ n ≤ N}, all
// other groups and modes in vacuum; rank N+1.
OperatorMatrix symmetric_projector(const SpaceLayout& layout, std::size_t group);

// L×L real orthogonal matrix whose first row is the symmetric collective
// mode (1/√L, …, 1/√L); remaining rows complete the basis by Gram–Schmidt
// over the standard basis e_0, e_1, … in order.
Eigen::MatrixXd collective_mode_transform(int mode_count);

} // namespace coopdyn
