// helpers.hpp — Shared fixtures and independent oracles for the unit suites.
//
// Everything here is deliberately implemented from scratch (bit-level state
// enumeration, plain least-squares fits, permutation matrices) so the checks
// do not reuse the library code paths they are meant to verify.

#pragma once

#include <coopdyn/dynamics.hpp>
#include <coopdyn/hamiltonians.hpp>

#include <Eigen/Dense>

#include <bit>
#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

namespace testutil {

inline Eigen::MatrixXcd dense(const coopdyn::OperatorMatrix& op) {
    return Eigen::MatrixXcd(op.entries);
}

inline Eigen::VectorXd sorted_eigenvalues(const coopdyn::OperatorMatrix& op) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(dense(op), Eigen::EigenvaluesOnly);
    return es.eigenvalues(); // ascending
}

inline double max_abs(const Eigen::MatrixXcd& m) {
    return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

// --- Spec builders -------------------------------------------------------

inline coopdyn::SystemSpec dicke_spec(int N, int cutoff, double gamma, double omega = 1.0,
                                      bool rwa = true) {
    coopdyn::SystemSpec spec;
    spec.group_a = {N, omega};
    spec.field_mode = coopdyn::FieldModeSpec{omega, cutoff};
    spec.inter_coupling = gamma;
    spec.rwa = rwa;
    return spec;
}

inline coopdyn::SystemSpec hopping_spec(int N, int M, double gamma, double omega_a = 1.0,
                                        double omega_b = 1.0) {
    coopdyn::SystemSpec spec;
    spec.group_a = {N, omega_a};
    spec.group_b = coopdyn::SpinGroupSpec{M, omega_b};
    spec.inter_coupling = gamma;
    return spec;
}

// --- Permutation oracle --------------------------------------------------

// Permutation matrix swapping two flat spin bits; a Hamiltonian symmetric
// under exchange of those sites must commute with it.
inline coopdyn::SparseCd transposition_op(const coopdyn::SpaceLayout& layout, int bit_a,
                                          int bit_b) {
    const auto dim = static_cast<Eigen::Index>(layout.total_dim());
    std::vector<Eigen::Triplet<coopdyn::cplx>> trips;
    trips.reserve(static_cast<std::size_t>(dim));
    for (std::size_t i = 0; i < layout.total_dim(); ++i) {
        std::size_t j = i;
        const bool va = (i >> bit_a) & 1u;
        const bool vb = (i >> bit_b) & 1u;
        if (va != vb) j = (i ^ (std::size_t(1) << bit_a)) ^ (std::size_t(1) << bit_b);
        trips.emplace_back(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i),
                           coopdyn::cplx(1.0, 0.0));
    }
    coopdyn::SparseCd m(dim, dim);
    m.setFromTriplets(trips.begin(), trips.end());
    return m;
}

// --- Golden-rule transfer oracle ----------------------------------------

// Forward/backward golden-rule sums for the two-group transfer coupling
// V = γ Σ_{j∈A, k∈B} (lower site j)(raise site k), starting from the product
// of equal-weight n- and m-excitation superpositions.  Pure bit twiddling:
// group A occupies the low N bits, group B the next M bits.
struct BruteTransfer {
    double forward = 0.0;
    double backward = 0.0;
};

inline BruteTransfer brute_force_transfer(int N, int M, int n, int m, double gamma) {
    const std::size_t dim = std::size_t(1) << (N + M);
    const auto count = [](std::size_t v) { return std::popcount(v); };

    double confs = 0.0;
    std::vector<double> psi(dim, 0.0);
    for (std::size_t a = 0; a < (std::size_t(1) << N); ++a) {
        if (count(a) != n) continue;
        for (std::size_t b = 0; b < (std::size_t(1) << M); ++b) {
            if (count(b) != m) continue;
            psi[a | (b << N)] = 1.0;
            confs += 1.0;
        }
    }
    const double amp = 1.0 / std::sqrt(confs);
    for (double& v : psi) v *= amp;

    std::vector<double> fwd(dim, 0.0), back(dim, 0.0);
    for (std::size_t idx = 0; idx < dim; ++idx) {
        if (psi[idx] == 0.0) continue;
        for (int j = 0; j < N; ++j) {
            const bool a_excited = (idx >> j) & 1u;
            for (int k = 0; k < M; ++k) {
                const bool b_excited = (idx >> (N + k)) & 1u;
                const std::size_t flipped =
                    (idx ^ (std::size_t(1) << j)) ^ (std::size_t(1) << (N + k));
                if (a_excited && !b_excited) fwd[flipped] += gamma * psi[idx];
                if (!a_excited && b_excited) back[flipped] += gamma * psi[idx];
            }
        }
    }
    BruteTransfer out;
    for (std::size_t idx = 0; idx < dim; ++idx) {
        out.forward += fwd[idx] * fwd[idx];
        out.backward += back[idx] * back[idx];
    }
    return out;
}

// --- Fits ----------------------------------------------------------------

struct LineFit {
    double slope = 0.0;
    double r_squared = 0.0;
};

// Least-squares line through the origin, with the conventional centered R².
inline LineFit fit_through_origin(const std::vector<double>& xs, const std::vector<double>& ys) {
    double sxx = 0.0, sxy = 0.0, sy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
        sy += ys[i];
    }
    LineFit fit;
    fit.slope = sxy / sxx;
    const double mean = sy / static_cast<double>(ys.size());
    double ss_res = 0.0, ss_tot = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double r = ys[i] - fit.slope * xs[i];
        ss_res += r * r;
        ss_tot += (ys[i] - mean) * (ys[i] - mean);
    }
    fit.r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
    return fit;
}

// Least-squares slope of log(y) against log(x).
inline double loglog_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
    const double n = static_cast<double>(xs.size());
    double sx = 0.0, sy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sx += std::log(xs[i]);
        sy += std::log(ys[i]);
    }
    const double mx = sx / n, my = sy / n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double dx = std::log(xs[i]) - mx;
        sxx += dx * dx;
        sxy += dx * (std::log(ys[i]) - my);
    }
    return sxy / sxx;
}

// --- Dark-sector basis ----------------------------------------------------

// Orthonormal basis of the n-excitation spin sector orthogonal to the Dicke
// state, built by Gram–Schmidt over the configuration basis.  Vectors live
// on the full layout with every mode in vacuum.
inline std::vector<coopdyn::StateVector> dark_sector_basis(const coopdyn::SpaceLayout& layout,
                                                           int N, int n) {
    using coopdyn::cplx;
    std::vector<Eigen::VectorXcd> basis;

    Eigen::VectorXcd dicke = coopdyn::dicke_state(layout, 0, n).amplitudes;
    basis.push_back(dicke);

    const auto dim = static_cast<Eigen::Index>(layout.total_dim());
    for (std::size_t spins = 0; spins < (std::size_t(1) << N); ++spins) {
        if (std::popcount(spins) != n) continue;
        Eigen::VectorXcd v = Eigen::VectorXcd::Zero(dim);
        v(static_cast<Eigen::Index>(spins)) = cplx(1.0, 0.0); // modes all vacuum
        for (const auto& b : basis) v -= b.dot(v) * b;
        if (v.norm() > 1e-8) {
            v.normalize();
            basis.push_back(v);
        }
    }

    std::vector<coopdyn::StateVector> dark;
    for (std::size_t i = 1; i < basis.size(); ++i)
        dark.push_back(coopdyn::StateVector{basis[i], layout});
    return dark;
}

} // namespace testutil
