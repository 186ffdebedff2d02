#include "helpers.hpp"

#include <coopdyn/errors.hpp>
#include <coopdyn/sectors.hpp>

#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

using namespace coopdyn;
using testutil::brute_force_transfer;
using testutil::dense;
using testutil::dicke_spec;
using testutil::fit_through_origin;
using testutil::hopping_spec;
using testutil::loglog_slope;
using testutil::max_abs;

namespace {

double sparse_max_abs(const SparseCd& m) {
    double v = 0.0;
    for (int k = 0; k < m.outerSize(); ++k)
        for (SparseCd::InnerIterator it(m, k); it; ++it) v = std::max(v, std::abs(it.value()));
    return v;
}

// A small fully symmetric two-group instance with baths on both groups.
SystemSpec symmetric_bath_spec(int N, int M, int L, int cutoff) {
    SystemSpec spec = testutil::hopping_spec(N, M, 0.1, 1.0, 1.0);
    spec.intra_coupling_a = Eigen::MatrixXd::Constant(N, N, 0.05);
    spec.intra_coupling_a.diagonal().setZero();
    spec.intra_coupling_b = Eigen::MatrixXd::Constant(M, M, 0.05);
    spec.intra_coupling_b.diagonal().setZero();
    spec.bath_a = BathSpec{std::vector<double>(static_cast<std::size_t>(L), 0.9),
                           Eigen::MatrixXd::Constant(N, L, 0.03), cutoff};
    spec.bath_b = BathSpec{std::vector<double>(static_cast<std::size_t>(L), 1.1),
                           Eigen::MatrixXd::Constant(M, L, 0.04), cutoff};
    return spec;
}

} // namespace

TEST_SUITE("sectors") {

TEST_CASE("cooperative projector ranks") {
    SUBCASE("single pair of spins: rank 3 of 4") {
        SystemSpec spec;
        spec.group_a = {2, 1.0};
        const SpaceLayout layout = build_layout(spec);
        const Eigen::MatrixXcd p = dense(cooperative_projector(layout, spec));
        CHECK(std::abs(p.trace().real() - 3.0) < 1e-12);
        CHECK(max_abs(p * p - p) < 1e-12);
        CHECK(max_abs(p - p.adjoint()) < 1e-12);
    }
    SUBCASE("two pairs: rank 9 of 16") {
        SystemSpec spec = hopping_spec(2, 2, 0.1);
        const SpaceLayout layout = build_layout(spec);
        const Eigen::MatrixXcd p = dense(cooperative_projector(layout, spec));
        CHECK(std::abs(p.trace().real() - 9.0) < 1e-12);
    }
    SUBCASE("bath modes beyond the symmetric one are pinned to vacuum") {
        for (BathBasis basis : {BathBasis::Collective, BathBasis::Local}) {
            SystemSpec spec;
            spec.group_a = {3, 1.0};
            spec.bath_a = BathSpec{{0.9, 0.9, 0.9}, Eigen::MatrixXd::Constant(3, 3, 0.02), 2};
            spec.bath_basis = basis;
            const SpaceLayout layout = build_layout(spec);
            const Eigen::MatrixXcd p = dense(cooperative_projector(layout, spec));
            CHECK(std::abs(p.trace().real() - 8.0) < 1e-11); // (N+1) * d_sym = 4 * 2
            CHECK(max_abs(p * p - p) < 1e-12);
        }
    }
}

TEST_CASE("decompose splits and reconstructs exactly") {
    SystemSpec spec = hopping_spec(2, 2, 0.1);
    const SpaceLayout layout = build_layout(spec);
    const OperatorMatrix p = cooperative_projector(layout, spec);

    SUBCASE("identity has no cross term") {
        // With N = M = 2 every projector entry is a dyadic rational, so
        // P(I)Q cancels without rounding and the zero here is exact.
        const SectorDecomposition d = decompose(identity_op(layout), p);
        CHECK(sparse_max_abs(d.h_cn.entries) == 0.0);
        CHECK(d.leakage_frobenius == 0.0);
    }
    SUBCASE("reconstruction is exact and blocks are orthogonal") {
        const OperatorMatrix h = hopping_hamiltonian(spec);
        const SectorDecomposition d = decompose(h, p);
        CHECK(sparse_max_abs(h.entries - d.h_c.entries - d.h_n.entries - d.h_cn.entries) <
              1e-12);
        const Eigen::MatrixXcd pd = dense(p);
        const Eigen::MatrixXcd q = Eigen::MatrixXcd::Identity(pd.rows(), pd.cols()) - pd;
        CHECK(max_abs(pd * dense(d.h_n) * pd) < 1e-12);
        CHECK(max_abs(q * dense(d.h_c) * q) < 1e-12);
    }
    SUBCASE("dimension mismatch is rejected") {
        SystemSpec small;
        small.group_a = {1, 1.0};
        const SpaceLayout sl = build_layout(small);
        CHECK_THROWS_AS(decompose(identity_op(sl), p), ConfigError);
    }
}

TEST_CASE("permutation-symmetric models have zero leakage") {
    SUBCASE("plain two-group hopping") {
        SystemSpec spec = hopping_spec(3, 3, 0.1);
        const SpaceLayout layout = build_layout(spec);
        const SectorDecomposition d =
            decompose(hopping_hamiltonian(spec), cooperative_projector(layout, spec));
        CHECK(d.leakage_frobenius < 1e-12);
        CHECK(d.leakage_spectral < 1e-10);
    }
    SUBCASE("full model with symmetric baths") {
        const SystemSpec spec = symmetric_bath_spec(2, 2, 2, 3);
        const SpaceLayout layout = build_layout(spec);
        const SectorDecomposition d =
            decompose(full_hamiltonian(spec), cooperative_projector(layout, spec));
        CHECK(d.leakage_frobenius < 1e-12);
    }
    SUBCASE("unequal bath mode frequencies leak by themselves") {
        // The free bath term mixes collective modes unless the bath is
        // degenerate, so this is genuine leakage, not an artifact.
        SystemSpec spec = symmetric_bath_spec(2, 2, 2, 3);
        spec.bath_a->mode_frequencies = {0.8, 1.0};
        const SpaceLayout layout = build_layout(spec);
        const SectorDecomposition d =
            decompose(full_hamiltonian(spec), cooperative_projector(layout, spec));
        CHECK(d.leakage_frobenius > 1e-3);
    }
}

TEST_CASE("leakage grows linearly with diagonal disorder") {
    SystemSpec base = hopping_spec(2, 2, 0.1);
    base.rng_seed = 7;
    const SpaceLayout layout = build_layout(base);
    const OperatorMatrix p = cooperative_projector(layout, base);

    const double gamma = base.inter_coupling;
    std::vector<double> widths, leaks;
    for (double f : {0.01, 0.02, 0.04, 0.08}) {
        const SystemSpec noisy = apply_site_disorder(base, f * gamma);
        const SectorDecomposition d = decompose(hopping_hamiltonian(noisy), p);
        widths.push_back(f * gamma);
        leaks.push_back(d.leakage_frobenius);
    }
    for (std::size_t i = 1; i < leaks.size(); ++i) CHECK(leaks[i] > leaks[i - 1]);
    const auto fit = fit_through_origin(widths, leaks);
    CHECK(fit.slope > 0.0);
    CHECK(fit.r_squared > 0.99);
}

TEST_CASE("closed-form emission amplitude") {
    CHECK(emission_amplitude(1, 1, 0.3) == doctest::Approx(0.3));
    CHECK(emission_amplitude(4, 1, 0.3) == doctest::Approx(2.0 * 0.3)); // sqrt(4)
    CHECK(emission_amplitude(3, 2, 0.3) == doctest::Approx(2.0 * 0.3)); // sqrt(2*2)
    CHECK(emission_amplitude(2, 1, 0.3, 2) ==
          doctest::Approx(std::sqrt(2.0) * std::sqrt(3.0) * 0.3));
    CHECK_THROWS_AS(emission_amplitude(2, 3, 0.3), std::domain_error);
    CHECK_THROWS_AS(emission_amplitude(2, -1, 0.3), std::domain_error);
    CHECK_THROWS_AS(emission_amplitude(0, 0, 0.3), std::domain_error);
    CHECK_THROWS_AS(emission_amplitude(2, 1, 0.3, -1), std::domain_error);
}

TEST_CASE("closed-form transfer rate") {
    const double g = 0.3, g2 = g * g;
    CHECK(supertransfer_rate(1, 4, 0, 5, g) == doctest::Approx(g2 * 20.0)); // γ²NM
    CHECK(supertransfer_rate(0, 4, 0, 5, g) == 0.0);
    CHECK(supertransfer_rate(4, 4, 0, 4, g) == doctest::Approx(g2 * 16.0)); // n=N, m=0

    for (int N = 1; N <= 5; ++N)
        for (int M = 1; M <= 5; ++M)
            for (int n = 0; n <= N; ++n)
                for (int m = 0; m <= M; ++m) {
                    const double fwd = supertransfer_rate(n, N, m, M, g);
                    const double rev = supertransfer_rate(m, M, n, N, g);
                    CHECK(std::abs(fwd + rev) < 1e-13 * std::max(1.0, std::abs(fwd)));
                }
    CHECK_THROWS_AS(supertransfer_rate(5, 4, 0, 4, g), std::domain_error);
    CHECK_THROWS_AS(supertransfer_rate(1, 4, -1, 4, g), std::domain_error);
}

TEST_CASE("emission formula matches exact matrix elements everywhere") {
    std::vector<ScalingPoint> grid;
    for (int N = 1; N <= 8; ++N)
        for (int n = 1; n <= N; ++n)
            for (int m = 0; m <= 3; ++m) grid.push_back({N, n, 0, m});
    const RateScalingReport report = verify_scaling(ScalingFormula::EmissionAmplitude, grid, 0.1);
    CHECK(report.max_abs_error < 1e-10);

    // Single-excitation subseries: squared amplitude grows exactly like N.
    std::vector<double> ns, amps2;
    for (const ScalingSample& s : report.samples)
        if (s.point.n == 1 && s.point.m == 0) {
            ns.push_back(double(s.point.N));
            amps2.push_back(s.measured * s.measured);
        }
    CHECK(std::abs(loglog_slope(ns, amps2) - 1.0) < 1e-6);
}

TEST_CASE("hopping element formula matches exact matrix elements") {
    std::vector<ScalingPoint> grid;
    for (int N = 1; N <= 5; ++N)
        for (int M = 1; M <= 5; ++M) grid.push_back({N, 1, M, 0});
    const RateScalingReport report = verify_scaling(ScalingFormula::HoppingElement, grid, 0.1);
    CHECK(report.max_abs_error < 1e-10);
    CHECK(report.fitted_exponent == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(report.fit_residual < 1e-8);
}

TEST_CASE("net transfer rate matches the golden-rule enumeration") {
    const double g = 0.3;
    for (int N = 1; N <= 5; ++N)
        for (int M = 1; M <= 5; ++M)
            for (int n = 0; n <= N; ++n)
                for (int m = 0; m <= M; ++m) {
                    const auto brute = brute_force_transfer(N, M, n, m, g);
                    const TransferTerms terms = supertransfer_terms(n, N, m, M, g);
                    CHECK(std::abs(terms.forward - brute.forward) < 1e-10);
                    CHECK(std::abs(terms.backward - brute.backward) < 1e-10);
                }

    std::vector<ScalingPoint> grid;
    for (int N = 1; N <= 5; ++N)
        for (int M = 1; M <= 5; ++M) grid.push_back({N, 1, M, 0});
    const RateScalingReport report = verify_scaling(ScalingFormula::NetTransferRate, grid, g);
    CHECK(report.max_abs_error < 1e-10);
}

TEST_CASE("a degenerate grid refuses to produce an exponent") {
    const std::vector<ScalingPoint> grid{{2, 1, 0, 0}, {2, 1, 0, 0}, {2, 1, 0, 0},
                                         {2, 1, 0, 0}};
    CHECK_THROWS_AS(verify_scaling(ScalingFormula::EmissionAmplitude, grid, 0.1), ConfigError);
}

TEST_CASE("dark-sector states have no symmetric-channel amplitude") {
    const double gamma = 0.1;
    for (int N = 2; N <= 4; ++N) {
        SystemSpec spec = dicke_spec(N, 3, gamma);
        const SpaceLayout layout = build_layout(spec);
        const OperatorMatrix h = dicke_hamiltonian(spec);
        for (int n = 1; n <= N; ++n) {
            const StateVector channel = tensor_combine(dicke_state(layout, 0, n - 1),
                                                       mode_fock_state(layout, 0, 0, 1));
            for (const StateVector& dark : testutil::dark_sector_basis(layout, N, n))
                CHECK(std::abs(matrix_element(channel, h, dark)) < 1e-12);
        }
    }
}

TEST_CASE("matrix element basics") {
    SystemSpec spec;
    spec.group_a = {2, 1.0};
    const SpaceLayout layout = build_layout(spec);
    const StateVector psi = dicke_state(layout, 0, 1);
    CHECK(std::abs(matrix_element(psi, identity_op(layout), psi) - cplx(1.0, 0.0)) < 1e-14);

    const SpaceLayout other({3}, {});
    CHECK_THROWS_AS(matrix_element(StateVector{Eigen::VectorXcd::Ones(8), other},
                                   identity_op(layout), psi),
                    ConfigError);
}

TEST_CASE("spectral leakage agrees with a dense eigensolve") {
    SystemSpec base = hopping_spec(2, 2, 0.1);
    base.rng_seed = 3;
    const SystemSpec noisy = apply_site_disorder(base, 0.05);
    const SpaceLayout layout = build_layout(base);
    const SectorDecomposition d =
        decompose(hopping_hamiltonian(noisy), cooperative_projector(layout, base));

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(dense(d.h_cn), Eigen::EigenvaluesOnly);
    const double dense_norm = es.eigenvalues().cwiseAbs().maxCoeff();
    CHECK(d.leakage_spectral == doctest::Approx(dense_norm).epsilon(1e-6));
    CHECK(d.leakage_spectral <= d.leakage_frobenius * (1.0 + 1e-9) + 1e-12);
}

} // TEST_SUITE
