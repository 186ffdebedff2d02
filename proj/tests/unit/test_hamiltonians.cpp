#include "helpers.hpp"

#include <coopdyn/errors.hpp>
#include <coopdyn/hamiltonians.hpp>
#include <coopdyn/sectors.hpp>

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

using namespace coopdyn;
using testutil::dense;
using testutil::dicke_spec;
using testutil::hopping_spec;
using testutil::max_abs;
using testutil::sorted_eigenvalues;

namespace {

double commutator_max(const OperatorMatrix& a, const OperatorMatrix& b) {
    const SparseCd c = a.entries * b.entries - b.entries * a.entries;
    double m = 0.0;
    for (int k = 0; k < c.outerSize(); ++k)
        for (SparseCd::InnerIterator it(c, k); it; ++it) m = std::max(m, std::abs(it.value()));
    return m;
}

} // namespace

TEST_SUITE("hamiltonians") {

TEST_CASE("decoupled spin-field spectrum") {
    const double w = 1.3;
    SystemSpec spec = dicke_spec(1, 5, 0.0, w, false);
    const OperatorMatrix h = dicke_hamiltonian(spec);
    CHECK(h.hermitian);

    std::vector<double> expected;
    for (int m = 0; m < 5; ++m) {
        expected.push_back(w * m - w / 2.0); // spin ground
        expected.push_back(w * m + w / 2.0); // spin excited
    }
    std::sort(expected.begin(), expected.end());
    const Eigen::VectorXd eigs = sorted_eigenvalues(h);
    REQUIRE(eigs.size() == static_cast<Eigen::Index>(expected.size()));
    for (Eigen::Index i = 0; i < eigs.size(); ++i)
        CHECK(eigs(i) == doctest::Approx(expected[static_cast<std::size_t>(i)]).epsilon(1e-12));
}

TEST_CASE("collective emission element carries the sqrt(n(N-n+1)(m+1)) factor") {
    const double gamma = 0.1;
    for (bool rwa : {true, false}) {
        SystemSpec spec = dicke_spec(2, 3, gamma, 1.0, rwa);
        const SpaceLayout layout = build_layout(spec);
        const OperatorMatrix h = dicke_hamiltonian(spec);
        const StateVector ket =
            tensor_combine(dicke_state(layout, 0, 2), mode_fock_state(layout, 0, 0, 0));
        const StateVector bra =
            tensor_combine(dicke_state(layout, 0, 1), mode_fock_state(layout, 0, 0, 1));
        // n=2 of N=2 into m=1: sqrt(2*1)*sqrt(1) = sqrt(2), identically with
        // and without the counter-rotating terms.
        CHECK(std::abs(matrix_element(bra, h, ket)) ==
              doctest::Approx(std::sqrt(2.0) * gamma).epsilon(1e-12));
    }
}

TEST_CASE("counter-rotating terms change excitation by exactly two") {
    SystemSpec spec = dicke_spec(2, 4, 0.17, 1.0, false);
    SystemSpec rspec = spec;
    rspec.rwa = true;
    const SpaceLayout layout = build_layout(spec);
    const SparseCd diff = dicke_hamiltonian(spec).entries - dicke_hamiltonian(rspec).entries;
    const Eigen::MatrixXcd exc = dense(total_excitation(layout));

    int counter_terms = 0;
    for (int k = 0; k < diff.outerSize(); ++k)
        for (SparseCd::InnerIterator it(diff, k); it; ++it) {
            if (std::abs(it.value()) == 0.0) continue;
            ++counter_terms;
            const double de =
                (exc(it.row(), it.row()) - exc(it.col(), it.col())).real();
            CHECK(std::abs(std::abs(de) - 2.0) < 1e-12);
        }
    CHECK(counter_terms > 0);
}

TEST_CASE("two-site hopping splits the single-excitation doublet") {
    const double w = 0.9, gamma = 0.2;
    const OperatorMatrix h = hopping_hamiltonian(hopping_spec(1, 1, gamma, w, w));
    const Eigen::VectorXd eigs = sorted_eigenvalues(h);
    const std::vector<double> expected{-w, -gamma, gamma, w};
    for (Eigen::Index i = 0; i < 4; ++i)
        CHECK(eigs(i) == doctest::Approx(expected[static_cast<std::size_t>(i)]).epsilon(1e-12));
}

TEST_CASE("Dicke-to-Dicke hopping element is sqrt(NM) gamma") {
    const double gamma = 0.07;
    for (int N = 1; N <= 6; ++N)
        for (int M = 1; M <= 6; ++M) {
            SystemSpec spec = hopping_spec(N, M, gamma);
            const SpaceLayout layout = build_layout(spec);
            const OperatorMatrix h = hopping_hamiltonian(spec);
            const cplx elem =
                matrix_element(dicke_state(layout, 1, 1), h, dicke_state(layout, 0, 1));
            CHECK(std::abs(elem - cplx(std::sqrt(double(N) * double(M)) * gamma, 0.0)) <
                  1e-12);
        }
}

TEST_CASE("hopping model conserves total excitation and decouples at gamma = 0") {
    SystemSpec spec = hopping_spec(3, 2, 0.11, 1.0, 1.2);
    const SpaceLayout layout = build_layout(spec);
    CHECK(commutator_max(hopping_hamiltonian(spec), total_excitation(layout)) < 1e-13);

    spec.inter_coupling = 0.0;
    const SparseCd h0 = hopping_hamiltonian(spec).entries;
    for (int k = 0; k < h0.outerSize(); ++k)
        for (SparseCd::InnerIterator it(h0, k); it; ++it)
            CHECK(it.row() == it.col()); // diagonal
}

TEST_CASE("fully symmetric parameters commute with site transpositions") {
    SystemSpec spec = hopping_spec(3, 2, 0.11, 1.0, 1.2);
    spec.intra_coupling_a = Eigen::MatrixXd::Constant(3, 3, 0.05);
    spec.intra_coupling_a.diagonal().setZero();
    spec.intra_coupling_b = Eigen::MatrixXd::Constant(2, 2, 0.03);
    spec.intra_coupling_b.diagonal().setZero();
    spec.bath_a = BathSpec{{0.8, 0.8}, Eigen::MatrixXd::Constant(3, 2, 0.02), 3};
    spec.bath_b = BathSpec{{1.1, 1.1}, Eigen::MatrixXd::Constant(2, 2, 0.04), 3};

    const SpaceLayout layout = build_layout(spec);
    const OperatorMatrix h = full_hamiltonian(spec);
    CHECK(h.hermitian);
    CHECK(commutator_max(h, total_excitation(layout)) < 1e-13);

    std::vector<std::pair<int, int>> swaps;
    for (int j = 0; j + 1 < 3; ++j)
        swaps.emplace_back(layout.spin_offset(0) + j, layout.spin_offset(0) + j + 1);
    swaps.emplace_back(layout.spin_offset(1), layout.spin_offset(1) + 1);
    for (const auto& [a, b] : swaps) {
        const SparseCd t = testutil::transposition_op(layout, a, b);
        const SparseCd c = h.entries * t - t * h.entries;
        double m = 0.0;
        for (int k = 0; k < c.outerSize(); ++k)
            for (SparseCd::InnerIterator it(c, k); it; ++it)
                m = std::max(m, std::abs(it.value()));
        CHECK(m < 1e-12);
    }
}

TEST_CASE("decoupled full model has additive free energies") {
    // Local bath basis so mode energies stay diagonal with unequal
    // frequencies; the coupling is zero.
    SystemSpec spec;
    spec.group_a = {2, 1.0};
    spec.bath_a = BathSpec{{0.7, 1.1}, Eigen::MatrixXd::Zero(2, 2), 3};
    spec.bath_basis = BathBasis::Local;

    std::vector<double> expected;
    for (int s0 = 0; s0 <= 1; ++s0)
        for (int s1 = 0; s1 <= 1; ++s1)
            for (int m0 = 0; m0 < 3; ++m0)
                for (int m1 = 0; m1 < 3; ++m1)
                    expected.push_back(1.0 * (s0 - 0.5) + 1.0 * (s1 - 0.5) + 0.7 * m0 +
                                       1.1 * m1);
    std::sort(expected.begin(), expected.end());

    const Eigen::VectorXd eigs = sorted_eigenvalues(full_hamiltonian(spec));
    REQUIRE(eigs.size() == static_cast<Eigen::Index>(expected.size()));
    for (Eigen::Index i = 0; i < eigs.size(); ++i)
        CHECK(eigs(i) ==
              doctest::Approx(expected[static_cast<std::size_t>(i)]).epsilon(1e-10));

    // In the collective basis the same spectrum requires equal mode
    // frequencies (the mode mixing is then trivial).
    spec.bath_basis = BathBasis::Collective;
    spec.bath_a->mode_frequencies = {0.7, 0.7};
    const Eigen::VectorXd ceigs = sorted_eigenvalues(full_hamiltonian(spec));
    std::vector<double> cexp;
    for (int s0 = 0; s0 <= 1; ++s0)
        for (int s1 = 0; s1 <= 1; ++s1)
            for (int m0 = 0; m0 < 3; ++m0)
                for (int m1 = 0; m1 < 3; ++m1)
                    cexp.push_back(1.0 * (s0 - 0.5) + 1.0 * (s1 - 0.5) + 0.7 * (m0 + m1));
    std::sort(cexp.begin(), cexp.end());
    for (Eigen::Index i = 0; i < ceigs.size(); ++i)
        CHECK(ceigs(i) == doctest::Approx(cexp[static_cast<std::size_t>(i)]).epsilon(1e-10));
}

TEST_CASE("homogeneous couplings concentrate on the symmetric collective mode") {
    const int N = 3, L = 3;
    const double Gamma = 0.2;
    SystemSpec spec;
    spec.group_a = {N, 1.0};
    spec.bath_a = BathSpec{std::vector<double>(L, 0.9),
                           Eigen::MatrixXd::Constant(N, L, Gamma), 3};
    const SpaceLayout layout = build_layout(spec);
    const OperatorMatrix h = full_hamiltonian(spec);

    const StateVector ket = dicke_state(layout, 0, 1); // bath vacuum
    const StateVector ground = dicke_state(layout, 0, 0);
    for (int c = 0; c < L; ++c) {
        const StateVector bra = tensor_combine(ground, mode_fock_state(layout, 0, c, 1));
        const double elem = std::abs(matrix_element(bra, h, ket));
        if (c == 0)
            CHECK(elem == doctest::Approx(std::sqrt(double(N)) * std::sqrt(double(L)) * Gamma)
                              .epsilon(1e-12));
        else
            CHECK(elem < 1e-12);
    }
}

TEST_CASE("uniform intra-group coupling makes the W state an eigenstate") {
    const int N = 4;
    const double g = 0.07;
    SystemSpec spec;
    spec.group_a = {N, 1.0};
    spec.intra_coupling_a = Eigen::MatrixXd::Constant(N, N, g);
    spec.intra_coupling_a.diagonal().setZero();

    const SpaceLayout layout = build_layout(spec);
    const StateVector w = dicke_state(layout, 0, 1);
    const OperatorMatrix h = full_hamiltonian(spec);
    const cplx lam = matrix_element(w, h, w);
    CHECK((h.entries * w.amplitudes - lam * w.amplitudes).norm() < 1e-12);

    SystemSpec free_spec = spec;
    free_spec.intra_coupling_a.setZero();
    const cplx lam0 = matrix_element(w, full_hamiltonian(free_spec), w);
    CHECK(std::abs(lam - lam0 - cplx(double(N - 1) * g, 0.0)) < 1e-12);
}

TEST_CASE("sigma-x bath coupling breaks excitation conservation") {
    SystemSpec spec;
    spec.group_a = {2, 1.0};
    spec.bath_a = BathSpec{{0.9}, Eigen::MatrixXd::Constant(2, 1, 0.1), 3};

    const SpaceLayout layout = build_layout(spec);
    CHECK(commutator_max(full_hamiltonian(spec), total_excitation(layout)) < 1e-13);

    spec.bath_coupling = BathCoupling::SigmaX;
    const OperatorMatrix hx = full_hamiltonian(spec);
    CHECK(hx.hermitian);
    CHECK(commutator_max(hx, total_excitation(layout)) > 0.01);
}

TEST_CASE("site disorder draws are deterministic and unbiased") {
    SystemSpec spec = hopping_spec(4, 3, 0.1);
    spec.rng_seed = 42;

    SUBCASE("zero width is a no-op") {
        const SystemSpec out = apply_site_disorder(spec, 0.0);
        CHECK(out.site_offsets_a.empty());
        CHECK(out.site_offsets_b.empty());
    }
    SUBCASE("fixed seed reproduces the offsets, scaling linearly in width") {
        const SystemSpec a = apply_site_disorder(spec, 0.1);
        const SystemSpec b = apply_site_disorder(spec, 0.1);
        const SystemSpec c = apply_site_disorder(spec, 0.2);
        REQUIRE(a.site_offsets_a.size() == 4);
        REQUIRE(a.site_offsets_b.size() == 3);
        for (std::size_t j = 0; j < 4; ++j) {
            CHECK(a.site_offsets_a[j] == b.site_offsets_a[j]);
            CHECK(c.site_offsets_a[j] == doctest::Approx(2.0 * a.site_offsets_a[j]));
            CHECK(std::abs(a.site_offsets_a[j]) <= 0.1);
        }
        SystemSpec other = spec;
        other.rng_seed = 43;
        const SystemSpec d = apply_site_disorder(other, 0.1);
        bool any_diff = false;
        for (std::size_t j = 0; j < 4; ++j)
            any_diff = any_diff || d.site_offsets_a[j] != a.site_offsets_a[j];
        CHECK(any_diff);
    }
    SUBCASE("offsets average to zero over many draws") {
        const double width = 0.1;
        SystemSpec big;
        big.group_a = {500, 1.0};
        double sum = 0.0;
        std::size_t count = 0;
        for (std::uint64_t seed = 0; seed < 200; ++seed) {
            big.rng_seed = seed;
            const SystemSpec filled = apply_site_disorder(big, width);
            for (double v : filled.site_offsets_a) {
                sum += v;
                ++count;
            }
        }
        REQUIRE(count == 100000);
        const double sigma_mean = (width / std::sqrt(3.0)) / std::sqrt(double(count));
        CHECK(std::abs(sum / double(count)) < 3.0 * sigma_mean);
    }
    SUBCASE("negative width is rejected") {
        CHECK_THROWS_AS(apply_site_disorder(spec, -0.1), std::domain_error);
    }
}

TEST_CASE("builders reject inconsistent specs") {
    SystemSpec no_field;
    no_field.group_a = {2, 1.0};
    CHECK_THROWS_AS(dicke_hamiltonian(no_field), ConfigError);

    CHECK_THROWS_AS(hopping_hamiltonian(no_field), ConfigError); // missing group B

    SystemSpec with_field = dicke_spec(2, 3, 0.1);
    with_field.group_b = SpinGroupSpec{2, 1.0};
    CHECK_THROWS_AS(hopping_hamiltonian(with_field), ConfigError); // modes present
    CHECK_THROWS_AS(full_hamiltonian(with_field), ConfigError);    // field not in model

    SystemSpec bad_bath;
    bad_bath.group_a = {2, 1.0};
    bad_bath.bath_a = BathSpec{{1.0, 1.0}, Eigen::MatrixXd::Zero(2, 1), 3}; // 2 modes, 1 column
    CHECK_THROWS_AS(full_hamiltonian(bad_bath), ConfigError);

    SystemSpec asym;
    asym.group_a = {2, 1.0};
    asym.intra_coupling_a = Eigen::MatrixXd::Zero(2, 2);
    asym.intra_coupling_a(0, 1) = 0.1; // not symmetric
    CHECK_THROWS_AS(asym.validate(), ConfigError);
}

} // TEST_SUITE
