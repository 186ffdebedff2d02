#include "coopdyn/state.hpp"

#include "coopdyn/errors.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>
#include <string>

namespace coopdyn {

namespace {

double binomial(int n, int k) {
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r *= double(n - k + i) / double(i);
    return r;
}

} // namespace

cplx overlap(const StateVector& bra, const StateVector& ket) {
    if (bra.dim() != ket.dim()) throw std::invalid_argument("overlap: dimension mismatch");
    return bra.amplitudes.dot(ket.amplitudes); // Eigen dot conjugates the left factor
}

StateVector basis_state(const SpaceLayout& layout, std::size_t index) {
    if (index >= layout.total_dim()) throw std::domain_error("basis index out of range");
    StateVector s{Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(layout.total_dim())), layout};
    s.amplitudes[static_cast<Eigen::Index>(index)] = 1.0;
    return s;
}

StateVector basis_state(const SpaceLayout& layout, const BasisConfig& config) {
    return basis_state(layout, layout.encode(config));
}

StateVector dicke_state(const SpaceLayout& layout, std::size_t group, int n) {
    const int N = layout.spin_counts().at(group);
    if (n < 0 || n > N)
        throw std::domain_error("dicke_state: n must satisfy 0 <= n <= " + std::to_string(N));
    const int offset = layout.spin_offset(group);
    const double amp = 1.0 / std::sqrt(binomial(N, n));

    StateVector s{Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(layout.total_dim())), layout};
    // Enumerate the C(N,n) excitation patterns within the group.
    const std::size_t patterns = std::size_t(1) << N;
    for (std::size_t p = 0; p < patterns; ++p) {
        if (std::popcount(p) != n) continue;
        s.amplitudes[static_cast<Eigen::Index>(p << offset)] = amp;
    }
    return s;
}

StateVector singlet_state(const SpaceLayout& layout, std::size_t group, int j, int jp) {
    const int N = layout.spin_counts().at(group);
    if (j == jp) throw std::domain_error("singlet_state: sites must differ");
    if (j < 0 || jp < 0 || j >= N || jp >= N)
        throw std::domain_error("singlet_state: site out of range");
    const int offset = layout.spin_offset(group);

    StateVector s{Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(layout.total_dim())), layout};
    const double amp = 1.0 / std::sqrt(2.0);
    s.amplitudes[static_cast<Eigen::Index>(std::size_t(1) << (offset + j))] = amp;
    s.amplitudes[static_cast<Eigen::Index>(std::size_t(1) << (offset + jp))] = -amp;
    return s;
}

StateVector mode_fock_state(const SpaceLayout& layout, std::size_t boson_group, int mode, int m) {
    const auto& groups = layout.boson_groups();
    if (boson_group >= groups.size()) throw std::domain_error("boson group out of range");
    if (mode < 0 || mode >= groups[boson_group].modes) throw std::domain_error("mode out of range");
    if (m < 0 || m >= groups[boson_group].cutoff) throw std::domain_error("occupation out of range");
    const int flat = layout.mode_offset(boson_group) + mode;
    return basis_state(layout, layout.bump_mode(0, flat, m));
}

StateVector tensor_combine(const StateVector& a, const StateVector& b) {
    if (!(a.layout == b.layout)) throw std::invalid_argument("tensor_combine: layouts differ");
    StateVector out{Eigen::VectorXcd::Zero(a.amplitudes.size()), a.layout};
    for (Eigen::Index i = 0; i < a.amplitudes.size(); ++i) {
        if (a.amplitudes[i] == cplx(0)) continue;
        for (Eigen::Index k = 0; k < b.amplitudes.size(); ++k) {
            if (b.amplitudes[k] == cplx(0)) continue;
            // Disjoint support: combined occupations add without carries.
            const auto ci = a.layout.decode(static_cast<std::size_t>(i));
            const auto ck = b.layout.decode(static_cast<std::size_t>(k));
            for (std::size_t s = 0; s < ci.spins.size(); ++s)
                if (ci.spins[s] && ck.spins[s])
                    throw std::invalid_argument("tensor_combine: overlapping spin support");
            for (std::size_t mo = 0; mo < ci.modes.size(); ++mo)
                if (ci.modes[mo] && ck.modes[mo])
                    throw std::invalid_argument("tensor_combine: overlapping mode support");
            out.amplitudes[i + k] += a.amplitudes[i] * b.amplitudes[k];
        }
    }
    return out;
}

} // namespace coopdyn
