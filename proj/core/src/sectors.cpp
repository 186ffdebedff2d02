#include "coopdyn/sectors.hpp"

#include "coopdyn/errors.hpp"
#include "coopdyn/rng.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <set>
#include <stdexcept>
#include <utility>
#include <vector>

namespace coopdyn {

namespace {

using Triplet = Eigen::Triplet<cplx>;

double binom(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r *= double(n - k + i) / double(i);
    return r;
}

double factorial(int n) {
    double r = 1.0;
    for (int i = 2; i <= n; ++i) r *= double(i);
    return r;
}

// Embeds a factor matrix acting on one contiguous digit block (sub-index
// sub = (i / stride) % subdim) into the full space, identity elsewhere.
SparseCd lift_factor(std::size_t total_dim, std::size_t stride, std::size_t subdim,
                     const std::vector<Triplet>& factor) {
    std::vector<std::vector<std::pair<std::size_t, cplx>>> by_col(subdim);
    for (const auto& t : factor)
        by_col[static_cast<std::size_t>(t.col())].emplace_back(static_cast<std::size_t>(t.row()),
                                                               t.value());
    std::vector<Triplet> trips;
    for (std::size_t i = 0; i < total_dim; ++i) {
        const std::size_t sub = (i / stride) % subdim;
        const std::size_t base = i - sub * stride;
        for (const auto& [row, v] : by_col[sub])
            trips.emplace_back(static_cast<Eigen::Index>(base + row * stride),
                               static_cast<Eigen::Index>(i), v);
    }
    SparseCd m(static_cast<Eigen::Index>(total_dim), static_cast<Eigen::Index>(total_dim));
    m.setFromTriplets(trips.begin(), trips.end());
    m.makeCompressed();
    return m;
}

// Projector onto the permutation-symmetric subspace of an N-spin register,
// as a 2^N × 2^N factor: ⟨p|P|p'⟩ = 1/C(N,n) when both patterns hold n
// excitations.
std::vector<Triplet> symmetric_spin_factor(int sites) {
    const std::size_t dim = std::size_t(1) << sites;
    std::vector<std::vector<std::size_t>> by_count(static_cast<std::size_t>(sites) + 1);
    for (std::size_t p = 0; p < dim; ++p)
        by_count[static_cast<std::size_t>(std::popcount(p))].push_back(p);
    std::vector<Triplet> f;
    for (int n = 0; n <= sites; ++n) {
        const double w = 1.0 / binom(sites, n);
        for (std::size_t a : by_count[static_cast<std::size_t>(n)])
            for (std::size_t b : by_count[static_cast<std::size_t>(n)])
                f.emplace_back(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b), cplx(w));
    }
    return f;
}

// Bath factor in the collective representation: every non-symmetric mode
// (digits 1..L−1 of the group) in vacuum, symmetric mode free.
std::vector<Triplet> collective_bath_factor(int modes, int cutoff) {
    std::vector<Triplet> f;
    for (int m = 0; m < cutoff; ++m)
        f.emplace_back(m, m, cplx(1.0));
    (void)modes; // sub-index < cutoff already pins the higher digits to zero
    return f;
}

// Bath factor in the local representation: projector onto the symmetric
// collective Fock states |m⟩ = L^{−m/2} √(m!) Σ_{|n|=m} Π (n_ℓ!)^{−1/2} |n⟩
// for m ≤ d−1 (higher m would spill past the per-mode cutoff).
std::vector<Triplet> local_bath_factor(int modes, int cutoff) {
    std::size_t dim = 1;
    for (int l = 0; l < modes; ++l) dim *= static_cast<std::size_t>(cutoff);
    std::vector<std::vector<std::pair<std::size_t, double>>> states(
        static_cast<std::size_t>(cutoff));
    for (std::size_t sub = 0; sub < dim; ++sub) {
        std::size_t rest = sub;
        int total = 0;
        double occ_fact = 1.0;
        for (int l = 0; l < modes; ++l) {
            const int n = static_cast<int>(rest % static_cast<std::size_t>(cutoff));
            rest /= static_cast<std::size_t>(cutoff);
            total += n;
            occ_fact *= factorial(n);
        }
        if (total >= cutoff) continue;
        const double amp = std::sqrt(factorial(total) /
                                     (std::pow(double(modes), total) * occ_fact));
        states[static_cast<std::size_t>(total)].emplace_back(sub, amp);
    }
    std::vector<Triplet> f;
    for (const auto& vec : states)
        for (const auto& [i, ai] : vec)
            for (const auto& [j, aj] : vec)
                f.emplace_back(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j),
                               cplx(ai * aj));
    return f;
}

double spectral_norm(const SparseCd& a) {
    if (a.nonZeros() == 0) return 0.0;
    const Eigen::Index n = a.rows();
    auto eng = stream_engine(0x5ec7u, 0);
    Eigen::VectorXcd v(n);
    for (Eigen::Index i = 0; i < n; ++i)
        v[i] = cplx(uniform_symmetric(eng, 1.0), uniform_symmetric(eng, 1.0));
    v.normalize();
    double prev = 0.0;
    for (int iter = 0; iter < 10000; ++iter) {
        Eigen::VectorXcd w = a * v;
        const double lam = w.norm();
        if (lam == 0.0) return 0.0;
        v = w / lam;
        if (std::abs(lam - prev) <= 1e-8 * std::max(1.0, lam)) return lam;
        prev = lam;
    }
    return prev;
}

SparseCd symmetrized(const SparseCd& m) {
    SparseCd adj = m.adjoint();
    SparseCd out = 0.5 * (m + adj);
    out.prune([](Eigen::Index, Eigen::Index, const cplx& v) { return v != cplx(0); });
    return out;
}

struct MeasuredPoint {
    double predicted = 0.0;
    double measured = 0.0;
};

MeasuredPoint measure_emission(const ScalingPoint& p, double gamma) {
    SystemSpec spec;
    spec.group_a = {p.N, 1.0};
    spec.field_mode = FieldModeSpec{1.0, p.m + 3};
    spec.inter_coupling = gamma;
    spec.rwa = true;
    const SpaceLayout layout = build_layout(spec);
    const OperatorMatrix h = dicke_hamiltonian(spec);
    const StateVector ket =
        tensor_combine(dicke_state(layout, 0, p.n), mode_fock_state(layout, 0, 0, p.m));
    const StateVector bra =
        tensor_combine(dicke_state(layout, 0, p.n - 1), mode_fock_state(layout, 0, 0, p.m + 1));
    return {emission_amplitude(p.N, p.n, gamma, p.m), std::abs(matrix_element(bra, h, ket))};
}

MeasuredPoint measure_hopping(const ScalingPoint& p, double gamma) {
    SystemSpec spec;
    spec.group_a = {p.N, 1.0};
    spec.group_b = SpinGroupSpec{p.M, 1.0};
    spec.inter_coupling = gamma;
    const SpaceLayout layout = build_layout(spec);
    const OperatorMatrix h = hopping_hamiltonian(spec);
    const StateVector ket = dicke_state(layout, 0, 1);
    const StateVector bra = dicke_state(layout, 1, 1);
    return {std::sqrt(double(p.N) * double(p.M)) * gamma,
            std::abs(matrix_element(bra, h, ket))};
}

MeasuredPoint measure_net_rate(const ScalingPoint& p, double gamma) {
    SystemSpec spec;
    spec.group_a = {p.N, 1.0};
    spec.group_b = SpinGroupSpec{p.M, 1.0};
    spec.inter_coupling = 0.0;
    const SpaceLayout layout = build_layout(spec);
    const Eigen::Index dim = static_cast<Eigen::Index>(layout.total_dim());
    SparseCd v(dim, dim);
    for (int j = 0; j < p.N; ++j)
        for (int k = 0; k < p.M; ++k)
            v = v + SparseCd(sigma_plus_site(layout, 1, k).entries *
                             sigma_minus_site(layout, 0, j).entries);
    v = v * cplx(gamma);
    const StateVector psi =
        tensor_combine(dicke_state(layout, 0, p.n), dicke_state(layout, 1, p.m));
    const double fwd = (v * psi.amplitudes).squaredNorm();
    const double back = (SparseCd(v.adjoint()) * psi.amplitudes).squaredNorm();
    return {supertransfer_rate(p.n, p.N, p.m, p.M, gamma), fwd - back};
}

} // namespace

OperatorMatrix cooperative_projector(const SpaceLayout& layout, const SystemSpec& spec) {
    if (!(build_layout(spec) == layout))
        throw ConfigError("cooperative_projector: layout does not match spec");
    const std::size_t dim = layout.total_dim();

    std::vector<SparseCd> factors;
    for (std::size_t g = 0; g < layout.spin_counts().size(); ++g) {
        const int sites = layout.spin_counts()[g];
        factors.push_back(lift_factor(dim, std::size_t(1) << layout.spin_offset(g),
                                      std::size_t(1) << sites, symmetric_spin_factor(sites)));
    }
    // Boson groups: field mode (if present) is unrestricted; each bath group
    // contributes its symmetric-mode-only factor.
    std::size_t bgroup = spec.field_mode ? 1 : 0;
    const BathSpec* baths[2] = {spec.bath_a ? &*spec.bath_a : nullptr,
                                spec.bath_b ? &*spec.bath_b : nullptr};
    for (const BathSpec* bath : baths) {
        if (!bath) continue;
        const int modes = layout.boson_groups()[bgroup].modes;
        const int cutoff = layout.boson_groups()[bgroup].cutoff;
        std::size_t subdim = 1;
        for (int l = 0; l < modes; ++l) subdim *= static_cast<std::size_t>(cutoff);
        const std::size_t stride = layout.bump_mode(0, layout.mode_offset(bgroup), +1);
        const auto factor = spec.bath_basis == BathBasis::Collective
                                ? collective_bath_factor(modes, cutoff)
                                : local_bath_factor(modes, cutoff);
        factors.push_back(lift_factor(dim, stride, subdim, factor));
        ++bgroup;
    }

    SparseCd p = factors.front();
    for (std::size_t i = 1; i < factors.size(); ++i) p = SparseCd(p * factors[i]);
    return make_operator(symmetrized(p), true);
}

SectorDecomposition decompose(const OperatorMatrix& h, const OperatorMatrix& p_cooperative) {
    if (h.dim() != p_cooperative.dim())
        throw ConfigError("decompose: dimension mismatch between H and P");
    const SparseCd& hm = h.entries;
    const SparseCd& pm = p_cooperative.entries;
    SparseCd hp = hm * pm;
    SparseCd ph = pm * hm;
    SparseCd php = pm * hp;

    SectorDecomposition out;
    out.h_c = make_operator(symmetrized(php), true);
    out.h_n = make_operator(symmetrized(SparseCd(hm - ph - hp + php)), true);
    out.h_cn = make_operator(symmetrized(SparseCd(ph + hp - 2.0 * php)), true);
    out.p_cooperative = p_cooperative;
    out.leakage_frobenius = out.h_cn.entries.norm();
    out.leakage_spectral = spectral_norm(out.h_cn.entries);
    return out;
}

double emission_amplitude(int N, int n, double gamma, int m_from) {
    if (N < 1 || n < 0 || n > N || m_from < 0)
        throw std::domain_error("emission_amplitude: need N ≥ 1, 0 ≤ n ≤ N, m ≥ 0");
    return std::sqrt(double(n) * double(N - n + 1)) * std::sqrt(double(m_from + 1)) * gamma;
}

TransferTerms supertransfer_terms(int n, int N, int m, int M, double gamma) {
    if (N < 1 || M < 1 || n < 0 || n > N || m < 0 || m > M)
        throw std::domain_error("supertransfer_terms: occupations out of range");
    const double g2 = gamma * gamma;
    TransferTerms t;
    t.forward = g2 * double(n) * double(N - n + 1) * double(m + 1) * double(M - m);
    t.backward = g2 * double(n + 1) * double(N - n) * double(m) * double(M - m + 1);
    return t;
}

double supertransfer_rate(int n, int N, int m, int M, double gamma) {
    const TransferTerms t = supertransfer_terms(n, N, m, M, gamma);
    return t.forward - t.backward;
}

cplx matrix_element(const StateVector& bra, const OperatorMatrix& h, const StateVector& ket) {
    if (!(bra.layout == ket.layout) || bra.dim() != h.dim() || ket.dim() != h.dim())
        throw ConfigError("matrix_element: mismatched layouts");
    return bra.amplitudes.dot(h.entries * ket.amplitudes);
}

RateScalingReport verify_scaling(ScalingFormula formula, const std::vector<ScalingPoint>& grid,
                                 double gamma) {
    RateScalingReport report;
    for (const ScalingPoint& p : grid) {
        MeasuredPoint mp;
        switch (formula) {
        case ScalingFormula::EmissionAmplitude: mp = measure_emission(p, gamma); break;
        case ScalingFormula::HoppingElement: mp = measure_hopping(p, gamma); break;
        case ScalingFormula::NetTransferRate: mp = measure_net_rate(p, gamma); break;
        }
        report.samples.push_back(
            {p, mp.predicted, mp.measured, std::abs(mp.measured - mp.predicted)});
        report.max_abs_error = std::max(report.max_abs_error, report.samples.back().abs_error);
    }

    std::vector<double> xs, ys;
    std::set<double> distinct;
    for (const ScalingSample& s : report.samples) {
        if (s.predicted == 0.0 || s.measured == 0.0) continue;
        xs.push_back(std::log(std::abs(s.predicted)));
        ys.push_back(std::log(std::abs(s.measured)));
        distinct.insert(xs.back());
    }
    if (distinct.size() < 4)
        throw ConfigError("verify_scaling: need at least 4 distinct nonzero predictions");

    const double n = double(xs.size());
    double sx = 0, sy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
    }
    const double mx = sx / n, my = sy / n;
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    report.fitted_exponent = sxy / sxx;
    const double a = my - report.fitted_exponent * mx;
    double rss = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double r = ys[i] - a - report.fitted_exponent * xs[i];
        rss += r * r;
    }
    report.fit_residual = std::sqrt(rss / n);
    return report;
}

} // namespace coopdyn
