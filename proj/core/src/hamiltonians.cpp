#include "coopdyn/hamiltonians.hpp"

#include "coopdyn/errors.hpp"
#include "coopdyn/rng.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace coopdyn {

namespace {

using Triplet = Eigen::Triplet<cplx>;

class TermBuilder {
public:
    explicit TermBuilder(const SpaceLayout& layout) : layout_(layout) {
        trips_.reserve(layout.total_dim() * 4);
    }

    void add(std::size_t row, std::size_t col, double v) {
        trips_.emplace_back(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col), cplx(v));
    }

    // Raise the excitation of one site and lower another (σ+_to σ-_from),
    // both directions, scaled by g.
    void hop(std::size_t i, int bit_from, int bit_to, double g) {
        if (layout_.spin_excited(i, bit_from) && !layout_.spin_excited(i, bit_to))
            add(layout_.flip_spin(layout_.flip_spin(i, bit_from), bit_to), i, g);
        if (layout_.spin_excited(i, bit_to) && !layout_.spin_excited(i, bit_from))
            add(layout_.flip_spin(layout_.flip_spin(i, bit_from), bit_to), i, g);
    }

    // Γ (a† σ- + a σ+) on one site/mode pair.
    void exchange(std::size_t i, int bit, int flat_mode, double g) {
        const int m = layout_.mode_occupation(i, flat_mode);
        if (layout_.spin_excited(i, bit) && m + 1 < layout_.mode_cutoff(flat_mode))
            add(layout_.bump_mode(layout_.flip_spin(i, bit), flat_mode, +1), i,
                g * std::sqrt(double(m + 1)));
        if (!layout_.spin_excited(i, bit) && m > 0)
            add(layout_.bump_mode(layout_.flip_spin(i, bit), flat_mode, -1), i,
                g * std::sqrt(double(m)));
    }

    // Γ σx (a + a†) on one site/mode pair.
    void sigma_x_field(std::size_t i, int bit, int flat_mode, double g) {
        const int m = layout_.mode_occupation(i, flat_mode);
        const std::size_t flipped = layout_.flip_spin(i, bit);
        if (m + 1 < layout_.mode_cutoff(flat_mode))
            add(layout_.bump_mode(flipped, flat_mode, +1), i, g * std::sqrt(double(m + 1)));
        if (m > 0)
            add(layout_.bump_mode(flipped, flat_mode, -1), i, g * std::sqrt(double(m)));
    }

    // g b_c† b_c' (+ h.c. comes from the transposed call).
    void mode_quadratic(std::size_t i, int flat_c, int flat_cp, double g) {
        const int mp = layout_.mode_occupation(i, flat_cp);
        if (mp == 0) return;
        if (flat_c == flat_cp) {
            add(i, i, g * double(mp));
            return;
        }
        const int mc = layout_.mode_occupation(i, flat_c);
        if (mc + 1 < layout_.mode_cutoff(flat_c))
            add(layout_.bump_mode(layout_.bump_mode(i, flat_cp, -1), flat_c, +1), i,
                g * std::sqrt(double(mp) * double(mc + 1)));
    }

    OperatorMatrix finish() {
        SparseCd m(static_cast<Eigen::Index>(layout_.total_dim()),
                   static_cast<Eigen::Index>(layout_.total_dim()));
        m.setFromTriplets(trips_.begin(), trips_.end());
        m.prune([](Eigen::Index, Eigen::Index, const cplx& v) { return v != cplx(0); });
        m.makeCompressed();
        return make_operator(std::move(m), true);
    }

private:
    const SpaceLayout& layout_;
    std::vector<Triplet> trips_;
};

// Site-mode couplings and mode frequencies of one bath in the basis the
// model is represented in.  Collective: Γ̃ = Γ Oᵀ and W = O diag(ω) Oᵀ;
// local: Γ and diag(ω) unchanged.
struct BathTerms {
    Eigen::MatrixXd couplings; // sites × modes
    Eigen::MatrixXd mode_form; // modes × modes, symmetric
};

BathTerms bath_terms(const BathSpec& bath, BathBasis basis) {
    const auto L = static_cast<Eigen::Index>(bath.mode_frequencies.size());
    Eigen::VectorXd freqs(L);
    for (Eigen::Index l = 0; l < L; ++l) freqs[l] = bath.mode_frequencies[static_cast<std::size_t>(l)];
    if (basis == BathBasis::Local)
        return {bath.couplings, Eigen::MatrixXd(freqs.asDiagonal())};
    const Eigen::MatrixXd o = collective_mode_transform(static_cast<int>(L));
    return {bath.couplings * o.transpose(), o * freqs.asDiagonal() * o.transpose()};
}

void add_bath(TermBuilder& tb, const SpaceLayout& layout, const SystemSpec& spec,
              const BathTerms& terms, std::size_t spin_group, std::size_t boson_group) {
    const int sites = layout.spin_counts()[spin_group];
    const int modes = layout.boson_groups()[boson_group].modes;
    const int bit0 = layout.spin_offset(spin_group);
    const int mode0 = layout.mode_offset(boson_group);
    for (std::size_t i = 0; i < layout.total_dim(); ++i) {
        for (int c = 0; c < modes; ++c)
            for (int cp = 0; cp < modes; ++cp) {
                const double w = terms.mode_form(c, cp);
                if (w != 0.0) tb.mode_quadratic(i, mode0 + c, mode0 + cp, w);
            }
        for (int j = 0; j < sites; ++j)
            for (int c = 0; c < modes; ++c) {
                const double g = terms.couplings(j, c);
                if (g == 0.0) continue;
                if (spec.bath_coupling == BathCoupling::ExcitationConserving)
                    tb.exchange(i, bit0 + j, mode0 + c, g);
                else
                    tb.sigma_x_field(i, bit0 + j, mode0 + c, g);
            }
    }
}

void add_intra(TermBuilder& tb, const SpaceLayout& layout, const Eigen::MatrixXd& g,
               std::size_t group) {
    if (g.size() == 0) return;
    const int sites = layout.spin_counts()[group];
    const int bit0 = layout.spin_offset(group);
    for (std::size_t i = 0; i < layout.total_dim(); ++i)
        for (int j = 0; j < sites; ++j)
            for (int jp = j + 1; jp < sites; ++jp)
                if (g(j, jp) != 0.0) tb.hop(i, bit0 + j, bit0 + jp, g(j, jp));
}

double spin_diag(const SystemSpec& spec, const SpaceLayout& layout, std::size_t i) {
    // −(ω_j/2) σz_j  →  ω_j (s_j − 1/2)
    double e = 0.0;
    const int bitsA = layout.spin_counts()[0];
    for (int j = 0; j < bitsA; ++j)
        e += spec.site_frequency_a(j) * (layout.spin_excited(i, j) ? 0.5 : -0.5);
    if (layout.spin_counts().size() > 1) {
        const int bit0 = layout.spin_offset(1);
        for (int k = 0; k < layout.spin_counts()[1]; ++k)
            e += spec.site_frequency_b(k) * (layout.spin_excited(i, bit0 + k) ? 0.5 : -0.5);
    }
    return e;
}

} // namespace

OperatorMatrix dicke_hamiltonian(const SystemSpec& spec) {
    spec.validate();
    if (!spec.field_mode) throw ConfigError("dicke_hamiltonian: missing field mode");
    if (spec.group_b) throw ConfigError("dicke_hamiltonian: expects a single spin group");
    if (spec.bath_a || spec.bath_b) throw ConfigError("dicke_hamiltonian: baths not supported");

    const SpaceLayout layout = build_layout(spec);
    const int N = spec.group_a.sites;
    const int flat_mode = layout.mode_offset(0);
    const double gamma = spec.inter_coupling;

    TermBuilder tb(layout);
    for (std::size_t i = 0; i < layout.total_dim(); ++i) {
        const double diag =
            spin_diag(spec, layout, i) +
            spec.field_mode->frequency * layout.mode_occupation(i, flat_mode);
        if (diag != 0.0) tb.add(i, i, diag);
        if (gamma == 0.0) continue;
        for (int j = 0; j < N; ++j) {
            if (spec.rwa)
                tb.exchange(i, j, flat_mode, gamma);
            else
                tb.sigma_x_field(i, j, flat_mode, gamma);
        }
    }
    return tb.finish();
}

OperatorMatrix hopping_hamiltonian(const SystemSpec& spec) {
    spec.validate();
    if (!spec.group_b) throw ConfigError("hopping_hamiltonian: missing group B");
    if (spec.field_mode || spec.bath_a || spec.bath_b)
        throw ConfigError("hopping_hamiltonian: spins only, no bosonic modes");

    const SpaceLayout layout = build_layout(spec);
    const int N = spec.group_a.sites;
    const int M = spec.group_b->sites;
    const int bitB = layout.spin_offset(1);
    const double gamma = spec.inter_coupling;

    TermBuilder tb(layout);
    for (std::size_t i = 0; i < layout.total_dim(); ++i) {
        const double diag = spin_diag(spec, layout, i);
        if (diag != 0.0) tb.add(i, i, diag);
        if (gamma == 0.0) continue;
        for (int j = 0; j < N; ++j)
            for (int k = 0; k < M; ++k) tb.hop(i, j, bitB + k, gamma);
    }
    return tb.finish();
}

OperatorMatrix full_hamiltonian(const SystemSpec& spec) {
    spec.validate();
    if (spec.field_mode) throw ConfigError("full_hamiltonian: field mode not part of this model");

    const SpaceLayout layout = build_layout(spec);
    const int N = spec.group_a.sites;
    const int M = spec.group_b ? spec.group_b->sites : 0;
    const int bitB = spec.group_b ? layout.spin_offset(1) : 0;
    const double gamma = spec.inter_coupling;

    TermBuilder tb(layout);
    for (std::size_t i = 0; i < layout.total_dim(); ++i) {
        const double diag = spin_diag(spec, layout, i);
        if (diag != 0.0) tb.add(i, i, diag);
        if (gamma != 0.0)
            for (int j = 0; j < N; ++j)
                for (int k = 0; k < M; ++k) tb.hop(i, j, bitB + k, gamma);
    }
    add_intra(tb, layout, spec.intra_coupling_a, 0);
    add_intra(tb, layout, spec.intra_coupling_b, 1);

    std::size_t boson_group = 0;
    if (spec.bath_a)
        add_bath(tb, layout, spec, bath_terms(*spec.bath_a, spec.bath_basis), 0, boson_group++);
    if (spec.bath_b)
        add_bath(tb, layout, spec, bath_terms(*spec.bath_b, spec.bath_basis), 1, boson_group++);

    return tb.finish();
}

SystemSpec apply_site_disorder(const SystemSpec& spec, double width) {
    if (width < 0.0) throw std::domain_error("disorder width must be >= 0");
    if (width == 0.0) return spec;
    SystemSpec out = spec;
    auto eng = stream_engine(spec.rng_seed, 0);
    out.site_offsets_a.resize(static_cast<std::size_t>(spec.group_a.sites));
    for (auto& d : out.site_offsets_a) d = width * uniform_symmetric(eng, 1.0);
    if (spec.group_b) {
        out.site_offsets_b.resize(static_cast<std::size_t>(spec.group_b->sites));
        for (auto& d : out.site_offsets_b) d = width * uniform_symmetric(eng, 1.0);
    }
    return out;
}

} // namespace coopdyn
