#include "coopdyn/operators.hpp"

#include "coopdyn/errors.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace coopdyn {

namespace {

using Triplet = Eigen::Triplet<cplx>;

SparseCd from_triplets(std::size_t dim, std::vector<Triplet>& trips) {
    SparseCd m(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    m.setFromTriplets(trips.begin(), trips.end());
    m.makeCompressed();
    return m;
}

int checked_site(const SpaceLayout& layout, std::size_t group, int site) {
    const int N = layout.spin_counts().at(group);
    if (site < 0 || site >= N) throw std::domain_error("site index out of range");
    return layout.spin_offset(group) + site;
}

int checked_mode(const SpaceLayout& layout, std::size_t boson_group, int mode) {
    const auto& groups = layout.boson_groups();
    if (boson_group >= groups.size()) throw std::domain_error("boson group out of range");
    if (mode < 0 || mode >= groups[boson_group].modes) throw std::domain_error("mode out of range");
    return layout.mode_offset(boson_group) + mode;
}

} // namespace

double hermiticity_defect(const SparseCd& m) {
    SparseCd diff = SparseCd(m.adjoint()) - m;
    double worst = 0.0;
    for (int k = 0; k < diff.outerSize(); ++k)
        for (SparseCd::InnerIterator it(diff, k); it; ++it)
            worst = std::max(worst, std::abs(it.value()));
    return worst;
}

OperatorMatrix make_operator(SparseCd m, bool expect_hermitian, double tol) {
    if (m.rows() != m.cols()) throw std::invalid_argument("operator must be square");
    OperatorMatrix op{std::move(m), false};
    if (expect_hermitian) {
        const double defect = hermiticity_defect(op.entries);
        if (defect >= tol)
            throw std::invalid_argument("operator fails hermiticity check, defect " +
                                        std::to_string(defect));
        op.hermitian = true;
    }
    return op;
}

OperatorMatrix identity_op(const SpaceLayout& layout) {
    const auto dim = static_cast<Eigen::Index>(layout.total_dim());
    SparseCd m(dim, dim);
    m.setIdentity();
    return OperatorMatrix{std::move(m), true};
}

OperatorMatrix sigma_z_site(const SpaceLayout& layout, std::size_t group, int site) {
    const int bit = checked_site(layout, group, site);
    std::vector<Triplet> trips;
    trips.reserve(layout.total_dim());
    for (std::size_t i = 0; i < layout.total_dim(); ++i)
        trips.emplace_back(i, i, layout.spin_excited(i, bit) ? -1.0 : 1.0);
    return OperatorMatrix{from_triplets(layout.total_dim(), trips), true};
}

OperatorMatrix sigma_x_site(const SpaceLayout& layout, std::size_t group, int site) {
    const int bit = checked_site(layout, group, site);
    std::vector<Triplet> trips;
    trips.reserve(layout.total_dim());
    for (std::size_t i = 0; i < layout.total_dim(); ++i)
        trips.emplace_back(layout.flip_spin(i, bit), i, 1.0);
    return OperatorMatrix{from_triplets(layout.total_dim(), trips), true};
}

OperatorMatrix sigma_plus_site(const SpaceLayout& layout, std::size_t group, int site) {
    const int bit = checked_site(layout, group, site);
    std::vector<Triplet> trips;
    for (std::size_t i = 0; i < layout.total_dim(); ++i)
        if (!layout.spin_excited(i, bit))
            trips.emplace_back(layout.flip_spin(i, bit), i, 1.0);
    return OperatorMatrix{from_triplets(layout.total_dim(), trips), false};
}

OperatorMatrix sigma_minus_site(const SpaceLayout& layout, std::size_t group, int site) {
    const int bit = checked_site(layout, group, site);
    std::vector<Triplet> trips;
    for (std::size_t i = 0; i < layout.total_dim(); ++i)
        if (layout.spin_excited(i, bit))
            trips.emplace_back(layout.flip_spin(i, bit), i, 1.0);
    return OperatorMatrix{from_triplets(layout.total_dim(), trips), false};
}

OperatorMatrix mode_annihilator(const SpaceLayout& layout, std::size_t boson_group, int mode) {
    const int flat = checked_mode(layout, boson_group, mode);
    std::vector<Triplet> trips;
    for (std::size_t i = 0; i < layout.total_dim(); ++i) {
        const int m = layout.mode_occupation(i, flat);
        if (m > 0)
            trips.emplace_back(layout.bump_mode(i, flat, -1), i, std::sqrt(double(m)));
    }
    return OperatorMatrix{from_triplets(layout.total_dim(), trips), false};
}

OperatorMatrix mode_creator(const SpaceLayout& layout, std::size_t boson_group, int mode) {
    const int flat = checked_mode(layout, boson_group, mode);
    std::vector<Triplet> trips;
    for (std::size_t i = 0; i < layout.total_dim(); ++i) {
        const int m = layout.mode_occupation(i, flat);
        if (m + 1 < layout.mode_cutoff(flat))
            trips.emplace_back(layout.bump_mode(i, flat, +1), i, std::sqrt(double(m + 1)));
    }
    return OperatorMatrix{from_triplets(layout.total_dim(), trips), false};
}

OperatorMatrix mode_number(const SpaceLayout& layout, std::size_t boson_group, int mode) {
    const int flat = checked_mode(layout, boson_group, mode);
    std::vector<Triplet> trips;
    for (std::size_t i = 0; i < layout.total_dim(); ++i) {
        const int m = layout.mode_occupation(i, flat);
        if (m > 0) trips.emplace_back(i, i, double(m));
    }
    return OperatorMatrix{from_triplets(layout.total_dim(), trips), true};
}

OperatorMatrix total_excitation(const SpaceLayout& layout) {
    std::vector<Triplet> trips;
    trips.reserve(layout.total_dim());
    const std::size_t spin_mask = (std::size_t(1) << layout.total_spins()) - 1;
    for (std::size_t i = 0; i < layout.total_dim(); ++i) {
        double total = double(std::popcount(i & spin_mask));
        for (int m = 0; m < layout.total_modes(); ++m)
            total += layout.mode_occupation(i, m);
        if (total != 0.0) trips.emplace_back(i, i, total);
    }
    return OperatorMatrix{from_triplets(layout.total_dim(), trips), true};
}

OperatorMatrix symmetric_projector(const SpaceLayout& layout, std::size_t group) {
    const int N = layout.spin_counts().at(group);
    const auto dim = static_cast<Eigen::Index>(layout.total_dim());
    SparseCd p(dim, dim);
    for (int n = 0; n <= N; ++n) {
        const auto d = dicke_state(layout, group, n);
        // Rank-one update |D_n⟩⟨D_n| over the state's sparse support.
        std::vector<Triplet> trips;
        for (Eigen::Index i = 0; i < d.amplitudes.size(); ++i) {
            if (d.amplitudes[i] == cplx(0)) continue;
            for (Eigen::Index j = 0; j < d.amplitudes.size(); ++j) {
                if (d.amplitudes[j] == cplx(0)) continue;
                trips.emplace_back(i, j, d.amplitudes[i] * std::conj(d.amplitudes[j]));
            }
        }
        SparseCd term(dim, dim);
        term.setFromTriplets(trips.begin(), trips.end());
        p += term;
    }
    p.makeCompressed();
    return OperatorMatrix{std::move(p), true};
}

Eigen::MatrixXd collective_mode_transform(int mode_count) {
    if (mode_count < 1) throw std::domain_error("mode count must be >= 1");
    const int L = mode_count;
    Eigen::MatrixXd rows(L, L);
    rows.row(0).setConstant(1.0 / std::sqrt(double(L)));
    int filled = 1;
    for (int cand = 0; cand < L && filled < L; ++cand) {
        Eigen::VectorXd v = Eigen::VectorXd::Unit(L, cand);
        for (int r = 0; r < filled; ++r) v -= rows.row(r).dot(v) * rows.row(r).transpose();
        const double nrm = v.norm();
        if (nrm < 1e-12) continue; // candidate already spanned
        rows.row(filled++) = v.transpose() / nrm;
    }
    return rows;
}

} // namespace coopdyn
