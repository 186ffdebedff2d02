#include "coopdyn/dynamics.hpp"

#include "coopdyn/errors.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <set>
#include <string>
#include <vector>

namespace coopdyn {

namespace {

constexpr cplx kImag{0.0, 1.0};

void check_time_grid(const std::vector<double>& times) {
    for (std::size_t k = 0; k < times.size(); ++k) {
        if (!std::isfinite(times[k]) || times[k] < 0.0)
            throw ConfigError("time grid must be finite and non-negative");
        if (k > 0 && times[k] <= times[k - 1])
            throw ConfigError("time grid must be strictly increasing");
    }
}

// Largest top-Fock-level population over all modes; the watchdog for
// cutoff truncation artifacts.
double top_fock_population(const SpaceLayout& layout, const Eigen::VectorXd& populations) {
    double worst = 0.0;
    for (int f = 0; f < layout.total_modes(); ++f) {
        const int top = layout.mode_cutoff(f) - 1;
        double p = 0.0;
        for (std::size_t i = 0; i < layout.total_dim(); ++i)
            if (layout.mode_occupation(i, f) == top) p += populations[static_cast<Eigen::Index>(i)];
        worst = std::max(worst, p);
    }
    return worst;
}

struct LanczosBasis {
    Eigen::MatrixXcd v;    // n × m orthonormal Krylov vectors
    Eigen::VectorXd alpha; // m diagonal entries
    Eigen::VectorXd beta;  // m−1 couplings
    double beta_end = 0.0; // residual norm after m vectors
    int m = 0;
    bool invariant = false; // Krylov space closed (lucky breakdown)
};

LanczosBasis build_lanczos(const SparseCd& h, const Eigen::VectorXcd& v0, int max_m) {
    const Eigen::Index n = v0.size();
    const int m_cap = static_cast<int>(std::min<Eigen::Index>(max_m, n));
    LanczosBasis b;
    b.v.resize(n, m_cap);
    b.alpha.resize(m_cap);
    b.beta.resize(std::max(m_cap - 1, 0));
    b.v.col(0) = v0;
    double scale = 1.0;
    for (int j = 0; j < m_cap; ++j) {
        Eigen::VectorXcd w = h * b.v.col(j);
        b.alpha[j] = w.dot(b.v.col(j)).real();
        w -= b.alpha[j] * b.v.col(j);
        if (j > 0) w -= b.beta[j - 1] * b.v.col(j - 1);
        // Full reorthogonalization; m ≤ 40 keeps this cheap and removes
        // the classic Lanczos loss-of-orthogonality drift.
        for (int k = 0; k <= j; ++k) w -= b.v.col(k).dot(w) * b.v.col(k);
        scale = std::max(scale, std::abs(b.alpha[j]));
        const double beta = w.norm();
        b.m = j + 1;
        if (beta <= 1e-14 * scale || j + 1 == m_cap) {
            b.beta_end = beta;
            b.invariant = beta <= 1e-14 * scale;
            break;
        }
        b.beta[j] = beta;
        scale = std::max(scale, beta);
        b.v.col(j + 1) = w / beta;
    }
    return b;
}

// exp(−i dt T) e₁ for the m×m symmetric tridiagonal T.
Eigen::VectorXcd exp_tridiag(const LanczosBasis& b, double dt) {
    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(b.m, b.m);
    for (int j = 0; j < b.m; ++j) {
        t(j, j) = b.alpha[j];
        if (j + 1 < b.m) {
            t(j, j + 1) = b.beta[j];
            t(j + 1, j) = b.beta[j];
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t);
    const Eigen::VectorXd u1 = es.eigenvectors().row(0);
    Eigen::VectorXcd coef(b.m);
    for (int k = 0; k < b.m; ++k)
        coef[k] = std::exp(-kImag * dt * es.eigenvalues()[k]) * u1[k];
    return es.eigenvectors() * coef;
}

// Least-squares exponent of log(measured) against log(n).  Left at zero
// when the samples span fewer than two distinct usable n.
void fit_exponent_vs_n(RateScalingReport& report) {
    std::vector<double> xs, ys;
    std::set<double> distinct;
    for (const ScalingSample& s : report.samples) {
        if (s.point.n < 1 || s.measured <= 0.0) continue;
        xs.push_back(std::log(double(s.point.n)));
        ys.push_back(std::log(s.measured));
        distinct.insert(xs.back());
    }
    if (distinct.size() < 2) return;
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= double(xs.size());
    my /= double(xs.size());
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
    report.fit_residual = std::sqrt(rss / double(xs.size()));
}

OperatorMatrix zero_hamiltonian(const SpaceLayout& layout) {
    SparseCd m(static_cast<Eigen::Index>(layout.total_dim()),
               static_cast<Eigen::Index>(layout.total_dim()));
    return make_operator(std::move(m), true);
}

} // namespace

KrylovPropagator::KrylovPropagator(const OperatorMatrix& h, StateVector psi0, double tol)
    : h_(&h.entries), psi_(std::move(psi0)), tol_(tol) {
    if (!h.hermitian) throw ConfigError("KrylovPropagator requires a Hermitian Hamiltonian");
    if (static_cast<Eigen::Index>(psi_.dim()) != h.dim())
        throw ConfigError("KrylovPropagator: state and Hamiltonian dimensions differ");
    if (psi_.norm() == 0.0) throw ConfigError("KrylovPropagator: zero initial state");
    if (!(tol > 0.0)) throw ConfigError("KrylovPropagator: tolerance must be positive");
}

void KrylovPropagator::advance(double dt) {
    if (dt == 0.0) return;
    const double total = std::abs(dt);
    const double norm0 = psi_.norm();
    double remaining = dt;
    int guard = 0;
    while (remaining != 0.0) {
        if (++guard > 100000)
            throw ConvergenceError("Krylov substepping failed to make progress", std::abs(remaining));
        const double nrm = psi_.norm();
        const LanczosBasis basis = build_lanczos(*h_, psi_.amplitudes / nrm, max_krylov_);
        double sub = remaining;
        Eigen::VectorXcd w;
        for (;;) {
            w = exp_tridiag(basis, sub);
            const double est = basis.invariant ? 0.0 : basis.beta_end * std::abs(w[basis.m - 1]);
            if (est <= tol_ * std::max(std::abs(sub) / total, 1e-3)) break;
            sub *= 0.5;
            if (std::abs(sub) < 1e-12 * total)
                throw ConvergenceError("Krylov step error did not converge", est);
        }
        psi_.amplitudes = nrm * (basis.v.leftCols(basis.m) * w);
        t_ += sub;
        remaining -= sub;
        norm_drift_ = std::max(norm_drift_, std::abs(psi_.norm() - norm0));
    }
}

PropagationResult evolve(const OperatorMatrix& h, const StateVector& psi0,
                         const std::vector<double>& times, double tol, const Tracking& tracking,
                         double leak_tol) {
    check_time_grid(times);
    PropagationResult out;
    out.times = times;
    for (const auto& [name, st] : tracking.overlaps) {
        if (!(st.layout == psi0.layout)) throw ConfigError("evolve: tracked state layout mismatch");
        out.columns.push_back(name);
    }
    for (const auto& [name, op] : tracking.expectations) {
        if (op.dim() != static_cast<Eigen::Index>(psi0.dim()))
            throw ConfigError("evolve: tracked operator dimension mismatch");
        out.columns.push_back(name);
    }
    out.values.resize(static_cast<Eigen::Index>(times.size()),
                      static_cast<Eigen::Index>(out.columns.size()));

    KrylovPropagator prop(h, psi0, tol);
    double prev = 0.0;
    for (std::size_t k = 0; k < times.size(); ++k) {
        prop.advance(times[k] - prev);
        prev = times[k];
        const StateVector& psi = prop.state();
        Eigen::Index col = 0;
        for (const auto& [name, st] : tracking.overlaps)
            out.values(static_cast<Eigen::Index>(k), col++) = std::norm(overlap(st, psi));
        for (const auto& [name, op] : tracking.expectations)
            out.values(static_cast<Eigen::Index>(k), col++) =
                psi.amplitudes.dot(op.entries * psi.amplitudes).real();
        out.truncation_leak = std::max(
            out.truncation_leak,
            top_fock_population(psi.layout, psi.amplitudes.cwiseAbs2()));
    }
    out.norm_drift = prop.norm_drift();
    if (out.truncation_leak > leak_tol) {
        out.valid = false;
        out.flag_reason = "top Fock level population " + std::to_string(out.truncation_leak) +
                          " exceeds leak tolerance";
    }
    return out;
}

ShortTimeRate short_time_rate(const OperatorMatrix& h, const StateVector& psi0,
                              const StateVector& target, double t_max, int samples) {
    if (!(t_max > 0.0)) throw ConfigError("short_time_rate: t_max must be positive");
    if (samples < 6) throw ConfigError("short_time_rate: need at least 6 samples");
    if (!(psi0.layout == target.layout))
        throw ConfigError("short_time_rate: state layouts differ");
    if (std::abs(overlap(target, psi0)) > 1e-12 * psi0.norm() * target.norm())
        throw RegimeError("short_time_rate: target must be orthogonal to the initial state");

    KrylovPropagator prop(h, psi0, 1e-12);
    std::vector<double> ts(static_cast<std::size_t>(samples)), ps(static_cast<std::size_t>(samples));
    double prev = 0.0, max_p = 0.0;
    for (int i = 0; i < samples; ++i) {
        const double t = t_max * double(i + 1) / double(samples);
        prop.advance(t - prev);
        prev = t;
        ts[static_cast<std::size_t>(i)] = t;
        ps[static_cast<std::size_t>(i)] = std::norm(overlap(target, prop.state()));
        max_p = std::max(max_p, ps[static_cast<std::size_t>(i)]);
        if (ps[static_cast<std::size_t>(i)] >= 0.05)
            throw RegimeError("short_time_rate: population left the perturbative window");
    }
    if (max_p < 1e-20) return {0.0, 0.0, max_p};

    // Least squares for p = R t² + C t⁴.
    double s22 = 0, s24 = 0, s44 = 0, b2 = 0, b4 = 0;
    for (int i = 0; i < samples; ++i) {
        const double t2 = ts[static_cast<std::size_t>(i)] * ts[static_cast<std::size_t>(i)];
        const double t4 = t2 * t2;
        const double p = ps[static_cast<std::size_t>(i)];
        s22 += t2 * t2;
        s24 += t2 * t4;
        s44 += t4 * t4;
        b2 += t2 * p;
        b4 += t4 * p;
    }
    const double det = s22 * s44 - s24 * s24;
    const double rate = (b2 * s44 - b4 * s24) / det;
    const double curv = (s22 * b4 - s24 * b2) / det;
    double rss = 0;
    for (int i = 0; i < samples; ++i) {
        const double t2 = ts[static_cast<std::size_t>(i)] * ts[static_cast<std::size_t>(i)];
        const double r = ps[static_cast<std::size_t>(i)] - rate * t2 - curv * t2 * t2;
        rss += r * r;
    }
    return {rate, std::sqrt(rss / double(samples)) / max_p, max_p};
}

double rabi_frequency(const OperatorMatrix& h, const StateVector& a, const StateVector& b) {
    if (!(a.layout == b.layout)) throw ConfigError("rabi_frequency: state layouts differ");
    if (static_cast<Eigen::Index>(a.dim()) != h.dim())
        throw ConfigError("rabi_frequency: dimension mismatch");
    const double na = a.norm(), nb = b.norm();
    if (na == 0.0 || nb == 0.0) throw ConfigError("rabi_frequency: zero state");
    StateVector an{a.amplitudes / na, a.layout};
    StateVector bn{b.amplitudes / nb, b.layout};
    if (std::abs(overlap(an, bn)) > 1e-10)
        throw ConfigError("rabi_frequency: states must be orthogonal");

    const double haa = an.amplitudes.dot(h.entries * an.amplitudes).real();
    const double hbb = bn.amplitudes.dot(h.entries * bn.amplitudes).real();
    const double g = std::abs(an.amplitudes.dot(h.entries * bn.amplitudes));
    if (g == 0.0) throw RegimeError("rabi_frequency: the states are not coupled");
    const double omega_est = std::sqrt(4.0 * g * g + (haa - hbb) * (haa - hbb));
    const double t_est = std::numbers::pi / omega_est;

    KrylovPropagator prop(h, an, 1e-13);
    auto leak_guarded_deriv = [&](double t) {
        prop.advance(t - prop.time());
        const StateVector& psi = prop.state();
        const cplx oa = overlap(an, psi);
        const cplx ob = overlap(bn, psi);
        const double leak = 1.0 - std::norm(oa) - std::norm(ob);
        if (leak > 0.01)
            throw RegimeError("rabi_frequency: dynamics leak out of the two-state span");
        const Eigen::VectorXcd hpsi = h.entries * psi.amplitudes;
        const cplx dob = -kImag * bn.amplitudes.dot(hpsi);
        return 2.0 * (std::conj(ob) * dob).real();
    };

    // March to bracket the first maximum of |⟨b|ψ⟩|², then bisect on the
    // exact derivative.
    const double dt = t_est / 16.0;
    double lo = 0.0, hi = 0.0;
    double prev_d = 0.0;
    bool bracketed = false;
    for (int k = 1; k <= 1024; ++k) {
        const double t = dt * double(k);
        const double d = leak_guarded_deriv(t);
        if (k > 1 && prev_d > 0.0 && d <= 0.0) {
            lo = t - dt;
            hi = t;
            bracketed = true;
            break;
        }
        prev_d = d;
    }
    if (!bracketed)
        throw ConvergenceError("rabi_frequency: no population maximum found", 0.0);

    for (int iter = 0; iter < 200 && (hi - lo) > 1e-10 * t_est; ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (leak_guarded_deriv(mid) > 0.0)
            lo = mid;
        else
            hi = mid;
    }
    return std::numbers::pi / (0.5 * (lo + hi));
}

PropagationResult dephasing_evolve(const OperatorMatrix& h, const SpaceLayout& layout,
                                   const DephasingModel& model, const Eigen::MatrixXcd& rho0,
                                   const std::vector<double>& times,
                                   const DensityTracking& tracking, std::size_t dim_budget) {
    const Eigen::Index n = h.dim();
    if (layout.total_dim() != static_cast<std::size_t>(n))
        throw ConfigError("dephasing_evolve: layout does not match the Hamiltonian");
    if (static_cast<std::size_t>(n) > dim_budget)
        throw CapacityError("dephasing_evolve: density dimension exceeds the budget");
    if (rho0.rows() != n || rho0.cols() != n)
        throw ConfigError("dephasing_evolve: rho0 dimension mismatch");
    if (model.rate < 0.0) throw ConfigError("dephasing_evolve: negative dephasing rate");
    check_time_grid(times);
    {
        const double scale = std::max(1.0, rho0.cwiseAbs().maxCoeff());
        if ((rho0 - rho0.adjoint()).cwiseAbs().maxCoeff() > 1e-10 * scale)
            throw ConfigError("dephasing_evolve: rho0 is not Hermitian");
        if (std::abs(rho0.trace().real() - 1.0) > 1e-8 || std::abs(rho0.trace().imag()) > 1e-10)
            throw ConfigError("dephasing_evolve: rho0 trace is not 1");
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho0, Eigen::EigenvaluesOnly);
        if (es.eigenvalues().minCoeff() < -1e-8)
            throw ConfigError("dephasing_evolve: rho0 is not positive semidefinite");
    }

    // σz jump operators are diagonal, so the dissipator is an elementwise
    // mask: independent sites give −2γφ·(Hamming distance), the collective
    // operator −2γφ·(excitation-count difference)².
    const int spins = layout.total_spins();
    const std::size_t spin_mask = (std::size_t(1) << spins) - 1;
    Eigen::MatrixXcd mask(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) {
            const std::size_t pi = static_cast<std::size_t>(i) & spin_mask;
            const std::size_t pj = static_cast<std::size_t>(j) & spin_mask;
            double m;
            if (model.kind == DephasingKind::Independent) {
                m = -2.0 * model.rate * double(std::popcount(pi ^ pj));
            } else {
                const double dn = double(std::popcount(pi)) - double(std::popcount(pj));
                m = -2.0 * model.rate * dn * dn;
            }
            mask(i, j) = cplx(m, 0.0);
        }

    const bool has_h = h.entries.nonZeros() > 0;
    auto rhs = [&](const Eigen::MatrixXcd& r) {
        Eigen::MatrixXcd d = mask.cwiseProduct(r);
        if (has_h) d -= kImag * (h.entries * r - r * h.entries);
        return d;
    };

    PropagationResult out;
    out.times = times;
    for (const auto& c : tracking.coherences) out.columns.push_back(c.name);
    for (const auto& [name, st] : tracking.populations) out.columns.push_back(name);
    out.values.resize(static_cast<Eigen::Index>(times.size()),
                      static_cast<Eigen::Index>(out.columns.size()));
    out.min_eigenvalue = std::numeric_limits<double>::infinity();

    const double scale = h.entries.norm() + mask.cwiseAbs().maxCoeff();
    Eigen::MatrixXcd rho = rho0;
    double prev = 0.0;
    for (std::size_t k = 0; k < times.size(); ++k) {
        const double span = times[k] - prev;
        if (span > 0.0) {
            const int steps =
                scale > 0.0 ? std::max(1, int(std::ceil(span * scale / 0.01))) : 1;
            const double dt = span / double(steps);
            for (int s = 0; s < steps; ++s) {
                const Eigen::MatrixXcd k1 = rhs(rho);
                const Eigen::MatrixXcd k2 = rhs(rho + (0.5 * dt) * k1);
                const Eigen::MatrixXcd k3 = rhs(rho + (0.5 * dt) * k2);
                const Eigen::MatrixXcd k4 = rhs(rho + dt * k3);
                rho += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            }
        }
        prev = times[k];

        Eigen::Index col = 0;
        for (const auto& c : tracking.coherences)
            out.values(static_cast<Eigen::Index>(k), col++) =
                std::abs(c.a.amplitudes.dot(rho * c.b.amplitudes));
        for (const auto& [name, st] : tracking.populations)
            out.values(static_cast<Eigen::Index>(k), col++) =
                st.amplitudes.dot(rho * st.amplitudes).real();

        out.trace_drift = std::max(out.trace_drift, std::abs(rho.trace().real() - 1.0));
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho, Eigen::EigenvaluesOnly);
        out.min_eigenvalue = std::min(out.min_eigenvalue, es.eigenvalues().minCoeff());
        out.truncation_leak = std::max(
            out.truncation_leak, top_fock_population(layout, rho.diagonal().real()));
    }
    if (times.empty()) out.min_eigenvalue = 0.0;
    if (out.trace_drift > 1e-7) {
        out.valid = false;
        out.flag_reason = "trace drift " + std::to_string(out.trace_drift);
    } else if (out.min_eigenvalue < -1e-9) {
        out.valid = false;
        out.flag_reason = "negative density eigenvalue " + std::to_string(out.min_eigenvalue);
    }
    return out;
}

namespace {

// Coherence decay rate of ⟨0…0|ρ|D_n⟩ on `sites` spins with no Hamiltonian;
// exact exponential, measured by a log-linear fit.
double coherence_decay_rate(DephasingKind kind, int sites, int n, double gamma_phi) {
    const SpaceLayout layout({sites}, {});
    const OperatorMatrix h = zero_hamiltonian(layout);
    const StateVector ground = basis_state(layout, 0);
    const StateVector dicke = dicke_state(layout, 0, n);
    Eigen::VectorXcd chi =
        (ground.amplitudes + dicke.amplitudes) / std::numbers::sqrt2;
    const Eigen::MatrixXcd rho0 = chi * chi.adjoint();

    const double guess = kind == DephasingKind::Collective ? double(n) * double(n) : double(n);
    const double t_end = 1.0 / (2.0 * gamma_phi * guess);
    std::vector<double> times;
    for (int k = 1; k <= 5; ++k) times.push_back(t_end * double(k) / 5.0);

    DensityTracking tracking;
    tracking.coherences.push_back({"c", ground, dicke});
    const PropagationResult res =
        dephasing_evolve(h, layout, {kind, gamma_phi}, rho0, times, tracking);
    if (!res.valid)
        throw ConvergenceError("coherence decay integration flagged: " + res.flag_reason,
                               res.trace_drift);

    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double m = double(times.size());
    for (std::size_t k = 0; k < times.size(); ++k) {
        const double y = std::log(res.values(static_cast<Eigen::Index>(k), 0));
        sx += times[k];
        sy += y;
        sxx += times[k] * times[k];
        sxy += times[k] * y;
    }
    return -(m * sxy - sx * sy) / (m * sxx - sx * sx);
}

} // namespace

RateScalingReport measure_decoherence_scaling(const DephasingModel& model, int N,
                                              const std::vector<int>& n_range) {
    if (N < 1) throw ConfigError("measure_decoherence_scaling: N must be >= 1");
    if (!(model.rate > 0.0))
        throw ConfigError("measure_decoherence_scaling: dephasing rate must be positive");
    const double base = coherence_decay_rate(model.kind, 1, 1, model.rate);
    RateScalingReport report;
    for (int n : n_range) {
        if (n < 1 || n > N)
            throw ConfigError("measure_decoherence_scaling: n out of range");
        const double rate = coherence_decay_rate(model.kind, N, n, model.rate);
        ScalingSample s;
        s.point = {N, n, 0, 0};
        s.predicted = model.kind == DephasingKind::Collective ? double(n) * double(n) : double(n);
        s.measured = rate / base;
        s.abs_error = std::abs(s.measured - s.predicted);
        report.samples.push_back(s);
        report.max_abs_error = std::max(report.max_abs_error, s.abs_error);
    }
    fit_exponent_vs_n(report);
    return report;
}

RateScalingReport measure_product_fidelity_scaling(int N, const std::vector<int>& n_range,
                                                   double gamma_phi) {
    if (N < 1) throw ConfigError("measure_product_fidelity_scaling: N must be >= 1");
    if (!(gamma_phi > 0.0))
        throw ConfigError("measure_product_fidelity_scaling: gamma_phi must be positive");

    // Inverse 1/e time of G(t) = (F−F∞)/(1−F∞) for n sites in |+⟩; sites
    // left in |0⟩ are inert and need not be represented.
    auto fidelity_rate = [&](int n) {
        const SpaceLayout layout({n}, {});
        const OperatorMatrix h = zero_hamiltonian(layout);
        const Eigen::Index dim = static_cast<Eigen::Index>(layout.total_dim());
        StateVector plus{Eigen::VectorXcd::Constant(dim, cplx(std::pow(2.0, -0.5 * n), 0.0)),
                         layout};
        const Eigen::MatrixXcd rho0 = plus.amplitudes * plus.amplitudes.adjoint();
        const double f_inf = std::pow(2.0, -double(n));
        DensityTracking tracking;
        tracking.populations.emplace_back("F", plus);

        auto g_of = [&](const std::vector<double>& ts) {
            const PropagationResult res = dephasing_evolve(
                h, layout, {DephasingKind::Independent, gamma_phi}, rho0, ts, tracking);
            if (!res.valid)
                throw ConvergenceError("fidelity integration flagged: " + res.flag_reason,
                                       res.trace_drift);
            std::vector<double> g(ts.size());
            for (std::size_t k = 0; k < ts.size(); ++k)
                g[k] = (res.values(static_cast<Eigen::Index>(k), 0) - f_inf) / (1.0 - f_inf);
            return g;
        };
        auto crossing = [&](const std::vector<double>& ts, const std::vector<double>& g,
                            double& lo, double& hi) {
            for (std::size_t k = 1; k < ts.size(); ++k)
                if (g[k] < 1.0 / std::numbers::e) {
                    lo = ts[k - 1];
                    hi = ts[k];
                    return true;
                }
            return false;
        };

        double t_hi = 1.2 / (2.0 * gamma_phi);
        double lo = 0.0, hi = 0.0;
        for (int attempt = 0; attempt < 8; ++attempt) {
            std::vector<double> ts;
            for (int k = 1; k <= 48; ++k) ts.push_back(t_hi * double(k) / 48.0);
            if (crossing(ts, g_of(ts), lo, hi)) break;
            t_hi *= 2.0;
            if (attempt == 7)
                throw ConvergenceError("fidelity did not cross 1/e", 0.0);
        }
        std::vector<double> fine;
        for (int k = 0; k <= 32; ++k) fine.push_back(lo + (hi - lo) * double(k) / 32.0);
        if (fine.front() == 0.0) fine.erase(fine.begin());
        const std::vector<double> g = g_of(fine);
        for (std::size_t k = 1; k < fine.size(); ++k)
            if (g[k] < 1.0 / std::numbers::e) {
                const double la = std::log(g[k - 1]), lb = std::log(g[k]);
                const double t = fine[k - 1] + (la + 1.0) / (la - lb) * (fine[k] - fine[k - 1]);
                return 1.0 / t;
            }
        throw ConvergenceError("fidelity crossing refinement failed", 0.0);
    };

    const double base = fidelity_rate(1);
    RateScalingReport report;
    for (int n : n_range) {
        if (n < 1 || n > N)
            throw ConfigError("measure_product_fidelity_scaling: n out of range");
        ScalingSample s;
        s.point = {N, n, 0, 0};
        s.predicted = std::sqrt(double(n));
        s.measured = fidelity_rate(n) / base;
        s.abs_error = std::abs(s.measured - s.predicted);
        report.samples.push_back(s);
        report.max_abs_error = std::max(report.max_abs_error, s.abs_error);
    }
    fit_exponent_vs_n(report);
    return report;
}

} // namespace coopdyn
