// sectors.hpp — Cooperative/normal sector decomposition and the closed-form
// collective rate laws (emission amplitude, net two-group transfer rate).

#pragma once

#include "coopdyn/hamiltonians.hpp"

#include <string>
#include <vector>

namespace coopdyn {

struct SectorDecomposition {
    OperatorMatrix p_cooperative; // P
    OperatorMatrix h_c;           // P H P
    OperatorMatrix h_n;           // (1−P) H (1−P)
    OperatorMatrix h_cn;          // P H (1−P) + (1−P) H P
    double leakage_frobenius = 0.0;
    double leakage_spectral = 0.0;
};

// Projector onto (symmetric spin subspace of A) ⊗ (symmetric spin subspace
// of B) ⊗ (bath states with every non-symmetric collective mode in vacuum).
// Rank (N+1)(M+1)·Π d.  A field mode, having no non-symmetric partners,
// is unrestricted.
OperatorMatrix cooperative_projector(const SpaceLayout& layout, const SystemSpec& spec);

// Splits H into P H P + Q H Q + (P H Q + Q H P) and reports the leakage
// norms of the cross term (Frobenius exactly; spectral by power iteration
// to 1e-8).
SectorDecomposition decompose(const OperatorMatrix& h, const OperatorMatrix& p_cooperative);

// √(n(N−n+1)) √(m_from+1) γ — the collective decay amplitude of the
// n-excitation symmetric state into a mode holding m_from quanta.
double emission_amplitude(int N, int n, double gamma, int m_from = 0);

// Net A→B transfer rate from occupations (n of N, m of M):
// γ² [ n(N−n+1)(m+1)(M−m) − (n+1)(N−n) m(M−m+1) ].  Negative values mean
// net B→A flow.
double supertransfer_rate(int n, int N, int m, int M, double gamma);

// The two one-way terms (forward A→B, backward B→A) separately.
struct TransferTerms {
    double forward = 0.0;
    double backward = 0.0;
};
TransferTerms supertransfer_terms(int n, int N, int m, int M, double gamma);

// Exact ⟨bra|H|ket⟩.
cplx matrix_element(const StateVector& bra, const OperatorMatrix& h, const StateVector& ket);

enum class ScalingFormula {
    EmissionAmplitude,    // collective emission amplitude vs (N, n, m)
    HoppingElement, // single-excitation two-group hopping amplitude vs (N, M)
    NetTransferRate,         // net transfer rate vs (n, N, m, M)
};

// One grid point; fields not used by a formula stay zero.
struct ScalingPoint {
    int N = 1;
    int n = 0;
    int M = 0;
    int m = 0;
};

struct ScalingSample {
    ScalingPoint point;
    double predicted = 0.0;
    double measured = 0.0;
    double abs_error = 0.0;
};

struct RateScalingReport {
    std::vector<ScalingSample> samples;
    double fitted_exponent = 0.0; // log-log slope of measured vs predicted
    double fit_residual = 0.0;    // RMS residual of that fit
    double max_abs_error = 0.0;
};

// Evaluates exact matrix elements over the grid and fits the log-log slope
// of |measured| against the closed form (slope 1 when the formula holds).
// Requires at least 4 samples with distinct nonzero predictions; throws
// ConfigError on a degenerate grid.  Grid points evaluate independently.
RateScalingReport verify_scaling(ScalingFormula formula,
                                 const std::vector<ScalingPoint>& grid,
                                 double gamma);

} // namespace coopdyn
