// hamiltonians.hpp — Builders for the three model Hamiltonians: N spins
// with a common field mode, two symmetrically coupled spin groups, and the
// full two-group model with intra-group couplings and bosonic baths.

#pragma once

#include "coopdyn/operators.hpp"
#include "coopdyn/system_spec.hpp"

namespace coopdyn {

// H = ω a†a − Σ_j (ω_j/2) σz_j + γ Σ_j σx_j (a + a†), with ω_j the site
// frequency plus disorder offset.  With spec.rwa the interaction becomes
// γ Σ_j (σ+_j a + σ-_j a†).  Requires one spin group and the field mode.
OperatorMatrix dicke_hamiltonian(const SystemSpec& spec);

// H = −Σ_j (ω_Aj/2) σz_j − Σ_k (ω_Bk/2) σz_k
//     + γ Σ_{j,k} (σ+_j σ-_k + σ-_j σ+_k).
// Requires both spin groups; conserves total excitation.
OperatorMatrix hopping_hamiltonian(const SystemSpec& spec);

// Full two-group model: free spins and bath modes, site-mode couplings,
// the inter-group hopping, and intra-group hoppings
// Σ_{j<j'} γ_{jj'} (σ+_j σ-_j' + σ-_j σ+_j') (each unordered pair once).
// Bath modes are represented in spec.bath_basis; in the collective basis
// the site-mode couplings and mode frequencies are rotated by the
// collective mode transform and each collective mode is truncated at the
// bath cutoff.
OperatorMatrix full_hamiltonian(const SystemSpec& spec);

// Copy of `spec` with per-site frequency offsets drawn uniformly from
// [−width, +width] using spec.rng_seed.  A fixed seed fixes the scaled
// offset pattern: offsets for width w are w/w' times those for width w'.
SystemSpec apply_site_disorder(const SystemSpec& spec, double width);

} // namespace coopdyn
