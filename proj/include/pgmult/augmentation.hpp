#pragma once

#include "pgmult/augmentation_types.hpp"
#include "pgmult/rng.hpp"
#include "pgmult/stick_breaking.hpp"

namespace pgmult {

// omega_k ~ PG(N_k(x), psi_k) independently per coordinate; omega_k = 0
// where N_k = 0.
PGAuxiliaries sample_aux(const CountVector& x, const Eigen::Ref<const Vec>& psi,
                         Rng& rng);

// Diagonal Gaussian evidence N(psi | Omega^-1 kappa(x), Omega^-1) in
// information form: precision diag(omega), linear term kappa(x).
GaussianPotential evidence(const CountVector& x, const PGAuxiliaries& aux);

}  // namespace pgmult
