#pragma once

#include "pgmult/types.hpp"

namespace pgmult {

// One augmented observation's Polya-gamma auxiliaries, length K-1.
// omega_k is exactly zero when the residual count N_k is zero.
struct PGAuxiliaries {
  Vec omega;
};

// Diagonal-precision Gaussian evidence in information form: precision
// diag(precision_diag) and linear term `linear`. A zero precision entry means
// "no evidence" for that coordinate; the pseudo-observation
// Omega^{-1} kappa(x) is never materialized.
struct GaussianPotential {
  Vec precision_diag;
  Vec linear;
};

}  // namespace pgmult
