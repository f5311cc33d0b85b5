#include "pgmult/augmentation.hpp"

#include "pgmult/polya_gamma.hpp"

namespace pgmult {

PGAuxiliaries sample_aux(const CountVector& x, const Eigen::Ref<const Vec>& psi,
                         Rng& rng) {
  const int K = static_cast<int>(x.x.size());
  if (psi.size() != K - 1)
    throw ParameterError("sample_aux: psi must have length K-1");
  IVec n = residual_counts(x);
  Vec omega(n.size());
  for (int k = 0; k < n.size(); ++k)
    omega[k] = n[k] > 0 ? sample_pg({static_cast<double>(n[k]), psi[k]}, rng) : 0.0;
  return {omega};
}

GaussianPotential evidence(const CountVector& x, const PGAuxiliaries& aux) {
  Vec kap = kappa(x);
  if (aux.omega.size() != kap.size())
    throw ParameterError("evidence: omega/kappa length mismatch");
  return {aux.omega, kap};
}

}  // namespace pgmult
