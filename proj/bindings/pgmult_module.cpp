// Python bindings for the main operations: the PG kernel, the stick-breaking
// transform family, the augmentation, the Gaussian backends, and the config
// runner. Matrices cross the boundary as numpy arrays via pybind11/eigen.

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "pgmult/augmentation.hpp"
#include "pgmult/ctm.hpp"
#include "pgmult/gp.hpp"
#include "pgmult/lds.hpp"
#include "pgmult/polya_gamma.hpp"
#include "pgmult/runner.hpp"
#include "pgmult/stick_breaking.hpp"

namespace py = pybind11;
using namespace pgmult;

PYBIND11_MODULE(_core, m) {
  m.doc() = "Stick-breaking multinomial models with Polya-gamma augmentation";

  py::register_exception<ParameterError>(m, "ParameterError", PyExc_ValueError);
  py::register_exception<BoundaryError>(m, "BoundaryError", PyExc_ValueError);
  py::register_exception<LinAlgError>(m, "LinAlgError", PyExc_ArithmeticError);

  m.def(
      "sample_pg",
      [](double b, double c, std::uint64_t seed, int n) {
        Rng rng(seed);
        Vec out(n);
        for (int i = 0; i < n; ++i) out[i] = sample_pg({b, c}, rng);
        return out;
      },
      py::arg("b"), py::arg("c"), py::arg("seed"), py::arg("n") = 1,
      "Draws from PG(b, c) as a numpy array");
  m.def(
      "pg_mean", [](double b, double c) { return pg_mean({b, c}); },
      py::arg("b"), py::arg("c"));

  m.def("pi_sb", [](const Vec& psi) { return pi_sb(psi); }, py::arg("psi"));
  m.def("pi_sb_inv", [](const Vec& pi) { return pi_sb_inv(pi); }, py::arg("pi"));
  m.def(
      "residual_counts",
      [](const IVec& x) { return residual_counts(CountVector(x)); }, py::arg("x"));
  m.def("kappa", [](const IVec& x) { return kappa(CountVector(x)); }, py::arg("x"));
  m.def(
      "log_multinomial_sb",
      [](const IVec& x, const Vec& psi) {
        return log_multinomial_sb(CountVector(x), psi);
      },
      py::arg("x"), py::arg("psi"));
  m.def(
      "log_density_pi_given_gaussian",
      [](const Vec& pi, const Vec& mu, const Mat& Sigma) {
        return log_density_pi_given_gaussian(pi, mu, Sigma);
      },
      py::arg("pi"), py::arg("mu"), py::arg("Sigma"));
  m.def(
      "log_density_psi_given_dirichlet",
      [](const Vec& psi, const Vec& alpha) {
        return log_density_psi_given_dirichlet(psi, alpha);
      },
      py::arg("psi"), py::arg("alpha"));
  m.def(
      "moment_match_dirichlet",
      [](const Vec& alpha, int n_mc, std::uint64_t seed) {
        Rng rng(seed);
        return moment_match_dirichlet(alpha, n_mc, rng);
      },
      py::arg("alpha"), py::arg("n_mc"), py::arg("seed"));

  m.def(
      "sample_aux",
      [](const IVec& x, const Vec& psi, std::uint64_t seed) {
        Rng rng(seed);
        return sample_aux(CountVector(x), psi, rng).omega;
      },
      py::arg("x"), py::arg("psi"), py::arg("seed"));
  m.def(
      "evidence",
      [](const IVec& x, const Vec& omega) {
        GaussianPotential pot = evidence(CountVector(x), {omega});
        return py::make_tuple(pot.precision_diag, pot.linear);
      },
      py::arg("x"), py::arg("omega"),
      "Returns (precision_diag, linear) of the augmented Gaussian evidence");

  m.def(
      "gp_conditional",
      [](const Mat& gram, const Vec& mean, const Vec& prec, const Vec& lin) {
        MVNParams p = gp_conditional(gram, mean, {prec, lin});
        return py::make_tuple(p.mean, p.cov);
      },
      py::arg("gram"), py::arg("mean"), py::arg("precision_diag"),
      py::arg("linear"));
  m.def(
      "lds_ffbs",
      [](const Mat& A, const Mat& B, const Mat& C, const Vec& mu0,
         const Mat& Sigma0, const Mat& prec, const Mat& lin, std::uint64_t seed) {
        LDSParams params{A, B, C, mu0, Sigma0};
        std::vector<GaussianPotential> pots(prec.rows());
        for (int t = 0; t < prec.rows(); ++t)
          pots[t] = {prec.row(t).transpose(), lin.row(t).transpose()};
        Rng rng(seed);
        return lds_ffbs(params, pots, rng);
      },
      py::arg("A"), py::arg("B"), py::arg("C"), py::arg("mu0"), py::arg("Sigma0"),
      py::arg("precision_diag"), py::arg("linear"), py::arg("seed"),
      "Joint posterior draw of the state sequence; potentials are T x (K-1)");

  m.def(
      "ctm_generate",
      [](int T, int V, int D, int doc_len, const Vec& mu, const Mat& Sigma,
         double alpha_beta, std::uint64_t seed) {
        Rng rng(seed);
        auto [corpus, truth] = ctm_generate(T, V, D, doc_len, mu, Sigma,
                                            alpha_beta, rng);
        return py::make_tuple(corpus.docs, truth.topics, truth.psi);
      },
      py::arg("topics"), py::arg("vocab"), py::arg("docs"), py::arg("doc_len"),
      py::arg("mu"), py::arg("Sigma"), py::arg("alpha_beta"), py::arg("seed"));

  m.def(
      "run_config",
      [](const std::string& path) {
        std::ostringstream log;
        try {
          run_config_file(path, log);
        } catch (const ConfigError&) {
          return 1;
        } catch (const DataError&) {
          return 2;
        } catch (const Error&) {
          return 3;
        }
        return 0;
      },
      py::arg("path"), "Execute a run config; returns the CLI exit code");
  m.def(
      "gen_config",
      [](const std::string& path) {
        std::ostringstream log;
        try {
          gen_config_file(path, log);
        } catch (const ConfigError&) {
          return 1;
        } catch (const DataError&) {
          return 2;
        } catch (const Error&) {
          return 3;
        }
        return 0;
      },
      py::arg("path"));
  m.def("selfcheck", []() {
    std::ostringstream log;
    return selfcheck(log);
  });

  m.attr("__version__") = kVersion;
}
