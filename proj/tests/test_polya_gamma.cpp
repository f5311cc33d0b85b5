#include <doctest.h>

#include <cmath>

#include "pgmult/polya_gamma.hpp"
#include "support/oracles.hpp"

using namespace pgmult;

namespace {

std::vector<double> draw_many(double b, double c, int n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> xs(n);
  for (int i = 0; i < n; ++i) xs[i] = sample_pg({b, c}, rng);
  return xs;
}

// series mean/variance of PG(b, c), summed independently of pg_mean
void series_moments(double b, double c, double* mean, double* var) {
  detail::pg_tail_moments(b, c, 0, mean, var);
}

}  // namespace

TEST_CASE("pg_mean closed form and limits") {
  CHECK(pg_mean({1.0, 0.0}) == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(pg_mean({0.0, 2.0}) == 0.0);
  CHECK(pg_mean({2.0, 3.0}) == doctest::Approx(std::tanh(1.5) / 3.0).epsilon(1e-12));
  // continuity at c = 0
  for (double b : {1.0, 3.0, 17.5}) {
    CHECK(std::fabs(pg_mean({b, 1e-9}) - b / 4.0) < 1e-9);
    CHECK(pg_mean({b, 1e-5}) == doctest::Approx(pg_mean({b, 2e-4})).epsilon(1e-6));
  }
}

TEST_CASE("pg parameter domain") {
  Rng rng(3);
  CHECK_THROWS_AS((void)sample_pg({-1.0, 0.0}, rng), ParameterError);
  CHECK_THROWS_AS((void)sample_pg({1.5, 0.0}, rng), ParameterError);
  CHECK_THROWS_AS((void)sample_pg({1.0, std::nan("")}, rng), ParameterError);
  CHECK_THROWS_AS((void)pg_mean({-0.5, 0.0}), ParameterError);
  CHECK(sample_pg({0.0, 7.3}, rng) == 0.0);
}

TEST_CASE("sample_pg matches the closed-form mean") {
  const int n = 100000;
  // spec'd point checks
  auto xs = draw_many(1.0, 0.0, n, 101);
  CHECK(oracles::moments(xs).mean == doctest::Approx(0.25).epsilon(0.02));
  CHECK(std::fabs(oracles::moments(xs).mean - 0.25) < 0.005);
  xs = draw_many(3.0, 1.5, n, 102);
  CHECK(std::fabs(oracles::moments(xs).mean - std::tanh(0.75)) < 0.01);

  // small grid; the full acceptance grid runs in the acceptance suite
  const int ng = 20000;
  int combo = 0;
  for (double b : {1.0, 2.0, 5.0, 20.0}) {
    for (double c : {0.0, 0.5, 2.0, 8.0}) {
      auto g = draw_many(b, c, ng, 200 + combo++);
      oracles::Moments m = oracles::moments(g);
      CHECK(std::fabs(m.mean - pg_mean({b, c})) < 4.0 * m.se);
    }
  }
}

TEST_CASE("pg symmetry in c") {
  auto pos = draw_many(2.0, 1.3, 100000, 7);
  auto neg = draw_many(2.0, -1.3, 100000, 8);
  CHECK(oracles::ks_two_sample(pos, neg) < 0.01);
}

TEST_CASE("pg additivity over the shape") {
  const int n = 50000;
  Rng rng(21);
  std::vector<double> summed(n), direct(n);
  for (int i = 0; i < n; ++i) {
    summed[i] = sample_pg({2.0, 1.0}, rng) + sample_pg({3.0, 1.0}, rng);
    direct[i] = sample_pg({5.0, 1.0}, rng);
  }
  oracles::Moments ms = oracles::moments(summed);
  oracles::Moments md = oracles::moments(direct);
  CHECK(std::fabs(ms.mean - md.mean) < 3.0 * std::sqrt(ms.se * ms.se + md.se * md.se));
  double var_se = std::sqrt(2.0 / n) * std::max(ms.var, md.var);
  CHECK(std::fabs(ms.var - md.var) < 3.0 * std::sqrt(2.0) * var_se);
}

TEST_CASE("series representation agrees with the closed-form mean") {
  for (double b : {1.0, 4.0, 30.0}) {
    for (double c : {0.0, 0.7, 3.0, 9.0}) {
      double mean, var;
      series_moments(b, c, &mean, &var);
      CHECK(mean == doctest::Approx(pg_mean({b, c})).epsilon(1e-6));
      CHECK(var > 0.0);
    }
  }
}

TEST_CASE("large-shape tier is moment matched") {
  const int n = 40000;
  for (double c : {0.0, 2.0}) {
    auto xs = draw_many(25.0, c, n, 55 + static_cast<int>(c));
    oracles::Moments m = oracles::moments(xs);
    double smean, svar;
    series_moments(25.0, c, &smean, &svar);
    CHECK(std::fabs(m.mean - smean) < 4.0 * m.se);
    CHECK(m.var == doctest::Approx(svar).epsilon(0.1));
  }
}
