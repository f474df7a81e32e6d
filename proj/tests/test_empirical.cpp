#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "shortfall/empirical.hpp"
#include "shortfall/errors.hpp"

using namespace shortfall;
using doctest::Approx;

namespace {

std::vector<double> one_to(int n) {
  std::vector<double> v;
  for (int i = 1; i <= n; ++i) v.push_back(i);
  return v;
}

std::vector<double> draws(std::size_t n, unsigned seed) {
  std::mt19937_64 gen(seed);
  std::lognormal_distribution<double> dist(0.0, 0.8);
  std::vector<double> v(n);
  for (auto& x : v) x = dist(gen);
  return v;
}

}  // namespace

TEST_CASE("order statistics") {
  const EmpiricalSample s({3.0, -1.0, 2.0, 2.0});
  CHECK(s.order_statistic(1) == -1.0);
  CHECK(s.order_statistic(4) == 3.0);
  CHECK(s.mean() == Approx(1.5));
  CHECK(s.values()[0] == 3.0);  // input order preserved
  CHECK_THROWS_AS(s.order_statistic(0), DomainError);
  CHECK_THROWS_AS(s.order_statistic(5), DomainError);
}

TEST_CASE("rejects empty and non-finite samples") {
  CHECK_THROWS_AS(EmpiricalSample({}), DomainError);
  CHECK_THROWS_AS(EmpiricalSample({1.0, NAN}), DomainError);
  CHECK_THROWS_AS(EmpiricalSample({1.0, INFINITY}), DomainError);
}

TEST_CASE("counts snap products that are integers up to rounding") {
  CHECK(ceil_count(10, 0.8) == 8);
  CHECK(floor_count(10, 1.0 - 0.8) == 2);
  CHECK(ceil_count(10, 0.81) == 9);
  CHECK(floor_count(100, 1.0 - 0.96) == 4);
  CHECK(floor_count(5, 0.1) == 0);
}

TEST_CASE("top mean of 1..10 at alpha 0.8") {
  const EmpiricalSample s(one_to(10));
  const auto r = empirical_cvar(s, 0.8);
  CHECK(r.value == Approx(9.5));
  CHECK(r.method == "empirical_cvar");
  CHECK(*r.input("m") == 2.0);
  CHECK(r.warnings.empty());
}

TEST_CASE("literal mode sums from the m-th order statistic") {
  const EmpiricalSample s(one_to(10));
  const auto r = empirical_cvar(s, 0.8, EstimatorMode::kLiteral);
  CHECK(r.value == Approx(54.0 / 2.0));  // (2 + ... + 10) / 2
  CHECK(r.method == "empirical_cvar_literal");
}

TEST_CASE("a block of size zero is clamped with a warning") {
  const EmpiricalSample s({1.0, 5.0, 2.0, 4.0, 3.0});
  const auto r = empirical_cvar(s, 0.9);
  CHECK(r.value == 5.0);
  CHECK_FALSE(r.warnings.empty());
  CHECK_THROWS_AS(empirical_cvar(s, 1.0), DomainError);
}

TEST_CASE("quantile loss minimizer is the ceil(n alpha)-th order statistic") {
  const EmpiricalSample s(draws(257, 11));
  for (double alpha : {0.1, 0.5, 0.9, 0.96}) {
    const auto m = quantile_loss_minimizer(s, alpha, true);
    CHECK(m.verified_global);
    CHECK(m.index == ceil_count(257, alpha));
    CHECK(m.xi == s.order_statistic(m.index));
    double direct = 0.0;
    for (double x : s.values()) direct += rho_alpha(x - m.xi, alpha);
    CHECK(m.objective == Approx(direct).epsilon(1e-12));
  }
}

TEST_CASE("quantile loss representation matches the trimmed mean") {
  for (unsigned seed = 0; seed < 10; ++seed) {
    const EmpiricalSample s(draws(500, seed));
    const auto check = bassett_identity_check(s, 0.9);
    CHECK(check.residual <= 1e-10);
    CHECK(check.estimate == Approx(empirical_cvar(s, 0.9).value));
  }
}

TEST_CASE("empirical cvar is translation and scale equivariant (property)") {
  for (unsigned seed = 0; seed < 20; ++seed) {
    const auto base = draws(101 + 37 * seed, seed);
    const double shift = -3.0 + 0.5 * seed;
    const double scale = 0.25 + 0.3 * seed;
    std::vector<double> moved;
    for (double x : base) moved.push_back(scale * x + shift);
    for (double alpha : {0.5, 0.9, 0.96}) {
      const double a = empirical_cvar(EmpiricalSample(base), alpha).value;
      const double b = empirical_cvar(EmpiricalSample(moved), alpha).value;
      CHECK(b == Approx(scale * a + shift).epsilon(1e-12));
    }
  }
}

TEST_CASE("estimate dominates the sample mean and is at most the maximum") {
  for (unsigned seed = 0; seed < 10; ++seed) {
    const EmpiricalSample s(draws(300, seed));
    const double v = empirical_cvar(s, 0.7).value;
    CHECK(v >= s.mean());
    CHECK(v <= s.order_statistic(s.size()));
  }
}
