#include <cmath>
#include <span>

#include "doctest.h"
#include "shortfall/errors.hpp"
#include "shortfall/quadrature.hpp"
#include "shortfall/roots.hpp"

using namespace shortfall;

TEST_CASE("brent finds the fixed point of cos") {
  const auto f = [](double x) { return std::cos(x) - x; };
  const double root = brent_root(f, 0.0, 1.0, f(0.0), f(1.0), {});
  CHECK(root == doctest::Approx(0.7390851332151607).epsilon(1e-14));
}

TEST_CASE("brent rejects an interval without a sign change") {
  const auto f = [](double x) { return x * x + 1.0; };
  CHECK_THROWS_AS(brent_root(f, -1.0, 1.0, f(-1.0), f(1.0), {}), NumericError);
}

TEST_CASE("inversion expands its bracket from the center") {
  const auto g = [](double x) { return x - 1000.0; };
  const double x = invert_nondecreasing(g, 0.0, -INFINITY, INFINITY, {});
  CHECK(x == doctest::Approx(1000.0).epsilon(1e-12));
  // g >= 0 on the whole domain: the floor is the answer
  const auto h = [](double x) { return x + 1.0; };
  CHECK(invert_nondecreasing(h, 1.0, 0.0, INFINITY, {}) == 0.0);
}

TEST_CASE("polynomials integrate exactly") {
  const auto r = integrate([](double x) { return x * x; }, 0.0, 1.0, {});
  CHECK(r.value == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
  CHECK(r.error <= 1e-12);
}

TEST_CASE("an endpoint singularity is resolved by subdivision") {
  const auto r = integrate([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0, {});
  CHECK(r.value == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(r.intervals > 1);
}

TEST_CASE("breakpoints split the range") {
  const double pts[] = {-1.0, 0.0, 2.0};
  const auto r = integrate([](double x) { return std::fabs(x); }, std::span<const double>(pts), {});
  CHECK(r.value == doctest::Approx(2.5).epsilon(1e-13));
}

TEST_CASE("the subdivision limit is a numeric error") {
  QuadratureConfig cfg;
  cfg.max_subdivisions = 3;
  cfg.rel_tol = 1e-14;
  cfg.abs_tol = 1e-300;
  const auto f = [](double x) { return std::sin(1.0 / (x + 1e-3)); };
  CHECK_THROWS_AS(integrate(f, 0.0, 1.0, cfg), NumericError);
}

TEST_CASE("non-finite integrands are reported") {
  CHECK_THROWS_AS(integrate([](double) { return NAN; }, 0.0, 1.0, {}), NumericError);
}

TEST_CASE("config validation") {
  QuadratureConfig cfg;
  cfg.rel_tol = 0.0;
  CHECK_THROWS_AS(cfg.validate(), DomainError);
  cfg = {};
  cfg.tail_truncation_probability = 0.5;
  CHECK_THROWS_AS(cfg.validate(), DomainError);
}
