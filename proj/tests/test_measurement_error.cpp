#include <cmath>
#include <memory>
#include <vector>

#include "doctest.h"
#include "oracle.hpp"
#include "shortfall/errors.hpp"
#include "shortfall/measurement_error.hpp"

using namespace shortfall;
using doctest::Approx;

namespace {

DistributionPtr standard_normal() { return std::make_shared<NormalLaw>(0.0, 1.0); }

// Expansion written out for the standard normal base with Hermite polynomials.
double hand_cdf(double z, double delta, double kappa) {
  const double phi = normal_pdf(z);
  return normal_cdf(z) - 0.5 * delta * z * phi -
         kappa * delta * delta / 24.0 * (z * z * z - 3.0 * z) * phi;
}

double hand_pdf(double z, double delta, double kappa) {
  const double phi = normal_pdf(z);
  const double z2 = z * z;
  return phi + 0.5 * delta * (z2 - 1.0) * phi +
         kappa * delta * delta / 24.0 * (z2 * z2 - 6.0 * z2 + 3.0) * phi;
}

}  // namespace

TEST_CASE("expansion matches the written-out normal formulas") {
  const ExpansionFamily family(standard_normal(), 0.3, 2.0);
  for (double z : {-3.0, -1.2, 0.0, 0.7, 2.5}) {
    for (FamilyMember m : {FamilyMember{0.0, 1.0}, FamilyMember{0.1, 1.1},
                           FamilyMember{0.3, 2.0}}) {
      CHECK(expansion_cdf(family, m, z) ==
            Approx(hand_cdf(z, m.delta, m.kappa)).epsilon(1e-14));
      CHECK(expansion_sf(family, m, z) ==
            Approx(1.0 - hand_cdf(z, m.delta, m.kappa)).epsilon(1e-13));
      CHECK(expansion_pdf(family, m, z) ==
            Approx(hand_pdf(z, m.delta, m.kappa)).epsilon(1e-14));
    }
  }
}

TEST_CASE("members outside the box are rejected") {
  const ExpansionFamily family(standard_normal(), 0.2, 1.2);
  CHECK_THROWS_AS(family.require_member({0.3, 1.0}), DomainError);
  CHECK_THROWS_AS(family.require_member({0.1, 0.9}), DomainError);
  CHECK(family.corners().size() == 4);
  CHECK_THROWS_AS(ExpansionFamily(std::make_shared<UniformLaw>(), 0.1, 1.0),
                  DomainError);
  CHECK_THROWS_AS(ExpansionFamily(standard_normal(), -0.1, 1.0), DomainError);
  CHECK_THROWS_AS(ExpansionFamily(standard_normal(), 0.1, 0.5), DomainError);
}

TEST_CASE("the delta = 0 member is the base law") {
  const ExpansionFamily family(standard_normal(), 0.2, 1.2);
  const auto r = member_cvar(family, {0.0, 1.0}, 0.96);
  CHECK(r.value == Approx(oracle::kNormalCvar96).epsilon(1e-9));
}

TEST_CASE("the worked box is a family of valid laws") {
  const ExpansionFamily family(standard_normal(), 0.2, 1.2);
  const auto report = validity_check(family);
  CHECK(report.valid);
  CHECK(report.violations.empty());
}

TEST_CASE("a large error scale breaks positivity") {
  const ExpansionFamily family(standard_normal(), 10.0, 1.0);
  const auto report = validity_check(family);
  CHECK_FALSE(report.valid);
  REQUIRE_FALSE(report.violations.empty());
  bool negative_density = false;
  for (const auto& v : report.violations) {
    if (v.kind == "negative_density") negative_density = v.value < 0.0;
  }
  CHECK(negative_density);
  REQUIRE(report.largest_valid_delta);
  CHECK(*report.largest_valid_delta < 10.0);
  const ExpansionFamily smaller(standard_normal(), *report.largest_valid_delta, 1.0);
  CHECK(validity_check(smaller).valid);
}

TEST_CASE("density deviation vanishes on a degenerate box") {
  const ExpansionFamily still(standard_normal(), 0.0, 1.0);
  CHECK(sup_density_deviation(still).sup_deviation == 0.0);
  const ExpansionFamily family(standard_normal(), 0.2, 1.2);
  const auto d = sup_density_deviation(family);
  // at z = 0: (-delta/2 + 3 kappa delta^2 / 24) phi(0) at the (0.2, 1.2) corner
  CHECK(d.sup_deviation >= 0.094 * normal_pdf(0.0) - 1e-12);
  CHECK(d.at_member.delta == Approx(0.2));
  CHECK(d.c_stand_in == Approx(3.0 * normal_pdf(0.0)).epsilon(1e-6));
}

TEST_CASE("density deviation at the corner of a small box") {
  // |(delta/2) f0'' + (kappa delta^2 / 24) f0''''| at delta = 0.1, kappa = 1,
  // maximal at z = 0: phi(0) (0.05 - 3 / 2400)
  const ExpansionFamily family(standard_normal(), 0.1, 1.0);
  const auto d = sup_density_deviation(family);
  CHECK(d.sup_deviation ==
        Approx(normal_pdf(0.0) * (0.05 - 3.0 / 2400.0)).epsilon(1e-12));
  CHECK(std::fabs(d.at_z) < 1e-12);
  CHECK(d.at_member.delta == 0.1);
}

TEST_CASE("worst-case cvar over a box") {
  const ExpansionFamily family(standard_normal(), 0.1, 1.1);
  const auto ub = capacity_upper_bound(family, 0.96);
  CHECK(ub.report.value == Approx(2.256).epsilon(0.01 / 2.256));
  CHECK(ub.argmax.delta == Approx(0.1));
  CHECK(ub.argmax.kappa == Approx(1.1));
  CHECK(ub.evaluations > 0);
  // the bound dominates every grid member it was built from
  for (double d : {0.0, 0.05, 0.1}) {
    for (double k : {1.0, 1.1}) {
      CHECK(member_cvar(family, {d, k}, 0.96).value <= ub.report.value + 1e-9);
    }
  }
}

TEST_CASE("envelope cvar is below every member (property)") {
  for (double max_delta : {0.05, 0.2}) {
    const ExpansionFamily family(standard_normal(), max_delta, 1.2);
    const double env = envelope_cvar(family, 0.96).value;
    for (int i = 0; i <= 4; ++i) {
      for (int j = 0; j <= 2; ++j) {
        const FamilyMember m{max_delta * i / 4.0, 1.0 + 0.1 * j};
        CHECK(env <= member_cvar(family, m, 0.96).value + 1e-8);
      }
    }
  }
}

TEST_CASE("envelope dominates every member cdf") {
  const ExpansionFamily family(standard_normal(), 0.2, 1.2);
  for (double z = -4.0; z <= 4.0; z += 0.25) {
    const double env = envelope_cdf(family, z);
    CHECK(env + envelope_sf(family, z) == Approx(1.0).epsilon(1e-12));
    for (FamilyMember m : family.corners()) {
      CHECK(env >= expansion_cdf(family, m, z) - 1e-15);
    }
  }
}

TEST_CASE("noise shapes") {
  CHECK(noise_kurtosis(NoiseShape::kGaussian) == 3.0);
  CHECK(noise_kurtosis(NoiseShape::kUniform) == Approx(1.8));
  CHECK(noise_kurtosis(NoiseShape::kRademacherSmoothed) == Approx(1.875));
  CHECK(parse_noise_shape("normal") == NoiseShape::kGaussian);
  CHECK(parse_noise_shape("rademacher-smoothed") == NoiseShape::kRademacherSmoothed);
  CHECK_THROWS_AS(parse_noise_shape("cauchy"), DomainError);
}

TEST_CASE("exact contaminated laws") {
  const NormalLaw base;
  CHECK(contaminated_normal_cdf(base, NoiseShape::kGaussian, 0.1, 1.75) ==
        Approx(oracle::kContaminatedCdf).epsilon(1e-14));
  for (NoiseShape shape : {NoiseShape::kGaussian, NoiseShape::kUniform,
                           NoiseShape::kRademacherSmoothed}) {
    CHECK(contaminated_normal_cdf(base, shape, 0.0, 0.4) ==
          Approx(normal_cdf(0.4)).epsilon(1e-14));
    CHECK(contaminated_normal_cdf(base, shape, 0.3, 0.0) ==
          Approx(0.5).epsilon(1e-14));
  }
}

TEST_CASE("expansion error shrinks with the error scale for every shape") {
  const NormalLaw base;
  std::vector<double> z;
  for (double t = -3.0; t <= 3.0; t += 0.01) z.push_back(t);
  const std::vector<double> deltas{0.04, 0.02, 0.01};
  for (NoiseShape shape : {NoiseShape::kGaussian, NoiseShape::kUniform,
                           NoiseShape::kRademacherSmoothed}) {
    const auto rows = lemma_expansion_error(base, shape, deltas, z);
    REQUIRE(rows.size() == 3);
    CHECK(rows[0].max_abs_error > rows[1].max_abs_error);
    CHECK(rows[1].max_abs_error > rows[2].max_abs_error);
    CHECK(rows[2].max_abs_error < 1e-5);
  }
}
