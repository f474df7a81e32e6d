#include <cmath>
#include <memory>

#include "doctest.h"
#include "oracle.hpp"
#include "shortfall/choquet.hpp"
#include "shortfall/errors.hpp"

using namespace shortfall;
using doctest::Approx;

namespace {

// Pareto law on [1, inf) with survival x^-index.
class ParetoLaw final : public ContinuousDistribution {
 public:
  explicit ParetoLaw(double index) : index_(index) {}
  double cdf(double x) const override { return x <= 1.0 ? 0.0 : 1.0 - sf(x); }
  double sf(double x) const override {
    return x <= 1.0 ? 1.0 : std::pow(x, -index_);
  }
  double pdf(double x) const override {
    return x <= 1.0 ? 0.0 : index_ * std::pow(x, -index_ - 1.0);
  }
  double upper_quantile(double u) const override {
    return std::pow(u, -1.0 / index_);
  }
  double quantile(double t) const override { return upper_quantile(1.0 - t); }
  Support support() const override { return {1.0, INFINITY}; }
  std::optional<double> mean() const override { return std::nullopt; }
  std::optional<double> upper_tail_index() const override { return index_; }
  std::string describe() const override { return "pareto"; }

 private:
  double index_;
};

class PowerDistortion final : public DistortionFunction {
 public:
  double operator()(double t) const override { return std::sqrt(t); }
  std::string label() const override { return "sqrt"; }
};

}  // namespace

TEST_CASE("cvar of the normal law") {
  const NormalLaw n;
  CHECK(cvar_quantile_integral(n, 0.9).value == Approx(oracle::kNormalCvar90).epsilon(1e-10));
  CHECK(cvar_quantile_integral(n, 0.95).value == Approx(oracle::kNormalCvar95).epsilon(1e-10));
  CHECK(cvar_quantile_integral(n, 0.96).value == Approx(oracle::kNormalCvar96).epsilon(1e-10));
  CHECK(cvar_quantile_integral(n, 0.99).value == Approx(oracle::kNormalCvar99).epsilon(1e-10));
  const auto r = choquet_expected_loss(n, CvarDistortion(0.96));
  CHECK(r.value == Approx(oracle::kNormalCvar96).epsilon(1e-10));
  CHECK(r.alpha == 0.96);
  CHECK(r.method == "choquet_expected_loss");
}

TEST_CASE("cvar of chi-square with one degree of freedom") {
  const ChiSquareLaw chi(1);
  CHECK(cvar_quantile_integral(chi, 0.9).value == Approx(oracle::kChi1Cvar90).epsilon(1e-10));
  CHECK(cvar_quantile_integral(chi, 0.95).value == Approx(oracle::kChi1Cvar95).epsilon(1e-10));
  CHECK(cvar_quantile_integral(chi, 0.96).value == Approx(oracle::kChi1Cvar96).epsilon(1e-10));
  CHECK(cvar_quantile_integral(chi, 0.99).value == Approx(oracle::kChi1Cvar99).epsilon(1e-10));
}

TEST_CASE("choquet and quantile-integral forms agree (property)") {
  const NormalLaw n1(0.0, 1.0), n2(-3.0, 0.4);
  const ChiSquareLaw c1(1), c5(5);
  const UniformLaw u(-1.0, 4.0);
  const ContinuousDistribution* laws[] = {&n1, &n2, &c1, &c5, &u};
  for (const auto* law : laws) {
    for (double alpha : {0.0, 0.3, 0.75, 0.9, 0.96, 0.995}) {
      CAPTURE(law->describe());
      CAPTURE(alpha);
      const auto a = choquet_expected_loss(*law, CvarDistortion(alpha));
      const auto b = cvar_quantile_integral(*law, alpha);
      CHECK(std::fabs(a.value - b.value) <=
            10.0 * (a.tolerance_used + b.tolerance_used));
    }
  }
}

TEST_CASE("identity distortion gives the mean") {
  CHECK(choquet_expected_loss(NormalLaw(1.5, 2.0), IdentityDistortion{}).value ==
        Approx(1.5).epsilon(1e-9));
  CHECK(choquet_expected_loss(ChiSquareLaw(3), IdentityDistortion{}).value ==
        Approx(3.0).epsilon(1e-9));
  CHECK(cvar_quantile_integral(UniformLaw(2.0, 6.0), 0.0).value ==
        Approx(4.0).epsilon(1e-12));
}

TEST_CASE("a concave distortion without kinks") {
  // E under sqrt(sf) for the uniform law on [0, 1]: int_0^1 sqrt(1 - x) dx
  const PowerDistortion phi;
  CHECK(is_valid_distortion(phi));
  CHECK(choquet_expected_loss(UniformLaw(0.0, 1.0), phi).value ==
        Approx(2.0 / 3.0).epsilon(1e-9));
}

TEST_CASE("cvar is monotone in alpha and dominates the mean (property)") {
  const ChiSquareLaw chi(2);
  double prev = cvar_quantile_integral(chi, 0.0).value;
  CHECK(prev == Approx(2.0).epsilon(1e-9));
  for (double alpha = 0.05; alpha < 1.0; alpha += 0.05) {
    const double v = cvar_quantile_integral(chi, alpha).value;
    CHECK(v > prev);
    prev = v;
  }
}

TEST_CASE("distortion validity") {
  CHECK(is_valid_distortion(CvarDistortion(0.9)));
  CHECK(is_valid_distortion(IdentityDistortion{}));
  CHECK(CvarDistortion(0.9)(0.05) == Approx(0.5));
  CHECK(CvarDistortion(0.9)(0.5) == 1.0);
  CHECK_THROWS_AS(CvarDistortion(1.0), DomainError);
  CHECK_THROWS_AS(CvarDistortion(-0.1), DomainError);
}

TEST_CASE("tails with index <= 1 are not integrable") {
  const ParetoLaw heavy(0.8);
  CHECK_THROWS_AS(cvar_quantile_integral(heavy, 0.9), NonIntegrableError);
  CHECK_THROWS_AS(choquet_expected_loss(heavy, CvarDistortion(0.9)),
                  NonIntegrableError);
  // index 3: CVaR = (3/2) (1 - alpha)^(-1/3)
  const ParetoLaw light(3.0);
  CHECK(cvar_quantile_integral(light, 0.9).value ==
        Approx(1.5 * std::pow(0.1, -1.0 / 3.0)).epsilon(1e-9));
}

TEST_CASE("translation and homogeneity (property)") {
  auto laws = {DistributionPtr(std::make_shared<NormalLaw>(0.0, 1.0)),
               DistributionPtr(std::make_shared<ChiSquareLaw>(1)),
               DistributionPtr(std::make_shared<UniformLaw>(0.0, 2.0))};
  for (const auto& law : laws) {
    for (double alpha : {0.5, 0.9, 0.96}) {
      const auto probe = coherence_probe(law, alpha, -2.5, 3.0);
      CAPTURE(law->describe());
      CHECK(probe.translation_ok);
      CHECK(probe.homogeneity_ok);
      CHECK(probe.combined_ok);
      CHECK(probe.passed());
    }
  }
  CHECK_THROWS_AS(coherence_probe(nullptr, 0.9, 0.0, 1.0), DomainError);
  CHECK_THROWS_AS(coherence_probe(std::make_shared<NormalLaw>(), 0.9, 0.0, -1.0),
                  DomainError);
}
