#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "shortfall/distributions.hpp"
#include "shortfall/quadrature.hpp"
#include "shortfall/report.hpp"

namespace shortfall {

/// Linear piece of a distortion at an end of [0, 1].
struct LinearPiece {
  double slope;
  double extent;  // near 0: valid for t <= extent; near 1: for t >= extent
};

/// Nondecreasing map [0, 1] -> [0, 1] with phi(0) = 0 and phi(1) = 1, applied
/// to survival probabilities.
class DistortionFunction {
 public:
  virtual ~DistortionFunction() = default;

  virtual double operator()(double t) const = 0;
  double eval(double t) const { return (*this)(t); }

  virtual std::string label() const = 0;
  virtual std::vector<std::pair<std::string, double>> parameters() const {
    return {};
  }
  /// Arguments in (0, 1) where the map is not smooth.
  virtual std::vector<double> kinks() const { return {}; }
  /// phi(t) = slope * t near zero, if the map is linear there.
  virtual std::optional<LinearPiece> linear_near_zero() const {
    return std::nullopt;
  }
  /// phi(t) = 1 - slope * (1 - t) near one, if the map is linear there.
  virtual std::optional<LinearPiece> linear_near_one() const {
    return std::nullopt;
  }
};

class IdentityDistortion final : public DistortionFunction {
 public:
  double operator()(double t) const override { return t; }
  std::string label() const override { return "identity"; }
  std::optional<LinearPiece> linear_near_zero() const override {
    return LinearPiece{1.0, 1.0};
  }
  std::optional<LinearPiece> linear_near_one() const override {
    return LinearPiece{1.0, 0.0};
  }
};

/// phi(t) = min(t / (1 - alpha), 1); its Choquet integral is CVaR at alpha.
class CvarDistortion final : public DistortionFunction {
 public:
  explicit CvarDistortion(double alpha);

  double alpha() const { return alpha_; }
  double operator()(double t) const override;
  std::string label() const override { return "cvar"; }
  std::vector<std::pair<std::string, double>> parameters() const override {
    return {{"alpha", alpha_}};
  }
  std::vector<double> kinks() const override;
  std::optional<LinearPiece> linear_near_zero() const override {
    return LinearPiece{1.0 / (1.0 - alpha_), 1.0 - alpha_};
  }
  std::optional<LinearPiece> linear_near_one() const override {
    return LinearPiece{0.0, 1.0 - alpha_};
  }

 private:
  double alpha_;
};

/// Checks phi(0) = 0, phi(1) = 1 and monotonicity on an evenly spaced grid.
bool is_valid_distortion(const DistortionFunction& phi, int grid_points = 1001);

/// Layer-cake integral of the distorted survival function,
///   int_0^inf phi(1 - F(x)) dx + int_-inf^0 [phi(1 - F(x)) - 1] dx.
/// Infinite ends are cut at the tail_truncation_probability quantiles; when
/// the distortion is linear in the cut-off tail and the law has a closed-form
/// partial moment, the exact remainder is added.
RiskReport choquet_expected_loss(const ContinuousDistribution& dist,
                                 const DistortionFunction& phi,
                                 const QuadratureConfig& cfg = {});

/// (1 - alpha)^-1 int_alpha^1 F^-1(t) dt, integrated in u = 1 - t so the
/// upper tail is resolved through upper_quantile. alpha = 0 gives the mean.
RiskReport cvar_quantile_integral(const ContinuousDistribution& dist,
                                  double alpha,
                                  const QuadratureConfig& cfg = {});

/// CVaR of X, X + shift, scale * X and scale * X + shift.
struct CoherenceProbe {
  RiskReport base;
  RiskReport shifted;
  RiskReport scaled;
  RiskReport combined;
  double shift = 0.0;
  double scale = 1.0;
  bool translation_ok = false;
  bool homogeneity_ok = false;
  bool combined_ok = false;

  bool passed() const { return translation_ok && homogeneity_ok && combined_ok; }
};

/// Translation invariance and positive homogeneity checked within ten times
/// the summed quadrature tolerances.
CoherenceProbe coherence_probe(const DistributionPtr& dist, double alpha,
                               double shift, double scale,
                               const QuadratureConfig& cfg = {});

}  // namespace shortfall
