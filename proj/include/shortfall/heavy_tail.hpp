#pragma once

#include <optional>
#include <string>

#include "shortfall/distributions.hpp"
#include "shortfall/quadrature.hpp"
#include "shortfall/report.hpp"

namespace shortfall {

/// gamma / (gamma - 1), with the limit 1 at gamma = +inf.
double pareto_mean_factor(double gamma);

/// F0 below tau = F0^-1(alpha), Pareto tail 1 - (1 - alpha)(tau/x)^gamma
/// above it. gamma = +inf is the analytic limit: an atom of mass 1 - alpha
/// at tau.
class SplicedParetoModel final : public ContinuousDistribution {
 public:
  /// Requires gamma > 1 (or +inf), F0(0) <= alpha < 1 and tau > 0.
  SplicedParetoModel(DistributionPtr f0, double gamma, double alpha);

  const ContinuousDistribution& base() const { return *f0_; }
  const DistributionPtr& base_ptr() const { return f0_; }
  double gamma() const { return gamma_; }
  double alpha() const { return alpha_; }
  double tau() const { return tau_; }
  /// Left end A = (1 - alpha)^(1/gamma) tau of the Pareto law.
  double start() const { return start_; }

  double cdf(double x) const override;
  double sf(double x) const override;
  double pdf(double x) const override;
  double quantile(double t) const override;
  double upper_quantile(double u) const override;
  Support support() const override { return f0_->support(); }
  std::optional<double> mean() const override;
  std::optional<double> upper_partial_moment(double x) const override;
  std::optional<double> lower_partial_moment(double x) const override;
  std::optional<double> upper_tail_index() const override { return gamma_; }
  std::string describe() const override;

  /// (tau / x)^gamma for x > tau.
  double tail_ratio(double x) const;

 private:
  DistributionPtr f0_;
  double gamma_;
  double alpha_;
  double tau_;
  double start_;
};

/// The Pareto law G on its own: 0 up to A, 1 - (1 - alpha)(tau/x)^gamma after.
double pareto_tail_cdf(const SplicedParetoModel& model, double x);
double spliced_cdf(const SplicedParetoModel& model, double x);
double spliced_quantile(const SplicedParetoModel& model, double t);

/// CVaR_{F0,alpha} + tau / (1 - gamma). Reproduces the reference table; the
/// report carries direct_spliced_cvar as a cross-check, which differs (see
/// README), and is flagged as diverged.
RiskReport theorem2_cvar(const SplicedParetoModel& model,
                         const QuadratureConfig& cfg = {});

/// (1 - alpha)^-1 int_alpha^1 F^-1(t) dt of the spliced law by quadrature;
/// equals tau * gamma / (gamma - 1).
RiskReport direct_spliced_cvar(const SplicedParetoModel& model,
                               const QuadratureConfig& cfg = {});

/// (1 - epsilon) F0 + epsilon * F_spliced.
class HuberMixtureModel final : public ContinuousDistribution {
 public:
  /// epsilon in [0, 1]; epsilon = 1 is the degenerate all-spliced probe.
  HuberMixtureModel(SplicedParetoModel spliced, double epsilon);

  const SplicedParetoModel& spliced() const { return spliced_; }
  double epsilon() const { return epsilon_; }

  double cdf(double x) const override;
  double sf(double x) const override;
  double pdf(double x) const override;
  double upper_quantile(double u) const override;
  Support support() const override { return spliced_.support(); }
  std::optional<double> mean() const override;
  std::optional<double> upper_partial_moment(double x) const override;
  std::optional<double> lower_partial_moment(double x) const override;
  std::optional<double> upper_tail_index() const override;
  std::string describe() const override;

 private:
  SplicedParetoModel spliced_;
  double epsilon_;
};

double mixture_cdf(const HuberMixtureModel& model, double x);

/// CVaR distortion of the mixture survival: 1 up to tau, then
/// (1 - eps)(1 - alpha)^-1 (1 - F0(x)) + eps (tau/x)^gamma.
double distorted_survival(const HuberMixtureModel& model, double x);

/// (1 - eps) CVaR_{F0,alpha} + eps * gamma / (gamma - 1) * tau, with
/// direct_mixture_cvar attached as cross-check.
RiskReport theorem3_cvar(const HuberMixtureModel& model,
                         const QuadratureConfig& cfg = {});

/// tau + int_tau^inf distorted_survival(x) dx by quadrature up to the
/// F0 truncation quantile, plus the analytic Pareto and F0 remainders.
RiskReport direct_mixture_cvar(const HuberMixtureModel& model,
                               const QuadratureConfig& cfg = {});

}  // namespace shortfall
