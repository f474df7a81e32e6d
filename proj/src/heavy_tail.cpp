#include "shortfall/heavy_tail.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "shortfall/choquet.hpp"
#include "shortfall/errors.hpp"
#include "shortfall/roots.hpp"

namespace shortfall {
namespace {

// 1 / (gamma - 1), zero at gamma = +inf
double inverse_excess(double gamma) {
  return std::isinf(gamma) ? 0.0 : 1.0 / (gamma - 1.0);
}

std::string number(double x) {
  std::ostringstream os;
  os.precision(10);
  os << x;
  return os.str();
}

}  // namespace

double pareto_mean_factor(double gamma) {
  if (!(gamma > 1.0)) throw DomainError("Pareto index must exceed 1");
  return std::isinf(gamma) ? 1.0 : gamma / (gamma - 1.0);
}

SplicedParetoModel::SplicedParetoModel(DistributionPtr f0, double gamma,
                                       double alpha)
    : f0_(std::move(f0)), gamma_(gamma), alpha_(alpha) {
  if (!f0_) throw DomainError("SplicedParetoModel: base law is null");
  if (!(gamma > 1.0)) {
    throw DomainError("SplicedParetoModel: Pareto index gamma must exceed 1, got " +
                      number(gamma));
  }
  if (!(alpha < 1.0) || !(alpha >= f0_->cdf(0.0))) {
    throw DomainError("SplicedParetoModel: need F0(0) <= alpha < 1");
  }
  tau_ = f0_->quantile(alpha);
  if (!(tau_ > 0.0)) {
    throw DomainError("SplicedParetoModel: splice point F0^-1(alpha) must be > 0");
  }
  start_ = std::isinf(gamma) ? tau_ : std::pow(1.0 - alpha, 1.0 / gamma) * tau_;
}

double SplicedParetoModel::tail_ratio(double x) const {
  if (std::isinf(gamma_)) return x > tau_ ? 0.0 : 1.0;
  return std::pow(tau_ / x, gamma_);
}

double SplicedParetoModel::cdf(double x) const {
  if (x <= tau_) return f0_->cdf(x);
  return 1.0 - (1.0 - alpha_) * tail_ratio(x);
}

double SplicedParetoModel::sf(double x) const {
  if (x <= tau_) return f0_->sf(x);
  return (1.0 - alpha_) * tail_ratio(x);
}

double SplicedParetoModel::pdf(double x) const {
  if (x <= tau_) return f0_->pdf(x);
  if (std::isinf(gamma_)) return 0.0;
  return gamma_ * (1.0 - alpha_) * tail_ratio(x) / x;
}

double SplicedParetoModel::quantile(double t) const {
  if (!(t > 0.0 && t < 1.0)) {
    throw DomainError("spliced_quantile: probability must lie in (0, 1)");
  }
  if (t <= alpha_) return f0_->quantile(t);
  return upper_quantile(1.0 - t);
}

double SplicedParetoModel::upper_quantile(double u) const {
  if (!(u > 0.0 && u < 1.0)) {
    throw DomainError("upper_quantile: probability must lie in (0, 1)");
  }
  if (u >= 1.0 - alpha_) return f0_->upper_quantile(u);
  if (std::isinf(gamma_)) return tau_;
  return tau_ * std::pow((1.0 - alpha_) / u, 1.0 / gamma_);
}

std::optional<double> SplicedParetoModel::mean() const {
  const auto m0 = f0_->mean();
  const auto excess = f0_->upper_partial_moment(tau_);
  if (!m0 || !excess) return std::nullopt;
  const double tail_mass = 1.0 - alpha_;
  const double f0_tail = *excess + tau_ * tail_mass;  // E[X; X > tau] under F0
  return *m0 - f0_tail + tail_mass * tau_ * pareto_mean_factor(gamma_);
}

std::optional<double> SplicedParetoModel::upper_partial_moment(double x) const {
  const double tail_mass = 1.0 - alpha_;
  if (x >= tau_) {
    if (std::isinf(gamma_)) return 0.0;
    return tail_mass * x * tail_ratio(x) * inverse_excess(gamma_);
  }
  const auto below = f0_->upper_partial_moment(x);
  const auto at = f0_->upper_partial_moment(tau_);
  if (!below || !at) return std::nullopt;
  return *below - *at + tail_mass * tau_ * inverse_excess(gamma_);
}

std::optional<double> SplicedParetoModel::lower_partial_moment(double x) const {
  const auto m = mean();
  const auto upper = upper_partial_moment(x);
  if (!m || !upper) return std::nullopt;
  return x - *m + *upper;
}

std::string SplicedParetoModel::describe() const {
  return "spliced_pareto(gamma=" + number(gamma_) + ",alpha=" + number(alpha_) +
         ',' + f0_->describe() + ')';
}

double pareto_tail_cdf(const SplicedParetoModel& model, double x) {
  if (x <= model.start()) return 0.0;
  if (std::isinf(model.gamma())) return x < model.tau() ? 0.0 : 1.0;
  return 1.0 - (1.0 - model.alpha()) * std::pow(model.tau() / x, model.gamma());
}

double spliced_cdf(const SplicedParetoModel& model, double x) {
  return model.cdf(x);
}

double spliced_quantile(const SplicedParetoModel& model, double t) {
  return model.quantile(t);
}

RiskReport direct_spliced_cvar(const SplicedParetoModel& model,
                               const QuadratureConfig& cfg) {
  RiskReport report = cvar_quantile_integral(model, model.alpha(), cfg);
  report.method = "direct_spliced_cvar";
  report.inputs = {{"gamma", model.gamma()},
                   {"alpha", model.alpha()},
                   {"tau", model.tau()}};
  report.attach_cross_check(model.tau() * pareto_mean_factor(model.gamma()),
                            "tau*gamma/(gamma-1)", 10.0 * report.tolerance_used);
  return report;
}

RiskReport theorem2_cvar(const SplicedParetoModel& model,
                         const QuadratureConfig& cfg) {
  const RiskReport base = cvar_quantile_integral(model.base(), model.alpha(), cfg);

  RiskReport report;
  report.method = "theorem2_cvar";
  report.alpha = model.alpha();
  report.value = base.value - model.tau() * inverse_excess(model.gamma());
  report.error_estimate = base.error_estimate;
  report.tolerance_used = base.tolerance_used;
  report.inputs = {{"gamma", model.gamma()},
                   {"alpha", model.alpha()},
                   {"tau", model.tau()},
                   {"cvar_f0", base.value}};

  const RiskReport direct = direct_spliced_cvar(model, cfg);
  report.attach_cross_check(direct.value, direct.method,
                            10.0 * (report.tolerance_used + direct.tolerance_used));
  return report;
}

HuberMixtureModel::HuberMixtureModel(SplicedParetoModel spliced, double epsilon)
    : spliced_(std::move(spliced)), epsilon_(epsilon) {
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) {
    throw DomainError("HuberMixtureModel: epsilon must lie in [0, 1]");
  }
}

double HuberMixtureModel::cdf(double x) const {
  const auto& f0 = spliced_.base();
  if (x <= spliced_.tau()) return f0.cdf(x);
  return (1.0 - epsilon_) * f0.cdf(x) +
         epsilon_ * (1.0 - (1.0 - spliced_.alpha()) * spliced_.tail_ratio(x));
}

double HuberMixtureModel::sf(double x) const {
  const auto& f0 = spliced_.base();
  if (x <= spliced_.tau()) return f0.sf(x);
  return (1.0 - epsilon_) * f0.sf(x) +
         epsilon_ * (1.0 - spliced_.alpha()) * spliced_.tail_ratio(x);
}

double HuberMixtureModel::pdf(double x) const {
  return (1.0 - epsilon_) * spliced_.base().pdf(x) + epsilon_ * spliced_.pdf(x);
}

double HuberMixtureModel::upper_quantile(double u) const {
  if (!(u > 0.0 && u < 1.0)) {
    throw DomainError("upper_quantile: probability must lie in (0, 1)");
  }
  if (u >= 1.0 - spliced_.alpha()) return spliced_.base().upper_quantile(u);
  const double tau = spliced_.tau();
  return invert_nondecreasing([&](double z) { return u - sf(z); }, tau, tau,
                              std::numeric_limits<double>::infinity());
}

std::optional<double> HuberMixtureModel::mean() const {
  const auto m0 = spliced_.base().mean();
  const auto m1 = spliced_.mean();
  if (!m0 || !m1) return std::nullopt;
  return (1.0 - epsilon_) * *m0 + epsilon_ * *m1;
}

std::optional<double> HuberMixtureModel::upper_partial_moment(double x) const {
  const auto a = spliced_.base().upper_partial_moment(x);
  const auto b = spliced_.upper_partial_moment(x);
  if (!a || !b) return std::nullopt;
  return (1.0 - epsilon_) * *a + epsilon_ * *b;
}

std::optional<double> HuberMixtureModel::lower_partial_moment(double x) const {
  const auto a = spliced_.base().lower_partial_moment(x);
  const auto b = spliced_.lower_partial_moment(x);
  if (!a || !b) return std::nullopt;
  return (1.0 - epsilon_) * *a + epsilon_ * *b;
}

std::optional<double> HuberMixtureModel::upper_tail_index() const {
  if (epsilon_ > 0.0) return spliced_.gamma();
  return spliced_.base().upper_tail_index();
}

std::string HuberMixtureModel::describe() const {
  return "huber_mixture(epsilon=" + number(epsilon_) + ',' +
         spliced_.describe() + ')';
}

double mixture_cdf(const HuberMixtureModel& model, double x) {
  return model.cdf(x);
}

double distorted_survival(const HuberMixtureModel& model, double x) {
  const auto& s = model.spliced();
  if (x <= s.tau()) return 1.0;
  const double eps = model.epsilon();
  return (1.0 - eps) / (1.0 - s.alpha()) * s.base().sf(x) +
         eps * s.tail_ratio(x);
}

RiskReport direct_mixture_cvar(const HuberMixtureModel& model,
                               const QuadratureConfig& cfg) {
  cfg.validate();
  const auto& s = model.spliced();
  const double tau = s.tau();
  const double eps = model.epsilon();
  const double gamma = s.gamma();
  const double tail_mass = 1.0 - s.alpha();

  double cut = tau;
  if (!std::isfinite(s.base().support().hi)) {
    cut = std::fmax(tau, s.base().upper_quantile(cfg.tail_truncation_probability));
  } else {
    cut = std::fmax(tau, s.base().support().hi);
  }

  RiskReport report;
  report.method = "direct_mixture_cvar";
  report.alpha = s.alpha();
  report.inputs = {{"epsilon", eps}, {"gamma", gamma}, {"alpha", s.alpha()},
                   {"tau", tau}, {"cut", cut}};

  QuadratureResult body{0.0, 0.0, 0};
  if (cut > tau) {
    body = integrate([&](double x) { return distorted_survival(model, x); }, tau,
                     cut, cfg);
  }
  double value = tau + body.value;

  // Pareto part beyond the cut: eps * tau^gamma * cut^(1-gamma) / (gamma - 1)
  value += eps * cut * s.tail_ratio(cut) * inverse_excess(gamma);
  // F0 part beyond the cut
  if (auto excess = s.base().upper_partial_moment(cut)) {
    value += (1.0 - eps) / tail_mass * *excess;
  } else {
    report.warnings.push_back("F0 remainder beyond the cut not added");
    report.error_estimate += cfg.tail_truncation_probability * cut / tail_mass;
  }

  report.value = value;
  report.error_estimate += body.error;
  report.tolerance_used = cfg.target(value);
  report.require_finite();
  return report;
}

RiskReport theorem3_cvar(const HuberMixtureModel& model,
                         const QuadratureConfig& cfg) {
  const auto& s = model.spliced();
  const RiskReport base = cvar_quantile_integral(s.base(), s.alpha(), cfg);
  const double eps = model.epsilon();

  RiskReport report;
  report.method = "theorem3_cvar";
  report.alpha = s.alpha();
  report.value = (1.0 - eps) * base.value +
                 eps * pareto_mean_factor(s.gamma()) * s.tau();
  report.error_estimate = (1.0 - eps) * base.error_estimate;
  report.tolerance_used = base.tolerance_used;
  report.inputs = {{"epsilon", eps},
                   {"gamma", s.gamma()},
                   {"alpha", s.alpha()},
                   {"tau", s.tau()},
                   {"cvar_f0", base.value}};

  const RiskReport direct = direct_mixture_cvar(model, cfg);
  report.attach_cross_check(direct.value, direct.method,
                            10.0 * (report.tolerance_used + direct.tolerance_used));
  return report;
}

}  // namespace shortfall
