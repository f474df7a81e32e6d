#include "shortfall/choquet.hpp"

#include <algorithm>
#include <cmath>

#include "shortfall/errors.hpp"

namespace shortfall {
namespace {

void require_alpha(double alpha, const char* who) {
  if (!(alpha >= 0.0 && alpha < 1.0)) {
    throw DomainError(std::string(who) + ": alpha must lie in [0, 1)");
  }
}

void require_integrable_tail(const ContinuousDistribution& dist,
                             const char* who) {
  if (auto index = dist.upper_tail_index(); index && *index <= 1.0) {
    throw NonIntegrableError(std::string(who) + ": " + dist.describe() +
                             " has a right tail with index <= 1");
  }
}

}  // namespace

CvarDistortion::CvarDistortion(double alpha) : alpha_(alpha) {
  require_alpha(alpha, "CvarDistortion");
}

double CvarDistortion::operator()(double t) const {
  if (t <= 0.0) return 0.0;
  return std::fmin(t / (1.0 - alpha_), 1.0);
}

std::vector<double> CvarDistortion::kinks() const {
  if (alpha_ == 0.0) return {};
  return {1.0 - alpha_};
}

bool is_valid_distortion(const DistortionFunction& phi, int grid_points) {
  if (grid_points < 2) throw DomainError("is_valid_distortion: grid too small");
  if (phi(0.0) != 0.0 || phi(1.0) != 1.0) return false;
  double prev = 0.0;
  for (int i = 0; i < grid_points; ++i) {
    const double t = static_cast<double>(i) / (grid_points - 1);
    const double v = phi(t);
    if (!(v >= prev) || v > 1.0) return false;
    prev = v;
  }
  return true;
}

RiskReport choquet_expected_loss(const ContinuousDistribution& dist,
                                 const DistortionFunction& phi,
                                 const QuadratureConfig& cfg) {
  cfg.validate();
  if (phi(cfg.tail_truncation_probability) > 0.0) {
    require_integrable_tail(dist, "choquet_expected_loss");
  }

  const double eps = cfg.tail_truncation_probability;
  const Support support = dist.support();
  const bool cut_low = !std::isfinite(support.lo);
  const bool cut_high = !std::isfinite(support.hi);
  const double lo = cut_low ? dist.quantile(eps) : support.lo;
  const double hi = cut_high ? dist.upper_quantile(eps) : support.hi;
  const double a = std::fmin(lo, 0.0);
  const double b = std::fmax(hi, 0.0);

  std::vector<double> points{a, b};
  if (a < 0.0 && b > 0.0) points.push_back(0.0);
  for (double t : phi.kinks()) {
    const double x = dist.upper_quantile(t);
    if (x > a && x < b) points.push_back(x);
  }
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());

  const auto integrand = [&](double x) {
    const double w = phi(dist.sf(x));
    return x >= 0.0 ? w : w - 1.0;
  };
  const QuadratureResult body = integrate(integrand, points, cfg);

  RiskReport report;
  report.method = "choquet_expected_loss";
  report.value = body.value;
  report.error_estimate = body.error;

  if (cut_high) {
    const auto piece = phi.linear_near_zero();
    const auto moment = dist.upper_partial_moment(b);
    if (piece && moment && dist.sf(b) <= piece->extent) {
      report.value += piece->slope * *moment;
    } else {
      report.warnings.push_back("upper tail remainder beyond " +
                                std::to_string(b) + " not added");
      report.error_estimate += eps * std::fabs(b);
    }
  }
  if (cut_low) {
    const auto piece = phi.linear_near_one();
    const auto moment = dist.lower_partial_moment(a);
    if (piece && moment && dist.sf(a) >= piece->extent) {
      report.value -= piece->slope * *moment;
    } else {
      report.warnings.push_back("lower tail remainder below " +
                                std::to_string(a) + " not added");
      report.error_estimate += eps * std::fabs(a);
    }
  }

  if (auto cvar = dynamic_cast<const CvarDistortion*>(&phi)) {
    report.alpha = cvar->alpha();
  }
  report.inputs.emplace_back("truncation_probability", eps);
  for (const auto& p : phi.parameters()) report.inputs.push_back(p);
  report.tolerance_used = cfg.target(report.value);
  report.require_finite();
  return report;
}

RiskReport cvar_quantile_integral(const ContinuousDistribution& dist,
                                  double alpha, const QuadratureConfig& cfg) {
  require_alpha(alpha, "cvar_quantile_integral");
  cfg.validate();
  require_integrable_tail(dist, "cvar_quantile_integral");

  const double mass = 1.0 - alpha;
  const QuadratureResult r = integrate(
      [&](double u) { return dist.upper_quantile(u); }, 0.0, mass, cfg);

  RiskReport report;
  report.method = "cvar_quantile_integral";
  report.alpha = alpha;
  report.value = r.value / mass;
  report.error_estimate = r.error / mass;
  report.inputs.emplace_back("alpha", alpha);
  report.tolerance_used = cfg.target(report.value);
  report.require_finite();
  return report;
}

CoherenceProbe coherence_probe(const DistributionPtr& dist, double alpha,
                               double shift, double scale,
                               const QuadratureConfig& cfg) {
  if (!dist) throw DomainError("coherence_probe: law is null");
  if (!(scale > 0.0)) throw DomainError("coherence_probe: scale must be > 0");

  CoherenceProbe probe;
  probe.shift = shift;
  probe.scale = scale;
  probe.base = cvar_quantile_integral(*dist, alpha, cfg);
  probe.shifted = cvar_quantile_integral(AffineLaw(dist, 1.0, shift), alpha, cfg);
  probe.scaled = cvar_quantile_integral(AffineLaw(dist, scale, 0.0), alpha, cfg);
  probe.combined =
      cvar_quantile_integral(AffineLaw(dist, scale, shift), alpha, cfg);

  const double b = probe.base.value;
  const double tb = probe.base.tolerance_used;
  probe.translation_ok = std::fabs(probe.shifted.value - (b + shift)) <=
                         10.0 * (tb + probe.shifted.tolerance_used);
  probe.homogeneity_ok = std::fabs(probe.scaled.value - scale * b) <=
                         10.0 * (scale * tb + probe.scaled.tolerance_used);
  probe.combined_ok = std::fabs(probe.combined.value - (scale * b + shift)) <=
                      10.0 * (scale * tb + probe.combined.tolerance_used);
  return probe;
}

}  // namespace shortfall
