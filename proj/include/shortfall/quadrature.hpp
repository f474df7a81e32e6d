#pragma once

#include <functional>
#include <span>

namespace shortfall {

/// Tolerances shared by every quadrature-backed risk computation.
struct QuadratureConfig {
  double rel_tol = 1e-9;
  double abs_tol = 1e-12;
  int max_subdivisions = 4000;
  // infinite z-domains are cut at quantile(p) and quantile(1 - p)
  double tail_truncation_probability = 1e-12;

  /// Throws DomainError unless every field is positive and rel_tol < 1.
  void validate() const;

  /// Tolerance target for an integral of the given magnitude.
  double target(double magnitude) const;
};

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;  // estimated absolute error
  int intervals = 0;
};

/// Globally adaptive Gauss-Kronrod (7/15) integration of f over [a, b].
///
/// The panel with the largest error estimate is bisected until the summed
/// estimate meets cfg.target(|value|). Nodes are interior, so integrable
/// endpoint singularities are handled by refinement toward the endpoint.
/// Throws NumericError carrying the achieved value and error estimate when
/// max_subdivisions is exhausted, and on non-finite integrand values.
QuadratureResult integrate(const std::function<double(double)>& f, double a,
                           double b, const QuadratureConfig& cfg);

/// As integrate(), after splitting [points.front(), points.back()] at every
/// interior break point. Points must be sorted ascending.
QuadratureResult integrate(const std::function<double(double)>& f,
                           std::span<const double> points,
                           const QuadratureConfig& cfg);

}  // namespace shortfall
