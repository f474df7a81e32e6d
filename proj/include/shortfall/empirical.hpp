#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "shortfall/report.hpp"

namespace shortfall {

/// Loss observations together with their order statistics.
class EmpiricalSample {
 public:
  /// Throws DomainError on an empty or non-finite sample.
  explicit EmpiricalSample(std::vector<double> values);

  std::size_t size() const { return values_.size(); }
  std::span<const double> values() const { return values_; }
  /// X_{n:1} <= ... <= X_{n:n}, stably sorted.
  std::span<const double> sorted() const { return sorted_; }
  /// The i-th order statistic, 1-based.
  double order_statistic(std::size_t i) const;
  double mean() const { return mean_; }

 private:
  std::vector<double> values_;
  std::vector<double> sorted_;
  double mean_ = 0.0;
};

/// ceil(n * alpha) and floor(n * (1 - alpha)), with products that land within
/// rounding noise of an integer snapped to it (10 * 0.8 must give 8, and
/// 10 * (1 - 0.8) must give 2).
std::size_t ceil_count(std::size_t n, double alpha);
std::size_t floor_count(std::size_t n, double fraction);

/// Quantile check loss x * (alpha - 1[x < 0]).
double rho_alpha(double x, double alpha);

struct QuantileLossMinimum {
  double xi = 0.0;
  double objective = 0.0;
  std::size_t index = 0;  // 1-based order-statistic index of xi
  // set by the verification sweep: no sample point has a smaller objective
  bool verified_global = false;
};

/// Minimizer X_{n:ceil(n alpha)} of sum_i rho_alpha(X_i - xi). With `verify`,
/// the objective is evaluated at every sample point to confirm minimality.
QuantileLossMinimum quantile_loss_minimizer(const EmpiricalSample& sample,
                                            double alpha, bool verify = false);

enum class EstimatorMode {
  kTopMean,  // mean of the m = max(1, floor(n(1 - alpha))) largest values
  kLiteral,  // (1/m) * sum_{i=m}^{n} X_{n:i} with m = floor(n(1 - alpha))
};

/// Trimmed-mean estimate of expected shortfall. When floor(n(1 - alpha)) is 0
/// the block size is clamped to 1 and a warning is recorded.
RiskReport empirical_cvar(const EmpiricalSample& sample, double alpha,
                          EstimatorMode mode = EstimatorMode::kTopMean);

struct BassettCheck {
  double rhs = 0.0;        // m^-1 * min_xi sum rho_alpha(X_i - xi) + mean
  double estimate = 0.0;   // empirical_cvar in top-mean mode
  double residual = 0.0;   // |rhs - estimate|
  double literal_gap = 0.0;  // |rhs - literal-mode estimate|
};

/// Evaluates the quantile-loss representation of expected shortfall on the
/// sample and compares it with the trimmed-mean estimator. The two agree to
/// rounding whenever n * alpha is an integer.
BassettCheck bassett_identity_check(const EmpiricalSample& sample,
                                    double alpha);

}  // namespace shortfall
