#include "shortfall/empirical.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "shortfall/errors.hpp"

namespace shortfall {
namespace {

void require_open_alpha(double alpha, const char* who) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw DomainError(std::string(who) + ": alpha must lie in (0, 1)");
  }
}

// Neumaier-compensated sum.
double accurate_sum(std::span<const double> xs) {
  double sum = 0.0;
  double comp = 0.0;
  for (double x : xs) {
    const double t = sum + x;
    comp += std::fabs(sum) >= std::fabs(x) ? (sum - t) + x : (x - t) + sum;
    sum = t;
  }
  return sum + comp;
}

double snap(double x) {
  const double r = std::round(x);
  return std::fabs(x - r) <= 1e-9 * std::fmax(1.0, std::fabs(x)) ? r : x;
}

}  // namespace

EmpiricalSample::EmpiricalSample(std::vector<double> values)
    : values_(std::move(values)) {
  if (values_.empty()) throw DomainError("EmpiricalSample: sample is empty");
  for (double v : values_) {
    if (!std::isfinite(v)) throw DomainError("EmpiricalSample: non-finite value");
  }
  sorted_ = values_;
  std::stable_sort(sorted_.begin(), sorted_.end());
  mean_ = accurate_sum(values_) / static_cast<double>(values_.size());
}

double EmpiricalSample::order_statistic(std::size_t i) const {
  if (i < 1 || i > sorted_.size()) {
    throw DomainError("order_statistic: index out of range");
  }
  return sorted_[i - 1];
}

std::size_t ceil_count(std::size_t n, double alpha) {
  return static_cast<std::size_t>(std::ceil(snap(static_cast<double>(n) * alpha)));
}

std::size_t floor_count(std::size_t n, double fraction) {
  return static_cast<std::size_t>(
      std::floor(snap(static_cast<double>(n) * fraction)));
}

double rho_alpha(double x, double alpha) {
  return x * (alpha - (x < 0.0 ? 1.0 : 0.0));
}

QuantileLossMinimum quantile_loss_minimizer(const EmpiricalSample& sample,
                                            double alpha, bool verify) {
  require_open_alpha(alpha, "quantile_loss_minimizer");
  const std::size_t n = sample.size();
  const std::size_t k = ceil_count(n, alpha);
  if (k < 1 || k > n) {
    throw DomainError("quantile_loss_minimizer: ceil(n * alpha) outside 1..n");
  }

  QuantileLossMinimum result;
  result.index = k;
  result.xi = sample.order_statistic(k);
  std::vector<double> terms(n);
  std::transform(sample.values().begin(), sample.values().end(), terms.begin(),
                 [&](double x) { return rho_alpha(x - result.xi, alpha); });
  result.objective = accurate_sum(terms);

  if (verify) {
    // objective at xi = X_{n:j} from prefix sums of the order statistics:
    //   alpha * (S - n xi) - (P_{j-1} - (j-1) xi)   (ties below contribute 0)
    const auto sorted = sample.sorted();
    std::vector<double> prefix(n + 1, 0.0);
    for (std::size_t i = 0; i < n; ++i) prefix[i + 1] = prefix[i] + sorted[i];
    const double total = prefix[n];
    bool minimal = true;
    std::size_t below = 0;
    for (std::size_t j = 0; j < n; ++j) {
      const double xi = sorted[j];
      while (below < n && sorted[below] < xi) ++below;
      const double obj = alpha * (total - static_cast<double>(n) * xi) -
                         (prefix[below] - static_cast<double>(below) * xi);
      const double slack = 1e-12 * (std::fabs(total) + n * std::fabs(xi) + 1.0);
      if (obj < result.objective - slack) minimal = false;
    }
    result.verified_global = minimal;
  }
  return result;
}

RiskReport empirical_cvar(const EmpiricalSample& sample, double alpha,
                          EstimatorMode mode) {
  require_open_alpha(alpha, "empirical_cvar");
  const std::size_t n = sample.size();
  const auto sorted = sample.sorted();
  std::size_t m = floor_count(n, 1.0 - alpha);

  RiskReport report;
  report.alpha = alpha;
  report.inputs.emplace_back("n", static_cast<double>(n));
  if (m == 0) {
    m = 1;
    report.warnings.push_back(
        "floor(n(1 - alpha)) is 0; block size clamped to 1");
  }
  report.inputs.emplace_back("m", static_cast<double>(m));

  if (mode == EstimatorMode::kTopMean) {
    report.method = "empirical_cvar";
    report.value = accurate_sum(sorted.subspan(n - m)) / static_cast<double>(m);
  } else {
    report.method = "empirical_cvar_literal";
    report.value = accurate_sum(sorted.subspan(m - 1)) / static_cast<double>(m);
  }
  return report;
}

BassettCheck bassett_identity_check(const EmpiricalSample& sample,
                                    double alpha) {
  const QuantileLossMinimum minimum = quantile_loss_minimizer(sample, alpha);
  const RiskReport top = empirical_cvar(sample, alpha, EstimatorMode::kTopMean);
  const RiskReport literal =
      empirical_cvar(sample, alpha, EstimatorMode::kLiteral);
  const double m = *top.input("m");

  BassettCheck check;
  check.rhs = minimum.objective / m + sample.mean();
  check.estimate = top.value;
  check.residual = std::fabs(check.rhs - check.estimate);
  check.literal_gap = std::fabs(check.rhs - literal.value);
  return check;
}

}  // namespace shortfall
