#pragma once

#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace shortfall {

struct Support {
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
};

/// A univariate law with a continuous, nondecreasing distribution function.
///
/// Implementations are immutable after construction and safe to share across
/// threads. Only cdf, pdf, support, mean and describe are mandatory; the
/// inversion and tail members have generic defaults built on cdf/sf.
class ContinuousDistribution {
 public:
  virtual ~ContinuousDistribution() = default;

  virtual double cdf(double z) const = 0;
  /// P(X > z). Override when 1 - cdf(z) loses precision in the upper tail.
  virtual double sf(double z) const { return 1.0 - cdf(z); }
  virtual double pdf(double z) const = 0;

  virtual bool has_pdf_derivative() const { return false; }
  /// n-th derivative of the density, n in 1..4. Laws without a closed form
  /// throw DomainError rather than differencing numerically.
  virtual double pdf_derivative(double z, int order) const;

  /// Generalized inverse inf{z : cdf(z) >= t} for t in (0, 1).
  virtual double quantile(double t) const;
  /// Upper-tail inverse inf{z : sf(z) <= u} for u in (0, 1); equals
  /// quantile(1 - u) without the cancellation in 1 - u.
  virtual double upper_quantile(double u) const;

  virtual Support support() const = 0;
  /// Empty when the mean does not exist.
  virtual std::optional<double> mean() const = 0;

  /// E[(X - x)+], when the law has a closed form for it.
  virtual std::optional<double> upper_partial_moment(double) const {
    return std::nullopt;
  }
  /// E[(x - X)+], when the law has a closed form for it.
  virtual std::optional<double> lower_partial_moment(double) const {
    return std::nullopt;
  }
  /// Pareto-type index of the right tail (sf ~ x^-index); empty for tails
  /// lighter than any power, infinity for bounded-above laws.
  virtual std::optional<double> upper_tail_index() const {
    return std::nullopt;
  }

  virtual std::string describe() const = 0;
};

using DistributionPtr = std::shared_ptr<const ContinuousDistribution>;

/// Default numeric inversion used by ContinuousDistribution::quantile.
double invert_cdf(const ContinuousDistribution& dist, double t);
/// Default numeric inversion used by ContinuousDistribution::upper_quantile.
double invert_sf(const ContinuousDistribution& dist, double u);

/// Checked entry point: t outside (0, 1) is a DomainError.
double quantile(const ContinuousDistribution& dist, double t);

/// n inverse-transform draws in generation order, deterministic in seed.
std::vector<double> sample(const ContinuousDistribution& dist, std::size_t n,
                           std::uint64_t seed);

/// Uniform variates on the open interval (0, 1) from a seeded 64-bit stream.
std::vector<double> open_uniforms(std::size_t n, std::uint64_t seed);

// ---------------------------------------------------------------------------

/// Standard normal helpers with full relative accuracy in both tails.
double normal_cdf(double x);
double normal_sf(double x);
double normal_pdf(double x);
/// Inverse of normal_cdf on (0, 1).
double normal_quantile(double p);
/// Probabilists' Hermite polynomial He_n(x).
double hermite_he(int n, double x);

class NormalLaw final : public ContinuousDistribution {
 public:
  NormalLaw(double mu = 0.0, double sigma = 1.0);

  double mu() const { return mu_; }
  double sigma() const { return sigma_; }

  double cdf(double z) const override;
  double sf(double z) const override;
  double pdf(double z) const override;
  bool has_pdf_derivative() const override { return true; }
  double pdf_derivative(double z, int order) const override;
  double quantile(double t) const override;
  double upper_quantile(double u) const override;
  Support support() const override { return {}; }
  std::optional<double> mean() const override { return mu_; }
  std::optional<double> upper_partial_moment(double x) const override;
  std::optional<double> lower_partial_moment(double x) const override;
  std::string describe() const override;

 private:
  double mu_;
  double sigma_;
};

/// Regularized lower and upper incomplete gamma functions P(a, x), Q(a, x).
double gamma_p(double a, double x);
double gamma_q(double a, double x);

class ChiSquareLaw final : public ContinuousDistribution {
 public:
  explicit ChiSquareLaw(int k = 1);

  int degrees_of_freedom() const { return k_; }

  double cdf(double z) const override;
  double sf(double z) const override;
  double pdf(double z) const override;
  double quantile(double t) const override;
  double upper_quantile(double u) const override;
  Support support() const override {
    return {0.0, std::numeric_limits<double>::infinity()};
  }
  std::optional<double> mean() const override { return k_; }
  std::optional<double> upper_partial_moment(double x) const override;
  std::optional<double> lower_partial_moment(double x) const override;
  std::string describe() const override;

 private:
  int k_;
};

class UniformLaw final : public ContinuousDistribution {
 public:
  UniformLaw(double a = 0.0, double b = 1.0);

  double cdf(double z) const override;
  double sf(double z) const override;
  double pdf(double z) const override;
  double quantile(double t) const override;
  double upper_quantile(double u) const override;
  Support support() const override { return {a_, b_}; }
  std::optional<double> mean() const override { return 0.5 * (a_ + b_); }
  std::optional<double> upper_partial_moment(double x) const override;
  std::optional<double> lower_partial_moment(double x) const override;
  std::optional<double> upper_tail_index() const override {
    return std::numeric_limits<double>::infinity();
  }
  std::string describe() const override;

 private:
  double a_;
  double b_;
};

/// Law of scale * X + shift for scale > 0.
class AffineLaw final : public ContinuousDistribution {
 public:
  AffineLaw(DistributionPtr base, double scale, double shift);

  double cdf(double z) const override;
  double sf(double z) const override;
  double pdf(double z) const override;
  bool has_pdf_derivative() const override;
  double pdf_derivative(double z, int order) const override;
  double quantile(double t) const override;
  double upper_quantile(double u) const override;
  Support support() const override;
  std::optional<double> mean() const override;
  std::optional<double> upper_partial_moment(double x) const override;
  std::optional<double> lower_partial_moment(double x) const override;
  std::optional<double> upper_tail_index() const override;
  std::string describe() const override;

 private:
  double to_base(double z) const { return (z - shift_) / scale_; }

  DistributionPtr base_;
  double scale_;
  double shift_;
};

}  // namespace shortfall
