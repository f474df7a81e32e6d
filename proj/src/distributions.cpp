#include "shortfall/distributions.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "shortfall/errors.hpp"
#include "shortfall/roots.hpp"

namespace shortfall {
namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;
constexpr double kInvSqrt2Pi = 0.39894228040143267794;

void require_probability(double t, const char* what) {
  if (!(t > 0.0 && t < 1.0)) {
    throw DomainError(std::string(what) + ": probability must lie in (0, 1)");
  }
}

std::string format_params(const std::string& name,
                          std::initializer_list<std::pair<const char*, double>> params) {
  std::ostringstream os;
  os.precision(10);
  os << name << '(';
  bool first = true;
  for (const auto& [key, value] : params) {
    if (!first) os << ',';
    os << key << '=' << value;
    first = false;
  }
  os << ')';
  return os.str();
}

// Acklam's rational approximation, relative error ~1e-9 before refinement.
double acklam(double p) {
  static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                 -2.759285104469687e+02, 1.383577518672690e+02,
                                 -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                 -1.556989798598866e+02, 6.680131188771972e+01,
                                 -1.328068155288572e+01};
  static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                 -2.400758277161838e+00, -2.549732539343734e+00,
                                 4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                 2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double p_low = 0.02425;

  if (p < p_low) {
    const double q = std::sqrt(-2.0 * std::log(p));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  if (p <= 1.0 - p_low) {
    const double q = p - 0.5;
    const double r = q * q;
    return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
           (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  }
  const double q = std::sqrt(-2.0 * std::log1p(-p));
  return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
         ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
}

}  // namespace

double ContinuousDistribution::pdf_derivative(double, int) const {
  throw DomainError(describe() + ": density derivatives are not available");
}

double ContinuousDistribution::quantile(double t) const {
  return invert_cdf(*this, t);
}

double ContinuousDistribution::upper_quantile(double u) const {
  return invert_sf(*this, u);
}

double invert_cdf(const ContinuousDistribution& dist, double t) {
  require_probability(t, "quantile");
  const Support s = dist.support();
  const double center = dist.mean().value_or(0.0);
  return invert_nondecreasing([&](double z) { return dist.cdf(z) - t; },
                              center, s.lo, s.hi);
}

double invert_sf(const ContinuousDistribution& dist, double u) {
  require_probability(u, "upper_quantile");
  const Support s = dist.support();
  const double center = dist.mean().value_or(0.0);
  return invert_nondecreasing([&](double z) { return u - dist.sf(z); },
                              center, s.lo, s.hi);
}

double quantile(const ContinuousDistribution& dist, double t) {
  require_probability(t, "quantile");
  return dist.quantile(t);
}

std::vector<double> open_uniforms(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 engine(seed);
  std::vector<double> out(n);
  for (auto& u : out) {
    // 53 random bits centred in their cell: never exactly 0 or 1
    u = (static_cast<double>(engine() >> 11) + 0.5) * 0x1.0p-53;
  }
  return out;
}

std::vector<double> sample(const ContinuousDistribution& dist, std::size_t n,
                           std::uint64_t seed) {
  if (n == 0) throw DomainError("sample: n must be at least 1");
  std::vector<double> draws = open_uniforms(n, seed);
  for (auto& x : draws) x = dist.quantile(x);
  return draws;
}

// --------------------------------------------------------------------------
// Normal

double normal_cdf(double x) { return 0.5 * std::erfc(-x * kInvSqrt2); }
double normal_sf(double x) { return 0.5 * std::erfc(x * kInvSqrt2); }
double normal_pdf(double x) { return kInvSqrt2Pi * std::exp(-0.5 * x * x); }

double normal_quantile(double p) {
  require_probability(p, "normal_quantile");
  double x = acklam(p);
  // one Halley step against the erfc-based cdf
  const double density = normal_pdf(x);
  if (density > 0.0) {
    const double e = p < 0.5 ? normal_cdf(x) - p : (1.0 - p) - normal_sf(x);
    const double u = e / density;
    x -= u / (1.0 + 0.5 * x * u);
  }
  return x;
}

double hermite_he(int n, double x) {
  if (n < 0) throw DomainError("hermite_he: order must be nonnegative");
  double prev = 1.0;
  if (n == 0) return prev;
  double cur = x;
  for (int k = 1; k < n; ++k) {
    const double next = x * cur - k * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

NormalLaw::NormalLaw(double mu, double sigma) : mu_(mu), sigma_(sigma) {
  if (!std::isfinite(mu) || !(sigma > 0.0) || !std::isfinite(sigma)) {
    throw DomainError("NormalLaw: need finite mu and sigma > 0");
  }
}

double NormalLaw::cdf(double z) const { return normal_cdf((z - mu_) / sigma_); }
double NormalLaw::sf(double z) const { return normal_sf((z - mu_) / sigma_); }
double NormalLaw::pdf(double z) const {
  return normal_pdf((z - mu_) / sigma_) / sigma_;
}

double NormalLaw::pdf_derivative(double z, int order) const {
  if (order < 1 || order > 4) {
    throw DomainError("NormalLaw::pdf_derivative: order must be 1..4");
  }
  const double s = (z - mu_) / sigma_;
  const double sign = order % 2 == 0 ? 1.0 : -1.0;
  return sign * hermite_he(order, s) * normal_pdf(s) /
         std::pow(sigma_, order + 1);
}

double NormalLaw::quantile(double t) const {
  return mu_ + sigma_ * normal_quantile(t);
}

double NormalLaw::upper_quantile(double u) const {
  return mu_ - sigma_ * normal_quantile(u);
}

std::optional<double> NormalLaw::upper_partial_moment(double x) const {
  const double s = (x - mu_) / sigma_;
  return sigma_ * (normal_pdf(s) - s * normal_sf(s));
}

std::optional<double> NormalLaw::lower_partial_moment(double x) const {
  const double s = (x - mu_) / sigma_;
  return sigma_ * (normal_pdf(s) + s * normal_cdf(s));
}

std::string NormalLaw::describe() const {
  return format_params("normal", {{"mu", mu_}, {"sigma", sigma_}});
}

// --------------------------------------------------------------------------
// Incomplete gamma

namespace {

constexpr int kGammaMaxIter = 1000;
constexpr double kGammaEps = 1e-16;

// P(a, x) by its power series; converges quickly for x < a + 1.
double gamma_series(double a, double x) {
  double ap = a;
  double sum = 1.0 / a;
  double del = sum;
  for (int n = 0; n < kGammaMaxIter; ++n) {
    ap += 1.0;
    del *= x / ap;
    sum += del;
    if (std::fabs(del) < std::fabs(sum) * kGammaEps) {
      return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
    }
  }
  throw NumericError("gamma_p: series did not converge", a, x, sum, del);
}

// Q(a, x) by its continued fraction (modified Lentz); for x >= a + 1.
double gamma_continued_fraction(double a, double x) {
  constexpr double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= kGammaMaxIter; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < kGammaEps) {
      return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
    }
  }
  throw NumericError("gamma_q: continued fraction did not converge", a, x, h,
                     0.0);
}

}  // namespace

double gamma_p(double a, double x) {
  if (!(a > 0.0)) throw DomainError("gamma_p: shape must be positive");
  if (x <= 0.0) return 0.0;
  if (x < a + 1.0) return gamma_series(a, x);
  return 1.0 - gamma_continued_fraction(a, x);
}

double gamma_q(double a, double x) {
  if (!(a > 0.0)) throw DomainError("gamma_q: shape must be positive");
  if (x <= 0.0) return 1.0;
  if (x < a + 1.0) return 1.0 - gamma_series(a, x);
  return gamma_continued_fraction(a, x);
}

// --------------------------------------------------------------------------
// Chi-square

ChiSquareLaw::ChiSquareLaw(int k) : k_(k) {
  if (k < 1) throw DomainError("ChiSquareLaw: degrees of freedom must be >= 1");
}

double ChiSquareLaw::cdf(double z) const { return gamma_p(0.5 * k_, 0.5 * z); }
double ChiSquareLaw::sf(double z) const { return gamma_q(0.5 * k_, 0.5 * z); }

double ChiSquareLaw::pdf(double z) const {
  if (z < 0.0) return 0.0;
  const double half_k = 0.5 * k_;
  if (z == 0.0) {
    if (k_ == 1) return std::numeric_limits<double>::infinity();
    return k_ == 2 ? 0.5 : 0.0;
  }
  return std::exp((half_k - 1.0) * std::log(z) - 0.5 * z -
                  half_k * std::numbers::ln2 - std::lgamma(half_k));
}

double ChiSquareLaw::quantile(double t) const {
  require_probability(t, "quantile");
  // one degree of freedom is a squared standard normal
  if (k_ == 1 && t >= 1e-3) {
    const double z = normal_quantile(0.5 * (1.0 - t));
    return z * z;
  }
  return invert_cdf(*this, t);
}

double ChiSquareLaw::upper_quantile(double u) const {
  require_probability(u, "upper_quantile");
  if (k_ == 1 && u <= 1.0 - 1e-3) {
    const double z = normal_quantile(0.5 * u);
    return z * z;
  }
  return invert_sf(*this, u);
}

std::optional<double> ChiSquareLaw::upper_partial_moment(double x) const {
  if (x <= 0.0) return k_ - x;
  // x f_k(x) = k f_{k+2}(x)
  return k_ * gamma_q(0.5 * k_ + 1.0, 0.5 * x) - x * gamma_q(0.5 * k_, 0.5 * x);
}

std::optional<double> ChiSquareLaw::lower_partial_moment(double x) const {
  if (x <= 0.0) return 0.0;
  return x - k_ + *upper_partial_moment(x);
}

std::string ChiSquareLaw::describe() const {
  return format_params("chi2", {{"k", static_cast<double>(k_)}});
}

// --------------------------------------------------------------------------
// Uniform

UniformLaw::UniformLaw(double a, double b) : a_(a), b_(b) {
  if (!std::isfinite(a) || !std::isfinite(b) || !(a < b)) {
    throw DomainError("UniformLaw: need finite a < b");
  }
}

double UniformLaw::cdf(double z) const {
  if (z <= a_) return 0.0;
  if (z >= b_) return 1.0;
  return (z - a_) / (b_ - a_);
}

double UniformLaw::sf(double z) const {
  if (z <= a_) return 1.0;
  if (z >= b_) return 0.0;
  return (b_ - z) / (b_ - a_);
}

double UniformLaw::pdf(double z) const {
  return (z < a_ || z > b_) ? 0.0 : 1.0 / (b_ - a_);
}

double UniformLaw::quantile(double t) const {
  require_probability(t, "quantile");
  return a_ + t * (b_ - a_);
}

double UniformLaw::upper_quantile(double u) const {
  require_probability(u, "upper_quantile");
  return b_ - u * (b_ - a_);
}

std::optional<double> UniformLaw::upper_partial_moment(double x) const {
  if (x <= a_) return 0.5 * (a_ + b_) - x;
  if (x >= b_) return 0.0;
  return (b_ - x) * (b_ - x) / (2.0 * (b_ - a_));
}

std::optional<double> UniformLaw::lower_partial_moment(double x) const {
  if (x <= a_) return 0.0;
  if (x >= b_) return x - 0.5 * (a_ + b_);
  return (x - a_) * (x - a_) / (2.0 * (b_ - a_));
}

std::string UniformLaw::describe() const {
  return format_params("uniform", {{"a", a_}, {"b", b_}});
}

// --------------------------------------------------------------------------
// Affine transform

AffineLaw::AffineLaw(DistributionPtr base, double scale, double shift)
    : base_(std::move(base)), scale_(scale), shift_(shift) {
  if (!base_) throw DomainError("AffineLaw: base law is null");
  if (!(scale > 0.0) || !std::isfinite(scale) || !std::isfinite(shift)) {
    throw DomainError("AffineLaw: need finite scale > 0 and finite shift");
  }
}

double AffineLaw::cdf(double z) const { return base_->cdf(to_base(z)); }
double AffineLaw::sf(double z) const { return base_->sf(to_base(z)); }
double AffineLaw::pdf(double z) const { return base_->pdf(to_base(z)) / scale_; }

bool AffineLaw::has_pdf_derivative() const {
  return base_->has_pdf_derivative();
}

double AffineLaw::pdf_derivative(double z, int order) const {
  return base_->pdf_derivative(to_base(z), order) /
         std::pow(scale_, order + 1);
}

double AffineLaw::quantile(double t) const {
  return shift_ + scale_ * base_->quantile(t);
}

double AffineLaw::upper_quantile(double u) const {
  return shift_ + scale_ * base_->upper_quantile(u);
}

Support AffineLaw::support() const {
  const Support s = base_->support();
  return {shift_ + scale_ * s.lo, shift_ + scale_ * s.hi};
}

std::optional<double> AffineLaw::mean() const {
  if (auto m = base_->mean()) return shift_ + scale_ * *m;
  return std::nullopt;
}

std::optional<double> AffineLaw::upper_partial_moment(double x) const {
  if (auto m = base_->upper_partial_moment(to_base(x))) return scale_ * *m;
  return std::nullopt;
}

std::optional<double> AffineLaw::lower_partial_moment(double x) const {
  if (auto m = base_->lower_partial_moment(to_base(x))) return scale_ * *m;
  return std::nullopt;
}

std::optional<double> AffineLaw::upper_tail_index() const {
  return base_->upper_tail_index();
}

std::string AffineLaw::describe() const {
  std::ostringstream os;
  os.precision(10);
  os << "affine(scale=" << scale_ << ",shift=" << shift_ << ','
     << base_->describe() << ')';
  return os.str();
}

}  // namespace shortfall
