#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "shortfall/choquet.hpp"
#include "shortfall/distributions.hpp"
#include "shortfall/quadrature.hpp"
#include "shortfall/report.hpp"

namespace shortfall {

/// Perturbation parameters: error scale delta and kurtosis kappa = E V^4.
struct FamilyMember {
  double delta = 0.0;
  double kappa = 1.0;
};

/// Densities f0 + (delta/2) f0'' + kappa (delta^2/24) f0'''' for
/// 0 <= delta <= max_delta and 1 <= kappa <= max_kappa: the second-order
/// expansion of the law of X + sqrt(delta) V around the base law of X.
class ExpansionFamily {
 public:
  /// The base must supply density derivatives of orders 1..4.
  ExpansionFamily(DistributionPtr base, double max_delta, double max_kappa);

  const ContinuousDistribution& base() const { return *base_; }
  const DistributionPtr& base_ptr() const { return base_; }
  double max_delta() const { return max_delta_; }
  double max_kappa() const { return max_kappa_; }

  /// Throws DomainError unless the member lies in the parameter box.
  void require_member(const FamilyMember& member) const;

  /// The four (delta, kappa) corners of the box.
  std::vector<FamilyMember> corners() const;

 private:
  DistributionPtr base_;
  double max_delta_;
  double max_kappa_;
};

struct GridSpec {
  int delta_points = 41;
  int kappa_points = 11;
  // default: base quantiles at 1e-10 and 1 - 1e-10
  std::optional<double> z_lo;
  std::optional<double> z_hi;
  int z_points = 2001;

  void validate() const;
  std::vector<double> z_grid(const ContinuousDistribution& base) const;
};

/// Raw (unclamped) expansion values; clamp only for display.
double expansion_cdf(const ExpansionFamily& family, const FamilyMember& member,
                     double z);
double expansion_sf(const ExpansionFamily& family, const FamilyMember& member,
                    double z);
double expansion_pdf(const ExpansionFamily& family, const FamilyMember& member,
                     double z);

/// One family member viewed as a distribution (quantiles by root finding).
class ExpansionMember final : public ContinuousDistribution {
 public:
  ExpansionMember(ExpansionFamily family, FamilyMember member);

  double cdf(double z) const override;
  double sf(double z) const override;
  double pdf(double z) const override;
  Support support() const override { return family_.base().support(); }
  std::optional<double> mean() const override { return family_.base().mean(); }
  std::string describe() const override;

 private:
  ExpansionFamily family_;
  FamilyMember member_;
};

struct ValidityViolation {
  FamilyMember member;
  double z = 0.0;
  double value = 0.0;
  std::string kind;  // "negative_density", "cdf_decreasing", "cdf_out_of_range"
};

struct ValidityReport {
  bool valid = true;
  std::vector<ValidityViolation> violations;  // first few, worst first
  // Only when the requested box fails: the largest valid delta on the delta
  // grid at the requested kappa bound, and the largest valid kappa on the
  // kappa grid at the requested delta bound (nullopt if none).
  std::optional<double> largest_valid_delta;
  std::optional<double> largest_valid_kappa;
};

/// Checks density >= -1e-12, cdf in [-1e-12, 1 + 1e-12] and nondecreasing on
/// the z grid, taking at every z the worst value over the whole box (the
/// expansion is linear in kappa and quadratic in delta).
ValidityReport validity_check(const ExpansionFamily& family,
                              const GridSpec& grid = {});

struct DeviationReport {
  double sup_deviation = 0.0;  // max |f* - f0| over grid and box
  double at_z = 0.0;
  FamilyMember at_member;
  // C K / 12 * Delta^2 with the stand-in C = sup_z |f0''''(z)| on the grid
  double quartic_bound = 0.0;
  double c_stand_in = 0.0;
};

DeviationReport sup_density_deviation(const ExpansionFamily& family,
                                      const GridSpec& grid = {});

/// CVaR of one member, by quantile inversion of expansion_cdf.
RiskReport member_cvar(const ExpansionFamily& family, const FamilyMember& member,
                       double alpha, const QuadratureConfig& cfg = {});

struct UpperBoundReport {
  RiskReport report;  // value = sup of member_cvar over the box
  FamilyMember argmax;
  int evaluations = 0;
};

/// Worst-case CVaR over the box: exhaustive grid, then two passes of local
/// refinement with halved steps around the incumbent. Ties go to the
/// smallest delta, then the smallest kappa.
UpperBoundReport capacity_upper_bound(const ExpansionFamily& family,
                                      double alpha, const GridSpec& grid = {},
                                      const QuadratureConfig& cfg = {});

/// Capacity of (-inf, z]: the supremum of expansion_cdf over the box.
double envelope_cdf(const ExpansionFamily& family, double z);
/// 1 - envelope_cdf, computed as the infimum of expansion_sf.
double envelope_sf(const ExpansionFamily& family, double z);

/// The pointwise-supremum CDF as a distribution.
class EnvelopeLaw final : public ContinuousDistribution {
 public:
  explicit EnvelopeLaw(ExpansionFamily family);

  double cdf(double z) const override { return envelope_cdf(family_, z); }
  double sf(double z) const override { return envelope_sf(family_, z); }
  /// Density of the member attaining the supremum at z.
  double pdf(double z) const override;
  Support support() const override { return family_.base().support(); }
  std::optional<double> mean() const override { return family_.base().mean(); }
  std::string describe() const override { return "envelope"; }

 private:
  ExpansionFamily family_;
};

/// CVaR of the capacity's generalized inverse; a lower bound for every
/// member_cvar.
RiskReport envelope_cvar(const ExpansionFamily& family, double alpha,
                         const QuadratureConfig& cfg = {});

enum class NoiseShape {
  kGaussian,            // E V^4 = 3
  kUniform,             // on [-sqrt 3, sqrt 3], E V^4 = 9/5
  kRademacherSmoothed,  // sqrt(3/4) R + W / 2, R = +-1, W ~ N(0,1); E V^4 = 15/8
};

double noise_kurtosis(NoiseShape shape);
NoiseShape parse_noise_shape(const std::string& name);

/// Exact CDF of X + sqrt(delta) V for normal X and the given noise shape.
double contaminated_normal_cdf(const NormalLaw& base, NoiseShape shape,
                               double delta, double z);

struct ExpansionErrorRow {
  double delta = 0.0;
  double max_abs_error = 0.0;
  double at_z = 0.0;
};

/// Max over z_set of |expansion_cdf(kappa = E V^4) - exact| for each delta.
std::vector<ExpansionErrorRow> lemma_expansion_error(
    const NormalLaw& base, NoiseShape shape, std::span<const double> deltas,
    std::span<const double> z_set);

}  // namespace shortfall
