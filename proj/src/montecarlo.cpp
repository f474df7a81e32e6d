#include "shortfall/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "shortfall/choquet.hpp"
#include "shortfall/errors.hpp"
#include "shortfall/measurement_error.hpp"

namespace shortfall {
namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

class RademacherSmoothedLaw final : public ContinuousDistribution {
 public:
  double cdf(double z) const override {
    return 0.5 * (normal_cdf((z - kShift) / kScale) +
                  normal_cdf((z + kShift) / kScale));
  }
  double sf(double z) const override {
    return 0.5 * (normal_sf((z - kShift) / kScale) +
                  normal_sf((z + kShift) / kScale));
  }
  double pdf(double z) const override {
    return 0.5 / kScale *
           (normal_pdf((z - kShift) / kScale) + normal_pdf((z + kShift) / kScale));
  }
  Support support() const override { return {}; }
  std::optional<double> mean() const override { return 0.0; }
  std::string describe() const override { return "rademacher_smoothed"; }

 private:
  static constexpr double kShift = 0.86602540378443864676;  // sqrt(3/4)
  static constexpr double kScale = 0.5;
};

constexpr std::uint64_t kXStreamOffset = 0x5851F42D4C957F2DULL;
constexpr std::uint64_t kVStreamOffset = 0x14057B7EF767814FULL;
constexpr std::uint64_t kReplicateStride = 0xD1B54A32D192ED03ULL;

}  // namespace

DistributionPtr make_noise_law(NoiseShape shape) {
  switch (shape) {
    case NoiseShape::kGaussian:
      return std::make_shared<NormalLaw>(0.0, 1.0);
    case NoiseShape::kUniform:
      return std::make_shared<UniformLaw>(-std::sqrt(3.0), std::sqrt(3.0));
    case NoiseShape::kRademacherSmoothed:
      return std::make_shared<RademacherSmoothedLaw>();
  }
  throw DomainError("make_noise_law: unknown shape");
}

std::uint64_t x_stream_seed(std::uint64_t seed) {
  return splitmix64(seed + kXStreamOffset);
}

std::uint64_t v_stream_seed(std::uint64_t seed) {
  return splitmix64(seed + kVStreamOffset);
}

std::uint64_t replicate_seed(std::uint64_t seed, std::uint64_t replicate) {
  return splitmix64(seed + kReplicateStride * (replicate + 1));
}

NoiseMoments noise_moments(const ContinuousDistribution& v_law,
                           const QuadratureConfig& cfg) {
  QuadratureConfig tight = cfg;
  tight.rel_tol = std::fmin(cfg.rel_tol, 1e-10);
  const auto power_integral = [&](int k) {
    const auto upper = integrate(
        [&](double u) { return std::pow(v_law.upper_quantile(u), k); }, 0.0,
        0.5, tight);
    const auto lower = integrate(
        [&](double t) { return std::pow(v_law.quantile(t), k); }, 0.0, 0.5,
        tight);
    return upper.value + lower.value;
  };
  return {power_integral(2), power_integral(4)};
}

void ContaminationScenario::validate() const {
  if (!x_law || !v_law) throw DomainError("ContaminationScenario: null law");
  if (n < 1) throw DomainError("ContaminationScenario: n must be >= 1");
  if (!(delta >= 0.0) || !std::isfinite(delta)) {
    throw DomainError("ContaminationScenario: delta must be finite and >= 0");
  }
  for (int i = 1; i < 50; ++i) {
    const double t = 0.01 * i;
    const double lo = v_law->quantile(t);
    const double hi = v_law->quantile(1.0 - t);
    if (std::fabs(lo + hi) > 1e-9 * std::fmax(1.0, std::fabs(lo))) {
      throw DomainError("ContaminationScenario: noise law is not symmetric");
    }
  }
  const NoiseMoments m = noise_moments(*v_law);
  if (std::fabs(m.variance - 1.0) > 1e-6) {
    throw DomainError("ContaminationScenario: noise variance is not 1");
  }
}

EmpiricalSample sample_contaminated(const ContaminationScenario& scenario) {
  scenario.validate();
  std::vector<double> z = sample(*scenario.x_law, scenario.n,
                                 x_stream_seed(scenario.seed));
  if (scenario.delta > 0.0) {
    const std::vector<double> v = sample(*scenario.v_law, scenario.n,
                                         v_stream_seed(scenario.seed));
    const double scale = std::sqrt(scenario.delta);
    for (std::size_t i = 0; i < z.size(); ++i) z[i] += scale * v[i];
  }
  return EmpiricalSample(std::move(z));
}

double median(std::vector<double> values) {
  if (values.empty()) throw DomainError("median: no values");
  const std::size_t mid = values.size() / 2;
  std::nth_element(values.begin(), values.begin() + mid, values.end());
  const double upper = values[mid];
  if (values.size() % 2 == 1) return upper;
  const double lower = *std::max_element(values.begin(), values.begin() + mid);
  return 0.5 * (lower + upper);
}

ConvergenceTable consistency_experiment(const ContaminationScenario& scenario,
                                        double alpha,
                                        std::span<const std::size_t> n_grid,
                                        int repetitions,
                                        const QuadratureConfig& cfg) {
  if (scenario.delta != 0.0) {
    throw DomainError("consistency_experiment: requires delta = 0");
  }
  if (repetitions < 1) {
    throw DomainError("consistency_experiment: repetitions must be >= 1");
  }
  if (!scenario.x_law) throw DomainError("consistency_experiment: null law");

  ConvergenceTable table;
  table.reference = cvar_quantile_integral(*scenario.x_law, alpha, cfg).value;
  double previous = std::numeric_limits<double>::infinity();
  for (std::size_t n : n_grid) {
    ConvergenceRow row;
    row.n = n;
    std::vector<double> errors;
    for (int r = 0; r < repetitions; ++r) {
      ContaminationScenario replicate = scenario;
      replicate.n = n;
      replicate.seed = replicate_seed(scenario.seed, r);
      const EmpiricalSample s(
          sample(*replicate.x_law, n, x_stream_seed(replicate.seed)));
      const double estimate = empirical_cvar(s, alpha).value;
      row.estimates.push_back(estimate);
      errors.push_back(std::fabs(estimate - table.reference));
    }
    row.median_abs_error = median(std::move(errors));
    if (row.median_abs_error > previous) table.nonincreasing = false;
    previous = row.median_abs_error;
    table.rows.push_back(std::move(row));
  }
  return table;
}

std::vector<SweepRow> error_sensitivity_sweep(
    const DistributionPtr& x_law, const DistributionPtr& v_law,
    std::span<const double> delta_grid, double alpha, std::size_t n,
    std::uint64_t seed, int replicates, const QuadratureConfig& cfg) {
  if (replicates < 1) {
    throw DomainError("error_sensitivity_sweep: replicates must be >= 1");
  }
  ContaminationScenario scenario{x_law, v_law, 0.0, n, seed};
  scenario.validate();
  const double kappa = std::fmax(1.0, noise_moments(*v_law, cfg).fourth);

  std::vector<SweepRow> rows;
  for (double delta : delta_grid) {
    std::optional<double> companion;
    if (x_law->has_pdf_derivative()) {
      const ExpansionFamily family(x_law, delta, kappa);
      companion = member_cvar(family, {delta, kappa}, alpha, cfg).value;
    }
    for (int r = 0; r < replicates; ++r) {
      ContaminationScenario s = scenario;
      s.delta = delta;
      s.seed = replicates == 1 ? seed : replicate_seed(seed, r);
      SweepRow row;
      row.delta = delta;
      row.replicate = r;
      row.seed = s.seed;
      row.empirical_cvar = empirical_cvar(sample_contaminated(s), alpha).value;
      row.expansion_cvar = companion;
      rows.push_back(row);
    }
  }
  return rows;
}

}  // namespace shortfall
