#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "shortfall/distributions.hpp"
#include "shortfall/empirical.hpp"
#include "shortfall/measurement_error.hpp"
#include "shortfall/quadrature.hpp"

namespace shortfall {

/// Observations Z = X + sqrt(delta) V with V symmetric, E V = 0, E V^2 = 1.
struct ContaminationScenario {
  DistributionPtr x_law;
  DistributionPtr v_law;
  double delta = 0.0;
  std::size_t n = 1;
  std::uint64_t seed = 0;

  /// Checks n >= 1, delta >= 0, quantile symmetry of v_law on a grid and
  /// its unit variance within 1e-6 (by quadrature of the squared quantile).
  void validate() const;
};

/// Unit-variance symmetric noise law for a NoiseShape. The smoothed
/// Rademacher law is sqrt(3/4) R + W / 2 with R = +-1 and W standard normal.
DistributionPtr make_noise_law(NoiseShape shape);

/// Independent seeds for the X and V streams and for replicate r, derived
/// from the master seed with splitmix64 at fixed offsets.
std::uint64_t x_stream_seed(std::uint64_t seed);
std::uint64_t v_stream_seed(std::uint64_t seed);
std::uint64_t replicate_seed(std::uint64_t seed, std::uint64_t replicate);

/// E V^2 and E V^4 by integrating powers of the quantile function.
struct NoiseMoments {
  double variance = 0.0;
  double fourth = 0.0;
};
NoiseMoments noise_moments(const ContinuousDistribution& v_law,
                           const QuadratureConfig& cfg = {});

EmpiricalSample sample_contaminated(const ContaminationScenario& scenario);

double median(std::vector<double> values);

struct ConvergenceRow {
  std::size_t n = 0;
  double median_abs_error = 0.0;
  std::vector<double> estimates;  // one per replicate
};

struct ConvergenceTable {
  double reference = 0.0;  // cvar_quantile_integral of x_law
  std::vector<ConvergenceRow> rows;
  bool nonincreasing = true;  // median error along the n grid
};

/// Replicated empirical_cvar on uncontaminated draws (scenario.delta must
/// be 0); replicate r of every n uses replicate_seed(scenario.seed, r).
ConvergenceTable consistency_experiment(const ContaminationScenario& scenario,
                                        double alpha,
                                        std::span<const std::size_t> n_grid,
                                        int repetitions,
                                        const QuadratureConfig& cfg = {});

struct SweepRow {
  double delta = 0.0;
  int replicate = 0;
  std::uint64_t seed = 0;
  double empirical_cvar = 0.0;
  // member_cvar of the matching expansion member (kappa = E V^4), when the
  // X law supplies density derivatives
  std::optional<double> expansion_cvar;
};

/// For each delta and replicate, empirical_cvar of a contaminated sample.
std::vector<SweepRow> error_sensitivity_sweep(
    const DistributionPtr& x_law, const DistributionPtr& v_law,
    std::span<const double> delta_grid, double alpha, std::size_t n,
    std::uint64_t seed, int replicates = 1, const QuadratureConfig& cfg = {});

}  // namespace shortfall
