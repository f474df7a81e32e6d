#pragma once

#include <functional>

namespace shortfall {

struct RootOptions {
  double x_tol = 0.0;  // absolute; 0 means machine precision only
  int max_iterations = 400;
};

/// Brent's method on a bracket with f(lower) and f(upper) of opposite sign
/// (zero at either end is accepted). Throws NumericError with the final
/// bracket when the iteration cap is reached.
double brent_root(const std::function<double(double)>& f, double lower,
                  double upper, double f_lower, double f_upper,
                  const RootOptions& options = {});

/// Smallest-ish z with g(z) >= 0 for a nondecreasing g.
///
/// The bracket starts at [center - 1, center + 1] and each side doubles its
/// distance from `center` until g changes sign, clipped to [floor, ceiling].
double invert_nondecreasing(const std::function<double(double)>& g,
                            double center, double floor, double ceiling,
                            const RootOptions& options = {});

}  // namespace shortfall
