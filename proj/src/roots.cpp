#include "shortfall/roots.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "shortfall/errors.hpp"

namespace shortfall {

double brent_root(const std::function<double(double)>& f, double lower,
                  double upper, double f_lower, double f_upper,
                  const RootOptions& options) {
  if (f_lower == 0.0) return lower;
  if (f_upper == 0.0) return upper;
  if (std::signbit(f_lower) == std::signbit(f_upper)) {
    throw NumericError("brent_root: bracket does not change sign", lower,
                       upper, 0.5 * (lower + upper), upper - lower);
  }

  constexpr double eps = std::numeric_limits<double>::epsilon();
  double a = lower, b = upper, c = upper;
  double fa = f_lower, fb = f_upper, fc = f_upper;
  double d = b - a, e = d;

  for (int iter = 0; iter < options.max_iterations; ++iter) {
    if (std::signbit(fb) == std::signbit(fc)) {
      c = a;
      fc = fa;
      d = e = b - a;
    }
    if (std::fabs(fc) < std::fabs(fb)) {
      a = b;
      b = c;
      c = a;
      fa = fb;
      fb = fc;
      fc = fa;
    }
    const double tol = 2.0 * eps * std::fabs(b) + 0.5 * options.x_tol +
                       std::numeric_limits<double>::denorm_min();
    const double m = 0.5 * (c - b);
    if (std::fabs(m) <= tol || fb == 0.0) return b;

    if (std::fabs(e) >= tol && std::fabs(fa) > std::fabs(fb)) {
      // inverse quadratic interpolation, or secant when a == c
      double p, q;
      const double s = fb / fa;
      if (a == c) {
        p = 2.0 * m * s;
        q = 1.0 - s;
      } else {
        const double qa = fa / fc;
        const double r = fb / fc;
        p = s * (2.0 * m * qa * (qa - r) - (b - a) * (r - 1.0));
        q = (qa - 1.0) * (r - 1.0) * (s - 1.0);
      }
      if (p > 0.0) {
        q = -q;
      } else {
        p = -p;
      }
      if (2.0 * p < std::fmin(3.0 * m * q - std::fabs(tol * q),
                              std::fabs(e * q))) {
        e = d;
        d = p / q;
      } else {
        d = m;
        e = m;
      }
    } else {
      d = m;
      e = m;
    }
    a = b;
    fa = fb;
    b += std::fabs(d) > tol ? d : (m > 0.0 ? tol : -tol);
    fb = f(b);
  }
  throw NumericError("brent_root: iteration cap reached", std::fmin(b, c),
                     std::fmax(b, c), b, std::fabs(c - b));
}

double invert_nondecreasing(const std::function<double(double)>& g,
                            double center, double floor, double ceiling,
                            const RootOptions& options) {
  constexpr int kMaxDoublings = 1100;
  double step = 1.0;
  double lo = std::fmax(center - step, floor);
  double glo = g(lo);
  double hi = std::fmin(center + step, ceiling);
  double ghi = std::numeric_limits<double>::quiet_NaN();

  for (int i = 0; glo >= 0.0; ++i) {
    if (lo <= floor) return lo;  // target sits at the lower support edge
    if (i == kMaxDoublings || !std::isfinite(lo)) {
      throw NumericError("quantile: lower bracket expansion failed", lo,
                         center, lo, step);
    }
    hi = lo;
    ghi = glo;
    step *= 2.0;
    lo = std::fmax(center - step, floor);
    glo = g(lo);
  }

  if (std::isnan(ghi)) {
    ghi = g(hi);
    for (int i = 0; ghi < 0.0; ++i) {
      if (i == kMaxDoublings || !std::isfinite(hi) || hi >= ceiling) {
        throw NumericError("quantile: upper bracket expansion failed", lo, hi,
                           hi, step);
      }
      lo = hi;
      glo = ghi;
      step *= 2.0;
      hi = std::fmin(center + step, ceiling);
      ghi = g(hi);
    }
  }
  return brent_root(g, lo, hi, glo, ghi, options);
}

}  // namespace shortfall
