#include "shortfall/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <vector>

#include "shortfall/errors.hpp"

namespace shortfall {
namespace {

// Kronrod 15-point abscissae (positive half, descending) and weights; the
// odd-indexed entries are the embedded 7-point Gauss nodes.
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double a;
  double b;
  double value;
  double error;
  bool operator<(const Panel& other) const { return error < other.error; }
};

double checked(double v, double x) {
  if (!std::isfinite(v)) {
    throw NumericError("integrate: non-finite integrand", x, x, v,
                       std::numeric_limits<double>::infinity());
  }
  return v;
}

Panel gauss_kronrod(const std::function<double(double)>& f, double a,
                    double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = checked(f(center), center);
  double kronrod = fc * kWgk[7];
  double gauss = fc * kWg[3];
  std::array<double, 15> fv{};
  fv[7] = fc;
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    const double f1 = checked(f(center - dx), center - dx);
    const double f2 = checked(f(center + dx), center + dx);
    fv[j] = f1;
    fv[14 - j] = f2;
    kronrod += kWgk[j] * (f1 + f2);
    if (j % 2 == 1) gauss += kWg[j / 2] * (f1 + f2);
  }
  const double value = kronrod * half;
  double error = std::fabs((kronrod - gauss) * half);

  // QUADPACK-style rescaling of the raw estimate
  const double mean = 0.5 * kronrod;
  double asc = kWgk[7] * std::fabs(fc - mean);
  for (int j = 0; j < 7; ++j) {
    asc += kWgk[j] * (std::fabs(fv[j] - mean) + std::fabs(fv[14 - j] - mean));
  }
  asc *= std::fabs(half);
  if (asc != 0.0 && error != 0.0) {
    error = asc * std::fmin(1.0, std::pow(200.0 * error / asc, 1.5));
  }
  return {a, b, value, error};
}

}  // namespace

void QuadratureConfig::validate() const {
  if (!(rel_tol > 0.0 && rel_tol < 1.0)) {
    throw DomainError("QuadratureConfig: rel_tol must lie in (0, 1)");
  }
  if (!(abs_tol > 0.0)) {
    throw DomainError("QuadratureConfig: abs_tol must be positive");
  }
  if (max_subdivisions <= 0) {
    throw DomainError("QuadratureConfig: max_subdivisions must be positive");
  }
  if (!(tail_truncation_probability > 0.0 &&
        tail_truncation_probability < 0.5)) {
    throw DomainError(
        "QuadratureConfig: tail_truncation_probability must lie in (0, 0.5)");
  }
}

double QuadratureConfig::target(double magnitude) const {
  return std::fmax(abs_tol, rel_tol * std::fabs(magnitude));
}

QuadratureResult integrate(const std::function<double(double)>& f, double a,
                           double b, const QuadratureConfig& cfg) {
  const std::array<double, 2> ends{a, b};
  return integrate(f, std::span<const double>(ends), cfg);
}

QuadratureResult integrate(const std::function<double(double)>& f,
                           std::span<const double> points,
                           const QuadratureConfig& cfg) {
  cfg.validate();
  if (points.size() < 2) {
    throw DomainError("integrate: need at least two points");
  }
  if (!std::is_sorted(points.begin(), points.end())) {
    throw DomainError("integrate: break points must be ascending");
  }
  if (!std::isfinite(points.front()) || !std::isfinite(points.back())) {
    throw DomainError("integrate: limits must be finite");
  }

  std::priority_queue<Panel> panels;
  double value = 0.0;
  double error = 0.0;
  for (std::size_t i = 0; i + 1 < points.size(); ++i) {
    if (points[i] == points[i + 1]) continue;
    Panel p = gauss_kronrod(f, points[i], points[i + 1]);
    value += p.value;
    error += p.error;
    panels.push(p);
  }
  // panels too narrow to split further; their error is final
  double frozen_value = 0.0;
  double frozen_error = 0.0;
  int intervals = static_cast<int>(panels.size());

  while (error > cfg.target(value) && !panels.empty()) {
    if (intervals >= cfg.max_subdivisions) {
      throw NumericError("integrate: subdivision limit reached", points.front(),
                         points.back(), value, error);
    }
    Panel worst = panels.top();
    panels.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    const double width = worst.b - worst.a;
    if (width <= 64.0 * std::numeric_limits<double>::epsilon() *
                     std::fmax(std::fabs(mid), std::numeric_limits<double>::min())) {
      frozen_value += worst.value;
      frozen_error += worst.error;
      if (frozen_error > cfg.target(value)) {
        throw NumericError("integrate: roundoff limits attainable accuracy",
                           worst.a, worst.b, value, error);
      }
      continue;
    }
    const Panel left = gauss_kronrod(f, worst.a, mid);
    const Panel right = gauss_kronrod(f, mid, worst.b);
    value += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    panels.push(left);
    panels.push(right);
    ++intervals;
  }

  // resum to shed drift from the running updates
  double total = frozen_value;
  double total_error = frozen_error;
  while (!panels.empty()) {
    total += panels.top().value;
    total_error += panels.top().error;
    panels.pop();
  }
  return {total, total_error, intervals};
}

}  // namespace shortfall
