#include "shortfall/measurement_error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "shortfall/errors.hpp"

namespace shortfall {
namespace {

// Extremum over the box of  delta * p + kappa * delta^2 * q.  The map is
// linear in kappa, so kappa sits at an end; in delta it is a parabola whose
// vertex may fall inside [0, max_delta].
struct BoxPoint {
  double value;
  FamilyMember member;
};

BoxPoint box_extremum(double p, double q, double max_delta, double max_kappa,
                      bool maximize) {
  BoxPoint best{0.0, {0.0, 1.0}};
  const auto consider = [&](double d, double k) {
    const double v = d * p + k * d * d * q;
    if (maximize ? v > best.value : v < best.value) best = {v, {d, k}};
  };
  for (double k : {1.0, max_kappa}) {
    consider(max_delta, k);
    if (q != 0.0) {
      const double vertex = -p / (2.0 * k * q);
      if (vertex > 0.0 && vertex < max_delta) consider(vertex, k);
    }
  }
  return best;
}

struct Derivatives {
  double d1, d2, d3, d4;
};

Derivatives derivatives(const ContinuousDistribution& base, double z) {
  return {base.pdf_derivative(z, 1), base.pdf_derivative(z, 2),
          base.pdf_derivative(z, 3), base.pdf_derivative(z, 4)};
}

std::vector<double> axis(double lo, double hi, int points) {
  if (hi == lo) return {lo};
  std::vector<double> out(points);
  for (int i = 0; i < points; ++i) {
    out[i] = lo + (hi - lo) * static_cast<double>(i) / (points - 1);
  }
  out.back() = hi;
  return out;
}

constexpr double kValiditySlack = 1e-12;
constexpr std::size_t kMaxViolations = 8;

// Exact box scan on the z grid plus a monotonicity check of the cdf along the
// grid for members on a delta grid at both kappa bounds.
ValidityReport scan_box(const ExpansionFamily& family, double max_delta,
                        double max_kappa, const GridSpec& grid,
                        const std::vector<double>& zs) {
  const ContinuousDistribution& base = family.base();
  ValidityReport report;
  // (amount by which the bound is exceeded, violation)
  std::vector<std::pair<double, ValidityViolation>> found;
  const auto record = [&](ValidityViolation v) {
    report.valid = false;
    const double excess = v.kind == "cdf_out_of_range" && v.value > 0.5
                              ? v.value - 1.0
                              : -v.value;
    found.emplace_back(excess, std::move(v));
  };

  for (double z : zs) {
    const Derivatives d = derivatives(base, z);
    const BoxPoint low_pdf =
        box_extremum(0.5 * d.d2, d.d4 / 24.0, max_delta, max_kappa, false);
    const double min_pdf = base.pdf(z) + low_pdf.value;
    if (min_pdf < -kValiditySlack) {
      record({low_pdf.member, z, min_pdf, "negative_density"});
    }
    const double f0 = base.cdf(z);
    const BoxPoint hi_cdf =
        box_extremum(0.5 * d.d1, d.d3 / 24.0, max_delta, max_kappa, true);
    const BoxPoint lo_cdf =
        box_extremum(0.5 * d.d1, d.d3 / 24.0, max_delta, max_kappa, false);
    if (f0 + hi_cdf.value > 1.0 + kValiditySlack) {
      record({hi_cdf.member, z, f0 + hi_cdf.value, "cdf_out_of_range"});
    }
    if (f0 + lo_cdf.value < -kValiditySlack) {
      record({lo_cdf.member, z, f0 + lo_cdf.value, "cdf_out_of_range"});
    }
  }

  const ExpansionFamily sub(family.base_ptr(), max_delta, max_kappa);
  for (double delta : axis(0.0, max_delta, grid.delta_points)) {
    for (double kappa : {1.0, max_kappa}) {
      const FamilyMember m{delta, kappa};
      double prev = -std::numeric_limits<double>::infinity();
      for (double z : zs) {
        const double c = expansion_cdf(sub, m, z);
        if (c < prev - kValiditySlack) record({m, z, c - prev, "cdf_decreasing"});
        prev = std::fmax(prev, c);
      }
    }
  }

  std::stable_sort(found.begin(), found.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  for (auto& [excess, v] : found) {
    if (report.violations.size() == kMaxViolations) break;
    report.violations.push_back(std::move(v));
  }
  return report;
}

}  // namespace

ExpansionFamily::ExpansionFamily(DistributionPtr base, double max_delta,
                                 double max_kappa)
    : base_(std::move(base)), max_delta_(max_delta), max_kappa_(max_kappa) {
  if (!base_) throw DomainError("ExpansionFamily: base law is null");
  if (!base_->has_pdf_derivative()) {
    throw DomainError("ExpansionFamily: " + base_->describe() +
                      " lacks closed-form density derivatives");
  }
  if (!(max_delta >= 0.0) || !std::isfinite(max_delta)) {
    throw DomainError("ExpansionFamily: Delta must be finite and >= 0");
  }
  if (!(max_kappa >= 1.0) || !std::isfinite(max_kappa)) {
    throw DomainError("ExpansionFamily: K must be finite and >= 1");
  }
}

void ExpansionFamily::require_member(const FamilyMember& m) const {
  if (!(m.delta >= 0.0 && m.delta <= max_delta_) ||
      !(m.kappa >= 1.0 && m.kappa <= max_kappa_)) {
    throw DomainError("ExpansionFamily: member outside the parameter box");
  }
}

std::vector<FamilyMember> ExpansionFamily::corners() const {
  return {{0.0, 1.0}, {0.0, max_kappa_}, {max_delta_, 1.0},
          {max_delta_, max_kappa_}};
}

void GridSpec::validate() const {
  if (delta_points < 2 || kappa_points < 2 || z_points < 2) {
    throw DomainError("GridSpec: need at least two points per axis");
  }
  if (z_lo && z_hi && !(*z_lo < *z_hi)) {
    throw DomainError("GridSpec: z_lo must be below z_hi");
  }
}

std::vector<double> GridSpec::z_grid(const ContinuousDistribution& base) const {
  validate();
  const double lo = z_lo.value_or(base.quantile(1e-10));
  const double hi = z_hi.value_or(base.upper_quantile(1e-10));
  return axis(lo, hi, z_points);
}

double expansion_cdf(const ExpansionFamily& family, const FamilyMember& m,
                     double z) {
  const auto& base = family.base();
  return base.cdf(z) + 0.5 * m.delta * base.pdf_derivative(z, 1) +
         m.kappa * m.delta * m.delta / 24.0 * base.pdf_derivative(z, 3);
}

double expansion_sf(const ExpansionFamily& family, const FamilyMember& m,
                    double z) {
  const auto& base = family.base();
  return base.sf(z) - 0.5 * m.delta * base.pdf_derivative(z, 1) -
         m.kappa * m.delta * m.delta / 24.0 * base.pdf_derivative(z, 3);
}

double expansion_pdf(const ExpansionFamily& family, const FamilyMember& m,
                     double z) {
  const auto& base = family.base();
  return base.pdf(z) + 0.5 * m.delta * base.pdf_derivative(z, 2) +
         m.kappa * m.delta * m.delta / 24.0 * base.pdf_derivative(z, 4);
}

ExpansionMember::ExpansionMember(ExpansionFamily family, FamilyMember member)
    : family_(std::move(family)), member_(member) {
  family_.require_member(member_);
}

double ExpansionMember::cdf(double z) const {
  return expansion_cdf(family_, member_, z);
}
double ExpansionMember::sf(double z) const {
  return expansion_sf(family_, member_, z);
}
double ExpansionMember::pdf(double z) const {
  return expansion_pdf(family_, member_, z);
}

std::string ExpansionMember::describe() const {
  std::ostringstream os;
  os.precision(10);
  os << "expansion(delta=" << member_.delta << ",kappa=" << member_.kappa
     << ',' << family_.base().describe() << ')';
  return os.str();
}

ValidityReport validity_check(const ExpansionFamily& family,
                              const GridSpec& grid) {
  const std::vector<double> zs = grid.z_grid(family.base());
  ValidityReport report =
      scan_box(family, family.max_delta(), family.max_kappa(), grid, zs);
  if (report.valid) return report;

  const auto box_ok = [&](double d, double k) {
    return scan_box(family, d, k, grid, zs).valid;
  };
  for (double d : axis(0.0, family.max_delta(), grid.delta_points)) {
    if (!box_ok(d, family.max_kappa())) break;
    report.largest_valid_delta = d;
  }
  for (double k : axis(1.0, family.max_kappa(), grid.kappa_points)) {
    if (!box_ok(family.max_delta(), k)) break;
    report.largest_valid_kappa = k;
  }
  return report;
}

DeviationReport sup_density_deviation(const ExpansionFamily& family,
                                      const GridSpec& grid) {
  const auto& base = family.base();
  DeviationReport report;
  for (double z : grid.z_grid(base)) {
    const Derivatives d = derivatives(base, z);
    const double p = 0.5 * d.d2;
    const double q = d.d4 / 24.0;
    for (bool maximize : {true, false}) {
      const BoxPoint b =
          box_extremum(p, q, family.max_delta(), family.max_kappa(), maximize);
      if (std::fabs(b.value) > report.sup_deviation) {
        report.sup_deviation = std::fabs(b.value);
        report.at_z = z;
        report.at_member = b.member;
      }
    }
    report.c_stand_in = std::fmax(report.c_stand_in, std::fabs(d.d4));
  }
  report.quartic_bound = report.c_stand_in * family.max_kappa() / 12.0 *
                         family.max_delta() * family.max_delta();
  return report;
}

RiskReport member_cvar(const ExpansionFamily& family, const FamilyMember& member,
                       double alpha, const QuadratureConfig& cfg) {
  const ExpansionMember law(family, member);
  RiskReport report = cvar_quantile_integral(law, alpha, cfg);
  report.method = "member_cvar";
  report.inputs.emplace_back("delta", member.delta);
  report.inputs.emplace_back("kappa", member.kappa);
  return report;
}

UpperBoundReport capacity_upper_bound(const ExpansionFamily& family,
                                      double alpha, const GridSpec& grid,
                                      const QuadratureConfig& cfg) {
  grid.validate();
  const double max_delta = family.max_delta();
  const double max_kappa = family.max_kappa();

  UpperBoundReport out;
  RiskReport best;
  bool have_best = false;
  const auto better = [&](const RiskReport& r, const FamilyMember& m) {
    if (!have_best) return true;
    if (r.value != best.value) return r.value > best.value;
    if (m.delta != out.argmax.delta) return m.delta < out.argmax.delta;
    return m.kappa < out.argmax.kappa;
  };
  std::vector<FamilyMember> seen;
  const auto evaluate = [&](const FamilyMember& m) {
    for (const auto& s : seen) {
      if (s.delta == m.delta && s.kappa == m.kappa) return;
    }
    seen.push_back(m);
    RiskReport r = member_cvar(family, m, alpha, cfg);
    ++out.evaluations;
    if (better(r, m)) {
      best = std::move(r);
      out.argmax = m;
      have_best = true;
    }
  };

  const std::vector<double> deltas = axis(0.0, max_delta, grid.delta_points);
  const std::vector<double> kappas = axis(1.0, max_kappa, grid.kappa_points);
  for (double d : deltas) {
    for (double k : kappas) evaluate({d, k});
  }

  double step_delta = deltas.size() > 1 ? deltas[1] - deltas[0] : 0.0;
  double step_kappa = kappas.size() > 1 ? kappas[1] - kappas[0] : 0.0;
  for (int pass = 0; pass < 2; ++pass) {
    step_delta *= 0.5;
    step_kappa *= 0.5;
    const FamilyMember center = out.argmax;
    for (int i = -1; i <= 1; ++i) {
      for (int j = -1; j <= 1; ++j) {
        const double d = std::clamp(center.delta + i * step_delta, 0.0, max_delta);
        const double k = std::clamp(center.kappa + j * step_kappa, 1.0, max_kappa);
        evaluate({d, k});
      }
    }
  }

  out.report = std::move(best);
  out.report.method = "capacity_upper_bound";
  out.report.inputs = {{"Delta", max_delta},
                       {"K", max_kappa},
                       {"delta_star", out.argmax.delta},
                       {"kappa_star", out.argmax.kappa}};
  return out;
}

double envelope_cdf(const ExpansionFamily& family, double z) {
  const auto& base = family.base();
  const BoxPoint b = box_extremum(0.5 * base.pdf_derivative(z, 1),
                                  base.pdf_derivative(z, 3) / 24.0,
                                  family.max_delta(), family.max_kappa(), true);
  return base.cdf(z) + b.value;
}

double envelope_sf(const ExpansionFamily& family, double z) {
  const auto& base = family.base();
  const BoxPoint b = box_extremum(0.5 * base.pdf_derivative(z, 1),
                                  base.pdf_derivative(z, 3) / 24.0,
                                  family.max_delta(), family.max_kappa(), true);
  return base.sf(z) - b.value;
}

EnvelopeLaw::EnvelopeLaw(ExpansionFamily family) : family_(std::move(family)) {}

double EnvelopeLaw::pdf(double z) const {
  const auto& base = family_.base();
  const BoxPoint b = box_extremum(0.5 * base.pdf_derivative(z, 1),
                                  base.pdf_derivative(z, 3) / 24.0,
                                  family_.max_delta(), family_.max_kappa(), true);
  return expansion_pdf(family_, b.member, z);
}

RiskReport envelope_cvar(const ExpansionFamily& family, double alpha,
                         const QuadratureConfig& cfg) {
  const EnvelopeLaw law(family);
  RiskReport report = cvar_quantile_integral(law, alpha, cfg);
  report.method = "envelope_cvar";
  report.inputs.emplace_back("Delta", family.max_delta());
  report.inputs.emplace_back("K", family.max_kappa());
  return report;
}

double noise_kurtosis(NoiseShape shape) {
  switch (shape) {
    case NoiseShape::kGaussian:
      return 3.0;
    case NoiseShape::kUniform:
      return 9.0 / 5.0;
    case NoiseShape::kRademacherSmoothed:
      return 15.0 / 8.0;
  }
  throw DomainError("noise_kurtosis: unknown shape");
}

NoiseShape parse_noise_shape(const std::string& name) {
  if (name == "gaussian" || name == "normal") return NoiseShape::kGaussian;
  if (name == "uniform") return NoiseShape::kUniform;
  if (name == "rademacher-smoothed") return NoiseShape::kRademacherSmoothed;
  throw DomainError("unknown noise law '" + name + "'");
}

double contaminated_normal_cdf(const NormalLaw& base, NoiseShape shape,
                               double delta, double z) {
  if (!(delta >= 0.0)) throw DomainError("contaminated_normal_cdf: delta < 0");
  const double mu = base.mu();
  const double sigma = base.sigma();
  if (delta == 0.0) return base.cdf(z);
  switch (shape) {
    case NoiseShape::kGaussian:
      return normal_cdf((z - mu) / std::sqrt(sigma * sigma + delta));
    case NoiseShape::kUniform: {
      // (1/2c) int_{-c}^{c} Phi((z - mu - w)/sigma) dw, int Phi = x Phi + phi
      const double c = std::sqrt(3.0 * delta);
      const auto antiderivative = [](double x) {
        return x * normal_cdf(x) + normal_pdf(x);
      };
      return sigma / (2.0 * c) *
             (antiderivative((z - mu + c) / sigma) -
              antiderivative((z - mu - c) / sigma));
    }
    case NoiseShape::kRademacherSmoothed: {
      const double a = std::sqrt(0.75 * delta);
      const double s = std::sqrt(sigma * sigma + 0.25 * delta);
      return 0.5 * (normal_cdf((z - mu - a) / s) + normal_cdf((z - mu + a) / s));
    }
  }
  throw DomainError("contaminated_normal_cdf: unknown shape");
}

std::vector<ExpansionErrorRow> lemma_expansion_error(
    const NormalLaw& base, NoiseShape shape, std::span<const double> deltas,
    std::span<const double> z_set) {
  const double kappa = noise_kurtosis(shape);
  const auto base_ptr = std::make_shared<NormalLaw>(base);
  std::vector<ExpansionErrorRow> rows;
  for (double delta : deltas) {
    const ExpansionFamily family(base_ptr, delta, kappa);
    ExpansionErrorRow row{delta, 0.0, z_set.empty() ? 0.0 : z_set.front()};
    for (double z : z_set) {
      const double err =
          std::fabs(expansion_cdf(family, {delta, kappa}, z) -
                    contaminated_normal_cdf(base, shape, delta, z));
      if (err > row.max_abs_error) {
        row.max_abs_error = err;
        row.at_z = z;
      }
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace shortfall
