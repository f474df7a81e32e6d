#include "shortfall/report.hpp"

#include <cmath>
#include <cstdio>

#include "shortfall/errors.hpp"

namespace shortfall {

void RiskReport::require_finite() const {
  if (!std::isfinite(value)) {
    throw NumericError(method + ": risk value is not finite", value, value,
                       value, error_estimate);
  }
}

void RiskReport::attach_cross_check(double other, std::string other_method,
                                    double tolerance) {
  cross_check = other;
  cross_check_method = std::move(other_method);
  diverged = !(std::fabs(other - value) <= tolerance);
  if (diverged) {
    warnings.push_back(method + " and " + cross_check_method +
                       " disagree beyond tolerance");
  }
}

std::optional<double> RiskReport::input(const std::string& key) const {
  for (const auto& [k, v] : inputs) {
    if (k == key) return v;
  }
  return std::nullopt;
}

nlohmann::json to_json(const RiskReport& report) {
  nlohmann::json j;
  j["value"] = report.value;
  j["method"] = report.method;
  j["alpha"] = report.alpha;
  j["tolerance_used"] = report.tolerance_used;
  j["error_estimate"] = report.error_estimate;
  auto inputs = nlohmann::json::object();
  for (const auto& [k, v] : report.inputs) inputs[k] = v;
  j["inputs"] = inputs;
  if (report.cross_check) {
    j["cross_check"] = *report.cross_check;
    j["cross_check_method"] = report.cross_check_method;
    j["diverged"] = report.diverged;
  }
  if (!report.warnings.empty()) j["warnings"] = report.warnings;
  return j;
}

std::string csv_header() { return "value,method,alpha,tolerance_used"; }

std::string to_csv_row(const RiskReport& report) {
  char buf[128];
  std::snprintf(buf, sizeof buf, "%.17g", report.value);
  std::string row = buf;
  row += ',' + report.method + ',';
  std::snprintf(buf, sizeof buf, "%.17g,%.17g", report.alpha,
                report.tolerance_used);
  return row + buf;
}

}  // namespace shortfall
