#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

namespace shortfall {

/// A computed risk value with enough context to audit or tabulate it.
struct RiskReport {
  double value = 0.0;
  std::string method;
  double alpha = 0.0;
  // parameter echo, in insertion order
  std::vector<std::pair<std::string, double>> inputs;
  double tolerance_used = 0.0;
  double error_estimate = 0.0;

  // Second, independently computed value of the same quantity, if any.
  std::optional<double> cross_check;
  std::string cross_check_method;
  bool diverged = false;

  std::vector<std::string> warnings;

  /// Throws NumericError when value is not finite.
  void require_finite() const;

  /// Stores `other` as the cross-check and sets `diverged` when the two
  /// differ by more than `tolerance`.
  void attach_cross_check(double other, std::string other_method,
                          double tolerance);

  std::optional<double> input(const std::string& key) const;
};

nlohmann::json to_json(const RiskReport& report);

/// Flat CSV record: value,method,alpha,tolerance_used.
std::string csv_header();
std::string to_csv_row(const RiskReport& report);

}  // namespace shortfall
