#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "shortfall/errors.hpp"

namespace shortfall {

inline constexpr int kExitOk = 0;
inline constexpr int kExitDomain = 2;
inline constexpr int kExitNumeric = 3;
inline constexpr int kExitUsage = 64;

/// Environment variable consulted for the default output format.
inline constexpr const char* kFormatEnv = "SHORTFALL_FORMAT";

/// Unreadable or malformed input; `line` is 1-based, 0 when not tied to a line.
class InputError : public DomainError {
 public:
  InputError(const std::string& what, std::size_t line)
      : DomainError(what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Reads a single-column loss file. A header line `loss` is optional unless
/// `strict`; blank lines are skipped and CRLF endings are accepted.
std::vector<double> read_loss_csv(std::istream& in, bool strict);
std::vector<double> read_loss_file(const std::string& path, bool strict);

/// Runs one command. `args` excludes the program name. Everything is written
/// to `out` at the end; diagnostics go to `err`. Returns an exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

}  // namespace shortfall
