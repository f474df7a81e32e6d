#include "shortfall/cli.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <limits>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "shortfall/choquet.hpp"
#include "shortfall/distributions.hpp"
#include "shortfall/empirical.hpp"
#include "shortfall/heavy_tail.hpp"
#include "shortfall/measurement_error.hpp"
#include "shortfall/montecarlo.hpp"

namespace shortfall {
namespace {

using nlohmann::json;

std::string trim(std::string s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

// strtod rather than from_chars so that "inf" parses.
std::optional<double> parse_number(const std::string& text) {
  if (text.empty()) return std::nullopt;
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (end != text.c_str() + text.size() || errno == ERANGE) return std::nullopt;
  if (std::isnan(v)) return std::nullopt;
  return v;
}

std::vector<double> parse_list(const std::vector<std::string>& items,
                               const char* flag) {
  std::vector<double> out;
  for (const auto& item : items) {
    const auto v = parse_number(trim(item));
    if (!v) throw DomainError(std::string(flag) + ": not a number: '" + item + "'");
    out.push_back(*v);
  }
  if (out.empty()) throw DomainError(std::string(flag) + ": empty list");
  return out;
}

std::string format_number(double v, int digits) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

std::string column_label(const std::string& prefix, double v) {
  if (std::isinf(v)) return prefix + "inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%g", v);
  return prefix + buf;
}

// Cells are JSON values so one table drives every output format.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<json>> rows;
  std::optional<json> json_view;  // replaces the row objects when set
};

std::string cell_text(const json& cell, int digits) {
  if (cell.is_null()) return "";
  if (cell.is_number_float()) return format_number(cell.get<double>(), digits);
  if (cell.is_number()) return cell.dump();
  if (cell.is_string()) return cell.get<std::string>();
  return cell.dump();
}

// Non-finite doubles have no JSON literal; write them as strings.
json json_number(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

std::string render(const Table& table, const std::string& format, int digits) {
  std::ostringstream os;
  if (format == "json") {
    if (table.json_view) {
      os << table.json_view->dump(2) << '\n';
      return os.str();
    }
    json rows = json::array();
    for (const auto& row : table.rows) {
      json obj = json::object();
      for (std::size_t c = 0; c < table.columns.size(); ++c) {
        const json& cell = row[c];
        obj[table.columns[c]] =
            cell.is_number_float() ? json_number(cell.get<double>()) : cell;
      }
      rows.push_back(std::move(obj));
    }
    os << rows.dump(2) << '\n';
    return os.str();
  }
  if (format == "markdown") {
    os << '|';
    for (const auto& c : table.columns) os << ' ' << c << " |";
    os << "\n|";
    for (std::size_t c = 0; c < table.columns.size(); ++c) os << "---|";
    os << '\n';
    for (const auto& row : table.rows) {
      os << '|';
      for (const auto& cell : row) os << ' ' << cell_text(cell, digits) << " |";
      os << '\n';
    }
    return os.str();
  }
  for (std::size_t c = 0; c < table.columns.size(); ++c) {
    os << (c ? "," : "") << table.columns[c];
  }
  os << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      os << (c ? "," : "") << cell_text(row[c], digits);
    }
    os << '\n';
  }
  return os.str();
}

struct AlphaFlags {
  std::optional<double> alpha;
  std::optional<double> tail_mass;

  void attach(CLI::App* cmd) {
    auto* a = cmd->add_option("--alpha", alpha, "confidence level in [0, 1)");
    auto* t = cmd->add_option("--tail-mass", tail_mass,
                              "tail probability 1 - alpha in (0, 1]");
    a->excludes(t);
  }

  double resolve(std::optional<double> fallback_tail_mass) const {
    if (alpha) {
      if (!(*alpha >= 0.0 && *alpha < 1.0)) {
        throw DomainError("--alpha must lie in [0, 1)");
      }
      return *alpha;
    }
    if (tail_mass) {
      if (!(*tail_mass > 0.0 && *tail_mass <= 1.0)) {
        throw DomainError("--tail-mass must lie in (0, 1]");
      }
      return 1.0 - *tail_mass;
    }
    if (fallback_tail_mass) return 1.0 - *fallback_tail_mass;
    throw CLI::RequiredError("one of --alpha or --tail-mass");
  }
};

struct LawFlags {
  std::string name = "normal";
  double mu = 0.0;
  double sigma = 1.0;
  int df = 1;
  double lower = 0.0;
  double upper = 1.0;

  void attach(CLI::App* cmd, const std::string& flag) {
    cmd->add_option(flag, name, "normal | chi2 | uniform")
        ->check(CLI::IsMember({"normal", "chi2", "uniform"}))
        ->capture_default_str();
    cmd->add_option("--mu", mu, "normal mean")->capture_default_str();
    cmd->add_option("--sigma", sigma, "normal standard deviation")
        ->capture_default_str();
    cmd->add_option("--df", df, "chi-square degrees of freedom")
        ->capture_default_str();
    cmd->add_option("--lower", lower, "uniform lower end")->capture_default_str();
    cmd->add_option("--upper", upper, "uniform upper end")->capture_default_str();
  }

  DistributionPtr make() const {
    if (name == "chi2") return std::make_shared<ChiSquareLaw>(df);
    if (name == "uniform") return std::make_shared<UniformLaw>(lower, upper);
    return std::make_shared<NormalLaw>(mu, sigma);
  }
};

json report_json(const RiskReport& r) { return to_json(r); }

Table report_table(const std::vector<RiskReport>& reports) {
  Table t;
  t.columns = {"value", "method", "alpha", "tolerance_used", "error_estimate"};
  json view = json::array();
  for (const auto& r : reports) {
    t.rows.push_back({r.value, r.method, r.alpha, r.tolerance_used,
                      r.error_estimate});
    view.push_back(report_json(r));
  }
  t.json_view = reports.size() == 1 ? view[0] : view;
  return t;
}

void emit_warnings(const std::vector<RiskReport>& reports, std::ostream& err) {
  for (const auto& r : reports) {
    for (const auto& w : r.warnings) err << "warning: " << r.method << ": " << w << '\n';
    if (r.diverged) {
      err << "warning: " << r.method << " differs from " << r.cross_check_method
          << " (" << format_number(*r.cross_check, 10) << ")\n";
    }
  }
}

}  // namespace

std::vector<double> read_loss_csv(std::istream& in, bool strict) {
  std::vector<double> losses;
  std::string raw;
  std::size_t line = 0;
  bool seen_first = false;
  while (std::getline(in, raw)) {
    ++line;
    const std::string text = trim(raw);
    if (text.empty()) continue;
    if (!seen_first) {
      seen_first = true;
      if (text == "loss") continue;
      if (strict) throw InputError("line " + std::to_string(line) +
                                       ": expected header 'loss'", line);
    }
    if (text.find(',') != std::string::npos) {
      throw InputError("line " + std::to_string(line) +
                           ": expected a single column", line);
    }
    const auto v = parse_number(text);
    if (!v || !std::isfinite(*v)) {
      throw InputError("line " + std::to_string(line) +
                           ": not a finite number: '" + text + "'", line);
    }
    losses.push_back(*v);
  }
  if (losses.empty()) throw InputError("input holds no losses", line);
  return losses;
}

std::vector<double> read_loss_file(const std::string& path, bool strict) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read '" + path + "'", 0);
  try {
    return read_loss_csv(in, strict);
  } catch (const InputError& e) {
    throw InputError(path + ": " + e.what(), e.line());
  }
}

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"Expected shortfall under measurement error and heavy tails",
               "shortfall"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string format;
  bool markdown = false;
  int digits = 4;
  QuadratureConfig qcfg;
  auto* format_opt = app.add_option("--format", format, "csv | markdown | json")
                         ->check(CLI::IsMember({"csv", "markdown", "json"}));
  app.add_flag("--markdown", markdown, "same as --format markdown")
      ->excludes(format_opt);
  app.add_option("--digits", digits, "significant digits in csv/markdown")
      ->check(CLI::Range(1, 17))
      ->capture_default_str();
  app.add_option("--rel-tol", qcfg.rel_tol, "quadrature relative tolerance")
      ->capture_default_str();
  app.add_option("--abs-tol", qcfg.abs_tol, "quadrature absolute tolerance")
      ->capture_default_str();

  // table1
  auto* t1 = app.add_subcommand("table1", "worst-case CVaR over the error box");
  AlphaFlags t1_alpha;
  t1_alpha.attach(t1);
  std::vector<std::string> t1_deltas{"0", "0.05", "0.1", "0.15", "0.2"};
  std::vector<std::string> t1_kappas{"1", "1.1", "1.2"};
  GridSpec t1_grid;
  t1->add_option("--deltas", t1_deltas, "Delta values")->delimiter(',');
  t1->add_option("--kappas", t1_kappas, "K values")->delimiter(',');
  t1->add_option("--delta-points", t1_grid.delta_points)->capture_default_str();
  t1->add_option("--kappa-points", t1_grid.kappa_points)->capture_default_str();

  // table2
  auto* t2 = app.add_subcommand("table2", "CVaR of chi-square with Pareto tail");
  std::vector<std::string> t2_alphas{"0.9", "0.95", "0.99"};
  std::vector<std::string> t2_gammas{"2", "3", "4", "5", "inf"};
  int t2_df = 1;
  std::string t2_method = "closed-form";
  t2->add_option("--alphas", t2_alphas)->delimiter(',');
  t2->add_option("--gammas", t2_gammas)->delimiter(',');
  t2->add_option("--df", t2_df, "base chi-square degrees of freedom")
      ->capture_default_str();
  t2->add_option("--method", t2_method, "closed-form | direct")
      ->check(CLI::IsMember({"closed-form", "direct"}))
      ->capture_default_str();

  // table3
  auto* t3 = app.add_subcommand("table3", "CVaR of a Huber-contaminated model");
  AlphaFlags t3_alpha;
  t3_alpha.attach(t3);
  std::vector<std::string> t3_eps{"0", "0.01", "0.1", "0.2", "0.3"};
  std::vector<std::string> t3_gammas{"1.5", "2", "3", "5", "inf"};
  int t3_df = 1;
  std::string t3_method = "closed-form";
  t3->add_option("--epsilons", t3_eps)->delimiter(',');
  t3->add_option("--gammas", t3_gammas)->delimiter(',');
  t3->add_option("--df", t3_df)->capture_default_str();
  t3->add_option("--method", t3_method, "closed-form | direct")
      ->check(CLI::IsMember({"closed-form", "direct"}))
      ->capture_default_str();

  // estimate
  auto* est = app.add_subcommand("estimate", "empirical CVaR of loss data");
  AlphaFlags est_alpha;
  est_alpha.attach(est);
  std::string input_path;
  bool strict = false;
  bool literal = false;
  est->add_option("--input", input_path, "CSV with one column 'loss'")->required();
  est->add_flag("--strict", strict, "require the 'loss' header");
  est->add_flag("--literal", literal, "sum from the m-th order statistic");

  // choquet
  auto* cq = app.add_subcommand("choquet", "Choquet expected loss of a law");
  AlphaFlags cq_alpha;
  cq_alpha.attach(cq);
  LawFlags cq_law;
  cq_law.attach(cq, "--law");
  std::string distortion = "cvar";
  cq->add_option("--distortion", distortion, "cvar | identity")
      ->check(CLI::IsMember({"cvar", "identity"}))
      ->capture_default_str();

  // simulate
  auto* sim = app.add_subcommand("simulate", "empirical CVaR under added noise");
  AlphaFlags sim_alpha;
  sim_alpha.attach(sim);
  LawFlags sim_law;
  sim_law.attach(sim, "--x-law");
  std::string v_law = "gaussian";
  std::vector<std::string> sim_deltas{"0", "0.05", "0.1", "0.15", "0.2"};
  std::size_t sim_n = 10000;
  std::uint64_t seed = 1;
  int replicates = 1;
  sim->add_option("--v-law", v_law, "gaussian | uniform | rademacher-smoothed")
      ->capture_default_str();
  sim->add_option("--deltas", sim_deltas)->delimiter(',');
  sim->add_option("--n", sim_n, "sample size")->capture_default_str();
  sim->add_option("--seed", seed)->capture_default_str();
  sim->add_option("--replicates", replicates)->capture_default_str();

  std::vector<std::string> argv_store{"shortfall"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& a : argv_store) argv.push_back(a.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  if (markdown) format = "markdown";
  if (format.empty()) {
    const char* env = std::getenv(kFormatEnv);
    format = env ? env : "csv";
    if (format != "csv" && format != "markdown" && format != "json") {
      err << kFormatEnv << ": unknown format '" << format << "'\n";
      return kExitUsage;
    }
  }

  try {
    qcfg.validate();
    Table table;
    if (*t1) {
      const double alpha = t1_alpha.resolve(0.04);
      const auto deltas = parse_list(t1_deltas, "--deltas");
      const auto kappas = parse_list(t1_kappas, "--kappas");
      t1_grid.validate();
      auto base = std::make_shared<NormalLaw>(0.0, 1.0);
      table.columns.push_back("Delta");
      for (double k : kappas) table.columns.push_back(column_label("K_", k));
      for (double d : deltas) {
        std::vector<json> row{d};
        for (double k : kappas) {
          const ExpansionFamily family(base, d, k);
          row.emplace_back(
              capacity_upper_bound(family, alpha, t1_grid, qcfg).report.value);
        }
        table.rows.push_back(std::move(row));
      }
    } else if (*t2) {
      const auto alphas = parse_list(t2_alphas, "--alphas");
      const auto gammas = parse_list(t2_gammas, "--gammas");
      auto base = std::make_shared<ChiSquareLaw>(t2_df);
      table.columns = {"alpha", "tau", "cvar_f0"};
      for (double g : gammas) table.columns.push_back(column_label("gamma_", g));
      for (double a : alphas) {
        std::vector<json> row{a, base->quantile(a),
                              cvar_quantile_integral(*base, a, qcfg).value};
        for (double g : gammas) {
          const SplicedParetoModel model(base, g, a);
          row.emplace_back(t2_method == "direct"
                               ? direct_spliced_cvar(model, qcfg).value
                               : theorem2_cvar(model, qcfg).value);
        }
        table.rows.push_back(std::move(row));
      }
    } else if (*t3) {
      const double alpha = t3_alpha.resolve(0.04);
      const auto eps = parse_list(t3_eps, "--epsilons");
      const auto gammas = parse_list(t3_gammas, "--gammas");
      auto base = std::make_shared<ChiSquareLaw>(t3_df);
      table.columns = {"epsilon"};
      for (double g : gammas) table.columns.push_back(column_label("gamma_", g));
      for (double e : eps) {
        std::vector<json> row{e};
        for (double g : gammas) {
          const HuberMixtureModel model(SplicedParetoModel(base, g, alpha), e);
          row.emplace_back(t3_method == "direct"
                               ? direct_mixture_cvar(model, qcfg).value
                               : theorem3_cvar(model, qcfg).value);
        }
        table.rows.push_back(std::move(row));
      }
    } else if (*est) {
      const double alpha = est_alpha.resolve(std::nullopt);
      const EmpiricalSample sample(read_loss_file(input_path, strict));
      const std::vector<RiskReport> reports{empirical_cvar(
          sample, alpha,
          literal ? EstimatorMode::kLiteral : EstimatorMode::kTopMean)};
      emit_warnings(reports, err);
      table = report_table(reports);
    } else if (*cq) {
      const auto law = cq_law.make();
      std::vector<RiskReport> reports;
      if (distortion == "identity") {
        reports.push_back(choquet_expected_loss(*law, IdentityDistortion{}, qcfg));
      } else {
        const double alpha = cq_alpha.resolve(std::nullopt);
        reports.push_back(choquet_expected_loss(*law, CvarDistortion(alpha), qcfg));
        reports.push_back(cvar_quantile_integral(*law, alpha, qcfg));
      }
      emit_warnings(reports, err);
      table = report_table(reports);
    } else if (*sim) {
      const double alpha = sim_alpha.resolve(0.04);
      const auto deltas = parse_list(sim_deltas, "--deltas");
      const auto rows =
          error_sensitivity_sweep(sim_law.make(), make_noise_law(parse_noise_shape(v_law)),
                                  deltas, alpha, sim_n, seed, replicates, qcfg);
      table.columns = {"delta", "replicate", "seed", "empirical_cvar",
                       "expansion_cvar"};
      for (const auto& r : rows) {
        table.rows.push_back({r.delta, r.replicate, r.seed, r.empirical_cvar,
                              r.expansion_cvar ? json(*r.expansion_cvar) : json()});
      }
    }
    out << render(table, format, digits);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << '\n';
    return kExitUsage;
  } catch (const InputError& e) {
    err << "input error: " << e.what() << '\n';
    return kExitDomain;
  } catch (const DomainError& e) {
    err << "domain error: " << e.what() << '\n';
    return kExitDomain;
  } catch (const NumericError& e) {
    err << "numeric error: " << e.what() << " (bracket [" << e.lower() << ", "
        << e.upper() << "], estimate " << e.estimate() << " +- " << e.error()
        << ")\n";
    return kExitNumeric;
  }
}

}  // namespace shortfall
