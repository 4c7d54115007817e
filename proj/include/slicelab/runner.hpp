#pragma once

// Experiment runner behind the slicelab command line tool: config
// resolution, dispatch to the library, JSON/CSV reports and exit codes.

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "census.hpp"
#include "constructions.hpp"
#include "errors.hpp"
#include "ff.hpp"
#include "stats.hpp"
#include "variety.hpp"

namespace slicelab {

inline constexpr const char* kVersion = "0.1.0";

enum ExitCode : int {
  kExitOk = 0,
  kExitAssertionFailed = 1,
  kExitConfigError = 2,
  kExitUnknownVariety = 3,
  kExitBudgetExceeded = 4,
  kExitPrecondition = 5,
  kExitInternal = 6,
};

inline const char* exit_code_help() {
  return "Exit codes:\n"
         "  0  all checks passed\n"
         "  1  a checked identity or bound failed\n"
         "  2  invalid configuration or unreadable input\n"
         "  3  unknown catalog entry / variety file not found\n"
         "  4  enumeration budget exceeded (raise --budget or GSL_BUDGET, or use `sample`)\n"
         "  5  classifier or operation precondition violated (e.g. quadric-exact in characteristic 2)\n"
         "  6  internal error\n";
}

inline const std::vector<std::string>& known_commands() {
  static const std::vector<std::string> cmds{"verify-lemma", "census", "scaling", "sharpness", "sample", "count"};
  return cmds;
}

struct ExperimentConfig {
  std::string command;
  std::string variety;
  std::vector<std::string> fields;
  std::optional<int> k;
  std::string classifier = "quadric-exact";
  std::vector<unsigned> ext_degrees{1, 2};
  std::uint64_t samples = 2000;
  std::optional<std::uint64_t> seed;
  /// Output directory; empty writes the JSON report to stdout.
  std::string output;
  std::uint64_t budget = 100'000'000;
  unsigned workers = 0;
};

/// The parts of the config that determine the results. Output location and
/// worker count are left out so reports compare equal across them.
inline nlohmann::json to_json(const ExperimentConfig& c) {
  nlohmann::json j = {{"command", c.command},   {"variety", c.variety},         {"fields", c.fields},
                      {"classifier", c.classifier}, {"ext_degrees", c.ext_degrees}, {"samples", c.samples},
                      {"budget", c.budget}};
  j["k"] = c.k ? nlohmann::json(*c.k) : nlohmann::json(nullptr);
  j["seed"] = c.seed ? nlohmann::json(*c.seed) : nlohmann::json(nullptr);
  return j;
}

inline std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : s) {
    if (ch == ',') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else if (ch != ' ') {
      cur.push_back(ch);
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

/// Reads a JSON config file; keys mirror the command line flags.
inline ExperimentConfig config_from_json(const nlohmann::json& j) {
  ExperimentConfig c;
  try {
    if (j.contains("command")) c.command = j.at("command").get<std::string>();
    if (j.contains("variety")) c.variety = j.at("variety").get<std::string>();
    if (j.contains("fields")) {
      if (j.at("fields").is_string()) c.fields = split_list(j.at("fields").get<std::string>());
      else
        for (const auto& f : j.at("fields")) c.fields.push_back(f.is_string() ? f.get<std::string>() : std::to_string(f.get<std::uint64_t>()));
    }
    if (j.contains("field")) c.fields = {j.at("field").is_string() ? j.at("field").get<std::string>() : std::to_string(j.at("field").get<std::uint64_t>())};
    if (j.contains("k") && !j.at("k").is_null()) c.k = j.at("k").get<int>();
    if (j.contains("classifier")) c.classifier = j.at("classifier").get<std::string>();
    if (j.contains("ext_degrees")) c.ext_degrees = j.at("ext_degrees").get<std::vector<unsigned>>();
    if (j.contains("samples")) c.samples = j.at("samples").get<std::uint64_t>();
    if (j.contains("seed") && !j.at("seed").is_null()) c.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("output")) c.output = j.at("output").get<std::string>();
    if (j.contains("budget")) c.budget = j.at("budget").get<std::uint64_t>();
    if (j.contains("workers")) c.workers = j.at("workers").get<unsigned>();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("bad config: ") + e.what());
  }
  return c;
}

/// GSL_BUDGET, when set, replaces the configured budget.
inline void apply_environment(ExperimentConfig& c) {
  if (const char* env = std::getenv("GSL_BUDGET")) {
    c.budget = parse_u64(env, "GSL_BUDGET value");
  }
}

inline void validate(const ExperimentConfig& c) {
  if (std::find(known_commands().begin(), known_commands().end(), c.command) == known_commands().end())
    throw ParseError("unknown command '" + c.command + "'");
  if (c.variety.empty()) throw ParseError("no variety given");
  if (c.budget == 0) throw ParseError("budget must be positive");
  if (c.command == "sample" && !c.seed) throw ParseError("the sample command needs --seed");
  if (c.command != "verify-lemma" && c.command != "count" && !c.k) throw ParseError("the " + c.command + " command needs --k");
  if (c.k && *c.k < 1) throw ParseError("k must be >= 1");
  parse_classifier(c.classifier);
}

/// Catalog name first, then a variety file path.
inline ProjectiveVariety resolve_variety(const std::string& name, const Field& F) {
  for (const auto& e : standard_catalog())
    if (e.name == name) return e.instantiate(F);
  if (std::filesystem::exists(name)) return instantiate(load_variety_file(name), F);
  find_catalog_entry(name);  // throws with the list of known names
  throw UnknownCatalogEntry(name);
}

struct RunOutcome {
  int exit_code = kExitOk;
  nlohmann::json report;
  std::string csv;  // empty when the command has no tabular output
  std::string error;
};

inline std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

namespace detail {

inline CensusOptions census_options(const ExperimentConfig& c) {
  CensusOptions o;
  o.classifier = parse_classifier(c.classifier);
  o.ext_degrees = c.ext_degrees;
  return o;
}

inline ExecOptions exec_options(const ExperimentConfig& c) { return ExecOptions{c.workers, c.budget}; }

inline bool run_verify_lemma(const ExperimentConfig& c, nlohmann::json& results) {
  bool ok = true;
  for (const auto& fname : c.fields) {
    const Field F = Field::parse(fname);
    const ProjectiveVariety X = resolve_variety(c.variety, F);
    std::vector<int> ks;
    if (c.k) ks.push_back(*c.k);
    else
      for (int k = 1; k <= X.n - 1; ++k) ks.push_back(k);
    for (int k : ks) {
      if (!c.k && slice_scan_cost(X.n, k, F.order()) > c.budget) {
        results.push_back({{"field", F.name()}, {"k", k}, {"skipped", "budget"}});
        continue;
      }
      const auto rep = verify_lemma(X, k, exec_options(c), c.variety);
      ok = ok && rep.passed();
      results.push_back(to_json(rep));
    }
  }
  return ok;
}

inline bool run_census(const ExperimentConfig& c, nlohmann::json& results, std::string& csv, std::vector<std::pair<std::uint64_t, std::uint64_t>>* counts) {
  bool ok = true;
  csv = census_csv_header() + "\n";
  for (const auto& fname : c.fields) {
    const Field F = Field::parse(fname);
    const ProjectiveVariety X = resolve_variety(c.variety, F);
    const auto census = full_census(X, *c.k, census_options(c), exec_options(c));
    const auto cheb = chebyshev_check(census);
    ok = ok && cheb.passed;
    auto j = to_json(census);
    j["chebyshev"] = to_json(cheb);
    results.push_back(j);
    csv += census_csv_row(census) + "\n";
    if (counts) counts->emplace_back(census.q, census.very_bad_count);
  }
  return ok;
}

inline bool run_sharpness_cmd(const ExperimentConfig& c, nlohmann::json& results) {
  const auto& entry = find_catalog_entry(c.variety);
  if (!entry.cone) throw PreconditionError("sharpness needs a cone from the catalog, '" + c.variety + "' is not one");
  bool ok = true;
  for (const auto& fname : c.fields) {
    const Field F = Field::parse(fname);
    const auto res = run_sharpness(*entry.cone, *c.k, F, census_options(c));
    const auto census = full_census(entry.instantiate(F), *c.k, census_options(c), exec_options(c));
    ok = ok && res.unique_parent && res.witnesses_bad;
    auto j = to_json(res);
    j["census_very_bad"] = census.very_bad_count;
    j["census_total"] = census.total;
    results.push_back(j);
  }
  return ok;
}

inline void run_sample(const ExperimentConfig& c, nlohmann::json& results) {
  for (const auto& fname : c.fields) {
    const Field F = Field::parse(fname);
    const ProjectiveVariety X = resolve_variety(c.variety, F);
    auto j = to_json(monte_carlo_census(X, *c.k, census_options(c), c.samples, *c.seed, exec_options(c)));
    j["field"] = F.name();
    j["k"] = *c.k;
    results.push_back(j);
  }
}

inline void run_count(const ExperimentConfig& c, nlohmann::json& results) {
  for (const auto& fname : c.fields) {
    const Field F = Field::parse(fname);
    const ProjectiveVariety X = resolve_variety(c.variety, F);
    const auto est = estimate_components(X, c.ext_degrees, Rational(1, 4), c.budget);
    nlohmann::json counts = nlohmann::json::array();
    for (const auto& e : est.counts)
      counts.push_back({{"degree", e.degree}, {"points", e.points}, {"ratio", rational_json(e.ratio)}, {"residual", rational_json(e.residual)}});
    results.push_back({{"field", F.name()},
                       {"n", X.n},
                       {"r", X.declared_dim},
                       {"counts", counts},
                       {"a_est", est.a_est.str()},
                       {"g_est", est.g_est.str()},
                       {"inconclusive", est.inconclusive},
                       {"dimension_warning", est.dimension_warning}});
  }
}

}  // namespace detail

/// A variety file supplies its own p when no field is configured.
inline void default_fields(ExperimentConfig& c) {
  if (!c.fields.empty()) return;
  bool catalog = false;
  for (const auto& e : standard_catalog()) catalog = catalog || e.name == c.variety;
  if (!catalog && std::filesystem::exists(c.variety)) c.fields = {std::to_string(load_variety_file(c.variety).p)};
  if (c.fields.empty()) throw ParseError("no field given");
}

/// Runs one experiment. Never throws: failures become exit codes with the
/// message in RunOutcome::error.
inline RunOutcome run(ExperimentConfig config) {
  RunOutcome out;
  try {
    apply_environment(config);
    validate(config);
    default_fields(config);
    nlohmann::json results = nlohmann::json::array();
    bool ok = true;
    const std::string& cmd = config.command;
    if (cmd == "verify-lemma") {
      ok = detail::run_verify_lemma(config, results);
    } else if (cmd == "census") {
      ok = detail::run_census(config, results, out.csv, nullptr);
    } else if (cmd == "scaling") {
      std::vector<std::pair<std::uint64_t, std::uint64_t>> counts;
      nlohmann::json censuses = nlohmann::json::array();
      ok = detail::run_census(config, censuses, out.csv, &counts);
      const Field F0 = Field::parse(config.fields.front());
      const ProjectiveVariety X0 = resolve_variety(config.variety, F0);
      const auto fit = scaling_fit(counts, predicted_exponent(X0.n, *config.k, X0.declared_dim));
      results = {{"censuses", censuses}, {"fit", to_json(fit)}};
    } else if (cmd == "sharpness") {
      ok = detail::run_sharpness_cmd(config, results);
    } else if (cmd == "sample") {
      detail::run_sample(config, results);
    } else if (cmd == "count") {
      detail::run_count(config, results);
    }
    out.report = {{"schema", "slicelab." + cmd + "/1"},
                  {"version", kVersion},
                  {"timestamp", utc_timestamp()},
                  {"config", to_json(config)},
                  {"results", results},
                  {"passed", ok}};
    out.exit_code = ok ? kExitOk : kExitAssertionFailed;
  } catch (const UnknownCatalogEntry& e) {
    out.exit_code = kExitUnknownVariety;
    out.error = e.what();
  } catch (const BudgetExceeded& e) {
    out.exit_code = kExitBudgetExceeded;
    out.error = e.what();
  } catch (const PreconditionError& e) {
    out.exit_code = kExitPrecondition;
    out.error = e.what();
  } catch (const ParseError& e) {
    out.exit_code = kExitConfigError;
    out.error = e.what();
  } catch (const std::exception& e) {
    out.exit_code = kExitInternal;
    out.error = e.what();
  }
  if (out.exit_code != kExitOk && out.exit_code != kExitAssertionFailed) {
    out.report = {{"schema", "slicelab.error/1"}, {"version", kVersion}, {"timestamp", utc_timestamp()}, {"config", to_json(config)},
                  {"error", out.error},           {"exit_code", out.exit_code}};
  }
  return out;
}

/// Writes <dir>/<command>.json (and .csv when present), or prints the JSON
/// report to stdout when no output directory is configured. Error reports
/// are only written to a directory.
inline void write_outputs(const ExperimentConfig& config, const RunOutcome& out, std::ostream& stdout_stream = std::cout) {
  const std::string text = out.report.dump(2) + "\n";
  if (config.output.empty()) {
    if (out.report.contains("error")) return;  // already on stderr
    stdout_stream << text;
    return;
  }
  std::filesystem::create_directories(config.output);
  const std::string stem = config.command.empty() ? "report" : config.command;
  std::ofstream(std::filesystem::path(config.output) / (stem + ".json")) << text;
  if (!out.csv.empty()) std::ofstream(std::filesystem::path(config.output) / (stem + ".csv")) << out.csv;
}

}  // namespace slicelab
