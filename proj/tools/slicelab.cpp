// slicelab command line tool.

#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "slicelab/slicelab.hpp"

namespace {

struct Flags {
  std::string config;
  std::string variety;
  std::vector<std::string> fields;
  int k = 0;
  std::string classifier;
  std::vector<unsigned> ext_degrees;
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
  std::string out;
  std::uint64_t budget = 0;
  unsigned workers = 0;
};

struct Options {
  CLI::Option* variety = nullptr;
  CLI::Option* fields = nullptr;
  CLI::Option* k = nullptr;
  CLI::Option* classifier = nullptr;
  CLI::Option* ext = nullptr;
  CLI::Option* samples = nullptr;
  CLI::Option* seed = nullptr;
  CLI::Option* out = nullptr;
  CLI::Option* budget = nullptr;
  CLI::Option* workers = nullptr;
};

Options add_options(CLI::App* sub, Flags& f) {
  Options o;
  sub->add_option("--config", f.config, "JSON config file; flags given on the command line override it");
  o.variety = sub->add_option("--variety", f.variety, "catalog name or path to a variety file");
  o.fields = sub->add_option("--field,--fields", f.fields, "field order(s), e.g. 3,5,7 or 9 or 3^2")->delimiter(',');
  o.k = sub->add_option("--k", f.k, "codimension of the slicing subspaces");
  o.classifier = sub->add_option("--classifier", f.classifier, "quadric-exact or component-estimate");
  o.ext = sub->add_option("--ext-degrees", f.ext_degrees, "extension degrees for component estimates (default 1,2)")->delimiter(',');
  o.samples = sub->add_option("--samples,-N", f.samples, "Monte Carlo sample count (default 2000)");
  o.seed = sub->add_option("--seed", f.seed, "RNG seed (required by sample)");
  o.out = sub->add_option("--out", f.out, "output directory for <command>.json/.csv; stdout when absent");
  o.budget = sub->add_option("--budget", f.budget, "enumeration budget (GSL_BUDGET overrides)");
  o.workers = sub->add_option("--workers", f.workers, "worker threads, 0 = hardware concurrency");
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"slicelab: exact finite-field slicing statistics"};
  app.footer(slicelab::exit_code_help());
  app.set_version_flag("--version", slicelab::kVersion);
  app.require_subcommand(1);

  static const std::map<std::string, std::string> descriptions{
      {"verify-lemma", "exact mean, pair term and variance checks over the full Grassmannian"},
      {"census", "exhaustive bad-locus census with the Chebyshev check"},
      {"scaling", "census over several fields and a log-log exponent fit"},
      {"sharpness", "cone construction: parent hyperplanes and witnesses of very bad subspaces"},
      {"sample", "Monte Carlo census with a Wilson interval"},
      {"count", "point counts over extensions and component estimates"},
  };
  Flags flags;
  std::map<std::string, Options> opts;
  for (const auto& name : slicelab::known_commands()) opts[name] = add_options(app.add_subcommand(name, descriptions.at(name)), flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : slicelab::kExitConfigError;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  const Options& o = opts.at(command);
  slicelab::ExperimentConfig config;
  try {
    if (!flags.config.empty()) {
      std::ifstream in(flags.config);
      if (!in) throw slicelab::ParseError("cannot read config file " + flags.config);
      nlohmann::json j;
      try {
        in >> j;
      } catch (const nlohmann::json::exception& e) {
        throw slicelab::ParseError(std::string("config file is not valid JSON: ") + e.what());
      }
      config = slicelab::config_from_json(j);
    }
  } catch (const slicelab::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return slicelab::kExitConfigError;
  }
  config.command = command;
  if (o.variety->count()) config.variety = flags.variety;
  if (o.fields->count()) config.fields = flags.fields;
  if (o.k->count()) config.k = flags.k;
  if (o.classifier->count()) config.classifier = flags.classifier;
  if (o.ext->count()) config.ext_degrees = flags.ext_degrees;
  if (o.samples->count()) config.samples = flags.samples;
  if (o.seed->count()) config.seed = flags.seed;
  if (o.out->count()) config.output = flags.out;
  if (o.budget->count()) config.budget = flags.budget;
  if (o.workers->count()) config.workers = flags.workers;

  const slicelab::RunOutcome outcome = slicelab::run(config);
  if (!outcome.error.empty()) std::cerr << "error: " << outcome.error << "\n";
  try {
    slicelab::write_outputs(config, outcome);
  } catch (const std::exception& e) {
    std::cerr << "error: cannot write report: " << e.what() << "\n";
    return slicelab::kExitConfigError;
  }
  if (outcome.exit_code == slicelab::kExitAssertionFailed) std::cerr << "FAILED: a checked identity or bound does not hold (see report)\n";
  return outcome.exit_code;
}
