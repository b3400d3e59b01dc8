#pragma once

// Command-line front end: estimate, bootstrap, simulate and replay.
// Every run writes manifest.json next to its outputs; `replay` re-executes a
// manifest and reproduces the outputs byte for byte.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "separa/bootstrap.hpp"
#include "separa/fit.hpp"
#include "separa/io.hpp"
#include "separa/scenarios.hpp"
#include "separa/simulation.hpp"

#ifndef SEPARA_VERSION
#define SEPARA_VERSION "0.0.0"
#endif

namespace separa::cli {

namespace fs = std::filesystem;
using io::json;

enum ExitCode : int { kOk = 0, kUsage = 1, kDataError = 2, kEstimationFailure = 3 };

/// Bad flag combination or value detected after parsing.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string command;  // estimate | bootstrap | simulate
  std::string input;    // data CSV, or simulation config JSON for simulate
  std::string header = "auto";
  std::optional<int> categories;
  std::string model = "logistic";
  bool model_set = false;
  std::string loss = "kl";
  std::string estimator = "separation";
  std::optional<double> gamma10;
  std::size_t B = kDefaultBootstrapResamples;
  std::uint64_t seed = 1;
  bool seed_set = false;
  std::string scenario;
  std::optional<std::size_t> replications;
  bool study = false;
  std::string input_digest;  // FNV-1a of the input file, checked on replay
};

inline json to_json(const RunConfig& c) {
  json j;
  j["command"] = c.command;
  if (!c.input.empty()) j["input"] = c.input;
  if (!c.input_digest.empty()) j["input_fnv1a"] = c.input_digest;
  if (c.command != "simulate") {
    j["header"] = c.header;
    if (c.categories) j["categories"] = *c.categories;
    j["estimator"] = c.estimator;
    if (c.gamma10) j["gamma10"] = *c.gamma10;
  }
  if (c.command != "simulate" || c.model_set) j["model"] = c.model;
  j["loss"] = c.loss;
  if (c.command == "bootstrap") j["B"] = c.B;
  if (c.command != "estimate" && (c.command == "bootstrap" || c.seed_set)) j["seed"] = c.seed;
  if (c.command == "simulate") {
    if (!c.scenario.empty()) j["scenario"] = c.scenario;
    if (c.replications) j["replications"] = *c.replications;
    j["study"] = c.study;
  }
  return j;
}

inline RunConfig run_config_from_json(const json& j) {
  RunConfig c;
  try {
    c.command = j.at("command").get<std::string>();
    c.input = j.value("input", "");
    c.input_digest = j.value("input_fnv1a", "");
    c.header = j.value("header", c.header);
    if (j.contains("categories")) c.categories = j.at("categories").get<int>();
    c.estimator = j.value("estimator", c.estimator);
    if (j.contains("gamma10")) c.gamma10 = j.at("gamma10").get<double>();
    if (j.contains("model")) {
      c.model = j.at("model").get<std::string>();
      c.model_set = true;
    }
    c.loss = j.value("loss", c.loss);
    c.B = j.value("B", c.B);
    if (j.contains("seed")) {
      c.seed = j.at("seed").get<std::uint64_t>();
      c.seed_set = true;
    }
    c.scenario = j.value("scenario", "");
    if (j.contains("replications")) c.replications = j.at("replications").get<std::size_t>();
    c.study = j.value("study", false);
  } catch (const json::exception& e) {
    throw UsageError(std::string("malformed manifest: ") + e.what());
  }
  return c;
}

inline std::string fnv1a_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open '" + path + "'", 0, 0);
  std::uint64_t h = 0xcbf29ce484222325ULL;
  char buf[4096];
  while (in.read(buf, sizeof buf) || in.gcount() > 0) {
    for (std::streamsize i = 0; i < in.gcount(); ++i) {
      h ^= static_cast<unsigned char>(buf[i]);
      h *= 0x100000001b3ULL;
    }
  }
  char hex[17];
  std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(h));
  return hex;
}

// ---- shared helpers --------------------------------------------------------

inline ResponseMatrix load_data(const RunConfig& c) {
  std::ifstream in(c.input);
  if (!in) throw ParseError("cannot open '" + c.input + "'", 0, 0);
  bool header = c.header == "yes";
  if (c.header == "auto") {
    header = looks_like_header(in);
    in.clear();
    in.seekg(0);
  }
  return read_csv(in, header, c.categories.value_or(-1));
}

inline EstimatorConfig estimator_config(const RunConfig& c) {
  EstimatorConfig ec;
  const auto est = parse_estimator(c.estimator);
  const auto rf = parse_response_function(c.model);
  const auto loss = parse_loss(c.loss);
  if (!est) throw UsageError("unknown estimator '" + c.estimator + "'");
  if (!rf) throw UsageError("unknown model '" + c.model + "'");
  if (!loss) throw UsageError("unknown loss '" + c.loss + "'");
  ec.estimator = *est;
  ec.response = *rf;
  ec.loss = *loss;
  if (c.gamma10) {
    if (!(*c.gamma10 > 0.0)) throw UsageError("--gamma10 must be positive");
    if (!has_free_scale(*est)) throw UsageError("--gamma10 applies only to separation estimators");
    ec.gamma10 = *c.gamma10;
  }
  return ec;
}

template <class Writer>
std::string render(Writer&& w) {
  std::ostringstream os;
  w(os);
  return os.str();
}

inline void write_manifest(const fs::path& dir, const RunConfig& c, const std::vector<std::string>& outputs) {
  json m;
  m["tool"] = "separa";
  m["version"] = SEPARA_VERSION;
  m["config"] = to_json(c);
  m["outputs"] = outputs;
  io::atomic_write(dir / "manifest.json", m.dump(2) + "\n");
}

inline void write_outputs(const fs::path& dir, const RunConfig& c,
                          const std::vector<std::pair<std::string, std::string>>& files) {
  std::vector<std::string> names;
  for (const auto& [name, contents] : files) {
    io::atomic_write(dir / name, contents);
    names.push_back(name);
  }
  write_manifest(dir, c, names);
}

// ---- commands --------------------------------------------------------------

inline int cmd_estimate(const RunConfig& c, const fs::path& out_dir, std::ostream& err) {
  const auto ec = estimator_config(c);
  const auto m = load_data(c);
  const auto fit = run_estimation(m, ec);
  for (const auto& w : fit.warnings) err << "warning: " << w << '\n';

  std::vector<std::pair<std::string, std::string>> files;
  files.emplace_back("estimates.csv",
                     render([&](std::ostream& os) { io::write_thresholds_csv(os, fit.estimates, m.item_ids()); }));
  if (fit.scale)
    files.emplace_back("loss_curve.csv", render([&](std::ostream& os) { io::write_loss_curve_csv(os, *fit.scale); }));
  files.emplace_back("persons.csv",
                     render([&](std::ostream& os) { io::write_persons_csv(os, m.person_ids(), fit.theta); }));
  files.emplace_back("diagnostics.json", io::diagnostics_json(fit, m, ec).dump(2) + "\n");
  write_outputs(out_dir, c, files);
  return kOk;
}

inline int cmd_bootstrap(const RunConfig& c, const fs::path& out_dir, std::ostream& err) {
  if (c.B < 2) throw UsageError("-B must be at least 2");
  const auto ec = estimator_config(c);
  const auto m = load_data(c);
  const auto report = bootstrap_se(m, ec, c.B, c.seed);
  if (report.n_failed) err << "warning: " << report.n_failed << " of " << report.B << " resamples failed\n";
  write_outputs(out_dir, c, {{"bootstrap.json", io::to_json(report).dump(2) + "\n"}});
  return kOk;
}

inline Scenario resolve_scenario(const RunConfig& c) {
  Scenario s;
  if (!c.scenario.empty()) {
    auto found = builtin_scenario(c.scenario);
    if (!found) {
      std::string names;
      for (const auto& n : scenario_names()) names += (names.empty() ? "" : ", ") + n;
      throw UsageError("unknown scenario '" + c.scenario + "'; available: " + names);
    }
    s = std::move(*found);
  } else if (!c.input.empty()) {
    std::ifstream in(c.input);
    if (!in) throw ParseError("cannot open '" + c.input + "'", 0, 0);
    json j;
    try {
      in >> j;
    } catch (const json::exception& e) {
      throw ParseError(c.input + ": " + e.what(), 0, 0);
    }
    try {
      s.name = fs::path(c.input).stem().string();
      s.cells.push_back({s.name, io::simulation_config_from_json(j)});
    } catch (const InvalidArgument& e) {
      throw ParseError(e.what(), 0, 0);
    }
  } else {
    throw UsageError("simulate needs --scenario NAME or a config file");
  }
  for (auto& cell : s.cells) {
    if (c.seed_set) cell.config.seed = c.seed;
    if (c.replications) cell.config.replications = *c.replications;
    if (c.model_set) {
      const auto rf = parse_response_function(c.model);
      if (!rf) throw UsageError("unknown model '" + c.model + "'");
      cell.config.response = *rf;
    }
    const auto loss = parse_loss(c.loss);
    if (!loss) throw UsageError("unknown loss '" + c.loss + "'");
    cell.config.loss = *loss;
  }
  return s;
}

inline int cmd_simulate(const RunConfig& c, const fs::path& out_dir, std::ostream& err) {
  const Scenario s = resolve_scenario(c);
  std::vector<std::pair<std::string, std::string>> files;
  if (s.study || c.study) {
    std::vector<StudyResult> results;
    for (auto cell : s.cells) {
      cell.config.keep_estimates = true;
      results.push_back(run_study(cell.config));
      for (const auto& e : results.back().estimators)
        if (e.failures)
          err << "note: " << cell.label << ": " << to_string(e.estimator) << " failed in " << e.failures << " of "
              << cell.config.replications << " replications\n";
    }
    files.emplace_back("study.csv",
                       render([&](std::ostream& os) { io::write_study_table_csv(os, s.cells, results); }));
    files.emplace_back("study.json", io::study_diagnostics_json(s.name, s.cells, results).dump(2) + "\n");
    files.emplace_back("estimates.csv",
                       render([&](std::ostream& os) { io::write_study_estimates_csv(os, s.cells, results); }));
  } else {
    for (const auto& cell : s.cells) {
      const auto m = simulate(cell.config, 0);
      const std::string name = s.cells.size() == 1 ? "data.csv" : "data-" + cell.label + ".csv";
      files.emplace_back(name, render([&](std::ostream& os) { write_csv(os, m); }));
    }
  }
  write_outputs(out_dir, c, files);
  return kOk;
}

inline int execute(const RunConfig& c, const fs::path& out_dir, std::ostream& err) {
  if (c.command == "estimate") return cmd_estimate(c, out_dir, err);
  if (c.command == "bootstrap") return cmd_bootstrap(c, out_dir, err);
  if (c.command == "simulate") return cmd_simulate(c, out_dir, err);
  throw UsageError("unknown command '" + c.command + "'");
}

inline int replay(const std::string& manifest_path, std::optional<std::string> out, std::ostream& err) {
  std::ifstream in(manifest_path);
  if (!in) throw UsageError("cannot open manifest '" + manifest_path + "'");
  json m;
  try {
    in >> m;
  } catch (const json::exception& e) {
    throw UsageError("malformed manifest: " + std::string(e.what()));
  }
  if (!m.contains("config")) throw UsageError("malformed manifest: no config");
  const RunConfig c = run_config_from_json(m.at("config"));
  if (!c.input_digest.empty() && fnv1a_file(c.input) != c.input_digest)
    throw ParseError("input '" + c.input + "' changed since the manifest was written", 0, 0);
  const fs::path dir = out ? fs::path(*out) : fs::path(manifest_path).parent_path();
  return execute(c, dir.empty() ? fs::path(".") : dir, err);
}

// ---- argument parsing ------------------------------------------------------

/// Parses argv and runs the requested command. Returns the process exit code.
inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Pairwise separation estimation for item response models"};
  app.set_version_flag("--version", SEPARA_VERSION);
  app.require_subcommand(1);

  RunConfig c;
  std::string out_dir = ".";
  std::string manifest;

  const std::vector<std::string> models{"logistic", "normal", "gumbel", "gompertz"};
  const std::vector<std::string> losses{"quadratic", "kl"};
  const std::vector<std::string> estimators{"separation", "cml", "pairwise-conditional", "poly-separation",
                                            "poly-anchor"};

  auto add_data_flags = [&](CLI::App* sub) {
    sub->add_option("data", c.input, "response table (CSV, one row per person)")->required();
    sub->add_option("--model", c.model, "response function")->check(CLI::IsMember(models));
    sub->add_option("--loss", c.loss, "loss for scale selection and abilities")->check(CLI::IsMember(losses));
    sub->add_option("--estimator", c.estimator, "item parameter estimator")->check(CLI::IsMember(estimators));
    sub->add_option("--gamma10", c.gamma10, "fixed scale; skips scale selection")->check(CLI::PositiveNumber);
    sub->add_option("--header", c.header, "first row holds item labels")->check(CLI::IsMember({"auto", "yes", "no"}));
    sub->add_option("--categories", c.categories, "highest response category k")->check(CLI::NonNegativeNumber);
    sub->add_option("-o,--output", out_dir, "output directory");
  };

  auto* estimate = app.add_subcommand("estimate", "estimate item parameters, scale and abilities");
  add_data_flags(estimate);

  auto* boot = app.add_subcommand("bootstrap", "bootstrap standard errors of item parameters");
  add_data_flags(boot);
  boot->add_option("-B", c.B, "number of resamples (at least 2)");
  boot->add_option("--seed", c.seed, "random seed");

  auto* sim = app.add_subcommand("simulate", "generate data or run a Monte-Carlo study");
  sim->add_option("config", c.input, "simulation config (JSON)");
  sim->add_option("--scenario", c.scenario, "built-in scenario");
  sim->add_option("--model", c.model, "override the response function")->check(CLI::IsMember(models));
  sim->add_option("--loss", c.loss, "loss for scale selection")->check(CLI::IsMember(losses));
  sim->add_option("--seed", c.seed, "random seed");
  sim->add_option("--replications", c.replications, "override the replication count")->check(CLI::PositiveNumber);
  sim->add_flag("--study", c.study, "run the Monte-Carlo study instead of writing one data set");
  sim->add_option("-o,--output", out_dir, "output directory");

  auto* rep = app.add_subcommand("replay", "re-run a manifest");
  rep->add_option("manifest", manifest, "manifest.json of an earlier run")->required();
  auto* rep_out = rep->add_option("-o,--output", out_dir, "output directory (default: the manifest's)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }

  try {
    if (rep->parsed()) return replay(manifest, *rep_out ? std::optional<std::string>(out_dir) : std::nullopt, err);
    CLI::App* sub = app.get_subcommands().front();
    c.command = sub->get_name();
    if (sub == sim) {
      c.model_set = sim->count("--model") > 0;
      c.seed_set = sim->count("--seed") > 0;
      if (c.scenario.empty() == c.input.empty())
        throw UsageError("simulate needs exactly one of --scenario or a config file");
    } else {
      c.model_set = true;
      if (sub == boot) c.seed_set = true;
    }
    if (!c.input.empty()) {
      c.input_digest = fnv1a_file(c.input);
      c.input = fs::absolute(c.input).lexically_normal().string();
    }
    return execute(c, out_dir, err);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const EstimationError& e) {
    err << "estimation failed: " << e.what() << '\n';
    return kEstimationFailure;
  } catch (const ParseError& e) {
    err << "data error: " << e.what() << '\n';
    return kDataError;
  } catch (const InvalidArgument& e) {
    err << "data error: " << e.what() << '\n';
    return kDataError;
  } catch (const DomainError& e) {
    err << "data error: " << e.what() << '\n';
    return kDataError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kDataError;
  }
}

}  // namespace separa::cli
