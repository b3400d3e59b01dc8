#pragma once

// File formats: CSV tables for estimates, loss curves, abilities and study
// summaries; JSON for bootstrap reports, diagnostics and simulation configs.
// Numbers are printed with 17 significant digits so reruns are byte-identical.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "separa/bootstrap.hpp"
#include "separa/error.hpp"
#include "separa/fit.hpp"
#include "separa/scenarios.hpp"
#include "separa/simulation.hpp"

namespace separa::io {

using json = nlohmann::ordered_json;

inline std::string format_number(double x) {
  if (std::isnan(x)) return "NA";
  if (std::isinf(x)) return x > 0 ? "Inf" : "-Inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

/// Replaces `path` with `contents` through a temporary file and a rename.
inline void atomic_write(const std::filesystem::path& path, const std::string& contents) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write '" + tmp.string() + "'");
    out << contents;
    if (!out.flush()) throw std::runtime_error("write failed for '" + tmp.string() + "'");
  }
  std::filesystem::rename(tmp, path);
}

/// Threshold matrix: one row per item, columns for categories 1..k.
inline void write_thresholds_csv(std::ostream& out, const ThresholdMatrix& t, const std::vector<std::string>& item_ids) {
  out << "item";
  for (std::size_t r = 1; r <= t.categories(); ++r) out << ",cat" << r;
  out << '\n';
  for (std::size_t i = 0; i < t.items(); ++i) {
    out << (i < item_ids.size() ? item_ids[i] : "I" + std::to_string(i + 1));
    for (std::size_t r = 0; r < t.categories(); ++r) out << ',' << format_number(t(i, r));
    out << '\n';
  }
}

inline void write_loss_curve_csv(std::ostream& out, const ScaleSelection& sel) {
  out << "gamma10,loss\n";
  for (const auto& [g, l] : sel.grid) out << format_number(g) << ',' << format_number(l) << '\n';
}

inline void write_persons_csv(std::ostream& out, const std::vector<std::string>& ids, const std::vector<double>& theta) {
  out << "person,theta\n";
  for (std::size_t p = 0; p < theta.size(); ++p) out << ids[p] << ',' << format_number(theta[p]) << '\n';
}

inline json to_json(const BootstrapReport& r) {
  json j;
  j["se"] = r.se;
  j["B"] = r.B;
  j["n_failed"] = r.n_failed;
  j["seed"] = r.seed;
  return j;
}

inline json diagnostics_json(const FitReport& fit, const ResponseMatrix& m, const EstimatorConfig& config) {
  json j;
  j["estimator"] = to_string(config.estimator);
  j["response_function"] = to_string(fit.response);
  j["loss"] = to_string(config.loss);
  j["persons"] = m.persons();
  j["items"] = m.items();
  j["categories"] = m.max_category();
  j["anchor"] = {{"item", m.item_ids().front()}, {"category", 1}};
  if (fit.gamma10) {
    j["gamma10"] = *fit.gamma10;
    const auto clip = PseudoObservationScale::resolve(fit.response, *fit.gamma10);
    j["clipping_gamma"] = clip.gamma.value_or(std::nan(""));
    j["scale_selected"] = fit.scale.has_value();
  }
  if (fit.scale) {
    j["chosen_loss"] = fit.scale->chosen_loss;
    j["minimum_on_grid_boundary"] = fit.scale->at_boundary;
  }
  if (fit.total_loss) j["total_loss"] = *fit.total_loss;
  if (fit.cml) {
    j["cml"] = {{"loglik", fit.cml->loglik},
                {"converged", fit.cml->converged},
                {"iterations", fit.cml->iterations},
                {"gradient_norm", fit.cml->gradient_norm},
                {"dropped_persons", fit.cml->dropped_persons}};
  }
  json violations = json::array();
  for (const auto& [i, r] : fit.monotonicity_violations)
    violations.push_back({{"item", m.item_ids()[i]}, {"category", r + 1}});
  j["monotonicity_violations"] = violations;
  j["warnings"] = fit.warnings;
  return j;
}

// ---- simulation configs ----------------------------------------------------

inline json to_json(const PersonDistribution& d) {
  switch (d.kind) {
    case PersonDistribution::Kind::StandardNormal: return {{"kind", "normal"}};
    case PersonDistribution::Kind::ChiSquared1: return {{"kind", "chisq"}};
    case PersonDistribution::Kind::NoncentralChiSquared: return {{"kind", "nonc-chisq"}, {"mu", d.mu}};
  }
  return {};
}

inline PersonDistribution person_distribution_from_json(const json& j) {
  const std::string kind = j.value("kind", "normal");
  if (kind == "normal") return PersonDistribution::standard_normal();
  if (kind == "chisq") return PersonDistribution::chi_squared();
  if (kind == "nonc-chisq") return PersonDistribution::noncentral(j.at("mu").get<double>());
  throw InvalidArgument("unknown person distribution '" + kind + "' (normal, chisq, nonc-chisq)");
}

inline json to_json(const SimulationConfig& c) {
  json j;
  j["model"] = c.model == ModelKind::Binary ? "binary" : "graded";
  j["response"] = to_string(c.response);
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < c.truth.items(); ++i) rows.emplace_back(c.truth.row(i).begin(), c.truth.row(i).end());
  j["thresholds"] = rows;
  j["persons"] = to_json(c.persons);
  j["P"] = c.P;
  j["replications"] = c.replications;
  j["seed"] = c.seed;
  json est = json::array();
  for (auto e : c.estimators) est.push_back(to_string(e));
  j["estimators"] = est;
  j["loss"] = to_string(c.loss);
  return j;
}

/// Reads a SimulationConfig. Binary item parameters may be given as "delta"
/// (one value per item) instead of "thresholds" (one row per item).
inline SimulationConfig simulation_config_from_json(const json& j) {
  SimulationConfig c;
  try {
    const std::string model = j.value("model", "binary");
    if (model == "binary") c.model = ModelKind::Binary;
    else if (model == "graded") c.model = ModelKind::Graded;
    else throw InvalidArgument("unknown model '" + model + "' (binary, graded)");
    const std::string response = j.value("response", "logistic");
    const auto kind = parse_response_function(response);
    if (!kind) throw InvalidArgument("unknown response function '" + response + "'");
    c.response = *kind;
    if (j.contains("delta")) c.truth = ThresholdMatrix::from_binary(j.at("delta").get<std::vector<double>>());
    else c.truth = ThresholdMatrix::from_rows(j.at("thresholds").get<std::vector<std::vector<double>>>());
    if (j.contains("persons")) c.persons = person_distribution_from_json(j.at("persons"));
    c.P = j.value("P", c.P);
    c.replications = j.value("replications", c.replications);
    c.seed = j.value("seed", c.seed);
    if (j.contains("estimators")) {
      c.estimators.clear();
      for (const auto& e : j.at("estimators")) {
        const auto name = e.get<std::string>();
        const auto est = parse_estimator(name);
        if (!est) throw InvalidArgument("unknown estimator '" + name + "'");
        c.estimators.push_back(*est);
      }
    } else if (c.model == ModelKind::Graded) {
      c.estimators = {EstimatorKind::PolySeparation};
    }
    const std::string loss = j.value("loss", "kl");
    const auto lk = parse_loss(loss);
    if (!lk) throw InvalidArgument("unknown loss '" + loss + "' (quadratic, kl)");
    c.loss = *lk;
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("simulation config: ") + e.what());
  }
  c.validate();
  return c;
}

// ---- study outputs ---------------------------------------------------------

inline std::string estimator_column(EstimatorKind kind) {
  switch (kind) {
    case EstimatorKind::Separation: return "pairwise_separation";
    case EstimatorKind::Cml: return "conditional";
    case EstimatorKind::PairwiseConditional: return "pairwise_conditional";
    case EstimatorKind::PolySeparation: return "poly_averaged";
    case EstimatorKind::PolyAnchor: return "poly_anchor";
  }
  return "estimator";
}

/// One row per scenario cell, one MAD column per estimator (the first cell's
/// estimator list defines the columns).
inline void write_study_table_csv(std::ostream& out, const std::vector<ScenarioCell>& cells,
                                  const std::vector<StudyResult>& results) {
  out << "P,distribution,response";
  const auto& estimators = cells.front().config.estimators;
  for (auto e : estimators) out << ',' << estimator_column(e);
  out << '\n';
  for (std::size_t c = 0; c < cells.size(); ++c) {
    const auto& cfg = cells[c].config;
    out << cfg.P << ',' << cfg.persons.label() << ',' << to_string(cfg.response);
    for (auto e : estimators) out << ',' << format_number(results[c].summary(e).mad);
    out << '\n';
  }
}

/// Long-format per-replication estimates (boxplot data).
inline void write_study_estimates_csv(std::ostream& out, const std::vector<ScenarioCell>& cells,
                                      const std::vector<StudyResult>& results) {
  out << "cell,estimator,replication,item,category,estimate,truth\n";
  for (std::size_t c = 0; c < cells.size(); ++c) {
    const std::size_t k = cells[c].config.categories();
    for (const auto& s : results[c].estimators) {
      for (std::size_t rep = 0; rep < s.estimates.size(); ++rep) {
        if (!s.estimates[rep]) continue;
        const auto& est = *s.estimates[rep];
        for (std::size_t j = 0; j < est.size(); ++j)
          out << cells[c].label << ',' << to_string(s.estimator) << ',' << rep << ',' << (j / k + 1) << ','
              << (j % k + 1) << ',' << format_number(est[j]) << ',' << format_number(results[c].truth[j]) << '\n';
      }
    }
  }
}

inline json study_diagnostics_json(const std::string& scenario, const std::vector<ScenarioCell>& cells,
                                   const std::vector<StudyResult>& results) {
  json j;
  j["scenario"] = scenario;
  json arr = json::array();
  for (std::size_t c = 0; c < cells.size(); ++c) {
    json cell;
    cell["label"] = cells[c].label;
    cell["config"] = to_json(cells[c].config);
    json est = json::array();
    for (const auto& s : results[c].estimators) {
      std::size_t scaled = 0;
      double gsum = 0.0;
      for (double g : s.gamma10)
        if (!std::isnan(g)) {
          gsum += g;
          ++scaled;
        }
      json e = {{"estimator", to_string(s.estimator)}, {"mad", s.mad}, {"failures", s.failures}};
      if (scaled) e["mean_gamma10"] = gsum / static_cast<double>(scaled);
      est.push_back(e);
    }
    cell["estimators"] = est;
    arr.push_back(cell);
  }
  j["cells"] = arr;
  return j;
}

}  // namespace separa::io
