#pragma once

// Built-in simulation scenarios with the published parameter sets.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "separa/simulation.hpp"

namespace separa {

struct ScenarioCell {
  std::string label;
  SimulationConfig config;
};

struct Scenario {
  std::string name;
  std::string description;
  std::vector<ScenarioCell> cells;
  bool study = false;  // true when the natural output is a MAD table rather than a data set
};

/// Six binary items used throughout the binary studies.
inline std::vector<double> six_item_delta() { return {0.0, -1.5, -1.0, 0.5, 1.2, 1.5}; }

/// Eighteen binary items: 0 for the anchor, then -1.6..-0.2 and 0.2..1.8 in steps of 0.2.
inline std::vector<double> eighteen_item_delta() {
  std::vector<double> d{0.0};
  for (int v = -16; v <= 18; v += 2)
    if (v != 0) d.push_back(v / 10.0);
  return d;
}

/// Graded items: item 1 thresholds (0, 1, 1.5, 2, 2.5); items 2-4 shifted by
/// -2, -1.5, -3. With `modified`, item 2 is 1.5 times item 1 instead.
inline ThresholdMatrix graded_four_items(bool modified = false) {
  const std::vector<double> base{0.0, 1.0, 1.5, 2.0, 2.5};
  std::vector<std::vector<double>> rows{base};
  for (double shift : {-2.0, -1.5, -3.0}) {
    auto row = base;
    for (double& v : row) v += shift;
    rows.push_back(row);
  }
  if (modified)
    for (std::size_t r = 0; r < base.size(); ++r) rows[1][r] = 1.5 * base[r];
  return ThresholdMatrix::from_rows(rows);
}

namespace detail {

inline SimulationConfig binary_config(ResponseFunctionKind kind, std::size_t P, std::vector<double> delta,
                                      PersonDistribution persons = PersonDistribution::standard_normal()) {
  SimulationConfig c;
  c.model = ModelKind::Binary;
  c.response = kind;
  c.truth = ThresholdMatrix::from_binary(delta);
  c.persons = persons;
  c.P = P;
  c.replications = 200;
  c.seed = 1;
  c.estimators = {EstimatorKind::Separation};
  return c;
}

inline SimulationConfig graded_config(ResponseFunctionKind kind, bool modified) {
  SimulationConfig c;
  c.model = ModelKind::Graded;
  c.response = kind;
  c.truth = graded_four_items(modified);
  c.P = 100;
  c.replications = 100;
  c.seed = 1;
  c.estimators = {EstimatorKind::PolySeparation, EstimatorKind::PolyAnchor};
  return c;
}

}  // namespace detail

inline std::vector<std::string> scenario_names() {
  return {"table1", "figure1", "figure3", "figure4", "figure5", "figure6", "appendix18"};
}

inline std::optional<Scenario> builtin_scenario(std::string_view name) {
  using RF = ResponseFunctionKind;
  Scenario s;
  s.name = std::string(name);
  if (name == "table1") {
    s.description = "Rasch data, six items, three estimators, four person distributions, P = 80/100/200";
    s.study = true;
    const std::vector<std::pair<std::string, PersonDistribution>> dists{
        {"normal", PersonDistribution::standard_normal()},
        {"chisq", PersonDistribution::chi_squared()},
        {"nonc1", PersonDistribution::noncentral(1.0)},
        {"nonc1.5", PersonDistribution::noncentral(1.5)}};
    for (std::size_t P : {80u, 100u, 200u})
      for (const auto& [tag, dist] : dists) {
        auto c = detail::binary_config(RF::Logistic, P, six_item_delta(), dist);
        c.estimators = {EstimatorKind::Separation, EstimatorKind::Cml, EstimatorKind::PairwiseConditional};
        s.cells.push_back({"P" + std::to_string(P) + "-" + tag, c});
      }
  } else if (name == "figure1") {
    s.description = "normal-ogive data, six items, P = 100 and 300";
    for (std::size_t P : {100u, 300u})
      s.cells.push_back({"normal-P" + std::to_string(P), detail::binary_config(RF::NormalOgive, P, six_item_delta())});
  } else if (name == "figure3") {
    s.description = "maximum value (Gumbel) response function, six items, P = 100";
    s.cells.push_back({"gumbel-P100", detail::binary_config(RF::GumbelMax, 100, six_item_delta())});
  } else if (name == "figure4") {
    s.description = "minimum value (Gompertz) response function, six items, P = 100 and 50";
    for (std::size_t P : {100u, 50u})
      s.cells.push_back(
          {"gompertz-P" + std::to_string(P), detail::binary_config(RF::GompertzMin, P, six_item_delta())});
  } else if (name == "figure5" || name == "figure6") {
    const RF kind = name == "figure5" ? RF::Logistic : RF::GompertzMin;
    s.description = std::string("graded ") + (name == "figure5" ? "logistic" : "minimum value") +
                    " model, I = 4, k = 5, P = 100; shifted items and a variant with a stretched second item";
    s.cells.push_back({"graded-shifted", detail::graded_config(kind, false)});
    s.cells.push_back({"graded-modified", detail::graded_config(kind, true)});
  } else if (name == "appendix18") {
    s.description = "Rasch data, eighteen items, P = 100 and 300, normal and chi-squared persons";
    for (std::size_t P : {100u, 300u})
      for (const auto& [tag, dist] : {std::pair{std::string("normal"), PersonDistribution::standard_normal()},
                                      std::pair{std::string("chisq"), PersonDistribution::chi_squared()}}) {
        auto c = detail::binary_config(RF::Logistic, P, eighteen_item_delta(), dist);
        c.estimators = {EstimatorKind::Separation, EstimatorKind::Cml, EstimatorKind::PairwiseConditional};
        s.cells.push_back({"P" + std::to_string(P) + "-" + tag, c});
      }
    s.study = true;
  } else {
    return std::nullopt;
  }
  return s;
}

}  // namespace separa
