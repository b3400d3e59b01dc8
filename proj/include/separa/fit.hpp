#pragma once

// One complete estimation run: item parameters, scale selection where the
// estimator has a free scale, person abilities and loss.

#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "separa/binary_separation.hpp"
#include "separa/error.hpp"
#include "separa/person_scale.hpp"
#include "separa/poly_separation.hpp"
#include "separa/rasch_cml.hpp"
#include "separa/response_function.hpp"
#include "separa/response_matrix.hpp"
#include "separa/thresholds.hpp"

namespace separa {

enum class EstimatorKind {
  Separation,           // binary pairwise separation estimator
  Cml,                  // Rasch conditional ML
  PairwiseConditional,  // Rasch pairwise conditional estimator
  PolySeparation,       // graded-response separation, item-swapping average
  PolyAnchor,           // graded-response separation, item 1 anchor only
};

inline std::string_view to_string(EstimatorKind kind) noexcept {
  switch (kind) {
    case EstimatorKind::Separation: return "separation";
    case EstimatorKind::Cml: return "cml";
    case EstimatorKind::PairwiseConditional: return "pairwise-conditional";
    case EstimatorKind::PolySeparation: return "poly-separation";
    case EstimatorKind::PolyAnchor: return "poly-anchor";
  }
  return "separation";
}

inline std::optional<EstimatorKind> parse_estimator(std::string_view name) noexcept {
  for (auto kind : {EstimatorKind::Separation, EstimatorKind::Cml, EstimatorKind::PairwiseConditional,
                    EstimatorKind::PolySeparation, EstimatorKind::PolyAnchor})
    if (to_string(kind) == name) return kind;
  return std::nullopt;
}

inline bool has_free_scale(EstimatorKind kind) noexcept {
  return kind == EstimatorKind::Separation || kind == EstimatorKind::PolySeparation ||
         kind == EstimatorKind::PolyAnchor;
}

struct EstimatorConfig {
  EstimatorKind estimator = EstimatorKind::Separation;
  ResponseFunctionKind response = ResponseFunctionKind::Logistic;
  LossKind loss = LossKind::KullbackLeibler;
  std::optional<double> gamma10;  // fixed scale; skips selection
  ScaleGrid grid;
  bool estimate_persons = true;
};

struct FitReport {
  ThresholdMatrix estimates;  // I x k (k = 1 for binary estimators)
  std::optional<ScaleSelection> scale;
  std::optional<double> gamma10;
  std::vector<double> theta;
  std::optional<double> total_loss;
  ResponseFunctionKind response = ResponseFunctionKind::Logistic;

  // diagnostics
  std::optional<CmlFit> cml;
  std::vector<std::pair<std::size_t, std::size_t>> monotonicity_violations;
  std::vector<std::string> warnings;
};

namespace detail {

inline ThresholdMatrix unit_thresholds(const ResponseMatrix& m, EstimatorKind kind, std::vector<std::string>& warnings) {
  switch (kind) {
    case EstimatorKind::Separation: return ThresholdMatrix::from_binary(separation_unit_estimate(m).delta);
    case EstimatorKind::PolyAnchor: return poly_anchor_unit(m);
    case EstimatorKind::PolySeparation: {
      auto [unit, w] = poly_averaged_unit(m);
      warnings.insert(warnings.end(), w.begin(), w.end());
      return unit;
    }
    default: break;
  }
  throw InvalidArgument("estimator has no free scale");
}

}  // namespace detail

/// Runs the configured estimator on m. Separation estimators select gamma10 by
/// loss minimization unless config.gamma10 is set.
inline FitReport run_estimation(const ResponseMatrix& m, const EstimatorConfig& config) {
  FitReport report;
  report.response = config.response;
  const bool binary_only = config.estimator == EstimatorKind::Separation || config.estimator == EstimatorKind::Cml ||
                           config.estimator == EstimatorKind::PairwiseConditional;
  if (binary_only && !m.is_binary())
    throw InvalidArgument(std::string(to_string(config.estimator)) +
                          " requires binary responses; use poly-separation for polytomous data");

  if (has_free_scale(config.estimator)) {
    const ThresholdMatrix unit = detail::unit_thresholds(m, config.estimator, report.warnings);
    double g;
    if (config.gamma10) {
      g = PseudoObservationScale::from_gamma10(*config.gamma10).gamma10;
    } else {
      report.scale = select_scale(m, unit, config.response, config.loss, config.grid);
      report.warnings.insert(report.warnings.end(), report.scale->warnings.begin(), report.scale->warnings.end());
      g = report.scale->chosen_gamma10;
    }
    report.gamma10 = g;
    report.estimates = unit.scaled(g);
    report.monotonicity_violations = detail::find_violations(report.estimates);
  } else {
    if (config.response != ResponseFunctionKind::Logistic) {
      report.warnings.push_back(std::string(to_string(config.estimator)) +
                                " assumes the Rasch model; person abilities use the logistic response function");
      report.response = ResponseFunctionKind::Logistic;
    }
    if (config.estimator == EstimatorKind::Cml) {
      report.cml = cml_fit(m);
      report.estimates = ThresholdMatrix::from_binary(report.cml->delta);
    } else {
      report.estimates = ThresholdMatrix::from_binary(pairwise_conditional_fit(m).delta);
    }
  }

  if (config.estimate_persons) {
    const auto persons = fit_persons(ResponsePatterns(m), isotonize(report.estimates), report.response, config.loss);
    report.theta = persons.theta;
    report.total_loss = persons.loss;
  }
  return report;
}

}  // namespace separa
