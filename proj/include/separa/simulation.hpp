#pragma once

// Data generation under binary and graded response models, and Monte-Carlo
// studies comparing estimators by mean absolute deviation from the truth.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "separa/error.hpp"
#include "separa/fit.hpp"
#include "separa/parallel.hpp"
#include "separa/random.hpp"
#include "separa/response_function.hpp"
#include "separa/response_matrix.hpp"
#include "separa/thresholds.hpp"

namespace separa {

/// Person-ability law. Chi-squared variants are squares of a normal draw:
/// ChiSquared1 is Z^2, NoncentralChiSquared is W^2 with W ~ N(mu, 1).
struct PersonDistribution {
  enum class Kind { StandardNormal, ChiSquared1, NoncentralChiSquared };
  Kind kind = Kind::StandardNormal;
  double mu = 0.0;

  static PersonDistribution standard_normal() { return {}; }
  static PersonDistribution chi_squared() { return {Kind::ChiSquared1, 0.0}; }
  static PersonDistribution noncentral(double mu) { return {Kind::NoncentralChiSquared, mu}; }

  double transform(double z) const noexcept {
    switch (kind) {
      case Kind::StandardNormal: return z;
      case Kind::ChiSquared1: return z * z;
      case Kind::NoncentralChiSquared: return (z + mu) * (z + mu);
    }
    return z;
  }

  std::string label() const {
    switch (kind) {
      case Kind::StandardNormal: return "standard normal";
      case Kind::ChiSquared1: return "chi-squared";
      case Kind::NoncentralChiSquared: {
        char buf[64];
        std::snprintf(buf, sizeof buf, "nonc chi-squared N(%g,1)^2", mu);
        return buf;
      }
    }
    return "";
  }
};

/// P i.i.d. abilities by inverse-CDF sampling from the (seed, replication) person stream.
inline std::vector<double> draw_persons(const PersonDistribution& dist, std::size_t P, std::uint64_t seed,
                                        std::uint64_t replication = 0) {
  const RandomStream stream(seed, replication, StreamId::Persons);
  std::vector<double> theta(P);
  for (std::size_t p = 0; p < P; ++p)
    theta[p] = dist.transform(quantile(ResponseFunctionKind::NormalOgive, stream.uniform(p)));
  return theta;
}

enum class ModelKind { Binary, Graded };

struct SimulationConfig {
  ModelKind model = ModelKind::Binary;
  ResponseFunctionKind response = ResponseFunctionKind::Logistic;
  ThresholdMatrix truth;  // I x k true item parameters (k = 1 for binary)
  PersonDistribution persons;
  std::size_t P = 100;
  std::size_t replications = 200;
  std::uint64_t seed = 1;
  std::vector<EstimatorKind> estimators{EstimatorKind::Separation};
  LossKind loss = LossKind::KullbackLeibler;
  bool keep_estimates = false;

  std::size_t items() const noexcept { return truth.items(); }
  std::size_t categories() const noexcept { return truth.categories(); }

  void validate() const {
    if (truth.items() < 1 || truth.categories() < 1) throw InvalidArgument("simulation: empty item parameters");
    if (model == ModelKind::Binary && truth.categories() != 1)
      throw InvalidArgument("simulation: binary model needs exactly one parameter per item");
    if (P < 2) throw InvalidArgument("simulation: P must be at least 2");
    for (double v : truth.values())
      if (!std::isfinite(v)) throw InvalidArgument("simulation: item parameters must be finite");
    for (std::size_t i = 0; i < truth.items(); ++i)
      for (std::size_t r = 0; r + 1 < truth.categories(); ++r)
        if (truth(i, r) > truth(i, r + 1))
          throw InvalidArgument("simulation: thresholds of item " + std::to_string(i + 1) + " are not monotone");
  }
};

namespace detail {

// Largest r with u <= F(theta - delta_r), 0 if none; realizes P(Y >= r) = F(theta - delta_r).
inline int draw_category(ResponseFunctionKind kind, double theta, std::span<const double> thresholds, double u) {
  int y = 0;
  for (std::size_t r = 0; r < thresholds.size(); ++r)
    if (u <= cdf(kind, theta - thresholds[r])) y = static_cast<int>(r) + 1;
  return y;
}

inline ResponseMatrix simulate_cells(const SimulationConfig& config, std::uint64_t replication) {
  const auto theta = draw_persons(config.persons, config.P, config.seed, replication);
  const RandomStream cells(config.seed, replication, StreamId::Cells);
  const std::size_t I = config.items();
  std::vector<int> flat(config.P * I);
  for (std::size_t p = 0; p < config.P; ++p)
    for (std::size_t i = 0; i < I; ++i)
      flat[p * I + i] = draw_category(config.response, theta[p], config.truth.row(i), cells.uniform(p * I + i));
  return ResponseMatrix(config.P, I, flat, static_cast<int>(config.categories()));
}

}  // namespace detail

/// Binary responses Y_pi ~ Bernoulli(F(theta_p - delta_i)).
inline ResponseMatrix simulate_binary(const SimulationConfig& config, std::uint64_t replication = 0) {
  config.validate();
  if (config.categories() != 1) throw InvalidArgument("simulate_binary: one parameter per item expected");
  return detail::simulate_cells(config, replication);
}

/// Graded responses with P(Y_pi >= r) = F(theta_p - delta_ir).
inline ResponseMatrix simulate_poly(const SimulationConfig& config, std::uint64_t replication = 0) {
  config.validate();
  return detail::simulate_cells(config, replication);
}

inline ResponseMatrix simulate(const SimulationConfig& config, std::uint64_t replication = 0) {
  return config.model == ModelKind::Binary ? simulate_binary(config, replication) : simulate_poly(config, replication);
}

struct EstimatorSummary {
  EstimatorKind estimator = EstimatorKind::Separation;
  double mad = 0.0;  // mean over successful replications of mean_i |delta_i - estimate_i|
  std::size_t failures = 0;
  std::vector<double> replication_mad;                           // NaN where estimation failed
  std::vector<std::optional<std::vector<double>>> estimates;      // when keep_estimates
  std::vector<double> gamma10;                                    // chosen scale per replication, NaN if none
};

struct StudyResult {
  std::vector<EstimatorSummary> estimators;
  std::vector<double> truth;  // flattened, re-anchored so the first parameter is 0

  const EstimatorSummary& summary(EstimatorKind kind) const {
    for (const auto& s : estimators)
      if (s.estimator == kind) return s;
    throw InvalidArgument("study did not run estimator " + std::string(to_string(kind)));
  }
};

/// Estimates are identified by delta_11 = 0, so the truth is compared after
/// the same shift.
inline std::vector<double> anchored_truth(const ThresholdMatrix& truth) {
  std::vector<double> t = truth.values();
  const double shift = t.empty() ? 0.0 : t.front();
  for (double& v : t) v -= shift;
  return t;
}

inline StudyResult run_study(const SimulationConfig& config) {
  config.validate();
  if (config.replications < 1) throw InvalidArgument("simulation: at least one replication required");
  const auto truth = anchored_truth(config.truth);
  const std::size_t E = config.estimators.size();
  const std::size_t R = config.replications;

  struct Cell {
    std::optional<std::vector<double>> estimate;
    double gamma10 = std::nan("");
  };
  std::vector<std::vector<Cell>> cells(R, std::vector<Cell>(E));
  parallel_for(R, [&](std::size_t rep) {
    const ResponseMatrix m = simulate(config, rep);
    for (std::size_t e = 0; e < E; ++e) {
      EstimatorConfig ec;
      ec.estimator = config.estimators[e];
      ec.response = config.response;
      ec.loss = config.loss;
      ec.estimate_persons = false;
      try {
        const auto fit = run_estimation(m, ec);
        cells[rep][e].estimate = fit.estimates.values();
        if (fit.gamma10) cells[rep][e].gamma10 = *fit.gamma10;
      } catch (const EstimationError&) {
      }
    }
  });

  StudyResult result;
  result.truth = truth;
  for (std::size_t e = 0; e < E; ++e) {
    EstimatorSummary s;
    s.estimator = config.estimators[e];
    s.replication_mad.assign(R, std::nan(""));
    s.gamma10.assign(R, std::nan(""));
    double total = 0.0;
    std::size_t ok = 0;
    for (std::size_t rep = 0; rep < R; ++rep) {
      const auto& c = cells[rep][e];
      s.gamma10[rep] = c.gamma10;
      if (config.keep_estimates) s.estimates.push_back(c.estimate);
      if (!c.estimate) {
        ++s.failures;
        continue;
      }
      double dev = 0.0;
      for (std::size_t j = 0; j < truth.size(); ++j) dev += std::abs(truth[j] - (*c.estimate)[j]);
      dev /= static_cast<double>(truth.size());
      s.replication_mad[rep] = dev;
      total += dev;
      ++ok;
    }
    s.mad = ok ? total / static_cast<double>(ok) : std::nan("");
    result.estimators.push_back(std::move(s));
  }
  return result;
}

}  // namespace separa
