#pragma once

// Bootstrap standard errors: persons are resampled with replacement and the
// whole estimation pipeline (including scale selection) is rerun per resample.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "separa/error.hpp"
#include "separa/fit.hpp"
#include "separa/parallel.hpp"
#include "separa/random.hpp"
#include "separa/response_matrix.hpp"

namespace separa {

struct BootstrapReport {
  std::vector<double> se;  // flattened like ThresholdMatrix::values()
  std::size_t B = 0;
  std::size_t n_failed = 0;
  std::uint64_t seed = 0;
};

inline constexpr std::size_t kDefaultBootstrapResamples = 200;

/// Row indices of bootstrap resample `replicate`.
inline std::vector<std::size_t> resample_rows(std::size_t persons, std::uint64_t seed, std::uint64_t replicate) {
  const RandomStream stream(seed, replicate, StreamId::Resample);
  std::vector<std::size_t> rows(persons);
  for (std::size_t p = 0; p < persons; ++p) rows[p] = static_cast<std::size_t>(stream.below(p, persons));
  return rows;
}

inline BootstrapReport bootstrap_se(const ResponseMatrix& m, const EstimatorConfig& config,
                                    std::size_t B = kDefaultBootstrapResamples, std::uint64_t seed = 0) {
  if (B < 2) throw InvalidArgument("bootstrap: B must be at least 2");
  EstimatorConfig cfg = config;
  cfg.estimate_persons = false;

  std::vector<std::optional<std::vector<double>>> draws(B);
  parallel_for(B, [&](std::size_t b) {
    const auto rows = resample_rows(m.persons(), seed, b);
    try {
      draws[b] = run_estimation(m.select_persons(rows), cfg).estimates.values();
    } catch (const EstimationError&) {
      // counted below
    }
  });

  BootstrapReport report;
  report.B = B;
  report.seed = seed;
  std::vector<const std::vector<double>*> ok;
  for (const auto& d : draws) {
    if (d) ok.push_back(&*d);
    else ++report.n_failed;
  }
  if (2 * report.n_failed > B || ok.size() < 2)
    throw EstimationError("bootstrap: " + std::to_string(report.n_failed) + " of " + std::to_string(B) +
                          " resamples failed to estimate; data too degenerate for the bootstrap");

  const std::size_t n = ok.front()->size();
  report.se.assign(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    double mean = 0.0;
    for (const auto* d : ok) mean += (*d)[j];
    mean /= static_cast<double>(ok.size());
    double ss = 0.0;
    for (const auto* d : ok) ss += ((*d)[j] - mean) * ((*d)[j] - mean);
    report.se[j] = std::sqrt(ss / static_cast<double>(ok.size() - 1));
  }
  return report;
}

}  // namespace separa
