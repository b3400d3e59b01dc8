#pragma once

// Person abilities at fixed item parameters, goodness-of-fit losses, and the
// data-driven choice of the separation estimator's scale gamma10.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "separa/error.hpp"
#include "separa/response_function.hpp"
#include "separa/response_matrix.hpp"
#include "separa/thresholds.hpp"

namespace separa {

enum class LossKind { Quadratic, KullbackLeibler };

inline std::string_view to_string(LossKind kind) noexcept {
  return kind == LossKind::Quadratic ? "quadratic" : "kl";
}

inline std::optional<LossKind> parse_loss(std::string_view name) noexcept {
  if (name == "quadratic") return LossKind::Quadratic;
  if (name == "kl") return LossKind::KullbackLeibler;
  return std::nullopt;
}

inline constexpr double kThetaLower = -10.0;
inline constexpr double kThetaUpper = 10.0;
inline constexpr double kCategoryFloor = 1e-300;

/// P(Y = y) for one item under the cumulative model P(Y >= r) = F(theta - delta_r),
/// with P(Y >= 0) = 1 and P(Y >= k+1) = 0. Thresholds must be non-decreasing.
inline double category_probability(ResponseFunctionKind kind, double theta, std::span<const double> thresholds,
                                   int y) {
  const int k = static_cast<int>(thresholds.size());
  const double upper = y == 0 ? 1.0 : cdf(kind, theta - thresholds[static_cast<std::size_t>(y - 1)]);
  const double lower = y == k ? 0.0 : cdf(kind, theta - thresholds[static_cast<std::size_t>(y)]);
  return std::max(upper - lower, kCategoryFloor);
}

/// Log-likelihood of one response row at ability theta.
inline double person_loglik(std::span<const int> row, const ThresholdMatrix& params, ResponseFunctionKind kind,
                            double theta) {
  double ll = 0.0;
  for (std::size_t i = 0; i < row.size(); ++i) ll += std::log(category_probability(kind, theta, params.row(i), row[i]));
  return ll;
}

namespace detail {

/// Golden-section search for the minimum of a unimodal f on [a, b].
template <class F>
std::pair<double, double> golden_minimize(F&& f, double a, double b, double tol) {
  constexpr double inv_phi = 0.6180339887498949;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c);
  double fd = f(d);
  while (b - a > tol) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  return fc <= fd ? std::pair{c, fc} : std::pair{d, fd};
}

}  // namespace detail

/// Maximum-likelihood ability for one row at fixed item parameters:
/// golden-section search on [-10, 10] to 1e-8, then the bounds are taken
/// when they are at least as likely (all-zero and all-maximum rows).
inline double person_mle(std::span<const int> row, const ThresholdMatrix& params, ResponseFunctionKind kind) {
  if (row.size() != params.items()) throw InvalidArgument("person_mle: row length does not match item count");
  for (double v : params.values())
    if (!std::isfinite(v)) throw InvalidArgument("person_mle: item parameters must be finite");
  auto neg = [&](double t) { return -person_loglik(row, params, kind, t); };
  auto [theta, value] = detail::golden_minimize(neg, kThetaLower, kThetaUpper, 1e-8);
  const double at_low = neg(kThetaLower);
  const double at_high = neg(kThetaUpper);
  if (at_high <= value && at_high <= at_low) return kThetaUpper;
  if (at_low <= value) return kThetaLower;
  return theta;
}

/// Distinct response rows of a matrix. Persons sharing a row share an MLE.
struct ResponsePatterns {
  std::vector<std::vector<int>> rows;
  std::vector<std::size_t> multiplicity;
  std::vector<std::size_t> person_pattern;  // pattern index of each person

  explicit ResponsePatterns(const ResponseMatrix& m) : person_pattern(m.persons()) {
    std::map<std::vector<int>, std::size_t> index;
    for (std::size_t p = 0; p < m.persons(); ++p) {
      auto row = m.row(p);
      auto [it, inserted] = index.try_emplace(std::move(row), rows.size());
      if (inserted) {
        rows.push_back(it->first);
        multiplicity.push_back(0);
      }
      ++multiplicity[it->second];
      person_pattern[p] = it->second;
    }
  }
};

/// Loss of one cell given the category probabilities of the item:
/// quadratic sum_r (y_r - pi_r)^2 (= 2 (Y - pi)^2 for binary items),
/// KL sum_r y_r log(y_r / pi_r) = -log pi_y with 0 log 0 = 0.
inline double cell_loss(LossKind loss, ResponseFunctionKind kind, double theta, std::span<const double> thresholds,
                        int y) {
  if (loss == LossKind::KullbackLeibler) return -std::log(category_probability(kind, theta, thresholds, y));
  const int k = static_cast<int>(thresholds.size());
  double sum = 0.0;
  for (int r = 0; r <= k; ++r) {
    const double pi = category_probability(kind, theta, thresholds, r);
    const double indicator = r == y ? 1.0 : 0.0;
    sum += (indicator - pi) * (indicator - pi);
  }
  return sum;
}

struct PersonFit {
  std::vector<double> theta;  // per person
  double loss = 0.0;
};

/// Person MLEs for every person and the summed loss over all cells.
/// `params` must be non-decreasing within items (see isotonize).
inline PersonFit fit_persons(const ResponsePatterns& patterns, const ThresholdMatrix& params,
                             ResponseFunctionKind kind, LossKind loss) {
  std::vector<double> pattern_theta(patterns.rows.size());
  double total = 0.0;
  for (std::size_t u = 0; u < patterns.rows.size(); ++u) {
    const auto& row = patterns.rows[u];
    pattern_theta[u] = person_mle(row, params, kind);
    double row_loss = 0.0;
    for (std::size_t i = 0; i < row.size(); ++i) row_loss += cell_loss(loss, kind, pattern_theta[u], params.row(i), row[i]);
    total += static_cast<double>(patterns.multiplicity[u]) * row_loss;
  }
  PersonFit fit;
  fit.loss = total;
  fit.theta.resize(patterns.person_pattern.size());
  for (std::size_t p = 0; p < fit.theta.size(); ++p) fit.theta[p] = pattern_theta[patterns.person_pattern[p]];
  return fit;
}

inline void check_arity(const ResponseMatrix& m, const ThresholdMatrix& params) {
  if (params.items() != m.items() || static_cast<int>(params.categories()) != m.max_category())
    throw InvalidArgument("item parameters do not match the response matrix dimensions");
}

/// Sum over all persons and items of the loss at the persons' MLEs.
inline double total_loss(const ResponseMatrix& m, const ThresholdMatrix& params, ResponseFunctionKind kind,
                         LossKind loss) {
  check_arity(m, params);
  return fit_persons(ResponsePatterns(m), isotonize(params), kind, loss).loss;
}

struct ScaleSelection {
  std::vector<std::pair<double, double>> grid;  // (gamma10, loss)
  double chosen_gamma10 = 1.0;
  double chosen_loss = 0.0;
  bool at_boundary = false;  // grid minimum sits on the first or last grid point
  std::vector<std::string> warnings;
};

struct ScaleGrid {
  double step = 0.05;
  int points = 100;  // gamma10 = step * n, n = 1..points
  double refine_tolerance = 1e-3;

  double at(int n) const noexcept { return step * static_cast<double>(n + 1); }
};

/// Chooses gamma10 minimizing Loss(gamma10) for an estimator that is linear in
/// gamma10. `unit` holds its estimates at gamma10 = 1 (raw, not isotonized).
inline ScaleSelection select_scale(const ResponseMatrix& m, const ThresholdMatrix& unit, ResponseFunctionKind kind,
                                   LossKind loss, const ScaleGrid& grid = {}) {
  check_arity(m, unit);
  const ResponsePatterns patterns(m);
  auto loss_at = [&](double g) { return fit_persons(patterns, isotonize(unit.scaled(g)), kind, loss).loss; };

  ScaleSelection sel;
  sel.grid.reserve(static_cast<std::size_t>(grid.points));
  int best = -1;
  for (int n = 0; n < grid.points; ++n) {
    const double g = grid.at(n);
    const double value = loss_at(g);
    sel.grid.emplace_back(g, value);
    if (std::isfinite(value) && (best < 0 || value < sel.grid[static_cast<std::size_t>(best)].second)) best = n;
  }
  if (best < 0) throw EstimationError("scale selection: loss is not finite at any grid point");

  sel.chosen_gamma10 = sel.grid[static_cast<std::size_t>(best)].first;
  sel.chosen_loss = sel.grid[static_cast<std::size_t>(best)].second;
  sel.at_boundary = best == 0 || best == grid.points - 1;
  if (sel.at_boundary)
    sel.warnings.push_back("scale selection: loss minimum lies on the grid boundary (gamma10 = " +
                           std::to_string(sel.chosen_gamma10) + ")");

  const double lo = grid.at(std::max(best - 1, 0));
  const double hi = grid.at(std::min(best + 1, grid.points - 1));
  auto [g, value] = detail::golden_minimize(loss_at, lo, hi, grid.refine_tolerance);
  if (std::isfinite(value) && value < sel.chosen_loss) {
    sel.chosen_gamma10 = g;
    sel.chosen_loss = value;
  }
  return sel;
}

}  // namespace separa
