#pragma once

// Separation estimators for the graded response model
// P(Y_pi >= r) = F(theta_p - delta_ir), built on split variables Y(r) = [Y >= r].
// Every binary split of item i1 at r against item i2 at q yields an estimate
// of delta_{i2,q} - delta_{i1,r} in the same way as the binary estimator.

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "separa/binary_separation.hpp"
#include "separa/error.hpp"
#include "separa/response_matrix.hpp"
#include "separa/thresholds.hpp"

namespace separa {

struct PolyItemEstimates {
  ThresholdMatrix thresholds;                                        // raw estimates, delta_11 = 0
  PseudoObservationScale scale;                                      // gamma10 used
  std::vector<std::pair<std::size_t, std::size_t>> monotonicity_violations;  // (item, r): delta_ir > delta_i,r+1, 0-based
  std::vector<std::string> warnings;

  /// Thresholds made non-decreasing per item, for probability evaluation.
  ThresholdMatrix isotonized() const { return isotonize(thresholds); }
};

namespace detail {

inline std::vector<std::pair<std::size_t, std::size_t>> find_violations(const ThresholdMatrix& t) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t i = 0; i < t.items(); ++i)
    for (std::size_t r = 0; r + 1 < t.categories(); ++r)
      if (t(i, r) > t(i, r + 1)) out.emplace_back(i, r);
  return out;
}

inline void require_category(const ResponseMatrix& m, int r, const char* who) {
  if (r < 1 || r > m.max_category()) throw InvalidArgument(std::string(who) + ": category out of range 1..k");
}

// Unit-scale estimate of delta_{i2,q} - delta_{i1,r} from split columns.
inline std::optional<double> split_unit_difference(const ResponseMatrix& m, std::size_t i1, int r, std::size_t i2,
                                                   int q) {
  const auto a = split_column(m.column(i1), r);
  const auto b = split_column(m.column(i2), q);
  const PairCounts c = pair_counts(a, b);
  if (c.discordant() == 0) return std::nullopt;
  return static_cast<double>(c.n10 - c.n01) / static_cast<double>(c.discordant());
}

inline std::string cell_name(const ResponseMatrix& m, std::size_t i, std::size_t q) {
  return "(item '" + m.item_ids()[i] + "', category " + std::to_string(q) + ")";
}

// Anchor estimate at unit scale: delta_iq from split (item 1, category 1) against (i, q).
inline ThresholdMatrix anchor_unit_thresholds(const ResponseMatrix& m) {
  const auto k = static_cast<std::size_t>(m.max_category());
  ThresholdMatrix t(m.items(), k);
  for (std::size_t i = 0; i < m.items(); ++i) {
    for (std::size_t q = 1; q <= k; ++q) {
      if (i == 0 && q == 1) continue;
      const auto d = split_unit_difference(m, 0, 1, i, static_cast<int>(q));
      if (!d) throw EstimationError("no discordant split responses between the anchor (item '" + m.item_ids()[0] +
                                    "', category 1) and " + cell_name(m, i, q));
      t(i, q - 1) = *d;
    }
  }
  return t;
}

inline PolyItemEstimates finish(ThresholdMatrix unit, double gamma10, std::vector<std::string> warnings = {}) {
  PolyItemEstimates est;
  est.thresholds = unit.scaled(gamma10);
  est.scale = PseudoObservationScale::from_gamma10(gamma10);
  est.monotonicity_violations = find_violations(est.thresholds);
  est.warnings = std::move(warnings);
  return est;
}

}  // namespace detail

/// gamma10 * (n(Y_i1(r)=1, Y_i2(q)=0) - n(Y_i1(r)=0, Y_i2(q)=1)) / n(Y_i1(r) != Y_i2(q)),
/// an estimate of delta_{i2,q} - delta_{i1,r}. Items are 0-based, categories 1..k.
inline std::optional<double> poly_pairwise_difference(const ResponseMatrix& m, std::size_t i1, int r, std::size_t i2,
                                                      int q, double gamma10) {
  detail::require_item(m, i1, "poly_pairwise_difference");
  detail::require_item(m, i2, "poly_pairwise_difference");
  detail::require_category(m, r, "poly_pairwise_difference");
  detail::require_category(m, q, "poly_pairwise_difference");
  PseudoObservationScale::from_gamma10(gamma10);
  const auto d = detail::split_unit_difference(m, i1, r, i2, q);
  if (!d) return std::nullopt;
  return gamma10 * *d;
}

/// Thresholds at gamma10 = 1 for the anchor-only estimator.
inline ThresholdMatrix poly_anchor_unit(const ResponseMatrix& m) { return detail::anchor_unit_thresholds(m); }

/// Thresholds at gamma10 = 1 for the item-swapping averaged estimator, with
/// warnings for swap configurations that had to be dropped.
inline std::pair<ThresholdMatrix, std::vector<std::string>> poly_averaged_unit(const ResponseMatrix& m) {
  const std::size_t I = m.items();
  const auto k = static_cast<std::size_t>(m.max_category());
  ThresholdMatrix sum(I, k);
  std::size_t used = 0;
  std::vector<std::string> warnings;
  for (std::size_t a = 0; a < I; ++a) {
    ThresholdMatrix swapped;
    try {
      swapped = detail::anchor_unit_thresholds(m.swap_items(0, a));
    } catch (const EstimationError& e) {
      warnings.push_back("anchor item '" + m.item_ids()[a] + "' dropped from the average: " + e.what());
      continue;
    }
    // swapped row 0 belongs to item a and row a to item 0
    ThresholdMatrix aligned(I, k);
    for (std::size_t i = 0; i < I; ++i) {
      const std::size_t src = i == 0 ? a : (i == a ? 0 : i);
      for (std::size_t r = 0; r < k; ++r) aligned(i, r) = swapped(src, r);
    }
    const double shift = aligned(0, 0);
    for (std::size_t i = 0; i < I; ++i)
      for (std::size_t r = 0; r < k; ++r) sum(i, r) += aligned(i, r) - shift;
    ++used;
  }
  if (used == 0) throw EstimationError("every anchor configuration is degenerate; no averaged estimate");
  ThresholdMatrix mean(I, k);
  for (std::size_t i = 0; i < I; ++i)
    for (std::size_t r = 0; r < k; ++r) mean(i, r) = sum(i, r) / static_cast<double>(used);
  return {mean, warnings};
}

/// Anchor-only estimator: (item 1, category 1) is the reference, delta_11 = 0.
inline PolyItemEstimates poly_anchor_estimate(const ResponseMatrix& m, double gamma10) {
  PseudoObservationScale::from_gamma10(gamma10);
  return detail::finish(poly_anchor_unit(m), gamma10);
}

/// Average of the anchor estimators obtained with every item swapped into the
/// anchor position, each re-anchored to delta_11 = 0 before averaging.
inline PolyItemEstimates poly_averaged_estimate(const ResponseMatrix& m, double gamma10) {
  PseudoObservationScale::from_gamma10(gamma10);
  auto [unit, warnings] = poly_averaged_unit(m);
  return detail::finish(std::move(unit), gamma10, std::move(warnings));
}

}  // namespace separa
