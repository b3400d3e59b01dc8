#pragma once

// Pairwise separation estimator for binary monotone homogeneity models
// P(Y_pi = 1) = F(theta_p - delta_i).
//
// Replacing each response by a pseudo observation (gamma for 0, 1 - gamma
// for 1) and transforming with F^{-1} turns every discordant pair of
// responses into +-gamma10, gamma10 = F^{-1}(1 - gamma) - F^{-1}(gamma).
// Averaging over persons gives, for items i1, i2,
//
//   delta_i2 - delta_i1  ~  gamma10 * (Y_+i1 - Y_+i2) / n(Y_pi1 != Y_pi2).
//
// The per-pair differences are combined by averaging the anchored vectors
// obtained with every item j as reference, then shifting so delta_1 = 0.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "separa/error.hpp"
#include "separa/response_function.hpp"
#include "separa/response_matrix.hpp"

namespace separa {

struct PseudoObservationScale {
  double gamma10 = 1.0;
  // Set only when the scale was built from a clipping probability or
  // resolved back to one; estimates depend on gamma10 alone.
  std::optional<double> gamma;
  std::optional<double> gamma0;
  std::optional<double> gamma1;

  static PseudoObservationScale unit() { return {}; }

  static PseudoObservationScale from_gamma10(double gamma10) {
    if (!(gamma10 > 0.0) || !std::isfinite(gamma10)) throw DomainError("gamma10 must be positive and finite");
    PseudoObservationScale s;
    s.gamma10 = gamma10;
    return s;
  }

  /// Scale implied by clipping probability gamma in (0, 0.5) under F.
  static PseudoObservationScale from_clipping(ResponseFunctionKind kind, double gamma) {
    if (!(gamma > 0.0 && gamma < 0.5)) throw DomainError("clipping probability must lie in (0, 0.5)");
    PseudoObservationScale s;
    s.gamma = gamma;
    s.gamma0 = quantile(kind, gamma);
    s.gamma1 = quantile(kind, 1.0 - gamma);
    s.gamma10 = *s.gamma1 - *s.gamma0;
    return s;
  }

  /// Inverse of from_clipping: the clipping probability whose scale is gamma10.
  /// gamma10 is strictly decreasing in gamma, so bisection on (0, 0.5) suffices.
  static PseudoObservationScale resolve(ResponseFunctionKind kind, double gamma10) {
    from_gamma10(gamma10);
    double lo = 1e-15;
    double hi = 0.5 - 1e-15;
    if (from_clipping(kind, lo).gamma10 < gamma10) return from_clipping(kind, lo);
    for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (from_clipping(kind, mid).gamma10 > gamma10) lo = mid;
      else hi = mid;
    }
    auto s = from_clipping(kind, 0.5 * (lo + hi));
    s.gamma10 = gamma10;
    return s;
  }
};

struct BinaryItemEstimates {
  std::vector<double> delta;
  std::size_t anchor_index = 0;
  PseudoObservationScale scale;
};

namespace detail {

inline void require_binary(const ResponseMatrix& m, const char* who) {
  if (!m.is_binary()) throw InvalidArgument(std::string(who) + ": binary (k = 1) responses required");
}

inline void require_item(const ResponseMatrix& m, std::size_t i, const char* who) {
  if (i >= m.items()) throw InvalidArgument(std::string(who) + ": item index out of range");
}

/// Square table of optional pairwise differences; entry (i, j) estimates delta_i - delta_j.
using DifferenceTable = std::vector<std::vector<std::optional<double>>>;

/// Anchor-average of a difference table:
///   delta_i = mean over usable j of (d_ij - d_1j),  delta_1 = 0,
/// where j is usable for i when both d_ij and d_1j are defined.
inline std::vector<double> anchor_average(const DifferenceTable& d, const std::vector<std::string>& labels) {
  const std::size_t n = d.size();
  std::vector<double> delta(n, 0.0);
  for (std::size_t i = 1; i < n; ++i) {
    double sum = 0.0;
    std::size_t used = 0;
    for (std::size_t j = 0; j < n; ++j) {
      if (!d[i][j] || !d[0][j]) continue;
      sum += *d[i][j] - *d[0][j];
      ++used;
    }
    if (used == 0)
      throw EstimationError("item '" + labels[i] + "' has no usable item pair (no discordant responses)");
    delta[i] = sum / static_cast<double>(used);
  }
  return delta;
}

}  // namespace detail

/// (Y_+i1 - Y_+i2) / n(Y_pi1 != Y_pi2): unit-scale estimate of
/// (delta_i2 - delta_i1). Empty when the two columns never disagree.
inline std::optional<double> unit_pairwise_difference(const ResponseMatrix& m, std::size_t i1, std::size_t i2) {
  detail::require_binary(m, "unit_pairwise_difference");
  detail::require_item(m, i1, "unit_pairwise_difference");
  detail::require_item(m, i2, "unit_pairwise_difference");
  if (i1 == i2) throw InvalidArgument("unit_pairwise_difference: items must differ");
  const PairCounts c = pair_counts(m.column(i1), m.column(i2));
  if (c.discordant() == 0) return std::nullopt;
  return static_cast<double>(c.n10 - c.n01) / static_cast<double>(c.discordant());
}

/// Table of unit-scale differences, entry (i, j) estimating delta_i - delta_j; diagonal is 0.
inline detail::DifferenceTable unit_difference_table(const ResponseMatrix& m) {
  detail::require_binary(m, "unit_difference_table");
  const std::size_t n = m.items();
  detail::DifferenceTable d(n, std::vector<std::optional<double>>(n));
  for (std::size_t i = 0; i < n; ++i) {
    d[i][i] = 0.0;
    for (std::size_t j = 0; j < n; ++j)
      if (j != i) d[i][j] = unit_pairwise_difference(m, j, i);
  }
  return d;
}

/// Rescales estimates to a new gamma10; exact linearity relative to the unit scale.
inline BinaryItemEstimates rescale(const BinaryItemEstimates& unit, double gamma10) {
  BinaryItemEstimates out;
  out.anchor_index = unit.anchor_index;
  out.scale = PseudoObservationScale::from_gamma10(gamma10);
  out.delta.resize(unit.delta.size());
  const double factor = gamma10 / unit.scale.gamma10;
  for (std::size_t i = 0; i < unit.delta.size(); ++i) out.delta[i] = factor * unit.delta[i];
  return out;
}

/// Separation estimate at gamma10 = 1.
inline BinaryItemEstimates separation_unit_estimate(const ResponseMatrix& m) {
  BinaryItemEstimates est;
  est.delta = detail::anchor_average(unit_difference_table(m), m.item_ids());
  return est;
}

/// Pairwise separation estimator with scale gamma10; delta[0] is exactly 0.
inline BinaryItemEstimates separation_estimate(const ResponseMatrix& m, double gamma10) {
  return rescale(separation_unit_estimate(m), gamma10);
}

}  // namespace separa
