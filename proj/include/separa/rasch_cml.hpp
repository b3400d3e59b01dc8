#pragma once

// Rasch baselines that exploit the sufficiency of total scores:
// conditional maximum likelihood through elementary symmetric functions,
// and pairwise conditional estimation from two-item discordance ratios.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "separa/binary_separation.hpp"
#include "separa/error.hpp"
#include "separa/response_matrix.hpp"

namespace separa {

/// gamma_s(eps) = sum over s-subsets of the product of eps_i, s = 0..I,
/// with partials d gamma_s / d eps_i = gamma_{s-1} computed without item i.
struct SymmetricFunctionTable {
  std::vector<double> epsilon;
  std::vector<double> gamma;                  // size I + 1
  std::vector<std::vector<double>> partials;  // partials[i][s], size I x (I + 1)
};

namespace detail {

// Summation recursion: fold items one at a time, gamma_s += eps * gamma_{s-1}.
// Items listed in `skip` are left out.
inline std::vector<double> fold_symmetric(std::span<const double> eps, std::size_t skip_a = SIZE_MAX,
                                          std::size_t skip_b = SIZE_MAX) {
  std::vector<double> g(eps.size() + 1, 0.0);
  g[0] = 1.0;
  std::size_t folded = 0;
  for (std::size_t i = 0; i < eps.size(); ++i) {
    if (i == skip_a || i == skip_b) continue;
    ++folded;
    for (std::size_t s = folded; s >= 1; --s) g[s] += eps[i] * g[s - 1];
  }
  return g;
}

}  // namespace detail

inline SymmetricFunctionTable elementary_symmetric(std::span<const double> epsilon) {
  for (double e : epsilon)
    if (!(e > 0.0) || !std::isfinite(e)) throw DomainError("elementary_symmetric: epsilon must be positive and finite");
  SymmetricFunctionTable t;
  t.epsilon.assign(epsilon.begin(), epsilon.end());
  t.gamma = detail::fold_symmetric(epsilon);
  const std::size_t n = epsilon.size();
  t.partials.assign(n, std::vector<double>(n + 1, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    const auto without = detail::fold_symmetric(epsilon, i);
    for (std::size_t s = 1; s <= n; ++s) t.partials[i][s] = without[s - 1];
  }
  return t;
}

struct CmlFit {
  std::vector<double> delta;  // delta[0] == 0
  double loglik = 0.0;
  bool converged = false;
  int iterations = 0;
  std::size_t dropped_persons = 0;
  double gradient_norm = 0.0;  // max-norm over free parameters at the reported point
};

struct CmlOptions {
  int max_iterations = 100;
  double gradient_tolerance = 1e-8;
  int max_halvings = 20;
};

namespace detail {

// Sufficient statistics of the conditional likelihood after dropping
// persons with extreme scores.
struct ConditionalStats {
  std::vector<double> item_totals;   // t_i
  std::vector<double> score_counts;  // n_s, s = 0..I
  std::size_t dropped = 0;
};

inline ConditionalStats conditional_stats(const ResponseMatrix& m) {
  const std::size_t I = m.items();
  ConditionalStats st;
  st.item_totals.assign(I, 0.0);
  st.score_counts.assign(I + 1, 0.0);
  for (std::size_t p = 0; p < m.persons(); ++p) {
    std::size_t s = 0;
    for (std::size_t i = 0; i < I; ++i) s += static_cast<std::size_t>(m(p, i));
    if (s == 0 || s == I) {
      ++st.dropped;
      continue;
    }
    st.score_counts[s] += 1.0;
    for (std::size_t i = 0; i < I; ++i) st.item_totals[i] += m(p, i);
  }
  return st;
}

struct ConditionalEval {
  double loglik = 0.0;
  Eigen::VectorXd gradient;  // d loglik / d delta, all items
  Eigen::MatrixXd hessian;
};

inline ConditionalEval conditional_eval(const ConditionalStats& st, const std::vector<double>& delta,
                                        bool with_hessian) {
  const std::size_t I = delta.size();
  std::vector<double> eps(I);
  for (std::size_t i = 0; i < I; ++i) eps[i] = std::exp(-delta[i]);
  const auto g = fold_symmetric(eps);

  ConditionalEval ev;
  ev.gradient = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(I));
  for (std::size_t i = 0; i < I; ++i) ev.loglik -= st.item_totals[i] * delta[i];
  for (std::size_t s = 1; s < I; ++s)
    if (st.score_counts[s] > 0) ev.loglik -= st.score_counts[s] * std::log(g[s]);

  // pi_i(s) = eps_i gamma^{(i)}_{s-1} / gamma_s
  std::vector<std::vector<double>> pi(I, std::vector<double>(I + 1, 0.0));
  for (std::size_t i = 0; i < I; ++i) {
    const auto gi = fold_symmetric(eps, i);
    for (std::size_t s = 1; s < I; ++s) pi[i][s] = eps[i] * gi[s - 1] / g[s];
    double expected = 0.0;
    for (std::size_t s = 1; s < I; ++s) expected += st.score_counts[s] * pi[i][s];
    ev.gradient[static_cast<Eigen::Index>(i)] = expected - st.item_totals[i];
  }
  if (!with_hessian) return ev;

  ev.hessian = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(I), static_cast<Eigen::Index>(I));
  for (std::size_t i = 0; i < I; ++i) {
    double hii = 0.0;
    for (std::size_t s = 1; s < I; ++s) hii -= st.score_counts[s] * pi[i][s] * (1.0 - pi[i][s]);
    ev.hessian(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = hii;
    for (std::size_t j = i + 1; j < I; ++j) {
      const auto gij = fold_symmetric(eps, i, j);
      double hij = 0.0;
      for (std::size_t s = 2; s < I; ++s) {
        const double joint = eps[i] * eps[j] * gij[s - 2] / g[s];
        hij -= st.score_counts[s] * (joint - pi[i][s] * pi[j][s]);
      }
      ev.hessian(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = hij;
      ev.hessian(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = hij;
    }
  }
  return ev;
}

}  // namespace detail

/// Conditional ML for the binary Rasch model with delta_1 = 0, by damped Newton.
inline CmlFit cml_fit(const ResponseMatrix& m, const CmlOptions& opt = {}) {
  detail::require_binary(m, "cml_fit");
  const std::size_t I = m.items();
  if (I < 2) throw InvalidArgument("cml_fit: at least two items required");
  const auto st = detail::conditional_stats(m);
  double kept = 0.0;
  for (double c : st.score_counts) kept += c;
  if (kept == 0.0) throw NonExistenceError("conditional estimates do not exist: every person has an extreme score");
  for (std::size_t i = 0; i < I; ++i) {
    if (st.item_totals[i] == 0.0 || st.item_totals[i] == kept)
      throw NonExistenceError("degenerate item '" + m.item_ids()[i] + "': solved by " +
                              (st.item_totals[i] == 0.0 ? "none" : "all") +
                              " of the persons with non-extreme scores; conditional estimates do not exist");
  }

  const auto free = static_cast<Eigen::Index>(I - 1);
  CmlFit fit;
  fit.dropped_persons = st.dropped;
  std::vector<double> delta(I, 0.0);
  auto ev = detail::conditional_eval(st, delta, true);
  for (int it = 0;; ++it) {
    fit.gradient_norm = ev.gradient.tail(free).cwiseAbs().maxCoeff();
    fit.iterations = it;
    if (fit.gradient_norm < opt.gradient_tolerance) {
      fit.converged = true;
      break;
    }
    if (it == opt.max_iterations)
      throw ConvergenceError("conditional ML did not converge in " + std::to_string(opt.max_iterations) +
                                 " iterations (estimates may not exist)",
                             delta);
    const Eigen::MatrixXd neg_h = -ev.hessian.bottomRightCorner(free, free);
    const Eigen::LDLT<Eigen::MatrixXd> ldlt(neg_h);
    if (ldlt.info() != Eigen::Success || !ldlt.isPositive())
      throw ConvergenceError("conditional ML: information matrix is singular", delta);
    const Eigen::VectorXd step = ldlt.solve(ev.gradient.tail(free));

    double t = 1.0;
    bool accepted = false;
    for (int h = 0; h <= opt.max_halvings; ++h, t *= 0.5) {
      std::vector<double> trial = delta;
      for (Eigen::Index j = 0; j < free; ++j) trial[static_cast<std::size_t>(j) + 1] += t * step[j];
      auto trial_ev = detail::conditional_eval(st, trial, true);
      if (std::isfinite(trial_ev.loglik) && trial_ev.loglik >= ev.loglik - 1e-12 * std::abs(ev.loglik)) {
        delta = std::move(trial);
        ev = std::move(trial_ev);
        accepted = true;
        break;
      }
    }
    if (!accepted) throw ConvergenceError("conditional ML: step halving failed to increase the likelihood", delta);
  }
  fit.delta = delta;
  fit.loglik = ev.loglik;
  return fit;
}

/// Pairwise conditional estimation: for items i, j with both one-sided counts
/// positive, log(n(Y_j=1,Y_i=0) / n(Y_j=0,Y_i=1)) estimates delta_i - delta_j;
/// the pair estimates are combined with the separation estimator's anchor average.
inline BinaryItemEstimates pairwise_conditional_fit(const ResponseMatrix& m) {
  detail::require_binary(m, "pairwise_conditional_fit");
  const std::size_t n = m.items();
  detail::DifferenceTable d(n, std::vector<std::optional<double>>(n));
  for (std::size_t i = 0; i < n; ++i) {
    d[i][i] = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      const PairCounts c = pair_counts(m.column(j), m.column(i));
      if (c.n10 > 0 && c.n01 > 0) d[i][j] = std::log(static_cast<double>(c.n10) / static_cast<double>(c.n01));
    }
  }
  BinaryItemEstimates est;
  est.delta = detail::anchor_average(d, m.item_ids());
  return est;
}

}  // namespace separa
