#pragma once

// Reference implementations used as test oracles. They are deliberately naive
// (quadrature, enumeration, grids) and share no numerics with the library.

#include <cmath>
#include <cstddef>
#include <optional>
#include <vector>

namespace oracle {

/// Phi(x) by composite Simpson quadrature of the density from 0 to x.
inline double normal_cdf(double x, int intervals = 200000) {
  const double h = x / intervals;
  auto pdf = [](double t) { return std::exp(-0.5 * t * t) / std::sqrt(2.0 * M_PI); };
  double s = pdf(0.0) + pdf(x);
  for (int j = 1; j < intervals; ++j) s += (j % 2 ? 4.0 : 2.0) * pdf(j * h);
  return 0.5 + s * h / 3.0;
}

/// Inverse of normal_cdf by bisection.
inline double normal_quantile(double p) {
  double lo = -10.0, hi = 10.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (normal_cdf(mid, 20000) < p ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

/// gamma_s as sums over all s-subsets of the product of eps.
inline std::vector<double> symmetric_functions(const std::vector<double>& eps) {
  const std::size_t n = eps.size();
  std::vector<double> g(n + 1, 0.0);
  for (unsigned long mask = 0; mask < (1UL << n); ++mask) {
    double prod = 1.0;
    std::size_t size = 0;
    for (std::size_t i = 0; i < n; ++i)
      if (mask & (1UL << i)) {
        prod *= eps[i];
        ++size;
      }
    g[size] += prod;
  }
  return g;
}

/// Logistic-model row log-likelihood written out from scratch (binary items).
inline double logistic_loglik(const std::vector<int>& row, const std::vector<double>& delta, double theta) {
  double ll = 0.0;
  for (std::size_t i = 0; i < row.size(); ++i) {
    const double eta = theta - delta[i];
    ll += row[i] ? -std::log1p(std::exp(-eta)) : -std::log1p(std::exp(eta));
  }
  return ll;
}

/// Argmax of a log-likelihood over a uniform grid on [lo, hi].
template <class F>
double grid_argmax(F&& loglik, double lo = -10.0, double hi = 10.0, double step = 1e-4) {
  double best = lo, best_value = loglik(lo);
  const long n = std::lround((hi - lo) / step);
  for (long j = 1; j <= n; ++j) {
    const double t = lo + j * step;
    const double v = loglik(t);
    if (v > best_value) {
      best_value = v;
      best = t;
    }
  }
  return best;
}

/// Separation estimates by direct enumeration over persons:
/// d(i, j) = sum_p (Y_pj - Y_pi) / #{p : Y_pi != Y_pj}, d(i, i) = 0,
/// delta_i = gamma10 * mean_j (d(i, j) - d(1, j)). Requires every pair to disagree somewhere.
inline std::vector<double> separation(const std::vector<std::vector<int>>& rows, double gamma10) {
  const std::size_t I = rows.front().size();
  auto d = [&](std::size_t i, std::size_t j) {
    if (i == j) return 0.0;
    double num = 0.0, den = 0.0;
    for (const auto& y : rows) {
      num += y[j] - y[i];
      den += y[i] != y[j] ? 1.0 : 0.0;
    }
    return num / den;
  };
  std::vector<double> delta(I, 0.0);
  for (std::size_t i = 0; i < I; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < I; ++j) s += d(i, j) - d(0, j);
    delta[i] = gamma10 * (s / static_cast<double>(I));
  }
  return delta;
}

}  // namespace oracle
