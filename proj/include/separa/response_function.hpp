#pragma once

// Strictly monotone response functions F(eta) = P(Y = 1 | theta - delta = eta)
// and their quantile functions.

#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <string_view>

#include "separa/error.hpp"

namespace separa {

enum class ResponseFunctionKind {
  Logistic,
  NormalOgive,
  GumbelMax,    // maximum-value distribution, exp(-exp(-eta))
  GompertzMin,  // minimum-value distribution, 1 - exp(-exp(eta))
};

inline constexpr std::array<ResponseFunctionKind, 4> kAllResponseFunctions = {
    ResponseFunctionKind::Logistic, ResponseFunctionKind::NormalOgive, ResponseFunctionKind::GumbelMax,
    ResponseFunctionKind::GompertzMin};

inline constexpr double kCdfFloor = 1e-300;
inline constexpr double kCdfCeiling = 1.0 - 1e-16;

inline std::string_view to_string(ResponseFunctionKind kind) noexcept {
  switch (kind) {
    case ResponseFunctionKind::Logistic: return "logistic";
    case ResponseFunctionKind::NormalOgive: return "normal";
    case ResponseFunctionKind::GumbelMax: return "gumbel";
    case ResponseFunctionKind::GompertzMin: return "gompertz";
  }
  return "logistic";
}

inline std::optional<ResponseFunctionKind> parse_response_function(std::string_view name) noexcept {
  for (auto kind : kAllResponseFunctions)
    if (to_string(kind) == name) return kind;
  return std::nullopt;
}

namespace detail {

inline double standard_normal_cdf(double x) noexcept { return 0.5 * std::erfc(-x * M_SQRT1_2); }

inline double standard_normal_pdf(double x) noexcept { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * M_PI); }

// Acklam's rational approximation for p <= 0.5 (relative error ~1.2e-9),
// polished with one Newton step against erfc.
inline double lower_normal_quantile(double p) noexcept {
  static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02, -2.759285104469687e+02,
                                 1.383577518672690e+02,  -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02, -1.556989798598866e+02,
                                 6.680131188771972e+01,  -1.328068155288572e+01};
  static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e+00,
                                 -2.549732539343734e+00, 4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e+00,
                                 3.754408661907416e+00};
  constexpr double p_low = 0.02425;

  double x;
  if (p < p_low) {
    const double q = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else {
    const double q = p - 0.5;
    const double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  }
  x -= (standard_normal_cdf(x) - p) / standard_normal_pdf(x);
  return x;
}

inline double clamp_probability(double p) noexcept {
  return p < kCdfFloor ? kCdfFloor : (p > kCdfCeiling ? kCdfCeiling : p);
}

// Unchecked evaluation; callers guarantee finite eta.
inline double raw_cdf(ResponseFunctionKind kind, double eta) noexcept {
  switch (kind) {
    case ResponseFunctionKind::Logistic:
      if (eta >= 0) return 1.0 / (1.0 + std::exp(-eta));
      else {
        const double e = std::exp(eta);
        return e / (1.0 + e);
      }
    case ResponseFunctionKind::NormalOgive: return standard_normal_cdf(eta);
    case ResponseFunctionKind::GumbelMax: return std::exp(-std::exp(-eta));
    case ResponseFunctionKind::GompertzMin: return -std::expm1(-std::exp(eta));
  }
  return 0.5;
}

}  // namespace detail

/// F(eta), clamped to [1e-300, 1 - 1e-16] so that log(F) and log(1 - F) stay finite.
inline double cdf(ResponseFunctionKind kind, double eta) {
  if (!std::isfinite(eta)) throw InvalidArgument("cdf: non-finite argument");
  return detail::clamp_probability(detail::raw_cdf(kind, eta));
}

/// Quantile function F^{-1}(p) for p in (0,1).
inline double quantile(ResponseFunctionKind kind, double p) {
  if (!(p > 0.0 && p < 1.0)) throw DomainError("quantile: probability must lie in (0,1)");
  switch (kind) {
    case ResponseFunctionKind::Logistic: return std::log(p) - std::log1p(-p);
    case ResponseFunctionKind::NormalOgive:
      // 1 - p is exact for p > 0.5, which makes the symmetry exact too
      return p <= 0.5 ? detail::lower_normal_quantile(p) : -detail::lower_normal_quantile(1.0 - p);
    case ResponseFunctionKind::GumbelMax: return -std::log(-std::log(p));
    case ResponseFunctionKind::GompertzMin: return std::log(-std::log1p(-p));
  }
  return 0.0;
}

}  // namespace separa
