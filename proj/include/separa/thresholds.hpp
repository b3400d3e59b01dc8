#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "separa/error.hpp"

namespace separa {

/// I x k matrix of item thresholds delta_{ir}, r = 1..k (stored 0-based).
/// Binary items are the k = 1 case.
class ThresholdMatrix {
 public:
  ThresholdMatrix() = default;
  ThresholdMatrix(std::size_t items, std::size_t categories, double fill = 0.0)
      : items_(items), categories_(categories), values_(items * categories, fill) {}

  static ThresholdMatrix from_binary(std::span<const double> delta) {
    ThresholdMatrix t(delta.size(), 1);
    for (std::size_t i = 0; i < delta.size(); ++i) t(i, 0) = delta[i];
    return t;
  }

  static ThresholdMatrix from_rows(const std::vector<std::vector<double>>& rows) {
    const std::size_t k = rows.empty() ? 0 : rows.front().size();
    ThresholdMatrix t(rows.size(), k);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != k) throw InvalidArgument("threshold rows must have equal length");
      for (std::size_t r = 0; r < k; ++r) t(i, r) = rows[i][r];
    }
    return t;
  }

  std::size_t items() const noexcept { return items_; }
  std::size_t categories() const noexcept { return categories_; }

  double& operator()(std::size_t item, std::size_t r) noexcept { return values_[item * categories_ + r]; }
  double operator()(std::size_t item, std::size_t r) const noexcept { return values_[item * categories_ + r]; }

  std::span<const double> row(std::size_t item) const noexcept {
    return {values_.data() + item * categories_, categories_};
  }

  /// Flattened row-major view: item 1 thresholds, then item 2, ...
  const std::vector<double>& values() const noexcept { return values_; }

  ThresholdMatrix scaled(double factor) const {
    ThresholdMatrix out = *this;
    for (double& v : out.values_) v *= factor;
    return out;
  }

  friend bool operator==(const ThresholdMatrix&, const ThresholdMatrix&) = default;

 private:
  std::size_t items_ = 0;
  std::size_t categories_ = 0;
  std::vector<double> values_;
};

/// Pool-adjacent-violators on a sequence (unit weights): the closest
/// non-decreasing sequence in least squares.
inline std::vector<double> isotonic_increasing(std::span<const double> x) {
  std::vector<double> level;
  std::vector<std::size_t> width;
  for (double v : x) {
    level.push_back(v);
    width.push_back(1);
    while (level.size() > 1 && level[level.size() - 2] > level.back()) {
      const std::size_t w = width[width.size() - 2] + width.back();
      const double merged =
          (level[level.size() - 2] * static_cast<double>(width[width.size() - 2]) +
           level.back() * static_cast<double>(width.back())) /
          static_cast<double>(w);
      level.pop_back();
      width.pop_back();
      level.back() = merged;
      width.back() = w;
    }
  }
  std::vector<double> out;
  out.reserve(x.size());
  for (std::size_t b = 0; b < level.size(); ++b) out.insert(out.end(), width[b], level[b]);
  return out;
}

/// Copy with each item's thresholds made non-decreasing.
inline ThresholdMatrix isotonize(const ThresholdMatrix& t) {
  ThresholdMatrix out = t;
  for (std::size_t i = 0; i < t.items(); ++i) {
    const auto fixed = isotonic_increasing(t.row(i));
    for (std::size_t r = 0; r < t.categories(); ++r) out(i, r) = fixed[r];
  }
  return out;
}

}  // namespace separa
