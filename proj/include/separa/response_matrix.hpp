#pragma once

#include <algorithm>
#include <charconv>
#include <cstddef>
#include <fstream>
#include <istream>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "separa/error.hpp"

namespace separa {

/// P x I matrix of responses in {0, ..., k}; k = 1 is binary data.
/// Immutable after construction. Storage is column-major so that item
/// columns, which every estimator scans, are contiguous.
class ResponseMatrix {
 public:
  /// `values` is row-major (one row per person). A negative `max_category`
  /// means "infer k as the largest observed cell" (at least 1).
  ResponseMatrix(std::size_t persons, std::size_t items, std::span<const int> values, int max_category = -1,
                 std::vector<std::string> person_ids = {}, std::vector<std::string> item_ids = {})
      : persons_(persons), items_(items), cells_(persons * items) {
    if (persons < 2) throw InvalidArgument("response matrix needs at least 2 persons");
    if (items < 1) throw InvalidArgument("response matrix needs at least 1 item");
    if (values.size() != persons * items) throw InvalidArgument("response matrix: value count does not match P x I");
    int observed = 0;
    for (std::size_t p = 0; p < persons; ++p) {
      for (std::size_t i = 0; i < items; ++i) {
        const int v = values[p * items + i];
        if (v < 0) throw InvalidArgument("response matrix: negative category");
        observed = std::max(observed, v);
        cells_[i * persons + p] = v;
      }
    }
    if (max_category < 0) {
      k_ = std::max(observed, 1);
    } else {
      if (max_category < 1) throw InvalidArgument("response matrix: k must be at least 1");
      if (observed > max_category) throw InvalidArgument("response matrix: cell exceeds the declared maximum category");
      k_ = max_category;
    }
    person_ids_ = person_ids.empty() ? numbered("P", persons) : std::move(person_ids);
    item_ids_ = item_ids.empty() ? numbered("I", items) : std::move(item_ids);
    if (person_ids_.size() != persons || item_ids_.size() != items)
      throw InvalidArgument("response matrix: label count does not match dimensions");
  }

  static ResponseMatrix from_rows(const std::vector<std::vector<int>>& rows, int max_category = -1) {
    const std::size_t items = rows.empty() ? 0 : rows.front().size();
    std::vector<int> flat;
    flat.reserve(rows.size() * items);
    for (const auto& r : rows) {
      if (r.size() != items) throw InvalidArgument("response matrix: ragged rows");
      flat.insert(flat.end(), r.begin(), r.end());
    }
    return ResponseMatrix(rows.size(), items, flat, max_category);
  }

  std::size_t persons() const noexcept { return persons_; }
  std::size_t items() const noexcept { return items_; }
  int max_category() const noexcept { return k_; }
  bool is_binary() const noexcept { return k_ == 1; }

  int operator()(std::size_t person, std::size_t item) const noexcept { return cells_[item * persons_ + person]; }

  std::span<const int> column(std::size_t item) const noexcept {
    return {cells_.data() + item * persons_, persons_};
  }

  std::vector<int> row(std::size_t person) const {
    std::vector<int> out(items_);
    for (std::size_t i = 0; i < items_; ++i) out[i] = (*this)(person, i);
    return out;
  }

  /// Y_{+i}: sum of the item column.
  long column_sum(std::size_t item) const noexcept {
    long s = 0;
    for (int v : column(item)) s += v;
    return s;
  }

  const std::vector<std::string>& person_ids() const noexcept { return person_ids_; }
  const std::vector<std::string>& item_ids() const noexcept { return item_ids_; }

  /// New matrix made of the given rows (repeats allowed), keeping k.
  ResponseMatrix select_persons(std::span<const std::size_t> rows) const {
    std::vector<int> flat;
    flat.reserve(rows.size() * items_);
    std::vector<std::string> ids;
    ids.reserve(rows.size());
    for (std::size_t p : rows) {
      if (p >= persons_) throw InvalidArgument("select_persons: row index out of range");
      for (std::size_t i = 0; i < items_; ++i) flat.push_back((*this)(p, i));
      ids.push_back(person_ids_[p]);
    }
    return ResponseMatrix(rows.size(), items_, flat, k_, std::move(ids), item_ids_);
  }

  /// Copy with item columns a and b exchanged (labels follow their columns).
  ResponseMatrix swap_items(std::size_t a, std::size_t b) const {
    if (a >= items_ || b >= items_) throw InvalidArgument("swap_items: item index out of range");
    ResponseMatrix out = *this;
    if (a != b) {
      std::swap_ranges(out.cells_.begin() + a * persons_, out.cells_.begin() + (a + 1) * persons_,
                       out.cells_.begin() + b * persons_);
      std::swap(out.item_ids_[a], out.item_ids_[b]);
    }
    return out;
  }

  friend bool operator==(const ResponseMatrix& x, const ResponseMatrix& y) noexcept {
    return x.persons_ == y.persons_ && x.items_ == y.items_ && x.k_ == y.k_ && x.cells_ == y.cells_;
  }

 private:
  static std::vector<std::string> numbered(const char* prefix, std::size_t n) {
    std::vector<std::string> out;
    out.reserve(n);
    for (std::size_t j = 1; j <= n; ++j) out.push_back(prefix + std::to_string(j));
    return out;
  }

  std::size_t persons_;
  std::size_t items_;
  int k_ = 1;
  std::vector<int> cells_;
  std::vector<std::string> person_ids_;
  std::vector<std::string> item_ids_;
};

/// Discordance counts of two binary columns a, b.
struct PairCounts {
  long n10 = 0;  // a = 1, b = 0
  long n01 = 0;  // a = 0, b = 1
  long discordant() const noexcept { return n10 + n01; }
};

inline PairCounts pair_counts(std::span<const int> a, std::span<const int> b) {
  if (a.size() != b.size()) throw InvalidArgument("pair_counts: column lengths differ");
  PairCounts c;
  for (std::size_t p = 0; p < a.size(); ++p) {
    c.n10 += (a[p] != 0 && b[p] == 0);
    c.n01 += (a[p] == 0 && b[p] != 0);
  }
  return c;
}

/// Binary split variable Y(r) = [Y >= r] for one column.
inline std::vector<int> split_column(std::span<const int> column, int r) {
  std::vector<int> out(column.size());
  std::transform(column.begin(), column.end(), out.begin(), [r](int v) { return v >= r ? 1 : 0; });
  return out;
}

/// Binary matrix with cell = 1 iff the original cell is >= r, 1 <= r <= k.
inline ResponseMatrix split_variable(const ResponseMatrix& m, int r) {
  if (r < 1 || r > m.max_category()) throw DomainError("split_variable: category out of range 1..k");
  std::vector<int> flat(m.persons() * m.items());
  for (std::size_t p = 0; p < m.persons(); ++p)
    for (std::size_t i = 0; i < m.items(); ++i) flat[p * m.items() + i] = m(p, i) >= r ? 1 : 0;
  return ResponseMatrix(m.persons(), m.items(), flat, 1, m.person_ids(), m.item_ids());
}

namespace detail {

inline std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    out.push_back(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

}  // namespace detail

/// Reads a comma-separated response table, one row per person. With
/// `has_header`, the first line holds item labels. Blank lines are skipped.
inline ResponseMatrix read_csv(std::istream& in, bool has_header, int max_category = -1) {
  std::vector<std::string> item_ids;
  std::vector<int> flat;
  std::size_t items = 0;
  std::size_t persons = 0;
  std::size_t line_no = 0;
  std::string line;
  bool header_pending = has_header;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view = detail::trim(line);
    if (line_no == 1 && view.starts_with("\xEF\xBB\xBF")) view.remove_prefix(3);
    if (view.empty()) continue;
    auto fields = detail::split_fields(view);
    if (header_pending) {
      for (auto f : fields) item_ids.emplace_back(detail::trim(f));
      items = fields.size();
      header_pending = false;
      continue;
    }
    if (items == 0) items = fields.size();
    if (fields.size() != items)
      throw ParseError("line " + std::to_string(line_no) + ": expected " + std::to_string(items) + " fields, found " +
                           std::to_string(fields.size()),
                       line_no, 0);
    for (std::size_t c = 0; c < fields.size(); ++c) {
      const auto f = detail::trim(fields[c]);
      int v = 0;
      const auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
      if (f.empty())
        throw ParseError("line " + std::to_string(line_no) + ", column " + std::to_string(c + 1) +
                             ": missing response (missing data is not supported)",
                         line_no, c + 1);
      if (ec != std::errc() || ptr != f.data() + f.size() || v < 0)
        throw ParseError("line " + std::to_string(line_no) + ", column " + std::to_string(c + 1) + ": '" +
                             std::string(f) + "' is not a non-negative integer",
                         line_no, c + 1);
      flat.push_back(v);
    }
    ++persons;
  }
  if (persons < 2 || items < 1) throw ParseError("response table needs at least 2 rows and 1 column", 0, 0);
  try {
    return ResponseMatrix(persons, items, flat, max_category, {}, std::move(item_ids));
  } catch (const InvalidArgument& e) {
    throw ParseError(e.what(), 0, 0);
  }
}

inline ResponseMatrix load_csv(const std::string& path, bool has_header, int max_category = -1) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'", 0, 0);
  return read_csv(in, has_header, max_category);
}

/// True when the first non-blank line contains a field that is not an integer.
inline bool looks_like_header(std::istream& in) {
  std::string line;
  while (std::getline(in, line)) {
    const auto view = detail::trim(line);
    if (view.empty()) continue;
    for (auto f : detail::split_fields(view)) {
      f = detail::trim(f);
      int v = 0;
      const auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
      if (f.empty() || ec != std::errc() || ptr != f.data() + f.size()) return true;
    }
    return false;
  }
  return false;
}

/// Writes the matrix with a header row of item labels.
inline void write_csv(std::ostream& out, const ResponseMatrix& m) {
  for (std::size_t i = 0; i < m.items(); ++i) out << (i ? "," : "") << m.item_ids()[i];
  out << '\n';
  for (std::size_t p = 0; p < m.persons(); ++p) {
    for (std::size_t i = 0; i < m.items(); ++i) out << (i ? "," : "") << m(p, i);
    out << '\n';
  }
}

}  // namespace separa
