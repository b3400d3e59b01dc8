#include <gtest/gtest.h>

#include <sstream>

#include "separa/response_matrix.hpp"

using namespace separa;

namespace {

ResponseMatrix parse(const std::string& text, bool header = false, int k = -1) {
  std::istringstream in(text);
  return read_csv(in, header, k);
}

}  // namespace

TEST(ResponseMatrix, ParsesBinaryTable) {
  const auto m = parse("1,0\n0,1\n");
  EXPECT_EQ(m.persons(), 2u);
  EXPECT_EQ(m.items(), 2u);
  EXPECT_EQ(m.max_category(), 1);
  EXPECT_TRUE(m.is_binary());
  EXPECT_EQ(m(0, 0), 1);
  EXPECT_EQ(m(1, 0), 0);
  EXPECT_EQ(m.item_ids(), (std::vector<std::string>{"I1", "I2"}));
  EXPECT_EQ(m.person_ids(), (std::vector<std::string>{"P1", "P2"}));
}

TEST(ResponseMatrix, InfersCategoryFromMaximum) {
  const auto m = parse("0,1\n2,1\n1,0\n");
  EXPECT_EQ(m.max_category(), 2);
  EXPECT_FALSE(m.is_binary());
}

TEST(ResponseMatrix, CategoryOverride) {
  EXPECT_EQ(parse("0,1\n1,1\n", false, 3).max_category(), 3);
  EXPECT_THROW(parse("0,4\n1,1\n", false, 3), ParseError);
}

TEST(ResponseMatrix, HeaderLabels) {
  std::istringstream probe("a,b\n1,0\n0,1\n");
  EXPECT_TRUE(looks_like_header(probe));
  std::istringstream plain("1,0\n0,1\n");
  EXPECT_FALSE(looks_like_header(plain));
  const auto m = parse("a, b\n1,0\n0,1\n", true);
  EXPECT_EQ(m.item_ids(), (std::vector<std::string>{"a", "b"}));
}

TEST(ResponseMatrix, ParseErrorsNameLineAndColumn) {
  try {
    parse("1,0\n0,x\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.row(), 2u);
    EXPECT_EQ(e.column(), 2u);
  }
  try {
    parse("1,0\n0,1,1\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.row(), 2u);
  }
  EXPECT_THROW(parse("1,-1\n0,1\n"), ParseError);
  EXPECT_THROW(parse("1,\n0,1\n"), ParseError);
  EXPECT_THROW(parse("1,0.5\n0,1\n"), ParseError);
  EXPECT_THROW(parse("1,0\n"), ParseError);
}

TEST(ResponseMatrix, CsvRoundTrip) {
  const auto m = ResponseMatrix::from_rows({{0, 2, 1}, {1, 1, 0}, {2, 0, 2}});
  std::ostringstream out;
  write_csv(out, m);
  EXPECT_EQ(parse(out.str(), true), m);
}

TEST(SplitVariable, Thresholds) {
  const auto m = ResponseMatrix::from_rows({{0, 2, 1}, {1, 0, 2}});
  const auto s2 = split_variable(m, 2);
  EXPECT_EQ(s2.row(0), (std::vector<int>{0, 1, 0}));
  EXPECT_TRUE(s2.is_binary());

  const auto top = ResponseMatrix::from_rows({{3, 3}, {0, 1}});
  EXPECT_EQ(split_variable(top, 3).row(0), (std::vector<int>{1, 1}));

  const auto binary = ResponseMatrix::from_rows({{0, 1}, {1, 1}, {1, 0}});
  EXPECT_EQ(split_variable(binary, 1), binary);
}

TEST(SplitVariable, RejectsOutOfRangeCategory) {
  const auto m = ResponseMatrix::from_rows({{0, 2}, {1, 0}});
  EXPECT_THROW(split_variable(m, 0), DomainError);
  EXPECT_THROW(split_variable(m, 3), DomainError);
}

TEST(SplitVariable, AntitoneInCategory) {
  const auto m = ResponseMatrix::from_rows({{0, 3, 1, 2}, {3, 2, 0, 1}, {1, 1, 3, 3}});
  for (int r = 1; r < 3; ++r) {
    const auto a = split_variable(m, r), b = split_variable(m, r + 1);
    for (std::size_t p = 0; p < m.persons(); ++p)
      for (std::size_t i = 0; i < m.items(); ++i) EXPECT_GE(a(p, i), b(p, i));
  }
  const auto binary = ResponseMatrix::from_rows({{0, 1}, {1, 1}, {1, 0}});
  for (std::size_t i = 0; i < 2; ++i) EXPECT_EQ(split_variable(binary, 1).column_sum(i), binary.column_sum(i));
}

TEST(PairCounts, Enumeration) {
  const std::vector<int> a{1, 1, 0, 0}, b{0, 1, 0, 1};
  auto c = pair_counts(a, b);
  EXPECT_EQ(c.n10, 1);
  EXPECT_EQ(c.n01, 1);
  EXPECT_EQ(c.discordant(), 2);

  c = pair_counts(a, a);
  EXPECT_EQ(c.n10, 0);
  EXPECT_EQ(c.n01, 0);

  const std::vector<int> ones{1, 1, 1}, zeros{0, 0, 0};
  c = pair_counts(ones, zeros);
  EXPECT_EQ(c.n10, 3);
  EXPECT_EQ(c.n01, 0);

  EXPECT_EQ(pair_counts(a, b).n10, pair_counts(b, a).n01);
  EXPECT_THROW(pair_counts(a, ones), InvalidArgument);
}

TEST(ResponseMatrix, SelectAndSwap) {
  const auto m = ResponseMatrix::from_rows({{0, 1, 1}, {1, 0, 1}, {1, 1, 0}});
  const std::vector<std::size_t> rows{2, 2, 0};
  const auto s = m.select_persons(rows);
  EXPECT_EQ(s.persons(), 3u);
  EXPECT_EQ(s.row(0), m.row(2));
  EXPECT_EQ(s.row(2), m.row(0));
  const auto w = m.swap_items(0, 2);
  EXPECT_EQ(w(0, 0), m(0, 2));
  EXPECT_EQ(w.item_ids().front(), "I3");
  EXPECT_EQ(w.swap_items(0, 2), m);
}

TEST(ResponseMatrix, RejectsInvalidShapes) {
  const std::vector<int> one{1};
  EXPECT_THROW(ResponseMatrix(1, 1, one), InvalidArgument);
  const std::vector<int> cells{0, 1, 3, 1};
  EXPECT_THROW(ResponseMatrix(2, 2, cells, 2), InvalidArgument);
}
