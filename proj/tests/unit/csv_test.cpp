#include <gtest/gtest.h>

#include <limits>
#include <random>

#include "vax/csv.hpp"
#include "vax/error.hpp"

using vax::csv::parse;

TEST(Csv, QuotedFieldsAndEscapes) {
  const auto rows = parse("a,b,c\n\"x, y\",\"say \"\"hi\"\"\",3\n");
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[1][0], "x, y");
  EXPECT_EQ(rows[1][1], "say \"hi\"");
  EXPECT_EQ(rows[1][2], "3");
}

TEST(Csv, CrLfBomAndBlankLines) {
  const auto rows = parse("\xEF\xBB\xBFh1,h2\r\n1,2\r\n\r\n3,4");
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[0][0], "h1");
  EXPECT_EQ(rows[2][1], "4");
}

TEST(Csv, QuotedNewline) {
  const auto rows = parse("a\n\"line\nbreak\"\n");
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[1][0], "line\nbreak");
}

TEST(Csv, EmptyTrailingField) {
  const auto rows = parse("a,b\n1,\n");
  ASSERT_EQ(rows[1].size(), 2u);
  EXPECT_EQ(rows[1][1], "");
}

TEST(Csv, UnterminatedQuoteThrows) { EXPECT_THROW(parse("a\n\"oops\n"), vax::InputError); }

TEST(Csv, EscapeOnlyWhenNeeded) {
  EXPECT_EQ(vax::csv::escape("plain"), "plain");
  EXPECT_EQ(vax::csv::escape("a,b"), "\"a,b\"");
  EXPECT_EQ(vax::csv::escape("q\"q"), "\"q\"\"q\"");
  EXPECT_EQ(vax::csv::format_row({"1", "x,y"}), "1,\"x,y\"");
}

TEST(Csv, NumbersRoundTrip) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1e6, 1e6);
  for (int i = 0; i < 1000; ++i) {
    const double v = u(rng);
    EXPECT_EQ(std::stod(vax::csv::format_number(v)), v);
  }
  EXPECT_EQ(vax::csv::format_number(0.5), "0.5");
  EXPECT_EQ(vax::csv::format_number(3.0), "3");
}
