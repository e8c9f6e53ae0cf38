#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "bufpart/report.hpp"
#include "support/generators.hpp"

using namespace bufpart;

TEST(Report, SeventeenDigitFloats) {
  EXPECT_EQ(format_double(0.1), "0.10000000000000001");
  EXPECT_EQ(format_double(1.0 / 3.0), "0.33333333333333331");
  EXPECT_EQ(format_double(2.0), "2");
  EXPECT_EQ(format_double(1e-300), "1e-300");
  EXPECT_EQ(format_double(-2.5e-7), "-2.4999999999999999e-07");
}

TEST(Report, NonFiniteBecomesNull) {
  EXPECT_EQ(format_double(std::numeric_limits<double>::quiet_NaN()), "null");
  EXPECT_EQ(format_double(std::numeric_limits<double>::infinity()), "null");
  Json j{{"a", -std::numeric_limits<double>::infinity()}, {"b", 1}};
  Json back = Json::parse(dump_json(j));
  EXPECT_TRUE(back["a"].is_null());
  EXPECT_EQ(back["b"], 1);
}

TEST(Report, RoundTripsExactly) {
  Stream r(5, StreamTag::check);
  Json arr = Json::array();
  std::vector<double> xs;
  for (int i = 0; i < 500; ++i) {
    double x = (r.uniform() - 0.5) * std::pow(10.0, static_cast<double>(r.below(40)) - 20);
    xs.push_back(x);
    arr.push_back(x);
  }
  Json j{{"values", arr}, {"nested", {{"s", "t\"q"}, {"flag", true}, {"none", nullptr}}}, {"empty", Json::array()}};
  std::string text = dump_json(j);
  Json back = Json::parse(text);
  for (std::size_t i = 0; i < xs.size(); ++i) EXPECT_EQ(back["values"][i].get<double>(), xs[i]);
  EXPECT_EQ(back["nested"]["s"], "t\"q");
  EXPECT_EQ(dump_json(back), text);
  EXPECT_EQ(text.back(), '\n');
}

TEST(Report, AssignmentIsOneBased) {
  Graph g = testgen::path(4);
  BufferedPartition bp{{{0}, {2, 3}}, {{1}, {}}, 1.0};
  Json a = assignment_json(g, bp, nullptr);
  EXPECT_EQ(a["0"]["part_id"], 1);
  EXPECT_EQ(a["1"]["role"], "buffer");
  EXPECT_EQ(a["3"]["part_id"], 2);
  EXPECT_EQ(a["3"]["role"], "core");
}
