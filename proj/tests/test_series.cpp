#include <gtest/gtest.h>

#include <cmath>
#include <sstream>
#include <vector>

#include "oracles.hpp"
#include "persist/csv.hpp"
#include "persist/random.hpp"
#include "persist/series.hpp"
#include "persist/text_spec.hpp"

using namespace persist;

namespace {

std::vector<int> states_of(const StateSequence& s) { return {s.states().begin(), s.states().end()}; }

std::vector<double> values_of(const TimeSeries& s) { return {s.begin(), s.end()}; }

}  // namespace

TEST(TimeSeries, RejectsEmptyAndNonFinite) {
  EXPECT_THROW(TimeSeries(std::vector<double>{}), data_error);
  EXPECT_THROW(TimeSeries({1.0, NAN}), data_error);
  EXPECT_THROW(TimeSeries({1.0, INFINITY}), data_error);
  EXPECT_THROW(TimeSeries({1.0}, 0.0), std::exception);
}

TEST(StateMapping, VisibilityExample) {
  ThresholdMap map({100.0}, {1, 0});
  EXPECT_EQ(states_of(build_state_sequence(TimeSeries({10, 2000, 50}), map)), (std::vector<int>{1, 0, 1}));
}

TEST(StateMapping, ConstantBelowThreshold) {
  ThresholdMap map({7.0}, {1, 0});
  EXPECT_EQ(states_of(build_state_sequence(TimeSeries({5, 5, 5}), map)), (std::vector<int>{1, 1, 1}));
}

TEST(StateMapping, OneValuePerInterval) {
  ThresholdMap map({0.3, 0.6}, {1, 2, 3});
  auto s = build_state_sequence(TimeSeries({0.1, 0.5, 0.9}), map);
  EXPECT_EQ(states_of(s), (std::vector<int>{1, 2, 3}));
  EXPECT_EQ(s.alphabet(), (std::set<int>{1, 2, 3}));
}

TEST(StateMapping, BoundaryValueBelongsToUpperInterval) {
  ThresholdMap map({0.3, 0.6}, {1, 2, 3});
  EXPECT_EQ(map.classify(0.3), 2);
  EXPECT_EQ(map.classify(0.6), 3);
  EXPECT_EQ(map.classify(std::nextafter(0.3, 0.0)), 1);
}

TEST(StateMapping, AlphabetIncludesUnvisitedLabels) {
  ThresholdMap map({100.0}, {1, 0});
  auto s = build_state_sequence(TimeSeries({1, 2}), map);
  EXPECT_EQ(s.alphabet(), (std::set<int>{0, 1}));
}

TEST(StateMapping, Errors) {
  EXPECT_THROW(ThresholdMap({0.6, 0.3}, {1, 2, 3}), usage_error);
  EXPECT_THROW(ThresholdMap({0.3}, {1, 1}), usage_error);
  EXPECT_THROW(ThresholdMap({0.3}, {1}), usage_error);
  EXPECT_THROW(StateSequence(std::vector<int>{}), data_error);
  EXPECT_THROW(StateSequence({0, 1, 2}, {0, 1}), data_error);
}

TEST(Residual, Examples) {
  EXPECT_EQ(values_of(residual_series(TimeSeries({1, 4, 2}))), (std::vector<double>{3, 2}));
  EXPECT_EQ(values_of(residual_series(TimeSeries({2, 2, 2, 2}))), (std::vector<double>{0, 0, 0}));
  EXPECT_EQ(values_of(residual_series(TimeSeries({0, 1, 0, 1}))), (std::vector<double>{1, 1, 1}));
  EXPECT_THROW(residual_series(TimeSeries({1.0})), data_error);
}

TEST(Standardize, TwoPointPopulationConvention) {
  EXPECT_EQ(values_of(standardize(TimeSeries({1, 3}))), (std::vector<double>{-1, 1}));
}

TEST(Standardize, Idempotent) {
  Rng rng(11);
  std::vector<double> x(500);
  for (auto& v : x) v = rng.normal(3.0, 2.0);
  const auto once = standardize(std::span<const double>(x));
  const auto twice = standardize(std::span<const double>(once));
  for (std::size_t i = 0; i < x.size(); ++i) EXPECT_NEAR(once[i], twice[i], 1e-12);
  EXPECT_NEAR(mean(once), 0.0, 1e-12);
  EXPECT_NEAR(stddev(once), 1.0, 1e-12);
}

TEST(Standardize, ConstantIsAnError) { EXPECT_THROW(standardize(TimeSeries({4, 4, 4})), data_error); }

TEST(Profile, Examples) {
  EXPECT_EQ(values_of(profile(TimeSeries({1, 1, 1}))), (std::vector<double>{1, 2, 3}));
  EXPECT_EQ(values_of(profile(TimeSeries({1, -1, 1, -1}))), (std::vector<double>{1, 0, 1, 0}));
  EXPECT_EQ(values_of(profile(TimeSeries({0, 0, 0}))), (std::vector<double>{0, 0, 0}));
}

TEST(Profile, MatchesCumulativeSum) {
  const auto x = oracle::std_normal(300, 5);
  const auto p = profile(std::span<const double>(x));
  const auto ref = oracle::cumsum(x);
  for (std::size_t i = 0; i < x.size(); ++i) EXPECT_NEAR(p[i], ref[i], 1e-12);
}

TEST(BlockRescale, Examples) {
  auto y = block_rescale(TimeSeries({1, 2, 3, 4}, 0.5), 2);
  EXPECT_EQ(values_of(y), (std::vector<double>{1.5, 3.5}));
  EXPECT_DOUBLE_EQ(y.sample_period(), 1.0);
  EXPECT_EQ(values_of(block_rescale(TimeSeries({1, 2, 3, 4, 5}), 2)), (std::vector<double>{1.5, 3.5}));
  const TimeSeries x({3, -1, 4, 1, 5});
  EXPECT_EQ(values_of(block_rescale(x, 1)), values_of(x));
  EXPECT_THROW(block_rescale(x, 6), std::exception);
  EXPECT_THROW(block_rescale(x, 0), std::exception);
}

TEST(BlockRescale, PreservesMeanOverCoveredPrefix) {
  Rng rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 10 + static_cast<std::size_t>(rng.uniform() * 200);
    const std::size_t b = 1 + static_cast<std::size_t>(rng.uniform() * 9);
    std::vector<double> x(n);
    for (auto& v : x) v = rng.normal();
    const auto y = block_rescale(TimeSeries(x), b);
    ASSERT_EQ(y.size(), n / b);
    const std::vector<double> prefix(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(y.size() * b));
    EXPECT_NEAR(mean(y.values()), mean(prefix), 1e-12);
  }
}

TEST(TextSpec, ParsesAndValidates) {
  auto t = TextSpec::parse("kind=ffm; beta=0.6 ;n=65536");
  EXPECT_EQ(t.get("kind"), "ffm");
  EXPECT_DOUBLE_EQ(t.number("beta"), 0.6);
  EXPECT_EQ(t.integer("n"), 65536);
  EXPECT_FALSE(t.has("seed"));
  EXPECT_THROW(t.get("seed"), usage_error);
  EXPECT_THROW(t.restrict_to({"kind", "n"}), usage_error);
  EXPECT_THROW(TextSpec::parse("kind"), usage_error);
  EXPECT_THROW(TextSpec::parse("n=abc").integer("n"), usage_error);
}

TEST(Csv, ColumnsByNameAndIndex) {
  std::istringstream in("t,v\n0,1.5\n1,2.5\r\n\n2,-3\n");
  auto t = CsvTable::parse(in, "mem");
  EXPECT_EQ(t.rows(), 3u);
  EXPECT_EQ(t.numeric_column("v"), (std::vector<double>{1.5, 2.5, -3}));
  EXPECT_EQ(t.numeric_column("1"), t.numeric_column("v"));
  EXPECT_EQ(t.integer_column("t"), (std::vector<int>{0, 1, 2}));
}

TEST(Csv, ErrorsNameRowAndColumn) {
  std::istringstream ragged("a,b\n1,2\n3\n");
  try {
    CsvTable::parse(ragged, "f.csv");
    FAIL();
  } catch (const data_error& e) {
    EXPECT_NE(std::string(e.what()).find("row 3"), std::string::npos);
  }
  std::istringstream bad("a,b\n1,x\n");
  auto t = CsvTable::parse(bad, "g.csv");
  try {
    t.numeric_column("b");
    FAIL();
  } catch (const data_error& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("row 2"), std::string::npos);
    EXPECT_NE(msg.find("'b'"), std::string::npos);
  }
  EXPECT_THROW(t.numeric_column("zzz"), std::exception);
}

TEST(Csv, NumbersRoundTrip) {
  Rng rng(9);
  for (int i = 0; i < 1000; ++i) {
    const double v = rng.normal() * std::pow(10.0, rng.uniform(-30, 30));
    EXPECT_EQ(std::stod(format_number(v)), v);
  }
}
