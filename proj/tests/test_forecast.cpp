#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "benchmark.hpp"
#include "persist/forecast.hpp"

using namespace persist;

namespace {

double predict_one(ForecastVariant v, double cs, double nv_value, double alpha = 0.75, double beta = 1.25) {
  // A two-sample series whose single valid prediction uses NV_1 = nv_value.
  const TimeSeries obs({nv_value, 0.0});
  const TimeSeries clear({0.0, cs});
  return predict({v, 1, alpha, beta}, clear, obs).prediction[1];
}

}  // namespace

TEST(NaivePersistence, Examples) {
  const std::vector<double> obs{2, 4, 6};
  EXPECT_DOUBLE_EQ(nv_k(std::span<const double>(obs), 2, 3), 5.0);
  EXPECT_DOUBLE_EQ(nv_k(std::span<const double>(obs), 2, 2), 3.0);
  EXPECT_DOUBLE_EQ(nv_k(std::span<const double>(obs), 1, 2), 4.0);
  const std::vector<double> flat(10, 7.5);
  EXPECT_DOUBLE_EQ(nv_k(std::span<const double>(flat), 4, 9), 7.5);
  EXPECT_THROW(nv_k(std::span<const double>(obs), 3, 2), data_error);
  EXPECT_THROW(nv_k(std::span<const double>(obs), 0, 2), usage_error);
}

TEST(Blends, Examples) {
  EXPECT_DOUBLE_EQ(predict_one(ForecastVariant::cs_nv1, 5.0, 5.0), 5.0);
  EXPECT_DOUBLE_EQ(predict_one(ForecastVariant::cs_nv3, 4.0, 9.0), 6.0);
  EXPECT_DOUBLE_EQ(predict_one(ForecastVariant::cs_nv2, 8.0, 4.0), 11.0);
  EXPECT_DOUBLE_EQ(predict_one(ForecastVariant::cs_nv4, 4.0, 9.0), std::sqrt(0.75 * 4.0 * 1.25 * 9.0));
  EXPECT_DOUBLE_EQ(predict_one(ForecastVariant::nv, 4.0, 9.0), 9.0);
  EXPECT_DOUBLE_EQ(predict_one(ForecastVariant::clear_sky, 4.0, 9.0), 4.0);
}

TEST(Blends, NegativeRadicandMarksPointInvalid) {
  const TimeSeries obs({-4.0, 1.0, 2.0});
  const TimeSeries cs({1.0, 1.0, 1.0});
  auto f = predict({ForecastVariant::cs_nv3, 1}, cs, obs);
  EXPECT_FALSE(f.valid[0]);
  EXPECT_FALSE(f.valid[1]);
  EXPECT_TRUE(std::isnan(f.prediction[1]));
  EXPECT_EQ(f.negative_radicand, (std::vector<std::size_t>{1}));
  EXPECT_TRUE(f.valid[2]);
  EXPECT_EQ(f.insufficient_history, 1u);
}

TEST(Blends, VariantNames) {
  EXPECT_EQ(parse_forecast_variant("CS-NV4"), ForecastVariant::cs_nv4);
  EXPECT_THROW(parse_forecast_variant("CS-NV5"), usage_error);
}

TEST(Score, Examples) {
  const TimeSeries obs({1.0, 2.0, 3.0, 4.0});
  Forecast exact{{1, 2, 3, 4}, {true, true, true, true}, 0, {}};
  EXPECT_EQ(evaluate(exact, obs).mae, 0.0);
  Forecast shifted{{2, 3, 4, 5}, {true, true, true, true}, 0, {}};
  auto s = evaluate(shifted, obs);
  EXPECT_DOUBLE_EQ(s.mae, 1.0);
  EXPECT_DOUBLE_EQ(s.rmse, 1.0);
  Forecast none{{0, 0, 0, 0}, {false, false, false, false}, 0, {}};
  EXPECT_THROW(evaluate(none, obs), data_error);
  Forecast partial{{NAN, 3, 3, 4}, {false, true, true, true}, 1, {}};
  auto p = evaluate(partial, obs);
  EXPECT_EQ(p.n_valid, 3u);
  EXPECT_EQ(p.n_invalid, 1u);
  EXPECT_DOUBLE_EQ(p.mae, 1.0 / 3.0);
}

TEST(Blends, PointwiseProperties) {
  Rng rng(32);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 20 + static_cast<std::size_t>(rng.uniform() * 100);
    const std::size_t k = 1 + static_cast<std::size_t>(rng.uniform() * 5);
    std::vector<double> obs(n), cs(n);
    for (std::size_t i = 0; i < n; ++i) {
      cs[i] = rng.uniform(0, 1000);
      obs[i] = cs[i] * rng.uniform();
    }
    const TimeSeries o(obs), c(cs);
    const auto nv = predict({ForecastVariant::nv, k}, c, o);
    const auto a1 = predict({ForecastVariant::cs_nv1, k}, c, o);
    const auto a2 = predict({ForecastVariant::cs_nv2, k, 0.5, 0.5}, c, o);
    const auto g3 = predict({ForecastVariant::cs_nv3, k}, c, o);
    for (std::size_t i = k; i < n; ++i) {
      EXPECT_GE(a1.prediction[i], std::min(cs[i], nv.prediction[i]));
      EXPECT_LE(a1.prediction[i], std::max(cs[i], nv.prediction[i]));
      EXPECT_LE(g3.prediction[i], a1.prediction[i] * (1 + 1e-15));
      EXPECT_EQ(a2.prediction[i], a1.prediction[i]);
    }
    for (const auto* f : {&nv, &a1, &a2, &g3}) {
      const auto s = evaluate(*f, o);
      EXPECT_LE(s.mae, s.rmse);
      EXPECT_EQ(s.n_invalid, k);
    }
  }
}

TEST(Benchmark, BlendBeatsItsComponents) {
  const auto data = bench::solar_year(31);
  auto score = [&](ForecastVariant v) { return evaluate(predict({v, 1}, data.clear_sky, data.observed), data.observed).mae; };
  const double blend = score(ForecastVariant::cs_nv1);
  EXPECT_LT(blend, score(ForecastVariant::nv));
  EXPECT_LT(blend, score(ForecastVariant::clear_sky));
}
