#pragma once

// Persistence forecasting baselines for irradiance-like series: the naive
// k-step average NV_k and its blends with a clear-sky envelope CS.

#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "persist/error.hpp"
#include "persist/series.hpp"

namespace persist {

enum class ForecastVariant {
  nv,        ///< NV_k[n]
  clear_sky, ///< CS[n]
  cs_nv1,    ///< (CS + NV_k) / 2
  cs_nv2,    ///< alpha CS + beta NV_k
  cs_nv3,    ///< sqrt(CS NV_k)
  cs_nv4,    ///< sqrt(alpha CS beta NV_k)
};

inline ForecastVariant parse_forecast_variant(const std::string& name) {
  if (name == "NV") return ForecastVariant::nv;
  if (name == "CS") return ForecastVariant::clear_sky;
  if (name == "CS-NV1") return ForecastVariant::cs_nv1;
  if (name == "CS-NV2") return ForecastVariant::cs_nv2;
  if (name == "CS-NV3") return ForecastVariant::cs_nv3;
  if (name == "CS-NV4") return ForecastVariant::cs_nv4;
  throw usage_error("unknown forecast variant '" + name + "' (NV, CS, CS-NV1..CS-NV4)");
}

struct ForecastConfig {
  ForecastVariant variant = ForecastVariant::cs_nv1;
  std::size_t k = 1;
  double alpha = 0.75;
  double beta = 1.25;

  void validate() const {
    detail::require_arg(k >= 1, "lookback k must be at least 1");
    detail::require_arg(std::isfinite(alpha) && std::isfinite(beta), "blend weights must be finite");
  }
};

/// Mean of the k observations preceding index n (0-based): I[n-k..n-1].
inline double nv_k(std::span<const double> obs, std::size_t k, std::size_t n) {
  detail::require_arg(k >= 1, "lookback k must be at least 1");
  detail::require(n >= k && n <= obs.size(), "insufficient history for NV_k at index " + std::to_string(n));
  double sum = 0.0;
  for (std::size_t j = 1; j <= k; ++j) sum += obs[n - j];
  return sum / static_cast<double>(k);
}

inline double nv_k(const TimeSeries& obs, std::size_t k, std::size_t n) { return nv_k(obs.values(), k, n); }

struct Forecast {
  std::vector<double> prediction;  ///< NaN where invalid
  std::vector<bool> valid;
  std::size_t insufficient_history = 0;
  /// Indices where a square-root blend met a negative operand.
  std::vector<std::size_t> negative_radicand;
};

inline Forecast predict(const ForecastConfig& cfg, const TimeSeries& clear_sky, const TimeSeries& obs) {
  cfg.validate();
  detail::require(clear_sky.size() == obs.size(), "clear-sky and observed series differ in length");
  const std::size_t n = obs.size();
  detail::require(n > cfg.k, "series shorter than the lookback plus one");
  Forecast f;
  f.prediction.assign(n, std::numeric_limits<double>::quiet_NaN());
  f.valid.assign(n, false);
  f.insufficient_history = cfg.k;
  for (std::size_t i = cfg.k; i < n; ++i) {
    const double cs = clear_sky[i];
    const double nv = nv_k(obs.values(), cfg.k, i);
    double value = 0.0;
    switch (cfg.variant) {
      case ForecastVariant::nv: value = nv; break;
      case ForecastVariant::clear_sky: value = cs; break;
      case ForecastVariant::cs_nv1: value = 0.5 * (cs + nv); break;
      case ForecastVariant::cs_nv2: value = cfg.alpha * cs + cfg.beta * nv; break;
      case ForecastVariant::cs_nv3:
      case ForecastVariant::cs_nv4: {
        const double radicand = cfg.variant == ForecastVariant::cs_nv3 ? cs * nv : cfg.alpha * cs * cfg.beta * nv;
        if (cs < 0.0 || nv < 0.0 || radicand < 0.0) {
          f.negative_radicand.push_back(i);
          continue;
        }
        value = std::sqrt(radicand);
        break;
      }
    }
    f.prediction[i] = value;
    f.valid[i] = true;
  }
  return f;
}

struct ForecastScore {
  double mae = 0.0;
  double rmse = 0.0;
  std::size_t n_valid = 0;
  std::size_t n_invalid = 0;

  nlohmann::json to_json() const {
    return {{"MAE", mae}, {"RMSE", rmse}, {"n_valid", n_valid}, {"n_invalid", n_invalid}};
  }
};

/// MAE and RMSE over valid points only.
inline ForecastScore evaluate(const Forecast& f, const TimeSeries& obs) {
  detail::require(f.prediction.size() == obs.size(), "prediction and observation differ in length");
  ForecastScore s;
  double abs_sum = 0.0, sq_sum = 0.0;
  for (std::size_t i = 0; i < obs.size(); ++i) {
    if (!f.valid[i]) {
      ++s.n_invalid;
      continue;
    }
    const double e = f.prediction[i] - obs[i];
    abs_sum += std::abs(e);
    sq_sum += e * e;
    ++s.n_valid;
  }
  detail::require(s.n_valid > 0, "no valid predictions to evaluate");
  s.mae = abs_sum / static_cast<double>(s.n_valid);
  s.rmse = std::sqrt(sq_sum / static_cast<double>(s.n_valid));
  return s;
}

}  // namespace persist
