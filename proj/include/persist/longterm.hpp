#pragma once

// Long-range dependence estimators: autocorrelation, semivariogram,
// periodogram slope, rescaled range, DFA, MF-DFA, wavelet variance scaling,
// and two-regime crossover fitting in log-log space.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <map>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "persist/csv.hpp"
#include "persist/error.hpp"
#include "persist/fft.hpp"
#include "persist/regression.hpp"
#include "persist/series.hpp"

namespace persist {

struct Crossover {
  double s_star = 0.0;
  double alpha1 = 0.0;
  double alpha2 = 0.0;
  double sse_two = 0.0;     ///< total SSE of the two-line fit
  double sse_single = 0.0;  ///< SSE of one line through all points

  /// Fractional SSE reduction of the two-line fit over a single line.
  double improvement() const noexcept { return sse_single > 0.0 ? 1.0 - sse_two / sse_single : 0.0; }
};

/// Inclusive scale window used for the log-log fit. Defaults to everything.
struct FitRange {
  double s_min = 0.0;
  double s_max = std::numeric_limits<double>::infinity();
};

/// Fluctuation (or rescaled range) versus scale with the fitted exponent.
struct ScalingResult {
  std::vector<std::size_t> scales;
  std::vector<double> fluctuations;
  double exponent = std::numeric_limits<double>::quiet_NaN();
  double intercept = std::numeric_limits<double>::quiet_NaN();
  std::pair<double, double> fit_range{0.0, 0.0};
  double residual_sse = 0.0;
  std::optional<Crossover> crossover;

  std::string to_csv() const {
    CsvWriter w({"s", "F"});
    for (std::size_t i = 0; i < scales.size(); ++i) {
      w.add_row({std::to_string(scales[i]), format_number(fluctuations[i])});
    }
    return w.str();
  }

  nlohmann::json summary_json() const {
    nlohmann::json j;
    j["exponent"] = exponent;
    j["fit_range"] = {fit_range.first, fit_range.second};
    j["residual_sse"] = residual_sse;
    if (crossover) {
      j["crossover"] = {{"s_star", crossover->s_star},
                        {"alpha1", crossover->alpha1},
                        {"alpha2", crossover->alpha2},
                        {"sse_two", crossover->sse_two},
                        {"sse_single", crossover->sse_single}};
    } else {
      j["crossover"] = nullptr;
    }
    return j;
  }
};

// ---------------------------------------------------------------------------
// Scale grids

/// `count` logarithmically spaced integers in [lo, hi], deduplicated.
inline std::vector<std::size_t> log_scales(std::size_t lo, std::size_t hi, std::size_t count) {
  detail::require_arg(lo >= 1 && hi >= lo, "invalid scale range");
  detail::require_arg(count >= 1, "scale count must be positive");
  std::vector<std::size_t> out;
  if (count == 1 || lo == hi) return {lo};
  const double a = std::log(static_cast<double>(lo));
  const double b = std::log(static_cast<double>(hi));
  for (std::size_t i = 0; i < count; ++i) {
    const double v = std::exp(a + (b - a) * static_cast<double>(i) / static_cast<double>(count - 1));
    auto s = static_cast<std::size_t>(std::llround(v));
    s = std::clamp(s, lo, hi);
    if (out.empty() || s > out.back()) out.push_back(s);
  }
  return out;
}

/// 20 log-spaced scales from max(8, order+2) to N/4.
inline std::vector<std::size_t> default_scales(std::size_t n, std::size_t order = 2) {
  const std::size_t lo = std::max<std::size_t>(8, order + 2);
  const std::size_t hi = n / 4;
  detail::require(hi >= lo, "series of length " + std::to_string(n) + " too short for the default scale grid");
  return log_scales(lo, hi, 20);
}

namespace detail {

inline void check_scales(std::span<const std::size_t> scales, std::size_t min_scale, std::size_t n) {
  require(!scales.empty(), "no scales given");
  for (std::size_t i = 0; i < scales.size(); ++i) {
    require(scales[i] >= min_scale, "scale " + std::to_string(scales[i]) + " below minimum " + std::to_string(min_scale));
    require(scales[i] <= n / 4, "scale " + std::to_string(scales[i]) + " exceeds N/4 = " + std::to_string(n / 4));
    if (i) require(scales[i] > scales[i - 1], "scales must be strictly increasing");
  }
}

/// OLS of ln F on ln(s * x_scale) over the fit window, skipping F <= 0.
inline void fit_scaling(ScalingResult& r, const FitRange& range, double x_scale = 1.0) {
  std::vector<double> lx, ly;
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (std::size_t i = 0; i < r.scales.size(); ++i) {
    const double s = static_cast<double>(r.scales[i]);
    if (s < range.s_min || s > range.s_max || !(r.fluctuations[i] > 0.0)) continue;
    lx.push_back(std::log(s * x_scale));
    ly.push_back(std::log(r.fluctuations[i]));
    lo = std::min(lo, s);
    hi = std::max(hi, s);
  }
  require(lx.size() >= 2, "fewer than 2 usable scales in the fit range");
  const auto f = fit_line(lx, ly);
  r.exponent = f.slope;
  r.intercept = f.intercept;
  r.residual_sse = f.sse;
  r.fit_range = {lo, hi};
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Autocorrelation and semivariogram

/// Normalized autocovariance r[k], k = 0..k_max, with the biased (1/N)
/// estimator. r[0] = 1.
inline std::vector<double> acf(const TimeSeries& x, std::size_t k_max) {
  const std::size_t n = x.size();
  detail::require(k_max < n, "k_max must be smaller than the series length");
  const double mu = mean(x.values());
  double c0 = 0.0;
  for (double v : x) c0 += (v - mu) * (v - mu);
  detail::require(c0 > 0.0, "autocorrelation of a zero-variance series");
  std::vector<double> r(k_max + 1);
  for (std::size_t k = 0; k <= k_max; ++k) {
    double ck = 0.0;
    for (std::size_t i = 0; i + k < n; ++i) ck += (x[i] - mu) * (x[i + k] - mu);
    r[k] = ck / c0;
  }
  return r;
}

struct Semivariogram {
  std::vector<double> gamma;        ///< gamma[0..k_max], gamma[0] = 0
  std::optional<double> hausdorff;  ///< half the log-log slope; absent when gamma vanishes
  /// Persistence strength implied by the Hausdorff exponent, 2 Ha + 1.
  std::optional<double> beta() const {
    return hausdorff ? std::optional<double>(2.0 * *hausdorff + 1.0) : std::nullopt;
  }
};

/// gamma[k] = 1/(2(N-k)) sum (x[n+k] - x[n])^2.
inline Semivariogram semivariogram(const TimeSeries& x, std::size_t k_max) {
  const std::size_t n = x.size();
  detail::require(k_max >= 1, "k_max must be at least 1");
  detail::require(k_max <= n / 4, "k_max exceeds N/4");
  Semivariogram out;
  out.gamma.assign(k_max + 1, 0.0);
  for (std::size_t k = 1; k <= k_max; ++k) {
    double ss = 0.0;
    for (std::size_t i = 0; i + k < n; ++i) {
      const double d = x[i + k] - x[i];
      ss += d * d;
    }
    out.gamma[k] = ss / (2.0 * static_cast<double>(n - k));
  }
  std::vector<double> lk, lg;
  for (std::size_t k = 1; k <= k_max; ++k) {
    if (out.gamma[k] > 0.0) {
      lk.push_back(std::log(static_cast<double>(k)));
      lg.push_back(std::log(out.gamma[k]));
    }
  }
  if (lk.size() >= 2) out.hausdorff = 0.5 * fit_line(lk, lg).slope;
  return out;
}

// ---------------------------------------------------------------------------
// Spectral slope

struct Periodogram {
  std::vector<double> frequency;  ///< cycles per sample, j/N for j = 1..N/2
  std::vector<double> power;
};

/// Raw periodogram |X_j|^2 / N of the mean-removed series.
inline Periodogram periodogram(const TimeSeries& x) {
  const std::size_t n = x.size();
  const double mu = mean(x.values());
  std::vector<double> centred(n);
  for (std::size_t i = 0; i < n; ++i) centred[i] = x[i] - mu;
  const auto spec = fft::forward(centred);
  Periodogram p;
  for (std::size_t j = 1; j <= n / 2; ++j) {
    p.frequency.push_back(static_cast<double>(j) / static_cast<double>(n));
    p.power.push_back(std::norm(spec[j]) / static_cast<double>(n));
  }
  return p;
}

/// Power-law exponent of S(f) ~ f^-beta from the lowest `fit_fraction` of
/// the nonzero Fourier frequencies. The log-periodogram is averaged in bins
/// equally spaced in log-frequency (`bins_per_decade`) before the fit so the
/// dense high-frequency end does not dominate.
inline double psd_beta(const TimeSeries& x, double fit_fraction = 0.1, double bins_per_decade = 10.0) {
  detail::require(x.size() >= 64, "psd_beta needs at least 64 samples");
  detail::require_arg(fit_fraction > 0.0 && fit_fraction <= 1.0, "fit_fraction must be in (0, 1]");
  const auto p = periodogram(x);
  const auto used = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::ceil(fit_fraction * static_cast<double>(p.frequency.size()))));

  const double lf0 = std::log10(p.frequency.front());
  std::map<long, std::pair<double, double>> sums;  // bin -> (sum ln f, sum ln P)
  std::map<long, std::size_t> counts;
  for (std::size_t j = 0; j < used; ++j) {
    if (!(p.power[j] > 0.0)) continue;
    const long bin = static_cast<long>(std::floor((std::log10(p.frequency[j]) - lf0) * bins_per_decade + 1e-9));
    sums[bin].first += std::log(p.frequency[j]);
    sums[bin].second += std::log(p.power[j]);
    ++counts[bin];
  }
  detail::require(sums.size() >= 4, "fewer than 4 frequency bins in the fit range");
  std::vector<double> lf, lp;
  for (const auto& [bin, s] : sums) {
    const double c = static_cast<double>(counts[bin]);
    lf.push_back(s.first / c);
    lp.push_back(s.second / c);
  }
  return -fit_line(lf, lp).slope;
}

// ---------------------------------------------------------------------------
// Rescaled range

/// R/S analysis. The mean-removed series is integrated once; for each scale
/// s the profile is cut into floor(N/s) windows, R is the profile range in a
/// window and S the standard deviation of the raw samples there. The
/// exponent H is the slope of ln(mean R / mean S) against ln(s/2). Windows
/// with S = 0 are skipped; a scale with no usable window is dropped.
inline ScalingResult hurst_rs(const TimeSeries& x, std::span<const std::size_t> scales, const FitRange& range = {}) {
  const std::size_t n = x.size();
  detail::check_scales(scales, 8, n);
  const double mu = mean(x.values());
  std::vector<double> y(n);
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    acc += x[i] - mu;
    y[i] = acc;
  }

  ScalingResult r;
  for (std::size_t s : scales) {
    const std::size_t windows = n / s;
    double r_sum = 0.0, s_sum = 0.0;
    std::size_t used = 0;
    for (std::size_t w = 0; w < windows; ++w) {
      const std::size_t start = w * s;
      const auto seg = x.values().subspan(start, s);
      const double sd = stddev(seg);
      if (!(sd > 0.0)) continue;
      const auto [lo, hi] = std::minmax_element(y.begin() + static_cast<std::ptrdiff_t>(start),
                                                y.begin() + static_cast<std::ptrdiff_t>(start + s));
      r_sum += *hi - *lo;
      s_sum += sd;
      ++used;
    }
    if (used == 0) continue;
    r.scales.push_back(s);
    r.fluctuations.push_back(r_sum / s_sum);
  }
  detail::require(r.scales.size() >= 2, "R/S: fewer than 2 scales with non-zero standard deviation");
  detail::fit_scaling(r, range, 0.5);
  return r;
}

// ---------------------------------------------------------------------------
// Detrended fluctuation analysis

namespace detail {

/// F^2(nu, s): mean squared residual of each non-overlapping segment of the
/// profile after removing a polynomial of the given order. Segments start at
/// the beginning; the tail shorter than s is ignored.
inline std::vector<double> segment_variances(std::span<const double> prof, std::size_t s, std::size_t order) {
  const PolynomialDetrender detrender(s, order);
  const std::size_t segments = prof.size() / s;
  std::vector<double> out(segments);
  std::vector<double> work(s);
  for (std::size_t v = 0; v < segments; ++v) {
    out[v] = detrender.residual_sse(prof.subspan(v * s, s), work) / static_cast<double>(s);
  }
  return out;
}

/// q-th order fluctuation from segment variances. Non-positive q skip
/// segments with zero variance and report how many were skipped.
inline double fluctuation_q(std::span<const double> seg_var, double q, std::size_t* skipped = nullptr) {
  if (q == 2.0) {
    double sum = 0.0;
    for (double v : seg_var) sum += v;
    return std::sqrt(sum / static_cast<double>(seg_var.size()));
  }
  double sum = 0.0;
  std::size_t used = 0;
  for (double v : seg_var) {
    if (q <= 0.0 && !(v > 0.0)) {
      if (skipped) ++*skipped;
      continue;
    }
    sum += (q == 0.0) ? std::log(v) : std::pow(v, q / 2.0);
    ++used;
  }
  if (used == 0) return 0.0;
  const double m = sum / static_cast<double>(used);
  return (q == 0.0) ? std::exp(0.5 * m) : std::pow(m, 1.0 / q);
}

inline std::vector<double> standardized_profile(const TimeSeries& x) {
  return profile(std::span<const double>(standardize(x.values())));
}

}  // namespace detail

/// DFA of order m: standardize, integrate, detrend each segment of length s
/// with a degree-m polynomial, F(s) = RMS residual over the covered prefix.
inline ScalingResult dfa(const TimeSeries& x, std::span<const std::size_t> scales, std::size_t order = 2,
                         const FitRange& range = {}) {
  detail::require_arg(order >= 1, "DFA order must be at least 1");
  detail::check_scales(scales, order + 2, x.size());
  const auto prof = detail::standardized_profile(x);
  ScalingResult r;
  for (std::size_t s : scales) {
    const auto var = detail::segment_variances(prof, s, order);
    r.scales.push_back(s);
    r.fluctuations.push_back(detail::fluctuation_q(var, 2.0));
  }
  detail::fit_scaling(r, range);
  return r;
}

struct MfdfaResult {
  std::vector<double> qs;
  std::vector<std::size_t> scales;
  std::map<double, double> h_of_q;
  /// fluctuations[qi][si] = F_q(s).
  std::vector<std::vector<double>> fluctuations;
  /// Segments left out because F^2 = 0 with q <= 0.
  std::size_t skipped_segments = 0;

  std::string to_csv() const {
    CsvWriter w({"s", "F", "q"});
    for (std::size_t qi = 0; qi < qs.size(); ++qi) {
      for (std::size_t si = 0; si < scales.size(); ++si) {
        w.add_row({std::to_string(scales[si]), format_number(fluctuations[qi][si]), format_number(qs[qi])});
      }
    }
    return w.str();
  }
};

/// Multifractal DFA with segment-wise F_q(s) = {mean_nu [F^2(nu,s)]^(q/2)}^(1/q)
/// and the logarithmic average at q = 0. q = 2 reproduces dfa() bit for bit.
inline MfdfaResult mfdfa(const TimeSeries& x, std::span<const std::size_t> scales, std::span<const double> qs,
                         std::size_t order = 2, const FitRange& range = {}) {
  detail::require_arg(order >= 1, "DFA order must be at least 1");
  detail::require_arg(!qs.empty(), "no q values given");
  for (double q : qs) detail::require_arg(std::isfinite(q), "q values must be finite");
  detail::check_scales(scales, order + 2, x.size());
  const auto prof = detail::standardized_profile(x);

  MfdfaResult out;
  out.qs.assign(qs.begin(), qs.end());
  out.scales.assign(scales.begin(), scales.end());
  out.fluctuations.assign(qs.size(), std::vector<double>(scales.size()));
  for (std::size_t si = 0; si < scales.size(); ++si) {
    const auto var = detail::segment_variances(prof, scales[si], order);
    for (std::size_t qi = 0; qi < qs.size(); ++qi) {
      out.fluctuations[qi][si] = detail::fluctuation_q(var, qs[qi], &out.skipped_segments);
    }
  }
  for (std::size_t qi = 0; qi < qs.size(); ++qi) {
    ScalingResult r;
    r.scales = out.scales;
    r.fluctuations = out.fluctuations[qi];
    detail::fit_scaling(r, range);
    out.h_of_q[qs[qi]] = r.exponent;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Wavelet variance

/// Orthogonal wavelet given by its low-pass filter; the high-pass filter is
/// the quadrature mirror g[n] = (-1)^n h[L-1-n].
struct WaveletFilter {
  std::vector<double> lowpass;

  static WaveletFilter haar() { return {{std::numbers::sqrt2 / 2.0, std::numbers::sqrt2 / 2.0}}; }

  static WaveletFilter daubechies4() {
    const double s3 = std::sqrt(3.0);
    const double d = 4.0 * std::numbers::sqrt2;
    return {{(1 + s3) / d, (3 + s3) / d, (3 - s3) / d, (1 - s3) / d}};
  }
};

enum class LengthPolicy { truncate, pad };

struct WaveletResult {
  std::vector<int> levels;              ///< k = 1..K
  std::vector<std::size_t> coefficients;  ///< coefficients per level
  std::vector<double> variance;         ///< S_W^2[k]
  double beta = std::numeric_limits<double>::quiet_NaN();
  double intercept = std::numeric_limits<double>::quiet_NaN();
  std::size_t fitted_levels = 0;
};

/// Brings the series to a power-of-two length: truncation keeps the first
/// 2^floor(log2 N) samples; padding appends the series mean.
inline std::vector<double> to_power_of_two(std::span<const double> x, LengthPolicy policy) {
  std::size_t p = 1;
  while (p * 2 <= x.size()) p *= 2;
  if (p == x.size() || policy == LengthPolicy::truncate) return {x.begin(), x.begin() + static_cast<std::ptrdiff_t>(p)};
  std::vector<double> out(x.begin(), x.end());
  out.resize(p * 2, mean(x));
  return out;
}

/// Periodized discrete wavelet transform; beta is the slope of
/// log2(variance of level-k details) against k over levels with at least
/// `min_coefficients` coefficients.
inline WaveletResult wavelet_beta(const TimeSeries& x, const WaveletFilter& filter = WaveletFilter::haar(),
                                  LengthPolicy policy = LengthPolicy::truncate, std::size_t min_coefficients = 8) {
  auto approx = to_power_of_two(x.values(), policy);
  detail::require(approx.size() >= 64, "wavelet_beta needs at least 64 samples");
  const auto& h = filter.lowpass;
  detail::require_arg(h.size() >= 2 && h.size() % 2 == 0, "wavelet filter length must be even");
  std::vector<double> g(h.size());
  for (std::size_t i = 0; i < h.size(); ++i) g[i] = ((i % 2) ? -1.0 : 1.0) * h[h.size() - 1 - i];

  WaveletResult out;
  std::vector<double> lx, ly;
  int level = 0;
  while (approx.size() >= 2) {
    ++level;
    const std::size_t m = approx.size();
    const std::size_t half = m / 2;
    std::vector<double> next(half), detail_coeffs(half);
    for (std::size_t i = 0; i < half; ++i) {
      double a = 0.0, d = 0.0;
      for (std::size_t t = 0; t < h.size(); ++t) {
        const double v = approx[(2 * i + t) % m];
        a += h[t] * v;
        d += g[t] * v;
      }
      next[i] = a;
      detail_coeffs[i] = d;
    }
    const double var = half >= 2 ? variance(detail_coeffs) : 0.0;
    out.levels.push_back(level);
    out.coefficients.push_back(half);
    out.variance.push_back(var);
    if (half >= min_coefficients && var > 0.0) {
      lx.push_back(static_cast<double>(level));
      ly.push_back(std::log2(var));
    }
    approx = std::move(next);
  }
  detail::require(lx.size() >= 2, "fewer than 2 wavelet levels usable for the fit");
  const auto f = fit_line(lx, ly);
  out.beta = f.slope;
  out.intercept = f.intercept;
  out.fitted_levels = lx.size();
  return out;
}

// ---------------------------------------------------------------------------
// Crossover

/// Two-regime fit in log-log space. Every split with at least 3 points on
/// each side is tried; the split with the smallest total SSE wins (ties go to
/// the smaller scale). s_star is where the two fitted lines intersect,
/// clamped to the gap between the last point of the first regime and the
/// first point of the second.
inline Crossover crossover_fit(std::span<const std::size_t> scales, std::span<const double> fluctuations) {
  detail::require(scales.size() == fluctuations.size(), "scales and fluctuations differ in length");
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < scales.size(); ++i) {
    if (fluctuations[i] > 0.0) {
      lx.push_back(std::log(static_cast<double>(scales[i])));
      ly.push_back(std::log(fluctuations[i]));
    }
  }
  const std::size_t n = lx.size();
  detail::require(n >= 6, "crossover fit needs at least 6 points with positive fluctuation");

  Crossover best;
  best.sse_single = fit_line(lx, ly).sse;
  // A residual at rounding level means one line is exact; report no gain.
  if (best.sse_single <= 1e-20 * static_cast<double>(n)) best.sse_single = 0.0;
  double best_sse = std::numeric_limits<double>::infinity();
  std::size_t best_split = 0;
  LineFit left_fit, right_fit;
  for (std::size_t b = 3; b + 3 <= n; ++b) {
    const auto l = fit_line(std::span(lx).first(b), std::span(ly).first(b));
    const auto r = fit_line(std::span(lx).subspan(b), std::span(ly).subspan(b));
    if (l.sse + r.sse < best_sse) {
      best_sse = l.sse + r.sse;
      best_split = b;
      left_fit = l;
      right_fit = r;
    }
  }
  best.alpha1 = left_fit.slope;
  best.alpha2 = right_fit.slope;
  best.sse_two = best_sse;
  const double gap_lo = lx[best_split - 1];
  const double gap_hi = lx[best_split];
  double x_star = 0.5 * (gap_lo + gap_hi);
  if (left_fit.slope != right_fit.slope) {
    x_star = (right_fit.intercept - left_fit.intercept) / (left_fit.slope - right_fit.slope);
  }
  best.s_star = std::exp(std::clamp(x_star, gap_lo, gap_hi));
  return best;
}

inline Crossover crossover_fit(const ScalingResult& sr) { return crossover_fit(sr.scales, sr.fluctuations); }

// ---------------------------------------------------------------------------
// Exponent conversions, with H as the hub: alpha = H, beta = 2H - 1, and
// D = n + 1 - H for a graph embedded in n dimensions (D = 2 - H for n = 1).

enum class Exponent { hurst, alpha, beta, fractal_dimension };

inline double convert_exponents(double value, Exponent from, Exponent to, int dimension = 1) {
  detail::require_arg(std::isfinite(value), "exponent must be finite");
  double h = value;
  switch (from) {
    case Exponent::hurst:
    case Exponent::alpha: h = value; break;
    case Exponent::beta: h = (value + 1.0) / 2.0; break;
    case Exponent::fractal_dimension: h = dimension + 1.0 - value; break;
  }
  switch (to) {
    case Exponent::hurst:
    case Exponent::alpha: return h;
    case Exponent::beta: return 2.0 * h - 1.0;
    case Exponent::fractal_dimension: return dimension + 1.0 - h;
  }
  return h;
}

inline Exponent parse_exponent(const std::string& name) {
  if (name == "H" || name == "hurst") return Exponent::hurst;
  if (name == "alpha") return Exponent::alpha;
  if (name == "beta") return Exponent::beta;
  if (name == "D") return Exponent::fractal_dimension;
  throw usage_error("unknown exponent '" + name + "' (expected H, alpha, beta or D)");
}

}  // namespace persist
