#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "persist/error.hpp"

namespace persist {

/// Uniformly sampled real-valued sequence.
class TimeSeries {
public:
  TimeSeries() = default;

  explicit TimeSeries(std::vector<double> values, double sample_period = 1.0, std::string label = {})
      : values_(std::move(values)), sample_period_(sample_period), label_(std::move(label)) {
    detail::require(!values_.empty(), "time series is empty");
    detail::require(sample_period_ > 0.0 && std::isfinite(sample_period_),
                    "sample period must be positive and finite");
    for (std::size_t i = 0; i < values_.size(); ++i) {
      detail::require(std::isfinite(values_[i]), "non-finite value at sample " + std::to_string(i));
    }
  }

  std::span<const double> values() const noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t i) const noexcept { return values_[i]; }
  double sample_period() const noexcept { return sample_period_; }
  const std::string& label() const noexcept { return label_; }

  auto begin() const noexcept { return values_.begin(); }
  auto end() const noexcept { return values_.end(); }

  /// Same metadata, new samples.
  TimeSeries with_values(std::vector<double> values) const {
    return TimeSeries(std::move(values), sample_period_, label_);
  }

private:
  std::vector<double> values_;
  double sample_period_ = 1.0;
  std::string label_;
};

/// Ordered thresholds delta_1 <= ... <= delta_{Ns-1} and the Ns labels of the
/// intervals they delimit.
///
/// Boundary convention: x < delta_1 maps to the first label,
/// delta_{i-1} <= x < delta_i to label i, and x >= delta_{Ns-1} to the last.
class ThresholdMap {
public:
  ThresholdMap(std::vector<double> thresholds, std::vector<int> labels)
      : thresholds_(std::move(thresholds)), labels_(std::move(labels)) {
    detail::require_arg(labels_.size() == thresholds_.size() + 1,
                        "threshold map needs exactly one more label than thresholds");
    detail::require_arg(std::is_sorted(thresholds_.begin(), thresholds_.end()),
                        "thresholds must be sorted non-decreasing");
    for (double t : thresholds_) detail::require_arg(std::isfinite(t), "thresholds must be finite");
    std::set<int> distinct(labels_.begin(), labels_.end());
    detail::require_arg(distinct.size() == labels_.size(), "state labels must be pairwise distinct");
  }

  int classify(double x) const noexcept {
    auto idx = std::upper_bound(thresholds_.begin(), thresholds_.end(), x) - thresholds_.begin();
    return labels_[static_cast<std::size_t>(idx)];
  }

  const std::vector<double>& thresholds() const noexcept { return thresholds_; }
  const std::vector<int>& labels() const noexcept { return labels_; }

private:
  std::vector<double> thresholds_;
  std::vector<int> labels_;
};

/// Integer state labels per sample.
class StateSequence {
public:
  /// Alphabet taken from the observed states.
  explicit StateSequence(std::vector<int> states) : states_(std::move(states)) {
    detail::require(!states_.empty(), "state sequence is empty");
    alphabet_.insert(states_.begin(), states_.end());
  }

  StateSequence(std::vector<int> states, std::set<int> alphabet, std::optional<ThresholdMap> source = {})
      : states_(std::move(states)), alphabet_(std::move(alphabet)), source_(std::move(source)) {
    detail::require(!states_.empty(), "state sequence is empty");
    detail::require(!alphabet_.empty(), "alphabet is empty");
    for (int s : states_) {
      detail::require(alphabet_.count(s) != 0, "state " + std::to_string(s) + " not in alphabet");
    }
  }

  std::span<const int> states() const noexcept { return states_; }
  std::size_t size() const noexcept { return states_.size(); }
  int operator[](std::size_t i) const noexcept { return states_[i]; }
  const std::set<int>& alphabet() const noexcept { return alphabet_; }
  const std::optional<ThresholdMap>& source_map() const noexcept { return source_; }

private:
  std::vector<int> states_;
  std::set<int> alphabet_;
  std::optional<ThresholdMap> source_;
};

// ---------------------------------------------------------------------------
// Moments. Population convention (divide by N) throughout.

inline double mean(std::span<const double> x) {
  detail::require(!x.empty(), "mean of empty sequence");
  double sum = 0.0;
  for (double v : x) sum += v;
  return sum / static_cast<double>(x.size());
}

inline double variance(std::span<const double> x) {
  const double mu = mean(x);
  double ss = 0.0;
  for (double v : x) ss += (v - mu) * (v - mu);
  return ss / static_cast<double>(x.size());
}

inline double stddev(std::span<const double> x) { return std::sqrt(variance(x)); }

// ---------------------------------------------------------------------------

inline StateSequence build_state_sequence(const TimeSeries& x, const ThresholdMap& map) {
  detail::require(x.size() > 0, "time series is empty");
  std::vector<int> states;
  states.reserve(x.size());
  for (double v : x) states.push_back(map.classify(v));
  std::set<int> alphabet(map.labels().begin(), map.labels().end());
  return StateSequence(std::move(states), std::move(alphabet), map);
}

/// r[n] = |x[n+1] - x[n]|, length N-1.
inline TimeSeries residual_series(const TimeSeries& x) {
  detail::require(x.size() >= 2, "residual series needs at least 2 samples");
  std::vector<double> r(x.size() - 1);
  for (std::size_t n = 0; n + 1 < x.size(); ++n) r[n] = std::abs(x[n + 1] - x[n]);
  return x.with_values(std::move(r));
}

inline std::vector<double> standardize(std::span<const double> x) {
  const double mu = mean(x);
  double ss = 0.0;
  for (double v : x) ss += (v - mu) * (v - mu);
  const double sigma = std::sqrt(ss / static_cast<double>(x.size()));
  detail::require(sigma > 0.0, "cannot standardize a zero-variance series");
  std::vector<double> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = (x[i] - mu) / sigma;
  return out;
}

/// Zero mean, unit population standard deviation.
inline TimeSeries standardize(const TimeSeries& x) { return x.with_values(standardize(x.values())); }

inline std::vector<double> profile(std::span<const double> x) {
  std::vector<double> y(x.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    acc += x[i];
    y[i] = acc;
  }
  return y;
}

/// Cumulative sum y[n] = x[1] + ... + x[n].
inline TimeSeries profile(const TimeSeries& x) { return x.with_values(profile(x.values())); }

/// Averages non-overlapping blocks of `b` samples; the trailing partial block
/// is dropped and the sample period scales by `b`.
inline TimeSeries block_rescale(const TimeSeries& x, std::size_t b) {
  detail::require(b >= 1, "block size must be at least 1");
  detail::require(b <= x.size(), "block size " + std::to_string(b) + " exceeds series length " +
                                     std::to_string(x.size()));
  const std::size_t blocks = x.size() / b;
  std::vector<double> out(blocks);
  for (std::size_t p = 0; p < blocks; ++p) {
    double sum = 0.0;
    for (std::size_t k = 0; k < b; ++k) sum += x[p * b + k];
    out[p] = sum / static_cast<double>(b);
  }
  return TimeSeries(std::move(out), x.sample_period() * static_cast<double>(b), x.label());
}

}  // namespace persist
