#pragma once

// AR/ARMA simulation, the red-noise AR(1) estimator, e-folding times and a
// Monte-Carlo harness for first-change times.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <Eigen/Dense>

#include "persist/error.hpp"
#include "persist/random.hpp"
#include "persist/series.hpp"
#include "persist/text_spec.hpp"

namespace persist {

enum class ArmaVariant { standard, red_noise };

/// x[n] = a_1 x[n-1] + ... + a_p x[n-p] + e[n] - b_1 e[n-1] - ... - b_q e[n-q]
/// with e ~ N(0, sigma^2). MA terms enter with a minus sign.
///
/// The red-noise variant is x[n] = a x[n-1] + sqrt(1 - a^2) sigma e[n],
/// whose stationary variance is sigma^2.
struct ArmaSpec {
  std::vector<double> ar;
  std::vector<double> ma;
  double noise_sigma = 1.0;
  ArmaVariant variant = ArmaVariant::standard;

  void validate() const {
    detail::require_arg(noise_sigma > 0.0 && std::isfinite(noise_sigma), "noise sigma must be positive");
    for (double a : ar) detail::require_arg(std::isfinite(a), "AR coefficients must be finite");
    for (double b : ma) detail::require_arg(std::isfinite(b), "MA coefficients must be finite");
    if (variant == ArmaVariant::red_noise) {
      detail::require_arg(ar.size() == 1 && ma.empty(), "red noise requires exactly one AR and no MA coefficient");
      detail::require_arg(std::abs(ar[0]) < 1.0, "red noise requires |a| < 1");
    }
  }

  static ArmaSpec red_noise(double a, double sigma = 1.0) { return {{a}, {}, sigma, ArmaVariant::red_noise}; }

  /// x[n+1] = x[n] + N(0, sigma^2).
  static ArmaSpec gaussian_walk(double sigma = 1.0) { return {{1.0}, {}, sigma, ArmaVariant::standard}; }

  /// "ar=0.8,-0.12; ma=0.6; sigma=1; variant=standard"
  static ArmaSpec parse(std::string_view text) {
    const auto t = TextSpec::parse(text);
    t.restrict_to({"ar", "ma", "sigma", "variant"});
    ArmaSpec spec;
    spec.ar = t.numbers("ar");
    spec.ma = t.numbers("ma");
    spec.noise_sigma = t.number("sigma", 1.0);
    if (t.has("variant")) {
      const auto& v = t.get("variant");
      if (v == "standard") {
        spec.variant = ArmaVariant::standard;
      } else if (v == "red_noise") {
        spec.variant = ArmaVariant::red_noise;
      } else {
        throw usage_error("unknown ARMA variant '" + v + "'");
      }
    }
    spec.validate();
    return spec;
  }
};

enum class Stationarity { stationary, unit_root, explosive };

/// Classifies the AR part by the roots of 1 - a_1 z - ... - a_p z^p:
/// all outside the unit circle is stationary, any inside is explosive.
inline Stationarity classify_ar(const std::vector<double>& ar, double tol = 1e-9) {
  std::size_t p = ar.size();
  while (p > 0 && ar[p - 1] == 0.0) --p;
  if (p == 0) return Stationarity::stationary;
  // Companion matrix of lambda^p - a_1 lambda^(p-1) - ... - a_p; its
  // eigenvalues are the reciprocals of the back-shift roots.
  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(p));
  for (std::size_t j = 0; j < p; ++j) companion(0, static_cast<Eigen::Index>(j)) = ar[j];
  for (std::size_t i = 1; i < p; ++i) companion(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i - 1)) = 1.0;
  const Eigen::VectorXcd eig = companion.eigenvalues();
  double largest = 0.0;
  for (Eigen::Index i = 0; i < eig.size(); ++i) largest = std::max(largest, std::abs(eig[i]));
  if (largest > 1.0 + tol) return Stationarity::explosive;
  if (largest >= 1.0 - tol) return Stationarity::unit_root;
  return Stationarity::stationary;
}

struct Simulation {
  TimeSeries series;
  Stationarity stationarity = Stationarity::stationary;
  std::size_t burn_in = 0;

  /// Warning flag: the AR polynomial has a root inside the unit circle.
  bool explosive() const noexcept { return stationarity == Stationarity::explosive; }
};

/// Burn-in discarded before the returned samples: max(100, 10(p+q)) for
/// stationary specs, none otherwise.
inline std::size_t burn_in_length(const ArmaSpec& spec, Stationarity st) {
  if (st != Stationarity::stationary) return 0;
  return std::max<std::size_t>(100, 10 * (spec.ar.size() + spec.ma.size()));
}

namespace detail {

/// Incremental ARMA recursion from zero initial conditions.
class ArmaStepper {
public:
  ArmaStepper(const ArmaSpec& spec, Rng& rng)
      : spec_(spec), rng_(rng), x_(spec.ar.size(), 0.0), e_(spec.ma.size(), 0.0) {
    if (spec.variant == ArmaVariant::red_noise) innovation_scale_ = std::sqrt(1.0 - spec.ar[0] * spec.ar[0]);
  }

  double step() {
    const double e = spec_.noise_sigma * innovation_scale_ * rng_.normal();
    double v = e;
    for (std::size_t i = 0; i < x_.size(); ++i) v += spec_.ar[i] * x_[i];
    for (std::size_t j = 0; j < e_.size(); ++j) v -= spec_.ma[j] * e_[j];
    shift_in(x_, v);
    shift_in(e_, e);
    return v;
  }

private:
  static void shift_in(std::vector<double>& hist, double v) {
    if (hist.empty()) return;
    std::copy_backward(hist.begin(), hist.end() - 1, hist.end());
    hist[0] = v;
  }

  const ArmaSpec& spec_;
  Rng& rng_;
  std::vector<double> x_;  // x[n-1], x[n-2], ...
  std::vector<double> e_;  // e[n-1], e[n-2], ...
  double innovation_scale_ = 1.0;
};

}  // namespace detail

/// Deterministic for (spec, n, seed). An explosive AR part is flagged in the
/// result rather than rejected.
inline Simulation simulate(const ArmaSpec& spec, std::size_t n, std::uint64_t seed, double sample_period = 1.0) {
  spec.validate();
  detail::require_arg(n >= 1, "simulation length must be at least 1");
  const auto st = classify_ar(spec.ar);
  const auto burn = burn_in_length(spec, st);
  Rng rng(seed);
  detail::ArmaStepper stepper(spec, rng);
  for (std::size_t i = 0; i < burn; ++i) stepper.step();
  std::vector<double> out(n);
  for (auto& v : out) v = stepper.step();
  // Explosive paths may overflow; keep what is finite so the flag can be inspected.
  for (auto& v : out) {
    if (!std::isfinite(v)) v = std::copysign(std::numeric_limits<double>::max(), v);
  }
  return {TimeSeries(std::move(out), sample_period), st, burn};
}

/// a_hat = sum_{n>=2} x[n] x[n-1] / sum_{n>=2} x[n]^2 (no mean removal).
inline double fit_ar1(const TimeSeries& x) {
  detail::require(x.size() >= 3, "fit_ar1 needs at least 3 samples");
  double num = 0.0, den = 0.0;
  for (std::size_t i = 1; i < x.size(); ++i) {
    num += x[i] * x[i - 1];
    den += x[i] * x[i];
  }
  detail::require(den > 0.0, "fit_ar1: zero denominator");
  return num / den;
}

/// T_e = -tau / ln(a). Returns +infinity once a >= 1 - 1e-12.
inline double efolding_time(double a, double tau = 1.0) {
  detail::require_arg(a > 0.0 && a < 1.0, "e-folding time needs 0 < a < 1");
  detail::require_arg(tau > 0.0, "sample period must be positive");
  if (a >= 1.0 - 1e-12) return std::numeric_limits<double>::infinity();
  return -tau / std::log(a);
}

/// e-folding time of the series via its lag-one AR coefficient. A
/// coefficient at or below `significance` / sqrt(N) (the white-noise band)
/// means there is no exponential decay to measure.
inline double efolding_from_series(const TimeSeries& x, double significance = 3.0) {
  const double a = fit_ar1(x);
  const double band = significance / std::sqrt(static_cast<double>(x.size()));
  if (a <= 0.0 || a <= band) {
    throw data_error("no exponential decay: lag-one coefficient " + std::to_string(a) +
                     " is not significantly positive");
  }
  if (a >= 1.0) throw data_error("no exponential decay: lag-one coefficient " + std::to_string(a) + " >= 1");
  return efolding_time(a, x.sample_period());
}

// ---------------------------------------------------------------------------
// Monte-Carlo first-change times

struct MonteCarloResult {
  double estimate = 0.0;
  double std_error = 0.0;
  std::size_t epochs = 0;
  std::size_t capped = 0;            ///< epochs that hit the step cap (excluded)
  std::vector<double> per_epoch;     ///< first-change step per epoch, NaN when capped
};

struct MonteCarloOptions {
  std::size_t epochs = 10000;
  std::uint64_t seed = 0;
  std::size_t max_steps = 10'000'000;
  unsigned threads = 0;  ///< 0: hardware concurrency
  bool keep_per_epoch = false;
};

/// Runs the process from rest until the residual |x[n] - x[n-1]| first
/// exceeds epsilon and reports the mean first-change step. Epoch i draws from
/// stream i of the master seed, so results do not depend on thread count.
inline MonteCarloResult monte_carlo_first_change(const ArmaSpec& spec, double epsilon, const MonteCarloOptions& opt) {
  spec.validate();
  detail::require_arg(epsilon >= 0.0, "epsilon must be non-negative");
  detail::require_arg(opt.epochs >= 100, "at least 100 epochs are required");

  std::vector<double> steps(opt.epochs);
  auto run_epoch = [&](std::size_t epoch) {
    Rng rng(opt.seed, epoch);
    detail::ArmaStepper stepper(spec, rng);
    double prev = 0.0;
    for (std::size_t n = 1; n <= opt.max_steps; ++n) {
      const double x = stepper.step();
      if (std::abs(x - prev) > epsilon) return static_cast<double>(n);
      prev = x;
    }
    return std::numeric_limits<double>::quiet_NaN();
  };

  unsigned workers = opt.threads ? opt.threads : std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, opt.epochs));
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next.fetch_add(1); i < opt.epochs; i = next.fetch_add(1)) steps[i] = run_epoch(i);
  };
  std::vector<std::thread> pool;
  for (unsigned w = 1; w < workers; ++w) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  MonteCarloResult r;
  r.epochs = opt.epochs;
  double sum = 0.0;
  std::size_t used = 0;
  for (double v : steps) {
    if (std::isnan(v)) {
      ++r.capped;
      continue;
    }
    sum += v;
    ++used;
  }
  if (used == 0) throw data_error("every Monte-Carlo epoch hit the step cap");
  r.estimate = sum / static_cast<double>(used);
  double ss = 0.0;
  for (double v : steps) {
    if (!std::isnan(v)) ss += (v - r.estimate) * (v - r.estimate);
  }
  const double var = used > 1 ? ss / static_cast<double>(used - 1) : 0.0;
  r.std_error = std::sqrt(var / static_cast<double>(used));
  if (opt.keep_per_epoch) r.per_epoch = std::move(steps);
  return r;
}

}  // namespace persist
