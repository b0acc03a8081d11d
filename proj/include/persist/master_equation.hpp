#pragma once

// Forward master equation dP/dt = M P for a continuous-time Markov process,
// integrated with classical fourth-order Runge-Kutta.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "persist/error.hpp"

namespace persist {

/// Transition rates alpha(from -> to) >= 0 between n states (1/time).
/// Diagonal entries are ignored; exit rates follow from conservation.
class RateMatrix {
public:
  explicit RateMatrix(std::size_t n_states) : n_(n_states), rates_(n_states * n_states, 0.0) {
    detail::require_arg(n_states >= 1, "rate matrix needs at least one state");
  }

  /// Row-major rates, rates[from][to].
  explicit RateMatrix(const std::vector<std::vector<double>>& rates) : RateMatrix(rates.size()) {
    for (std::size_t i = 0; i < n_; ++i) {
      detail::require_arg(rates[i].size() == n_, "rate matrix must be square");
      for (std::size_t j = 0; j < n_; ++j) {
        if (i != j) set(i, j, rates[i][j]);
      }
    }
  }

  std::size_t size() const noexcept { return n_; }

  void set(std::size_t from, std::size_t to, double rate) {
    detail::require_arg(from < n_ && to < n_, "state index out of range");
    detail::require_arg(from != to, "self-transition rates are implied by conservation");
    detail::require_arg(rate >= 0.0 && std::isfinite(rate), "transition rates must be finite and non-negative");
    rates_[from * n_ + to] = rate;
  }

  double rate(std::size_t from, std::size_t to) const noexcept { return from == to ? 0.0 : rates_[from * n_ + to]; }

  double exit_rate(std::size_t from) const noexcept {
    double sum = 0.0;
    for (std::size_t to = 0; to < n_; ++to) sum += rate(from, to);
    return sum;
  }

  double max_exit_rate() const noexcept {
    double m = 0.0;
    for (std::size_t i = 0; i < n_; ++i) m = std::max(m, exit_rate(i));
    return m;
  }

  /// Column-acting generator: G[i][j] = alpha(j -> i) for i != j and
  /// G[i][i] = -sum_k alpha(i -> k). Every column sums to zero.
  std::vector<double> generator() const {
    std::vector<double> g(n_ * n_, 0.0);
    for (std::size_t i = 0; i < n_; ++i) {
      for (std::size_t j = 0; j < n_; ++j) g[i * n_ + j] = (i == j) ? -exit_rate(i) : rate(j, i);
    }
    return g;
  }

private:
  std::size_t n_;
  std::vector<double> rates_;
};

struct MasterEquationOptions {
  double t_end = 1.0;
  double dt = 1e-3;
  std::size_t record_every = 1;  ///< keep every k-th step (the final step is always kept)
};

struct Trajectory {
  std::vector<double> times;
  std::vector<std::vector<double>> probabilities;
};

inline Trajectory master_equation_evolve(const RateMatrix& rates, std::vector<double> p0,
                                         const MasterEquationOptions& opt) {
  const std::size_t n = rates.size();
  detail::require_arg(p0.size() == n, "initial distribution has the wrong number of states");
  detail::require_arg(opt.t_end > 0.0 && opt.dt > 0.0, "t_end and dt must be positive");
  detail::require_arg(opt.record_every >= 1, "record_every must be at least 1");
  double total = 0.0;
  for (double p : p0) {
    detail::require_arg(p >= 0.0 && std::isfinite(p), "initial probabilities must be non-negative");
    total += p;
  }
  detail::require_arg(std::abs(total - 1.0) <= 1e-9, "initial distribution must sum to 1");
  const double max_exit = rates.max_exit_rate();
  detail::require_arg(max_exit == 0.0 || opt.dt < 0.1 / max_exit,
                      "dt too large for stability: need dt < 0.1 / max exit rate");

  const auto g = rates.generator();
  auto apply = [&](const std::vector<double>& p, std::vector<double>& out) {
    for (std::size_t i = 0; i < n; ++i) {
      double acc = 0.0;
      for (std::size_t j = 0; j < n; ++j) acc += g[i * n + j] * p[j];
      out[i] = acc;
    }
  };

  const auto steps = static_cast<std::size_t>(std::ceil(opt.t_end / opt.dt - 1e-9));
  Trajectory traj;
  traj.times.push_back(0.0);
  traj.probabilities.push_back(p0);

  std::vector<double> k1(n), k2(n), k3(n), k4(n), tmp(n);
  std::vector<double> p = std::move(p0);
  for (std::size_t step = 1; step <= steps; ++step) {
    const double t0 = static_cast<double>(step - 1) * opt.dt;
    const double h = (step == steps) ? opt.t_end - t0 : opt.dt;
    apply(p, k1);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = p[i] + 0.5 * h * k1[i];
    apply(tmp, k2);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = p[i] + 0.5 * h * k2[i];
    apply(tmp, k3);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = p[i] + h * k3[i];
    apply(tmp, k4);
    for (std::size_t i = 0; i < n; ++i) p[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    if (step % opt.record_every == 0 || step == steps) {
      traj.times.push_back(step == steps ? opt.t_end : static_cast<double>(step) * opt.dt);
      traj.probabilities.push_back(p);
    }
  }
  return traj;
}

}  // namespace persist
