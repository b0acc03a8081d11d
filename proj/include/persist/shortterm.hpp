#pragma once

// Short-term persistence: dwell-time statistics over state sequences,
// persistence measures built from them, k-order Markov chain estimation, and
// closed forms for the Gaussian walker and the shock/damage model.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <numbers>
#include <optional>
#include <vector>

#include <nlohmann/json.hpp>

#include "persist/error.hpp"
#include "persist/series.hpp"

namespace persist {

struct StateDwell {
  std::vector<std::size_t> episodes;  ///< run lengths in order of occurrence
  std::size_t n_visits = 0;
  std::size_t n_samples = 0;
  double mean_dwell = 0.0;
  std::size_t max_dwell = 0;
  double frequency = 0.0;
};

/// Per-state dwell statistics. Every alphabet state has an entry, possibly
/// with zero visits. The final run is right-censored by the end of the record
/// but still counted as an episode.
struct DwellStats {
  std::map<int, StateDwell> per_state;
  std::size_t length = 0;

  /// All episode lengths pooled across states, in state order.
  std::vector<std::size_t> pooled_episodes() const {
    std::vector<std::size_t> all;
    for (const auto& [state, d] : per_state) all.insert(all.end(), d.episodes.begin(), d.episodes.end());
    return all;
  }
};

inline DwellStats dwell_stats(const StateSequence& s) {
  DwellStats out;
  out.length = s.size();
  for (int state : s.alphabet()) out.per_state[state];

  std::size_t run = 1;
  for (std::size_t n = 1; n <= s.size(); ++n) {
    if (n < s.size() && s[n] == s[n - 1]) {
      ++run;
      continue;
    }
    out.per_state[s[n - 1]].episodes.push_back(run);
    run = 1;
  }

  for (auto& [state, d] : out.per_state) {
    d.n_visits = d.episodes.size();
    for (auto len : d.episodes) {
      d.n_samples += len;
      d.max_dwell = std::max(d.max_dwell, len);
    }
    d.mean_dwell = d.n_visits ? static_cast<double>(d.n_samples) / static_cast<double>(d.n_visits) : 0.0;
    d.frequency = static_cast<double>(d.n_samples) / static_cast<double>(out.length);
  }
  return out;
}

/// Expected dwell time: mean length of all episodes, all states pooled.
inline double persistence_expected(const StateSequence& s) {
  const auto episodes = dwell_stats(s).pooled_episodes();
  double total = 0.0;
  for (auto len : episodes) total += static_cast<double>(len);
  return total / static_cast<double>(episodes.size());
}

struct BurstPersistence {
  /// max(T_i) / N_i, with N_i the number of visits; only visited states.
  std::map<int, double> per_state;
  /// max_i(per_state) / |alphabet|.
  double max_ratio = 0.0;
  /// Mean of per_state over visited states.
  double mean_ratio = 0.0;
};

inline BurstPersistence persistence_burst(const StateSequence& s) {
  const auto stats = dwell_stats(s);
  BurstPersistence out;
  double best = 0.0;
  double sum = 0.0;
  for (const auto& [state, d] : stats.per_state) {
    if (d.n_visits == 0) continue;
    const double ratio = static_cast<double>(d.max_dwell) / static_cast<double>(d.n_visits);
    out.per_state[state] = ratio;
    best = std::max(best, ratio);
    sum += ratio;
  }
  out.max_ratio = best / static_cast<double>(s.alphabet().size());
  out.mean_ratio = sum / static_cast<double>(out.per_state.size());
  return out;
}

/// Empirical distribution of dwell lengths of `state`: fraction of its
/// episodes lasting exactly N_r samples.
inline std::map<std::size_t, double> persistence_pp(const StateSequence& s, int state) {
  const auto stats = dwell_stats(s);
  auto it = stats.per_state.find(state);
  if (it == stats.per_state.end() || it->second.n_visits == 0) {
    throw data_error("state " + std::to_string(state) + " does not occur in the sequence");
  }
  std::map<std::size_t, std::size_t> counts;
  for (auto len : it->second.episodes) ++counts[len];
  std::map<std::size_t, double> out;
  const double total = static_cast<double>(it->second.n_visits);
  for (const auto& [len, c] : counts) out[len] = static_cast<double>(c) / total;
  return out;
}

// ---------------------------------------------------------------------------
// Markov chains

/// k-order transition table estimated by conditional relative frequencies.
/// Histories are listed oldest first: {s[n-k], ..., s[n-1]} -> s[n].
class TransitionModel {
public:
  using History = std::vector<int>;

  struct Entry {
    History history;
    int next = 0;
    std::uint64_t count = 0;
    double prob = 0.0;
  };

  TransitionModel() = default;
  TransitionModel(std::size_t order, std::vector<Entry> entries) : order_(order), entries_(std::move(entries)) {}

  std::size_t order() const noexcept { return order_; }
  const std::vector<Entry>& entries() const noexcept { return entries_; }

  /// nullopt when the history was never observed; 0 when the history was
  /// observed but never followed by `next`.
  std::optional<double> probability(const History& history, int next) const {
    bool seen = false;
    for (const auto& e : entries_) {
      if (e.history != history) continue;
      seen = true;
      if (e.next == next) return e.prob;
    }
    return seen ? std::optional<double>(0.0) : std::nullopt;
  }

  nlohmann::json to_json() const {
    nlohmann::json j;
    j["order"] = order_;
    j["entries"] = nlohmann::json::array();
    for (const auto& e : entries_) {
      j["entries"].push_back({{"history", e.history}, {"next", e.next}, {"count", e.count}, {"prob", e.prob}});
    }
    return j;
  }

  static TransitionModel from_json(const nlohmann::json& j) {
    std::vector<Entry> entries;
    for (const auto& e : j.at("entries")) {
      entries.push_back({e.at("history").get<History>(), e.at("next").get<int>(), e.at("count").get<std::uint64_t>(),
                         e.at("prob").get<double>()});
    }
    return TransitionModel(j.at("order").get<std::size_t>(), std::move(entries));
  }

private:
  std::size_t order_ = 1;
  std::vector<Entry> entries_;
};

inline TransitionModel fit_markov(const StateSequence& s, std::size_t order) {
  detail::require_arg(order >= 1, "Markov order must be at least 1");
  detail::require(s.size() >= order + 1, "sequence of length " + std::to_string(s.size()) +
                                             " too short for order " + std::to_string(order));
  std::map<TransitionModel::History, std::map<int, std::uint64_t>> counts;
  const auto states = s.states();
  for (std::size_t n = order; n < s.size(); ++n) {
    TransitionModel::History h(states.begin() + static_cast<std::ptrdiff_t>(n - order),
                               states.begin() + static_cast<std::ptrdiff_t>(n));
    ++counts[h][states[n]];
  }
  std::vector<TransitionModel::Entry> entries;
  for (const auto& [h, nexts] : counts) {
    std::uint64_t total = 0;
    for (const auto& [next, c] : nexts) total += c;
    for (const auto& [next, c] : nexts) {
      entries.push_back({h, next, c, static_cast<double>(c) / static_cast<double>(total)});
    }
  }
  return TransitionModel(order, std::move(entries));
}

/// Unweighted mean of the estimated self-transition probabilities p_ii over
/// states that have at least one outgoing transition. Reduces to
/// (p00 + p11) / 2 for binary chains.
inline double persistence_markov(const StateSequence& s) {
  detail::require(s.size() >= 2, "Markov persistence needs at least 2 samples");
  std::map<int, std::pair<std::uint64_t, std::uint64_t>> stay_total;
  for (std::size_t n = 0; n + 1 < s.size(); ++n) {
    auto& [stay, total] = stay_total[s[n]];
    ++total;
    if (s[n + 1] == s[n]) ++stay;
  }
  double sum = 0.0;
  for (const auto& [state, st] : stay_total) sum += static_cast<double>(st.first) / static_cast<double>(st.second);
  return sum / static_cast<double>(stay_total.size());
}

// ---------------------------------------------------------------------------
// Gaussian walker x[n+1] = x[n] + N(mu, sigma): a state change happens when
// the residual |x[n+1] - x[n]| exceeds epsilon.

/// Standard Gaussian upper tail.
inline double gaussian_q(double x) { return 0.5 * std::erfc(x / std::numbers::sqrt2); }

/// P(r > epsilon) = 2 Q((epsilon - mu) / sigma). The two-tail doubling is
/// exact for mu = 0.
inline double gaussian_change_prob(double epsilon, double mu, double sigma) {
  detail::require_arg(sigma > 0.0, "sigma must be positive");
  detail::require_arg(epsilon >= 0.0, "epsilon must be non-negative");
  return 2.0 * gaussian_q((epsilon - mu) / sigma);
}

/// One-step persistence 1 - 2Q(.).
inline double gaussian_pm(double epsilon, double mu, double sigma) {
  return 1.0 - gaussian_change_prob(epsilon, mu, sigma);
}

/// Probability that the first change happens at step T (geometric law).
inline double gaussian_pp(std::int64_t steps, double epsilon, double mu, double sigma) {
  detail::require_arg(steps >= 1, "T must be at least 1");
  const double p = gaussian_change_prob(epsilon, mu, sigma);
  return p * std::pow(1.0 - p, static_cast<double>(steps - 1));
}

// ---------------------------------------------------------------------------
// Shock models: Poisson shocks with rate lambda.

enum class ShockMode { count, damage };

struct ShockModel {
  ShockMode mode = ShockMode::count;
  std::int64_t shocks = 1;  ///< count mode: shocks needed to leave the state
  double rate = 1.0;        ///< lambda
  double damage_rate = 0.0; ///< damage mode: eta of the exponential damage law
  double threshold = 0.0;   ///< damage mode: epsilon
};

/// Expected lifetime E[T]: k / lambda (count) or (1 + eta eps) / lambda (damage).
inline double shock_model_pe(const ShockModel& m) {
  detail::require_arg(m.rate > 0.0, "shock rate lambda must be positive");
  if (m.mode == ShockMode::count) {
    detail::require_arg(m.shocks >= 1, "shock count k must be at least 1");
    return static_cast<double>(m.shocks) / m.rate;
  }
  detail::require_arg(m.damage_rate >= 0.0 && m.threshold >= 0.0, "eta and epsilon must be non-negative");
  return (1.0 + m.damage_rate * m.threshold) / m.rate;
}

}  // namespace persist
