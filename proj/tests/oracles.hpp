#pragma once

// Independent reference implementations used only by the tests. They favour
// the most literal formulation over speed so that they share no code path
// with the library.

#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <map>
#include <numbers>
#include <random>
#include <vector>

namespace oracle {

/// Dwell lengths of every maximal run, collected per state by scanning for
/// run ends.
inline std::map<int, std::vector<std::size_t>> runs(const std::vector<int>& s) {
  std::map<int, std::vector<std::size_t>> out;
  std::size_t start = 0;
  for (std::size_t i = 1; i <= s.size(); ++i) {
    if (i == s.size() || s[i] != s[start]) {
      out[s[start]].push_back(i - start);
      start = i;
    }
  }
  return out;
}

inline double pooled_mean_run(const std::vector<int>& s) {
  double total = 0.0;
  std::size_t count = 0;
  for (const auto& [state, lens] : runs(s)) {
    for (auto l : lens) {
      total += static_cast<double>(l);
      ++count;
    }
  }
  return total / static_cast<double>(count);
}

/// Mean self-transition probability from raw pair counts.
inline double mean_self_transition(const std::vector<int>& s) {
  std::map<int, std::pair<double, double>> stay;  // state -> (self, total)
  for (std::size_t i = 0; i + 1 < s.size(); ++i) {
    auto& e = stay[s[i]];
    e.second += 1.0;
    if (s[i + 1] == s[i]) e.first += 1.0;
  }
  double sum = 0.0;
  for (const auto& [state, e] : stay) sum += e.first / e.second;
  return sum / static_cast<double>(stay.size());
}

/// Direct O(N^2) discrete Fourier transform power |X_j|^2 / N of the
/// mean-removed series for j = 1..N/2.
inline std::vector<double> dft_power(const std::vector<double>& x) {
  const std::size_t n = x.size();
  double m = 0.0;
  for (double v : x) m += v;
  m /= static_cast<double>(n);
  std::vector<double> out;
  for (std::size_t j = 1; j <= n / 2; ++j) {
    std::complex<long double> acc = 0;
    for (std::size_t t = 0; t < n; ++t) {
      const long double ang = -2.0L * std::numbers::pi_v<long double> * static_cast<long double>(j * t % n) /
                              static_cast<long double>(n);
      acc += static_cast<long double>(x[t] - m) * std::complex<long double>(std::cos(ang), std::sin(ang));
    }
    out.push_back(static_cast<double>(std::norm(acc) / static_cast<long double>(n)));
  }
  return out;
}

/// Least-squares polynomial residual sum of squares via the normal equations
/// in long double, solved by Gaussian elimination with partial pivoting.
inline double polyfit_sse(const std::vector<double>& y, std::size_t order) {
  const std::size_t n = y.size(), m = order + 1;
  std::vector<std::vector<long double>> a(m, std::vector<long double>(m + 1, 0.0L));
  const long double half = 0.5L * static_cast<long double>(n - 1);
  auto t = [&](std::size_t i) { return (static_cast<long double>(i) - half) / half; };
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t r = 0; r < m; ++r) {
      for (std::size_t c = 0; c < m; ++c) a[r][c] += std::pow(t(i), static_cast<long double>(r + c));
      a[r][m] += std::pow(t(i), static_cast<long double>(r)) * y[i];
    }
  }
  for (std::size_t col = 0; col < m; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < m; ++r) {
      if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
    }
    std::swap(a[col], a[piv]);
    for (std::size_t r = 0; r < m; ++r) {
      if (r == col) continue;
      const long double f = a[r][col] / a[col][col];
      for (std::size_t c = col; c <= m; ++c) a[r][c] -= f * a[col][c];
    }
  }
  long double sse = 0.0L;
  for (std::size_t i = 0; i < n; ++i) {
    long double fit = 0.0L;
    for (std::size_t r = 0; r < m; ++r) fit += a[r][m] / a[r][r] * std::pow(t(i), static_cast<long double>(r));
    sse += (y[i] - fit) * (y[i] - fit);
  }
  return static_cast<double>(sse);
}

/// Upper Gaussian tail by composite Simpson integration of the density on
/// [x, x + 40].
inline double q_simpson(double x, int panels = 200000) {
  const double a = x, b = x + 40.0, h = (b - a) / panels;
  auto phi = [](double u) { return std::exp(-0.5 * u * u) / std::sqrt(2.0 * std::numbers::pi); };
  double sum = phi(a) + phi(b);
  for (int i = 1; i < panels; ++i) sum += (i % 2 ? 4.0 : 2.0) * phi(a + i * h);
  return sum * h / 3.0;
}

/// Two-state chain with rates a (0 -> 1) and b (1 -> 0), starting in state 0.
inline double two_state_p0(double a, double b, double t) {
  const double eq = b / (a + b);
  return eq + (1.0 - eq) * std::exp(-(a + b) * t);
}

/// Bartlett variance of the lag-k sample autocorrelation of an AR(1) process.
inline double ar1_acf_variance(double a, std::size_t k, std::size_t n) {
  const double a2 = a * a, a2k = std::pow(a2, static_cast<double>(k));
  return ((1.0 + a2) * (1.0 - a2k) / (1.0 - a2) - 2.0 * static_cast<double>(k) * a2k) / static_cast<double>(n);
}

/// Standard-library Gaussian noise, independent of the library generator.
inline std::vector<double> std_normal(std::size_t n, std::uint32_t seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> d(0.0, 1.0);
  std::vector<double> out(n);
  for (auto& v : out) v = d(gen);
  return out;
}

inline std::vector<double> cumsum(const std::vector<double>& x) {
  std::vector<double> out(x.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = acc += x[i];
  return out;
}

/// Toy hourly clear-sky irradiance in W/m^2: a half-sine daylight arc whose
/// peak and day length follow the season.
inline double clear_sky(std::size_t hour) {
  const double day = static_cast<double>(hour / 24);
  const double h = static_cast<double>(hour % 24) + 0.5;
  const double season = std::cos(2.0 * std::numbers::pi * (day - 172.0) / 365.0);
  const double day_length = 12.0 + 3.0 * season;
  const double peak = 800.0 + 200.0 * season;
  const double rise = 12.0 - day_length / 2.0;
  if (h <= rise || h >= rise + day_length) return 0.0;
  return peak * std::sin(std::numbers::pi * (h - rise) / day_length);
}

}  // namespace oracle
