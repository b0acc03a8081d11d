#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "persist/error.hpp"
#include "persist/fft.hpp"
#include "persist/random.hpp"
#include "persist/series.hpp"
#include "persist/text_spec.hpp"

namespace persist {

enum class GeneratorKind { gaussian_noise, uniform_noise, gaussian_walk, uniform_walk, ffm_powerlaw };

struct GeneratorSpec {
  GeneratorKind kind = GeneratorKind::gaussian_noise;
  double mu = 0.0;
  double sigma = 1.0;
  double low = 0.0;
  double high = 1.0;
  double beta = 0.0;
  std::size_t n = 1024;
  std::uint64_t seed = 0;

  void validate() const {
    detail::require_arg(n >= 1, "generator length must be at least 1");
    switch (kind) {
      case GeneratorKind::gaussian_noise:
      case GeneratorKind::gaussian_walk:
        detail::require_arg(sigma > 0.0 && std::isfinite(sigma) && std::isfinite(mu), "need finite mu and sigma > 0");
        break;
      case GeneratorKind::uniform_noise:
      case GeneratorKind::uniform_walk:
        detail::require_arg(std::isfinite(low) && std::isfinite(high) && low < high, "need finite low < high");
        break;
      case GeneratorKind::ffm_powerlaw:
        detail::require_arg(beta >= 0.0 && std::isfinite(beta), "ffm needs beta >= 0");
        detail::require_arg(n >= 256 && (n & (n - 1)) == 0, "ffm needs n a power of 2 and at least 256");
        break;
    }
  }
};

inline GeneratorKind parse_generator_kind(const std::string& name) {
  if (name == "gaussian_noise") return GeneratorKind::gaussian_noise;
  if (name == "uniform_noise") return GeneratorKind::uniform_noise;
  if (name == "gaussian_walk") return GeneratorKind::gaussian_walk;
  if (name == "uniform_walk") return GeneratorKind::uniform_walk;
  if (name == "ffm" || name == "ffm_powerlaw") return GeneratorKind::ffm_powerlaw;
  throw usage_error("unknown generator kind '" + name + "'");
}

/// "kind=ffm; beta=0.6; n=65536; seed=7". Keys: kind, mu, sigma, low, high,
/// beta, n, seed. The seed is mandatory.
inline GeneratorSpec parse_generator_spec(std::string_view text) {
  const auto t = TextSpec::parse(text);
  t.restrict_to({"kind", "mu", "sigma", "low", "high", "beta", "n", "seed"});
  GeneratorSpec g;
  g.kind = parse_generator_kind(t.get("kind"));
  g.mu = t.number("mu", g.mu);
  g.sigma = t.number("sigma", g.sigma);
  g.low = t.number("low", g.low);
  g.high = t.number("high", g.high);
  g.beta = t.number("beta", g.beta);
  const auto n = t.integer("n");
  detail::require_arg(n >= 1, "n must be positive");
  g.n = static_cast<std::size_t>(n);
  const auto seed = t.integer("seed");
  detail::require_arg(seed >= 0, "seed must be non-negative");
  g.seed = static_cast<std::uint64_t>(seed);
  g.validate();
  return g;
}

/// Fourier filtering: white Gaussian noise is transformed, each coefficient
/// at frequency f = j/n is scaled by f^(-beta/2), the zero-frequency term is
/// removed, and the inverse transform is standardized. The resulting power
/// spectrum follows f^-beta over the whole grid.
inline TimeSeries ffm_powerlaw(std::size_t n, double beta, std::uint64_t seed) {
  GeneratorSpec{GeneratorKind::ffm_powerlaw, 0, 1, 0, 1, beta, n, seed}.validate();
  Rng rng(seed);
  std::vector<double> white(n);
  for (auto& v : white) v = rng.normal();
  auto spec = fft::forward(white);
  spec[0] = 0.0;
  for (std::size_t j = 1; j < spec.size(); ++j) {
    const double f = static_cast<double>(j) / static_cast<double>(n);
    spec[j] *= std::pow(f, -beta / 2.0);
  }
  return TimeSeries(standardize(std::span<const double>(fft::inverse(spec, n))));
}

inline TimeSeries generate(const GeneratorSpec& spec) {
  spec.validate();
  if (spec.kind == GeneratorKind::ffm_powerlaw) return ffm_powerlaw(spec.n, spec.beta, spec.seed);

  Rng rng(spec.seed);
  std::vector<double> v(spec.n);
  const bool gaussian = spec.kind == GeneratorKind::gaussian_noise || spec.kind == GeneratorKind::gaussian_walk;
  for (auto& x : v) x = gaussian ? rng.normal(spec.mu, spec.sigma) : rng.uniform(spec.low, spec.high);
  if (spec.kind == GeneratorKind::gaussian_walk || spec.kind == GeneratorKind::uniform_walk) v = profile(v);
  return TimeSeries(std::move(v));
}

}  // namespace persist
