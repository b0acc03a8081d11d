#pragma once

// Synthetic irradiance benchmark: a toy clear-sky envelope attenuated by a
// cloud factor in [0, 1] driven by hourly AR(1) noise, over one year.

#include <algorithm>
#include <cstdint>
#include <vector>

#include "oracles.hpp"
#include "persist/models.hpp"
#include "persist/series.hpp"

namespace bench {

struct Irradiance {
  persist::TimeSeries clear_sky;
  persist::TimeSeries observed;
};

inline Irradiance solar_year(std::uint64_t seed, double a = 0.8) {
  constexpr std::size_t hours = 365 * 24;
  const auto cloud = persist::simulate(persist::ArmaSpec::red_noise(a, 1.0), hours, seed).series;
  std::vector<double> cs(hours), obs(hours);
  for (std::size_t h = 0; h < hours; ++h) {
    cs[h] = oracle::clear_sky(h);
    const double attenuation = std::clamp(0.75 + 0.2 * cloud[h], 0.0, 1.0);
    obs[h] = cs[h] * attenuation;
  }
  return {persist::TimeSeries(cs, 3600.0), persist::TimeSeries(obs, 3600.0)};
}

}  // namespace bench
