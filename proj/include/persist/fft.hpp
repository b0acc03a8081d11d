#pragma once

// Thin RAII layer over FFTW's real-data transforms.

#include <complex>
#include <cstddef>
#include <memory>
#include <mutex>
#include <span>
#include <vector>

#include <fftw3.h>

#include "persist/error.hpp"

namespace persist::fft {

namespace detail {

// The FFTW planner is not re-entrant; plan execution is.
inline std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct PlanDeleter {
  void operator()(fftw_plan p) const noexcept {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(p);
  }
};

using Plan = std::unique_ptr<std::remove_pointer_t<fftw_plan>, PlanDeleter>;

}  // namespace detail

/// Unnormalized forward transform of real input: n/2 + 1 coefficients
/// X[k] = sum_t x[t] exp(-2 pi i k t / n).
inline std::vector<std::complex<double>> forward(std::span<const double> x) {
  const int n = static_cast<int>(x.size());
  persist::detail::require(n >= 1, "FFT of empty input");
  std::vector<double> in(x.begin(), x.end());
  std::vector<std::complex<double>> out(x.size() / 2 + 1);
  detail::Plan plan;
  {
    std::lock_guard lock(detail::planner_mutex());
    plan.reset(fftw_plan_dft_r2c_1d(n, in.data(), reinterpret_cast<fftw_complex*>(out.data()), FFTW_ESTIMATE));
  }
  fftw_execute(plan.get());
  return out;
}

/// Inverse of `forward` including the 1/n factor. `n` is the real length.
inline std::vector<double> inverse(std::span<const std::complex<double>> spectrum, std::size_t n) {
  persist::detail::require(spectrum.size() == n / 2 + 1, "spectrum length does not match n/2+1");
  // c2r transforms overwrite their input.
  std::vector<std::complex<double>> in(spectrum.begin(), spectrum.end());
  std::vector<double> out(n);
  detail::Plan plan;
  {
    std::lock_guard lock(detail::planner_mutex());
    plan.reset(fftw_plan_dft_c2r_1d(static_cast<int>(n), reinterpret_cast<fftw_complex*>(in.data()), out.data(),
                                    FFTW_ESTIMATE));
  }
  fftw_execute(plan.get());
  const double scale = 1.0 / static_cast<double>(n);
  for (double& v : out) v *= scale;
  return out;
}

}  // namespace persist::fft
