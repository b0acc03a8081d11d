#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "persist/error.hpp"

namespace persist {

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double sse = 0.0;  ///< residual sum of squares
};

/// Ordinary least squares y = intercept + slope * x.
inline LineFit fit_line(std::span<const double> x, std::span<const double> y) {
  detail::require(x.size() == y.size(), "fit_line: x and y differ in length");
  detail::require(x.size() >= 2, "fit_line: need at least 2 points");
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  detail::require(sxx > 0.0, "fit_line: x values are all equal");
  LineFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (f.intercept + f.slope * x[i]);
    f.sse += r * r;
  }
  return f;
}

/// Orthonormal basis of polynomials of degree 0..order sampled at
/// t = 0..length-1. Projecting a segment onto it is a least-squares
/// polynomial fit; what remains is the detrended residual.
class PolynomialDetrender {
public:
  PolynomialDetrender(std::size_t length, std::size_t order) : length_(length), order_(order) {
    detail::require_arg(length >= order + 2, "segment too short for the detrending order");
    // Centred, scaled abscissa keeps the monomials well conditioned.
    const double half = 0.5 * static_cast<double>(length - 1);
    std::vector<double> t(length);
    for (std::size_t i = 0; i < length; ++i) t[i] = (static_cast<double>(i) - half) / half;

    basis_.assign((order + 1) * length, 0.0);
    for (std::size_t k = 0; k <= order; ++k) {
      double* q = &basis_[k * length];
      for (std::size_t i = 0; i < length; ++i) q[i] = std::pow(t[i], static_cast<double>(k));
      // Two passes of modified Gram-Schmidt.
      for (int pass = 0; pass < 2; ++pass) {
        for (std::size_t j = 0; j < k; ++j) {
          const double* p = &basis_[j * length];
          double dot = 0.0;
          for (std::size_t i = 0; i < length; ++i) dot += p[i] * q[i];
          for (std::size_t i = 0; i < length; ++i) q[i] -= dot * p[i];
        }
      }
      double norm = 0.0;
      for (std::size_t i = 0; i < length; ++i) norm += q[i] * q[i];
      norm = std::sqrt(norm);
      for (std::size_t i = 0; i < length; ++i) q[i] /= norm;
    }
  }

  std::size_t length() const noexcept { return length_; }
  std::size_t order() const noexcept { return order_; }

  /// Sum of squared residuals after removing the best-fit polynomial.
  /// `work` is scratch space of at least length() elements.
  double residual_sse(std::span<const double> segment, std::span<double> work) const {
    for (std::size_t i = 0; i < length_; ++i) work[i] = segment[i];
    for (std::size_t k = 0; k <= order_; ++k) {
      const double* q = &basis_[k * length_];
      double dot = 0.0;
      for (std::size_t i = 0; i < length_; ++i) dot += q[i] * work[i];
      for (std::size_t i = 0; i < length_; ++i) work[i] -= dot * q[i];
    }
    double sse = 0.0;
    for (std::size_t i = 0; i < length_; ++i) sse += work[i] * work[i];
    return sse;
  }

private:
  std::size_t length_;
  std::size_t order_;
  std::vector<double> basis_;
};

}  // namespace persist
