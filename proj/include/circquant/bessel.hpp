#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace circquant {

namespace detail {

// Power series Σ (x/2)^{2m}/(m!)² scaled by e^{-x}. All terms are positive,
// so the sum is accurate to a few ulps for the range it is used on.
inline double i0_series_scaled(double x) {
  const double q = 0.25 * x * x;
  double term = 1.0;
  double sum = 1.0;
  for (int m = 1; m < 500; ++m) {
    term *= q / (static_cast<double>(m) * m);
    sum += term;
    if (term < sum * 1e-17) break;
  }
  return sum * std::exp(-x);
}

// Hankel asymptotic expansion e^{-x} I₀(x) ≈ (2πx)^{-1/2} Σ [(2k−1)!!]²/(k! (8x)^k).
// Truncated at the smallest term; error below e^{-2x} relative.
inline double i0_asymptotic_scaled(double x) {
  double term = 1.0;
  double sum = 1.0;
  for (int k = 1; k < 200; ++k) {
    const double odd = 2.0 * k - 1.0;
    const double next = term * odd * odd / (k * 8.0 * x);
    if (next >= term) break;
    term = next;
    sum += term;
    if (term < sum * 1e-17) break;
  }
  return sum / std::sqrt(2.0 * std::numbers::pi * x);
}

inline void check_i0_argument(double x) {
  if (!(x >= 0.0) || x > 700.0)
    throw std::domain_error("bessel_i0: argument must lie in [0, 700]");
}

}  // namespace detail

/// e^{-x} I₀(x), the overflow-free form used by the von Mises normalizers.
inline double bessel_i0_scaled(double x) {
  detail::check_i0_argument(x);
  return x <= 30.0 ? detail::i0_series_scaled(x) : detail::i0_asymptotic_scaled(x);
}

/// Modified Bessel function of the first kind of order 0, for 0 ≤ x ≤ 700.
inline double bessel_i0(double x) {
  detail::check_i0_argument(x);
  if (x <= 30.0) {
    const double q = 0.25 * x * x;
    double term = 1.0;
    double sum = 1.0;
    for (int m = 1; m < 500; ++m) {
      term *= q / (static_cast<double>(m) * m);
      sum += term;
      if (term < sum * 1e-17) break;
    }
    return sum;
  }
  return detail::i0_asymptotic_scaled(x) * std::exp(x);
}

}  // namespace circquant
