#pragma once

#include <cmath>
#include <cstddef>

#include "bessel.hpp"
#include "density.hpp"
#include "geometry.hpp"
#include "integrate.hpp"

namespace circquant {

/// High-resolution description of a density: Z = ∫ h^{1/3}, the limiting
/// value Z³/12 of n²V_n, and the point density λ = h^{1/3}/Z.
struct AsymptoticProfile {
  double Z = 0.0;
  double predicted_constant = 0.0;
  bool closed_form_used = false;

  double lambda(const CircularDensity& d, double theta) const { return std::cbrt(d(theta)) / Z; }
};

/// ∫ h^{1/3} by adaptive quadrature, never using a closed form.
inline double z_integral_quadrature(const CircularDensity& d, double tol = 1e-13) {
  double sum = 0.0;
  double lo = 0.0;
  auto pts = d.breakpoints(0.0, d.length());
  pts.push_back(d.length());
  for (double hi : pts) {
    sum += adaptive_simpson([&](double x) { return std::cbrt(d.eval(x)); }, lo, hi, tol);
    lo = hi;
  }
  return sum;
}

/// Z = ∫ h^{1/3}. Uniform, von Mises and bimodal densities on the full circle
/// use the Bessel-ratio closed form (2π)^{2/3} I₀(c/3)/I₀(c)^{1/3}.
inline AsymptoticProfile asymptotic_profile(const CircularDensity& d) {
  AsymptoticProfile p;
  const double two_pi_23 = std::pow(two_pi, 2.0 / 3.0);
  auto bessel_ratio = [&](double c) {
    // I₀(c/3)/I₀(c)^{1/3} with the exponential scales cancelling exactly
    return two_pi_23 * bessel_i0_scaled(c / 3.0) / std::cbrt(bessel_i0_scaled(c));
  };
  if (d.family() == Family::Uniform) {
    p.Z = std::pow(d.length(), 2.0 / 3.0);
    p.closed_form_used = true;
  } else if (d.family() == Family::VonMises && !d.on_arc()) {
    p.Z = bessel_ratio(d.kappa());
    p.closed_form_used = true;
  } else if (d.family() == Family::Bimodal && !d.on_arc()) {
    p.Z = bessel_ratio(d.beta());
    p.closed_form_used = true;
  } else {
    p.Z = z_integral_quadrature(d);
  }
  p.predicted_constant = p.Z * p.Z * p.Z / 12.0;
  return p;
}

inline double z_integral(const CircularDensity& d) { return asymptotic_profile(d).Z; }

/// lim n²V_n = Z³/12.
inline double predicted_constant(const CircularDensity& d) { return asymptotic_profile(d).predicted_constant; }

/// Small-α expansion (2π)²/12 · (1 − α²/6) of the cosine density's constant.
inline double cosine_expansion_constant(double alpha) {
  if (!(std::abs(alpha) < 1.0)) throw std::invalid_argument("cosine expansion needs |alpha| < 1");
  return two_pi * two_pi / 12.0 * (1.0 - alpha * alpha / 6.0);
}

/// Asymptotic length 1/(n λ(θ)) = Z/(n h(θ)^{1/3}) of the cell at θ.
inline double predicted_cell_length(const CircularDensity& d, double theta, std::size_t n) {
  if (n < 1) throw std::invalid_argument("n must be at least 1");
  return z_integral(d) / (static_cast<double>(n) * std::cbrt(d(theta)));
}

/// Asymptotic mass (Z/n) h(θ)^{2/3} of the cell at θ, i.e. its quadrature weight.
inline double predicted_quadrature_weight(const CircularDensity& d, double theta, std::size_t n) {
  if (n < 1) throw std::invalid_argument("n must be at least 1");
  const double c = std::cbrt(d(theta));
  return z_integral(d) / static_cast<double>(n) * c * c;
}

}  // namespace circquant
