#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace circquant {

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;

enum class Metric { Geodesic, Chordal };

inline const char* to_string(Metric m) {
  return m == Metric::Geodesic ? "geodesic" : "chordal";
}

inline Metric metric_from_string(const std::string& s) {
  if (s == "geodesic") return Metric::Geodesic;
  if (s == "chordal") return Metric::Chordal;
  throw std::invalid_argument("unknown metric '" + s + "'");
}

// Reduce x modulo 2π into [0, 2π).
inline double wrap(double x) {
  if (!std::isfinite(x)) throw std::domain_error("wrap: non-finite angle");
  double r = std::fmod(x, two_pi);
  if (r < 0.0) r += two_pi;
  // fmod of a tiny negative value plus 2π can round up to 2π itself
  if (r >= two_pi) r = 0.0;
  return r;
}

// Signed offset of x relative to ref, in [-π, π).
inline double wrap_signed(double x, double ref = 0.0) {
  double d = wrap(x - ref);
  return d >= pi ? d - two_pi : d;
}

/// An angle on the circle, always held in [0, 2π).
class Angle {
 public:
  constexpr Angle() = default;
  explicit Angle(double radians) : value_(wrap(radians)) {}

  double value() const { return value_; }
  operator double() const { return value_; }

 private:
  double value_ = 0.0;
};

/// Intrinsic arc distance min(|Δ|, 2π − |Δ|), in [0, π].
inline double geodesic_dist(double a, double b) {
  const double d = std::abs(wrap(a) - wrap(b));
  return std::min(d, two_pi - d);
}

/// Squared chordal distance 2 − 2cos Δ, evaluated as 4 sin²(Δ/2) so that
/// small separations keep full relative precision.
inline double chordal_dist_sq(double a, double b) {
  const double s = std::sin(0.5 * geodesic_dist(a, b));
  return 4.0 * s * s;
}

inline double dist_sq(Metric m, double a, double b) {
  if (m == Metric::Geodesic) {
    const double g = geodesic_dist(a, b);
    return g * g;
  }
  return chordal_dist_sq(a, b);
}

inline double dist(Metric m, double a, double b) {
  return m == Metric::Geodesic ? geodesic_dist(a, b) : std::sqrt(chordal_dist_sq(a, b));
}

// Counterclockwise travel from `from` to `to`, in (0, 2π]. Coincident
// angles give 2π so a single codepoint owns the whole circle.
inline double ccw_gap(double from, double to) {
  const double g = wrap(to - from);
  return g == 0.0 ? two_pi : g;
}

// x − sin x without cancellation for small x.
inline double x_minus_sin(double x) {
  if (std::abs(x) > 0.5) return x - std::sin(x);
  const double x2 = x * x;
  double term = x * x2 / 6.0;
  double sum = 0.0;
  for (int k = 1; k < 20 && std::abs(term) > 1e-300; ++k) {
    sum += term;
    term *= -x2 / ((2.0 * k + 2.0) * (2.0 * k + 3.0));
  }
  return sum;
}

/// (d_C² − d_G²)/d_G² as a function of the geodesic separation ψ ∈ (0, π],
/// computed to full relative precision.
inline double chordal_relative_gap(double psi) {
  if (psi <= 0.0) return 0.0;
  const double x = 0.5 * psi;
  const double s = std::sin(x);
  // (sin²x − x²)/x² = −(x − sin x)(x + sin x)/x²
  return -x_minus_sin(x) * (x + s) / (x * x);
}

}  // namespace circquant
