#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <numbers>

namespace circquant {

/// Which quadrature path an integral takes. `Fast` is the fixed composite
/// Gauss–Legendre rule used inside solver loops; `Adaptive` is the
/// error-controlled adaptive Simpson rule used for reported values.
enum class QuadMode { Fast, Adaptive };

namespace detail {

template <std::size_t N>
struct GaussLegendreTable {
  std::array<double, N> nodes{};
  std::array<double, N> weights{};

  GaussLegendreTable() {
    // Newton on P_N starting from the Chebyshev-like guess.
    for (std::size_t i = 0; i < (N + 1) / 2; ++i) {
      double x = std::cos(std::numbers::pi * (i + 0.75) / (N + 0.5));
      double dp = 0.0;
      for (int it = 0; it < 100; ++it) {
        double p0 = 1.0, p1 = x;
        for (std::size_t k = 2; k <= N; ++k) {
          const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
          p0 = p1;
          p1 = p2;
        }
        dp = N * (x * p1 - p0) / (x * x - 1.0);
        const double dx = p1 / dp;
        x -= dx;
        if (std::abs(dx) < 1e-16) break;
      }
      const double w = 2.0 / ((1.0 - x * x) * dp * dp);
      nodes[i] = -x;
      nodes[N - 1 - i] = x;
      weights[i] = w;
      weights[N - 1 - i] = w;
    }
  }
};

template <std::size_t N>
const GaussLegendreTable<N>& gauss_legendre_table() {
  static const GaussLegendreTable<N> table;
  return table;
}

template <class F>
double simpson_recurse(const F& f, double a, double b, double fa, double fm, double fb,
                       double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  return simpson_recurse(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         simpson_recurse(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace detail

/// N-point Gauss–Legendre rule on [a, b].
template <std::size_t N = 64, class F>
double gauss_legendre(const F& f, double a, double b) {
  const auto& t = detail::gauss_legendre_table<N>();
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  double sum = 0.0;
  for (std::size_t i = 0; i < N; ++i) sum += t.weights[i] * f(mid + half * t.nodes[i]);
  return sum * half;
}

// Panels no wider than π/8, each with a 64-point rule.
template <class F>
double composite_gauss_legendre(const F& f, double a, double b) {
  if (b <= a) return 0.0;
  constexpr double max_panel = std::numbers::pi / 8.0;
  const auto panels = static_cast<std::size_t>(std::ceil((b - a) / max_panel));
  const double h = (b - a) / static_cast<double>(panels);
  double sum = 0.0;
  for (std::size_t k = 0; k < panels; ++k) {
    const double lo = a + h * static_cast<double>(k);
    const double hi = (k + 1 == panels) ? b : lo + h;
    sum += gauss_legendre<64>(f, lo, hi);
  }
  return sum;
}

/// Adaptive Simpson with Richardson correction to absolute tolerance `tol`.
/// The interval is pre-split into 16 panels so that narrow peaks are seen.
template <class F>
double adaptive_simpson(const F& f, double a, double b, double tol = 1e-12, int max_depth = 40) {
  if (b <= a) return 0.0;
  constexpr int panels = 16;
  const double h = (b - a) / panels;
  double sum = 0.0;
  for (int k = 0; k < panels; ++k) {
    const double lo = a + h * k;
    const double hi = (k + 1 == panels) ? b : lo + h;
    const double flo = f(lo);
    const double fhi = f(hi);
    const double fm = f(0.5 * (lo + hi));
    const double whole = (hi - lo) / 6.0 * (flo + 4.0 * fm + fhi);
    sum += detail::simpson_recurse(f, lo, hi, flo, fm, fhi, whole, tol / panels, max_depth);
  }
  return sum;
}

template <class F>
double integrate_interval(const F& f, double a, double b, QuadMode mode, double tol = 1e-12) {
  return mode == QuadMode::Fast ? composite_gauss_legendre(f, a, b) : adaptive_simpson(f, a, b, tol);
}

}  // namespace circquant
