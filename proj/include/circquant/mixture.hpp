#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "density.hpp"
#include "geometry.hpp"
#include "lloyd.hpp"
#include "voronoi.hpp"

namespace circquant {

/// Grid angles and the per-point component responsibilities γ_jk (row-major,
/// one row of K entries per grid point).
struct MixtureGrid {
  std::vector<double> thetas;
  std::size_t components = 0;
  std::vector<double> gamma;

  double operator()(std::size_t j, std::size_t k) const { return gamma[j * components + k]; }
};

/// γ_jk = w_k h_k(θ_j) / Σ_l w_l h_l(θ_j).
inline MixtureGrid responsibilities(const std::vector<VonMisesComponent>& comps, const std::vector<double>& thetas) {
  if (comps.empty()) throw std::invalid_argument("responsibilities need at least one component");
  double wsum = 0.0;
  for (const auto& c : comps) wsum += c.weight;
  if (std::abs(wsum - 1.0) > 1e-12) throw std::invalid_argument("mixture weights must sum to 1");

  const std::size_t K = comps.size();
  std::vector<double> scale(K);
  for (std::size_t k = 0; k < K; ++k) scale[k] = comps[k].weight / (two_pi * bessel_i0_scaled(comps[k].kappa));

  MixtureGrid g;
  g.thetas = thetas;
  g.components = K;
  g.gamma.resize(thetas.size() * K);
  std::vector<double> num(K);
  for (std::size_t j = 0; j < thetas.size(); ++j) {
    double den = 0.0;
    for (std::size_t k = 0; k < K; ++k) {
      num[k] = scale[k] * std::exp(comps[k].kappa * (std::cos(thetas[j] - comps[k].mu) - 1.0));
      den += num[k];
    }
    for (std::size_t k = 0; k < K; ++k) g.gamma[j * K + k] = num[k] / den;
  }
  return g;
}

/// Equally spaced codebook (j − ½)·2π/n, the default start for the grid solver.
inline Codebook half_offset_codebook(std::size_t n) {
  std::vector<double> pts;
  for (std::size_t j = 1; j <= n; ++j) pts.push_back(two_pi * (j - 0.5) / static_cast<double>(n));
  return Codebook(pts);
}

struct FaithfulOptions {
  std::size_t grid = 3600;   // M discretization points at (j + ½)·2π/M
  double tolerance = 1e-10;  // ε on the max codepoint move
  int max_iterations = 10000;
};

/// Discretized mixture quantizer, step for step: E-step responsibilities,
/// nearest-codepoint assignment under Σ_k γ_jk d_G², M-step mean weighted by
/// Σ_k γ_jk, reduction mod 2π, sort, and stop when the largest move is below ε.
/// Grid angles are unwrapped around their codepoint before averaging so cells
/// crossing 0 average correctly. The returned distortion, partition and
/// residuals are evaluated against the continuous mixture density.
inline QuantizerResult solve_faithful(const std::vector<VonMisesComponent>& comps, std::size_t n,
                                      const Codebook& initial, const FaithfulOptions& opts = {}) {
  if (n < 1) throw config_error("n", "must be at least 1");
  if (initial.size() != n) throw config_error("seed", "initial codebook size does not match n");
  if (opts.grid < 10 * n) throw config_error("grid", "needs at least 10 points per codepoint");
  if (!(opts.tolerance > 0.0)) throw config_error("tol", "must be positive");

  const std::size_t M = opts.grid;
  std::vector<double> thetas(M);
  for (std::size_t j = 0; j < M; ++j) thetas[j] = two_pi * (static_cast<double>(j) + 0.5) / static_cast<double>(M);
  const MixtureGrid g = responsibilities(comps, thetas);
  const std::size_t K = g.components;

  std::vector<double> weight(M, 0.0);  // Σ_k γ_jk, identically 1 up to rounding
  for (std::size_t j = 0; j < M; ++j)
    for (std::size_t k = 0; k < K; ++k) weight[j] += g(j, k);

  const CircularDensity density = CircularDensity::mixture(comps);
  QuantizerResult r;
  r.metric = Metric::Geodesic;
  std::vector<double> q = initial.points();
  std::vector<double> num(n), den(n);
  for (int t = 1; t <= opts.max_iterations; ++t) {
    std::fill(num.begin(), num.end(), 0.0);
    std::fill(den.begin(), den.end(), 0.0);
    for (std::size_t j = 0; j < M; ++j) {
      std::size_t best = 0;
      double best_cost = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double dg = geodesic_dist(thetas[j], q[i]);
        double cost = 0.0;
        for (std::size_t k = 0; k < K; ++k) cost += g(j, k) * dg * dg;
        if (i == 0 || cost < best_cost) {
          best = i;
          best_cost = cost;
        }
      }
      const double unwrapped = q[best] + wrap_signed(thetas[j], q[best]);
      num[best] += weight[j] * unwrapped;
      den[best] += weight[j];
    }
    std::vector<double> next(n);
    for (std::size_t i = 0; i < n; ++i) next[i] = den[i] > 0.0 ? wrap(num[i] / den[i]) : q[i];
    std::sort(next.begin(), next.end());
    double delta = 0.0;
    for (std::size_t i = 0; i < n; ++i) delta = std::max(delta, geodesic_dist(next[i], q[i]));
    q = std::move(next);
    r.iterations = t;
    r.trace.push_back({t, delta, distortion(density, Codebook(q), Metric::Geodesic, QuadMode::Fast)});
    if (delta < opts.tolerance) {
      r.converged = true;
      break;
    }
  }
  r.codebook = Codebook(q);
  detail::finalize(density, r);
  return r;
}

inline QuantizerResult solve_faithful(const std::vector<VonMisesComponent>& comps, std::size_t n,
                                      const FaithfulOptions& opts = {}) {
  return solve_faithful(comps, n, half_offset_codebook(n), opts);
}

/// Lloyd iteration on the continuous mixture density, whose fixed points
/// satisfy Σ_k w_k ∫(θ − θ*) e^{κ_k cos(θ − μ_k)} dθ = 0 on every cell.
inline QuantizerResult solve_weighted(const std::vector<VonMisesComponent>& comps, std::size_t n, Metric m,
                                      const SolverOptions& opts = {}) {
  return solve(CircularDensity::mixture(comps), n, m, opts);
}

}  // namespace circquant
