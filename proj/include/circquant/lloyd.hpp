#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <vector>

#include "density.hpp"
#include "errors.hpp"
#include "geometry.hpp"
#include "voronoi.hpp"

namespace circquant {

enum class SeedKind { AsymptoticQuantile, UniformSpacing, Explicit };

struct Seeding {
  SeedKind kind = SeedKind::AsymptoticQuantile;
  std::vector<double> points;  // used by Explicit

  static Seeding asymptotic_quantile() { return {}; }
  static Seeding uniform_spacing() { return {SeedKind::UniformSpacing, {}}; }
  static Seeding explicit_points(std::vector<double> pts) { return {SeedKind::Explicit, std::move(pts)}; }
};

struct SolverOptions {
  double tolerance = 1e-10;  // on the max codepoint displacement
  int max_iterations = 500;
  Seeding seeding;
  int restarts = 4;
  bool chordal_newton = false;  // chordal update by Newton instead of the closed form

  void validate() const {
    if (!(tolerance > 0.0)) throw config_error("tol", "must be positive");
    if (max_iterations < 1) throw config_error("max-iter", "must be at least 1");
    if (restarts < 1) throw config_error("restarts", "must be at least 1");
  }
};

struct TraceEntry {
  int iteration = 0;
  double max_displacement = 0.0;
  double distortion = 0.0;
};

struct QuantizerResult {
  Metric metric = Metric::Geodesic;
  Codebook codebook;
  Partition partition;
  double distortion = 0.0;
  double n2Vn = 0.0;
  int iterations = 0;
  bool converged = false;
  std::vector<TraceEntry> trace;
  Residuals residuals;
  int degenerate_fallbacks = 0;  // chordal cells updated with the geodesic centroid
  int newton_fallbacks = 0;      // chordal closed form outside the cell
  int restart = 1;               // which restart produced this result
};

// ---------------------------------------------------------------------------
// Seeding

/// Initial codebook. AsymptoticQuantile puts point j at the (j − ½)/n quantile
/// of h^{1/3}, measured from the antimode so the densest region is interior.
inline Codebook seed_codebook(const CircularDensity& d, std::size_t n, const Seeding& seeding) {
  if (n < 1) throw std::invalid_argument("n must be at least 1");
  const double L = d.length();
  std::vector<double> pts;
  switch (seeding.kind) {
    case SeedKind::Explicit:
      if (seeding.points.size() != n) throw config_error("seed", "explicit codebook size does not match n");
      pts = seeding.points;
      break;
    case SeedKind::UniformSpacing:
      for (std::size_t j = 1; j <= n; ++j)
        pts.push_back(d.on_arc() ? L * (j - 0.5) / static_cast<double>(n) : two_pi * j / static_cast<double>(n));
      break;
    case SeedKind::AsymptoticQuantile: {
      std::vector<double> ps;
      for (std::size_t j = 1; j <= n; ++j) ps.push_back((j - 0.5) / static_cast<double>(n));
      pts = quantiles(d, ps, d.on_arc() ? 0.0 : d.antimode(), 1.0 / 3.0);
      break;
    }
  }
  return Codebook(pts, d.domain());
}

// Deterministic perturbation for restart k (1-based; k = 1 is unperturbed).
inline Codebook jitter_codebook(const CircularDensity& d, const Codebook& base, int k, int restarts) {
  if (k <= 1) return base;
  const std::size_t n = base.size();
  const double mag = (static_cast<double>(k) / restarts) * pi / (2.0 * static_cast<double>(n));
  constexpr double golden = 0.6180339887498949;
  constexpr double root2 = 1.4142135623730951;
  std::vector<double> pts;
  for (std::size_t j = 0; j < n; ++j) {
    double frac = (static_cast<double>(j) + 1.0) * golden + k * root2;
    frac -= std::floor(frac);
    double x = base[j] + mag * (2.0 * frac - 1.0);
    if (d.on_arc()) x = std::clamp(x, 0.0, d.length());
    pts.push_back(x);
  }
  return Codebook(pts, d.domain());
}

// ---------------------------------------------------------------------------
// Iteration

struct StepResult {
  Codebook next;
  double max_displacement = 0.0;
  int degenerate_fallbacks = 0;
  int newton_fallbacks = 0;
};

/// One Lloyd sweep: nearest-neighbour partition, then every codepoint moves to
/// its cell centroid in the active metric.
inline StepResult lloyd_step(const CircularDensity& d, const Codebook& cb, Metric m, bool chordal_newton = false) {
  const Partition p = partition_from_codebook(cb, d);
  StepResult out;
  std::vector<double> next(cb.size());
  for (std::size_t j = 0; j < cb.size(); ++j) {
    const Cell& cell = p.cells[j];
    double c;
    if (m == Metric::Geodesic) {
      c = centroid_geodesic(d, cell).angle;
    } else if (chordal_newton) {
      c = chordal_centroid_newton(d, cell, cb[j]);
    } else {
      try {
        const Centroid cc = centroid_chordal(d, cell);
        if (cc.newton_fallback) ++out.newton_fallbacks;
        c = cc.angle;
      } catch (const degenerate_centroid&) {
        ++out.degenerate_fallbacks;
        c = centroid_geodesic(d, cell).angle;
      }
    }
    next[j] = c;
    const double moved = d.on_arc() ? std::abs(c - cb[j]) : geodesic_dist(c, cb[j]);
    out.max_displacement = std::max(out.max_displacement, moved);
  }
  out.next = Codebook(next, d.domain());
  return out;
}

namespace detail {

// `incumbent` is a converged earlier restart. A run that lands in its tie band,
// or settles next to its codebook, is heading for the same fixed point and
// would lose the tie, so it stops there.
inline QuantizerResult run_lloyd(const CircularDensity& d, Codebook cb, Metric m, const SolverOptions& opts,
                                 const QuantizerResult* incumbent = nullptr) {
  QuantizerResult r;
  r.metric = m;
  for (int t = 1; t <= opts.max_iterations; ++t) {
    StepResult s = lloyd_step(d, cb, m, opts.chordal_newton);
    r.degenerate_fallbacks += s.degenerate_fallbacks;
    r.newton_fallbacks += s.newton_fallbacks;
    cb = std::move(s.next);
    r.trace.push_back({t, s.max_displacement, distortion(d, cb, m, QuadMode::Fast)});
    r.iterations = t;
    if (s.max_displacement < opts.tolerance) {
      r.converged = true;
      break;
    }
    if (incumbent) {
      const double v = incumbent->trace.back().distortion;
      if (r.trace.back().distortion <= v * (1.0 + 1e-10)) break;
      if (t % 25 == 0 && r.trace.back().distortion <= v * (1.0 + 1e-6)) {
        const auto& q = incumbent->codebook.points();
        double gap = two_pi;
        for (std::size_t j = 0; j + 1 < q.size(); ++j) gap = std::min(gap, q[j + 1] - q[j]);
        if (aligned_max_delta(cb.points(), q) < 0.1 * gap) break;
      }
    }
  }
  r.codebook = std::move(cb);
  return r;
}

inline void finalize(const CircularDensity& d, QuantizerResult& r) {
  r.partition = partition_from_codebook(r.codebook, d);
  r.distortion = distortion(d, r.codebook, r.partition, r.metric, QuadMode::Adaptive);
  const double n = static_cast<double>(r.codebook.size());
  r.n2Vn = n * n * r.distortion;
  r.residuals = residuals(d, r.codebook, r.partition, r.metric);
}

}  // namespace detail

/// Lloyd iteration from each restart's seed; keeps the restart with the lowest
/// distortion. Stops when the largest codepoint move falls below the tolerance.
inline QuantizerResult solve(const CircularDensity& d, std::size_t n, Metric m, const SolverOptions& opts = {}) {
  opts.validate();
  if (n < 1) throw config_error("n", "must be at least 1");
  const Codebook base = seed_codebook(d, n, opts.seeding);
  const int restarts = opts.seeding.kind == SeedKind::Explicit ? 1 : opts.restarts;

  QuantizerResult best;
  double best_value = std::numeric_limits<double>::infinity();
  for (int k = 1; k <= restarts; ++k) {
    const QuantizerResult* incumbent = best.converged && !best.trace.empty() ? &best : nullptr;
    QuantizerResult r = detail::run_lloyd(d, jitter_codebook(d, base, k, restarts), m, opts, incumbent);
    r.restart = k;
    const double v = r.trace.empty() ? distortion(d, r.codebook, m, QuadMode::Fast) : r.trace.back().distortion;
    // distortions within 1e-10 relative are ties; a converged run wins a tie
    const double noise = 1e-10 * std::abs(best_value);
    const bool better = k == 1 || v < best_value - noise ||
                        (std::abs(v - best_value) <= noise && r.converged && !best.converged);
    if (better) {
      best_value = v;
      best = std::move(r);
    }
  }
  detail::finalize(d, best);
  return best;
}

namespace detail {

// Distribute `extra` new points over the cells of a solution, each time into
// the cell carrying the most mass per point, and place each cell's points at
// in-cell quantiles of h^{1/3}.
inline Codebook insert_points(const CircularDensity& d, const QuantizerResult& prev, std::size_t extra) {
  const Partition& p = prev.partition;
  const std::size_t n = p.size();
  std::vector<double> mass(n), weight13(n);
  double total13 = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    mass[j] = cell_integrals_at(d, p.cells[j], 0.0).mass;
    weight13[j] = gauss_legendre<64>([&](double x) { return std::cbrt(d.eval(x)); }, p.cells[j].start,
                                     p.cells[j].end());
    total13 += weight13[j];
  }
  std::vector<std::size_t> count(n, 1);
  for (std::size_t e = 0; e < extra; ++e) {
    std::size_t best = 0;
    for (std::size_t j = 1; j < n; ++j)
      if (mass[j] / count[j] > mass[best] / count[best]) best = j;
    ++count[best];
  }
  std::vector<double> pts;
  for (std::size_t j = 0; j < n; ++j) {
    if (count[j] == 1) {
      pts.push_back(prev.codebook[j]);
      continue;
    }
    std::vector<double> ps;
    for (std::size_t i = 1; i <= count[j]; ++i)
      ps.push_back((i - 0.5) / static_cast<double>(count[j]) * weight13[j] / total13);
    for (double x : quantiles(d, ps, p.cells[j].start, 1.0 / 3.0)) pts.push_back(x);
  }
  return Codebook(pts, d.domain());
}

}  // namespace detail

/// Solves a sequence of codebook sizes, warm-starting each from the previous
/// solution; falls back to a fresh seeded solve when the warm start does not
/// converge or fails to improve on the smaller codebook.
inline std::vector<QuantizerResult> sweep(const CircularDensity& d, const std::vector<std::size_t>& n_list, Metric m,
                                          const SolverOptions& opts = {}) {
  if (n_list.empty()) throw config_error("n-list", "must not be empty");
  for (std::size_t i = 1; i < n_list.size(); ++i)
    if (!(n_list[i] > n_list[i - 1])) throw config_error("n-list", "must be strictly ascending");
  std::vector<QuantizerResult> out;
  out.push_back(solve(d, n_list.front(), m, opts));
  for (std::size_t i = 1; i < n_list.size(); ++i) {
    const QuantizerResult& prev = out.back();
    SolverOptions warm = opts;
    warm.seeding = Seeding::explicit_points(detail::insert_points(d, prev, n_list[i] - n_list[i - 1]).points());
    QuantizerResult r = solve(d, n_list[i], m, warm);
    if (!r.converged || r.distortion >= prev.distortion) {
      SolverOptions fresh = opts;
      fresh.seeding = Seeding::asymptotic_quantile();
      QuantizerResult alt = solve(d, n_list[i], m, fresh);
      if (alt.distortion < r.distortion || (!r.converged && alt.converged)) r = std::move(alt);
    }
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace circquant
