#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <stdexcept>
#include <vector>

#include "density.hpp"
#include "errors.hpp"
#include "geometry.hpp"
#include "integrate.hpp"

namespace circquant {

/// Sorted, duplicate-free representative points on a circle or arc.
class Codebook {
 public:
  Codebook() = default;

  Codebook(std::vector<double> points, const Domain& domain = Domain::circle()) : points_(std::move(points)) {
    if (points_.empty()) throw std::invalid_argument("codebook needs at least one point");
    for (auto& p : points_) {
      if (domain.arc) {
        if (!(p >= 0.0 && p <= domain.length)) throw std::invalid_argument("codepoint outside the arc");
      } else {
        p = wrap(p);
      }
    }
    std::sort(points_.begin(), points_.end());
    for (std::size_t i = 1; i < points_.size(); ++i)
      if (!(points_[i] > points_[i - 1])) throw std::invalid_argument("codebook contains duplicate points");
  }

  std::size_t size() const { return points_.size(); }
  double operator[](std::size_t i) const { return points_[i]; }
  const std::vector<double>& points() const { return points_; }
  auto begin() const { return points_.begin(); }
  auto end() const { return points_.end(); }

 private:
  std::vector<double> points_;
};

/// Nearest-neighbour cells of a codebook. On the circle `boundaries[j]` is the
/// clockwise end of cell j (n boundaries); on an arc there are n + 1
/// boundaries with the end points fixed at 0 and L.
struct Partition {
  Domain domain;
  std::vector<double> boundaries;
  std::vector<Cell> cells;
  std::vector<double> point_offsets;    // codepoint j measured from cells[j].start
  std::vector<std::size_t> wide_gaps;   // j with ccw gap q_j → q_{j+1} ≥ π

  std::size_t size() const { return cells.size(); }
  bool hemisphere_ok() const { return wide_gaps.empty(); }
  double representative(std::size_t j) const { return cells[j].start + point_offsets[j]; }
};

/// Boundaries sit at the counterclockwise midpoint between neighbouring
/// codepoints. Both metrics grow monotonically with separation up to π, so the
/// midpoint is the equidistance point for either one.
inline Partition partition_from_codebook(const Codebook& cb, const Domain& domain = Domain::circle()) {
  const std::size_t n = cb.size();
  Partition p;
  p.domain = domain;
  if (domain.arc) {
    p.boundaries.push_back(0.0);
    for (std::size_t j = 1; j < n; ++j) p.boundaries.push_back(0.5 * (cb[j - 1] + cb[j]));
    p.boundaries.push_back(domain.length);
    for (std::size_t j = 0; j < n; ++j) {
      p.cells.push_back({p.boundaries[j], p.boundaries[j + 1] - p.boundaries[j]});
      p.point_offsets.push_back(cb[j] - p.boundaries[j]);
    }
    return p;
  }
  std::vector<double> gap(n);  // gap[j]: q_j → q_{j+1}
  for (std::size_t j = 0; j < n; ++j) {
    gap[j] = ccw_gap(cb[j], cb[(j + 1) % n]);
    if (gap[j] >= pi) p.wide_gaps.push_back(j);
  }
  for (std::size_t j = 0; j < n; ++j) {
    const double left = 0.5 * gap[(j + n - 1) % n];
    const double right = 0.5 * gap[j];
    const double start = wrap(cb[j] - left);
    p.boundaries.push_back(start);
    p.cells.push_back({start, left + right});
    p.point_offsets.push_back(left);
  }
  return p;
}

inline Partition partition_from_codebook(const Codebook& cb, const CircularDensity& d) {
  return partition_from_codebook(cb, d.domain());
}

// ---------------------------------------------------------------------------
// Centroids

struct Centroid {
  double angle = 0.0;
  bool wide_cell = false;        // cell ≥ π: the closed form is not guaranteed optimal
  bool newton_fallback = false;  // chordal closed form left the cell
};

inline double cell_position(const CircularDensity& d, const Cell& cell, double offset) {
  const double x = cell.start + offset;
  return d.on_arc() ? x : wrap(x);
}

/// Weighted intrinsic mean of the cell: the point where ∫(θ − θ*)h vanishes.
inline Centroid centroid_geodesic(const CircularDensity& d, const Cell& cell, QuadMode mode = QuadMode::Fast) {
  const CellIntegrals I = cell_integrals_at(d, cell, 0.0, mode);
  if (!(I.mass > 0.0)) throw std::logic_error("centroid of a cell with zero mass");
  const double offset = std::clamp(I.moment1 / I.mass, 0.0, cell.length);
  return {cell_position(d, cell, offset), !d.on_arc() && cell.length >= pi, false};
}

/// Newton iteration on ∫ sin(θ − α) h dθ = 0 started at `init`, evaluating
/// both integrals directly at every step. For cells shorter than a semicircle
/// the root is bracketed by the cell ends and steps that leave the bracket are
/// replaced by bisection, so the antipodal root is never reached.
inline double chordal_centroid_newton(const CircularDensity& d, const Cell& cell, double init, double tol = 1e-15,
                                      int max_iter = 100) {
  // keep α in the unwrapped coordinates of the cell
  double alpha = d.on_arc() ? init : cell.start + wrap(init - cell.start);
  const bool bracketed = cell.length < pi;
  double lo = cell.start, hi = cell.end();
  if (bracketed) alpha = std::clamp(alpha, lo, hi);
  for (int it = 0; it < max_iter; ++it) {
    const double g = d.integrate_weighted([alpha](double x) { return std::sin(x - alpha); }, cell.start,
                                          cell.end(), QuadMode::Fast);
    const double dg = -d.integrate_weighted([alpha](double x) { return std::cos(x - alpha); }, cell.start,
                                            cell.end(), QuadMode::Fast);
    if (bracketed) {
      // g decreases through the root inside the cell
      (g > 0.0 ? lo : hi) = alpha;
      double next = dg < 0.0 ? alpha - g / dg : 0.5 * (lo + hi);
      if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
      const double step = next - alpha;
      alpha = next;
      if (std::abs(step) < tol || hi - lo < tol) break;
      continue;
    }
    if (dg == 0.0) break;
    const double step = g / dg;
    alpha -= step;
    if (std::abs(step) < tol) break;
  }
  return d.on_arc() ? alpha : wrap(alpha);
}

/// Chordal centroid: the direction of the cell's mean resultant, which solves
/// ∫ sin(θ − θ*) h dθ = 0 in closed form. Falls back to Newton from the
/// geodesic centroid if that direction lies outside the cell.
inline Centroid centroid_chordal(const CircularDensity& d, const Cell& cell, QuadMode mode = QuadMode::Fast) {
  const CellIntegrals I = cell_integrals_at(d, cell, 0.0, mode);
  if (!(I.mass > 0.0)) throw std::logic_error("centroid of a cell with zero mass");
  const double resultant = std::hypot(I.trig_c, I.trig_s);
  if (resultant <= 1e-13 * I.mass) throw degenerate_centroid("chordal centroid undefined: mean resultant is zero");
  const double mid = cell.start + 0.5 * cell.length;
  const double dir = std::atan2(I.trig_s, I.trig_c);
  const double offset = mid + wrap_signed(dir, mid) - cell.start;
  Centroid c;
  c.wide_cell = !d.on_arc() && cell.length >= pi;
  if (offset >= 0.0 && offset <= cell.length) {
    c.angle = cell_position(d, cell, offset);
    return c;
  }
  const double init = cell.start + std::clamp(I.moment1 / I.mass, 0.0, cell.length);
  c.angle = chordal_centroid_newton(d, cell, init);
  c.newton_fallback = true;
  return c;
}

inline Centroid centroid(const CircularDensity& d, const Cell& cell, Metric m, QuadMode mode = QuadMode::Fast) {
  return m == Metric::Geodesic ? centroid_geodesic(d, cell, mode) : centroid_chordal(d, cell, mode);
}

/// ∫_cell dist(θ, α)² h dθ with the true (wrap-aware) metric.
inline double cell_distortion(const CircularDensity& d, const Cell& cell, double alpha, Metric m,
                              QuadMode mode = QuadMode::Fast) {
  if (d.on_arc()) {
    auto f = m == Metric::Geodesic
                 ? std::function<double(double)>([alpha](double x) { return (x - alpha) * (x - alpha); })
                 : std::function<double(double)>([alpha](double x) {
                     const double s = std::sin(0.5 * (x - alpha));
                     return 4.0 * s * s;
                   });
    return d.integrate_weighted(f, cell.start, cell.end(), mode);
  }
  auto f = [alpha, m](double x) { return dist_sq(m, x, alpha); };
  // split at the antipode, where the geodesic distance has a kink
  const double anti = cell.start + wrap(alpha + pi - cell.start);
  if (anti > cell.start && anti < cell.end())
    return d.integrate_weighted(f, cell.start, anti, mode) + d.integrate_weighted(f, anti, cell.end(), mode);
  return d.integrate_weighted(f, cell.start, cell.end(), mode);
}

/// Golden-section minimizer of the exact cell distortion over representatives
/// inside the cell. Used to report the optimum of cells wider than a
/// semicircle, where the centroid formula carries no guarantee.
inline double cell_exact_minimizer(const CircularDensity& d, const Cell& cell, Metric m) {
  const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double lo = cell.start, hi = cell.end();
  double x1 = hi - phi * (hi - lo), x2 = lo + phi * (hi - lo);
  double f1 = cell_distortion(d, cell, x1, m), f2 = cell_distortion(d, cell, x2, m);
  while (hi - lo > 1e-10) {
    if (f1 < f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - phi * (hi - lo);
      f1 = cell_distortion(d, cell, x1, m);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + phi * (hi - lo);
      f2 = cell_distortion(d, cell, x2, m);
    }
  }
  const double x = 0.5 * (lo + hi);
  return d.on_arc() ? x : wrap(x);
}

// ---------------------------------------------------------------------------
// Distortion and optimality residuals

/// Σ_j ∫_{cell j} dist²(θ, q_j) h(θ) dθ. Inside a cell the codepoint is at most
/// π away along the cell, so the unwrapped offset equals the geodesic distance.
inline double distortion(const CircularDensity& d, const Codebook& cb, const Partition& p, Metric m,
                         QuadMode mode = QuadMode::Adaptive) {
  if (p.size() != cb.size()) throw std::invalid_argument("partition does not match codebook");
  double total = 0.0;
  const double tol = 1e-12 / static_cast<double>(cb.size());
  for (std::size_t j = 0; j < cb.size(); ++j) {
    const Cell& cell = p.cells[j];
    const double q = p.representative(j);
    if (m == Metric::Geodesic)
      total += d.integrate_weighted([q](double x) { return (x - q) * (x - q); }, cell.start, cell.end(), mode, tol);
    else
      total += d.integrate_weighted(
          [q](double x) {
            const double s = std::sin(0.5 * (x - q));
            return 4.0 * s * s;
          },
          cell.start, cell.end(), mode, tol);
  }
  return total;
}

inline double distortion(const CircularDensity& d, const Codebook& cb, Metric m, QuadMode mode = QuadMode::Adaptive) {
  return distortion(d, cb, partition_from_codebook(cb, d), m, mode);
}

struct Residuals {
  double max_boundary_residual = 0.0;
  double max_centroid_residual = 0.0;
  std::vector<std::size_t> wide_cells;  // cells ≥ π, outside the hemisphere condition
};

/// First-order optimality residuals: equidistance of each boundary from its two
/// neighbours, and the centroid integral of each cell (∫(θ − q)h for the
/// geodesic metric, ∫ sin(θ − q)h for the chordal one).
inline Residuals residuals(const CircularDensity& d, const Codebook& cb, const Partition& p, Metric m,
                           QuadMode mode = QuadMode::Fast) {
  Residuals r;
  const std::size_t n = cb.size();
  if (n > 1) {
    for (std::size_t j = 0; j < n; ++j) {
      double b, left, right;
      if (d.on_arc()) {
        if (j == 0) continue;
        b = p.boundaries[j];
        left = cb[j - 1];
        right = cb[j];
        const double dl = m == Metric::Geodesic ? std::abs(b - left) : 2.0 * std::abs(std::sin(0.5 * (b - left)));
        const double dr = m == Metric::Geodesic ? std::abs(b - right) : 2.0 * std::abs(std::sin(0.5 * (b - right)));
        r.max_boundary_residual = std::max(r.max_boundary_residual, std::abs(dl - dr));
        continue;
      }
      b = p.boundaries[j];
      left = cb[(j + n - 1) % n];
      right = cb[j];
      r.max_boundary_residual = std::max(r.max_boundary_residual, std::abs(dist(m, b, left) - dist(m, b, right)));
    }
  }
  for (std::size_t j = 0; j < n; ++j) {
    const Cell& cell = p.cells[j];
    if (!d.on_arc() && cell.length >= pi) r.wide_cells.push_back(j);
    const CellIntegrals I = cell_integrals_at(d, cell, p.point_offsets[j], mode);
    double res;
    if (m == Metric::Geodesic) {
      res = std::abs(I.moment1);
    } else {
      const double q = p.representative(j);
      res = std::abs(I.trig_s * std::cos(q) - I.trig_c * std::sin(q));
    }
    r.max_centroid_residual = std::max(r.max_centroid_residual, res);
  }
  return r;
}

// ---------------------------------------------------------------------------
// Comparing codebooks

/// Largest per-point geodesic distance between two equal-size sorted point
/// lists, minimized over cyclic re-indexings of `b`.
inline double aligned_max_delta(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) throw std::invalid_argument("codebooks differ in size");
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t s = 0; s < a.size(); ++s) {
    double worst = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) worst = std::max(worst, geodesic_dist(a[j], b[(j + s) % b.size()]));
    best = std::min(best, worst);
  }
  return a.empty() ? 0.0 : best;
}

/// Same comparison on the ccw gaps between consecutive points, which ignores
/// a common rotation.
inline double aligned_spacing_delta(const std::vector<double>& a, const std::vector<double>& b) {
  auto gaps = [](const std::vector<double>& x) {
    std::vector<double> g;
    for (std::size_t j = 0; j < x.size(); ++j) g.push_back(ccw_gap(x[j], x[(j + 1) % x.size()]));
    return g;
  };
  const auto ga = gaps(a), gb = gaps(b);
  if (ga.size() != gb.size()) throw std::invalid_argument("codebooks differ in size");
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t s = 0; s < ga.size(); ++s) {
    double worst = 0.0;
    for (std::size_t j = 0; j < ga.size(); ++j) worst = std::max(worst, std::abs(ga[j] - gb[(j + s) % gb.size()]));
    best = std::min(best, worst);
  }
  return ga.empty() ? 0.0 : best;
}

}  // namespace circquant
