#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "density.hpp"
#include "errors.hpp"
#include "geometry.hpp"
#include "voronoi.hpp"

namespace circquant {

/// The domain cut into M equal intervals, with the exact integrals of h, θh,
/// θ²h, cos θ·h and sin θ·h over each one. Cell boundaries of the oracle are
/// restricted to interval edges; costs inside a cell are continuous.
struct DiscreteCircle {
  std::size_t M = 0;
  Domain domain;
  std::vector<double> masses;
  std::vector<double> centers;
  std::vector<double> moment1;  // ∫ (θ − left edge) h over each interval
  std::vector<double> moment2;  // ∫ (θ − left edge)² h
  std::vector<double> trig_c;
  std::vector<double> trig_s;
  std::vector<CircularDensity> source;  // the density itself, kept for the single-cell case

  double step() const { return domain.length / static_cast<double>(M); }
};

inline DiscreteCircle build_grid(const CircularDensity& d, std::size_t M) {
  if (M < 1) throw config_error("grid", "must be at least 1");
  DiscreteCircle g;
  g.M = M;
  g.domain = d.domain();
  g.source.push_back(d);
  const double delta = g.step();
  for (std::size_t i = 0; i < M; ++i) {
    const double a = delta * static_cast<double>(i);
    const double b = i + 1 == M ? d.length() : a + delta;
    const CellIntegrals I = cell_integrals_at(d, Cell{a, b - a}, 0.0, QuadMode::Adaptive);
    g.masses.push_back(I.mass);
    g.centers.push_back(0.5 * (a + b));
    g.moment1.push_back(I.moment1);
    g.moment2.push_back(I.moment2);
    g.trig_c.push_back(I.trig_c);
    g.trig_s.push_back(I.trig_s);
  }
  return g;
}

struct OracleResult {
  Metric metric = Metric::Geodesic;
  std::size_t M = 0;
  Codebook codebook;
  std::vector<double> boundaries;  // grid edges where cells start
  double distortion = 0.0;
};

namespace detail {

// Prefix sums over the doubled index range 0 .. 2M (0 .. M on an arc), with
// first and second moments taken about the unwrapped origin.
class SegmentCosts {
 public:
  SegmentCosts(const DiscreteCircle& g, Metric m) : m_(m), M_(g.M), circle_(!g.domain.arc) {
    const std::size_t span = circle_ ? 2 * M_ : M_;
    const long double delta = static_cast<long double>(g.domain.length) / static_cast<long double>(M_);
    s0_.assign(span + 1, 0.0L);
    s1_ = s2_ = sc_ = ss_ = s0_;
    for (std::size_t i = 0; i < span; ++i) {
      const std::size_t k = i % M_;
      const long double A = delta * static_cast<long double>(i);
      const long double p0 = g.masses[k], p1 = g.moment1[k], p2 = g.moment2[k];
      s0_[i + 1] = s0_[i] + p0;
      s1_[i + 1] = s1_[i] + A * p0 + p1;
      s2_[i + 1] = s2_[i] + A * A * p0 + 2.0L * A * p1 + p2;
      sc_[i + 1] = sc_[i] + g.trig_c[k];
      ss_[i + 1] = ss_[i] + g.trig_s[k];
    }
  }

  // Optimal cost of the cell made of intervals i .. j−1 (unwrapped indices).
  // The geodesic cost is the variance along the unwrapped cell, which equals
  // the true distortion whenever the cell's points lie within π of its mean.
  double operator()(std::size_t i, std::size_t j) const {
    const long double m0 = s0_[j] - s0_[i];
    if (m0 <= 0.0L) return 0.0;
    if (m_ == Metric::Geodesic) {
      const long double m1 = s1_[j] - s1_[i];
      const long double v = (s2_[j] - s2_[i]) - m1 * m1 / m0;
      return static_cast<double>(std::max(v, 0.0L));
    }
    const long double c = sc_[j] - sc_[i], s = ss_[j] - ss_[i];
    return static_cast<double>(std::max(2.0L * (m0 - std::sqrt(c * c + s * s)), 0.0L));
  }

  // Representative of the same cell: weighted mean, or the resultant direction.
  double representative(std::size_t i, std::size_t j) const {
    const long double m0 = s0_[j] - s0_[i];
    if (m_ == Metric::Geodesic) return static_cast<double>((s1_[j] - s1_[i]) / m0);
    return std::atan2(static_cast<double>(ss_[j] - ss_[i]), static_cast<double>(sc_[j] - sc_[i]));
  }

 private:
  Metric m_;
  std::size_t M_;
  bool circle_;
  std::vector<long double> s0_, s1_, s2_, sc_, ss_;
};

struct CutSolution {
  double cost = std::numeric_limits<double>::infinity();
  std::vector<std::size_t> edges;  // n + 1 unwrapped edges, first = cut, last = cut + M
};

// Optimal split of intervals cut .. cut+M−1 into n contiguous cells. Layers
// are filled by divide and conquer over the monotone split points, or by
// full enumeration when `brute` is set.
inline CutSolution solve_from_cut(const SegmentCosts& cost, std::size_t M, std::size_t n, std::size_t cut,
                                  bool brute, bool keep_path) {
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> prev(M + 1, inf), cur(M + 1, inf);
  std::vector<std::vector<std::size_t>> arg;
  for (std::size_t r = 1; r <= M; ++r) prev[r] = cost(cut, cut + r);

  CutSolution out;
  if (n == 1) {
    out.cost = prev[M];
    out.edges = {cut, cut + M};
    return out;
  }

  auto eval = [&](std::size_t s, std::size_t r) { return prev[s] + cost(cut + s, cut + r); };
  // layers 2 .. n−1 need positions r ∈ [k, M − (n − k)]
  for (std::size_t k = 2; k < n; ++k) {
    std::fill(cur.begin(), cur.end(), inf);
    std::vector<std::size_t> opt(M + 1, 0);
    const std::size_t lo_r = k, hi_r = M - (n - k);
    if (brute) {
      for (std::size_t r = lo_r; r <= hi_r; ++r)
        for (std::size_t s = k - 1; s < r; ++s)
          if (const double v = eval(s, r); v < cur[r]) {
            cur[r] = v;
            opt[r] = s;
          }
    } else {
      struct Frame {
        std::size_t r_lo, r_hi, s_lo, s_hi;
      };
      std::vector<Frame> stack{{lo_r, hi_r, k - 1, hi_r - 1}};
      while (!stack.empty()) {
        const Frame f = stack.back();
        stack.pop_back();
        if (f.r_lo > f.r_hi) continue;
        const std::size_t r = f.r_lo + (f.r_hi - f.r_lo) / 2;
        std::size_t best_s = f.s_lo;
        double best = inf;
        for (std::size_t s = f.s_lo; s <= std::min(f.s_hi, r - 1); ++s)
          if (const double v = eval(s, r); v < best) {
            best = v;
            best_s = s;
          }
        cur[r] = best;
        opt[r] = best_s;
        if (r > f.r_lo) stack.push_back({f.r_lo, r - 1, f.s_lo, best_s});
        stack.push_back({r + 1, f.r_hi, best_s, f.s_hi});
      }
    }
    std::swap(prev, cur);
    if (keep_path) arg.push_back(std::move(opt));
  }

  std::size_t last = n - 1;
  for (std::size_t s = n - 1; s < M; ++s)
    if (const double v = eval(s, M); v < out.cost) {
      out.cost = v;
      last = s;
    }
  if (keep_path) {
    std::vector<std::size_t> rel{M, last};
    for (auto it = arg.rbegin(); it != arg.rend(); ++it) rel.push_back((*it)[rel.back()]);
    rel.push_back(0);
    for (auto it = rel.rbegin(); it != rel.rend(); ++it) out.edges.push_back(cut + *it);
  }
  return out;
}

inline double log2_of(std::size_t x) { return std::log2(static_cast<double>(std::max<std::size_t>(x, 2))); }

}  // namespace detail

/// Evaluations of the segment cost an oracle run would need.
inline double oracle_cost_estimate(std::size_t M, std::size_t n, bool circle, bool brute = false) {
  const double Md = static_cast<double>(M), nd = static_cast<double>(n);
  const double per_cut = brute ? nd * Md * Md / 2.0 : nd * Md * detail::log2_of(M) + Md;
  return (circle ? Md : 1.0) * per_cut;
}

inline constexpr double oracle_cost_limit = 2e10;

/// Exact optimum of the grid-restricted problem: every placement of cell
/// boundaries on interval edges is considered, each cell taking its optimal
/// continuous representative. On the circle the first boundary runs over all M
/// edges. `brute` replaces the divide-and-conquer layer fill with full
/// enumeration.
inline OracleResult optimal_quantizer_dp(const DiscreteCircle& g, std::size_t n, Metric m, bool brute = false) {
  if (n < 1) throw config_error("n", "must be at least 1");
  if (n > g.M) throw config_error("n", "exceeds the grid size " + std::to_string(g.M));
  const bool circle = !g.domain.arc;
  const double estimate = oracle_cost_estimate(g.M, n, circle, brute);
  if (estimate > oracle_cost_limit)
    throw resource_error("oracle would need about " + std::to_string(static_cast<long long>(estimate)) +
                         " cost evaluations (limit " + std::to_string(static_cast<long long>(oracle_cost_limit)) +
                         ")");

  OracleResult out;
  out.metric = m;
  out.M = g.M;
  const double delta = g.step();

  // One cell spanning the whole circle: its geodesic cost is not a variance,
  // so minimize the true cell distortion directly.
  if (circle && n == 1 && m == Metric::Geodesic) {
    const CircularDensity& d = g.source.front();
    const Cell cell{d.antimode(), two_pi};
    const double q = cell_exact_minimizer(d, cell, m);
    out.codebook = Codebook({q});
    out.boundaries = {wrap(q + pi)};
    out.distortion = cell_distortion(d, cell, q, m, QuadMode::Adaptive);
    return out;
  }

  const detail::SegmentCosts cost(g, m);
  const std::size_t cuts = circle ? g.M : 1;
  std::size_t best_cut = 0;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < cuts; ++c) {
    const double v = detail::solve_from_cut(cost, g.M, n, c, brute, false).cost;
    if (v < best) {
      best = v;
      best_cut = c;
    }
  }
  const detail::CutSolution sol = detail::solve_from_cut(cost, g.M, n, best_cut, brute, true);
  std::vector<double> reps;
  for (std::size_t j = 0; j < n; ++j) {
    const double q = cost.representative(sol.edges[j], sol.edges[j + 1]);
    reps.push_back(circle ? wrap(q) : q);
    const double b = delta * static_cast<double>(sol.edges[j]);
    out.boundaries.push_back(circle ? wrap(b) : b);
  }
  std::sort(out.boundaries.begin(), out.boundaries.end());
  out.codebook = Codebook(reps, g.domain);
  out.distortion = sol.cost;
  return out;
}

inline OracleResult optimal_quantizer_dp(const CircularDensity& d, std::size_t M, std::size_t n, Metric m) {
  return optimal_quantizer_dp(build_grid(d, M), n, m);
}

}  // namespace circquant
