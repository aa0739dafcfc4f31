// Acceptance checks. Run with no arguments for all of them, or with
// --criterion N for one; prints one PASS/FAIL line per criterion and exits
// nonzero if any failed.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "circquant/circquant.hpp"
#include "test_support.hpp"

using namespace circquant;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      if (!detail.empty()) detail += "; ";
      detail += what;
    }
  }
};

std::string num(double x, int digits = 6) {
  std::ostringstream s;
  s.precision(digits);
  s << x;
  return s.str();
}

// Every solve made by criteria 1-7, kept for the residual check.
struct SolveRecord {
  std::string label;
  QuantizerResult result;
};
std::vector<SolveRecord> solves;

const QuantizerResult& record(std::string label, QuantizerResult r) {
  solves.push_back({std::move(label), std::move(r)});
  return solves.back().result;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Largest per-point deviation from a printed row, after lining up indices cyclically.
double row_deviation(const std::vector<double>& printed, const Codebook& cb) {
  return aligned_max_delta(printed, cb.points());
}

const std::vector<double> published_geodesic{0.365, 0.784, 1.387, 3.142, 4.896, 5.499, 5.918};
const std::vector<double> published_chordal{0.363, 0.781, 1.384, 3.142, 4.900, 5.502, 5.921};

Outcome c01() {
  Outcome o;
  const auto r = record("c01 geodesic n=7", solve(CircularDensity::von_mises(0, 3), 7, Metric::Geodesic));
  const double dev = row_deviation(published_geodesic, r.codebook);
  o.require(dev <= 0.005, "max deviation from printed geodesic row " + num(dev) + " > 0.005");
  o.detail += (o.detail.empty() ? "" : "; ") + std::string("distortion ") + num(r.distortion, 8);
  return o;
}

Outcome c02() {
  Outcome o;
  const auto d = CircularDensity::von_mises(0, 3);
  const auto c = record("c02 chordal n=7", solve(d, 7, Metric::Chordal));
  const auto g = record("c02 geodesic n=7", solve(d, 7, Metric::Geodesic));
  const double dev = row_deviation(published_chordal, c.codebook);
  o.require(dev <= 0.005, "max deviation from printed chordal row " + num(dev) + " > 0.005");
  // each chordal point sits closer to the antipode than its geodesic counterpart
  // pair the points after the best cyclic shift of indices
  std::size_t shift = 0;
  double best = INFINITY;
  for (std::size_t s = 0; s < 7; ++s) {
    double worst = 0.0;
    for (std::size_t j = 0; j < 7; ++j) worst = std::max(worst, geodesic_dist(g.codebook[j], c.codebook[(j + s) % 7]));
    if (worst < best) best = worst, shift = s;
  }
  int toward = 0, away = 0;
  for (std::size_t j = 0; j < 7; ++j) {
    const double gj = g.codebook[j], cj = c.codebook[(j + shift) % 7];
    if (geodesic_dist(gj, 0.0) < 1e-6 || geodesic_dist(gj, pi) < 1e-6) continue;
    (geodesic_dist(cj, pi) < geodesic_dist(gj, pi) ? toward : away) += 1;
  }
  o.require(away == 0, std::to_string(away) + " of " + std::to_string(toward + away) +
                           " off-axis chordal points move toward the mode, not the antipode");
  return o;
}

Outcome c03() {
  Outcome o;
  for (std::size_t n : {1u, 2u, 4u, 8u, 16u}) {
    const auto r = record("c03 uniform circle n=" + std::to_string(n), solve(CircularDensity::uniform(), n, Metric::Geodesic));
    const double expect = pi * pi / (3.0 * n * n);
    const double rel = std::abs(r.distortion - expect) / expect;
    o.require(rel <= 1e-8, "circle n=" + std::to_string(n) + " relative error " + num(rel));
  }
  const auto arc = CircularDensity::uniform(Domain::arc_of(1.0));
  for (std::size_t n : {1u, 2u, 4u, 8u, 16u}) {
    const auto r = record("c03 uniform arc n=" + std::to_string(n), solve(arc, n, Metric::Geodesic));
    const double expect = 1.0 / (12.0 * n * n);
    const double rel = std::abs(r.distortion - expect) / expect;
    o.require(rel <= 1e-8, "arc n=" + std::to_string(n) + " relative error " + num(rel));
  }
  return o;
}

Outcome c04() {
  Outcome o;
  const auto d = CircularDensity::von_mises(0, 3);
  const double Z = static_cast<double>(std::pow(2 * oracle::pi_l, 2.0L / 3) * oracle::i0_series(1) /
                                       std::cbrt(oracle::i0_series(3)));
  const double limit = Z * Z * Z / 12;
  o.require(std::abs(predicted_constant(d) - limit) <= 1e-12 * limit, "library constant differs from closed form");
  SolverOptions opts;
  opts.max_iterations = 50000;
  const auto rs = sweep(d, {16, 32, 64, 128}, Metric::Geodesic, opts);
  std::vector<double> gaps;
  for (const auto& r : rs) {
    record("c04 sweep n=" + std::to_string(r.codebook.size()), r);
    gaps.push_back(std::abs(r.n2Vn - limit) / limit);
    o.require(r.converged, "n=" + std::to_string(r.codebook.size()) + " did not converge");
  }
  o.require(gaps[2] <= 0.05, "gap at n=64 is " + num(gaps[2]));
  o.require(gaps[3] <= 0.02, "gap at n=128 is " + num(gaps[3]));
  for (std::size_t i = 1; i < gaps.size(); ++i) o.require(gaps[i] < gaps[i - 1], "gap not shrinking at step " + std::to_string(i));
  o.detail += (o.detail.empty() ? "" : "; ") + std::string("gaps ") + num(gaps[0], 3) + ", " + num(gaps[1], 3) + ", " +
              num(gaps[2], 3) + ", " + num(gaps[3], 3);
  return o;
}

Outcome c05() {
  Outcome o;
  for (double beta : {0.5, 2.0, 5.0}) {
    const double closed = static_cast<double>(std::pow(2 * oracle::pi_l, 2.0L / 3) * oracle::i0_series(beta / 3) /
                                              std::cbrt(oracle::i0_series(beta)));
    const auto d = CircularDensity::bimodal(beta);
    o.require(std::abs(z_integral(d) - closed) <= 1e-10, "beta=" + num(beta) + " z_integral off");
    o.require(std::abs(z_integral_quadrature(d) - closed) <= 1e-10, "beta=" + num(beta) + " quadrature Z off");
  }
  const double c = predicted_constant(CircularDensity::bimodal(1e-4));
  o.require(std::abs(c - pi * pi / 3) <= 1e-6, "beta=1e-4 constant " + num(c, 12));
  return o;
}

Outcome c06() {
  Outcome o;
  for (double a : {0.05, 0.1, 0.2}) {
    const double diff = std::abs(predicted_constant(CircularDensity::cosine(a)) - (pi * pi / 3) * (1 - a * a / 6));
    o.require(diff <= 2 * a * a * a, "alpha=" + num(a) + " difference " + num(diff));
  }
  return o;
}

Outcome c07() {
  Outcome o;
  const std::vector<std::pair<std::string, CircularDensity>> ds{{"uniform", CircularDensity::uniform()},
                                                                {"vonmises", CircularDensity::von_mises(0, 3)},
                                                                {"cosine", CircularDensity::cosine(0.3)},
                                                                {"bimodal", CircularDensity::bimodal(2)}};
  double worst_gap = 0.0, worst_delta = 0.0;
  for (const auto& [name, d] : ds) {
    const auto g = build_grid(d, 2000);
    for (std::size_t n : {2u, 3u, 5u}) {
      const auto dp = optimal_quantizer_dp(g, n, Metric::Geodesic);
      const auto r = record("c07 " + name + " n=" + std::to_string(n), solve(d, n, Metric::Geodesic));
      const double gap = std::abs(r.distortion - dp.distortion) / dp.distortion;
      const double delta = name == "uniform" ? aligned_spacing_delta(dp.codebook.points(), r.codebook.points())
                                             : aligned_max_delta(dp.codebook.points(), r.codebook.points());
      worst_gap = std::max(worst_gap, gap);
      worst_delta = std::max(worst_delta, delta);
      o.require(gap <= 1e-3, name + " n=" + std::to_string(n) + " distortion gap " + num(gap));
      o.require(delta <= 0.02, name + " n=" + std::to_string(n) + " codebook delta " + num(delta));
    }
  }
  o.detail += (o.detail.empty() ? "" : "; ") + std::string("worst gap ") + num(worst_gap, 3) + ", worst delta " +
              num(worst_delta, 3);
  return o;
}

Outcome c08() {
  Outcome o;
  int checked = 0;
  for (const auto& s : solves) {
    if (!s.result.converged) continue;
    ++checked;
    const auto& res = s.result.residuals;
    o.require(res.max_boundary_residual <= 1e-8, s.label + " boundary residual " + num(res.max_boundary_residual));
    o.require(res.max_centroid_residual <= 1e-8, s.label + " centroid residual " + num(res.max_centroid_residual));
  }
  o.require(checked > 0, "no converged solves to check");
  o.detail += (o.detail.empty() ? "" : "; ") + std::to_string(checked) + " converged solves checked";
  return o;
}

Outcome c09() {
  Outcome o;
  const std::vector<std::vector<VonMisesComponent>> rows{{{0.5, 0.0, 2.0}, {0.5, pi, 2.0}},
                                                         {{0.7, 0.0, 5.0}, {0.3, pi, 1.0}},
                                                         {{0.3, 0.0, 10.0}, {0.7, pi, 2.0}}};
  const std::vector<std::vector<double>> printed{{0.79, 2.36, 3.92, 5.48}, {0.79, 2.36, 3.92, 5.48}, {0.78, 2.35, 3.92, 5.49}};
  FaithfulOptions fo;
  fo.grid = 3600;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto r = solve_faithful(rows[i], 4, fo);
    double worst = 0.0;
    for (std::size_t j = 0; j < 4; ++j) worst = std::max(worst, std::abs(r.codebook[j] - printed[i][j]));
    o.require(worst <= 0.02, "row " + std::to_string(i + 1) + " deviation " + num(worst));
  }
  return o;
}

Outcome c10() {
  Outcome o;
  const auto d = CircularDensity::von_mises(0, 3);
  const double exact = std::cyl_bessel_i(1.0, 3.0) / std::cyl_bessel_i(0.0, 3.0);
  SolverOptions opts;
  opts.max_iterations = 50000;
  std::vector<double> err;
  for (std::size_t n : {8u, 16u, 32u, 64u}) {
    const auto rule = build_rule(d, n, opts);
    o.require(std::abs(integrate(rule, [](double) { return 1.0; }) - 1.0) <= 1e-12, "n=" + std::to_string(n) + " weights");
    err.push_back(std::abs(integrate(rule, [](double x) { return std::cos(x); }) - exact));
  }
  std::string orders;
  for (std::size_t i = 0; i + 1 < err.size(); ++i) {
    const double p = std::log2(err[i] / err[i + 1]);
    orders += (i ? ", " : "") + num(p, 3);
    o.require(p >= 1.6 && p <= 2.4, "order " + num(p) + " at doubling " + std::to_string(i + 1));
  }
  o.detail += (o.detail.empty() ? "" : "; ") + std::string("orders ") + orders;
  return o;
}

Outcome c11() {
  Outcome o;
  double worst = 0.0;
  for (int i = 1; i <= 100; ++i) {
    const double psi = 0.5 * i / 100.0;
    const double g = geodesic_dist(0.0, psi);
    const double rem = chordal_relative_gap(g) + g * g / 12 - g * g * g * g / 360;
    const double psi6 = std::pow(psi, 6);
    worst = std::max(worst, std::abs(rem) / psi6);
    o.require(std::abs(rem) <= 1e-3 * psi6, "psi=" + num(psi) + " remainder " + num(rem));
  }
  o.detail += (o.detail.empty() ? "" : "; ") + std::string("max |remainder|/psi^6 ") + num(worst, 4);
  return o;
}

Outcome c12() {
  Outcome o;
  const auto d = CircularDensity::von_mises(0, 3);
  oracle::Rng rng(12);
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    const Cell cell{rng.uniform(0, two_pi), rng.uniform(0.01, pi - 0.01)};
    const double init = cell.start + rng.uniform(0, cell.length);
    const double newton = chordal_centroid_newton(d, cell, init);
    const double closed = centroid_chordal(d, cell).angle;
    worst = std::max(worst, geodesic_dist(newton, closed));
  }
  o.require(worst <= 1e-10, "max disagreement " + num(worst));
  o.detail += (o.detail.empty() ? "" : "; ") + std::string("max disagreement ") + num(worst, 3);
  return o;
}

struct Criterion {
  int id;
  const char* name;
  double limit_s;
  Outcome (*run)();
};

const std::vector<Criterion> criteria{
    {1, "published 7-point geodesic codebook", 1, c01},
    {2, "published 7-point chordal codebook and antipodal shift", 1, c02},
    {3, "uniform law on circle and arc", 1, c03},
    {4, "asymptotic constant for von Mises", 30, c04},
    {5, "bimodal closed form", 1, c05},
    {6, "cosine expansion", 1, c06},
    {7, "oracle sandwich", 60, c07},
    {8, "optimality residuals of criteria 1-7", 0, c08},
    {9, "published mixture 4-means (grid algorithm)", 5, c09},
    {10, "quadrature order", 10, c10},
    {11, "metric Taylor agreement", 1, c11},
    {12, "Newton and closed-form chordal update agree", 1, c12},
};

bool run_one(const Criterion& c) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = c.run();
  } catch (const std::exception& e) {
    o.pass = false;
    o.detail = std::string("exception: ") + e.what();
  }
  const double t = seconds_since(t0);
  if (c.limit_s > 0 && t > c.limit_s) o.require(false, "runtime " + num(t, 3) + " s over " + num(c.limit_s) + " s");
  std::printf("%s criterion %2d: %s (%.2f s)%s%s\n", o.pass ? "PASS" : "FAIL", c.id, c.name, t,
              o.detail.empty() ? "" : " -- ", o.detail.c_str());
  std::fflush(stdout);
  return o.pass;
}

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc) {
      only = std::atoi(argv[++i]);
    } else {
      std::fprintf(stderr, "usage: %s [--criterion N]\n", argv[0]);
      return 2;
    }
  }
  if (only < 0 || only > static_cast<int>(criteria.size())) {
    std::fprintf(stderr, "no criterion %d\n", only);
    return 2;
  }

  bool ok = true;
  if (only == 0) {
    for (const auto& c : criteria) ok = run_one(c) && ok;
    return ok ? 0 : 1;
  }
  if (only == 8) {
    // the residual check needs the solves of criteria 1-7; run them quietly first
    for (int id = 1; id <= 7; ++id) try {
        criteria[id - 1].run();
      } catch (const std::exception&) {
      }
  }
  return run_one(criteria[only - 1]) ? 0 : 1;
}
