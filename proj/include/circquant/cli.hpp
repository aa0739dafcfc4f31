#pragma once

#include <CLI11.hpp>

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <nlohmann/json.hpp>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "asymptotics.hpp"
#include "circquant/reference_data.hpp"
#include "density.hpp"
#include "errors.hpp"
#include "grid_oracle.hpp"
#include "lloyd.hpp"
#include "mixture.hpp"
#include "quadrature.hpp"
#include "voronoi.hpp"

namespace circquant::cli {

using nlohmann::json;

/// Numerical failure reported with exit code 1 (non-convergence under
/// --strict, reproduction outside tolerance).
class numerical_failure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Shortest decimal with 12 significant digits, locale independent.
inline std::string fmt(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 12);
  return std::string(buf, res.ptr);
}

// x rounded to 12 significant digits, so JSON output carries no more.
inline double r12(double x) {
  if (!std::isfinite(x)) return x;
  return std::strtod(fmt(x).c_str(), nullptr);
}

inline json r12(const std::vector<double>& xs) {
  json a = json::array();
  for (double x : xs) a.push_back(r12(x));
  return a;
}

inline json result_json(const CircularDensity& d, const QuantizerResult& r) {
  return {{"density", d.to_json()},
          {"metric", to_string(r.metric)},
          {"n", r.codebook.size()},
          {"codebook", r12(r.codebook.points())},
          {"boundaries", r12(r.partition.boundaries)},
          {"distortion", r12(r.distortion)},
          {"n2Vn", r12(r.n2Vn)},
          {"predicted_constant", r12(predicted_constant(d))},
          {"iterations", r.iterations},
          {"converged", r.converged},
          {"residuals",
           {{"boundary", r12(r.residuals.max_boundary_residual)},
            {"centroid", r12(r.residuals.max_centroid_residual)}}}};
}

inline std::string trace_csv(const std::vector<TraceEntry>& trace) {
  std::string s = "iteration,max_displacement,distortion\n";
  for (const auto& t : trace) s += std::to_string(t.iteration) + "," + fmt(t.max_displacement) + "," + fmt(t.distortion) + "\n";
  return s;
}

// Text given inline, or read from a file when prefixed with '@'.
inline std::string read_arg(const std::string& field, const std::string& v) {
  if (v.empty() || v.front() != '@') return v;
  std::ifstream in(v.substr(1));
  if (!in) throw config_error(field, "cannot read file '" + v.substr(1) + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline json parse_json_arg(const std::string& field, const std::string& v) {
  try {
    return json::parse(read_arg(field, v));
  } catch (const json::parse_error& e) {
    throw config_error(field, std::string("invalid JSON: ") + e.what());
  }
}

inline void write_output(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(path);
  if (!f) throw config_error("out", "cannot write '" + path + "'");
  f << text;
}

struct Args {
  std::string density;
  std::size_t n = 0;
  std::vector<std::size_t> n_list;
  std::string metric = "geodesic";
  double tol = 1e-10;
  int max_iter = 500;
  int restarts = 4;
  std::size_t grid = 0;
  std::string out, csv, seed;
  bool strict = false;
  std::string table;
  std::string mode = "both";
  std::string test;
  std::size_t samples = 360;
};

inline CircularDensity require_density(const Args& a) {
  if (a.density.empty()) throw config_error("density", "is required");
  return density_from_json(parse_json_arg("density", a.density));
}

inline std::size_t require_n(const Args& a) {
  if (a.n < 1) throw config_error("n", "is required and must be at least 1");
  return a.n;
}

inline Metric parse_metric(const Args& a) {
  try {
    return metric_from_string(a.metric);
  } catch (const std::invalid_argument& e) {
    throw config_error("metric", e.what());
  }
}

inline SolverOptions solver_options(const Args& a) {
  SolverOptions o;
  o.tolerance = a.tol;
  o.max_iterations = a.max_iter;
  o.restarts = a.restarts;
  if (!a.seed.empty()) {
    // a bare array, or a previous result whose codebook is reused
    json s = parse_json_arg("seed", a.seed);
    if (s.is_object() && s.contains("codebook")) s = s.at("codebook");
    if (!s.is_array()) throw config_error("seed", "must be an array of angles or a result with a codebook");
    std::vector<double> pts;
    for (const auto& x : s) {
      if (!x.is_number()) throw config_error("seed", "entries must be numbers");
      pts.push_back(x.get<double>());
    }
    o.seeding = Seeding::explicit_points(std::move(pts));
  }
  o.validate();
  return o;
}

inline void check_strict(const Args& a, bool converged, const std::string& what) {
  if (a.strict && !converged) throw numerical_failure(what + " did not converge");
}

// ---------------------------------------------------------------------------
// Commands

inline int cmd_solve(const Args& a, std::ostream& out) {
  const CircularDensity d = require_density(a);
  const QuantizerResult r = solve(d, require_n(a), parse_metric(a), solver_options(a));
  write_output(a.out, result_json(d, r).dump(2) + "\n", out);
  if (!a.csv.empty()) write_output(a.csv, trace_csv(r.trace), out);
  check_strict(a, r.converged, "solve");
  return 0;
}

inline int cmd_trace(const Args& a, std::ostream& out) {
  const CircularDensity d = require_density(a);
  const QuantizerResult r = solve(d, require_n(a), parse_metric(a), solver_options(a));
  write_output(a.csv.empty() ? a.out : a.csv, trace_csv(r.trace), out);
  check_strict(a, r.converged, "solve");
  return 0;
}

inline int cmd_sweep(const Args& a, std::ostream& out) {
  const CircularDensity d = require_density(a);
  if (a.n_list.empty()) throw config_error("n-list", "is required");
  const auto results = sweep(d, a.n_list, parse_metric(a), solver_options(a));
  json arr = json::array();
  bool all = true;
  for (const auto& r : results) {
    arr.push_back(result_json(d, r));
    all = all && r.converged;
  }
  write_output(a.out, arr.dump(2) + "\n", out);
  if (!a.csv.empty()) {
    std::string s = "n,distortion,n2Vn,predicted_constant\n";
    const double c = predicted_constant(d);
    for (const auto& r : results)
      s += std::to_string(r.codebook.size()) + "," + fmt(r.distortion) + "," + fmt(r.n2Vn) + "," + fmt(c) + "\n";
    write_output(a.csv, s, out);
  }
  check_strict(a, all, "sweep");
  return 0;
}

inline int cmd_oracle(const Args& a, std::ostream& out) {
  const CircularDensity d = require_density(a);
  const std::size_t n = require_n(a);
  const Metric m = parse_metric(a);
  const std::size_t M = a.grid == 0 ? 2000 : a.grid;
  if (const double est = oracle_cost_estimate(M, n, !d.on_arc()); est > oracle_cost_limit)
    throw resource_error("grid: oracle would need about " + fmt(est) + " cost evaluations");
  const OracleResult o = optimal_quantizer_dp(build_grid(d, M), n, m);
  const QuantizerResult r = solve(d, n, m, solver_options(a));
  const double gap = (r.distortion - o.distortion) / o.distortion;
  const double delta = aligned_max_delta(o.codebook.points(), r.codebook.points());
  const double spacing = aligned_spacing_delta(o.codebook.points(), r.codebook.points());
  json j = {{"oracle",
             {{"grid", M},
              {"codebook", r12(o.codebook.points())},
              {"boundaries", r12(o.boundaries)},
              {"distortion", r12(o.distortion)}}},
            {"lloyd", result_json(d, r)},
            {"comparison",
             {{"relative_gap", r12(gap)},
              {"max_codepoint_delta", r12(delta)},
              {"max_spacing_delta", r12(spacing)},
              {"lloyd_not_worse", r.distortion <= o.distortion + 1e-6}}}};
  write_output(a.out, j.dump(2) + "\n", out);
  check_strict(a, r.converged, "solve");
  if (a.strict && std::abs(gap) > 1e-3) throw numerical_failure("oracle and solver disagree beyond 1e-3 relative");
  return 0;
}

inline int cmd_asymptotics(const Args& a, std::ostream& out) {
  const CircularDensity d = require_density(a);
  const AsymptoticProfile p = asymptotic_profile(d);
  json j = {{"density", d.to_json()},
            {"Z", r12(p.Z)},
            {"predicted_constant", r12(p.predicted_constant)},
            {"closed_form", p.closed_form_used}};
  if (a.n > 0) {
    j["n"] = a.n;
    j["predicted_distortion"] = r12(p.predicted_constant / (static_cast<double>(a.n) * static_cast<double>(a.n)));
  }
  write_output(a.out, j.dump(2) + "\n", out);
  if (!a.csv.empty()) {
    if (a.samples < 1) throw config_error("samples", "must be at least 1");
    std::string s = "theta,lambda\n";
    for (std::size_t i = 0; i < a.samples; ++i) {
      const double t = d.length() * (static_cast<double>(i) + 0.5) / static_cast<double>(a.samples);
      s += fmt(t) + "," + fmt(p.lambda(d, t)) + "\n";
    }
    write_output(a.csv, s, out);
  }
  return 0;
}

inline int cmd_quadrature(const Args& a, std::ostream& out) {
  const CircularDensity d = require_density(a);
  const QuadratureRule rule = build_rule(d, require_n(a), solver_options(a));
  json j = rule.to_json();
  j["nodes"] = r12(rule.nodes.points());
  j["weights"] = r12(rule.weights);
  j["converged"] = rule.converged;
  if (!a.test.empty()) {
    std::function<double(double)> f;
    if (a.test == "one") f = [](double) { return 1.0; };
    else if (a.test == "cos") f = [](double x) { return std::cos(x); };
    else if (a.test == "sin") f = [](double x) { return std::sin(x); };
    else if (a.test == "cos2") f = [](double x) { return std::cos(2.0 * x); };
    else throw config_error("test", "must be one of one, cos, sin, cos2");
    const double exact = d.integrate_weighted(f, 0.0, d.length(), QuadMode::Adaptive, 1e-14);
    const double approx = integrate(rule, f);
    j["test"] = {{"integrand", a.test}, {"rule", r12(approx)}, {"reference", r12(exact)}, {"error", r12(approx - exact)}};
  }
  write_output(a.out, j.dump(2) + "\n", out);
  check_strict(a, rule.converged, "quadrature rule");
  return 0;
}

inline std::vector<VonMisesComponent> mixture_components(const CircularDensity& d) {
  if (d.on_arc()) throw config_error("density", "mixture solver needs a full-circle density");
  if (d.family() == Family::VonMises) return {{1.0, d.mu(), d.kappa()}};
  if (d.family() == Family::Mixture) return d.components();
  throw config_error("density.type", "mixture solver needs a von_mises or mixture density");
}

inline int cmd_mixture(const Args& a, std::ostream& out) {
  const CircularDensity d = require_density(a);
  const auto comps = mixture_components(d);
  const std::size_t n = require_n(a);
  if (a.mode != "both" && a.mode != "faithful" && a.mode != "weighted")
    throw config_error("mode", "must be faithful, weighted or both");
  json j = json::object();
  bool ok = true;
  if (a.mode != "weighted") {
    FaithfulOptions fo;
    if (a.grid) fo.grid = a.grid;
    fo.tolerance = a.tol;
    if (a.max_iter < 1) throw config_error("max-iter", "must be at least 1");
    fo.max_iterations = a.max_iter;
    const QuantizerResult r =
        a.seed.empty() ? solve_faithful(comps, n, fo)
                       : solve_faithful(comps, n, Codebook(solver_options(a).seeding.points), fo);
    j["faithful"] = result_json(d, r);
    j["faithful"]["grid"] = fo.grid;
    ok = ok && r.converged;
  }
  if (a.mode != "faithful") {
    const QuantizerResult r = solve_weighted(comps, n, parse_metric(a), solver_options(a));
    j["weighted"] = result_json(d, r);
    ok = ok && r.converged;
  }
  write_output(a.out, j.dump(2) + "\n", out);
  check_strict(a, ok, "mixture solve");
  return 0;
}

inline json reference_tables() { return json::parse(reference_tables_text(), nullptr, true, true); }

// One reproduced row: printed values, computed values and per-entry deltas,
// with the computed codebook re-indexed cyclically to line up with the printed one.
inline bool report_row(std::ostream& out, const std::string& label, const std::vector<double>& printed,
                       const std::vector<double>& computed, double tol) {
  std::size_t shift = 0;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t s = 0; s < computed.size(); ++s) {
    double worst = 0.0;
    for (std::size_t j = 0; j < printed.size(); ++j)
      worst = std::max(worst, geodesic_dist(printed[j], computed[(j + s) % computed.size()]));
    if (worst < best) {
      best = worst;
      shift = s;
    }
  }
  bool ok = true;
  out << label << "\n";
  out << "  " << std::left << std::setw(10) << "printed" << std::setw(12) << "computed" << "delta\n";
  for (std::size_t j = 0; j < printed.size(); ++j) {
    const double c = computed[(j + shift) % computed.size()];
    const double delta = wrap_signed(c, printed[j]);
    const bool within = std::abs(delta) <= tol;
    ok = ok && within;
    out << "  " << std::setw(10) << fmt(printed[j]) << std::setw(12) << fmt(std::round(c * 1e6) / 1e6)
        << fmt(std::round(delta * 1e6) / 1e6) << (within ? "" : "  OUT") << "\n";
  }
  return ok;
}

inline int cmd_reproduce(const Args& a, std::ostream& out) {
  const json ref = reference_tables();
  bool ok = true;
  if (a.table == "table1") {
    const json& t = ref.at("table1");
    const CircularDensity d = density_from_json(t.at("density"));
    const std::size_t n = t.at("n").get<std::size_t>();
    const double tol = t.at("tolerance").get<double>();
    SolverOptions o;
    o.tolerance = a.tol;
    o.max_iterations = a.max_iter;
    o.restarts = a.restarts;
    for (const char* metric : {"geodesic", "chordal"}) {
      const QuantizerResult r = solve(d, n, metric_from_string(metric), o);
      const auto printed = t.at(metric).get<std::vector<double>>();
      const double printed_v = distortion(d, Codebook(printed), metric_from_string(metric));
      ok = report_row(out, std::string(metric) + " (distortion computed " + fmt(r12(r.distortion)) +
                               ", printed codebook " + fmt(r12(printed_v)) + ")",
                      printed, r.codebook.points(), tol) &&
           ok;
    }
  } else if (a.table == "table2") {
    const json& t = ref.at("table2");
    const std::size_t n = t.at("n").get<std::size_t>();
    const double tol = t.at("tolerance").get<double>();
    FaithfulOptions fo;
    fo.grid = a.grid ? a.grid : t.at("grid").get<std::size_t>();
    for (const auto& row : t.at("rows")) {
      const double w1 = row.at("w1").get<double>();
      const std::vector<VonMisesComponent> comps{{w1, 0.0, row.at("kappa1").get<double>()},
                                                 {1.0 - w1, pi, row.at("kappa2").get<double>()}};
      const QuantizerResult r = solve_faithful(comps, n, fo);
      std::ostringstream label;
      label << "w1=" << fmt(w1) << " kappa1=" << fmt(comps[0].kappa) << " kappa2=" << fmt(comps[1].kappa);
      ok = report_row(out, label.str(), row.at("codebook").get<std::vector<double>>(), r.codebook.points(), tol) &&
           ok;
    }
  } else {
    throw config_error("table", "must be table1 or table2");
  }
  out << (ok ? "all entries within tolerance\n" : "some entries outside tolerance\n");
  return ok ? 0 : 1;
}

// ---------------------------------------------------------------------------

/// Parses argv and runs one command. Returns the process exit code:
/// 0 success, 1 numerical failure, 2 usage or configuration error.
inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Optimal quantizers on the circle and on arcs"};
  app.require_subcommand(1);
  Args a;

  auto common = [&](CLI::App* c) {
    c->add_option("--density", a.density, "density JSON, or @file");
    c->add_option("--n", a.n, "codebook size");
    c->add_option("--metric", a.metric, "geodesic or chordal");
    c->add_option("--tol", a.tol, "stopping tolerance on the largest codepoint move");
    c->add_option("--max-iter", a.max_iter, "iteration cap");
    c->add_option("--restarts", a.restarts, "number of seeded restarts");
    c->add_option("--seed", a.seed, "initial codebook: JSON array, a solve result, or @file");
    c->add_option("--out", a.out, "write JSON here instead of stdout");
    c->add_option("--csv", a.csv, "write CSV here");
    c->add_flag("--strict", a.strict, "exit 1 when a solve does not converge");
  };

  auto* solve_cmd = app.add_subcommand("solve", "solve one quantization problem");
  auto* sweep_cmd = app.add_subcommand("sweep", "solve a list of codebook sizes");
  auto* oracle_cmd = app.add_subcommand("oracle", "compare the solver with the grid dynamic program");
  auto* asym_cmd = app.add_subcommand("asymptotics", "high-resolution constants and point density");
  auto* quad_cmd = app.add_subcommand("quadrature", "quantizer-derived quadrature rule");
  auto* mix_cmd = app.add_subcommand("mixture", "grid and density-weighted mixture solvers");
  auto* repro_cmd = app.add_subcommand("reproduce", "compare with the reference tables");
  auto* trace_cmd = app.add_subcommand("trace", "per-iteration CSV of one solve");
  for (auto* c : {solve_cmd, sweep_cmd, oracle_cmd, asym_cmd, quad_cmd, mix_cmd, repro_cmd, trace_cmd}) common(c);
  sweep_cmd->add_option("--n-list", a.n_list, "ascending sizes, e.g. 16,32,64")->delimiter(',');
  for (auto* c : {oracle_cmd, mix_cmd, repro_cmd}) c->add_option("--grid", a.grid, "grid size");
  asym_cmd->add_option("--samples", a.samples, "lambda samples written to --csv");
  quad_cmd->add_option("--test", a.test, "report the rule's error on one, cos, sin or cos2");
  mix_cmd->add_option("--mode", a.mode, "faithful, weighted or both");
  repro_cmd->add_option("table", a.table, "table1 or table2")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*solve_cmd) return cmd_solve(a, out);
    if (*sweep_cmd) return cmd_sweep(a, out);
    if (*oracle_cmd) return cmd_oracle(a, out);
    if (*asym_cmd) return cmd_asymptotics(a, out);
    if (*quad_cmd) return cmd_quadrature(a, out);
    if (*mix_cmd) return cmd_mixture(a, out);
    if (*repro_cmd) return cmd_reproduce(a, out);
    if (*trace_cmd) return cmd_trace(a, out);
  } catch (const config_error& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const resource_error& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const numerical_failure& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv{"circquant"};
  for (const auto& s : args) argv.push_back(s.c_str());
  return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace circquant::cli
