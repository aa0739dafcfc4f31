#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <nlohmann/json.hpp>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "bessel.hpp"
#include "errors.hpp"
#include "geometry.hpp"
#include "integrate.hpp"

namespace circquant {

enum class Family { Uniform, VonMises, Mixture, Cosine, Bimodal, Tabulated };

/// One weighted von Mises term of a mixture.
struct VonMisesComponent {
  double weight = 1.0;
  double mu = 0.0;
  double kappa = 0.0;
};

/// The curve a density lives on: the full circle, or a geodesic arc [0, L]
/// parameterized by arc length.
struct Domain {
  bool arc = false;
  double length = two_pi;

  static Domain circle() { return {}; }
  static Domain arc_of(double length) {
    if (!(length > 0.0) || !std::isfinite(length))
      throw std::invalid_argument("arc length must be positive and finite");
    return {true, length};
  }
};

/// A contiguous piece of the domain: coordinates start .. start + length,
/// unwrapped (on the circle the end may exceed 2π).
struct Cell {
  double start = 0.0;
  double length = 0.0;

  double end() const { return start + length; }
};

struct CellIntegrals {
  double mass = 0.0;
  double moment1 = 0.0;  // ∫ (t − ref) h over the unwrapped cell
  double moment2 = 0.0;  // ∫ (t − ref)² h
  double trig_c = 0.0;   // ∫ cos θ · h
  double trig_s = 0.0;   // ∫ sin θ · h
};

/// A normalized probability density on a circle or an arc. Immutable after
/// construction; construction verifies ∫h = 1.
class CircularDensity {
 public:
  static CircularDensity uniform(Domain domain = Domain::circle()) {
    CircularDensity d(Family::Uniform, domain);
    d.finish();
    return d;
  }

  static CircularDensity von_mises(double mu, double kappa, Domain domain = Domain::circle()) {
    check_kappa(kappa);
    CircularDensity d(Family::VonMises, domain);
    d.components_ = {{1.0, wrap(mu), kappa}};
    d.finish();
    return d;
  }

  static CircularDensity mixture(std::vector<VonMisesComponent> components,
                                 Domain domain = Domain::circle()) {
    if (components.empty()) throw std::invalid_argument("mixture needs at least one component");
    double total = 0.0;
    for (auto& c : components) {
      if (!(c.weight > 0.0) || c.weight > 1.0)
        throw std::invalid_argument("mixture weights must lie in (0, 1]");
      check_kappa(c.kappa);
      c.mu = wrap(c.mu);
      total += c.weight;
    }
    if (std::abs(total - 1.0) > 1e-12) throw std::invalid_argument("mixture weights must sum to 1");
    CircularDensity d(Family::Mixture, domain);
    d.components_ = std::move(components);
    d.finish();
    return d;
  }

  static CircularDensity cosine(double alpha, Domain domain = Domain::circle()) {
    if (!(std::abs(alpha) < 1.0)) throw std::invalid_argument("cosine density needs |alpha| < 1");
    CircularDensity d(Family::Cosine, domain);
    d.alpha_ = alpha;
    d.finish();
    return d;
  }

  static CircularDensity bimodal(double beta, Domain domain = Domain::circle()) {
    if (!(beta > 0.0) || beta > 700.0) throw std::invalid_argument("bimodal density needs 0 < beta <= 700");
    CircularDensity d(Family::Bimodal, domain);
    d.beta_ = beta;
    d.finish();
    return d;
  }

  /// Piecewise-linear density through (thetas[i], values[i]); periodic on the
  /// circle, constant beyond the end knots on an arc. Renormalized to unit mass.
  static CircularDensity tabulated(std::vector<double> thetas, std::vector<double> values,
                                   Domain domain = Domain::circle()) {
    if (thetas.size() != values.size() || thetas.empty())
      throw std::invalid_argument("tabulated density needs matching, nonempty thetas and values");
    for (std::size_t i = 0; i < thetas.size(); ++i) {
      if (!(values[i] > 0.0) || !std::isfinite(values[i]))
        throw std::invalid_argument("tabulated values must be strictly positive");
      if (!std::isfinite(thetas[i]) || thetas[i] < 0.0 || thetas[i] >= domain.length + (domain.arc ? 1e-15 : 0.0))
        throw std::invalid_argument("tabulated thetas must lie in the domain");
      if (i > 0 && !(thetas[i] > thetas[i - 1]))
        throw std::invalid_argument("tabulated thetas must be strictly increasing");
    }
    CircularDensity d(Family::Tabulated, domain);
    d.knots_ = std::move(thetas);
    d.values_ = std::move(values);
    d.finish();
    return d;
  }

  Family family() const { return family_; }
  const Domain& domain() const { return domain_; }
  bool on_arc() const { return domain_.arc; }
  double length() const { return domain_.length; }

  double mu() const { return components_.empty() ? 0.0 : components_.front().mu; }
  double kappa() const { return components_.empty() ? 0.0 : components_.front().kappa; }
  double alpha() const { return alpha_; }
  double beta() const { return beta_; }
  const std::vector<VonMisesComponent>& components() const { return components_; }
  const std::vector<double>& knots() const { return knots_; }
  const std::vector<double>& table_values() const { return values_; }

  /// h(θ). On an arc, θ must lie in [0, L].
  double operator()(double theta) const {
    if (domain_.arc) {
      if (!(theta >= 0.0 && theta <= domain_.length))
        throw std::domain_error("density evaluated outside its arc");
    } else if (!std::isfinite(theta)) {
      throw std::domain_error("density evaluated at a non-finite angle");
    }
    return eval(theta);
  }

  /// h at an unwrapped coordinate, without domain checks. Hot path for the
  /// integrators; on the circle any real x is accepted.
  double eval(double x) const {
    switch (family_) {
      case Family::Uniform:
        return norm_;
      case Family::VonMises:
      case Family::Mixture: {
        double sum = 0.0;
        for (std::size_t k = 0; k < components_.size(); ++k) {
          const auto& c = components_[k];
          sum += component_norm_[k] * std::exp(c.kappa * (std::cos(x - c.mu) - 1.0));
        }
        return sum;
      }
      case Family::Cosine:
        return norm_ * (1.0 + alpha_ * std::cos(x));
      case Family::Bimodal:
        return norm_ * std::exp(beta_ * (std::cos(2.0 * x) - 1.0));
      case Family::Tabulated:
        return norm_ * interpolate(x);
    }
    return 0.0;
  }

  /// Kink locations of the density inside [start, start + length], excluding
  /// the ends. Only tabulated densities have any.
  std::vector<double> breakpoints(double start, double length) const {
    std::vector<double> out;
    if (family_ != Family::Tabulated) return out;
    const double end = start + length;
    if (domain_.arc) {
      for (double k : knots_)
        if (k > start && k < end) out.push_back(k);
      return out;
    }
    const double first_turn = std::floor(start / two_pi) - 1.0;
    for (double turn = first_turn; turn * two_pi <= end; turn += 1.0)
      for (double k : knots_) {
        const double x = k + turn * two_pi;
        if (x > start && x < end) out.push_back(x);
      }
    std::sort(out.begin(), out.end());
    return out;
  }

  /// Integral of g(x)·h(x) over [a, b] (unwrapped coordinates), split at kinks.
  template <class G>
  double integrate_weighted(const G& g, double a, double b, QuadMode mode = QuadMode::Adaptive,
                            double tol = 1e-12) const {
    double sum = 0.0;
    double lo = a;
    auto pts = breakpoints(a, b - a);
    pts.push_back(b);
    for (double hi : pts) {
      sum += integrate_interval([&](double x) { return g(x) * eval(x); }, lo, hi, mode,
                                tol * (hi - lo) / std::max(b - a, 1e-300));
      lo = hi;
    }
    return sum;
  }

  /// argmin of h. The seeding origin for asymptotic quantiles.
  double antimode() const {
    switch (family_) {
      case Family::Uniform:
        return 0.0;
      case Family::VonMises:
        if (!domain_.arc) return kappa() > 0.0 ? wrap(mu() + pi) : 0.0;
        break;
      case Family::Cosine:
        if (!domain_.arc) return alpha_ > 0.0 ? pi : 0.0;
        break;
      case Family::Bimodal:
        if (!domain_.arc) return pi / 2.0;
        break;
      case Family::Tabulated: {
        const auto it = std::min_element(values_.begin(), values_.end());
        return knots_[static_cast<std::size_t>(it - values_.begin())];
      }
      case Family::Mixture:
        break;
    }
    return grid_argmin();
  }

  /// max h over the domain, by dense sampling.
  double max_value() const {
    const int samples = 8192;
    double best = 0.0;
    for (int i = 0; i <= samples; ++i) best = std::max(best, eval(domain_.length * i / samples));
    return best;
  }

  nlohmann::json to_json() const {
    nlohmann::json j;
    switch (family_) {
      case Family::Uniform:
        j["type"] = "uniform";
        break;
      case Family::VonMises:
        j["type"] = "von_mises";
        j["mu"] = mu();
        j["kappa"] = kappa();
        break;
      case Family::Mixture: {
        j["type"] = "mixture";
        auto arr = nlohmann::json::array();
        for (const auto& c : components_) arr.push_back({{"w", c.weight}, {"mu", c.mu}, {"kappa", c.kappa}});
        j["components"] = arr;
        break;
      }
      case Family::Cosine:
        j["type"] = "cosine";
        j["alpha"] = alpha_;
        break;
      case Family::Bimodal:
        j["type"] = "bimodal";
        j["beta"] = beta_;
        break;
      case Family::Tabulated:
        j["type"] = "tabulated";
        j["thetas"] = knots_;
        j["values"] = values_;
        break;
    }
    if (domain_.arc) j["arc_length"] = domain_.length;
    return j;
  }

  /// Canonical text identity, used as a cache key.
  std::string fingerprint() const { return to_json().dump(); }

 private:
  CircularDensity(Family f, Domain d) : family_(f), domain_(d) {}

  static void check_kappa(double kappa) {
    if (!(kappa >= 0.0) || kappa > 700.0) throw std::invalid_argument("kappa must lie in [0, 700]");
  }

  double interpolate(double x) const {
    const std::size_t n = knots_.size();
    if (n == 1) return values_[0];
    if (domain_.arc) {
      if (x <= knots_.front()) return values_.front();
      if (x >= knots_.back()) return values_.back();
      const auto it = std::upper_bound(knots_.begin(), knots_.end(), x);
      const std::size_t i = static_cast<std::size_t>(it - knots_.begin());
      const double t = (x - knots_[i - 1]) / (knots_[i] - knots_[i - 1]);
      return values_[i - 1] + t * (values_[i] - values_[i - 1]);
    }
    const double w = wrap(x);
    const auto it = std::upper_bound(knots_.begin(), knots_.end(), w);
    const std::size_t i = static_cast<std::size_t>(it - knots_.begin());
    double x0, x1, v0, v1;
    if (i == 0) {
      x0 = knots_.back() - two_pi;
      v0 = values_.back();
      x1 = knots_.front();
      v1 = values_.front();
    } else if (i == n) {
      x0 = knots_.back();
      v0 = values_.back();
      x1 = knots_.front() + two_pi;
      v1 = values_.front();
    } else {
      x0 = knots_[i - 1];
      v0 = values_[i - 1];
      x1 = knots_[i];
      v1 = values_[i];
    }
    return v0 + (w - x0) / (x1 - x0) * (v1 - v0);
  }

  // Exact integral of the unnormalized piecewise-linear table.
  double table_integral() const {
    const std::size_t n = knots_.size();
    if (n == 1) return values_[0] * domain_.length;
    double sum = 0.0;
    for (std::size_t i = 1; i < n; ++i) sum += 0.5 * (values_[i] + values_[i - 1]) * (knots_[i] - knots_[i - 1]);
    if (domain_.arc) {
      sum += values_.front() * knots_.front();
      sum += values_.back() * (domain_.length - knots_.back());
    } else {
      sum += 0.5 * (values_.front() + values_.back()) * (knots_.front() + two_pi - knots_.back());
    }
    return sum;
  }

  double grid_argmin() const {
    const int samples = 8192;
    double best_x = 0.0;
    double best = eval(0.0);
    for (int i = 1; i < samples; ++i) {
      const double x = domain_.length * i / samples;
      const double v = eval(x);
      if (v < best) {
        best = v;
        best_x = x;
      }
    }
    return best_x;
  }

  void finish() {
    const double len = domain_.length;
    norm_ = 1.0;
    if (family_ == Family::VonMises || family_ == Family::Mixture) {
      component_norm_.clear();
      for (const auto& c : components_) {
        if (!domain_.arc) {
          // e^{κ(cos−1)} / (2π e^{−κ} I₀(κ))
          component_norm_.push_back(c.weight / (two_pi * bessel_i0_scaled(c.kappa)));
        } else {
          const double k = c.kappa, m = c.mu;
          const double z = adaptive_simpson([&](double x) { return std::exp(k * (std::cos(x - m) - 1.0)); },
                                            0.0, len, 1e-14);
          component_norm_.push_back(c.weight / z);
        }
      }
    } else if (family_ == Family::Uniform) {
      norm_ = 1.0 / len;
    } else if (family_ == Family::Cosine) {
      norm_ = domain_.arc ? 1.0 / (len + alpha_ * std::sin(len)) : 1.0 / two_pi;
    } else if (family_ == Family::Bimodal) {
      if (!domain_.arc) {
        // ∫₀^{2π} e^{β cos 2θ} dθ = 2π I₀(β)
        norm_ = 1.0 / (two_pi * bessel_i0_scaled(beta_));
      } else {
        const double b = beta_;
        norm_ = 1.0 / adaptive_simpson([&](double x) { return std::exp(b * (std::cos(2.0 * x) - 1.0)); }, 0.0,
                                       len, 1e-14);
      }
    } else if (family_ == Family::Tabulated) {
      norm_ = 1.0 / table_integral();
    }
    const double total = integrate_weighted([](double) { return 1.0; }, 0.0, len, QuadMode::Adaptive, 1e-13);
    if (std::abs(total - 1.0) > 1e-10)
      throw std::logic_error("density failed its normalization check: integral = " + std::to_string(total));
  }

  Family family_;
  Domain domain_;
  double norm_ = 1.0;
  double alpha_ = 0.0;
  double beta_ = 0.0;
  std::vector<VonMisesComponent> components_;
  std::vector<double> component_norm_;
  std::vector<double> knots_;
  std::vector<double> values_;
};

// ---------------------------------------------------------------------------
// Cell-local integrals

/// The cell running counterclockwise from a to b (circle), or [a, b] (arc).
inline Cell make_cell(const CircularDensity& d, double a, double b) {
  if (d.on_arc()) {
    if (!(a >= 0.0 && b <= d.length() && b > a)) throw std::domain_error("arc cell must satisfy 0 <= a < b <= L");
    return {a, b - a};
  }
  const double start = wrap(a);
  return {start, ccw_gap(start, b)};
}

// Offset of an angle from the start of a cell, or a domain error if the
// angle is not inside it.
inline double offset_in_cell(const CircularDensity& d, const Cell& cell, double x) {
  double off;
  if (d.on_arc()) {
    off = x - cell.start;
  } else {
    off = wrap(x - cell.start);
    // the cell end coincides with the start on a full-circle cell
    if (off == 0.0 && wrap(x) != wrap(cell.start)) off = two_pi;
  }
  constexpr double slack = 1e-12;
  if (off < -slack || off > cell.length + slack) throw std::domain_error("reference point is not inside the cell");
  return std::clamp(off, 0.0, cell.length);
}

/// Mass, moments about `ref_offset` (measured from cell.start), and
/// trigonometric moments of h over the cell.
inline CellIntegrals cell_integrals_at(const CircularDensity& d, const Cell& cell, double ref_offset,
                                       QuadMode mode = QuadMode::Fast) {
  CellIntegrals out;
  const double a = cell.start;
  const double r = a + ref_offset;
  auto pts = d.breakpoints(a, cell.length);
  pts.push_back(cell.end());
  double lo = a;
  if (mode == QuadMode::Fast) {
    const auto& t = detail::gauss_legendre_table<64>();
    constexpr double max_panel = pi / 8.0;
    for (double hi : pts) {
      const auto panels = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil((hi - lo) / max_panel)));
      const double h = (hi - lo) / static_cast<double>(panels);
      for (std::size_t p = 0; p < panels; ++p) {
        const double pa = lo + h * static_cast<double>(p);
        const double half = 0.5 * h;
        const double mid = pa + half;
        for (std::size_t i = 0; i < 64; ++i) {
          const double x = mid + half * t.nodes[i];
          const double wh = t.weights[i] * half * d.eval(x);
          const double u = x - r;
          out.mass += wh;
          out.moment1 += wh * u;
          out.moment2 += wh * u * u;
          out.trig_c += wh * std::cos(x);
          out.trig_s += wh * std::sin(x);
        }
      }
      lo = hi;
    }
    return out;
  }
  const double tol = 1e-12;
  out.mass = d.integrate_weighted([](double) { return 1.0; }, a, cell.end(), mode, tol);
  out.moment1 = d.integrate_weighted([r](double x) { return x - r; }, a, cell.end(), mode, tol);
  out.moment2 = d.integrate_weighted([r](double x) { return (x - r) * (x - r); }, a, cell.end(), mode, tol);
  out.trig_c = d.integrate_weighted([](double x) { return std::cos(x); }, a, cell.end(), mode, tol);
  out.trig_s = d.integrate_weighted([](double x) { return std::sin(x); }, a, cell.end(), mode, tol);
  return out;
}

inline CellIntegrals cell_integrals(const CircularDensity& d, double a, double b, double ref,
                                    QuadMode mode = QuadMode::Adaptive) {
  const Cell cell = make_cell(d, a, b);
  return cell_integrals_at(d, cell, offset_in_cell(d, cell, ref), mode);
}

/// Probability of the counterclockwise arc origin → θ (on an arc: [origin, θ]).
inline double cdf(const CircularDensity& d, double theta, double origin = 0.0) {
  if (d.on_arc()) {
    if (theta < 0.0 || theta > d.length() || origin < 0.0 || origin > d.length())
      throw std::domain_error("cdf argument outside the arc");
    if (theta <= origin) return 0.0;
    return d.integrate_weighted([](double) { return 1.0; }, origin, theta);
  }
  const double start = wrap(origin);
  const double span = wrap(theta - start);
  if (span == 0.0) return 0.0;
  return d.integrate_weighted([](double) { return 1.0; }, start, start + span);
}

/// Angles at which the normalized cumulative integral of h^e, started at
/// `origin`, reaches each probability in `ps`. e = 1 gives ordinary
/// quantiles; e = 1/3 gives quantiles of the asymptotic point density.
inline std::vector<double> quantiles(const CircularDensity& d, const std::vector<double>& ps, double origin,
                                     double weight_exponent) {
  double start, span;
  if (d.on_arc()) {
    start = std::clamp(origin, 0.0, d.length());
    span = d.length() - start;
  } else {
    start = wrap(origin);
    span = two_pi;
  }
  const double e = weight_exponent;
  auto he = [&](double x) { return e == 1.0 ? d.eval(x) : std::pow(d.eval(x), e); };

  // Integrate panel by panel; tabulated kinks are handled by splitting.
  auto piece = [&](double a, double b) {
    double s = 0.0;
    double lo = a;
    auto pts = d.breakpoints(a, b - a);
    pts.push_back(b);
    for (double hi : pts) {
      s += gauss_legendre<64>(he, lo, hi);
      lo = hi;
    }
    return s;
  };

  constexpr std::size_t panels = 512;
  const double h = span / panels;
  std::vector<double> cum(panels + 1, 0.0);
  for (std::size_t k = 0; k < panels; ++k) cum[k + 1] = cum[k] + piece(start + h * k, start + h * (k + 1));
  const double total = cum.back();

  std::vector<double> out;
  out.reserve(ps.size());
  for (double p : ps) {
    if (!(p >= 0.0 && p <= 1.0)) throw std::domain_error("quantile probability must lie in [0, 1]");
    const double target = p * total;
    const auto it = std::upper_bound(cum.begin(), cum.end(), target);
    std::size_t k = it == cum.begin() ? 0 : static_cast<std::size_t>(it - cum.begin()) - 1;
    if (k >= panels) k = panels - 1;
    double lo = start + h * k;
    double hi = lo + h;
    const double base = cum[k];
    const double panel_lo = lo;
    for (int it2 = 0; it2 < 200 && hi - lo > 1e-15 * std::max(1.0, std::abs(hi)); ++it2) {
      const double mid = 0.5 * (lo + hi);
      const double f = base + piece(panel_lo, mid);
      if (std::abs(f - target) <= 1e-14 * total) {
        lo = hi = mid;
        break;
      }
      if (f < target)
        lo = mid;
      else
        hi = mid;
    }
    const double x = 0.5 * (lo + hi);
    out.push_back(d.on_arc() ? std::clamp(x, 0.0, d.length()) : wrap(x));
  }
  return out;
}

inline double quantile(const CircularDensity& d, double p, double origin, double weight_exponent) {
  return quantiles(d, {p}, origin, weight_exponent).front();
}

// ---------------------------------------------------------------------------
// JSON density specification

namespace detail {

inline double require_number(const nlohmann::json& j, const char* key, const std::string& where) {
  if (!j.contains(key)) throw config_error(where + "." + key, "missing required field");
  if (!j.at(key).is_number()) throw config_error(where + "." + key, "must be a number");
  const double v = j.at(key).get<double>();
  if (!std::isfinite(v)) throw config_error(where + "." + key, "must be finite");
  return v;
}

inline std::vector<double> require_numbers(const nlohmann::json& j, const char* key, const std::string& where) {
  if (!j.contains(key) || !j.at(key).is_array()) throw config_error(where + "." + key, "must be an array of numbers");
  std::vector<double> out;
  for (const auto& v : j.at(key)) {
    if (!v.is_number()) throw config_error(where + "." + key, "must be an array of numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

}  // namespace detail

/// Builds a density from its JSON specification, e.g.
/// {"type":"von_mises","mu":0,"kappa":3}. Errors name the offending field.
inline CircularDensity density_from_json(const nlohmann::json& j) {
  const std::string where = "density";
  if (!j.is_object()) throw config_error(where, "must be a JSON object");
  if (!j.contains("type") || !j.at("type").is_string()) throw config_error(where + ".type", "missing or not a string");
  const std::string type = j.at("type").get<std::string>();

  static const std::map<std::string, std::vector<std::string>> allowed{
      {"uniform", {}},           {"von_mises", {"mu", "kappa"}},   {"mixture", {"components"}},
      {"cosine", {"alpha"}},     {"bimodal", {"beta"}},            {"tabulated", {"thetas", "values"}}};
  if (const auto it = allowed.find(type); it != allowed.end()) {
    for (const auto& [key, value] : j.items()) {
      if (key == "type" || key == "arc_length") continue;
      if (std::find(it->second.begin(), it->second.end(), key) == it->second.end())
        throw config_error(where + "." + key, "unknown field for a " + type + " density");
    }
  }

  Domain domain = Domain::circle();
  if (j.contains("arc_length")) {
    const double L = detail::require_number(j, "arc_length", where);
    if (!(L > 0.0)) throw config_error(where + ".arc_length", "must be positive");
    domain = Domain::arc_of(L);
  }

  auto wrap_errors = [&](const std::string& field, auto&& build) -> CircularDensity {
    try {
      return build();
    } catch (const config_error&) {
      throw;
    } catch (const std::invalid_argument& e) {
      throw config_error(field, e.what());
    }
  };

  if (type == "uniform") return CircularDensity::uniform(domain);
  if (type == "von_mises") {
    const double mu = j.contains("mu") ? detail::require_number(j, "mu", where) : 0.0;
    const double kappa = detail::require_number(j, "kappa", where);
    return wrap_errors(where + ".kappa", [&] { return CircularDensity::von_mises(mu, kappa, domain); });
  }
  if (type == "mixture") {
    if (!j.contains("components") || !j.at("components").is_array())
      throw config_error(where + ".components", "must be an array");
    std::vector<VonMisesComponent> comps;
    std::size_t i = 0;
    for (const auto& c : j.at("components")) {
      const std::string cw = where + ".components[" + std::to_string(i++) + "]";
      if (!c.is_object()) throw config_error(cw, "must be an object");
      comps.push_back({detail::require_number(c, "w", cw), detail::require_number(c, "mu", cw),
                       detail::require_number(c, "kappa", cw)});
    }
    return wrap_errors(where + ".components", [&] { return CircularDensity::mixture(comps, domain); });
  }
  if (type == "cosine") {
    const double alpha = detail::require_number(j, "alpha", where);
    return wrap_errors(where + ".alpha", [&] { return CircularDensity::cosine(alpha, domain); });
  }
  if (type == "bimodal") {
    const double beta = detail::require_number(j, "beta", where);
    return wrap_errors(where + ".beta", [&] { return CircularDensity::bimodal(beta, domain); });
  }
  if (type == "tabulated") {
    auto thetas = detail::require_numbers(j, "thetas", where);
    auto values = detail::require_numbers(j, "values", where);
    return wrap_errors(where + ".values", [&] { return CircularDensity::tabulated(thetas, values, domain); });
  }
  throw config_error(where + ".type", "unknown density type '" + type + "'");
}

}  // namespace circquant
