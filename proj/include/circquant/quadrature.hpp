#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <mutex>
#include <nlohmann/json.hpp>
#include <string>
#include <utility>
#include <vector>

#include "density.hpp"
#include "lloyd.hpp"
#include "voronoi.hpp"

namespace circquant {

/// Nodes at geodesic-optimal codepoints, weights equal to their cell masses.
struct QuadratureRule {
  Codebook nodes;
  std::vector<double> weights;
  std::size_t n = 0;
  nlohmann::json density;
  bool converged = false;
  double max_first_moment = 0.0;  // max_j |∫_{R_j} (s − q_j) h ds|

  nlohmann::json to_json() const {
    return {{"nodes", nodes.points()}, {"weights", weights}, {"density", density}, {"n", n}};
  }
};

/// Solves the geodesic quantization problem and takes cell masses as weights.
/// A non-converged solve still yields a rule, flagged by `converged`.
inline QuadratureRule build_rule(const CircularDensity& d, std::size_t n, const SolverOptions& opts = {}) {
  const QuantizerResult r = solve(d, n, Metric::Geodesic, opts);
  QuadratureRule rule;
  rule.nodes = r.codebook;
  rule.n = n;
  rule.density = d.to_json();
  rule.converged = r.converged;
  for (std::size_t j = 0; j < n; ++j) {
    const CellIntegrals I = cell_integrals_at(d, r.partition.cells[j], r.partition.point_offsets[j], QuadMode::Adaptive);
    rule.weights.push_back(I.mass);
    rule.max_first_moment = std::max(rule.max_first_moment, std::abs(I.moment1));
  }
  return rule;
}

/// Q_n(f) = Σ w_j f(q_j).
template <class F>
double integrate(const QuadratureRule& rule, const F& f) {
  double sum = 0.0;
  for (std::size_t j = 0; j < rule.n; ++j) sum += rule.weights[j] * f(rule.nodes[j]);
  return sum;
}

/// Process-wide memo of rules keyed by (density fingerprint, n).
class RuleCache {
 public:
  std::shared_ptr<const QuadratureRule> get(const CircularDensity& d, std::size_t n, const SolverOptions& opts = {}) {
    const auto key = std::make_pair(d.fingerprint(), n);
    {
      std::lock_guard<std::mutex> lock(mutex_);
      if (auto it = rules_.find(key); it != rules_.end()) return it->second;
    }
    auto rule = std::make_shared<const QuadratureRule>(build_rule(d, n, opts));
    std::lock_guard<std::mutex> lock(mutex_);
    return rules_.emplace(key, std::move(rule)).first->second;
  }

  std::size_t size() const {
    std::lock_guard<std::mutex> lock(mutex_);
    return rules_.size();
  }

 private:
  mutable std::mutex mutex_;
  std::map<std::pair<std::string, std::size_t>, std::shared_ptr<const QuadratureRule>> rules_;
};

inline RuleCache& rule_cache() {
  static RuleCache cache;
  return cache;
}

}  // namespace circquant
