#pragma once

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <vector>

#include "infdim/core/types.hpp"

namespace infdim {

/// Q-point Gauss-Legendre rule on [a, b]; nodes ascending.
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
  int order = 0;

  template <class F>
  auto integrate(F&& f) const -> decltype(f(0.0) * 1.0) {
    decltype(f(0.0) * 1.0) sum{};
    for (std::size_t k = 0; k < nodes.size(); ++k) sum += weights[k] * f(nodes[k]);
    return sum;
  }
};

namespace detail {

inline QuadratureRule compute_reference_rule(int order) {
  QuadratureRule rule;
  rule.order = order;
  rule.nodes.assign(order, 0.0);
  rule.weights.assign(order, 0.0);
  const int half = (order + 1) / 2;
  for (int i = 0; i < half; ++i) {
    // Largest roots first; Tricomi-style initial guess.
    double x = std::cos(pi * (i + 0.75) / (order + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int n = 1; n < order; ++n) {
        const double p2 = ((2.0 * n + 1.0) * x * p1 - n * p0) / (n + 1.0);
        p0 = p1;
        p1 = p2;
      }
      const double pq = order == 1 ? x : p1;
      const double pqm1 = order == 1 ? 1.0 : p0;
      dp = order * (x * pq - pqm1) / (x * x - 1.0);
      const double dx = pq / dp;
      x -= dx;
      if (std::abs(dx) <= 1e-16 * (1.0 + std::abs(x))) break;
    }
    // Re-evaluate the derivative at the converged root.
    {
      double p0 = 1.0, p1 = x;
      for (int n = 1; n < order; ++n) {
        const double p2 = ((2.0 * n + 1.0) * x * p1 - n * p0) / (n + 1.0);
        p0 = p1;
        p1 = p2;
      }
      const double pq = order == 1 ? x : p1;
      const double pqm1 = order == 1 ? 1.0 : p0;
      dp = order == 1 ? 1.0 : order * (x * pq - pqm1) / (x * x - 1.0);
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[order - 1 - i] = x;
    rule.nodes[i] = -x;
    rule.weights[order - 1 - i] = w;
    rule.weights[i] = w;
  }
  if (order % 2 == 1) rule.nodes[order / 2] = 0.0;
  return rule;
}

}  // namespace detail

/// Cached Gauss-Legendre rule on [-1, 1]. Safe to call concurrently.
inline std::shared_ptr<const QuadratureRule> reference_rule(int order) {
  if (order < 1) throw InvalidArgument("quadrature order must be positive");
  static std::mutex mutex;
  static std::map<int, std::shared_ptr<const QuadratureRule>> cache;
  {
    std::lock_guard lock(mutex);
    if (auto it = cache.find(order); it != cache.end()) return it->second;
  }
  auto rule = std::make_shared<const QuadratureRule>(detail::compute_reference_rule(order));
  std::lock_guard lock(mutex);
  return cache.emplace(order, std::move(rule)).first->second;
}

/// Gauss-Legendre rule with `order` points affinely mapped to [a, b].
inline QuadratureRule gauss_legendre(int order, double a, double b) {
  if (order < 1) throw InvalidArgument("quadrature order must be positive");
  if (!(a < b)) throw InvalidArgument("quadrature interval must satisfy a < b");
  const auto ref = reference_rule(order);
  QuadratureRule rule;
  rule.order = order;
  rule.nodes.resize(order);
  rule.weights.resize(order);
  const double m = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  for (int k = 0; k < order; ++k) {
    rule.nodes[k] = m + h * ref->nodes[k];
    rule.weights[k] = h * ref->weights[k];
  }
  return rule;
}

}  // namespace infdim
