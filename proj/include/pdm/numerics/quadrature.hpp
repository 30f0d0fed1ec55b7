#pragma once

#include <cmath>
#include <functional>
#include <vector>

#include "pdm/errors.hpp"

namespace pdm::numerics {

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
  double lo = -1.0;
  double hi = 1.0;

  double weight_sum() const {
    double s = 0.0;
    for (double w : weights) s += w;
    return s;
  }
};

// Gauss-Legendre nodes and weights on (-1,1) by Newton iteration on the
// Legendre recurrence. Nodes are accurate to ~1e-15 for n <= 512.
inline QuadratureRule gauss_legendre(int n) {
  if (n < 1 || n > 512) throw InvalidParam("gauss_legendre: n must be in [1,512]");
  QuadratureRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const double pi = 3.14159265358979323846;
  int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    double x = std::cos(pi * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int j = 2; j <= n; ++j) {
        double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      pp = n * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    double w = 2.0 / ((1.0 - x * x) * pp * pp);
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

inline QuadratureRule remap(const QuadratureRule& base, double lo, double hi) {
  QuadratureRule r = base;
  double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
  for (std::size_t i = 0; i < r.nodes.size(); ++i) {
    r.nodes[i] = mid + half * base.nodes[i];
    r.weights[i] = half * base.weights[i];
  }
  r.lo = lo;
  r.hi = hi;
  return r;
}

// Deterministic compensated sum over the rule's nodes.
inline double integrate(const QuadratureRule& rule, const std::function<double(double)>& f) {
  double sum = 0.0, comp = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    double term = rule.weights[i] * f(rule.nodes[i]) - comp;
    double t = sum + term;
    comp = (t - sum) - term;
    sum = t;
  }
  return sum;
}

}  // namespace pdm::numerics
