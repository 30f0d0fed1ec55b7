#pragma once

#include <array>
#include <cmath>

#include "pdm/errors.hpp"

namespace pdm::numerics {

// Truncated Taylor series of a univariate function at a point, up to
// derivative order kJetOrder. Coefficients are Taylor coefficients
// (f^(i)/i!), which keeps the recurrences well conditioned.
inline constexpr int kJetOrder = 6;

struct Jet {
  std::array<double, kJetOrder + 1> c{};

  static Jet constant(double v) {
    Jet j;
    j.c[0] = v;
    return j;
  }
  // The identity function at x0.
  static Jet seed(double x0) {
    Jet j;
    j.c[0] = x0;
    j.c[1] = 1.0;
    return j;
  }

  double value() const { return c[0]; }
  double deriv(int i) const {
    double f = 1.0;
    for (int r = 2; r <= i; ++r) f *= r;
    return c[i] * f;
  }

  friend Jet operator+(const Jet& a, const Jet& b) {
    Jet r;
    for (int i = 0; i <= kJetOrder; ++i) r.c[i] = a.c[i] + b.c[i];
    return r;
  }
  friend Jet operator-(const Jet& a, const Jet& b) {
    Jet r;
    for (int i = 0; i <= kJetOrder; ++i) r.c[i] = a.c[i] - b.c[i];
    return r;
  }
  Jet operator-() const {
    Jet r;
    for (int i = 0; i <= kJetOrder; ++i) r.c[i] = -c[i];
    return r;
  }
  friend Jet operator*(const Jet& a, const Jet& b) {
    Jet r;
    for (int i = 0; i <= kJetOrder; ++i)
      for (int j = 0; i + j <= kJetOrder; ++j) r.c[i + j] += a.c[i] * b.c[j];
    return r;
  }
  friend Jet operator*(const Jet& a, double s) {
    Jet r;
    for (int i = 0; i <= kJetOrder; ++i) r.c[i] = a.c[i] * s;
    return r;
  }
  friend Jet operator*(double s, const Jet& a) { return a * s; }
  friend Jet operator+(const Jet& a, double s) {
    Jet r = a;
    r.c[0] += s;
    return r;
  }
  friend Jet operator-(const Jet& a, double s) { return a + (-s); }

  friend Jet operator/(const Jet& a, const Jet& b) {
    Jet r;
    r.c[0] = a.c[0] / b.c[0];
    for (int n = 1; n <= kJetOrder; ++n) {
      double s = a.c[n];
      for (int i = 1; i <= n; ++i) s -= b.c[i] * r.c[n - i];
      r.c[n] = s / b.c[0];
    }
    return r;
  }
};

// sin/cos of a jet argument via the coupled first-order recurrence.
inline void jet_sincos(const Jet& u, Jet& s, Jet& c) {
  s.c.fill(0.0);
  c.c.fill(0.0);
  s.c[0] = std::sin(u.c[0]);
  c.c[0] = std::cos(u.c[0]);
  for (int n = 0; n < kJetOrder; ++n) {
    double ds = 0.0, dc = 0.0;
    for (int i = 0; i <= n; ++i) {
      ds += (i + 1) * u.c[i + 1] * c.c[n - i];
      dc += (i + 1) * u.c[i + 1] * s.c[n - i];
    }
    s.c[n + 1] = ds / (n + 1);
    c.c[n + 1] = -dc / (n + 1);
  }
}

inline void jet_sinhcosh(const Jet& u, Jet& s, Jet& c) {
  s.c.fill(0.0);
  c.c.fill(0.0);
  s.c[0] = std::sinh(u.c[0]);
  c.c[0] = std::cosh(u.c[0]);
  for (int n = 0; n < kJetOrder; ++n) {
    double ds = 0.0, dc = 0.0;
    for (int i = 0; i <= n; ++i) {
      ds += (i + 1) * u.c[i + 1] * c.c[n - i];
      dc += (i + 1) * u.c[i + 1] * s.c[n - i];
    }
    s.c[n + 1] = ds / (n + 1);
    c.c[n + 1] = dc / (n + 1);
  }
}

inline Jet jet_sin(const Jet& u) {
  Jet s, c;
  jet_sincos(u, s, c);
  return s;
}
inline Jet jet_cos(const Jet& u) {
  Jet s, c;
  jet_sincos(u, s, c);
  return c;
}
inline Jet jet_sinh(const Jet& u) {
  Jet s, c;
  jet_sinhcosh(u, s, c);
  return s;
}
inline Jet jet_cosh(const Jet& u) {
  Jet s, c;
  jet_sinhcosh(u, s, c);
  return c;
}
inline Jet jet_tanh(const Jet& u) {
  Jet s, c;
  jet_sinhcosh(u, s, c);
  return s / c;
}
inline Jet jet_sech(const Jet& u) { return Jet::constant(1.0) / jet_cosh(u); }

inline Jet jet_exp(const Jet& u) {
  Jet e;
  e.c[0] = std::exp(u.c[0]);
  for (int n = 0; n < kJetOrder; ++n) {
    double d = 0.0;
    for (int i = 0; i <= n; ++i) d += (i + 1) * u.c[i + 1] * e.c[n - i];
    e.c[n + 1] = d / (n + 1);
  }
  return e;
}

// u^alpha for real alpha; requires u > 0. From g' u = alpha u' g.
inline Jet jet_pow(const Jet& u, double alpha) {
  Jet g;
  g.c[0] = std::pow(u.c[0], alpha);
  for (int n = 0; n < kJetOrder; ++n) {
    double lhs = 0.0;
    for (int i = 0; i <= n; ++i) lhs += alpha * (i + 1) * u.c[i + 1] * g.c[n - i];
    for (int i = 1; i <= n; ++i) lhs -= i * g.c[i] * u.c[n + 1 - i];
    g.c[n + 1] = lhs / ((n + 1) * u.c[0]);
  }
  return g;
}

// Integer power; supports negative exponents away from zeros of u.
inline Jet jet_powi(const Jet& u, int e) {
  if (e < 0) return Jet::constant(1.0) / jet_powi(u, -e);
  Jet r = Jet::constant(1.0);
  Jet base = u;
  while (e > 0) {
    if (e & 1) r = r * base;
    if (e > 1) base = base * base;
    e >>= 1;
  }
  return r;
}

// Jet of the i-th derivative of the function described by `j`.
// Valid Taylor orders shrink by i; the caller tracks the budget.
inline Jet jet_derivative(const Jet& j, int i) {
  if (i == 0) return j;
  Jet r;
  for (int n = 0; n + i <= kJetOrder; ++n) {
    double f = 1.0;
    for (int r2 = n + 1; r2 <= n + i; ++r2) f *= r2;
    r.c[n] = j.c[n + i] * f;
  }
  return r;
}

}  // namespace pdm::numerics
