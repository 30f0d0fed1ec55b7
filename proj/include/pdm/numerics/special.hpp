#pragma once

#include <cmath>
#include <vector>

#include "pdm/errors.hpp"
#include "pdm/numerics/jet.hpp"

namespace pdm::numerics {

// Jacobi polynomial P_n^{(a,b)}(z) by the standard three-term recurrence.
// Real parameters a, b > -1 are supported (the transverse index of the
// 3D channels is irrational).
inline double jacobi_P(int n, double a, double b, double z) {
  if (n < 0) throw InvalidParam("jacobi_P: n must be >= 0");
  if (a <= -1.0 || b <= -1.0) throw InvalidParam("jacobi_P: parameters must exceed -1");
  double p0 = 1.0;
  if (n == 0) return p0;
  double p1 = (a + 1.0) + 0.5 * (a + b + 2.0) * (z - 1.0);
  for (int m = 2; m <= n; ++m) {
    double c1 = 2.0 * m * (m + a + b) * (2.0 * m + a + b - 2.0);
    double c2 = (2.0 * m + a + b - 1.0) * (2.0 * m + a + b) * (2.0 * m + a + b - 2.0);
    double c3 = (2.0 * m + a + b - 1.0) * (a * a - b * b);
    double c4 = 2.0 * (m + a - 1.0) * (m + b - 1.0) * (2.0 * m + a + b);
    double p2 = ((c2 * z + c3) * p1 - c4 * p0) / c1;
    p0 = p1;
    p1 = p2;
  }
  return p1;
}

inline Jet jacobi_P_jet(int n, double a, double b, const Jet& z) {
  if (n < 0) throw InvalidParam("jacobi_P: n must be >= 0");
  if (a <= -1.0 || b <= -1.0) throw InvalidParam("jacobi_P: parameters must exceed -1");
  Jet p0 = Jet::constant(1.0);
  if (n == 0) return p0;
  Jet p1 = (z - 1.0) * (0.5 * (a + b + 2.0)) + Jet::constant(a + 1.0);
  for (int m = 2; m <= n; ++m) {
    double c1 = 2.0 * m * (m + a + b) * (2.0 * m + a + b - 2.0);
    double c2 = (2.0 * m + a + b - 1.0) * (2.0 * m + a + b) * (2.0 * m + a + b - 2.0);
    double c3 = (2.0 * m + a + b - 1.0) * (a * a - b * b);
    double c4 = 2.0 * (m + a - 1.0) * (m + b - 1.0) * (2.0 * m + a + b);
    Jet p2 = ((z * c2 + c3) * p1 - p0 * c4) * (1.0 / c1);
    p0 = p1;
    p1 = p2;
  }
  return p1;
}

// log Gamma(x) for x > 0, Lanczos approximation (g = 7, 9 terms).
inline double log_gamma(double x) {
  if (!(x > 0.0)) throw InvalidParam("log_gamma: requires x > 0");
  static const double coef[9] = {
      0.99999999999980993,  676.5203681218851,   -1259.1392167224028,
      771.32342877765313,   -176.61502916214059, 12.507343278686905,
      -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};
  if (x < 0.5) {
    // reflection; not needed by the models but keeps the function total on (0,1)
    const double pi = 3.14159265358979323846;
    return std::log(pi / std::sin(pi * x)) - log_gamma(1.0 - x);
  }
  double z = x - 1.0;
  double acc = coef[0];
  for (int i = 1; i < 9; ++i) acc += coef[i] / (z + i);
  double t = z + 7.5;
  const double log_sqrt_2pi = 0.91893853320467274178;
  return log_sqrt_2pi + (z + 0.5) * std::log(t) - t + std::log(acc);
}

namespace detail {

// Backward (Miller) recurrence giving J_0..J_top at fixed z, normalized by
// J_0 + 2 sum J_2j = 1. Accurate to ~1e-14 absolute for z <= 100.
inline std::vector<double> bessel_row(int top, double z) {
  if (z == 0.0) {
    std::vector<double> r(top + 1, 0.0);
    r[0] = 1.0;
    return r;
  }
  int start = top + 20 + static_cast<int>(1.4 * z);
  std::vector<double> v(start + 2, 0.0);
  v[start + 1] = 0.0;
  v[start] = 1e-300;
  for (int n = start; n >= 1; --n) {
    v[n - 1] = (2.0 * n / z) * v[n] - v[n + 1];
    if (std::abs(v[n - 1]) > 1e280) {
      for (int m = n - 1; m <= start + 1; ++m) v[m] *= 1e-280;
    }
  }
  double norm = v[0];
  for (int n = 2; n <= start; n += 2) norm += 2.0 * v[n];
  std::vector<double> out(top + 1);
  for (int n = 0; n <= top; ++n) out[n] = v[n] / norm;
  return out;
}

inline double bessel_series(int m, double z) {
  // ascending series; used for small z where it converges without
  // cancellation
  double zh = 0.5 * z;
  double term = 1.0;
  for (int i = 1; i <= m; ++i) term *= zh / i;
  double sum = term;
  double z2 = -zh * zh;
  for (int j = 1; j < 60; ++j) {
    term *= z2 / (j * (m + j));
    sum += term;
    if (std::abs(term) < 1e-18 * (std::abs(sum) + 1e-300)) break;
  }
  return sum;
}

}  // namespace detail

inline double bessel_J(int m, double z) {
  if (m < 0 || z < 0.0) throw InvalidParam("bessel_J: requires m >= 0, z >= 0");
  if (z < 2.0 + 0.5 * m) return detail::bessel_series(m, z);
  return detail::bessel_row(m, z)[m];
}

inline double bessel_J_prime(int m, double z) {
  if (m == 0) return -bessel_J(1, z);
  return bessel_J(m - 1, z) - (m / z) * bessel_J(m, z);
}

// s-th positive zero of J_m: McMahon asymptotic guess, then bisection on a
// guaranteed sign-changing bracket followed by Newton polishing.
inline double bessel_zero(int m, int s) {
  if (m < 0 || s < 1) throw InvalidParam("bessel_zero: requires m >= 0, s >= 1");
  const double pi = 3.14159265358979323846;
  double beta = (s + 0.5 * m - 0.25) * pi;
  double mu = 4.0 * m * m;
  double guess = beta - (mu - 1.0) / (8.0 * beta) -
                 4.0 * (mu - 1.0) * (7.0 * mu - 31.0) / (3.0 * std::pow(8.0 * beta, 3));
  double lo = guess - 0.5 * pi, hi = guess + 0.5 * pi;
  if (lo <= 0.0) lo = 1e-8;
  double flo = bessel_J(m, lo), fhi = bessel_J(m, hi);
  int expand = 0;
  while (flo * fhi > 0.0) {
    lo = std::max(1e-8, lo - 0.25 * pi);
    hi += 0.25 * pi;
    flo = bessel_J(m, lo);
    fhi = bessel_J(m, hi);
    if (++expand > 8) throw BesselZeroNotFound("bessel_zero: bracketing failed");
  }
  for (int it = 0; it < 80; ++it) {
    double mid = 0.5 * (lo + hi);
    double fm = bessel_J(m, mid);
    if (flo * fm <= 0.0) {
      hi = mid;
      fhi = fm;
    } else {
      lo = mid;
      flo = fm;
    }
    if (hi - lo < 1e-10) break;
  }
  double x = 0.5 * (lo + hi);
  for (int it = 0; it < 6; ++it) {
    double f = bessel_J(m, x), fp = bessel_J_prime(m, x);
    double step = f / fp;
    x -= step;
    if (std::abs(step) < 1e-15 * x) break;
  }
  return x;
}

// Jet of J_m at z: d^r/dz^r J_m = 2^{-r} sum_i (-1)^i C(r,i) J_{m-r+2i},
// with J_{-n} = (-1)^n J_n.
inline Jet bessel_J_jet(int m, double z) {
  int top = m + kJetOrder;
  std::vector<double> row =
      (z < 2.0 + 0.5 * top) ? std::vector<double>() : detail::bessel_row(top, z);
  auto J = [&](int n) {
    int idx = n < 0 ? -n : n;
    double sign = (n < 0 && (idx & 1)) ? -1.0 : 1.0;
    double val = row.empty() ? detail::bessel_series(idx, z) : row[idx];
    return sign * val;
  };
  Jet out;
  double fact = 1.0;
  for (int r = 0; r <= kJetOrder; ++r) {
    if (r > 0) fact *= r;
    double dr = 0.0, binom = 1.0;
    for (int i = 0; i <= r; ++i) {
      dr += ((i & 1) ? -1.0 : 1.0) * binom * J(m - r + 2 * i);
      binom = binom * (r - i) / (i + 1.0);
    }
    out.c[r] = dr / (std::pow(2.0, r) * fact);
  }
  return out;
}

}  // namespace pdm::numerics
