#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "pdm/errors.hpp"

namespace pdm::numerics {

// Symmetric tridiagonal matrix: diag[i], off[i] couples i and i+1.
struct Tridiagonal {
  std::vector<double> diag;
  std::vector<double> off;
};

namespace detail {

// Number of eigenvalues strictly below lambda (Sturm count via the
// shifted LDL^T recurrence).
inline int sturm_count(const Tridiagonal& t, double lambda) {
  int n = static_cast<int>(t.diag.size());
  int cnt = 0;
  double d = 1.0;
  for (int i = 0; i < n; ++i) {
    double offsq = (i == 0) ? 0.0 : t.off[i - 1] * t.off[i - 1];
    d = t.diag[i] - lambda - offsq / d;
    if (d == 0.0) d = -1e-300;
    if (d < 0.0) ++cnt;
  }
  return cnt;
}

}  // namespace detail

// m lowest eigenvalues of a symmetric tridiagonal matrix by Sturm
// bisection. Deterministic, no external dependencies, O(m n log(1/tol)).
inline std::vector<double> lowest_eigenvalues(const Tridiagonal& t, int m) {
  int n = static_cast<int>(t.diag.size());
  if (m < 1 || m > n) throw InvalidParam("lowest_eigenvalues: bad count");
  double lo = t.diag[0], hi = t.diag[0];
  for (int i = 0; i < n; ++i) {
    double r = (i > 0 ? std::abs(t.off[i - 1]) : 0.0) + (i + 1 < n ? std::abs(t.off[i]) : 0.0);
    lo = std::min(lo, t.diag[i] - r);
    hi = std::max(hi, t.diag[i] + r);
  }
  std::vector<double> out(m);
  for (int j = 0; j < m; ++j) {
    double a = lo, b = hi;
    // tolerance is relative to the eigenvalue, not the (possibly huge)
    // Gershgorin span
    for (int it = 0;
         it < 220 && (b - a) > 1e-13 * std::max({std::abs(a), std::abs(b), 1.0}); ++it) {
      double mid = 0.5 * (a + b);
      if (detail::sturm_count(t, mid) >= j + 1)
        b = mid;
      else
        a = mid;
    }
    out[j] = 0.5 * (a + b);
  }
  return out;
}

// Conservative second-order discretization of
//   -(d/dx) c(x) (d/dx) u + w(x) u  on (0, X_max), Dirichlet ends,
// with midpoint coefficients keeping the matrix symmetric.
struct FDOperator1D {
  double h = 0.0;
  Tridiagonal matrix;

  template <typename CFn, typename WFn>
  static FDOperator1D build(const CFn& c, const WFn& w, double x_max, int nodes) {
    if (nodes < 2) throw InvalidParam("FDOperator1D: needs at least 2 interior nodes");
    FDOperator1D op;
    op.h = x_max / (nodes + 1);
    op.matrix.diag.resize(nodes);
    op.matrix.off.resize(nodes - 1);
    double inv_h2 = 1.0 / (op.h * op.h);
    for (int i = 0; i < nodes; ++i) {
      double x = (i + 1) * op.h;
      double cm = c(x - 0.5 * op.h), cp = c(x + 0.5 * op.h);
      op.matrix.diag[i] = (cm + cp) * inv_h2 + w(x);
      if (i + 1 < nodes) op.matrix.off[i] = -cp * inv_h2;
    }
    return op;
  }
};

struct FDResult {
  std::vector<double> eigenvalues;  // Richardson-extrapolated, lowest first
  std::vector<double> raw_coarse;   // grid h
  std::vector<double> raw_fine;     // grid h/2
};

// Independent spectral cross-check of the separated x-problem:
//   -(cosh^2 qx u')' + (dprime^2 - 1) q^2 cosh^2(qx) u + q^2 k(k-1) csch^2(qx) u,
// where dprime is the transverse eigenvalue index (l+1 in 2D, delta in 3D).
// Richardson extrapolation over grids h and h/2 removes the leading O(h^2)
// truncation error.
inline FDResult fd_cross_check(double dprime, double k, double q, double x_max, int nodes,
                               int count = 3, bool check_truncation = true) {
  if (nodes < 200) throw InvalidParam("fd_cross_check: needs >= 200 nodes");
  if (!(q > 0.0)) throw InvalidParam("fd_cross_check: q must be positive");
  auto c = [q](double x) {
    double ch = std::cosh(q * x);
    return ch * ch;
  };
  auto w = [q, k, dprime](double x) {
    double ch = std::cosh(q * x), sh = std::sinh(q * x);
    return (dprime * dprime - 1.0) * q * q * ch * ch + q * q * k * (k - 1.0) / (sh * sh);
  };
  auto solve = [&](double xm, int n) {
    return lowest_eigenvalues(FDOperator1D::build(c, w, xm, n).matrix, count);
  };
  FDResult r;
  r.raw_coarse = solve(x_max, nodes);
  r.raw_fine = solve(x_max, 2 * nodes + 1);  // exactly h/2
  r.eigenvalues.resize(count);
  for (int i = 0; i < count; ++i)
    r.eigenvalues[i] = (4.0 * r.raw_fine[i] - r.raw_coarse[i]) / 3.0;
  if (check_truncation) {
    // doubled domain at identical grid spacing isolates the cutoff error
    auto wide = solve(2.0 * x_max, 2 * nodes + 1);
    for (int i = 0; i < count; ++i) {
      double rel = std::abs(wide[i] - r.raw_coarse[i]) /
                   std::max(std::abs(r.raw_coarse[i]), 1e-30);
      if (rel > 1e-4)
        throw TruncationTooSmall("fd_cross_check: eigenvalues shift when X_max doubles");
    }
  }
  return r;
}

}  // namespace pdm::numerics
