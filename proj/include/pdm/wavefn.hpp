#pragma once

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "pdm/diffop.hpp"
#include "pdm/field.hpp"
#include "pdm/numerics/quadrature.hpp"
#include "pdm/numerics/special.hpp"
#include "pdm/numerics/symeig.hpp"

namespace pdm::wavefn {

using numerics::Jet;

// One bound state of the 2D model in the separated basis.
struct SpectrumEntry {
  int N = 0;
  int n = 0;
  int l = 0;  // 2n + l = N
  double E = 0.0;
  double L_eig = 0.0;  // (l+1)^2 q^2
  int deg = 1;         // floor(N/2) + 1
};

inline double energy_2d(int N, double k, double q) {
  return q * q * (N + 2.0) * (N + 2.0 * k + 1.0);
}
inline double r_eigenvalue(int nu, double k, double q) {
  return q * q * nu * (nu + 2.0 * k);
}

// ---------------------------------------------------------------------------
// axis factories

// Transverse factor: sqrt(2q/pi) cos((l+1) q y) for even l, sin for odd l.
// Normalized on (-pi/2q, pi/2q) in closed form.
inline SmoothField::AxisFn chi_axis(int l, double q) {
  double amp = std::sqrt(2.0 * q / std::numbers::pi);
  double freq = (l + 1) * q;
  bool even = (l % 2 == 0);
  return [amp, freq, even](double y) {
    Jet u = Jet::seed(y) * freq;
    return (even ? numerics::jet_cos(u) : numerics::jet_sin(u)) * amp;
  };
}

// The partner transverse solution that violates the wall conditions:
// sin for even l, cos for odd l (and for l = -1). Unnormalized.
inline SmoothField::AxisFn chibar_axis(int l, double q) {
  double freq = (l + 1) * q;
  bool even_l = (l >= 0) && (l % 2 == 0);
  return [freq, even_l](double y) {
    Jet u = Jet::seed(y) * freq;
    return even_l ? numerics::jet_sin(u) : numerics::jet_cos(u);
  };
}

// Longitudinal factor (unnormalized):
//   (tanh qx)^k (sech qx)^{1+delta} P_n^{(k-1/2, delta)}(1 - 2 tanh^2 qx),
// with delta = l+1 in 2D and the transverse eigenvalue root in 3D.
inline SmoothField::AxisFn phi_axis(int n, double delta, double k, double q,
                                    double scale = 1.0) {
  return [n, delta, k, q, scale](double x) {
    Jet u = Jet::seed(x) * q;
    Jet sh, ch;
    numerics::jet_sinhcosh(u, sh, ch);
    Jet th = sh / ch;
    Jet se = Jet::constant(1.0) / ch;
    Jet arg = Jet::constant(1.0) - th * th * 2.0;
    return numerics::jet_pow(th, k) * numerics::jet_pow(se, 1.0 + delta) *
           numerics::jacobi_P_jet(n, k - 0.5, delta, arg) * scale;
  };
}

// ---------------------------------------------------------------------------
// strip quadrature

// Gauss-Legendre product grid on the strip, with the half-line mapped by
// t = tanh qx (so integer-k integrands become polynomials in t).
struct StripGrid {
  std::vector<double> x, wx;  // includes dx/dt Jacobian
  std::vector<double> y, wy;
};

inline StripGrid make_strip_grid(double q, int nx, int ny) {
  StripGrid g;
  auto tx = numerics::remap(numerics::gauss_legendre(nx), 0.0, 1.0);
  g.x.resize(nx);
  g.wx.resize(nx);
  for (int i = 0; i < nx; ++i) {
    double t = tx.nodes[i];
    g.x[i] = std::atanh(t) / q;
    g.wx[i] = tx.weights[i] / (q * (1.0 - t * t));
  }
  double yb = 0.5 * std::numbers::pi / q;
  auto ty = numerics::remap(numerics::gauss_legendre(ny), -yb, yb);
  g.y = ty.nodes;
  g.wy = ty.weights;
  return g;
}

inline std::vector<double> grid_values(const SmoothField& f, const StripGrid& g) {
  std::vector<double> v(g.x.size() * g.y.size());
  std::size_t idx = 0;
  for (std::size_t i = 0; i < g.x.size(); ++i)
    for (std::size_t j = 0; j < g.y.size(); ++j) v[idx++] = f.value({g.x[i], g.y[j]});
  return v;
}

inline double grid_dot(const StripGrid& g, const std::vector<double>& a,
                       const std::vector<double>& b) {
  double sum = 0.0, comp = 0.0;
  std::size_t idx = 0;
  for (std::size_t i = 0; i < g.x.size(); ++i)
    for (std::size_t j = 0; j < g.y.size(); ++j, ++idx) {
      double term = g.wx[i] * g.wy[j] * a[idx] * b[idx] - comp;
      double t = sum + term;
      comp = (t - sum) - term;
      sum = t;
    }
  return sum;
}

struct StripIntegral {
  double value = 0.0;
  double err_estimate = 0.0;
};

struct StripParams {
  double q = 1.0;
  int nx = 96;
  int ny = 80;
};

// Inner product over the strip with a node-doubling error estimate.
inline StripIntegral integrate_strip(const SmoothField& f, const SmoothField& g,
                                     const StripParams& p) {
  auto g1 = make_strip_grid(p.q, p.nx, p.ny);
  auto g2 = make_strip_grid(p.q, 2 * p.nx, 2 * p.ny);
  double i1 = grid_dot(g1, grid_values(f, g1), grid_values(g, g1));
  double i2 = grid_dot(g2, grid_values(f, g2), grid_values(g, g2));
  StripIntegral out{i2, std::abs(i2 - i1)};
  if (out.err_estimate > 1e-8 * std::max(std::abs(i2), 1.0))
    throw NonConvergent("integrate_strip: node doubling moved the result");
  return out;
}

inline StripIntegral integrate_strip(const SmoothField& f, const StripParams& p) {
  SmoothField one("unit");
  one.add_term(1.0, {axis_one(), axis_one()});
  return integrate_strip(f, one, p);
}

// <f, Op g> over the strip with q, k bound to numbers.
inline StripIntegral matrix_element(const SmoothField& f, const DiffOp& op,
                                    const SmoothField& g, double k, const StripParams& p) {
  return integrate_strip(f, apply_as_field(op, g, p.q, k), p);
}

// Half-line integral of a plain function with the same tanh substitution.
inline double integrate_halfline(const std::function<double(double)>& f, double q, int n) {
  auto tx = numerics::remap(numerics::gauss_legendre(n), 0.0, 1.0);
  double sum = 0.0, comp = 0.0;
  for (int i = 0; i < n; ++i) {
    double t = tx.nodes[i];
    double term = tx.weights[i] / (q * (1.0 - t * t)) * f(std::atanh(t) / q) - comp;
    double s2 = sum + term;
    comp = (s2 - sum) - term;
    sum = s2;
  }
  return sum;
}

// ---------------------------------------------------------------------------
// eigenfunctions

inline void check_kq(double k, double q) {
  if (!(k > 0.0) || !(q > 0.0)) throw InvalidParam("wavefn: requires k > 0 and q > 0");
}

inline SmoothField chi_l(int l, double q) {
  if (l < 0) throw InvalidParam("chi_l: l must be >= 0");
  SmoothField f("chi(" + std::to_string(l) + ")");
  f.add_term(1.0, {axis_one(), chi_axis(l, q)});
  return f;
}

inline SmoothField chibar_l(int l, double q) {
  if (l < -1) throw InvalidParam("chibar_l: l must be >= -1");
  SmoothField f("chibar(" + std::to_string(l) + ")", /*physical=*/false);
  f.add_term(1.0, {axis_one(), chibar_axis(l, q)});
  return f;
}

// Quadrature norm of the longitudinal factor (the only normalization
// source used at runtime; closed forms serve as oracles in tests).
inline double phi_norm_quadrature(int n, double delta, double k, double q, int nodes = 200) {
  auto raw = phi_axis(n, delta, k, q);
  double I = integrate_halfline(
      [&raw](double x) {
        double v = raw(x).value();
        return v * v;
      },
      q, nodes);
  return 1.0 / std::sqrt(I);
}

// Closed-form longitudinal norm, via log-gamma. Used as a cross-check.
inline double phi_norm_closed(int n, double delta, double k, double q) {
  using numerics::log_gamma;
  double lg = std::log(2.0 * q * (2.0 * n + k + 0.5 + delta)) + log_gamma(n + 1.0) +
              log_gamma(n + k + 0.5 + delta) - log_gamma(n + 1.0 + delta) -
              log_gamma(n + k + 0.5);
  return std::exp(0.5 * lg);
}

// Normalized product eigenfunction psi_{n,l} = phi_{n,l}(x) chi_l(y).
inline SmoothField psi_nl(int n, int l, double k, double q) {
  check_kq(k, q);
  if (n < 0 || l < 0) throw InvalidParam("psi_nl: n and l must be >= 0");
  double delta = l + 1.0;
  double norm = phi_norm_quadrature(n, delta, k, q);
  SmoothField f("psi(" + std::to_string(n) + "," + std::to_string(l) + ")");
  f.add_term(1.0, {phi_axis(n, delta, k, q, norm), chi_axis(l, q)});
  return f;
}

enum class ZeroModeKind { eta, etabar };

// Zero modes of the intertwining pair:
//   etabar annihilates (tanh)^k (sech)^{s+1} (sin qy)^s  -- never physical;
//   eta    annihilates (tanh)^k (sech)^{s+1} (cos qy)^s  -- physical for s > 0.
inline SmoothField omega_zero_mode(ZeroModeKind kind, double s, double k, double q) {
  check_kq(k, q);
  bool physical = (kind == ZeroModeKind::eta) && (s > 0.0);
  std::string tag = (kind == ZeroModeKind::eta ? "omega(" : "omegabar(") + std::to_string(s) + ")";
  SmoothField f(tag, physical);
  bool integral_s = (s >= 0.0) && (std::floor(s) == s);
  bool sin_kind = (kind == ZeroModeKind::etabar);
  SmoothField::AxisFn fy = [s, q, integral_s, sin_kind](double y) {
    Jet u = Jet::seed(y) * q;
    Jet base = sin_kind ? numerics::jet_sin(u) : numerics::jet_cos(u);
    return integral_s ? numerics::jet_powi(base, static_cast<int>(s))
                      : numerics::jet_pow(base, s);
  };
  SmoothField::AxisFn fx = [s, k, q](double x) {
    Jet u = Jet::seed(x) * q;
    Jet sh, ch;
    numerics::jet_sinhcosh(u, sh, ch);
    return numerics::jet_pow(sh / ch, k) * numerics::jet_pow(Jet::constant(1.0) / ch, s + 1.0);
  };
  f.add_term(1.0, {fx, fy});
  return f;
}

// ---------------------------------------------------------------------------
// boundary suite

struct BoundaryReport {
  double sup_norm = 0.0;       // interior sample sup
  double max_boundary = 0.0;   // largest |value| over boundary samples
  bool passes = false;         // max_boundary <= 1e-12 * sup_norm
};

inline BoundaryReport boundary_report(const SmoothField& f, double q, int samples = 100) {
  BoundaryReport r;
  double yb = 0.5 * std::numbers::pi / q;
  int side = samples / 3 + 1;
  for (int i = 1; i <= 20; ++i)
    for (int j = 1; j <= 20; ++j) {
      double x = 6.0 * i / (21.0 * q), y = yb * (2.0 * j / 21.0 - 1.0);
      r.sup_norm = std::max(r.sup_norm, std::abs(f.value({x, y})));
    }
  for (int i = 0; i < side; ++i) {
    double y = yb * (2.0 * (i + 0.5) / side - 1.0);
    r.max_boundary = std::max(r.max_boundary, std::abs(f.value({0.0, y})));
    double x = 6.0 * (i + 0.5) / (side * q);
    r.max_boundary = std::max(r.max_boundary, std::abs(f.value({x, yb})));
    r.max_boundary = std::max(r.max_boundary, std::abs(f.value({x, -yb})));
  }
  r.passes = r.max_boundary <= 1e-12 * r.sup_norm;
  return r;
}

// ---------------------------------------------------------------------------
// second basis (H, R simultaneous) by diagonalizing R on the level space

struct SecondBasisEntry {
  int nu = 0;
  double r_numeric = 0.0;            // quadrature eigenvalue of R
  std::vector<double> coeffs;        // expansion in the psi basis of the level
  SmoothField field;
};

struct SecondBasis {
  int N = 0;
  std::vector<std::pair<int, int>> basis_nl;  // (n, l), lexicographic
  std::vector<SecondBasisEntry> entries;      // ascending nu
};

inline std::vector<std::pair<int, int>> level_states(int N) {
  std::vector<std::pair<int, int>> out;
  for (int n = 0; 2 * n <= N; ++n) out.push_back({n, N - 2 * n});
  return out;
}

inline SecondBasis second_basis(int N, double k, double q, const DiffOp& R,
                                const StripParams& pars) {
  check_kq(k, q);
  if (N < 0) throw InvalidParam("second_basis: N must be >= 0");
  SecondBasis sb;
  sb.N = N;
  sb.basis_nl = level_states(N);
  const int d = static_cast<int>(sb.basis_nl.size());

  std::vector<SmoothField> psis;
  psis.reserve(d);
  for (auto [n, l] : sb.basis_nl) psis.push_back(psi_nl(n, l, k, q));

  // grid follows the function's q; pars contributes the node counts
  auto grid = make_strip_grid(q, pars.nx, pars.ny);
  std::vector<std::vector<double>> vals(d), rvals(d);
  for (int i = 0; i < d; ++i) {
    vals[i] = grid_values(psis[i], grid);
    rvals[i] = grid_values(apply_as_field(R, psis[i], q, k), grid);
  }
  std::vector<std::vector<double>> G(d, std::vector<double>(d)), M(d, std::vector<double>(d));
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      G[i][j] = grid_dot(grid, vals[i], vals[j]);
      M[i][j] = grid_dot(grid, vals[i], rvals[j]);
    }
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j) {
      double s = 0.5 * (M[i][j] + M[j][i]);
      M[i][j] = M[j][i] = s;
    }

  auto ge = numerics::sym_eigen(G);
  if (!(ge.values[0] > 0.0) || ge.values[d - 1] / ge.values[0] > 1e8)
    throw DegenerateGram("second_basis: Gram matrix is ill conditioned");

  // G^{-1/2} M G^{-1/2}
  std::vector<std::vector<double>> S(d, std::vector<double>(d, 0.0));
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int a = 0; a < d; ++a)
        S[i][j] += ge.vectors[a][i] * ge.vectors[a][j] / std::sqrt(ge.values[a]);
  auto matmul = [d](const std::vector<std::vector<double>>& A,
                    const std::vector<std::vector<double>>& B) {
    std::vector<std::vector<double>> C(d, std::vector<double>(d, 0.0));
    for (int i = 0; i < d; ++i)
      for (int a = 0; a < d; ++a)
        for (int j = 0; j < d; ++j) C[i][j] += A[i][a] * B[a][j];
    return C;
  };
  auto Mt = matmul(S, matmul(M, S));
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j) {
      double s = 0.5 * (Mt[i][j] + Mt[j][i]);
      Mt[i][j] = Mt[j][i] = s;
    }
  auto me = numerics::sym_eigen(Mt);

  for (int a = 0; a < d; ++a) {
    SecondBasisEntry e;
    e.r_numeric = me.values[a];
    // identify nu from r_nu = q^2 nu (nu + 2k)
    int best_nu = N % 2;
    double best = 1e300;
    for (int nu = N % 2; nu <= N; nu += 2) {
      double diff = std::abs(me.values[a] - r_eigenvalue(nu, k, q));
      if (diff < best) {
        best = diff;
        best_nu = nu;
      }
    }
    e.nu = best_nu;
    e.coeffs.resize(d);
    for (int i = 0; i < d; ++i) {
      double c = 0.0;
      for (int b = 0; b < d; ++b) c += S[i][b] * me.vectors[a][b];
      e.coeffs[i] = c;
    }
    // sign convention: positive overlap with the lexicographically first
    // basis state that sees this vector
    double w0 = 0.0;
    for (int i = 0; i < d && std::abs(w0) < 1e-8; ++i) {
      w0 = 0.0;
      for (int j = 0; j < d; ++j) w0 += G[i][j] * e.coeffs[j];
    }
    if (w0 < 0.0)
      for (auto& c : e.coeffs) c = -c;
    SmoothField F("Psi(" + std::to_string(N) + "," + std::to_string(N - e.nu) + ")");
    for (int i = 0; i < d; ++i) {
      SmoothField part = psis[i].scaled(e.coeffs[i]);
      for (const auto& t : part.field_terms()) F.add_term(t);
    }
    e.field = std::move(F);
    sb.entries.push_back(std::move(e));
  }
  std::stable_sort(sb.entries.begin(), sb.entries.end(),
                   [](const SecondBasisEntry& a, const SecondBasisEntry& b) {
                     return a.nu < b.nu;
                   });
  return sb;
}

// ---------------------------------------------------------------------------
// 2D spectrum enumeration

inline std::vector<SpectrumEntry> spectrum2d(int count, double k, double q) {
  check_kq(k, q);
  if (count < 1) throw InvalidParam("spectrum2d: count must be >= 1");
  std::vector<SpectrumEntry> out;
  for (int N = 0; static_cast<int>(out.size()) < count; ++N) {
    for (auto [n, l] : level_states(N)) {
      SpectrumEntry e;
      e.N = N;
      e.n = n;
      e.l = l;
      e.E = energy_2d(N, k, q);
      e.L_eig = (l + 1.0) * (l + 1.0) * q * q;
      e.deg = N / 2 + 1;
      out.push_back(e);
      if (static_cast<int>(out.size()) == count) break;
    }
  }
  return out;
}

}  // namespace pdm::wavefn
