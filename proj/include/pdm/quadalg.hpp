#pragma once

#include <array>
#include <set>
#include <cmath>
#include <string>
#include <vector>

#include "pdm/model2d.hpp"
#include "pdm/wavefn.hpp"

namespace pdm::quadalg {

// Five-variable polynomials host every symbolic object of this module:
// the layer parameters, the energy (central element), and the deformed
// oscillator arguments.
using Poly5 = Poly<5>;
inline constexpr int V5_Q = 0;
inline constexpr int V5_K = 1;
inline constexpr int V5_E = 2;
inline constexpr int V5_X = 3;
inline constexpr int V5_U = 4;
using RationalFn5 = RationalFn<5>;

// (q, k, H) polynomials for operator-valued coefficients.
using Poly3 = Poly<3>;
inline constexpr int V3_H = 2;

inline Poly5 p5(const ScalarPoly& s) {
  Poly5 out;
  for (const auto& [key, c] : s.terms()) out.add_term({key[0], key[1], 0, 0, 0}, c);
  return out;
}
inline Poly3 p3(const ScalarPoly& s) {
  Poly3 out;
  for (const auto& [key, c] : s.terms()) out.add_term({key[0], key[1], 0}, c);
  return out;
}
inline Poly5 p5_const(long long n, long long d = 1) { return Poly5::constant(Rational(n, d)); }
inline Poly5 p5_var(int v) { return Poly5::variable(v); }

// ---------------------------------------------------------------------------
// exact linear matching of an operator against a basis

// Solves lhs = sum_t c_t(q,k) basis[t] with polynomial coefficients of
// bounded degree, by exact rational elimination over the flat coordinates
// (derivative orders, ring monomial, q-power, k-power). Throws NoMatch if
// the system is inconsistent or the residual re-expansion is nonzero.
inline std::vector<ScalarPoly> match_linear_combination(const DiffOp& lhs,
                                                        const std::vector<DiffOp>& basis,
                                                        int dq = 6, int dk = 2) {
  struct FlatKey {
    int i, j;
    TrigKey trig;
    int eq, ek;
    auto operator<=>(const FlatKey&) const = default;
  };
  using Row = std::map<int, Rational>;
  const int T = static_cast<int>(basis.size());
  const int per = (dq + 1) * (dk + 1);
  auto col_of = [&](int t, int r, int s) { return (t * (dq + 1) + r) * (dk + 1) + s; };

  std::map<FlatKey, Row> rows;
  std::map<FlatKey, Rational> rhs;
  std::set<int> cols_present;
  for (int t = 0; t < T; ++t)
    for (const auto& [ij, cp] : basis[t].terms())
      for (const auto& [trig, sc] : cp.terms())
        for (const auto& [pw, c] : sc.terms())
          for (int r = 0; r <= dq; ++r)
            for (int s = 0; s <= dk; ++s) {
              int col = col_of(t, r, s);
              cols_present.insert(col);
              rows[{ij.first, ij.second, trig, pw[0] + r, pw[1] + s}][col] += c;
            }
  for (const auto& [ij, cp] : lhs.terms())
    for (const auto& [trig, sc] : cp.terms())
      for (const auto& [pw, c] : sc.terms())
        rhs[{ij.first, ij.second, trig, pw[0], pw[1]}] += c;

  // Forward elimination, pivot rows keyed by leading column. Rows beyond
  // the point where every appearing column is pinned are skipped: the
  // exact re-expansion below certifies them anyway.
  struct PivotRow {
    std::vector<std::pair<int, Rational>> cols;  // sorted, excludes lead
    Rational r;
  };
  std::map<int, PivotRow> pivots;
  for (const auto& [key, c] : rhs)
    if (!rows.count(key)) rows[key] = {};
  for (auto& [key, row0] : rows) {
    if (pivots.size() == cols_present.size()) break;
    Row row;
    for (const auto& [c, v] : row0)
      if (!v.is_zero()) row[c] = v;
    Rational b = rhs.count(key) ? rhs.at(key) : Rational(0);
    while (!row.empty()) {
      auto lead = row.begin();
      if (lead->second.is_zero()) {
        row.erase(lead);
        continue;
      }
      auto p = pivots.find(lead->first);
      if (p == pivots.end()) break;
      Rational f = lead->second;
      row.erase(lead);
      for (const auto& [c, v] : p->second.cols) {
        auto [it, ins] = row.emplace(c, Rational(0));
        it->second -= f * v;
        if (it->second.is_zero()) row.erase(it);
      }
      b -= f * p->second.r;
    }
    if (row.empty()) {
      if (!b.is_zero()) throw NoMatch("match_linear_combination: inconsistent system");
      continue;
    }
    auto lead = row.begin();
    Rational f = lead->second;
    int leadcol = lead->first;
    PivotRow pr;
    pr.cols.reserve(row.size() - 1);
    for (const auto& [c, v] : row)
      if (c != leadcol) pr.cols.emplace_back(c, v / f);
    pr.r = b / f;
    pivots[leadcol] = std::move(pr);
  }

  // back substitution (pivots in descending column order)
  std::vector<Rational> value(static_cast<std::size_t>(T) * per, Rational(0));
  for (auto it = pivots.rbegin(); it != pivots.rend(); ++it) {
    Rational v = it->second.r;
    for (const auto& [c, w] : it->second.cols) v -= w * value[c];
    value[it->first] = v;
  }

  std::vector<ScalarPoly> coeffs(T);
  for (int t = 0; t < T; ++t)
    for (int r = 0; r <= dq; ++r)
      for (int s = 0; s <= dk; ++s) {
        const Rational& v = value[col_of(t, r, s)];
        if (!v.is_zero()) coeffs[t].add_term({r, s}, v);
      }

  // final certificate: exact re-expansion
  DiffOp recon;
  for (int t = 0; t < T; ++t) recon += basis[t] * coeffs[t];
  if (!(recon == lhs)) throw NoMatch("match_linear_combination: residual is nonzero");
  return coeffs;
}

// ---------------------------------------------------------------------------
// structure constants

// Coefficients of the quadratic algebra
//   [A,B] = C,
//   [A,C] = alpha A^2 + gamma {A,B} + delta A + epsilon B + zeta,
//   [B,C] = a A^2 - gamma B^2 - alpha {A,B} + d A - delta B + z,
// with delta(H) = delta0 + delta1 H etc. (H is central on A, B).
struct StructureConstants {
  ScalarPoly alpha, gamma, a;
  ScalarPoly delta0, delta1;
  ScalarPoly epsilon0, epsilon1;
  ScalarPoly zeta0, zeta1, zeta2;
  ScalarPoly d0, d1;
  ScalarPoly z0, z1, z2;

  Poly5 delta_E() const { return p5(delta0) + p5(delta1) * p5_var(V5_E); }
  Poly5 epsilon_E() const { return p5(epsilon0) + p5(epsilon1) * p5_var(V5_E); }
  Poly5 zeta_E() const {
    return p5(zeta0) + p5(zeta1) * p5_var(V5_E) + p5(zeta2) * p5_var(V5_E).pow(2);
  }
  Poly5 d_E() const { return p5(d0) + p5(d1) * p5_var(V5_E); }
  Poly5 z_E() const {
    return p5(z0) + p5(z1) * p5_var(V5_E) + p5(z2) * p5_var(V5_E).pow(2);
  }
};

// The ten-operator matching basis { A^2, {A,B}, B^2, A, B, HA, HB, H, H^2, 1 }.
inline std::vector<DiffOp> matching_basis(const model2d::OperatorCatalog& cat) {
  const DiffOp& A = cat.R;
  const DiffOp& B = cat.L;
  const DiffOp& H = cat.H;
  return {compose(A, A), anticommutator(A, B), compose(B, B), A,           B,
          compose(H, A), compose(H, B),        H,             compose(H, H),
          DiffOp::identity()};
}

inline StructureConstants extract_structure_constants(const model2d::OperatorCatalog& cat) {
  auto basis = matching_basis(cat);
  auto c1 = match_linear_combination(commutator(cat.R, cat.C), basis);
  auto c2 = match_linear_combination(commutator(cat.L, cat.C), basis);

  StructureConstants sc;
  sc.alpha = c1[0];
  sc.gamma = c1[1];
  if (!c1[2].is_zero()) throw NoMatch("extract_structure_constants: [A,C] has a B^2 part");
  sc.delta0 = c1[3];
  sc.epsilon0 = c1[4];
  sc.delta1 = c1[5];
  sc.epsilon1 = c1[6];
  sc.zeta1 = c1[7];
  sc.zeta2 = c1[8];
  sc.zeta0 = c1[9];

  sc.a = c2[0];
  sc.d0 = c2[3];
  sc.d1 = c2[5];
  sc.z1 = c2[7];
  sc.z2 = c2[8];
  sc.z0 = c2[9];
  // cross-relation constraints from the Jacobi identity
  if (!(c2[1] == -sc.alpha && c2[2] == -sc.gamma && c2[4] == -sc.delta0 && c2[6] == -sc.delta1))
    throw NoMatch("extract_structure_constants: the two expansions disagree");
  return sc;
}

// ---------------------------------------------------------------------------
// Casimir

struct CasimirResult {
  DiffOp op;          // sixth-order operator
  Poly3 h_polynomial; // k0 + k1 H + k2 H^2 + k3 H^3
};

inline CasimirResult casimir(const model2d::OperatorCatalog& cat,
                             const StructureConstants& sc) {
  const DiffOp& A = cat.R;
  const DiffOp& B = cat.L;
  const DiffOp& H = cat.H;
  const DiffOp H2 = compose(H, H);
  const DiffOp I = DiffOp::identity();
  auto op_of = [&](const ScalarPoly& c0, const ScalarPoly& c1, const ScalarPoly& c2) {
    return I * c0 + H * c1 + H2 * c2;
  };
  const ScalarPoly zero;
  DiffOp delta_op = op_of(sc.delta0, sc.delta1, zero);
  DiffOp eps_op = op_of(sc.epsilon0, sc.epsilon1, zero);
  DiffOp zeta_op = op_of(sc.zeta0, sc.zeta1, sc.zeta2);
  DiffOp d_op = op_of(sc.d0, sc.d1, zero);
  DiffOp z_op = op_of(sc.z0, sc.z1, sc.z2);

  const Rational r13(1, 3), r23(2, 3);
  DiffOp K = compose(cat.C, cat.C);
  K += compose(A, compose(A, A)) * (sc.a * r23);
  K -= triple_sym(A, A, B) * (sc.alpha * r13);
  K -= triple_sym(A, B, B) * (sc.gamma * r13);
  K += compose(model2d::scalar_op(sc.alpha * sc.alpha * r23 + sc.a * sc.gamma * r23) + d_op,
               compose(A, A));
  K += compose(model2d::scalar_op(sc.alpha * sc.gamma * r13) - delta_op, anticommutator(A, B));
  K += compose(model2d::scalar_op(sc.gamma * sc.gamma * r23) - eps_op, compose(B, B));
  K += compose(delta_op * (sc.alpha * r23) + eps_op * (sc.a * r13) + d_op * (sc.gamma * r13) +
                   z_op * Rational(2),
               A);
  K += compose(eps_op * (-sc.alpha * r13) + delta_op * (sc.gamma * r23) - zeta_op * Rational(2),
               B);
  K += z_op * (sc.gamma * r13) - zeta_op * (sc.alpha * r13);

  auto kp = match_linear_combination(K, {I, H, H2, compose(H, H2)}, 8, 2);
  CasimirResult out;
  out.op = std::move(K);
  for (int i = 0; i < 4; ++i) out.h_polynomial += p3(kp[i]) * Poly3::variable(V3_H).pow(i);
  return out;
}

// Casimir eigenvalue as a polynomial in E (H replaced by its eigenvalue;
// the first three variable slots of Poly3 and Poly5 line up by design).
inline Poly5 casimir_eigenvalue(const CasimirResult& cas) {
  static_assert(V3_H == V5_E);
  Poly5 out;
  for (const auto& [key, c] : cas.h_polynomial.terms()) {
    Poly5 t = Poly5::monomial({key[0], key[1], key[2], 0, 0}, c);
    out += t;
  }
  return out;
}

// ---------------------------------------------------------------------------
// structure function

// The closed general structure function of the deformed-oscillator
// realization, expanded with T = x + u. Polynomial in (q,k,E,x,u).
inline Poly5 structure_function_general(const StructureConstants& sc, const Poly5& K_eigen) {
  const Poly5 alpha = p5(sc.alpha), gamma = p5(sc.gamma), a = p5(sc.a);
  const Poly5 delta = sc.delta_E(), eps = sc.epsilon_E(), zeta = sc.zeta_E();
  const Poly5 dd = sc.d_E(), zz = sc.z_E();
  const Poly5 T = p5_var(V5_X) + p5_var(V5_U);
  const Poly5 P1 = T * p5_const(2) - p5_const(1);
  const Poly5 P3 = T * p5_const(2) - p5_const(3);
  const Poly5 Pp1 = T * p5_const(2) + p5_const(1);
  const Poly5 S = T.pow(2) * p5_const(12) - T * p5_const(12) - p5_const(1);
  const Poly5 g2 = gamma.pow(2), g3 = gamma.pow(3), g4 = gamma.pow(4), g5 = gamma.pow(5),
              g6 = gamma.pow(6), g8 = gamma.pow(8);

  Poly5 phi;
  phi += p5_const(-3072) * g6 * K_eigen * P1.pow(2);
  phi += p5_const(-48) * g6 *
         (alpha.pow(2) * eps - alpha * gamma * delta + a * gamma * eps - dd * g2) * P3 *
         P1.pow(4) * Pp1;
  phi += g8 * (p5_const(3) * alpha.pow(2) + p5_const(4) * a * gamma) * P3.pow(2) * P1.pow(4) *
         Pp1.pow(2);
  phi += p5_const(768) * (alpha * eps.pow(2) - p5_const(2) * gamma * delta * eps +
                          p5_const(4) * g2 * zeta)
                             .pow(2);
  phi += p5_const(32) * g4 *
         (p5_const(3) * alpha.pow(2) * eps.pow(2) - p5_const(6) * alpha * gamma * delta * eps +
          p5_const(2) * a * gamma * eps.pow(2) + p5_const(2) * g2 * delta.pow(2) -
          p5_const(4) * dd * g2 * eps + p5_const(8) * g3 * zz + p5_const(4) * alpha * g2 * zeta) *
         P1.pow(2) * S;
  phi += p5_const(-256) * g2 *
         (p5_const(3) * alpha.pow(2) * eps.pow(3) -
          p5_const(9) * alpha * gamma * delta * eps.pow(2) + a * gamma * eps.pow(3) +
          p5_const(6) * g2 * delta.pow(2) * eps - p5_const(3) * dd * g2 * eps.pow(2) +
          p5_const(2) * g4 * delta.pow(2) + p5_const(2) * dd * g4 * eps +
          p5_const(12) * g3 * eps * zz - p5_const(4) * g5 * zz +
          p5_const(12) * alpha * g2 * eps * zeta - p5_const(12) * g3 * delta * zeta +
          p5_const(4) * alpha * g4 * zeta) *
         P1.pow(2);
  return phi;
}

// Factorized form; the paired square roots are multiplied out so the
// result is an exact polynomial in (q,k,E,x,u).
inline Poly5 structure_function_factorized() {
  const Poly5 q2 = p5_var(V5_Q).pow(2);
  const Poly5 E = p5_var(V5_E), k = p5_var(V5_K);
  const Poly5 T = p5_var(V5_X) + p5_var(V5_U);
  const Poly5 two_T = T * p5_const(2);
  const Poly5 f1 = two_T + k - p5_const(1);
  const Poly5 f2 = two_T + k - p5_const(2);
  const Poly5 f3 = two_T - k;
  const Poly5 f4 = two_T - k - p5_const(1);
  const Poly5 km_half = k - p5_const(1, 2);
  // q^2[(2T - 1/2)^2 - (k - 1/2)^2] - E and the 3/2 partner
  const Poly5 g1 = q2 * ((two_T - p5_const(1, 2)).pow(2) - km_half.pow(2)) - E;
  const Poly5 g2 = q2 * ((two_T - p5_const(3, 2)).pow(2) - km_half.pow(2)) - E;
  return p5_const(3) * Poly5::constant(Rational(2).pow(30)) * p5_var(V5_Q).pow(16) * f1 * f2 *
         f3 * f4 * g1 * g2;
}

// Eigenvalues of A in the realization: A(x) = q^2 (2x+2u-k)(2x+2u+k).
inline Poly5 realization_A() {
  const Poly5 q2 = p5_var(V5_Q).pow(2);
  const Poly5 k = p5_var(V5_K);
  const Poly5 two_T = (p5_var(V5_X) + p5_var(V5_U)) * p5_const(2);
  return q2 * (two_T - k) * (two_T + k);
}

// sigma(x) and rho^2(x) of the realization, as exact rational functions.
inline RationalFn5 realization_sigma(const StructureConstants& sc) {
  const Poly5 alpha = p5(sc.alpha), gamma = p5(sc.gamma);
  const Poly5 delta = sc.delta_E(), eps = sc.epsilon_E(), zeta = sc.zeta_E();
  const Poly5 T = p5_var(V5_X) + p5_var(V5_U);
  const Poly5 W = T.pow(2) - p5_const(1, 4);
  const Poly5 g2 = gamma.pow(2), g4 = gamma.pow(4);
  RationalFn5 out;
  out.num = p5_const(-1) * alpha * g4 * W.pow(2) +
            p5_const(2) * g2 * (alpha * eps - gamma * delta) * W -
            (alpha * eps.pow(2) - p5_const(2) * gamma * delta * eps + p5_const(4) * g2 * zeta);
  out.den = p5_const(4) * g4 * W;
  return out;
}

inline RationalFn5 realization_rho_sq(const StructureConstants& sc) {
  const Poly5 gamma = p5(sc.gamma);
  const Poly5 T = p5_var(V5_X) + p5_var(V5_U);
  RationalFn5 out;
  out.num = p5_const(1);
  out.den = p5_const(3) * Poly5::constant(Rational(2).pow(12)) * gamma.pow(8) * T * (T + p5_const(1)) *
            (T * p5_const(2) + p5_const(1)).pow(2);
  return out;
}

// ---------------------------------------------------------------------------
// finite-dimensional representations

enum class UBranch { half_k, half_k_plus_1 };  // u = k/2 or u = (k+1)/2
enum class BranchSign { upper, lower };

// One (p+1)-dimensional representation of the algebra realized on a
// deformed parafermionic oscillator of order p.
struct ParafermionRep {
  int p = 0;
  UBranch u = UBranch::half_k;
  BranchSign sign = BranchSign::upper;
  ScalarPoly E;                  // energy, polynomial in (q,k)
  Poly5 phi_sym;                 // structure function, polynomial in (q,k,x)
  std::vector<ScalarPoly> phi;   // phi(m), m = 0..p+1
  std::vector<ScalarPoly> A_eig; // A(m), m = 0..p
};

inline Poly5 u_value(UBranch u) {
  Poly5 k = p5_var(V5_K);
  return u == UBranch::half_k ? k * p5_const(1, 2) : (k + p5_const(1)) * p5_const(1, 2);
}

inline ScalarPoly scalar_from_qk_poly5(const Poly5& p) {
  ScalarPoly out;
  for (const auto& [key, c] : p.terms()) {
    if (key[V5_E] != 0 || key[V5_X] != 0 || key[V5_U] != 0)
      throw InvalidParam("scalar_from_qk_poly5: residual non-(q,k) variables");
    out.add_term({key[V5_Q], key[V5_K]}, c);
  }
  return out;
}

inline ScalarPoly branch_energy(int p, UBranch u, BranchSign sign) {
  const ScalarPoly q2 = sp_q(2), k = sp_k();
  Rational up(sign == BranchSign::upper ? 1 : -1, 2);
  if (u == UBranch::half_k) {
    // q^2 (2p + 3/2 +- 1/2)(2p + 2k + 1/2 +- 1/2)
    ScalarPoly f1 = sp_const(2 * p) + sp_const(3, 2) + ScalarPoly::constant(up);
    ScalarPoly f2 = sp_const(2 * p) + sp_const(2) * k + sp_const(1, 2) + ScalarPoly::constant(up);
    return q2 * f1 * f2;
  }
  // q^2 (2p + 5/2 +- 1/2)(2p + 2k + 3/2 +- 1/2)
  ScalarPoly f1 = sp_const(2 * p) + sp_const(5, 2) + ScalarPoly::constant(up);
  ScalarPoly f2 = sp_const(2 * p) + sp_const(2) * k + sp_const(3, 2) + ScalarPoly::constant(up);
  return q2 * f1 * f2;
}

// Structure function of the branch, polynomial in (q,k,x) for the given p.
inline Poly5 branch_phi(int p, UBranch u, BranchSign sign) {
  const Poly5 x = p5_var(V5_X), k = p5_var(V5_K);
  const Poly5 q20 = p5_var(V5_Q).pow(20);
  const Poly5 pref = p5_const(3) * Poly5::constant(Rational(2).pow(38)) * q20;
  Rational sgn(sign == BranchSign::upper ? 1 : -1);
  Poly5 common = x * (p5_const(p + 1) - x) *
                 (p5_const(p + 1) + Poly5::constant(sgn * Rational(1, 2)) - x);
  if (u == UBranch::half_k) {
    // x(p+1-x)(x-1/2)(p+1+-1/2-x)(x+k-1/2)(x+k-1)(x+p+k+1/4+-1/4)(x+p+k-1/4+-1/4)
    Poly5 f = common * (x - p5_const(1, 2)) * (x + k - p5_const(1, 2)) * (x + k - p5_const(1)) *
              (x + p5_const(p) + k + p5_const(1, 4) + Poly5::constant(sgn * Rational(1, 4))) *
              (x + p5_const(p) + k - p5_const(1, 4) + Poly5::constant(sgn * Rational(1, 4)));
    return pref * f;
  }
  // x(p+1-x)(x+1/2)(p+1+-1/2-x)(x+k)(x+k-1/2)(x+p+k+5/4+-1/4)(x+p+k+3/4+-1/4)
  Poly5 f = common * (x + p5_const(1, 2)) * (x + k) * (x + k - p5_const(1, 2)) *
            (x + p5_const(p) + k + p5_const(5, 4) + Poly5::constant(sgn * Rational(1, 4))) *
            (x + p5_const(p) + k + p5_const(3, 4) + Poly5::constant(sgn * Rational(1, 4)));
  return pref * f;
}

inline ParafermionRep representation(int p, UBranch u, BranchSign sign) {
  if (p < 0) throw InvalidParam("representation: p must be >= 0");
  ParafermionRep rep;
  rep.p = p;
  rep.u = u;
  rep.sign = sign;
  rep.E = branch_energy(p, u, sign);
  rep.phi_sym = branch_phi(p, u, sign);
  for (int m = 0; m <= p + 1; ++m)
    rep.phi.push_back(
        scalar_from_qk_poly5(rep.phi_sym.substitute(V5_X, p5_const(m))));
  Poly5 Asym = realization_A().substitute(V5_U, u_value(u));
  for (int m = 0; m <= p; ++m)
    rep.A_eig.push_back(scalar_from_qk_poly5(Asym.substitute(V5_X, p5_const(m))));

  if (!rep.phi.front().is_zero() || !rep.phi.back().is_zero())
    throw InvalidBranch("representation: structure function must vanish at 0 and p+1");
  for (double kk : {0.25, 0.5, 1.0, 2.0, 5.0}) {
    for (int m = 1; m <= p; ++m)
      if (rep.phi[m].eval({1.0, kk}) <= 0.0)
        throw InvalidBranch("representation: structure function not positive inside");
    for (int m = 0; m <= p; ++m)
      if (rep.A_eig[m].eval({1.0, kk}) < 0.0)
        throw InvalidBranch("representation: A must stay nonnegative");
  }
  return rep;
}

inline ScalarPoly energy_level_poly(int N) {
  return sp_q(2) * (sp_const(N) + sp_const(2)) *
         (sp_const(N) + sp_const(2) * sp_k() + sp_const(1));
}

struct PhysicalSelection {
  int N = 0;
  ScalarPoly E;           // equals energy_level_poly(N) for the physical branch
  ParafermionRep upper;
  ParafermionRep lower;
  bool upper_physical = false;
  bool lower_physical = false;
};

// Degeneracy fixes N = 2p (u = k/2) or N = 2p+1 (u = (k+1)/2); a branch is
// physical iff its energy polynomial coincides with the level energy of
// that N. The lower sign lands on the adjacent opposite-parity level,
// whose multiplicity cannot host a (p+1)-dimensional representation.
inline PhysicalSelection select_physical(int p, UBranch u) {
  PhysicalSelection out;
  out.N = (u == UBranch::half_k) ? 2 * p : 2 * p + 1;
  out.upper = representation(p, u, BranchSign::upper);
  out.lower = representation(p, u, BranchSign::lower);
  ScalarPoly target = energy_level_poly(out.N);
  out.upper_physical = (out.upper.E == target);
  out.lower_physical = (out.lower.E == target);
  out.E = out.upper.E;
  return out;
}

// ---------------------------------------------------------------------------
// matrix elements of L in the (H, R)-diagonal basis

inline long long pow2_30() { return 1073741824LL; }

// phi_nu = 3*2^30 q^20 nu(nu-1)(nu+2k-1)(nu+2k-2)(N+nu+2k)(N+nu+2k+1)
//          (N-nu+2)(N-nu+3)
inline ScalarPoly phi_nu(int N, int nu) {
  const ScalarPoly k2 = sp_const(2) * sp_k();
  ScalarPoly f = sp_const(3 * pow2_30()) * sp_q(20);
  f = f * sp_const(nu) * sp_const(nu - 1);
  f = f * (sp_const(nu - 1) + k2) * (sp_const(nu - 2) + k2);
  f = f * (sp_const(N + nu) + k2) * (sp_const(N + nu + 1) + k2);
  f = f * sp_const(N - nu + 2) * sp_const(N - nu + 3);
  return f;
}

inline RationalFn2 sigma_nu(int N, int nu) {
  const ScalarPoly k = sp_k();
  ScalarPoly km = sp_const(nu - 1) + k;  // nu + k - 1
  ScalarPoly kp = sp_const(nu + 1) + k;  // nu + k + 1
  ScalarPoly bracket = sp_const(N * N) + (sp_const(2) * k + sp_const(3)) * sp_const(N) +
                       sp_const(2) * k * k + sp_const(2) * k + sp_const(1);
  RationalFn2 out;
  out.num = sp_q(2) * (-(km * km * kp * kp) + bracket * km * kp -
                       k * (k - sp_const(1)) * (sp_const(N + 1) + k) * (sp_const(N + 2) + k));
  out.den = sp_const(2) * km * kp;
  return out;
}

inline RationalFn2 tau_sq_nu(int N, int nu) {
  const ScalarPoly k = sp_k(), k2 = sp_const(2) * sp_k();
  RationalFn2 out;
  out.num = sp_q(4) * sp_const(nu) * sp_const(nu - 1) * (sp_const(nu - 1) + k2) *
            (sp_const(nu - 2) + k2) * sp_const(N - nu + 2) * sp_const(N - nu + 3) *
            (sp_const(N + nu) + k2) * (sp_const(N + nu + 1) + k2);
  out.den = sp_const(16) * (sp_const(nu - 2) + k) * (sp_const(nu - 1) + k).pow(2) *
            (sp_const(nu) + k);
  return out;
}

struct LMatrixBlock {
  int N = 0;
  std::vector<int> nus;                       // ascending
  std::vector<std::vector<double>> analytic;  // s_nu = +1 convention
  std::vector<int> phases;                    // observed s_nu per off-diagonal
};

inline LMatrixBlock l_matrix(int N, double k, double q) {
  LMatrixBlock blk;
  blk.N = N;
  for (int nu = N % 2; nu <= N; nu += 2) blk.nus.push_back(nu);
  const int d = static_cast<int>(blk.nus.size());
  blk.analytic.assign(d, std::vector<double>(d, 0.0));
  // the rational pole location is only consulted when the denominator
  // vanishes exactly, which happens on quarter-integer k
  Rational kr = Rational::from_int128(static_cast<__int128>(std::llround(k * 4)), 4);
  for (int a = 0; a < d; ++a) {
    blk.analytic[a][a] = sigma_nu(N, blk.nus[a]).eval_limit({q, k}, VAR_K, kr);
    if (a > 0) {
      double t2 = tau_sq_nu(N, blk.nus[a]).eval_limit({q, k}, VAR_K, kr);
      double t = std::sqrt(std::max(t2, 0.0));
      blk.analytic[a][a - 1] = blk.analytic[a - 1][a] = t;
    }
  }
  blk.phases.assign(std::max(d - 1, 0), 1);
  return blk;
}

struct LVerifyReport {
  LMatrixBlock block;
  std::vector<std::vector<double>> quadrature;
  double max_rel_err = 0.0;  // entrywise, absolute values
  bool pass = false;
};

// Quadrature block of L in the second basis, compared entrywise in
// absolute value with the analytic sigma/tau data. Signs of off-diagonal
// entries are a phase convention and are reported, not judged.
inline LVerifyReport verify_l_matrix(int N, double k, double q,
                                     const model2d::OperatorCatalog& cat,
                                     const wavefn::StripParams& pars, double tol = 1e-8) {
  LVerifyReport rep;
  rep.block = l_matrix(N, k, q);
  auto sb = wavefn::second_basis(N, k, q, cat.R, pars);
  const int d = static_cast<int>(sb.entries.size());
  auto grid = wavefn::make_strip_grid(q, pars.nx, pars.ny);
  std::vector<std::vector<double>> vals(d), lvals(d);
  for (int i = 0; i < d; ++i) {
    vals[i] = grid_values(sb.entries[i].field, grid);
    lvals[i] = grid_values(apply_as_field(cat.L, sb.entries[i].field, q, k), grid);
  }
  rep.quadrature.assign(d, std::vector<double>(d, 0.0));
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) rep.quadrature[i][j] = grid_dot(grid, vals[i], lvals[j]);

  double scale = 0.0;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) scale = std::max(scale, std::abs(rep.block.analytic[i][j]));
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      double qa = std::abs(rep.quadrature[i][j]), an = std::abs(rep.block.analytic[i][j]);
      // sigma/tau entries compare relatively; the structural zeros beyond
      // the tridiagonal band compare against the block scale
      double err = (an > tol * scale) ? std::abs(qa - an) / an : qa / scale;
      rep.max_rel_err = std::max(rep.max_rel_err, err);
    }
  // diagonal must agree with sign
  for (int i = 0; i < d; ++i) {
    double err = std::abs(rep.quadrature[i][i] - rep.block.analytic[i][i]) /
                 std::max(std::abs(rep.block.analytic[i][i]), 1.0);
    rep.max_rel_err = std::max(rep.max_rel_err, err);
  }
  for (int a = 1; a < d; ++a)
    rep.block.phases[a - 1] = rep.quadrature[a][a - 1] >= 0.0 ? 1 : -1;
  rep.pass = rep.max_rel_err <= tol;
  if (!rep.pass) throw PhaseMismatch("verify_l_matrix: |quadrature| differs from |analytic|");
  return rep;
}

// ---------------------------------------------------------------------------
// numeric realization matrices (A, B) on the (p+1)-dimensional Fock space

struct RealizationMatrices {
  std::vector<std::vector<double>> A, B;
  double E = 0.0;
};

inline RealizationMatrices realization_matrices(const StructureConstants& sc, int p, UBranch u,
                                                BranchSign sign, double k, double q) {
  ParafermionRep rep = representation(p, u, sign);
  const int d = p + 1;
  RealizationMatrices rm;
  rm.E = rep.E.eval({q, k});
  rm.A.assign(d, std::vector<double>(d, 0.0));
  rm.B.assign(d, std::vector<double>(d, 0.0));
  Rational kr = Rational::from_int128(static_cast<__int128>(std::llround(k * 4)), 4);
  Poly5 uv = u_value(u);
  auto sigma_fn = realization_sigma(sc);
  auto rho2_fn = realization_rho_sq(sc);
  auto subst = [&](RationalFn5 f, int m) {
    f.num = f.num.substitute(V5_U, uv).substitute(V5_X, p5_const(m));
    f.den = f.den.substitute(V5_U, uv).substitute(V5_X, p5_const(m));
    return f;
  };
  for (int m = 0; m < d; ++m) {
    rm.A[m][m] = rep.A_eig[m].eval({q, k});
    auto sg = subst(sigma_fn, m);
    rm.B[m][m] = RationalFn5{sg.num.substitute(V5_E, p5(rep.E)),
                             sg.den.substitute(V5_E, p5(rep.E))}
                     .eval_limit({q, k, 0.0, 0.0, 0.0}, V5_K, kr);
  }
  for (int m = 0; m + 1 < d; ++m) {
    auto r2 = subst(rho2_fn, m);
    double rho2 = RationalFn5{r2.num, r2.den}.eval_limit({q, k, 0.0, 0.0, 0.0}, V5_K, kr);
    double phi_next = rep.phi[m + 1].eval({q, k});
    double v = std::sqrt(std::max(rho2, 0.0)) * std::sqrt(std::max(phi_next, 0.0));
    rm.B[m + 1][m] = rm.B[m][m + 1] = v;
  }
  return rm;
}

// Residual of the defining relations on the realization matrices,
// normalized by the magnitude of the right-hand sides.
inline double realization_residual(const StructureConstants& sc,
                                   const RealizationMatrices& rm, double k, double q) {
  const int d = static_cast<int>(rm.A.size());
  auto mul = [d](const std::vector<std::vector<double>>& X,
                 const std::vector<std::vector<double>>& Y) {
    std::vector<std::vector<double>> Z(d, std::vector<double>(d, 0.0));
    for (int i = 0; i < d; ++i)
      for (int a = 0; a < d; ++a)
        for (int j = 0; j < d; ++j) Z[i][j] += X[i][a] * Y[a][j];
    return Z;
  };
  auto add = [d](std::vector<std::vector<double>> X, const std::vector<std::vector<double>>& Y,
                 double s) {
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) X[i][j] += s * Y[i][j];
    return X;
  };
  auto eye = [d](double s) {
    std::vector<std::vector<double>> Z(d, std::vector<double>(d, 0.0));
    for (int i = 0; i < d; ++i) Z[i][i] = s;
    return Z;
  };
  auto norm = [d](const std::vector<std::vector<double>>& X) {
    double m = 0.0;
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) m = std::max(m, std::abs(X[i][j]));
    return m;
  };
  double E = rm.E;
  auto ev = [&](const ScalarPoly& s) { return s.eval({q, k}); };
  double alpha = ev(sc.alpha), gamma = ev(sc.gamma), a = ev(sc.a);
  double delta = ev(sc.delta0) + ev(sc.delta1) * E;
  double eps = ev(sc.epsilon0) + ev(sc.epsilon1) * E;
  double zeta = ev(sc.zeta0) + ev(sc.zeta1) * E + ev(sc.zeta2) * E * E;
  double dd = ev(sc.d0) + ev(sc.d1) * E;
  double zz = ev(sc.z0) + ev(sc.z1) * E + ev(sc.z2) * E * E;

  auto C = mul(rm.A, rm.B);
  C = add(C, mul(rm.B, rm.A), -1.0);  // C = AB - BA

  auto AC = mul(rm.A, C);
  auto CA = mul(C, rm.A);
  auto lhs1 = add(AC, CA, -1.0);
  auto anti = add(mul(rm.A, rm.B), mul(rm.B, rm.A), 1.0);
  auto rhs1 = mul(rm.A, rm.A);
  for (auto& row : rhs1)
    for (auto& v : row) v *= alpha;
  rhs1 = add(rhs1, anti, gamma);
  rhs1 = add(rhs1, rm.A, delta);
  rhs1 = add(rhs1, rm.B, eps);
  rhs1 = add(rhs1, eye(1.0), zeta);
  double r1 = norm(add(lhs1, rhs1, -1.0)) / std::max(norm(rhs1), 1.0);

  auto BC = mul(rm.B, C);
  auto CB = mul(C, rm.B);
  auto lhs2 = add(BC, CB, -1.0);
  auto rhs2 = mul(rm.A, rm.A);
  for (auto& row : rhs2)
    for (auto& v : row) v *= a;
  rhs2 = add(rhs2, mul(rm.B, rm.B), -gamma);
  rhs2 = add(rhs2, anti, -alpha);
  rhs2 = add(rhs2, rm.A, dd);
  rhs2 = add(rhs2, rm.B, -delta);
  rhs2 = add(rhs2, eye(1.0), zz);
  double scale2 = std::max({norm(rhs2), norm(lhs2), 1.0});
  double r2 = norm(add(lhs2, rhs2, -1.0)) / scale2;
  return std::max(r1, r2);
}

}  // namespace pdm::quadalg
