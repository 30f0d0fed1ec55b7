#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "pdm/coeffring.hpp"
#include "pdm/field.hpp"

namespace pdm {

// Normal-ordered differential operator: finite sum of terms
//   CoeffPoly(x,y) * d_x^i d_y^j
// with all derivatives standing to the right of coefficients. Products are
// normal-ordered exactly via the generalized Leibniz rule, so an operator
// identity holds iff its residual is the structurally empty operator.
class DiffOp {
 public:
  using Key = std::pair<int, int>;  // (i, j) = orders in d_x, d_y

  DiffOp() = default;

  static DiffOp zero() { return DiffOp(); }
  static DiffOp identity() { return coeff(CoeffPoly::one()); }
  static DiffOp coeff(CoeffPoly c) { return term(std::move(c), 0, 0); }
  static DiffOp term(CoeffPoly c, int i, int j) {
    DiffOp op;
    if (!c.is_zero()) op.terms_[{i, j}] = std::move(c);
    return op;
  }
  static DiffOp dx(int i = 1) { return term(CoeffPoly::one(), i, 0); }
  static DiffOp dy(int j = 1) { return term(CoeffPoly::one(), 0, j); }

  const std::map<Key, CoeffPoly>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  int order() const {
    int m = 0;
    for (const auto& [k, c] : terms_) m = std::max(m, k.first + k.second);
    return m;
  }
  int order_x() const {
    int m = 0;
    for (const auto& [k, c] : terms_) m = std::max(m, k.first);
    return m;
  }
  int order_y() const {
    int m = 0;
    for (const auto& [k, c] : terms_) m = std::max(m, k.second);
    return m;
  }
  std::size_t monomial_count() const {
    std::size_t n = 0;
    for (const auto& [k, c] : terms_) n += c.term_count();
    return n;
  }

  void add_term(const Key& k, const CoeffPoly& c) {
    if (c.is_zero()) return;
    auto [it, inserted] = terms_.emplace(k, c);
    if (!inserted) {
      it->second += c;
      if (it->second.is_zero()) terms_.erase(it);
    }
  }

  friend DiffOp operator+(const DiffOp& a, const DiffOp& b) {
    DiffOp r = a;
    for (const auto& [k, c] : b.terms_) r.add_term(k, c);
    return r;
  }
  friend DiffOp operator-(const DiffOp& a, const DiffOp& b) {
    DiffOp r = a;
    for (const auto& [k, c] : b.terms_) r.add_term(k, -c);
    return r;
  }
  DiffOp operator-() const {
    DiffOp r;
    for (const auto& [k, c] : terms_) r.terms_[k] = -c;
    return r;
  }
  friend DiffOp operator*(const DiffOp& a, const CoeffPoly& s) {
    DiffOp r;
    for (const auto& [k, c] : a.terms_) r.add_term(k, c * s);
    return r;
  }
  friend DiffOp operator*(const DiffOp& a, const ScalarPoly& s) {
    return a * CoeffPoly::scalar(s);
  }
  friend DiffOp operator*(const DiffOp& a, const Rational& s) {
    return a * CoeffPoly::scalar(ScalarPoly::constant(s));
  }

  DiffOp& operator+=(const DiffOp& o) { return *this = *this + o; }
  DiffOp& operator-=(const DiffOp& o) { return *this = *this - o; }

  friend bool operator==(const DiffOp& a, const DiffOp& b) { return a.terms_ == b.terms_; }
  friend bool operator!=(const DiffOp& a, const DiffOp& b) { return !(a == b); }

  // k -> k + by in every coefficient.
  DiffOp shift_k(int by) const {
    DiffOp r;
    for (const auto& [k, c] : terms_) {
      auto s = c.shift_k(by);
      if (!s.is_zero()) r.terms_[k] = s;
    }
    return r;
  }

  // Sorted textual form, one line per (i,j), for golden tests.
  std::string serialize() const {
    std::string out;
    for (const auto& [k, c] : terms_)
      out += "(" + std::to_string(k.first) + "," + std::to_string(k.second) + "): " + c.str() + "\n";
    return out;
  }

 private:
  std::map<Key, CoeffPoly> terms_;
};

// Normal-ordered product A B. Pushing d_x^i d_y^j through a coefficient g
// expands with binomial weights over partial derivatives of g.
inline DiffOp compose(const DiffOp& A, const DiffOp& B) {
  auto binom = [](int n, int r) {
    Rational v(1);
    for (int t = 0; t < r; ++t) v = v * Rational(n - t) / Rational(t + 1);
    return v;
  };
  DiffOp result;
  for (const auto& [kb, g] : B.terms()) {
    // Derivative tables of g, shared across all terms of A.
    int mi = A.order_x(), mj = A.order_y();
    std::vector<std::vector<CoeffPoly>> dg(mi + 1, std::vector<CoeffPoly>(mj + 1));
    dg[0][0] = g;
    for (int s = 1; s <= mi; ++s) dg[s][0] = dg[s - 1][0].derive_x();
    for (int s = 0; s <= mi; ++s)
      for (int t = 1; t <= mj; ++t) dg[s][t] = dg[s][t - 1].derive_y();
    for (const auto& [ka, f] : A.terms()) {
      const auto [i, j] = ka;
      for (int s = 0; s <= i; ++s)
        for (int t = 0; t <= j; ++t) {
          if (dg[s][t].is_zero()) continue;
          CoeffPoly c = f * dg[s][t] * (binom(i, s) * binom(j, t));
          result.add_term({i - s + kb.first, j - t + kb.second}, c);
        }
    }
  }
  return result;
}

inline DiffOp commutator(const DiffOp& A, const DiffOp& B) {
  return compose(A, B) - compose(B, A);
}

inline DiffOp anticommutator(const DiffOp& A, const DiffOp& B) {
  return compose(A, B) + compose(B, A);
}

// Symmetrizer {X,Y,Z} = XYZ + XZY + YXZ + YZX + ZXY + ZYX.
inline DiffOp triple_sym(const DiffOp& X, const DiffOp& Y, const DiffOp& Z) {
  DiffOp r;
  r += compose(X, compose(Y, Z));
  r += compose(X, compose(Z, Y));
  r += compose(Y, compose(X, Z));
  r += compose(Y, compose(Z, X));
  r += compose(Z, compose(X, Y));
  r += compose(Z, compose(Y, X));
  return r;
}

inline DiffOp shift_k_op(const DiffOp& A, int by) { return A.shift_k(by); }

// Numeric action on a field at a point, with q and k bound to numbers:
//   (A f)(x,y) = sum coeff_ij(x,y) d_x^i d_y^j f(x,y).
inline double apply(const DiffOp& A, const SmoothField& f, double q, double k, double x,
                    double y) {
  int ox = A.order_x(), oy = A.order_y();
  auto table = f.deriv_table({x, y}, {ox, oy});
  double sum = 0.0;
  for (const auto& [key, c] : A.terms())
    sum += c.eval(q, k, x, y) * table[key.first + key.second * (ox + 1)];
  return sum;
}

// Action on a field producing a new field. Each coefficient monomial is
// separable in x and y, so A f stays a finite separable sum; the exact
// axis jets make repeated applications possible until the derivative
// budget is spent.
inline SmoothField apply_as_field(const DiffOp& A, const SmoothField& f, double q, double k) {
  using numerics::jet_derivative;
  using numerics::jet_powi;
  using numerics::jet_sincos;
  using numerics::jet_sinhcosh;
  SmoothField out(f.tag());
  out.set_physical(f.physical());
  for (const auto& [key, c] : A.terms()) {
    const auto [i, j] = key;
    for (const auto& [mono, scale] : c.terms()) {
      double s = scale.eval({q, k});
      if (s == 0.0) continue;
      int a = mono.a, b = mono.b, cc = mono.c, dd = mono.d;
      for (const auto& t : f.field_terms()) {
        SmoothField::Term nt;
        nt.coef = t.coef * s;
        auto fx = t.axis[0].fn;
        nt.axis[0].fn = [fx, i, a, b, q](double x) {
          Jet u = Jet::seed(x) * q;
          Jet sh, ch;
          jet_sinhcosh(u, sh, ch);
          return jet_powi(sh, a) * jet_powi(ch, b) * jet_derivative(fx(x), i);
        };
        nt.axis[0].avail = t.axis[0].avail - i;
        auto fy = t.axis[1].fn;
        nt.axis[1].fn = [fy, j, cc, dd, q](double y) {
          Jet u = Jet::seed(y) * q;
          Jet si, co;
          jet_sincos(u, si, co);
          return jet_powi(si, cc) * jet_powi(co, dd) * jet_derivative(fy(y), j);
        };
        nt.axis[1].avail = t.axis[1].avail - j;
        if (nt.axis[0].avail < 0 || nt.axis[1].avail < 0)
          throw DerivativeOrderUnsupported("apply_as_field: derivative budget exhausted");
        out.add_term(std::move(nt));
      }
    }
  }
  return out;
}

}  // namespace pdm
