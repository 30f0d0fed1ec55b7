#pragma once

#include <string>
#include <vector>

#include "pdm/coeffring.hpp"

namespace pdm::classical {

// Phase-space function: polynomial in the momenta P_X, P_Y with
// coefficients in the same exact ring (generators sinh QX, cosh QX,
// sin QY, cos QY; scalars polynomial in Q, K). All products commute.
class PhaseFunction {
 public:
  using Key = std::pair<int, int>;  // (P_X power, P_Y power)

  PhaseFunction() = default;

  static PhaseFunction coeff(CoeffPoly c) { return term(std::move(c), 0, 0); }
  static PhaseFunction term(CoeffPoly c, int px, int py) {
    PhaseFunction f;
    if (!c.is_zero()) f.terms_[{px, py}] = std::move(c);
    return f;
  }
  static PhaseFunction px(int p = 1) { return term(CoeffPoly::one(), p, 0); }
  static PhaseFunction py(int p = 1) { return term(CoeffPoly::one(), 0, p); }

  const std::map<Key, CoeffPoly>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  void add_term(const Key& k, const CoeffPoly& c) {
    if (c.is_zero()) return;
    auto [it, inserted] = terms_.emplace(k, c);
    if (!inserted) {
      it->second += c;
      if (it->second.is_zero()) terms_.erase(it);
    }
  }

  friend PhaseFunction operator+(const PhaseFunction& a, const PhaseFunction& b) {
    PhaseFunction r = a;
    for (const auto& [k, c] : b.terms_) r.add_term(k, c);
    return r;
  }
  friend PhaseFunction operator-(const PhaseFunction& a, const PhaseFunction& b) {
    PhaseFunction r = a;
    for (const auto& [k, c] : b.terms_) r.add_term(k, -c);
    return r;
  }
  PhaseFunction operator-() const {
    PhaseFunction r;
    for (const auto& [k, c] : terms_) r.terms_[k] = -c;
    return r;
  }
  friend PhaseFunction operator*(const PhaseFunction& a, const PhaseFunction& b) {
    PhaseFunction r;
    for (const auto& [ka, ca] : a.terms_)
      for (const auto& [kb, cb] : b.terms_)
        r.add_term({ka.first + kb.first, ka.second + kb.second}, ca * cb);
    return r;
  }
  friend PhaseFunction operator*(const PhaseFunction& a, const ScalarPoly& s) {
    PhaseFunction r;
    for (const auto& [k, c] : a.terms_) r.add_term(k, c * s);
    return r;
  }
  friend PhaseFunction operator*(const PhaseFunction& a, const Rational& s) {
    return a * ScalarPoly::constant(s);
  }

  PhaseFunction& operator+=(const PhaseFunction& o) { return *this = *this + o; }
  PhaseFunction& operator-=(const PhaseFunction& o) { return *this = *this - o; }

  friend bool operator==(const PhaseFunction& a, const PhaseFunction& b) {
    return a.terms_ == b.terms_;
  }

  PhaseFunction d_X() const {
    PhaseFunction r;
    for (const auto& [k, c] : terms_) {
      auto dc = c.derive_x();
      if (!dc.is_zero()) r.terms_[k] = dc;
    }
    return r;
  }
  PhaseFunction d_Y() const {
    PhaseFunction r;
    for (const auto& [k, c] : terms_) {
      auto dc = c.derive_y();
      if (!dc.is_zero()) r.terms_[k] = dc;
    }
    return r;
  }
  PhaseFunction d_PX() const {
    PhaseFunction r;
    for (const auto& [k, c] : terms_)
      if (k.first > 0) r.add_term({k.first - 1, k.second}, c * Rational(k.first));
    return r;
  }
  PhaseFunction d_PY() const {
    PhaseFunction r;
    for (const auto& [k, c] : terms_)
      if (k.second > 0) r.add_term({k.first, k.second - 1}, c * Rational(k.second));
    return r;
  }

 private:
  std::map<Key, CoeffPoly> terms_;
};

// Canonical Poisson bracket on the strip phase space.
inline PhaseFunction poisson(const PhaseFunction& f, const PhaseFunction& g) {
  return f.d_X() * g.d_PX() - f.d_PX() * g.d_X() + f.d_Y() * g.d_PY() - f.d_PY() * g.d_Y();
}

// Classical limits of the model's operators. The intertwining functions
// are complex; they are stored as (re, im) pairs since only real
// combinations enter the algebra.
struct ClassicalCatalog {
  PhaseFunction H, L, R, Rbar;
  PhaseFunction eta_re, eta_im, etabar_re, etabar_im;
  PhaseFunction C;  // {R, L}
};

inline ClassicalCatalog classical_catalog() {
  using CP = CoeffPoly;
  auto m = [](int a, int b, int c, int d) { return CP::mono(a, b, c, d); };
  const ScalarPoly Q = sp_q(), K = sp_k();
  const ScalarPoly Q2K2 = sp_q(2) * sp_k(2);

  ClassicalCatalog cat;
  // H = cosh^2 (P_X^2 + P_Y^2) + Q^2 K^2 csch^2
  cat.H = PhaseFunction::term(m(0, 2, 0, 0), 2, 0) + PhaseFunction::term(m(0, 2, 0, 0), 0, 2) +
          PhaseFunction::coeff(m(-2, 0, 0, 0) * Q2K2);
  cat.L = PhaseFunction::py(2);
  // R = cosh^2 sin^2 P_X^2 - 2 sinh cosh sin cos P_X P_Y + sinh^2 cos^2 P_Y^2
  //     + Q^2 K^2 csch^2 sin^2
  cat.R = PhaseFunction::term(m(0, 2, 2, 0), 2, 0) +
          PhaseFunction::term(m(1, 1, 1, 1) * Rational(-2), 1, 1) +
          PhaseFunction::term(m(2, 0, 0, 2), 0, 2) +
          PhaseFunction::coeff(m(-2, 0, 2, 0) * Q2K2);
  cat.Rbar = PhaseFunction::term(m(0, 2, 0, 2), 2, 0) +
             PhaseFunction::term(m(1, 1, 1, 1) * Rational(2), 1, 1) +
             PhaseFunction::term(m(2, 0, 2, 0), 0, 2) +
             PhaseFunction::coeff(m(-2, 0, 0, 2) * Q2K2);
  // eta = i cosh sin P_X - i sinh cos P_Y - QK csch sin
  cat.eta_re = PhaseFunction::coeff(m(-1, 0, 1, 0) * (-(Q * K)));
  cat.eta_im = PhaseFunction::term(m(0, 1, 1, 0), 1, 0) -
               PhaseFunction::term(m(1, 0, 0, 1), 0, 1);
  cat.etabar_re = PhaseFunction::coeff(m(-1, 0, 0, 1) * (-(Q * K)));
  cat.etabar_im = PhaseFunction::term(m(0, 1, 0, 1), 1, 0) +
                  PhaseFunction::term(m(1, 0, 1, 0), 0, 1);
  cat.C = poisson(cat.R, cat.L);
  return cat;
}

struct ClassicalReport {
  std::string id;
  bool holds = false;
  std::size_t residual_terms = 0;
};

inline const std::vector<std::string>& classical_check_ids() {
  static const std::vector<std::string> ids = {
      "poisson_H_L",   "poisson_H_R",     "poisson_H_Rbar", "sum_rule",
      "C_from_eta",    "eta_modulus_sum", "AC_relation",    "BC_relation",
      "casimir_zero",
  };
  return ids;
}

// Residual of one named classical relation. The printed classical
// constants are alpha = gamma = -8Q^2, delta = 8Q^2 H, eps = -16 Q^4 K^2,
// zeta = a = d = z = 0.
inline PhaseFunction classical_residual(const ClassicalCatalog& c, const std::string& id) {
  const ScalarPoly Q2 = sp_q(2);
  const ScalarPoly alpha = sp_const(-8) * Q2;
  const ScalarPoly gamma = alpha;
  const ScalarPoly eps = sp_const(-16) * sp_q(4) * sp_k(2);
  const PhaseFunction& A = c.R;
  const PhaseFunction& B = c.L;

  if (id == "poisson_H_L") return poisson(c.H, c.L);
  if (id == "poisson_H_R") return poisson(c.H, c.R);
  if (id == "poisson_H_Rbar") return poisson(c.H, c.Rbar);
  if (id == "sum_rule") return c.H - (c.L + c.R + c.Rbar);
  if (id == "C_from_eta") {
    // C = 2Q P_Y (eta* etabar + etabar* eta) = 4Q P_Y Re(eta* etabar)
    PhaseFunction re_part = c.eta_re * c.etabar_re + c.eta_im * c.etabar_im;
    return c.C - PhaseFunction::py() * re_part * (sp_const(4) * sp_q());
  }
  if (id == "eta_modulus_sum") {
    PhaseFunction mod = c.eta_re * c.eta_re + c.eta_im * c.eta_im + c.etabar_re * c.etabar_re +
                        c.etabar_im * c.etabar_im;
    return mod - (c.R + c.Rbar);
  }
  if (id == "AC_relation") {
    // {A,C} = alpha A^2 + 2 gamma A B + delta A + eps B, delta = 8Q^2 H
    PhaseFunction rhs = A * A * alpha + A * B * (gamma * sp_const(2)) +
                        c.H * A * (sp_const(8) * Q2) + B * eps;
    return poisson(A, c.C) - rhs;
  }
  if (id == "BC_relation") {
    // {B,C} = -gamma B^2 - 2 alpha A B - delta B
    PhaseFunction rhs = -(B * B * gamma) - A * B * (alpha * sp_const(2)) -
                        c.H * B * (sp_const(8) * Q2);
    return poisson(B, c.C) - rhs;
  }
  if (id == "casimir_zero") {
    // Poisson Casimir of the quadratic algebra: with the constants above
    //   K_c = C^2 - 2 alpha A^2 B - 2 gamma A B^2 - 2 delta A B - eps B^2
    // (the a, d, z, zeta terms vanish identically here)
    PhaseFunction Kc = c.C * c.C;
    Kc -= A * A * B * (alpha * sp_const(2));
    Kc -= A * B * B * (gamma * sp_const(2));
    Kc -= c.H * A * B * (sp_const(16) * Q2);
    Kc -= B * B * eps;
    return Kc;
  }
  throw UnknownIdentity("classical_residual: unknown id '" + id + "'");
}

inline ClassicalReport verify_classical(const ClassicalCatalog& c, const std::string& id) {
  ClassicalReport r;
  r.id = id;
  auto res = classical_residual(c, id);
  r.holds = res.is_zero();
  std::size_t n = 0;
  for (const auto& [k, cp] : res.terms()) n += cp.term_count();
  r.residual_terms = n;
  return r;
}

inline std::vector<ClassicalReport> verify_poisson_algebra(const ClassicalCatalog& c) {
  std::vector<ClassicalReport> out;
  for (const auto& id : classical_check_ids()) out.push_back(verify_classical(c, id));
  return out;
}

}  // namespace pdm::classical
