#pragma once

#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "pdm/poly.hpp"

namespace pdm {

// One monomial key of the coefficient ring:
//   sinh(qx)^a  cosh(qx)^b  sin(qy)^c  cos(qy)^d.
// Canonical form keeps b, d in {0,1} via cosh^2 = 1 + sinh^2 and
// cos^2 = 1 - sin^2. a may be negative (csch powers), c >= 0.
struct TrigKey {
  int a = 0;  // sinh power, any integer
  int b = 0;  // cosh power, canonical in {0,1}
  int c = 0;  // sin power, >= 0
  int d = 0;  // cos power, canonical in {0,1}
  auto operator<=>(const TrigKey&) const = default;
};

struct RawMonomial {
  TrigKey key;  // unrestricted b, d (must still be >= 0)
  ScalarPoly scale;
};

// Element of the coefficient ring: finite sum of canonical monomials with
// ScalarPoly scales. Values are immutable in spirit: every operation
// returns a fresh normalized element, and no floating point is involved
// anywhere except eval().
class CoeffPoly {
 public:
  CoeffPoly() = default;

  static CoeffPoly zero() { return CoeffPoly(); }
  static CoeffPoly one() { return mono({0, 0, 0, 0}, ScalarPoly::constant(Rational(1))); }

  // Single monomial, normalized on entry.
  static CoeffPoly mono(TrigKey k, ScalarPoly s) {
    CoeffPoly p;
    p.accumulate(k, std::move(s));
    return p;
  }
  static CoeffPoly mono(int a, int b, int c, int d, ScalarPoly s = ScalarPoly::constant(Rational(1))) {
    return mono(TrigKey{a, b, c, d}, std::move(s));
  }
  static CoeffPoly scalar(ScalarPoly s) { return mono({0, 0, 0, 0}, std::move(s)); }

  // Canonical-form entry point for arbitrary raw monomial lists.
  // Idempotent: normalizing an already canonical element is the identity.
  static CoeffPoly normalize(const std::vector<RawMonomial>& raw) {
    CoeffPoly p;
    for (const auto& m : raw) p.accumulate(m.key, m.scale);
    return p;
  }

  const std::map<TrigKey, ScalarPoly>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t term_count() const { return terms_.size(); }

  friend CoeffPoly operator+(const CoeffPoly& x, const CoeffPoly& y) {
    CoeffPoly r = x;
    for (const auto& [k, s] : y.terms_) r.add_canonical(k, s);
    return r;
  }
  friend CoeffPoly operator-(const CoeffPoly& x, const CoeffPoly& y) {
    CoeffPoly r = x;
    for (const auto& [k, s] : y.terms_) r.add_canonical(k, -s);
    return r;
  }
  CoeffPoly operator-() const {
    CoeffPoly r;
    for (const auto& [k, s] : terms_) r.terms_[k] = -s;
    return r;
  }
  friend CoeffPoly operator*(const CoeffPoly& x, const CoeffPoly& y) {
    CoeffPoly r;
    for (const auto& [ka, sa] : x.terms_)
      for (const auto& [kb, sb] : y.terms_)
        r.accumulate(TrigKey{ka.a + kb.a, ka.b + kb.b, ka.c + kb.c, ka.d + kb.d}, sa * sb);
    return r;
  }
  friend CoeffPoly operator*(const CoeffPoly& x, const ScalarPoly& s) {
    CoeffPoly r;
    if (s.is_zero()) return r;
    for (const auto& [k, v] : x.terms_) {
      auto prod = v * s;
      if (!prod.is_zero()) r.terms_[k] = prod;
    }
    return r;
  }
  friend CoeffPoly operator*(const ScalarPoly& s, const CoeffPoly& x) { return x * s; }
  friend CoeffPoly operator*(const CoeffPoly& x, const Rational& s) {
    return x * ScalarPoly::constant(s);
  }

  CoeffPoly& operator+=(const CoeffPoly& o) { return *this = *this + o; }
  CoeffPoly& operator-=(const CoeffPoly& o) { return *this = *this - o; }
  CoeffPoly& operator*=(const CoeffPoly& o) { return *this = *this * o; }

  friend bool operator==(const CoeffPoly& x, const CoeffPoly& y) { return x.terms_ == y.terms_; }
  friend bool operator!=(const CoeffPoly& x, const CoeffPoly& y) { return !(x == y); }

  // Exact d/dx. Each hyperbolic factor differentiates to q times its
  // partner; the result is re-normalized (cosh powers can reach 2).
  CoeffPoly derive_x() const {
    CoeffPoly r;
    const ScalarPoly q = sp_q();
    for (const auto& [k, s] : terms_) {
      if (k.a != 0)
        r.accumulate(TrigKey{k.a - 1, k.b + 1, k.c, k.d}, s * q * Rational(k.a));
      if (k.b != 0)
        r.accumulate(TrigKey{k.a + 1, k.b - 1, k.c, k.d}, s * q * Rational(k.b));
    }
    return r;
  }

  // Exact d/dy.
  CoeffPoly derive_y() const {
    CoeffPoly r;
    const ScalarPoly q = sp_q();
    for (const auto& [k, s] : terms_) {
      if (k.c != 0)
        r.accumulate(TrigKey{k.a, k.b, k.c - 1, k.d + 1}, s * q * Rational(k.c));
      if (k.d != 0)
        r.accumulate(TrigKey{k.a, k.b, k.c + 1, k.d - 1}, s * q * Rational(-k.d));
    }
    return r;
  }

  // k -> k + by in every scalar, re-expanded exactly.
  CoeffPoly shift_k(int by) const {
    CoeffPoly r;
    for (const auto& [k, s] : terms_) {
      auto shifted = s.shifted(VAR_K, Rational(by));
      if (!shifted.is_zero()) r.terms_[k] = shifted;
    }
    return r;
  }

  double eval(double q, double k, double x, double y) const {
    double sum = 0.0;
    const double sh = std::sinh(q * x), ch = std::cosh(q * x);
    const double si = std::sin(q * y), co = std::cos(q * y);
    for (const auto& [key, s] : terms_) {
      if (key.a < 0 && sh == 0.0) throw PoleAtOrigin("CoeffPoly::eval: csch pole at x = 0");
      sum += s.eval({q, k}) * ipow(sh, key.a) * ipow(ch, key.b) * ipow(si, key.c) * ipow(co, key.d);
    }
    return sum;
  }

  // Largest csch power present (0 if none); used by numeric guards.
  int max_negative_sinh_power() const {
    int m = 0;
    for (const auto& [k, s] : terms_) m = std::min(m, k.a);
    return -m;
  }

  // ASCII debug form: `(scalar) * sinh^a cosh^b sin^c cos^d + ...`.
  std::string str() const {
    if (terms_.empty()) return "0";
    std::string out;
    bool first = true;
    for (const auto& [k, s] : terms_) {
      if (!first) out += " + ";
      first = false;
      out += "(" + s.str({"q", "k"}) + ")";
      auto piece = [&out](const char* name, int p) {
        if (p != 0) {
          out += std::string(" ") + name;
          if (p != 1) out += "^" + std::to_string(p);
        }
      };
      piece("sinh", k.a);
      piece("cosh", k.b);
      piece("sin", k.c);
      piece("cos", k.d);
    }
    return out;
  }

 private:
  void add_canonical(const TrigKey& k, const ScalarPoly& s) {
    if (s.is_zero()) return;
    auto [it, inserted] = terms_.emplace(k, s);
    if (!inserted) {
      it->second += s;
      if (it->second.is_zero()) terms_.erase(it);
    }
  }

  // Reduce b,d to {0,1} and merge. Only b,c,d >= 0 inputs are lawful.
  void accumulate(TrigKey k, ScalarPoly s) {
    if (k.b < 0 || k.c < 0 || k.d < 0)
      throw InvalidParam("CoeffPoly: negative cosh/sin/cos power is outside the ring");
    if (s.is_zero()) return;
    if (k.b >= 2) {  // cosh^2 = 1 + sinh^2
      accumulate(TrigKey{k.a, k.b - 2, k.c, k.d}, s);
      accumulate(TrigKey{k.a + 2, k.b - 2, k.c, k.d}, s);
      return;
    }
    if (k.d >= 2) {  // cos^2 = 1 - sin^2
      accumulate(TrigKey{k.a, k.b, k.c, k.d - 2}, s);
      accumulate(TrigKey{k.a, k.b, k.c + 2, k.d - 2}, -s);
      return;
    }
    add_canonical(k, s);
  }

  std::map<TrigKey, ScalarPoly> terms_;
};

}  // namespace pdm
