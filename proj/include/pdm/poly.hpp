#pragma once

#include <array>
#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "pdm/rational.hpp"

namespace pdm {

inline double ipow(double base, int e) {
  if (e < 0) return 1.0 / ipow(base, -e);
  double r = 1.0;
  while (e > 0) {
    if (e & 1) r *= base;
    base *= base;
    e >>= 1;
  }
  return r;
}

// Sparse multivariate polynomial over exact rationals, N named variables.
// Canonical form: no zero coefficients, terms ordered by exponent vector.
template <int N>
class Poly {
 public:
  using Key = std::array<int, N>;
  using Terms = std::map<Key, Rational>;

  Poly() = default;
  explicit Poly(const Rational& c) {
    if (!c.is_zero()) terms_[Key{}] = c;
  }

  static Poly constant(const Rational& c) { return Poly(c); }
  static Poly variable(int i, int power = 1) {
    Poly p;
    Key k{};
    k[i] = power;
    p.terms_[k] = Rational(1);
    return p;
  }
  static Poly monomial(const Key& k, const Rational& c) {
    Poly p;
    if (!c.is_zero()) p.terms_[k] = c;
    return p;
  }

  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const {
    return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first == Key{});
  }
  Rational constant_term() const {
    auto it = terms_.find(Key{});
    return it == terms_.end() ? Rational(0) : it->second;
  }
  std::size_t term_count() const { return terms_.size(); }

  void add_term(const Key& k, const Rational& c) {
    if (c.is_zero()) return;
    auto [it, inserted] = terms_.emplace(k, c);
    if (!inserted) {
      it->second += c;
      if (it->second.is_zero()) terms_.erase(it);
    }
  }

  friend Poly operator+(const Poly& a, const Poly& b) {
    Poly r = a;
    for (const auto& [k, c] : b.terms_) r.add_term(k, c);
    return r;
  }
  friend Poly operator-(const Poly& a, const Poly& b) {
    Poly r = a;
    for (const auto& [k, c] : b.terms_) r.add_term(k, -c);
    return r;
  }
  Poly operator-() const {
    Poly r;
    for (const auto& [k, c] : terms_) r.terms_[k] = -c;
    return r;
  }
  friend Poly operator*(const Poly& a, const Poly& b) {
    Poly r;
    for (const auto& [ka, ca] : a.terms_)
      for (const auto& [kb, cb] : b.terms_) {
        Key k;
        for (int i = 0; i < N; ++i) k[i] = ka[i] + kb[i];
        r.add_term(k, ca * cb);
      }
    return r;
  }
  friend Poly operator*(const Poly& a, const Rational& s) {
    Poly r;
    if (s.is_zero()) return r;
    for (const auto& [k, c] : a.terms_) r.terms_[k] = c * s;
    return r;
  }
  friend Poly operator*(const Rational& s, const Poly& a) { return a * s; }

  Poly& operator+=(const Poly& o) { return *this = *this + o; }
  Poly& operator-=(const Poly& o) { return *this = *this - o; }
  Poly& operator*=(const Poly& o) { return *this = *this * o; }

  friend bool operator==(const Poly& a, const Poly& b) { return a.terms_ == b.terms_; }
  friend bool operator!=(const Poly& a, const Poly& b) { return !(a == b); }

  Poly pow(int e) const {
    Poly r = constant(Rational(1));
    for (int i = 0; i < e; ++i) r *= *this;
    return r;
  }

  int degree(int var) const {
    int d = 0;
    for (const auto& [k, c] : terms_) d = std::max(d, k[var]);
    return d;
  }

  // var -> p, expanded exactly.
  Poly substitute(int var, const Poly& p) const {
    int maxdeg = degree(var);
    std::vector<Poly> powers(maxdeg + 1);
    powers[0] = constant(Rational(1));
    for (int e = 1; e <= maxdeg; ++e) powers[e] = powers[e - 1] * p;
    Poly r;
    for (const auto& [k, c] : terms_) {
      Key rest = k;
      rest[var] = 0;
      r += monomial(rest, c) * powers[k[var]];
    }
    return r;
  }

  // var -> var + by.
  Poly shifted(int var, const Rational& by) const {
    return substitute(var, variable(var) + constant(by));
  }

  double eval(const std::array<double, N>& v) const {
    double sum = 0.0;
    for (const auto& [k, c] : terms_) {
      double t = c.to_double();
      for (int i = 0; i < N; ++i) t *= ipow(v[i], k[i]);
      sum += t;
    }
    return sum;
  }

  Rational eval_exact(const std::array<Rational, N>& v) const {
    Rational sum(0);
    for (const auto& [k, c] : terms_) {
      Rational t = c;
      for (int i = 0; i < N; ++i) t *= v[i].pow(k[i]);
      sum += t;
    }
    return sum;
  }

  std::string str(const std::array<std::string, N>& names) const {
    if (terms_.empty()) return "0";
    std::string out;
    bool first = true;
    for (const auto& [k, c] : terms_) {
      if (!first) out += " + ";
      first = false;
      out += c.str();
      for (int i = 0; i < N; ++i) {
        if (k[i] != 0) {
          out += " " + names[i];
          if (k[i] != 1) out += "^" + std::to_string(k[i]);
        }
      }
    }
    return out;
  }

 private:
  Terms terms_;
};

// Scalars of the coefficient ring: rational polynomials in the layer
// parameters q and k.
using ScalarPoly = Poly<2>;
inline constexpr int VAR_Q = 0;
inline constexpr int VAR_K = 1;

inline ScalarPoly sp_const(long long n, long long d = 1) {
  return ScalarPoly::constant(Rational(n, d));
}
inline ScalarPoly sp_q(int power = 1) { return ScalarPoly::variable(VAR_Q, power); }
inline ScalarPoly sp_k(int power = 1) { return ScalarPoly::variable(VAR_K, power); }

// Exact rational function num/den. Equality is cross-multiplied, so no
// polynomial gcd is ever needed.
template <int N>
struct RationalFn {
  Poly<N> num;
  Poly<N> den = Poly<N>::constant(Rational(1));

  bool same_function(const RationalFn& o) const { return num * o.den == o.num * den; }

  // Evaluates num/den; when both vanish, removes the common root in
  // `limit_var` exactly (repeated factor strip) before evaluating.
  double eval_limit(std::array<double, N> v, int limit_var, const Rational& at) const {
    double dden = den.eval(v);
    if (dden != 0.0) return num.eval(v) / dden;
    Poly<N> n = num.shifted(limit_var, at);
    Poly<N> d = den.shifted(limit_var, at);
    auto min_deg = [&](const Poly<N>& p) {
      int m = 1 << 20;
      for (const auto& [k, c] : p.terms()) m = std::min(m, k[limit_var]);
      return m;
    };
    if (n.is_zero()) return 0.0;  // zero function over a vanishing denominator
    int mn = min_deg(n), md = min_deg(d);
    if (mn < md) throw PoleInSigma("rational function: genuine pole");
    auto strip = [&](const Poly<N>& p, int by) {
      Poly<N> r;
      for (const auto& [k, c] : p.terms()) {
        auto kk = k;
        kk[limit_var] -= by;
        r.add_term(kk, c);
      }
      return r;
    };
    n = strip(n, md);
    d = strip(d, md);
    v[limit_var] = 0.0;
    double dd = d.eval(v);
    if (dd == 0.0) throw PoleInSigma("rational function: higher-order pole");
    return n.eval(v) / dd;
  }
};

using RationalFn2 = RationalFn<2>;

}  // namespace pdm
