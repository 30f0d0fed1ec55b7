#pragma once

#include <array>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "pdm/numerics/jet.hpp"

namespace pdm {

using numerics::Jet;
using numerics::kJetOrder;

// A field on the domain represented as a finite sum of separable terms
//   coef * f_1(x_1) * ... * f_D(x_D),
// where each axis function produces an exact truncated Taylor jet. Mixed
// partial derivatives are then products of univariate derivatives, so
// symmetry of mixed partials holds by construction. `avail` tracks how
// many derivative orders of a term's axis remain meaningful after the
// term was produced by applying differential operators.
template <int D>
class SeparableField {
 public:
  using AxisFn = std::function<Jet(double)>;

  struct Axis {
    AxisFn fn;
    int avail = kJetOrder;
  };
  struct Term {
    double coef = 1.0;
    std::array<Axis, D> axis;
  };

  SeparableField() = default;
  explicit SeparableField(std::string tag, bool physical = true)
      : tag_(std::move(tag)), physical_(physical) {}

  const std::string& tag() const { return tag_; }
  bool physical() const { return physical_; }
  void set_physical(bool p) { physical_ = p; }
  void set_tag(std::string t) { tag_ = std::move(t); }

  const std::vector<Term>& field_terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }

  void add_term(double coef, std::array<AxisFn, D> fns, int avail = kJetOrder) {
    Term t;
    t.coef = coef;
    for (int i = 0; i < D; ++i) t.axis[i] = Axis{std::move(fns[i]), avail};
    terms_.push_back(std::move(t));
  }
  void add_term(Term t) { terms_.push_back(std::move(t)); }

  int max_order() const {
    int m = kJetOrder;
    for (const auto& t : terms_)
      for (const auto& ax : t.axis) m = std::min(m, ax.avail);
    return m;
  }

  double value(const std::array<double, D>& p) const {
    std::array<int, D> zero{};
    return deriv(p, zero);
  }

  // Mixed partial d^{o_1}...d^{o_D} at p.
  double deriv(const std::array<double, D>& p, const std::array<int, D>& order) const {
    double sum = 0.0;
    for (const auto& t : terms_) {
      double prod = t.coef;
      for (int i = 0; i < D; ++i) {
        if (order[i] > t.axis[i].avail)
          throw DerivativeOrderUnsupported("SeparableField: derivative order exceeds budget");
        prod *= t.axis[i].fn(p[i]).deriv(order[i]);
      }
      sum += prod;
    }
    return sum;
  }

  // All mixed partials with per-axis order <= ord[i], evaluated in one
  // pass over the terms (each axis jet is computed once per term).
  // Flat layout: index i varies fastest with stride ord[i]+1.
  std::vector<double> deriv_table(const std::array<double, D>& p,
                                  const std::array<int, D>& ord) const {
    int total = 1;
    for (int i = 0; i < D; ++i) total *= ord[i] + 1;
    std::vector<double> out(total, 0.0);
    for (const auto& t : terms_) {
      std::array<Jet, D> jets;
      for (int i = 0; i < D; ++i) {
        if (ord[i] > t.axis[i].avail)
          throw DerivativeOrderUnsupported("SeparableField: derivative order exceeds budget");
        jets[i] = t.axis[i].fn(p[i]);
      }
      std::array<int, D> idx{};
      for (int flat = 0; flat < total; ++flat) {
        int rem = flat;
        double prod = t.coef;
        for (int i = 0; i < D; ++i) {
          idx[i] = rem % (ord[i] + 1);
          rem /= ord[i] + 1;
          prod *= jets[i].deriv(idx[i]);
        }
        out[flat] += prod;
      }
    }
    return out;
  }

  std::vector<double> deriv_table(const std::array<double, D>& p, int ord) const {
    std::array<int, D> o;
    o.fill(ord);
    return deriv_table(p, o);
  }

  SeparableField scaled(double s) const {
    SeparableField r = *this;
    for (auto& t : r.terms_) t.coef *= s;
    return r;
  }

  friend SeparableField operator+(const SeparableField& a, const SeparableField& b) {
    SeparableField r = a;
    for (const auto& t : b.terms_) r.terms_.push_back(t);
    r.physical_ = a.physical_ && b.physical_;
    return r;
  }

  // Pointwise product; jets multiply per axis.
  friend SeparableField operator*(const SeparableField& a, const SeparableField& b) {
    SeparableField r;
    for (const auto& ta : a.terms_)
      for (const auto& tb : b.terms_) {
        Term t;
        t.coef = ta.coef * tb.coef;
        for (int i = 0; i < D; ++i) {
          auto fa = ta.axis[i].fn;
          auto fb = tb.axis[i].fn;
          t.axis[i].fn = [fa, fb](double x) { return fa(x) * fb(x); };
          t.axis[i].avail = std::min(ta.axis[i].avail, tb.axis[i].avail);
        }
        r.terms_.push_back(std::move(t));
      }
    return r;
  }

 private:
  std::vector<Term> terms_;
  std::string tag_;
  bool physical_ = true;
};

// Analytic function objects on the 2D strip; also reused with axes
// (x, rho) plus an angular factor for the cylindrical channel.
using SmoothField = SeparableField<2>;
using SmoothField3 = SeparableField<3>;

inline SmoothField::AxisFn axis_one() {
  return [](double) { return Jet::constant(1.0); };
}

}  // namespace pdm
