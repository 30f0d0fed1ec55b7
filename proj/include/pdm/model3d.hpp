#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <string>
#include <vector>

#include "pdm/field.hpp"
#include "pdm/numerics/quadrature.hpp"
#include "pdm/numerics/special.hpp"
#include "pdm/wavefn.hpp"

namespace pdm::model3d {

using numerics::Jet;

inline double energy_3d(int n, double delta, double k, double q) {
  return q * q * (2.0 * n + 1.0 + delta) * (2.0 * n + 2.0 * k + delta);
}

// ---------------------------------------------------------------------------
// parallelepipedal channel

struct BoxState {
  int n = 0, l = 0, m = 0;
  int delta_sq = 0;    // exact (l+1)^2 + (m+1)^2
  double delta = 0.0;  // sqrt(delta_sq)
  double E = 0.0;
  double norm = 0.0;   // closed-form longitudinal norm
};

inline BoxState box_state(int n, int l, int m, double k, double q) {
  if (n < 0 || l < 0 || m < 0 || !(k > 0.0) || !(q > 0.0))
    throw InvalidParam("box_state: requires n,l,m >= 0 and k,q > 0");
  BoxState s;
  s.n = n;
  s.l = l;
  s.m = m;
  s.delta_sq = (l + 1) * (l + 1) + (m + 1) * (m + 1);
  s.delta = std::sqrt(static_cast<double>(s.delta_sq));
  s.E = energy_3d(n, s.delta, k, q);
  s.norm = wavefn::phi_norm_closed(n, s.delta, k, q);
  return s;
}

// psi_{n,l,m} = phi_{n,delta}(x) chi_l(y) zeta_m(z); zeta is chi with the
// third coordinate substituted.
inline SmoothField3 box_field(const BoxState& s, double k, double q) {
  SmoothField3 f("box(" + std::to_string(s.n) + "," + std::to_string(s.l) + "," +
                 std::to_string(s.m) + ")");
  f.add_term(1.0, {wavefn::phi_axis(s.n, s.delta, k, q, s.norm), wavefn::chi_axis(s.l, q),
                   wavefn::chi_axis(s.m, q)});
  return f;
}

// Longitudinal norm by quadrature with an extra smooth substitution
// t = sin(theta) on top of t = tanh(qx); the irrational sech exponent then
// has a high-order zero at the endpoint and Gauss-Legendre converges to
// machine precision.
inline double phi_norm_quadrature_smooth(int n, double delta, double k, double q,
                                         int nodes = 160) {
  auto raw = wavefn::phi_axis(n, delta, k, q);
  auto rule = numerics::remap(numerics::gauss_legendre(nodes), 0.0, 0.5 * std::numbers::pi);
  double I = numerics::integrate(rule, [&](double theta) {
    double t = std::sin(theta);
    double x = std::atanh(t) / q;
    double v = raw(x).value();
    return v * v / (q * std::cos(theta));
  });
  return 1.0 / std::sqrt(I);
}

// Pointwise action of the channel Hamiltonian
//   H = -dx cosh^2 dx - cosh^2 (dy^2 + dz^2) - q^2 cosh^2 + q^2 k(k-1) csch^2
// on a 3D field.
inline double apply_H3_box(const SmoothField3& f, double k, double q, double x, double y,
                           double z) {
  double sh = std::sinh(q * x), ch = std::cosh(q * x);
  double fxx = f.deriv({x, y, z}, {2, 0, 0});
  double fx = f.deriv({x, y, z}, {1, 0, 0});
  double fyy = f.deriv({x, y, z}, {0, 2, 0});
  double fzz = f.deriv({x, y, z}, {0, 0, 2});
  double fv = f.value({x, y, z});
  return -ch * ch * (fxx + fyy + fzz) - 2.0 * q * sh * ch * fx +
         (-q * q * ch * ch + q * q * k * (k - 1.0) / (sh * sh)) * fv;
}

// Field-level actions used by the integrability checks.
inline SmoothField3 apply_H3_box_field(const SmoothField3& f, double k, double q) {
  SmoothField3 out(f.tag());
  auto add_scaled = [&](const SmoothField3::Term& t, int dx_order,
                        const std::function<Jet(double, const Jet&)>& xweight) {
    SmoothField3::Term nt = t;
    auto fx = t.axis[0].fn;
    nt.axis[0].fn = [fx, dx_order, xweight](double x) {
      return xweight(x, numerics::jet_derivative(fx(x), dx_order));
    };
    nt.axis[0].avail = t.axis[0].avail - dx_order;
    out.add_term(nt);
  };
  auto cosh2 = [q](double x, const Jet& j) {
    Jet ch = numerics::jet_cosh(Jet::seed(x) * q);
    return ch * ch * j * -1.0;
  };
  auto drift = [q](double x, const Jet& j) {
    Jet u = Jet::seed(x) * q;
    return numerics::jet_sinh(u) * numerics::jet_cosh(u) * j * (-2.0 * q);
  };
  auto potential = [q, k](double x, const Jet& j) {
    Jet u = Jet::seed(x) * q;
    Jet ch = numerics::jet_cosh(u), sh = numerics::jet_sinh(u);
    Jet v = ch * ch * (-q * q) + numerics::jet_powi(sh, -2) * (q * q * k * (k - 1.0));
    return v * j;
  };
  for (const auto& t : f.field_terms()) {
    add_scaled(t, 2, cosh2);
    add_scaled(t, 1, drift);
    add_scaled(t, 0, potential);
    // transverse Laplacian terms
    for (int axis : {1, 2}) {
      SmoothField3::Term nt = t;
      auto fa = t.axis[axis].fn;
      nt.axis[axis].fn = [fa](double w) { return numerics::jet_derivative(fa(w), 2); };
      nt.axis[axis].avail = t.axis[axis].avail - 2;
      auto fx = t.axis[0].fn;
      nt.axis[0].fn = [fx, q](double x) {
        Jet ch = numerics::jet_cosh(Jet::seed(x) * q);
        return ch * ch * fx(x) * -1.0;
      };
      out.add_term(nt);
    }
  }
  return out;
}

inline SmoothField3 apply_axis_second_derivative(const SmoothField3& f, int axis,
                                                 double scale) {
  SmoothField3 out(f.tag());
  for (const auto& t : f.field_terms()) {
    SmoothField3::Term nt = t;
    auto fa = t.axis[axis].fn;
    nt.axis[axis].fn = [fa, scale](double w) {
      return numerics::jet_derivative(fa(w), 2) * scale;
    };
    nt.axis[axis].avail = t.axis[axis].avail - 2;
    out.add_term(nt);
  }
  return out;
}

// L = -dy^2, M = -dz^2 for the box.
inline SmoothField3 apply_L_box(const SmoothField3& f) {
  return apply_axis_second_derivative(f, 1, -1.0);
}
inline SmoothField3 apply_M_box(const SmoothField3& f) {
  return apply_axis_second_derivative(f, 2, -1.0);
}

struct DegenerateGroup {
  int n = 0;
  int delta_sq = 0;
  double E = 0.0;
  std::vector<std::pair<int, int>> lm;  // members, lexicographic
};

// Exact-integer degeneracy scan: states share a group iff they share n and
// the integer delta^2 = (l+1)^2 + (m+1)^2. Covers the (l,m) swap pairs and
// the accidental sum-of-two-squares coincidences with no float compares.
inline std::vector<DegenerateGroup> box_degeneracy_scan(double E_max, double k, double q) {
  if (!(E_max > 0.0)) throw InvalidParam("box_degeneracy_scan: E_max must be positive");
  std::map<std::pair<int, int>, DegenerateGroup> groups;  // (n, delta_sq)
  for (int n = 0; energy_3d(n, std::numbers::sqrt2, k, q) <= E_max; ++n)
    for (int l = 0; energy_3d(n, std::sqrt((l + 1.0) * (l + 1.0) + 1.0), k, q) <= E_max; ++l)
      for (int m = 0;; ++m) {
        int dsq = (l + 1) * (l + 1) + (m + 1) * (m + 1);
        double E = energy_3d(n, std::sqrt(static_cast<double>(dsq)), k, q);
        if (E > E_max) break;
        auto& g = groups[{n, dsq}];
        g.n = n;
        g.delta_sq = dsq;
        g.E = E;
        g.lm.emplace_back(l, m);
      }
  std::vector<DegenerateGroup> out;
  for (auto& [key, g] : groups) {
    std::sort(g.lm.begin(), g.lm.end());
    out.push_back(std::move(g));
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const DegenerateGroup& a, const DegenerateGroup& b) { return a.E < b.E; });
  return out;
}

// ---------------------------------------------------------------------------
// cylindrical channel

struct CylState {
  int n = 0, m = 0, s = 1;  // m signed
  double j_ms = 0.0;        // Bessel zero j_{|m|,s}
  double delta = 0.0;       // j_{|m|,s}/(qR)
  double E = 0.0;
  double radial_norm = 0.0; // sqrt(2)/(R J_{|m|+1}(j_{|m|,s}))
};

inline CylState cyl_state(int n, int m, int s, double k, double q, double R) {
  if (n < 0 || s < 1 || !(k > 0.0) || !(q > 0.0) || !(R > 0.0))
    throw InvalidParam("cyl_state: requires n >= 0, s >= 1, k,q,R > 0");
  CylState st;
  st.n = n;
  st.m = m;
  st.s = s;
  int am = std::abs(m);
  st.j_ms = numerics::bessel_zero(am, s);
  st.delta = st.j_ms / (q * R);
  st.E = energy_3d(n, st.delta, k, q);
  st.radial_norm = std::numbers::sqrt2 / (R * std::abs(numerics::bessel_J(am + 1, st.j_ms)));
  return st;
}

// Angular factor in the real convention: cos(m phi)/sqrt(pi) for m > 0,
// sin(|m| phi)/sqrt(pi) for m < 0, 1/sqrt(2 pi) for m = 0. Spans the same
// eigenspaces of the angular momentum squared as the complex exponentials.
inline SmoothField3::AxisFn angular_axis(int m) {
  const double pi = std::numbers::pi;
  if (m == 0) {
    double c = 1.0 / std::sqrt(2.0 * pi);
    return [c](double) { return Jet::constant(c); };
  }
  int am = std::abs(m);
  bool cosine = m > 0;
  double amp = 1.0 / std::sqrt(pi);
  return [am, cosine, amp](double phi) {
    Jet u = Jet::seed(phi) * static_cast<double>(am);
    return (cosine ? numerics::jet_cos(u) : numerics::jet_sin(u)) * amp;
  };
}

inline SmoothField3::AxisFn radial_axis(int am, double kappa, double scale) {
  return [am, kappa, scale](double rho) {
    Jet j = numerics::bessel_J_jet(am, kappa * rho);
    // chain rule for the scaled argument
    Jet out;
    double f = 1.0;
    for (int r = 0; r <= numerics::kJetOrder; ++r) {
      out.c[r] = j.c[r] * f * scale;
      f *= kappa;
    }
    return out;
  };
}

// psi_{n,m,s} on axes (x, rho, phi).
inline SmoothField3 cyl_field(const CylState& st, double k, double q, double R) {
  double kappa = st.j_ms / R;
  double xnorm = phi_norm_quadrature_smooth(st.n, st.delta, k, q);
  SmoothField3 f("cyl(" + std::to_string(st.n) + "," + std::to_string(st.m) + "," +
                 std::to_string(st.s) + ")");
  f.add_term(1.0, {wavefn::phi_axis(st.n, st.delta, k, q, xnorm),
                   radial_axis(std::abs(st.m), kappa, st.radial_norm), angular_axis(st.m)});
  return f;
}

// Transverse polar Laplacian with a sign: L = -(drho^2 + rho^-1 drho +
// rho^-2 dphi^2), acting on (x, rho, phi) fields.
inline SmoothField3 apply_L_cyl(const SmoothField3& f) {
  SmoothField3 out(f.tag());
  for (const auto& t : f.field_terms()) {
    // -drho^2
    {
      SmoothField3::Term nt = t;
      auto fr = t.axis[1].fn;
      nt.axis[1].fn = [fr](double r) { return numerics::jet_derivative(fr(r), 2) * -1.0; };
      nt.axis[1].avail = t.axis[1].avail - 2;
      out.add_term(nt);
    }
    // -rho^-1 drho
    {
      SmoothField3::Term nt = t;
      auto fr = t.axis[1].fn;
      nt.axis[1].fn = [fr](double r) {
        return numerics::jet_powi(Jet::seed(r), -1) * numerics::jet_derivative(fr(r), 1) * -1.0;
      };
      nt.axis[1].avail = t.axis[1].avail - 1;
      out.add_term(nt);
    }
    // -rho^-2 dphi^2
    {
      SmoothField3::Term nt = t;
      auto fr = t.axis[1].fn;
      auto fp = t.axis[2].fn;
      nt.axis[1].fn = [fr](double r) {
        return numerics::jet_powi(Jet::seed(r), -2) * fr(r) * -1.0;
      };
      nt.axis[2].fn = [fp](double p) { return numerics::jet_derivative(fp(p), 2); };
      nt.axis[2].avail = t.axis[2].avail - 2;
      out.add_term(nt);
    }
  }
  return out;
}

// Angular momentum generator handled as the real operator dphi; the
// imaginary unit of the textbook convention is tracked by callers.
inline SmoothField3 apply_M_cyl(const SmoothField3& f) {
  SmoothField3 out(f.tag());
  for (const auto& t : f.field_terms()) {
    SmoothField3::Term nt = t;
    auto fp = t.axis[2].fn;
    nt.axis[2].fn = [fp](double p) { return numerics::jet_derivative(fp(p), 1); };
    nt.axis[2].avail = t.axis[2].avail - 1;
    out.add_term(nt);
  }
  return out;
}

inline double apply_H3_cyl(const SmoothField3& f, double k, double q, double x, double rho,
                           double phi) {
  double sh = std::sinh(q * x), ch = std::cosh(q * x);
  double fxx = f.deriv({x, rho, phi}, {2, 0, 0});
  double fx = f.deriv({x, rho, phi}, {1, 0, 0});
  double frr = f.deriv({x, rho, phi}, {0, 2, 0});
  double fr = f.deriv({x, rho, phi}, {0, 1, 0});
  double fpp = f.deriv({x, rho, phi}, {0, 0, 2});
  double fv = f.value({x, rho, phi});
  double lap = frr + fr / rho + fpp / (rho * rho);
  return -ch * ch * (fxx + lap) - 2.0 * q * sh * ch * fx +
         (-q * q * ch * ch + q * q * k * (k - 1.0) / (sh * sh)) * fv;
}

// ---------------------------------------------------------------------------
// spectrum enumeration

struct Spectrum3DEntry {
  std::string model;          // "box" or "cyl"
  std::array<int, 3> qn{};    // (n,l,m) or (n,m,s)
  double delta = 0.0;
  double E = 0.0;
  int group = 0;
};

inline std::vector<Spectrum3DEntry> spectrum_box(int count, double k, double q) {
  if (count < 1) throw InvalidParam("spectrum_box: count must be >= 1");
  int nmax = 2, tmax = 4;
  for (;;) {
    std::vector<BoxState> states;
    for (int n = 0; n <= nmax; ++n)
      for (int l = 0; l <= tmax; ++l)
        for (int m = 0; m <= tmax; ++m) states.push_back(box_state(n, l, m, k, q));
    std::stable_sort(states.begin(), states.end(), [](const BoxState& a, const BoxState& b) {
      if (a.E != b.E) return a.E < b.E;
      return std::array{a.n, a.l, a.m} < std::array{b.n, b.l, b.m};
    });
    if (static_cast<int>(states.size()) >= count) {
      double Ecut = states[count - 1].E;
      double excl = std::min(
          energy_3d(nmax + 1, std::numbers::sqrt2, k, q),
          energy_3d(0, std::sqrt((tmax + 2.0) * (tmax + 2.0) + 1.0), k, q));
      if (Ecut < excl) {
        std::vector<Spectrum3DEntry> out;
        std::map<std::pair<int, int>, int> group_of;
        for (int i = 0; i < count; ++i) {
          const auto& s = states[i];
          auto [it, fresh] =
              group_of.emplace(std::pair{s.n, s.delta_sq}, static_cast<int>(group_of.size()));
          out.push_back({"box", {s.n, s.l, s.m}, s.delta, s.E, it->second});
        }
        return out;
      }
    }
    nmax += 2;
    tmax *= 2;
  }
}

inline std::vector<Spectrum3DEntry> spectrum_cyl(int count, double k, double q, double R) {
  if (count < 1) throw InvalidParam("spectrum_cyl: count must be >= 1");
  int nmax = 2, mmax = 4, smax = 4;
  for (;;) {
    std::vector<CylState> states;
    for (int n = 0; n <= nmax; ++n)
      for (int m = -mmax; m <= mmax; ++m)
        for (int s = 1; s <= smax; ++s) states.push_back(cyl_state(n, m, s, k, q, R));
    std::stable_sort(states.begin(), states.end(), [](const CylState& a, const CylState& b) {
      if (a.E != b.E) return a.E < b.E;
      return std::array{a.n, a.m, a.s} < std::array{b.n, b.m, b.s};
    });
    if (static_cast<int>(states.size()) >= count) {
      double Ecut = states[count - 1].E;
      double dmin = numerics::bessel_zero(0, 1) / (q * R);
      double excl = std::min(
          {energy_3d(nmax + 1, dmin, k, q),
           energy_3d(0, numerics::bessel_zero(mmax + 1, 1) / (q * R), k, q),
           energy_3d(0, numerics::bessel_zero(0, smax + 1) / (q * R), k, q)});
      if (Ecut < excl) {
        std::vector<Spectrum3DEntry> out;
        std::map<std::array<int, 3>, int> group_of;
        for (int i = 0; i < count; ++i) {
          const auto& s = states[i];
          auto [it, fresh] = group_of.emplace(std::array{s.n, std::abs(s.m), s.s},
                                              static_cast<int>(group_of.size()));
          out.push_back({"cyl", {s.n, s.m, s.s}, s.delta, s.E, it->second});
        }
        return out;
      }
    }
    nmax += 2;
    mmax *= 2;
    smax *= 2;
  }
}

}  // namespace pdm::model3d
