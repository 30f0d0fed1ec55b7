// Acceptance suite: one line per criterion, nonzero exit when any fails.
// Tolerances are pinned in code next to each check.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "pdm/classical.hpp"
#include "pdm/model2d.hpp"
#include "pdm/model3d.hpp"
#include "pdm/numerics/fd.hpp"
#include "pdm/numerics/symeig.hpp"
#include "pdm/quadalg.hpp"
#include "pdm/report.hpp"
#include "pdm/wavefn.hpp"

using namespace pdm;

namespace {

int g_failures = 0;

void criterion(int idx, const std::string& label, bool pass, const std::string& detail = "") {
  std::printf("[%s] criterion %d: %s%s%s\n", pass ? "PASS" : "FAIL", idx, label.c_str(),
              detail.empty() ? "" : " -- ", detail.c_str());
  if (!pass) ++g_failures;
}

double now_seconds() {
  using clock = std::chrono::steady_clock;
  static const auto t0 = clock::now();
  return std::chrono::duration<double>(clock::now() - t0).count();
}

}  // namespace

int main() {
  auto cat = model2d::build_catalog();

  // 1 -- exact operator identity suite, q and k symbolic, < 10 s
  {
    double t0 = now_seconds();
    bool all = true;
    std::string first_bad;
    for (const auto& rep : model2d::run_identity_suite(cat))
      if (!rep.holds && first_bad.empty()) {
        all = false;
        first_bad = rep.id;
      }
    double dt = now_seconds() - t0;
    bool timed = dt < 10.0;
    char buf[128];
    std::snprintf(buf, sizeof(buf), "%zu identities, %.2f s",
                  model2d::identity_ids().size(), dt);
    criterion(1, "exact 2D identity suite reduces to structural zero", all && timed,
              all ? std::string(buf) : "first failing: " + first_bad);
  }

  // 2 -- structure constants, exact
  auto sc = quadalg::extract_structure_constants(cat);
  {
    const ScalarPoly q2 = sp_q(2), q4 = sp_q(4), q6 = sp_q(6), k = sp_k();
    bool ok =
        sc.alpha == sp_const(8) * q2 && sc.gamma == sp_const(8) * q2 && sc.a.is_zero() &&
        sc.delta0 == sp_const(8) * q4 * (sp_const(2) * k - sp_const(1)) &&
        sc.delta1 == sp_const(-8) * q2 &&
        sc.epsilon0 == sp_const(16) * q4 * (k - sp_const(1)) * (k + sp_const(1)) &&
        sc.epsilon1.is_zero() && sc.zeta0 == sp_const(16) * q6 * k * (k - sp_const(1)) &&
        sc.zeta1 == sp_const(-8) * q4 * (k - sp_const(1)) && sc.zeta2.is_zero() &&
        sc.d0 == sp_const(16) * q4 && sc.d1.is_zero() && sc.z0 == sp_const(16) * q6 * k &&
        sc.z1 == sp_const(-8) * q4 && sc.z2.is_zero();
    criterion(2, "structure constants extracted exactly", ok);
  }

  // 3 -- Casimir polynomial and structure-function factorization, exact
  auto cas = quadalg::casimir(cat, sc);
  {
    using quadalg::Poly3;
    Poly3 H = Poly3::variable(quadalg::V3_H);
    Poly3 q2p = Poly3::variable(0).pow(2), q4p = q2p * q2p;
    Poly3 kk = Poly3::variable(1);
    Poly3 expected = Poly3::constant(Rational(-4)) * q4p *
                     (q2p * (kk * Poly3::constant(Rational(7)) - Poly3::constant(Rational(6))) *
                          Poly3::constant(Rational(2)) -
                      H * Poly3::constant(Rational(3))) *
                     (q2p * kk * Poly3::constant(Rational(2)) - H);
    bool cas_ok = (cas.h_polynomial == expected);
    auto gen = quadalg::structure_function_general(sc, quadalg::casimir_eigenvalue(cas));
    bool phi_ok = (gen - quadalg::structure_function_factorized()).is_zero();
    criterion(3, "Casimir quadratic in H; general structure function factorizes",
              cas_ok && phi_ok);
  }

  // 4 -- spectrum from representations, exact polynomials
  {
    bool ok = true;
    for (int p = 0; p <= 5 && ok; ++p)
      for (auto u : {quadalg::UBranch::half_k, quadalg::UBranch::half_k_plus_1}) {
        auto sel = quadalg::select_physical(p, u);
        ok = ok && sel.upper_physical && !sel.lower_physical &&
             sel.E == quadalg::energy_level_poly(sel.N);
      }
    criterion(4, "upper-sign representation energies match the spectrum for p <= 5", ok);
  }

  // 5 -- matrix elements of L, N <= 6, k in {1/2, 1, 5/2}, q = 1, < 60 s
  {
    double t0 = now_seconds();
    bool ok = true;
    double worst = 0.0;
    std::string bad;
    for (int N = 0; N <= 6 && ok; ++N)
      for (double k : {0.5, 1.0, 2.5}) {
        wavefn::StripParams P{1.0, 96, 80};
        try {
          auto rep = quadalg::verify_l_matrix(N, k, 1.0, cat, P, 1e-8);
          worst = std::max(worst, rep.max_rel_err);
          auto ev = numerics::sym_eigen(rep.block.analytic);
          int i = 0;
          for (int l = N % 2; l <= N; l += 2, ++i)
            if (std::abs(ev.values[i] - (l + 1.0) * (l + 1.0)) > 1e-8 * (l + 1.0) * (l + 1.0))
              ok = false;
        } catch (const std::exception& e) {
          ok = false;
          bad = e.what();
        }
      }
    {
      const ScalarPoly kk = sp_k(), one = sp_const(1);
      bool printed =
          quadalg::sigma_nu(4, 4).same_function(
              {sp_q(2) * (sp_const(13) * kk + sp_const(21)), kk + sp_const(3)}) &&
          quadalg::sigma_nu(4, 2).same_function(
              {sp_q(2) * (sp_const(17) * kk * kk + sp_const(76) * kk + sp_const(39)),
               (kk + one) * (kk + sp_const(3))}) &&
          quadalg::sigma_nu(4, 0).same_function(
              {sp_const(5) * sp_q(2) * (kk + sp_const(3)), kk + one}) &&
          quadalg::tau_sq_nu(4, 4).same_function(
              {sp_const(18) * sp_q(4) * (kk + one) * (sp_const(2) * kk + sp_const(3)) *
                   (sp_const(2) * kk + sp_const(9)),
               (kk + sp_const(2)) * (kk + sp_const(3)).pow(2)}) &&
          quadalg::tau_sq_nu(4, 2).same_function(
              {sp_const(10) * sp_q(4) * (kk + sp_const(3)) * (sp_const(2) * kk + one) *
                   (sp_const(2) * kk + sp_const(7)),
               (kk + one).pow(2) * (kk + sp_const(2))});
      ok = ok && printed;
    }
    double dt = now_seconds() - t0;
    char buf[128];
    std::snprintf(buf, sizeof(buf), "max entry rel err %.2e, %.1f s", worst, dt);
    criterion(5, "L matrix elements: quadrature vs sigma/tau and printed N=4 block",
              ok && dt < 60.0, bad.empty() ? buf : bad);
  }

  // 6 -- wavefunction suite
  {
    bool ok = true;
    std::string detail;
    // Gram of all psi_{n,l}, n,l <= 5, k = q = 1
    {
      auto grid = wavefn::make_strip_grid(1.0, 96, 80);
      std::vector<std::vector<double>> vals;
      for (int n = 0; n <= 5; ++n)
        for (int l = 0; l <= 5; ++l)
          vals.push_back(wavefn::grid_values(wavefn::psi_nl(n, l, 1.0, 1.0), grid));
      double dev = 0.0;
      for (std::size_t i = 0; i < vals.size(); ++i)
        for (std::size_t j = i; j < vals.size(); ++j) {
          double g = wavefn::grid_dot(grid, vals[i], vals[j]);
          dev = std::max(dev, std::abs(g - (i == j ? 1.0 : 0.0)));
        }
      char buf[64];
      std::snprintf(buf, sizeof(buf), "Gram dev %.2e", dev);
      detail = buf;
      ok = ok && dev <= 1e-10;
    }
    // eigen-residuals on both bases
    {
      std::mt19937 rng(2024);
      std::uniform_real_distribution<double> ux(0.3, 2.2), uy(-1.0, 1.0);
      for (double k : {0.5, 1.0, 2.5})
        for (double q : {1.0, 2.0})
          for (int N = 0; N <= 8 && ok; ++N)
            for (auto [n, l] : wavefn::level_states(N)) {
              auto p = wavefn::psi_nl(n, l, k, q);
              double E = wavefn::energy_2d(N, k, q);
              double Leig = (l + 1.0) * (l + 1.0) * q * q;
              for (int i = 0; i < 20; ++i) {
                double x = ux(rng) / q, y = uy(rng) / q;
                double hres = std::abs(apply(cat.H, p, q, k, x, y) - E * p.value({x, y})) / E;
                double lres =
                    std::abs(apply(cat.L, p, q, k, x, y) - Leig * p.value({x, y})) / Leig;
                if (hres > 1e-9 || lres > 1e-9) ok = false;
              }
            }
      for (int N = 0; N <= 6 && ok; ++N) {
        wavefn::StripParams P{1.0, 96, 80};
        auto sb = wavefn::second_basis(N, 1.0, 1.0, cat.R, P);
        double E = wavefn::energy_2d(N, 1.0, 1.0);
        for (const auto& e : sb.entries) {
          double rv = wavefn::r_eigenvalue(e.nu, 1.0, 1.0);
          for (int i = 0; i < 20; ++i) {
            double x = ux(rng), y = uy(rng);
            double hres =
                std::abs(apply(cat.H, e.field, 1.0, 1.0, x, y) - E * e.field.value({x, y})) / E;
            double rres =
                std::abs(apply(cat.R, e.field, 1.0, 1.0, x, y) - rv * e.field.value({x, y})) / E;
            if (hres > 1e-9 || rres > 1e-9) ok = false;
          }
        }
      }
    }
    // boundary suite, positive and negative
    {
      for (double k : {0.5, 1.0, 2.5}) {
        if (!wavefn::boundary_report(wavefn::psi_nl(1, 2, k, 1.0), 1.0).passes) ok = false;
        if (!wavefn::boundary_report(wavefn::omega_zero_mode(wavefn::ZeroModeKind::eta, 2.0, k, 1.0),
                                     1.0)
                 .passes)
          ok = false;
      }
      auto cb = wavefn::boundary_report(wavefn::chibar_l(0, 1.0), 1.0);
      auto ob = wavefn::boundary_report(
          wavefn::omega_zero_mode(wavefn::ZeroModeKind::etabar, 2.0, 1.0, 1.0), 1.0);
      if (cb.passes || cb.max_boundary < 1e-3 * cb.sup_norm) ok = false;
      if (ob.passes || ob.max_boundary < 1e-3 * ob.sup_norm) ok = false;
    }
    criterion(6, "wavefunction suite: Gram, residuals, boundary (+ negative tests)", ok,
              detail);
  }

  // 7 -- finite-difference cross-check, Richardson, order ~ 2
  {
    bool ok = true;
    double worst = 0.0;
    for (double k : {1.0, 2.0})
      for (int l : {0, 1}) {
        auto fd = numerics::fd_cross_check(l + 1.0, k, 1.0, 12.0, 399, 2);
        for (int n = 0; n < 2; ++n) {
          double analytic = (2.0 * n + 1.0 + l + 1.0) * (2.0 * n + 2.0 * k + l + 1.0);
          double rel = std::abs(fd.eigenvalues[n] - analytic) / analytic;
          worst = std::max(worst, rel);
          if (rel > 1e-3) ok = false;
        }
      }
    auto raw = [](int nodes) {
      return numerics::fd_cross_check(1.0, 1.0, 1.0, 12.0, nodes, 1, false).raw_coarse[0];
    };
    double e1 = raw(200), e2 = raw(401), e4 = raw(803);
    double order = std::log2((e1 - e2) / (e2 - e4));
    if (!(order > 1.6 && order < 2.4)) ok = false;
    char buf[96];
    std::snprintf(buf, sizeof(buf), "max rel err %.2e, observed order %.2f", worst, order);
    criterion(7, "FD cross-check within 0.1% after Richardson; order 2 +- 0.4", ok, buf);
  }

  // 8 -- 3D channels
  {
    bool ok = true;
    std::string detail;
    double e_exact = 4.0 + 3.0 * std::numbers::sqrt2;
    auto s000 = model3d::box_state(0, 0, 0, 1.0, 1.0);
    if (std::abs(s000.E - e_exact) > 1e-14 * e_exact) ok = false;
    auto fd = numerics::fd_cross_check(std::numbers::sqrt2, 1.0, 1.0, 12.0, 399, 1);
    if (std::abs(fd.eigenvalues[0] - e_exact) / e_exact > 1e-3) ok = false;

    bool found85 = false;
    for (const auto& g : model3d::box_degeneracy_scan(150.0, 1.0, 1.0))
      if (g.n == 0 && g.delta_sq == 85) {
        found85 = g.lm.size() == 4 && g.lm[0] == std::pair{1, 8} && g.lm[1] == std::pair{5, 6};
      }
    if (!found85) ok = false;

    if (std::abs(numerics::bessel_zero(0, 1) - 2.404825557695773) > 1e-12) ok = false;

    auto rule = numerics::remap(numerics::gauss_legendre(200), 0.0, 1.0);
    double worst_orth = 0.0;
    for (int m : {0, 1})
      for (int s1 = 1; s1 <= 3; ++s1)
        for (int s2 = s1; s2 <= 3; ++s2) {
          auto a = model3d::cyl_state(0, m, s1, 1.0, 1.0, 1.0);
          auto b = model3d::cyl_state(0, m, s2, 1.0, 1.0, 1.0);
          double ip = numerics::integrate(rule, [&](double rho) {
            return a.radial_norm * numerics::bessel_J(m, a.j_ms * rho) * b.radial_norm *
                   numerics::bessel_J(m, b.j_ms * rho) * rho;
          });
          worst_orth = std::max(worst_orth, std::abs(ip - (s1 == s2 ? 1.0 : 0.0)));
        }
    if (worst_orth > 1e-9) ok = false;
    char buf[96];
    std::snprintf(buf, sizeof(buf), "radial orth dev %.2e", worst_orth);
    criterion(8, "3D: box ground energy, delta^2 = 85 group, Bessel zero, radial orth", ok,
              buf);
  }

  // 9 -- classical Poisson algebra, exact
  {
    auto ccat = classical::classical_catalog();
    bool ok = true;
    for (const auto& rep : classical::verify_poisson_algebra(ccat)) ok = ok && rep.holds;
    criterion(9, "classical Poisson relations and vanishing Casimir, exact", ok);
  }

  // 10 -- deterministic reports
  {
    auto once = report::render_json(
        "verify", {{"scope", "\"all\""}, {"k", report::fmt17(1.0)}, {"q", report::fmt17(1.0)}},
        report::run_scope("all", 1.0, 1.0));
    auto twice = report::render_json(
        "verify", {{"scope", "\"all\""}, {"k", report::fmt17(1.0)}, {"q", report::fmt17(1.0)}},
        report::run_scope("all", 1.0, 1.0));
    criterion(10, "verify --scope all is byte-identical across runs", once == twice);
  }

  if (g_failures == 0) std::printf("acceptance: all criteria passed\n");
  else std::printf("acceptance: %d criterion(s) FAILED\n", g_failures);
  return g_failures == 0 ? 0 : 1;
}
