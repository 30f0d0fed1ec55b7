#pragma once

#include <cstdio>
#include <string>
#include <vector>

#include "pdm/classical.hpp"
#include "pdm/model2d.hpp"
#include "pdm/quadalg.hpp"
#include "pdm/wavefn.hpp"

namespace pdm::report {

inline constexpr const char* kToolVersion = "1.0.0";

// Fixed float formatting: 17 significant digits in JSON (binary64
// round-trip), 12 in CSV. Identical inputs therefore produce
// byte-identical reports.
inline std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}
inline std::string fmt12(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

inline std::string json_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      default: out += c;
    }
  }
  return out;
}

struct Check {
  std::string id;
  bool pass = false;
  double lhs = 0.0;
  double rhs = 0.0;
  double abs_err = 0.0;
  double rel_err = 0.0;
};

inline Check make_check(std::string id, double lhs, double rhs, double tol_rel) {
  Check c;
  c.id = std::move(id);
  c.lhs = lhs;
  c.rhs = rhs;
  c.abs_err = std::abs(lhs - rhs);
  c.rel_err = c.abs_err / std::max(std::abs(rhs), 1e-300);
  c.pass = c.abs_err <= tol_rel * std::max(std::abs(rhs), 1.0);
  return c;
}

inline Check exact_check(std::string id, bool holds, double residual_terms = 0.0) {
  Check c;
  c.id = std::move(id);
  c.pass = holds;
  c.lhs = residual_terms;
  c.rhs = 0.0;
  c.abs_err = residual_terms;
  c.rel_err = residual_terms;
  return c;
}

inline std::string render_json(const std::string& command,
                               const std::vector<std::pair<std::string, std::string>>& params,
                               const std::vector<Check>& checks) {
  std::string out = "{\n";
  out += "  \"tool_version\": \"" + std::string(kToolVersion) + "\",\n";
  out += "  \"command\": \"" + json_escape(command) + "\",\n";
  out += "  \"params\": {";
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (i) out += ", ";
    out += "\"" + json_escape(params[i].first) + "\": " + params[i].second;
  }
  out += "},\n  \"checks\": [\n";
  int passed = 0;
  for (std::size_t i = 0; i < checks.size(); ++i) {
    const Check& c = checks[i];
    passed += c.pass ? 1 : 0;
    out += "    {\"id\": \"" + json_escape(c.id) + "\", \"pass\": " +
           (c.pass ? "true" : "false") + ", \"lhs\": " + fmt17(c.lhs) +
           ", \"rhs\": " + fmt17(c.rhs) + ", \"abs_err\": " + fmt17(c.abs_err) +
           ", \"rel_err\": " + fmt17(c.rel_err) + "}";
    out += (i + 1 < checks.size()) ? ",\n" : "\n";
  }
  out += "  ],\n";
  out += "  \"summary\": {\"total\": " + std::to_string(checks.size()) +
         ", \"passed\": " + std::to_string(passed) + "}\n";
  out += "}\n";
  return out;
}

// ---------------------------------------------------------------------------
// verification runners

inline std::vector<Check> run_algebra2d_checks() {
  auto cat = model2d::build_catalog();
  std::vector<Check> out;
  for (const auto& rep : model2d::run_identity_suite(cat))
    out.push_back(exact_check(rep.id, rep.holds,
                              static_cast<double>(rep.residual.monomial_count())));
  return out;
}

inline std::vector<Check> run_classical_checks() {
  auto cat = classical::classical_catalog();
  std::vector<Check> out;
  for (const auto& rep : classical::verify_poisson_algebra(cat))
    out.push_back(exact_check(rep.id, rep.holds, static_cast<double>(rep.residual_terms)));
  return out;
}

inline std::vector<Check> run_quadratic_checks(double kval, double qval) {
  std::vector<Check> out;
  auto cat = model2d::build_catalog();
  auto sc = quadalg::extract_structure_constants(cat);

  // printed coefficient set, exact
  const ScalarPoly q2 = sp_q(2), q4 = sp_q(4), q6 = sp_q(6), k = sp_k();
  bool constants_ok =
      sc.alpha == sp_const(8) * q2 && sc.gamma == sp_const(8) * q2 && sc.a.is_zero() &&
      sc.delta0 == sp_const(8) * q4 * (sp_const(2) * k - sp_const(1)) &&
      sc.delta1 == sp_const(-8) * q2 &&
      sc.epsilon0 == sp_const(16) * q4 * (k - sp_const(1)) * (k + sp_const(1)) &&
      sc.epsilon1.is_zero() && sc.zeta0 == sp_const(16) * q6 * k * (k - sp_const(1)) &&
      sc.zeta1 == sp_const(-8) * q4 * (k - sp_const(1)) && sc.zeta2.is_zero() &&
      sc.d0 == sp_const(16) * q4 && sc.d1.is_zero() && sc.z0 == sp_const(16) * q6 * k &&
      sc.z1 == sp_const(-8) * q4 && sc.z2.is_zero();
  out.push_back(exact_check("structure_constants_exact", constants_ok));

  auto cas = quadalg::casimir(cat, sc);
  {
    using quadalg::Poly3;
    using quadalg::V3_H;
    Poly3 H = Poly3::variable(V3_H);
    Poly3 q2p = Poly3::variable(0).pow(2), q4p = q2p * q2p;
    Poly3 kk = Poly3::variable(1);
    Poly3 expected = Poly3::constant(Rational(-4)) * q4p *
                     (q2p * (kk * Poly3::constant(Rational(7)) - Poly3::constant(Rational(6))) *
                          Poly3::constant(Rational(2)) -
                      H * Poly3::constant(Rational(3))) *
                     (q2p * kk * Poly3::constant(Rational(2)) - H);
    out.push_back(exact_check("casimir_quadratic_in_H", cas.h_polynomial == expected));
  }
  out.push_back(exact_check("casimir_commutes_with_A", commutator(cas.op, cat.R).is_zero()));
  out.push_back(exact_check("casimir_commutes_with_B", commutator(cas.op, cat.L).is_zero()));

  {
    auto gen = quadalg::structure_function_general(sc, quadalg::casimir_eigenvalue(cas));
    out.push_back(exact_check("structure_function_factorizes",
                              (gen - quadalg::structure_function_factorized()).is_zero()));
  }

  // representation energies for p <= 5, both u branches
  {
    bool ok = true;
    for (int p = 0; p <= 5 && ok; ++p)
      for (auto u : {quadalg::UBranch::half_k, quadalg::UBranch::half_k_plus_1}) {
        auto sel = quadalg::select_physical(p, u);
        ok = ok && sel.upper_physical && !sel.lower_physical &&
             sel.E == quadalg::energy_level_poly(sel.N);
      }
    out.push_back(exact_check("representation_energies_p_le_5", ok));
  }

  // printed N = 4 block as rational functions of k
  {
    const ScalarPoly kk = sp_k(), one = sp_const(1);
    bool ok =
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
    out.push_back(exact_check("printed_N4_block_exact", ok));
  }

  // numeric spot values at the requested (k, q)
  {
    double E0 = wavefn::energy_2d(0, kval, qval);
    double expect = cas.h_polynomial.eval({qval, kval, E0});
    auto p00 = wavefn::psi_nl(0, 0, kval, qval);
    double x = 0.8 / qval, y = 0.3 / qval;
    double measured = apply(cas.op, p00, qval, kval, x, y) / p00.value({x, y});
    out.push_back(make_check("casimir_on_ground_state", measured, expect, 1e-9));
  }

  // quadrature L blocks; a magnitude mismatch becomes a failing check
  for (int N : {2, 3, 4}) {
    wavefn::StripParams P{qval, 96, 80};
    Check c;
    c.id = "l_matrix_quadrature_N" + std::to_string(N);
    try {
      auto rep = quadalg::verify_l_matrix(N, kval, qval, cat, P);
      c.pass = rep.pass;
      c.lhs = rep.max_rel_err;
      c.abs_err = rep.max_rel_err;
      c.rel_err = rep.max_rel_err;
    } catch (const PhaseMismatch&) {
      c.pass = false;
      c.lhs = c.abs_err = c.rel_err = 1.0;
    }
    c.rhs = 0.0;
    out.push_back(c);
  }

  // oscillator realization residual at the requested k
  {
    double worst = 0.0;
    for (int p = 0; p <= 3; ++p)
      for (auto u : {quadalg::UBranch::half_k, quadalg::UBranch::half_k_plus_1}) {
        auto rm = quadalg::realization_matrices(sc, p, u, quadalg::BranchSign::upper, kval, qval);
        worst = std::max(worst, quadalg::realization_residual(sc, rm, kval, qval));
      }
    Check c;
    c.id = "oscillator_realization_residual";
    c.lhs = worst;
    c.rhs = 0.0;
    c.abs_err = worst;
    c.rel_err = worst;
    c.pass = worst < 1e-10;
    out.push_back(c);
  }
  return out;
}

inline std::vector<Check> run_scope(const std::string& scope, double k, double q) {
  std::vector<Check> out;
  if (scope == "algebra2d" || scope == "all") {
    auto a = run_algebra2d_checks();
    out.insert(out.end(), a.begin(), a.end());
  }
  if (scope == "quadratic" || scope == "all") {
    auto a = run_quadratic_checks(k, q);
    out.insert(out.end(), a.begin(), a.end());
  }
  if (scope == "classical" || scope == "all") {
    auto a = run_classical_checks();
    out.insert(out.end(), a.begin(), a.end());
  }
  if (out.empty()) throw InvalidParam("run_scope: unknown scope '" + scope + "'");
  return out;
}

}  // namespace pdm::report
