#pragma once

#include <string>
#include <vector>

#include "pdm/diffop.hpp"

namespace pdm::model2d {

// Every named operator of the two-dimensional semi-infinite-layer model,
// with q and k fully symbolic. R and Rbar are stored in factorized form
// (second-order products of the intertwining operators); the literal
// expanded forms are kept separately so the factorizations are testable.
struct OperatorCatalog {
  DiffOp H;           // -dx cosh^2 dx - dy cosh^2 dy + V_eff
  DiffOp L;           // -dy^2
  DiffOp R;           // eta_dag . eta
  DiffOp Rbar;        // etabar_dag . etabar
  DiffOp eta, eta_dag;
  DiffOp etabar, etabar_dag;
  DiffOp C;           // q {dy, eta_dag etabar + etabar_dag eta}
  DiffOp R_expanded;
  DiffOp Rbar_expanded;
};

namespace detail {
inline CoeffPoly m(int a, int b, int c, int d) { return CoeffPoly::mono(a, b, c, d); }
}  // namespace detail

inline DiffOp scalar_op(const ScalarPoly& s) { return DiffOp::coeff(CoeffPoly::scalar(s)); }

// 2 q^2 k, the constant offset of the intertwined partner Hamiltonian.
inline ScalarPoly two_q2_k() { return sp_const(2) * sp_q(2) * sp_k(); }

inline OperatorCatalog build_catalog() {
  using detail::m;
  const ScalarPoly q = sp_q(), k = sp_k();
  const ScalarPoly qk = q * k;

  OperatorCatalog cat;

  // eta     =  cosh sin dx - sinh cos dy + q sinh sin - qk csch sin
  // eta_dag = -cosh sin dx + sinh cos dy - q sinh sin - qk csch sin
  cat.eta = DiffOp::term(m(0, 1, 1, 0), 1, 0) - DiffOp::term(m(1, 0, 0, 1), 0, 1) +
            DiffOp::coeff(m(1, 0, 1, 0) * q) - DiffOp::coeff(m(-1, 0, 1, 0) * qk);
  cat.eta_dag = -DiffOp::term(m(0, 1, 1, 0), 1, 0) + DiffOp::term(m(1, 0, 0, 1), 0, 1) -
                DiffOp::coeff(m(1, 0, 1, 0) * q) - DiffOp::coeff(m(-1, 0, 1, 0) * qk);

  // etabar     =  cosh cos dx + sinh sin dy + q sinh cos - qk csch cos
  // etabar_dag = -cosh cos dx - sinh sin dy - q sinh cos - qk csch cos
  cat.etabar = DiffOp::term(m(0, 1, 0, 1), 1, 0) + DiffOp::term(m(1, 0, 1, 0), 0, 1) +
               DiffOp::coeff(m(1, 0, 0, 1) * q) - DiffOp::coeff(m(-1, 0, 0, 1) * qk);
  cat.etabar_dag = -DiffOp::term(m(0, 1, 0, 1), 1, 0) - DiffOp::term(m(1, 0, 1, 0), 0, 1) -
                   DiffOp::coeff(m(1, 0, 0, 1) * q) - DiffOp::coeff(m(-1, 0, 0, 1) * qk);

  // H = -cosh^2 dx^2 - 2q sinh cosh dx - cosh^2 dy^2
  //     - q^2 cosh^2 + q^2 k(k-1) csch^2
  cat.H = DiffOp::term(-m(0, 2, 0, 0), 2, 0) +
          DiffOp::term(m(1, 1, 0, 0) * (sp_const(-2) * q), 1, 0) +
          DiffOp::term(-m(0, 2, 0, 0), 0, 2) +
          DiffOp::coeff(m(0, 2, 0, 0) * (-sp_q(2)) +
                        m(-2, 0, 0, 0) * (sp_q(2) * k * (k - sp_const(1))));

  cat.L = DiffOp::term(-CoeffPoly::one(), 0, 2);

  cat.R = compose(cat.eta_dag, cat.eta);
  cat.Rbar = compose(cat.etabar_dag, cat.etabar);

  // literal second-order expansions of R and Rbar
  cat.R_expanded =
      DiffOp::term(-m(0, 2, 2, 0), 2, 0) + DiffOp::term(m(1, 1, 1, 1) * Rational(2), 1, 1) +
      DiffOp::term(-m(2, 0, 0, 2), 0, 2) +
      DiffOp::term((m(1, 1, 0, 0) - m(1, 1, 2, 0) * Rational(4)) * q, 1, 0) +
      DiffOp::term((m(0, 0, 1, 1) + m(2, 0, 1, 1) * Rational(4)) * q, 0, 1) +
      DiffOp::coeff((m(2, 0, 0, 0) - m(0, 0, 2, 0) - m(2, 0, 2, 0) * Rational(3)) * sp_q(2) -
                    (CoeffPoly::one() + m(-2, 0, 2, 0)) * (sp_q(2) * k) +
                    m(-2, 0, 2, 0) * (sp_q(2) * sp_k(2)));
  cat.Rbar_expanded =
      DiffOp::term(-m(0, 2, 0, 2), 2, 0) + DiffOp::term(m(1, 1, 1, 1) * Rational(-2), 1, 1) +
      DiffOp::term(-m(2, 0, 2, 0), 0, 2) +
      DiffOp::term((m(1, 1, 0, 0) - m(1, 1, 0, 2) * Rational(4)) * q, 1, 0) +
      DiffOp::term(-(m(0, 0, 1, 1) + m(2, 0, 1, 1) * Rational(4)) * q, 0, 1) +
      DiffOp::coeff((m(2, 0, 0, 0) - m(0, 0, 0, 2) - m(2, 0, 0, 2) * Rational(3)) * sp_q(2) -
                    (CoeffPoly::one() + m(-2, 0, 0, 2)) * (sp_q(2) * k) +
                    m(-2, 0, 0, 2) * (sp_q(2) * sp_k(2)));

  cat.C = anticommutator(DiffOp::dy(),
                         compose(cat.eta_dag, cat.etabar) + compose(cat.etabar_dag, cat.eta)) *
          q;
  return cat;
}

struct IdentityReport {
  std::string id;
  bool holds = false;
  DiffOp residual;
};

inline const std::vector<std::string>& identity_ids() {
  static const std::vector<std::string> ids = {
      "comm_H_L",
      "comm_H_R",
      "comm_H_Rbar",
      "intertwine_eta",
      "intertwine_etabar",
      "intertwine_eta_dag",
      "intertwine_etabar_dag",
      "sum_rule",
      "comm_py_eta",
      "comm_py_etabar",
      "comm_eta_etabar",
      "comm_py_eta_dag",
      "comm_py_etabar_dag",
      "comm_eta_dag_etabar_dag",
      "comm_eta_eta_dag",
      "comm_etabar_etabar_dag",
      "comm_eta_etabar_dag",
      "R_factorization",
      "Rbar_factorization",
      "C_equals_comm_R_L",
  };
  return ids;
}

// Residual of one named identity (LHS - RHS). An identity holds iff the
// residual normalizes to the empty operator; q and k stay symbolic, so a
// pass certifies the identity for all parameter values at once.
inline DiffOp identity_residual(const OperatorCatalog& c, const std::string& id) {
  using detail::m;
  const ScalarPoly q = sp_q();
  const DiffOp H1 = c.H.shift_k(1) + scalar_op(two_q2_k());
  const ScalarPoly two_q2k = sp_const(2) * sp_q(2) * sp_k();
  // xi = csch sin, xibar = csch cos
  const CoeffPoly xi2 = m(-2, 0, 2, 0), xibar2 = m(-2, 0, 0, 2), xixibar = m(-2, 0, 1, 1);

  if (id == "comm_H_L") return commutator(c.H, c.L);
  if (id == "comm_H_R") return commutator(c.H, c.R);
  if (id == "comm_H_Rbar") return commutator(c.H, c.Rbar);
  if (id == "intertwine_eta") return compose(c.eta, c.H) - compose(H1, c.eta);
  if (id == "intertwine_etabar") return compose(c.etabar, c.H) - compose(H1, c.etabar);
  if (id == "intertwine_eta_dag") return compose(c.H, c.eta_dag) - compose(c.eta_dag, H1);
  if (id == "intertwine_etabar_dag")
    return compose(c.H, c.etabar_dag) - compose(c.etabar_dag, H1);
  if (id == "sum_rule") return c.H - (c.L + c.R + c.Rbar + scalar_op(two_q2k));
  if (id == "comm_py_eta") return commutator(DiffOp::dy(), c.eta) - c.etabar * q;
  if (id == "comm_py_etabar") return commutator(DiffOp::dy(), c.etabar) + c.eta * q;
  if (id == "comm_eta_etabar") return commutator(c.eta, c.etabar) - DiffOp::dy() * q;
  if (id == "comm_py_eta_dag") return commutator(DiffOp::dy(), c.eta_dag) - c.etabar_dag * q;
  if (id == "comm_py_etabar_dag")
    return commutator(DiffOp::dy(), c.etabar_dag) + c.eta_dag * q;
  if (id == "comm_eta_dag_etabar_dag")
    return commutator(c.eta_dag, c.etabar_dag) - DiffOp::dy() * q;
  if (id == "comm_eta_eta_dag")
    return commutator(c.eta, c.eta_dag) -
           DiffOp::coeff((CoeffPoly::one() + xi2) * two_q2k);
  if (id == "comm_etabar_etabar_dag")
    return commutator(c.etabar, c.etabar_dag) -
           DiffOp::coeff((CoeffPoly::one() + xibar2) * two_q2k);
  if (id == "comm_eta_etabar_dag")
    return commutator(c.eta, c.etabar_dag) -
           (-DiffOp::dy() * q + DiffOp::coeff(xixibar * two_q2k));
  if (id == "R_factorization") return c.R_expanded - c.R;
  if (id == "Rbar_factorization") return c.Rbar_expanded - c.Rbar;
  if (id == "C_equals_comm_R_L") return commutator(c.R, c.L) - c.C;
  throw UnknownIdentity("identity_residual: unknown id '" + id + "'");
}

inline IdentityReport verify_identity(const OperatorCatalog& c, const std::string& id) {
  IdentityReport r;
  r.id = id;
  r.residual = identity_residual(c, id);
  r.holds = r.residual.is_zero();
  return r;
}

inline std::vector<IdentityReport> run_identity_suite(const OperatorCatalog& c) {
  std::vector<IdentityReport> out;
  out.reserve(identity_ids().size());
  for (const auto& id : identity_ids()) out.push_back(verify_identity(c, id));
  return out;
}

// JSON array export of identity results.
inline std::string identities_json(const std::vector<IdentityReport>& reps) {
  std::string out = "[\n";
  for (std::size_t i = 0; i < reps.size(); ++i) {
    out += "  {\"id\": \"" + reps[i].id + "\", \"holds\": " +
           (reps[i].holds ? "true" : "false") + ", \"residual_term_count\": " +
           std::to_string(reps[i].residual.monomial_count()) + "}";
    out += (i + 1 < reps.size()) ? ",\n" : "\n";
  }
  return out + "]\n";
}

}  // namespace pdm::model2d
