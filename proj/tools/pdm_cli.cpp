// Command-line front end: verification suites, spectra, matrix elements,
// finite-difference cross-checks and field exports, with machine-readable
// JSON/CSV output. All defaults favor the simplest smoke configuration
// (k = 1 removes the csch barrier).

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "pdm/model3d.hpp"
#include "pdm/numerics/fd.hpp"
#include "pdm/report.hpp"

namespace {

using namespace pdm;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitVerifyFailed = 3;
constexpr int kExitNumerical = 4;
constexpr int kExitIo = 5;

void write_output(const std::string& path, const std::string& payload) {
  if (path.empty()) {
    std::cout << payload;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::ios_base::failure("cannot open output file: " + path);
  f << payload;
  if (!f) throw std::ios_base::failure("failed writing output file: " + path);
}

std::string param_num(double v) { return report::fmt17(v); }

int cmd_verify(const std::string& scope, double k, double q, const std::string& out_path) {
  auto checks = report::run_scope(scope, k, q);
  std::string json = report::render_json(
      "verify", {{"scope", "\"" + scope + "\""}, {"k", param_num(k)}, {"q", param_num(q)}},
      checks);
  write_output(out_path, json);
  for (const auto& c : checks)
    if (!c.pass) {
      std::cerr << "verification failed: " << c.id << "\n";
      return kExitVerifyFailed;
    }
  return kExitOk;
}

std::string spectrum_csv_row(const std::string& model, const std::string& qn, double delta,
                             double E, int group) {
  return model + "," + qn + "," + report::fmt12(delta) + "," + report::fmt12(E) + "," +
         std::to_string(group) + "\n";
}

int cmd_spectrum(const std::string& model, int count, double k, double q, double R,
                 const std::string& format, const std::string& out_path) {
  struct Row {
    std::string model, qn;
    double delta, E;
    int group;
  };
  std::vector<Row> rows;
  if (model == "2d") {
    for (const auto& e : wavefn::spectrum2d(count, k, q))
      rows.push_back({"2d", std::to_string(e.n) + ":" + std::to_string(e.l), e.l + 1.0, e.E,
                      e.N});
  } else if (model == "box") {
    for (const auto& e : model3d::spectrum_box(count, k, q))
      rows.push_back({"box",
                      std::to_string(e.qn[0]) + ":" + std::to_string(e.qn[1]) + ":" +
                          std::to_string(e.qn[2]),
                      e.delta, e.E, e.group});
  } else if (model == "cyl") {
    for (const auto& e : model3d::spectrum_cyl(count, k, q, R))
      rows.push_back({"cyl",
                      std::to_string(e.qn[0]) + ":" + std::to_string(e.qn[1]) + ":" +
                          std::to_string(e.qn[2]),
                      e.delta, e.E, e.group});
  } else {
    throw InvalidParam("spectrum: unknown model '" + model + "'");
  }

  std::string payload;
  if (format == "csv") {
    payload = "model,quantum_numbers,delta,energy,degeneracy_group\n";
    for (const auto& r : rows) payload += spectrum_csv_row(r.model, r.qn, r.delta, r.E, r.group);
  } else {
    std::string body = "{\n  \"tool_version\": \"" + std::string(report::kToolVersion) +
                       "\",\n  \"command\": \"spectrum\",\n  \"params\": {\"model\": \"" + model +
                       "\", \"count\": " + std::to_string(count) + ", \"k\": " + param_num(k) +
                       ", \"q\": " + param_num(q) + ", \"R\": " + param_num(R) +
                       "},\n  \"states\": [\n";
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const auto& r = rows[i];
      body += "    {\"model\": \"" + r.model + "\", \"quantum_numbers\": \"" + r.qn +
              "\", \"delta\": " + report::fmt17(r.delta) + ", \"energy\": " +
              report::fmt17(r.E) + ", \"degeneracy_group\": " + std::to_string(r.group) + "}";
      body += (i + 1 < rows.size()) ? ",\n" : "\n";
    }
    body += "  ]\n}\n";
    payload = body;
  }
  write_output(out_path, payload);
  return kExitOk;
}

int cmd_matelem(int N, double k, double q, const std::string& out_path) {
  auto cat = model2d::build_catalog();
  wavefn::StripParams P{q, 96, 80};
  auto rep = quadalg::verify_l_matrix(N, k, q, cat, P);
  auto matrix_json = [](const std::vector<std::vector<double>>& M) {
    std::string s = "[";
    for (std::size_t i = 0; i < M.size(); ++i) {
      s += "[";
      for (std::size_t j = 0; j < M[i].size(); ++j) {
        s += report::fmt17(M[i][j]);
        if (j + 1 < M[i].size()) s += ", ";
      }
      s += "]";
      if (i + 1 < M.size()) s += ", ";
    }
    return s + "]";
  };
  std::string out = "{\n  \"tool_version\": \"" + std::string(report::kToolVersion) +
                    "\",\n  \"command\": \"matelem\",\n  \"params\": {\"N\": " +
                    std::to_string(N) + ", \"k\": " + param_num(k) + ", \"q\": " + param_num(q) +
                    "},\n";
  out += "  \"nus\": [";
  for (std::size_t i = 0; i < rep.block.nus.size(); ++i) {
    out += std::to_string(rep.block.nus[i]);
    if (i + 1 < rep.block.nus.size()) out += ", ";
  }
  out += "],\n";
  out += "  \"analytic\": " + matrix_json(rep.block.analytic) + ",\n";
  out += "  \"quadrature\": " + matrix_json(rep.quadrature) + ",\n";
  out += "  \"phases\": [";
  for (std::size_t i = 0; i < rep.block.phases.size(); ++i) {
    out += std::to_string(rep.block.phases[i]);
    if (i + 1 < rep.block.phases.size()) out += ", ";
  }
  out += "],\n";
  out += "  \"checks\": [{\"id\": \"l_matrix_quadrature\", \"pass\": " +
         std::string(rep.pass ? "true" : "false") + ", \"lhs\": " + report::fmt17(rep.max_rel_err) +
         ", \"rhs\": 0, \"abs_err\": " + report::fmt17(rep.max_rel_err) + ", \"rel_err\": " +
         report::fmt17(rep.max_rel_err) + "}],\n";
  out += "  \"summary\": {\"total\": 1, \"passed\": " + std::string(rep.pass ? "1" : "0") +
         "}\n}\n";
  write_output(out_path, out);
  return rep.pass ? kExitOk : kExitVerifyFailed;
}

int cmd_fdcheck(double k, double q, int l, double delta, double xmax, int nodes,
                const std::string& out_path) {
  double dprime = delta > 0.0 ? delta : l + 1.0;
  auto fd = numerics::fd_cross_check(dprime, k, q, xmax, nodes, 2);
  std::vector<report::Check> checks;
  for (int n = 0; n < 2; ++n) {
    double analytic = q * q * (2.0 * n + 1.0 + dprime) * (2.0 * n + 2.0 * k + dprime);
    checks.push_back(report::make_check("fd_level_" + std::to_string(n), fd.eigenvalues[n],
                                        analytic, 1e-3));
  }
  std::string json = report::render_json(
      "fdcheck",
      {{"k", param_num(k)},
       {"q", param_num(q)},
       {"delta_prime", param_num(dprime)},
       {"xmax", param_num(xmax)},
       {"nodes", std::to_string(nodes)}},
      checks);
  write_output(out_path, json);
  for (const auto& c : checks)
    if (!c.pass) {
      std::cerr << "verification failed: " << c.id << "\n";
      return kExitVerifyFailed;
    }
  return kExitOk;
}

int cmd_export_field(const std::string& state, const std::string& grid, double k, double q,
                     double xmax, const std::string& out_path) {
  int nx = 0, ny = 0;
  if (std::sscanf(grid.c_str(), "%dx%d", &nx, &ny) != 2 || nx < 2 || ny < 2)
    throw InvalidParam("export-field: grid must look like 50x50");
  SmoothField field;
  if (state.rfind("psi:", 0) == 0) {
    int n, l;
    if (std::sscanf(state.c_str(), "psi:%d,%d", &n, &l) != 2)
      throw InvalidParam("export-field: state must be psi:n,l or Psi:N,nu");
    field = wavefn::psi_nl(n, l, k, q);
  } else if (state.rfind("Psi:", 0) == 0) {
    int N, nu;
    if (std::sscanf(state.c_str(), "Psi:%d,%d", &N, &nu) != 2)
      throw InvalidParam("export-field: state must be psi:n,l or Psi:N,nu");
    auto cat = model2d::build_catalog();
    wavefn::StripParams P{q, 96, 80};
    auto sb = wavefn::second_basis(N, k, q, cat.R, P);
    const wavefn::SecondBasisEntry* found = nullptr;
    for (const auto& e : sb.entries)
      if (e.nu == nu) found = &e;
    if (!found) throw InvalidParam("export-field: nu is not in the multiplet of N");
    field = found->field;
  } else {
    throw InvalidParam("export-field: state must be psi:n,l or Psi:N,nu");
  }
  if (xmax <= 0.0) xmax = 6.0 / q;
  double yb = 0.5 * std::numbers::pi / q;
  std::string payload = "x,y,value\n";
  for (int i = 0; i < nx; ++i) {
    double x = xmax * i / (nx - 1.0);
    for (int j = 0; j < ny; ++j) {
      double y = -yb + 2.0 * yb * j / (ny - 1.0);
      payload += report::fmt12(x) + "," + report::fmt12(y) + "," +
                 report::fmt12(field.value({x, y})) + "\n";
    }
  }
  write_output(out_path, payload);
  return kExitOk;
}

int cmd_spectrum3d_degeneracy(const std::string& model, double emax, double k, double q,
                              const std::string& out_path) {
  if (model != "box")
    throw InvalidParam("spectrum3d-degeneracy: only the box model has the integer scan");
  auto groups = model3d::box_degeneracy_scan(emax, k, q);
  std::string payload = "model,quantum_numbers,delta,energy,degeneracy_group\n";
  int gid = 0;
  for (const auto& g : groups) {
    for (const auto& [l, m] : g.lm) {
      std::string qn =
          std::to_string(g.n) + ":" + std::to_string(l) + ":" + std::to_string(m);
      payload += spectrum_csv_row("box", qn, std::sqrt(static_cast<double>(g.delta_sq)), g.E,
                                  gid);
    }
    ++gid;
  }
  write_output(out_path, payload);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "pdmchannel: exact operator algebra and spectral checks for "
      "position-dependent-mass quantum channel models.\n"
      "Exit codes: 0 success, 2 usage error, 3 verification failure, "
      "4 numerical failure, 5 I/O failure."};
  app.require_subcommand(1);
  app.fallthrough();  // global -k/-q/-R/--out may follow the subcommand

  double k = 1.0, q = 1.0, R = 1.0;
  std::string out_path;
  app.add_option("--k", k, "barrier strength parameter (k > 0)")->capture_default_str();
  app.add_option("--q", q, "inverse layer width scale (q > 0)")->capture_default_str();
  app.add_option("--R", R, "cylinder radius")->capture_default_str();
  app.add_option("--out", out_path, "output file (default: stdout)");

  auto* verify = app.add_subcommand("verify", "run a verification suite, emit a JSON report");
  std::string scope = "all";
  verify->add_option("--scope", scope, "algebra2d | quadratic | classical | all")
      ->check(CLI::IsMember({"algebra2d", "quadratic", "classical", "all"}))
      ->capture_default_str();

  auto* spectrum = app.add_subcommand("spectrum", "list the lowest bound states");
  std::string model = "2d", format = "json";
  int count = 10;
  spectrum->add_option("--model", model, "2d | box | cyl")
      ->check(CLI::IsMember({"2d", "box", "cyl"}))
      ->capture_default_str();
  spectrum->add_option("--count", count, "number of states")->capture_default_str();
  spectrum->add_option("--format", format, "json | csv")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();

  auto* matelem = app.add_subcommand(
      "matelem", "analytic and quadrature blocks of L in the (H,R)-diagonal basis");
  int N = 4;
  matelem->add_option("--N", N, "level index")->capture_default_str();

  auto* fdcheck = app.add_subcommand(
      "fdcheck", "finite-difference cross-check of the separated channel spectrum");
  int l = 0, nodes = 400;
  double delta = 0.0, xmax = 12.0;
  fdcheck->add_option("--l", l, "transverse index (2D channel, delta' = l+1)")
      ->capture_default_str();
  fdcheck->add_option("--delta", delta, "explicit transverse root (overrides --l)");
  fdcheck->add_option("--xmax", xmax, "domain truncation")->capture_default_str();
  fdcheck->add_option("--nodes", nodes, "interior grid nodes")->capture_default_str();

  auto* expf = app.add_subcommand("export-field", "sample a 2D eigenfunction on a grid (CSV)");
  std::string state = "psi:0,0", grid = "50x50";
  double exmax = 0.0;
  expf->add_option("--state", state, "psi:n,l or Psi:N,nu")->capture_default_str();
  expf->add_option("--grid", grid, "grid spec, e.g. 50x50")->capture_default_str();
  expf->add_option("--xmax", exmax, "largest x sample (default 6/q)");

  auto* deg = app.add_subcommand("spectrum3d-degeneracy",
                                 "exact integer degeneracy scan of the box channel (CSV)");
  std::string deg_model = "box";
  double emax = 250.0;
  deg->add_option("--model", deg_model, "box")->capture_default_str();
  deg->add_option("--emax", emax, "energy ceiling of the scan")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (!(k > 0.0) || !(q > 0.0)) throw pdm::InvalidParam("k and q must be positive");
    if (verify->parsed()) return cmd_verify(scope, k, q, out_path);
    if (spectrum->parsed()) return cmd_spectrum(model, count, k, q, R, format, out_path);
    if (matelem->parsed()) return cmd_matelem(N, k, q, out_path);
    if (fdcheck->parsed()) return cmd_fdcheck(k, q, l, delta, xmax, nodes, out_path);
    if (expf->parsed()) return cmd_export_field(state, grid, k, q, exmax, out_path);
    if (deg->parsed()) return cmd_spectrum3d_degeneracy(deg_model, emax, k, q, out_path);
  } catch (const pdm::InvalidParam& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const pdm::NonConvergent& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const pdm::TruncationTooSmall& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const pdm::DegenerateGram& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const pdm::BesselZeroNotFound& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const pdm::PhaseMismatch& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::ios_base::failure& e) {
    std::cerr << "io failure: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
  return kExitOk;
}
