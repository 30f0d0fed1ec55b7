#include <catch2/catch.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

namespace {

int run_cli(const std::string& args) {
  std::string cmd = std::string(PDM_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

int count_lines(const std::string& s) {
  int n = 0;
  for (char c : s)
    if (c == '\n') ++n;
  return n;
}

}  // namespace

TEST_CASE("verify runs green and reports are byte-identical across runs") {
  REQUIRE(run_cli("--out /tmp/pdm_r1.json verify --scope all") == 0);
  REQUIRE(run_cli("--out /tmp/pdm_r2.json verify --scope all") == 0);
  std::string a = slurp("/tmp/pdm_r1.json"), b = slurp("/tmp/pdm_r2.json");
  REQUIRE_FALSE(a.empty());
  REQUIRE(a == b);
  REQUIRE(a.find("\"passed\"") != std::string::npos);
  REQUIRE(a.find("\"pass\": false") == std::string::npos);
}

TEST_CASE("2d spectrum lists the known lowest levels") {
  REQUIRE(run_cli("--out /tmp/pdm_sp.csv spectrum --model 2d --count 5 --format csv") == 0);
  std::string csv = slurp("/tmp/pdm_sp.csv");
  REQUIRE(csv.rfind("model,quantum_numbers,delta,energy,degeneracy_group\n", 0) == 0);
  REQUIRE(csv.find("2d,0:0,1,6,0") != std::string::npos);
  REQUIRE(csv.find("2d,0:2,3,20,2") != std::string::npos);
  REQUIRE(csv.find("2d,1:0,1,20,2") != std::string::npos);
  REQUIRE(count_lines(csv) == 6);  // header + 5 states
}

TEST_CASE("export-field produces the requested grid size") {
  REQUIRE(run_cli("--out /tmp/pdm_field.csv export-field --state psi:0,0 --grid 50x50") == 0);
  std::string csv = slurp("/tmp/pdm_field.csv");
  REQUIRE(count_lines(csv) == 2501);  // header + 2500 samples
  REQUIRE(csv.rfind("x,y,value\n", 0) == 0);
}

TEST_CASE("matelem reports a passing comparison block") {
  REQUIRE(run_cli("--out /tmp/pdm_mat.json matelem --N 4 --k 1 --q 1") == 0);
  std::string json = slurp("/tmp/pdm_mat.json");
  REQUIRE(json.find("\"analytic\"") != std::string::npos);
  REQUIRE(json.find("\"quadrature\"") != std::string::npos);
  REQUIRE(json.find("\"pass\": true") != std::string::npos);
}

TEST_CASE("box degeneracy scan exposes the accidental group") {
  REQUIRE(run_cli("--out /tmp/pdm_deg.csv spectrum3d-degeneracy --emax 150") == 0);
  std::string csv = slurp("/tmp/pdm_deg.csv");
  // the (1,8) and (5,6) states share one group id
  std::string g18, g56;
  std::istringstream ss(csv);
  std::string line;
  while (std::getline(ss, line)) {
    if (line.find("box,0:1:8,") == 0) g18 = line.substr(line.rfind(',') + 1);
    if (line.find("box,0:5:6,") == 0) g56 = line.substr(line.rfind(',') + 1);
  }
  REQUIRE_FALSE(g18.empty());
  REQUIRE(g18 == g56);
}

TEST_CASE("fdcheck reproduces the barrier channel bottom") {
  REQUIRE(run_cli("--out /tmp/pdm_fd.json fdcheck --k 2 --q 1 --l 0") == 0);
  std::string json = slurp("/tmp/pdm_fd.json");
  REQUIRE(json.find("\"id\": \"fd_level_0\", \"pass\": true") != std::string::npos);
  REQUIRE(json.find("\"rhs\": 10") != std::string::npos);
}

TEST_CASE("quadratic scope reports the ground-state Casimir value") {
  REQUIRE(run_cli("--out /tmp/pdm_quad.json verify --scope quadratic --k 1 --q 1") == 0);
  std::string json = slurp("/tmp/pdm_quad.json");
  REQUIRE(json.find("casimir_on_ground_state") != std::string::npos);
  REQUIRE(json.find("\"rhs\": -256") != std::string::npos);
}

TEST_CASE("distinct exit codes per failure path") {
  REQUIRE(run_cli("verify --bogus-flag") == 2);          // unknown flag
  REQUIRE(run_cli("--k -1 verify --scope all") == 2);    // invalid parameter
  REQUIRE(run_cli("export-field --state nope:1") == 2);  // malformed state
  REQUIRE(run_cli("fdcheck --xmax 2.5 --nodes 250") == 4);  // truncation failure
  REQUIRE(run_cli("--out /nonexistent-dir/x.json verify --scope classical") == 5);  // io
  REQUIRE(run_cli("--help") == 0);
}
