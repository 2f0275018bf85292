#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int run(const std::string& args, const std::string& out = "/dev/null") {
  std::string cmd = "SALAMI_SEED=0 " + std::string(SALAMI_BIN) + " " + args + " > " + out + " 2>/dev/null";
  int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

}  // namespace

TEST_CASE("gen writes graph and fixtures") {
  REQUIRE(run("gen two_jump_line --radius 12 --out /tmp/cli_tj.json") == 0);
  auto graph = nlohmann::json::parse(slurp("/tmp/cli_tj.json"));
  CHECK(graph["vertices"].size() == 25);
  CHECK(graph["metric"] == "combinatorial");
  auto fixtures = nlohmann::json::parse(slurp("/tmp/cli_tj.json.fixtures.json"));
  CHECK(fixtures["salami"] == true);
  CHECK(fixtures["golden_kappa"].size() > 0);

  REQUIRE(run("gen glued_chains --k 3 --radius 10 --out /tmp/cli_gc.json") == 0);
  auto glued = nlohmann::json::parse(slurp("/tmp/cli_gc.json"));
  CHECK(glued["vertices"].size() == 31);

  // missing radius is a usage error
  CHECK(run("gen two_jump_line --out /tmp/cli_x.json") == 2);
  // unknown family is an input error
  CHECK(run("gen not_a_family --radius 5") == 2);
}

TEST_CASE("curvature table") {
  REQUIRE(run("curvature --family glued_chains --radius 8 --out /tmp/cli_curv.csv") == 0);
  auto csv = slurp("/tmp/cli_curv.csv");
  std::istringstream lines(csv);
  std::string header;
  std::getline(lines, header);
  CHECK(header == "x,y,d,kappa_dual,kappa_primal,kappa_closed,reliable");
  int rows = 0, zero_rows = 0;
  std::string line;
  while (std::getline(lines, line)) {
    ++rows;
    // x,y,d,dual,primal,closed,reliable
    std::istringstream cells(line);
    std::string cell;
    std::getline(cells, cell, ',');
    std::getline(cells, cell, ',');
    std::getline(cells, cell, ',');
    std::getline(cells, cell, ',');
    if (cell == "0") ++zero_rows;
    std::string primal, closed, reliable;
    std::getline(cells, primal, ',');
    std::getline(cells, closed, ',');
    std::getline(cells, reliable, ',');
    CHECK(primal == cell);
    if (reliable == "true") CHECK(cell == "0");
  }
  CHECK(rows == 24);  // 3 branches x 8 edges
  CHECK(zero_rows >= 15);  // rim edges see truncated degrees; deep rows are exactly flat

  // corrupt JSON is a parse error with exit code 2
  std::ofstream bad("/tmp/cli_bad.json");
  bad << "{ not json";
  bad.close();
  CHECK(run("curvature --graph /tmp/cli_bad.json") == 2);
}

TEST_CASE("harmonic synthesis run") {
  REQUIRE(run("harmonic --family two_jump_line --radius 12 --out /tmp/cli_h.json") == 0);
  auto rep = nlohmann::json::parse(slurp("/tmp/cli_h.json"));
  CHECK(rep["converged"] == true);
  CHECK(rep["exact_certificate"] == true);
  CHECK(std::stod(rep["residual"].get<std::string>()) <= 1e-9);
  CHECK(std::abs(std::stod(rep["c"].get<std::string>())) <= 1e-9);
  // recovered values are n/2 up to sign
  double v1 = std::stod(rep["values"]["+0001"].get<std::string>());
  CHECK(std::abs(std::abs(v1) - 0.5) < 1e-7);

  // a partition with an X-Y edge is rejected
  std::ofstream pf("/tmp/cli_part.json");
  pf << R"({"K": ["+0000"], "X": ["+0001"], "Y": ["-0001", "+0002"]})";
  pf.close();
  CHECK(run("harmonic --family two_jump_line --radius 12 --partition /tmp/cli_part.json") == 2);
}

TEST_CASE("exit code one on non-convergence") {
  CHECK(run("harmonic --family diagonal_strip --radius 8 --w-seq const:1 --max-iter 1 "
            "--out /tmp/cli_h1.json") == 1);
  auto rep = nlohmann::json::parse(slurp("/tmp/cli_h1.json"));
  CHECK(rep["converged"] == false);
  CHECK(rep["residual_history"].size() > 0);
}

TEST_CASE("verify against an external graph file") {
  REQUIRE(run("gen uniform_chain --radius 10 --out /tmp/cli_ext.json") == 0);
  std::ofstream pf("/tmp/cli_ext_part.json");
  pf << R"({"K": ["+0000"]})";
  pf.close();
  CHECK(run("verify --graph /tmp/cli_ext.json --partition /tmp/cli_ext_part.json "
            "--assume-salami --suite golden --suite lemma-3.4") == 0);
  // without a partition the command refuses
  CHECK(run("verify --graph /tmp/cli_ext.json --suite golden") == 2);
}

TEST_CASE("witness dump") {
  REQUIRE(run("curvature --family uniform_chain --radius 6 --witness /tmp/cli_w.json") == 0);
  auto w = nlohmann::json::parse(slurp("/tmp/cli_w.json"));
  REQUIRE(w.size() > 0);
  CHECK(w[0].contains("potential"));
  CHECK(w[0].contains("plan"));
}

TEST_CASE("verify reports and determinism") {
  REQUIRE(run("verify --family uniform_chain --radius 10 --suite golden --suite ends "
              "--format json --out /tmp/cli_v1.json") == 0);
  REQUIRE(run("verify --family uniform_chain --radius 10 --suite golden --suite ends "
              "--format json --out /tmp/cli_v2.json") == 0);
  CHECK(slurp("/tmp/cli_v1.json") == slurp("/tmp/cli_v2.json"));
  auto rep = nlohmann::json::parse(slurp("/tmp/cli_v1.json"));
  CHECK(rep["exit_code"] == 0);
  for (const auto& row : rep["rows"]) CHECK(row["status"] == "pass");

  CHECK(run("verify --family uniform_chain --radius 10 --suite lemma-9.9") == 2);
}

TEST_CASE("analysis ratio table") {
  REQUIRE(run("analysis --family uniform_chain --radius 20 --r-max 6 --out /tmp/cli_a.csv") == 0);
  auto csv = slurp("/tmp/cli_a.csv");
  std::istringstream lines(csv);
  std::string line;
  std::getline(lines, line);
  CHECK(line == "R,doubling,poincare,harnack,chengyau");
  int rows = 0;
  while (std::getline(lines, line)) ++rows;
  CHECK(rows == 6);
}

TEST_CASE("extension csv") {
  REQUIRE(run("harmonic --family uniform_chain --radius 8 --extension-csv /tmp/cli_e.csv "
              "--out /dev/null") == 0);
  auto csv = slurp("/tmp/cli_e.csv");
  std::istringstream lines(csv);
  std::string line;
  std::getline(lines, line);
  CHECK(line == "id,value,witness,reliable");
  int rows = 0, witnessed = 0;
  while (std::getline(lines, line)) {
    ++rows;
    if (line.find(",+0000,") != std::string::npos) ++witnessed;
  }
  CHECK(rows == 17);
  CHECK(witnessed == 16);  // every vertex off K attains its envelope at K = {0}
}

TEST_CASE("recurrence series") {
  REQUIRE(run("recurrence --family uniform_chain --radius 12 --r-max 14 --out /tmp/cli_r.csv") == 0);
  auto csv = slurp("/tmp/cli_r.csv");
  std::istringstream lines(csv);
  std::string line;
  std::getline(lines, line);
  CHECK(line == "R,quotient,reliable");
  std::getline(lines, line);
  CHECK(line == "1,2,true");  // quotient(1) = 2/1
  std::getline(lines, line);
  CHECK(line == "2,1,true");
  int unreliable = 0;
  while (std::getline(lines, line))
    if (line.find("false") != std::string::npos) ++unreliable;
  CHECK(unreliable > 0);  // tents beyond the window are flagged
}
