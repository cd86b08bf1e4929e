#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"

namespace {

const std::string kExe = QTRANS_EXE;
const std::string kData = TEST_DATA_DIR;
const std::string kWork = TEST_WORK_DIR;

int run(const std::string& args) {
  const std::string cmd = "\"" + kExe + "\" " + args + " 2>>\"" + kWork + "/cli_tests.log\"";
  const int raw = std::system(cmd.c_str());
  return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::vector<std::vector<std::string>> csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

std::string out(const std::string& name) { return kWork + "/" + name; }

}  // namespace

TEST_CASE("usage and config errors exit with 1") {
  CHECK(run("") == 1);
  CHECK(run("frobnicate --config " + kData + "/validate.json") == 1);
  CHECK(run("validate") == 1);
  CHECK(run("validate --config " + kData + "/does_not_exist.json") == 1);
  CHECK(run("validate --config " + kData + "/malformed.json") == 1);
  CHECK(run("transmission-sweep --config " + kData + "/bad_resolution.json") == 1);
  CHECK(run("transmission-sweep --config " + kData + "/bad_family.json") == 1);
  CHECK(run("capacity --config " + kData + "/validate.json") == 1);
  CHECK(run("transmission-sweep --config " + kData + "/sweep_circle.json --workers 0") == 1);
}

TEST_CASE("circle-only sweep") {
  const auto path = out("sweep_circle.csv");
  REQUIRE(run("transmission-sweep --config " + kData + "/sweep_circle.json --out " + path) == 0);
  const auto rows = csv(slurp(path));
  REQUIRE(rows.size() == 2);
  CHECK(slurp(path).rfind("family,param,N,n,norm,converged,three_point\n", 0) == 0);
  REQUIRE(rows[1].size() == 7);
  CHECK(rows[1][0] == "circle");
  CHECK(rows[1][2] == "16");
  CHECK(rows[1][3] == "256");
  CHECK(std::abs(std::stod(rows[1][4]) - 1.0) < 1e-8);
  CHECK(rows[1][5] == "1");
}

TEST_CASE("sweep rows are sorted and independent of the worker count") {
  const auto a = out("sweep_families_w1.csv");
  const auto b = out("sweep_families_w3.csv");
  REQUIRE(run("transmission-sweep --config " + kData + "/sweep_families.json --workers 1 --out " + a) == 0);
  REQUIRE(run("transmission-sweep --config " + kData + "/sweep_families.json --workers 3 --out " + b) == 0);
  CHECK(slurp(a) == slurp(b));
  const auto rows = csv(slurp(a));
  REQUIRE(rows.size() == 9);
  CHECK(rows[1][0] == "cusp");
  CHECK(rows[1][1] == "0");
  CHECK(rows[2][1] == "0.25");
  CHECK(rows[4][0] == "ellipse");
  CHECK(rows[4][1] == "0.59999999999999998");
  CHECK(rows[7][0] == "shifted");
  CHECK(rows[8][0] == "star");
  for (std::size_t i = 1; i < rows.size(); ++i) CHECK(std::stod(rows[i][4]) >= 1.0 - 1e-6);
}

TEST_CASE("capacity output") {
  const auto path = out("capacity_full.csv");
  REQUIRE(run("capacity --config " + kData + "/capacity_full.json --out " + path) == 0);
  const auto rows = csv(slurp(path));
  REQUIRE(rows.size() == 4);
  CHECK(rows[0] == std::vector<std::string>{"n", "d_n"});
  CHECK(rows[3][0] == "64");
  CHECK(std::stod(rows[3][1]) == doctest::Approx(std::pow(64.0, 1.0 / 63.0)).epsilon(1e-12));

  const auto stem = out("capacity_sets.csv");
  REQUIRE(run("capacity --config " + kData + "/capacity_sets.json --workers 2 --out " + stem) == 0);
  for (const char* name : {"half", "pair", "pair_pl", "pair_aut"}) {
    const auto r = csv(slurp(out(std::string("capacity_sets.") + name + ".csv")));
    REQUIRE(r.size() == 5);
    for (std::size_t i = 1; i < r.size(); ++i) CHECK(std::stod(r[i][1]) > 0.0);
  }
}

TEST_CASE("decompose report") {
  const auto path = out("decompose.csv");
  REQUIRE(run("decompose --config " + kData + "/decompose.json --out " + path) == 0);
  const auto rows = csv(slurp(path));
  REQUIRE(rows.size() == 4);
  CHECK(rows[1][0] == "log_abs_z");
  CHECK(rows[1][2] == "-1");
  CHECK(std::stod(rows[2][1]) < 1e-13);
  CHECK(rows[3][0] == "random100");
  CHECK(std::stod(rows[3][1]) < 1e-13);
}

TEST_CASE("probe report") {
  const auto path = out("probe.csv");
  REQUIRE(run("probe --config " + kData + "/probe_ellipse.json --out " + path) == 0);
  const auto rows = csv(slurp(path));
  REQUIRE(rows.size() == 65);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    CHECK(rows[i][5] == "1");
    CHECK(std::abs(std::stod(rows[i][3]) - std::stod(rows[i][4])) < 1e-6);
  }
}

TEST_CASE("validate on defaults passes and is reproducible") {
  const auto a = out("validate_a.txt");
  const auto b = out("validate_b.txt");
  REQUIRE(run("validate --config " + kData + "/validate.json --out " + a) == 0);
  REQUIRE(run("validate --config " + kData + "/validate.json --out " + b) == 0);
  CHECK(slurp(a) == slurp(b));
  CHECK(slurp(a).find("FAIL") == std::string::npos);
}
