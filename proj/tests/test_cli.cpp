// Drives the coxko executable end to end.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "coxko/coxnet.hpp"
#include "coxko/csv_io.hpp"

namespace fs = std::filesystem;

namespace {

const fs::path kWork = fs::temp_directory_path() / "coxko_cli_tests";
const std::string kNki = COXKO_TEST_DATA "/nki70.csv";

int run(const std::string& args) {
  const std::string cmd = std::string(COXKO_CLI) + " " + args + " 2>" + (kWork / "stderr.txt").string();
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string out(const std::string& name) { return (kWork / name).string(); }

struct Setup {
  Setup() { fs::create_directories(kWork); }
};
const Setup setup;

}  // namespace

TEST_CASE("select is deterministic and reports every method") {
  REQUIRE(run("select --input " + kNki + " --folds 5 --seed 3 --format json --out " + out("a.json")) == 0);
  REQUIRE(run("select --input " + kNki + " --folds 5 --seed 3 --format json --out " + out("b.json")) == 0);
  const std::string a = slurp(out("a.json"));
  CHECK(a == slurp(out("b.json")));
  CHECK(a.find("\"schema_version\": 1") != std::string::npos);
  CHECK(a.find("\"CoxKnockoff+\"") != std::string::npos);
  CHECK(slurp(kWork / "stderr.txt").find("144 rows") != std::string::npos);
}

TEST_CASE("threshold choice filters the methods") {
  REQUIRE(run("select --input " + kNki + " --folds 5 --threshold plus --out " + out("plus.csv")) == 0);
  const std::string csv = slurp(out("plus.csv"));
  CHECK(csv.rfind("method,q,seed", 0) == 0);
  CHECK(csv.find("CoxKnockoff+,") != std::string::npos);
  CHECK(csv.find("\nCoxKnockoff,") == std::string::npos);
  CHECK(csv.find("CoxLasso,") != std::string::npos);
}

TEST_CASE("exit codes") {
  CHECK(run("select --input " + kNki + " --q 1.5") == 2);
  CHECK(run("select") == 2);
  CHECK(run("select --input /nonexistent.csv") == 3);
  CHECK(run("frobnicate") == 2);
  std::ofstream(out("bad.cfg")) << "n = 100\ncolour = red\n";
  CHECK(run("simulate --scenario " + out("bad.cfg")) == 2);
  CHECK(slurp(kWork / "stderr.txt").find("colour") != std::string::npos);
  std::ofstream(out("zero.csv")) << "time,event,x\n1,1,0.5\n0,1,0.7\n2,0,0.1\n";
  CHECK(run("select --input " + out("zero.csv")) == 3);
}

TEST_CASE("single covariate: knockoff+ selects nothing") {
  std::mt19937_64 gen(4);
  std::normal_distribution<double> normal;
  std::ofstream f(out("one.csv"));
  f << "time,event,x\n";
  for (int i = 0; i < 80; ++i) {
    const double x = normal(gen);
    f << std::exp(-x) * (0.1 + (i % 17) * 0.1) << ',' << (i % 4 != 0) << ',' << x << '\n';
  }
  f.close();
  REQUIRE(run("select --input " + out("one.csv") + " --folds 5 --format json --out " + out("one.json")) == 0);
  const std::string j = slurp(out("one.json"));
  const auto plus = j.find("\"CoxKnockoff+\"");
  REQUIRE(plus != std::string::npos);
  CHECK(j.find("\"selected\": []", plus) != std::string::npos);
}

TEST_CASE("knockoffs output layout, blindness and round trip") {
  REQUIRE(run("knockoffs --input " + kNki + " --seed 11 --out " + out("ko.csv")) == 0);
  const auto table = coxko::read_csv(out("ko.csv"));
  CHECK(table.header.size() == 152);
  CHECK(table.header[0] == "time");
  CHECK(table.header[1] == "event");
  CHECK(table.header[77] == "Diam__ko");
  const auto original = coxko::read_csv(kNki);
  for (std::size_t i = 0; i < original.rows.size(); ++i) {
    CHECK(table.rows[i][0] == original.rows[i][0]);
    CHECK(table.rows[i][1] == original.rows[i][1]);
  }

  // Permute the time column; the knockoff columns must not move.
  {
    auto shuffled = original;
    std::mt19937_64 gen(2);
    std::vector<std::string> times;
    for (const auto& r : shuffled.rows) times.push_back(r[0]);
    std::shuffle(times.begin(), times.end(), gen);
    for (std::size_t i = 0; i < times.size(); ++i) shuffled.rows[i][0] = times[i];
    std::ofstream f(out("permuted.csv"));
    coxko::write_csv(f, shuffled.header, shuffled.rows);
  }
  REQUIRE(run("knockoffs --input " + out("permuted.csv") + " --seed 11 --out " + out("ko_perm.csv")) == 0);
  const auto permuted = coxko::read_csv(out("ko_perm.csv"));
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    for (std::size_t c = 2; c < 152; ++c) CHECK(permuted.rows[i][c] == table.rows[i][c]);
  }

  // Dropping the knockoff columns gives back the standardized design.
  std::vector<std::string> header(table.header.begin(), table.header.begin() + 77);
  std::vector<std::vector<std::string>> rows;
  for (const auto& r : table.rows) rows.emplace_back(r.begin(), r.begin() + 77);
  coxko::CsvTable firsts{header, rows, table.line_of_row};
  const auto reloaded = coxko::load_csv_table(firsts);
  const auto raw = coxko::load_csv(kNki);
  const Eigen::MatrixXd expect = coxko::standardize_columns(raw.data.design());
  CHECK((reloaded.data.design() - expect).cwiseAbs().maxCoeff() <= 1e-9);
}

TEST_CASE("zero s copies the standardized originals") {
  REQUIRE(run("knockoffs --input " + kNki + " --debug-zero-s --out " + out("ko0.csv")) == 0);
  const auto loaded = coxko::load_csv(out("ko0.csv"));
  const auto& z = loaded.data.design();
  CHECK((z.leftCols(75) - z.rightCols(75)).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("simulate writes three rows and is byte-stable") {
  std::ofstream(out("small.cfg")) << "name = small\nn = 150\np = 12\nreplications = 3\nfolds = 4\nseed = 9\n";
  REQUIRE(run("simulate --scenario " + out("small.cfg") + " --out " + out("s1.csv")) == 0);
  REQUIRE(run("simulate --scenario " + out("small.cfg") + " --out " + out("s2.csv")) == 0);
  const std::string a = slurp(out("s1.csv"));
  CHECK(a == slurp(out("s2.csv")));
  int lines = 0;
  for (char c : a) lines += c == '\n';
  CHECK(lines == 4);
  REQUIRE(run("simulate --scenario study1_case2_desk --replications 1 --format json --out " + out("p.json")) == 0);
  CHECK(slurp(out("p.json")).find("study1_case2_desk") != std::string::npos);
}
