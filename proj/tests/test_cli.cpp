#include <doctest.h>

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

namespace {

struct CliRun {
  int code = -1;
  std::string out;
};

CliRun run_cli(const std::string& args) {
  const std::string cmd =
      std::string(WIDTHSLAB_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  CliRun r;
  char buf[4096];
  std::size_t got;
  while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, got);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string fixture(const std::string& name) {
  return std::string(WIDTHSLAB_FIXTURE_DIR) + "/" + name;
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::stringstream ss(text);
  std::string line;
  while (std::getline(ss, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (line.back() == ',') cells.push_back("");
    rows.push_back(std::move(cells));
  }
  return rows;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("compute emits the documented csv") {
  const CliRun r = run_cli("compute --class " + fixture("cube2.json") +
                           " --quantity g,g0 --n 0..1");
  REQUIRE(r.code == 0);
  const auto rows = parse_csv(r.out);
  REQUIRE(rows.size() == 5);
  CHECK(rows[0] == std::vector<std::string>{"class_id", "quantity", "n", "lo",
                                            "hi", "method", "design", "seed",
                                            "runtime_ms"});
  // n = 0: the whole square, diameter 2
  CHECK(rows[1] == std::vector<std::string>{"cube2", "g", "0", "1", "1",
                                            "exhaustive", "", "1", ""});
  CHECK(rows[2][1] == "g0");
  CHECK(rows[2][4] == "2");
  // n = 1: one pinned coordinate leaves the other free
  CHECK(rows[3][2] == "1");
  CHECK(rows[3][3] == "1");
  CHECK(rows[4][6] == "0");  // lexicographic first optimal design
}

TEST_CASE("reruns are byte-identical and --out matches stdout") {
  const std::string args = "compute --class " + fixture("l1ball4.json") +
                           " --quantity g,eps --n 0..2 --mesh 0.25";
  const CliRun a = run_cli(args);
  const CliRun b = run_cli(args);
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);

  const std::string out_path = "/tmp/widthslab_cli_out.csv";
  std::remove(out_path.c_str());
  const CliRun c = run_cli(args + " --out " + out_path);
  REQUIRE(c.code == 0);
  CHECK(c.out.empty());
  CHECK(slurp(out_path) == a.out);
}

TEST_CASE("timing column only appears on request") {
  const std::string base = "compute --class " + fixture("cube2.json") +
                           " --quantity g --n 0";
  const auto plain = parse_csv(run_cli(base).out);
  CHECK(plain[1][8].empty());
  const auto timed = parse_csv(run_cli(base + " --timings").out);
  CHECK(!timed[1][8].empty());
  CHECK(std::strtod(timed[1][8].c_str(), nullptr) >= 0.0);
}

TEST_CASE("malformed input exits 2") {
  CHECK(run_cli("compute --class " + fixture("malformed.json") + " --n 0")
            .code == 2);
  CHECK(run_cli("compute --class /nonexistent.json --n 0").code == 2);
  CHECK(run_cli("compute --class " + fixture("cube2.json") +
                " --quantity nonsense --n 0")
            .code == 2);
  CHECK(run_cli("compute --quantity g --n 0").code == 2);  // --class missing
  CHECK(run_cli("compute --class " + fixture("cube2.json") + " --n 2..0")
            .code == 2);
}

TEST_CASE("blown budgets exit 3") {
  CHECK(run_cli("compute --class " + fixture("l1ball4.json") +
                " --quantity g --n 2 --budget 5")
            .code == 3);
}

TEST_CASE("verification failure exits 1 and says so") {
  const CliRun bad = run_cli("verify --class " + fixture("corrupt_pball.json") +
                             " --n 1");
  CHECK(bad.code == 1);
  CHECK(bad.out.find("FAIL") != std::string::npos);

  const CliRun good = run_cli("verify --class " + fixture("pball_half3.json") +
                              " --n 1");
  CHECK(good.code == 0);
  CHECK(good.out.find("PASS (1/1)") != std::string::npos);
}

TEST_CASE("verify writes a machine-readable report") {
  const std::string report_path = "/tmp/widthslab_cli_report.json";
  std::remove(report_path.c_str());
  const CliRun r = run_cli("verify --class " + fixture("cube2.json") +
                           " --n 0..1 --mesh 0.25 --report " + report_path);
  REQUIRE(r.code == 0);
  CHECK(r.out.find("PASS (2/2)") != std::string::npos);

  const nlohmann::json rep = nlohmann::json::parse(slurp(report_path));
  CHECK(rep["class_id"] == "cube2");
  CHECK(rep["pass"] == true);
  REQUIRE(rep["results"].size() == 2);
  const auto& r1 = rep["results"][1];
  CHECK(r1["n"] == 1);
  CHECK(r1["pass"] == true);
  CHECK(r1["transcript"]["gaps"].size() == 2);
  CHECK(r1["transcript"]["rho"].get<double>() == doctest::Approx(2.0));
  CHECK(r1["separation"]["pass"] == true);
  CHECK(r1["membership"]["pass"] == true);
  CHECK(r1["upper"]["pass"] == true);
  CHECK(r1["lower"]["pass"] == true);
  CHECK(r1["sampling"]["g"].get<double>() == doctest::Approx(1.0));
}

TEST_CASE("sweep appends rate rows") {
  const CliRun r = run_cli("sweep --class " + fixture("l1ball4.json") +
                           " --quantity g --n 1..3");
  REQUIRE(r.code == 0);
  const auto rows = parse_csv(r.out);
  REQUIRE(rows.size() == 5);  // header, three values, one rate row
  CHECK(rows[4][1] == "rate:g");
  // g is flat at 1 on this range, so the fitted slope vanishes
  CHECK(std::abs(std::strtod(rows[4][3].c_str(), nullptr)) <= 1e-9);
  CHECK(rows[4][5].find("loglog-value") == 0);
  CHECK(rows[4][5].find("residual=") != std::string::npos);
}

TEST_CASE("sweep writes plot points when asked") {
  const std::string plot_path = "/tmp/widthslab_cli_plot.txt";
  std::remove(plot_path.c_str());
  const CliRun r = run_cli("sweep --class " + fixture("l1ball4.json") +
                           " --quantity g --n 1..3 --plot " + plot_path);
  REQUIRE(r.code == 0);
  const std::string plot = slurp(plot_path);
  CHECK(plot.find("# quantity g") != std::string::npos);
  CHECK(plot.find("# fit exponent=") != std::string::npos);
}

TEST_CASE("the entropy oracle covers a diagonal segment") {
  const CliRun r = run_cli(
      "oracle --class " + fixture("segment.json") +
      " --quantity eps --n 1 --mesh 0.1 --grid '-1,-1;-0.5,-0.5;0,0;0.5,0.5;1,1'");
  REQUIRE(r.code == 0);
  const auto rows = parse_csv(r.out);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0][0] == "oracle");
  CHECK(rows[0][1] == "eps");
  CHECK(std::strtod(rows[0][3].c_str(), nullptr) == doctest::Approx(0.6));
}

TEST_CASE("the rational oracle confirms small diameters") {
  const CliRun r = run_cli("oracle --class " + fixture("cube2.json") +
                           " --quantity g0 --n 0..1");
  REQUIRE(r.code == 0);
  const auto rows = parse_csv(r.out);
  REQUIRE(rows.size() == 2);
  for (const auto& row : rows) {
    CHECK(row[1] == "g0");
    CHECK(row.back() == "ok");
    CHECK(std::strtod(row[3].c_str(), nullptr) == doctest::Approx(2.0));
  }
}

TEST_CASE("rational cross-check flag annotates the method") {
  const CliRun r = run_cli("compute --class " + fixture("cube2.json") +
                           " --quantity g --n 1 --exact-rational");
  REQUIRE(r.code == 0);
  const auto rows = parse_csv(r.out);
  CHECK(rows[1][5] == "exhaustive+xrational");
}

TEST_CASE("generator descriptions load through the same door") {
  const CliRun r = run_cli("compute --class " + fixture("randsym.json") +
                           " --quantity g0 --n 1");
  REQUIRE(r.code == 0);
  const auto rows = parse_csv(r.out);
  REQUIRE(rows.size() == 2);
  CHECK(std::strtod(rows[1][3].c_str(), nullptr) > 0.0);
}

TEST_CASE("n specs accept lists and ranges") {
  const std::string base = "compute --class " + fixture("cube2.json") +
                           " --quantity g ";
  CHECK(parse_csv(run_cli(base + "--n 1").out).size() == 2);
  CHECK(parse_csv(run_cli(base + "--n 0..2").out).size() == 4);
  CHECK(parse_csv(run_cli(base + "--n 0,2").out).size() == 3);
}
