#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <set>
#include <sstream>

#include "tsqw/errors.hpp"
#include "tsqw/scan.hpp"

using namespace tsqw;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

fs::path scratch_dir() {
  const fs::path d = fs::temp_directory_path() / "tsqw_scan_tests";
  fs::create_directories(d);
  return d;
}

std::vector<std::vector<std::string>> parse_csv(const std::string& s) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream is(s);
  std::string line;
  while (std::getline(is, line)) {
    std::vector<std::string> r;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) r.push_back(cell);
    if (!line.empty() && line.back() == ',') r.push_back("");
    rows.push_back(r);
  }
  return rows;
}

int run(ScanConfig c, std::string* out_text = nullptr) {
  std::ostringstream out, err;
  const int rc = run_command(c, out, err);
  if (out_text) *out_text = out.str();
  return rc;
}

}  // namespace

TEST_SUITE("cli_scan") {
  TEST_CASE("config file entries are applied and later entries override") {
    const fs::path p = scratch_dir() / "cfg.txt";
    {
      std::ofstream f(p);
      f << "# sweep\nresolution = 101\nline=blue1\ntheta1-range=-1:1  # comment\noffsets=0.05,0.2\nformat=json\n";
    }
    ScanConfig c;
    apply_config_file(c, p.string());
    CHECK(c.resolution == 101);
    CHECK(c.line == LineId::Blue1);
    REQUIRE(c.theta1_range.has_value());
    CHECK(c.theta1_range->lo == -1.0);
    CHECK(c.offsets == std::vector<double>{0.05, 0.2});
    CHECK(c.format == OutputFormat::Json);
    apply_config_entry(c, "resolution", "64");
    CHECK(c.resolution == 64);
    CHECK_THROWS_AS(apply_config_entry(c, "bogus", "1"), ConfigError);
    CHECK_THROWS_AS(apply_config_entry(c, "line", "green"), ConfigError);
    CHECK_THROWS_AS(apply_config_entry(c, "resolution", "12.5"), ConfigError);
    CHECK_THROWS_AS(apply_config_entry(c, "theta1-range", "1:-1"), ConfigError);
    CHECK_THROWS_AS(apply_config_file(c, (scratch_dir() / "missing.txt").string()), ConfigError);
  }

  TEST_CASE("exit codes for config and I/O errors") {
    ScanConfig c;
    c.command = "phase-diagram";
    c.resolution = 1;
    CHECK(run(c) == 2);
    c.resolution = 32;  // below the kernel minimum
    CHECK(run(c) == 2);
    c.command = "no-such-command";
    CHECK(run(c) == 2);
    ScanConfig v;
    v.command = "velocity";
    v.output = "/nonexistent-dir/tsqw/out.csv";
    CHECK(run(v) == 3);
    ScanConfig a;
    a.command = "acceptance";
    a.only = {"nonsense"};
    CHECK(run(a) == 2);
  }

  TEST_CASE("phase-diagram: columns, values, manifest and byte-identical reruns") {
    const fs::path d = scratch_dir();
    ScanConfig c;
    c.command = "phase-diagram";
    c.resolution = 64;
    c.k_grid = 1024;
    c.output = (d / "pd1.csv").string();
    REQUIRE(run(c) == 0);
    c.output = (d / "pd2.csv").string();
    c.jobs = 1;
    REQUIRE(run(c) == 0);
    const std::string a = slurp(d / "pd1.csv"), b = slurp(d / "pd2.csv");
    CHECK(a == b);
    const auto rows = parse_csv(a);
    REQUIRE(rows.size() == 64 * 64 + 1);
    CHECK(rows[0] == std::vector<std::string>{"theta1", "theta2", "w", "min_gap", "line_id"});
    const std::set<std::string> ok{"-3", "-1", "1", "3", "NA"};
    int na = 0;
    for (std::size_t i = 1; i < rows.size(); ++i) {
      REQUIRE(rows[i].size() == 5);
      CHECK(ok.count(rows[i][2]) == 1);
      if (rows[i][2] == "NA") {
        ++na;
        CHECK(parse_line(rows[i][4]).has_value());
      }
    }
    CHECK(na > 0);
    const auto m = nlohmann::json::parse(slurp(d / "pd1.csv.manifest.json"));
    CHECK(m["version"] == kToolVersion);
    CHECK(m["config"]["resolution"] == 64);
    CHECK(m["files"].size() == 1);
    CHECK(m["files"][0]["path"] == (d / "pd1.csv").string());
    CHECK(m["tasks"][0]["status"] == "ok");
    CHECK(m["wall_time_s"].get<double>() >= 0);
  }

  TEST_CASE("json format carries the same rows") {
    ScanConfig c;
    c.command = "velocity";
    c.k_grid = 1024;
    std::string csv, js;
    REQUIRE(run(c, &csv) == 0);
    c.format = OutputFormat::Json;
    REQUIRE(run(c, &js) == 0);
    const auto j = nlohmann::json::parse(js);
    REQUIRE(j.size() == 1024);
    CHECK(j[0].contains("v_plus"));
    CHECK(j[0]["span_min"].get<double>() == doctest::Approx(-3).epsilon(1e-3));
    CHECK(j[0]["span_max"].get<double>() == doctest::Approx(3).epsilon(1e-3));
    CHECK(parse_csv(csv).size() == 1025);
  }

  TEST_CASE("rg-flow writes the table and the point list") {
    const fs::path d = scratch_dir();
    ScanConfig c;
    c.command = "rg-flow";
    c.line = LineId::Red2;
    c.resolution = 400;
    c.output = (d / "rg.csv").string();
    REQUIRE(run(c) == 0);
    const auto pts = parse_csv(slurp(d / "rg.points.csv"));
    REQUIRE(pts.size() == 1 + 4 + 2);
    std::vector<double> fixed, unstable;
    for (std::size_t i = 1; i < pts.size(); ++i) (pts[i][1] == "fixed" ? fixed : unstable).push_back(std::stod(pts[i][2]));
    CHECK(fixed[0] == doctest::Approx(-kPi / 2));
    CHECK(fixed[1] == doctest::Approx(0).epsilon(1e-9));
    CHECK(fixed[2] == doctest::Approx(kPi / 2));
    CHECK(fixed[3] == doctest::Approx(kPi));
    CHECK(unstable[0] == doctest::Approx(-2 * kPi / 3));
    CHECK(unstable[1] == doctest::Approx(2 * kPi / 3));
    const auto m = nlohmann::json::parse(slurp(d / "rg.csv.manifest.json"));
    CHECK(m["files"].size() == 2);
    CHECK(parse_csv(slurp(d / "rg.csv")).size() == 401);
  }

  TEST_CASE("wannier: decay is slower at offset 0.1 near a quadratic point") {
    ScanConfig c;
    c.command = "wannier";
    c.line = LineId::Red2;
    c.theta1 = 2 * kPi / 3;
    c.r_max = 5;
    std::string text;
    REQUIRE(run(c, &text) == 0);
    const auto rows = parse_csv(text);
    double x1 = 0, x3 = 0;
    for (std::size_t i = 1; i < rows.size(); ++i) {
      CHECK(rows[i][3] == "oz_width");
      (std::stod(rows[i][0]) < 0.2 ? x1 : x3) = std::stod(rows[i][4]);
    }
    CHECK(x1 > x3);
    c.theta1 = 0.5;
    CHECK(run(c) == 2);
  }

  TEST_CASE("critical-scan on the blue line") {
    ScanConfig c;
    c.command = "critical-scan";
    c.line = LineId::Blue1;
    c.steps = 60;
    std::string text;
    REQUIRE(run(c, &text) == 0);
    const auto rows = parse_csv(text);
    REQUIRE(rows.size() == 61);
    std::set<std::string> wc;
    for (std::size_t i = 1; i < rows.size(); ++i) wc.insert(rows[i][9]);
    CHECK(wc == std::set<std::string>{"-2", "0", "2"});
  }

  TEST_CASE("exponents table for one line") {
    ScanConfig c;
    c.command = "exponents";
    c.line = LineId::Op1;
    c.points = 10;
    std::string text;
    REQUIRE(run(c, &text) == 0);
    const auto rows = parse_csv(text);
    REQUIRE(rows.size() >= 2);
    for (std::size_t i = 1; i < rows.size(); ++i) {
      CHECK(std::stod(rows[i][6]) == doctest::Approx(1.0).epsilon(0.05));
      CHECK(std::stod(rows[i][12]) == doctest::Approx(1.0).epsilon(0.05));
    }
  }

  TEST_CASE("winding-trace manifest reports loops") {
    const fs::path d = scratch_dir();
    ScanConfig c;
    c.command = "winding-trace";
    c.theta1 = 0.7;
    c.theta2 = -0.3;
    c.output = (d / "wt.csv").string();
    REQUIRE(run(c) == 0);
    const auto m = nlohmann::json::parse(slurp(d / "wt.csv.manifest.json"));
    CHECK(m["summary"]["loops"] == 3);
  }

  TEST_CASE("acceptance --list does not run criteria") {
    ScanConfig c;
    c.command = "acceptance";
    c.list = true;
    std::string text;
    REQUIRE(run(c, &text) == 0);
    CHECK(std::count(text.begin(), text.end(), '\n') == 10);
  }
}
