#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <string>

#include "doctest.h"
#include "json.hpp"
#include "testnets.hpp"

using yodo::testing::cli_path;
using yodo::testing::data_path;
using yodo::testing::run_command;

namespace {

std::string q(const std::string& s) { return "'" + s + "'"; }

std::string base_cmd() {
  const std::string bin = cli_path();
  REQUIRE_MESSAGE(!bin.empty(), "YODO_CLI must point at the built binary");
  return q(bin);
}

}  // namespace

TEST_CASE("analyze prints a ranked CSV report and exits 0") {
  auto r = run_command(base_cmd() + " analyze -n " + q(data_path("xy.bif")) +
                       " -t X=x1 -e Y=y1 2>/dev/null");
  REQUIRE(r.status == 0);
  CHECK(r.out.rfind("parameter,value,sens_value,", 0) == 0);
  // 6 parameters -> 7 lines.
  int lines = 0;
  for (char c : r.out)
    if (c == '\n') ++lines;
  CHECK(lines == 7);
  CHECK(r.out.find("Y=y1|X=x1") != std::string::npos);
  CHECK(r.out.find("0.208333") != std::string::npos);
}

TEST_CASE("analyze --format json emits machine-readable rows") {
  auto r = run_command(base_cmd() + " analyze -n " + q(data_path("xy.bif")) +
                       " -t X=x1 -e Y=y1 --format json 2>/dev/null");
  REQUIRE(r.status == 0);
  auto doc = nlohmann::json::parse(r.out);
  REQUIRE(doc.is_array());
  REQUIRE(doc.size() == 6);
  for (const auto& row : doc) {
    CHECK(row.contains("parameter"));
    CHECK(row.contains("value"));
    CHECK(row.contains("sens_value"));
    CHECK(row.contains("proximity"));
    CHECK(row.contains("second_deriv"));
    CHECK(row.contains("max_first_deriv"));
    CHECK(row.contains("monotonicity"));
    CHECK(row.contains("in_sensitivity_set"));
  }
  CHECK(doc[0]["sens_value"].get<double>() >= doc[5]["sens_value"].get<double>());
}

TEST_CASE("analyze is byte-deterministic across runs") {
  const std::string cmd = base_cmd() + " analyze -n " + q(data_path("xy.bif")) +
                          " -t X=x1 -e Y=y1 --format csv 2>/dev/null";
  auto a = run_command(cmd);
  auto b = run_command(cmd);
  REQUIRE(a.status == 0);
  REQUIRE(b.status == 0);
  CHECK(a.out == b.out);
}

TEST_CASE("analyze --top truncates after ranking") {
  auto r = run_command(base_cmd() + " analyze -n " + q(data_path("xy.bif")) +
                       " -t X=x1 -e Y=y1 --top 2 2>/dev/null");
  REQUIRE(r.status == 0);
  int lines = 0;
  for (char c : r.out)
    if (c == '\n') ++lines;
  CHECK(lines == 3);
}

TEST_CASE("input problems exit 2") {
  SUBCASE("missing file") {
    auto r = run_command(base_cmd() + " analyze -n /nonexistent.bif -t X=x1 2>/dev/null");
    CHECK(r.status == 2);
  }
  SUBCASE("unknown target variable") {
    auto r = run_command(base_cmd() + " analyze -n " + q(data_path("xy.bif")) +
                         " -t NOPE=x1 2>/dev/null");
    CHECK(r.status == 2);
  }
  SUBCASE("unknown state") {
    auto r = run_command(base_cmd() + " analyze -n " + q(data_path("xy.bif")) +
                         " -t X=banana 2>/dev/null");
    CHECK(r.status == 2);
  }
  SUBCASE("missing required flags") {
    auto r = run_command(base_cmd() + " analyze 2>/dev/null");
    CHECK(r.status == 2);
  }
  SUBCASE("bad subcommand") {
    auto r = run_command(base_cmd() + " frobnicate 2>/dev/null");
    CHECK(r.status == 2);
  }
  SUBCASE("bad --top") {
    auto r = run_command(base_cmd() + " analyze -n " + q(data_path("xy.bif")) +
                         " -t X=x1 --top 0 2>/dev/null");
    CHECK(r.status == 2);
  }
}

TEST_CASE("help exits 0") {
  CHECK(run_command(base_cmd() + " --help >/dev/null 2>&1").status == 0);
  CHECK(run_command(base_cmd() + " analyze --help >/dev/null 2>&1").status == 0);
}

TEST_CASE("verify passes on the fixture and fails under fault injection") {
  auto ok = run_command(base_cmd() + " verify -n " + q(data_path("xy.bif")) +
                        " -t X=x1 -e Y=y1 2>/dev/null");
  REQUIRE(ok.status == 0);
  CHECK(ok.out.find("PASS") != std::string::npos);
  CHECK(ok.out.find("max derivative deviation") != std::string::npos);
  CHECK(ok.out.find("max curve deviation") != std::string::npos);

  auto bad = run_command(base_cmd() + " verify -n " + q(data_path("xy.bif")) +
                         " -t X=x1 -e Y=y1 --inject-gradient-error 2>/dev/null");
  CHECK(bad.status == 1);
  CHECK(bad.out.find("FAIL") != std::string::npos);
}

TEST_CASE("verify --sample limits the sweep deterministically") {
  const std::string cmd = base_cmd() + " verify -n " + q(data_path("xy.bif")) +
                          " -t Y=y1 --sample 3 --seed 7 2>/dev/null";
  auto a = run_command(cmd);
  auto b = run_command(cmd);
  REQUIRE(a.status == 0);
  CHECK(a.out.find("checked 3 of 6") != std::string::npos);
  CHECK(a.out == b.out);
}

TEST_CASE("bench reports parameters, width and speedup") {
  auto r = run_command(base_cmd() +
                       " bench --synthetic --nodes 30 --max-parents 2 --max-states 2 --seed 3"
                       " 2>/dev/null");
  REQUIRE(r.status == 0);
  CHECK(r.out.find("network") != std::string::npos);
  CHECK(r.out.find("fd_baseline_ms") != std::string::npos);
  CHECK(r.out.find("synthetic") != std::string::npos);

  auto files = run_command(base_cmd() + " bench " + q(data_path("xy.bif")) + " 2>/dev/null");
  REQUIRE(files.status == 0);
  CHECK(files.out.find("xy.bif") != std::string::npos);

  auto none = run_command(base_cmd() + " bench 2>/dev/null");
  CHECK(none.status == 2);

  auto missing = run_command(base_cmd() + " bench /nonexistent.bif 2>/dev/null");
  CHECK(missing.status == 2);  // every network failed
  CHECK(missing.out.find("failed") != std::string::npos);
}

TEST_CASE("bench honors YODO_THREADS for multi-network runs") {
  auto r = run_command("YODO_THREADS=2 " + base_cmd() + " bench " + q(data_path("xy.bif")) + " " +
                       q(data_path("xy.bif")) + " 2>/dev/null");
  REQUIRE(r.status == 0);
  // Both rows present, in input order.
  auto first = r.out.find("xy.bif");
  REQUIRE(first != std::string::npos);
  CHECK(r.out.find("xy.bif", first + 1) != std::string::npos);
}

TEST_CASE("impossible evidence is an analysis failure, exit 1") {
  // Build a tiny file where evidence B=b0 has probability zero.
  const std::string path = "/tmp/yodo_zero_evidence.bif";
  {
    FILE* f = fopen(path.c_str(), "w");
    REQUIRE(f != nullptr);
    fputs("network z { }\n"
          "variable A { type discrete [ 2 ] { a0, a1 }; }\n"
          "variable B { type discrete [ 2 ] { b0, b1 }; }\n"
          "probability ( A ) { table 0.5, 0.5; }\n"
          "probability ( B | A ) { (a0) 0.0, 1.0; (a1) 0.0, 1.0; }\n",
          f);
    fclose(f);
  }
  auto r = run_command(base_cmd() + " analyze -n " + path + " -t A=a0 -e B=b0 2>/dev/null");
  CHECK(r.status == 1);
}
