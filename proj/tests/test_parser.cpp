#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "doctest.h"
#include "testnets.hpp"
#include "yodo/bif.hpp"

using namespace yodo;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const char* kTwoNode = R"(
network test {
}
variable A {
  type discrete [ 2 ] { a0, a1 };
}
variable B {
  type discrete [ 3 ] { b0, b1, b2 };
}
probability ( A ) {
  table 0.25, 0.75;
}
probability ( B | A ) {
  (a0) 0.2, 0.3, 0.5;
  (a1) 0.1, 0.1, 0.8;
}
)";

}  // namespace

TEST_CASE("xy fixture file parses to the hand-built network") {
  auto bn = load_bif_file(yodo::testing::data_path("xy.bif"));
  CHECK(bn.parts().name == "xy");
  REQUIRE(bn.variable_count() == 2);
  CHECK(bn.arc_count() == 1);
  CHECK(bn.variable(0).name == "X");
  CHECK(bn.variable(1).states == std::vector<std::string>{"y0", "y1"});
  CHECK(bn.cpt(0).table == std::vector<double>{0.6, 0.4});
  CHECK(bn.cpt(1).table == std::vector<double>{0.8, 0.2, 0.1, 0.9});
  CHECK(bn.parameter_count() == 6);
}

TEST_CASE("per-configuration rows land configuration-major") {
  auto bn = parse_bif(kTwoNode);
  CHECK(bn.cpt(1).parents == std::vector<int>{0});
  CHECK(bn.cpt(1).table == std::vector<double>{0.2, 0.3, 0.5, 0.1, 0.1, 0.8});
}

TEST_CASE("table directive stores the child state slowest") {
  // Same distribution as kTwoNode's tuple rows, flattened with the child
  // state as the slow axis: state b0 over configs (a0, a1), then b1, then b2.
  const char* text = R"(
network test { }
variable A { type discrete [ 2 ] { a0, a1 }; }
variable B { type discrete [ 3 ] { b0, b1, b2 }; }
probability ( A ) { table 0.25, 0.75; }
probability ( B | A ) {
  table 0.2, 0.1, 0.3, 0.1, 0.5, 0.8;
}
)";
  auto bn = parse_bif(text);
  CHECK(bn.cpt(1).table == std::vector<double>{0.2, 0.3, 0.5, 0.1, 0.1, 0.8});
}

TEST_CASE("two-parent tuples map row-major with the last parent fastest") {
  const char* text = R"(
network t { }
variable A { type discrete [ 2 ] { a0, a1 }; }
variable B { type discrete [ 2 ] { b0, b1 }; }
variable C { type discrete [ 2 ] { c0, c1 }; }
probability ( A ) { table 0.5, 0.5; }
probability ( B ) { table 0.5, 0.5; }
probability ( C | A, B ) {
  (a0, b0) 0.10, 0.90;
  (a0, b1) 0.20, 0.80;
  (a1, b0) 0.30, 0.70;
  (a1, b1) 0.40, 0.60;
}
)";
  auto bn = parse_bif(text);
  // config = a * 2 + b
  CHECK(bn.cpt(2).table ==
        std::vector<double>{0.10, 0.90, 0.20, 0.80, 0.30, 0.70, 0.40, 0.60});
  // Tuple order in the file must not matter; states, not positions, decide.
  const char* shuffled = R"(
network t { }
variable A { type discrete [ 2 ] { a0, a1 }; }
variable B { type discrete [ 2 ] { b0, b1 }; }
variable C { type discrete [ 2 ] { c0, c1 }; }
probability ( A ) { table 0.5, 0.5; }
probability ( B ) { table 0.5, 0.5; }
probability ( C | A, B ) {
  (a1, b1) 0.40, 0.60;
  (a0, b0) 0.10, 0.90;
  (a1, b0) 0.30, 0.70;
  (a0, b1) 0.20, 0.80;
}
)";
  CHECK(parse_bif(shuffled).cpt(2).table == bn.cpt(2).table);
}

TEST_CASE("comments and properties survive parsing") {
  const char* text = R"(
// leading comment
network demo {
  property author unknown ;
}
variable A { /* inline */ type discrete [ 2 ] { a0, a1 }; property role test ;
}
probability ( A ) { table 0.5, 0.5; property note keep ; }
)";
  auto parts = parse_bif_parts(text);
  CHECK(parts.properties.size() == 1);
  CHECK(parts.variables[0].properties.size() == 1);
  CHECK(parts.cpts[0].properties.size() == 1);
  // And they round-trip.
  auto again = parse_bif_parts(write_bif(parts));
  CHECK(again.properties == parts.properties);
  CHECK(again.variables[0].properties == parts.variables[0].properties);
}

TEST_CASE("write_bif round-trips every table bit-exactly") {
  auto original = parse_bif(kTwoNode);
  auto again = parse_bif(write_bif(original));
  REQUIRE(again.variable_count() == original.variable_count());
  for (int v = 0; v < original.variable_count(); ++v) {
    CHECK(again.variable(v).name == original.variable(v).name);
    CHECK(again.variable(v).states == original.variable(v).states);
    CHECK(again.cpt(v).parents == original.cpt(v).parents);
    CHECK(again.cpt(v).table == original.cpt(v).table);  // bitwise
  }

  // Awkward doubles survive the 17-digit print.
  auto bn = yodo::testing::random_network(9, 3, 4, 7);
  auto back = parse_bif(write_bif(bn));
  for (int v = 0; v < bn.variable_count(); ++v) CHECK(back.cpt(v).table == bn.cpt(v).table);
}

TEST_CASE("malformed input raises ParseError with a location") {
  auto expect_error = [](const char* text) {
    try {
      parse_bif_parts(text);
      FAIL_CHECK("expected ParseError for: " << text);
    } catch (const ParseError& e) {
      CHECK(e.line >= 1);
      CHECK(e.col >= 1);
    }
  };
  // Unknown state label in a tuple row.
  expect_error(R"(
network t { }
variable A { type discrete [ 2 ] { a0, a1 }; }
variable B { type discrete [ 2 ] { b0, b1 }; }
probability ( A ) { table 0.5, 0.5; }
probability ( B | A ) { (bogus) 0.5, 0.5; (a1) 0.5, 0.5; }
)");
  // Wrong number of values in a row.
  expect_error(R"(
network t { }
variable A { type discrete [ 2 ] { a0, a1 }; }
probability ( A ) { table 0.5, 0.25, 0.25; }
)");
  // Declared state count disagrees with the list.
  expect_error(R"(
network t { }
variable A { type discrete [ 3 ] { a0, a1 }; }
probability ( A ) { table 0.5, 0.5; }
)");
  // Unknown variable in a probability header.
  expect_error(R"(
network t { }
variable A { type discrete [ 2 ] { a0, a1 }; }
probability ( Z ) { table 0.5, 0.5; }
)");
  // Duplicate probability block.
  expect_error(R"(
network t { }
variable A { type discrete [ 2 ] { a0, a1 }; }
probability ( A ) { table 0.5, 0.5; }
probability ( A ) { table 0.5, 0.5; }
)");
  // Missing probability block.
  expect_error(R"(
network t { }
variable A { type discrete [ 2 ] { a0, a1 }; }
)");
  // Duplicate configuration row.
  expect_error(R"(
network t { }
variable A { type discrete [ 2 ] { a0, a1 }; }
variable B { type discrete [ 2 ] { b0, b1 }; }
probability ( A ) { table 0.5, 0.5; }
probability ( B | A ) { (a0) 0.5, 0.5; (a0) 0.5, 0.5; }
)");
  // Missing configuration row.
  expect_error(R"(
network t { }
variable A { type discrete [ 2 ] { a0, a1 }; }
variable B { type discrete [ 2 ] { b0, b1 }; }
probability ( A ) { table 0.5, 0.5; }
probability ( B | A ) { (a0) 0.5, 0.5; }
)");
  // Unterminated block.
  expect_error(R"(
network t { }
variable A { type discrete [ 2 ] { a0, a1 };
)");
  // Plain garbage.
  expect_error("this is not a network\n");
}

TEST_CASE("numeric problems surface as ValidationError, not ParseError") {
  const char* text = R"(
network t { }
variable A { type discrete [ 2 ] { a0, a1 }; }
probability ( A ) { table 0.5, 0.4; }
)";
  CHECK_NOTHROW(parse_bif_parts(text));  // structurally fine
  CHECK_THROWS_AS(parse_bif(text), ValidationError);
}

TEST_CASE("load_bif_file reports unreadable paths") {
  CHECK_THROWS_AS(load_bif_file("/nonexistent/net.bif"), std::runtime_error);
}
