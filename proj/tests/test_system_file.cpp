#include <string>

#include "doctest.h"
#include "subsq/bench.hpp"
#include "subsq/system_file.hpp"

using namespace subsq;

namespace {

std::string parse_error(const std::string& text) {
  try {
    parse_system(text);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ParseError);
    return e.what();
  }
  FAIL("expected a parse error");
  return {};
}

bool contains_text(const std::string& haystack, const std::string& needle) {
  return haystack.find(needle) != std::string::npos;
}

}  // namespace

TEST_CASE("round trip is exact") {
  for (auto kind : {GeneratorKind::Shifted, GeneratorKind::Centered}) {
    ExperimentConfig cfg;
    cfg.m = 7;
    cfg.n = 4;
    cfg.radius = 0.1;
    cfg.generator = kind;
    Rng rng(61);
    const auto g = generate_random_system(cfg, rng);
    const auto back = parse_system(write_system(g.a, g.b, "a comment\nover two lines"));
    REQUIRE(back.a.rows() == 7);
    REQUIRE(back.a.cols() == 4);
    for (Eigen::Index i = 0; i < g.a.size(); ++i) CHECK(back.a.data()[i] == g.a.data()[i]);
    for (Eigen::Index i = 0; i < g.b.size(); ++i) CHECK(back.b[i] == g.b[i]);
  }
}

TEST_CASE("decimal input, comments and blank lines") {
  const auto sys = parse_system("# header comment\n\n1 2\n 1 2   -3 -3  # row\n\n0.5 0.75\n");
  CHECK(sys.a(0, 0) == Ival(1, 2));
  CHECK(sys.a(0, 1) == Ival(-3));
  CHECK(sys.b[0] == Ival(0.5, 0.75));
}

TEST_CASE("hex floats print and parse") {
  CHECK(hex_float(1.0) == "0x1p+0");
  CHECK(parse_system("1 1\n0x1.8p+0 0x1p+1\n-0x1p-2 0x0p+0\n").a(0, 0) == Ival(1.5, 2));
}

TEST_CASE("diagnostics name line and column") {
  CHECK(contains_text(parse_error(""), "line 1"));
  CHECK(contains_text(parse_error("1\n"), "header"));
  CHECK(contains_text(parse_error("0 1\n"), "dimension"));
  CHECK(contains_text(parse_error("1 1\n1 x\n1 1\n"), "line 2, column 3"));
  CHECK(contains_text(parse_error("1 1\n2 1\n1 1\n"), "lower bound exceeds upper bound"));
  CHECK(contains_text(parse_error("1 1\n1 inf\n1 1\n"), "finite"));
  CHECK(contains_text(parse_error("1 1\n1 1\n1 1\n1 1\n"), "line 4, column 1: unexpected trailing data"));
  CHECK(contains_text(parse_error("2 1\n1 1\n1 1\n1 1\n"), "data lines"));
  CHECK(contains_text(parse_error("1 2\n1 1\n1 1\n"), "line 2"));
  CHECK(contains_text(parse_error("1 1\n1 1\n1\n"), "right-hand side"));
  CHECK(contains_text(parse_error("1 1\n1 1\nnan 1\n"), "number"));
}

TEST_CASE("missing file") {
  try {
    read_system_file("/nonexistent/system.txt");
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ParseError);
  }
}
