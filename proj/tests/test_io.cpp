#include <cmath>

#include "doctest.h"

#include "discern/io.hpp"
#include "test_util.hpp"

using namespace discern;
using io::json;

TEST_CASE("json round trips") {
  SUBCASE("vector") {
    Vector v{cplx(0.5, -0.25), cplx(0.0, 1.0), cplx(-2.0, 0.0)};
    Vector back = io::parse_vector(io::to_json(v), "t");
    REQUIRE(back.dim() == 3);
    for (std::size_t i = 0; i < 3; ++i) CHECK(back[i] == v[i]);
  }

  SUBCASE("observable survives a serialize/parse/serialize cycle exactly") {
    Rng rng(21);
    Hermitian a = testutil::random_hermitian(rng, 3);
    json j = io::to_json(a);
    Hermitian back = io::parse_observable(j, "t");
    CHECK(testutil::max_entry_diff(a, back) == 0.0);
    CHECK(io::to_json(back).dump() == j.dump());
  }

  SUBCASE("full-precision text round trips doubles exactly") {
    Rng rng(4);
    for (int i = 0; i < 200; ++i) {
      double x = std::exp(20.0 * (rng.uniform() - 0.5)) * (rng.uniform() - 0.5);
      CHECK(std::stod(io::format_full(x)) == x);
    }
  }
}

TEST_CASE("input parsing diagnostics") {
  SUBCASE("well-formed input") {
    json j = {{"states", {{"v", {{1.0, 0.0}, {0.0, 0.0}}}, {"w", {{0.0, 0.0}, {1.0, 0.0}}}}},
              {"observable", {{{1.0, 0.0}, {0.0, 0.0}}, {{0.0, 0.0}, {-1.0, 0.0}}}},
              {"priors", {{"p1", 0.25}}}};
    io::InputData in = io::parse_input(j);
    REQUIRE(in.v.has_value());
    REQUIRE(in.w.has_value());
    REQUIRE(in.observable.has_value());
    CHECK(in.p1 == 0.25);
    CHECK((*in.observable)(1, 1) == cplx(-1.0, 0.0));
  }

  SUBCASE("unknown keys are named") {
    json j = {{"state", 1}};
    CHECK_THROWS_WITH_AS((void)io::parse_input(j), "input: unknown key 'state'",
                         std::invalid_argument);
  }

  SUBCASE("non-unit state is named") {
    json j = {{"states", {{"v", {{1.0, 0.0}, {1.0, 0.0}}}}}};
    try {
      (void)io::parse_input(j);
      FAIL("expected throw");
    } catch (const std::invalid_argument& e) {
      CHECK(std::string(e.what()).find("input.states.v") != std::string::npos);
    }
  }

  SUBCASE("malformed complex entry is located") {
    json j = {{"observable", {{{1.0, 0.0}, 3.5}, {{0.0, 0.0}, {1.0, 0.0}}}}};
    try {
      (void)io::parse_input(j);
      FAIL("expected throw");
    } catch (const std::invalid_argument& e) {
      CHECK(std::string(e.what()).find("input.observable[0][1]") != std::string::npos);
    }
  }

  SUBCASE("non-hermitian observable rejected") {
    json j = {{"observable", {{{0.0, 0.0}, {1.0, 0.0}}, {{2.0, 0.0}, {0.0, 0.0}}}}};
    CHECK_THROWS_AS((void)io::parse_input(j), std::invalid_argument);
  }

  SUBCASE("out-of-range prior rejected") {
    json j = {{"priors", {{"p1", 1.5}}}};
    CHECK_THROWS_AS((void)io::parse_input(j), std::invalid_argument);
  }
}

TEST_CASE("csv round trip at full precision") {
  io::CsvWriter w({"theta", "delta"});
  w.add_comment("config: {}");
  Rng rng(12);
  std::vector<std::vector<double>> rows;
  for (int i = 0; i < 50; ++i) {
    rows.push_back({rng.uniform() * 1.5, std::tan(rng.uniform() * 1.5)});
    w.add_row(rows.back());
  }
  io::CsvTable t = io::parse_csv(w.text());
  REQUIRE(t.header == std::vector<std::string>{"theta", "delta"});
  REQUIRE(t.rows.size() == rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(t.rows[i][0] == rows[i][0]);
    CHECK(t.rows[i][1] == rows[i][1]);
  }

  SUBCASE("width mismatches rejected") {
    CHECK_THROWS_AS(w.add_row({1.0}), std::invalid_argument);
    CHECK_THROWS_AS((void)io::parse_csv("a,b\n1.0\n"), std::invalid_argument);
    CHECK_THROWS_AS((void)io::parse_csv("a\nnot_a_number\n"), std::invalid_argument);
  }
}

TEST_CASE("report serialization carries all residuals") {
  StatePair p = canonical_pair(1.0);
  SaturationReport rep = check_saturation(saturating_observable(p, 1.3), p, 1e-9);
  json j = io::to_json(rep);
  for (const char* key : {"stabilizes_subspace", "subspace_residual", "lambda",
                          "lambda_imag_residual", "lambda_in_hull", "saturated", "qmie_gap",
                          "orthogonal_case", "tolerance"})
    CHECK(j.contains(key));
  CHECK(j["saturated"].get<bool>());

  DiscriminationStats st = discernability(Hermitian::identity(2), p);
  json js = io::to_json(st);
  CHECK(js["delta_status"] == "undefined");
  CHECK(js["delta"].is_null());
}
