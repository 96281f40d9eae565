// SPDX-License-Identifier: Apache-2.0
#include <set>

#include "doctest.h"
#include "nfi/bool_expr.hpp"
#include "nfi/errors.hpp"
#include "test_util.hpp"

using namespace nfi;

namespace {

// Independent oracle: evaluates the tree by direct recursion, written
// separately from BoolExpr::evaluate.
bool oracle_eval(const BoolExpr& e, const std::map<std::string, bool>& a) {
  using K = BoolExpr::Kind;
  if (e.kind == K::Const0) return false;
  if (e.kind == K::Const1) return true;
  if (e.kind == K::Var) return a.at(e.var);
  if (e.kind == K::Not) return !oracle_eval(e.args[0], a);
  if (e.kind == K::Xor)
    return oracle_eval(e.args[0], a) ^ oracle_eval(e.args[1], a);
  bool acc = e.kind == K::And;
  for (const auto& arg : e.args) {
    bool v = oracle_eval(arg, a);
    acc = e.kind == K::And ? (acc && v) : (acc || v);
  }
  return acc;
}

BoolExpr random_expr(test::Rng& rng, const std::vector<std::string>& pins,
                     int depth) {
  if (depth == 0 || rng.below(5) == 0) {
    switch (rng.below(4)) {
      case 0:
        return BoolExpr::constant(false);
      case 1:
        return BoolExpr::constant(true);
      default:
        return BoolExpr::variable(pins[rng.below(pins.size())]);
    }
  }
  switch (rng.below(4)) {
    case 0:
      return BoolExpr::negate(random_expr(rng, pins, depth - 1));
    case 1:
      return BoolExpr::exclusive(random_expr(rng, pins, depth - 1),
                                 random_expr(rng, pins, depth - 1));
    default: {
      std::vector<BoolExpr> args;
      size_t n = 2 + rng.below(3);
      for (size_t i = 0; i < n; ++i)
        args.push_back(random_expr(rng, pins, depth - 1));
      return rng.flip() ? BoolExpr::conj(std::move(args))
                        : BoolExpr::disj(std::move(args));
    }
  }
}

}  // namespace

TEST_CASE("parses the compound-gate function") {
  std::set<std::string> pins{"A1", "B1", "B2"};
  BoolExpr e = parse_bool_expr("!(A1 & (B1 | B2))", pins);
  REQUIRE(e.kind == BoolExpr::Kind::Not);
  const BoolExpr& conj = e.args[0];
  REQUIRE(conj.kind == BoolExpr::Kind::And);
  REQUIRE(conj.args.size() == 2);
  CHECK(conj.args[0] == BoolExpr::variable("A1"));
  REQUIRE(conj.args[1].kind == BoolExpr::Kind::Or);
  CHECK(conj.args[1].args[0] == BoolExpr::variable("B1"));
  CHECK(conj.args[1].args[1] == BoolExpr::variable("B2"));
}

TEST_CASE("single variable parses to itself") {
  BoolExpr e = parse_bool_expr("A", {"A"});
  CHECK(e == BoolExpr::variable("A"));
}

TEST_CASE("postfix negation of xor equals xnor on all assignments") {
  std::set<std::string> pins{"A", "B"};
  BoolExpr lhs = parse_bool_expr("(A ^ B)'", pins);
  REQUIRE(lhs.kind == BoolExpr::Kind::Not);
  REQUIRE(lhs.args[0].kind == BoolExpr::Kind::Xor);
  BoolExpr xnor = parse_bool_expr("!(A ^ B)", pins);
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) {
      std::map<std::string, bool> assign{{"A", a != 0}, {"B", b != 0}};
      CHECK(lhs.evaluate(assign) == xnor.evaluate(assign));
      CHECK(lhs.evaluate(assign) == ((a != 0) == (b != 0)));
    }
}

TEST_CASE("precedence: NOT over XOR over AND over OR") {
  std::set<std::string> pins{"A", "B", "C", "D"};
  BoolExpr e = parse_bool_expr("A | B & C ^ !D", pins);
  // A | (B & (C ^ (!D)))
  REQUIRE(e.kind == BoolExpr::Kind::Or);
  REQUIRE(e.args[1].kind == BoolExpr::Kind::And);
  REQUIRE(e.args[1].args[1].kind == BoolExpr::Kind::Xor);
  CHECK(e.args[1].args[1].args[1].kind == BoolExpr::Kind::Not);

  // `*` and `+` are aliases for `&` and `|`.
  CHECK(parse_bool_expr("A + B * C", pins) ==
        parse_bool_expr("A | B & C", pins));
}

TEST_CASE("binary chains collapse to one n-ary node") {
  std::set<std::string> pins{"A", "B", "C"};
  BoolExpr e = parse_bool_expr("A & B & C", pins);
  REQUIRE(e.kind == BoolExpr::Kind::And);
  CHECK(e.args.size() == 3);
  // Parenthesized nesting is preserved.
  BoolExpr nested = parse_bool_expr("A & (B & C)", pins);
  REQUIRE(nested.args.size() == 2);
  CHECK(nested.args[1].kind == BoolExpr::Kind::And);
}

TEST_CASE("undeclared pins and syntax errors are reported") {
  CHECK_THROWS_WITH_AS(parse_bool_expr("A & Q", {"A"}),
                       doctest::Contains("undeclared pin 'Q'"), Error);
  CHECK_THROWS_AS(parse_bool_expr("A &", {"A"}), Error);
  CHECK_THROWS_AS(parse_bool_expr("(A", {"A"}), Error);
  CHECK_THROWS_AS(parse_bool_expr("A B", {"A", "B"}), Error);
  try {
    parse_bool_expr("A @ B", {"A", "B"});
    FAIL("expected a syntax error");
  } catch (const Error& e) {
    CHECK(e.kind() == Err::SyntaxError);
  }
}

TEST_CASE("property: serialize then parse round-trips structurally") {
  test::Rng rng(42);
  std::vector<std::string> pins{"A", "B", "C", "D1", "D2"};
  std::set<std::string> pin_set(pins.begin(), pins.end());
  for (int i = 0; i < 200; ++i) {
    BoolExpr e = random_expr(rng, pins, 4);
    BoolExpr round = parse_bool_expr(e.to_string(), pin_set);
    CHECK(round == e);
  }
}

TEST_CASE("property: evaluation matches the recursive oracle") {
  test::Rng rng(7);
  std::vector<std::string> pins{"A", "B", "C"};
  for (int i = 0; i < 100; ++i) {
    BoolExpr e = random_expr(rng, pins, 4);
    for (int bits = 0; bits < 8; ++bits) {
      std::map<std::string, bool> assign{{"A", (bits & 1) != 0},
                                         {"B", (bits & 2) != 0},
                                         {"C", (bits & 4) != 0}};
      CHECK(e.evaluate(assign) == oracle_eval(e, assign));
    }
  }
}
