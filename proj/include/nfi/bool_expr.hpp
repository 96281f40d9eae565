// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

namespace nfi {

/// Boolean expression tree over cell pins. AND/OR are n-ary; XOR is binary
/// (chains nest left-associatively); NOT is unary.
struct BoolExpr {
  enum class Kind { Const0, Const1, Var, Not, And, Or, Xor };

  Kind kind = Kind::Const0;
  std::string var;             // Kind::Var only
  std::vector<BoolExpr> args;  // Not: 1, Xor: 2, And/Or: >= 2

  static BoolExpr constant(bool v) {
    BoolExpr e;
    e.kind = v ? Kind::Const1 : Kind::Const0;
    return e;
  }
  static BoolExpr variable(std::string name) {
    BoolExpr e;
    e.kind = Kind::Var;
    e.var = std::move(name);
    return e;
  }
  static BoolExpr negate(BoolExpr a);
  static BoolExpr conj(std::vector<BoolExpr> xs);
  static BoolExpr disj(std::vector<BoolExpr> xs);
  static BoolExpr exclusive(BoolExpr a, BoolExpr b);

  bool operator==(const BoolExpr&) const = default;

  /// Evaluates under a complete pin assignment. Throws Err::MissingPin if a
  /// referenced variable is absent.
  bool evaluate(const std::map<std::string, bool>& assignment) const;

  /// All variables referenced anywhere in the tree.
  void collect_vars(std::set<std::string>& out) const;

  /// Serialization that parse_bool_expr reads back to a structurally
  /// identical tree.
  std::string to_string() const;
};

/// Parses the function-string grammar: precedence NOT (`!` prefix, `'`
/// postfix) > XOR (`^`) > AND (`&`, `*`) > OR (`|`, `+`); parentheses;
/// constants `0`/`1`. Identifiers must be members of `declared_pins`.
/// Left-associative `&`/`|` chains collapse into one n-ary node.
BoolExpr parse_bool_expr(const std::string& text,
                         const std::set<std::string>& declared_pins);

}  // namespace nfi
