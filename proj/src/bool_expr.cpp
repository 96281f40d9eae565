// SPDX-License-Identifier: Apache-2.0
#include "nfi/bool_expr.hpp"

#include <cctype>
#include <sstream>

#include "nfi/bits.hpp"
#include "nfi/errors.hpp"

namespace nfi {

BoolExpr BoolExpr::negate(BoolExpr a) {
  BoolExpr e;
  e.kind = Kind::Not;
  e.args.push_back(std::move(a));
  return e;
}

BoolExpr BoolExpr::conj(std::vector<BoolExpr> xs) {
  if (xs.size() == 1) return std::move(xs.front());
  BoolExpr e;
  e.kind = Kind::And;
  e.args = std::move(xs);
  return e;
}

BoolExpr BoolExpr::disj(std::vector<BoolExpr> xs) {
  if (xs.size() == 1) return std::move(xs.front());
  BoolExpr e;
  e.kind = Kind::Or;
  e.args = std::move(xs);
  return e;
}

BoolExpr BoolExpr::exclusive(BoolExpr a, BoolExpr b) {
  BoolExpr e;
  e.kind = Kind::Xor;
  e.args.push_back(std::move(a));
  e.args.push_back(std::move(b));
  return e;
}

bool BoolExpr::evaluate(const std::map<std::string, bool>& assignment) const {
  switch (kind) {
    case Kind::Const0:
      return false;
    case Kind::Const1:
      return true;
    case Kind::Var: {
      auto it = assignment.find(var);
      if (it == assignment.end())
        throw Error(Err::MissingPin, "no value for pin '" + var + "'");
      return it->second;
    }
    case Kind::Not:
      return !args[0].evaluate(assignment);
    case Kind::And:
      for (const auto& a : args)
        if (!a.evaluate(assignment)) return false;
      return true;
    case Kind::Or:
      for (const auto& a : args)
        if (a.evaluate(assignment)) return true;
      return false;
    case Kind::Xor:
      return args[0].evaluate(assignment) != args[1].evaluate(assignment);
  }
  return false;
}

void BoolExpr::collect_vars(std::set<std::string>& out) const {
  if (kind == Kind::Var) out.insert(var);
  for (const auto& a : args) a.collect_vars(out);
}

namespace {

int precedence(BoolExpr::Kind k) {
  switch (k) {
    case BoolExpr::Kind::Or:
      return 1;
    case BoolExpr::Kind::And:
      return 2;
    case BoolExpr::Kind::Xor:
      return 3;
    default:
      return 4;  // atoms and NOT never need parens around themselves
  }
}

void render(const BoolExpr& e, int parent_prec, std::string& out) {
  int prec = precedence(e.kind);
  bool parens = prec < parent_prec;
  if (parens) out += '(';
  switch (e.kind) {
    case BoolExpr::Kind::Const0:
      out += '0';
      break;
    case BoolExpr::Kind::Const1:
      out += '1';
      break;
    case BoolExpr::Kind::Var:
      out += e.var;
      break;
    case BoolExpr::Kind::Not:
      out += '!';
      // A negated binary expression always gets parens.
      render(e.args[0], 4, out);
      break;
    case BoolExpr::Kind::And:
      for (size_t i = 0; i < e.args.size(); ++i) {
        if (i) out += " & ";
        // Children at the same precedence get parens so nested (non-chain)
        // structure survives the round trip.
        render(e.args[i], prec + 1, out);
      }
      break;
    case BoolExpr::Kind::Or:
      for (size_t i = 0; i < e.args.size(); ++i) {
        if (i) out += " | ";
        render(e.args[i], prec + 1, out);
      }
      break;
    case BoolExpr::Kind::Xor:
      render(e.args[0], prec, out);
      out += " ^ ";
      render(e.args[1], prec + 1, out);
      break;
  }
  if (parens) out += ')';
}

class ExprParser {
 public:
  ExprParser(const std::string& text, const std::set<std::string>& pins)
      : text_(text), pins_(pins) {}

  BoolExpr parse() {
    BoolExpr e = parse_or();
    skip_ws();
    if (pos_ != text_.size())
      throw Error(Err::SyntaxError, "unexpected input at position " +
                                        std::to_string(pos_) + " in '" +
                                        text_ + "'");
    return e;
  }

 private:
  const std::string& text_;
  const std::set<std::string>& pins_;
  size_t pos_ = 0;

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(uchar(text_[pos_]))) ++pos_;
  }
  static unsigned char uchar(char c) { return static_cast<unsigned char>(c); }

  bool eat(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  char peek() {
    skip_ws();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }

  BoolExpr parse_or() {
    std::vector<BoolExpr> terms;
    terms.push_back(parse_and());
    while (peek() == '|' || peek() == '+') {
      ++pos_;
      terms.push_back(parse_and());
    }
    return BoolExpr::disj(std::move(terms));
  }

  BoolExpr parse_and() {
    std::vector<BoolExpr> terms;
    terms.push_back(parse_xor());
    while (peek() == '&' || peek() == '*') {
      ++pos_;
      terms.push_back(parse_xor());
    }
    return BoolExpr::conj(std::move(terms));
  }

  BoolExpr parse_xor() {
    BoolExpr lhs = parse_unary();
    while (peek() == '^') {
      ++pos_;
      lhs = BoolExpr::exclusive(std::move(lhs), parse_unary());
    }
    return lhs;
  }

  BoolExpr parse_unary() {
    if (eat('!')) return BoolExpr::negate(parse_unary());
    BoolExpr e = parse_primary();
    while (eat('\'')) e = BoolExpr::negate(std::move(e));
    return e;
  }

  BoolExpr parse_primary() {
    skip_ws();
    if (pos_ >= text_.size())
      throw Error(Err::SyntaxError,
                  "unexpected end of expression in '" + text_ + "'");
    char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      BoolExpr e = parse_or();
      if (!eat(')'))
        throw Error(Err::SyntaxError, "missing ')' at position " +
                                          std::to_string(pos_) + " in '" +
                                          text_ + "'");
      return e;
    }
    if (c == '0' || c == '1') {
      // A digit starting an identifier is not legal, so a bare 0/1 here is
      // always the constant.
      ++pos_;
      return BoolExpr::constant(c == '1');
    }
    if (std::isalpha(uchar(c)) || c == '_') {
      size_t start = pos_;
      while (pos_ < text_.size() &&
             (std::isalnum(uchar(text_[pos_])) || text_[pos_] == '_'))
        ++pos_;
      std::string name = text_.substr(start, pos_ - start);
      if (!pins_.count(name))
        throw Error(Err::UndeclaredPin,
                    "undeclared pin '" + name + "' in '" + text_ + "'");
      return BoolExpr::variable(std::move(name));
    }
    throw Error(Err::SyntaxError, std::string("unexpected character '") + c +
                                      "' at position " + std::to_string(pos_) +
                                      " in '" + text_ + "'");
  }
};

}  // namespace

std::string BoolExpr::to_string() const {
  std::string out;
  render(*this, 0, out);
  return out;
}

BoolExpr parse_bool_expr(const std::string& text,
                         const std::set<std::string>& declared_pins) {
  return ExprParser(text, declared_pins).parse();
}

std::string BitVector::to_verilog() const {
  std::string s = std::to_string(width()) + "'b";
  for (size_t i = width(); i-- > 0;) s += bits[i] ? '1' : '0';
  return s;
}

BitVector parse_bit_literal(const std::string& text, size_t width_hint) {
  auto tick = text.find('\'');
  if (tick == std::string::npos) {
    // Plain decimal.
    size_t pos = 0;
    unsigned long long v = 0;
    try {
      v = std::stoull(text, &pos);
    } catch (...) {
      throw Error(Err::SchemaError, "bad bit literal '" + text + "'");
    }
    if (pos != text.size())
      throw Error(Err::SchemaError, "bad bit literal '" + text + "'");
    size_t width = width_hint;
    if (width == 0) {
      width = 1;
      while ((v >> width) != 0) ++width;
    }
    return BitVector(width, v);
  }
  size_t width = 0;
  try {
    width = std::stoul(text.substr(0, tick));
  } catch (...) {
    throw Error(Err::SchemaError, "bad width in literal '" + text + "'");
  }
  if (tick + 1 >= text.size())
    throw Error(Err::SchemaError, "bad bit literal '" + text + "'");
  char base = std::tolower(static_cast<unsigned char>(text[tick + 1]));
  std::string digits = text.substr(tick + 2);
  std::erase(digits, '_');
  BitVector bv(width);
  if (base == 'b') {
    size_t bit = 0;
    for (size_t i = digits.size(); i-- > 0 && bit < width; ++bit) {
      char d = digits[i];
      if (d != '0' && d != '1')
        throw Error(Err::SchemaError, "bad binary digit in '" + text + "'");
      bv.bits[bit] = d == '1';
    }
  } else if (base == 'h' || base == 'd') {
    unsigned long long v = 0;
    try {
      v = std::stoull(digits, nullptr, base == 'h' ? 16 : 10);
    } catch (...) {
      throw Error(Err::SchemaError, "bad bit literal '" + text + "'");
    }
    for (size_t i = 0; i < width && i < 64; ++i) bv.bits[i] = (v >> i) & 1;
  } else {
    throw Error(Err::SchemaError,
                std::string("unsupported base '") + base + "' in '" + text +
                    "'");
  }
  return bv;
}

}  // namespace nfi
