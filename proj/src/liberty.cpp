// SPDX-License-Identifier: Apache-2.0
#include "nfi/liberty.hpp"

#include <cctype>
#include <optional>
#include <vector>

#include "nfi/errors.hpp"

namespace nfi {
namespace {

enum class Tok : uint8_t {
  Ident,
  Number,
  String,
  LParen,
  RParen,
  LBrace,
  RBrace,
  Colon,
  Semicolon,
  Comma,
  End,
};

struct Token {
  Tok kind = Tok::End;
  std::string text;
  int line = 0;
};

class Lexer {
 public:
  explicit Lexer(const std::string& src) : src_(src) {}

  Token next() {
    skip_space();
    Token t;
    t.line = line_;
    if (pos_ >= src_.size()) return t;
    char c = src_[pos_];
    switch (c) {
      case '(': return punct(Tok::LParen);
      case ')': return punct(Tok::RParen);
      case '{': return punct(Tok::LBrace);
      case '}': return punct(Tok::RBrace);
      case ':': return punct(Tok::Colon);
      case ';': return punct(Tok::Semicolon);
      case ',': return punct(Tok::Comma);
      case '"': return read_string();
      default: break;
    }
    if (std::isdigit(uc(c)) || c == '-' || c == '+' || c == '.')
      return read_number();
    return read_ident();
  }

  int line() const { return line_; }

 private:
  const std::string& src_;
  size_t pos_ = 0;
  int line_ = 1;

  static unsigned char uc(char c) { return static_cast<unsigned char>(c); }

  void bump() {
    if (src_[pos_] == '\n') ++line_;
    ++pos_;
  }

  void skip_space() {
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (std::isspace(uc(c)) || c == '\\') {
        bump();
      } else if (c == '/' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '*') {
        bump();
        bump();
        while (pos_ + 1 < src_.size() &&
               !(src_[pos_] == '*' && src_[pos_ + 1] == '/'))
          bump();
        if (pos_ + 1 < src_.size()) {
          bump();
          bump();
        } else {
          pos_ = src_.size();
        }
      } else if (c == '/' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '/') {
        while (pos_ < src_.size() && src_[pos_] != '\n') bump();
      } else {
        break;
      }
    }
  }

  Token punct(Tok k) {
    Token t{k, std::string(1, src_[pos_]), line_};
    bump();
    return t;
  }

  Token read_string() {
    Token t{Tok::String, "", line_};
    bump();  // opening quote
    while (pos_ < src_.size() && src_[pos_] != '"') {
      if (src_[pos_] == '\\' && pos_ + 1 < src_.size() &&
          src_[pos_ + 1] == '\n') {
        bump();  // multi-line function strings
      } else {
        t.text += src_[pos_];
      }
      bump();
    }
    if (pos_ >= src_.size())
      throw Error(Err::MalformedLiberty,
                  "line " + std::to_string(t.line) + ": unterminated string");
    bump();  // closing quote
    return t;
  }

  Token read_number() {
    Token t{Tok::Number, "", line_};
    while (pos_ < src_.size() &&
           (std::isalnum(uc(src_[pos_])) || src_[pos_] == '.' ||
            src_[pos_] == '-' || src_[pos_] == '+'))
      t.text += src_[pos_], bump();
    return t;
  }

  Token read_ident() {
    Token t{Tok::Ident, "", line_};
    while (pos_ < src_.size() &&
           (std::isalnum(uc(src_[pos_])) || src_[pos_] == '_' ||
            src_[pos_] == '.' || src_[pos_] == '[' || src_[pos_] == ']'))
      t.text += src_[pos_], bump();
    if (t.text.empty())
      throw Error(Err::MalformedLiberty,
                  "line " + std::to_string(line_) + ": unexpected character '" +
                      std::string(1, src_[pos_]) + "'");
    return t;
  }
};

struct PinInfo {
  std::string name;
  std::string direction;
  std::string function;  // raw text
  bool has_function = false;
  bool is_clock = false;
};

class LibertyParser {
 public:
  LibertyParser(const std::string& src, const LibertyOptions& opts)
      : lex_(src), opts_(opts) {
    advance();
  }

  CellLibrary parse() {
    expect_ident("library");
    skip_group_args();
    expect(Tok::LBrace);
    CellLibrary lib;
    parse_body([&](const std::string& head) {
      if (head == "cell") {
        parse_cell(lib);
        return true;
      }
      return false;
    });
    lib.finalize();
    return lib;
  }

 private:
  Lexer lex_;
  LibertyOptions opts_;
  Token tok_;

  void advance() { tok_ = lex_.next(); }

  [[noreturn]] void fail(const std::string& reason) {
    throw Error(Err::MalformedLiberty,
                "line " + std::to_string(tok_.line) + ": " + reason);
  }

  void expect(Tok k) {
    if (tok_.kind != k) fail("unexpected token '" + tok_.text + "'");
    advance();
  }

  void expect_ident(const std::string& name) {
    if (tok_.kind != Tok::Ident || tok_.text != name)
      fail("expected '" + name + "', got '" + tok_.text + "'");
    advance();
  }

  // Consumes "( ... )" and returns the argument tokens.
  std::vector<std::string> group_args() {
    expect(Tok::LParen);
    std::vector<std::string> args;
    while (tok_.kind != Tok::RParen) {
      if (tok_.kind == Tok::End) fail("unterminated group arguments");
      if (tok_.kind != Tok::Comma) args.push_back(tok_.text);
      advance();
    }
    advance();
    return args;
  }

  void skip_group_args() { group_args(); }

  // Consumes a balanced "{ ... }" whose content we do not interpret.
  void skip_braced() {
    expect(Tok::LBrace);
    int depth = 1;
    while (depth > 0) {
      if (tok_.kind == Tok::End) fail("unbalanced braces");
      if (tok_.kind == Tok::LBrace) ++depth;
      if (tok_.kind == Tok::RBrace) --depth;
      advance();
    }
  }

  // Skips the remainder of a statement we do not interpret: either an
  // attribute ("... ;") or a nested group ("( .. ) { .. }").
  void skip_statement() {
    while (true) {
      if (tok_.kind == Tok::End) fail("unterminated statement");
      if (tok_.kind == Tok::Semicolon) {
        advance();
        return;
      }
      if (tok_.kind == Tok::LBrace) {
        skip_braced();
        return;
      }
      if (tok_.kind == Tok::RBrace) return;  // attribute without ';'
      advance();
    }
  }

  // Iterates group-body statements until the closing brace. `handler`
  // returns true when it consumed the statement for the given head token.
  template <typename Handler>
  void parse_body(Handler handler) {
    while (tok_.kind != Tok::RBrace) {
      if (tok_.kind == Tok::End) fail("unbalanced braces");
      if (tok_.kind != Tok::Ident && tok_.kind != Tok::Number)
        fail("unexpected token '" + tok_.text + "'");
      std::string head = tok_.text;
      advance();
      if (!handler(head)) skip_statement();
    }
    advance();  // closing brace
  }

  // Reads the value of "name : value ;" (value may be ident/number/string).
  std::string attribute_value() {
    expect(Tok::Colon);
    std::string value = tok_.text;
    advance();
    // Values like "1.5 ns" or expressions: collect until ';'.
    while (tok_.kind != Tok::Semicolon && tok_.kind != Tok::RBrace &&
           tok_.kind != Tok::End) {
      value += tok_.text;
      advance();
    }
    if (tok_.kind == Tok::Semicolon) advance();
    return value;
  }

  void parse_cell(CellLibrary& lib) {
    auto args = group_args();
    if (args.empty()) fail("cell without a name");
    CellDefinition cell;
    cell.name = args[0];
    std::vector<PinInfo> pins;
    std::vector<std::string> ff_states;
    bool has_ff = false;

    expect(Tok::LBrace);
    parse_body([&](const std::string& head) {
      if (head == "pin") {
        pins.push_back(parse_pin());
        return true;
      }
      if (head == "ff" || head == "latch") {
        has_ff = true;
        ff_states = group_args();
        parse_ff_body(cell);
        return true;
      }
      if (head == "area") {
        std::string v = attribute_value();
        try {
          cell.area = std::stod(v);
        } catch (...) {
          fail("bad area value '" + v + "'");
        }
        return true;
      }
      return false;
    });

    if (opts_.sequential_overrides.count(cell.name)) {
      has_ff = true;
      if (!cell.data_pin) cell.data_pin = opts_.override_data_pin;
      if (!cell.clock_pin) cell.clock_pin = opts_.override_clock_pin;
    }
    cell.is_sequential = has_ff;

    for (const auto& pin : pins) {
      bool is_input = pin.direction == "input" || pin.direction == "in" ||
                      pin.direction == "inout";
      bool is_output = pin.direction == "output" || pin.direction == "out" ||
                       pin.direction == "inout";
      if (cell.has_input(pin.name) || cell.has_output(pin.name))
        fail("cell '" + cell.name + "': duplicate pin '" + pin.name + "'");
      if (is_input) {
        cell.input_pins.push_back(pin.name);
        if (pin.is_clock && !cell.clock_pin) cell.clock_pin = pin.name;
      }
      if (is_output) cell.output_pins.push_back(pin.name);
    }

    if (has_ff) {
      // Output functions of sequential cells reference the ff state
      // variables; they only tell us which outputs are negated.
      for (const auto& pin : pins) {
        if (!cell.has_output(pin.name)) continue;
        bool inverted = false;
        if (pin.has_function) {
          std::string f = normalize(pin.function);
          if (ff_states.size() > 1 && f == ff_states[1]) inverted = true;
          if (!ff_states.empty() &&
              (f == "!" + ff_states[0] || f == ff_states[0] + "'"))
            inverted = true;
        }
        cell.output_inverted[pin.name] = inverted;
      }
      if (cell.data_pin && !cell.has_input(*cell.data_pin)) cell.data_pin.reset();
    } else {
      std::set<std::string> declared(cell.input_pins.begin(),
                                     cell.input_pins.end());
      for (const auto& pin : pins) {
        if (!cell.has_output(pin.name) || !pin.has_function) continue;
        try {
          cell.functions[pin.name] = parse_bool_expr(pin.function, declared);
        } catch (const Error& e) {
          throw Error(Err::MalformedLiberty,
                      "cell '" + cell.name + "' pin '" + pin.name +
                          "': " + e.what());
        }
      }
    }

    // Cells without logical semantics (fillers, physical-only) are omitted.
    if (!cell.is_sequential && cell.functions.empty()) return;
    lib.add(std::move(cell));
  }

  PinInfo parse_pin() {
    auto args = group_args();
    PinInfo pin;
    if (!args.empty()) pin.name = args[0];
    expect(Tok::LBrace);
    parse_body([&](const std::string& head) {
      if (head == "direction") {
        pin.direction = attribute_value();
        return true;
      }
      if (head == "function") {
        pin.function = attribute_value();
        pin.has_function = true;
        return true;
      }
      if (head == "clock") {
        pin.is_clock = attribute_value() == "true";
        return true;
      }
      return false;
    });
    return pin;
  }

  void parse_ff_body(CellDefinition& cell) {
    expect(Tok::LBrace);
    parse_body([&](const std::string& head) {
      if (head == "next_state") {
        std::string v = normalize(attribute_value());
        // Only a bare pin name yields D-type pass-through semantics;
        // anything else (muxed scan flops) stays unresolved here.
        bool bare = !v.empty();
        for (char c : v)
          if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_')
            bare = false;
        if (bare) cell.data_pin = v;
        return true;
      }
      if (head == "clocked_on") {
        std::string v = normalize(attribute_value());
        bool bare = !v.empty();
        for (char c : v)
          if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_')
            bare = false;
        if (bare) cell.clock_pin = v;
        return true;
      }
      return false;
    });
  }

  static std::string normalize(const std::string& s) {
    std::string out;
    for (char c : s)
      if (!std::isspace(static_cast<unsigned char>(c)) && c != '(' && c != ')')
        out += c;
    return out;
  }
};

}  // namespace

CellLibrary parse_liberty(const std::string& text, const LibertyOptions& opts) {
  return LibertyParser(text, opts).parse();
}

}  // namespace nfi
