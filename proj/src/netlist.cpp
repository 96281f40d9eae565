// SPDX-License-Identifier: Apache-2.0
#include "nfi/netlist.hpp"

#include <cctype>
#include <optional>

#include "nfi/bits.hpp"
#include "nfi/errors.hpp"

namespace nfi {
namespace {

enum class Tok : uint8_t {
  Ident,
  Literal,  // 12, 4'b0101, 1'b0
  LParen,
  RParen,
  LBracket,
  RBracket,
  LBrace,
  RBrace,
  Semi,
  Comma,
  Dot,
  Colon,
  Equals,
  Hash,
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
      case '[': return punct(Tok::LBracket);
      case ']': return punct(Tok::RBracket);
      case '{': return punct(Tok::LBrace);
      case '}': return punct(Tok::RBrace);
      case ';': return punct(Tok::Semi);
      case ',': return punct(Tok::Comma);
      case '.': return punct(Tok::Dot);
      case ':': return punct(Tok::Colon);
      case '=': return punct(Tok::Equals);
      case '#': return punct(Tok::Hash);
      case '\\': return read_escaped();
      default: break;
    }
    if (std::isdigit(uc(c))) return read_literal();
    if (std::isalpha(uc(c)) || c == '_' || c == '$') return read_ident();
    throw Error(Err::SyntaxError, "line " + std::to_string(line_) +
                                      ": unexpected character '" +
                                      std::string(1, c) + "'");
  }

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
      if (std::isspace(uc(c))) {
        bump();
      } else if (c == '/' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '/') {
        while (pos_ < src_.size() && src_[pos_] != '\n') bump();
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
      } else if (c == '(' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '*') {
        // attribute instance (* ... *)
        bump();
        bump();
        while (pos_ + 1 < src_.size() &&
               !(src_[pos_] == '*' && src_[pos_ + 1] == ')'))
          bump();
        if (pos_ + 1 < src_.size()) {
          bump();
          bump();
        }
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

  // Escaped identifier: backslash, then anything up to whitespace.
  Token read_escaped() {
    Token t{Tok::Ident, "", line_};
    bump();
    while (pos_ < src_.size() && !std::isspace(uc(src_[pos_]))) {
      t.text += src_[pos_];
      bump();
    }
    if (t.text.empty())
      throw Error(Err::SyntaxError,
                  "line " + std::to_string(t.line) + ": empty escaped name");
    return t;
  }

  Token read_literal() {
    Token t{Tok::Literal, "", line_};
    while (pos_ < src_.size() &&
           (std::isalnum(uc(src_[pos_])) || src_[pos_] == '\'' ||
            src_[pos_] == '_'))
      t.text += src_[pos_], bump();
    return t;
  }

  Token read_ident() {
    Token t{Tok::Ident, "", line_};
    while (pos_ < src_.size() &&
           (std::isalnum(uc(src_[pos_])) || src_[pos_] == '_' ||
            src_[pos_] == '$'))
      t.text += src_[pos_], bump();
    return t;
  }
};

const char* kBehavioral[] = {"always",  "always_comb", "always_ff",
                             "initial", "if",          "case",
                             "generate", "function",   "task",
                             "for",     "genvar",      "parameter",
                             "localparam"};

struct Range {
  int msb = 0, lsb = 0;
  bool ranged = false;  // declared with [msb:lsb]
  int low() const { return std::min(msb, lsb); }
  int width() const { return std::abs(msb - lsb) + 1; }
};

class NetlistParser {
 public:
  explicit NetlistParser(const std::string& src) : lex_(src) { advance(); }

  std::vector<NetlistModule> parse() {
    std::vector<NetlistModule> modules;
    while (tok_.kind != Tok::End) {
      expect_ident("module");
      modules.push_back(parse_module());
    }
    return modules;
  }

 private:
  Lexer lex_;
  Token tok_;
  // nets declared in the current module: base -> range
  std::map<std::string, Range> nets_;

  void advance() { tok_ = lex_.next(); }

  [[noreturn]] void fail(const std::string& reason) {
    throw Error(Err::SyntaxError,
                "line " + std::to_string(tok_.line) + ": " + reason);
  }
  [[noreturn]] void unsupported(const std::string& what) {
    throw Error(Err::UnknownConstruct, "line " + std::to_string(tok_.line) +
                                           ": unsupported construct: " + what);
  }

  void expect(Tok k, const char* what) {
    if (tok_.kind != k) fail(std::string("expected ") + what + ", got '" +
                             tok_.text + "'");
    advance();
  }

  void expect_ident(const std::string& name) {
    if (tok_.kind != Tok::Ident || tok_.text != name)
      fail("expected '" + name + "', got '" + tok_.text + "'");
    advance();
  }

  bool at_ident(const char* name) const {
    return tok_.kind == Tok::Ident && tok_.text == name;
  }

  std::string take_ident() {
    if (tok_.kind != Tok::Ident) fail("expected identifier, got '" + tok_.text + "'");
    std::string s = tok_.text;
    advance();
    return s;
  }

  std::optional<Range> try_range() {
    if (tok_.kind != Tok::LBracket) return std::nullopt;
    advance();
    Range r;
    r.ranged = true;
    r.msb = take_int();
    expect(Tok::Colon, "':'");
    r.lsb = take_int();
    expect(Tok::RBracket, "']'");
    return r;
  }

  int take_int() {
    if (tok_.kind != Tok::Literal) fail("expected number, got '" + tok_.text + "'");
    int v = 0;
    try {
      v = std::stoi(tok_.text);
    } catch (...) {
      fail("bad index '" + tok_.text + "'");
    }
    advance();
    return v;
  }

  static std::string bit_name(const std::string& base, const Range& r,
                              int idx) {
    if (!r.ranged) return base;
    return base + "[" + std::to_string(idx) + "]";
  }

  void declare_net(NetlistModule& m, const std::string& base, const Range& r,
                   bool is_port) {
    if (nets_.count(base)) {
      // Port redeclared by a non-ANSI direction statement: widths must agree.
      if (nets_[base].width() != r.width())
        fail("conflicting widths for '" + base + "'");
      return;
    }
    nets_[base] = r;
    if (!is_port) {
      for (int i = 0; i < r.width(); ++i)
        m.wires.push_back(bit_name(base, r, r.low() + i));
    }
  }

  NetlistModule parse_module() {
    nets_.clear();
    NetlistModule m;
    m.name = take_ident();

    std::vector<std::string> header_ports;
    if (tok_.kind == Tok::LParen) {
      advance();
      bool ansi = at_ident("input") || at_ident("output") || at_ident("inout");
      if (ansi) {
        parse_ansi_ports(m);
      } else if (tok_.kind != Tok::RParen) {
        while (true) {
          header_ports.push_back(take_ident());
          if (tok_.kind == Tok::Comma) {
            advance();
            continue;
          }
          break;
        }
      }
      expect(Tok::RParen, "')'");
    }
    expect(Tok::Semi, "';'");

    while (!at_ident("endmodule")) {
      if (tok_.kind == Tok::End) fail("missing 'endmodule'");
      parse_item(m);
    }
    advance();  // endmodule

    // Non-ANSI headers list port names first; keep the header order.
    if (!header_ports.empty()) {
      std::vector<NetlistModule::Port> ordered;
      for (const auto& name : header_ports) {
        bool found = false;
        for (auto& p : m.ports)
          if (p.name == name) {
            ordered.push_back(p);
            found = true;
          }
        if (!found) fail("port '" + name + "' has no direction declaration");
      }
      m.ports = std::move(ordered);
    }
    return m;
  }

  void parse_ansi_ports(NetlistModule& m) {
    PortDir dir = PortDir::In;
    while (true) {
      if (at_ident("input")) {
        dir = PortDir::In;
        advance();
      } else if (at_ident("output")) {
        dir = PortDir::Out;
        advance();
      } else if (at_ident("inout")) {
        unsupported("inout port");
      }
      if (at_ident("wire") || at_ident("logic")) advance();
      Range r = try_range().value_or(Range{});
      std::string name = take_ident();
      m.ports.push_back({name, dir, r.width(), r.low(), r.ranged});
      declare_net(m, name, r, true);
      if (tok_.kind == Tok::Comma) {
        advance();
        continue;
      }
      break;
    }
  }

  void parse_item(NetlistModule& m) {
    if (tok_.kind != Tok::Ident) fail("unexpected token '" + tok_.text + "'");
    for (const char* kw : kBehavioral)
      if (tok_.text == kw) unsupported(tok_.text);

    if (at_ident("input") || at_ident("output")) {
      PortDir dir = tok_.text == "input" ? PortDir::In : PortDir::Out;
      advance();
      if (at_ident("wire") || at_ident("logic")) advance();
      Range r = try_range().value_or(Range{});
      while (true) {
        std::string name = take_ident();
        m.ports.push_back({name, dir, r.width(), r.low(), r.ranged});
        declare_net(m, name, r, true);
        if (tok_.kind == Tok::Comma) {
          advance();
          continue;
        }
        break;
      }
      expect(Tok::Semi, "';'");
      return;
    }
    if (at_ident("inout")) unsupported("inout port");
    if (at_ident("wire") || at_ident("reg") || at_ident("logic") ||
        at_ident("tri")) {
      advance();
      Range r = try_range().value_or(Range{});
      while (true) {
        std::string name = take_ident();
        declare_net(m, name, r, false);
        if (tok_.kind == Tok::Comma) {
          advance();
          continue;
        }
        break;
      }
      expect(Tok::Semi, "';'");
      return;
    }
    if (at_ident("supply0") || at_ident("supply1")) {
      bool value = tok_.text == "supply1";
      advance();
      while (true) {
        std::string name = take_ident();
        declare_net(m, name, Range{}, false);
        m.const_ties[name] = value;
        if (tok_.kind == Tok::Comma) {
          advance();
          continue;
        }
        break;
      }
      expect(Tok::Semi, "';'");
      return;
    }
    if (at_ident("assign")) {
      advance();
      parse_assign(m);
      return;
    }
    parse_instance(m);
  }

  // A single net bit, a constant, or a whole declared bus (returned as all
  // of its bits). Empty vector = explicitly unconnected.
  std::vector<std::string> parse_net_ref() {
    if (tok_.kind == Tok::LBrace) unsupported("concatenation");
    if (tok_.kind == Tok::Literal) {
      BitVector bv = parse_bit_literal(tok_.text);
      advance();
      std::vector<std::string> bits;
      for (size_t i = 0; i < bv.width(); ++i)
        bits.push_back(bv.bit(i) ? "1'b1" : "1'b0");
      return bits;
    }
    std::string base = take_ident();
    auto it = nets_.find(base);
    if (it == nets_.end()) fail("undeclared net '" + base + "'");
    if (tok_.kind == Tok::LBracket) {
      advance();
      int idx = take_int();
      if (tok_.kind == Tok::Colon) unsupported("part select");
      expect(Tok::RBracket, "']'");
      const Range& r = it->second;
      if (idx < r.low() || idx >= r.low() + r.width())
        fail("index " + std::to_string(idx) + " out of range for '" + base +
             "'");
      return {bit_name(base, r, idx)};
    }
    const Range& r = it->second;
    std::vector<std::string> bits;
    for (int i = 0; i < r.width(); ++i)
      bits.push_back(bit_name(base, r, r.low() + i));
    return bits;
  }

  void parse_assign(NetlistModule& m) {
    std::vector<std::string> lhs = parse_net_ref();
    expect(Tok::Equals, "'='");
    std::vector<std::string> rhs = parse_net_ref();
    expect(Tok::Semi, "';'");
    if (lhs.size() != rhs.size())
      fail("assign width mismatch (" + std::to_string(lhs.size()) + " vs " +
           std::to_string(rhs.size()) + ")");
    for (size_t i = 0; i < lhs.size(); ++i) {
      if (rhs[i] == "1'b0" || rhs[i] == "1'b1") {
        m.const_ties[lhs[i]] = rhs[i] == "1'b1";
      } else {
        m.aliases.emplace_back(lhs[i], rhs[i]);
      }
    }
  }

  void parse_instance(NetlistModule& m) {
    NetlistModule::Instance inst;
    inst.type = take_ident();
    if (tok_.kind == Tok::Hash) unsupported("parameterized instance");
    inst.name = take_ident();
    if (tok_.kind == Tok::LBracket) unsupported("instance array");
    expect(Tok::LParen, "'('");
    if (tok_.kind != Tok::RParen && tok_.kind != Tok::Dot)
      unsupported("positional connection");
    while (tok_.kind == Tok::Dot) {
      advance();
      std::string pin = take_ident();
      expect(Tok::LParen, "'('");
      std::string net;
      if (tok_.kind != Tok::RParen) {
        auto bits = parse_net_ref();
        if (bits.size() != 1)
          unsupported("bus connection to pin '" + pin + "' of " + inst.name);
        net = bits[0];
      }
      expect(Tok::RParen, "')'");
      if (inst.connections.count(pin))
        fail("pin '" + pin + "' connected twice on '" + inst.name + "'");
      inst.connections[pin] = net;
      if (tok_.kind == Tok::Comma) advance();
    }
    expect(Tok::RParen, "')'");
    expect(Tok::Semi, "';'");
    for (const auto& other : m.instances)
      if (other.name == inst.name) fail("duplicate instance '" + inst.name + "'");
    m.instances.push_back(std::move(inst));
  }
};

}  // namespace

std::vector<std::string> NetlistModule::port_bits(const Port& p) const {
  std::vector<std::string> bits;
  if (!p.ranged) {
    bits.push_back(p.name);
  } else {
    for (int i = 0; i < p.width; ++i)
      bits.push_back(p.name + "[" + std::to_string(p.low + i) + "]");
  }
  return bits;
}

std::vector<NetlistModule> parse_netlist(const std::string& text) {
  return NetlistParser(text).parse();
}

}  // namespace nfi
