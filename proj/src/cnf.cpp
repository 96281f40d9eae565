// SPDX-License-Identifier: Apache-2.0
#include <sstream>

#include "nfi/errors.hpp"
#include "nfi/sat.hpp"

namespace nfi {
namespace {

class TseitinBuilder {
 public:
  explicit TseitinBuilder(const DifferentialGraph& diff) : diff_(diff) {}

  CnfFormula build() {
    auto order = diff_.graph.topo_order();
    if (!order)
      throw Error(Err::CyclicGraph, "differential graph has a cycle");

    for (NodeId id : *order) encode_node(id);

    auto it = cnf_.var_map.find({diff_.root, "o"});
    if (it == cnf_.var_map.end())
      throw Error(Err::CyclicGraph, "root node was not encoded");
    cnf_.root_var = it->second;
    cnf_.add_clause({cnf_.root_var});
    cnf_.operator_count += 1;
    return std::move(cnf_);
  }

 private:
  const DifferentialGraph& diff_;
  CnfFormula cnf_;
  int const_var_[2] = {0, 0};

  int driver_var(NodeId id, const std::string& pin) {
    auto e = diff_.graph.in_edge_on_pin(id, pin);
    if (!e)
      throw Error(Err::MissingPin,
                  "node '" + diff_.graph.node(id).name + "': input pin '" +
                      pin + "' has no driver");
    const Edge& edge = diff_.graph.edges()[*e];
    return cnf_.var_map.at({edge.src, edge.src_pin});
  }

  int constant(bool v) {
    if (!const_var_[v]) {
      const_var_[v] = cnf_.fresh_var();
      cnf_.add_clause({v ? const_var_[v] : -const_var_[v]});
      cnf_.operator_count += 1;
    }
    return const_var_[v];
  }

  // y <-> a
  int emit_buf(int a) {
    int y = cnf_.fresh_var();
    cnf_.add_clause({-y, a});
    cnf_.add_clause({y, -a});
    cnf_.operator_count += 1;
    return y;
  }

  int emit_not(int a) {
    int y = cnf_.fresh_var();
    cnf_.add_clause({-y, -a});
    cnf_.add_clause({y, a});
    cnf_.operator_count += 1;
    return y;
  }

  int emit_and(const std::vector<int>& args) {
    int y = cnf_.fresh_var();
    std::vector<int> last{y};
    for (int a : args) {
      cnf_.add_clause({-y, a});
      last.push_back(-a);
    }
    cnf_.add_clause(std::move(last));
    cnf_.operator_count += std::max<size_t>(args.size(), 1);
    return y;
  }

  int emit_or(const std::vector<int>& args) {
    int y = cnf_.fresh_var();
    std::vector<int> last{-y};
    for (int a : args) {
      cnf_.add_clause({y, -a});
      last.push_back(a);
    }
    cnf_.add_clause(std::move(last));
    cnf_.operator_count += std::max<size_t>(args.size(), 1);
    return y;
  }

  // y <-> a xor b
  int emit_xor(int a, int b) {
    int y = cnf_.fresh_var();
    cnf_.add_clause({-y, a, b});
    cnf_.add_clause({-y, -a, -b});
    cnf_.add_clause({y, a, -b});
    cnf_.add_clause({y, -a, b});
    cnf_.operator_count += 2;
    return y;
  }

  int emit_xnor(int a, int b) {
    int y = cnf_.fresh_var();
    cnf_.add_clause({y, a, b});
    cnf_.add_clause({y, -a, -b});
    cnf_.add_clause({-y, a, -b});
    cnf_.add_clause({-y, -a, b});
    cnf_.operator_count += 2;
    return y;
  }

  int encode_expr(const BoolExpr& e,
                  const std::map<std::string, int>& pin_vars) {
    switch (e.kind) {
      case BoolExpr::Kind::Const0:
        return constant(false);
      case BoolExpr::Kind::Const1:
        return constant(true);
      case BoolExpr::Kind::Var: {
        auto it = pin_vars.find(e.var);
        if (it == pin_vars.end())
          throw Error(Err::MissingPin, "no variable for pin '" + e.var + "'");
        return it->second;
      }
      case BoolExpr::Kind::Not:
        return emit_not(encode_expr(e.args[0], pin_vars));
      case BoolExpr::Kind::And: {
        std::vector<int> args;
        for (const auto& a : e.args) args.push_back(encode_expr(a, pin_vars));
        return emit_and(args);
      }
      case BoolExpr::Kind::Or: {
        std::vector<int> args;
        for (const auto& a : e.args) args.push_back(encode_expr(a, pin_vars));
        return emit_or(args);
      }
      case BoolExpr::Kind::Xor:
        return emit_xor(encode_expr(e.args[0], pin_vars),
                        encode_expr(e.args[1], pin_vars));
    }
    throw Error(Err::SolverFailure, "unreachable expression kind");
  }

  void encode_node(NodeId id) {
    const Node& n = diff_.graph.node(id);
    switch (n.kind) {
      case NodeKind::PortIn:
      case NodeKind::AuxInput:
        cnf_.var_map[{id, "o"}] = cnf_.fresh_var();
        break;
      case NodeKind::ConstSource: {
        int v = cnf_.fresh_var();
        cnf_.add_clause({n.const_value ? v : -v});
        cnf_.operator_count += 1;
        cnf_.var_map[{id, "o"}] = v;
        break;
      }
      case NodeKind::PassThrough: {
        int d = driver_var(id, "d");
        cnf_.var_map[{id, "q"}] = n.inverting ? emit_not(d) : emit_buf(d);
        break;
      }
      case NodeKind::PortOut:
        cnf_.var_map[{id, "o"}] = emit_buf(driver_var(id, "i"));
        break;
      case NodeKind::Cell: {
        std::map<std::string, int> pin_vars;
        for (const auto& pin : n.cell->input_pins)
          pin_vars[pin] = driver_var(id, pin);
        for (const auto& [pin, expr] : n.cell->functions)
          cnf_.var_map[{id, pin}] = encode_expr(expr, pin_vars);
        if (n.cell->functions.empty())
          throw Error(Err::NoFunctionForPin,
                      "cell node '" + n.name + "' has no functions");
        break;
      }
      case NodeKind::OutputLogic: {
        std::vector<int> args;
        for (uint32_t i = 0; i < n.arity; ++i)
          args.push_back(driver_var(id, "i" + std::to_string(i)));
        int y = 0;
        switch (n.op) {
          case LogicOp::And:
            y = emit_and(args);
            break;
          case LogicOp::Or:
            y = emit_or(args);
            break;
          case LogicOp::Not:
            y = emit_not(args.at(0));
            break;
          case LogicOp::Buf:
            y = emit_buf(args.at(0));
            break;
          case LogicOp::Xor:
            if (args.size() != 2)
              throw Error(Err::SolverFailure, "xor gate must be binary");
            y = emit_xor(args[0], args[1]);
            break;
          case LogicOp::Xnor:
            if (args.size() != 2)
              throw Error(Err::SolverFailure, "xnor gate must be binary");
            y = emit_xnor(args[0], args[1]);
            break;
        }
        cnf_.var_map[{id, "o"}] = y;
        break;
      }
    }
  }
};

}  // namespace

CnfFormula tseitin(const DifferentialGraph& diff) {
  return TseitinBuilder(diff).build();
}

std::string emit_dimacs(const CnfFormula& cnf) {
  std::ostringstream os;
  os << "p cnf " << cnf.num_vars << " " << cnf.clauses.size() << "\n";
  for (const auto& clause : cnf.clauses) {
    for (int lit : clause) os << lit << " ";
    os << "0\n";
  }
  return os.str();
}

}  // namespace nfi
