#include "mwpkit/expression.hpp"

namespace mwpkit {

std::size_t next_hop(const Expression& expr) {
  for (std::size_t i = 0; i < expr.operators.size(); ++i) {
    if (expr.operators[i] == OperatorKind::Mul ||
        expr.operators[i] == OperatorKind::Div) {
      return i;
    }
  }
  return 0;
}

namespace {

Expression resolve(const Expression& expr, std::size_t hop) {
  Expression out = expr;
  Decimal value =
      apply(expr.operators[hop], expr.operands[hop], expr.operands[hop + 1]);
  out.operands[hop] = std::move(value);
  out.operands.erase(out.operands.begin() + static_cast<std::ptrdiff_t>(hop) +
                     1);
  out.operators.erase(out.operators.begin() +
                      static_cast<std::ptrdiff_t>(hop));
  return out;
}

}  // namespace

Decimal eval_expression(const Expression& expr) {
  Expression cur = expr;
  while (!cur.operators.empty()) {
    cur = resolve(cur, next_hop(cur));
  }
  return cur.operands.front();
}

bool evaluable(const Expression& expr) {
  if (!expr.well_formed()) return false;
  Expression cur = expr;
  while (!cur.operators.empty()) {
    std::size_t hop = next_hop(cur);
    if (cur.operators[hop] == OperatorKind::Div &&
        cur.operands[hop + 1].is_zero()) {
      return false;
    }
    cur = resolve(cur, hop);
  }
  return true;
}

std::string render(const Expression& expr) {
  std::string out = expr.operands.front().str();
  for (std::size_t i = 0; i < expr.operators.size(); ++i) {
    out += ' ';
    out += to_symbol(expr.operators[i]);
    out += ' ';
    out += expr.operands[i + 1].str();
  }
  return out;
}

}  // namespace mwpkit
