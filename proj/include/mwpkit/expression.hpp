#pragma once

#include <string>
#include <vector>

#include "mwpkit/decimal.hpp"

namespace mwpkit {

/// Flat operand/operator chain, no parentheses: n0 op1 n1 ... oph nh.
struct Expression {
  std::vector<Decimal> operands;
  std::vector<OperatorKind> operators;

  int hops() const { return static_cast<int>(operators.size()); }
  bool well_formed() const {
    return !operands.empty() && operands.size() == operators.size() + 1;
  }
};

/// Index of the hop resolved next: the leftmost Mul/Div hop if any exists,
/// otherwise hop 0.
std::size_t next_hop(const Expression& expr);

/// Evaluate by repeatedly resolving next_hop(); division is div_rounded at
/// each step. This is the semantics every "=" transition is checked under.
Decimal eval_expression(const Expression& expr);

/// True when no step of the evaluation divides by zero.
bool evaluable(const Expression& expr);

std::string render(const Expression& expr);

}  // namespace mwpkit
