#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "mwpkit/expression.hpp"
#include "mwpkit/io.hpp"
#include "mwpkit/rng.hpp"
#include "mwpkit/sampling.hpp"

namespace mwpkit {

/// Operation classes. AddSub draws from {+,-}; S-Mul keeps every
/// multiplication right operand at one significant digit; C-Mul forces
/// multi-digit right operands (answered in place-value steps); S-Div divides
/// by a small divisor pool; MixMul draws from {+,-,*} with at least one *;
/// MixAll draws from all four with at least one /.
enum class OpClass : std::uint8_t { AddSub, SMul, CMul, SDiv, MixMul, MixAll };

std::string to_string(OpClass c);
OpClass op_class_from_string(std::string_view s);

/// Divisors used for every generated division.
const std::vector<int>& simple_divisor_pool();

struct DifficultyProfile {
  int hops = 2;            // in [2, 5]
  int max_sig_digits = 1;  // in [1, 8]
  ValueType value_type = ValueType::Integer;
  OpClass op_class = OpClass::AddSub;

  void validate() const;  // throws Error on out-of-range fields
  /// C-Mul needs a multi-digit right operand, so it is infeasible at one
  /// significant digit.
  bool feasible() const;
};

/// Sample one expression for the profile. Operand/operator counts match
/// profile.hops; deterministic given the rng state.
Expression generate_expression(const DifficultyProfile& profile, Rng& rng);

enum class HopStyle {
  Auto,        // place-value steps iff op is Mul with a multi-digit right operand
  Direct,      // the evaluated result only
  PlaceValue,  // force split steps even for a single-digit right operand
};

/// Text for resolving one hop. Place-value multiplications come out as one
/// chained equality: split terms, per-term products, then left-fold running
/// sums down to the product. Anything else is the result rendered directly.
std::string one_hop_response(const Decimal& n0, OperatorKind op,
                             const Decimal& n1,
                             HopStyle style = HopStyle::Auto);

/// Step-wise derivation: rendered expression states joined by " = ".
struct CoTTrace {
  std::vector<std::string> steps;
  Decimal final;

  std::string text() const;
};

/// Resolve the leftmost Mul/Div hop if one exists, else the leftmost hop;
/// re-render the whole remaining expression after each resolution; repeat
/// until a single number remains. Multiplications with a multi-digit right
/// operand expand into place-value steps in-context, except when the next
/// operator to the right is * or /, where inlining a sum would change the
/// value under precedence; those resolve directly.
CoTTrace generate_response(const Expression& expr);

/// JSONL record {task, input, output, meta}.
JsonRecord render_item(const Expression& expr, const CoTTrace& trace,
                       const DifficultyProfile& profile);

/// Difficulty grid declared by a profile config file: one axis per
/// dimension plus optional per-value weights and a seed.
struct ProfileGrid {
  std::vector<int> hops = {2, 3, 4, 5};
  std::vector<int> digits = {1, 2, 3, 4, 5, 6, 7, 8};
  std::vector<ValueType> value_types = {ValueType::Integer, ValueType::Float,
                                        ValueType::Mixed};
  std::vector<OpClass> op_classes = {OpClass::AddSub, OpClass::SMul,
                                     OpClass::CMul, OpClass::SDiv};
  std::map<std::string, double> weights;  // e.g. "op_class.C-Mul" -> 2.0
  bool has_seed = false;
  std::uint64_t seed = 0;

  static ProfileGrid parse(std::string_view text);
  static ProfileGrid load(const std::string& path);

  /// Feasible cells in canonical order (hops, digits, value type, op class).
  std::vector<DifficultyProfile> cells() const;
  double cell_weight(const DifficultyProfile& cell) const;
};

/// Deterministic largest-remainder allocation of n items over the grid's
/// feasible cells; per-cell counts stay within one item of the exact
/// weighted share. Returns the profile for each item index.
std::vector<DifficultyProfile> plan_items(const ProfileGrid& grid,
                                          std::size_t n);

/// Item k as a pure function of (seed, k, profile).
JsonRecord generate_arith_item(const DifficultyProfile& profile,
                               std::uint64_t seed, std::uint64_t index);

}  // namespace mwpkit
