#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "mwpkit/errors.hpp"

namespace mwpkit {

/// Arithmetic operators, ordered Add < Sub < Mul < Div so that serialized
/// forms sort deterministically.
enum class OperatorKind : std::uint8_t { Add = 0, Sub = 1, Mul = 2, Div = 3 };

enum class ValueType : std::uint8_t { Integer = 0, Float = 1, Mixed = 2 };

const char* to_symbol(OperatorKind op);
std::string to_string(ValueType vt);
ValueType value_type_from_string(std::string_view s);

/// Exact base-10 number: sign * digits * 10^-scale. Digits are stored
/// most-significant first with no leading zeros; canonical values carry no
/// trailing fractional zeros and zero is non-negative with empty digits.
/// All arithmetic is exact except div_rounded; no binary floating point is
/// involved anywhere.
class Decimal {
 public:
  Decimal() = default;  // zero

  static Decimal from_int(std::int64_t v);

  /// Strict whole-string parse of a decimal literal. Accepts the canonical
  /// grammar `-?(0|[1-9][0-9]*)(\.[0-9]+)?` plus `,` thousands separators,
  /// a `$` prefix (before or after the sign) and surrounding whitespace.
  /// Non-canonical digit strings (leading zeros, trailing fractional zeros)
  /// are accepted and canonicalized. Throws ParseError with the byte offset
  /// of the first offending character.
  static Decimal parse(std::string_view s);

  /// Canonical rendering; round-trips through parse().
  std::string str() const;

  bool is_zero() const { return digits_.empty(); }
  bool is_negative() const { return negative_; }
  bool is_integer() const { return scale_ == 0; }
  std::int32_t scale() const { return scale_; }
  const std::vector<std::uint8_t>& digits() const { return digits_; }

  Decimal negated() const;
  Decimal abs() const;

  /// Value * 10^k (digit shift, exact).
  Decimal shifted(std::int32_t k) const;

  /// Count from the first to the last nonzero digit inclusive; zero has one
  /// significant digit.
  int significant_digits() const;

  /// One term per digit position including zero digits, most significant
  /// first; the terms sum exactly to the value. Requires a positive value.
  std::vector<Decimal> split_place_values() const;

  /// Half-away-from-zero rounding to `frac_digits` fractional digits.
  Decimal rounded(std::int32_t frac_digits) const;

  friend Decimal operator+(const Decimal& a, const Decimal& b);
  friend Decimal operator-(const Decimal& a, const Decimal& b);
  friend Decimal operator*(const Decimal& a, const Decimal& b);

  /// Exact quotient when it terminates within two fractional digits,
  /// otherwise the quotient rounded half-away-from-zero to two fractional
  /// digits. Throws DivisionByZero.
  static Decimal div_rounded(const Decimal& a, const Decimal& b);

  /// -1, 0, +1 by numeric value.
  static int compare(const Decimal& a, const Decimal& b);

  friend bool operator==(const Decimal& a, const Decimal& b) {
    return compare(a, b) == 0;
  }
  friend auto operator<=>(const Decimal& a, const Decimal& b) {
    return compare(a, b) <=> 0;
  }

 private:
  Decimal(bool negative, std::vector<std::uint8_t> digits, std::int32_t scale);
  void normalize();

  bool negative_ = false;
  std::vector<std::uint8_t> digits_;  // MSD first
  std::int32_t scale_ = 0;            // count of fractional digits, >= 0
};

// Free-function surface used throughout the pipeline.
inline Decimal add(const Decimal& a, const Decimal& b) { return a + b; }
inline Decimal sub(const Decimal& a, const Decimal& b) { return a - b; }
inline Decimal mul(const Decimal& a, const Decimal& b) { return a * b; }
inline Decimal div_rounded(const Decimal& a, const Decimal& b) {
  return Decimal::div_rounded(a, b);
}
inline Decimal negate(const Decimal& a) { return a.negated(); }
inline int significant_digits(const Decimal& a) {
  return a.significant_digits();
}
inline std::vector<Decimal> split_place_values(const Decimal& a) {
  return a.split_place_values();
}
inline Decimal parse_number(std::string_view s) { return Decimal::parse(s); }

Decimal apply(OperatorKind op, const Decimal& a, const Decimal& b);

}  // namespace mwpkit
