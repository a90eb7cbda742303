#pragma once

#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

#include "mwpkit/decimal.hpp"

namespace mwpkit {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

Rational rational_from_decimal(const Decimal& d);

/// True when the reduced denominator has only factors 2 and 5, i.e. the
/// value has a finite decimal expansion.
bool is_terminating(const Rational& r);

/// Exact decimal when the value terminates (at full precision); otherwise
/// rounded half-away-from-zero to two fractional digits, mirroring
/// div_rounded.
Decimal decimal_from_rational(const Rational& r);

/// "p/q", or just "p" for integers.
std::string rational_str(const Rational& r);

/// Accepts "p/q", a plain integer, or a decimal literal. Offsets in errors
/// are relative to `s`.
Rational parse_rational(std::string_view s);

}  // namespace mwpkit
