#include "mwpkit/rational.hpp"

namespace mwpkit {

namespace {

Decimal decimal_from_digits(const std::string& mag, std::int32_t scale,
                            bool negative) {
  std::string text;
  if (negative) text += '-';
  if (scale <= 0) {
    text += mag;
  } else if (static_cast<std::int32_t>(mag.size()) > scale) {
    text.append(mag, 0, mag.size() - static_cast<std::size_t>(scale));
    text += '.';
    text.append(mag, mag.size() - static_cast<std::size_t>(scale),
                std::string::npos);
  } else {
    text += "0.";
    text.append(static_cast<std::size_t>(scale) - mag.size(), '0');
    text += mag;
  }
  return Decimal::parse(text);
}

}  // namespace

Rational rational_from_decimal(const Decimal& d) {
  BigInt num = 0;
  for (std::uint8_t digit : d.digits()) num = num * 10 + digit;
  BigInt den = 1;
  for (std::int32_t i = 0; i < d.scale(); ++i) den *= 10;
  Rational r(num, den);
  return d.is_negative() ? Rational(-r) : r;
}

bool is_terminating(const Rational& r) {
  BigInt den = boost::multiprecision::denominator(r);
  while (den % 2 == 0) den /= 2;
  while (den % 5 == 0) den /= 5;
  return den == 1;
}

Decimal decimal_from_rational(const Rational& r) {
  if (r == 0) return Decimal();
  const bool negative = r < 0;
  const Rational mag = negative ? Rational(-r) : r;
  BigInt num = boost::multiprecision::numerator(mag);
  BigInt den = boost::multiprecision::denominator(mag);

  int twos = 0, fives = 0;
  BigInt rest = den;
  while (rest % 2 == 0) {
    rest /= 2;
    ++twos;
  }
  while (rest % 5 == 0) {
    rest /= 5;
    ++fives;
  }
  if (rest != 1) {
    // Non-terminating: two fractional digits, half away from zero.
    BigInt scaled_num = num * 100;
    BigInt whole = scaled_num / den;
    BigInt rem = scaled_num % den;
    if (rem * 2 >= den) whole += 1;
    return decimal_from_digits(whole.str(), 2, negative);
  }
  const int scale = std::max(twos, fives);
  BigInt m = num;
  for (int i = twos; i < scale; ++i) m *= 2;
  for (int i = fives; i < scale; ++i) m *= 5;
  return decimal_from_digits(m.str(), scale, negative);
}

std::string rational_str(const Rational& r) {
  BigInt den = boost::multiprecision::denominator(r);
  std::string out = boost::multiprecision::numerator(r).str();
  if (den != 1) {
    out += '/';
    out += den.str();
  }
  return out;
}

Rational parse_rational(std::string_view s) {
  std::size_t slash = s.find('/');
  try {
    if (slash == std::string_view::npos) {
      if (s.find('.') != std::string_view::npos) {
        return rational_from_decimal(Decimal::parse(s));
      }
      return Rational(BigInt(std::string(s)));
    }
    BigInt num{std::string(s.substr(0, slash))};
    BigInt den{std::string(s.substr(slash + 1))};
    if (den == 0) throw Error("zero denominator");
    return Rational(num, den);
  } catch (const std::exception& e) {
    throw ParseError("bad rational '" + std::string(s) + "'", 0);
  }
}

}  // namespace mwpkit
