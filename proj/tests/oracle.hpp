// Test-only oracle: arbitrary-precision rational reimplementation of the
// arithmetic semantics, with its own string parsing and evaluation. Kept
// independent of the library's digit-vector code paths on purpose.
#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace oracle {

using BigInt = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

inline Rat pow10(int k) {
  Rat r = 1;
  for (int i = 0; i < k; ++i) r *= 10;
  for (int i = 0; i > k; --i) r /= 10;
  return r;
}

// Decimal literal (optionally $-prefixed, comma-separated) to a rational.
inline Rat parse_rat(std::string_view s) {
  std::size_t i = 0;
  bool neg = false;
  while (i < s.size() && (s[i] == ' ' || s[i] == '$' || s[i] == '-')) {
    if (s[i] == '-') neg = true;
    ++i;
  }
  BigInt num = 0;
  BigInt den = 1;
  bool any = false, frac = false;
  for (; i < s.size(); ++i) {
    char c = s[i];
    if (c >= '0' && c <= '9') {
      num = num * 10 + (c - '0');
      if (frac) den *= 10;
      any = true;
    } else if (c == '.' && !frac) {
      frac = true;
    } else if (c == ',') {
      continue;
    } else {
      throw std::runtime_error("oracle: bad number " + std::string(s));
    }
  }
  if (!any) throw std::runtime_error("oracle: empty number " + std::string(s));
  Rat r(num, den);
  return neg ? -r : r;
}

// Does r have a terminating decimal expansion within `frac` digits?
inline bool terminates_within(const Rat& r, int frac) {
  Rat scaled = r * pow10(frac);
  return boost::multiprecision::denominator(scaled) == 1;
}

// Half-away-from-zero at two fractional digits unless already terminating
// within two digits.
inline Rat div_rounded(const Rat& a, const Rat& b) {
  if (b == 0) throw std::runtime_error("oracle: division by zero");
  Rat q = a / b;
  if (terminates_within(q, 2)) return q;
  Rat scaled = boost::multiprecision::abs(q) * 100;
  BigInt whole =
      boost::multiprecision::numerator(scaled) / boost::multiprecision::denominator(scaled);
  if ((scaled - Rat(whole)) * 2 >= 1) whole += 1;
  Rat out(whole, 100);
  return q < 0 ? -out : out;
}

struct Side {
  std::vector<Rat> operands;
  std::vector<char> operators;  // '+', '-', '*', '/'
};

inline Side parse_side(std::string_view text) {
  Side side;
  std::size_t pos = 0;
  auto skip_ws = [&] {
    while (pos < text.size() && text[pos] == ' ') ++pos;
  };
  skip_ws();
  bool expect_num = true;
  while (pos < text.size()) {
    if (expect_num) {
      std::size_t start = pos;
      if (text[pos] == '-' || text[pos] == '$') ++pos;
      while (pos < text.size() &&
             ((text[pos] >= '0' && text[pos] <= '9') || text[pos] == '.' ||
              text[pos] == ',')) {
        ++pos;
      }
      side.operands.push_back(parse_rat(text.substr(start, pos - start)));
    } else {
      char op = text[pos];
      if (op != '+' && op != '-' && op != '*' && op != '/') {
        throw std::runtime_error("oracle: bad operator in " +
                                 std::string(text));
      }
      side.operators.push_back(op);
      ++pos;
    }
    expect_num = !expect_num;
    skip_ws();
  }
  if (side.operands.size() != side.operators.size() + 1) {
    throw std::runtime_error("oracle: malformed side " + std::string(text));
  }
  return side;
}

// Leftmost */ first, then leftmost +-; division rounds like div_rounded.
inline Rat eval_side(Side side) {
  while (!side.operators.empty()) {
    std::size_t hop = 0;
    for (std::size_t i = 0; i < side.operators.size(); ++i) {
      if (side.operators[i] == '*' || side.operators[i] == '/') {
        hop = i;
        break;
      }
    }
    Rat a = side.operands[hop];
    Rat b = side.operands[hop + 1];
    Rat v;
    switch (side.operators[hop]) {
      case '+': v = a + b; break;
      case '-': v = a - b; break;
      case '*': v = a * b; break;
      default: v = div_rounded(a, b); break;
    }
    side.operands[hop] = v;
    side.operands.erase(side.operands.begin() +
                        static_cast<std::ptrdiff_t>(hop) + 1);
    side.operators.erase(side.operators.begin() +
                         static_cast<std::ptrdiff_t>(hop));
  }
  return side.operands.front();
}

inline std::vector<std::string> split_on(std::string_view text,
                                         std::string_view sep) {
  std::vector<std::string> parts;
  std::size_t pos = 0;
  while (true) {
    std::size_t hit = text.find(sep, pos);
    if (hit == std::string_view::npos) {
      parts.emplace_back(text.substr(pos));
      return parts;
    }
    parts.emplace_back(text.substr(pos, hit - pos));
    pos = hit + sep.size();
  }
}

// Every " = " transition of a rendered trace must evaluate to one value.
inline bool trace_valid(std::string_view trace_text) {
  std::vector<std::string> sides = split_on(trace_text, " = ");
  if (sides.size() < 2) return false;
  std::optional<Rat> value;
  for (const std::string& side_text : sides) {
    Rat v = eval_side(parse_side(side_text));
    if (value && *value != v) return false;
    value = v;
  }
  return true;
}

}  // namespace oracle
