#include "mwpkit/decimal.hpp"

#include <algorithm>
#include <cctype>

namespace mwpkit {

namespace {

using Mag = std::vector<std::uint8_t>;  // magnitude, MSD first

void trim_leading(Mag& m) {
  std::size_t i = 0;
  while (i < m.size() && m[i] == 0) ++i;
  if (i > 0) m.erase(m.begin(), m.begin() + static_cast<std::ptrdiff_t>(i));
}

// Compare magnitudes; both must be trimmed.
int cmp_mag(const Mag& a, const Mag& b) {
  if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] != b[i]) return a[i] < b[i] ? -1 : 1;
  }
  return 0;
}

Mag add_mag(const Mag& a, const Mag& b) {
  Mag out;
  out.reserve(std::max(a.size(), b.size()) + 1);
  int carry = 0;
  auto ia = a.rbegin();
  auto ib = b.rbegin();
  while (ia != a.rend() || ib != b.rend() || carry) {
    int s = carry;
    if (ia != a.rend()) s += *ia++;
    if (ib != b.rend()) s += *ib++;
    out.push_back(static_cast<std::uint8_t>(s % 10));
    carry = s / 10;
  }
  std::reverse(out.begin(), out.end());
  trim_leading(out);
  return out;
}

// Requires |a| >= |b|.
Mag sub_mag(const Mag& a, const Mag& b) {
  Mag out;
  out.reserve(a.size());
  int borrow = 0;
  auto ia = a.rbegin();
  auto ib = b.rbegin();
  while (ia != a.rend()) {
    int d = *ia++ - borrow - (ib != b.rend() ? *ib++ : 0);
    borrow = 0;
    if (d < 0) {
      d += 10;
      borrow = 1;
    }
    out.push_back(static_cast<std::uint8_t>(d));
  }
  std::reverse(out.begin(), out.end());
  trim_leading(out);
  return out;
}

Mag mul_mag(const Mag& a, const Mag& b) {
  if (a.empty() || b.empty()) return {};
  std::vector<int> acc(a.size() + b.size(), 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) {
      acc[i + j + 1] += a[i] * b[j];
    }
  }
  for (std::size_t i = acc.size(); i-- > 1;) {
    acc[i - 1] += acc[i] / 10;
    acc[i] %= 10;
  }
  Mag out(acc.size());
  for (std::size_t i = 0; i < acc.size(); ++i) {
    out[i] = static_cast<std::uint8_t>(acc[i]);
  }
  trim_leading(out);
  return out;
}

// Schoolbook long division; returns quotient, leaves remainder in `rem`.
Mag divmod_mag(const Mag& num, const Mag& den, Mag& rem) {
  Mag quot;
  rem.clear();
  for (std::uint8_t d : num) {
    rem.push_back(d);
    trim_leading(rem);
    int q = 0;
    while (cmp_mag(rem, den) >= 0) {
      rem = sub_mag(rem, den);
      ++q;
    }
    quot.push_back(static_cast<std::uint8_t>(q));
  }
  trim_leading(quot);
  return quot;
}

Mag shifted_mag(Mag m, std::size_t zeros) {
  if (m.empty()) return m;
  m.insert(m.end(), zeros, 0);
  return m;
}

}  // namespace

const char* to_symbol(OperatorKind op) {
  switch (op) {
    case OperatorKind::Add: return "+";
    case OperatorKind::Sub: return "-";
    case OperatorKind::Mul: return "*";
    case OperatorKind::Div: return "/";
  }
  return "?";
}

std::string to_string(ValueType vt) {
  switch (vt) {
    case ValueType::Integer: return "integer";
    case ValueType::Float: return "float";
    case ValueType::Mixed: return "mixed";
  }
  return "?";
}

ValueType value_type_from_string(std::string_view s) {
  if (s == "integer" || s == "int") return ValueType::Integer;
  if (s == "float") return ValueType::Float;
  if (s == "mixed") return ValueType::Mixed;
  throw Error("unknown value type: " + std::string(s));
}

Decimal::Decimal(bool negative, std::vector<std::uint8_t> digits,
                 std::int32_t scale)
    : negative_(negative), digits_(std::move(digits)), scale_(scale) {
  normalize();
}

void Decimal::normalize() {
  trim_leading(digits_);
  while (scale_ > 0 && !digits_.empty() && digits_.back() == 0) {
    digits_.pop_back();
    --scale_;
  }
  if (digits_.empty()) {
    scale_ = 0;
    negative_ = false;
  }
}

Decimal Decimal::from_int(std::int64_t v) {
  bool neg = v < 0;
  std::uint64_t mag = neg ? 0ULL - static_cast<std::uint64_t>(v)
                          : static_cast<std::uint64_t>(v);
  Mag digits;
  while (mag > 0) {
    digits.push_back(static_cast<std::uint8_t>(mag % 10));
    mag /= 10;
  }
  std::reverse(digits.begin(), digits.end());
  return Decimal(neg, std::move(digits), 0);
}

Decimal Decimal::parse(std::string_view s) {
  std::size_t i = 0;
  const std::size_t n = s.size();
  auto fail = [&](const char* msg, std::size_t at) -> Decimal {
    throw ParseError(msg, at);
  };

  while (i < n && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
  bool neg = false, currency = false;
  while (i < n && (s[i] == '$' || s[i] == '-')) {
    if (s[i] == '$') {
      if (currency) return fail("duplicate currency symbol", i);
      currency = true;
    } else {
      if (neg) return fail("duplicate sign", i);
      neg = true;
    }
    ++i;
  }
  if (i >= n || !std::isdigit(static_cast<unsigned char>(s[i]))) {
    return fail("expected digit", i);
  }

  Mag digits;
  while (i < n) {
    char c = s[i];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      digits.push_back(static_cast<std::uint8_t>(c - '0'));
      ++i;
    } else if (c == ',') {
      // Thousands separator: exactly three digits must follow.
      std::size_t j = i + 1;
      int run = 0;
      while (j < n && std::isdigit(static_cast<unsigned char>(s[j])) &&
             run < 4) {
        ++run;
        ++j;
      }
      if (run != 3 || (j < n && std::isdigit(static_cast<unsigned char>(s[j])))) {
        return fail("malformed thousands separator", i);
      }
      ++i;
    } else {
      break;
    }
  }

  std::int32_t scale = 0;
  if (i < n && s[i] == '.') {
    ++i;
    std::size_t frac_start = i;
    while (i < n && std::isdigit(static_cast<unsigned char>(s[i]))) {
      digits.push_back(static_cast<std::uint8_t>(s[i] - '0'));
      ++scale;
      ++i;
    }
    if (i == frac_start) return fail("expected fractional digit", i);
  }
  while (i < n && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
  if (i != n) return fail("trailing characters", i);

  return Decimal(neg, std::move(digits), scale);
}

std::string Decimal::str() const {
  if (is_zero()) return "0";
  std::string out;
  if (negative_) out.push_back('-');
  const std::size_t n = digits_.size();
  const std::size_t frac = static_cast<std::size_t>(scale_);
  if (frac == 0) {
    for (std::uint8_t d : digits_) out.push_back(static_cast<char>('0' + d));
    return out;
  }
  if (n > frac) {
    for (std::size_t i = 0; i < n - frac; ++i) {
      out.push_back(static_cast<char>('0' + digits_[i]));
    }
  } else {
    out.push_back('0');
  }
  out.push_back('.');
  for (std::size_t i = frac; i > n; --i) out.push_back('0');
  for (std::size_t i = n > frac ? n - frac : 0; i < n; ++i) {
    out.push_back(static_cast<char>('0' + digits_[i]));
  }
  return out;
}

Decimal Decimal::negated() const {
  Decimal out = *this;
  if (!out.is_zero()) out.negative_ = !out.negative_;
  return out;
}

Decimal Decimal::abs() const {
  Decimal out = *this;
  out.negative_ = false;
  return out;
}

Decimal Decimal::shifted(std::int32_t k) const {
  if (is_zero()) return Decimal();
  Decimal out = *this;
  if (k >= 0) {
    std::int32_t from_scale = std::min(out.scale_, k);
    out.scale_ -= from_scale;
    out.digits_.insert(out.digits_.end(),
                       static_cast<std::size_t>(k - from_scale), 0);
  } else {
    out.scale_ += -k;
  }
  out.normalize();
  return out;
}

int Decimal::significant_digits() const {
  if (is_zero()) return 1;
  std::size_t last = digits_.size();
  while (last > 0 && digits_[last - 1] == 0) --last;
  return static_cast<int>(last);
}

std::vector<Decimal> Decimal::split_place_values() const {
  if (is_zero() || negative_) throw NonPositiveError();
  std::vector<Decimal> terms;
  terms.reserve(digits_.size());
  const std::int32_t n = static_cast<std::int32_t>(digits_.size());
  for (std::int32_t i = 0; i < n; ++i) {
    Decimal term(false, {digits_[static_cast<std::size_t>(i)]}, 0);
    terms.push_back(term.shifted(n - 1 - i - scale_));
  }
  return terms;
}

Decimal Decimal::rounded(std::int32_t frac_digits) const {
  if (scale_ <= frac_digits) return *this;
  const std::size_t drop = static_cast<std::size_t>(scale_ - frac_digits);
  Mag den = shifted_mag({1}, drop);
  Mag rem;
  Mag quot = divmod_mag(digits_, den, rem);
  Mag twice = add_mag(rem, rem);
  if (cmp_mag(twice, den) >= 0) quot = add_mag(quot, {1});
  return Decimal(negative_, std::move(quot), frac_digits);
}

Decimal operator+(const Decimal& a, const Decimal& b) {
  const std::int32_t scale = std::max(a.scale_, b.scale_);
  Mag ma = shifted_mag(a.digits_, static_cast<std::size_t>(scale - a.scale_));
  Mag mb = shifted_mag(b.digits_, static_cast<std::size_t>(scale - b.scale_));
  if (a.negative_ == b.negative_) {
    return Decimal(a.negative_, add_mag(ma, mb), scale);
  }
  int c = cmp_mag(ma, mb);
  if (c == 0) return Decimal();
  if (c > 0) return Decimal(a.negative_, sub_mag(ma, mb), scale);
  return Decimal(b.negative_, sub_mag(mb, ma), scale);
}

Decimal operator-(const Decimal& a, const Decimal& b) {
  return a + b.negated();
}

Decimal operator*(const Decimal& a, const Decimal& b) {
  return Decimal(a.negative_ != b.negative_, mul_mag(a.digits_, b.digits_),
                 a.scale_ + b.scale_);
}

Decimal Decimal::div_rounded(const Decimal& a, const Decimal& b) {
  if (b.is_zero()) throw DivisionByZero();
  if (a.is_zero()) return Decimal();
  // a/b = (A * 10^sb) / (B * 10^sa); two extra digits for the 2dp target.
  Mag num = shifted_mag(a.digits_, static_cast<std::size_t>(b.scale_) + 2);
  Mag den = shifted_mag(b.digits_, static_cast<std::size_t>(a.scale_));
  Mag rem;
  Mag quot = divmod_mag(num, den, rem);
  if (!rem.empty()) {
    Mag twice = add_mag(rem, rem);
    if (cmp_mag(twice, den) >= 0) quot = add_mag(quot, {1});
  }
  return Decimal(a.negative_ != b.negative_, std::move(quot), 2);
}

int Decimal::compare(const Decimal& a, const Decimal& b) {
  if (a.negative_ != b.negative_) return a.negative_ ? -1 : 1;
  const std::int32_t scale = std::max(a.scale_, b.scale_);
  Mag ma = shifted_mag(a.digits_, static_cast<std::size_t>(scale - a.scale_));
  Mag mb = shifted_mag(b.digits_, static_cast<std::size_t>(scale - b.scale_));
  int c = cmp_mag(ma, mb);
  return a.negative_ ? -c : c;
}

Decimal apply(OperatorKind op, const Decimal& a, const Decimal& b) {
  switch (op) {
    case OperatorKind::Add: return a + b;
    case OperatorKind::Sub: return a - b;
    case OperatorKind::Mul: return a * b;
    case OperatorKind::Div: return Decimal::div_rounded(a, b);
  }
  throw Error("bad operator");
}

}  // namespace mwpkit
