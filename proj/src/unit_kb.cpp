#include "mwpkit/unit_kb.hpp"

#include "mwpkit/sampling.hpp"

#include <algorithm>
#include <cctype>
#include <set>

namespace mwpkit {

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) {
    return static_cast<char>(std::tolower(c));
  });
  return out;
}

std::string strip(std::string_view s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    std::size_t hit = s.find(sep, pos);
    if (hit == std::string_view::npos) hit = s.size();
    out.push_back(strip(s.substr(pos, hit - pos)));
    if (hit == s.size()) break;
    pos = hit + 1;
  }
  return out;
}

bool word_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) != 0;
}

}  // namespace

std::string to_string(QuantityKind k) {
  switch (k) {
    case QuantityKind::Length: return "length";
    case QuantityKind::Time: return "time";
    case QuantityKind::Speed: return "speed";
    case QuantityKind::Mass: return "mass";
    case QuantityKind::Volume: return "volume";
    case QuantityKind::Area: return "area";
    case QuantityKind::Power: return "power";
  }
  return "?";
}

QuantityKind quantity_kind_from_string(std::string_view s) {
  std::string key = lower(s);
  if (key == "length") return QuantityKind::Length;
  if (key == "time") return QuantityKind::Time;
  if (key == "speed") return QuantityKind::Speed;
  if (key == "mass") return QuantityKind::Mass;
  if (key == "volume") return QuantityKind::Volume;
  if (key == "area") return QuantityKind::Area;
  if (key == "power") return QuantityKind::Power;
  throw Error("unknown quantity kind: " + std::string(s));
}

const std::string& UnitEntry::form_for(const Decimal& quantity) const {
  static const Decimal one = Decimal::from_int(1);
  return quantity == one ? name : plural;
}

void UnitKb::index_surface(const std::string& surface, std::size_t unit_idx,
                           std::size_t line_no) {
  if (surface.empty()) {
    throw KbFormatError("empty unit surface", line_no);
  }
  std::string key = lower(surface);
  // Within a kind duplicates are invalid; across kinds the first entry wins.
  auto it = surface_to_unit_.find(key);
  if (it != surface_to_unit_.end()) {
    if (units_[it->second].kind == units_[unit_idx].kind) {
      throw KbValidationError("duplicate surface '" + surface +
                              "' within kind " +
                              to_string(units_[unit_idx].kind));
    }
    return;
  }
  surface_to_unit_.emplace(std::move(key), unit_idx);
}

UnitKb UnitKb::parse(std::string_view text) {
  UnitKb kb;
  std::size_t pos = 0;
  std::size_t line_no = 0;
  bool saw_header = false;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string line = strip(text.substr(pos, eol - pos));
    ++line_no;
    if (!line.empty() && line[0] != '#') {
      if (!saw_header) {
        if (line != "unitkb 1") {
          throw KbFormatError("expected header 'unitkb 1'", line_no);
        }
        saw_header = true;
      } else {
        std::vector<std::string> fields = split(line, '|');
        if (fields.size() != 5) {
          throw KbFormatError(
              "expected kind | name | plural | aliases | factor", line_no);
        }
        UnitEntry unit;
        try {
          unit.kind = quantity_kind_from_string(fields[0]);
        } catch (const Error& e) {
          throw KbFormatError(e.what(), line_no);
        }
        unit.name = fields[1];
        unit.plural = fields[2];
        if (!fields[3].empty() && fields[3] != "-") {
          for (auto& alias : split(fields[3], ',')) {
            if (!alias.empty()) unit.aliases.push_back(alias);
          }
        }
        try {
          unit.factor_to_base = parse_rational(fields[4]);
        } catch (const std::exception&) {
          throw KbFormatError("bad factor '" + fields[4] + "'", line_no);
        }
        if (unit.name.empty() || unit.plural.empty()) {
          throw KbFormatError("missing name or plural", line_no);
        }
        kb.units_.push_back(std::move(unit));
        std::size_t idx = kb.units_.size() - 1;
        kb.index_surface(kb.units_[idx].name, idx, line_no);
        if (lower(kb.units_[idx].plural) != lower(kb.units_[idx].name)) {
          kb.index_surface(kb.units_[idx].plural, idx, line_no);
        }
        for (const std::string& alias : kb.units_[idx].aliases) {
          kb.index_surface(alias, idx, line_no);
        }
      }
    }
    if (eol == text.size()) break;
    pos = eol + 1;
  }
  if (!saw_header) throw KbFormatError("missing header", 1);
  kb.validate();
  for (const auto& [surface, idx] : kb.surface_to_unit_) {
    kb.surfaces_by_length_.emplace_back(surface, idx);
  }
  std::sort(kb.surfaces_by_length_.begin(), kb.surfaces_by_length_.end(),
            [](const auto& a, const auto& b) {
              if (a.first.size() != b.first.size()) {
                return a.first.size() > b.first.size();
              }
              return a.first < b.first;
            });
  return kb;
}

UnitKb UnitKb::load(const std::string& path) {
  return parse(read_file(path));
}

void UnitKb::validate() const {
  if (units_.empty()) throw KbValidationError("knowledge base has no units");
  std::map<QuantityKind, int> base_count;
  for (const UnitEntry& unit : units_) {
    if (unit.factor_to_base <= 0) {
      throw KbValidationError("factor_to_base must be positive for " +
                              unit.name);
    }
    if (unit.factor_to_base == 1) base_count[unit.kind] += 1;
  }
  std::set<QuantityKind> kinds;
  for (const UnitEntry& unit : units_) kinds.insert(unit.kind);
  for (QuantityKind kind : kinds) {
    if (base_count[kind] == 0) {
      throw KbValidationError("kind " + to_string(kind) +
                              " declares no base unit");
    }
    if (base_count[kind] > 1) {
      throw KbValidationError("kind " + to_string(kind) +
                              " declares more than one base unit");
    }
  }
}

std::vector<const UnitEntry*> UnitKb::units_of(QuantityKind kind) const {
  std::vector<const UnitEntry*> out;
  for (const UnitEntry& unit : units_) {
    if (unit.kind == kind) out.push_back(&unit);
  }
  return out;
}

const UnitEntry* UnitKb::base_of(QuantityKind kind) const {
  for (const UnitEntry& unit : units_) {
    if (unit.kind == kind && unit.factor_to_base == 1) return &unit;
  }
  return nullptr;
}

const UnitEntry* UnitKb::find(std::string_view surface) const {
  auto it = surface_to_unit_.find(lower(surface));
  return it == surface_to_unit_.end() ? nullptr : &units_[it->second];
}

std::optional<UnitKb::Match> UnitKb::match_at(std::string_view text,
                                              std::size_t pos) const {
  if (pos > 0 && word_char(text[pos - 1])) return std::nullopt;
  for (const auto& [surface, idx] : surfaces_by_length_) {
    if (pos + surface.size() > text.size()) continue;
    bool equal = true;
    for (std::size_t i = 0; i < surface.size(); ++i) {
      if (std::tolower(static_cast<unsigned char>(text[pos + i])) !=
          static_cast<unsigned char>(surface[i])) {
        equal = false;
        break;
      }
    }
    if (!equal) continue;
    std::size_t end = pos + surface.size();
    if (end < text.size() && word_char(text[end])) continue;
    return Match{&units_[idx], surface.size()};
  }
  return std::nullopt;
}

Rational conversion_ratio(const UnitEntry& u0, const UnitEntry& u1) {
  if (u0.kind != u1.kind) {
    throw KindMismatchError("cannot convert " + to_string(u0.kind) + " to " +
                            to_string(u1.kind));
  }
  return u0.factor_to_base / u1.factor_to_base;
}

Decimal convert_quantity(const Decimal& q, const UnitEntry& u0,
                         const UnitEntry& u1) {
  return decimal_from_rational(rational_from_decimal(q) *
                               conversion_ratio(u0, u1));
}

std::string render_conversion_sentence(const Decimal& q, const UnitEntry& u0,
                                       const Decimal& v, const UnitEntry& u1,
                                       bool number_words) {
  std::string lead;
  if (number_words && q.is_integer() && !q.is_negative()) {
    BigInt n = boost::multiprecision::numerator(rational_from_decimal(q));
    if (n < 1000000) {
      lead = number_to_words(static_cast<std::int64_t>(n));
      lead[0] =
          static_cast<char>(std::toupper(static_cast<unsigned char>(lead[0])));
    }
  }
  if (lead.empty()) lead = q.str();
  return lead + " " + u0.form_for(q) + " is equal to " + v.str() + " " +
         u1.form_for(v);
}

JsonRecord generate_conversion_item(Rng& rng, const UnitKb& kb,
                                    const UnitGenOptions& opts) {
  std::vector<QuantityKind> kinds;
  for (int k = 0; k < kQuantityKindCount; ++k) {
    if (kb.units_of(static_cast<QuantityKind>(k)).size() >= 2) {
      kinds.push_back(static_cast<QuantityKind>(k));
    }
  }
  if (kinds.empty()) throw Error("knowledge base has no convertible pair");

  // Some pairs cannot render within the digit budget for any small quantity
  // (their exact factor alone is wider), so the pair is resampled along with
  // the quantity.
  const UnitEntry* u0 = nullptr;
  const UnitEntry* u1 = nullptr;
  Decimal q = Decimal::from_int(1);
  Decimal v;
  for (int attempt = 0; attempt < 100; ++attempt) {
    QuantityKind kind = kinds[rng.below(kinds.size())];
    auto units = kb.units_of(kind);
    std::size_t i0 = rng.below(units.size());
    std::size_t i1 = rng.below(units.size() - 1);
    if (i1 >= i0) ++i1;
    u0 = units[i0];
    u1 = units[i1];
    int digits = static_cast<int>(rng.range(1, 4));
    Decimal candidate = random_number(rng, digits, false);
    Rational exact =
        rational_from_decimal(candidate) * conversion_ratio(*u0, *u1);
    if (!is_terminating(exact) &&
        boost::multiprecision::abs(exact) < Rational(1, 100)) {
      continue;
    }
    Decimal rendered = decimal_from_rational(exact);
    if (rendered.significant_digits() > 12 && attempt + 1 < 100) continue;
    q = candidate;
    v = rendered;
    break;
  }
  if (u0 == nullptr || v.is_zero()) throw Error("conversion sampling failed");
  Rational ratio = conversion_ratio(*u0, *u1);

  std::string sentence =
      render_conversion_sentence(q, *u0, v, *u1, opts.number_words);
  std::size_t cut = sentence.find(" is equal to ");
  JsonRecord meta;
  meta["kind"] = to_string(u0->kind);
  meta["u0"] = u0->name;
  meta["u1"] = u1->name;
  meta["q"] = q.str();
  meta["ratio"] = rational_str(ratio);
  meta["number_words"] = opts.number_words;
  JsonRecord rec;
  rec["task"] = "unit";
  rec["input"] = sentence.substr(0, cut) + " is equal to";
  rec["output"] = sentence.substr(cut + 13) + ".";
  rec["meta"] = std::move(meta);
  return rec;
}

namespace {

const char* kOnes[] = {"zero", "one", "two",   "three", "four",
                       "five", "six", "seven", "eight", "nine"};
const char* kTeens[] = {"ten",      "eleven",  "twelve",  "thirteen",
                        "fourteen", "fifteen", "sixteen", "seventeen",
                        "eighteen", "nineteen"};
const char* kTens[] = {"",      "",      "twenty",  "thirty", "forty",
                       "fifty", "sixty", "seventy", "eighty", "ninety"};

std::string words_below_thousand(std::int64_t n) {
  std::string out;
  if (n >= 100) {
    out += kOnes[n / 100];
    out += " hundred";
    n %= 100;
    if (n) out += ' ';
  }
  if (n >= 20) {
    out += kTens[n / 10];
    n %= 10;
    if (n) {
      out += ' ';
      out += kOnes[n];
    }
  } else if (n >= 10) {
    out += kTeens[n - 10];
  } else if (n > 0) {
    out += kOnes[n];
  }
  return out;
}

}  // namespace

std::string number_to_words(std::int64_t n) {
  if (n < 0 || n >= 1000000) throw Error("number out of word range");
  if (n == 0) return "zero";
  std::string out;
  if (n >= 1000) {
    out += words_below_thousand(n / 1000);
    out += " thousand";
    n %= 1000;
    if (n) out += ' ';
  }
  if (n) out += words_below_thousand(n);
  return out;
}

std::optional<std::pair<std::int64_t, std::size_t>> parse_number_words(
    std::string_view text) {
  std::int64_t total = 0, current = 0;
  std::size_t consumed = 0;
  std::size_t pos = 0;
  bool any = false;
  while (pos < text.size()) {
    std::size_t start = pos;
    while (pos < text.size() &&
           std::isalpha(static_cast<unsigned char>(text[pos]))) {
      ++pos;
    }
    if (pos == start) break;
    std::string word = lower(text.substr(start, pos - start));
    std::int64_t value = -1;
    bool scale_word = false;
    for (int i = 0; i < 10; ++i) {
      if (word == kOnes[i]) value = i;
    }
    for (int i = 0; i < 10; ++i) {
      if (word == kTeens[i]) value = 10 + i;
    }
    for (int i = 2; i < 10; ++i) {
      if (word == kTens[i]) value = 10 * i;
    }
    if (word == "hundred") {
      if (!any || current == 0) break;
      current *= 100;
      scale_word = true;
    } else if (word == "thousand") {
      if (!any) break;
      total += (current == 0 ? 1 : current) * 1000;
      current = 0;
      scale_word = true;
    } else if (value < 0) {
      break;
    }
    if (!scale_word) current += value;
    any = true;
    consumed = pos;
    if (pos < text.size() && (text[pos] == ' ' || text[pos] == '-')) {
      ++pos;
    } else {
      break;
    }
  }
  if (!any) return std::nullopt;
  return std::make_pair(total + current, consumed);
}

}  // namespace mwpkit
