#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mwpkit/io.hpp"
#include "mwpkit/rational.hpp"
#include "mwpkit/rng.hpp"

namespace mwpkit {

enum class QuantityKind : std::uint8_t {
  Length,
  Time,
  Speed,
  Mass,
  Volume,
  Area,
  Power,
};
inline constexpr int kQuantityKindCount = 7;

std::string to_string(QuantityKind k);
QuantityKind quantity_kind_from_string(std::string_view s);

struct UnitEntry {
  std::string name;    // singular
  std::string plural;  // may equal name (e.g. "meter per second")
  std::vector<std::string> aliases;
  QuantityKind kind = QuantityKind::Length;
  Rational factor_to_base;  // base units per this unit, > 0

  /// Surface form for a quantity: 1 takes the singular, everything else
  /// the plural.
  const std::string& form_for(const Decimal& quantity) const;
};

/// Unit knowledge base, loaded from a versioned text file with one unit per
/// line: kind | name | plural | aliases | factor. Immutable after load.
class UnitKb {
 public:
  static UnitKb parse(std::string_view text);
  static UnitKb load(const std::string& path);

  const std::vector<UnitEntry>& units() const { return units_; }
  std::vector<const UnitEntry*> units_of(QuantityKind kind) const;
  const UnitEntry* base_of(QuantityKind kind) const;

  /// Lookup by name, plural, or alias; case-insensitive. Null when unknown.
  const UnitEntry* find(std::string_view surface) const;

  struct Match {
    const UnitEntry* unit;
    std::size_t length;
  };
  /// Longest unit surface starting at `pos`, requiring word boundaries on
  /// both sides.
  std::optional<Match> match_at(std::string_view text, std::size_t pos) const;

 private:
  void index_surface(const std::string& surface, std::size_t unit_idx,
                     std::size_t line_no);
  void validate() const;

  std::vector<UnitEntry> units_;
  std::map<std::string, std::size_t> surface_to_unit_;  // lowercased
  std::vector<std::pair<std::string, std::size_t>> surfaces_by_length_;
};

/// Exact rational such that 1 u0 = ratio u1. Kinds must agree.
Rational conversion_ratio(const UnitEntry& u0, const UnitEntry& u1);

/// q u0 expressed in u1: exact when the value terminates, else rounded to
/// two fractional digits.
Decimal convert_quantity(const Decimal& q, const UnitEntry& u0,
                         const UnitEntry& u1);

/// "<q> <u0> is equal to <v> <u1>." — no trailing period.
std::string render_conversion_sentence(const Decimal& q, const UnitEntry& u0,
                                       const Decimal& v, const UnitEntry& u1,
                                       bool number_words = false);

struct UnitGenOptions {
  bool number_words = false;
};

/// One pairwise conversion item: sample a kind, two distinct units and a
/// quantity, then state the converted value.
JsonRecord generate_conversion_item(Rng& rng, const UnitKb& kb,
                                    const UnitGenOptions& opts = {});

/// English words for a non-negative integer below one million.
std::string number_to_words(std::int64_t n);

/// Longest leading run of number words (case-insensitive, spaces or hyphens)
/// with its byte length; nullopt when `text` does not start with one.
std::optional<std::pair<std::int64_t, std::size_t>> parse_number_words(
    std::string_view text);

}  // namespace mwpkit
