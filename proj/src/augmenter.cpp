#include "mwpkit/augmenter.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>

#include "mwpkit/evaluator.hpp"
#include "mwpkit/rational.hpp"
#include "mwpkit/sampling.hpp"

namespace mwpkit {

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) {
    return static_cast<char>(std::tolower(c));
  });
  return out;
}

// Division steps must divide cleanly (terminate within two fractional
// digits) and nothing may go negative; mirrors the plausibility constraints
// the resampler enforces.
std::optional<Decimal> eval_clean(const Expression& expr) {
  Expression cur = expr;
  while (!cur.operators.empty()) {
    std::size_t hop = next_hop(cur);
    const Decimal& a = cur.operands[hop];
    const Decimal& b = cur.operands[hop + 1];
    Decimal value;
    if (cur.operators[hop] == OperatorKind::Div) {
      if (b.is_zero()) return std::nullopt;
      Rational q = rational_from_decimal(a) / rational_from_decimal(b);
      Rational scaled = q * 100;
      if (boost::multiprecision::denominator(scaled) != 1) {
        return std::nullopt;
      }
      value = decimal_from_rational(q);
    } else {
      value = apply(cur.operators[hop], a, b);
    }
    if (value.is_negative()) return std::nullopt;
    cur.operands[hop] = std::move(value);
    cur.operands.erase(cur.operands.begin() + static_cast<std::ptrdiff_t>(hop) + 1);
    cur.operators.erase(cur.operators.begin() + static_cast<std::ptrdiff_t>(hop));
  }
  return cur.operands.front();
}

struct ValueKey {
  std::string key;
  ValueKey(const Decimal& d) : key(d.str()) {}
  bool operator<(const ValueKey& o) const { return key < o.key; }
};

// The word right after a span, lowercased.
std::string word_after(std::string_view text, std::size_t pos) {
  while (pos < text.size() && text[pos] == ' ') ++pos;
  std::size_t end = pos;
  while (end < text.size() &&
         std::isalpha(static_cast<unsigned char>(text[end]))) {
    ++end;
  }
  return lower(text.substr(pos, end - pos));
}

std::string apply_substitutions(
    std::string_view text,
    std::vector<std::pair<ByteSpan, std::string>> subs) {
  std::sort(subs.begin(), subs.end(), [](const auto& a, const auto& b) {
    return a.first.begin < b.first.begin;
  });
  std::string out;
  std::size_t pos = 0;
  for (const auto& [span, replacement] : subs) {
    out.append(text.substr(pos, span.begin - pos));
    out.append(replacement);
    pos = span.end;
  }
  out.append(text.substr(pos));
  return out;
}

}  // namespace

const std::vector<std::string>& default_count_nouns() {
  static const std::vector<std::string> nouns = {
      "time",    "times",    "sprint",  "sprints",  "trip",    "trips",
      "round",   "rounds",   "lap",     "laps",     "set",     "sets",
      "person",  "people",   "student", "students", "kid",     "kids",
      "child",   "children", "friend",  "friends",  "visit",   "visits",
      "session", "sessions", "box",     "boxes",    "bag",     "bags"};
  return nouns;
}

bool ComputationMap::verifies(const Decimal& final) const {
  std::vector<Decimal> values;
  for (const MapNode& node : intermediates) {
    Expression expr = node.expr;
    for (std::size_t i = 0; i < node.operands.size(); ++i) {
      const OperandRef& ref = node.operands[i];
      expr.operands[i] = ref.source == OperandRef::Source::Question
                             ? question_numbers[ref.index]
                             : values[ref.index];
    }
    if (!evaluable(expr)) return false;
    Decimal v = eval_expression(expr);
    if (!(v == node.value)) return false;
    values.push_back(std::move(v));
  }
  return !values.empty() && values.back() == final;
}

ComputationMap extract_mapping(const MWPItem& item, const UnitKb& kb) {
  ComputationMap map;

  std::vector<ScannedNumber> qnums = scan_numbers(item.question);
  std::map<ValueKey, std::vector<std::size_t>> n_by_value;
  for (std::size_t i = 0; i < qnums.size(); ++i) {
    map.question_numbers.push_back(qnums[i].value);
    map.occurrences.push_back(TaggedOccurrence{
        qnums[i].span, true, {OperandRef::Source::Question, i}});
    n_by_value[qnums[i].value].push_back(i);
    std::string noun = word_after(item.question, qnums[i].span.end);
    bool small_count =
        qnums[i].value.is_integer() &&
        !(Decimal::from_int(12) < qnums[i].value) &&
        std::find(default_count_nouns().begin(), default_count_nouns().end(),
                  noun) != default_count_nouns().end();
    map.count_guard.push_back(small_count);
  }

  std::map<ValueKey, std::size_t> i_by_value;
  auto resolve = [&](const Decimal& v) -> OperandRef {
    auto n_it = n_by_value.find(v);
    if (n_it != n_by_value.end()) {
      if (n_it->second.size() > 1) {
        throw MappingAmbiguous("value " + v.str() +
                               " matches several question numbers");
      }
      return {OperandRef::Source::Question, n_it->second.front()};
    }
    auto i_it = i_by_value.find(v);
    if (i_it != i_by_value.end()) {
      return {OperandRef::Source::Intermediate, i_it->second};
    }
    throw MappingIncomplete("value " + v.str() + " has no recoverable origin");
  };

  std::vector<SkillSegment> segments =
      extract_segments(item.answer, kb, ExtractMode::Lenient);
  std::vector<ByteSpan> chain_spans;
  for (const SkillSegment& seg : segments) {
    if (seg.kind != SegmentKind::ArithChain) continue;
    if (!seg.verified) {
      throw MappingIncomplete("chain '" + seg.surface +
                              "' fails verification");
    }
    chain_spans.push_back(seg.span);
    Decimal value = chain_value(seg);
    if (n_by_value.count(value)) {
      throw MappingAmbiguous("intermediate " + value.str() +
                             " collides with a question number");
    }
    if (i_by_value.count(value)) {
      throw MappingAmbiguous("intermediate " + value.str() +
                             " is defined twice");
    }

    MapNode node;
    node.expr = seg.sides.front().expr;
    node.value = value;
    for (const Decimal& operand : seg.sides.front().expr.operands) {
      node.operands.push_back(resolve(operand));
    }
    std::size_t node_index = map.intermediates.size();

    // Tag every number inside the chain: operands of expression sides
    // resolve like the defining side; bare sides restate the value.
    std::vector<ScannedNumber> in_chain = scan_numbers(
        std::string_view(item.answer).substr(seg.span.begin, seg.span.size()));
    for (const ScannedNumber& num : in_chain) {
      ByteSpan span{seg.span.begin + num.span.begin,
                    seg.span.begin + num.span.end};
      if (num.value == value) {
        map.occurrences.push_back(TaggedOccurrence{
            span, false, {OperandRef::Source::Intermediate, node_index}});
      } else {
        map.occurrences.push_back(TaggedOccurrence{span, false,
                                                   resolve(num.value)});
      }
    }
    map.intermediates.push_back(std::move(node));
    i_by_value.emplace(value, node_index);
  }

  if (map.intermediates.empty()) {
    throw MappingIncomplete("answer has no arithmetic chains");
  }
  if (!(map.intermediates.back().value == item.final)) {
    throw MappingIncomplete("chains do not cover the final value");
  }

  // Numbers outside every chain must still be attributable.
  for (const ScannedNumber& num : scan_numbers(item.answer)) {
    bool inside = false;
    for (const ByteSpan& span : chain_spans) {
      if (num.span.begin >= span.begin && num.span.end <= span.end) {
        inside = true;
        break;
      }
    }
    if (inside) continue;
    map.occurrences.push_back(
        TaggedOccurrence{num.span, false, resolve(num.value)});
  }

  if (!map.verifies(item.final)) {
    throw MappingIncomplete("recovered map does not reproduce the answer");
  }
  return map;
}

AmplifyResult amplify(const MWPItem& item, const ComputationMap& map,
                      const AmplifyOptions& opts, Rng& rng) {
  if (opts.max_sig_digits < 1 || opts.max_sig_digits > 8) {
    throw Error("max_sig_digits must be in [1,8]");
  }

  JsonRecord n_old = JsonRecord::array();
  for (const Decimal& n : map.question_numbers) n_old.push_back(n.str());

  AmplifyResult result;
  result.provenance["raw_id"] = item.id;
  result.provenance["N_old"] = n_old;
  result.provenance["D"] = opts.max_sig_digits;
  result.provenance["units_swapped"] = false;

  if (!opts.resample) {
    result.item = item;
    result.provenance["N_new"] = n_old;
    result.provenance["resampled"] = false;
    return result;
  }

  for (int attempt = 0; attempt < opts.max_attempts; ++attempt) {
    std::vector<Decimal> new_n;
    for (std::size_t i = 0; i < map.question_numbers.size(); ++i) {
      const Decimal& raw = map.question_numbers[i];
      if (opts.protect_count_nouns && map.count_guard[i]) {
        new_n.push_back(raw);
        continue;
      }
      int raw_digits = raw.significant_digits();
      int lo = std::min(raw_digits, opts.max_sig_digits);
      int hi = std::max(raw_digits, opts.max_sig_digits);
      int digits = static_cast<int>(rng.range(lo, hi));
      new_n.push_back(random_number(rng, digits, !raw.is_integer()));
    }

    std::vector<Decimal> new_i;
    bool ok = true;
    for (const MapNode& node : map.intermediates) {
      Expression expr = node.expr;
      for (std::size_t k = 0; k < node.operands.size(); ++k) {
        const OperandRef& ref = node.operands[k];
        expr.operands[k] = ref.source == OperandRef::Source::Question
                               ? new_n[ref.index]
                               : new_i[ref.index];
      }
      auto value = eval_clean(expr);
      if (!value) {
        ok = false;
        break;
      }
      new_i.push_back(std::move(*value));
    }
    if (!ok) continue;

    // Re-extraction soundness needs every value to stay attributable to a
    // single role.
    std::set<ValueKey> seen;
    for (const Decimal& v : new_n) ok &= seen.insert(v).second;
    for (const Decimal& v : new_i) ok &= seen.insert(v).second;
    if (!ok) continue;

    std::vector<std::pair<ByteSpan, std::string>> q_subs, a_subs;
    for (const TaggedOccurrence& occ : map.occurrences) {
      const Decimal& v = occ.ref.source == OperandRef::Source::Question
                             ? new_n[occ.ref.index]
                             : new_i[occ.ref.index];
      (occ.in_question ? q_subs : a_subs).emplace_back(occ.span, v.str());
    }
    result.item = item;
    result.item.question = apply_substitutions(item.question, std::move(q_subs));
    result.item.answer = apply_substitutions(item.answer, std::move(a_subs));
    result.item.final = new_i.back();

    JsonRecord n_new = JsonRecord::array();
    for (const Decimal& n : new_n) n_new.push_back(n.str());
    result.provenance["N_new"] = std::move(n_new);
    result.provenance["resampled"] = true;
    result.provenance["attempts"] = attempt + 1;
    return result;
  }
  throw RegenerationFailure("could not satisfy amplification constraints for " +
                            item.id);
}

namespace {

// Replacement surface for a unit swap, matching number and capitalization.
std::string swapped_surface(std::string_view surface, const UnitEntry& from,
                            const UnitEntry& to) {
  std::string out = lower(surface) == lower(from.name) ? to.name : to.plural;
  if (!surface.empty() &&
      std::isupper(static_cast<unsigned char>(surface[0])) && !out.empty()) {
    out[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(out[0])));
  }
  return out;
}

}  // namespace

UnitAugmentResult augment_units(const MWPItem& item, const UnitKb& kb,
                                Rng& rng) {
  UnitAugmentResult result;
  result.item = item;
  result.provenance["raw_id"] = item.id;
  result.provenance["units_swapped"] = false;

  // The unit asked for lives in the final interrogative sentence.
  std::size_t q_end = item.question.rfind('?');
  std::size_t sent_end = q_end == std::string::npos ? item.question.size()
                                                    : q_end + 1;
  std::size_t sent_begin = item.question.find_last_of(".!?", sent_end - 2);
  sent_begin = sent_begin == std::string::npos ? 0 : sent_begin + 1;
  std::string_view sentence =
      std::string_view(item.question).substr(sent_begin, sent_end - sent_begin);

  struct UnitHit {
    const UnitEntry* unit;
    ByteSpan span;  // relative to the sentence
  };
  std::vector<UnitHit> hits;
  for (std::size_t i = 0; i < sentence.size(); ++i) {
    if (auto m = kb.match_at(sentence, i)) {
      hits.push_back(UnitHit{m->unit, {i, i + m->length}});
      i += m->length - 1;
    }
  }
  if (hits.empty()) return result;

  std::set<const UnitEntry*> distinct;
  for (const UnitHit& hit : hits) distinct.insert(hit.unit);
  result.multi_unit = distinct.size() > 1;

  const UnitEntry* target = hits.front().unit;
  auto how = [&](std::string_view phrase) {
    std::string low = lower(sentence);
    return low.find(std::string(phrase));
  };
  std::size_t anchor = std::min(how("how many"), how("how much"));
  if (anchor != std::string::npos) {
    for (const UnitHit& hit : hits) {
      if (hit.span.begin > anchor) {
        target = hit.unit;
        break;
      }
    }
  }

  auto candidates = kb.units_of(target->kind);
  if (candidates.size() < 2) return result;
  const UnitEntry* u1 = target;
  while (u1 == target) u1 = candidates[rng.below(candidates.size())];

  result.unit_found = true;
  result.u0 = target->name;
  result.u1 = u1->name;

  // Swap the target unit inside the question sentence.
  std::vector<std::pair<ByteSpan, std::string>> q_subs;
  for (const UnitHit& hit : hits) {
    if (hit.unit != target) continue;
    ByteSpan abs{sent_begin + hit.span.begin, sent_begin + hit.span.end};
    std::string_view surface =
        std::string_view(item.question).substr(abs.begin, abs.size());
    q_subs.emplace_back(abs, swapped_surface(surface, *target, *u1));
  }
  result.item.question = apply_substitutions(item.question, std::move(q_subs));

  // Rescale the final value and extend the answer with the conversion.
  Rational exact = rational_from_decimal(item.final) *
                   conversion_ratio(*target, *u1);
  Decimal new_final = decimal_from_rational(exact);
  std::string sentence_text = render_conversion_sentence(
      item.final, *target, new_final, *u1, false);

  std::string answer = item.answer;
  std::size_t marker = answer.rfind("####");
  if (marker != std::string::npos) {
    std::size_t p = marker + 4;
    while (p < answer.size() && answer[p] == ' ') ++p;
    std::size_t num_end = p;
    while (num_end < answer.size() &&
           (std::isdigit(static_cast<unsigned char>(answer[num_end])) ||
            answer[num_end] == '.' || answer[num_end] == ',' ||
            answer[num_end] == '-')) {
      ++num_end;
    }
    answer = answer.substr(0, p) + new_final.str() + answer.substr(num_end);
    answer.insert(marker, sentence_text + ". ");
  } else {
    if (!answer.empty() && answer.back() != ' ' && answer.back() != '\n') {
      answer += ' ';
    }
    answer += sentence_text + ".";
  }
  result.item.answer = std::move(answer);
  result.item.final = new_final;

  result.provenance["units_swapped"] = true;
  result.provenance["u0"] = target->name;
  result.provenance["u1"] = u1->name;
  result.provenance["ratio"] = rational_str(conversion_ratio(*target, *u1));
  result.provenance["multi_unit"] = result.multi_unit;
  return result;
}

}  // namespace mwpkit
