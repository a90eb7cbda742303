#include "mwpkit/evaluator.hpp"

#include <algorithm>
#include <cctype>

namespace mwpkit {

namespace {

bool is_digit(char c) { return c >= '0' && c <= '9'; }

bool is_alnum(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) != 0;
}

bool boundary_before(std::string_view text, std::size_t i) {
  if (i == 0) return true;
  char prev = text[i - 1];
  return !is_alnum(prev) && prev != '.';
}

std::optional<ScannedNumber> scan_one(std::string_view text, std::size_t i) {
  std::size_t j = i;
  bool currency = false;
  if (j < text.size() && text[j] == '$') {
    currency = true;
    ++j;
  }
  if (j >= text.size() || !is_digit(text[j])) return std::nullopt;
  while (j < text.size()) {
    if (is_digit(text[j])) {
      ++j;
      continue;
    }
    if (text[j] == ',' && j + 3 < text.size() && is_digit(text[j + 1]) &&
        is_digit(text[j + 2]) && is_digit(text[j + 3]) &&
        !(j + 4 < text.size() && is_digit(text[j + 4]))) {
      j += 4;
      continue;
    }
    break;
  }
  if (j + 1 < text.size() && text[j] == '.' && is_digit(text[j + 1])) {
    ++j;
    while (j < text.size() && is_digit(text[j])) ++j;
  }
  ScannedNumber out;
  out.value = Decimal::parse(text.substr(i, j - i));
  out.currency = currency;
  out.span = {i, j};
  return out;
}

std::size_t find_ci(std::string_view haystack, std::string_view needle,
                    std::size_t from = 0) {
  if (needle.empty() || haystack.size() < needle.size()) {
    return std::string_view::npos;
  }
  for (std::size_t i = from; i + needle.size() <= haystack.size(); ++i) {
    bool hit = true;
    for (std::size_t k = 0; k < needle.size(); ++k) {
      if (std::tolower(static_cast<unsigned char>(haystack[i + k])) !=
          needle[k]) {
        hit = false;
        break;
      }
    }
    if (hit) return i;
  }
  return std::string_view::npos;
}

std::optional<Decimal> number_after(std::string_view text, std::size_t pos) {
  while (pos < text.size() &&
         (text[pos] == ' ' || text[pos] == ':' || text[pos] == '\n')) {
    ++pos;
  }
  if (auto num = scan_one(text, pos)) return num->value;
  return std::nullopt;
}

// Does `next` equal `prev` with hop `h` replaced by the place-value
// expansion of its right operand?
bool is_expansion_of(const Expression& prev, std::size_t h,
                     const Expression& next) {
  const Decimal& a = prev.operands[h];
  const Decimal& b = prev.operands[h + 1];
  std::vector<Decimal> places = b.split_place_values();
  Expression expected;
  expected.operands.assign(prev.operands.begin(),
                           prev.operands.begin() + static_cast<std::ptrdiff_t>(h));
  expected.operators.assign(
      prev.operators.begin(),
      prev.operators.begin() + static_cast<std::ptrdiff_t>(h));
  for (std::size_t t = 0; t < places.size(); ++t) {
    if (t > 0) expected.operators.push_back(OperatorKind::Add);
    expected.operands.push_back(a);
    expected.operators.push_back(OperatorKind::Mul);
    expected.operands.push_back(places[t]);
  }
  for (std::size_t i = h + 1; i < prev.operators.size(); ++i) {
    expected.operators.push_back(prev.operators[i]);
    expected.operands.push_back(prev.operands[i + 1]);
  }
  if (expected.operands.size() != next.operands.size()) return false;
  if (expected.operators != next.operators) return false;
  for (std::size_t i = 0; i < expected.operands.size(); ++i) {
    if (!(expected.operands[i] == next.operands[i])) return false;
  }
  return true;
}

}  // namespace

std::vector<ScannedNumber> scan_numbers(std::string_view text) {
  std::vector<ScannedNumber> out;
  std::size_t i = 0;
  while (i < text.size()) {
    if ((is_digit(text[i]) || text[i] == '$') && boundary_before(text, i)) {
      if (auto num = scan_one(text, i)) {
        i = num->span.end;
        out.push_back(std::move(*num));
        continue;
      }
    }
    ++i;
  }
  return out;
}

std::optional<Decimal> extract_final_answer(std::string_view response) {
  std::size_t pos = 0;
  while ((pos = find_ci(response, "so the answer is", pos)) !=
         std::string_view::npos) {
    if (auto v = number_after(response, pos + 16)) return v;
    ++pos;
  }
  pos = 0;
  while ((pos = response.find("####", pos)) != std::string_view::npos) {
    if (auto v = number_after(response, pos + 4)) return v;
    ++pos;
  }
  auto nums = scan_numbers(response);
  if (nums.empty()) return std::nullopt;
  return nums.back().value;
}

bool score_answer(const Decimal& pred, const Decimal& gold, AnswerRule rule) {
  if (pred == gold) return true;
  if (rule == AnswerRule::Exact) return false;
  return pred.rounded(2) == gold.rounded(2);
}

std::vector<SegmentVerdict> score_skill_segments(std::string_view response,
                                                 const UnitKb& kb) {
  std::vector<SegmentVerdict> verdicts;
  for (const SkillSegment& seg :
       extract_segments(response, kb, ExtractMode::Lenient)) {
    SegmentVerdict v;
    v.span = seg.span;
    v.kind = seg.kind;
    v.correct = seg.verified;
    v.surface = seg.surface;
    if (seg.kind == SegmentKind::ArithChain) {
      v.hops = seg.sides.front().expr.hops();
      for (const ChainSide& side : seg.sides) {
        for (OperatorKind op : side.expr.operators) {
          if (op == OperatorKind::Mul) v.has_mul = true;
          if (op == OperatorKind::Div) v.has_div = true;
        }
      }
    }
    verdicts.push_back(std::move(v));
  }
  return verdicts;
}

bool detect_cot_integration(std::string_view response, const UnitKb& kb) {
  for (const SkillSegment& seg :
       extract_segments(response, kb, ExtractMode::Lenient)) {
    if (seg.kind != SegmentKind::ArithChain) continue;
    for (std::size_t s = 0; s + 1 < seg.sides.size(); ++s) {
      const Expression& prev = seg.sides[s].expr;
      const Expression& next = seg.sides[s + 1].expr;
      for (std::size_t h = 0; h < prev.operators.size(); ++h) {
        if (prev.operators[h] != OperatorKind::Mul) continue;
        const Decimal& b = prev.operands[h + 1];
        if (b.is_zero() || b.is_negative() || b.significant_digits() < 2) {
          continue;
        }
        if (is_expansion_of(prev, h, next)) return true;
      }
    }
  }
  return false;
}

std::string to_string(Category c) {
  switch (c) {
    case Category::Correct: return "Correct";
    case Category::AtomicSkillError: return "AtomicSkillError";
    case Category::OtherError: return "OtherError";
  }
  return "?";
}

Category categorize(std::string_view response, const Decimal& gold,
                    const UnitKb& kb) {
  for (const SegmentVerdict& v : score_skill_segments(response, kb)) {
    if (!v.correct) return Category::AtomicSkillError;
  }
  auto final = extract_final_answer(response);
  if (final && score_answer(*final, gold)) return Category::Correct;
  return Category::OtherError;
}

std::string difficulty_bucket(std::string_view answer, const UnitKb& kb) {
  bool has_mul = false, has_div = false, any = false;
  int hops = 0;
  for (const SkillSegment& seg :
       extract_segments(answer, kb, ExtractMode::Lenient)) {
    if (seg.kind != SegmentKind::ArithChain) continue;
    any = true;
    hops += seg.sides.front().expr.hops();
    for (OperatorKind op : seg.sides.front().expr.operators) {
      if (op == OperatorKind::Mul) has_mul = true;
      if (op == OperatorKind::Div) has_div = true;
    }
  }
  if (!any) return "";
  std::string cls = has_div ? "MixAll" : has_mul ? "MixMul" : "AddSub";
  return cls + "|" + std::to_string(std::clamp(hops, 2, 5));
}

JsonRecord EvalReport::to_json() const {
  JsonRecord rec;
  rec["item_count"] = item_count;
  rec["answer_accuracy"] = answer_accuracy;
  JsonRecord skills = JsonRecord::object();
  for (const auto& [bucket, acc] : skill_accuracy) skills[bucket] = acc;
  rec["skill_accuracy"] = std::move(skills);
  rec["cot_integration_rate"] = cot_integration_rate;
  JsonRecord errors = JsonRecord::object();
  for (const auto& [name, count] : error_counts) errors[name] = count;
  rec["error_counts"] = std::move(errors);
  return rec;
}

EvalReport evaluate(const std::vector<MWPItem>& gold,
                    const std::vector<JsonRecord>& predictions,
                    const UnitKb& kb, AnswerRule rule) {
  std::map<std::string, std::string> responses;
  for (const JsonRecord& pred : predictions) {
    std::string id;
    if (pred.contains("id")) {
      id = pred["id"].is_string() ? pred["id"].get<std::string>()
                                  : pred["id"].dump();
    }
    for (const char* field : {"response", "answer", "output"}) {
      if (pred.contains(field) && pred[field].is_string()) {
        responses[id] = pred[field].get<std::string>();
        break;
      }
    }
  }

  EvalReport report;
  report.item_count = gold.size();
  report.error_counts = {{"Correct", 0}, {"AtomicSkillError", 0},
                         {"OtherError", 0}};
  std::size_t answer_hits = 0, cot_hits = 0;
  std::map<std::string, std::pair<std::size_t, std::size_t>> buckets;

  for (const MWPItem& item : gold) {
    auto it = responses.find(item.id);
    const std::string response = it == responses.end() ? "" : it->second;

    auto final = extract_final_answer(response);
    bool answer_correct = final && score_answer(*final, item.final, rule);
    if (answer_correct) ++answer_hits;

    bool cot = detect_cot_integration(response, kb);
    if (cot) ++cot_hits;

    auto segment_verdicts = score_skill_segments(response, kb);
    std::string bucket = difficulty_bucket(item.answer, kb);
    if (!bucket.empty()) {
      for (const SegmentVerdict& v : segment_verdicts) {
        buckets[bucket].second += 1;
        if (v.correct) buckets[bucket].first += 1;
      }
    }

    Category category = Category::OtherError;
    bool any_bad_segment = false;
    for (const SegmentVerdict& v : segment_verdicts) {
      if (!v.correct) any_bad_segment = true;
    }
    if (any_bad_segment) {
      category = Category::AtomicSkillError;
    } else if (answer_correct) {
      category = Category::Correct;
    }
    report.error_counts[to_string(category)] += 1;

    JsonRecord verdict;
    verdict["id"] = item.id;
    verdict["category"] = to_string(category);
    verdict["answer_correct"] = answer_correct;
    verdict["pred_final"] = final ? JsonRecord(final->str()) : JsonRecord();
    verdict["gold_final"] = item.final.str();
    verdict["cot_integration"] = cot;
    verdict["bucket"] = bucket;
    JsonRecord segs = JsonRecord::array();
    for (const SegmentVerdict& v : segment_verdicts) {
      JsonRecord s;
      s["kind"] = v.kind == SegmentKind::ArithChain ? "arith" : "unit";
      s["correct"] = v.correct;
      s["surface"] = v.surface;
      segs.push_back(std::move(s));
    }
    verdict["segments"] = std::move(segs);
    report.verdicts.push_back(std::move(verdict));
  }

  const double n = static_cast<double>(gold.size());
  report.answer_accuracy = gold.empty() ? 0.0 : answer_hits / n;
  report.cot_integration_rate = gold.empty() ? 0.0 : cot_hits / n;
  for (const auto& [bucket, counts] : buckets) {
    report.skill_accuracy[bucket] =
        counts.second == 0
            ? 0.0
            : static_cast<double>(counts.first) /
                  static_cast<double>(counts.second);
  }
  return report;
}

}  // namespace mwpkit
