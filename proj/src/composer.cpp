#include "mwpkit/composer.hpp"

#include <algorithm>
#include <cctype>

namespace mwpkit {

namespace {

bool is_digit(char c) { return c >= '0' && c <= '9'; }

bool is_alnum(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) != 0;
}

// A number token may start here only at a word boundary; the '.' guard keeps
// the tail of "1.2" from re-matching at '2'.
bool boundary_before(std::string_view text, std::size_t i) {
  if (i == 0) return true;
  char prev = text[i - 1];
  return !is_alnum(prev) && prev != '.';
}

struct NumTok {
  Decimal value;
  bool currency = false;
  std::size_t begin = 0;
  std::size_t end = 0;
};

std::optional<NumTok> scan_number_at(std::string_view text, std::size_t i) {
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
  NumTok tok;
  tok.value = Decimal::parse(text.substr(i, j - i));
  tok.currency = currency;
  tok.begin = i;
  tok.end = j;
  return tok;
}

// Whitespace and calculator annotations act as filler between chain tokens.
std::size_t skip_chain_filler(std::string_view text, std::size_t j) {
  while (j < text.size()) {
    char c = text[j];
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      ++j;
      continue;
    }
    if (c == '<' && j + 1 < text.size() && text[j + 1] == '<') {
      std::size_t close = text.find(">>", j + 2);
      if (close == std::string_view::npos) return j;
      j = close + 2;
      continue;
    }
    if (c == '>' && j + 1 < text.size() && text[j + 1] == '>') {
      j += 2;
      continue;
    }
    break;
  }
  return j;
}

struct OpTok {
  OperatorKind kind;
  std::size_t length;
};

std::optional<OpTok> scan_operator_at(std::string_view text, std::size_t j) {
  if (j >= text.size()) return std::nullopt;
  switch (text[j]) {
    case '+': return OpTok{OperatorKind::Add, 1};
    case '-': return OpTok{OperatorKind::Sub, 1};
    case '*': return OpTok{OperatorKind::Mul, 1};
    case '/': return OpTok{OperatorKind::Div, 1};
    default: break;
  }
  if (j + 1 < text.size() && static_cast<unsigned char>(text[j]) == 0xC3) {
    unsigned char second = static_cast<unsigned char>(text[j + 1]);
    if (second == 0x97) return OpTok{OperatorKind::Mul, 2};
    if (second == 0xB7) return OpTok{OperatorKind::Div, 2};
  }
  return std::nullopt;
}

struct SideBuild {
  std::vector<NumTok> nums;
  std::vector<OperatorKind> ops;
};

std::optional<SkillSegment> scan_chain_at(std::string_view text,
                                          std::size_t start) {
  std::vector<SideBuild> sides(1);
  struct Checkpoint {
    std::size_t side;
    std::size_t nums;
    std::size_t end;
  };
  std::optional<Checkpoint> cp;
  std::size_t j = start;
  bool expect_number = true;
  while (true) {
    j = skip_chain_filler(text, j);
    if (expect_number) {
      auto num = scan_number_at(text, j);
      if (!num) break;
      sides.back().nums.push_back(*num);
      j = num->end;
      if (sides.size() >= 2 && !sides[0].ops.empty()) {
        cp = Checkpoint{sides.size() - 1, sides.back().nums.size(), j};
      }
      expect_number = false;
    } else {
      if (j < text.size() && text[j] == '=') {
        sides.emplace_back();
        ++j;
        expect_number = true;
        continue;
      }
      auto op = scan_operator_at(text, j);
      if (!op) break;
      sides.back().ops.push_back(op->kind);
      j += op->length;
      expect_number = true;
    }
  }
  if (!cp) return std::nullopt;

  sides.resize(cp->side + 1);
  sides.back().nums.resize(cp->nums);
  sides.back().ops.resize(cp->nums - 1);

  SkillSegment seg;
  seg.kind = SegmentKind::ArithChain;
  seg.span = {start, cp->end};
  seg.surface = std::string(text.substr(start, cp->end - start));
  for (const SideBuild& sb : sides) {
    ChainSide side;
    for (const NumTok& num : sb.nums) {
      side.expr.operands.push_back(num.value);
      side.currency.push_back(num.currency);
    }
    side.expr.operators = sb.ops;
    std::size_t sb_begin = sb.nums.front().begin;
    std::size_t sb_end = sb.nums.back().end;
    side.surface = std::string(text.substr(sb_begin, sb_end - sb_begin));
    seg.sides.push_back(std::move(side));
  }
  seg.verified = verify_chain_sides(seg.sides);
  return seg;
}

std::size_t skip_spaces(std::string_view text, std::size_t j) {
  while (j < text.size() && (text[j] == ' ' || text[j] == '\t')) ++j;
  return j;
}

bool word_at(std::string_view text, std::size_t j, std::string_view word) {
  if (j + word.size() > text.size()) return false;
  for (std::size_t i = 0; i < word.size(); ++i) {
    if (std::tolower(static_cast<unsigned char>(text[j + i])) != word[i]) {
      return false;
    }
  }
  std::size_t end = j + word.size();
  return end >= text.size() || !is_alnum(text[end]);
}

std::optional<SkillSegment> scan_unit_statement_at(std::string_view text,
                                                   std::size_t start,
                                                   const UnitKb& kb) {
  SkillSegment seg;
  seg.kind = SegmentKind::UnitStatement;
  std::size_t j = start;

  if (auto num = scan_number_at(text, j); num && !num->currency) {
    seg.quantity = num->value;
    j = num->end;
  } else if (auto words = parse_number_words(text.substr(start))) {
    seg.quantity = Decimal::from_int(words->first);
    seg.leading_words = true;
    j = start + words->second;
  } else {
    return std::nullopt;
  }

  std::size_t after_q = skip_spaces(text, j);
  if (after_q == j) return std::nullopt;
  auto m0 = kb.match_at(text, after_q);
  if (!m0) return std::nullopt;
  seg.unit0 = m0->unit;
  j = after_q + m0->length;

  j = skip_spaces(text, j);
  if (word_at(text, j, "is")) {
    j += 2;
  } else if (word_at(text, j, "are")) {
    j += 3;
  } else {
    return std::nullopt;
  }
  j = skip_spaces(text, j);
  if (!word_at(text, j, "equal")) return std::nullopt;
  j = skip_spaces(text, j + 5);
  if (!word_at(text, j, "to")) return std::nullopt;
  j = skip_spaces(text, j + 2);

  auto stated = scan_number_at(text, j);
  if (!stated || stated->currency) return std::nullopt;
  seg.stated = stated->value;
  j = stated->end;

  std::size_t before_unit = skip_spaces(text, j);
  if (before_unit == j) return std::nullopt;
  auto m1 = kb.match_at(text, before_unit);
  if (!m1) return std::nullopt;
  seg.unit1 = m1->unit;
  j = before_unit + m1->length;

  seg.span = {start, j};
  seg.surface = std::string(text.substr(start, j - start));
  seg.verified = verify_unit_statement(seg);
  return seg;
}

std::string replace_spans(
    std::string_view text,
    std::vector<std::pair<ByteSpan, std::string>> replacements) {
  std::sort(replacements.begin(), replacements.end(),
            [](const auto& a, const auto& b) {
              return a.first.begin < b.first.begin;
            });
  std::string out;
  std::size_t pos = 0;
  for (const auto& [span, replacement] : replacements) {
    if (span.begin < pos || span.end > text.size()) {
      throw Error("overlapping or out-of-range replacement spans");
    }
    out.append(text.substr(pos, span.begin - pos));
    out.append(replacement);
    pos = span.end;
  }
  out.append(text.substr(pos));
  return out;
}

bool contains_ci(std::string_view haystack, std::string_view needle) {
  if (needle.empty() || haystack.size() < needle.size()) return false;
  for (std::size_t i = 0; i + needle.size() <= haystack.size(); ++i) {
    bool hit = true;
    for (std::size_t k = 0; k < needle.size(); ++k) {
      if (std::tolower(static_cast<unsigned char>(haystack[i + k])) !=
          needle[k]) {
        hit = false;
        break;
      }
    }
    if (hit) return true;
  }
  return false;
}

bool has_final_sentence(std::string_view answer) {
  return contains_ci(answer, "so the answer is") ||
         answer.find("####") != std::string_view::npos;
}

// Number tokens equal to `value` occurring outside `exclude`.
bool value_occurs_outside(std::string_view text, const Decimal& value,
                          const ByteSpan& exclude) {
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (i >= exclude.begin && i < exclude.end) continue;
    if (!(is_digit(text[i]) || text[i] == '$') || !boundary_before(text, i)) {
      continue;
    }
    if (auto num = scan_number_at(text, i)) {
      if (!(num->begin >= exclude.begin && num->end <= exclude.end) &&
          num->value == value) {
        return true;
      }
      i = num->end - 1;
    }
  }
  return false;
}

ComposeResult splice_segments(const MWPItem& item,
                              const std::vector<SkillSegment>& segments) {
  ComposeResult result;
  std::vector<std::pair<ByteSpan, std::string>> replacements;
  for (const SkillSegment& seg : segments) {
    replacements.emplace_back(seg.span, rewrite_segment(seg));
    result.replaced.push_back(seg.span);
  }
  result.item = item;
  result.item.answer = replace_spans(item.answer, std::move(replacements));
  result.segment_count = segments.size();
  if (!has_final_sentence(result.item.answer)) {
    std::string& answer = result.item.answer;
    if (!answer.empty() && answer.back() != ' ' && answer.back() != '\n') {
      answer += ' ';
    }
    answer += "So the answer is " + item.final.str() + ".";
    result.appended_final_sentence = true;
  }
  return result;
}

}  // namespace

MWPItem MWPItem::from_json(const JsonRecord& rec) {
  MWPItem item;
  if (rec.contains("id")) {
    item.id = rec["id"].is_string() ? rec["id"].get<std::string>()
                                    : rec["id"].dump();
  }
  item.question = rec.value("question", std::string());
  item.answer = rec.value("answer", std::string());
  if (rec.contains("source")) item.source = rec.value("source", std::string());
  if (rec.contains("final")) {
    const auto& f = rec["final"];
    item.final = Decimal::parse(f.is_string() ? f.get<std::string>() : f.dump());
  } else {
    std::size_t marker = item.answer.rfind("####");
    if (marker == std::string::npos) {
      throw Error("item " + item.id + " has no final value");
    }
    std::size_t p = marker + 4;
    while (p < item.answer.size() && item.answer[p] == ' ') ++p;
    auto num = scan_number_at(item.answer, p);
    if (!num) throw Error("item " + item.id + " has an empty #### marker");
    item.final = num->value;
  }
  return item;
}

JsonRecord MWPItem::to_json() const {
  JsonRecord rec;
  rec["id"] = id;
  rec["question"] = question;
  rec["answer"] = answer;
  rec["final"] = final.str();
  rec["source"] = source;
  return rec;
}

Decimal chain_value(const SkillSegment& seg) {
  if (seg.kind != SegmentKind::ArithChain || seg.sides.empty()) {
    throw Error("not an arithmetic chain");
  }
  return eval_expression(seg.sides.front().expr);
}

Expression parse_expression(std::string_view text) {
  Expression expr;
  std::size_t j = skip_chain_filler(text, 0);
  bool expect_number = true;
  while (j < text.size()) {
    if (expect_number) {
      auto num = scan_number_at(text, j);
      if (!num) throw ParseError("expected a number", j);
      expr.operands.push_back(num->value);
      j = num->end;
    } else {
      auto op = scan_operator_at(text, j);
      if (!op) throw ParseError("expected an operator", j);
      expr.operators.push_back(op->kind);
      j += op->length;
    }
    expect_number = !expect_number;
    j = skip_chain_filler(text, j);
  }
  if (expect_number || expr.operands.empty()) {
    throw ParseError("truncated expression", text.size());
  }
  return expr;
}

bool verify_chain_sides(const std::vector<ChainSide>& sides) {
  std::optional<Decimal> value;
  for (const ChainSide& side : sides) {
    if (!evaluable(side.expr)) return false;
    Decimal v = eval_expression(side.expr);
    if (value && !(*value == v)) return false;
    value = v;
  }
  return value.has_value();
}

bool verify_unit_statement(const SkillSegment& seg) {
  if (seg.unit0 == nullptr || seg.unit1 == nullptr) return false;
  if (seg.unit0->kind != seg.unit1->kind) return false;
  Rational exact = rational_from_decimal(seg.quantity) *
                   conversion_ratio(*seg.unit0, *seg.unit1);
  if (rational_from_decimal(seg.stated) == exact) return true;
  return seg.stated == decimal_from_rational(exact);
}

std::vector<SkillSegment> extract_segments(std::string_view answer,
                                           const UnitKb& kb,
                                           ExtractMode mode) {
  std::vector<SkillSegment> candidates;

  std::size_t pos = 0;
  while (pos < answer.size()) {
    char c = answer[pos];
    if ((is_digit(c) || c == '$') && boundary_before(answer, pos)) {
      if (auto chain = scan_chain_at(answer, pos)) {
        pos = chain->span.end;
        candidates.push_back(std::move(*chain));
        continue;
      }
    }
    ++pos;
  }

  pos = 0;
  while (pos < answer.size()) {
    char c = answer[pos];
    bool starter = (is_digit(c) || std::isalpha(static_cast<unsigned char>(c))) &&
                   boundary_before(answer, pos);
    if (starter) {
      if (auto unit = scan_unit_statement_at(answer, pos, kb)) {
        pos = unit->span.end;
        candidates.push_back(std::move(*unit));
        continue;
      }
    }
    ++pos;
  }

  std::sort(candidates.begin(), candidates.end(),
            [](const SkillSegment& a, const SkillSegment& b) {
              if (a.span.begin != b.span.begin) {
                return a.span.begin < b.span.begin;
              }
              return a.span.end > b.span.end;
            });
  std::vector<SkillSegment> selected;
  std::size_t covered = 0;
  for (SkillSegment& seg : candidates) {
    if (!selected.empty() && seg.span.begin < covered) continue;
    if (mode == ExtractMode::Strict && !seg.verified) continue;
    covered = seg.span.end;
    selected.push_back(std::move(seg));
  }
  return selected;
}

std::string rewrite_segment(const SkillSegment& seg) {
  if (seg.kind == SegmentKind::UnitStatement) {
    if (seg.unit0 == nullptr || seg.unit1 == nullptr ||
        seg.unit0->kind != seg.unit1->kind) {
      throw Error("cannot rewrite an invalid unit statement");
    }
    Decimal v = convert_quantity(seg.quantity, *seg.unit0, *seg.unit1);
    return render_conversion_sentence(seg.quantity, *seg.unit0, v, *seg.unit1,
                                      seg.leading_words);
  }
  if (seg.sides.empty() || !evaluable(seg.sides.front().expr)) {
    throw Error("cannot rewrite an unevaluable chain");
  }
  CoTTrace trace = generate_response(seg.sides.front().expr);
  if (seg.sides.front().surface == trace.steps.front()) {
    return trace.text();
  }
  // Non-canonical first side (currency marks, tight spacing): keep the
  // original spelling, then restate canonically.
  return seg.sides.front().surface + " = " + trace.text();
}

ComposeResult compose(const MWPItem& item, const UnitKb& kb) {
  std::vector<SkillSegment> segments =
      extract_segments(item.answer, kb, ExtractMode::Lenient);
  std::vector<ByteSpan> failing;
  for (const SkillSegment& seg : segments) {
    if (!seg.verified) failing.push_back(seg.span);
  }
  if (!failing.empty()) {
    throw SegmentVerificationError(
        std::to_string(failing.size()) + " segment(s) failed verification",
        std::move(failing));
  }
  return splice_segments(item, segments);
}

ComposeOutcome compose_with_policy(const MWPItem& item, const UnitKb& kb,
                                   const ComposePolicy& policy) {
  ComposeOutcome outcome;
  std::vector<SkillSegment> segments =
      extract_segments(item.answer, kb, ExtractMode::Lenient);

  for (SkillSegment& seg : segments) {
    if (seg.verified) continue;
    if (!policy.correct_noise) {
      outcome.skip_reason = "unverified_segment";
      return outcome;
    }
    if (seg.kind == SegmentKind::UnitStatement) {
      if (seg.unit0 == nullptr || seg.unit1 == nullptr ||
          seg.unit0->kind != seg.unit1->kind) {
        outcome.skip_reason = "unit_statement_invalid";
        return outcome;
      }
      Decimal corrected = convert_quantity(seg.quantity, *seg.unit0, *seg.unit1);
      if (seg.stated == item.final ||
          value_occurs_outside(item.answer, seg.stated, seg.span)) {
        outcome.skip_reason = "noise_propagates";
        return outcome;
      }
      seg.stated = corrected;
      seg.verified = true;
      ++outcome.corrections;
      continue;
    }
    if (!evaluable(seg.sides.front().expr)) {
      outcome.skip_reason = "unparseable_chain";
      return outcome;
    }
    Decimal corrected = chain_value(seg);
    // Every stated value that disagrees with the re-derivation is noise; a
    // correction is only safe when none of those values leak elsewhere.
    for (const ChainSide& side : seg.sides) {
      if (!evaluable(side.expr)) {
        outcome.skip_reason = "unparseable_chain";
        return outcome;
      }
      Decimal v = eval_expression(side.expr);
      if (v == corrected) continue;
      if (v == item.final) {
        outcome.skip_reason = "final_depends_on_noise";
        return outcome;
      }
      if (value_occurs_outside(item.answer, v, seg.span)) {
        outcome.skip_reason = "noise_propagates";
        return outcome;
      }
    }
    seg.verified = true;  // rewrite re-derives from the first side
    ++outcome.corrections;
  }

  ComposeResult result = splice_segments(item, segments);
  // A correction must leave a fully verifiable answer behind.
  if (outcome.corrections > 0) {
    auto check = extract_segments(result.item.answer, kb, ExtractMode::Lenient);
    for (const SkillSegment& seg : check) {
      if (!seg.verified) {
        outcome.skip_reason = "correction_inconsistent";
        return outcome;
      }
    }
  }
  outcome.result = std::move(result);
  return outcome;
}

}  // namespace mwpkit
