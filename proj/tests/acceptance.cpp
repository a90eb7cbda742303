// Acceptance suite: end-to-end checks of the pipeline's contracts, one
// printed pass/fail line per criterion. Exits non-zero if any fails.
#include <chrono>
#include <functional>
#include <iostream>
#include <map>
#include <set>

#include "fixtures.hpp"
#include "mwpkit/arith_gen.hpp"
#include "mwpkit/augmenter.hpp"
#include "mwpkit/composer.hpp"
#include "mwpkit/curriculum.hpp"
#include "mwpkit/evaluator.hpp"
#include "mwpkit/unit_kb.hpp"
#include "oracle.hpp"

using namespace mwpkit;

namespace {

struct Harness {
  int failures = 0;

  void run(const std::string& name, const std::function<void()>& body) {
    try {
      body();
      std::cout << "[PASS] " << name << "\n";
    } catch (const std::exception& e) {
      ++failures;
      std::cout << "[FAIL] " << name << ": " << e.what() << "\n";
    }
  }
};

void require(bool cond, const std::string& message) {
  if (!cond) throw std::runtime_error(message);
}

Decimal dec(const char* s) { return Decimal::parse(s); }

std::string non_segment_bytes(std::string_view text, const UnitKb& kb) {
  std::string out;
  std::size_t pos = 0;
  for (const SkillSegment& seg : extract_segments(text, kb)) {
    out.append(text.substr(pos, seg.span.begin - pos));
    pos = seg.span.end;
  }
  out.append(text.substr(pos));
  return out;
}

}  // namespace

int main() {
  const UnitKb& kb = fixtures::kb();
  Harness h;

  h.run("1. golden place-value multiplication string", [&] {
    std::string got = one_hop_response(dec("12"), OperatorKind::Mul, dec("43.5"));
    require(got ==
                "12 * 40 + 12 * 3 + 12 * 0.5 = 480 + 36 + 6 = 516 + 6 = 522",
            "got: " + got);
  });

  h.run("2. golden addition trace", [&] {
    Expression e;
    e.operands = {dec("5494"), dec("26.8"), dec("1.34")};
    e.operators = {OperatorKind::Add, OperatorKind::Add};
    std::string got = generate_response(e).text();
    require(got == "5494 + 26.8 + 1.34 = 5520.8 + 1.34 = 5522.14",
            "got: " + got);
  });

  h.run("3. gold validity: 10,000 grid items, every transition exact, <60s",
        [&] {
    auto start = std::chrono::steady_clock::now();
    ProfileGrid grid;  // hops 2-5 x digits 1-8 x 3 value types x 4 op classes
    auto plan = plan_items(grid, 10000);
    std::set<std::string> seen_cells;
    std::size_t transitions = 0;
    for (std::size_t k = 0; k < plan.size(); ++k) {
      JsonRecord rec = generate_arith_item(plan[k], 20240811, k);
      const std::string output = rec["output"].get<std::string>();
      require(oracle::trace_valid(output),
              "trace failed the rational oracle: " + output);
      transitions += oracle::split_on(output, " = ").size() - 1;
      seen_cells.insert(std::to_string(plan[k].hops) + "|" +
                        std::to_string(plan[k].max_sig_digits) + "|" +
                        to_string(plan[k].value_type) + "|" +
                        to_string(plan[k].op_class));
    }
    require(seen_cells.size() == grid.cells().size(),
            "not every feasible difficulty cell was generated");
    auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
                       std::chrono::steady_clock::now() - start)
                       .count();
    require(elapsed < 60000, "took " + std::to_string(elapsed) + " ms");
    require(transitions >= 20000, "suspiciously few transitions");
  });

  h.run("4. unit KB: exact reciprocity/transitivity and the five worked "
        "conversions", [&] {
    for (int k = 0; k < kQuantityKindCount; ++k) {
      auto units = kb.units_of(static_cast<QuantityKind>(k));
      for (const UnitEntry* a : units) {
        for (const UnitEntry* b : units) {
          require(conversion_ratio(*a, *b) * conversion_ratio(*b, *a) ==
                      Rational(1),
                  "reciprocity failed for " + a->name + "/" + b->name);
          for (const UnitEntry* c : units) {
            require(conversion_ratio(*a, *c) ==
                        conversion_ratio(*a, *b) * conversion_ratio(*b, *c),
                    "transitivity failed for " + a->name + "/" + b->name +
                        "/" + c->name);
          }
        }
      }
    }
    auto check = [&](const char* q, const char* u0, const char* u1,
                     const char* expect) {
      Decimal v = convert_quantity(dec(q), *kb.find(u0), *kb.find(u1));
      require(v == dec(expect), std::string(u0) + "->" + u1 + " gave " +
                                    v.str() + ", expected " + expect);
    };
    check("1", "m/s", "km/h", "3.6");
    check("2", "inch", "centimeter", "5.08");
    check("3", "hour", "second", "10800");
    check("1", "hour", "minute", "60");
    check("72", "km/h", "m/s", "20");
  });

  h.run("5. composer round-trip of the worked item + byte preservation on "
        "100 items", [&] {
    ComposeResult james = compose(fixtures::james_item(), kb);
    require(james.item.answer.find(
                "12 * 43.5 = 12 * 40 + 12 * 3 + 12 * 0.5 = 480 + 36 + 6 = "
                "516 + 6 = 522") != std::string::npos,
            "place-value expansion missing: " + james.item.answer);
    require(james.item.answer.find("522 meters is equal to 0.522 kilometers. "
                                   "So the answer is 0.522.") !=
                std::string::npos,
            "conversion + final sentence missing: " + james.item.answer);

    for (const MWPItem& item : fixtures::synthetic_items(100, 20240812)) {
      ComposeResult out = compose(item, kb);
      require(non_segment_bytes(item.answer, kb) ==
                  non_segment_bytes(out.item.answer, kb),
              "non-segment bytes changed for " + item.id);
      require(out.item.final == item.final, "final changed for " + item.id);
    }
  });

  h.run("6. augmenter: 100 re-verified maps and strictly more conversion "
        "items on a 50-item slice", [&] {
    auto raw = fixtures::synthetic_items(100, 20240813);
    AmplifyOptions opts;
    opts.max_sig_digits = 8;
    for (std::size_t k = 0; k < raw.size(); ++k) {
      ComputationMap map = extract_mapping(raw[k], kb);
      Rng rng = Rng::for_item(20240814, k);
      AmplifyResult hard = amplify(raw[k], map, opts, rng);
      ComputationMap remap = extract_mapping(hard.item, kb);
      require(remap.verifies(hard.item.final),
              "re-extracted map failed for " + raw[k].id);
    }

    auto slice = fixtures::synthetic_items(50, 20240815);
    auto conversions = [&](const std::vector<MWPItem>& items) {
      std::size_t n = 0;
      for (const MWPItem& item : items) {
        for (const SkillSegment& seg : extract_segments(item.answer, kb)) {
          if (seg.kind == SegmentKind::UnitStatement) {
            ++n;
            break;
          }
        }
      }
      return n;
    };
    std::size_t before = conversions(slice);
    std::vector<MWPItem> augmented;
    for (std::size_t k = 0; k < slice.size(); ++k) {
      Rng rng = Rng::for_item(20240816, k);
      augmented.push_back(augment_units(slice[k], kb, rng).item);
    }
    std::size_t after = conversions(augmented);
    require(after > before,
            "conversion-bearing items did not increase (" +
                std::to_string(before) + " -> " + std::to_string(after) + ")");
  });

  h.run("7. evaluator: perfect self-eval, 1,000 corruptions caught, case "
        "studies classified", [&] {
    // Gold set: composed synthetic items + generated prerequisite items
    // replayed as their own predictions.
    auto items = fixtures::synthetic_items(50, 20240817);
    std::vector<MWPItem> gold;
    for (const MWPItem& item : items) gold.push_back(compose(item, kb).item);
    std::vector<JsonRecord> preds;
    for (const MWPItem& item : gold) {
      JsonRecord p;
      p["id"] = item.id;
      p["response"] = item.answer;
      preds.push_back(std::move(p));
    }
    EvalReport report = evaluate(gold, preds, kb);
    require(report.answer_accuracy == 1.0, "self answer accuracy < 1");
    require(report.error_counts.at("AtomicSkillError") == 0,
            "self eval produced skill errors");
    require(report.error_counts.at("Correct") == gold.size(),
            "self eval not fully correct");
    for (const auto& [bucket, acc] : report.skill_accuracy) {
      require(acc == 1.0, "skill bucket " + bucket + " below 1.0");
    }

    // 1,000 single-digit corruptions, all must flip to AtomicSkillError.
    Rng rng(20240818);
    std::size_t injected = 0;
    std::size_t guard = 0;
    while (injected < 1000 && guard < 100000) {
      ++guard;
      const MWPItem& item = gold[rng.below(gold.size())];
      auto segments = extract_segments(item.answer, kb);
      if (segments.empty()) continue;
      const SkillSegment& seg = segments[rng.below(segments.size())];
      std::vector<std::size_t> digits;
      for (std::size_t i = seg.span.begin; i < seg.span.end; ++i) {
        if (item.answer[i] >= '0' && item.answer[i] <= '9') digits.push_back(i);
      }
      if (digits.empty()) continue;
      std::string corrupted = item.answer;
      std::size_t pos = digits[rng.below(digits.size())];
      char repl = static_cast<char>('0' + rng.below(10));
      while (repl == corrupted[pos]) repl = static_cast<char>('0' + rng.below(10));
      corrupted[pos] = repl;
      require(categorize(corrupted, item.final, kb) ==
                  Category::AtomicSkillError,
              "corruption escaped at byte " + std::to_string(pos) + " of " +
                  item.id + ": " + corrupted);
      ++injected;
    }
    require(injected == 1000, "could not inject 1000 corruptions");

    // Response-integration case studies: the direct answer is not
    // integrated, the two place-value restatements are.
    const std::string direct =
        "The salesman sold 31 shoes for 31 * $25 = 775. Thus, the salesman "
        "made a profit of 775 - 340 = 435. So the answer is 435.";
    const std::string applied =
        "The salesman sold 31 sneakers for 31 * $25 = 31 * 25 = 31 * 20 + 31 "
        "* 5 = 620 + 155 = 775 throughout the rest of the week. So the "
        "answer is 435.";
    const std::string curriculum =
        "The salesman sold 31 shoes for $25 each, so his profit was 31 * $25 "
        "= 31 * 25 = 31 * 20 + 31 * 5 = 620 + 155 = 775. In total 775 - 340 "
        "= 435. So the answer is 435.";
    require(!detect_cot_integration(direct, kb), "direct response flagged");
    require(detect_cot_integration(applied, kb), "applied response missed");
    require(detect_cot_integration(curriculum, kb),
            "curriculum response missed");
  });

  h.run("8. mixer: 10:1 ratio with 1,000 replay items, byte-identical "
        "reruns", [&] {
    ProfileGrid grid;
    auto plan = plan_items(grid, 10500);
    std::vector<JsonRecord> arith(plan.size());
    for (std::size_t k = 0; k < plan.size(); ++k) {
      arith[k] = generate_arith_item(plan[k], 20240819, k);
    }
    auto replay = fixtures::synthetic_items(1000, 20240820);
    MixSpec spec;
    spec.seed = 99;
    spec.prompt_template = "alpaca";
    spec.replay_count = 1000;
    spec.skills.push_back({"arith", "", 10, std::nullopt});
    auto once = build_skill_training(spec, {{"arith", arith}}, replay);
    auto twice = build_skill_training(spec, {{"arith", arith}}, replay);
    require(once.size() == 11000,
            "expected 11000 records, got " + std::to_string(once.size()));
    require(to_jsonl(once) == to_jsonl(twice), "reruns differ");
    std::size_t arith_n = 0, mwp_n = 0;
    for (const JsonRecord& rec : once) {
      if (rec["task"] == "arith") ++arith_n;
      if (rec["task"] == "mwp") ++mwp_n;
    }
    require(arith_n == 10000 && mwp_n == 1000, "ratio mismatch");
  });

  if (h.failures > 0) {
    std::cout << h.failures << " criterion(s) failed\n";
    return 1;
  }
  std::cout << "all acceptance criteria passed\n";
  return 0;
}
