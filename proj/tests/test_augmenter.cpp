#include <doctest.h>

#include "fixtures.hpp"
#include "mwpkit/augmenter.hpp"
#include "mwpkit/evaluator.hpp"

using namespace mwpkit;

namespace {

const UnitKb& kb() { return fixtures::kb(); }

}  // namespace

TEST_CASE("extract_mapping recovers the sprint item structure") {
  ComputationMap map = extract_mapping(fixtures::james_raw_item(), kb());
  REQUIRE(map.question_numbers.size() == 3);
  CHECK(map.question_numbers[0] == Decimal::from_int(3));
  CHECK(map.question_numbers[1] == Decimal::from_int(4));
  CHECK(map.question_numbers[2] == Decimal::from_int(43));
  REQUIRE(map.intermediates.size() == 2);
  CHECK(map.intermediates[0].value == Decimal::from_int(12));
  CHECK(map.intermediates[1].value == Decimal::from_int(516));
  CHECK(map.verifies(Decimal::from_int(516)));
  // 3 sprints and 4 times are protected counts; 43 meters is not.
  CHECK(map.count_guard == std::vector<bool>{true, true, false});
}

TEST_CASE("question numbers reused in the answer stay question-sourced") {
  MWPItem item;
  item.id = "reuse";
  item.question = "Ann has 7 bags with 13 marbles each. How many marbles?";
  item.answer = "She owns 7 * 13 = 91 marbles. #### 91";
  item.final = Decimal::from_int(91);
  ComputationMap map = extract_mapping(item, kb());
  CHECK(map.intermediates.size() == 1);
  for (const OperandRef& ref : map.intermediates[0].operands) {
    CHECK(ref.source == OperandRef::Source::Question);
  }
}

TEST_CASE("non-derivable constants and ambiguity are rejected") {
  MWPItem constant;
  constant.id = "const";
  constant.question = "Jo saves 5 dollars a week. How much in a year?";
  constant.answer = "That is 5 * 52 = 260 dollars. #### 260";
  constant.final = Decimal::from_int(260);
  CHECK_THROWS_AS(extract_mapping(constant, kb()), MappingIncomplete);

  MWPItem dup;
  dup.id = "dup";
  dup.question = "He buys 3 pears and 3 plums at 4 coins each. Total coins?";
  dup.answer = "Fruit count is 3 + 3 = 6. Cost is 6 * 4 = 24. #### 24";
  dup.final = Decimal::from_int(24);
  CHECK_THROWS_AS(extract_mapping(dup, kb()), MappingAmbiguous);

  MWPItem no_chain;
  no_chain.id = "none";
  no_chain.question = "What is it?";
  no_chain.answer = "Nothing to compute. #### 4";
  no_chain.final = Decimal::from_int(4);
  CHECK_THROWS_AS(extract_mapping(no_chain, kb()), MappingIncomplete);
}

TEST_CASE("amplify resamples, recomputes and substitutes consistently") {
  MWPItem raw = fixtures::james_raw_item();
  ComputationMap map = extract_mapping(raw, kb());
  AmplifyOptions opts;
  opts.max_sig_digits = 3;
  Rng rng(7);
  AmplifyResult hard = amplify(raw, map, opts, rng);

  // Counts stay, the distance changes, the structure re-verifies.
  CHECK(hard.item.question.find("3 sprints 4 times") != std::string::npos);
  CHECK(hard.item.question != raw.question);
  ComputationMap remap = extract_mapping(hard.item, kb());
  CHECK(remap.verifies(hard.item.final));
  CHECK(remap.question_numbers[0] == Decimal::from_int(3));
  CHECK(remap.question_numbers[1] == Decimal::from_int(4));
  CHECK(hard.provenance["units_swapped"] == false);
  CHECK(hard.provenance["N_old"][2] == "43");
}

TEST_CASE("amplify identity configuration returns the item unchanged") {
  MWPItem raw = fixtures::james_raw_item();
  ComputationMap map = extract_mapping(raw, kb());
  AmplifyOptions opts;
  opts.resample = false;
  Rng rng(7);
  AmplifyResult out = amplify(raw, map, opts, rng);
  CHECK(out.item.question == raw.question);
  CHECK(out.item.answer == raw.answer);
  CHECK(out.item.final == raw.final);
}

TEST_CASE("amplify on synthetic items round-trips at scale") {
  auto items = fixtures::synthetic_items(100, 2025);
  AmplifyOptions opts;
  opts.max_sig_digits = 8;
  std::size_t amplified = 0;
  for (std::size_t k = 0; k < items.size(); ++k) {
    ComputationMap map = extract_mapping(items[k], kb());
    CHECK(map.verifies(items[k].final));
    Rng rng(9000 + k);
    AmplifyResult hard = amplify(items[k], map, opts, rng);
    ComputationMap remap = extract_mapping(hard.item, kb());
    CHECK(remap.verifies(hard.item.final));
    // Value types preserved: all these fixtures are integer-valued.
    for (const Decimal& n : remap.question_numbers) CHECK(n.is_integer());
    // Difficulty is monotone for unprotected numbers.
    for (std::size_t i = 0; i < map.question_numbers.size(); ++i) {
      if (map.count_guard[i]) continue;
      CHECK(remap.question_numbers[i].significant_digits() >=
            map.question_numbers[i].significant_digits());
    }
    ++amplified;
  }
  CHECK(amplified == 100);
}

TEST_CASE("division-bearing maps stay clean after amplification") {
  MWPItem item;
  item.id = "rope";
  item.question =
      "A rope of 72 meters is cut into 8 equal pieces. How many meters long "
      "is each piece?";
  item.answer = "Each piece is 72 / 8 = 9 meters long. #### 9";
  item.final = Decimal::from_int(9);
  ComputationMap map = extract_mapping(item, kb());
  AmplifyOptions opts;
  opts.max_sig_digits = 6;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Rng rng(seed);
    AmplifyResult hard = amplify(item, map, opts, rng);
    ComputationMap remap = extract_mapping(hard.item, kb());
    CHECK(remap.verifies(hard.item.final));
    CHECK(hard.item.final.scale() <= 2);
  }
}

TEST_CASE("amplify failure surfaces as RegenerationFailure") {
  MWPItem item;
  item.id = "tight";
  item.question = "Split 10 candies among 5 kids evenly. How many each?";
  item.answer = "Each gets 10 / 5 = 2 candies. #### 2";
  item.final = Decimal::from_int(2);
  ComputationMap map = extract_mapping(item, kb());
  AmplifyOptions opts;
  opts.max_attempts = 0;
  Rng rng(1);
  CHECK_THROWS_AS(amplify(item, map, opts, rng), RegenerationFailure);
}

TEST_CASE("augment_units swaps the asked-for unit and rescales the final") {
  MWPItem raw = fixtures::james_raw_item();
  Rng rng(3);
  UnitAugmentResult out = augment_units(raw, kb(), rng);
  REQUIRE(out.unit_found);
  CHECK(out.u0 == "meter");
  CHECK(out.item.question.find("How many total meters") == std::string::npos);
  // The given distance keeps its unit.
  CHECK(out.item.question.find("43 meters each sprint") != std::string::npos);
  // The answer gains a verifiable conversion statement.
  auto segs = extract_segments(out.item.answer, kb());
  bool has_unit_segment = false;
  for (const SkillSegment& seg : segs) {
    if (seg.kind == SegmentKind::UnitStatement) {
      has_unit_segment = true;
      CHECK(seg.verified);
    }
  }
  CHECK(has_unit_segment);
  // The final marker reflects the scaled value.
  CHECK(extract_final_answer(out.item.answer) == out.item.final);
  CHECK(out.provenance["units_swapped"] == true);
}

TEST_CASE("augment_units passes through unitless questions") {
  MWPItem item;
  item.id = "plain";
  item.question = "Tom has 3 apples and buys 4 more. How many apples now?";
  item.answer = "He has 3 + 4 = 7 apples. #### 7";
  item.final = Decimal::from_int(7);
  Rng rng(5);
  UnitAugmentResult out = augment_units(item, kb(), rng);
  CHECK_FALSE(out.unit_found);
  CHECK(out.item.answer == item.answer);
  CHECK(out.item.question == item.question);
}

TEST_CASE("augment_units strictly increases conversion-bearing items") {
  auto slice = fixtures::synthetic_items(50, 808);
  auto count_conversions = [&](const std::vector<MWPItem>& items) {
    std::size_t count = 0;
    for (const MWPItem& item : items) {
      for (const SkillSegment& seg : extract_segments(item.answer, kb())) {
        if (seg.kind == SegmentKind::UnitStatement) {
          ++count;
          break;
        }
      }
    }
    return count;
  };
  std::size_t before = count_conversions(slice);
  std::vector<MWPItem> augmented;
  for (std::size_t k = 0; k < slice.size(); ++k) {
    Rng rng = Rng::for_item(606, k);
    augmented.push_back(augment_units(slice[k], kb(), rng).item);
  }
  std::size_t after = count_conversions(augmented);
  CHECK(after > before);
}
