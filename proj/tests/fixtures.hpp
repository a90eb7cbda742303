// Shared synthetic fixtures for the test suites: a worked compositional
// item plus deterministic GSM8K-format item builders with known
// computation structure.
#pragma once

#include <string>
#include <vector>

#include "mwpkit/composer.hpp"
#include "mwpkit/rng.hpp"
#include "mwpkit/unit_kb.hpp"

namespace fixtures {

inline const mwpkit::UnitKb& kb() {
  static mwpkit::UnitKb kb =
      mwpkit::UnitKb::load(std::string(MWPKIT_DATA_DIR) + "/units.kb");
  return kb;
}

// The sprint-running item in its unit-augmented form, ready for composition.
inline mwpkit::MWPItem james_item() {
  mwpkit::MWPItem item;
  item.id = "james";
  item.question =
      "James decides to run 3 sprints 4 times a week. He runs 43.5 meters "
      "each sprint. How many total kilometers does he run a week?";
  item.answer =
      "He sprints 3 * 4 = 12 times. So he runs 12 * 43.5 = 522 meters a "
      "week. 522 meters is equal to 0.522 kilometers.";
  item.final = mwpkit::Decimal::parse("0.522");
  item.source = "fixture";
  return item;
}

// Its pre-augmentation form: integer distance, meters asked directly.
inline mwpkit::MWPItem james_raw_item() {
  mwpkit::MWPItem item;
  item.id = "james-raw";
  item.question =
      "James decides to run 3 sprints 4 times a week. He runs 43 meters "
      "each sprint. How many total meters does he run a week?";
  item.answer =
      "He sprints 3 * 4 = 12 times. So he runs 12 * 43 = 516 meters a "
      "week. #### 516";
  item.final = mwpkit::Decimal::parse("516");
  item.source = "fixture";
  return item;
}

// Deterministic GSM8K-format items with simple recoverable computation
// maps. Roughly half mention a measurable unit in the question sentence.
inline std::vector<mwpkit::MWPItem> synthetic_items(std::size_t n,
                                                    std::uint64_t seed) {
  using mwpkit::Decimal;
  std::vector<mwpkit::MWPItem> items;
  items.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    mwpkit::Rng rng = mwpkit::Rng::for_item(seed, k);
    mwpkit::MWPItem item;
    item.id = "syn-" + std::to_string(k);
    item.source = "synthetic";
    auto num = [&](int lo, int hi) {
      return static_cast<long long>(rng.range(lo, hi));
    };
    switch (k % 5) {
      case 0: {
        long long a = num(3, 89), b = num(2, 97);
        while (b == a) b = num(2, 97);
        long long p = a * b;
        item.question = "A farmer packs " + std::to_string(a) +
                        " crates with " + std::to_string(b) +
                        " apples in each crate. How many apples are there in "
                        "total?";
        item.answer = "There are " + std::to_string(a) + " * " +
                      std::to_string(b) + " = " + std::to_string(p) +
                      " apples. #### " + std::to_string(p);
        item.final = Decimal::from_int(p);
        break;
      }
      case 1: {
        long long a = num(4, 59), b = num(2, 49), c = num(3, 87);
        while (b == a) b = num(2, 49);
        while (c == a || c == b) c = num(3, 87);
        long long p = a * b, q = p + c;
        item.question = "Sam buys " + std::to_string(a) + " boxes of " +
                        std::to_string(b) + " pens and finds " +
                        std::to_string(c) +
                        " loose pens. How many pens does he have now?";
        item.answer = "The boxes hold " + std::to_string(a) + " * " +
                      std::to_string(b) + " = " + std::to_string(p) +
                      " pens. With the loose ones he has " + std::to_string(p) +
                      " + " + std::to_string(c) + " = " + std::to_string(q) +
                      " pens. #### " + std::to_string(q);
        item.final = Decimal::from_int(q);
        break;
      }
      case 2: {
        long long k2 = num(2, 9), m = num(3, 99);
        long long len = k2 * m;
        item.question = "A rope of " + std::to_string(len) +
                        " meters is cut into " + std::to_string(k2) +
                        " equal pieces. How many meters long is each piece?";
        item.answer = "Each piece is " + std::to_string(len) + " / " +
                      std::to_string(k2) + " = " + std::to_string(m) +
                      " meters long. #### " + std::to_string(m);
        item.final = Decimal::from_int(m);
        break;
      }
      case 3: {
        long long a = num(30, 995), b = num(2, 29);
        long long d = a - b;
        item.question = "Maria had " + std::to_string(a) +
                        " stickers and gave " + std::to_string(b) +
                        " of them away. How many stickers does she have left?";
        item.answer = "She keeps " + std::to_string(a) + " - " +
                      std::to_string(b) + " = " + std::to_string(d) +
                      " stickers. #### " + std::to_string(d);
        item.final = Decimal::from_int(d);
        break;
      }
      default: {
        long long a = num(2, 19), b = num(2, 23);
        while (b == a) b = num(2, 23);
        long long p = a * b;
        item.question = "A snail crawls " + std::to_string(a) +
                        " centimeters every minute. How many centimeters "
                        "does it crawl in " +
                        std::to_string(b) + " minutes?";
        item.answer = "It crawls " + std::to_string(a) + " * " +
                      std::to_string(b) + " = " + std::to_string(p) +
                      " centimeters. #### " + std::to_string(p);
        item.final = Decimal::from_int(p);
        break;
      }
    }
    items.push_back(std::move(item));
  }
  return items;
}

}  // namespace fixtures
