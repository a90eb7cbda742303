#include <doctest.h>

#include <map>
#include <set>

#include "mwpkit/arith_gen.hpp"
#include "oracle.hpp"

using namespace mwpkit;

namespace {

Decimal dec(const char* s) { return Decimal::parse(s); }

Expression expr_of(std::initializer_list<const char*> operands,
                   std::initializer_list<OperatorKind> ops) {
  Expression e;
  for (const char* s : operands) e.operands.push_back(dec(s));
  e.operators = ops;
  return e;
}

}  // namespace

TEST_CASE("one_hop_response golden strings") {
  CHECK(one_hop_response(dec("12"), OperatorKind::Mul, dec("43.5")) ==
        "12 * 40 + 12 * 3 + 12 * 0.5 = 480 + 36 + 6 = 516 + 6 = 522");
  CHECK(one_hop_response(dec("12"), OperatorKind::Mul, dec("40")) == "480");
  CHECK(one_hop_response(dec("12"), OperatorKind::Mul, dec("3")) == "36");
  CHECK(one_hop_response(dec("12"), OperatorKind::Mul, dec("0.01")) == "0.12");
  CHECK(one_hop_response(dec("7"), OperatorKind::Mul, dec("1"),
                         HopStyle::PlaceValue) == "7 * 1 = 7");
  CHECK(one_hop_response(dec("123"), OperatorKind::Div, dec("2")) == "61.5");
  CHECK(one_hop_response(dec("31"), OperatorKind::Mul, dec("25")) ==
        "31 * 20 + 31 * 5 = 620 + 155 = 775");
  CHECK_THROWS_AS(one_hop_response(dec("3"), OperatorKind::Div, Decimal()),
                  DivisionByZero);
}

TEST_CASE("generate_response golden traces") {
  CHECK(generate_response(
            expr_of({"5494", "26.8", "1.34"},
                    {OperatorKind::Add, OperatorKind::Add}))
            .text() == "5494 + 26.8 + 1.34 = 5520.8 + 1.34 = 5522.14");
  CHECK(generate_response(expr_of({"123", "2"}, {OperatorKind::Div})).text() ==
        "123 / 2 = 61.5");
  CHECK(generate_response(
            expr_of({"2", "3", "4"}, {OperatorKind::Add, OperatorKind::Mul}))
            .text() == "2 + 3 * 4 = 2 + 12 = 14");
  CHECK(generate_response(expr_of({"12", "43.5"}, {OperatorKind::Mul})).text() ==
        "12 * 43.5 = 12 * 40 + 12 * 3 + 12 * 0.5 = 480 + 36 + 6 = 516 + 6 = "
        "522");
}

TEST_CASE("place-value expansion stays exact inside a running expression") {
  CoTTrace trace = generate_response(
      expr_of({"2", "12", "43.5", "1"},
              {OperatorKind::Add, OperatorKind::Mul, OperatorKind::Add}));
  CHECK(trace.text() ==
        "2 + 12 * 43.5 + 1 = 2 + 12 * 40 + 12 * 3 + 12 * 0.5 + 1 = "
        "2 + 480 + 36 + 6 + 1 = 2 + 516 + 6 + 1 = 2 + 522 + 1 = 524 + 1 = "
        "525");
  CHECK(oracle::trace_valid(trace.text()));
}

TEST_CASE("adjacent multiplications resolve directly, never inlining a sum") {
  CoTTrace trace = generate_response(
      expr_of({"12", "43.5", "21"}, {OperatorKind::Mul, OperatorKind::Mul}));
  // Expanding 12 * 43.5 in front of "* 21" would change the value under
  // precedence; the first hop must come out direct.
  CHECK(trace.steps[1] == "522 * 21");
  CHECK(oracle::trace_valid(trace.text()));
}

TEST_CASE("generate_expression respects the profile") {
  DifficultyProfile profile{2, 4, ValueType::Mixed, OpClass::AddSub};
  Rng rng(7);
  Expression e = generate_expression(profile, rng);
  CHECK(e.hops() == 2);
  CHECK(e.operands.size() == 3);
  for (OperatorKind op : e.operators) {
    CHECK((op == OperatorKind::Add || op == OperatorKind::Sub));
  }
  for (const Decimal& n : e.operands) {
    CHECK(n.significant_digits() <= 4);
  }

  Rng rng_a(55), rng_b(55);
  Expression a = generate_expression(profile, rng_a);
  Expression b = generate_expression(profile, rng_b);
  CHECK(render(a) == render(b));
}

TEST_CASE("class constraints on operands") {
  Rng rng(11);
  for (int i = 0; i < 50; ++i) {
    DifficultyProfile smul{3, 5, ValueType::Mixed, OpClass::SMul};
    Expression e = generate_expression(smul, rng);
    for (std::size_t h = 0; h < e.operators.size(); ++h) {
      CHECK(e.operators[h] == OperatorKind::Mul);
      CHECK(e.operands[h + 1].significant_digits() == 1);
    }

    DifficultyProfile sdiv{2, 3, ValueType::Integer, OpClass::SDiv};
    Expression d = generate_expression(sdiv, rng);
    for (std::size_t h = 0; h < d.operators.size(); ++h) {
      CHECK(d.operators[h] == OperatorKind::Div);
      Decimal divisor = d.operands[h + 1];
      bool in_pool = false;
      for (int p : simple_divisor_pool()) {
        if (divisor == Decimal::from_int(p)) in_pool = true;
      }
      CHECK(in_pool);
    }

    DifficultyProfile mixmul{4, 2, ValueType::Mixed, OpClass::MixMul};
    Expression m = generate_expression(mixmul, rng);
    bool has_mul = false;
    for (OperatorKind op : m.operators) {
      CHECK(op != OperatorKind::Div);
      if (op == OperatorKind::Mul) has_mul = true;
    }
    CHECK(has_mul);

    DifficultyProfile mixall{4, 2, ValueType::Float, OpClass::MixAll};
    Expression x = generate_expression(mixall, rng);
    bool has_div = false;
    for (OperatorKind op : x.operators) {
      if (op == OperatorKind::Div) has_div = true;
    }
    CHECK(has_div);
  }
}

TEST_CASE("value types shape the operands") {
  Rng rng(13);
  DifficultyProfile ints{2, 3, ValueType::Integer, OpClass::AddSub};
  DifficultyProfile floats{2, 3, ValueType::Float, OpClass::AddSub};
  for (int i = 0; i < 30; ++i) {
    for (const Decimal& n : generate_expression(ints, rng).operands) {
      CHECK(n.scale() == 0);
    }
    for (const Decimal& n : generate_expression(floats, rng).operands) {
      CHECK(n.scale() >= 1);
    }
  }
}

TEST_CASE("infeasible C-Mul cell is rejected") {
  DifficultyProfile p{2, 1, ValueType::Integer, OpClass::CMul};
  CHECK_FALSE(p.feasible());
  Rng rng(1);
  CHECK_THROWS_AS(generate_expression(p, rng), Error);
}

TEST_CASE("C-Mul items hit the exact product") {
  // Final value equals the exact product for random pairs, against the
  // rational oracle.
  Rng rng(17);
  for (int i = 0; i < 10000; ++i) {
    int d = static_cast<int>(rng.range(2, 8));
    Decimal a = random_number(rng, static_cast<int>(rng.range(1, 8)),
                              rng.below(2) == 1);
    Decimal b = random_number(rng, d, rng.below(2) == 1);
    std::string text = one_hop_response(a, OperatorKind::Mul, b);
    oracle::Rat expect = oracle::parse_rat(a.str()) * oracle::parse_rat(b.str());
    std::string last = oracle::split_on(text, " = ").back();
    CHECK(oracle::parse_rat(last) == expect);
    if (b.significant_digits() >= 2) {
      CHECK(oracle::trace_valid(a.str() + " * " + b.str() + " = " + text));
    }
  }
}

TEST_CASE("render_item carries profile metadata and the final value") {
  DifficultyProfile profile{2, 4, ValueType::Mixed, OpClass::CMul};
  JsonRecord rec = generate_arith_item(profile, 99, 0);
  CHECK(rec["task"] == "arith");
  CHECK(rec["meta"]["op_class"] == "C-Mul");
  CHECK(rec["meta"]["hops"] == 2);
  std::string input = rec["input"].get<std::string>();
  std::string output = rec["output"].get<std::string>();
  CHECK(input.substr(input.size() - 2) == " =");
  CHECK(output.rfind(input.substr(0, input.size() - 2), 0) == 0);
  CHECK(oracle::trace_valid(output));
  std::string final_str = oracle::split_on(output, " = ").back();
  CHECK(final_str == rec["meta"]["final"].get<std::string>());
}

TEST_CASE("plan_items covers every feasible cell within one item") {
  ProfileGrid grid;
  auto plan = plan_items(grid, 10000);
  CHECK(plan.size() == 10000);
  std::map<std::string, std::size_t> per_cell;
  for (const auto& p : plan) {
    per_cell[std::to_string(p.hops) + "|" + std::to_string(p.max_sig_digits) +
             "|" + to_string(p.value_type) + "|" + to_string(p.op_class)]++;
  }
  const std::size_t cells = grid.cells().size();
  CHECK(per_cell.size() == cells);
  const double share = 10000.0 / static_cast<double>(cells);
  for (const auto& [key, count] : per_cell) {
    CHECK(static_cast<double>(count) >= share - 1.0);
    CHECK(static_cast<double>(count) <= share + 1.0);
  }

  ProfileGrid weighted = grid;
  weighted.weights["op_class.C-Mul"] = 3.0;
  auto wplan = plan_items(weighted, 5000);
  std::size_t cmul = 0;
  for (const auto& p : wplan) {
    if (p.op_class == OpClass::CMul) ++cmul;
  }
  CHECK(cmul > 5000 / 4);
}

TEST_CASE("items are deterministic in (seed, index, profile)") {
  DifficultyProfile profile{3, 5, ValueType::Mixed, OpClass::MixAll};
  CHECK(generate_arith_item(profile, 7, 123).dump() ==
        generate_arith_item(profile, 7, 123).dump());
  CHECK(generate_arith_item(profile, 7, 123).dump() !=
        generate_arith_item(profile, 8, 123).dump());
}

TEST_CASE("profile grid config parsing") {
  ProfileGrid grid = ProfileGrid::parse(
      "seed = 9\n"
      "hops = 2-3\n"
      "digits = 1,2,8\n"
      "value_types = integer,mixed\n"
      "op_classes = addsub, c-mul\n"
      "weight.digits.8 = 2.5\n");
  CHECK(grid.seed == 9);
  CHECK(grid.hops == std::vector<int>{2, 3});
  CHECK(grid.digits == std::vector<int>{1, 2, 8});
  CHECK(grid.op_classes.size() == 2);
  // C-Mul at one significant digit drops out as infeasible.
  CHECK(grid.cells().size() == 2 * 3 * 2 * 2 - 2 * 2);
  CHECK(grid.cell_weight({2, 8, ValueType::Integer, OpClass::AddSub}) == 2.5);
}
