#include "mwpkit/arith_gen.hpp"

#include <algorithm>
#include <cmath>

namespace mwpkit {

std::string to_string(OpClass c) {
  switch (c) {
    case OpClass::AddSub: return "AddSub";
    case OpClass::SMul: return "S-Mul";
    case OpClass::CMul: return "C-Mul";
    case OpClass::SDiv: return "S-Div";
    case OpClass::MixMul: return "MixMul";
    case OpClass::MixAll: return "MixAll";
  }
  return "?";
}

OpClass op_class_from_string(std::string_view s) {
  std::string key(s);
  std::transform(key.begin(), key.end(), key.begin(), [](unsigned char c) {
    return static_cast<char>(std::tolower(c));
  });
  key.erase(std::remove(key.begin(), key.end(), '-'), key.end());
  if (key == "addsub") return OpClass::AddSub;
  if (key == "smul") return OpClass::SMul;
  if (key == "cmul") return OpClass::CMul;
  if (key == "sdiv") return OpClass::SDiv;
  if (key == "mixmul") return OpClass::MixMul;
  if (key == "mixall") return OpClass::MixAll;
  throw Error("unknown op class: " + std::string(s));
}

const std::vector<int>& simple_divisor_pool() {
  static const std::vector<int> pool = {2, 3, 4, 5, 6, 7, 8, 9, 10, 100, 1000};
  return pool;
}

void DifficultyProfile::validate() const {
  if (hops < 2 || hops > 5) {
    throw Error("profile hops must be in [2,5], got " + std::to_string(hops));
  }
  if (max_sig_digits < 1 || max_sig_digits > 8) {
    throw Error("profile max_sig_digits must be in [1,8], got " +
                std::to_string(max_sig_digits));
  }
}

bool DifficultyProfile::feasible() const {
  return !(op_class == OpClass::CMul && max_sig_digits < 2);
}

Decimal random_number(Rng& rng, int sig_digits, bool as_float) {
  std::string core(static_cast<std::size_t>(sig_digits), '0');
  core.front() = static_cast<char>('1' + rng.below(9));
  for (int i = 1; i < sig_digits - 1; ++i) {
    core[static_cast<std::size_t>(i)] = static_cast<char>('0' + rng.below(10));
  }
  if (sig_digits >= 2) core.back() = static_cast<char>('1' + rng.below(9));
  Decimal value = Decimal::parse(core);
  if (as_float) {
    return value.shifted(
        -static_cast<std::int32_t>(rng.range(1, sig_digits + 1)));
  }
  return value.shifted(static_cast<std::int32_t>(rng.range(0, 1)));
}

namespace {

bool draw_float(ValueType vt, Rng& rng) {
  switch (vt) {
    case ValueType::Integer: return false;
    case ValueType::Float: return true;
    case ValueType::Mixed: return rng.below(2) == 1;
  }
  return false;
}

std::vector<OperatorKind> draw_operators(const DifficultyProfile& p,
                                         Rng& rng) {
  const std::size_t h = static_cast<std::size_t>(p.hops);
  std::vector<OperatorKind> ops(h);
  auto fill_from = [&](const std::vector<OperatorKind>& pool,
                       OperatorKind required) {
    for (int attempt = 0; attempt < 100; ++attempt) {
      for (auto& op : ops) op = pool[rng.below(pool.size())];
      if (std::find(ops.begin(), ops.end(), required) != ops.end()) return;
    }
    ops[rng.below(ops.size())] = required;
  };
  switch (p.op_class) {
    case OpClass::AddSub:
      for (auto& op : ops) {
        op = rng.below(2) == 0 ? OperatorKind::Add : OperatorKind::Sub;
      }
      break;
    case OpClass::SMul:
    case OpClass::CMul:
      std::fill(ops.begin(), ops.end(), OperatorKind::Mul);
      break;
    case OpClass::SDiv:
      std::fill(ops.begin(), ops.end(), OperatorKind::Div);
      break;
    case OpClass::MixMul:
      fill_from({OperatorKind::Add, OperatorKind::Sub, OperatorKind::Mul},
                OperatorKind::Mul);
      break;
    case OpClass::MixAll:
      fill_from({OperatorKind::Add, OperatorKind::Sub, OperatorKind::Mul,
                 OperatorKind::Div},
                OperatorKind::Div);
      break;
  }
  return ops;
}

}  // namespace

Expression generate_expression(const DifficultyProfile& profile, Rng& rng) {
  profile.validate();
  if (!profile.feasible()) {
    throw Error("infeasible profile: C-Mul needs max_sig_digits >= 2");
  }
  const int d = profile.max_sig_digits;
  for (int attempt = 0; attempt < 100; ++attempt) {
    Expression expr;
    expr.operators = draw_operators(profile, rng);
    expr.operands.push_back(
        random_number(rng, d, draw_float(profile.value_type, rng)));
    for (OperatorKind op : expr.operators) {
      switch (op) {
        case OperatorKind::Div: {
          const auto& pool = simple_divisor_pool();
          expr.operands.push_back(
              Decimal::from_int(pool[rng.below(pool.size())]));
          break;
        }
        case OperatorKind::Mul: {
          int sig = profile.op_class == OpClass::SMul ? 1 : d;
          expr.operands.push_back(
              random_number(rng, sig, draw_float(profile.value_type, rng)));
          break;
        }
        default:
          expr.operands.push_back(
              random_number(rng, d, draw_float(profile.value_type, rng)));
      }
    }
    if (evaluable(expr)) return expr;
  }
  throw Error("could not generate an evaluable expression");
}

namespace {

std::string join_plus(const std::vector<std::string>& parts) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += " + ";
    out += parts[i];
  }
  return out;
}

/// Stages of a place-value multiplication, first the split terms, then the
/// per-term products, then each running-sum state down to a single value.
std::vector<std::string> place_value_stages(const Decimal& n0,
                                            const Decimal& n1) {
  std::vector<Decimal> places = n1.split_place_values();
  std::vector<std::string> split_terms;
  std::vector<Decimal> products;
  for (const Decimal& w : places) {
    split_terms.push_back(n0.str() + " * " + w.str());
    products.push_back(n0 * w);
  }
  std::vector<std::string> stages;
  stages.push_back(join_plus(split_terms));
  auto render_products = [&] {
    std::vector<std::string> parts;
    parts.reserve(products.size());
    for (const Decimal& p : products) parts.push_back(p.str());
    return join_plus(parts);
  };
  stages.push_back(render_products());
  while (products.size() > 1) {
    products[0] = products[0] + products[1];
    products.erase(products.begin() + 1);
    stages.push_back(render_products());
  }
  return stages;
}

}  // namespace

std::string one_hop_response(const Decimal& n0, OperatorKind op,
                             const Decimal& n1, HopStyle style) {
  if (op == OperatorKind::Div && n1.is_zero()) throw DivisionByZero();
  bool place_value =
      op == OperatorKind::Mul &&
      (style == HopStyle::PlaceValue ||
       (style == HopStyle::Auto && !n1.is_negative() && !n1.is_zero() &&
        n1.significant_digits() >= 2));
  if (!place_value) return apply(op, n0, n1).str();
  std::vector<std::string> stages = place_value_stages(n0, n1);
  std::string out;
  for (std::size_t i = 0; i < stages.size(); ++i) {
    if (i) out += " = ";
    out += stages[i];
  }
  return out;
}

std::string CoTTrace::text() const {
  std::string out;
  for (std::size_t i = 0; i < steps.size(); ++i) {
    if (i) out += " = ";
    out += steps[i];
  }
  return out;
}

CoTTrace generate_response(const Expression& expr) {
  if (!expr.well_formed()) throw Error("malformed expression");
  CoTTrace trace;
  trace.steps.push_back(render(expr));
  Expression cur = expr;
  while (!cur.operators.empty()) {
    const std::size_t hop = next_hop(cur);
    const OperatorKind op = cur.operators[hop];
    const Decimal& a = cur.operands[hop];
    const Decimal& b = cur.operands[hop + 1];
    // A sum inlined left of a * or / would re-associate under precedence,
    // so those hops resolve directly.
    bool safe_right = hop + 1 >= cur.operators.size() ||
                      cur.operators[hop + 1] == OperatorKind::Add ||
                      cur.operators[hop + 1] == OperatorKind::Sub;
    bool expand = op == OperatorKind::Mul && safe_right && !b.is_negative() &&
                  !b.is_zero() && b.significant_digits() >= 2;
    if (expand) {
      std::string prefix, suffix;
      for (std::size_t i = 0; i < hop; ++i) {
        prefix += cur.operands[i].str();
        prefix += ' ';
        prefix += to_symbol(cur.operators[i]);
        prefix += ' ';
      }
      for (std::size_t i = hop + 1; i < cur.operators.size(); ++i) {
        suffix += ' ';
        suffix += to_symbol(cur.operators[i]);
        suffix += ' ';
        suffix += cur.operands[i + 1].str();
      }
      std::vector<std::string> stages = place_value_stages(a, b);
      stages.pop_back();  // the single-value stage equals the resolved render
      for (const std::string& stage : stages) {
        trace.steps.push_back(prefix + stage + suffix);
      }
    }
    Decimal value = apply(op, a, b);
    cur.operands[hop] = std::move(value);
    cur.operands.erase(cur.operands.begin() +
                       static_cast<std::ptrdiff_t>(hop) + 1);
    cur.operators.erase(cur.operators.begin() +
                        static_cast<std::ptrdiff_t>(hop));
    trace.steps.push_back(render(cur));
  }
  trace.final = cur.operands.front();
  return trace;
}

JsonRecord render_item(const Expression& expr, const CoTTrace& trace,
                       const DifficultyProfile& profile) {
  JsonRecord meta;
  meta["hops"] = profile.hops;
  meta["max_sig_digits"] = profile.max_sig_digits;
  meta["value_type"] = to_string(profile.value_type);
  meta["op_class"] = to_string(profile.op_class);
  meta["final"] = trace.final.str();
  JsonRecord rec;
  rec["task"] = "arith";
  rec["input"] = render(expr) + " =";
  rec["output"] = trace.text();
  rec["meta"] = std::move(meta);
  return rec;
}

ProfileGrid ProfileGrid::parse(std::string_view text) {
  KeyValueConfig cfg = KeyValueConfig::parse(text);
  ProfileGrid grid;
  if (cfg.has("hops")) grid.hops = cfg.get_int_list("hops");
  if (cfg.has("digits")) grid.digits = cfg.get_int_list("digits");
  if (cfg.has("value_types")) {
    grid.value_types.clear();
    for (const auto& name : cfg.get_list("value_types")) {
      grid.value_types.push_back(value_type_from_string(name));
    }
  }
  if (cfg.has("op_classes")) {
    grid.op_classes.clear();
    for (const auto& name : cfg.get_list("op_classes")) {
      grid.op_classes.push_back(op_class_from_string(name));
    }
  }
  if (cfg.has("seed")) {
    grid.has_seed = true;
    grid.seed = static_cast<std::uint64_t>(cfg.get_int("seed"));
  }
  for (const auto& [key, value] : cfg.entries()) {
    if (key.rfind("weight.", 0) == 0) {
      double w = cfg.get_double(key);
      if (w < 0) throw Error("negative weight: " + key);
      grid.weights[key.substr(7)] = w;
    }
  }
  if (grid.hops.empty() || grid.digits.empty() || grid.value_types.empty() ||
      grid.op_classes.empty()) {
    throw Error("profile grid has an empty axis");
  }
  return grid;
}

ProfileGrid ProfileGrid::load(const std::string& path) {
  return parse(read_file(path));
}

std::vector<DifficultyProfile> ProfileGrid::cells() const {
  std::vector<DifficultyProfile> out;
  for (int h : hops) {
    for (int d : digits) {
      for (ValueType vt : value_types) {
        for (OpClass oc : op_classes) {
          DifficultyProfile cell{h, d, vt, oc};
          cell.validate();
          if (cell.feasible()) out.push_back(cell);
        }
      }
    }
  }
  return out;
}

double ProfileGrid::cell_weight(const DifficultyProfile& cell) const {
  auto lookup = [&](const std::string& key) {
    auto it = weights.find(key);
    return it == weights.end() ? 1.0 : it->second;
  };
  return lookup("hops." + std::to_string(cell.hops)) *
         lookup("digits." + std::to_string(cell.max_sig_digits)) *
         lookup("value_type." + to_string(cell.value_type)) *
         lookup("op_class." + to_string(cell.op_class));
}

std::vector<DifficultyProfile> plan_items(const ProfileGrid& grid,
                                          std::size_t n) {
  std::vector<DifficultyProfile> cells = grid.cells();
  if (cells.empty()) throw Error("profile grid has no feasible cells");
  std::vector<double> weight(cells.size());
  double total = 0;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    weight[i] = grid.cell_weight(cells[i]);
    total += weight[i];
  }
  if (total <= 0) throw Error("profile grid weights sum to zero");

  std::vector<std::size_t> count(cells.size(), 0);
  std::vector<std::pair<double, std::size_t>> remainder(cells.size());
  std::size_t assigned = 0;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    double share = static_cast<double>(n) * weight[i] / total;
    count[i] = static_cast<std::size_t>(std::floor(share));
    assigned += count[i];
    remainder[i] = {share - std::floor(share), i};
  }
  // Ties spread across the grid (hashed order) so small datasets still
  // cover every axis instead of filling cells in canonical order.
  std::stable_sort(remainder.begin(), remainder.end(),
                   [](const auto& a, const auto& b) {
                     if (a.first != b.first) return a.first > b.first;
                     return splitmix64(a.second) < splitmix64(b.second);
                   });
  for (std::size_t k = 0; assigned < n; ++k) {
    ++count[remainder[k % remainder.size()].second];
    ++assigned;
  }

  std::vector<DifficultyProfile> plan;
  plan.reserve(n);
  for (std::size_t i = 0; i < cells.size(); ++i) {
    plan.insert(plan.end(), count[i], cells[i]);
  }
  return plan;
}

JsonRecord generate_arith_item(const DifficultyProfile& profile,
                               std::uint64_t seed, std::uint64_t index) {
  Rng rng = Rng::for_item(seed, index);
  Expression expr = generate_expression(profile, rng);
  CoTTrace trace = generate_response(expr);
  return render_item(expr, trace, profile);
}

}  // namespace mwpkit
