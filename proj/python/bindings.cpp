#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <json.hpp>

#include "mwpkit/arith_gen.hpp"
#include "mwpkit/augmenter.hpp"
#include "mwpkit/composer.hpp"
#include "mwpkit/curriculum.hpp"
#include "mwpkit/evaluator.hpp"
#include "mwpkit/unit_kb.hpp"

namespace py = pybind11;
using namespace mwpkit;

namespace {

py::object json_to_py(const JsonRecord& j) {
  switch (j.type()) {
    case nlohmann::detail::value_t::null: return py::none();
    case nlohmann::detail::value_t::boolean: return py::bool_(j.get<bool>());
    case nlohmann::detail::value_t::number_integer:
      return py::int_(j.get<std::int64_t>());
    case nlohmann::detail::value_t::number_unsigned:
      return py::int_(j.get<std::uint64_t>());
    case nlohmann::detail::value_t::number_float:
      return py::float_(j.get<double>());
    case nlohmann::detail::value_t::string:
      return py::str(j.get<std::string>());
    case nlohmann::detail::value_t::array: {
      py::list out;
      for (const auto& child : j) out.append(json_to_py(child));
      return out;
    }
    case nlohmann::detail::value_t::object: {
      py::dict out;
      for (auto it = j.begin(); it != j.end(); ++it) {
        out[py::str(it.key())] = json_to_py(it.value());
      }
      return out;
    }
    default: return py::none();
  }
}

JsonRecord py_to_json(const py::handle& obj) {
  if (obj.is_none()) return nullptr;
  if (py::isinstance<py::bool_>(obj)) return obj.cast<bool>();
  if (py::isinstance<py::int_>(obj)) return obj.cast<std::int64_t>();
  if (py::isinstance<py::float_>(obj)) return obj.cast<double>();
  if (py::isinstance<py::str>(obj)) return obj.cast<std::string>();
  if (py::isinstance<py::dict>(obj)) {
    JsonRecord out = JsonRecord::object();
    for (auto item : obj.cast<py::dict>()) {
      out[item.first.cast<std::string>()] = py_to_json(item.second);
    }
    return out;
  }
  if (py::isinstance<py::list>(obj) || py::isinstance<py::tuple>(obj)) {
    JsonRecord out = JsonRecord::array();
    for (auto item : obj.cast<py::sequence>()) out.push_back(py_to_json(item));
    return out;
  }
  throw py::type_error("unsupported value for a JSON record");
}

OperatorKind op_from_symbol(const std::string& symbol) {
  if (symbol == "+") return OperatorKind::Add;
  if (symbol == "-") return OperatorKind::Sub;
  if (symbol == "*") return OperatorKind::Mul;
  if (symbol == "/") return OperatorKind::Div;
  throw Error("unknown operator symbol: " + symbol);
}

MWPItem item_from_py(const py::dict& d) {
  return MWPItem::from_json(py_to_json(d));
}

py::dict item_to_py(const MWPItem& item) {
  return json_to_py(item.to_json()).cast<py::dict>();
}

}  // namespace

PYBIND11_MODULE(_mwpkit, m) {
  m.doc() = "Exact-arithmetic data synthesis and evaluation for math word "
            "problem skill curricula";

  py::register_exception<Error>(m, "MwpkitError");

  // Exact decimal arithmetic on canonical strings.
  m.def("add", [](const std::string& a, const std::string& b) {
    return (Decimal::parse(a) + Decimal::parse(b)).str();
  });
  m.def("sub", [](const std::string& a, const std::string& b) {
    return (Decimal::parse(a) - Decimal::parse(b)).str();
  });
  m.def("mul", [](const std::string& a, const std::string& b) {
    return (Decimal::parse(a) * Decimal::parse(b)).str();
  });
  m.def("div_rounded", [](const std::string& a, const std::string& b) {
    return Decimal::div_rounded(Decimal::parse(a), Decimal::parse(b)).str();
  });
  m.def("significant_digits", [](const std::string& a) {
    return Decimal::parse(a).significant_digits();
  });
  m.def("split_place_values", [](const std::string& a) {
    std::vector<std::string> out;
    for (const Decimal& term : Decimal::parse(a).split_place_values()) {
      out.push_back(term.str());
    }
    return out;
  });
  m.def("parse_number", [](const std::string& s) {
    return Decimal::parse(s).str();
  });

  // Step-wise response generation.
  m.def(
      "one_hop_response",
      [](const std::string& n0, const std::string& op, const std::string& n1) {
        return one_hop_response(Decimal::parse(n0), op_from_symbol(op),
                                Decimal::parse(n1));
      },
      py::arg("n0"), py::arg("op"), py::arg("n1"));
  m.def("generate_response", [](const std::string& expression) {
    return generate_response(parse_expression(expression)).text();
  });
  m.def("eval_expression", [](const std::string& expression) {
    return eval_expression(parse_expression(expression)).str();
  });

  m.def(
      "gen_arith",
      [](std::size_t n, std::uint64_t seed, const std::string& profile) {
        ProfileGrid grid =
            profile.empty() ? ProfileGrid() : ProfileGrid::parse(profile);
        auto plan = plan_items(grid, n);
        py::list out;
        for (std::size_t k = 0; k < plan.size(); ++k) {
          out.append(json_to_py(generate_arith_item(plan[k], seed, k)));
        }
        return out;
      },
      py::arg("n"), py::arg("seed"), py::arg("profile") = "",
      "Arithmetic items over the difficulty grid; profile is the config "
      "text, empty for the full default grid.");

  py::class_<UnitKb>(m, "UnitKb")
      .def_static("load", &UnitKb::load, py::arg("path"))
      .def_static("parse",
                  [](const std::string& text) { return UnitKb::parse(text); })
      .def("units",
           [](const UnitKb& kb) {
             py::list out;
             for (const UnitEntry& u : kb.units()) {
               py::dict d;
               d["kind"] = to_string(u.kind);
               d["name"] = u.name;
               d["plural"] = u.plural;
               d["aliases"] = u.aliases;
               d["factor_to_base"] = rational_str(u.factor_to_base);
               out.append(std::move(d));
             }
             return out;
           })
      .def("conversion_ratio",
           [](const UnitKb& kb, const std::string& u0, const std::string& u1) {
             const UnitEntry* a = kb.find(u0);
             const UnitEntry* b = kb.find(u1);
             if (!a || !b) throw Error("unknown unit");
             return rational_str(conversion_ratio(*a, *b));
           })
      .def("convert",
           [](const UnitKb& kb, const std::string& q, const std::string& u0,
              const std::string& u1) {
             const UnitEntry* a = kb.find(u0);
             const UnitEntry* b = kb.find(u1);
             if (!a || !b) throw Error("unknown unit");
             return convert_quantity(Decimal::parse(q), *a, *b).str();
           });

  m.def(
      "gen_unit",
      [](std::size_t n, std::uint64_t seed, const UnitKb& kb,
         bool number_words) {
        UnitGenOptions opts;
        opts.number_words = number_words;
        py::list out;
        for (std::size_t k = 0; k < n; ++k) {
          Rng rng = Rng::for_item(seed, k);
          out.append(json_to_py(generate_conversion_item(rng, kb, opts)));
        }
        return out;
      },
      py::arg("n"), py::arg("seed"), py::arg("kb"),
      py::arg("number_words") = false);

  m.def(
      "extract_segments",
      [](const std::string& text, const UnitKb& kb, bool lenient) {
        py::list out;
        for (const SkillSegment& seg : extract_segments(
                 text, kb,
                 lenient ? ExtractMode::Lenient : ExtractMode::Strict)) {
          py::dict d;
          d["kind"] =
              seg.kind == SegmentKind::ArithChain ? "arith" : "unit";
          d["span"] = py::make_tuple(seg.span.begin, seg.span.end);
          d["surface"] = seg.surface;
          d["verified"] = seg.verified;
          if (seg.kind == SegmentKind::ArithChain) {
            d["value"] = eval_expression(seg.sides.front().expr).str();
          }
          out.append(std::move(d));
        }
        return out;
      },
      py::arg("text"), py::arg("kb"), py::arg("lenient") = false);

  m.def(
      "compose_item",
      [](const py::dict& item, const UnitKb& kb, bool correct_noise) {
        ComposePolicy policy;
        policy.correct_noise = correct_noise;
        ComposeOutcome outcome =
            compose_with_policy(item_from_py(item), kb, policy);
        py::dict out;
        if (outcome.result) {
          out["item"] = item_to_py(outcome.result->item);
          out["corrections"] = outcome.corrections;
        } else {
          out["skipped"] = outcome.skip_reason;
        }
        return out;
      },
      py::arg("item"), py::arg("kb"), py::arg("correct_noise") = true);

  m.def(
      "amplify_item",
      [](const py::dict& item, std::uint64_t seed, int max_digits,
         bool protect_counts) {
        MWPItem mwp = item_from_py(item);
        UnitKb kb = UnitKb::parse("unitkb 1\nlength | meter | meters | m | 1\n");
        ComputationMap map = extract_mapping(mwp, kb);
        AmplifyOptions opts;
        opts.max_sig_digits = max_digits;
        opts.protect_count_nouns = protect_counts;
        Rng rng(seed);
        AmplifyResult result = amplify(mwp, map, opts, rng);
        py::dict out;
        out["item"] = item_to_py(result.item);
        out["provenance"] = json_to_py(result.provenance);
        return out;
      },
      py::arg("item"), py::arg("seed"), py::arg("max_digits") = 8,
      py::arg("protect_counts") = true);

  m.def(
      "augment_units_item",
      [](const py::dict& item, const UnitKb& kb, std::uint64_t seed) {
        Rng rng(seed);
        UnitAugmentResult result = augment_units(item_from_py(item), kb, rng);
        py::dict out;
        out["item"] = item_to_py(result.item);
        out["unit_found"] = result.unit_found;
        out["provenance"] = json_to_py(result.provenance);
        return out;
      },
      py::arg("item"), py::arg("kb"), py::arg("seed"));

  m.def("extract_final_answer", [](const std::string& response) -> py::object {
    auto v = extract_final_answer(response);
    return v ? py::cast(v->str()) : py::none();
  });
  m.def("score_answer", [](const std::string& pred, const std::string& gold) {
    return score_answer(Decimal::parse(pred), Decimal::parse(gold));
  });
  m.def("detect_cot_integration",
        [](const std::string& response, const UnitKb& kb) {
          return detect_cot_integration(response, kb);
        });
  m.def("categorize",
        [](const std::string& response, const std::string& gold,
           const UnitKb& kb) {
          return to_string(categorize(response, Decimal::parse(gold), kb));
        });

  m.def(
      "evaluate",
      [](const py::list& gold, const py::list& predictions, const UnitKb& kb) {
        std::vector<MWPItem> gold_items;
        for (auto item : gold) {
          gold_items.push_back(item_from_py(item.cast<py::dict>()));
        }
        std::vector<JsonRecord> preds;
        for (auto p : predictions) preds.push_back(py_to_json(p));
        EvalReport report = evaluate(gold_items, preds, kb);
        JsonRecord full = report.to_json();
        JsonRecord verdicts = JsonRecord::array();
        for (const JsonRecord& v : report.verdicts) verdicts.push_back(v);
        full["verdicts"] = std::move(verdicts);
        return json_to_py(full);
      },
      py::arg("gold"), py::arg("predictions"), py::arg("kb"));

  m.def(
      "build_skill_training",
      [](const std::string& spec_text, const py::dict& sources,
         const py::list& replay) {
        MixSpec spec = MixSpec::parse(spec_text);
        std::map<std::string, std::vector<JsonRecord>> skill_sources;
        for (auto entry : sources) {
          std::vector<JsonRecord> records;
          for (auto rec : entry.second.cast<py::list>()) {
            records.push_back(py_to_json(rec));
          }
          skill_sources[entry.first.cast<std::string>()] = std::move(records);
        }
        std::vector<MWPItem> replay_items;
        for (auto item : replay) {
          replay_items.push_back(item_from_py(item.cast<py::dict>()));
        }
        py::list out;
        for (const JsonRecord& rec :
             build_skill_training(spec, skill_sources, replay_items)) {
          out.append(json_to_py(rec));
        }
        return out;
      },
      py::arg("spec"), py::arg("sources"), py::arg("replay"));

  m.def("number_to_words", &number_to_words);
}
