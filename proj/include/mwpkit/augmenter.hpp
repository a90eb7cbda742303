#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mwpkit/composer.hpp"

namespace mwpkit {

/// Where an operand of a recovered expression comes from.
struct OperandRef {
  enum class Source { Question, Intermediate };
  Source source = Source::Question;
  std::size_t index = 0;
};

/// One recovered computation: the defining expression of an intermediate
/// with its operands resolved to question numbers or earlier intermediates.
struct MapNode {
  Expression expr;  // first side of the chain, raw values
  std::vector<OperandRef> operands;
  Decimal value;
};

/// A number occurrence to substitute, tagged with its logical source.
struct TaggedOccurrence {
  ByteSpan span;
  bool in_question = false;
  OperandRef ref;
};

/// Recovered question-to-answer computation structure: evaluating the nodes
/// over the question numbers reproduces every intermediate exactly, and the
/// last intermediate equals the item's final value.
struct ComputationMap {
  std::vector<Decimal> question_numbers;  // N, question order
  std::vector<MapNode> intermediates;     // I, answer order
  std::vector<TaggedOccurrence> occurrences;
  std::vector<bool> count_guard;  // per question number: looks like a count

  /// Recompute every intermediate from the stored expressions and compare.
  bool verifies(const Decimal& final) const;
};

const std::vector<std::string>& default_count_nouns();

/// Recover the map from the item's chains. Throws MappingIncomplete when a
/// number has no recoverable origin (e.g. a constant only the answer knows)
/// and MappingAmbiguous when a value cannot be attributed to a single
/// occurrence.
ComputationMap extract_mapping(const MWPItem& item, const UnitKb& kb);

struct AmplifyOptions {
  int max_sig_digits = 8;
  bool resample = true;             // false: identity configuration
  bool protect_count_nouns = true;  // keep small counts like "3 sprints"
  int max_attempts = 200;
};

struct AmplifyResult {
  MWPItem item;
  JsonRecord provenance;  // {raw_id, N_old, N_new, D, units_swapped}
};

/// Resample the question numbers up to `max_sig_digits` significant digits
/// (digit count uniform in [raw, D], value type preserved), recompute the
/// intermediates through the map, and substitute every tagged occurrence.
/// Divisions must stay clean and all resampled values distinct; bounded
/// retries, then RegenerationFailure.
AmplifyResult amplify(const MWPItem& item, const ComputationMap& map,
                      const AmplifyOptions& opts, Rng& rng);

struct UnitAugmentResult {
  MWPItem item;
  bool unit_found = false;
  bool multi_unit = false;
  std::string u0, u1;
  JsonRecord provenance;
};

/// Swap the target unit of the question (the unit asked for in the final
/// interrogative sentence) for a random same-kind unit, append the
/// conversion sentence to the answer and rescale the final value exactly.
/// Items without a known unit pass through unchanged (unit_found = false).
UnitAugmentResult augment_units(const MWPItem& item, const UnitKb& kb,
                                Rng& rng);

}  // namespace mwpkit
