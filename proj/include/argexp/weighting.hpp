#pragma once

#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <string_view>

#include "argexp/tensor.hpp"

namespace argexp {

enum class LogBase { natural, two };

std::string_view to_string(LogBase base);
std::optional<LogBase> parse_log_base(std::string_view text);

/// N * P(t) * P(r) * P(f) with probabilities taken from the tensor
/// marginals. Throws UndefinedModelError on an empty tensor.
double expected_count(const CooccurrenceTensor& tensor, std::string_view target,
                      std::string_view relation, std::string_view filler);

/// log(O / E) * O, with LMI(0, E) = 0. Throws ConsistencyError for negative
/// inputs or O > 0 with E = 0.
double lmi(double observed, double expected, LogBase base = LogBase::natural);

struct WeightingProvenance {
  std::uint64_t source_hash = 0;
  LogBase base = LogBase::natural;
  std::string collapse = "none";  // description of any relation collapse upstream
};

/// PLMI scores; every stored score is strictly positive.
class WeightedTensor {
 public:
  using Scores = std::map<Triple, double, TripleLess>;

  WeightedTensor() = default;
  WeightedTensor(Scores scores, WeightingProvenance provenance)
      : scores_(std::move(scores)), provenance_(std::move(provenance)) {}

  const Scores& scores() const noexcept { return scores_; }
  const WeightingProvenance& provenance() const noexcept { return provenance_; }
  std::size_t size() const noexcept { return scores_.size(); }
  double score(std::string_view target, std::string_view relation, std::string_view filler) const;

  /// `target\trelation\tfiller\tscore` with 17 significant digits.
  void write_tsv(std::ostream& out) const;
  std::string to_tsv() const;
  static WeightedTensor read_tsv(std::istream& in, WeightingProvenance provenance);

  bool operator==(const WeightedTensor& other) const { return scores_ == other.scores_; }

 private:
  Scores scores_;
  WeightingProvenance provenance_;
};

/// Serial reference: PLMI for every entry, dropping scores <= 0.
WeightedTensor weight_tensor(const CooccurrenceTensor& tensor, LogBase base = LogBase::natural);

/// OpenMP kernel over entries; bit-identical to weight_tensor.
WeightedTensor weight_tensor_parallel(const CooccurrenceTensor& tensor,
                                      LogBase base = LogBase::natural);

using RelationSet = std::set<std::string, std::less<>>;

/// Non-inverse dependency relations of the tensor, excluding VERB and the
/// pseudo-relations WINDOW / ARG / ARG_inv.
RelationSet argument_relations(const CooccurrenceTensor& tensor);
/// Inverse counterparts: every `*_inv` relation except VERB_inv and ARG_inv.
RelationSet inverse_argument_relations(const CooccurrenceTensor& tensor);

/// Sums counts over the relations in `relations` (default: argument_relations)
/// into the single pseudo-relation `pseudo`. Marginals are recomputed.
CooccurrenceTensor collapse_relations(const CooccurrenceTensor& tensor,
                                      const std::optional<RelationSet>& relations = std::nullopt,
                                      std::string_view pseudo = "ARG");

/// Alternative relation-blind typicality: for each (t, f), the maximum PLMI
/// over the given relations, stored under `pseudo`.
WeightedTensor max_relation_plmi(const WeightedTensor& weighted, const RelationSet& relations,
                                 std::string_view pseudo = "ARG");

/// Shortest decimal form that round-trips a double (17 significant digits).
std::string format_score(double value);
double parse_score(std::string_view text);

}  // namespace argexp
