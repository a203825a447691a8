#pragma once

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "argexp/space.hpp"
#include "argexp/sparse_vector.hpp"

namespace argexp {

enum class ModelKind { deps, boa, bow };
enum class Composition { sum, mult };

std::string_view to_string(ModelKind kind);
std::string_view to_string(Composition op);
std::optional<ModelKind> parse_model_kind(std::string_view text);
std::optional<Composition> parse_composition(std::string_view text);

struct ModelVariant {
  ModelKind kind = ModelKind::deps;
  std::size_t k = 20;
  Composition op = Composition::sum;

  /// e.g. `DEPS-SUM`
  std::string label() const;
  /// Parses `KIND-OP`; k is supplied separately.
  static std::optional<ModelVariant> parse(std::string_view label, std::size_t k);
};

/// The k grid used for replication runs.
inline constexpr std::size_t kReplicationK[] = {10, 20, 30, 40, 50};
bool is_replication_k(std::size_t k);

struct SlotQuery {
  std::string input;
  std::string slot;

  bool operator==(const SlotQuery&) const = default;
};

/// Throws QueryError unless the slot is resolvable for the model kind:
/// DEPS takes dependency relations (including inverses and VERB), BOA takes
/// ARG or ARG_inv, BOW takes WINDOW.
void validate_slot(ModelKind kind, std::string_view slot);

enum class BoaVectors { dependency, window };

/// The dependency and window spaces. Filler selection and vector lookup may
/// use different spaces (BOA selects on the ARG index of the dependency
/// space, and by default also takes its vectors from there).
struct ModelSpaces {
  const WeightedSpace* dependency = nullptr;
  const WeightedSpace* window = nullptr;
  BoaVectors boa_vectors = BoaVectors::dependency;

  const WeightedSpace& index_space(ModelKind kind) const;
  const WeightedSpace& vector_space(ModelKind kind) const;
};

struct FillerContribution {
  std::string filler;
  std::size_t rank;   // 1-based
  double typicality;  // PLMI used for ranking
};

/// Expectation vector for a slot. Leaves record the fillers they summed;
/// composed prototypes record both parents and the operation.
struct Prototype {
  SparseVector vector;
  std::string space_id;
  std::vector<FillerContribution> fillers;
  std::vector<SlotQuery> queries;
  std::optional<Composition> op;
  std::shared_ptr<const Prototype> left;
  std::shared_ptr<const Prototype> right;
};

/// Unweighted sum of the vectors of the top-k fillers of (input, slot).
/// Throws OutOfVocabularyError or EmptyPrototypeError.
Prototype build_prototype(const ModelSpaces& spaces, const ModelVariant& variant,
                          const SlotQuery& query);

/// SUM keeps the union of supports, MULT the intersection. Throws
/// SpaceMismatchError when the prototypes live in different spaces.
Prototype compose(const Prototype& left, const Prototype& right, Composition op);

/// Cosine between the candidate's vector and the prototype.
Similarity score_filler(const WeightedSpace& vectors, const Prototype& prototype,
                        std::string_view candidate);

/// Rebuilds the vector from provenance alone.
SparseVector recompute(const WeightedSpace& vectors, const Prototype& prototype);

struct ExpectationResult {
  Similarity score;
  std::vector<std::size_t> prototype_sizes;  // nonzero dims per input prototype
  std::vector<std::size_t> fillers_used;     // per input
  std::size_t composed_size = 0;
};

/// Builds one prototype per input, left-folds them with the variant's
/// composition, and scores the candidate against the result.
ExpectationResult expectation_update(const ModelSpaces& spaces, const ModelVariant& variant,
                                     std::span<const SlotQuery> inputs, std::string_view candidate);

}  // namespace argexp
