#include "argexp/expectation.hpp"

#include <algorithm>

#include "argexp/errors.hpp"
#include "argexp/token.hpp"

namespace argexp {

std::string_view to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::deps: return "DEPS";
    case ModelKind::boa: return "BOA";
    case ModelKind::bow: return "BOW";
  }
  return "?";
}

std::string_view to_string(Composition op) { return op == Composition::sum ? "SUM" : "MULT"; }

std::optional<ModelKind> parse_model_kind(std::string_view text) {
  if (text == "DEPS" || text == "deps") return ModelKind::deps;
  if (text == "BOA" || text == "boa") return ModelKind::boa;
  if (text == "BOW" || text == "bow") return ModelKind::bow;
  return std::nullopt;
}

std::optional<Composition> parse_composition(std::string_view text) {
  if (text == "SUM" || text == "sum" || text == "Sum") return Composition::sum;
  if (text == "MULT" || text == "mult" || text == "Mult" || text == "PROD") return Composition::mult;
  return std::nullopt;
}

std::string ModelVariant::label() const {
  return std::string(to_string(kind)) + "-" + std::string(to_string(op));
}

std::optional<ModelVariant> ModelVariant::parse(std::string_view label, std::size_t k) {
  const auto dash = label.find('-');
  if (dash == std::string_view::npos) return std::nullopt;
  const auto kind = parse_model_kind(label.substr(0, dash));
  const auto op = parse_composition(label.substr(dash + 1));
  if (!kind || !op || k == 0) return std::nullopt;
  return ModelVariant{*kind, k, *op};
}

bool is_replication_k(std::size_t k) {
  return std::find(std::begin(kReplicationK), std::end(kReplicationK), k) != std::end(kReplicationK);
}

void validate_slot(ModelKind kind, std::string_view slot) {
  const bool pseudo_arg = slot == kArgRelation || slot == kArgInverseRelation;
  bool ok = false;
  switch (kind) {
    case ModelKind::deps: ok = !slot.empty() && !pseudo_arg && slot != kWindowRelation; break;
    case ModelKind::boa: ok = pseudo_arg; break;
    case ModelKind::bow: ok = slot == kWindowRelation; break;
  }
  if (!ok) {
    throw QueryError("slot '" + std::string(slot) + "' is not resolvable for " +
                     std::string(to_string(kind)));
  }
}

const WeightedSpace& ModelSpaces::index_space(ModelKind kind) const {
  const auto* space = kind == ModelKind::bow ? window : dependency;
  if (!space) throw QueryError(std::string(to_string(kind)) + " needs a space that is not loaded");
  return *space;
}

const WeightedSpace& ModelSpaces::vector_space(ModelKind kind) const {
  const bool use_window =
      kind == ModelKind::bow || (kind == ModelKind::boa && boa_vectors == BoaVectors::window);
  const auto* space = use_window ? window : dependency;
  if (!space) throw QueryError(std::string(to_string(kind)) + " needs a space that is not loaded");
  return *space;
}

Prototype build_prototype(const ModelSpaces& spaces, const ModelVariant& variant,
                          const SlotQuery& query) {
  validate_slot(variant.kind, query.slot);
  const auto& index = spaces.index_space(variant.kind);
  const auto& vectors = spaces.vector_space(variant.kind);
  if (!index.contains(query.input)) throw OutOfVocabularyError(query.input);

  const auto top = index.top_k_fillers(query.input, query.slot, variant.k);
  if (top.fillers.empty()) throw EmptyPrototypeError(query.input, query.slot);

  Prototype prototype;
  prototype.space_id = vectors.id();
  prototype.queries.push_back(query);
  for (std::size_t i = 0; i < top.fillers.size(); ++i) {
    prototype.vector = add(prototype.vector, vectors.vector_of(top.fillers[i]));
    prototype.fillers.push_back({top.fillers[i], i + 1, top.scores[i]});
  }
  return prototype;
}

Prototype compose(const Prototype& left, const Prototype& right, Composition op) {
  if (left.space_id != right.space_id) {
    throw SpaceMismatchError("cannot compose prototypes from spaces " + left.space_id + " and " +
                             right.space_id);
  }
  Prototype out;
  out.vector = op == Composition::sum ? add(left.vector, right.vector) : multiply(left.vector, right.vector);
  out.space_id = left.space_id;
  out.queries = left.queries;
  out.queries.insert(out.queries.end(), right.queries.begin(), right.queries.end());
  out.op = op;
  out.left = std::make_shared<const Prototype>(left);
  out.right = std::make_shared<const Prototype>(right);
  return out;
}

Similarity score_filler(const WeightedSpace& vectors, const Prototype& prototype,
                        std::string_view candidate) {
  if (prototype.space_id != vectors.id()) {
    throw SpaceMismatchError("prototype from space " + prototype.space_id + " scored in " + vectors.id());
  }
  return cosine(vectors.vector_of(candidate), prototype.vector);
}

SparseVector recompute(const WeightedSpace& vectors, const Prototype& prototype) {
  if (prototype.op) {
    const auto left = recompute(vectors, *prototype.left);
    const auto right = recompute(vectors, *prototype.right);
    return *prototype.op == Composition::sum ? add(left, right) : multiply(left, right);
  }
  SparseVector sum;
  for (const auto& filler : prototype.fillers) sum = add(sum, vectors.vector_of(filler.filler));
  return sum;
}

ExpectationResult expectation_update(const ModelSpaces& spaces, const ModelVariant& variant,
                                     std::span<const SlotQuery> inputs, std::string_view candidate) {
  if (inputs.empty()) throw QueryError("expectation update needs at least one input");
  const auto& vectors = spaces.vector_space(variant.kind);
  if (!vectors.contains(candidate)) throw OutOfVocabularyError(std::string(candidate));

  ExpectationResult result;
  std::optional<Prototype> folded;
  for (const auto& query : inputs) {
    auto prototype = build_prototype(spaces, variant, query);
    result.prototype_sizes.push_back(prototype.vector.size());
    result.fillers_used.push_back(prototype.fillers.size());
    folded = folded ? compose(*folded, prototype, variant.op) : std::move(prototype);
  }
  result.composed_size = folded->vector.size();
  result.score = score_filler(vectors, *folded, candidate);
  return result;
}

}  // namespace argexp
