#include "argexp/counting.hpp"

#include <algorithm>
#include <cstdint>
#include <optional>
#include <unordered_map>
#include <vector>

#include "argexp/errors.hpp"

namespace argexp {

bool RelationFilter::admits(std::string_view relation) const {
  if (deny.contains(relation)) return false;
  return allow.empty() || allow.contains(relation);
}

namespace {

constexpr unsigned kFieldBits = 21;
constexpr std::uint64_t kFieldLimit = std::uint64_t{1} << kFieldBits;

// Counts keyed by packed (target id, relation id, filler id).
class LocalCounts {
 public:
  explicit LocalCounts(const Vocabulary& vocab) : vocab_(vocab) {}

  std::uint32_t relation_id(std::string_view relation) {
    auto it = relation_ids_.find(std::string(relation));
    if (it != relation_ids_.end()) return it->second;
    if (relations_.size() + 1 >= kFieldLimit) throw InputError("too many relation labels");
    const auto id = static_cast<std::uint32_t>(relations_.size());
    relations_.emplace_back(relation);
    relation_ids_.emplace(relations_.back(), id);
    return id;
  }

  void add(std::uint32_t target, std::uint32_t relation, std::uint32_t filler) {
    ++counts_[(std::uint64_t{target} << (2 * kFieldBits)) | (std::uint64_t{relation} << kFieldBits) |
              filler];
  }

  CooccurrenceTensor to_tensor() const {
    std::vector<std::pair<std::uint64_t, std::uint64_t>> sorted(counts_.begin(), counts_.end());
    std::sort(sorted.begin(), sorted.end());
    CooccurrenceTensor tensor;
    const auto& words = vocab_.entries();
    for (const auto& [key, count] : sorted) {
      const auto target = key >> (2 * kFieldBits);
      const auto relation = (key >> kFieldBits) & (kFieldLimit - 1);
      const auto filler = key & (kFieldLimit - 1);
      tensor.add(words[target], relations_[relation], words[filler], count);
    }
    return tensor;
  }

 private:
  const Vocabulary& vocab_;
  std::vector<std::string> relations_;
  std::unordered_map<std::string, std::uint32_t> relation_ids_;
  std::unordered_map<std::uint64_t, std::uint64_t> counts_;
};

void check_vocabulary_size(const Vocabulary& vocab) {
  if (vocab.size() >= kFieldLimit) throw InputError("vocabulary too large for packed counting keys");
}

std::vector<std::optional<std::uint32_t>> vocabulary_ids(const Sentence& sentence,
                                                         const Vocabulary& vocab) {
  std::vector<std::optional<std::uint32_t>> ids(sentence.tokens.size());
  for (std::size_t i = 0; i < ids.size(); ++i) {
    const auto& token = sentence.tokens[i];
    if (token.token) ids[i] = vocab.id_of(token.canonical);
  }
  return ids;
}

void count_sentence_dependencies(const Sentence& sentence, const Vocabulary& vocab,
                                 const CountingOptions& options, LocalCounts& counts) {
  const auto ids = vocabulary_ids(sentence, vocab);
  for (const auto& arc : sentence.arcs) {
    if (!ids[arc.head] || !ids[arc.dependent] || !options.relations.admits(arc.relation)) continue;
    counts.add(*ids[arc.head], counts.relation_id(arc.relation), *ids[arc.dependent]);
    counts.add(*ids[arc.dependent], counts.relation_id(inverse_relation(arc.relation)), *ids[arc.head]);
  }
  if (!options.verb_relation || !options.relations.admits(kVerbRelation)) return;

  // Group in-vocabulary subjects and objects by verb head.
  std::unordered_map<std::uint32_t, std::pair<std::vector<std::uint32_t>, std::vector<std::uint32_t>>>
      by_verb;
  std::vector<std::uint32_t> verb_order;
  for (const auto& arc : sentence.arcs) {
    const auto& head = sentence.tokens[arc.head];
    if (!head.token || head.token->pos() != Pos::verb || !ids[arc.dependent]) continue;
    const bool subject = options.subject_relations.contains(arc.relation);
    const bool object = options.object_relations.contains(arc.relation);
    if (!subject && !object) continue;
    auto [it, inserted] = by_verb.try_emplace(arc.head);
    if (inserted) verb_order.push_back(arc.head);
    if (subject) it->second.first.push_back(*ids[arc.dependent]);
    if (object) it->second.second.push_back(*ids[arc.dependent]);
  }
  if (verb_order.empty()) return;
  const auto verb = counts.relation_id(kVerbRelation);
  const auto verb_inv = counts.relation_id(inverse_relation(kVerbRelation));
  for (const auto head : verb_order) {
    const auto& [subjects, objects] = by_verb[head];
    for (const auto s : subjects) {
      for (const auto o : objects) {
        counts.add(s, verb, o);
        counts.add(o, verb_inv, s);
      }
    }
  }
}

void count_sentence_window(const Sentence& sentence, const Vocabulary& vocab,
                           const CountingOptions& options, LocalCounts& counts) {
  const auto ids = vocabulary_ids(sentence, vocab);
  // (slot, id) for in-vocabulary tokens; slot is the position used for distance.
  std::vector<std::pair<std::size_t, std::uint32_t>> slots;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (!ids[i]) continue;
    const auto slot = options.window_positions == WindowPositions::raw ? i : slots.size();
    slots.emplace_back(slot, *ids[i]);
  }
  const auto window = counts.relation_id(kWindowRelation);
  for (std::size_t a = 0; a < slots.size(); ++a) {
    for (std::size_t b = a + 1; b < slots.size(); ++b) {
      if (slots[b].first - slots[a].first > options.window_width) break;
      counts.add(slots[a].second, window, slots[b].second);
      counts.add(slots[b].second, window, slots[a].second);
    }
  }
}

template <class Kernel>
CooccurrenceTensor count_serial(std::span<const Sentence> corpus, const Vocabulary& vocab,
                                const CountingOptions& options, Kernel kernel) {
  check_vocabulary_size(vocab);
  LocalCounts counts(vocab);
  for (const auto& sentence : corpus) kernel(sentence, vocab, options, counts);
  return counts.to_tensor();
}

template <class Kernel>
CooccurrenceTensor count_sharded(std::span<const Sentence> corpus, const Vocabulary& vocab,
                                 const CountingOptions& options, std::size_t shards, Kernel kernel) {
  check_vocabulary_size(vocab);
  shards = std::max<std::size_t>(1, std::min(shards, std::max<std::size_t>(1, corpus.size())));
  std::vector<CooccurrenceTensor> partial(shards);
  const auto n = static_cast<long>(shards);
#pragma omp parallel for schedule(dynamic, 1)
  for (long s = 0; s < n; ++s) {
    const auto begin = corpus.size() * static_cast<std::size_t>(s) / shards;
    const auto end = corpus.size() * static_cast<std::size_t>(s + 1) / shards;
    LocalCounts counts(vocab);
    for (auto i = begin; i < end; ++i) kernel(corpus[i], vocab, options, counts);
    partial[static_cast<std::size_t>(s)] = counts.to_tensor();
  }
  CooccurrenceTensor merged = std::move(partial.front());
  for (std::size_t s = 1; s < shards; ++s) merged.merge(partial[s]);
  return merged;
}

}  // namespace

CooccurrenceTensor count_dependencies(std::span<const Sentence> corpus, const Vocabulary& vocab,
                                      const CountingOptions& options) {
  return count_serial(corpus, vocab, options, count_sentence_dependencies);
}

CooccurrenceTensor count_window(std::span<const Sentence> corpus, const Vocabulary& vocab,
                                const CountingOptions& options) {
  return count_serial(corpus, vocab, options, count_sentence_window);
}

CooccurrenceTensor count_dependencies_parallel(std::span<const Sentence> corpus,
                                               const Vocabulary& vocab,
                                               const CountingOptions& options, std::size_t shards) {
  return count_sharded(corpus, vocab, options, shards, count_sentence_dependencies);
}

CooccurrenceTensor count_window_parallel(std::span<const Sentence> corpus, const Vocabulary& vocab,
                                         const CountingOptions& options, std::size_t shards) {
  return count_sharded(corpus, vocab, options, shards, count_sentence_window);
}

}  // namespace argexp
