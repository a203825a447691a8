#pragma once

#include <cstddef>
#include <set>
#include <span>
#include <string>
#include <string_view>

#include "argexp/conll.hpp"
#include "argexp/tensor.hpp"
#include "argexp/vocabulary.hpp"

namespace argexp {

/// Empty allow set admits every label not in the deny set.
struct RelationFilter {
  std::set<std::string, std::less<>> allow;
  std::set<std::string, std::less<>> deny;

  bool admits(std::string_view relation) const;
};

enum class WindowPositions {
  raw,       // every surface token occupies a slot
  filtered,  // only in-vocabulary tokens occupy slots
};

struct CountingOptions {
  RelationFilter relations;
  std::set<std::string, std::less<>> subject_relations{"sbj"};
  std::set<std::string, std::less<>> object_relations{"obj"};
  bool verb_relation = true;
  std::size_t window_width = 2;
  WindowPositions window_positions = WindowPositions::raw;
};

// Serial reference kernels. For every admitted arc (h, r, d) with both ends
// in the vocabulary, (h, r, d) and (d, r_inv, h) are incremented. For every
// verb instance, each (subject, object) pair of in-vocabulary dependents adds
// (s, VERB, o) and (o, VERB_inv, s).
CooccurrenceTensor count_dependencies(std::span<const Sentence> corpus, const Vocabulary& vocab,
                                      const CountingOptions& options);

/// (t, WINDOW, c) for every pair of vocabulary tokens at distance 1..width
/// within a sentence.
CooccurrenceTensor count_window(std::span<const Sentence> corpus, const Vocabulary& vocab,
                                const CountingOptions& options);

// OpenMP kernels: the corpus is cut into `shards` contiguous ranges counted
// independently, then merged. Output is identical to the serial kernels for
// any shard count.
CooccurrenceTensor count_dependencies_parallel(std::span<const Sentence> corpus,
                                               const Vocabulary& vocab,
                                               const CountingOptions& options, std::size_t shards);
CooccurrenceTensor count_window_parallel(std::span<const Sentence> corpus, const Vocabulary& vocab,
                                         const CountingOptions& options, std::size_t shards);

}  // namespace argexp
