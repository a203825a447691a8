#include "argexp/vocabulary.hpp"

#include <algorithm>
#include <map>

namespace argexp {

Vocabulary Vocabulary::build(std::span<const Sentence> corpus, const VocabularyOptions& options) {
  std::map<std::string, std::uint64_t, std::less<>> counts;
  for (const auto& sentence : corpus) {
    for (const auto& token : sentence.tokens) {
      if (token.token) ++counts[token.canonical];
    }
  }
  std::vector<std::pair<std::string, std::uint64_t>> kept;
  for (auto& [canonical, count] : counts) {
    const bool keep = options.inclusive ? count >= options.threshold : count > options.threshold;
    if (keep) kept.emplace_back(canonical, count);
  }
  return from_entries(std::move(kept), options.threshold);
}

Vocabulary Vocabulary::from_entries(std::vector<std::pair<std::string, std::uint64_t>> entries,
                                    std::uint64_t threshold) {
  std::sort(entries.begin(), entries.end());
  entries.erase(std::unique(entries.begin(), entries.end(),
                            [](const auto& a, const auto& b) { return a.first == b.first; }),
                entries.end());
  Vocabulary vocab;
  vocab.threshold_ = threshold;
  vocab.entries_.reserve(entries.size());
  vocab.frequencies_.reserve(entries.size());
  for (auto& [canonical, count] : entries) {
    vocab.entries_.push_back(std::move(canonical));
    vocab.frequencies_.push_back(count);
  }
  return vocab;
}

std::optional<std::uint32_t> Vocabulary::id_of(std::string_view canonical) const {
  const auto it = std::lower_bound(entries_.begin(), entries_.end(), canonical);
  if (it == entries_.end() || *it != canonical) return std::nullopt;
  return static_cast<std::uint32_t>(it - entries_.begin());
}

std::uint64_t Vocabulary::frequency(std::string_view canonical) const {
  const auto id = id_of(canonical);
  return id ? frequencies_[*id] : 0;
}

}  // namespace argexp
