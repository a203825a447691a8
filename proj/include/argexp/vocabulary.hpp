#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "argexp/conll.hpp"

namespace argexp {

struct VocabularyOptions {
  std::uint64_t threshold = 1;
  bool inclusive = true;  // keep frequency >= threshold; strict > otherwise
};

/// Nouns and verbs above a corpus frequency threshold. Immutable once built,
/// sorted by canonical string so ids follow lexicographic order.
class Vocabulary {
 public:
  Vocabulary() = default;

  static Vocabulary build(std::span<const Sentence> corpus, const VocabularyOptions& options);
  static Vocabulary from_entries(std::vector<std::pair<std::string, std::uint64_t>> entries,
                                 std::uint64_t threshold);

  bool contains(std::string_view canonical) const { return id_of(canonical).has_value(); }
  std::optional<std::uint32_t> id_of(std::string_view canonical) const;
  std::uint64_t frequency(std::string_view canonical) const;

  const std::vector<std::string>& entries() const noexcept { return entries_; }
  const std::vector<std::uint64_t>& frequencies() const noexcept { return frequencies_; }
  std::size_t size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }
  std::uint64_t threshold() const noexcept { return threshold_; }

 private:
  std::vector<std::string> entries_;
  std::vector<std::uint64_t> frequencies_;
  std::uint64_t threshold_ = 1;
};

}  // namespace argexp
