#pragma once

#include <compare>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "argexp/sparse_vector.hpp"
#include "argexp/weighting.hpp"

namespace argexp {

struct Dimension {
  std::string relation;
  std::string filler;

  auto operator<=>(const Dimension&) const = default;
};

/// Bijection between dimension ids and (relation, filler) pairs, ordered
/// lexicographically so ids are stable for a given set of dimensions.
class DimensionCatalog {
 public:
  DimensionCatalog() = default;
  explicit DimensionCatalog(std::vector<Dimension> dimensions);

  std::optional<std::uint32_t> id_of(std::string_view relation, std::string_view filler) const;
  const Dimension& at(std::uint32_t id) const { return dimensions_.at(id); }
  std::size_t size() const noexcept { return dimensions_.size(); }
  const std::vector<Dimension>& dimensions() const noexcept { return dimensions_; }

 private:
  std::vector<Dimension> dimensions_;
};

struct RankedFiller {
  std::string filler;
  double score;

  bool operator==(const RankedFiller&) const = default;
};

/// Fillers of each (target, relation), by descending PLMI with ties broken
/// by ascending canonical string.
class FillerIndex {
 public:
  using Key = std::pair<std::string, std::string>;
  using KeyView = std::pair<std::string_view, std::string_view>;
  struct KeyLess {
    using is_transparent = void;
    template <class A, class B>
    bool operator()(const A& a, const B& b) const {
      return KeyView(a.first, a.second) < KeyView(b.first, b.second);
    }
  };
  using Lists = std::map<Key, std::vector<RankedFiller>, KeyLess>;

  FillerIndex() = default;
  explicit FillerIndex(Lists lists);
  static FillerIndex build(std::span<const WeightedTensor* const> sources);

  std::span<const RankedFiller> fillers(std::string_view target, std::string_view relation) const;
  const Lists& lists() const noexcept { return lists_; }

 private:
  Lists lists_;
};

struct TopK {
  std::vector<std::string> fillers;
  std::vector<double> scores;
  std::size_t requested = 0;
  bool shortfall = false;   // fewer than `requested` available
  bool no_fillers = false;  // unknown (target, relation)

  /// `a-n, b-n, c-n`
  std::string joined() const;
};

/// PLMI-weighted rows over one dimension catalog plus a filler index.
/// Immutable after construction; all reads are safe concurrently.
class WeightedSpace {
 public:
  WeightedSpace() = default;

  /// `vocabulary` lists every token that may be queried; tokens without
  /// positive entries get empty rows. `index_only` tensors contribute filler
  /// lists (e.g. the ARG collapse) but no dimensions.
  static WeightedSpace build(std::string name, const WeightedTensor& rows,
                             std::span<const std::string> vocabulary,
                             std::span<const WeightedTensor* const> index_only = {});

  const std::string& name() const noexcept { return name_; }
  /// Hex content hash over name, catalog, rows and index.
  const std::string& id() const noexcept { return id_; }

  bool contains(std::string_view target) const;
  /// Throws OutOfVocabularyError for unknown targets.
  const SparseVector& vector_of(std::string_view target) const;
  /// Throws QueryError when k == 0.
  TopK top_k_fillers(std::string_view target, std::string_view relation, std::size_t k) const;

  const DimensionCatalog& catalog() const noexcept { return catalog_; }
  const FillerIndex& index() const noexcept { return index_; }
  const std::vector<std::string>& targets() const noexcept { return targets_; }

  /// Writes manifest.json, catalog.tsv, rows.bin and index.tsv into `dir`.
  void save(const std::filesystem::path& dir, std::string_view config_hash) const;
  /// Verifies the manifest hash against the file contents.
  static WeightedSpace load(const std::filesystem::path& dir);
  /// Config hash recorded in the manifest of a saved archive.
  static std::string archive_config_hash(const std::filesystem::path& dir);

  /// `target\trank\trelation:filler\tscore` for each target's k largest dims.
  void write_diagnostic(std::ostream& out, std::size_t k) const;

 private:
  struct Serialized {
    std::string catalog;
    std::string rows;
    std::string index;
  };
  Serialized serialize() const;
  static std::string content_id(std::string_view name, const Serialized& s);

  std::string name_;
  std::string id_;
  DimensionCatalog catalog_;
  std::vector<std::string> targets_;
  std::vector<SparseVector> rows_;
  FillerIndex index_;
};

}  // namespace argexp
