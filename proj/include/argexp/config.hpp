#pragma once

#include <cstdint>
#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "argexp/conll.hpp"
#include "argexp/counting.hpp"
#include "argexp/evaluation.hpp"
#include "argexp/expectation.hpp"
#include "argexp/vocabulary.hpp"
#include "argexp/weighting.hpp"

namespace argexp {

/// Flat `key = value` text. `#` starts a comment line; list values are
/// comma-separated. Later assignments override earlier ones.
class KeyValueConfig {
 public:
  static KeyValueConfig parse(std::istream& in, std::string_view source);
  static KeyValueConfig load(const std::filesystem::path& path);

  void set(std::string key, std::string value) { values_[std::move(key)] = std::move(value); }
  bool has(std::string_view key) const { return values_.find(key) != values_.end(); }
  std::optional<std::string> get(std::string_view key) const;
  std::string get_or(std::string_view key, std::string_view fallback) const;
  std::vector<std::string> list(std::string_view key) const;

  const std::map<std::string, std::string, std::less<>>& values() const noexcept { return values_; }
  /// Directory that relative paths are resolved against.
  const std::filesystem::path& base_dir() const noexcept { return base_dir_; }
  void set_base_dir(std::filesystem::path dir) { base_dir_ = std::move(dir); }

 private:
  std::map<std::string, std::string, std::less<>> values_;
  std::filesystem::path base_dir_ = ".";
};

std::vector<std::string> split_list(std::string_view text);

enum class BoaTypicality { collapsed, max };

/// Typed view of a KeyValueConfig driving every pipeline stage.
struct PipelineConfig {
  std::vector<std::filesystem::path> corpus;
  ColumnConfig columns;
  PosMap pos_map;
  VocabularyOptions vocabulary;
  CountingOptions counting;
  std::size_t shards = 1;

  LogBase log_base = LogBase::natural;
  BoaTypicality boa_typicality = BoaTypicality::collapsed;
  BoaVectors boa_vectors = BoaVectors::dependency;
  std::optional<RelationSet> boa_relations;          // ARG collapse; default: argument relations
  std::optional<RelationSet> boa_inverse_relations;  // ARG_inv collapse

  std::vector<ModelKind> kinds{ModelKind::deps, ModelKind::boa, ModelKind::bow};
  std::vector<std::size_t> k_values{20};
  std::vector<Composition> compositions{Composition::sum, Composition::mult};

  std::optional<std::filesystem::path> bicknell;
  std::optional<std::filesystem::path> chow;

  std::filesystem::path output_dir = "out";
  int threads = 0;  // 0: OpenMP default

  KeyValueConfig raw;

  /// Throws InputError for unknown keys or unparsable values.
  static PipelineConfig from(const KeyValueConfig& raw);
  /// Applies ARGEXP_OUTPUT_DIR and ARGEXP_THREADS.
  void apply_environment();

  BicknellSlots bicknell_slots(ModelKind kind) const;
  ChowSlots chow_slots(ModelKind kind) const;

  /// Hash over every key that can change an artifact.
  std::string hash() const;
  /// Keys that affect the raw tensors.
  std::string ingest_hash() const;
  /// Keys that affect the weighted spaces (includes the ingest keys).
  std::string weight_hash() const;
};

}  // namespace argexp
