#pragma once

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "argexp/config.hpp"
#include "argexp/evaluation.hpp"
#include "argexp/space.hpp"

namespace argexp {

// Artifact layout under the output directory:
//   vocabulary.tsv
//   tensors/{dependency,window}.tsv + .manifest.json
//   weighted/{dependency,arg,arg_inv,window}.plmi.tsv + .manifest.json
//   spaces/{dependency,window}/        (WeightedSpace archives)
//   reports/<task>.<variant>.k<k>.{json,items.csv}, reports/<task>.accuracy_by_k.csv

/// Exclusive lock on an output directory for the lifetime of the object.
class StageLock {
 public:
  explicit StageLock(const std::filesystem::path& output_dir);
  ~StageLock();
  StageLock(const StageLock&) = delete;
  StageLock& operator=(const StageLock&) = delete;

 private:
  std::filesystem::path path_;
};

struct IngestSummary {
  ParseStats stats;
  std::size_t vocabulary_size = 0;
  std::uint64_t dependency_total = 0;
  std::size_t dependency_entries = 0;
  std::uint64_t window_total = 0;
  std::size_t window_entries = 0;
};

struct WeightSummary {
  std::size_t dependency_dimensions = 0;
  std::size_t window_dimensions = 0;
  std::size_t targets = 0;
  std::size_t dependency_scores = 0;
  std::size_t window_scores = 0;
};

IngestSummary run_ingest(const PipelineConfig& config, std::ostream& log);
WeightSummary run_weight(const PipelineConfig& config, std::ostream& log);

struct LoadedSpaces {
  WeightedSpace dependency;
  WeightedSpace window;

  ModelSpaces view(BoaVectors boa_vectors) const { return {&dependency, &window, boa_vectors}; }
};

struct BuiltSpaces {
  WeightedTensor dependency_scores;
  WeightedTensor window_scores;
  std::optional<WeightedTensor> arg;      // absent when nothing collapses
  std::optional<WeightedTensor> arg_inv;
  LoadedSpaces spaces;
};

/// Weighting and space construction in memory, as done by the weight stage.
BuiltSpaces build_spaces(const CooccurrenceTensor& dependency, const CooccurrenceTensor& window,
                         const std::vector<std::string>& vocabulary, const PipelineConfig& config);

/// Loads both archives; throws InputError when they were built under a
/// different weighting config.
LoadedSpaces load_spaces(const PipelineConfig& config);

enum class Task { bicknell_acc1, bicknell_acc2, chow };
std::string_view to_string(Task task);
std::optional<Task> parse_task(std::string_view text);

/// Evaluates every (variant, k) and writes report files. Returns the
/// reports in (variant, k) order.
std::vector<EvalReport> run_eval(const PipelineConfig& config, const LoadedSpaces& spaces, Task task,
                                 const std::vector<ModelVariant>& variants,
                                 const std::vector<std::size_t>& k_values, std::ostream& log);

std::filesystem::path report_stem(const PipelineConfig& config, std::string_view task,
                                  const ModelVariant& variant);

}  // namespace argexp
