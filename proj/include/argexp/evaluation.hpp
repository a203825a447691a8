#pragma once

#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "argexp/datasets.hpp"
#include "argexp/expectation.hpp"
#include "argexp/stats.hpp"

namespace argexp {

/// Slot assigned to each dataset column, per model kind.
struct BicknellSlots {
  std::string agent;
  std::string verb;
};

struct ChowSlots {
  std::string noun1;
  std::string noun2;
};

/// DEPS: agent -> VERB, verb -> obj. BOA: ARG, ARG. BOW: WINDOW, WINDOW.
BicknellSlots default_bicknell_slots(ModelKind kind);
/// DEPS: noun1 -> sbj_inv, noun2 -> obj_inv. BOA: ARG_inv twice. BOW: WINDOW twice.
ChowSlots default_chow_slots(ModelKind kind);

enum class Outcome { win, loss, tie };
std::string_view to_string(Outcome outcome);

/// Condition a is the plausible (or normal) one.
struct EvalPair {
  std::string id;
  double score_a = 0.0;
  double score_b = 0.0;
  bool degenerate_a = false;
  bool degenerate_b = false;
  Outcome outcome = Outcome::loss;
};

struct SkippedItem {
  std::string id;
  std::string reason;
  bool out_of_vocabulary = false;
};

enum class ExecPolicy { serial, parallel };

struct EvalReport {
  std::string task;  // bicknell-acc1, bicknell-acc2 or chow
  ModelVariant variant;
  std::vector<SlotQuery> slot_map;  // column name -> slot, stored as (column, slot)
  std::string condition_a;
  std::string condition_b;

  std::size_t n_items = 0;
  std::size_t n_scored = 0;
  std::size_t n_wins = 0;
  std::size_t n_ties = 0;  // counted as incorrect
  std::size_t n_degenerate = 0;
  std::size_t n_oov_skipped = 0;
  std::size_t n_failed = 0;  // e.g. an input with no fillers

  std::optional<double> accuracy;  // wins / n_scored; empty when nothing was scored
  double coverage = 0.0;           // n_scored / n_items
  std::optional<ChiSquareResult> chi_square;
  std::optional<ChiSquareResult> chi_square_yates;
  std::optional<RankSumResult> wilcoxon;

  bool all_ties = false;
  std::string annotation;

  std::vector<EvalPair> pairs;
  std::vector<SkippedItem> skipped;
};

EvalReport run_bicknell(const ModelSpaces& spaces, const ModelVariant& variant,
                        std::span<const BicknellItem> items, BicknellMode mode,
                        const BicknellSlots& slots, ExecPolicy policy = ExecPolicy::parallel);

EvalReport run_chow(const ModelSpaces& spaces, const ModelVariant& variant,
                    std::span<const ChowItem> items, const ChowSlots& slots,
                    ExecPolicy policy = ExecPolicy::parallel);

std::vector<EvalReport> k_sweep_bicknell(const ModelSpaces& spaces, const ModelVariant& variant_template,
                                         std::span<const BicknellItem> items, BicknellMode mode,
                                         const BicknellSlots& slots, std::span<const std::size_t> k_values,
                                         ExecPolicy policy = ExecPolicy::parallel);

std::vector<EvalReport> k_sweep_chow(const ModelSpaces& spaces, const ModelVariant& variant_template,
                                     std::span<const ChowItem> items, const ChowSlots& slots,
                                     std::span<const std::size_t> k_values,
                                     ExecPolicy policy = ExecPolicy::parallel);

/// Structured report (JSON). Deterministic for identical inputs.
std::string report_json(const EvalReport& report, std::string_view config_hash);
/// `item_id,condition,score,degenerate` rows, both conditions per item.
void write_item_csv(std::ostream& out, const EvalReport& report, std::string_view config_hash);
/// `k,task,variant,accuracy,...` rows.
void write_k_csv(std::ostream& out, std::span<const EvalReport> reports, std::string_view config_hash);
/// One human-readable accuracy line.
std::string summary_line(const EvalReport& report);

}  // namespace argexp
