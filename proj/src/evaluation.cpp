#include "argexp/evaluation.hpp"

#include <cstdio>
#include <sstream>

#include <json.hpp>

#include "argexp/errors.hpp"
#include "argexp/token.hpp"
#include "argexp/weighting.hpp"

namespace argexp {

BicknellSlots default_bicknell_slots(ModelKind kind) {
  switch (kind) {
    case ModelKind::deps: return {std::string(kVerbRelation), "obj"};
    case ModelKind::boa: return {std::string(kArgRelation), std::string(kArgRelation)};
    case ModelKind::bow: return {std::string(kWindowRelation), std::string(kWindowRelation)};
  }
  return {};
}

ChowSlots default_chow_slots(ModelKind kind) {
  switch (kind) {
    case ModelKind::deps: return {"sbj_inv", "obj_inv"};
    case ModelKind::boa: return {std::string(kArgInverseRelation), std::string(kArgInverseRelation)};
    case ModelKind::bow: return {std::string(kWindowRelation), std::string(kWindowRelation)};
  }
  return {};
}

std::string_view to_string(Outcome outcome) {
  switch (outcome) {
    case Outcome::win: return "win";
    case Outcome::loss: return "loss";
    case Outcome::tie: return "tie";
  }
  return "?";
}

namespace {

// One pair to score: two conditions, each an input list plus a candidate.
struct Condition {
  std::vector<SlotQuery> inputs;
  std::string candidate;
};

struct PairTask {
  std::string id;
  Condition a;
  Condition b;
};

struct PairResult {
  std::optional<EvalPair> pair;
  std::optional<SkippedItem> skipped;
};

PairResult score_pair(const ModelSpaces& spaces, const ModelVariant& variant, const PairTask& task) {
  PairResult result;
  try {
    const auto a = expectation_update(spaces, variant, task.a.inputs, task.a.candidate);
    const auto b = expectation_update(spaces, variant, task.b.inputs, task.b.candidate);
    EvalPair pair;
    pair.id = task.id;
    pair.score_a = a.score.value;
    pair.score_b = b.score.value;
    pair.degenerate_a = a.score.degenerate;
    pair.degenerate_b = b.score.degenerate;
    pair.outcome = pair.score_a > pair.score_b   ? Outcome::win
                   : pair.score_a == pair.score_b ? Outcome::tie
                                                  : Outcome::loss;
    result.pair = std::move(pair);
  } catch (const OutOfVocabularyError& e) {
    result.skipped = SkippedItem{task.id, e.what(), true};
  } catch (const EmptyPrototypeError& e) {
    result.skipped = SkippedItem{task.id, e.what(), false};
  }
  return result;
}

std::vector<PairResult> score_all(const ModelSpaces& spaces, const ModelVariant& variant,
                                  const std::vector<PairTask>& tasks, ExecPolicy policy) {
  std::vector<PairResult> results(tasks.size());
  if (policy == ExecPolicy::serial) {
    for (std::size_t i = 0; i < tasks.size(); ++i) results[i] = score_pair(spaces, variant, tasks[i]);
    return results;
  }
  const auto n = static_cast<long>(tasks.size());
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 4)
  for (long i = 0; i < n; ++i) {
    try {
      results[static_cast<std::size_t>(i)] = score_pair(spaces, variant, tasks[static_cast<std::size_t>(i)]);
    } catch (...) {
#pragma omp critical
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return results;
}

EvalReport assemble(std::string task, const ModelVariant& variant, std::vector<SlotQuery> slot_map,
                    std::string condition_a, std::string condition_b,
                    std::vector<PairResult> results) {
  EvalReport report;
  report.task = std::move(task);
  report.variant = variant;
  report.slot_map = std::move(slot_map);
  report.condition_a = std::move(condition_a);
  report.condition_b = std::move(condition_b);
  report.n_items = results.size();

  std::vector<double> scores_a, scores_b;
  for (auto& result : results) {
    if (result.skipped) {
      (result.skipped->out_of_vocabulary ? report.n_oov_skipped : report.n_failed) += 1;
      report.skipped.push_back(std::move(*result.skipped));
      continue;
    }
    auto& pair = *result.pair;
    if (pair.outcome == Outcome::win) ++report.n_wins;
    if (pair.outcome == Outcome::tie) ++report.n_ties;
    if (pair.degenerate_a || pair.degenerate_b) ++report.n_degenerate;
    scores_a.push_back(pair.score_a);
    scores_b.push_back(pair.score_b);
    report.pairs.push_back(std::move(pair));
  }
  report.n_scored = report.pairs.size();
  report.coverage = report.n_items == 0 ? 0.0
                                        : static_cast<double>(report.n_scored) /
                                              static_cast<double>(report.n_items);
  if (report.n_scored > 0) {
    report.accuracy = static_cast<double>(report.n_wins) / static_cast<double>(report.n_scored);
    report.chi_square = chi_square_vs_chance(report.n_wins, report.n_scored, false);
    report.chi_square_yates = chi_square_vs_chance(report.n_wins, report.n_scored, true);
    report.wilcoxon = wilcoxon_rank_sum(scores_a, scores_b);
    report.all_ties = report.n_ties == report.n_scored;
  }
  if (report.all_ties) report.annotation = "all ties";
  return report;
}

}  // namespace

EvalReport run_bicknell(const ModelSpaces& spaces, const ModelVariant& variant,
                        std::span<const BicknellItem> items, BicknellMode mode,
                        const BicknellSlots& slots, ExecPolicy policy) {
  validate_slot(variant.kind, slots.agent);
  validate_slot(variant.kind, slots.verb);
  std::vector<PairTask> tasks;
  tasks.reserve(items.size());
  for (const auto& item : items) {
    PairTask task;
    task.id = item.id;
    if (mode == BicknellMode::acc2) {
      if (!item.agent_incongruent) throw InputError("item " + item.id + " has no incongruent agent");
      task.a = {{{item.agent_congruent, slots.agent}, {item.verb, slots.verb}}, item.patient_congruent};
      task.b = {{{*item.agent_incongruent, slots.agent}, {item.verb, slots.verb}}, item.patient_congruent};
    } else {
      if (!item.patient_incongruent) throw InputError("item " + item.id + " has no incongruent patient");
      task.a = {{{item.agent_congruent, slots.agent}, {item.verb, slots.verb}}, item.patient_congruent};
      task.b = {{{item.agent_congruent, slots.agent}, {item.verb, slots.verb}}, *item.patient_incongruent};
    }
    tasks.push_back(std::move(task));
  }
  return assemble("bicknell-" + std::string(to_string(mode)), variant,
                  {{"agent", slots.agent}, {"verb", slots.verb}}, "congruent", "incongruent",
                  score_all(spaces, variant, tasks, policy));
}

EvalReport run_chow(const ModelSpaces& spaces, const ModelVariant& variant,
                    std::span<const ChowItem> items, const ChowSlots& slots, ExecPolicy policy) {
  validate_slot(variant.kind, slots.noun1);
  validate_slot(variant.kind, slots.noun2);
  std::vector<PairTask> tasks;
  tasks.reserve(items.size());
  for (const auto& item : items) {
    PairTask task;
    task.id = item.id;
    task.a = {{{item.noun1, slots.noun1}, {item.noun2, slots.noun2}}, item.verb};
    task.b = {{{item.noun2, slots.noun1}, {item.noun1, slots.noun2}}, item.verb};
    tasks.push_back(std::move(task));
  }
  auto report = assemble("chow", variant, {{"noun1", slots.noun1}, {"noun2", slots.noun2}}, "normal",
                         "reversed", score_all(spaces, variant, tasks, policy));
  if (variant.kind != ModelKind::deps) {
    report.annotation = report.all_ties ? "all ties (provably tied: unstructured model)"
                                        : "provably tied: unstructured model";
  }
  return report;
}

std::vector<EvalReport> k_sweep_bicknell(const ModelSpaces& spaces, const ModelVariant& variant_template,
                                         std::span<const BicknellItem> items, BicknellMode mode,
                                         const BicknellSlots& slots, std::span<const std::size_t> k_values,
                                         ExecPolicy policy) {
  if (k_values.empty()) throw QueryError("k sweep needs at least one k");
  std::vector<EvalReport> reports;
  for (const auto k : k_values) {
    auto variant = variant_template;
    variant.k = k;
    reports.push_back(run_bicknell(spaces, variant, items, mode, slots, policy));
  }
  return reports;
}

std::vector<EvalReport> k_sweep_chow(const ModelSpaces& spaces, const ModelVariant& variant_template,
                                     std::span<const ChowItem> items, const ChowSlots& slots,
                                     std::span<const std::size_t> k_values, ExecPolicy policy) {
  if (k_values.empty()) throw QueryError("k sweep needs at least one k");
  std::vector<EvalReport> reports;
  for (const auto k : k_values) {
    auto variant = variant_template;
    variant.k = k;
    reports.push_back(run_chow(spaces, variant, items, slots, policy));
  }
  return reports;
}

// Output -------------------------------------------------------------------

namespace {

nlohmann::ordered_json chi_json(const std::optional<ChiSquareResult>& chi) {
  if (!chi) return nullptr;
  return {{"statistic", chi->statistic}, {"p", chi->p}};
}

}  // namespace

std::string report_json(const EvalReport& r, std::string_view config_hash) {
  nlohmann::ordered_json j;
  j["config_hash"] = std::string(config_hash);
  j["task"] = r.task;
  j["variant"] = {{"kind", std::string(to_string(r.variant.kind))},
                  {"k", r.variant.k},
                  {"composition", std::string(to_string(r.variant.op))}};
  auto slots = nlohmann::ordered_json::object();
  for (const auto& s : r.slot_map) slots[s.input] = s.slot;
  j["slots"] = slots;
  j["conditions"] = {r.condition_a, r.condition_b};
  j["counts"] = {{"items", r.n_items},           {"scored", r.n_scored},
                 {"wins", r.n_wins},             {"ties", r.n_ties},
                 {"degenerate", r.n_degenerate}, {"oov_skipped", r.n_oov_skipped},
                 {"failed", r.n_failed}};
  j["accuracy"] = r.accuracy ? nlohmann::ordered_json(*r.accuracy) : nlohmann::ordered_json(nullptr);
  j["accuracy_defined"] = r.accuracy.has_value();
  j["coverage"] = r.coverage;
  j["chi_square"] = chi_json(r.chi_square);
  j["chi_square_yates"] = chi_json(r.chi_square_yates);
  if (r.wilcoxon) {
    j["wilcoxon"] = {{"W", r.wilcoxon->w}, {"z", r.wilcoxon->z}, {"p", r.wilcoxon->p},
                     {"degenerate", r.wilcoxon->degenerate}};
  } else {
    j["wilcoxon"] = nullptr;
  }
  j["all_ties"] = r.all_ties;
  j["annotation"] = r.annotation;
  auto skipped = nlohmann::ordered_json::array();
  for (const auto& s : r.skipped) {
    skipped.push_back({{"item_id", s.id}, {"reason", s.reason}, {"oov", s.out_of_vocabulary}});
  }
  j["skipped"] = skipped;
  return j.dump(2) + "\n";
}

void write_item_csv(std::ostream& out, const EvalReport& r, std::string_view config_hash) {
  out << "# config_hash=" << config_hash << " task=" << r.task << " variant=" << r.variant.label()
      << " k=" << r.variant.k << '\n';
  out << "item_id,condition,score,degenerate\n";
  for (const auto& p : r.pairs) {
    out << p.id << ',' << r.condition_a << ',' << format_score(p.score_a) << ','
        << (p.degenerate_a ? 1 : 0) << '\n';
    out << p.id << ',' << r.condition_b << ',' << format_score(p.score_b) << ','
        << (p.degenerate_b ? 1 : 0) << '\n';
  }
}

void write_k_csv(std::ostream& out, std::span<const EvalReport> reports, std::string_view config_hash) {
  out << "# config_hash=" << config_hash << '\n';
  out << "k,task,variant,accuracy,scored,wins,ties\n";
  for (const auto& r : reports) {
    out << r.variant.k << ',' << r.task << ',' << r.variant.label() << ','
        << (r.accuracy ? format_score(*r.accuracy) : std::string("NA")) << ',' << r.n_scored << ','
        << r.n_wins << ',' << r.n_ties << '\n';
  }
}

std::string summary_line(const EvalReport& r) {
  char buf[512];
  std::string accuracy = "undefined";
  if (r.accuracy) {
    std::snprintf(buf, sizeof buf, "%.1f%%", 100.0 * *r.accuracy);
    accuracy = buf;
  }
  std::string dropped;
  if (r.n_oov_skipped) dropped += ", " + std::to_string(r.n_oov_skipped) + " oov";
  if (r.n_failed) dropped += ", " + std::to_string(r.n_failed) + " without fillers";
  std::snprintf(buf, sizeof buf, "%-14s %-9s k=%-3zu accuracy %-9s (%zu/%zu wins, %zu ties%s, coverage %.0f%%)",
                r.task.c_str(), r.variant.label().c_str(), r.variant.k, accuracy.c_str(), r.n_wins,
                r.n_scored, r.n_ties, dropped.c_str(), 100.0 * r.coverage);
  std::string line = buf;
  if (r.chi_square) {
    std::snprintf(buf, sizeof buf, "  chi2=%.4g p=%.4g", r.chi_square->statistic, r.chi_square->p);
    line += buf;
  }
  if (r.wilcoxon) {
    std::snprintf(buf, sizeof buf, "  W=%.1f p=%.4g", r.wilcoxon->w, r.wilcoxon->p);
    line += buf;
  }
  if (!r.annotation.empty()) line += "  [" + r.annotation + "]";
  return line;
}

}  // namespace argexp
