#include "argexp/pipeline.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>
#include <omp.h>

#include "argexp/counting.hpp"
#include "argexp/errors.hpp"
#include "argexp/hash.hpp"

namespace argexp {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

StageLock::StageLock(const fs::path& output_dir) : path_(output_dir / ".argexp.lock") {
  fs::create_directories(output_dir);
  // "x" makes fopen fail if the file exists.
  std::FILE* f = std::fopen(path_.c_str(), "wx");
  if (!f) {
    throw InputError("output directory " + output_dir.string() +
                     " is locked by another stage (remove " + path_.string() + " if stale)");
  }
  std::fclose(f);
}

StageLock::~StageLock() {
  std::error_code ec;
  fs::remove(path_, ec);
}

namespace {

void write_atomically(const fs::path& path, std::string_view bytes) {
  fs::create_directories(path.parent_path());
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw InputError("cannot write " + path.string());
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw InputError("write failed: " + path.string());
  }
  fs::rename(tmp, path);
}

std::string read_all(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read " + path.string() + " (run the previous stage first)");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

ordered_json read_json(const fs::path& path) {
  try {
    return ordered_json::parse(read_all(path));
  } catch (const nlohmann::json::exception& e) {
    throw InputError("bad manifest " + path.string() + ": " + e.what());
  }
}

void set_threads(const PipelineConfig& config) {
  if (config.threads > 0) omp_set_num_threads(config.threads);
}

void write_tensor(const fs::path& dir, std::string_view kind, const CooccurrenceTensor& tensor,
                  const PipelineConfig& config, const ParseStats& stats, std::size_t vocab_size) {
  const auto body = tensor.to_tsv();
  write_atomically(dir / (std::string(kind) + ".tsv"), body);
  ordered_json manifest;
  manifest["kind"] = kind;
  manifest["config_hash"] = config.ingest_hash();
  manifest["content_hash"] = hex_digest(fnv1a(body));
  manifest["total"] = tensor.total();
  manifest["entries"] = tensor.size();
  manifest["sentences"] = stats.sentences;
  manifest["rows"] = stats.rows;
  manifest["malformed"] = stats.malformed;
  manifest["arcs"] = stats.arcs;
  manifest["vocabulary_size"] = vocab_size;
  write_atomically(dir / (std::string(kind) + ".manifest.json"), manifest.dump(2) + "\n");
}

CooccurrenceTensor read_tensor(const fs::path& dir, std::string_view kind, const PipelineConfig& config) {
  const auto manifest = read_json(dir / (std::string(kind) + ".manifest.json"));
  const auto recorded = manifest.value("config_hash", std::string{});
  if (recorded != config.ingest_hash()) {
    throw InputError("stale " + std::string(kind) + " tensor: built with ingest config " + recorded +
                     " but the current config hashes to " + config.ingest_hash() + "; re-run ingest");
  }
  const auto body = read_all(dir / (std::string(kind) + ".tsv"));
  if (hex_digest(fnv1a(body)) != manifest.value("content_hash", std::string{})) {
    throw InputError(std::string(kind) + ".tsv does not match its manifest hash; re-run ingest");
  }
  std::istringstream in(body);
  return CooccurrenceTensor::read_tsv(in);
}

void write_weighted(const fs::path& dir, std::string_view name, const WeightedTensor& weighted,
                    const PipelineConfig& config) {
  const auto body = weighted.to_tsv();
  write_atomically(dir / (std::string(name) + ".plmi.tsv"), body);
  ordered_json manifest;
  manifest["name"] = name;
  manifest["config_hash"] = config.weight_hash();
  manifest["content_hash"] = hex_digest(fnv1a(body));
  manifest["log_base"] = to_string(weighted.provenance().base);
  manifest["source_hash"] = hex_digest(weighted.provenance().source_hash);
  manifest["collapse"] = weighted.provenance().collapse;
  manifest["entries"] = weighted.size();
  write_atomically(dir / (std::string(name) + ".manifest.json"), manifest.dump(2) + "\n");
}

std::vector<std::string> read_vocabulary(const fs::path& path) {
  std::istringstream in(read_all(path));
  std::vector<std::string> entries;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    entries.push_back(line.substr(0, line.find('\t')));
  }
  return entries;
}

std::string describe(const RelationSet& relations) {
  std::string out;
  for (const auto& r : relations) out += (out.empty() ? "" : ",") + r;
  return out;
}

// Relation-blind typicality for one pseudo-relation (ARG or ARG_inv).
std::optional<WeightedTensor> relation_blind(const CooccurrenceTensor& tensor, const WeightedTensor& weighted,
                                             const RelationSet& relations, std::string_view pseudo,
                                             const PipelineConfig& config) {
  if (config.boa_typicality == BoaTypicality::max) {
    auto out = max_relation_plmi(weighted, relations, pseudo);
    if (out.size() == 0) return std::nullopt;
    return out;
  }
  const auto collapsed = collapse_relations(tensor, relations, pseudo);
  if (collapsed.total() == 0) return std::nullopt;
  auto out = weight_tensor_parallel(collapsed, config.log_base);
  return WeightedTensor(out.scores(), {tensor.content_hash(), config.log_base,
                                       "sum:" + std::string(pseudo) + "=" + describe(relations)});
}

}  // namespace

BuiltSpaces build_spaces(const CooccurrenceTensor& dependency, const CooccurrenceTensor& window,
                         const std::vector<std::string>& vocabulary, const PipelineConfig& config) {
  BuiltSpaces out;
  out.dependency_scores = weight_tensor_parallel(dependency, config.log_base);
  out.window_scores = weight_tensor_parallel(window, config.log_base);

  const auto arg_relations = config.boa_relations ? *config.boa_relations : argument_relations(dependency);
  const auto arg_inv_relations =
      config.boa_inverse_relations ? *config.boa_inverse_relations : inverse_argument_relations(dependency);
  out.arg = relation_blind(dependency, out.dependency_scores, arg_relations, kArgRelation, config);
  out.arg_inv = relation_blind(dependency, out.dependency_scores, arg_inv_relations, kArgInverseRelation, config);

  std::vector<const WeightedTensor*> index_only;
  if (out.arg) index_only.push_back(&*out.arg);
  if (out.arg_inv) index_only.push_back(&*out.arg_inv);
  out.spaces.dependency = WeightedSpace::build("dependency", out.dependency_scores, vocabulary, index_only);
  out.spaces.window = WeightedSpace::build("window", out.window_scores, vocabulary);
  return out;
}

IngestSummary run_ingest(const PipelineConfig& config, std::ostream& log) {
  if (config.corpus.empty()) throw InputError("config has no corpus files");
  for (const auto& path : config.corpus) {
    if (!fs::exists(path)) throw InputError("corpus file not found: " + path.string());
  }
  set_threads(config);
  StageLock lock(config.output_dir);

  IngestSummary summary;
  const auto corpus = read_conll_files(config.corpus, config.columns, config.pos_map, &summary.stats);
  const auto vocab = Vocabulary::build(corpus, config.vocabulary);
  summary.vocabulary_size = vocab.size();

  std::string vocab_body;
  for (std::size_t i = 0; i < vocab.size(); ++i) {
    vocab_body += vocab.entries()[i] + '\t' + std::to_string(vocab.frequencies()[i]) + '\n';
  }
  write_atomically(config.output_dir / "vocabulary.tsv", vocab_body);

  const auto dependency = count_dependencies_parallel(corpus, vocab, config.counting, config.shards);
  const auto window = count_window_parallel(corpus, vocab, config.counting, config.shards);
  summary.dependency_total = dependency.total();
  summary.dependency_entries = dependency.size();
  summary.window_total = window.total();
  summary.window_entries = window.size();

  const auto dir = config.output_dir / "tensors";
  write_tensor(dir, "dependency", dependency, config, summary.stats, vocab.size());
  write_tensor(dir, "window", window, config, summary.stats, vocab.size());

  log << "ingest: " << summary.stats.sentences << " sentences, " << summary.stats.rows << " rows, "
      << summary.stats.arcs << " arcs, " << summary.stats.malformed << " malformed rows\n"
      << "ingest: vocabulary " << vocab.size() << " tokens; dependency tensor " << dependency.size()
      << " entries (total " << dependency.total() << "); window tensor " << window.size()
      << " entries (total " << window.total() << ")\n";
  return summary;
}

WeightSummary run_weight(const PipelineConfig& config, std::ostream& log) {
  set_threads(config);
  StageLock lock(config.output_dir);
  const auto tensors = config.output_dir / "tensors";
  const auto dependency = read_tensor(tensors, "dependency", config);
  const auto window = read_tensor(tensors, "window", config);
  const auto vocabulary = read_vocabulary(config.output_dir / "vocabulary.tsv");

  const auto built = build_spaces(dependency, window, vocabulary, config);

  const auto weighted_dir = config.output_dir / "weighted";
  write_weighted(weighted_dir, "dependency", built.dependency_scores, config);
  write_weighted(weighted_dir, "window", built.window_scores, config);
  if (built.arg) write_weighted(weighted_dir, "arg", *built.arg, config);
  if (built.arg_inv) write_weighted(weighted_dir, "arg_inv", *built.arg_inv, config);
  const auto& dep_space = built.spaces.dependency;
  const auto& win_space = built.spaces.window;
  const auto& dep_weighted = built.dependency_scores;
  const auto& win_weighted = built.window_scores;
  dep_space.save(config.output_dir / "spaces" / "dependency", config.weight_hash());
  win_space.save(config.output_dir / "spaces" / "window", config.weight_hash());

  WeightSummary summary;
  summary.dependency_dimensions = dep_space.catalog().size();
  summary.window_dimensions = win_space.catalog().size();
  summary.targets = dep_space.targets().size();
  summary.dependency_scores = dep_weighted.size();
  summary.window_scores = win_weighted.size();
  log << "weight: dependency space " << summary.targets << " targets x " << summary.dependency_dimensions
      << " dims (" << summary.dependency_scores << " PLMI entries); window space "
      << summary.window_dimensions << " dims (" << summary.window_scores << " PLMI entries)\n";
  return summary;
}

LoadedSpaces load_spaces(const PipelineConfig& config) {
  LoadedSpaces spaces;
  for (const auto* name : {"dependency", "window"}) {
    const auto dir = config.output_dir / "spaces" / name;
    const auto recorded = WeightedSpace::archive_config_hash(dir);
    if (recorded != config.weight_hash()) {
      throw InputError(std::string("stale ") + name + " space: built with weighting config " + recorded +
                       " but the current config hashes to " + config.weight_hash() + "; re-run weight");
    }
  }
  spaces.dependency = WeightedSpace::load(config.output_dir / "spaces" / "dependency");
  spaces.window = WeightedSpace::load(config.output_dir / "spaces" / "window");
  return spaces;
}

std::string_view to_string(Task task) {
  switch (task) {
    case Task::bicknell_acc1: return "bicknell-acc1";
    case Task::bicknell_acc2: return "bicknell-acc2";
    case Task::chow: return "chow";
  }
  return "?";
}

std::optional<Task> parse_task(std::string_view text) {
  if (text == "bicknell-acc1") return Task::bicknell_acc1;
  if (text == "bicknell-acc2") return Task::bicknell_acc2;
  if (text == "chow") return Task::chow;
  return std::nullopt;
}

fs::path report_stem(const PipelineConfig& config, std::string_view task, const ModelVariant& variant) {
  return config.output_dir / "reports" /
         (std::string(task) + "." + variant.label() + ".k" + std::to_string(variant.k));
}

std::vector<EvalReport> run_eval(const PipelineConfig& config, const LoadedSpaces& spaces, Task task,
                                 const std::vector<ModelVariant>& variants,
                                 const std::vector<std::size_t>& k_values, std::ostream& log) {
  set_threads(config);
  const auto model_spaces = spaces.view(config.boa_vectors);

  std::vector<BicknellItem> bicknell;
  std::vector<ChowItem> chow;
  BicknellMode mode = task == Task::bicknell_acc1 ? BicknellMode::acc1 : BicknellMode::acc2;
  if (task == Task::chow) {
    if (!config.chow) throw InputError("config has no dataset.chow");
    chow = load_chow(*config.chow);
  } else {
    if (!config.bicknell) throw InputError("config has no dataset.bicknell");
    bicknell = load_bicknell(*config.bicknell, mode);
  }

  StageLock lock(config.output_dir);
  std::vector<EvalReport> all;
  const auto task_name = std::string(to_string(task));
  for (const auto& variant : variants) {
    if (task == Task::chow && variant.kind != ModelKind::deps) {
      log << "warning: " << variant.label()
          << " on chow is provably tied (unstructured models score both orders identically)\n";
    }
    std::vector<EvalReport> reports;
    if (task == Task::chow) {
      reports = k_sweep_chow(model_spaces, variant, chow, config.chow_slots(variant.kind), k_values);
    } else {
      reports = k_sweep_bicknell(model_spaces, variant, bicknell, mode, config.bicknell_slots(variant.kind),
                                 k_values);
    }
    for (auto& report : reports) {
      const auto stem = report_stem(config, task_name, report.variant);
      write_atomically(fs::path(stem.string() + ".json"), report_json(report, config.hash()));
      std::ostringstream items;
      write_item_csv(items, report, config.hash());
      write_atomically(fs::path(stem.string() + ".items.csv"), items.str());
      all.push_back(std::move(report));
    }
  }
  std::ostringstream by_k;
  write_k_csv(by_k, all, config.hash());
  write_atomically(config.output_dir / "reports" / (task_name + ".accuracy_by_k.csv"), by_k.str());
  return all;
}

}  // namespace argexp
