#include "argexp/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "argexp/config.hpp"
#include "argexp/errors.hpp"
#include "argexp/pipeline.hpp"

namespace argexp {

namespace fs = std::filesystem;

namespace {

struct Options {
  std::string config_path;
  std::vector<std::string> overrides;
  // fillers
  std::string space_dir;
  std::string target;
  std::string slot;
  std::size_t k = 20;
  // eval / sweep
  std::vector<std::string> tasks;
  std::vector<std::string> variants;
  std::string k_list;
};

PipelineConfig load_config(const Options& opts) {
  KeyValueConfig raw;
  if (!opts.config_path.empty()) raw = KeyValueConfig::load(opts.config_path);
  for (const auto& assignment : opts.overrides) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos) throw InputError("--set expects key=value, got '" + assignment + "'");
    raw.set(assignment.substr(0, eq), assignment.substr(eq + 1));
  }
  auto config = PipelineConfig::from(raw);
  config.apply_environment();
  return config;
}

std::vector<std::size_t> parse_k_list(const std::string& text) {
  std::vector<std::size_t> out;
  for (const auto& item : split_list(text)) {
    std::size_t k = 0;
    try {
      std::size_t used = 0;
      k = std::stoul(item, &used);
      if (used != item.size()) k = 0;
    } catch (const std::exception&) {
      k = 0;
    }
    if (k == 0) throw InputError("--k expects positive integers, got '" + item + "'");
    out.push_back(k);
  }
  return out;
}

std::vector<ModelVariant> select_variants(const PipelineConfig& config, const Options& opts) {
  std::vector<ModelVariant> variants;
  if (!opts.variants.empty()) {
    for (const auto& label : opts.variants) {
      auto variant = ModelVariant::parse(label, 1);
      if (!variant) throw InputError("unknown variant '" + label + "' (expected e.g. DEPS-SUM)");
      variants.push_back(*variant);
    }
    return variants;
  }
  for (const auto kind : config.kinds) {
    for (const auto op : config.compositions) variants.push_back({kind, 1, op});
  }
  return variants;
}

int cmd_ingest(const Options& opts, std::ostream& out, std::ostream& err) {
  const auto config = load_config(opts);
  const auto summary = run_ingest(config, err);
  out << "sentences " << summary.stats.sentences << ", arcs " << summary.stats.arcs << ", malformed rows "
      << summary.stats.malformed << ", vocabulary " << summary.vocabulary_size << "\n";
  return 0;
}

int cmd_weight(const Options& opts, std::ostream& out, std::ostream& err) {
  const auto config = load_config(opts);
  const auto summary = run_weight(config, err);
  out << "dependency space: " << summary.targets << " targets, " << summary.dependency_dimensions
      << " dimensions; window space: " << summary.window_dimensions << " dimensions\n";
  return 0;
}

int cmd_fillers(const Options& opts, std::ostream& out, std::ostream& err) {
  fs::path dir;
  const bool window = opts.slot == kWindowRelation;
  if (!opts.space_dir.empty()) {
    dir = opts.space_dir;
  } else {
    const auto config = load_config(opts);
    dir = config.output_dir / "spaces" / (window ? "window" : "dependency");
  }
  const auto space = WeightedSpace::load(dir);
  if (!space.contains(opts.target)) throw OutOfVocabularyError(opts.target);
  const auto top = space.top_k_fillers(opts.target, opts.slot, opts.k);
  if (top.no_fillers) {
    err << "no fillers for (" << opts.target << ", " << opts.slot << ")\n";
    return static_cast<int>(ExitCode::query_error);
  }
  if (top.shortfall) err << "only " << top.fillers.size() << " of " << opts.k << " fillers available\n";
  out << top.joined() << "\n";
  return 0;
}

int evaluate(const PipelineConfig& config, const std::vector<Task>& tasks, const Options& opts,
             const std::vector<std::size_t>& k_values, std::ostream& out, std::ostream& err) {
  const auto spaces = load_spaces(config);
  const auto variants = select_variants(config, opts);
  for (const auto task : tasks) {
    for (const auto& report : run_eval(config, spaces, task, variants, k_values, err)) {
      out << summary_line(report) << "\n";
    }
  }
  return 0;
}

int cmd_eval(const Options& opts, std::ostream& out, std::ostream& err) {
  const auto config = load_config(opts);
  std::vector<Task> tasks;
  for (const auto& name : opts.tasks) {
    const auto task = parse_task(name);
    if (!task) throw InputError("unknown task '" + name + "'");
    tasks.push_back(*task);
  }
  const auto k_values = opts.k_list.empty() ? config.k_values : parse_k_list(opts.k_list);
  return evaluate(config, tasks, opts, k_values, out, err);
}

int cmd_sweep(const Options& opts, std::ostream& out, std::ostream& err) {
  const auto config = load_config(opts);
  std::vector<Task> tasks;
  if (opts.tasks.empty()) {
    if (config.bicknell) {
      const auto mode = detect_bicknell_mode(*config.bicknell);
      tasks.push_back(mode == BicknellMode::acc1 ? Task::bicknell_acc1 : Task::bicknell_acc2);
    }
    if (config.chow) tasks.push_back(Task::chow);
    if (tasks.empty()) throw InputError("config names no datasets to sweep");
  } else {
    for (const auto& name : opts.tasks) {
      const auto task = parse_task(name);
      if (!task) throw InputError("unknown task '" + name + "'");
      tasks.push_back(*task);
    }
  }
  std::vector<std::size_t> k_values(std::begin(kReplicationK), std::end(kReplicationK));
  if (!opts.k_list.empty()) {
    k_values = parse_k_list(opts.k_list);
  } else if (config.raw.has("model.k")) {
    k_values = config.k_values;
  }
  return evaluate(config, tasks, opts, k_values, out, err);
}

int cmd_report(const Options& opts, std::ostream& out, std::ostream&) {
  const auto config = load_config(opts);
  const auto dir = config.output_dir / "reports";
  if (!fs::is_directory(dir)) throw InputError("no reports in " + dir.string() + " (run eval first)");
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.path().extension() == ".json") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  out << "task           variant   k    accuracy  scored  ties  chi2_p      W          W_p\n";
  for (const auto& path : files) {
    std::ifstream in(path);
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
      throw InputError("bad report " + path.string() + ": " + e.what());
    }
    char line[256];
    const auto& v = j["variant"];
    const std::string label = v["kind"].get<std::string>() + "-" + v["composition"].get<std::string>();
    const bool defined = j.value("accuracy_defined", false);
    std::snprintf(line, sizeof line, "%-14s %-9s %-4zu %-9s %-7zu %-5zu %-11.4g %-10.1f %.4g\n",
                  j["task"].get<std::string>().c_str(), label.c_str(), v["k"].get<std::size_t>(),
                  defined ? (std::to_string(static_cast<int>(100.0 * j["accuracy"].get<double>() + 0.5)) + "%").c_str()
                          : "NA",
                  j["counts"]["scored"].get<std::size_t>(), j["counts"]["ties"].get<std::size_t>(),
                  j["chi_square"].is_null() ? 1.0 : j["chi_square"]["p"].get<double>(),
                  j["wilcoxon"].is_null() ? 0.0 : j["wilcoxon"]["W"].get<double>(),
                  j["wilcoxon"].is_null() ? 1.0 : j["wilcoxon"]["p"].get<double>());
    out << line;
  }
  return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Structured and unstructured distributional models of verb argument expectations"};
  app.require_subcommand(1);
  Options opts;

  auto add_config = [&](CLI::App* sub, bool required) {
    auto* opt = sub->add_option("-c,--config", opts.config_path, "Pipeline config file");
    if (required) opt->required();
    sub->add_option("--set", opts.overrides, "Override a config key (key=value)");
  };

  auto* ingest = app.add_subcommand("ingest", "Count dependency and window co-occurrences");
  add_config(ingest, true);
  auto* weight = app.add_subcommand("weight", "PLMI-weight the tensors and build space archives");
  add_config(weight, true);
  auto* fillers = app.add_subcommand("fillers", "Print the top-k fillers of a target for a slot");
  add_config(fillers, false);
  fillers->add_option("--space", opts.space_dir, "Space archive directory (instead of --config)");
  fillers->add_option("-t,--target", opts.target, "Target token, e.g. steal-v")->required();
  fillers->add_option("-s,--slot", opts.slot, "Relation, e.g. sbj, obj, ARG, WINDOW")->required();
  fillers->add_option("-k,--k", opts.k, "Number of fillers")->check(CLI::PositiveNumber);
  auto* eval = app.add_subcommand("eval", "Run a binary-selection task");
  add_config(eval, true);
  eval->add_option("--task", opts.tasks, "bicknell-acc1, bicknell-acc2 or chow")->required();
  eval->add_option("--variant", opts.variants, "e.g. DEPS-SUM (default: all configured)");
  eval->add_option("--k", opts.k_list, "Comma-separated k values (default: model.k)");
  auto* sweep = app.add_subcommand("sweep", "Evaluate every configured variant over a k grid");
  add_config(sweep, true);
  sweep->add_option("--task", opts.tasks, "Tasks (default: every configured dataset)");
  sweep->add_option("--variant", opts.variants, "Variants (default: all configured)");
  sweep->add_option("--k", opts.k_list, "Comma-separated k values (default: 10,20,30,40,50)");
  auto* report = app.add_subcommand("report", "Tabulate the reports in the output directory");
  add_config(report, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    return static_cast<int>(ExitCode::input_error);
  }

  try {
    if (*ingest) return cmd_ingest(opts, out, err);
    if (*weight) return cmd_weight(opts, out, err);
    if (*fillers) return cmd_fillers(opts, out, err);
    if (*eval) return cmd_eval(opts, out, err);
    if (*sweep) return cmd_sweep(opts, out, err);
    if (*report) return cmd_report(opts, out, err);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return static_cast<int>(e.code());
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return static_cast<int>(ExitCode::input_error);
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return static_cast<int>(ExitCode::internal_error);
  }
  return static_cast<int>(ExitCode::input_error);
}

}  // namespace argexp
