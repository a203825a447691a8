// Acceptance suite: one PASS/FAIL line per criterion. Exit status is
// nonzero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

#include <boost/math/distributions/chi_squared.hpp>

#include "argexp/counting.hpp"
#include "argexp/evaluation.hpp"
#include "argexp/pipeline.hpp"
#include "argexp/stats.hpp"
#include "argexp/weighting.hpp"
#include "support/model.hpp"
#include "support/oracles.hpp"
#include "support/synthetic.hpp"

using namespace argexp;
using namespace argexp::testing;
namespace fs = std::filesystem;

namespace {

const fs::path kData = ARGEXP_TEST_DATA;

struct Verdict {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok && pass) detail = what;
    pass = pass && ok;
  }
};

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("argexp_acceptance_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

std::map<std::string, std::string> snapshot(const fs::path& dir) {
  std::map<std::string, std::string> files;
  for (const auto& entry : fs::recursive_directory_iterator(dir))
    if (entry.is_regular_file()) files[fs::relative(entry.path(), dir).string()] = slurp(entry.path());
  return files;
}

PipelineConfig config_at(const fs::path& conf, const fs::path& output) {
  auto config = PipelineConfig::from(KeyValueConfig::load(conf));
  config.output_dir = output;
  return config;
}

std::string fmt(double x) { return format_score(x); }

// 1. Streaming pipeline tensors equal a naive recount.
Verdict counting_oracle() {
  Verdict o;
  const std::size_t sizes[] = {50, 200, 500};
  const std::uint64_t thresholds[] = {1, 2, 1};
  std::size_t entries = 0;
  for (std::size_t i = 0; i < 3; ++i) {
    const auto synth = random_corpus(sizes[i], 100 + i);
    const auto dir = scratch("c1_" + std::to_string(i));
    std::ofstream(dir / "corpus.conll") << to_conll(synth);
    std::ofstream(dir / "run.conf") << "corpus = corpus.conll\nvocab.threshold = " << thresholds[i]
                                    << "\nshards = " << (i + 2) << "\noutput = out\n";
    const auto config = PipelineConfig::from(KeyValueConfig::load(dir / "run.conf"));
    std::ostringstream log;
    run_ingest(config, log);
    std::ifstream dep_in(config.output_dir / "tensors" / "dependency.tsv");
    std::ifstream win_in(config.output_dir / "tensors" / "window.tsv");
    const auto dep = CooccurrenceTensor::read_tsv(dep_in);
    const auto win = CooccurrenceTensor::read_tsv(win_in);
    const auto vocab = oracle_vocabulary(synth, thresholds[i]);
    o.require(to_counts(dep) == oracle_dependency_counts(synth, vocab),
              "dependency tensor differs from recount on corpus " + std::to_string(i));
    o.require(to_counts(win) == oracle_window_counts(synth, vocab, 2),
              "window tensor differs from recount on corpus " + std::to_string(i));
    entries += dep.size() + win.size();
    fs::remove_all(dir);
  }
  if (o.pass) o.detail = "3 corpora (50/200/500 sentences), " + std::to_string(entries) + " entries equal";
  return o;
}

// 2. PLMI against a long double recomputation.
Verdict plmi_correctness() {
  Verdict o;
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<int> count(1, 40);
  CooccurrenceTensor t;
  for (const char* target : {"arrest-v", "check-v", "serve-v", "policeman-n", "burglar-n"})
    for (const char* relation : {"sbj", "obj", "VERB"})
      for (const char* filler : {"cop-n", "thief-n"}) t.add(target, relation, filler, static_cast<std::uint64_t>(count(rng)));
  o.require(t.size() == 30, "fixture is not 30 triples");
  const auto weighted = weight_tensor(t);
  const auto oracle = oracle_plmi(to_counts(t));
  o.require(weighted.size() == oracle.size(), "different number of positive scores");
  double worst = 0.0;
  std::size_t clipped = 0;
  for (const auto& [key, count] : t.entries()) {
    const long double n = t.total();
    const long double e = static_cast<long double>(t.target_marginal(key.target)) * t.relation_marginal(key.relation) *
                          t.filler_marginal(key.filler) / (n * n);
    const double score = weighted.score(key.target, key.relation, key.filler);
    if (static_cast<long double>(count) <= e) {
      ++clipped;
      o.require(!weighted.scores().contains(key), "O <= E triple present in output");
      continue;
    }
    const auto it = oracle.find({key.target, key.relation, key.filler});
    o.require(it != oracle.end(), "score missing from oracle");
    if (it == oracle.end()) continue;
    o.require(score > 0.0, "non-positive stored score");
    worst = std::max(worst, std::fabs(score - static_cast<double>(it->second)) / static_cast<double>(it->second));
  }
  o.require(worst <= 1e-9, "relative error " + fmt(worst));
  o.require(clipped > 0, "fixture has no O < E case");
  // O = E exactly: a uniform 2x2 table.
  CooccurrenceTensor uniform;
  for (const char* a : {"a-n", "b-n"})
    for (const char* f : {"x-n", "y-n"}) uniform.add(a, "r", f, 1);
  o.require(weight_tensor(uniform).size() == 0, "O = E triple present in output");
  if (o.pass) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "30 triples, max rel err %.2e, %zu clipped, O=E case absent", worst, clipped);
    o.detail = buf;
  }
  return o;
}

// 3. Cosine and composition algebra.
Verdict cosine_algebra() {
  Verdict o;
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<std::uint32_t> id(0, 63);
  std::uniform_real_distribution<double> value(1e-3, 100.0), factor(1e-3, 1e3);
  std::uniform_int_distribution<int> size(0, 24);
  auto random_vector = [&] {
    std::vector<std::pair<std::uint32_t, double>> pairs;
    for (int i = size(rng); i > 0; --i) pairs.emplace_back(id(rng), value(rng));
    return SparseVector::from_pairs(std::move(pairs));
  };
  std::vector<SparseVector> vectors;
  for (int i = 0; i < 1000; ++i) vectors.push_back(random_vector());
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    const auto& a = vectors[i];
    const auto& b = vectors[(i * 7 + 1) % vectors.size()];
    const double ab = cosine(a, b).value;
    o.require(std::fabs(ab - cosine(b, a).value) <= 1e-12, "cosine not symmetric");
    o.require(ab >= 0.0 && ab <= 1.0, "cosine out of range");
    o.require(std::fabs(cosine(scale(a, factor(rng)), b).value - ab) <= 1e-12, "cosine not scale invariant");
    if (!a.empty()) o.require(std::fabs(cosine(a, a).value - 1.0) <= 1e-12, "self cosine not 1");

    Prototype pa, pb;
    pa.vector = a;
    pb.vector = b;
    pa.space_id = pb.space_id = "s";
    std::set<std::uint32_t> sa(a.ids().begin(), a.ids().end()), sb(b.ids().begin(), b.ids().end()), uni = sa, inter;
    uni.insert(sb.begin(), sb.end());
    for (auto x : sa)
      if (sb.contains(x)) inter.insert(x);
    for (auto op : {Composition::sum, Composition::mult}) {
      const auto ab_vec = compose(pa, pb, op).vector;
      const auto ba_vec = compose(pb, pa, op).vector;
      o.require(std::equal(ab_vec.ids().begin(), ab_vec.ids().end(), ba_vec.ids().begin(), ba_vec.ids().end()),
                "composition support not commutative");
      for (std::size_t j = 0; j < ab_vec.size() && j < ba_vec.size(); ++j)
        o.require(std::fabs(ab_vec.values()[j] - ba_vec.values()[j]) <= 1e-12 * ab_vec.values()[j],
                  "composition not commutative");
      const std::set<std::uint32_t> support(ab_vec.ids().begin(), ab_vec.ids().end());
      o.require(support == (op == Composition::sum ? uni : inter),
                op == Composition::sum ? "SUM support is not the union" : "MULT support is not the intersection");
    }
  }
  if (o.pass) o.detail = "1000 random sparse vectors: symmetry, scale, range, supports, commutativity";
  return o;
}

// 4. Unstructured models cannot tell role-reversed triples apart.
Verdict unstructured_symmetry() {
  Verdict o;
  const auto corpus = random_corpus(400, 404);
  const auto built = library_spaces(corpus);
  const auto spaces = built.spaces.view(BoaVectors::dependency);
  const auto items = random_chow_items(50, 405);
  std::size_t scored = 0;
  for (auto kind : {ModelKind::boa, ModelKind::bow}) {
    for (auto op : {Composition::sum, Composition::mult}) {
      const auto r = run_chow(spaces, {kind, 20, op}, items, default_chow_slots(kind));
      const auto label = r.variant.label();
      for (const auto& p : r.pairs)
        o.require(std::fabs(p.score_a - p.score_b) < 1e-12, label + " item " + p.id + " differs");
      o.require(r.n_scored >= 40, label + " scored only " + std::to_string(r.n_scored) + " items");
      o.require(r.all_ties && r.n_ties == r.n_scored, label + " not all ties");
      o.require(report_json(r, "x").find("all ties") != std::string::npos, label + " report lacks all-ties annotation");
      scored += r.n_scored;
    }
  }
  if (o.pass) o.detail = "50 items x BOA/BOW x SUM/MULT, " + std::to_string(scored) + " scored pairs, all exact ties";
  return o;
}

// 5. DEPS separates conditions that BOW cannot.
Verdict deps_discriminability() {
  Verdict o;
  const auto crafted = crafted_bicknell(10);
  const auto built = library_spaces(crafted.corpus);
  const auto spaces = built.spaces.view(BoaVectors::dependency);
  const auto deps = run_bicknell(spaces, {ModelKind::deps, 20, Composition::sum}, crafted.items, BicknellMode::acc2,
                                 default_bicknell_slots(ModelKind::deps));
  const auto bow = run_bicknell(spaces, {ModelKind::bow, 20, Composition::sum}, crafted.items, BicknellMode::acc2,
                                default_bicknell_slots(ModelKind::bow));
  std::size_t strict = 0;
  for (const auto& p : deps.pairs) strict += p.score_a > p.score_b;
  o.require(deps.n_items == 10 && strict == 10, "DEPS-SUM strictly higher on " + std::to_string(strict) + "/10");
  o.require(bow.accuracy && *bow.accuracy >= 0.3 && *bow.accuracy <= 0.7,
            "BOW accuracy " + (bow.accuracy ? fmt(*bow.accuracy) : std::string("undefined")));

  const auto oracle = oracle_model(crafted.corpus);
  double worst = 0.0;
  for (const auto* report : {&deps, &bow}) {
    const bool is_deps = report == &deps;
    const std::string s1 = is_deps ? "VERB" : "WINDOW", s2 = is_deps ? "obj" : "WINDOW";
    for (std::size_t i = 0; i < crafted.items.size(); ++i) {
      const auto& item = crafted.items[i];
      const auto a = oracle_expectation(oracle, is_deps ? "DEPS" : "BOW", "SUM", 20,
                                        {{item.agent_congruent, s1}, {item.verb, s2}}, item.patient_congruent);
      const auto b = oracle_expectation(oracle, is_deps ? "DEPS" : "BOW", "SUM", 20,
                                        {{*item.agent_incongruent, s1}, {item.verb, s2}}, item.patient_congruent);
      worst = std::max({worst, std::fabs(report->pairs[i].score_a - static_cast<double>(a)),
                        std::fabs(report->pairs[i].score_b - static_cast<double>(b))});
    }
  }
  o.require(worst <= 1e-12, "brute-force recomputation differs by " + fmt(worst));
  if (o.pass) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "DEPS-SUM 10/10 strict, BOW accuracy %.2f, oracle max diff %.1e",
                  *bow.accuracy, worst);
    o.detail = buf;
  }
  return o;
}

// 6. Statistics against reference implementations.
Verdict statistics() {
  Verdict o;
  boost::math::chi_squared_distribution<double> ref(1.0);
  double worst = 0.0;
  for (int i = 0; i < 20; ++i) {
    const double x = 0.1 + i * 1.2;
    worst = std::max(worst, std::fabs(chi_square_sf_1df(x) - boost::math::cdf(boost::math::complement(ref, x))));
  }
  o.require(worst <= 1e-10, "chi-square p differs from reference by " + fmt(worst));
  const auto c = chi_square_vs_chance(62, 100);
  o.require(std::fabs(c.statistic - 5.76) <= 1e-12, "chi2(62,100) = " + fmt(c.statistic));
  o.require(std::lround(c.p * 1e4) == 164, "p(62,100) = " + fmt(c.p));

  std::mt19937_64 rng(5660);
  std::uniform_int_distribution<int> size(3, 80), level(0, 15);
  double worst_w = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const auto n = static_cast<std::size_t>(size(rng));
    std::vector<double> a(n), b(n);
    for (auto& x : a) x = level(rng) / 5.0;
    for (auto& x : b) x = level(rng) / 5.0 + (trial % 3 == 0 ? 0.6 : 0.0);
    const auto r = wilcoxon_rank_sum(a, b);
    const auto ref_r = oracle_rank_sum(a, b);
    worst_w = std::max({worst_w, std::fabs(r.w - static_cast<double>(ref_r.w)),
                        std::fabs(r.p - static_cast<double>(ref_r.p))});
    const double total = static_cast<double>(2 * n) * static_cast<double>(2 * n + 1) / 2;
    o.require(r.w + wilcoxon_rank_sum(b, a).w == total, "rank conservation violated");
  }
  o.require(worst_w <= 1e-9, "rank-sum differs from reference by " + fmt(worst_w));
  if (o.pass) {
    char buf[200];
    std::snprintf(buf, sizeof buf, "chi2 grid err %.1e; chi2(62,100)=%.2f p=%.4f; 100 rank-sum samples err %.1e",
                  worst, c.statistic, c.p, worst_w);
    o.detail = buf;
  }
  return o;
}

void run_fixture_pipeline(const fs::path& output) {
  const auto config = config_at(kData / "fixture10" / "fixture.conf", output);
  std::ostringstream log;
  run_ingest(config, log);
  run_weight(config, log);
  const auto spaces = load_spaces(config);
  std::vector<ModelVariant> variants;
  for (auto kind : config.kinds)
    for (auto op : config.compositions) variants.push_back({kind, 1, op});
  run_eval(config, spaces, Task::bicknell_acc2, variants, {10, 20, 30, 40, 50}, log);
}

// 7. Determinism, archive round trip, prefix stability.
Verdict determinism() {
  Verdict o;
  const auto a = scratch("c7_a"), b = scratch("c7_b");
  run_fixture_pipeline(a / "out");
  run_fixture_pipeline(b / "out");
  const auto fa = snapshot(a / "out"), fb = snapshot(b / "out");
  o.require(fa.size() > 30, "too few artifacts");
  o.require(fa == fb, "reruns differ");

  const auto space = WeightedSpace::load(a / "out" / "spaces" / "dependency");
  space.save(b / "copy", WeightedSpace::archive_config_hash(a / "out" / "spaces" / "dependency"));
  o.require(snapshot(b / "copy") == snapshot(a / "out" / "spaces" / "dependency"), "archive not bit-exact");
  const auto back = WeightedSpace::load(b / "copy");
  for (const auto& t : space.targets()) o.require(back.vector_of(t) == space.vector_of(t), "vector changed in round trip");

  std::size_t lists = 0;
  for (const auto& [key, fillers] : space.index().lists()) {
    std::vector<std::string> previous;
    for (std::size_t k : kReplicationK) {
      const auto top = space.top_k_fillers(key.first, key.second, k).fillers;
      o.require(top.size() >= previous.size() && std::equal(previous.begin(), previous.end(), top.begin()),
                "top-k not prefix stable for " + key.first + " " + key.second);
      previous = top;
    }
    ++lists;
  }
  fs::remove_all(a);
  fs::remove_all(b);
  if (o.pass)
    o.detail = std::to_string(fa.size()) + " artifacts byte-identical, archive bit-exact, " + std::to_string(lists) +
               " filler lists prefix-stable";
  return o;
}

// 8. Checked-in fixture reproduces pinned values.
Verdict fixture_replication() {
  Verdict o;
  const auto dir = scratch("c8");
  run_fixture_pipeline(dir / "out");
  const auto reports = dir / "out" / "reports";
  struct Pin {
    const char* file;
    const char* accuracy;
    const char* chi_square;
    const char* w;
    const char* p;
  };
  // Pinned after the first run verified against the brute-force oracle.
  const Pin pins[] = {
      {"bicknell-acc2.DEPS-SUM.k20.json", "1.0", "10.0", "155.0", "1.5937911688066275e-05"},
      {"bicknell-acc2.DEPS-MULT.k20.json", "1.0", "10.0", "155.0", "1.5937911688066275e-05"},
      {"bicknell-acc2.BOW-SUM.k20.json", "0.5", "0.0", "105.0", "1.0"},
      {"bicknell-acc2.BOW-MULT.k20.json", "0.5", "0.0", "105.0", "1.0"},
  };
  std::ostringstream observed;
  for (const auto& pin : pins) {
    const auto text = slurp(reports / pin.file);
    // Value of "key" inside the object that follows "section" (or at top level).
    auto field = [&](const std::string& section, const std::string& key) {
      std::size_t from = 0;
      if (!section.empty()) {
        from = text.find("\"" + section + "\": {");
        if (from == std::string::npos) return std::string("missing");
      }
      const auto at = text.find("\"" + key + "\": ", from);
      if (at == std::string::npos) return std::string("missing");
      const auto start = at + key.size() + 4;
      return text.substr(start, text.find_first_of(",\n}", start) - start);
    };
    const auto accuracy = field("", "accuracy");
    const auto statistic = field("chi_square", "statistic");
    const auto w = field("wilcoxon", "W");
    const auto p = field("wilcoxon", "p");
    observed << pin.file << " accuracy=" << accuracy << " chi2=" << statistic << " W=" << w << " p=" << p << "\n";
    o.require(accuracy == pin.accuracy && statistic == pin.chi_square && w == pin.w && p == pin.p,
              std::string(pin.file) + " differs from pinned values");
  }
  fs::remove_all(dir);
  if (!o.pass) std::cerr << observed.str();
  if (o.pass) o.detail = "4 reports match pinned accuracy, chi2, W and p exactly";
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double limit_seconds;  // 0: no runtime bound
    std::function<Verdict()> run;
  };
  const Criterion criteria[] = {
      {1, "counting oracle equivalence", 5.0, counting_oracle},
      {2, "PLMI correctness", 1.0, plmi_correctness},
      {3, "cosine and composition algebra", 10.0, cosine_algebra},
      {4, "unstructured symmetry", 5.0, unstructured_symmetry},
      {5, "DEPS discriminability", 10.0, deps_discriminability},
      {6, "statistics validation", 0.0, statistics},
      {7, "determinism and round trip", 0.0, determinism},
      {8, "fixture replication", 0.0, fixture_replication},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Verdict outcome;
    try {
      outcome = c.run();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.limit_seconds > 0 && seconds >= c.limit_seconds) {
      outcome.pass = false;
      outcome.detail += " (runtime over limit)";
    }
    char timing[64];
    if (c.limit_seconds > 0) {
      std::snprintf(timing, sizeof timing, "%.2fs < %.0fs", seconds, c.limit_seconds);
    } else {
      std::snprintf(timing, sizeof timing, "%.2fs", seconds);
    }
    std::cout << (outcome.pass ? "[PASS] " : "[FAIL] ") << c.id << ". " << c.name << " (" << timing
              << "): " << outcome.detail << std::endl;
    failures += outcome.pass ? 0 : 1;
  }
  return failures == 0 ? 0 : 1;
}
