#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "argexp/cli.hpp"
#include "support/synthetic.hpp"

using namespace argexp;
using namespace argexp::testing;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "argexp");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

void write(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

std::string read(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

// A workspace with corpus, datasets and config, all referenced relatively.
fs::path workspace(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("argexp_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  const auto crafted = crafted_bicknell(4);
  write(dir / "corpus.conll", to_conll(crafted.corpus));
  std::string tsv = "item_id\tagent_congruent\tagent_incongruent\tverb\tpatient\n";
  for (const auto& item : crafted.items)
    tsv += item.id + "\t" + item.agent_congruent + "\t" + *item.agent_incongruent + "\t" + item.verb + "\t" +
           item.patient_congruent + "\n";
  write(dir / "bicknell.tsv", tsv);
  write(dir / "chow.tsv", "item_id\tverb\tnoun1\tnoun2\nc1\tact0-v\tagenta0-n\tpata0x0-n\n");
  write(dir / "run.conf",
        "corpus = corpus.conll\ndataset.bicknell = bicknell.tsv\ndataset.chow = chow.tsv\n"
        "model.kinds = DEPS,BOW\nmodel.compositions = sum\noutput = out\n");
  return dir;
}

std::map<std::string, std::string> snapshot(const fs::path& dir) {
  std::map<std::string, std::string> files;
  for (const auto& entry : fs::recursive_directory_iterator(dir)) {
    if (entry.is_regular_file()) files[fs::relative(entry.path(), dir).string()] = read(entry.path());
  }
  return files;
}

}  // namespace

TEST_CASE("usage errors") {
  CHECK(run({}).code == 2);
  CHECK(run({"frobnicate"}).code == 2);
  CHECK(run({"ingest"}).code == 2);
  CHECK(run({"ingest", "-c", "/nonexistent.conf"}).code == 2);
  CHECK(run({"--help"}).code == 0);
}

TEST_CASE("full pipeline through the command line") {
  const auto dir = workspace("full");
  const auto conf = (dir / "run.conf").string();

  auto r = run({"ingest", "-c", conf});
  REQUIRE_MESSAGE(r.code == 0, r.err);
  CHECK(r.out.find("malformed rows 0") != std::string::npos);
  CHECK(fs::exists(dir / "out" / "tensors" / "dependency.tsv"));
  CHECK(fs::exists(dir / "out" / "vocabulary.tsv"));

  r = run({"weight", "-c", conf});
  REQUIRE_MESSAGE(r.code == 0, r.err);
  CHECK(fs::exists(dir / "out" / "spaces" / "dependency" / "manifest.json"));

  r = run({"fillers", "-c", conf, "-t", "agenta0-n", "-s", "VERB", "-k", "3"});
  CHECK(r.code == 0);
  CHECK(r.out == "pata0x2-n, pata0x1-n, pata0x0-n\n");
  r = run({"fillers", "--space", (dir / "out" / "spaces" / "dependency").string(), "-t", "act0-v", "-s", "obj", "-k", "100"});
  CHECK(r.code == 0);
  CHECK(r.err.find("only 6 of 100") != std::string::npos);
  CHECK(run({"fillers", "-c", conf, "-t", "blorf-n", "-s", "obj"}).code == 3);
  CHECK(run({"fillers", "-c", conf, "-t", "act0-v", "-s", "nosuch"}).code == 3);

  r = run({"eval", "-c", conf, "--task", "bicknell-acc2", "--variant", "DEPS-SUM", "--k", "10,20"});
  REQUIRE_MESSAGE(r.code == 0, r.err);
  CHECK(r.out.find("DEPS-SUM") != std::string::npos);
  CHECK(fs::exists(dir / "out" / "reports" / "bicknell-acc2.DEPS-SUM.k10.json"));
  CHECK(fs::exists(dir / "out" / "reports" / "bicknell-acc2.DEPS-SUM.k20.items.csv"));
  CHECK(fs::exists(dir / "out" / "reports" / "bicknell-acc2.accuracy_by_k.csv"));

  r = run({"sweep", "-c", conf, "--k", "10,20"});
  REQUIRE_MESSAGE(r.code == 0, r.err);
  CHECK(fs::exists(dir / "out" / "reports" / "chow.BOW-SUM.k20.json"));

  r = run({"report", "-c", conf});
  CHECK(r.code == 0);
  CHECK(r.out.find("bicknell-acc2") != std::string::npos);

  CHECK(run({"eval", "-c", conf, "--task", "nosuch"}).code == 2);
  CHECK(run({"eval", "-c", conf, "--task", "chow", "--variant", "XYZ"}).code == 2);
  CHECK(run({"eval", "-c", conf, "--task", "chow", "--k", "0"}).code == 2);
}

TEST_CASE("stale artifacts are rejected") {
  const auto dir = workspace("stale");
  const auto conf = (dir / "run.conf").string();
  REQUIRE(run({"ingest", "-c", conf}).code == 0);
  CHECK(run({"weight", "-c", conf, "--set", "vocab.threshold=2"}).code == 2);
  REQUIRE(run({"weight", "-c", conf}).code == 0);
  CHECK(run({"eval", "-c", conf, "--task", "chow", "--set", "weight.log_base=2"}).code == 2);
  CHECK(run({"eval", "-c", conf, "--task", "chow", "--set", "model.k=30"}).code == 0);
}

TEST_CASE("reruns are byte identical") {
  std::map<std::string, std::string> first;
  for (const char* name : {"det_a", "det_b"}) {
    const auto dir = workspace(name);
    const auto conf = (dir / "run.conf").string();
    REQUIRE(run({"ingest", "-c", conf, "--set", "shards=3"}).code == 0);
    REQUIRE(run({"weight", "-c", conf}).code == 0);
    REQUIRE(run({"sweep", "-c", conf}).code == 0);
    const auto files = snapshot(dir / "out");
    CHECK(files.size() > 20);
    if (first.empty()) {
      first = files;
    } else {
      CHECK(files == first);
    }
  }
}

TEST_CASE("lock prevents concurrent stages") {
  const auto dir = workspace("lock");
  const auto conf = (dir / "run.conf").string();
  fs::create_directories(dir / "out");
  write(dir / "out" / ".argexp.lock", "");
  CHECK(run({"ingest", "-c", conf}).code == 2);
  fs::remove(dir / "out" / ".argexp.lock");
  CHECK(run({"ingest", "-c", conf}).code == 0);
  CHECK(!fs::exists(dir / "out" / ".argexp.lock"));
}
