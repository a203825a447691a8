#include "argexp/config.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <fstream>

#include "argexp/errors.hpp"
#include "argexp/hash.hpp"

namespace argexp {

namespace fs = std::filesystem;

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

}  // namespace

std::vector<std::string> split_list(std::string_view text) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto comma = text.find(',', start);
    const auto item = trim(text.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
    if (!item.empty()) out.emplace_back(item);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

KeyValueConfig KeyValueConfig::parse(std::istream& in, std::string_view source) {
  KeyValueConfig config;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw LoadError(std::string(source), line_no, "expected key = value");
    const auto key = trim(line.substr(0, eq));
    if (key.empty()) throw LoadError(std::string(source), line_no, "empty key");
    config.set(std::string(key), std::string(trim(line.substr(eq + 1))));
  }
  return config;
}

KeyValueConfig KeyValueConfig::load(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read config " + path.string());
  auto config = parse(in, path.string());
  config.set_base_dir(path.parent_path().empty() ? fs::path(".") : path.parent_path());
  return config;
}

std::optional<std::string> KeyValueConfig::get(std::string_view key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return std::nullopt;
  return it->second;
}

std::string KeyValueConfig::get_or(std::string_view key, std::string_view fallback) const {
  auto value = get(key);
  return value ? *value : std::string(fallback);
}

std::vector<std::string> KeyValueConfig::list(std::string_view key) const {
  auto value = get(key);
  return value ? split_list(*value) : std::vector<std::string>{};
}

namespace {

const std::vector<std::string_view> kIngestKeys = {
    "corpus", "columns.form", "columns.lemma", "columns.pos", "columns.head", "columns.relation",
    "pos.map", "vocab.threshold", "vocab.inclusive", "window.width", "window.positions",
    "relations.allow", "relations.deny", "relations.subject", "relations.object", "relations.verb"};
const std::vector<std::string_view> kWeightKeys = {"weight.log_base", "boa.typicality",
                                                   "boa.relations", "boa.inverse_relations"};
const std::vector<std::string_view> kOtherKeys = {
    "shards", "boa.vectors", "model.kinds", "model.k", "model.compositions", "dataset.bicknell",
    "dataset.chow", "output", "threads"};
// Keys that never change artifact contents.
const std::vector<std::string_view> kUnhashedKeys = {"shards", "output", "threads"};

bool is_slot_key(std::string_view key) {
  for (const auto* kind : {"DEPS", "BOA", "BOW"}) {
    for (const auto* field : {"agent", "verb"}) {
      if (key == std::string("slots.bicknell.") + kind + "." + field) return true;
    }
    for (const auto* field : {"noun1", "noun2"}) {
      if (key == std::string("slots.chow.") + kind + "." + field) return true;
    }
  }
  return false;
}

bool known_key(std::string_view key) {
  auto in = [&](const std::vector<std::string_view>& keys) {
    return std::find(keys.begin(), keys.end(), key) != keys.end();
  };
  return in(kIngestKeys) || in(kWeightKeys) || in(kOtherKeys) || is_slot_key(key);
}

std::uint64_t parse_uint(const KeyValueConfig& raw, std::string_view key, std::uint64_t fallback) {
  const auto value = raw.get(key);
  if (!value) return fallback;
  std::uint64_t out = 0;
  auto [ptr, ec] = std::from_chars(value->data(), value->data() + value->size(), out);
  if (ec != std::errc{} || ptr != value->data() + value->size()) {
    throw InputError("config key " + std::string(key) + " expects a non-negative integer, got '" + *value + "'");
  }
  return out;
}

bool parse_bool(const KeyValueConfig& raw, std::string_view key, bool fallback) {
  const auto value = raw.get(key);
  if (!value) return fallback;
  if (*value == "true" || *value == "1" || *value == "yes") return true;
  if (*value == "false" || *value == "0" || *value == "no") return false;
  throw InputError("config key " + std::string(key) + " expects a boolean, got '" + *value + "'");
}

fs::path resolve(const KeyValueConfig& raw, const std::string& value) {
  fs::path p(value);
  return p.is_absolute() ? p : raw.base_dir() / p;
}

RelationSet relation_set(const std::vector<std::string>& items) {
  return RelationSet(items.begin(), items.end());
}

std::string hash_keys(const KeyValueConfig& raw, const std::vector<std::string_view>& keys) {
  Fnv1a h;
  for (const auto key : keys) {
    if (auto value = raw.get(key)) h.update(key).update("=").update(*value).update("\n");
  }
  return hex_digest(h.digest());
}

}  // namespace

PipelineConfig PipelineConfig::from(const KeyValueConfig& raw) {
  for (const auto& [key, value] : raw.values()) {
    if (!known_key(key)) throw InputError("unknown config key '" + key + "'");
  }
  PipelineConfig c;
  c.raw = raw;
  for (const auto& path : raw.list("corpus")) c.corpus.push_back(resolve(raw, path));

  c.columns.form = parse_uint(raw, "columns.form", c.columns.form);
  c.columns.lemma = parse_uint(raw, "columns.lemma", c.columns.lemma);
  c.columns.pos = parse_uint(raw, "columns.pos", c.columns.pos);
  c.columns.head = parse_uint(raw, "columns.head", c.columns.head);
  c.columns.relation = parse_uint(raw, "columns.relation", c.columns.relation);

  if (raw.has("pos.map")) {
    std::vector<std::pair<std::string, Pos>> rules;
    for (const auto& rule : raw.list("pos.map")) {
      const auto colon = rule.find(':');
      const auto pos = colon == std::string::npos ? std::string{} : rule.substr(colon + 1);
      if (colon == std::string::npos || (pos != "n" && pos != "v")) {
        throw InputError("pos.map entries look like PREFIX:n or PREFIX:v, got '" + rule + "'");
      }
      rules.emplace_back(rule.substr(0, colon), pos == "n" ? Pos::noun : Pos::verb);
    }
    c.pos_map = PosMap(std::move(rules));
  }

  c.vocabulary.threshold = parse_uint(raw, "vocab.threshold", 1);
  if (c.vocabulary.threshold == 0) throw InputError("vocab.threshold must be at least 1");
  c.vocabulary.inclusive = parse_bool(raw, "vocab.inclusive", true);

  c.counting.window_width = parse_uint(raw, "window.width", 2);
  if (c.counting.window_width == 0) throw InputError("window.width must be at least 1");
  const auto positions = raw.get_or("window.positions", "raw");
  if (positions == "raw") {
    c.counting.window_positions = WindowPositions::raw;
  } else if (positions == "filtered") {
    c.counting.window_positions = WindowPositions::filtered;
  } else {
    throw InputError("window.positions is raw or filtered");
  }
  c.counting.relations.allow = relation_set(raw.list("relations.allow"));
  c.counting.relations.deny = relation_set(raw.list("relations.deny"));
  if (raw.has("relations.subject")) c.counting.subject_relations = relation_set(raw.list("relations.subject"));
  if (raw.has("relations.object")) c.counting.object_relations = relation_set(raw.list("relations.object"));
  c.counting.verb_relation = parse_bool(raw, "relations.verb", true);
  c.shards = std::max<std::uint64_t>(1, parse_uint(raw, "shards", 1));

  const auto base = parse_log_base(raw.get_or("weight.log_base", "e"));
  if (!base) throw InputError("weight.log_base is e or 2");
  c.log_base = *base;

  const auto typicality = raw.get_or("boa.typicality", "collapsed");
  if (typicality == "collapsed") {
    c.boa_typicality = BoaTypicality::collapsed;
  } else if (typicality == "max") {
    c.boa_typicality = BoaTypicality::max;
  } else {
    throw InputError("boa.typicality is collapsed or max");
  }
  const auto vectors = raw.get_or("boa.vectors", "dependency");
  if (vectors == "dependency") {
    c.boa_vectors = BoaVectors::dependency;
  } else if (vectors == "window") {
    c.boa_vectors = BoaVectors::window;
  } else {
    throw InputError("boa.vectors is dependency or window");
  }
  if (raw.has("boa.relations")) c.boa_relations = relation_set(raw.list("boa.relations"));
  if (raw.has("boa.inverse_relations")) c.boa_inverse_relations = relation_set(raw.list("boa.inverse_relations"));

  if (raw.has("model.kinds")) {
    c.kinds.clear();
    for (const auto& item : raw.list("model.kinds")) {
      const auto kind = parse_model_kind(item);
      if (!kind) throw InputError("unknown model kind '" + item + "'");
      c.kinds.push_back(*kind);
    }
  }
  if (raw.has("model.k")) {
    c.k_values.clear();
    for (const auto& item : raw.list("model.k")) {
      std::size_t k = 0;
      auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), k);
      if (ec != std::errc{} || ptr != item.data() + item.size() || k == 0) {
        throw InputError("model.k entries must be positive integers, got '" + item + "'");
      }
      c.k_values.push_back(k);
    }
  }
  if (raw.has("model.compositions")) {
    c.compositions.clear();
    for (const auto& item : raw.list("model.compositions")) {
      const auto op = parse_composition(item);
      if (!op) throw InputError("unknown composition '" + item + "'");
      c.compositions.push_back(*op);
    }
  }
  if (auto path = raw.get("dataset.bicknell")) c.bicknell = resolve(raw, *path);
  if (auto path = raw.get("dataset.chow")) c.chow = resolve(raw, *path);
  if (auto dir = raw.get("output")) c.output_dir = resolve(raw, *dir);
  c.threads = static_cast<int>(parse_uint(raw, "threads", 0));

  try {
    for (const auto kind : {ModelKind::deps, ModelKind::boa, ModelKind::bow}) {
      const auto b = c.bicknell_slots(kind);
      validate_slot(kind, b.agent);
      validate_slot(kind, b.verb);
      const auto ch = c.chow_slots(kind);
      validate_slot(kind, ch.noun1);
      validate_slot(kind, ch.noun2);
    }
  } catch (const QueryError& e) {
    throw InputError(std::string("config slot mapping: ") + e.what());
  }
  return c;
}

void PipelineConfig::apply_environment() {
  if (const char* dir = std::getenv("ARGEXP_OUTPUT_DIR"); dir && *dir) output_dir = dir;
  if (const char* threads_env = std::getenv("ARGEXP_THREADS"); threads_env && *threads_env) {
    threads = std::atoi(threads_env);
  }
}

BicknellSlots PipelineConfig::bicknell_slots(ModelKind kind) const {
  auto slots = default_bicknell_slots(kind);
  const auto prefix = "slots.bicknell." + std::string(to_string(kind)) + ".";
  slots.agent = raw.get_or(prefix + "agent", slots.agent);
  slots.verb = raw.get_or(prefix + "verb", slots.verb);
  return slots;
}

ChowSlots PipelineConfig::chow_slots(ModelKind kind) const {
  auto slots = default_chow_slots(kind);
  const auto prefix = "slots.chow." + std::string(to_string(kind)) + ".";
  slots.noun1 = raw.get_or(prefix + "noun1", slots.noun1);
  slots.noun2 = raw.get_or(prefix + "noun2", slots.noun2);
  return slots;
}

std::string PipelineConfig::hash() const {
  Fnv1a h;
  for (const auto& [key, value] : raw.values()) {
    if (std::find(kUnhashedKeys.begin(), kUnhashedKeys.end(), key) != kUnhashedKeys.end()) continue;
    h.update(key).update("=").update(value).update("\n");
  }
  return hex_digest(h.digest());
}

std::string PipelineConfig::ingest_hash() const { return hash_keys(raw, kIngestKeys); }

std::string PipelineConfig::weight_hash() const {
  auto keys = kIngestKeys;
  keys.insert(keys.end(), kWeightKeys.begin(), kWeightKeys.end());
  return hash_keys(raw, keys);
}

}  // namespace argexp
