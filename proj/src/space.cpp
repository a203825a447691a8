#include "argexp/space.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "argexp/errors.hpp"
#include "argexp/hash.hpp"

namespace argexp {

namespace fs = std::filesystem;

DimensionCatalog::DimensionCatalog(std::vector<Dimension> dimensions)
    : dimensions_(std::move(dimensions)) {
  std::sort(dimensions_.begin(), dimensions_.end());
  dimensions_.erase(std::unique(dimensions_.begin(), dimensions_.end()), dimensions_.end());
}

std::optional<std::uint32_t> DimensionCatalog::id_of(std::string_view relation,
                                                     std::string_view filler) const {
  const auto it = std::lower_bound(
      dimensions_.begin(), dimensions_.end(), std::pair{relation, filler},
      [](const Dimension& d, const std::pair<std::string_view, std::string_view>& key) {
        return std::tie(d.relation, d.filler) < std::tie(key.first, key.second);
      });
  if (it == dimensions_.end() || it->relation != relation || it->filler != filler) return std::nullopt;
  return static_cast<std::uint32_t>(it - dimensions_.begin());
}

namespace {

void sort_ranked(std::vector<RankedFiller>& list) {
  std::sort(list.begin(), list.end(), [](const RankedFiller& a, const RankedFiller& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.filler < b.filler;
  });
}

}  // namespace

FillerIndex::FillerIndex(Lists lists) : lists_(std::move(lists)) {
  for (auto& [key, list] : lists_) sort_ranked(list);
}

FillerIndex FillerIndex::build(std::span<const WeightedTensor* const> sources) {
  Lists lists;
  for (const auto* source : sources) {
    for (const auto& [key, score] : source->scores()) {
      auto it = lists.find(KeyView{key.target, key.relation});
      if (it == lists.end()) it = lists.emplace(Key{key.target, key.relation}, std::vector<RankedFiller>{}).first;
      it->second.push_back({key.filler, score});
    }
  }
  return FillerIndex(std::move(lists));
}

std::span<const RankedFiller> FillerIndex::fillers(std::string_view target,
                                                   std::string_view relation) const {
  const auto it = lists_.find(KeyView{target, relation});
  if (it == lists_.end()) return {};
  return it->second;
}

std::string TopK::joined() const {
  std::string out;
  for (const auto& filler : fillers) {
    if (!out.empty()) out += ", ";
    out += filler;
  }
  return out;
}

WeightedSpace WeightedSpace::build(std::string name, const WeightedTensor& rows,
                                   std::span<const std::string> vocabulary,
                                   std::span<const WeightedTensor* const> index_only) {
  WeightedSpace space;
  space.name_ = std::move(name);

  std::vector<Dimension> dims;
  std::set<std::string, std::less<>> targets(vocabulary.begin(), vocabulary.end());
  for (const auto& [key, score] : rows.scores()) {
    dims.push_back({key.relation, key.filler});
    targets.insert(key.target);
  }
  space.catalog_ = DimensionCatalog(std::move(dims));
  space.targets_.assign(targets.begin(), targets.end());

  // Scores are sorted by target, so each row is a contiguous run.
  space.rows_.resize(space.targets_.size());
  auto it = rows.scores().begin();
  for (std::size_t t = 0; t < space.targets_.size(); ++t) {
    std::vector<std::pair<std::uint32_t, double>> pairs;
    for (; it != rows.scores().end() && it->first.target == space.targets_[t]; ++it) {
      pairs.emplace_back(*space.catalog_.id_of(it->first.relation, it->first.filler), it->second);
    }
    space.rows_[t] = SparseVector::from_pairs(std::move(pairs));
  }

  std::vector<const WeightedTensor*> sources{&rows};
  sources.insert(sources.end(), index_only.begin(), index_only.end());
  space.index_ = FillerIndex::build(sources);
  space.id_ = content_id(space.name_, space.serialize());
  return space;
}

bool WeightedSpace::contains(std::string_view target) const {
  return std::binary_search(targets_.begin(), targets_.end(), target);
}

const SparseVector& WeightedSpace::vector_of(std::string_view target) const {
  const auto it = std::lower_bound(targets_.begin(), targets_.end(), target);
  if (it == targets_.end() || *it != target) throw OutOfVocabularyError(std::string(target));
  return rows_[static_cast<std::size_t>(it - targets_.begin())];
}

TopK WeightedSpace::top_k_fillers(std::string_view target, std::string_view relation,
                                  std::size_t k) const {
  if (k == 0) throw QueryError("k must be at least 1");
  TopK out;
  out.requested = k;
  const auto list = index_.fillers(target, relation);
  out.no_fillers = list.empty();
  const auto n = std::min(k, list.size());
  out.shortfall = n < k;
  for (std::size_t i = 0; i < n; ++i) {
    out.fillers.push_back(list[i].filler);
    out.scores.push_back(list[i].score);
  }
  return out;
}

// Archive encoding ----------------------------------------------------------

namespace {

constexpr std::string_view kRowsMagic = "ARGEXP-ROWS/1\n";

void put_varint(std::string& out, std::uint64_t value) {
  while (value >= 0x80) {
    out.push_back(static_cast<char>((value & 0x7f) | 0x80));
    value >>= 7;
  }
  out.push_back(static_cast<char>(value));
}

void put_u64(std::string& out, std::uint64_t value) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((value >> (8 * i)) & 0xff));
}

class ByteReader {
 public:
  explicit ByteReader(std::string_view bytes) : bytes_(bytes) {}

  std::uint64_t varint() {
    std::uint64_t value = 0;
    for (int shift = 0; shift < 64; shift += 7) {
      const auto byte = static_cast<unsigned char>(take(1)[0]);
      value |= std::uint64_t{byte & 0x7fu} << shift;
      if (!(byte & 0x80)) return value;
    }
    throw InputError("corrupt varint in rows.bin");
  }
  std::uint64_t u64() {
    const auto raw = take(8);
    std::uint64_t value = 0;
    for (int i = 7; i >= 0; --i) value = (value << 8) | static_cast<unsigned char>(raw[static_cast<std::size_t>(i)]);
    return value;
  }
  std::string_view take(std::size_t n) {
    if (pos_ + n > bytes_.size()) throw InputError("truncated rows.bin");
    const auto out = bytes_.substr(pos_, n);
    pos_ += n;
    return out;
  }
  bool done() const { return pos_ == bytes_.size(); }

 private:
  std::string_view bytes_;
  std::size_t pos_ = 0;
};

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const fs::path& path, std::string_view bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InputError("cannot write " + path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw InputError("write failed: " + path.string());
}

std::vector<std::string> split(std::string_view line, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto at = line.find(sep, start);
    out.emplace_back(line.substr(start, at == std::string_view::npos ? std::string_view::npos : at - start));
    if (at == std::string_view::npos) return out;
    start = at + 1;
  }
}

}  // namespace

WeightedSpace::Serialized WeightedSpace::serialize() const {
  Serialized s;
  for (std::size_t id = 0; id < catalog_.size(); ++id) {
    const auto& d = catalog_.at(static_cast<std::uint32_t>(id));
    s.catalog += std::to_string(id) + '\t' + d.relation + '\t' + d.filler + '\n';
  }

  // Rows: delta-varint ids, raw little-endian IEEE-754 values.
  s.rows = kRowsMagic;
  put_varint(s.rows, targets_.size());
  for (std::size_t t = 0; t < targets_.size(); ++t) {
    put_varint(s.rows, targets_[t].size());
    s.rows += targets_[t];
    const auto& row = rows_[t];
    put_varint(s.rows, row.size());
    std::uint32_t previous = 0;
    for (std::size_t i = 0; i < row.size(); ++i) {
      put_varint(s.rows, row.ids()[i] - previous);
      previous = row.ids()[i];
      put_u64(s.rows, std::bit_cast<std::uint64_t>(row.values()[i]));
    }
  }

  for (const auto& [key, list] : index_.lists()) {
    for (std::size_t rank = 0; rank < list.size(); ++rank) {
      s.index += key.first + '\t' + key.second + '\t' + std::to_string(rank + 1) + '\t' +
                 list[rank].filler + '\t' + format_score(list[rank].score) + '\n';
    }
  }
  return s;
}

std::string WeightedSpace::content_id(std::string_view name, const Serialized& s) {
  Fnv1a h;
  h.update(name).update(std::string_view("\0", 1));
  h.update(s.catalog).update(std::string_view("\0", 1));
  h.update(s.rows).update(std::string_view("\0", 1));
  h.update(s.index);
  return hex_digest(h.digest());
}

void WeightedSpace::save(const fs::path& dir, std::string_view config_hash) const {
  fs::create_directories(dir);
  const auto s = serialize();
  write_file(dir / "catalog.tsv", s.catalog);
  write_file(dir / "rows.bin", s.rows);
  write_file(dir / "index.tsv", s.index);
  nlohmann::ordered_json manifest;
  manifest["format"] = "argexp-space/1";
  manifest["name"] = name_;
  manifest["content_hash"] = id_;
  manifest["config_hash"] = std::string(config_hash);
  manifest["vocabulary_size"] = targets_.size();
  manifest["dimension_count"] = catalog_.size();
  manifest["filler_lists"] = index_.lists().size();
  write_file(dir / "manifest.json", manifest.dump(2) + "\n");
}

std::string WeightedSpace::archive_config_hash(const fs::path& dir) {
  try {
    const auto manifest = nlohmann::json::parse(read_file(dir / "manifest.json"));
    return manifest.at("config_hash").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw InputError("bad space manifest in " + dir.string() + ": " + e.what());
  }
}

WeightedSpace WeightedSpace::load(const fs::path& dir) {
  nlohmann::json manifest;
  try {
    manifest = nlohmann::json::parse(read_file(dir / "manifest.json"));
  } catch (const nlohmann::json::exception& e) {
    throw InputError("bad space manifest in " + dir.string() + ": " + e.what());
  }
  Serialized s{read_file(dir / "catalog.tsv"), read_file(dir / "rows.bin"), read_file(dir / "index.tsv")};
  const auto name = manifest.value("name", std::string{});
  const auto expected = manifest.value("content_hash", std::string{});
  const auto actual = content_id(name, s);
  if (expected != actual) {
    throw InputError("space archive " + dir.string() + " fails its manifest hash (manifest " +
                     expected + ", contents " + actual + ")");
  }

  WeightedSpace space;
  space.name_ = name;
  space.id_ = actual;

  std::vector<Dimension> dims;
  std::istringstream catalog(s.catalog);
  std::string line;
  while (std::getline(catalog, line)) {
    auto fields = split(line, '\t');
    if (fields.size() != 3 || fields[0] != std::to_string(dims.size())) {
      throw InputError("corrupt catalog.tsv in " + dir.string());
    }
    dims.push_back({std::move(fields[1]), std::move(fields[2])});
  }
  space.catalog_ = DimensionCatalog(dims);
  if (space.catalog_.dimensions() != dims) throw InputError("catalog.tsv is not in canonical order");

  ByteReader reader(s.rows);
  if (reader.take(kRowsMagic.size()) != kRowsMagic) throw InputError("rows.bin: bad magic");
  const auto n_targets = reader.varint();
  for (std::uint64_t t = 0; t < n_targets; ++t) {
    space.targets_.emplace_back(reader.take(reader.varint()));
    const auto nnz = reader.varint();
    std::vector<std::uint32_t> ids;
    std::vector<double> values;
    std::uint64_t id = 0;
    for (std::uint64_t i = 0; i < nnz; ++i) {
      id += reader.varint();
      if (id >= space.catalog_.size()) throw InputError("rows.bin: dimension id out of range");
      ids.push_back(static_cast<std::uint32_t>(id));
      values.push_back(std::bit_cast<double>(reader.u64()));
    }
    space.rows_.emplace_back(std::move(ids), std::move(values));
  }
  if (!reader.done()) throw InputError("rows.bin: trailing bytes");

  FillerIndex::Lists lists;
  std::istringstream index(s.index);
  while (std::getline(index, line)) {
    auto fields = split(line, '\t');
    if (fields.size() != 5) throw InputError("corrupt index.tsv in " + dir.string());
    lists[{fields[0], fields[1]}].push_back({fields[3], parse_score(fields[4])});
  }
  space.index_ = FillerIndex(std::move(lists));
  return space;
}

void WeightedSpace::write_diagnostic(std::ostream& out, std::size_t k) const {
  for (std::size_t t = 0; t < targets_.size(); ++t) {
    const auto& row = rows_[t];
    std::vector<std::size_t> order(row.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return row.values()[a] > row.values()[b];
    });
    for (std::size_t r = 0; r < std::min(k, order.size()); ++r) {
      const auto& dim = catalog_.at(row.ids()[order[r]]);
      out << targets_[t] << '\t' << r + 1 << '\t' << dim.relation << ':' << dim.filler << '\t'
          << format_score(row.values()[order[r]]) << '\n';
    }
  }
}

}  // namespace argexp
