#include "argexp/conll.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>

#include "argexp/errors.hpp"

namespace argexp {

namespace {

std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const auto tab = line.find('\t', start);
    if (tab == std::string_view::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
  return fields;
}

bool is_blank(std::string_view line) {
  return std::all_of(line.begin(), line.end(), [](char c) { return c == ' ' || c == '\t' || c == '\r'; });
}

std::optional<long> parse_index(std::string_view s) {
  long value = 0;
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, value);
  if (ec != std::errc{} || ptr != end) return std::nullopt;
  return value;
}

}  // namespace

std::size_t ColumnConfig::min_columns() const {
  return std::max({form, lemma, pos, head, relation}) + 1;
}

ParseStats& ParseStats::operator+=(const ParseStats& other) {
  sentences += other.sentences;
  rows += other.rows;
  malformed += other.malformed;
  arcs += other.arcs;
  return *this;
}

ConllReader::ConllReader(std::istream& in, ColumnConfig columns, PosMap pos_map,
                         std::uint64_t first_id)
    : in_(in), columns_(columns), pos_map_(std::move(pos_map)), next_id_(first_id) {}

void ConllReader::add_row(const std::string& raw, Sentence& sentence,
                          std::vector<PendingHead>& heads) {
  std::string_view line = raw;
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  ++stats_.rows;
  const auto position = static_cast<std::uint32_t>(sentence.tokens.size());
  const auto fields = split_tabs(line);
  SentenceToken token;
  if (fields.size() < columns_.min_columns()) {
    ++stats_.malformed;
    sentence.tokens.push_back(std::move(token));
    return;
  }

  std::string_view lemma = fields[columns_.lemma];
  if (lemma.empty() || lemma == "_") lemma = fields[columns_.form];
  token.tag = std::string(fields[columns_.pos]);
  if (auto pos = pos_map_.map(token.tag)) {
    token.token = Token::make(lemma, *pos);
    if (token.token) {
      token.lemma = token.token->lemma();
      token.canonical = token.token->str();
    }
  }
  if (!token.token) token.lemma = std::string(lemma);
  sentence.tokens.push_back(std::move(token));

  auto head = parse_index(fields[columns_.head]);
  if (!head || *head < 0) {
    ++stats_.malformed;
    return;
  }
  heads.push_back({position, *head, std::string(fields[columns_.relation])});
}

void ConllReader::resolve(Sentence& sentence, std::vector<PendingHead>& heads) {
  const auto n = static_cast<long>(sentence.tokens.size());
  for (auto& pending : heads) {
    if (pending.head == 0) continue;  // root
    if (pending.head > n || pending.head - 1 == static_cast<long>(pending.dependent)) {
      ++stats_.malformed;
      continue;
    }
    sentence.arcs.push_back(
        {static_cast<std::uint32_t>(pending.head - 1), pending.dependent, std::move(pending.relation)});
  }
  stats_.arcs += sentence.arcs.size();
  heads.clear();
}

bool ConllReader::next(Sentence& sentence) {
  sentence = Sentence{};
  std::vector<PendingHead> heads;
  std::string line;
  bool started = false;
  while (std::getline(in_, line)) {
    if (is_blank(line)) {
      if (started) break;
      continue;
    }
    if (!started && line.starts_with('#')) continue;  // comment lines between sentences
    started = true;
    add_row(line, sentence, heads);
  }
  if (in_.bad()) throw InputError("read error while streaming CoNLL input");
  if (!started) return false;
  resolve(sentence, heads);
  sentence.id = next_id_++;
  ++stats_.sentences;
  return true;
}

std::vector<Sentence> parse_conll_stream(std::istream& in, const ColumnConfig& columns,
                                         const PosMap& pos_map, ParseStats* stats,
                                         std::uint64_t first_id) {
  ConllReader reader(in, columns, pos_map, first_id);
  std::vector<Sentence> sentences;
  Sentence sentence;
  while (reader.next(sentence)) sentences.push_back(std::move(sentence));
  if (stats) *stats += reader.stats();
  return sentences;
}

std::vector<Sentence> read_conll_files(const std::vector<std::filesystem::path>& paths,
                                       const ColumnConfig& columns, const PosMap& pos_map,
                                       ParseStats* stats) {
  std::vector<Sentence> all;
  for (const auto& path : paths) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot read corpus file " + path.string());
    auto part = parse_conll_stream(in, columns, pos_map, stats, all.size());
    std::move(part.begin(), part.end(), std::back_inserter(all));
  }
  return all;
}

}  // namespace argexp
