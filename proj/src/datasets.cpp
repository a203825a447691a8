#include "argexp/datasets.hpp"

#include <fstream>
#include <set>

#include "argexp/errors.hpp"
#include "argexp/token.hpp"

namespace argexp {

std::string_view to_string(BicknellMode mode) { return mode == BicknellMode::acc1 ? "acc1" : "acc2"; }

namespace {

std::vector<std::string> split_tabs(std::string_view line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const auto tab = line.find('\t', start);
    fields.emplace_back(line.substr(start, tab == std::string_view::npos ? std::string_view::npos : tab - start));
    if (tab == std::string_view::npos) return fields;
    start = tab + 1;
  }
}

std::string_view trim_cr(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  return line;
}

std::ifstream open(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read dataset " + path.string());
  return in;
}

// Reads the first non-empty line; returns false on an empty stream.
bool read_header(std::istream& in, std::string& header, std::size_t& line_no) {
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    if (!trim_cr(line).empty()) {
      header = std::string(trim_cr(line));
      return true;
    }
  }
  return false;
}

void require_token(const std::string& value, std::string_view source, std::size_t line_no,
                   std::string_view column, std::optional<Pos> pos = std::nullopt) {
  const auto token = Token::parse(value);
  if (!token) {
    throw LoadError(std::string(source), line_no,
                    std::string(column) + " '" + value + "' is not a lemma-pos token");
  }
  if (pos && token->pos() != *pos) {
    throw LoadError(std::string(source), line_no,
                    std::string(column) + " '" + value + "' has the wrong part of speech");
  }
}

}  // namespace

std::optional<BicknellMode> detect_bicknell_mode(const std::filesystem::path& path) {
  auto in = open(path);
  std::string header;
  std::size_t line_no = 0;
  if (!read_header(in, header, line_no)) return std::nullopt;
  if (header == kBicknellAcc2Header) return BicknellMode::acc2;
  if (header == kBicknellAcc1Header) return BicknellMode::acc1;
  throw LoadError(path.string(), line_no, "unrecognized Bicknell header");
}

std::vector<BicknellItem> parse_bicknell(std::istream& in, std::string_view source,
                                         std::optional<BicknellMode> mode) {
  std::vector<BicknellItem> items;
  std::string header;
  std::size_t line_no = 0;
  if (!read_header(in, header, line_no)) return items;

  BicknellMode detected;
  if (header == kBicknellAcc2Header) {
    detected = BicknellMode::acc2;
  } else if (header == kBicknellAcc1Header) {
    detected = BicknellMode::acc1;
  } else {
    throw LoadError(std::string(source), line_no, "unrecognized Bicknell header");
  }
  if (mode && *mode != detected) {
    throw LoadError(std::string(source), line_no,
                    "header is " + std::string(to_string(detected)) + " but " +
                        std::string(to_string(*mode)) + " was requested");
  }

  std::set<std::string> ids;
  std::string raw;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto line = trim_cr(raw);
    if (line.empty()) continue;
    auto fields = split_tabs(line);
    if (fields.size() != 5) throw LoadError(std::string(source), line_no, "expected 5 columns");
    if (fields[0].empty()) throw LoadError(std::string(source), line_no, "empty item_id");
    BicknellItem item;
    item.id = fields[0];
    if (detected == BicknellMode::acc2) {
      require_token(fields[1], source, line_no, "agent_congruent", Pos::noun);
      require_token(fields[2], source, line_no, "agent_incongruent", Pos::noun);
      require_token(fields[3], source, line_no, "verb", Pos::verb);
      require_token(fields[4], source, line_no, "patient", Pos::noun);
      if (fields[1] == fields[2]) {
        throw LoadError(std::string(source), line_no, "the two agents must differ");
      }
      item.agent_congruent = fields[1];
      item.agent_incongruent = fields[2];
      item.verb = fields[3];
      item.patient_congruent = fields[4];
    } else {
      require_token(fields[1], source, line_no, "agent", Pos::noun);
      require_token(fields[2], source, line_no, "verb", Pos::verb);
      require_token(fields[3], source, line_no, "patient_congruent", Pos::noun);
      require_token(fields[4], source, line_no, "patient_incongruent", Pos::noun);
      if (fields[3] == fields[4]) {
        throw LoadError(std::string(source), line_no, "the two patients must differ");
      }
      item.agent_congruent = fields[1];
      item.verb = fields[2];
      item.patient_congruent = fields[3];
      item.patient_incongruent = fields[4];
    }
    if (!ids.insert(item.id).second) {
      throw LoadError(std::string(source), line_no, "duplicate item_id '" + item.id + "'");
    }
    items.push_back(std::move(item));
  }
  return items;
}

std::vector<BicknellItem> load_bicknell(const std::filesystem::path& path,
                                        std::optional<BicknellMode> mode) {
  auto in = open(path);
  return parse_bicknell(in, path.string(), mode);
}

std::vector<ChowItem> parse_chow(std::istream& in, std::string_view source) {
  std::vector<ChowItem> items;
  std::string header;
  std::size_t line_no = 0;
  if (!read_header(in, header, line_no)) return items;
  bool with_id;
  if (header == kChowHeader) {
    with_id = true;
  } else if (header == kChowShortHeader) {
    with_id = false;
  } else {
    throw LoadError(std::string(source), line_no, "unrecognized Chow header");
  }

  std::set<std::string> ids;
  std::string raw;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto line = trim_cr(raw);
    if (line.empty()) continue;
    auto fields = split_tabs(line);
    const std::size_t expected = with_id ? 4 : 3;
    if (fields.size() != expected) {
      throw LoadError(std::string(source), line_no, "expected " + std::to_string(expected) + " columns");
    }
    if (!with_id) fields.insert(fields.begin(), std::to_string(items.size() + 1));
    if (fields[0].empty()) throw LoadError(std::string(source), line_no, "empty item_id");
    require_token(fields[1], source, line_no, "verb", Pos::verb);
    require_token(fields[2], source, line_no, "noun1", Pos::noun);
    require_token(fields[3], source, line_no, "noun2", Pos::noun);
    if (fields[2] == fields[3]) throw LoadError(std::string(source), line_no, "the two nouns must differ");
    if (!ids.insert(fields[0]).second) {
      throw LoadError(std::string(source), line_no, "duplicate item_id '" + fields[0] + "'");
    }
    items.push_back({fields[0], fields[1], fields[2], fields[3]});
  }
  return items;
}

std::vector<ChowItem> load_chow(const std::filesystem::path& path) {
  auto in = open(path);
  return parse_chow(in, path.string());
}

BicknellMode mode_of(const std::vector<BicknellItem>& items, BicknellMode fallback) {
  if (items.empty()) return fallback;
  return items.front().agent_incongruent ? BicknellMode::acc2 : BicknellMode::acc1;
}

}  // namespace argexp
