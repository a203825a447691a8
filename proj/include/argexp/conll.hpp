#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <istream>
#include <optional>
#include <string>
#include <vector>

#include "argexp/token.hpp"

namespace argexp {

/// Zero-based column indices of a tab-separated CoNLL file. The defaults
/// match CoNLL-X as written by MaltParser (coarse tag in CPOSTAG).
struct ColumnConfig {
  std::size_t form = 1;
  std::size_t lemma = 2;
  std::size_t pos = 3;
  std::size_t head = 6;
  std::size_t relation = 7;

  std::size_t min_columns() const;
};

struct SentenceToken {
  std::string lemma;  // lowercased
  std::string tag;    // raw tag from the POS column
  // Set only for nouns and verbs with a well-formed lemma.
  std::optional<Token> token;
  std::string canonical;  // token->str(), empty otherwise
};

/// Indices are zero-based positions within the owning sentence.
struct Arc {
  std::uint32_t head;
  std::uint32_t dependent;
  std::string relation;
};

struct Sentence {
  std::uint64_t id = 0;
  std::vector<SentenceToken> tokens;
  std::vector<Arc> arcs;
};

struct ParseStats {
  std::uint64_t sentences = 0;
  std::uint64_t rows = 0;
  std::uint64_t malformed = 0;
  std::uint64_t arcs = 0;

  ParseStats& operator+=(const ParseStats& other);
};

/// Streams sentences out of a CoNLL-style input. Malformed rows are counted
/// and skipped: a row with too few columns keeps its position as an
/// out-of-vocabulary placeholder, and a bad head index drops only its arc.
class ConllReader {
 public:
  ConllReader(std::istream& in, ColumnConfig columns, PosMap pos_map, std::uint64_t first_id = 0);

  /// Returns false at end of input. Throws InputError if the stream fails.
  bool next(Sentence& sentence);

  const ParseStats& stats() const noexcept { return stats_; }

 private:
  struct PendingHead {
    std::uint32_t dependent;
    long head;
    std::string relation;
  };

  void add_row(const std::string& line, Sentence& sentence, std::vector<PendingHead>& heads);
  void resolve(Sentence& sentence, std::vector<PendingHead>& heads);

  std::istream& in_;
  ColumnConfig columns_;
  PosMap pos_map_;
  std::uint64_t next_id_;
  ParseStats stats_;
};

std::vector<Sentence> parse_conll_stream(std::istream& in, const ColumnConfig& columns,
                                         const PosMap& pos_map, ParseStats* stats = nullptr,
                                         std::uint64_t first_id = 0);

/// Reads every file in order; sentence ids continue across files.
std::vector<Sentence> read_conll_files(const std::vector<std::filesystem::path>& paths,
                                       const ColumnConfig& columns, const PosMap& pos_map,
                                       ParseStats* stats = nullptr);

}  // namespace argexp
