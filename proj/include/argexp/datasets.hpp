#pragma once

#include <filesystem>
#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace argexp {

/// ACC1: pairs differ by patient. ACC2: pairs differ by agent.
enum class BicknellMode { acc1, acc2 };

std::string_view to_string(BicknellMode mode);

/// One plausible/implausible pair. For ACC2 the two agents differ and
/// patient_incongruent is empty; for ACC1 the two patients differ and
/// agent_incongruent is empty.
struct BicknellItem {
  std::string id;
  std::string agent_congruent;
  std::optional<std::string> agent_incongruent;
  std::string verb;
  std::string patient_congruent;
  std::optional<std::string> patient_incongruent;

  bool operator==(const BicknellItem&) const = default;
};

/// Normal condition: noun1 agent, noun2 patient. Reversed swaps them.
struct ChowItem {
  std::string id;
  std::string verb;
  std::string noun1;
  std::string noun2;

  bool operator==(const ChowItem&) const = default;
};

inline constexpr std::string_view kBicknellAcc2Header =
    "item_id\tagent_congruent\tagent_incongruent\tverb\tpatient";
inline constexpr std::string_view kBicknellAcc1Header =
    "item_id\tagent\tverb\tpatient_congruent\tpatient_incongruent";
inline constexpr std::string_view kChowHeader = "item_id\tverb\tnoun1\tnoun2";
inline constexpr std::string_view kChowShortHeader = "verb\tnoun1\tnoun2";

/// Reads the header only; nullopt for an empty file. Throws LoadError for
/// an unrecognized header.
std::optional<BicknellMode> detect_bicknell_mode(const std::filesystem::path& path);

/// Mode is inferred from the header; when `mode` is given the header must
/// agree. Throws LoadError (with line number) for malformed rows, tokens
/// that are not `lemma-pos`, rows violating the one-column difference, and
/// duplicate item ids.
std::vector<BicknellItem> load_bicknell(const std::filesystem::path& path,
                                        std::optional<BicknellMode> mode = std::nullopt);
std::vector<BicknellItem> parse_bicknell(std::istream& in, std::string_view source,
                                         std::optional<BicknellMode> mode = std::nullopt);

/// Rows without an item_id column (short header) are numbered from 1.
std::vector<ChowItem> load_chow(const std::filesystem::path& path);
std::vector<ChowItem> parse_chow(std::istream& in, std::string_view source);

BicknellMode mode_of(const std::vector<BicknellItem>& items, BicknellMode fallback);

}  // namespace argexp
