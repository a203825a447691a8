#pragma once

#include <compare>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace argexp {

enum class Pos : char { noun = 'n', verb = 'v' };

/// A lemma with a coarse part of speech, rendered canonically as `lemma-pos`
/// (e.g. `arrest-v`). The canonical string is what every table and artifact
/// stores.
class Token {
 public:
  /// Lowercases `lemma`; returns nullopt when it is empty or contains
  /// whitespace.
  static std::optional<Token> make(std::string_view lemma, Pos pos);

  /// Parses `lemma-pos`, splitting at the last '-'.
  static std::optional<Token> parse(std::string_view canonical);

  const std::string& lemma() const noexcept { return lemma_; }
  Pos pos() const noexcept { return pos_; }
  std::string str() const;

  auto operator<=>(const Token&) const = default;

 private:
  Token(std::string lemma, Pos pos) : lemma_(std::move(lemma)), pos_(pos) {}

  std::string lemma_;
  Pos pos_;
};

/// True if `s` parses as a canonical token.
bool is_canonical_token(std::string_view s);

/// Collapses fine-grained tags to {n, v} by prefix; first matching rule wins.
class PosMap {
 public:
  PosMap();  // N* -> n, V* -> v
  explicit PosMap(std::vector<std::pair<std::string, Pos>> rules) : rules_(std::move(rules)) {}

  std::optional<Pos> map(std::string_view tag) const;
  const std::vector<std::pair<std::string, Pos>>& rules() const noexcept { return rules_; }

 private:
  std::vector<std::pair<std::string, Pos>> rules_;
};

// Relation labels with fixed meaning.
inline constexpr std::string_view kVerbRelation = "VERB";
inline constexpr std::string_view kWindowRelation = "WINDOW";
inline constexpr std::string_view kArgRelation = "ARG";
inline constexpr std::string_view kArgInverseRelation = "ARG_inv";
inline constexpr std::string_view kInverseSuffix = "_inv";

bool is_inverse_relation(std::string_view relation);
std::string inverse_relation(std::string_view relation);

}  // namespace argexp
