#include "argexp/token.hpp"

#include <algorithm>
#include <cctype>

namespace argexp {

std::optional<Token> Token::make(std::string_view lemma, Pos pos) {
  if (lemma.empty()) return std::nullopt;
  std::string lowered;
  lowered.reserve(lemma.size());
  for (char c : lemma) {
    const auto u = static_cast<unsigned char>(c);
    if (std::isspace(u)) return std::nullopt;
    lowered.push_back(static_cast<char>(std::tolower(u)));
  }
  return Token(std::move(lowered), pos);
}

std::optional<Token> Token::parse(std::string_view canonical) {
  const auto dash = canonical.rfind('-');
  if (dash == std::string_view::npos || dash + 2 != canonical.size()) return std::nullopt;
  const char tag = canonical.back();
  if (tag != 'n' && tag != 'v') return std::nullopt;
  auto token = make(canonical.substr(0, dash), static_cast<Pos>(tag));
  // Canonical form must already be lowercase.
  if (token && token->lemma() != canonical.substr(0, dash)) return std::nullopt;
  return token;
}

std::string Token::str() const {
  std::string s = lemma_;
  s.push_back('-');
  s.push_back(static_cast<char>(pos_));
  return s;
}

bool is_canonical_token(std::string_view s) { return Token::parse(s).has_value(); }

PosMap::PosMap() : rules_{{"N", Pos::noun}, {"V", Pos::verb}} {}

std::optional<Pos> PosMap::map(std::string_view tag) const {
  for (const auto& [prefix, pos] : rules_) {
    if (tag.starts_with(prefix)) return pos;
  }
  return std::nullopt;
}

bool is_inverse_relation(std::string_view relation) {
  return relation.size() > kInverseSuffix.size() && relation.ends_with(kInverseSuffix);
}

std::string inverse_relation(std::string_view relation) {
  if (is_inverse_relation(relation)) {
    return std::string(relation.substr(0, relation.size() - kInverseSuffix.size()));
  }
  return std::string(relation) + std::string(kInverseSuffix);
}

}  // namespace argexp
