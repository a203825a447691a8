#pragma once

#include <cstdint>
#include <istream>
#include <map>
#include <ostream>
#include <string>
#include <string_view>
#include <tuple>

namespace argexp {

/// (target, relation, filler), each a canonical token or relation label.
struct Triple {
  std::string target;
  std::string relation;
  std::string filler;

  auto operator<=>(const Triple&) const = default;
};

struct TripleView {
  std::string_view target;
  std::string_view relation;
  std::string_view filler;
};

struct TripleLess {
  using is_transparent = void;

  template <class A, class B>
  bool operator()(const A& a, const B& b) const {
    return std::tie(a.target, a.relation, a.filler) < std::tie(b.target, b.relation, b.filler);
  }
  bool operator()(const Triple& a, const TripleView& b) const {
    return std::make_tuple(std::string_view(a.target), std::string_view(a.relation),
                           std::string_view(a.filler)) < std::tie(b.target, b.relation, b.filler);
  }
  bool operator()(const TripleView& a, const Triple& b) const {
    return std::tie(a.target, a.relation, a.filler) <
           std::make_tuple(std::string_view(b.target), std::string_view(b.relation),
                           std::string_view(b.filler));
  }
};

using MarginalMap = std::map<std::string, std::uint64_t, std::less<>>;

/// Sparse counts over (target, relation, filler) with incrementally
/// maintained marginals. Entries are kept sorted; zero counts are never
/// stored. The window matrix is the case with the single relation WINDOW.
class CooccurrenceTensor {
 public:
  using Entries = std::map<Triple, std::uint64_t, TripleLess>;

  void add(const Triple& key, std::uint64_t count = 1);
  void add(std::string_view target, std::string_view relation, std::string_view filler,
           std::uint64_t count = 1);
  /// Integer addition per key; the result does not depend on merge order.
  void merge(const CooccurrenceTensor& other);

  std::uint64_t count(std::string_view target, std::string_view relation,
                      std::string_view filler) const;
  std::uint64_t total() const noexcept { return total_; }
  std::size_t size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }

  std::uint64_t target_marginal(std::string_view target) const;
  std::uint64_t relation_marginal(std::string_view relation) const;
  std::uint64_t filler_marginal(std::string_view filler) const;

  const Entries& entries() const noexcept { return entries_; }
  const MarginalMap& target_marginals() const noexcept { return by_target_; }
  const MarginalMap& relation_marginals() const noexcept { return by_relation_; }
  const MarginalMap& filler_marginals() const noexcept { return by_filler_; }

  /// `target\trelation\tfiller\tcount` lines in sorted order.
  void write_tsv(std::ostream& out) const;
  std::string to_tsv() const;
  static CooccurrenceTensor read_tsv(std::istream& in);

  /// FNV-1a over the TSV serialization.
  std::uint64_t content_hash() const;

  bool operator==(const CooccurrenceTensor& other) const { return entries_ == other.entries_; }

 private:
  Entries entries_;
  MarginalMap by_target_;
  MarginalMap by_relation_;
  MarginalMap by_filler_;
  std::uint64_t total_ = 0;
};

}  // namespace argexp
