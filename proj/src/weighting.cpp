#include "argexp/weighting.hpp"

#include <charconv>
#include <cmath>
#include <sstream>
#include <vector>

#include "argexp/errors.hpp"
#include "argexp/token.hpp"

namespace argexp {

std::string_view to_string(LogBase base) { return base == LogBase::natural ? "e" : "2"; }

std::optional<LogBase> parse_log_base(std::string_view text) {
  if (text == "e" || text == "ln" || text == "natural") return LogBase::natural;
  if (text == "2" || text == "log2") return LogBase::two;
  return std::nullopt;
}

double expected_count(const CooccurrenceTensor& tensor, std::string_view target,
                      std::string_view relation, std::string_view filler) {
  if (tensor.total() == 0) throw UndefinedModelError("expected count over an empty tensor");
  const double n = static_cast<double>(tensor.total());
  const double pt = static_cast<double>(tensor.target_marginal(target)) / n;
  const double pr = static_cast<double>(tensor.relation_marginal(relation)) / n;
  const double pf = static_cast<double>(tensor.filler_marginal(filler)) / n;
  return n * pt * pr * pf;
}

double lmi(double observed, double expected, LogBase base) {
  if (observed < 0 || expected < 0 || std::isnan(observed) || std::isnan(expected)) {
    throw ConsistencyError("LMI of negative or NaN arguments");
  }
  if (observed == 0) return 0.0;
  if (expected == 0) throw ConsistencyError("observed triple with zero expected count");
  const double ratio = observed / expected;
  const double log = base == LogBase::natural ? std::log(ratio) : std::log2(ratio);
  return log * observed;
}

double WeightedTensor::score(std::string_view target, std::string_view relation,
                             std::string_view filler) const {
  const auto it = scores_.find(TripleView{target, relation, filler});
  return it == scores_.end() ? 0.0 : it->second;
}

std::string format_score(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 17);
  return std::string(buf, ptr);
}

double parse_score(std::string_view text) {
  double value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw InputError("bad score: " + std::string(text));
  }
  return value;
}

void WeightedTensor::write_tsv(std::ostream& out) const {
  for (const auto& [key, score] : scores_) {
    out << key.target << '\t' << key.relation << '\t' << key.filler << '\t' << format_score(score)
        << '\n';
  }
}

std::string WeightedTensor::to_tsv() const {
  std::ostringstream out;
  write_tsv(out);
  return out.str();
}

WeightedTensor WeightedTensor::read_tsv(std::istream& in, WeightingProvenance provenance) {
  Scores scores;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::istringstream row(line);
    std::string field;
    while (std::getline(row, field, '\t')) fields.push_back(field);
    if (fields.size() != 4) throw LoadError("weighted tensor", line_no, "expected 4 fields");
    const double score = parse_score(fields[3]);
    if (!(score > 0)) throw LoadError("weighted tensor", line_no, "non-positive score");
    scores.emplace(Triple{fields[0], fields[1], fields[2]}, score);
  }
  return WeightedTensor(std::move(scores), std::move(provenance));
}

namespace {

void require_observations(const CooccurrenceTensor& tensor) {
  if (tensor.total() == 0) throw UndefinedModelError("cannot weight an empty tensor");
}

double plmi_of(const CooccurrenceTensor& tensor, const Triple& key, std::uint64_t count,
               LogBase base) {
  const double expected = expected_count(tensor, key.target, key.relation, key.filler);
  return lmi(static_cast<double>(count), expected, base);
}

}  // namespace

WeightedTensor weight_tensor(const CooccurrenceTensor& tensor, LogBase base) {
  require_observations(tensor);
  WeightedTensor::Scores scores;
  for (const auto& [key, count] : tensor.entries()) {
    const double score = plmi_of(tensor, key, count, base);
    if (score > 0) scores.emplace_hint(scores.end(), key, score);
  }
  return WeightedTensor(std::move(scores), {tensor.content_hash(), base, "none"});
}

WeightedTensor weight_tensor_parallel(const CooccurrenceTensor& tensor, LogBase base) {
  require_observations(tensor);
  std::vector<const CooccurrenceTensor::Entries::value_type*> entries;
  entries.reserve(tensor.size());
  for (const auto& entry : tensor.entries()) entries.push_back(&entry);
  std::vector<double> values(entries.size());
  const auto n = static_cast<long>(entries.size());
  // Exceptions may not escape an OpenMP region; capture the first one.
  std::exception_ptr failure;
#pragma omp parallel for schedule(static)
  for (long i = 0; i < n; ++i) {
    try {
      const auto& [key, count] = *entries[static_cast<std::size_t>(i)];
      values[static_cast<std::size_t>(i)] = plmi_of(tensor, key, count, base);
    } catch (...) {
#pragma omp critical
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  WeightedTensor::Scores scores;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (values[i] > 0) scores.emplace_hint(scores.end(), entries[i]->first, values[i]);
  }
  return WeightedTensor(std::move(scores), {tensor.content_hash(), base, "none"});
}

namespace {

bool is_pseudo(std::string_view relation) {
  return relation == kWindowRelation || relation == kArgRelation || relation == kArgInverseRelation;
}

}  // namespace

RelationSet argument_relations(const CooccurrenceTensor& tensor) {
  RelationSet out;
  for (const auto& [relation, count] : tensor.relation_marginals()) {
    if (!is_inverse_relation(relation) && relation != kVerbRelation && !is_pseudo(relation)) {
      out.insert(relation);
    }
  }
  return out;
}

RelationSet inverse_argument_relations(const CooccurrenceTensor& tensor) {
  RelationSet out;
  const auto verb_inv = inverse_relation(kVerbRelation);
  for (const auto& [relation, count] : tensor.relation_marginals()) {
    if (is_inverse_relation(relation) && relation != verb_inv && !is_pseudo(relation)) {
      out.insert(relation);
    }
  }
  return out;
}

CooccurrenceTensor collapse_relations(const CooccurrenceTensor& tensor,
                                      const std::optional<RelationSet>& relations,
                                      std::string_view pseudo) {
  const RelationSet selected = relations ? *relations : argument_relations(tensor);
  CooccurrenceTensor collapsed;
  for (const auto& [key, count] : tensor.entries()) {
    if (selected.contains(key.relation)) collapsed.add(key.target, pseudo, key.filler, count);
  }
  return collapsed;
}

WeightedTensor max_relation_plmi(const WeightedTensor& weighted, const RelationSet& relations,
                                 std::string_view pseudo) {
  WeightedTensor::Scores scores;
  for (const auto& [key, score] : weighted.scores()) {
    if (!relations.contains(key.relation)) continue;
    auto [it, inserted] = scores.try_emplace(Triple{key.target, std::string(pseudo), key.filler}, score);
    if (!inserted && score > it->second) it->second = score;
  }
  auto provenance = weighted.provenance();
  provenance.collapse = "max:" + std::string(pseudo);
  return WeightedTensor(std::move(scores), std::move(provenance));
}

}  // namespace argexp
