#include "argexp/tensor.hpp"

#include <charconv>
#include <sstream>

#include "argexp/errors.hpp"
#include "argexp/hash.hpp"

namespace argexp {

std::string hex_digest(std::uint64_t value) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = kDigits[value & 0xf];
    value >>= 4;
  }
  return out;
}

namespace {

void bump(MarginalMap& map, std::string_view key, std::uint64_t count) {
  auto it = map.find(key);
  if (it == map.end()) {
    map.emplace(std::string(key), count);
  } else {
    it->second += count;
  }
}

std::uint64_t lookup(const MarginalMap& map, std::string_view key) {
  const auto it = map.find(key);
  return it == map.end() ? 0 : it->second;
}

}  // namespace

void CooccurrenceTensor::add(const Triple& key, std::uint64_t count) {
  add(key.target, key.relation, key.filler, count);
}

void CooccurrenceTensor::add(std::string_view target, std::string_view relation,
                             std::string_view filler, std::uint64_t count) {
  if (count == 0) return;
  const TripleView view{target, relation, filler};
  auto it = entries_.find(view);
  if (it == entries_.end()) {
    entries_.emplace(Triple{std::string(target), std::string(relation), std::string(filler)}, count);
  } else {
    it->second += count;
  }
  bump(by_target_, target, count);
  bump(by_relation_, relation, count);
  bump(by_filler_, filler, count);
  total_ += count;
}

void CooccurrenceTensor::merge(const CooccurrenceTensor& other) {
  for (const auto& [key, count] : other.entries_) add(key, count);
}

std::uint64_t CooccurrenceTensor::count(std::string_view target, std::string_view relation,
                                        std::string_view filler) const {
  const auto it = entries_.find(TripleView{target, relation, filler});
  return it == entries_.end() ? 0 : it->second;
}

std::uint64_t CooccurrenceTensor::target_marginal(std::string_view target) const {
  return lookup(by_target_, target);
}
std::uint64_t CooccurrenceTensor::relation_marginal(std::string_view relation) const {
  return lookup(by_relation_, relation);
}
std::uint64_t CooccurrenceTensor::filler_marginal(std::string_view filler) const {
  return lookup(by_filler_, filler);
}

void CooccurrenceTensor::write_tsv(std::ostream& out) const {
  for (const auto& [key, count] : entries_) {
    out << key.target << '\t' << key.relation << '\t' << key.filler << '\t' << count << '\n';
  }
}

std::string CooccurrenceTensor::to_tsv() const {
  std::ostringstream out;
  write_tsv(out);
  return out.str();
}

CooccurrenceTensor CooccurrenceTensor::read_tsv(std::istream& in) {
  CooccurrenceTensor tensor;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::string_view rest = line;
    std::string_view fields[4];
    for (int i = 0; i < 3; ++i) {
      const auto tab = rest.find('\t');
      if (tab == std::string_view::npos) throw LoadError("tensor", line_no, "expected 4 fields");
      fields[i] = rest.substr(0, tab);
      rest.remove_prefix(tab + 1);
    }
    fields[3] = rest;
    std::uint64_t count = 0;
    auto [ptr, ec] = std::from_chars(fields[3].data(), fields[3].data() + fields[3].size(), count);
    if (ec != std::errc{} || ptr != fields[3].data() + fields[3].size() || count == 0) {
      throw LoadError("tensor", line_no, "bad count");
    }
    tensor.add(fields[0], fields[1], fields[2], count);
  }
  return tensor;
}

std::uint64_t CooccurrenceTensor::content_hash() const { return fnv1a(to_tsv()); }

}  // namespace argexp
