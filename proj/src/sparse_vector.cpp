#include "argexp/sparse_vector.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace argexp {

namespace {

double euclidean_norm(std::span<const double> values) {
  double sum = 0.0;
  for (double v : values) sum += v * v;
  return std::sqrt(sum);
}

}  // namespace

SparseVector::SparseVector(std::vector<std::uint32_t> ids, std::vector<double> values)
    : ids_(std::move(ids)), values_(std::move(values)) {
  if (ids_.size() != values_.size()) throw std::invalid_argument("ids and values differ in length");
  for (std::size_t i = 0; i < ids_.size(); ++i) {
    if (i > 0 && ids_[i] <= ids_[i - 1]) throw std::invalid_argument("ids not strictly increasing");
    if (!(values_[i] > 0) || !std::isfinite(values_[i])) {
      throw std::invalid_argument("sparse vector values must be finite and positive");
    }
  }
  norm_ = euclidean_norm(values_);
}

SparseVector SparseVector::from_pairs(std::vector<std::pair<std::uint32_t, double>> pairs) {
  std::sort(pairs.begin(), pairs.end());
  std::vector<std::uint32_t> ids;
  std::vector<double> values;
  for (std::size_t i = 0; i < pairs.size();) {
    double sum = 0.0;
    std::size_t j = i;
    for (; j < pairs.size() && pairs[j].first == pairs[i].first; ++j) sum += pairs[j].second;
    if (sum > 0) {
      ids.push_back(pairs[i].first);
      values.push_back(sum);
    }
    i = j;
  }
  return SparseVector(std::move(ids), std::move(values));
}

double SparseVector::at(std::uint32_t id) const {
  const auto it = std::lower_bound(ids_.begin(), ids_.end(), id);
  if (it == ids_.end() || *it != id) return 0.0;
  return values_[static_cast<std::size_t>(it - ids_.begin())];
}

double dot(const SparseVector& a, const SparseVector& b) {
  const auto ia = a.ids(), ib = b.ids();
  const auto va = a.values(), vb = b.values();
  double sum = 0.0;
  std::size_t i = 0, j = 0;
  while (i < ia.size() && j < ib.size()) {
    if (ia[i] < ib[j]) {
      ++i;
    } else if (ib[j] < ia[i]) {
      ++j;
    } else {
      sum += va[i++] * vb[j++];
    }
  }
  return sum;
}

Similarity cosine(const SparseVector& a, const SparseVector& b) {
  if (a.norm() == 0.0 || b.norm() == 0.0) return {0.0, true};
  const double value = dot(a, b) / (a.norm() * b.norm());
  return {std::clamp(value, 0.0, 1.0), false};
}

SparseVector add(const SparseVector& a, const SparseVector& b) {
  const auto ia = a.ids(), ib = b.ids();
  const auto va = a.values(), vb = b.values();
  std::vector<std::uint32_t> ids;
  std::vector<double> values;
  ids.reserve(ia.size() + ib.size());
  values.reserve(ia.size() + ib.size());
  std::size_t i = 0, j = 0;
  while (i < ia.size() || j < ib.size()) {
    if (j == ib.size() || (i < ia.size() && ia[i] < ib[j])) {
      ids.push_back(ia[i]);
      values.push_back(va[i++]);
    } else if (i == ia.size() || ib[j] < ia[i]) {
      ids.push_back(ib[j]);
      values.push_back(vb[j++]);
    } else {
      ids.push_back(ia[i]);
      values.push_back(va[i++] + vb[j++]);
    }
  }
  return SparseVector(std::move(ids), std::move(values));
}

SparseVector multiply(const SparseVector& a, const SparseVector& b) {
  const auto ia = a.ids(), ib = b.ids();
  const auto va = a.values(), vb = b.values();
  std::vector<std::uint32_t> ids;
  std::vector<double> values;
  std::size_t i = 0, j = 0;
  while (i < ia.size() && j < ib.size()) {
    if (ia[i] < ib[j]) {
      ++i;
    } else if (ib[j] < ia[i]) {
      ++j;
    } else {
      const double product = va[i++] * vb[j++];
      // Underflow to zero would break the positivity invariant.
      if (product > 0) {
        ids.push_back(ia[i - 1]);
        values.push_back(product);
      }
    }
  }
  return SparseVector(std::move(ids), std::move(values));
}

SparseVector scale(const SparseVector& a, double factor) {
  if (!(factor > 0)) throw std::invalid_argument("scale factor must be positive");
  std::vector<std::uint32_t> ids(a.ids().begin(), a.ids().end());
  std::vector<double> values(a.values().begin(), a.values().end());
  for (auto& v : values) v *= factor;
  return SparseVector(std::move(ids), std::move(values));
}

}  // namespace argexp
