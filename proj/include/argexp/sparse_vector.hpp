#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace argexp {

/// Sorted sparse vector with strictly positive entries and a cached norm.
class SparseVector {
 public:
  SparseVector() = default;

  /// Throws std::invalid_argument unless ids are strictly increasing and
  /// values are finite and > 0.
  SparseVector(std::vector<std::uint32_t> ids, std::vector<double> values);

  /// Sorts, sums duplicate ids, and drops non-positive values.
  static SparseVector from_pairs(std::vector<std::pair<std::uint32_t, double>> pairs);

  std::span<const std::uint32_t> ids() const noexcept { return ids_; }
  std::span<const double> values() const noexcept { return values_; }
  std::size_t size() const noexcept { return ids_.size(); }
  bool empty() const noexcept { return ids_.empty(); }
  double norm() const noexcept { return norm_; }

  /// 0 when the id is absent.
  double at(std::uint32_t id) const;

  bool operator==(const SparseVector& other) const {
    return ids_ == other.ids_ && values_ == other.values_;
  }

 private:
  std::vector<std::uint32_t> ids_;
  std::vector<double> values_;
  double norm_ = 0.0;
};

struct Similarity {
  double value = 0.0;
  bool degenerate = false;  // an operand had zero norm
};

double dot(const SparseVector& a, const SparseVector& b);

/// dot / (|a| |b|), clamped to [0, 1]. Zero-norm operands give 0 with the
/// degenerate flag set.
Similarity cosine(const SparseVector& a, const SparseVector& b);

/// Union support.
SparseVector add(const SparseVector& a, const SparseVector& b);
/// Intersection support.
SparseVector multiply(const SparseVector& a, const SparseVector& b);
SparseVector scale(const SparseVector& a, double factor);

}  // namespace argexp
