#include "argexp/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace argexp {

double chi_square_sf_1df(double x) {
  if (x <= 0) return 1.0;
  return std::erfc(std::sqrt(x / 2.0));
}

ChiSquareResult chi_square_vs_chance(std::uint64_t wins, std::uint64_t n, bool yates) {
  if (n == 0) throw std::invalid_argument("chi-square needs at least one item");
  if (wins > n) throw std::invalid_argument("wins exceed item count");
  const double expected = static_cast<double>(n) / 2.0;
  auto term = [&](double observed) {
    double deviation = std::abs(observed - expected);
    if (yates) deviation = std::max(0.0, deviation - 0.5);
    return deviation * deviation / expected;
  };
  ChiSquareResult out;
  out.statistic = term(static_cast<double>(wins)) + term(static_cast<double>(n - wins));
  out.p = chi_square_sf_1df(out.statistic);
  return out;
}

std::vector<double> midranks(std::span<const double> values) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(values.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j < order.size() && values[order[j]] == values[order[i]]) ++j;
    // Positions i..j-1 share ranks i+1..j.
    const double rank = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
    for (std::size_t m = i; m < j; ++m) ranks[order[m]] = rank;
    i = j;
  }
  return ranks;
}

RankSumResult wilcoxon_rank_sum(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("rank-sum test needs two non-empty samples");
  std::vector<double> pooled(a.begin(), a.end());
  pooled.insert(pooled.end(), b.begin(), b.end());
  const auto ranks = midranks(pooled);

  RankSumResult out;
  for (std::size_t i = 0; i < a.size(); ++i) out.w += ranks[i];

  const double n1 = static_cast<double>(a.size());
  const double n2 = static_cast<double>(b.size());
  const double n = n1 + n2;

  // Tie correction: sum of (t^3 - t) over groups of tied values.
  std::vector<double> sorted = pooled;
  std::sort(sorted.begin(), sorted.end());
  double ties = 0.0;
  for (std::size_t i = 0; i < sorted.size();) {
    std::size_t j = i;
    while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
    const double t = static_cast<double>(j - i);
    ties += t * t * t - t;
    i = j;
  }
  const double variance = n1 * n2 / 12.0 * ((n + 1.0) - ties / (n * (n - 1.0)));
  if (!(variance > 0)) {
    out.degenerate = true;
    out.p = 1.0;
    return out;
  }
  const double mean = n1 * (n + 1.0) / 2.0;
  const double diff = out.w - mean;
  const double corrected = diff > 0 ? diff - 0.5 : diff < 0 ? diff + 0.5 : 0.0;
  out.z = corrected / std::sqrt(variance);
  out.p = std::min(1.0, std::erfc(std::abs(out.z) / std::sqrt(2.0)));
  return out;
}

}  // namespace argexp
