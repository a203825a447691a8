#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace argexp {

/// Upper tail of the chi-square distribution with one degree of freedom,
/// P(X > x) = erfc(sqrt(x / 2)).
double chi_square_sf_1df(double x);

struct ChiSquareResult {
  double statistic = 0.0;
  double p = 1.0;
};

/// Goodness of fit of wins/losses against a 50/50 split. With `yates`, each
/// |O - E| is reduced by 0.5 (floored at 0). Throws std::invalid_argument
/// when n == 0 or wins > n.
ChiSquareResult chi_square_vs_chance(std::uint64_t wins, std::uint64_t n, bool yates = false);

struct RankSumResult {
  double w = 0.0;  // rank sum of the first sample
  double z = 0.0;
  double p = 1.0;  // two-sided
  bool degenerate = false;  // zero variance (all values tied)
};

/// 1-based ranks with ties given their average rank.
std::vector<double> midranks(std::span<const double> values);

/// Wilcoxon rank-sum test. Normal approximation with tie-corrected variance
/// and a 0.5 continuity correction toward the mean. Throws
/// std::invalid_argument for an empty sample.
RankSumResult wilcoxon_rank_sum(std::span<const double> a, std::span<const double> b);

}  // namespace argexp
