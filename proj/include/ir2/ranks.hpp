#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace ir2 {

/// Max-ranks of a response, R_i = #{j : y_j <= y_i}, with the tie census the
/// estimators need.
struct RankInfo {
  std::vector<std::size_t> ranks;  // 1-based
  std::size_t n = 0;
  std::size_t n_max = 0;  // observations attaining the maximum
  std::size_t c_min = 0;  // 1 if the minimum is unique
  std::size_t n0 = 0;     // n_max + c_min
  std::vector<std::size_t> distinct_rank_values;  // sorted

  /// multiplicity[r] = number of observations with rank r, r in [0, n].
  std::vector<std::size_t> multiplicity() const;
};

RankInfo compute_ranks(std::span<const double> y);

/// Weight of a realised rank: 1/((r-1)(n-r)) for 1 < r < n, 0 at the extremes.
inline double rank_weight(std::size_t r, std::size_t n) noexcept {
  if (r <= 1 || r >= n) return 0.0;
  return 1.0 / (static_cast<double>(r - 1) * static_cast<double>(n - r));
}

/// Per-rank weights and the cumulative weighted mass over rank values,
/// accumulated in extended precision.
class WeightTable {
 public:
  explicit WeightTable(const RankInfo& info);

  std::size_t n() const noexcept { return n_; }
  double weight(std::size_t r) const noexcept { return rank_weight(r, n_); }
  /// Sum of weights of observations with rank <= r.
  long double prefix(std::size_t r) const { return prefix_.at(r); }
  long double total() const { return prefix_.back(); }

  /// Sum over observations j with lo <= R_j <= hi of weight(R_j). O(1).
  double mass(std::size_t lo, std::size_t hi) const;

 private:
  std::size_t n_;
  std::vector<long double> prefix_;  // prefix_[0] = 0, size n + 1
};

/// weighted_rank_mass as a free function; builds the table on each call.
double weighted_rank_mass(const RankInfo& info, std::size_t lo, std::size_t hi);

/// Neumaier-compensated sum of weight(r) * counts[r] over 1 < r < n.
/// counts is indexed by rank value, size n + 1.
double weighted_count_sum(std::span<const std::int64_t> counts, std::size_t n);

}  // namespace ir2
