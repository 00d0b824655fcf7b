#include "ir2/ranks.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "ir2/error.hpp"

namespace ir2 {

std::vector<std::size_t> RankInfo::multiplicity() const {
  std::vector<std::size_t> m(n + 1, 0);
  for (std::size_t r : ranks) ++m[r];
  return m;
}

RankInfo compute_ranks(std::span<const double> y) {
  const std::size_t n = y.size();
  if (n == 0) throw InputError("compute_ranks: empty input");
  for (double v : y) {
    if (!std::isfinite(v)) throw InputError("compute_ranks: non-finite value");
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return y[a] < y[b]; });

  RankInfo info;
  info.n = n;
  info.ranks.assign(n, 0);
  // Each block of equal values gets the position of its last element (max-rank).
  std::size_t start = 0;
  while (start < n) {
    std::size_t stop = start + 1;
    while (stop < n && y[order[stop]] == y[order[start]]) ++stop;
    for (std::size_t k = start; k < stop; ++k) info.ranks[order[k]] = stop;
    info.distinct_rank_values.push_back(stop);
    if (start == 0) info.c_min = (stop - start == 1) ? 1 : 0;
    if (stop == n) info.n_max = stop - start;
    start = stop;
  }
  info.n0 = info.n_max + info.c_min;
  return info;
}

WeightTable::WeightTable(const RankInfo& info) : n_(info.n), prefix_(info.n + 1, 0.0L) {
  const auto mult = info.multiplicity();
  long double running = 0.0L;
  for (std::size_t r = 1; r <= n_; ++r) {
    running += static_cast<long double>(mult[r]) * static_cast<long double>(rank_weight(r, n_));
    prefix_[r] = running;
  }
}

double WeightTable::mass(std::size_t lo, std::size_t hi) const {
  if (lo > hi) throw InputError("weighted_rank_mass: lo > hi");
  if (lo < 1 || hi > n_) {
    throw InputError("weighted_rank_mass: interval [" + std::to_string(lo) + ", " +
                     std::to_string(hi) + "] outside 1.." + std::to_string(n_));
  }
  return static_cast<double>(prefix_[hi] - prefix_[lo - 1]);
}

double weighted_rank_mass(const RankInfo& info, std::size_t lo, std::size_t hi) {
  return WeightTable(info).mass(lo, hi);
}

double weighted_count_sum(std::span<const std::int64_t> counts, std::size_t n) {
  // Neumaier summation.
  double sum = 0.0;
  double carry = 0.0;
  for (std::size_t r = 2; r + 1 <= n && r < counts.size(); ++r) {
    if (counts[r] == 0) continue;
    const double term = static_cast<double>(counts[r]) * rank_weight(r, n);
    const double t = sum + term;
    if (std::abs(sum) >= std::abs(term)) {
      carry += (sum - t) + term;
    } else {
      carry += (term - t) + sum;
    }
    sum = t;
  }
  return sum + carry;
}

}  // namespace ir2
