#include "ir2/permutations.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "ir2/error.hpp"
#include "ir2/ranks.hpp"
#include "ir2/rng.hpp"

namespace ir2 {

Permutation::Permutation(std::vector<std::size_t> one_based) : map_(std::move(one_based)) {
  std::vector<bool> seen(map_.size() + 1, false);
  for (std::size_t v : map_) {
    if (v < 1 || v > map_.size() || seen[v]) {
      throw InputError("not a permutation of 1.." + std::to_string(map_.size()));
    }
    seen[v] = true;
  }
}

Permutation Permutation::identity(std::size_t n) {
  std::vector<std::size_t> v(n);
  std::iota(v.begin(), v.end(), 1);
  return Permutation(std::move(v));
}

Permutation Permutation::inverse() const {
  std::vector<std::size_t> inv(map_.size());
  for (std::size_t i = 0; i < map_.size(); ++i) inv[map_[i] - 1] = i + 1;
  return Permutation(std::move(inv));
}

Permutation Permutation::compose(const Permutation& other) const {
  if (other.size() != size()) throw InputError("cannot compose permutations of different sizes");
  std::vector<std::size_t> out(size());
  for (std::size_t i = 0; i < size(); ++i) out[i] = map_[other.map_[i] - 1];
  return Permutation(std::move(out));
}

Rational& Rational::operator+=(const Rational& other) {
  const int128 n = static_cast<int128>(num) * other.den + static_cast<int128>(other.num) * den;
  const int128 d = static_cast<int128>(den) * other.den;
  int128 a = n < 0 ? -n : n;
  int128 b = d;
  while (b != 0) {
    const int128 t = a % b;
    a = b;
    b = t;
  }
  const int128 g = a == 0 ? 1 : a;
  num = static_cast<std::int64_t>(n / g);
  den = static_cast<std::int64_t>(d / g);
  return *this;
}

namespace {

void check_pair(const Permutation& sigma, const Permutation& pi) {
  if (sigma.size() != pi.size()) {
    throw InputError("permutations have different lengths (" + std::to_string(sigma.size()) +
                     " vs " + std::to_string(pi.size()) + ")");
  }
}

// strict[l] = #{i : l strictly between tau(i) and tau(i+1)}, tau = sigma^{-1} pi.
std::vector<std::int64_t> strict_cover(const Permutation& sigma, const Permutation& pi) {
  check_pair(sigma, pi);
  const std::size_t n = sigma.size();
  if (n < 2) throw InputError("d_nu needs n >= 2");
  const Permutation tau = sigma.inverse().compose(pi);
  std::vector<std::int64_t> diff(n + 2, 0);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const std::size_t lo = std::min(tau(i), tau(i + 1));
    const std::size_t hi = std::max(tau(i), tau(i + 1));
    if (hi - lo < 2) continue;
    ++diff[lo + 1];
    --diff[hi];
  }
  std::vector<std::int64_t> cover(n + 1, 0);
  std::int64_t running = 0;
  for (std::size_t l = 1; l <= n; ++l) {
    running += diff[l];
    cover[l] = running;
  }
  return cover;
}

}  // namespace

double d_nu(const Permutation& sigma, const Permutation& pi) {
  const auto cover = strict_cover(sigma, pi);
  return 0.5 * weighted_count_sum(cover, sigma.size());
}

Rational d_nu_exact(const Permutation& sigma, const Permutation& pi) {
  const auto cover = strict_cover(sigma, pi);
  const auto n = static_cast<std::int64_t>(sigma.size());
  Rational total;
  for (std::int64_t l = 2; l < n; ++l) {
    if (cover[static_cast<std::size_t>(l)] == 0) continue;
    total += Rational{cover[static_cast<std::size_t>(l)], 2 * (l - 1) * (n - l)};
  }
  return total;
}

double d_nu_symmetric(const Permutation& sigma, const Permutation& pi) {
  return 0.5 * (d_nu(sigma, pi) + d_nu(pi, sigma));
}

std::string_view to_string(PermutationMetric metric) noexcept {
  switch (metric) {
    case PermutationMetric::footrule: return "footrule";
    case PermutationMetric::spearman_rho_sq: return "spearman_rho_sq";
    case PermutationMetric::kendall: return "kendall";
    case PermutationMetric::cayley: return "cayley";
    case PermutationMetric::hamming: return "hamming";
    case PermutationMetric::ulam: return "ulam";
  }
  return "unknown";
}

PermutationMetric parse_permutation_metric(std::string_view name) {
  for (auto m : {PermutationMetric::footrule, PermutationMetric::spearman_rho_sq,
                 PermutationMetric::kendall, PermutationMetric::cayley, PermutationMetric::hamming,
                 PermutationMetric::ulam}) {
    if (name == to_string(m)) return m;
  }
  throw InputError("unknown permutation metric '" + std::string(name) + "'");
}

std::uint64_t count_inversions(std::span<const std::size_t> values) {
  std::vector<std::size_t> a(values.begin(), values.end());
  std::vector<std::size_t> buffer(a.size());
  std::uint64_t inversions = 0;
  // Bottom-up merge sort.
  for (std::size_t width = 1; width < a.size(); width *= 2) {
    for (std::size_t lo = 0; lo < a.size(); lo += 2 * width) {
      const std::size_t mid = std::min(lo + width, a.size());
      const std::size_t hi = std::min(lo + 2 * width, a.size());
      std::size_t i = lo, j = mid, k = lo;
      while (i < mid && j < hi) {
        if (a[j] < a[i]) {
          inversions += mid - i;
          buffer[k++] = a[j++];
        } else {
          buffer[k++] = a[i++];
        }
      }
      while (i < mid) buffer[k++] = a[i++];
      while (j < hi) buffer[k++] = a[j++];
    }
    std::swap(a, buffer);
  }
  return inversions;
}

std::size_t longest_increasing_subsequence(std::span<const std::size_t> values) {
  std::vector<std::size_t> tails;
  for (std::size_t v : values) {
    auto it = std::lower_bound(tails.begin(), tails.end(), v);
    if (it == tails.end()) {
      tails.push_back(v);
    } else {
      *it = v;
    }
  }
  return tails.size();
}

double classical_metric(PermutationMetric metric, const Permutation& sigma, const Permutation& pi) {
  check_pair(sigma, pi);
  const std::size_t n = sigma.size();
  switch (metric) {
    case PermutationMetric::footrule: {
      double s = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        s += static_cast<double>(sigma(i) > pi(i) ? sigma(i) - pi(i) : pi(i) - sigma(i));
      }
      return s;
    }
    case PermutationMetric::spearman_rho_sq: {
      double s = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double d = static_cast<double>(sigma(i)) - static_cast<double>(pi(i));
        s += d * d;
      }
      return s;
    }
    case PermutationMetric::kendall: {
      // Discordant pairs = inversions of pi read in the order given by sigma.
      const Permutation seq = pi.compose(sigma.inverse());
      return static_cast<double>(count_inversions(seq.values()));
    }
    case PermutationMetric::cayley: {
      const Permutation tau = sigma.inverse().compose(pi);
      std::vector<bool> seen(n, false);
      std::size_t cycles = 0;
      for (std::size_t i = 0; i < n; ++i) {
        if (seen[i]) continue;
        ++cycles;
        for (std::size_t k = i; !seen[k]; k = tau(k) - 1) seen[k] = true;
      }
      return static_cast<double>(n - cycles);
    }
    case PermutationMetric::hamming: {
      std::size_t s = 0;
      for (std::size_t i = 0; i < n; ++i) s += sigma(i) != pi(i) ? 1 : 0;
      return static_cast<double>(s);
    }
    case PermutationMetric::ulam: {
      const Permutation seq = sigma.compose(pi.inverse());
      return static_cast<double>(n - longest_increasing_subsequence(seq.values()));
    }
  }
  throw InputError("unknown permutation metric");
}

}  // namespace ir2
