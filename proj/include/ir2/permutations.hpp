#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace ir2 {

/// Bijection of {1..n}; value(i) is the image of position i (0-based i).
class Permutation {
 public:
  /// Throws InputError unless `one_based` holds each of 1..n exactly once.
  explicit Permutation(std::vector<std::size_t> one_based);

  static Permutation identity(std::size_t n);

  std::size_t size() const noexcept { return map_.size(); }
  std::size_t operator()(std::size_t i) const { return map_[i]; }
  std::span<const std::size_t> values() const noexcept { return map_; }

  Permutation inverse() const;
  /// (*this o other)(i) = (*this)(other(i)).
  Permutation compose(const Permutation& other) const;

  friend bool operator==(const Permutation&, const Permutation&) = default;

 private:
  std::vector<std::size_t> map_;
};

/// Exact rational with 64-bit parts, for small-n enumeration.
struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  Rational& operator+=(const Rational& other);
  friend bool operator==(const Rational&, const Rational&) = default;
  double to_double() const noexcept { return static_cast<double>(num) / static_cast<double>(den); }
};

/// d_nu(sigma, pi) = 1/2 sum_{l=2}^{n-1} sum_{i=1}^{n-1} 1{l strictly between
/// tau(i) and tau(i+1)} / ((l-1)(n-l)), tau = sigma^{-1} pi. O(n).
double d_nu(const Permutation& sigma, const Permutation& pi);

/// Same quantity in exact arithmetic. Intended for n <= 12.
Rational d_nu_exact(const Permutation& sigma, const Permutation& pi);

/// (d_nu(sigma, pi) + d_nu(pi, sigma)) / 2.
double d_nu_symmetric(const Permutation& sigma, const Permutation& pi);

enum class PermutationMetric { footrule, spearman_rho_sq, kendall, cayley, hamming, ulam };

std::string_view to_string(PermutationMetric metric) noexcept;
PermutationMetric parse_permutation_metric(std::string_view name);

double classical_metric(PermutationMetric metric, const Permutation& sigma, const Permutation& pi);

/// Inversions of a sequence of distinct values, by merge counting.
std::uint64_t count_inversions(std::span<const std::size_t> values);

/// Longest strictly increasing subsequence length, patience sorting.
std::size_t longest_increasing_subsequence(std::span<const std::size_t> values);

}  // namespace ir2
