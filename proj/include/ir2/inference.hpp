#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "ir2/coefficient.hpp"

namespace ir2 {

enum class TestMode { permutation, asymptotic_conjectured };

std::string_view to_string(TestMode mode) noexcept;

struct PermutationTestResult {
  double statistic = 0.0;
  Method method = Method::nu1d;
  double p_value = 1.0;
  std::size_t permutations = 0;  // B; 0 in asymptotic mode
  std::size_t exceedances = 0;   // #{b : stat_b >= statistic}
  std::uint64_t seed = 0;
  std::size_t n = 0;
  std::optional<double> null_mean_theoretical;  // 2/n for nu1d
  std::optional<double> z_score;                // asymptotic mode only
  TestMode mode = TestMode::permutation;
};

/// Right-tailed permutation test of independence; Y is permuted against fixed X.
/// Permutation b shuffles Y with Rng(derive_seed(seed, b + 1)). X-side
/// tie-breaking (neighbour table or ordering by x) uses `seed` for the observed
/// statistic and every permutation alike.
PermutationTestResult permutation_test(std::span<const double> y, const Matrix& x, Method method,
                                       std::size_t permutations, std::uint64_t seed,
                                       std::size_t threads = 1);

struct NullMoments {
  double mean = 0.0;
  double variance = 0.0;
};

/// Mean 2/n and variance (pi^2/3 - 3)/n of nu_n^{1-dim} under independence.
NullMoments asymptotic_null_params(std::size_t n);

/// One-sided normal test using the conjectured limit N(2/n, (pi^2/3 - 3)/n).
/// Not proven; requires n >= 20.
PermutationTestResult asymptotic_test(std::span<const double> y, std::span<const double> x,
                                      std::uint64_t seed);

/// Upper-tail p-value of a z statistic for the conjectured normal limit.
double asymptotic_p_value(double statistic, std::size_t n);

/// Benjamini-Hochberg adjusted p-values (q-values), in input order.
std::vector<double> bh_adjust(std::span<const double> p_values);

}  // namespace ir2
