#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <utility>

#include "ir2/matrix.hpp"
#include "ir2/neighbors.hpp"
#include "ir2/ranks.hpp"

namespace ir2 {

enum class Method { nu, nu1d, xi };

std::string_view to_string(Method method) noexcept;
/// Accepts "nu", "nu1d", "xi"; throws InputError otherwise.
Method parse_method(std::string_view name);

struct CoefficientResult {
  double value = 0.0;  // raw, may fall outside [0, 1]
  Method method = Method::nu;
  std::size_t n = 0;
  std::optional<std::size_t> n0;  // set for method nu
  std::uint64_t seed = 0;
  bool oracle_checked = false;
  std::size_t replicates = 1;
  std::int64_t pair_count = 0;  // indicator hits entering the weighted sum (last replicate)
  std::size_t tie_events = 0;
};

struct NuOptions {
  NeighborOptions neighbors;
  /// Average over this many tie-breaking seeds: seed, seed + 1, ..., seed + m - 1.
  std::size_t replicates = 1;
};

// ---------------------------------------------------------------------------
// General estimator (any p)
// ---------------------------------------------------------------------------

/// nu_n(Y, X) in O(n log n): ranks, a nearest-neighbour table, and a
/// difference array over rank values.
CoefficientResult nu_general(std::span<const double> y, const Matrix& x, std::uint64_t seed,
                             const NuOptions& options = {});

/// nu_n from precomputed ranks and a neighbour table.
CoefficientResult nu_from_table(const RankInfo& ranks, const NeighborTable& table);

/// Literal double loop over (j, i) with N^{-j}(i) found by exhaustive scan. O(n^2 p).
CoefficientResult nu_general_oracle(std::span<const double> y, const Matrix& x,
                                    std::uint64_t seed);

// ---------------------------------------------------------------------------
// One-dimensional estimators
// ---------------------------------------------------------------------------

/// Order of observations by x, ties broken uniformly at random under `seed`.
std::vector<std::size_t> order_by_x(std::span<const double> x, std::uint64_t seed);

/// nu_n^{1-dim} for a fixed ordering of the observations by x.
double nu_1dim_from_order(std::span<const double> y, std::span<const std::size_t> order);

/// xi_n (interval form) for a fixed ordering of the observations by x.
double xi_from_order(std::span<const double> y, std::span<const std::size_t> order);

/// nu_n^{1-dim}(Y, X). Requires n >= 4 and n0 < n.
CoefficientResult nu_1dim(std::span<const double> y, std::span<const double> x,
                          std::uint64_t seed, std::size_t replicates = 1);

/// Literal double loop for nu_n^{1-dim}. O(n^2).
CoefficientResult nu_1dim_oracle(std::span<const double> y, std::span<const double> x,
                                 std::uint64_t seed);

/// Chatterjee's xi_n in interval form with uniform weight 3/(n^2 - 1).
CoefficientResult xi_coefficient(std::span<const double> y, std::span<const double> x,
                                 std::uint64_t seed, std::size_t replicates = 1);

/// xi_n via 1 - 3 sum |r_{i+1} - r_i| / (n^2 - 1); equals the interval form for distinct ranks.
double xi_rank_difference(std::span<const double> y, std::span<const double> x,
                          std::uint64_t seed);

/// Dispatches on method; nu1d and xi require a single column.
CoefficientResult compute_coefficient(Method method, std::span<const double> y, const Matrix& x,
                                      std::uint64_t seed, const NuOptions& options = {});

// ---------------------------------------------------------------------------
// Weight comparison between nu_n^{1-dim} and xi_n
// ---------------------------------------------------------------------------

struct WeightComparison {
  double w_nu = 0.0;
  double w_xi = 0.0;
  bool in_Ln = false;  // w_xi >= w_nu
};

/// Requires n >= 5 and 1 < r < n.
WeightComparison weight_comparison(std::size_t n, std::size_t r);

/// Closed interval of ranks where the xi weight dominates. Requires n >= 5.
std::pair<double, double> dominance_interval(std::size_t n);

}  // namespace ir2
