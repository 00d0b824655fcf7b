#include "ir2/inference.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>
#include <vector>

#include "ir2/error.hpp"
#include "ir2/parallel.hpp"
#include "ir2/rng.hpp"

namespace ir2 {

std::string_view to_string(TestMode mode) noexcept {
  return mode == TestMode::permutation ? "permutation" : "asymptotic_conjectured";
}

namespace {

constexpr double kNullVarianceLimit = std::numbers::pi * std::numbers::pi / 3.0 - 3.0;

}  // namespace

PermutationTestResult permutation_test(std::span<const double> y, const Matrix& x, Method method,
                                       std::size_t permutations, std::uint64_t seed,
                                       std::size_t threads) {
  if (permutations == 0) throw InputError("permutation_test needs B >= 1");
  if (y.size() != x.rows()) throw InputError("response and covariates differ in length");
  if (method != Method::nu && x.cols() != 1) {
    throw InputError(std::string(to_string(method)) + " requires exactly one covariate");
  }
  const std::size_t n = y.size();
  const CoefficientResult observed = compute_coefficient(method, y, x, seed);

  // The X side (neighbour table or ordering by x) is fixed under the null
  // permutation scheme, so it is built once with `seed` and shared.
  NeighborTable table;
  std::vector<std::size_t> order;
  if (method == Method::nu) {
    table = build_neighbor_table(x, seed);
  } else {
    order = order_by_x(x.column(0), seed);
  }

  std::vector<double> stats(permutations);
  parallel_for(permutations, threads, [&](std::size_t b) {
    std::vector<double> yp(y.begin(), y.end());
    Rng rng(derive_seed(seed, b + 1));
    rng.shuffle(std::span<double>(yp));
    switch (method) {
      case Method::nu: stats[b] = nu_from_table(compute_ranks(yp), table).value; break;
      case Method::nu1d: stats[b] = nu_1dim_from_order(yp, order); break;
      case Method::xi: stats[b] = xi_from_order(yp, order); break;
    }
  });

  PermutationTestResult result;
  result.statistic = observed.value;
  result.method = method;
  result.permutations = permutations;
  result.seed = seed;
  result.n = n;
  result.exceedances = static_cast<std::size_t>(
      std::count_if(stats.begin(), stats.end(), [&](double s) { return s >= observed.value; }));
  result.p_value = (1.0 + static_cast<double>(result.exceedances)) /
                   (static_cast<double>(permutations) + 1.0);
  if (method == Method::nu1d) result.null_mean_theoretical = 2.0 / static_cast<double>(n);
  result.mode = TestMode::permutation;
  return result;
}

NullMoments asymptotic_null_params(std::size_t n) {
  if (n < 4) throw InputError("asymptotic_null_params needs n >= 4");
  const double dn = static_cast<double>(n);
  return {2.0 / dn, kNullVarianceLimit / dn};
}

double asymptotic_p_value(double statistic, std::size_t n) {
  const NullMoments m = asymptotic_null_params(n);
  const double z = (statistic - m.mean) / std::sqrt(m.variance);
  return 0.5 * std::erfc(z / std::numbers::sqrt2);
}

PermutationTestResult asymptotic_test(std::span<const double> y, std::span<const double> x,
                                      std::uint64_t seed) {
  if (y.size() < 20) {
    throw InsufficientSampleError("the asymptotic test needs n >= 20, got n = " +
                                  std::to_string(y.size()));
  }
  const CoefficientResult stat = nu_1dim(y, x, seed);
  const NullMoments m = asymptotic_null_params(stat.n);

  PermutationTestResult result;
  result.statistic = stat.value;
  result.method = Method::nu1d;
  result.seed = seed;
  result.n = stat.n;
  result.null_mean_theoretical = m.mean;
  result.z_score = (stat.value - m.mean) / std::sqrt(m.variance);
  result.p_value = asymptotic_p_value(stat.value, stat.n);
  result.mode = TestMode::asymptotic_conjectured;
  return result;
}

std::vector<double> bh_adjust(std::span<const double> p_values) {
  const std::size_t m = p_values.size();
  for (double p : p_values) {
    if (!(p >= 0.0 && p <= 1.0)) throw InputError("p-values must lie in [0, 1]");
  }
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return p_values[a] < p_values[b]; });

  std::vector<double> q(m);
  double running = 1.0;
  for (std::size_t k = m; k > 0; --k) {
    const std::size_t idx = order[k - 1];
    const double adjusted = p_values[idx] * static_cast<double>(m) / static_cast<double>(k);
    running = std::min(running, adjusted);
    q[idx] = std::min(running, 1.0);
  }
  return q;
}

}  // namespace ir2
