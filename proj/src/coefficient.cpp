#include "ir2/coefficient.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <string>
#include <vector>

#include "ir2/error.hpp"
#include "ir2/rng.hpp"

namespace ir2 {

std::string_view to_string(Method method) noexcept {
  switch (method) {
    case Method::nu: return "nu";
    case Method::nu1d: return "nu1d";
    case Method::xi: return "xi";
  }
  return "unknown";
}

Method parse_method(std::string_view name) {
  if (name == "nu") return Method::nu;
  if (name == "nu1d") return Method::nu1d;
  if (name == "xi") return Method::xi;
  throw InputError("unknown method '" + std::string(name) + "' (expected nu, nu1d or xi)");
}

namespace {

void check_finite(std::span<const double> v, const char* what) {
  for (double x : v) {
    if (!std::isfinite(x)) throw InputError(std::string(what) + " contains a non-finite value");
  }
}

void check_degenerate_n0(const RankInfo& ranks) {
  if (ranks.n0 >= ranks.n) {
    throw DegenerateResponseError(
        "degenerate response: n0 = n_max + c_min = " + std::to_string(ranks.n0) +
        " equals n; no estimator is defined");
  }
}

bool inside(std::size_t r, std::size_t a, std::size_t b) noexcept {
  return std::min(a, b) <= r && r <= std::max(a, b);
}

// D[r] = number of intervals [min(a,b), max(a,b)] containing rank value r.
template <class Endpoints>
std::vector<std::int64_t> interval_cover(std::size_t n, std::size_t count, Endpoints&& endpoints) {
  std::vector<std::int64_t> diff(n + 2, 0);
  for (std::size_t k = 0; k < count; ++k) {
    const auto [a, b] = endpoints(k);
    ++diff[std::min(a, b)];
    --diff[std::max(a, b) + 1];
  }
  std::vector<std::int64_t> cover(n + 1, 0);
  std::int64_t running = 0;
  for (std::size_t r = 1; r <= n; ++r) {
    running += diff[r];
    cover[r] = running;
  }
  return cover;
}

std::int64_t interior_total(std::span<const std::int64_t> counts, std::size_t n) {
  std::int64_t total = 0;
  for (std::size_t r = 2; r < n; ++r) total += counts[r];
  return total;
}

double nu_from_counts(std::span<const std::int64_t> counts, const RankInfo& ranks) {
  const double n = static_cast<double>(ranks.n);
  const double scale = (n - 1.0) / (n - static_cast<double>(ranks.n0));
  return 1.0 - 0.5 * scale * weighted_count_sum(counts, ranks.n);
}

std::vector<std::size_t> ranks_in_order(const RankInfo& ranks, std::span<const std::size_t> order) {
  std::vector<std::size_t> r(order.size());
  for (std::size_t k = 0; k < order.size(); ++k) r[k] = ranks.ranks[order[k]];
  return r;
}

void check_1d_inputs(std::span<const double> y, std::span<const double> x, std::size_t min_n,
                     const char* name) {
  if (y.size() != x.size()) {
    throw InputError(std::string(name) + ": y has " + std::to_string(y.size()) +
                     " values but x has " + std::to_string(x.size()));
  }
  if (y.size() < min_n) {
    throw InsufficientSampleError(std::string(name) + " needs n >= " + std::to_string(min_n) +
                                  ", got n = " + std::to_string(y.size()));
  }
  check_finite(y, "response");
  check_finite(x, "covariate");
}

// Counts for nu_n^{1-dim}: for each r, the number of (j, i) with r_j = r,
// i in 1..n-1, i not in {j, j-1}, r in K_i.
std::vector<std::int64_t> nu1d_counts(std::span<const std::size_t> r, std::size_t n) {
  const auto cover = interval_cover(n, n - 1, [&](std::size_t i) {
    return std::pair{r[i], r[i + 1]};
  });
  std::vector<std::int64_t> counts(n + 1, 0);
  for (std::size_t j = 0; j < n; ++j) {
    const std::size_t rj = r[j];
    if (rj == 1 || rj == n) continue;
    // r_j is an endpoint of K_j and K_{j-1} whenever they exist.
    const std::int64_t own = (j + 1 < n ? 1 : 0) + (j > 0 ? 1 : 0);
    counts[rj] += cover[rj] - own;
  }
  return counts;
}

std::int64_t xi_total(std::span<const std::size_t> r, std::size_t n) {
  const auto cover = interval_cover(n, n - 1, [&](std::size_t i) {
    return std::pair{r[i], r[i + 1]};
  });
  std::int64_t total = 0;
  for (std::size_t j = 0; j < n; ++j) total += cover[r[j]];
  // Drop j = i, whose rank always lies in K_i.
  return total - static_cast<std::int64_t>(n - 1);
}

double xi_from_total(std::int64_t total, std::size_t n) {
  const double nn = static_cast<double>(n);
  return 1.0 - 3.0 * static_cast<double>(total) / (nn * nn - 1.0);
}

}  // namespace

// ---------------------------------------------------------------------------

CoefficientResult nu_from_table(const RankInfo& ranks, const NeighborTable& table) {
  const std::size_t n = ranks.n;
  if (table.size() != n) throw InputError("neighbour table size does not match the response");
  if (n < 3) throw InsufficientSampleError("nu needs n >= 3");
  check_degenerate_n0(ranks);

  const auto& R = ranks.ranks;
  // Base interval of i: [R_i, R_nn1(i)], valid for every j outside {i, nn1(i)}.
  const auto cover = interval_cover(n, n, [&](std::size_t i) {
    return std::pair{R[i], R[table.nn1[i]]};
  });
  const auto mult = ranks.multiplicity();
  std::vector<std::int64_t> counts(n + 1, 0);
  for (std::size_t r = 1; r <= n; ++r) {
    // Remove j = i, always an endpoint of its own base interval.
    counts[r] = static_cast<std::int64_t>(mult[r]) * cover[r] - static_cast<std::int64_t>(mult[r]);
  }
  for (std::size_t i = 0; i < n; ++i) {
    // j = nn1(i): its base-interval hit is replaced by the second-neighbour interval.
    const std::size_t rj = R[table.nn1[i]];
    if (!inside(rj, R[i], R[table.nn2[i]])) --counts[rj];
  }

  CoefficientResult result;
  result.method = Method::nu;
  result.n = n;
  result.n0 = ranks.n0;
  result.seed = table.seed;
  result.value = nu_from_counts(counts, ranks);
  result.pair_count = interior_total(counts, n);
  result.tie_events = table.tie_events;
  return result;
}

CoefficientResult nu_general(std::span<const double> y, const Matrix& x, std::uint64_t seed,
                             const NuOptions& options) {
  if (y.size() != x.rows()) {
    throw InputError("response has " + std::to_string(y.size()) + " values but X has " +
                     std::to_string(x.rows()) + " rows");
  }
  if (y.size() < 3) {
    throw InsufficientSampleError("nu needs n >= 3, got n = " + std::to_string(y.size()));
  }
  check_finite(y, "response");
  const RankInfo ranks = compute_ranks(y);
  check_degenerate_n0(ranks);

  const std::size_t reps = std::max<std::size_t>(1, options.replicates);
  double sum = 0.0;
  CoefficientResult last;
  std::size_t ties = 0;
  for (std::size_t k = 0; k < reps; ++k) {
    const NeighborTable table = build_neighbor_table(x, seed + k, options.neighbors);
    last = nu_from_table(ranks, table);
    sum += last.value;
    ties += table.tie_events;
  }
  last.value = sum / static_cast<double>(reps);
  last.seed = seed;
  last.replicates = reps;
  last.tie_events = ties;
  return last;
}

CoefficientResult nu_general_oracle(std::span<const double> y, const Matrix& x,
                                    std::uint64_t seed) {
  if (y.size() != x.rows()) throw InputError("response and covariates differ in length");
  if (y.size() < 3) throw InsufficientSampleError("nu needs n >= 3");
  check_finite(y, "response");
  if (!x.all_finite()) throw InputError("covariates contain a non-finite value");
  const RankInfo ranks = compute_ranks(y);
  check_degenerate_n0(ranks);

  const std::size_t n = ranks.n;
  const auto& R = ranks.ranks;
  std::vector<std::int64_t> counts(n + 1, 0);
  for (std::size_t j = 0; j < n; ++j) {
    if (R[j] == 1 || R[j] == n) continue;
    for (std::size_t i = 0; i < n; ++i) {
      if (i == j) continue;
      const std::size_t k = nearest_excluding(x, seed, i, j);
      if (inside(R[j], R[i], R[k])) ++counts[R[j]];
    }
  }

  CoefficientResult result;
  result.method = Method::nu;
  result.n = n;
  result.n0 = ranks.n0;
  result.seed = seed;
  result.value = nu_from_counts(counts, ranks);
  result.pair_count = interior_total(counts, n);
  result.oracle_checked = true;
  return result;
}

// ---------------------------------------------------------------------------

std::vector<std::size_t> order_by_x(std::span<const double> x, std::uint64_t seed) {
  std::vector<std::size_t> order(x.size());
  std::iota(order.begin(), order.end(), 0);
  std::vector<std::uint64_t> key(x.size());
  const std::uint64_t stream = derive_seed(seed, 0x5EED0F0ADULL);
  for (std::size_t k = 0; k < x.size(); ++k) key[k] = derive_seed(stream, k);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (x[a] != x[b]) return x[a] < x[b];
    if (key[a] != key[b]) return key[a] < key[b];
    return a < b;
  });
  return order;
}

double nu_1dim_from_order(std::span<const double> y, std::span<const std::size_t> order) {
  if (order.size() != y.size()) throw InputError("nu1d: order does not match the response");
  if (y.size() < 4) throw InsufficientSampleError("nu1d needs n >= 4");
  const RankInfo ranks = compute_ranks(y);
  check_degenerate_n0(ranks);
  const auto counts = nu1d_counts(ranks_in_order(ranks, order), ranks.n);
  return 1.0 - 0.5 * weighted_count_sum(counts, ranks.n);
}

double xi_from_order(std::span<const double> y, std::span<const std::size_t> order) {
  if (order.size() != y.size()) throw InputError("xi: order does not match the response");
  if (y.size() < 2) throw InsufficientSampleError("xi needs n >= 2");
  const RankInfo ranks = compute_ranks(y);
  if (ranks.n_max == ranks.n) throw DegenerateResponseError("degenerate response: all values equal");
  return xi_from_total(xi_total(ranks_in_order(ranks, order), ranks.n), ranks.n);
}

CoefficientResult nu_1dim(std::span<const double> y, std::span<const double> x,
                          std::uint64_t seed, std::size_t replicates) {
  check_1d_inputs(y, x, 4, "nu1d");
  const RankInfo ranks = compute_ranks(y);
  check_degenerate_n0(ranks);
  const std::size_t n = ranks.n;

  const std::size_t reps = std::max<std::size_t>(1, replicates);
  double sum = 0.0;
  std::int64_t pairs = 0;
  for (std::size_t k = 0; k < reps; ++k) {
    const auto r = ranks_in_order(ranks, order_by_x(x, seed + k));
    const auto counts = nu1d_counts(r, n);
    sum += 1.0 - 0.5 * weighted_count_sum(counts, n);
    pairs = interior_total(counts, n);
  }

  CoefficientResult result;
  result.method = Method::nu1d;
  result.n = n;
  result.seed = seed;
  result.replicates = reps;
  result.value = sum / static_cast<double>(reps);
  result.pair_count = pairs;
  return result;
}

CoefficientResult nu_1dim_oracle(std::span<const double> y, std::span<const double> x,
                                 std::uint64_t seed) {
  check_1d_inputs(y, x, 4, "nu1d");
  const RankInfo ranks = compute_ranks(y);
  check_degenerate_n0(ranks);
  const std::size_t n = ranks.n;
  const auto r = ranks_in_order(ranks, order_by_x(x, seed));

  std::vector<std::int64_t> counts(n + 1, 0);
  for (std::size_t j = 0; j < n; ++j) {
    if (r[j] == 1 || r[j] == n) continue;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      if (i == j || i + 1 == j) continue;
      if (inside(r[j], r[i], r[i + 1])) ++counts[r[j]];
    }
  }

  CoefficientResult result;
  result.method = Method::nu1d;
  result.n = n;
  result.seed = seed;
  result.value = 1.0 - 0.5 * weighted_count_sum(counts, n);
  result.pair_count = interior_total(counts, n);
  result.oracle_checked = true;
  return result;
}

CoefficientResult xi_coefficient(std::span<const double> y, std::span<const double> x,
                                 std::uint64_t seed, std::size_t replicates) {
  check_1d_inputs(y, x, 2, "xi");
  const RankInfo ranks = compute_ranks(y);
  if (ranks.n_max == ranks.n) throw DegenerateResponseError("degenerate response: all values equal");
  const std::size_t n = ranks.n;

  const std::size_t reps = std::max<std::size_t>(1, replicates);
  double sum = 0.0;
  std::int64_t total = 0;
  for (std::size_t k = 0; k < reps; ++k) {
    total = xi_total(ranks_in_order(ranks, order_by_x(x, seed + k)), n);
    sum += xi_from_total(total, n);
  }

  CoefficientResult result;
  result.method = Method::xi;
  result.n = n;
  result.seed = seed;
  result.replicates = reps;
  result.value = sum / static_cast<double>(reps);
  result.pair_count = total;
  return result;
}

double xi_rank_difference(std::span<const double> y, std::span<const double> x,
                          std::uint64_t seed) {
  check_1d_inputs(y, x, 2, "xi");
  const RankInfo ranks = compute_ranks(y);
  if (ranks.n_max == ranks.n) throw DegenerateResponseError("degenerate response: all values equal");
  const auto r = ranks_in_order(ranks, order_by_x(x, seed));
  std::int64_t total = 0;
  for (std::size_t i = 0; i + 1 < r.size(); ++i) {
    total += std::llabs(static_cast<long long>(r[i + 1]) - static_cast<long long>(r[i]));
  }
  return xi_from_total(total, r.size());
}

CoefficientResult compute_coefficient(Method method, std::span<const double> y, const Matrix& x,
                                      std::uint64_t seed, const NuOptions& options) {
  if (method == Method::nu) return nu_general(y, x, seed, options);
  if (x.cols() != 1) {
    throw InputError(std::string(to_string(method)) + " requires exactly one covariate, got " +
                     std::to_string(x.cols()));
  }
  const auto column = x.column(0);
  return method == Method::nu1d ? nu_1dim(y, column, seed, options.replicates)
                                : xi_coefficient(y, column, seed, options.replicates);
}

// ---------------------------------------------------------------------------

WeightComparison weight_comparison(std::size_t n, std::size_t r) {
  if (n < 5) throw InputError("weight_comparison needs n >= 5");
  if (r <= 1 || r >= n) throw InputError("weight_comparison needs 1 < r < n");
  WeightComparison w;
  const double dn = static_cast<double>(n);
  w.w_nu = 1.0 / (2.0 * static_cast<double>(r - 1) * static_cast<double>(n - r));
  w.w_xi = 3.0 / (dn * dn - 1.0);
  // w_xi >= w_nu  <=>  6 (r-1)(n-r) >= n^2 - 1, decided in integers.
  const auto lhs = static_cast<unsigned long long>(6) * (r - 1) * (n - r);
  const auto rhs = static_cast<unsigned long long>(n) * n - 1;
  w.in_Ln = lhs >= rhs;
  return w;
}

std::pair<double, double> dominance_interval(std::size_t n) {
  if (n < 5) throw InputError("dominance_interval needs n >= 5");
  const double dn = static_cast<double>(n);
  const double half_width = std::sqrt((dn - 1.0) * (dn - 5.0) / 3.0);
  return {(dn + 1.0 - half_width) / 2.0, (dn + 1.0 + half_width) / 2.0};
}

}  // namespace ir2
