// Acceptance checks. Usage: acceptance [criterion ...]; no arguments runs all.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <numbers>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "ir2/coefficient.hpp"
#include "ir2/inference.hpp"
#include "ir2/permutations.hpp"
#include "ir2/population.hpp"
#include "ir2/rng.hpp"
#include "ir2/simulation.hpp"

using namespace ir2;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int id;
  const char* title;
  double budget_seconds;
  std::function<Outcome()> run;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double mean_of(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double sd_of(const std::vector<double>& v) {
  const double m = mean_of(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return std::sqrt(s / static_cast<double>(v.size() - 1));
}

double median_of(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

std::vector<double> seq(std::size_t n) {
  std::vector<double> v(n);
  std::iota(v.begin(), v.end(), 1.0);
  return v;
}

Permutation random_permutation(Rng& rng, std::size_t n) {
  std::vector<std::size_t> v(n);
  std::iota(v.begin(), v.end(), 1);
  rng.shuffle(std::span<std::size_t>(v));
  return Permutation(v);
}

constexpr std::size_t kThreads = 0;

Outcome exact_null_mean() {
  double worst = 0.0;
  std::string parts;
  for (std::size_t n = 4; n <= 7; ++n) {
    const auto x = seq(n);
    std::vector<double> y = x;
    long double sum = 0.0L;
    std::size_t count = 0;
    do {
      sum += nu_1dim(y, x, 1).value;
      ++count;
    } while (std::next_permutation(y.begin(), y.end()));
    const double mean = static_cast<double>(sum / count);
    const double err = std::abs(mean - 2.0 / static_cast<double>(n));
    worst = std::max(worst, err);
    parts += fmt(" n=%zu:%.15f", n, mean);
  }
  return {worst <= 1e-12, fmt("max |mean - 2/n| = %.2e;", worst) + parts};
}

Outcome null_variance() {
  ModelSpec spec;
  spec.name = "independent";
  spec.n = 1000;
  const auto stats = replicate_statistic(spec, Method::nu1d, 10000, 20240601, kThreads);
  const double sd = sd_of(stats);
  const double nvar = 1000.0 * sd * sd;
  return {nvar >= 0.26 && nvar <= 0.32,
          fmt("n*Var = %.4f (target [0.26, 0.32], limit %.4f), mean = %.5f", nvar,
              std::numbers::pi * std::numbers::pi / 3.0 - 3.0, mean_of(stats))};
}

Outcome product_uniform_target() {
  const PopulationTarget t = nu_product_uniform();
  ModelSpec spec;
  spec.name = "product_uniform";
  spec.n = 1000;
  const auto stats = replicate_statistic(spec, Method::nu1d, 10000, 20240602, kThreads);
  const double m = mean_of(stats);
  const double sd = sd_of(stats);
  const bool ok = std::abs(t.value - 0.3126) <= 0.001 && std::abs(m - 0.314) <= 0.01 &&
                  std::abs(sd - 0.02) <= 0.005;
  return {ok, fmt("quadrature = %.10f; MC mean = %.4f (0.314 +- 0.01), sd = %.4f (0.02 +- 0.005)",
                  t.value, m, sd)};
}

Outcome oracle_equivalence() {
  Rng rng(20240603);
  std::size_t mismatches_nu = 0, mismatches_1d = 0, checked = 0;
  for (int rep = 0; rep < 200; ++rep) {
    const std::size_t n = 4 + rng.below(61);
    const std::size_t p = 1 + rng.below(3);
    const std::size_t levels = 2 + rng.below(8);
    Matrix x(n, p);
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t c = 0; c < p; ++c) x(i, c) = static_cast<double>(rng.below(levels));
      y[i] = static_cast<double>(rng.below(levels + 2));
    }
    if (compute_ranks(y).n0 >= n) y[0] = -1.0, y[1] = 1e6;
    const std::uint64_t seed = rng.next_u64();
    mismatches_nu += nu_general(y, x, seed).value != nu_general_oracle(y, x, seed).value ? 1 : 0;
    const auto col = x.column(0);
    mismatches_1d += nu_1dim(y, col, seed).value != nu_1dim_oracle(y, col, seed).value ? 1 : 0;
    ++checked;
  }
  return {mismatches_nu == 0 && mismatches_1d == 0,
          fmt("%zu datasets with ties; nu mismatches = %zu, nu1d mismatches = %zu", checked,
              mismatches_nu, mismatches_1d)};
}

Outcome monotone_exactness() {
  std::size_t failures = 0;
  for (std::size_t n = 4; n <= 500; ++n) {
    const auto x = seq(n);
    std::vector<double> up = x, down(x.rbegin(), x.rend());
    for (const auto* y : {&up, &down}) {
      failures += nu_1dim(*y, x, n).value != 1.0 ? 1 : 0;
      failures += nu_1dim_oracle(*y, x, n).value != 1.0 ? 1 : 0;
    }
  }
  return {failures == 0, fmt("n = 4..500 increasing and decreasing, fast and oracle; %zu values != 1", failures)};
}

Outcome figure1_bands() {
  struct Band {
    const char* model;
    double lo, hi;
  };
  const Band bands[] = {{"scatter_linear", 0.95, 1.0}, {"scatter_quadratic", 0.94, 1.0},
                        {"scatter_sine", 0.85, 0.95}};
  bool ok = true;
  std::string detail;
  for (const auto& b : bands) {
    ModelSpec spec;
    spec.name = b.model;
    spec.n = 100;
    const auto stats = replicate_statistic(spec, Method::nu, 100, 20240604, kThreads);
    const auto inside = std::count_if(stats.begin(), stats.end(),
                                      [&](double v) { return v >= b.lo && v <= b.hi; });
    ok = ok && inside >= 90;
    detail += fmt("%s %ld/100 in [%.2f, %.2f] (mean %.3f); ", b.model, static_cast<long>(inside), b.lo,
                  b.hi, mean_of(stats));
  }
  return {ok, detail};
}

Outcome ford_recovery() {
  SelectionStudyConfig c;
  c.models = {"lm"};
  c.n_list = {100, 1000};
  c.p = 100;
  c.reps = 100;
  c.seed = 20240605;
  c.threads = kThreads;
  const ExperimentReport r = selection_study(c);
  double inc100 = 0, inc1000 = 0, false1000 = 0;
  for (const auto& row : r.rows) {
    if (row.metric == "inclusion") (row.n == 100 ? inc100 : inc1000) = row.value;
    if (row.metric == "mean_false" && row.n == 1000) false1000 = row.value;
  }
  return {inc1000 >= 0.95 && false1000 <= 1.0 && inc100 < inc1000,
          fmt("n=1000: inclusion %.2f, mean false %.2f; n=100: inclusion %.2f", inc1000, false1000,
              inc100)};
}

Outcome test_calibration() {
  const int reps = 500;
  int rejected = 0;
  for (int rep = 0; rep < reps; ++rep) {
    ModelSpec spec;
    spec.name = "independent";
    spec.n = 100;
    spec.seed = derive_seed(20240606, rep);
    const Sample s = generate(spec);
    const auto t = permutation_test(s.y, s.x, Method::nu1d, 199, derive_seed(spec.seed, 1), kThreads);
    rejected += t.p_value <= 0.05 ? 1 : 0;
  }
  const double rate = static_cast<double>(rejected) / reps;
  return {rate >= 0.03 && rate <= 0.07, fmt("rejection rate %.3f over %d reps (B = 199)", rate, reps)};
}

Outcome weight_ratio() {
  double worst = 1e300;
  for (std::size_t n = 5; n <= 200; ++n) {
    for (std::size_t r = 2; r < n; ++r) {
      const auto w = weight_comparison(n, r);
      worst = std::min(worst, w.w_nu / w.w_xi);
    }
  }
  return {worst >= 2.0 / 3.0 - 1e-15, fmt("min w_nu / w_xi = %.15f", worst)};
}

Outcome d_nu_properties() {
  Rng rng(20240607);
  std::size_t invariance_failures = 0;
  for (int rep = 0; rep < 200; ++rep) {
    const std::size_t n = 2 + rng.below(11);
    const Permutation s = random_permutation(rng, n);
    const Permutation p = random_permutation(rng, n);
    const Permutation t = random_permutation(rng, n);
    invariance_failures += d_nu_exact(t.compose(s), t.compose(p)) == d_nu_exact(s, p) ? 0 : 1;
  }
  std::size_t zero_but_distinct = 0, equal_but_nonzero = 0;
  std::string witness;
  for (std::size_t n = 2; n <= 6; ++n) {
    std::vector<std::size_t> v(n);
    std::iota(v.begin(), v.end(), 1);
    std::vector<Permutation> all;
    do {
      all.emplace_back(v);
    } while (std::next_permutation(v.begin(), v.end()));
    for (const auto& a : all) {
      for (const auto& b : all) {
        const bool zero = d_nu_exact(a, b).num == 0;
        if (zero && !(a == b)) {
          if (witness.empty()) {
            std::ostringstream os;
            os << "e.g. n=" << n << " sigma=id, pi=";
            const Permutation tau = a.inverse().compose(b);
            for (std::size_t i = 0; i < n; ++i) os << (i ? "," : "(") << tau(i);
            os << ")";
            witness = os.str();
          }
          ++zero_but_distinct;
        }
        if (!zero && a == b) ++equal_but_nonzero;
      }
    }
  }
  return {invariance_failures == 0 && zero_but_distinct == 0 && equal_but_nonzero == 0,
          fmt("left-invariance failures %zu/200; d=0 with sigma != pi: %zu pairs; sigma = pi with d > 0: %zu; ",
              invariance_failures, zero_but_distinct, equal_but_nonzero) + witness};
}

Outcome rate_sanity() {
  const double target = nu_product_uniform().value;
  std::vector<double> medians;
  std::string detail;
  for (std::size_t n : {100u, 400u, 1600u}) {
    ModelSpec spec;
    spec.name = "product_uniform";
    spec.n = n;
    auto stats = replicate_statistic(spec, Method::nu, 200, 20240608, kThreads);
    for (double& v : stats) v = std::abs(v - target);
    medians.push_back(median_of(stats));
    detail += fmt("n=%zu: %.5f; ", n, medians.back());
  }
  return {medians[0] > medians[1] && medians[1] > medians[2], "median |nu_n - nu| " + detail};
}

Outcome runtime_growth() {
  RuntimeStudyConfig c;
  c.methods = {Method::nu1d};
  c.reps = 5;
  c.seed = 20240609;
  const ExperimentReport r = runtime_study(c);
  std::string detail;
  double slope = 0.0;
  for (const auto& row : r.rows) {
    if (row.metric == "seconds") detail += fmt("n=%zu: %.4fs; ", row.n, row.value);
    if (row.metric == "loglog_slope") slope = row.value;
  }
  return {slope <= 1.3, fmt("log-log slope %.3f; ", slope) + detail};
}

const std::vector<Criterion> kCriteria = {
    {1, "exact null mean of nu1d equals 2/n", 30, exact_null_mean},
    {2, "null variance n*Var(nu1d) near pi^2/3 - 3", 120, null_variance},
    {3, "product-uniform population value and MC moments", 300, product_uniform_target},
    {4, "fast estimators equal brute-force oracles", 60, oracle_equivalence},
    {5, "monotone data give nu1d = 1 exactly", 60, monotone_exactness},
    {6, "scatterplot bands at n = 100", 60, figure1_bands},
    {7, "FORD recovery on the linear model", 900, ford_recovery},
    {8, "permutation test level", 300, test_calibration},
    {9, "weight ratio w_nu / w_xi >= 2/3", 1, weight_ratio},
    {10, "d_nu left-invariance and zero set", 30, d_nu_properties},
    {11, "error decay on the product-uniform model", 600, rate_sanity},
    {12, "sub-quadratic runtime growth of nu1d", 120, runtime_growth},
};

}  // namespace

int main(int argc, char** argv) {
  std::vector<int> wanted;
  for (int a = 1; a < argc; ++a) wanted.push_back(std::atoi(argv[a]));
  int failures = 0;
  for (const auto& c : kCriteria) {
    if (!wanted.empty() && std::find(wanted.begin(), wanted.end(), c.id) == wanted.end()) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_budget = secs <= c.budget_seconds;
    const bool pass = o.pass && in_budget;
    std::printf("%s criterion %2d: %s | %s | %.1fs (budget %.0fs)\n", pass ? "PASS" : "FAIL", c.id,
                c.title, o.detail.c_str(), secs, c.budget_seconds);
    std::fflush(stdout);
    failures += pass ? 0 : 1;
  }
  return failures == 0 ? 0 : 1;
}
