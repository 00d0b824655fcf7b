#include "ir2/ford.hpp"

#include <algorithm>
#include <string>
#include <vector>

#include "ir2/error.hpp"
#include "ir2/parallel.hpp"
#include "ir2/ranks.hpp"
#include "ir2/rng.hpp"

namespace ir2 {

std::string_view to_string(StopReason reason) noexcept {
  switch (reason) {
    case StopReason::nonpositive_first_score: return "nonpositive_first_score";
    case StopReason::no_improvement: return "no_improvement";
    case StopReason::exhausted_all: return "exhausted_all";
    case StopReason::max_steps_reached: return "max_steps_reached";
  }
  return "unknown";
}

std::uint64_t candidate_seed(std::uint64_t seed, std::size_t step, std::size_t candidate) noexcept {
  return derive_seed(derive_seed(seed, step), candidate);
}

namespace {

SelectionPath run_forward(std::span<const double> y, const Matrix& x, std::uint64_t seed,
                          const FordOptions& options, bool apply_stopping_rule) {
  const std::size_t p = x.cols();
  if (p == 0) throw InputError("FORD needs at least one covariate");
  if (y.size() != x.rows()) {
    throw InputError("response has " + std::to_string(y.size()) + " values but X has " +
                     std::to_string(x.rows()) + " rows");
  }
  if (y.size() < 3) throw InsufficientSampleError("FORD needs n >= 3");
  const RankInfo ranks = compute_ranks(y);
  if (ranks.n0 >= ranks.n) {
    throw DegenerateResponseError("degenerate response: n0 = n, no estimator is defined");
  }
  if (!x.all_finite()) throw InputError("covariates contain a non-finite value");

  const Matrix xs = options.standardize ? standardize_columns(x) : x;
  const std::size_t max_steps = options.max_steps == 0 ? p : std::min(options.max_steps, p);

  SelectionPath path;
  path.seed = seed;
  std::vector<std::size_t> remaining(p);
  for (std::size_t c = 0; c < p; ++c) remaining[c] = c;

  for (std::size_t step = 0;; ++step) {
    if (remaining.empty()) {
      path.stop_reason = StopReason::exhausted_all;
      break;
    }
    if (step == max_steps) {
      path.stop_reason = StopReason::max_steps_reached;
      break;
    }

    // Collect every candidate score, then reduce; the argmax never depends on scheduling.
    std::vector<double> scores(remaining.size());
    parallel_for(remaining.size(), options.threads, [&](std::size_t k) {
      std::vector<std::size_t> columns = path.chosen;
      columns.push_back(remaining[k]);
      const Matrix sub = xs.select_columns(columns);
      const NeighborTable table =
          build_neighbor_table(sub, candidate_seed(seed, step, remaining[k]), options.neighbors);
      scores[k] = nu_from_table(ranks, table).value;
    });
    // remaining is ascending, so the first maximum is the lowest column index.
    const auto best = static_cast<std::size_t>(
        std::max_element(scores.begin(), scores.end()) - scores.begin());
    const double best_score = scores[best];

    if (apply_stopping_rule) {
      if (step == 0 && best_score <= 0.0) {
        path.stop_reason = StopReason::nonpositive_first_score;
        path.rejected_index = remaining[best];
        path.rejected_score = best_score;
        break;
      }
      if (step > 0 && best_score <= path.scores.back()) {
        path.stop_reason = StopReason::no_improvement;
        path.rejected_index = remaining[best];
        path.rejected_score = best_score;
        break;
      }
    }
    path.chosen.push_back(remaining[best]);
    path.scores.push_back(best_score);
    remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(best));
  }
  return path;
}

}  // namespace

SelectionPath ford_select(std::span<const double> y, const Matrix& x, std::uint64_t seed,
                          const FordOptions& options) {
  return run_forward(y, x, seed, options, true);
}

SelectionPath ford_full_ordering(std::span<const double> y, const Matrix& x, std::uint64_t seed,
                                 const FordOptions& options) {
  return run_forward(y, x, seed, options, false);
}

}  // namespace ir2
