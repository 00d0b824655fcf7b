#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "ir2/coefficient.hpp"
#include "ir2/matrix.hpp"

namespace ir2 {

enum class StopReason { nonpositive_first_score, no_improvement, exhausted_all, max_steps_reached };

std::string_view to_string(StopReason reason) noexcept;

/// Forward selection path. Indices are 0-based columns of X.
struct SelectionPath {
  std::vector<std::size_t> chosen;
  std::vector<double> scores;  // nu_n after each accepted step
  StopReason stop_reason = StopReason::exhausted_all;
  std::uint64_t seed = 0;
  /// Candidate and score that triggered the stop (nonpositive_first_score, no_improvement).
  std::optional<std::size_t> rejected_index;
  std::optional<double> rejected_score;
};

struct FordOptions {
  /// Caps the number of accepted steps; 0 means p. When it binds the stop
  /// reason is max_steps_reached.
  std::size_t max_steps = 0;
  bool standardize = false;
  std::size_t threads = 1;
  NeighborOptions neighbors;
};

/// Seed used for candidate `candidate` at step `step` (both 0-based).
std::uint64_t candidate_seed(std::uint64_t seed, std::size_t step, std::size_t candidate) noexcept;

/// FORD: greedy forward ordering by nu_n with the first-non-improvement stop.
SelectionPath ford_select(std::span<const double> y, const Matrix& x, std::uint64_t seed,
                          const FordOptions& options = {});

/// Same greedy rule without stopping; orders all p columns (or max_steps of them).
SelectionPath ford_full_ordering(std::span<const double> y, const Matrix& x, std::uint64_t seed,
                                 const FordOptions& options = {});

}  // namespace ir2
