#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "ir2/matrix.hpp"

namespace ir2 {

struct NeighborOptions {
  enum class Strategy { automatic, tree, scan };
  Strategy strategy = Strategy::automatic;
  /// automatic uses the k-d tree when p <= tree_max_dim and n >= tree_min_n.
  std::size_t tree_max_dim = 8;
  std::size_t tree_min_n = 64;
};

/// First and second Euclidean nearest neighbours of every row (0-based).
struct NeighborTable {
  std::vector<std::size_t> nn1;
  std::vector<std::size_t> nn2;
  std::size_t tie_events = 0;  // rows whose nn1 or nn2 was decided by an exact distance tie
  std::uint64_t seed = 0;
  bool used_tree = false;

  std::size_t size() const noexcept { return nn1.size(); }
};

/// Tie-break priority of candidate k when querying row i. Equidistant
/// candidates are ordered by this key, which makes the choice uniform among
/// exact ties and consistent between nn1, nn2 and any exclusion query.
std::uint64_t tie_key(std::uint64_t seed, std::size_t i, std::size_t k) noexcept;

/// Exact nn1/nn2 for every row. Requires n >= 3 and finite entries.
NeighborTable build_neighbor_table(const Matrix& x, std::uint64_t seed,
                                   const NeighborOptions& options = {});

/// Nearest neighbour of i among rows other than i and j (N^{-j}(i)).
std::size_t resolve_excluded_neighbor(const NeighborTable& table, std::size_t i, std::size_t j);

/// Exhaustive O(n p) scan for the nearest row to i excluding i and `excluded`
/// (pass excluded == i to exclude only i). Same tie order as the table.
std::size_t nearest_excluding(const Matrix& x, std::uint64_t seed, std::size_t i,
                              std::size_t excluded);

}  // namespace ir2
