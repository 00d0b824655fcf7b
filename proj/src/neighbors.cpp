#include "ir2/neighbors.hpp"

#include <algorithm>
#include <array>
#include <cstdint>
#include <limits>
#include <numeric>
#include <string>

#include "ir2/error.hpp"
#include "ir2/rng.hpp"

namespace ir2 {

std::uint64_t tie_key(std::uint64_t seed, std::size_t i, std::size_t k) noexcept {
  return mix64(derive_seed(seed, i) ^ mix64(static_cast<std::uint64_t>(k) + 0x632BE59BD9B4E019ULL));
}

namespace {

struct Candidate {
  double d2 = std::numeric_limits<double>::infinity();
  std::uint64_t key = std::numeric_limits<std::uint64_t>::max();
  std::size_t index = std::numeric_limits<std::size_t>::max();
};

bool closer(const Candidate& a, const Candidate& b) noexcept {
  if (a.d2 != b.d2) return a.d2 < b.d2;
  if (a.key != b.key) return a.key < b.key;
  return a.index < b.index;
}

double squared_distance(std::span<const double> a, std::span<const double> b) noexcept {
  double s = 0.0;
  for (std::size_t c = 0; c < a.size(); ++c) {
    const double d = a[c] - b[c];
    s += d * d;
  }
  return s;
}

// Three closest candidates in (distance, tie key) order. The third one is
// only kept to detect ties at the second position.
struct Best3 {
  std::array<Candidate, 3> slots{};
  std::size_t count = 0;

  void offer(const Candidate& c) {
    if (count == 3 && !closer(c, slots[2])) return;
    std::size_t pos = std::min<std::size_t>(count, 2);
    if (count < 3) ++count;
    slots[pos] = c;
    while (pos > 0 && closer(slots[pos], slots[pos - 1])) {
      std::swap(slots[pos], slots[pos - 1]);
      --pos;
    }
  }

  double bound() const noexcept {
    return count < 3 ? std::numeric_limits<double>::infinity() : slots[2].d2;
  }
};

class KdTree {
 public:
  explicit KdTree(const Matrix& x, std::size_t leaf_size = 12)
      : x_(x), leaf_size_(leaf_size), order_(x.rows()) {
    std::iota(order_.begin(), order_.end(), 0);
    nodes_.reserve(2 * x.rows() / leaf_size + 2);
    build(0, x.rows());
  }

  void query(std::size_t i, std::uint64_t seed, Best3& best) const {
    search(0, x_.row(i), i, seed, best);
  }

 private:
  struct Node {
    std::size_t begin = 0;
    std::size_t end = 0;
    std::size_t dim = 0;
    double split = 0.0;
    std::size_t left = 0;
    std::size_t right = 0;
    bool leaf = true;
  };

  std::size_t build(std::size_t begin, std::size_t end) {
    const std::size_t id = nodes_.size();
    nodes_.push_back(Node{begin, end});
    if (end - begin <= leaf_size_) return id;

    // Split on the dimension of largest spread.
    std::size_t best_dim = 0;
    double best_spread = -1.0;
    for (std::size_t d = 0; d < x_.cols(); ++d) {
      double lo = std::numeric_limits<double>::infinity();
      double hi = -lo;
      for (std::size_t k = begin; k < end; ++k) {
        const double v = x_(order_[k], d);
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
      if (hi - lo > best_spread) {
        best_spread = hi - lo;
        best_dim = d;
      }
    }
    if (best_spread <= 0.0) return id;  // all points identical

    const std::size_t mid = begin + (end - begin) / 2;
    std::nth_element(order_.begin() + static_cast<std::ptrdiff_t>(begin),
                     order_.begin() + static_cast<std::ptrdiff_t>(mid),
                     order_.begin() + static_cast<std::ptrdiff_t>(end),
                     [&](std::size_t a, std::size_t b) { return x_(a, best_dim) < x_(b, best_dim); });
    const double split = x_(order_[mid], best_dim);
    const std::size_t left = build(begin, mid);
    const std::size_t right = build(mid, end);
    Node& node = nodes_[id];
    node.dim = best_dim;
    node.split = split;
    node.left = left;
    node.right = right;
    node.leaf = false;
    return id;
  }

  void search(std::size_t id, std::span<const double> q, std::size_t self, std::uint64_t seed,
              Best3& best) const {
    const Node& node = nodes_[id];
    if (node.leaf) {
      for (std::size_t k = node.begin; k < node.end; ++k) {
        const std::size_t j = order_[k];
        if (j == self) continue;
        const double d2 = squared_distance(q, x_.row(j));
        if (d2 > best.bound()) continue;
        best.offer(Candidate{d2, tie_key(seed, self, j), j});
      }
      return;
    }
    // Left holds values <= split, right holds values >= split.
    const double diff = q[node.dim] - node.split;
    const std::size_t near = diff < 0.0 ? node.left : node.right;
    const std::size_t far = diff < 0.0 ? node.right : node.left;
    search(near, q, self, seed, best);
    // Equality keeps exact ties reachable.
    if (diff * diff <= best.bound()) search(far, q, self, seed, best);
  }

  const Matrix& x_;
  std::size_t leaf_size_;
  std::vector<std::size_t> order_;
  std::vector<Node> nodes_;
};

bool has_tie(const Best3& best) {
  if (best.count >= 2 && best.slots[0].d2 == best.slots[1].d2) return true;
  if (best.count >= 3 && best.slots[1].d2 == best.slots[2].d2) return true;
  return false;
}

void check_input(const Matrix& x) {
  if (x.rows() < 3) {
    throw InsufficientSampleError("nearest neighbours need n >= 3, got n = " +
                                  std::to_string(x.rows()));
  }
  if (x.cols() == 0) throw InputError("nearest neighbours need at least one covariate");
  if (!x.all_finite()) throw InputError("covariates contain a non-finite value");
}

}  // namespace

NeighborTable build_neighbor_table(const Matrix& x, std::uint64_t seed,
                                   const NeighborOptions& options) {
  check_input(x);
  const std::size_t n = x.rows();
  bool use_tree = false;
  switch (options.strategy) {
    case NeighborOptions::Strategy::tree: use_tree = true; break;
    case NeighborOptions::Strategy::scan: use_tree = false; break;
    case NeighborOptions::Strategy::automatic:
      use_tree = x.cols() <= options.tree_max_dim && n >= options.tree_min_n;
      break;
  }

  NeighborTable table;
  table.seed = seed;
  table.used_tree = use_tree;
  table.nn1.resize(n);
  table.nn2.resize(n);

  auto record = [&](std::size_t i, const Best3& best) {
    table.nn1[i] = best.slots[0].index;
    table.nn2[i] = best.slots[1].index;
    if (has_tie(best)) ++table.tie_events;
  };

  if (use_tree) {
    const KdTree tree(x);
    for (std::size_t i = 0; i < n; ++i) {
      Best3 best;
      tree.query(i, seed, best);
      record(i, best);
    }
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      Best3 best;
      const auto xi = x.row(i);
      for (std::size_t k = 0; k < n; ++k) {
        if (k == i) continue;
        const double d2 = squared_distance(xi, x.row(k));
        if (d2 > best.bound()) continue;
        best.offer(Candidate{d2, tie_key(seed, i, k), k});
      }
      record(i, best);
    }
  }
  return table;
}

std::size_t resolve_excluded_neighbor(const NeighborTable& table, std::size_t i, std::size_t j) {
  if (i >= table.size() || j >= table.size()) throw InputError("neighbour index out of range");
  if (i == j) throw InputError("resolve_excluded_neighbor requires i != j");
  return table.nn1[i] != j ? table.nn1[i] : table.nn2[i];
}

std::size_t nearest_excluding(const Matrix& x, std::uint64_t seed, std::size_t i,
                              std::size_t excluded) {
  if (i >= x.rows() || excluded >= x.rows()) throw InputError("neighbour index out of range");
  Candidate best;
  const auto xi = x.row(i);
  for (std::size_t k = 0; k < x.rows(); ++k) {
    if (k == i || k == excluded) continue;
    const Candidate c{squared_distance(xi, x.row(k)), tie_key(seed, i, k), k};
    if (closer(c, best)) best = c;
  }
  if (best.index == std::numeric_limits<std::size_t>::max()) {
    throw InsufficientSampleError("no candidate neighbour left after exclusion");
  }
  return best.index;
}

}  // namespace ir2
