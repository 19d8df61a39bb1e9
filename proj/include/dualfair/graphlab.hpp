#pragma once

// Small combinatorial graphs used by the fairness analysis: the
// subset-overlap graph over all bundles of a ground set, generalized
// Kneser graphs, exact chromatic numbers with coloring witnesses at small
// orders, and the bridge between graph independence and allocations that
// fail the one-item envy test.

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "dualfair/errors.hpp"
#include "dualfair/model.hpp"

namespace dualfair {

/// Undirected graph on explicitly enumerated vertices with bitset
/// adjacency rows.  Vertices optionally carry a subset label over a
/// ground set (used by the two builders below).
class SmallGraph {
 public:
  SmallGraph() = default;
  explicit SmallGraph(int order)
      : order_(order),
        words_(static_cast<std::size_t>((order + 63) / 64)),
        rows_(static_cast<std::size_t>(order) * words_, 0) {
    if (order < 0) throw BadParameters("graph order must be nonnegative");
  }

  int order() const { return order_; }

  void add_edge(int a, int b) {
    check_vertex(a);
    check_vertex(b);
    if (a == b) throw BadParameters("self-loops are not allowed");
    set_bit(a, b);
    set_bit(b, a);
  }

  bool adjacent(int a, int b) const {
    check_vertex(a);
    check_vertex(b);
    return (row(a)[static_cast<std::size_t>(b) / 64] >>
            (static_cast<unsigned>(b) % 64)) &
           1u;
  }

  int degree(int v) const {
    check_vertex(v);
    int total = 0;
    for (std::size_t w = 0; w < words_; ++w) {
      total += std::popcount(row(v)[w]);
    }
    return total;
  }

  int edge_count() const {
    int twice = 0;
    for (int v = 0; v < order_; ++v) twice += degree(v);
    return twice / 2;
  }

  /// Neighbour mask of `v`, available when the order fits one word.
  std::uint64_t neighbor_word(int v) const {
    check_vertex(v);
    if (order_ > 64) throw CapExceeded("graph order exceeds 64");
    return words_ == 0 ? 0 : row(v)[0];
  }

  /// Subset labels (sorted element lists) for builder-made graphs;
  /// empty for hand-built graphs.
  const std::vector<std::vector<int>>& labels() const { return labels_; }
  void set_labels(std::vector<std::vector<int>> labels) {
    labels_ = std::move(labels);
  }

  /// Ground-set size recorded by the builders (0 for hand-built graphs).
  int ground_size() const { return ground_size_; }
  void set_ground_size(int n) { ground_size_ = n; }

 private:
  void check_vertex(int v) const {
    if (v < 0 || v >= order_) throw BadParameters("vertex out of range");
  }
  const std::uint64_t* row(int v) const {
    return rows_.data() + static_cast<std::size_t>(v) * words_;
  }
  void set_bit(int a, int b) {
    rows_[static_cast<std::size_t>(a) * words_ +
          static_cast<std::size_t>(b) / 64] |=
        std::uint64_t{1} << (static_cast<unsigned>(b) % 64);
  }

  int order_ = 0;
  std::size_t words_ = 0;
  std::vector<std::uint64_t> rows_;
  std::vector<std::vector<int>> labels_;
  int ground_size_ = 0;
};

namespace detail {

constexpr int kConstructionCap = 4096;

inline std::vector<int> mask_elements(std::uint64_t mask) {
  std::vector<int> out;
  for (int e = 0; mask != 0; ++e, mask >>= 1) {
    if (mask & 1) out.push_back(e);
  }
  return out;
}

}  // namespace detail

/// Graph over all 2^n subsets of {0,..,n-1}: distinct bundles A, B are
/// adjacent when they overlap in at most one element and jointly cover
/// all but at most one element.  Vertex index == subset bitmask.
inline SmallGraph gamma_graph(int n) {
  if (n < 0) throw BadParameters("ground-set size must be nonnegative");
  if (n > 12) throw CapExceeded("subset graph order exceeds 4096");
  const int order = 1 << n;
  SmallGraph g(order);
  std::vector<std::vector<int>> labels(static_cast<std::size_t>(order));
  for (int a = 0; a < order; ++a) {
    labels[static_cast<std::size_t>(a)] =
        detail::mask_elements(static_cast<std::uint64_t>(a));
    for (int b = a + 1; b < order; ++b) {
      const int overlap = std::popcount(static_cast<unsigned>(a & b));
      const int joint = std::popcount(static_cast<unsigned>(a | b));
      if (overlap <= 1 && joint >= n - 1) g.add_edge(a, b);
    }
  }
  g.set_labels(std::move(labels));
  g.set_ground_size(n);
  return g;
}

/// Generalized Kneser graph: vertices are the k-subsets of {0,..,n-1},
/// two distinct subsets adjacent when they intersect in at most s
/// elements.  Requires 0 <= s < k < n.
inline SmallGraph kneser_graph(int n, int k, int s) {
  if (!(0 <= s && s < k && k < n)) {
    throw BadParameters("need 0 <= s < k < n");
  }
  if (n > 20) throw CapExceeded("Kneser ground set capped at 20");
  std::vector<std::uint64_t> masks;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    if (std::popcount(mask) == k) masks.push_back(mask);
    if (masks.size() > static_cast<std::size_t>(detail::kConstructionCap)) {
      throw CapExceeded("Kneser graph order exceeds 4096");
    }
  }
  SmallGraph g(static_cast<int>(masks.size()));
  std::vector<std::vector<int>> labels(masks.size());
  for (std::size_t a = 0; a < masks.size(); ++a) {
    labels[a] = detail::mask_elements(masks[a]);
    for (std::size_t b = a + 1; b < masks.size(); ++b) {
      if (std::popcount(masks[a] & masks[b]) <= s) {
        g.add_edge(static_cast<int>(a), static_cast<int>(b));
      }
    }
  }
  g.set_labels(std::move(labels));
  g.set_ground_size(n);
  return g;
}

namespace detail {

/// Exact maximum clique over single-word neighbour masks (order <= 64),
/// plain branch and bound with a popcount bound.
inline void clique_expand(const std::vector<std::uint64_t>& nbr,
                          std::uint64_t candidates, std::uint64_t current,
                          std::uint64_t& best) {
  if (std::popcount(current) + std::popcount(candidates) <=
      std::popcount(best)) {
    return;
  }
  if (candidates == 0) {
    if (std::popcount(current) > std::popcount(best)) best = current;
    return;
  }
  std::uint64_t rest = candidates;
  while (rest != 0) {
    if (std::popcount(current) + std::popcount(rest) <= std::popcount(best)) {
      return;
    }
    const int v = std::countr_zero(rest);
    rest &= rest - 1;
    clique_expand(nbr, rest & nbr[static_cast<std::size_t>(v)],
                  current | (std::uint64_t{1} << v), best);
  }
}

inline std::vector<std::uint64_t> neighbor_words(const SmallGraph& g) {
  std::vector<std::uint64_t> nbr(static_cast<std::size_t>(g.order()));
  for (int v = 0; v < g.order(); ++v) {
    nbr[static_cast<std::size_t>(v)] = g.neighbor_word(v);
  }
  return nbr;
}

/// Backtracking k-colourability with forward checking.  `fixed` vertices
/// are pre-coloured (clique seeding / symmetry breaking).  Returns true
/// and fills `colors` on success.
inline bool color_with(const std::vector<std::uint64_t>& nbr, int k,
                       const std::vector<int>& seed_vertices,
                       std::vector<int>& colors) {
  const int order = static_cast<int>(nbr.size());
  if (static_cast<int>(seed_vertices.size()) > k) return false;
  const std::uint64_t full = k >= 64 ? ~std::uint64_t{0}
                                     : (std::uint64_t{1} << k) - 1;
  std::vector<std::uint64_t> allowed(static_cast<std::size_t>(order), full);
  colors.assign(static_cast<std::size_t>(order), -1);

  struct Frame {
    int vertex;
    std::uint64_t tried;
  };
  std::vector<int> trail;  // assignment order, for undo
  trail.reserve(static_cast<std::size_t>(order));

  auto assign = [&](int v, int color) -> bool {
    colors[static_cast<std::size_t>(v)] = color;
    trail.push_back(v);
    std::uint64_t others = nbr[static_cast<std::size_t>(v)];
    while (others != 0) {
      const int w = std::countr_zero(others);
      others &= others - 1;
      if (colors[static_cast<std::size_t>(w)] == color) return false;
      allowed[static_cast<std::size_t>(w)] &=
          ~(std::uint64_t{1} << color);
      if (colors[static_cast<std::size_t>(w)] < 0 &&
          allowed[static_cast<std::size_t>(w)] == 0) {
        return false;
      }
    }
    return true;
  };

  // Seeds get distinct colours up front; a conflict here means the seed
  // set was not a clique or k is too small.
  for (std::size_t i = 0; i < seed_vertices.size(); ++i) {
    if (!assign(seed_vertices[i], static_cast<int>(i))) return false;
  }

  // Depth-first search with most-constrained-vertex selection.  Undo is
  // done by recomputing `allowed` from scratch on backtrack: orders are
  // at most 64, so the rebuild is cheap and keeps the state simple.
  std::vector<Frame> stack;
  auto rebuild = [&]() {
    for (int v = 0; v < order; ++v) {
      allowed[static_cast<std::size_t>(v)] = full;
    }
    bool ok = true;
    for (int v = 0; v < order; ++v) {
      const int c = colors[static_cast<std::size_t>(v)];
      if (c < 0) continue;
      std::uint64_t others = nbr[static_cast<std::size_t>(v)];
      while (others != 0) {
        const int w = std::countr_zero(others);
        others &= others - 1;
        allowed[static_cast<std::size_t>(w)] &= ~(std::uint64_t{1} << c);
        if (colors[static_cast<std::size_t>(w)] < 0 &&
            allowed[static_cast<std::size_t>(w)] == 0) {
          ok = false;
        }
      }
    }
    return ok;
  };

  auto pick = [&]() -> int {
    int best = -1;
    int best_options = 65;
    int best_degree = -1;
    for (int v = 0; v < order; ++v) {
      if (colors[static_cast<std::size_t>(v)] >= 0) continue;
      const int options =
          std::popcount(allowed[static_cast<std::size_t>(v)]);
      const int degree = std::popcount(nbr[static_cast<std::size_t>(v)]);
      if (options < best_options ||
          (options == best_options && degree > best_degree)) {
        best = v;
        best_options = options;
        best_degree = degree;
      }
    }
    return best;
  };

  const std::size_t base = trail.size();
  bool advance = true;
  while (true) {
    if (advance) {
      const int v = pick();
      if (v < 0) return true;  // everything coloured
      stack.push_back({v, 0});
    }
    Frame& frame = stack.back();
    const std::uint64_t options =
        allowed[static_cast<std::size_t>(frame.vertex)] & ~frame.tried;
    if (options == 0) {
      stack.pop_back();
      if (stack.empty()) return false;
      // Undo every assignment made after the parent frame's vertex.
      while (trail.size() > base &&
             trail.back() != stack.back().vertex) {
        colors[static_cast<std::size_t>(trail.back())] = -1;
        trail.pop_back();
      }
      if (trail.size() > base) {
        colors[static_cast<std::size_t>(trail.back())] = -1;
        trail.pop_back();
      }
      rebuild();
      advance = false;
      continue;
    }
    const int color = std::countr_zero(options);
    frame.tried |= std::uint64_t{1} << color;
    if (assign(frame.vertex, color)) {
      advance = true;
    } else {
      // Roll back the failed assignment only.
      while (trail.size() > base && trail.back() != frame.vertex) {
        colors[static_cast<std::size_t>(trail.back())] = -1;
        trail.pop_back();
      }
      if (trail.size() > base) {
        colors[static_cast<std::size_t>(trail.back())] = -1;
        trail.pop_back();
      }
      rebuild();
      advance = false;
    }
  }
}

/// Saturation-guided greedy colouring; returns the number of colours.
inline int greedy_coloring(const std::vector<std::uint64_t>& nbr,
                           std::vector<int>& colors) {
  const int order = static_cast<int>(nbr.size());
  colors.assign(static_cast<std::size_t>(order), -1);
  int used = 0;
  for (int step = 0; step < order; ++step) {
    int best = -1;
    int best_sat = -1;
    int best_degree = -1;
    for (int v = 0; v < order; ++v) {
      if (colors[static_cast<std::size_t>(v)] >= 0) continue;
      std::uint64_t seen = 0;
      std::uint64_t others = nbr[static_cast<std::size_t>(v)];
      while (others != 0) {
        const int w = std::countr_zero(others);
        others &= others - 1;
        if (colors[static_cast<std::size_t>(w)] >= 0) {
          seen |= std::uint64_t{1}
                  << colors[static_cast<std::size_t>(w)];
        }
      }
      const int sat = std::popcount(seen);
      const int degree = std::popcount(nbr[static_cast<std::size_t>(v)]);
      if (sat > best_sat || (sat == best_sat && degree > best_degree)) {
        best = v;
        best_sat = sat;
        best_degree = degree;
      }
    }
    std::uint64_t seen = 0;
    std::uint64_t others = nbr[static_cast<std::size_t>(best)];
    while (others != 0) {
      const int w = std::countr_zero(others);
      others &= others - 1;
      if (colors[static_cast<std::size_t>(w)] >= 0) {
        seen |= std::uint64_t{1} << colors[static_cast<std::size_t>(w)];
      }
    }
    int color = 0;
    while ((seen >> color) & 1) ++color;
    colors[static_cast<std::size_t>(best)] = color;
    used = std::max(used, color + 1);
  }
  return used;
}

}  // namespace detail

/// Exact maximum clique (vertex list, ascending).  Order must be <= 64.
inline std::vector<int> maximum_clique(const SmallGraph& g) {
  if (g.order() > 64) throw CapExceeded("clique search capped at 64");
  if (g.order() == 0) return {};
  const std::vector<std::uint64_t> nbr = detail::neighbor_words(g);
  std::uint64_t best = 0;
  const std::uint64_t all =
      g.order() >= 64 ? ~std::uint64_t{0}
                      : (std::uint64_t{1} << g.order()) - 1;
  detail::clique_expand(nbr, all, 0, best);
  return detail::mask_elements(best);
}

/// Exact chromatic number with a verified colouring witness.
struct ColoringResult {
  int colors = 0;
  std::vector<int> assignment;  // vertex -> colour in [0, colors)
};

inline ColoringResult chromatic_number(const SmallGraph& g, int cap = 64) {
  if (g.order() > cap || g.order() > 64) {
    throw CapExceeded("colouring search capped at " +
                      std::to_string(std::min(cap, 64)) + " vertices");
  }
  ColoringResult result;
  if (g.order() == 0) return result;

  const std::vector<std::uint64_t> nbr = detail::neighbor_words(g);
  std::vector<int> greedy;
  const int upper = detail::greedy_coloring(nbr, greedy);

  const std::vector<int> clique = maximum_clique(g);
  int lower = static_cast<int>(clique.size());
  // Covering bound: every colour class is an independent set, so the
  // chromatic number is at least order / (largest independent set).
  {
    SmallGraph co(g.order());
    for (int a = 0; a < g.order(); ++a) {
      for (int b = a + 1; b < g.order(); ++b) {
        if (!g.adjacent(a, b)) co.add_edge(a, b);
      }
    }
    const int alpha =
        std::max<int>(1, static_cast<int>(maximum_clique(co).size()));
    lower = std::max(lower, (g.order() + alpha - 1) / alpha);
  }

  result.colors = upper;
  result.assignment = greedy;
  for (int k = lower; k < upper; ++k) {
    std::vector<int> attempt;
    if (detail::color_with(nbr, k, clique, attempt)) {
      result.colors = k;
      result.assignment = std::move(attempt);
      break;
    }
  }

  // Postcondition: the witness is a proper colouring within range.
  for (int v = 0; v < g.order(); ++v) {
    const int c = result.assignment[static_cast<std::size_t>(v)];
    if (c < 0 || c >= result.colors) {
      throw std::logic_error("colouring witness out of range");
    }
    for (int w = v + 1; w < g.order(); ++w) {
      if (g.adjacent(v, w) &&
          c == result.assignment[static_cast<std::size_t>(w)]) {
        throw std::logic_error("colouring witness not proper");
      }
    }
  }
  return result;
}

/// Checks the chromatic lower bound n - 2k + 2s + 2 against the exact
/// chromatic number of the generalized Kneser graph.  The bound is only
/// meaningful when disjoint-enough vertex pairs exist (n >= 2k - s);
/// below that the graph is edgeless and the inequality can fail.
inline bool check_kneser_lower_bound(int n, int k, int s, int cap = 64) {
  const SmallGraph g = kneser_graph(n, k, s);
  const ColoringResult chi = chromatic_number(g, cap);
  return chi.colors >= n - 2 * k + 2 * s + 2;
}

/// Result of the independence analysis that ties failure of the
/// one-item envy test to the subset-overlap graph.
struct GammaCoverReport {
  // Failure vertices (bundle masks for agent 1) per valuation row, in
  // the order: agent 1, agent 2, allocator-for-1, allocator-for-2.
  std::array<std::vector<int>, 4> failing_vertices;
  std::array<bool, 4> independent = {false, false, false, false};
  bool covered = true;           // do the four sets cover every bundle?
  std::vector<int> fair_vertices;  // bundles fair for all four rows

  bool ok() const {
    return independent[0] && independent[1] && independent[2] &&
           independent[3] && !covered;
  }
};

/// For a two-agent instance and the subset-overlap graph on its items:
/// collects, per valuation row, the bundles A (given to agent 1, with the
/// rest to agent 2) that fail the one-item envy test for that row,
/// verifies each failure set is independent in the graph, and reports the
/// bundles that pass every row.  Independence of all four sets plus a
/// chromatic number of at least 5 forces an uncovered — i.e. fair —
/// bundle to exist.
inline GammaCoverReport non_ef1_independent_set(const Instance& instance,
                                                const SmallGraph& gamma) {
  if (instance.agents != 2) {
    throw DimensionMismatch("independence analysis needs two agents");
  }
  if (gamma.ground_size() != instance.items ||
      gamma.order() != (1 << instance.items)) {
    throw DimensionMismatch(
        "graph ground set must match the instance's items");
  }

  const int m = instance.items;
  // Rows evaluated as (weights, which side the row's owner holds).
  const std::array<const std::vector<Rational>*, 4> rows = {
      &instance.agent_valuations[0], &instance.agent_valuations[1],
      &instance.allocator_valuations[0], &instance.allocator_valuations[1]};
  const std::array<bool, 4> holds_first = {true, false, true, false};

  auto side_value = [&](const std::vector<Rational>& w, int mask) {
    Rational total = 0;
    for (int j = 0; j < m; ++j) {
      if ((mask >> j) & 1) total += w[static_cast<std::size_t>(j)];
    }
    return total;
  };
  auto passes = [&](const std::vector<Rational>& w, int own_mask) {
    const int other_mask = ((1 << m) - 1) ^ own_mask;
    Rational biggest = 0;
    for (int j = 0; j < m; ++j) {
      if (((other_mask >> j) & 1) && w[static_cast<std::size_t>(j)] > biggest) {
        biggest = w[static_cast<std::size_t>(j)];
      }
    }
    return side_value(w, own_mask) >= side_value(w, other_mask) - biggest;
  };

  GammaCoverReport report;
  std::vector<std::array<bool, 4>> fails(
      static_cast<std::size_t>(gamma.order()));
  for (int mask = 0; mask < gamma.order(); ++mask) {
    bool all_ok = true;
    for (int r = 0; r < 4; ++r) {
      const int own =
          holds_first[static_cast<std::size_t>(r)]
              ? mask
              : ((1 << m) - 1) ^ mask;
      const bool ok = passes(*rows[static_cast<std::size_t>(r)], own);
      fails[static_cast<std::size_t>(mask)][static_cast<std::size_t>(r)] = !ok;
      if (!ok) {
        report.failing_vertices[static_cast<std::size_t>(r)].push_back(mask);
        all_ok = false;
      }
    }
    if (all_ok) report.fair_vertices.push_back(mask);
  }

  for (int r = 0; r < 4; ++r) {
    const auto& set = report.failing_vertices[static_cast<std::size_t>(r)];
    bool independent = true;
    for (std::size_t a = 0; a < set.size() && independent; ++a) {
      for (std::size_t b = a + 1; b < set.size(); ++b) {
        if (gamma.adjacent(set[a], set[b])) {
          independent = false;
          break;
        }
      }
    }
    report.independent[static_cast<std::size_t>(r)] = independent;
  }
  report.covered = report.fair_vertices.empty();
  return report;
}

/// DIMACS export ("p edge" format, 1-indexed vertices) for cross-checks
/// with external colouring tools.
inline std::string to_dimacs(const SmallGraph& g,
                             const std::string& comment = {}) {
  std::ostringstream out;
  if (!comment.empty()) out << "c " << comment << "\n";
  out << "p edge " << g.order() << " " << g.edge_count() << "\n";
  for (int a = 0; a < g.order(); ++a) {
    for (int b = a + 1; b < g.order(); ++b) {
      if (g.adjacent(a, b)) out << "e " << a + 1 << " " << b + 1 << "\n";
    }
  }
  return out.str();
}

}  // namespace dualfair
