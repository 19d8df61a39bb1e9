#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "dualfair/errors.hpp"
#include "dualfair/fairness.hpp"
#include "dualfair/linprog.hpp"
#include "dualfair/model.hpp"

namespace dualfair {

/// Plain round-robin over a fixed cyclic agent order: each agent in turn
/// takes its favorite remaining item under its own valuation row (ties to
/// the lowest item index) until no items remain.
inline Allocation round_robin_allocation(const Instance& instance,
                                         const std::vector<int>& order) {
  Allocation allocation;
  allocation.bundles.assign(static_cast<std::size_t>(instance.agents), {});
  std::vector<bool> taken(static_cast<std::size_t>(instance.items), false);
  int remaining = instance.items;
  while (remaining > 0) {
    for (int agent : order) {
      if (remaining == 0) break;
      const auto& row =
          instance.agent_valuations[static_cast<std::size_t>(agent)];
      int best = -1;
      for (int j = 0; j < instance.items; ++j) {
        if (taken[static_cast<std::size_t>(j)]) continue;
        if (best < 0 || row[static_cast<std::size_t>(j)] >
                            row[static_cast<std::size_t>(best)]) {
          best = j;
        }
      }
      taken[static_cast<std::size_t>(best)] = true;
      allocation.bundles[static_cast<std::size_t>(agent)].push_back(best);
      --remaining;
    }
  }
  for (auto& bundle : allocation.bundles) {
    std::sort(bundle.begin(), bundle.end());
  }
  return allocation;
}

/// Directed envy edges under one valuation matrix: i -> j when agent i
/// strictly prefers j's bundle to its own.
inline std::vector<std::vector<int>> envy_edges(const RationalMatrix& matrix,
                                                const Allocation& allocation) {
  const int n = static_cast<int>(allocation.bundles.size());
  std::vector<Rational> value_of(static_cast<std::size_t>(n) *
                                 static_cast<std::size_t>(n));
  std::vector<std::vector<int>> edges(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const auto& row = matrix[static_cast<std::size_t>(i)];
    const Rational own = bundle_value(row, allocation.bundles[i]);
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      if (bundle_value(row, allocation.bundles[j]) > own) {
        edges[static_cast<std::size_t>(i)].push_back(j);
      }
    }
  }
  return edges;
}

namespace detail {

/// Finds one directed cycle (as a vertex sequence) or nothing.
/// Deterministic: depth-first from the lowest vertex, neighbors ascending.
inline std::optional<std::vector<int>> find_cycle(
    const std::vector<std::vector<int>>& edges) {
  const int n = static_cast<int>(edges.size());
  std::vector<int> state(static_cast<std::size_t>(n), 0);  // 0 new, 1 open, 2 done
  std::vector<int> parent(static_cast<std::size_t>(n), -1);
  std::optional<std::vector<int>> cycle;
  std::function<bool(int)> dfs = [&](int v) {
    state[static_cast<std::size_t>(v)] = 1;
    for (int w : edges[static_cast<std::size_t>(v)]) {
      if (state[static_cast<std::size_t>(w)] == 1) {
        std::vector<int> found{w};
        for (int x = v; x != w; x = parent[static_cast<std::size_t>(x)]) {
          found.push_back(x);
        }
        std::reverse(found.begin() + 1, found.end());
        cycle = std::move(found);
        return true;
      }
      if (state[static_cast<std::size_t>(w)] == 0) {
        parent[static_cast<std::size_t>(w)] = v;
        if (dfs(w)) return true;
      }
    }
    state[static_cast<std::size_t>(v)] = 2;
    return false;
  };
  for (int v = 0; v < n; ++v) {
    if (state[static_cast<std::size_t>(v)] == 0 && dfs(v)) return cycle;
  }
  return std::nullopt;
}

}  // namespace detail

/// Rotates bundles along envy cycles until the envy graph is acyclic:
/// every agent on a detected cycle takes the bundle of the agent it envies,
/// which strictly improves each of them.  Returns the rotated allocation;
/// rotation_count (if given) receives the number of cycles resolved.
inline Allocation eliminate_envy_cycles(const RationalMatrix& matrix,
                                        Allocation allocation,
                                        int* rotation_count = nullptr) {
  int rotations = 0;
  for (;;) {
    const auto edges = envy_edges(matrix, allocation);
    const auto cycle = detail::find_cycle(edges);
    if (!cycle) break;
    // cycle = u_0 -> u_1 -> ... -> u_{k-1} -> u_0; each u_t takes the
    // bundle of u_{t+1 mod k}.
    const std::vector<int>& c = *cycle;
    std::vector<std::vector<int>> grabbed;
    grabbed.reserve(c.size());
    for (std::size_t t = 0; t < c.size(); ++t) {
      grabbed.push_back(
          allocation.bundles[static_cast<std::size_t>(c[(t + 1) % c.size()])]);
    }
    for (std::size_t t = 0; t < c.size(); ++t) {
      allocation.bundles[static_cast<std::size_t>(c[t])] =
          std::move(grabbed[t]);
    }
    ++rotations;
  }
  if (rotation_count) *rotation_count = rotations;
  return allocation;
}

namespace detail {

/// Topological order of an acyclic envy graph, sources first, lowest agent
/// index first among the available sources.
inline std::vector<int> topological_agents(
    const std::vector<std::vector<int>>& edges) {
  const int n = static_cast<int>(edges.size());
  std::vector<int> indegree(static_cast<std::size_t>(n), 0);
  for (const auto& out : edges) {
    for (int w : out) ++indegree[static_cast<std::size_t>(w)];
  }
  std::vector<bool> placed(static_cast<std::size_t>(n), false);
  std::vector<int> order;
  order.reserve(static_cast<std::size_t>(n));
  for (int step = 0; step < n; ++step) {
    int pick = -1;
    for (int v = 0; v < n; ++v) {
      if (!placed[static_cast<std::size_t>(v)] &&
          indegree[static_cast<std::size_t>(v)] == 0) {
        pick = v;
        break;
      }
    }
    if (pick < 0) {
      throw std::logic_error("envy graph expected to be acyclic");
    }
    placed[static_cast<std::size_t>(pick)] = true;
    order.push_back(pick);
    for (int w : edges[static_cast<std::size_t>(pick)]) {
      --indegree[static_cast<std::size_t>(w)];
    }
  }
  return order;
}

/// Pads each row of a matrix with zero-valued dummy items up to `total`.
inline RationalMatrix pad_matrix(const RationalMatrix& matrix, int total) {
  RationalMatrix out = matrix;
  for (auto& row : out) {
    row.resize(static_cast<std::size_t>(total), Rational(0));
  }
  return out;
}

/// Drops item indices >= real_items (the dummies) from every bundle.
inline Allocation strip_dummies(const Allocation& allocation, int real_items) {
  Allocation out;
  out.bundles.reserve(allocation.bundles.size());
  for (const auto& bundle : allocation.bundles) {
    std::vector<int> kept;
    for (int j : bundle) {
      if (j < real_items) kept.push_back(j);
    }
    std::sort(kept.begin(), kept.end());
    out.bundles.push_back(std::move(kept));
  }
  return out;
}

/// One-sided envy check for a single valuation row: the row's owner, holding
/// `own`, does not envy `other` once the c most valuable items of `other`
/// (under this row) are removed.
inline bool row_ef_c(const std::vector<Rational>& row,
                     const std::vector<int>& own,
                     const std::vector<int>& other, int c) {
  const Rational mine = bundle_value(row, own);
  const Rational theirs = bundle_value(row, other);
  return mine >= theirs - top_values(row, c, other);
}

}  // namespace detail

/// Solver for instances whose allocator values every agent's holdings the
/// same way (identical allocator rows).  Items are handed out in rounds of
/// n, in descending allocator value; inside a round agents pick their
/// favorite remaining item in topological order of the current envy graph,
/// and envy cycles are rotated away after every round.  The result is
/// envy-free up to one good under both matrices.
///
/// per_round, when given, observes the partial allocation after each
/// round's cycle elimination (dummy padding already stripped).
inline Allocation solve_identical_allocator_ef1(
    const Instance& instance,
    const std::function<void(const Allocation&)>& per_round = {}) {
  if (!matrix_in_class(instance.allocator_valuations,
                       ValuationClass::IdenticalAllocator)) {
    throw UnsupportedInstance(
        "identical-allocator solver needs identical allocator rows");
  }
  const int n = instance.agents;
  const int m = instance.items;
  const int total = ((m + n - 1) / n) * n;  // pad so every round has n items
  const RationalMatrix v = detail::pad_matrix(instance.agent_valuations, total);
  const std::vector<Rational> u = [&] {
    std::vector<Rational> row = instance.allocator_valuations.empty()
                                    ? std::vector<Rational>{}
                                    : instance.allocator_valuations[0];
    row.resize(static_cast<std::size_t>(total), Rational(0));
    return row;
  }();

  std::vector<int> order(static_cast<std::size_t>(total));
  for (int j = 0; j < total; ++j) order[static_cast<std::size_t>(j)] = j;
  std::sort(order.begin(), order.end(), [&u](int a, int b) {
    if (u[static_cast<std::size_t>(a)] != u[static_cast<std::size_t>(b)]) {
      return u[static_cast<std::size_t>(a)] > u[static_cast<std::size_t>(b)];
    }
    return a < b;
  });

  Allocation allocation;
  allocation.bundles.assign(static_cast<std::size_t>(n), {});
  for (int round = 0; round * n < total; ++round) {
    const auto topo =
        detail::topological_agents(envy_edges(v, allocation));
    std::vector<int> group(order.begin() + round * n,
                           order.begin() + (round + 1) * n);
    std::vector<bool> used(group.size(), false);
    for (int agent : topo) {
      const auto& row = v[static_cast<std::size_t>(agent)];
      int best = -1;
      for (std::size_t k = 0; k < group.size(); ++k) {
        if (used[k]) continue;
        if (best < 0 || row[static_cast<std::size_t>(group[k])] >
                            row[static_cast<std::size_t>(group[best])]) {
          best = static_cast<int>(k);
        }
      }
      used[static_cast<std::size_t>(best)] = true;
      allocation.bundles[static_cast<std::size_t>(agent)].push_back(
          group[static_cast<std::size_t>(best)]);
    }
    allocation = eliminate_envy_cycles(v, std::move(allocation));
    if (per_round) per_round(detail::strip_dummies(allocation, m));
  }
  return detail::strip_dummies(allocation, m);
}

/// The k+1 sign sequences walked by the two-agent solver, for k groups.
/// Sequence 0 alternates starting with '+'; sequence i+1 flips every label
/// of sequence i except the one at position i.  A '+' at position g means
/// the first agent takes the group's higher-allocator-value item.
inline std::vector<std::string> label_sequences(int k) {
  std::vector<std::string> out;
  std::string current;
  for (int g = 0; g < k; ++g) current.push_back(g % 2 == 0 ? '+' : '-');
  out.push_back(current);
  for (int i = 0; i < k; ++i) {
    for (int g = 0; g < k; ++g) {
      if (g != i) current[static_cast<std::size_t>(g)] =
          current[static_cast<std::size_t>(g)] == '+' ? '-' : '+';
    }
    out.push_back(current);
  }
  return out;
}

/// The full candidate walk of the two-agent solver, exposed for inspection:
/// item pairs, label sequences, and the induced allocations (dummies
/// already stripped).
struct TwoAgentPlan {
  int padded_items = 0;
  std::vector<std::array<int, 2>> groups;  // (a, b) per group, padded indices
  std::vector<std::string> labels;
  std::vector<Allocation> candidates;
};

/// Builds the candidate allocations for a two-agent instance.  Items are
/// padded with zero-value dummies to a multiple of four, sorted by the
/// first agent's value, paired consecutively, and each pair is oriented so
/// that `a` carries at least as much first-row allocator value as `b`;
/// pairs are then ordered by descending allocator-value gap.  Every
/// candidate is envy-free up to one good for the first agent under both
/// matrices by construction.
inline TwoAgentPlan two_agent_doubly_ef1_plan(const Instance& instance) {
  if (instance.agents != 2) {
    throw UnsupportedInstance("two-agent solver needs exactly two agents");
  }
  TwoAgentPlan plan;
  const int m = instance.items;
  const int total = m % 4 == 0 ? m : m + (4 - m % 4);
  plan.padded_items = total;
  const RationalMatrix v = detail::pad_matrix(instance.agent_valuations, total);
  const RationalMatrix u =
      detail::pad_matrix(instance.allocator_valuations, total);
  const auto& v1 = v[0];
  const auto& u1 = u[0];

  std::vector<int> order(static_cast<std::size_t>(total));
  for (int j = 0; j < total; ++j) order[static_cast<std::size_t>(j)] = j;
  std::sort(order.begin(), order.end(), [&v1](int a, int b) {
    if (v1[static_cast<std::size_t>(a)] != v1[static_cast<std::size_t>(b)]) {
      return v1[static_cast<std::size_t>(a)] > v1[static_cast<std::size_t>(b)];
    }
    return a < b;
  });
  const int k = total / 2;
  for (int g = 0; g < k; ++g) {
    int a = order[static_cast<std::size_t>(2 * g)];
    int b = order[static_cast<std::size_t>(2 * g + 1)];
    if (u1[static_cast<std::size_t>(b)] > u1[static_cast<std::size_t>(a)]) {
      std::swap(a, b);
    }
    plan.groups.push_back({a, b});
  }
  std::stable_sort(plan.groups.begin(), plan.groups.end(),
                   [&u1](const std::array<int, 2>& x,
                         const std::array<int, 2>& y) {
                     const Rational gx = u1[static_cast<std::size_t>(x[0])] -
                                         u1[static_cast<std::size_t>(x[1])];
                     const Rational gy = u1[static_cast<std::size_t>(y[0])] -
                                         u1[static_cast<std::size_t>(y[1])];
                     return gx > gy;
                   });
  plan.labels = label_sequences(k);
  for (const std::string& labels : plan.labels) {
    Allocation padded;
    padded.bundles.assign(2, {});
    for (int g = 0; g < k; ++g) {
      const bool first_takes_a = labels[static_cast<std::size_t>(g)] == '+';
      padded.bundles[0].push_back(plan.groups[static_cast<std::size_t>(g)]
                                             [first_takes_a ? 0 : 1]);
      padded.bundles[1].push_back(plan.groups[static_cast<std::size_t>(g)]
                                             [first_takes_a ? 1 : 0]);
    }
    plan.candidates.push_back(detail::strip_dummies(padded, m));
  }
  return plan;
}

/// Two-agent solver: walks the candidate sequence and returns the first
/// allocation that is also envy-free up to one good for the second agent
/// under both matrices.  At least one candidate always qualifies.
inline Allocation solve_two_agent_doubly_ef1(const Instance& instance) {
  const TwoAgentPlan plan = two_agent_doubly_ef1_plan(instance);
  const auto& v2 = instance.agent_valuations[1];
  const auto& u2 = instance.allocator_valuations[1];
  for (const Allocation& candidate : plan.candidates) {
    if (detail::row_ef_c(v2, candidate.bundles[1], candidate.bundles[0], 1) &&
        detail::row_ef_c(u2, candidate.bundles[1], candidate.bundles[0], 1)) {
      return candidate;
    }
  }
  throw std::logic_error(
      "two-agent walk exhausted without a doubly fair candidate");
}

/// Split of a (sub-)instance's items between two agent groups, produced by
/// rounding a vertex of the balancing linear program.
struct BalancedSplit {
  std::vector<int> first_items;    // X1, for agent group N1
  std::vector<int> second_items;   // X2, for agent group N2
  int fractional_count = 0;        // fractional variables at the LP vertex
  Rational objective = 0;          // LP optimum (>= 0 by construction)
};

/// Tests the group-level share condition: X1 must reach an |N1|/n share of
/// the item pool for every row of every agent in N1 up to k1 removals from
/// X2, and symmetrically for N2 up to k2 removals from X1.
inline bool is_two_balanced_prop(const Instance& instance,
                                 const std::vector<int>& group1,
                                 const std::vector<int>& group2,
                                 const std::vector<int>& first_items,
                                 const std::vector<int>& second_items, int k1,
                                 int k2) {
  const int n = static_cast<int>(group1.size() + group2.size());
  std::vector<int> pool = first_items;
  pool.insert(pool.end(), second_items.begin(), second_items.end());
  const auto holds = [&](const std::vector<Rational>& row,
                         const std::vector<int>& own,
                         const std::vector<int>& other, int group_size,
                         int budget) {
    const Rational share =
        Rational(group_size) * bundle_value(row, pool) / n;
    return bundle_value(row, own) >= share - top_values(row, budget, other);
  };
  for (int i : group1) {
    const auto& vrow = instance.agent_valuations[static_cast<std::size_t>(i)];
    const auto& urow =
        instance.allocator_valuations[static_cast<std::size_t>(i)];
    if (!holds(vrow, first_items, second_items,
               static_cast<int>(group1.size()), k1) ||
        !holds(urow, first_items, second_items,
               static_cast<int>(group1.size()), k1)) {
      return false;
    }
  }
  for (int i : group2) {
    const auto& vrow = instance.agent_valuations[static_cast<std::size_t>(i)];
    const auto& urow =
        instance.allocator_valuations[static_cast<std::size_t>(i)];
    if (!holds(vrow, second_items, first_items,
               static_cast<int>(group2.size()), k2) ||
        !holds(urow, second_items, first_items,
               static_cast<int>(group2.size()), k2)) {
      return false;
    }
  }
  return true;
}

/// Splits `items` between agent groups N1 (the smaller half) and N2 by
/// solving a linear program over per-item fractions x_j in [0,1]:
/// maximize N1's leader surplus subject to every N1 agent reaching an
/// |N1|/n share and every N2 agent's complement keeping an |N2|/n share,
/// under both matrices.  The all-uniform point is feasible with objective
/// zero, so the program is never infeasible and the optimum is >= 0.  At a
/// vertex at most 2n-1 variables are fractional; items with x_j = 1 go to
/// X1, and the first half (rounded up) of the fractional items, in input
/// order, join them.  The result satisfies the group share condition with
/// removal budgets (n-1, n), which is re-verified before returning.
inline BalancedSplit balanced_split(const Instance& instance,
                                    const std::vector<int>& group1,
                                    const std::vector<int>& group2,
                                    const std::vector<int>& items) {
  const int n = static_cast<int>(group1.size() + group2.size());
  if (group1.empty() || group2.empty() ||
      static_cast<int>(group1.size()) != n / 2) {
    throw std::invalid_argument(
        "balanced_split needs nonempty groups with |N1| = floor(n/2)");
  }
  const int m = static_cast<int>(items.size());
  if (m == 0) return {};  // nothing to divide; empty halves are balanced
  const Rational share_fraction =
      Rational(static_cast<long long>(group1.size())) / n;

  const auto pool_value = [&](const std::vector<Rational>& row) {
    Rational total = 0;
    for (int j : items) total += row[static_cast<std::size_t>(j)];
    return total;
  };
  const auto row_coeffs = [&](const std::vector<Rational>& row) {
    std::vector<Rational> coeffs;
    coeffs.reserve(items.size());
    for (int j : items) coeffs.push_back(row[static_cast<std::size_t>(j)]);
    return coeffs;
  };

  LinearProgram lp = LinearProgram::with_variables(m);
  for (int j = 0; j < m; ++j) lp.upper[static_cast<std::size_t>(j)] = Rational(1);
  const auto& leader_row =
      instance.agent_valuations[static_cast<std::size_t>(group1[0])];
  lp.objective = row_coeffs(leader_row);
  lp.objective_offset = -share_fraction * pool_value(leader_row);
  for (std::size_t gi = 0; gi < group1.size(); ++gi) {
    const int i = group1[gi];
    const auto& urow =
        instance.allocator_valuations[static_cast<std::size_t>(i)];
    lp.rows.push_back({row_coeffs(urow), Relation::GreaterEq,
                       Rational(share_fraction * pool_value(urow))});
    if (gi > 0) {
      const auto& vrow =
          instance.agent_valuations[static_cast<std::size_t>(i)];
      lp.rows.push_back({row_coeffs(vrow), Relation::GreaterEq,
                         Rational(share_fraction * pool_value(vrow))});
    }
  }
  for (int i : group2) {
    const auto& vrow = instance.agent_valuations[static_cast<std::size_t>(i)];
    const auto& urow =
        instance.allocator_valuations[static_cast<std::size_t>(i)];
    lp.rows.push_back({row_coeffs(urow), Relation::LessEq,
                       Rational(share_fraction * pool_value(urow))});
    lp.rows.push_back({row_coeffs(vrow), Relation::LessEq,
                       Rational(share_fraction * pool_value(vrow))});
  }

  const LpResult result = solve_vertex_optimal(lp);
  if (result.status != LpStatus::Optimal) {
    throw std::logic_error(
        "balancing program must be solvable (uniform point is feasible)");
  }
  const VertexSolution& vertex = *result.solution;
  if (vertex.objective_value < 0) {
    throw std::logic_error("balancing program optimum fell below zero");
  }

  BalancedSplit split;
  split.objective = vertex.objective_value;
  std::vector<int> fractional_positions;
  for (int j = 0; j < m; ++j) {
    const Rational& x = vertex.x[static_cast<std::size_t>(j)];
    if (x == 1) {
      split.first_items.push_back(items[static_cast<std::size_t>(j)]);
    } else if (x != 0) {
      fractional_positions.push_back(j);
    }
  }
  split.fractional_count = static_cast<int>(fractional_positions.size());
  if (split.fractional_count > 2 * n - 1) {
    throw std::logic_error(
        "vertex of the balancing program has too many fractional items");
  }
  const std::size_t take = (fractional_positions.size() + 1) / 2;
  for (std::size_t t = 0; t < fractional_positions.size(); ++t) {
    const int item =
        items[static_cast<std::size_t>(fractional_positions[t])];
    if (t < take) {
      split.first_items.push_back(item);
    } else {
      split.second_items.push_back(item);
    }
  }
  for (int j = 0; j < m; ++j) {
    if (vertex.x[static_cast<std::size_t>(j)] == 0) {
      split.second_items.push_back(items[static_cast<std::size_t>(j)]);
    }
  }
  std::sort(split.first_items.begin(), split.first_items.end());
  std::sort(split.second_items.begin(), split.second_items.end());
  if (!is_two_balanced_prop(instance, group1, group2, split.first_items,
                            split.second_items, n - 1, n)) {
    throw std::logic_error(
        "balanced split failed its group share postcondition");
  }
  return split;
}

/// Removal budget guaranteed by the halving solver: 2 * ceil(log2 n).
inline int prop_log_bound(int agents) {
  int bound = 0;
  int reach = 1;
  while (reach < agents) {
    reach *= 2;
    ++bound;
  }
  return 2 * bound;
}

/// Solver for arbitrary n: recursively halves the agent list (first
/// floor(n/2) indices against the rest), splitting the item pool with
/// balanced_split at every level.  The final allocation is proportional up
/// to 2*ceil(log2 n) goods under both matrices.
inline Allocation solve_doubly_prop_log(const Instance& instance) {
  Allocation allocation;
  allocation.bundles.assign(static_cast<std::size_t>(instance.agents), {});
  std::function<void(const std::vector<int>&, const std::vector<int>&)> go =
      [&](const std::vector<int>& agents, const std::vector<int>& items) {
        if (agents.size() == 1) {
          auto& bundle =
              allocation.bundles[static_cast<std::size_t>(agents[0])];
          bundle = items;
          std::sort(bundle.begin(), bundle.end());
          return;
        }
        const std::size_t half = agents.size() / 2;
        const std::vector<int> group1(agents.begin(), agents.begin() + half);
        const std::vector<int> group2(agents.begin() + half, agents.end());
        const BalancedSplit split =
            balanced_split(instance, group1, group2, items);
        go(group1, split.first_items);
        go(group2, split.second_items);
      };
  std::vector<int> all_agents(static_cast<std::size_t>(instance.agents));
  for (int i = 0; i < instance.agents; ++i) {
    all_agents[static_cast<std::size_t>(i)] = i;
  }
  std::vector<int> all_items(static_cast<std::size_t>(instance.items));
  for (int j = 0; j < instance.items; ++j) {
    all_items[static_cast<std::size_t>(j)] = j;
  }
  go(all_agents, all_items);
  return allocation;
}

/// One assignment step of the bi-valued solver, for replaying its
/// decisions in tests.
struct BivaluedStep {
  int agent = 0;
  int item = 0;
  int chosen_class = 0;  // 0..3, index into BivaluedPartition::classes
};

/// Solver for instances where every row of both matrices takes at most two
/// values.  Agents pick in round-robin order; each picks from its own
/// four-way item classification: first anything valuable to both rows,
/// then whichever of the two singly-valuable classes is currently more
/// underrepresented in its bundle (balance measured against a 1/n share of
/// what has been allocated from that class), then the leftovers.  The
/// result is proportional up to two goods under both matrices.
inline Allocation solve_bivalued_prop2(const Instance& instance,
                                       std::vector<BivaluedStep>* trace =
                                           nullptr) {
  const int n = instance.agents;
  const int m = instance.items;
  std::vector<BivaluedPartition> parts;
  parts.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    parts.push_back(bivalued_partition(instance, i));  // validates the rows
  }

  Allocation allocation;
  allocation.bundles.assign(static_cast<std::size_t>(n), {});
  std::vector<bool> allocated(static_cast<std::size_t>(m), false);
  // own_count[i][k]: items agent i holds from its class k;
  // pool_count[i][k]: allocated items overall from agent i's class k.
  std::vector<std::array<int, 4>> own_count(
      static_cast<std::size_t>(n), {0, 0, 0, 0});
  std::vector<std::array<int, 4>> pool_count(
      static_cast<std::size_t>(n), {0, 0, 0, 0});
  int remaining = m;

  const auto first_free = [&](const std::vector<int>& cls) {
    for (int j : cls) {
      if (!allocated[static_cast<std::size_t>(j)]) return j;
    }
    return -1;
  };

  while (remaining > 0) {
    for (int i = 0; i < n && remaining > 0; ++i) {
      const BivaluedPartition& part = parts[static_cast<std::size_t>(i)];
      int chosen_class = -1;
      int item = first_free(part.classes[0]);
      if (item >= 0) {
        chosen_class = 0;
      } else {
        const int from2 = first_free(part.classes[1]);
        const int from3 = first_free(part.classes[2]);
        if (from2 >= 0 && from3 >= 0) {
          // kappa for class k: own share minus a 1/n cut of what has been
          // allocated from the class so far.
          const auto& own = own_count[static_cast<std::size_t>(i)];
          const auto& pool = pool_count[static_cast<std::size_t>(i)];
          const Rational kappa2 = Rational(own[1]) - Rational(pool[1]) / n;
          const Rational kappa3 = Rational(own[2]) - Rational(pool[2]) / n;
          if (kappa2 <= kappa3) {
            chosen_class = 1;
            item = from2;
          } else {
            chosen_class = 2;
            item = from3;
          }
        } else if (from2 >= 0) {
          chosen_class = 1;
          item = from2;
        } else if (from3 >= 0) {
          chosen_class = 2;
          item = from3;
        } else {
          chosen_class = 3;
          item = first_free(part.classes[3]);
        }
      }
      allocated[static_cast<std::size_t>(item)] = true;
      allocation.bundles[static_cast<std::size_t>(i)].push_back(item);
      --remaining;
      // Update the class counters of every agent (each classifies the item
      // in its own partition).
      for (int a = 0; a < n; ++a) {
        const BivaluedPartition& ap = parts[static_cast<std::size_t>(a)];
        for (int k = 0; k < 4; ++k) {
          const auto& cls = ap.classes[static_cast<std::size_t>(k)];
          if (std::find(cls.begin(), cls.end(), item) != cls.end()) {
            ++pool_count[static_cast<std::size_t>(a)]
                        [static_cast<std::size_t>(k)];
            if (a == i) {
              ++own_count[static_cast<std::size_t>(a)]
                         [static_cast<std::size_t>(k)];
            }
            break;
          }
        }
      }
      if (trace) trace->push_back({i, item, chosen_class});
    }
  }
  for (auto& bundle : allocation.bundles) {
    std::sort(bundle.begin(), bundle.end());
  }
  return allocation;
}

}  // namespace dualfair
