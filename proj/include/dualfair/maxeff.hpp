#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "dualfair/errors.hpp"
#include "dualfair/fairness.hpp"
#include "dualfair/linprog.hpp"
#include "dualfair/model.hpp"

namespace dualfair {

// ---------------------------------------------------------------------------
// Maximizing allocator efficiency under an agent-side fairness constraint.
//
// These routines look for allocations with high total allocator value
// SW(A) = sum_i u_i(A_i) among the allocations that are fair *to the
// agents* (the v matrix).  Exact maximization is hard in general, so the
// module offers two approximation algorithms for arbitrary valuations and
// two exact algorithms for binary agent valuations.
// ---------------------------------------------------------------------------

/// Outcome of an efficiency-maximizing routine.
struct MaxEffResult {
  std::string method;                  // routine that produced the result
  Criterion criterion = Criterion::EnvyFreeUpTo;
  int c = 0;                           // certified removal budget
  bool feasible = true;                // false: no fair allocation exists
  Allocation allocation;               // empty when infeasible
  Rational objective = 0;              // allocator efficiency achieved
  Rational guarantee = 1;              // worst-case optimum / objective bound
};

namespace detail {

/// Hard postcondition: the produced allocation must satisfy the fairness
/// constraint it was advertised with (agent side).
inline void assert_agent_fair(const Instance& instance,
                              const Allocation& allocation,
                              Criterion criterion, int c,
                              const char* method) {
  if (!check_fairness(instance, allocation, criterion, c, Perspective::Agents)
           .verdict) {
    throw std::logic_error(std::string(method) +
                           " produced an allocation violating its fairness "
                           "postcondition");
  }
}

}  // namespace detail

/// Two agents, arbitrary valuations: pairs the items in descending order
/// of the first agent's value and, inside each pair, hands the item the
/// second agent values more to whichever half currently holds less second-
/// agent value.  Both orientations of the two halves are envy-free up to
/// one good; the orientation with the higher allocator efficiency is
/// returned.  Its efficiency is at least half the best achievable under
/// envy-freeness up to any c >= 1.
inline MaxEffResult maximize_two_agent_ef(const Instance& instance, int c = 1) {
  if (instance.agents != 2) {
    throw UnsupportedInstance("paired-halves needs exactly two agents");
  }
  if (c < 1) {
    throw BadParameters("paired-halves certifies budgets c >= 1 only");
  }
  const auto& v1 = instance.agent_valuations[0];
  const auto& v2 = instance.agent_valuations[1];

  std::vector<int> order(static_cast<std::size_t>(instance.items));
  for (int j = 0; j < instance.items; ++j) {
    order[static_cast<std::size_t>(j)] = j;
  }
  std::sort(order.begin(), order.end(), [&v1](int a, int b) {
    if (v1[static_cast<std::size_t>(a)] != v1[static_cast<std::size_t>(b)]) {
      return v1[static_cast<std::size_t>(a)] > v1[static_cast<std::size_t>(b)];
    }
    return a < b;
  });

  std::vector<int> half1, half2;
  Rational wealth1 = 0, wealth2 = 0;  // second agent's view of each half
  for (int p = 0; p < instance.items; p += 2) {
    const int first = order[static_cast<std::size_t>(p)];
    const int second =
        p + 1 < instance.items ? order[static_cast<std::size_t>(p + 1)] : -1;
    const Rational value_first = v2[static_cast<std::size_t>(first)];
    const Rational value_second =
        second >= 0 ? v2[static_cast<std::size_t>(second)] : Rational(0);
    // The currently poorer half receives the item the second agent values
    // more (a missing pair partner counts as a worthless item).
    const bool first_is_better = value_first >= value_second;
    const bool half1_richer = wealth1 >= wealth2;
    std::vector<int>& poorer = half1_richer ? half2 : half1;
    std::vector<int>& richer = half1_richer ? half1 : half2;
    Rational& poorer_wealth = half1_richer ? wealth2 : wealth1;
    Rational& richer_wealth = half1_richer ? wealth1 : wealth2;
    if (first_is_better) {
      poorer.push_back(first);
      poorer_wealth += value_first;
      if (second >= 0) {
        richer.push_back(second);
        richer_wealth += value_second;
      }
    } else {
      richer.push_back(first);
      richer_wealth += value_first;
      poorer.push_back(second);
      poorer_wealth += value_second;
    }
  }
  std::sort(half1.begin(), half1.end());
  std::sort(half2.begin(), half2.end());

  Allocation straight;
  straight.bundles = {half1, half2};
  Allocation swapped;
  swapped.bundles = {half2, half1};
  MaxEffResult result;
  result.method = "paired-halves";
  result.criterion = Criterion::EnvyFreeUpTo;
  result.c = c;
  result.guarantee = 2;
  const Rational sw_straight = allocator_efficiency(instance, straight);
  const Rational sw_swapped = allocator_efficiency(instance, swapped);
  if (sw_straight >= sw_swapped) {
    result.allocation = std::move(straight);
    result.objective = sw_straight;
  } else {
    result.allocation = std::move(swapped);
    result.objective = sw_swapped;
  }
  detail::assert_agent_fair(instance, result.allocation,
                            Criterion::EnvyFreeUpTo, 1, "paired-halves");
  return result;
}

/// Any number of agents, arbitrary valuations: gives the single globally
/// most allocator-valuable (agent, item) pair its item first, then runs
/// round-robin on the rest with the favored agent picking last in every
/// round.  The allocation is envy-free up to one good for the agents and
/// its efficiency is at least a 1/m fraction of the constrained optimum.
inline MaxEffResult maximize_round_robin(const Instance& instance, int c = 1) {
  if (c < 1) {
    throw BadParameters("anchored round-robin certifies budgets c >= 1 only");
  }
  const int n = instance.agents;
  const int m = instance.items;
  MaxEffResult result;
  result.method = "anchored-round-robin";
  result.criterion = Criterion::EnvyFreeUpTo;
  result.c = c;
  result.guarantee = std::max(m, 1);
  result.allocation.bundles.assign(static_cast<std::size_t>(n), {});
  if (m == 0) return result;

  int star_agent = 0, star_item = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < m; ++j) {
      if (instance.allocator_valuations[static_cast<std::size_t>(i)]
                                       [static_cast<std::size_t>(j)] >
          instance.allocator_valuations[static_cast<std::size_t>(star_agent)]
                                       [static_cast<std::size_t>(star_item)]) {
        star_agent = i;
        star_item = j;
      }
    }
  }

  std::vector<bool> taken(static_cast<std::size_t>(m), false);
  taken[static_cast<std::size_t>(star_item)] = true;
  result.allocation.bundles[static_cast<std::size_t>(star_agent)].push_back(
      star_item);
  std::vector<int> order;
  for (int i = 0; i < n; ++i) {
    if (i != star_agent) order.push_back(i);
  }
  order.push_back(star_agent);  // favored agent picks last each round
  int remaining = m - 1;
  while (remaining > 0) {
    for (int agent : order) {
      if (remaining == 0) break;
      const auto& row =
          instance.agent_valuations[static_cast<std::size_t>(agent)];
      int best = -1;
      for (int j = 0; j < m; ++j) {
        if (taken[static_cast<std::size_t>(j)]) continue;
        if (best < 0 || row[static_cast<std::size_t>(j)] >
                            row[static_cast<std::size_t>(best)]) {
          best = j;
        }
      }
      taken[static_cast<std::size_t>(best)] = true;
      result.allocation.bundles[static_cast<std::size_t>(agent)].push_back(
          best);
      --remaining;
    }
  }
  for (auto& bundle : result.allocation.bundles) {
    std::sort(bundle.begin(), bundle.end());
  }
  result.objective = allocator_efficiency(instance, result.allocation);
  detail::assert_agent_fair(instance, result.allocation,
                            Criterion::EnvyFreeUpTo, 1,
                            "anchored-round-robin");
  return result;
}

/// Binary agent valuations, any allocator valuations: maximizes allocator
/// efficiency subject to proportionality up to c exactly, via the
/// assignment linear program
///
///   max  sum_{ij} u_i(g_j) x_ij
///   s.t. sum_j v_i(g_j) x_ij >= ceil(v_i(M)/n) - c   for every agent i
///        sum_i x_ij <= 1                             for every item j
///        x >= 0.
///
/// The constraint matrix is totally unimodular (each column hits at most
/// one agent row and at most one item row, all entries 0/1), so with the
/// integral right-hand side the optimal vertex is integral; both facts are
/// re-verified at runtime.  Items the program leaves unassigned carry no
/// allocator value at the optimum and are handed to agent 0.
inline MaxEffResult maximize_binary_prop_lp(const Instance& instance, int c) {
  if (!matrix_in_class(instance.agent_valuations, ValuationClass::Binary)) {
    throw UnsupportedInstance("lp-binary needs binary agent valuations");
  }
  if (c < 0) {
    throw BadParameters("removal budget must be nonnegative");
  }
  const int n = instance.agents;
  const int m = instance.items;
  const auto var = [m](int i, int j) {
    return static_cast<std::size_t>(i) * static_cast<std::size_t>(m) +
           static_cast<std::size_t>(j);
  };

  LinearProgram lp = LinearProgram::with_variables(n * m);
  for (int i = 0; i < n; ++i) {
    const auto& vrow = instance.agent_valuations[static_cast<std::size_t>(i)];
    const auto& urow =
        instance.allocator_valuations[static_cast<std::size_t>(i)];
    for (int j = 0; j < m; ++j) {
      lp.objective[var(i, j)] = urow[static_cast<std::size_t>(j)];
    }
    LinearRow share;
    share.coeffs.assign(static_cast<std::size_t>(n * m), Rational(0));
    Rational total = 0;
    for (int j = 0; j < m; ++j) {
      share.coeffs[var(i, j)] = vrow[static_cast<std::size_t>(j)];
      total += vrow[static_cast<std::size_t>(j)];
    }
    share.relation = Relation::GreaterEq;
    share.rhs = Rational(rational_ceil(total / n)) - c;
    lp.rows.push_back(std::move(share));
  }
  for (int j = 0; j < m; ++j) {
    LinearRow once;
    once.coeffs.assign(static_cast<std::size_t>(n * m), Rational(0));
    for (int i = 0; i < n; ++i) once.coeffs[var(i, j)] = Rational(1);
    once.relation = Relation::LessEq;
    once.rhs = Rational(1);
    lp.rows.push_back(std::move(once));
  }

  {
    RationalMatrix coefficient_rows;
    coefficient_rows.reserve(lp.rows.size());
    for (const LinearRow& row : lp.rows) coefficient_rows.push_back(row.coeffs);
    if (!is_totally_unimodular_bipartite_form(coefficient_rows)) {
      throw std::logic_error(
          "lp-binary constraint matrix lost its unimodular structure");
    }
  }

  MaxEffResult result;
  result.method = "lp-binary";
  result.criterion = Criterion::ProportionalUpTo;
  result.c = c;
  const LpResult solved = solve_vertex_optimal(lp);
  if (solved.status == LpStatus::Infeasible) {
    result.feasible = false;
    return result;
  }
  if (solved.status != LpStatus::Optimal) {
    throw std::logic_error("lp-binary must be bounded by the item rows");
  }
  const VertexSolution& vertex = *solved.solution;
  result.allocation.bundles.assign(static_cast<std::size_t>(n), {});
  for (int j = 0; j < m; ++j) {
    int owner = -1;
    for (int i = 0; i < n; ++i) {
      const Rational& x = vertex.x[var(i, j)];
      if (x == 0) continue;
      if (x != 1 || owner >= 0) {
        throw std::logic_error(
            "lp-binary vertex is not an integral assignment");
      }
      owner = i;
    }
    result.allocation.bundles[static_cast<std::size_t>(owner < 0 ? 0 : owner)]
        .push_back(j);
  }
  result.objective = allocator_efficiency(instance, result.allocation);
  if (result.objective != vertex.objective_value) {
    throw std::logic_error(
        "lp-binary optimum drifted while rounding the assignment");
  }
  detail::assert_agent_fair(instance, result.allocation,
                            Criterion::ProportionalUpTo, c, "lp-binary");
  return result;
}

/// Binary agent valuations, at most four agents: maximizes allocator
/// efficiency subject to envy-freeness up to c exactly.  Dynamic program
/// over items in index order; a state is the vector of pairwise bundle
/// differences t_ij = v_i(A_i) - v_i(A_j), which for binary rows captures
/// envy exactly: the final allocation is envy-free up to c iff every
/// t_ij >= -c.  Each state stores the best allocator efficiency that
/// reaches it; the witness is rebuilt by walking the layers backwards.
inline MaxEffResult maximize_binary_ef_dp(const Instance& instance, int c,
                                          std::size_t max_states = 4000000) {
  if (!matrix_in_class(instance.agent_valuations, ValuationClass::Binary)) {
    throw UnsupportedInstance("dp-binary needs binary agent valuations");
  }
  if (instance.agents > 4) {
    throw UnsupportedInstance(
        "dp-binary supports up to four agents; its state space grows "
        "with every ordered agent pair");
  }
  if (c < 0) {
    throw BadParameters("removal budget must be nonnegative");
  }
  const int n = instance.agents;
  const int m = instance.items;
  const auto pair_index = [n](int i, int j) {
    // Ordered pairs (i, j), i != j, row-major with the diagonal skipped.
    return static_cast<std::size_t>(i) * static_cast<std::size_t>(n - 1) +
           static_cast<std::size_t>(j < i ? j : j - 1);
  };
  const std::size_t width = static_cast<std::size_t>(n) *
                            static_cast<std::size_t>(n - 1);

  using Layer = std::map<std::vector<int>, Rational>;
  std::vector<Layer> layers(static_cast<std::size_t>(m) + 1);
  layers[0][std::vector<int>(width, 0)] = Rational(0);

  const auto valued = [&](int agent, int item) {
    return instance.agent_valuations[static_cast<std::size_t>(agent)]
                                    [static_cast<std::size_t>(item)] == 1;
  };
  const auto shift = [&](std::vector<int> state, int item, int agent,
                         int direction) {
    for (int q = 0; q < n; ++q) {
      if (q == agent) continue;
      if (valued(agent, item)) {
        state[pair_index(agent, q)] += direction;
      }
      if (valued(q, item)) {
        state[pair_index(q, agent)] -= direction;
      }
    }
    return state;
  };

  for (int j = 0; j < m; ++j) {
    Layer& next = layers[static_cast<std::size_t>(j) + 1];
    for (const auto& [state, sw] : layers[static_cast<std::size_t>(j)]) {
      for (int a = 0; a < n; ++a) {
        std::vector<int> moved = shift(state, j, a, +1);
        const Rational gained =
            sw + instance.allocator_valuations[static_cast<std::size_t>(a)]
                                              [static_cast<std::size_t>(j)];
        const auto [it, inserted] = next.try_emplace(std::move(moved), gained);
        if (!inserted && gained > it->second) it->second = gained;
      }
    }
    if (next.size() > max_states) {
      throw StateSpaceExceeded(
          "dp-binary exceeded " + std::to_string(max_states) +
          " states at item " + std::to_string(j));
    }
  }

  MaxEffResult result;
  result.method = "dp-binary";
  result.criterion = Criterion::EnvyFreeUpTo;
  result.c = c;
  const Layer& last = layers[static_cast<std::size_t>(m)];
  const std::vector<int>* best_state = nullptr;
  Rational best_sw = 0;
  for (const auto& [state, sw] : last) {
    if (std::any_of(state.begin(), state.end(),
                    [c](int t) { return t < -c; })) {
      continue;
    }
    if (!best_state || sw > best_sw) {
      best_state = &state;
      best_sw = sw;
    }
  }
  if (!best_state) {
    result.feasible = false;
    return result;
  }

  result.allocation.bundles.assign(static_cast<std::size_t>(n), {});
  std::vector<int> state = *best_state;
  Rational sw = best_sw;
  for (int j = m - 1; j >= 0; --j) {
    bool stepped = false;
    for (int a = 0; a < n && !stepped; ++a) {
      std::vector<int> previous = shift(state, j, a, -1);
      const auto it = layers[static_cast<std::size_t>(j)].find(previous);
      if (it == layers[static_cast<std::size_t>(j)].end()) continue;
      const Rational contribution =
          instance.allocator_valuations[static_cast<std::size_t>(a)]
                                       [static_cast<std::size_t>(j)];
      if (it->second + contribution == sw) {
        result.allocation.bundles[static_cast<std::size_t>(a)].push_back(j);
        state = std::move(previous);
        sw = it->second;
        stepped = true;
      }
    }
    if (!stepped) {
      throw std::logic_error("dp-binary lost its witness while "
                             "backtracking");
    }
  }
  for (auto& bundle : result.allocation.bundles) {
    std::reverse(bundle.begin(), bundle.end());
  }
  result.objective = best_sw;
  if (allocator_efficiency(instance, result.allocation) != best_sw) {
    throw std::logic_error("dp-binary witness does not reach its value");
  }
  detail::assert_agent_fair(instance, result.allocation,
                            Criterion::EnvyFreeUpTo, c, "dp-binary");
  return result;
}

}  // namespace dualfair
