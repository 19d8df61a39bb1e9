// Tests for the allocation solvers: round-robin, envy-cycle rotation, the
// identical-allocator rounds solver, the two-agent label walk, the
// balanced-split program with its recursive halving, and the bi-valued
// round-robin.  Worked examples are traced by hand; batteries re-check the
// advertised guarantees with the brute-force fairness oracles.

#include <algorithm>
#include <functional>
#include <iterator>
#include <set>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "dualfair/doubly.hpp"
#include "dualfair/gen.hpp"
#include "test_util.hpp"

using dualfair::Allocation;
using dualfair::balanced_split;
using dualfair::BalancedSplit;
using dualfair::bivalued_partition;
using dualfair::BivaluedPartition;
using dualfair::BivaluedStep;
using dualfair::bundle_value;
using dualfair::check_ef_c;
using dualfair::check_prop_c;
using dualfair::eliminate_envy_cycles;
using dualfair::envy_edges;
using dualfair::Instance;
using dualfair::is_two_balanced_prop;
using dualfair::label_sequences;
using dualfair::prop_log_bound;
using dualfair::random_identical_allocator_instance;
using dualfair::random_instance;
using dualfair::RandomKind;
using dualfair::Rational;
using dualfair::RationalMatrix;
using dualfair::round_robin_allocation;
using dualfair::solve_bivalued_prop2;
using dualfair::solve_doubly_prop_log;
using dualfair::solve_identical_allocator_ef1;
using dualfair::solve_two_agent_doubly_ef1;
using dualfair::two_agent_doubly_ef1_plan;
using dualfair::TwoAgentPlan;
using dualfair::UnsupportedInstance;
using dualfair::validate_allocation;
using testutil::ef_c_oracle;
using testutil::intro_instance;
using testutil::make_instance;
using testutil::mat;

namespace {

// Sanity for partial allocations: in-range, ascending, no duplicates.
void expect_consistent_partial(const Allocation& allocation, int agents,
                               int items) {
  ASSERT_EQ(static_cast<int>(allocation.bundles.size()), agents);
  std::vector<int> seen(static_cast<std::size_t>(items), 0);
  for (const auto& bundle : allocation.bundles) {
    for (std::size_t k = 0; k < bundle.size(); ++k) {
      ASSERT_GE(bundle[k], 0);
      ASSERT_LT(bundle[k], items);
      if (k > 0) ASSERT_LT(bundle[k - 1], bundle[k]);
      ASSERT_EQ(seen[static_cast<std::size_t>(bundle[k])]++, 0);
    }
  }
}

bool graph_has_cycle(const std::vector<std::vector<int>>& edges) {
  const int n = static_cast<int>(edges.size());
  std::vector<int> state(static_cast<std::size_t>(n), 0);
  std::function<bool(int)> dfs = [&](int v) {
    state[static_cast<std::size_t>(v)] = 1;
    for (int w : edges[static_cast<std::size_t>(v)]) {
      if (state[static_cast<std::size_t>(w)] == 1) return true;
      if (state[static_cast<std::size_t>(w)] == 0 && dfs(w)) return true;
    }
    state[static_cast<std::size_t>(v)] = 2;
    return false;
  };
  for (int v = 0; v < n; ++v) {
    if (state[static_cast<std::size_t>(v)] == 0 && dfs(v)) return true;
  }
  return false;
}

// One-sided envy-up-to-c restated from the definition.
bool one_sided_ef(const std::vector<Rational>& row,
                  const std::vector<int>& own, const std::vector<int>& other,
                  int c) {
  Rational best_drop = 0;
  std::vector<Rational> values;
  for (int j : other) values.push_back(row[static_cast<std::size_t>(j)]);
  std::sort(values.begin(), values.end(), std::greater<>());
  for (int t = 0; t < c && t < static_cast<int>(values.size()); ++t) {
    best_drop += values[static_cast<std::size_t>(t)];
  }
  return bundle_value(row, own) >= bundle_value(row, other) - best_drop;
}

std::vector<int> sorted_copy(std::vector<int> v) {
  std::sort(v.begin(), v.end());
  return v;
}

TEST(RoundRobin, AgentsAlternateOverFavorites) {
  const Instance ins = make_instance({{3, 2, 1, 0}, {3, 2, 1, 0}},
                                     {{1, 1, 1, 1}, {1, 1, 1, 1}});
  const Allocation a = round_robin_allocation(ins, {0, 1});
  EXPECT_EQ(a.bundles[0], (std::vector<int>{0, 2}));
  EXPECT_EQ(a.bundles[1], (std::vector<int>{1, 3}));
  const Allocation b = round_robin_allocation(ins, {1, 0});
  EXPECT_EQ(b.bundles[0], (std::vector<int>{1, 3}));
  EXPECT_EQ(b.bundles[1], (std::vector<int>{0, 2}));
}

TEST(RoundRobin, TiesGoToLowestItemIndex) {
  const Instance ins =
      make_instance({{1, 1, 1}, {1, 1, 1}}, {{1, 1, 1}, {1, 1, 1}});
  const Allocation a = round_robin_allocation(ins, {0, 1});
  EXPECT_EQ(a.bundles[0], (std::vector<int>{0, 2}));
  EXPECT_EQ(a.bundles[1], (std::vector<int>{1}));
}

TEST(EnvyCycles, EdgesMatchTheDefinition) {
  const Instance ins = intro_instance();
  Allocation a;
  a.bundles = {{2}, {0, 1}};
  const auto edges = envy_edges(ins.agent_valuations, a);
  EXPECT_EQ(edges[0], (std::vector<int>{1}));  // v1({0,1})=3 > v1({2})=0
  EXPECT_EQ(edges[1], (std::vector<int>{0}));  // v2({2})=2 > v2({0,1})=1
}

TEST(EnvyCycles, MutualEnvyRotates) {
  const Instance ins = intro_instance();
  Allocation a;
  a.bundles = {{2}, {0, 1}};
  int rotations = 0;
  const Allocation out =
      eliminate_envy_cycles(ins.agent_valuations, a, &rotations);
  EXPECT_EQ(rotations, 1);
  EXPECT_EQ(out.bundles[0], (std::vector<int>{0, 1}));
  EXPECT_EQ(out.bundles[1], (std::vector<int>{2}));
  EXPECT_FALSE(graph_has_cycle(envy_edges(ins.agent_valuations, out)));
}

TEST(EnvyCycles, ThreeCycleRotatesOnce) {
  const RationalMatrix v = mat({{0, 10, 0}, {0, 0, 10}, {10, 0, 0}});
  Allocation a;
  a.bundles = {{0}, {1}, {2}};
  int rotations = 0;
  const Allocation out = eliminate_envy_cycles(v, a, &rotations);
  EXPECT_EQ(rotations, 1);
  EXPECT_EQ(out.bundles[0], (std::vector<int>{1}));
  EXPECT_EQ(out.bundles[1], (std::vector<int>{2}));
  EXPECT_EQ(out.bundles[2], (std::vector<int>{0}));
}

TEST(EnvyCycles, RotationNeverHurtsAnyoneAndPreservesBundles) {
  for (std::uint64_t seed = 0; seed < 120; ++seed) {
    const int agents = 2 + static_cast<int>(seed % 4);
    const int items = static_cast<int>(seed % 9);
    const Instance ins =
        random_instance(RandomKind::General, agents, items, 7, seed);
    // Spread items cyclically to get an arbitrary starting allocation.
    Allocation start;
    start.bundles.assign(static_cast<std::size_t>(agents), {});
    for (int j = 0; j < items; ++j) {
      start.bundles[static_cast<std::size_t>(
                        (j + static_cast<int>(seed)) % agents)]
          .push_back(j);
    }
    const Allocation out =
        eliminate_envy_cycles(ins.agent_valuations, start);
    EXPECT_FALSE(graph_has_cycle(envy_edges(ins.agent_valuations, out)));
    std::multiset<std::vector<int>> before, after;
    for (int i = 0; i < agents; ++i) {
      before.insert(start.bundles[static_cast<std::size_t>(i)]);
      after.insert(out.bundles[static_cast<std::size_t>(i)]);
      const auto& row = ins.agent_valuations[static_cast<std::size_t>(i)];
      EXPECT_GE(bundle_value(row, out.bundles[static_cast<std::size_t>(i)]),
                bundle_value(row, start.bundles[static_cast<std::size_t>(i)]));
    }
    EXPECT_EQ(before, after);  // rotation only permutes bundles
  }
}

TEST(IdenticalAllocator, RejectsDifferingAllocatorRows) {
  EXPECT_THROW(solve_identical_allocator_ef1(intro_instance()),
               UnsupportedInstance);
}

TEST(IdenticalAllocator, WorkedExampleTracesByHand) {
  const Instance ins = make_instance({{5, 1, 1, 1}, {1, 5, 1, 1}},
                                     {{4, 3, 2, 1}, {4, 3, 2, 1}});
  std::vector<Allocation> rounds;
  const Allocation out = solve_identical_allocator_ef1(
      ins, [&rounds](const Allocation& partial) { rounds.push_back(partial); });
  EXPECT_EQ(out.bundles[0], (std::vector<int>{0, 2}));
  EXPECT_EQ(out.bundles[1], (std::vector<int>{1, 3}));
  ASSERT_EQ(rounds.size(), 2u);
  EXPECT_EQ(rounds[0].bundles[0], (std::vector<int>{0}));
  EXPECT_EQ(rounds[0].bundles[1], (std::vector<int>{1}));
  EXPECT_EQ(rounds[1].bundles, out.bundles);
}

TEST(IdenticalAllocator, PadsPartialFinalRound) {
  const Instance ins = make_instance(
      {{1, 2, 3, 4}, {4, 3, 2, 1}, {1, 1, 1, 1}},
      {{2, 2, 1, 1}, {2, 2, 1, 1}, {2, 2, 1, 1}});
  int rounds = 0;
  const Allocation out = solve_identical_allocator_ef1(
      ins, [&rounds](const Allocation&) { ++rounds; });
  EXPECT_EQ(rounds, 2);  // ceil(4 / 3)
  validate_allocation(out, 3, 4);
  EXPECT_TRUE(check_ef_c(ins, out, 1).verdict);
}

TEST(IdenticalAllocator, BatteryIsDoublyEnvyFreeUpToOne) {
  for (std::uint64_t seed = 0; seed < 160; ++seed) {
    const int agents = 2 + static_cast<int>(seed % 4);
    const int items = static_cast<int>(seed % 13);
    const RandomKind kind =
        seed % 3 == 0 ? RandomKind::Binary : RandomKind::General;
    const Instance ins =
        random_identical_allocator_instance(kind, agents, items, 9, seed);
    std::vector<Allocation> partials;
    const Allocation out = solve_identical_allocator_ef1(
        ins,
        [&partials](const Allocation& partial) { partials.push_back(partial); });
    validate_allocation(out, agents, items);
    EXPECT_TRUE(check_ef_c(ins, out, 1).verdict)
        << "seed " << seed << " final allocation not doubly fair";
    // Every round boundary is already fair on what has been handed out.
    for (const Allocation& partial : partials) {
      expect_consistent_partial(partial, agents, items);
      EXPECT_TRUE(ef_c_oracle(ins.agent_valuations, partial, 1))
          << "seed " << seed;
      EXPECT_TRUE(ef_c_oracle(ins.allocator_valuations, partial, 1))
          << "seed " << seed;
    }
    const Allocation again = solve_identical_allocator_ef1(ins);
    EXPECT_EQ(out.bundles, again.bundles);
  }
}

TEST(TwoAgentWalk, LabelSequencesForEightItems) {
  const std::vector<std::string> expected{"+-+-", "++-+", "-++-", "+-++",
                                          "-+-+"};
  EXPECT_EQ(label_sequences(4), expected);
}

TEST(TwoAgentWalk, LabelSequencesSmallCases) {
  EXPECT_EQ(label_sequences(0), std::vector<std::string>{""});
  EXPECT_EQ(label_sequences(1), (std::vector<std::string>{"+", "+"}));
  EXPECT_EQ(label_sequences(2), (std::vector<std::string>{"+-", "++", "-+"}));
}

TEST(TwoAgentWalk, ConsecutiveSequencesAgreeExactlyAtTheKeptGroup) {
  for (int k : {2, 4, 6, 8}) {
    const auto seqs = label_sequences(k);
    ASSERT_EQ(static_cast<int>(seqs.size()), k + 1);
    for (int i = 0; i < k; ++i) {
      for (int g = 0; g < k; ++g) {
        const bool agree = seqs[static_cast<std::size_t>(i)]
                               [static_cast<std::size_t>(g)] ==
                           seqs[static_cast<std::size_t>(i + 1)]
                               [static_cast<std::size_t>(g)];
        EXPECT_EQ(agree, g == i);
      }
    }
    // With an even group count the first and last sequences disagree
    // everywhere, so the corresponding bundles are disjoint.
    for (int g = 0; g < k; ++g) {
      EXPECT_NE(seqs.front()[static_cast<std::size_t>(g)],
                seqs.back()[static_cast<std::size_t>(g)]);
    }
  }
}

TEST(TwoAgentWalk, PlanPartitionsItemsIntoOverlappingCandidates) {
  const Instance ins = random_instance(RandomKind::General, 2, 8, 9, 77);
  const TwoAgentPlan plan = two_agent_doubly_ef1_plan(ins);
  EXPECT_EQ(plan.padded_items, 8);
  ASSERT_EQ(plan.groups.size(), 4u);
  std::set<int> all;
  for (const auto& g : plan.groups) {
    all.insert(g[0]);
    all.insert(g[1]);
  }
  EXPECT_EQ(all.size(), 8u);
  ASSERT_EQ(plan.candidates.size(), 5u);
  for (std::size_t i = 0; i < plan.candidates.size(); ++i) {
    EXPECT_EQ(plan.candidates[i].bundles[0].size(), 4u);
    EXPECT_EQ(plan.candidates[i].bundles[1].size(), 4u);
    if (i + 1 < plan.candidates.size()) {
      std::vector<int> overlap;
      std::ranges::set_intersection(plan.candidates[i].bundles[0],
                                    plan.candidates[i + 1].bundles[0],
                                    std::back_inserter(overlap));
      EXPECT_EQ(overlap.size(), 1u);  // consecutive bundles share one item
    }
  }
  std::vector<int> ends;
  std::ranges::set_intersection(plan.candidates.front().bundles[0],
                                plan.candidates.back().bundles[0],
                                std::back_inserter(ends));
  EXPECT_TRUE(ends.empty());  // first and last candidates are disjoint
}

TEST(TwoAgentWalk, EveryCandidateAlreadySuitsTheFirstAgent) {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const int items = static_cast<int>(seed % 11);
    const Instance ins =
        random_instance(RandomKind::General, 2, items, 8, seed);
    const TwoAgentPlan plan = two_agent_doubly_ef1_plan(ins);
    for (const Allocation& cand : plan.candidates) {
      EXPECT_TRUE(one_sided_ef(ins.agent_valuations[0], cand.bundles[0],
                               cand.bundles[1], 1))
          << "seed " << seed;
      EXPECT_TRUE(one_sided_ef(ins.allocator_valuations[0], cand.bundles[0],
                               cand.bundles[1], 1))
          << "seed " << seed;
    }
  }
}

TEST(TwoAgentWalk, SolverIsDoublyEnvyFreeUpToOne) {
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    const int items = static_cast<int>(seed % 11);
    const RandomKind kind =
        seed % 4 == 0 ? RandomKind::Bivalued : RandomKind::General;
    const Instance ins = random_instance(kind, 2, items, 6, seed);
    const Allocation out = solve_two_agent_doubly_ef1(ins);
    validate_allocation(out, 2, items);
    EXPECT_TRUE(check_ef_c(ins, out, 1).verdict) << "seed " << seed;
    const Allocation again = solve_two_agent_doubly_ef1(ins);
    EXPECT_EQ(out.bundles, again.bundles);
  }
}

TEST(TwoAgentWalk, HandlesEmptyAndOddItemCounts) {
  const Instance empty = make_instance({{}, {}}, {{}, {}});
  const Allocation none = solve_two_agent_doubly_ef1(empty);
  EXPECT_TRUE(none.bundles[0].empty());
  EXPECT_TRUE(none.bundles[1].empty());

  const Instance single = make_instance({{7}, {7}}, {{3}, {3}});
  const Allocation one = solve_two_agent_doubly_ef1(single);
  validate_allocation(one, 2, 1);
  EXPECT_TRUE(check_ef_c(single, one, 1).verdict);
}

TEST(TwoAgentWalk, RejectsOtherAgentCounts) {
  const Instance three = random_instance(RandomKind::General, 3, 4, 5, 1);
  EXPECT_THROW(two_agent_doubly_ef1_plan(three), UnsupportedInstance);
  EXPECT_THROW(solve_two_agent_doubly_ef1(three), UnsupportedInstance);
}

TEST(BalancedSplit, RejectsBadGroupShapes) {
  const Instance ins = random_instance(RandomKind::General, 3, 4, 5, 2);
  EXPECT_THROW(balanced_split(ins, {0, 1}, {2}, {0, 1, 2, 3}),
               std::invalid_argument);
  EXPECT_THROW(balanced_split(ins, {}, {0, 1, 2}, {0, 1, 2, 3}),
               std::invalid_argument);
}

TEST(BalancedSplit, TwoAgentWorkedExample) {
  const Instance ins = make_instance({{4, 3, 2, 1}, {1, 2, 3, 4}},
                                     {{1, 1, 1, 1}, {1, 1, 1, 1}});
  const BalancedSplit split = balanced_split(ins, {0}, {1}, {0, 1, 2, 3});
  // The program is forced to hand over exactly two unit-weight items and
  // the leader surplus is maximized by the two items it values most.
  EXPECT_EQ(split.first_items, (std::vector<int>{0, 1}));
  EXPECT_EQ(split.second_items, (std::vector<int>{2, 3}));
  EXPECT_EQ(split.fractional_count, 0);
  EXPECT_EQ(split.objective, Rational(2));
}

TEST(BalancedSplit, RespectsAnItemSubset) {
  const Instance ins = random_instance(RandomKind::General, 2, 6, 9, 5);
  const std::vector<int> pool{1, 3, 5};
  const BalancedSplit split = balanced_split(ins, {0}, {1}, pool);
  std::vector<int> joined = split.first_items;
  joined.insert(joined.end(), split.second_items.begin(),
                split.second_items.end());
  EXPECT_EQ(sorted_copy(joined), pool);
}

TEST(BalancedSplit, BatteryKeepsVertexAndShareGuarantees) {
  for (std::uint64_t seed = 0; seed < 140; ++seed) {
    const int agents = 2 + static_cast<int>(seed % 5);
    const int items = static_cast<int>(seed % 11);
    const Instance ins =
        random_instance(RandomKind::General, agents, items, 9, seed);
    std::vector<int> group1, group2, pool;
    for (int i = 0; i < agents; ++i) {
      (i < agents / 2 ? group1 : group2).push_back(i);
    }
    for (int j = 0; j < items; ++j) pool.push_back(j);
    const BalancedSplit split = balanced_split(ins, group1, group2, pool);
    EXPECT_GE(split.objective, Rational(0));
    EXPECT_LE(split.fractional_count, 2 * agents - 1);
    std::vector<int> joined = split.first_items;
    joined.insert(joined.end(), split.second_items.begin(),
                  split.second_items.end());
    EXPECT_EQ(sorted_copy(joined), pool);
    EXPECT_TRUE(is_two_balanced_prop(ins, group1, group2, split.first_items,
                                     split.second_items, agents - 1, agents))
        << "seed " << seed;
  }
}

TEST(HalvingSolver, BoundFollowsCeilLog) {
  EXPECT_EQ(prop_log_bound(1), 0);
  EXPECT_EQ(prop_log_bound(2), 2);
  EXPECT_EQ(prop_log_bound(3), 4);
  EXPECT_EQ(prop_log_bound(4), 4);
  EXPECT_EQ(prop_log_bound(5), 6);
  EXPECT_EQ(prop_log_bound(8), 6);
  EXPECT_EQ(prop_log_bound(9), 8);
  EXPECT_EQ(prop_log_bound(16), 8);
}

TEST(HalvingSolver, SingleAgentTakesEverything) {
  const Instance ins = make_instance({{3, 1, 4}}, {{1, 5, 9}});
  const Allocation out = solve_doubly_prop_log(ins);
  EXPECT_EQ(out.bundles[0], (std::vector<int>{0, 1, 2}));
  EXPECT_TRUE(check_prop_c(ins, out, 0).verdict);
}

TEST(HalvingSolver, BatteryIsDoublyProportionalUpToTheBound) {
  for (std::uint64_t seed = 0; seed < 150; ++seed) {
    const int agents = 1 + static_cast<int>(seed % 8);
    const int items = static_cast<int>(seed % 13);
    const RandomKind kind =
        seed % 3 == 0 ? RandomKind::Binary : RandomKind::General;
    const Instance ins = random_instance(kind, agents, items, 9, seed);
    const Allocation out = solve_doubly_prop_log(ins);
    validate_allocation(out, agents, items);
    EXPECT_TRUE(check_prop_c(ins, out, prop_log_bound(agents)).verdict)
        << "seed " << seed;
    const Allocation again = solve_doubly_prop_log(ins);
    EXPECT_EQ(out.bundles, again.bundles);
  }
}

TEST(BivaluedSolver, RejectsRowsWithThreeValues) {
  const Instance ins =
      make_instance({{1, 2, 3}, {1, 1, 1}}, {{1, 1, 1}, {1, 1, 1}});
  EXPECT_THROW(solve_bivalued_prop2(ins), UnsupportedInstance);
}

TEST(BivaluedSolver, WorkedExampleFollowsTheClassOrder) {
  const Instance ins = make_instance({{3, 3, 1, 1}, {1, 1, 3, 3}},
                                     {{2, 1, 2, 1}, {1, 2, 1, 2}});
  std::vector<BivaluedStep> trace;
  const Allocation out = solve_bivalued_prop2(ins, &trace);
  EXPECT_EQ(out.bundles[0], (std::vector<int>{0, 1}));
  EXPECT_EQ(out.bundles[1], (std::vector<int>{2, 3}));
  ASSERT_EQ(trace.size(), 4u);
  // Agent 0 takes its both-rows-high item, agent 1 likewise; then each
  // falls back to a singly-valuable class.
  EXPECT_EQ(trace[0].agent, 0);
  EXPECT_EQ(trace[0].item, 0);
  EXPECT_EQ(trace[0].chosen_class, 0);
  EXPECT_EQ(trace[1].agent, 1);
  EXPECT_EQ(trace[1].item, 3);
  EXPECT_EQ(trace[1].chosen_class, 0);
  EXPECT_EQ(trace[2].agent, 0);
  EXPECT_EQ(trace[2].item, 1);
  EXPECT_EQ(trace[2].chosen_class, 1);
  EXPECT_EQ(trace[3].agent, 1);
  EXPECT_EQ(trace[3].item, 2);
  EXPECT_EQ(trace[3].chosen_class, 1);
}

TEST(BivaluedSolver, ConstantRowsReduceToRoundRobinByIndex) {
  const Instance ins = make_instance({{2, 2, 2}, {2, 2, 2}},
                                     {{1, 1, 1}, {1, 1, 1}});
  const Allocation out = solve_bivalued_prop2(ins);
  EXPECT_EQ(out.bundles[0], (std::vector<int>{0, 2}));
  EXPECT_EQ(out.bundles[1], (std::vector<int>{1}));
  EXPECT_TRUE(check_prop_c(ins, out, 2).verdict);
}

TEST(BivaluedSolver, BatteryIsDoublyProportionalUpToTwo) {
  for (std::uint64_t seed = 0; seed < 250; ++seed) {
    const int agents = 2 + static_cast<int>(seed % 4);
    const int items = static_cast<int>(seed % 13);
    const Instance ins =
        random_instance(RandomKind::Bivalued, agents, items, 7, seed);
    std::vector<BivaluedStep> trace;
    const Allocation out = solve_bivalued_prop2(ins, &trace);
    validate_allocation(out, agents, items);
    EXPECT_EQ(static_cast<int>(trace.size()), items);
    EXPECT_TRUE(check_prop_c(ins, out, 2).verdict) << "seed " << seed;
    const Allocation again = solve_bivalued_prop2(ins);
    EXPECT_EQ(out.bundles, again.bundles);
  }
}

TEST(BivaluedSolver, BalanceCountersStayWithinProvenBands) {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const int agents = 2 + static_cast<int>(seed % 4);
    const int items = static_cast<int>(seed % 13);
    const Instance ins =
        random_instance(RandomKind::Bivalued, agents, items, 7, seed);
    std::vector<BivaluedStep> trace;
    solve_bivalued_prop2(ins, &trace);

    std::vector<BivaluedPartition> parts;
    for (int i = 0; i < agents; ++i) {
      parts.push_back(bivalued_partition(ins, i));
    }
    // Replay the trace and check the per-agent class balance counters
    // after every single assignment: for kappa(k) = |own in class k| -
    // |allocated in class k| / n, both kappa(1)+kappa(2) and
    // kappa(1)+kappa(3) stay >= -2, and they are never both below -1.
    std::vector<std::vector<int>> own(
        static_cast<std::size_t>(agents), std::vector<int>(4, 0));
    std::vector<std::vector<int>> pool(
        static_cast<std::size_t>(agents), std::vector<int>(4, 0));
    for (const BivaluedStep& step : trace) {
      ASSERT_TRUE(std::ranges::binary_search(
          sorted_copy(parts[static_cast<std::size_t>(step.agent)]
                          .classes[static_cast<std::size_t>(
                              step.chosen_class)]),
          step.item));
      for (int a = 0; a < agents; ++a) {
        for (int k = 0; k < 4; ++k) {
          const auto& cls = parts[static_cast<std::size_t>(a)]
                                .classes[static_cast<std::size_t>(k)];
          if (std::find(cls.begin(), cls.end(), step.item) != cls.end()) {
            ++pool[static_cast<std::size_t>(a)][static_cast<std::size_t>(k)];
            if (a == step.agent) {
              ++own[static_cast<std::size_t>(a)]
                   [static_cast<std::size_t>(k)];
            }
          }
        }
      }
      for (int a = 0; a < agents; ++a) {
        const auto kappa = [&](int k) {
          return Rational(own[static_cast<std::size_t>(a)]
                             [static_cast<std::size_t>(k)]) -
                 Rational(pool[static_cast<std::size_t>(a)]
                              [static_cast<std::size_t>(k)]) /
                     agents;
        };
        const Rational one_two = kappa(0) + kappa(1);
        const Rational one_three = kappa(0) + kappa(2);
        EXPECT_GE(one_two, Rational(-2)) << "seed " << seed;
        EXPECT_GE(one_three, Rational(-2)) << "seed " << seed;
        EXPECT_FALSE(one_two < Rational(-1) && one_three < Rational(-1))
            << "seed " << seed;
      }
    }
  }
}

}  // namespace
