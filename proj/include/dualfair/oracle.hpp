#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "dualfair/doubly.hpp"
#include "dualfair/errors.hpp"
#include "dualfair/fairness.hpp"
#include "dualfair/gen.hpp"
#include "dualfair/model.hpp"

namespace dualfair {

// ---------------------------------------------------------------------------
// Exhaustive reference search.  Walks every complete allocation (there are
// n^m of them) and reports whether a fair one exists, optionally the one
// with the highest allocator efficiency.  This is the ground truth the
// constructive solvers and maximizers are measured against; it refuses to
// start when the space exceeds a configurable cap.
//
// Determinism: allocations are visited in counting order of the
// item-to-agent assignment vector (item 0 most significant).  Ties on the
// objective keep the earliest allocation, so the reported witness is the
// lexicographically smallest optimum no matter how many worker threads
// scan the space.
// ---------------------------------------------------------------------------

struct OracleOptions {
  Criterion criterion = Criterion::EnvyFreeUpTo;
  int c = 1;
  Perspective perspective = Perspective::Doubly;
  /// true: find the fair allocation with maximum allocator efficiency
  /// (full scan).  false: stop at the first fair allocation.
  bool maximize_efficiency = true;
  std::uint64_t cap = 10000000;  // refuse spaces larger than this
  int jobs = 1;                  // worker threads over index strips
};

struct OracleResult {
  bool exists = false;
  std::optional<Allocation> witness;   // engaged iff exists
  std::optional<Rational> objective;   // allocator efficiency of witness
  std::uint64_t examined = 0;          // allocations actually visited
};

namespace detail {

inline std::uint64_t allocation_space_or_throw(int agents, int items,
                                               std::uint64_t cap) {
  std::uint64_t total = 1;
  for (int j = 0; j < items; ++j) {
    if (total > cap / static_cast<std::uint64_t>(agents)) {
      throw CapExceeded("allocation space " + std::to_string(agents) + "^" +
                        std::to_string(items) + " exceeds the cap of " +
                        std::to_string(cap));
    }
    total *= static_cast<std::uint64_t>(agents);
  }
  return total;
}

inline std::vector<const RationalMatrix*> perspective_profiles(
    const Instance& instance, Perspective perspective) {
  switch (perspective) {
    case Perspective::Agents:
      return {&instance.agent_valuations};
    case Perspective::Allocator:
      return {&instance.allocator_valuations};
    case Perspective::Doubly:
      return {&instance.agent_valuations, &instance.allocator_valuations};
    case Perspective::AllProfiles:
      return instance.profiles();
  }
  return {};
}

/// Fairness test for one complete assignment vector, over prepared
/// per-profile row copies.  Num is either long long (rows rescaled to
/// integers) or Rational (exact fallback); both run the same logic, so the
/// two paths accept exactly the same allocations.
template <class Num>
class AssignmentChecker {
 public:
  AssignmentChecker(std::vector<std::vector<std::vector<Num>>> profiles,
                    Criterion criterion, int c, int agents, int items)
      : profiles_(std::move(profiles)),
        envy_(criterion == Criterion::EnvyFreeUpTo),
        c_eff_(std::min(c, items)),
        n_(agents),
        m_(items) {
    bundle_.assign(static_cast<std::size_t>(n_) *
                       static_cast<std::size_t>(n_),
                   Num(0));
    tops_.assign(static_cast<std::size_t>(n_) * static_cast<std::size_t>(n_) *
                     static_cast<std::size_t>(std::max(c_eff_, 1)),
                 Num(0));
    totals_.assign(static_cast<std::size_t>(n_), Num(0));
  }

  bool operator()(const std::vector<int>& owner) {
    for (const auto& rows : profiles_) {
      if (!profile_ok(rows, owner)) return false;
    }
    return true;
  }

 private:
  // Keeps the c_eff largest values seen for one (row, bundle) pair; unused
  // slots stay zero, which is exactly the contribution of removing a
  // nonexistent item.
  void offer(std::size_t slot, const Num& value) {
    if (c_eff_ == 0) return;
    Num* begin = tops_.data() + slot * static_cast<std::size_t>(c_eff_);
    std::size_t weakest = 0;
    for (std::size_t t = 1; t < static_cast<std::size_t>(c_eff_); ++t) {
      if (begin[t] < begin[weakest]) weakest = t;
    }
    if (value > begin[weakest]) begin[weakest] = value;
  }

  Num removable(std::size_t slot) const {
    Num sum(0);
    const Num* begin = tops_.data() + slot * static_cast<std::size_t>(c_eff_);
    for (std::size_t t = 0; t < static_cast<std::size_t>(c_eff_); ++t) {
      sum += begin[t];
    }
    return sum;
  }

  bool profile_ok(const std::vector<std::vector<Num>>& rows,
                  const std::vector<int>& owner) {
    const std::size_t nn = static_cast<std::size_t>(n_);
    std::fill(bundle_.begin(), bundle_.end(), Num(0));
    std::fill(tops_.begin(), tops_.end(), Num(0));
    if (envy_) {
      // bundle_[i*n+j] = row i's value of bundle j; tops_ slot (i, j)
      // collects row i's best items inside bundle j.
      for (int g = 0; g < m_; ++g) {
        const int o = owner[static_cast<std::size_t>(g)];
        for (int i = 0; i < n_; ++i) {
          const Num& value = rows[static_cast<std::size_t>(i)]
                                 [static_cast<std::size_t>(g)];
          bundle_[static_cast<std::size_t>(i) * nn +
                  static_cast<std::size_t>(o)] += value;
          if (i != o) {
            offer(static_cast<std::size_t>(i) * nn +
                      static_cast<std::size_t>(o),
                  value);
          }
        }
      }
      for (int i = 0; i < n_; ++i) {
        const Num& own = bundle_[static_cast<std::size_t>(i) * nn +
                                 static_cast<std::size_t>(i)];
        for (int j = 0; j < n_; ++j) {
          if (j == i) continue;
          const std::size_t slot =
              static_cast<std::size_t>(i) * nn + static_cast<std::size_t>(j);
          if (own + removable(slot) < bundle_[slot]) return false;
        }
      }
    } else {
      // bundle_[i*n+i] = own value; totals_[i] = row total; tops_ slot
      // (i, i) collects row i's best items outside its own bundle.
      std::fill(totals_.begin(), totals_.end(), Num(0));
      for (int g = 0; g < m_; ++g) {
        const int o = owner[static_cast<std::size_t>(g)];
        for (int i = 0; i < n_; ++i) {
          const Num& value = rows[static_cast<std::size_t>(i)]
                                 [static_cast<std::size_t>(g)];
          totals_[static_cast<std::size_t>(i)] += value;
          if (o == i) {
            bundle_[static_cast<std::size_t>(i) * nn +
                    static_cast<std::size_t>(i)] += value;
          } else {
            offer(static_cast<std::size_t>(i) * nn +
                      static_cast<std::size_t>(i),
                  value);
          }
        }
      }
      for (int i = 0; i < n_; ++i) {
        const std::size_t slot =
            static_cast<std::size_t>(i) * nn + static_cast<std::size_t>(i);
        // own >= total/n - removable, scaled by n to stay in Num.
        Num lhs = bundle_[slot] + removable(slot);
        lhs *= n_;
        if (lhs < totals_[static_cast<std::size_t>(i)]) return false;
      }
    }
    return true;
  }

  std::vector<std::vector<std::vector<Num>>> profiles_;
  bool envy_;
  int c_eff_;
  int n_, m_;
  std::vector<Num> bundle_;
  std::vector<Num> tops_;
  std::vector<Num> totals_;
};

/// Rescales one row to integers (times the least common denominator).
/// Fails when any scaled entry would exceed the safe limit.
inline bool scale_row(const std::vector<Rational>& row,
                      std::vector<long long>& out) {
  Integer common = 1;
  for (const Rational& value : row) {
    common = boost::multiprecision::lcm(common, denominator(value));
    if (common > (std::numeric_limits<long long>::max)() / 4) return false;
  }
  out.clear();
  out.reserve(row.size());
  constexpr long long limit = 1LL << 31;
  for (const Rational& value : row) {
    const Integer scaled = numerator(value) * (common / denominator(value));
    if (scaled < 0 || scaled > limit) return false;
    out.push_back(scaled.convert_to<long long>());
  }
  return true;
}

/// Rescales a whole matrix with one shared multiplier, preserving
/// comparability of sums across rows.  Used for the efficiency objective.
inline bool scale_matrix_uniform(const RationalMatrix& matrix,
                                 std::vector<std::vector<long long>>& out) {
  Integer common = 1;
  for (const auto& row : matrix) {
    for (const Rational& value : row) {
      common = boost::multiprecision::lcm(common, denominator(value));
      if (common > (std::numeric_limits<long long>::max)() / 4) return false;
    }
  }
  out.assign(matrix.size(), {});
  constexpr long long limit = 1LL << 31;
  for (std::size_t i = 0; i < matrix.size(); ++i) {
    out[i].reserve(matrix[i].size());
    for (const Rational& value : matrix[i]) {
      const Integer scaled = numerator(value) * (common / denominator(value));
      if (scaled < 0 || scaled > limit) return false;
      out[i].push_back(scaled.convert_to<long long>());
    }
  }
  return true;
}

template <class Num>
struct StripOutcome {
  bool found = false;
  std::uint64_t index = 0;
  Num welfare = Num(0);
  std::uint64_t examined = 0;
};

/// Scans assignment indices [begin, end).  welfare rows are in the same
/// Num domain as the checker; maximize keeps the best welfare (earliest
/// index on ties), otherwise the scan stops at the first fair allocation.
template <class Num>
StripOutcome<Num> scan_strip(std::uint64_t begin, std::uint64_t end,
                             int agents, int items,
                             AssignmentChecker<Num>& checker,
                             const std::vector<std::vector<Num>>& welfare,
                             bool maximize) {
  StripOutcome<Num> out;
  std::vector<int> owner(static_cast<std::size_t>(items), 0);
  std::uint64_t rest = begin;
  for (int g = items - 1; g >= 0; --g) {
    owner[static_cast<std::size_t>(g)] =
        static_cast<int>(rest % static_cast<std::uint64_t>(agents));
    rest /= static_cast<std::uint64_t>(agents);
  }
  for (std::uint64_t index = begin; index < end; ++index) {
    ++out.examined;
    Num sw(0);
    for (int g = 0; g < items; ++g) {
      sw += welfare[static_cast<std::size_t>(
          owner[static_cast<std::size_t>(g)])][static_cast<std::size_t>(g)];
    }
    // Only first-feasible or strictly improving candidates pay for the
    // fairness test.
    const bool interesting = !out.found || (maximize && sw > out.welfare);
    if (interesting && checker(owner)) {
      out.found = true;
      out.index = index;
      out.welfare = sw;
      if (!maximize) break;
    }
    int g = items - 1;
    while (g >= 0) {
      if (++owner[static_cast<std::size_t>(g)] < agents) break;
      owner[static_cast<std::size_t>(g)] = 0;
      --g;
    }
  }
  return out;
}

inline Allocation allocation_from_index(std::uint64_t index, int agents,
                                        int items) {
  std::vector<int> owner(static_cast<std::size_t>(items), 0);
  for (int g = items - 1; g >= 0; --g) {
    owner[static_cast<std::size_t>(g)] =
        static_cast<int>(index % static_cast<std::uint64_t>(agents));
    index /= static_cast<std::uint64_t>(agents);
  }
  return Allocation::from_assignment(owner, agents);
}

template <class Num>
OracleResult run_enumeration(
    const Instance& instance, const OracleOptions& options,
    std::vector<std::vector<std::vector<Num>>> profile_rows,
    std::vector<std::vector<Num>> welfare, std::uint64_t total) {
  const int n = instance.agents;
  const int m = instance.items;
  int jobs = std::clamp(options.jobs, 1, 64);
  if (static_cast<std::uint64_t>(jobs) > total) {
    jobs = static_cast<int>(std::max<std::uint64_t>(total, 1));
  }
  std::vector<StripOutcome<Num>> outcomes(static_cast<std::size_t>(jobs));
  if (jobs == 1) {
    AssignmentChecker<Num> checker(std::move(profile_rows), options.criterion,
                                   options.c, n, m);
    outcomes[0] = scan_strip<Num>(0, total, n, m, checker, welfare,
                                  options.maximize_efficiency);
  } else {
    std::vector<std::thread> workers;
    workers.reserve(static_cast<std::size_t>(jobs));
    for (int w = 0; w < jobs; ++w) {
      const std::uint64_t begin =
          total / static_cast<std::uint64_t>(jobs) *
              static_cast<std::uint64_t>(w) +
          std::min<std::uint64_t>(static_cast<std::uint64_t>(w),
                                  total % static_cast<std::uint64_t>(jobs));
      const std::uint64_t size =
          total / static_cast<std::uint64_t>(jobs) +
          (static_cast<std::uint64_t>(w) <
                   total % static_cast<std::uint64_t>(jobs)
               ? 1
               : 0);
      workers.emplace_back([&, w, begin, size] {
        AssignmentChecker<Num> checker(profile_rows, options.criterion,
                                       options.c, n, m);
        outcomes[static_cast<std::size_t>(w)] =
            scan_strip<Num>(begin, begin + size, n, m, checker, welfare,
                            options.maximize_efficiency);
      });
    }
    for (auto& worker : workers) worker.join();
  }

  OracleResult result;
  const StripOutcome<Num>* best = nullptr;
  for (const auto& outcome : outcomes) {
    result.examined += outcome.examined;
    if (!outcome.found) continue;
    if (!best || (options.maximize_efficiency &&
                  (outcome.welfare > best->welfare ||
                   (outcome.welfare == best->welfare &&
                    outcome.index < best->index))) ||
        (!options.maximize_efficiency && outcome.index < best->index)) {
      best = &outcome;
    }
  }
  if (best) {
    result.exists = true;
    result.witness = allocation_from_index(best->index, n, m);
    result.objective = allocator_efficiency(instance, *result.witness);
  }
  return result;
}

}  // namespace detail

/// Exhaustive search over all complete allocations for one that satisfies
/// the requested fairness constraint, maximizing allocator efficiency when
/// asked.  Throws CapExceeded before scanning when n^m > options.cap.
inline OracleResult enumerate_best(const Instance& instance,
                                   const OracleOptions& options = {}) {
  if (options.c < 0) throw BadParameters("removal budget must be nonnegative");
  const std::uint64_t total = detail::allocation_space_or_throw(
      instance.agents, instance.items, options.cap);
  const auto profiles =
      detail::perspective_profiles(instance, options.perspective);

  // Fast path: every profile row rescales to small integers (fairness is
  // row-scale invariant) and the allocator matrix rescales uniformly (sums
  // across rows must stay comparable).  Otherwise fall back to exact
  // rational arithmetic; both paths visit allocations identically.
  std::vector<std::vector<std::vector<long long>>> int_profiles;
  std::vector<std::vector<long long>> int_welfare;
  bool ints_ok = detail::scale_matrix_uniform(instance.allocator_valuations,
                                              int_welfare);
  if (ints_ok) {
    for (const RationalMatrix* matrix : profiles) {
      std::vector<std::vector<long long>> rows(matrix->size());
      for (std::size_t i = 0; i < matrix->size() && ints_ok; ++i) {
        ints_ok = detail::scale_row((*matrix)[i], rows[i]);
      }
      if (!ints_ok) break;
      int_profiles.push_back(std::move(rows));
    }
  }
  if (ints_ok) {
    return detail::run_enumeration<long long>(instance, options,
                                              std::move(int_profiles),
                                              std::move(int_welfare), total);
  }
  std::vector<std::vector<std::vector<Rational>>> exact_profiles;
  exact_profiles.reserve(profiles.size());
  for (const RationalMatrix* matrix : profiles) {
    exact_profiles.push_back(*matrix);
  }
  return detail::run_enumeration<Rational>(instance, options,
                                           std::move(exact_profiles),
                                           instance.allocator_valuations,
                                           total);
}

/// Does any allocation satisfy the constraint under every profile the
/// instance carries (the two standard matrices plus extras)?
inline OracleResult exists_multi_fair(const Instance& instance,
                                      Criterion criterion, int c,
                                      std::uint64_t cap = 10000000) {
  OracleOptions options;
  options.criterion = criterion;
  options.c = c;
  options.perspective = Perspective::AllProfiles;
  options.maximize_efficiency = false;
  options.cap = cap;
  return enumerate_best(instance, options);
}

/// Scans every subset of `items` (2^m of them, lowest bitmask first) for a
/// split of the pool between the two agent groups that satisfies the group
/// share condition with removal budgets (k1, k2).
inline std::optional<std::pair<std::vector<int>, std::vector<int>>>
exists_two_balanced_split(const Instance& instance,
                          const std::vector<int>& group1,
                          const std::vector<int>& group2,
                          const std::vector<int>& items, int k1, int k2,
                          std::uint64_t cap = 10000000) {
  const std::size_t m = items.size();
  if (m >= 63 || (1ULL << m) > cap) {
    throw CapExceeded("2^" + std::to_string(m) +
                      " subsets exceed the cap of " + std::to_string(cap));
  }
  for (std::uint64_t mask = 0; mask < (1ULL << m); ++mask) {
    std::vector<int> first, second;
    for (std::size_t j = 0; j < m; ++j) {
      (mask >> j & 1 ? first : second).push_back(items[j]);
    }
    if (is_two_balanced_prop(instance, group1, group2, first, second, k1,
                             k2)) {
      return std::make_pair(std::move(first), std::move(second));
    }
  }
  return std::nullopt;
}

/// Randomized hunt for instances that admit no fair allocation at all.
struct SearchOptions {
  RandomKind kind = RandomKind::Binary;
  int agents = 2;
  int items = 3;
  int max_value = 1;
  Criterion criterion = Criterion::ProportionalUpTo;
  int c = 1;
  Perspective perspective = Perspective::Doubly;
  std::uint64_t first_seed = 0;
  std::uint64_t seed_count = 100;
  std::uint64_t cap = 10000000;
  int jobs = 1;
};

struct SearchReport {
  SearchOptions options;
  std::uint64_t seeds_examined = 0;
  std::uint64_t skipped = 0;  // seeds whose search space exceeded the cap
  std::vector<std::uint64_t> counterexamples;

  bool exhaustive() const { return skipped == 0; }

  Json to_json() const {
    Json j;
    j["kind"] = options.kind == RandomKind::General
                    ? "general"
                    : options.kind == RandomKind::Binary ? "binary"
                                                         : "bivalued";
    j["agents"] = options.agents;
    j["items"] = options.items;
    j["max_value"] = options.max_value;
    j["criterion"] = to_string(options.criterion);
    j["c"] = options.c;
    j["perspective"] = to_string(options.perspective);
    j["first_seed"] = options.first_seed;
    j["seed_count"] = options.seed_count;
    j["seeds_examined"] = seeds_examined;
    j["skipped"] = skipped;
    j["exhaustive"] = exhaustive();
    j["counterexamples"] = counterexamples;
    return j;
  }
};

/// Enumerates random instances and records every seed whose instance has
/// no fair allocation.  Each hit is re-verified with an independent full
/// maximizing scan before it is reported.
inline SearchReport search_counterexamples(const SearchOptions& options) {
  SearchReport report;
  report.options = options;
  OracleOptions probe;
  probe.criterion = options.criterion;
  probe.c = options.c;
  probe.perspective = options.perspective;
  probe.maximize_efficiency = false;
  probe.cap = options.cap;
  probe.jobs = options.jobs;
  for (std::uint64_t s = 0; s < options.seed_count; ++s) {
    const std::uint64_t seed = options.first_seed + s;
    const Instance instance =
        random_instance(options.kind, options.agents, options.items,
                        options.max_value, seed);
    ++report.seeds_examined;
    OracleResult found;
    try {
      found = enumerate_best(instance, probe);
    } catch (const CapExceeded&) {
      ++report.skipped;
      continue;
    }
    if (found.exists) continue;
    OracleOptions confirm = probe;
    confirm.maximize_efficiency = true;  // independent full rescan
    if (enumerate_best(instance, confirm).exists) {
      throw std::logic_error(
          "counterexample search disagrees with its confirmation pass");
    }
    report.counterexamples.push_back(seed);
  }
  return report;
}

}  // namespace dualfair
