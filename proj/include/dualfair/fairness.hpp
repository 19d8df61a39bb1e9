#pragma once

#include <algorithm>
#include <stdexcept>
#include <string>
#include <vector>

#include "dualfair/model.hpp"
#include "dualfair/rational.hpp"

namespace dualfair {

/// Fairness criteria, each relaxed by a removal budget c:
///   EnvyFreeUpTo:      agent i does not envy agent j once some <= c items
///                      are removed from j's bundle;
///   ProportionalUpTo:  agent i reaches a 1/n share of the whole item set
///                      once some <= c items are removed from the items
///                      held by others.
enum class Criterion { EnvyFreeUpTo, ProportionalUpTo };

/// Which valuation profiles a check runs against: the agents' matrix, the
/// allocator's matrix, both ("doubly"), or every profile the instance
/// carries (the two standard matrices plus any extras).
enum class Perspective { Agents, Allocator, Doubly, AllProfiles };

inline std::string to_string(Criterion c) {
  return c == Criterion::EnvyFreeUpTo ? "ef" : "prop";
}

inline std::string to_string(Perspective p) {
  switch (p) {
    case Perspective::Agents: return "agents";
    case Perspective::Allocator: return "allocator";
    case Perspective::Doubly: return "doubly";
    case Perspective::AllProfiles: return "all-profiles";
  }
  return "agents";
}

inline Criterion criterion_from_string(const std::string& s) {
  if (s == "ef") return Criterion::EnvyFreeUpTo;
  if (s == "prop") return Criterion::ProportionalUpTo;
  throw FormatError("unknown criterion '" + s + "' (expected ef or prop)");
}

inline Perspective perspective_from_string(const std::string& s) {
  if (s == "agents") return Perspective::Agents;
  if (s == "allocator") return Perspective::Allocator;
  if (s == "doubly") return Perspective::Doubly;
  if (s == "all-profiles") return Perspective::AllProfiles;
  throw FormatError("unknown perspective '" + s + "'");
}

/// The item indices in `subset` carrying the largest values of `row`, at
/// most `budget` of them (fewer when the subset is smaller).  Ties are
/// broken toward the lowest item index.  Returned ascending.
inline std::vector<int> top_value_items(const std::vector<Rational>& row,
                                        int budget,
                                        const std::vector<int>& subset) {
  if (budget < 0) throw std::invalid_argument("negative removal budget");
  std::vector<int> order = subset;
  std::sort(order.begin(), order.end(), [&row](int a, int b) {
    const Rational& va = row[static_cast<std::size_t>(a)];
    const Rational& vb = row[static_cast<std::size_t>(b)];
    if (va != vb) return va > vb;
    return a < b;
  });
  const std::size_t take =
      std::min<std::size_t>(order.size(), static_cast<std::size_t>(budget));
  order.resize(take);
  std::sort(order.begin(), order.end());
  return order;
}

/// Sum of the min(budget, |subset|) largest values of `row` over `subset`.
inline Rational top_values(const std::vector<Rational>& row, int budget,
                           const std::vector<int>& subset) {
  Rational total = 0;
  for (int j : top_value_items(row, budget, subset)) {
    total += row[static_cast<std::size_t>(j)];
  }
  return total;
}

/// One elementary check: a pairwise envy comparison (against >= 0) or a
/// per-agent share comparison (against == -1).  On success `removal` is the
/// witness set of removed items (re-verifiable: after deleting exactly
/// those items the defining inequality holds without any relaxation).  On
/// failure `deficit` is the positive amount still missing.
struct FairnessEntry {
  int agent = 0;
  int against = -1;
  bool ok = false;
  std::vector<int> removal;
  Rational deficit = 0;
};

/// All elementary checks for one valuation profile.
struct ProfileReport {
  int profile = 0;
  bool ok = false;
  std::vector<FairnessEntry> entries;
};

/// Full result of a fairness check across one or more profiles.  The
/// verdict is the conjunction over profiles; each profile's verdict is the
/// conjunction over its entries.
struct FairnessReport {
  Criterion criterion = Criterion::EnvyFreeUpTo;
  int c = 0;
  Perspective perspective = Perspective::Agents;
  int profile_count = 0;
  bool verdict = false;
  std::vector<ProfileReport> profiles;

  Json to_json() const {
    Json j;
    j["criterion"] = to_string(criterion);
    j["c"] = c;
    j["perspective"] = to_string(perspective);
    j["profiles"] = profile_count;
    j["verdict"] = verdict;
    Json details = Json::array();
    for (const ProfileReport& p : profiles) {
      Json pj;
      pj["profile"] = p.profile;
      pj["ok"] = p.ok;
      Json entries = Json::array();
      for (const FairnessEntry& e : p.entries) {
        Json ej;
        ej["agent"] = e.agent;
        if (e.against >= 0) ej["against"] = e.against;
        ej["ok"] = e.ok;
        if (e.ok) {
          ej["removal"] = e.removal;
        } else {
          ej["deficit"] = rational_to_json(e.deficit);
        }
        entries.push_back(std::move(ej));
      }
      pj["entries"] = std::move(entries);
      details.push_back(std::move(pj));
    }
    j["details"] = std::move(details);
    return j;
  }
};

namespace detail {

/// Envy-freeness up to c items of one matrix: for every ordered pair
/// (i, j), v_i(A_i) >= v_i(A_j) - (sum of the c largest v_i-values in A_j).
inline ProfileReport check_ef_profile(const RationalMatrix& matrix,
                                      const Allocation& allocation, int c) {
  ProfileReport report;
  report.ok = true;
  const int n = static_cast<int>(allocation.bundles.size());
  for (int i = 0; i < n; ++i) {
    const auto& row = matrix[static_cast<std::size_t>(i)];
    const Rational own =
        bundle_value(row, allocation.bundles[static_cast<std::size_t>(i)]);
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      const auto& other_bundle = allocation.bundles[static_cast<std::size_t>(j)];
      FairnessEntry entry;
      entry.agent = i;
      entry.against = j;
      entry.removal = top_value_items(row, c, other_bundle);
      Rational reduced = bundle_value(row, other_bundle);
      for (int g : entry.removal) reduced -= row[static_cast<std::size_t>(g)];
      entry.ok = own >= reduced;
      if (!entry.ok) {
        entry.deficit = reduced - own;
        entry.removal.clear();
        report.ok = false;
      }
      report.entries.push_back(std::move(entry));
    }
  }
  return report;
}

/// Proportionality up to c items of one matrix: for every agent i,
/// v_i(A_i) >= v_i(M)/n - (sum of the c largest v_i-values outside A_i).
inline ProfileReport check_prop_profile(const RationalMatrix& matrix,
                                        const Allocation& allocation, int c,
                                        int items) {
  ProfileReport report;
  report.ok = true;
  const int n = static_cast<int>(allocation.bundles.size());
  const std::vector<int> assignment = allocation.to_assignment(items);
  for (int i = 0; i < n; ++i) {
    const auto& row = matrix[static_cast<std::size_t>(i)];
    Rational grand = 0;
    for (const Rational& v : row) grand += v;
    std::vector<int> outside;
    outside.reserve(static_cast<std::size_t>(items));
    for (int j = 0; j < items; ++j) {
      if (assignment[static_cast<std::size_t>(j)] != i) outside.push_back(j);
    }
    FairnessEntry entry;
    entry.agent = i;
    entry.removal = top_value_items(row, c, outside);
    Rational need = grand / n;
    for (int g : entry.removal) need -= row[static_cast<std::size_t>(g)];
    const Rational own =
        bundle_value(row, allocation.bundles[static_cast<std::size_t>(i)]);
    entry.ok = own >= need;
    if (!entry.ok) {
      entry.deficit = need - own;
      entry.removal.clear();
      report.ok = false;
    }
    report.entries.push_back(std::move(entry));
  }
  return report;
}

}  // namespace detail

/// Checks one criterion across an explicit list of valuation profiles; the
/// verdict is true only when every profile passes individually.
inline FairnessReport check_multi_fair(
    const std::vector<const RationalMatrix*>& profiles,
    const Allocation& allocation, int items, Criterion criterion, int c,
    Perspective perspective = Perspective::AllProfiles) {
  if (c < 0) throw std::invalid_argument("negative removal budget");
  FairnessReport report;
  report.criterion = criterion;
  report.c = c;
  report.perspective = perspective;
  report.profile_count = static_cast<int>(profiles.size());
  report.verdict = true;
  for (std::size_t p = 0; p < profiles.size(); ++p) {
    ProfileReport pr =
        criterion == Criterion::EnvyFreeUpTo
            ? detail::check_ef_profile(*profiles[p], allocation, c)
            : detail::check_prop_profile(*profiles[p], allocation, c, items);
    pr.profile = static_cast<int>(p);
    report.verdict = report.verdict && pr.ok;
    report.profiles.push_back(std::move(pr));
  }
  return report;
}

/// Checks the allocation of an instance from the chosen perspective:
/// agents only (v), allocator only (u), doubly (v and u), or every profile
/// the instance carries.
inline FairnessReport check_fairness(const Instance& instance,
                                     const Allocation& allocation,
                                     Criterion criterion, int c,
                                     Perspective perspective) {
  std::vector<const RationalMatrix*> profiles;
  switch (perspective) {
    case Perspective::Agents:
      profiles = {&instance.agent_valuations};
      break;
    case Perspective::Allocator:
      profiles = {&instance.allocator_valuations};
      break;
    case Perspective::Doubly:
      profiles = {&instance.agent_valuations, &instance.allocator_valuations};
      break;
    case Perspective::AllProfiles:
      profiles = instance.profiles();
      break;
  }
  return check_multi_fair(profiles, allocation, instance.items, criterion, c,
                          perspective);
}

/// Envy-freeness up to c goods under both matrices ("doubly EF-c").
inline FairnessReport check_ef_c(const Instance& instance,
                                 const Allocation& allocation, int c,
                                 Perspective perspective = Perspective::Doubly) {
  return check_fairness(instance, allocation, Criterion::EnvyFreeUpTo, c,
                        perspective);
}

/// Proportionality up to c goods under both matrices ("doubly PROP-c").
inline FairnessReport check_prop_c(
    const Instance& instance, const Allocation& allocation, int c,
    Perspective perspective = Perspective::Doubly) {
  return check_fairness(instance, allocation, Criterion::ProportionalUpTo, c,
                        perspective);
}

/// The allocator's realized efficiency: sum over agents of the allocator's
/// value for what that agent received.
inline Rational allocator_efficiency(const Instance& instance,
                                     const Allocation& allocation) {
  Rational total = 0;
  for (std::size_t i = 0; i < allocation.bundles.size(); ++i) {
    total += bundle_value(instance.allocator_valuations[i],
                          allocation.bundles[i]);
  }
  return total;
}

}  // namespace dualfair
