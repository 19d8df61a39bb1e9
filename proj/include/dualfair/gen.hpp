#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "dualfair/errors.hpp"
#include "dualfair/model.hpp"

namespace dualfair {

/// Families of random instances used by tests and the bench runner.
enum class RandomKind {
  General,   // integer values in [0, max_value]
  Binary,    // values in {0, 1}
  Bivalued,  // per agent and per matrix, two levels p < q drawn from
             // [0, max_value], each item at one of the levels
};

inline RandomKind random_kind_from_string(const std::string& s) {
  if (s == "general") return RandomKind::General;
  if (s == "binary") return RandomKind::Binary;
  if (s == "bivalued") return RandomKind::Bivalued;
  throw FormatError("unknown random instance kind '" + s + "'");
}

namespace detail {

/// Bounded draw that is identical on every platform (the standard
/// distributions are implementation-defined, so they are avoided).
inline std::uint64_t draw(std::mt19937_64& rng, std::uint64_t bound) {
  return bound == 0 ? 0 : rng() % bound;
}

inline std::vector<Rational> random_bivalued_row(std::mt19937_64& rng,
                                                 int items, int max_value) {
  const std::uint64_t range = static_cast<std::uint64_t>(max_value) + 1;
  std::uint64_t a = draw(rng, range);
  std::uint64_t b = draw(rng, range);
  if (a == b) b = (a + 1) % range;  // force two distinct levels when possible
  const Rational low(std::min(a, b));
  const Rational high(std::max(a, b));
  std::vector<Rational> row;
  row.reserve(static_cast<std::size_t>(items));
  for (int j = 0; j < items; ++j) {
    row.push_back(draw(rng, 2) ? high : low);
  }
  return row;
}

inline RationalMatrix random_matrix(std::mt19937_64& rng, RandomKind kind,
                                    int agents, int items, int max_value) {
  RationalMatrix matrix;
  matrix.reserve(static_cast<std::size_t>(agents));
  for (int i = 0; i < agents; ++i) {
    if (kind == RandomKind::Bivalued) {
      matrix.push_back(random_bivalued_row(rng, items, max_value));
      continue;
    }
    std::vector<Rational> row;
    row.reserve(static_cast<std::size_t>(items));
    const std::uint64_t range =
        kind == RandomKind::Binary ? 2 : static_cast<std::uint64_t>(max_value) + 1;
    for (int j = 0; j < items; ++j) {
      row.push_back(Rational(draw(rng, range)));
    }
    matrix.push_back(std::move(row));
  }
  return matrix;
}

}  // namespace detail

/// Deterministic random instance: the same (kind, agents, items, max_value,
/// seed) always produces the same instance, on any platform.
inline Instance random_instance(RandomKind kind, int agents, int items,
                                int max_value, std::uint64_t seed) {
  if (agents < 1 || items < 0 || max_value < 0) {
    throw BadParameters("random instance needs agents >= 1, items >= 0, "
                        "max_value >= 0");
  }
  std::mt19937_64 rng(seed);
  Instance instance;
  instance.agents = agents;
  instance.items = items;
  instance.agent_valuations =
      detail::random_matrix(rng, kind, agents, items, max_value);
  instance.allocator_valuations =
      detail::random_matrix(rng, kind, agents, items, max_value);
  return instance;
}

/// Variant with identical allocator rows (one row drawn, then copied),
/// matching the class the identical-allocator solver requires.
inline Instance random_identical_allocator_instance(RandomKind kind, int agents,
                                                    int items, int max_value,
                                                    std::uint64_t seed) {
  Instance instance = random_instance(kind, agents, items, max_value, seed);
  for (int i = 1; i < agents; ++i) {
    instance.allocator_valuations[static_cast<std::size_t>(i)] =
        instance.allocator_valuations[0];
  }
  return instance;
}

// ---------------------------------------------------------------------------
// Deterministic families with a designed optimum, used to exercise the
// efficiency maximizers and the multi-profile checker on instances whose
// answers are known by construction.
// ---------------------------------------------------------------------------

/// Two agents, m + 2 items built from positive weights e_1..e_m with total
/// x.  Agents value the weights alike and each has one private big item of
/// value x that the other ignores; the allocator only rewards giving each
/// agent the big item its counterpart likes.  The best envy-free-up-to-one
/// efficiency is 2 exactly when the weights split into two halves of equal
/// sum, and at most 1 otherwise.
inline Instance partition_efficiency_instance(
    const std::vector<Rational>& weights) {
  const int m = static_cast<int>(weights.size());
  Rational x = 0;
  for (const Rational& e : weights) {
    if (e <= 0) throw BadParameters("weights must be positive");
    x += e;
  }
  Instance instance;
  instance.agents = 2;
  instance.items = m + 2;
  instance.agent_valuations.assign(
      2, std::vector<Rational>(static_cast<std::size_t>(m) + 2, Rational(0)));
  instance.allocator_valuations = instance.agent_valuations;
  for (int j = 0; j < m; ++j) {
    instance.agent_valuations[0][static_cast<std::size_t>(j)] = weights[j];
    instance.agent_valuations[1][static_cast<std::size_t>(j)] = weights[j];
  }
  instance.agent_valuations[0][static_cast<std::size_t>(m)] = x;
  instance.agent_valuations[1][static_cast<std::size_t>(m) + 1] = x;
  instance.allocator_valuations[0][static_cast<std::size_t>(m) + 1] =
      Rational(1);
  instance.allocator_valuations[1][static_cast<std::size_t>(m)] = Rational(1);
  validate_instance(instance);
  return instance;
}

/// An even number n = 2s of agents sharing s weight groups and n + 2 pool
/// items.  Agents 2i and 2i+1 (0-based) value only group i's weights; every
/// pool item is worth C = (n/2 - 1) * x to all agents except one, and the
/// allocator pays 1 exactly when pool item k goes to agent k.  Under
/// proportionality up to one good the efficiency reaches n exactly when
/// every weight group splits into equal halves.
inline Instance partition_share_instance(const std::vector<Rational>& weights,
                                         int s) {
  if (s < 1) throw BadParameters("need at least one agent pair");
  const int m = static_cast<int>(weights.size());
  const int n = 2 * s;
  const int items = s * m + n + 2;
  Rational x = 0;
  for (const Rational& e : weights) {
    if (e <= 0) throw BadParameters("weights must be positive");
    x += e;
  }
  const Rational big = Rational(n) / 2 - 1;
  const Rational c_value = big * x;
  Instance instance;
  instance.agents = n;
  instance.items = items;
  instance.agent_valuations.assign(
      static_cast<std::size_t>(n),
      std::vector<Rational>(static_cast<std::size_t>(items), Rational(0)));
  instance.allocator_valuations = instance.agent_valuations;
  for (int group = 0; group < s; ++group) {
    for (int k = 0; k < m; ++k) {
      const std::size_t j =
          static_cast<std::size_t>(group) * static_cast<std::size_t>(m) +
          static_cast<std::size_t>(k);
      instance.agent_valuations[static_cast<std::size_t>(2 * group)][j] =
          weights[k];
      instance.agent_valuations[static_cast<std::size_t>(2 * group + 1)][j] =
          weights[k];
    }
  }
  for (int k = 0; k < n + 2; ++k) {
    const std::size_t j = static_cast<std::size_t>(s * m + k);
    for (int i = 0; i < n; ++i) {
      if (k >= n || i != k) {
        instance.agent_valuations[static_cast<std::size_t>(i)][j] = c_value;
      }
    }
    if (k < n) {
      instance.allocator_valuations[static_cast<std::size_t>(k)][j] =
          Rational(1);
    }
  }
  validate_instance(instance);
  return instance;
}

/// One item per vertex, one agent per edge valuing its two endpoints, and
/// a final "sink" agent that values nothing but is the only agent whose
/// holdings the allocator rewards.  Under envy-freeness up to one good the
/// best efficiency equals the size of a maximum independent set of the
/// graph.
inline Instance independent_set_instance(
    int vertices, const std::vector<std::pair<int, int>>& edges) {
  if (vertices < 0) throw BadParameters("vertex count must be nonnegative");
  const int n = static_cast<int>(edges.size()) + 1;
  Instance instance;
  instance.agents = n;
  instance.items = vertices;
  instance.agent_valuations.assign(
      static_cast<std::size_t>(n),
      std::vector<Rational>(static_cast<std::size_t>(vertices), Rational(0)));
  instance.allocator_valuations = instance.agent_valuations;
  for (std::size_t e = 0; e < edges.size(); ++e) {
    const auto [a, b] = edges[e];
    if (a < 0 || b < 0 || a >= vertices || b >= vertices || a == b) {
      throw BadParameters("edge endpoints must be distinct vertices");
    }
    instance.agent_valuations[e][static_cast<std::size_t>(a)] = Rational(1);
    instance.agent_valuations[e][static_cast<std::size_t>(b)] = Rational(1);
  }
  const std::size_t sink = static_cast<std::size_t>(n) - 1;
  for (int j = 0; j < vertices; ++j) {
    instance.allocator_valuations[sink][static_cast<std::size_t>(j)] =
        Rational(1);
  }
  validate_instance(instance);
  return instance;
}

/// Two agents, three items, three identical-row binary profiles arranged
/// so that each profile forbids one pair of items from sharing a bundle.
/// No allocation is envy-free up to one good under all three profiles at
/// once.
inline Instance triple_profile_instance() {
  Instance instance;
  instance.agents = 2;
  instance.items = 3;
  const auto profile = [](int zero_at) {
    std::vector<Rational> row(3, Rational(1));
    row[static_cast<std::size_t>(zero_at)] = Rational(0);
    return RationalMatrix{row, row};
  };
  instance.agent_valuations = profile(2);      // items 0,1 must split
  instance.allocator_valuations = profile(1);  // items 0,2 must split
  instance.extra_valuations.push_back(profile(0));  // items 1,2 must split
  validate_instance(instance);
  return instance;
}

}  // namespace dualfair
