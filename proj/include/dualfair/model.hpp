#pragma once

#include <algorithm>
#include <array>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "dualfair/errors.hpp"
#include "dualfair/rational.hpp"

namespace dualfair {

using Json = nlohmann::ordered_json;

/// Structural classes a valuation matrix can belong to.  `General` always
/// holds; the others are checked against the entries.
enum class ValuationClass {
  General,
  Binary,                // every entry 0 or 1
  PersonalizedBivalued,  // every row takes at most two distinct values
  IdenticalAllocator,    // all rows equal
};

inline std::string to_string(ValuationClass c) {
  switch (c) {
    case ValuationClass::General: return "general";
    case ValuationClass::Binary: return "binary";
    case ValuationClass::PersonalizedBivalued: return "personalized_bivalued";
    case ValuationClass::IdenticalAllocator: return "identical_allocator";
  }
  return "general";
}

inline ValuationClass valuation_class_from_string(const std::string& s) {
  if (s == "general") return ValuationClass::General;
  if (s == "binary") return ValuationClass::Binary;
  if (s == "personalized_bivalued") return ValuationClass::PersonalizedBivalued;
  if (s == "identical_allocator") return ValuationClass::IdenticalAllocator;
  throw FormatError("unknown valuation class tag '" + s + "'");
}

/// Checks whether every entry of the matrix satisfies the class predicate.
inline bool matrix_in_class(const RationalMatrix& matrix, ValuationClass c) {
  switch (c) {
    case ValuationClass::General:
      return true;
    case ValuationClass::Binary:
      for (const auto& row : matrix) {
        for (const auto& v : row) {
          if (v != 0 && v != 1) return false;
        }
      }
      return true;
    case ValuationClass::PersonalizedBivalued:
      for (const auto& row : matrix) {
        std::set<Rational> distinct(row.begin(), row.end());
        if (distinct.size() > 2) return false;
      }
      return true;
    case ValuationClass::IdenticalAllocator:
      for (std::size_t i = 1; i < matrix.size(); ++i) {
        if (matrix[i] != matrix[0]) return false;
      }
      return true;
  }
  return false;
}

/// An instance of the allocation problem: n agents, m indivisible items,
/// the agents' valuation matrix v and the allocator's valuation matrix u
/// (both n x m, all entries nonnegative).  Additional full valuation
/// profiles beyond these two can ride along in extra_valuations for
/// multi-profile questions.
struct Instance {
  int agents = 0;
  int items = 0;
  RationalMatrix agent_valuations;             // v, n x m
  RationalMatrix allocator_valuations;         // u, n x m
  std::vector<RationalMatrix> extra_valuations;
  std::optional<ValuationClass> agent_tag;      // declared, validated on parse
  std::optional<ValuationClass> allocator_tag;

  /// All valuation profiles in order: v, u, then any extras.
  std::vector<const RationalMatrix*> profiles() const {
    std::vector<const RationalMatrix*> out{&agent_valuations,
                                           &allocator_valuations};
    for (const auto& w : extra_valuations) out.push_back(&w);
    return out;
  }
};

/// A complete allocation: bundles[i] holds the item indices of agent i,
/// each bundle sorted ascending, and the bundles partition {0,...,m-1}.
struct Allocation {
  std::vector<std::vector<int>> bundles;

  /// Builds an allocation from an assignment vector (agent_of_item[j] = the
  /// agent receiving item j).
  static Allocation from_assignment(const std::vector<int>& agent_of_item,
                                    int agents) {
    Allocation a;
    a.bundles.assign(static_cast<std::size_t>(agents), {});
    for (std::size_t j = 0; j < agent_of_item.size(); ++j) {
      a.bundles[static_cast<std::size_t>(agent_of_item[j])].push_back(
          static_cast<int>(j));
    }
    return a;
  }

  /// Inverse of from_assignment.  Requires a valid partition.
  std::vector<int> to_assignment(int items) const {
    std::vector<int> agent_of_item(static_cast<std::size_t>(items), -1);
    for (std::size_t i = 0; i < bundles.size(); ++i) {
      for (int j : bundles[i]) {
        agent_of_item[static_cast<std::size_t>(j)] = static_cast<int>(i);
      }
    }
    return agent_of_item;
  }
};

/// Throws ValidationError unless the allocation is a partition of
/// {0,...,items-1} into exactly `agents` bundles with ascending indices.
inline void validate_allocation(const Allocation& allocation, int agents,
                                int items) {
  if (static_cast<int>(allocation.bundles.size()) != agents) {
    throw ValidationError("allocation has " +
                          std::to_string(allocation.bundles.size()) +
                          " bundles for " + std::to_string(agents) + " agents");
  }
  std::vector<int> seen(static_cast<std::size_t>(items), 0);
  for (const auto& bundle : allocation.bundles) {
    for (std::size_t k = 0; k < bundle.size(); ++k) {
      const int j = bundle[k];
      if (j < 0 || j >= items) {
        throw ValidationError("item index " + std::to_string(j) +
                              " out of range");
      }
      if (k > 0 && bundle[k - 1] >= j) {
        throw ValidationError("bundle indices must be strictly ascending");
      }
      if (seen[static_cast<std::size_t>(j)]++) {
        throw ValidationError("item " + std::to_string(j) +
                              " allocated more than once");
      }
    }
  }
  for (int j = 0; j < items; ++j) {
    if (!seen[static_cast<std::size_t>(j)]) {
      throw ValidationError("item " + std::to_string(j) + " left unallocated");
    }
  }
}

namespace detail {

inline void validate_matrix(const RationalMatrix& matrix, int agents,
                            int items, const std::string& name) {
  if (static_cast<int>(matrix.size()) != agents) {
    throw ValidationError(name + " must have one row per agent");
  }
  for (const auto& row : matrix) {
    if (static_cast<int>(row.size()) != items) {
      throw ValidationError(name + " row has wrong length");
    }
    for (const auto& v : row) {
      if (v < 0) throw ValidationError(name + " entries must be nonnegative");
    }
  }
}

}  // namespace detail

/// Throws unless dimensions, nonnegativity, and any declared class tags all
/// hold.
inline void validate_instance(const Instance& instance) {
  if (instance.agents < 1) throw ValidationError("need at least one agent");
  if (instance.items < 0) throw ValidationError("negative item count");
  detail::validate_matrix(instance.agent_valuations, instance.agents,
                          instance.items, "agent_valuations");
  detail::validate_matrix(instance.allocator_valuations, instance.agents,
                          instance.items, "allocator_valuations");
  for (const auto& w : instance.extra_valuations) {
    detail::validate_matrix(w, instance.agents, instance.items,
                            "extra_valuations");
  }
  if (instance.agent_tag &&
      !matrix_in_class(instance.agent_valuations, *instance.agent_tag)) {
    throw ValidationError("agent_valuations do not satisfy declared tag '" +
                          to_string(*instance.agent_tag) + "'");
  }
  if (instance.allocator_tag &&
      !matrix_in_class(instance.allocator_valuations,
                       *instance.allocator_tag)) {
    throw ValidationError(
        "allocator_valuations do not satisfy declared tag '" +
        to_string(*instance.allocator_tag) + "'");
  }
}

/// Computed class membership of the two matrices (every class that holds,
/// regardless of declared tags).
struct InstanceClasses {
  std::vector<ValuationClass> agent_classes;
  std::vector<ValuationClass> allocator_classes;
};

inline InstanceClasses classify(const Instance& instance) {
  InstanceClasses out;
  const std::array<ValuationClass, 4> all = {
      ValuationClass::General, ValuationClass::Binary,
      ValuationClass::PersonalizedBivalued, ValuationClass::IdenticalAllocator};
  for (ValuationClass c : all) {
    if (matrix_in_class(instance.agent_valuations, c)) {
      out.agent_classes.push_back(c);
    }
    if (matrix_in_class(instance.allocator_valuations, c)) {
      out.allocator_classes.push_back(c);
    }
  }
  return out;
}

/// The low/high structure of one agent's two valuation rows when both
/// matrices are personalized bi-valued.  Items fall into four disjoint
/// classes by (agent row high?, allocator row high?):
///   classes[0]: high/high   classes[1]: high/low
///   classes[2]: low/high    classes[3]: low/low
/// For a constant row the low and high values coincide and every item
/// counts as high.
struct BivaluedPartition {
  Rational agent_low, agent_high;          // p, q of the agent's v-row
  Rational allocator_low, allocator_high;  // p, q of the agent's u-row
  std::array<std::vector<int>, 4> classes;
};

namespace detail {

/// Low/high values of one row (low == high for constant rows).
inline std::pair<Rational, Rational> row_levels(
    const std::vector<Rational>& row, int agent) {
  std::set<Rational> distinct(row.begin(), row.end());
  if (distinct.size() > 2) {
    throw UnsupportedInstance("row of agent " + std::to_string(agent) +
                              " takes more than two distinct values");
  }
  if (distinct.empty()) return {Rational(0), Rational(0)};
  return {*distinct.begin(), *distinct.rbegin()};
}

}  // namespace detail

/// Computes the four-way item partition for one agent.  Both matrices must
/// be personalized bi-valued (else UnsupportedInstance).
inline BivaluedPartition bivalued_partition(const Instance& instance,
                                            int agent) {
  const auto& vrow =
      instance.agent_valuations[static_cast<std::size_t>(agent)];
  const auto& urow =
      instance.allocator_valuations[static_cast<std::size_t>(agent)];
  BivaluedPartition part;
  std::tie(part.agent_low, part.agent_high) = detail::row_levels(vrow, agent);
  std::tie(part.allocator_low, part.allocator_high) =
      detail::row_levels(urow, agent);
  for (int j = 0; j < instance.items; ++j) {
    const bool v_high = vrow[static_cast<std::size_t>(j)] == part.agent_high;
    const bool u_high = urow[static_cast<std::size_t>(j)] == part.allocator_high;
    const int k = v_high ? (u_high ? 0 : 1) : (u_high ? 2 : 3);
    part.classes[static_cast<std::size_t>(k)].push_back(j);
  }
  return part;
}

// ---------------------------------------------------------------------------
// JSON input/output
//
// Instance files look like:
//   {
//     "agents": 2,
//     "items": 3,
//     "agent_valuations": [[2, 1, 0], [0, 1, 2]],
//     "allocator_valuations": [[0, 2, 1], [1, 2, 0]],
//     "tags": {"agent_valuations": "binary"},          // optional
//     "extra_valuations": [[[0, 1, 1], [0, 1, 1]]]     // optional
//   }
// Matrix entries are JSON integers or strings "p/q"; floating-point numbers
// are rejected to keep every value exact.  Allocations are
//   {"bundles": [[0, 2], [1]]}
// with ascending indices inside each bundle.
// ---------------------------------------------------------------------------

inline Rational rational_from_json(const Json& value) {
  if (value.is_number_integer()) {
    return Rational(static_cast<long long>(value.get<long long>()));
  }
  if (value.is_string()) {
    return parse_rational(value.get<std::string>());
  }
  throw FormatError(
      "matrix entries must be integers or \"p/q\" strings, got: " +
      value.dump());
}

inline Json rational_to_json(const Rational& value) {
  if (denominator(value) == 1) {
    const Integer& num = numerator(value);
    // Stay inside the integer range JSON readers handle exactly.
    if (num >= -(Integer(1) << 53) && num <= (Integer(1) << 53)) {
      return Json(num.convert_to<long long>());
    }
  }
  return Json(rational_to_string(value));
}

namespace detail {

inline RationalMatrix matrix_from_json(const Json& value,
                                       const std::string& name) {
  if (!value.is_array()) throw FormatError(name + " must be an array of rows");
  RationalMatrix matrix;
  for (const auto& row : value) {
    if (!row.is_array()) throw FormatError(name + " rows must be arrays");
    std::vector<Rational> out;
    out.reserve(row.size());
    for (const auto& entry : row) out.push_back(rational_from_json(entry));
    matrix.push_back(std::move(out));
  }
  return matrix;
}

inline Json matrix_to_json(const RationalMatrix& matrix) {
  Json rows = Json::array();
  for (const auto& row : matrix) {
    Json r = Json::array();
    for (const auto& v : row) r.push_back(rational_to_json(v));
    rows.push_back(std::move(r));
  }
  return rows;
}

}  // namespace detail

/// Parses and fully validates an instance from JSON.
inline Instance instance_from_json(const Json& j) {
  if (!j.is_object()) throw FormatError("instance must be a JSON object");
  for (const auto& key : {"agents", "items", "agent_valuations",
                          "allocator_valuations"}) {
    if (!j.contains(key)) {
      throw FormatError(std::string("instance missing field '") + key + "'");
    }
  }
  Instance instance;
  if (!j["agents"].is_number_integer() || !j["items"].is_number_integer()) {
    throw FormatError("agents and items must be integers");
  }
  instance.agents = j["agents"].get<int>();
  instance.items = j["items"].get<int>();
  instance.agent_valuations =
      detail::matrix_from_json(j["agent_valuations"], "agent_valuations");
  instance.allocator_valuations = detail::matrix_from_json(
      j["allocator_valuations"], "allocator_valuations");
  if (j.contains("extra_valuations")) {
    if (!j["extra_valuations"].is_array()) {
      throw FormatError("extra_valuations must be an array of matrices");
    }
    for (const auto& w : j["extra_valuations"]) {
      instance.extra_valuations.push_back(
          detail::matrix_from_json(w, "extra_valuations"));
    }
  }
  if (j.contains("tags")) {
    const Json& tags = j["tags"];
    if (!tags.is_object()) throw FormatError("tags must be an object");
    if (tags.contains("agent_valuations")) {
      instance.agent_tag = valuation_class_from_string(
          tags["agent_valuations"].get<std::string>());
    }
    if (tags.contains("allocator_valuations")) {
      instance.allocator_tag = valuation_class_from_string(
          tags["allocator_valuations"].get<std::string>());
    }
  }
  validate_instance(instance);
  return instance;
}

inline Instance parse_instance_text(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw FormatError(std::string("invalid JSON: ") + e.what());
  }
  return instance_from_json(j);
}

inline Json instance_to_json(const Instance& instance) {
  Json j;
  j["agents"] = instance.agents;
  j["items"] = instance.items;
  j["agent_valuations"] = detail::matrix_to_json(instance.agent_valuations);
  j["allocator_valuations"] =
      detail::matrix_to_json(instance.allocator_valuations);
  if (!instance.extra_valuations.empty()) {
    Json extras = Json::array();
    for (const auto& w : instance.extra_valuations) {
      extras.push_back(detail::matrix_to_json(w));
    }
    j["extra_valuations"] = std::move(extras);
  }
  if (instance.agent_tag || instance.allocator_tag) {
    Json tags;
    if (instance.agent_tag) {
      tags["agent_valuations"] = to_string(*instance.agent_tag);
    }
    if (instance.allocator_tag) {
      tags["allocator_valuations"] = to_string(*instance.allocator_tag);
    }
    j["tags"] = std::move(tags);
  }
  return j;
}

/// Parses an allocation ({"bundles": [[...], ...]}) and validates it
/// against the given instance dimensions.
inline Allocation allocation_from_json(const Json& j, int agents, int items) {
  if (!j.is_object() || !j.contains("bundles") || !j["bundles"].is_array()) {
    throw FormatError("allocation must be an object with a 'bundles' array");
  }
  Allocation allocation;
  for (const auto& bundle : j["bundles"]) {
    if (!bundle.is_array()) throw FormatError("bundles must be arrays");
    std::vector<int> out;
    for (const auto& item : bundle) {
      if (!item.is_number_integer()) {
        throw FormatError("bundle entries must be integer item indices");
      }
      out.push_back(item.get<int>());
    }
    allocation.bundles.push_back(std::move(out));
  }
  validate_allocation(allocation, agents, items);
  return allocation;
}

inline Json allocation_to_json(const Allocation& allocation) {
  Json bundles = Json::array();
  for (const auto& bundle : allocation.bundles) bundles.push_back(bundle);
  Json j;
  j["bundles"] = std::move(bundles);
  return j;
}

/// Value of a bundle under one valuation row.
inline Rational bundle_value(const std::vector<Rational>& row,
                             const std::vector<int>& bundle) {
  Rational total = 0;
  for (int j : bundle) total += row[static_cast<std::size_t>(j)];
  return total;
}

}  // namespace dualfair
