#include "dualfair/linprog.hpp"

#include <gtest/gtest.h>

#include <random>

#include "dualfair/rational.hpp"
#include "test_util.hpp"

using dualfair::FormatError;
using dualfair::Integer;
using dualfair::LinearProgram;
using dualfair::LinearRow;
using dualfair::LpResult;
using dualfair::LpStatus;
using dualfair::parse_rational;
using dualfair::Rational;
using dualfair::rational_ceil;
using dualfair::rational_floor;
using dualfair::RationalMatrix;
using dualfair::rational_to_string;
using dualfair::Relation;
using dualfair::VertexSolution;

namespace {

// Every optimal solution must re-verify: feasible, objective consistent,
// every listed tight constraint actually tight, and at least num_variables
// tight constraints in total.
void expect_valid_vertex(const LinearProgram& lp, const VertexSolution& sol) {
  const std::size_t n = static_cast<std::size_t>(lp.num_variables);
  Rational value = lp.objective_offset;
  for (std::size_t j = 0; j < n; ++j) value += lp.objective[j] * sol.x[j];
  EXPECT_EQ(value, sol.objective_value);
  for (std::size_t i = 0; i < lp.rows.size(); ++i) {
    Rational lhs = 0;
    for (std::size_t j = 0; j < n; ++j) lhs += lp.rows[i].coeffs[j] * sol.x[j];
    switch (lp.rows[i].relation) {
      case Relation::LessEq: EXPECT_LE(lhs, lp.rows[i].rhs); break;
      case Relation::GreaterEq: EXPECT_GE(lhs, lp.rows[i].rhs); break;
      case Relation::Equal: EXPECT_EQ(lhs, lp.rows[i].rhs); break;
    }
  }
  for (std::size_t j = 0; j < n; ++j) {
    if (lp.lower[j]) EXPECT_GE(sol.x[j], *lp.lower[j]);
    if (lp.upper[j]) EXPECT_LE(sol.x[j], *lp.upper[j]);
  }
  EXPECT_GE(sol.tight_rows.size(), n);
  for (std::size_t idx : sol.tight_rows) {
    if (idx < lp.rows.size()) {
      Rational lhs = 0;
      for (std::size_t j = 0; j < n; ++j) {
        lhs += lp.rows[idx].coeffs[j] * sol.x[j];
      }
      EXPECT_EQ(lhs, lp.rows[idx].rhs);
    } else {
      const std::size_t rel = idx - lp.rows.size();
      const std::size_t j = rel / 2;
      if (rel % 2 == 0) {
        EXPECT_EQ(sol.x[j], *lp.lower[j]);
      } else {
        EXPECT_EQ(sol.x[j], *lp.upper[j]);
      }
    }
  }
}

TEST(Rational, ParseAndFormat) {
  EXPECT_EQ(parse_rational("2/4"), Rational(1, 2));
  EXPECT_EQ(parse_rational("-6/4"), Rational(-3, 2));
  EXPECT_EQ(parse_rational("1/-2"), Rational(-1, 2));
  EXPECT_EQ(parse_rational("7"), Rational(7));
  EXPECT_EQ(parse_rational("+3/9"), Rational(1, 3));
  EXPECT_EQ(rational_to_string(Rational(1, 2)), "1/2");
  EXPECT_EQ(rational_to_string(Rational(-5)), "-5");
  EXPECT_EQ(rational_to_string(parse_rational("10/4")), "5/2");
  EXPECT_THROW(parse_rational("1/0"), FormatError);
  EXPECT_THROW(parse_rational(""), FormatError);
  EXPECT_THROW(parse_rational("1.5"), FormatError);
  EXPECT_THROW(parse_rational("a/b"), FormatError);
  EXPECT_THROW(parse_rational("-/2"), FormatError);
}

TEST(Rational, CanonicalInvariant) {
  // Sums and products of canonical values stay canonical: denominators
  // positive and coprime with the numerator.
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    const long long a = static_cast<long long>(rng() % 41) - 20;
    const long long b = 1 + static_cast<long long>(rng() % 20);
    const long long c = static_cast<long long>(rng() % 41) - 20;
    const long long d = 1 + static_cast<long long>(rng() % 20);
    const Rational x(a, b), y(c, d);
    const std::vector<Rational> derived{Rational(x + y), Rational(x - y),
                                        Rational(x * y)};
    for (const Rational& v : derived) {
      EXPECT_GT(denominator(v), 0);
      EXPECT_EQ(gcd(abs(numerator(v)), denominator(v)), 1);
    }
  }
}

TEST(Rational, FloorCeil) {
  EXPECT_EQ(rational_floor(Rational(7, 2)), 3);
  EXPECT_EQ(rational_ceil(Rational(7, 2)), 4);
  EXPECT_EQ(rational_floor(Rational(-7, 2)), -4);
  EXPECT_EQ(rational_ceil(Rational(-7, 2)), -3);
  EXPECT_EQ(rational_floor(Rational(6)), 6);
  EXPECT_EQ(rational_ceil(Rational(6)), 6);
}

TEST(Simplex, SingleBoxedVariable) {
  LinearProgram lp = LinearProgram::with_variables(1);
  lp.objective = {Rational(1)};
  lp.upper[0] = Rational(1);
  const LpResult result = dualfair::solve_vertex_optimal(lp);
  ASSERT_EQ(result.status, LpStatus::Optimal);
  EXPECT_EQ(result.solution->x[0], 1);
  EXPECT_EQ(result.solution->objective_value, 1);
  expect_valid_vertex(lp, *result.solution);
}

TEST(Simplex, TriangleDeterministicVertex) {
  // max x + y over the triangle x + y <= 1, x, y >= 0.  Both (1,0) and
  // (0,1) are optimal; lowest-index entering must land on (1,0).
  LinearProgram lp = LinearProgram::with_variables(2);
  lp.objective = {Rational(1), Rational(1)};
  lp.rows.push_back({{Rational(1), Rational(1)}, Relation::LessEq, Rational(1)});
  const LpResult result = dualfair::solve_vertex_optimal(lp);
  ASSERT_EQ(result.status, LpStatus::Optimal);
  EXPECT_EQ(result.solution->objective_value, 1);
  EXPECT_EQ(result.solution->x[0], 1);
  EXPECT_EQ(result.solution->x[1], 0);
  expect_valid_vertex(lp, *result.solution);
}

TEST(Simplex, EqualityRow) {
  LinearProgram lp = LinearProgram::with_variables(2);
  lp.objective = {Rational(3), Rational(1)};
  lp.rows.push_back({{Rational(1), Rational(1)}, Relation::Equal, Rational(2)});
  lp.upper[0] = Rational(3, 2);
  const LpResult result = dualfair::solve_vertex_optimal(lp);
  ASSERT_EQ(result.status, LpStatus::Optimal);
  EXPECT_EQ(result.solution->x[0], Rational(3, 2));
  EXPECT_EQ(result.solution->x[1], Rational(1, 2));
  EXPECT_EQ(result.solution->objective_value, Rational(5));
  expect_valid_vertex(lp, *result.solution);
}

TEST(Simplex, Infeasible) {
  LinearProgram lp = LinearProgram::with_variables(1);
  lp.upper[0] = Rational(1);
  lp.rows.push_back({{Rational(1)}, Relation::GreaterEq, Rational(2)});
  EXPECT_EQ(dualfair::solve_vertex_optimal(lp).status, LpStatus::Infeasible);
}

TEST(Simplex, InfeasibleCrossedBounds) {
  LinearProgram lp = LinearProgram::with_variables(1);
  lp.lower[0] = Rational(2);
  lp.upper[0] = Rational(1);
  EXPECT_EQ(dualfair::solve_vertex_optimal(lp).status, LpStatus::Infeasible);
}

TEST(Simplex, Unbounded) {
  LinearProgram lp = LinearProgram::with_variables(1);
  lp.objective = {Rational(1)};
  EXPECT_EQ(dualfair::solve_vertex_optimal(lp).status, LpStatus::Unbounded);
}

TEST(Simplex, FreeVariableRejected) {
  LinearProgram lp = LinearProgram::with_variables(1);
  lp.lower[0] = std::nullopt;
  EXPECT_THROW(dualfair::solve_vertex_optimal(lp), std::invalid_argument);
}

TEST(Simplex, DimensionMismatchRejected) {
  LinearProgram lp = LinearProgram::with_variables(2);
  lp.rows.push_back({{Rational(1)}, Relation::LessEq, Rational(1)});
  EXPECT_THROW(dualfair::solve_vertex_optimal(lp), std::invalid_argument);
}

TEST(Simplex, UpperBoundAnchorsUnloweredVariable) {
  // No lower bound, finite upper bound: the mirror substitution must give
  // the right optimum and certificate.
  LinearProgram lp = LinearProgram::with_variables(1);
  lp.lower[0] = std::nullopt;
  lp.upper[0] = Rational(5);
  lp.objective = {Rational(-1)};  // minimize x
  lp.rows.push_back({{Rational(1)}, Relation::GreaterEq, Rational(-2)});
  const LpResult result = dualfair::solve_vertex_optimal(lp);
  ASSERT_EQ(result.status, LpStatus::Optimal);
  EXPECT_EQ(result.solution->x[0], Rational(-2));
  expect_valid_vertex(lp, *result.solution);
}

TEST(Simplex, DegenerateRedundantRows) {
  // The same facet repeated three times plus a fully redundant equality —
  // Bland's rule has to cope with degenerate pivots and redundant rows.
  LinearProgram lp = LinearProgram::with_variables(2);
  lp.objective = {Rational(2), Rational(3)};
  for (int k = 0; k < 3; ++k) {
    lp.rows.push_back(
        {{Rational(1), Rational(1)}, Relation::LessEq, Rational(4)});
  }
  lp.rows.push_back(
      {{Rational(2), Rational(2)}, Relation::Equal, Rational(8)});
  lp.rows.push_back(
      {{Rational(1), Rational(1)}, Relation::GreaterEq, Rational(4)});
  const LpResult result = dualfair::solve_vertex_optimal(lp);
  ASSERT_EQ(result.status, LpStatus::Optimal);
  EXPECT_EQ(result.solution->objective_value, 12);  // all weight on y
  expect_valid_vertex(lp, *result.solution);
}

TEST(Simplex, CyclingProneProgram) {
  // A classic cycling trap for naive pivoting (most-negative rule loops on
  // it); Bland's rule must terminate.  The optimum is cross-checked against
  // the independent vertex-enumeration oracle.
  LinearProgram lp = LinearProgram::with_variables(4);
  lp.objective = {Rational(3, 4), Rational(-150), Rational(1, 50),
                  Rational(-6)};
  lp.rows.push_back({{Rational(1, 4), Rational(-60), Rational(-1, 25),
                      Rational(9)},
                     Relation::LessEq,
                     Rational(0)});
  lp.rows.push_back({{Rational(1, 2), Rational(-90), Rational(-1, 50),
                      Rational(3)},
                     Relation::LessEq,
                     Rational(0)});
  lp.rows.push_back({{Rational(0), Rational(0), Rational(1), Rational(0)},
                     Relation::LessEq, Rational(1)});
  for (int j = 0; j < 4; ++j) lp.upper[j] = Rational(1000);
  const LpResult result = dualfair::solve_vertex_optimal(lp);
  ASSERT_EQ(result.status, LpStatus::Optimal);
  const testutil::LpOracleResult oracle = testutil::lp_oracle(lp);
  ASSERT_TRUE(oracle.feasible);
  EXPECT_EQ(result.solution->objective_value, oracle.optimum);
  expect_valid_vertex(lp, *result.solution);
}

TEST(Simplex, ZeroVariables) {
  LinearProgram lp = LinearProgram::with_variables(0);
  const LpResult result = dualfair::solve_vertex_optimal(lp);
  ASSERT_EQ(result.status, LpStatus::Optimal);
  EXPECT_EQ(result.solution->objective_value, 0);
}

TEST(Simplex, ObjectiveOffsetCarriesThrough) {
  LinearProgram lp = LinearProgram::with_variables(1);
  lp.objective = {Rational(1)};
  lp.objective_offset = Rational(-1, 2);
  lp.upper[0] = Rational(1, 2);
  const LpResult result = dualfair::solve_vertex_optimal(lp);
  ASSERT_EQ(result.status, LpStatus::Optimal);
  EXPECT_EQ(result.solution->objective_value, 0);
}

TEST(Simplex, RandomBatteryMatchesVertexOracle) {
  // Random boxed programs with mixed row relations: status and optimum must
  // match the exhaustive candidate-vertex oracle on every seed.
  std::mt19937_64 rng(20240811);
  int feasible_count = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 3);
    const int nrows = static_cast<int>(rng() % 5);
    LinearProgram lp = LinearProgram::with_variables(n);
    for (int j = 0; j < n; ++j) {
      lp.objective[static_cast<std::size_t>(j)] =
          Rational(static_cast<long long>(rng() % 7) - 3);
      lp.upper[static_cast<std::size_t>(j)] =
          Rational(1 + static_cast<long long>(rng() % 3));
    }
    for (int r = 0; r < nrows; ++r) {
      LinearRow row;
      for (int j = 0; j < n; ++j) {
        row.coeffs.push_back(Rational(static_cast<long long>(rng() % 7) - 3));
      }
      const int rel = static_cast<int>(rng() % 3);
      row.relation = rel == 0 ? Relation::LessEq
                              : (rel == 1 ? Relation::GreaterEq
                                          : Relation::Equal);
      row.rhs = Rational(static_cast<long long>(rng() % 9) - 4);
      lp.rows.push_back(std::move(row));
    }
    const LpResult result = dualfair::solve_vertex_optimal(lp);
    const testutil::LpOracleResult oracle = testutil::lp_oracle(lp);
    ASSERT_NE(result.status, LpStatus::Unbounded);  // fully boxed
    if (oracle.feasible) {
      ASSERT_EQ(result.status, LpStatus::Optimal) << "trial " << trial;
      EXPECT_EQ(result.solution->objective_value, oracle.optimum)
          << "trial " << trial;
      expect_valid_vertex(lp, *result.solution);
      ++feasible_count;
    } else {
      EXPECT_EQ(result.status, LpStatus::Infeasible) << "trial " << trial;
    }
  }
  EXPECT_GT(feasible_count, 50);  // the battery must exercise real solves
}

TEST(TumForm, AcceptsAssignmentStyleMatrix) {
  // Fairness rows (one -1 block) stacked on capacity rows (one +1 block):
  // the shape used by the binary-valuation welfare program.
  RationalMatrix m = testutil::mat({
      {-1, -1, 0, 0, 0, 0},
      {0, 0, 0, -1, 0, -1},
      {1, 0, 0, 1, 0, 0},
      {0, 1, 0, 0, 1, 0},
      {0, 0, 1, 0, 0, 1},
  });
  EXPECT_TRUE(dualfair::is_totally_unimodular_bipartite_form(m));
}

TEST(TumForm, AcceptsTrivialMatrices) {
  EXPECT_TRUE(dualfair::is_totally_unimodular_bipartite_form({}));
  EXPECT_TRUE(dualfair::is_totally_unimodular_bipartite_form(
      testutil::mat({{1}})));
  EXPECT_TRUE(dualfair::is_totally_unimodular_bipartite_form(
      testutil::mat({{0, 0}, {0, 0}})));
}

TEST(TumForm, TwoRowsSharingColumnsSplitAcrossBlocks) {
  // Two rows doubling up a column can always be separated into different
  // blocks, so this is still in the accepted form.
  EXPECT_TRUE(dualfair::is_totally_unimodular_bipartite_form(
      testutil::mat({{1, 1}, {1, 1}})));
}

TEST(TumForm, RejectsMixedSignRow) {
  // A row with both signs fits neither a {0,1} nor a {0,-1} block; no
  // split works.
  EXPECT_FALSE(dualfair::is_totally_unimodular_bipartite_form(
      testutil::mat({{1, -1}, {1, 1}})));
}

TEST(TumForm, RejectsOddConflictCycle) {
  // Three rows pairwise sharing a column cannot be 2-blocked.
  EXPECT_FALSE(dualfair::is_totally_unimodular_bipartite_form(
      testutil::mat({{1, 0, 1}, {1, 1, 0}, {0, 1, 1}})));
}

TEST(TumForm, RejectsEntriesOutsideUnitRange) {
  EXPECT_FALSE(dualfair::is_totally_unimodular_bipartite_form(
      testutil::mat({{2, 0}, {0, 1}})));
}

}  // namespace
