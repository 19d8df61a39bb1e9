#pragma once

#include <cstddef>
#include <optional>
#include <queue>
#include <stdexcept>
#include <utility>
#include <vector>

#include "dualfair/rational.hpp"

namespace dualfair {

/// Row relation of a linear constraint.
enum class Relation { LessEq, Equal, GreaterEq };

/// One linear constraint: coeffs . x  (<= | = | >=)  rhs.
struct LinearRow {
  std::vector<Rational> coeffs;
  Relation relation = Relation::LessEq;
  Rational rhs = 0;
};

/// A linear program in maximization form:
///
///   maximize  objective . x + objective_offset
///   subject to rows, and per-variable bounds lower[j] <= x_j <= upper[j]
///
/// Bounds are optional per side; an absent bound means unbounded on that
/// side.  The constant objective_offset does not influence the optimizer,
/// it only shifts the reported objective value (callers that encode a
/// formula with a constant term can keep the reported optimum faithful to
/// the formula).
struct LinearProgram {
  int num_variables = 0;
  std::vector<Rational> objective;
  Rational objective_offset = 0;
  std::vector<LinearRow> rows;
  std::vector<std::optional<Rational>> lower;
  std::vector<std::optional<Rational>> upper;

  /// Creates a program with n variables, zero objective, and the default
  /// box x >= 0 (lower bounds zero, no upper bounds).
  static LinearProgram with_variables(int n) {
    LinearProgram lp;
    lp.num_variables = n;
    lp.objective.assign(static_cast<std::size_t>(n), Rational(0));
    lp.lower.assign(static_cast<std::size_t>(n), Rational(0));
    lp.upper.assign(static_cast<std::size_t>(n), std::nullopt);
    return lp;
  }
};

/// An optimal solution that is a vertex of the feasible region.
///
/// tight_rows lists the constraints satisfied with equality, using this
/// indexing: value i < rows.size() is row i; value rows.size() + 2j is the
/// lower bound of variable j; value rows.size() + 2j + 1 is its upper bound.
/// At a vertex at least num_variables constraints are tight; solving
/// re-verifies that count and the tightness of every listed index.
struct VertexSolution {
  std::vector<Rational> x;
  Rational objective_value = 0;  // includes objective_offset
  std::vector<std::size_t> tight_rows;
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpResult {
  LpStatus status = LpStatus::Infeasible;
  std::optional<VertexSolution> solution;  // engaged iff status == Optimal
};

namespace detail {

/// Simplex tableau over exact rationals.  Row 0 is the reduced-cost row in
/// the "z_j - c_j" convention (optimal when all entries >= 0, entering
/// variable = lowest index with a negative entry, per Bland's rule).  The
/// last column is the right-hand side.
struct Tableau {
  std::vector<std::vector<Rational>> t;  // (rows + 1) x (cols + 1)
  std::vector<int> basis;                // basis[i] = column basic in row i+1
  int cols = 0;

  void pivot(int row, int col) {
    std::vector<Rational>& pr = t[static_cast<std::size_t>(row)];
    const Rational inv = pr[static_cast<std::size_t>(col)];
    for (auto& v : pr) v /= inv;
    for (std::size_t r = 0; r < t.size(); ++r) {
      if (static_cast<int>(r) == row) continue;
      const Rational factor = t[r][static_cast<std::size_t>(col)];
      if (factor == 0) continue;
      for (std::size_t c = 0; c < pr.size(); ++c) {
        if (pr[c] != 0) t[r][c] -= factor * pr[c];
      }
    }
    basis[static_cast<std::size_t>(row - 1)] = col;
  }

  /// Runs Bland-rule pivoting until the reduced-cost row is nonnegative on
  /// the allowed columns.  Returns false when an entering column proves the
  /// program unbounded.  allowed_cols limits the entering scan (used to
  /// freeze artificial columns out of phase two).
  bool optimize(int allowed_cols) {
    const std::size_t rhs = static_cast<std::size_t>(cols);
    for (;;) {
      int entering = -1;
      for (int j = 0; j < allowed_cols; ++j) {
        if (t[0][static_cast<std::size_t>(j)] < 0) {
          entering = j;
          break;  // Bland: lowest eligible index
        }
      }
      if (entering < 0) return true;
      int leave_row = -1;
      Rational best_ratio = 0;
      for (std::size_t r = 1; r < t.size(); ++r) {
        const Rational& a = t[r][static_cast<std::size_t>(entering)];
        if (a <= 0) continue;
        const Rational ratio = t[r][rhs] / a;
        if (leave_row < 0 || ratio < best_ratio ||
            (ratio == best_ratio &&
             basis[r - 1] < basis[static_cast<std::size_t>(leave_row - 1)])) {
          leave_row = static_cast<int>(r);
          best_ratio = ratio;
        }
      }
      if (leave_row < 0) return false;  // unbounded along entering column
      pivot(leave_row, entering);
    }
  }
};

}  // namespace detail

/// Solves the program with a two-phase primal simplex using exact rational
/// pivoting and Bland's anti-cycling rule (the entering variable is always
/// the lowest-index candidate, which also makes the optimizer fully
/// deterministic and fixes the tie-break among optimal vertices).
///
/// The returned solution is always a vertex of the feasible region; the
/// tight-constraint certificate is recomputed by direct substitution before
/// returning.  Variables unbounded on both sides are not supported (every
/// program in this library anchors each variable at a finite bound) and
/// raise std::invalid_argument, as do dimension mismatches.
inline LpResult solve_vertex_optimal(const LinearProgram& lp) {
  const std::size_t n = static_cast<std::size_t>(lp.num_variables);
  if (lp.num_variables < 0 || lp.objective.size() != n || lp.lower.size() != n ||
      lp.upper.size() != n) {
    throw std::invalid_argument("linear program has inconsistent dimensions");
  }
  for (const LinearRow& row : lp.rows) {
    if (row.coeffs.size() != n) {
      throw std::invalid_argument("linear row has wrong coefficient count");
    }
  }

  // Substitute each variable so the transformed variable is >= 0:
  //   x_j = shift_j + sign_j * y_j, with sign +1 when a finite lower bound
  //   anchors the variable and -1 when only a finite upper bound does.
  std::vector<Rational> shift(n);
  std::vector<int> sign(n, 1);
  for (std::size_t j = 0; j < n; ++j) {
    if (lp.lower[j]) {
      shift[j] = *lp.lower[j];
      if (lp.upper[j] && *lp.upper[j] < *lp.lower[j]) {
        return {LpStatus::Infeasible, std::nullopt};
      }
    } else if (lp.upper[j]) {
      shift[j] = *lp.upper[j];
      sign[j] = -1;
    } else {
      throw std::invalid_argument(
          "variable unbounded on both sides is not supported");
    }
  }

  // Transformed constraint list: original rows first, then one row per
  // doubly-bounded variable encoding its upper bound.  Each entry keeps the
  // certificate index it maps back to.
  struct TRow {
    std::vector<Rational> a;
    Relation rel;
    Rational b;
  };
  std::vector<TRow> trows;
  trows.reserve(lp.rows.size() + n);
  for (const LinearRow& row : lp.rows) {
    TRow tr;
    tr.a.assign(n, Rational(0));
    tr.b = row.rhs;
    tr.rel = row.relation;
    for (std::size_t j = 0; j < n; ++j) {
      if (row.coeffs[j] == 0) continue;
      tr.a[j] = sign[j] > 0 ? row.coeffs[j] : -row.coeffs[j];
      tr.b -= row.coeffs[j] * shift[j];
    }
    trows.push_back(std::move(tr));
  }
  for (std::size_t j = 0; j < n; ++j) {
    if (lp.lower[j] && lp.upper[j]) {
      TRow tr;
      tr.a.assign(n, Rational(0));
      tr.a[j] = 1;
      tr.rel = Relation::LessEq;
      tr.b = *lp.upper[j] - *lp.lower[j];
      trows.push_back(std::move(tr));
    }
  }
  // Normalize right-hand sides to be nonnegative.
  for (TRow& tr : trows) {
    if (tr.b < 0) {
      for (auto& v : tr.a) v = -v;
      tr.b = -tr.b;
      if (tr.rel == Relation::LessEq) {
        tr.rel = Relation::GreaterEq;
      } else if (tr.rel == Relation::GreaterEq) {
        tr.rel = Relation::LessEq;
      }
    }
  }

  const int nrows = static_cast<int>(trows.size());
  int nslack = 0, nart = 0;
  for (const TRow& tr : trows) {
    if (tr.rel != Relation::Equal) ++nslack;
    if (tr.rel != Relation::LessEq) ++nart;
  }
  const int struct_cols = static_cast<int>(n);
  const int total_cols = struct_cols + nslack + nart;

  detail::Tableau tab;
  tab.cols = total_cols;
  tab.t.assign(static_cast<std::size_t>(nrows + 1),
               std::vector<Rational>(static_cast<std::size_t>(total_cols + 1),
                                     Rational(0)));
  tab.basis.assign(static_cast<std::size_t>(nrows), -1);

  int next_slack = struct_cols;
  int next_art = struct_cols + nslack;
  for (int i = 0; i < nrows; ++i) {
    const TRow& tr = trows[static_cast<std::size_t>(i)];
    std::vector<Rational>& row = tab.t[static_cast<std::size_t>(i + 1)];
    for (std::size_t j = 0; j < n; ++j) row[j] = tr.a[j];
    row[static_cast<std::size_t>(total_cols)] = tr.b;
    if (tr.rel == Relation::LessEq) {
      row[static_cast<std::size_t>(next_slack)] = 1;
      tab.basis[static_cast<std::size_t>(i)] = next_slack++;
    } else if (tr.rel == Relation::GreaterEq) {
      row[static_cast<std::size_t>(next_slack++)] = -1;
      row[static_cast<std::size_t>(next_art)] = 1;
      tab.basis[static_cast<std::size_t>(i)] = next_art++;
    } else {
      row[static_cast<std::size_t>(next_art)] = 1;
      tab.basis[static_cast<std::size_t>(i)] = next_art++;
    }
  }

  // Phase one: drive the artificial variables to zero.  The reduced-cost
  // row starts as minus the sum of the artificial rows over the real
  // columns and the right-hand side; artificial columns keep reduced cost
  // zero (they are basic) and are excluded from the entering scan for good
  // — once an artificial leaves the basis it is never needed again.
  if (nart > 0) {
    std::vector<Rational>& obj = tab.t[0];
    for (int i = 0; i < nrows; ++i) {
      if (tab.basis[static_cast<std::size_t>(i)] >= struct_cols + nslack) {
        const std::vector<Rational>& row = tab.t[static_cast<std::size_t>(i + 1)];
        for (int c = 0; c < struct_cols + nslack; ++c) {
          obj[static_cast<std::size_t>(c)] -= row[static_cast<std::size_t>(c)];
        }
        obj[static_cast<std::size_t>(total_cols)] -=
            row[static_cast<std::size_t>(total_cols)];
      }
    }
    tab.optimize(struct_cols + nslack);
    if (tab.t[0][static_cast<std::size_t>(total_cols)] != 0) {
      return {LpStatus::Infeasible, std::nullopt};
    }
    // Pivot leftover artificials out of the basis; rows that cannot host a
    // real variable are redundant and get dropped.
    for (int i = nrows; i >= 1; --i) {
      if (tab.basis[static_cast<std::size_t>(i - 1)] < struct_cols + nslack) {
        continue;
      }
      int piv = -1;
      for (int j = 0; j < struct_cols + nslack; ++j) {
        if (tab.t[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] != 0) {
          piv = j;
          break;
        }
      }
      if (piv >= 0) {
        tab.pivot(i, piv);
      } else {
        tab.t.erase(tab.t.begin() + i);
        tab.basis.erase(tab.basis.begin() + (i - 1));
      }
    }
  }

  // Phase two: optimize the real objective over y (constant terms from the
  // substitution are reapplied when reading the solution back).
  {
    std::vector<Rational>& obj = tab.t[0];
    for (auto& v : obj) v = 0;
    for (std::size_t j = 0; j < n; ++j) {
      const Rational cj =
          sign[j] > 0 ? lp.objective[j] : -lp.objective[j];
      obj[j] = -cj;  // z_j - c_j with z_j = 0 before basification
    }
    for (std::size_t i = 0; i + 1 < tab.t.size(); ++i) {
      const int b = tab.basis[i];
      const Rational coeff = obj[static_cast<std::size_t>(b)];
      if (coeff == 0) continue;
      const std::vector<Rational>& row = tab.t[i + 1];
      for (std::size_t c = 0; c < row.size(); ++c) {
        if (row[c] != 0) obj[c] -= coeff * row[c];
      }
    }
    if (!tab.optimize(struct_cols + nslack)) {
      return {LpStatus::Unbounded, std::nullopt};
    }
  }

  // Read the solution back in original coordinates.
  std::vector<Rational> y(n, Rational(0));
  for (std::size_t i = 0; i + 1 < tab.t.size(); ++i) {
    if (tab.basis[i] < struct_cols) {
      y[static_cast<std::size_t>(tab.basis[i])] =
          tab.t[i + 1][static_cast<std::size_t>(total_cols)];
    }
  }
  VertexSolution sol;
  sol.x.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    sol.x[j] = shift[j] + (sign[j] > 0 ? y[j] : -y[j]);
  }
  sol.objective_value = lp.objective_offset;
  for (std::size_t j = 0; j < n; ++j) {
    sol.objective_value += lp.objective[j] * sol.x[j];
  }
  // Recompute the tight set by direct substitution — the certificate never
  // relies on tableau bookkeeping.
  for (std::size_t i = 0; i < lp.rows.size(); ++i) {
    Rational lhs = 0;
    for (std::size_t j = 0; j < n; ++j) lhs += lp.rows[i].coeffs[j] * sol.x[j];
    if (lhs == lp.rows[i].rhs) sol.tight_rows.push_back(i);
  }
  for (std::size_t j = 0; j < n; ++j) {
    if (lp.lower[j] && sol.x[j] == *lp.lower[j]) {
      sol.tight_rows.push_back(lp.rows.size() + 2 * j);
    }
    if (lp.upper[j] && sol.x[j] == *lp.upper[j]) {
      sol.tight_rows.push_back(lp.rows.size() + 2 * j + 1);
    }
  }
  if (sol.tight_rows.size() < n) {
    throw std::logic_error(
        "simplex returned a point with fewer tight constraints than "
        "variables; vertex certificate violated");
  }
  return {LpStatus::Optimal, std::move(sol)};
}

/// Tests whether the rows of the matrix can be split into two blocks such
/// that each block has all entries in {0,1} or all in {0,-1} and every
/// column has at most one nonzero inside each block.  Matrices of this
/// shape are totally unimodular, so polytopes they define with integral
/// right-hand sides have integral vertices.
///
/// The split is found by 2-coloring a conflict graph: two rows conflict
/// when they share a column with nonzeros in both, or carry nonzeros of
/// opposite sign (a sign-uniform block cannot host both).  A mixed-sign row
/// can join no block at all, and any entry outside {-1,0,1} disqualifies
/// the matrix outright.
inline bool is_totally_unimodular_bipartite_form(const RationalMatrix& matrix) {
  const std::size_t nrows = matrix.size();
  std::vector<int> row_sign(nrows, 0);  // +1, -1, or 0 for all-zero
  std::size_t ncols = 0;
  for (const auto& row : matrix) ncols = std::max(ncols, row.size());
  std::vector<std::vector<std::size_t>> col_rows(ncols);
  for (std::size_t r = 0; r < nrows; ++r) {
    bool pos = false, neg = false;
    for (std::size_t c = 0; c < matrix[r].size(); ++c) {
      const Rational& v = matrix[r][c];
      if (v == 0) continue;
      if (v == 1) {
        pos = true;
      } else if (v == -1) {
        neg = true;
      } else {
        return false;  // entry outside {-1, 0, 1}
      }
      col_rows[c].push_back(r);
    }
    if (pos && neg) return false;  // mixed-sign row fits no block
    row_sign[r] = pos ? 1 : (neg ? -1 : 0);
  }

  std::vector<std::vector<std::size_t>> adj(nrows);
  for (const auto& rows_in_col : col_rows) {
    for (std::size_t a = 0; a < rows_in_col.size(); ++a) {
      for (std::size_t b = a + 1; b < rows_in_col.size(); ++b) {
        adj[rows_in_col[a]].push_back(rows_in_col[b]);
        adj[rows_in_col[b]].push_back(rows_in_col[a]);
      }
    }
  }
  for (std::size_t a = 0; a < nrows; ++a) {
    if (row_sign[a] == 0) continue;
    for (std::size_t b = a + 1; b < nrows; ++b) {
      if (row_sign[b] != 0 && row_sign[a] != row_sign[b]) {
        adj[a].push_back(b);
        adj[b].push_back(a);
      }
    }
  }

  std::vector<int> color(nrows, -1);
  for (std::size_t start = 0; start < nrows; ++start) {
    if (color[start] != -1) continue;
    color[start] = 0;
    std::queue<std::size_t> bfs;
    bfs.push(start);
    while (!bfs.empty()) {
      const std::size_t r = bfs.front();
      bfs.pop();
      for (std::size_t s : adj[r]) {
        if (color[s] == -1) {
          color[s] = 1 - color[r];
          bfs.push(s);
        } else if (color[s] == color[r]) {
          return false;
        }
      }
    }
  }
  return true;
}

}  // namespace dualfair
