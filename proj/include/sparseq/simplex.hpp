#pragma once

// Dense two-phase simplex over floating point with Bland's rule. Small and
// deterministic; sized for the desk-scale distribution polytopes this library
// solves (at most a few tens of thousands of variables, a few dozen rows).
// Every solve re-checks the primal residuals of the returned point against
// the original constraints and fails loudly instead of returning a point
// that merely looks optimal in the tableau.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "sparseq/budget.hpp"

namespace sparseq {

inline constexpr double kLpPivotTol = 1e-9;
inline constexpr double kLpResidualTol = 1e-7;

struct LinearProgram {
  enum class Relation { LessEq, Equal };
  struct Row {
    std::vector<double> coeffs;
    Relation rel = Relation::LessEq;
    double rhs = 0.0;
  };

  std::size_t num_vars = 0;
  std::vector<double> objective;  // minimized; empty means pure feasibility
  std::vector<Row> rows;

  void add_row(std::vector<double> coeffs, Relation rel, double rhs) {
    if (coeffs.size() != num_vars)
      throw std::invalid_argument("LinearProgram: row length != num_vars");
    rows.push_back(Row{std::move(coeffs), rel, rhs});
  }
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpSolution {
  LpStatus status = LpStatus::Infeasible;
  std::vector<double> x;
  double objective_value = 0.0;
  double max_residual = 0.0;
};

namespace detail {

class SimplexTableau {
 public:
  // Columns: structural vars, then slack/surplus, then artificials, then rhs.
  SimplexTableau(const LinearProgram& lp) : lp_(lp) {
    const std::size_t r = lp.rows.size();
    n_struct_ = lp.num_vars;
    // Count auxiliary columns. Rows are normalized to rhs >= 0 first; a
    // LessEq row with negative rhs becomes GreaterEq after negation.
    std::vector<int> kind(r);  // 0: <= (slack), 1: >= (surplus+artificial), 2: = (artificial)
    std::size_t n_slack = 0, n_art = 0;
    for (std::size_t i = 0; i < r; ++i) {
      const bool neg = lp.rows[i].rhs < 0.0;
      if (lp.rows[i].rel == LinearProgram::Relation::Equal) {
        kind[i] = 2;
        ++n_art;
      } else if (!neg) {
        kind[i] = 0;
        ++n_slack;
      } else {
        kind[i] = 1;
        ++n_slack;
        ++n_art;
      }
    }
    n_aux_ = n_slack;
    n_art_ = n_art;
    cols_ = n_struct_ + n_aux_ + n_art_ + 1;
    tab_.assign(r, std::vector<double>(cols_, 0.0));
    basis_.assign(r, 0);

    std::size_t next_aux = n_struct_;
    std::size_t next_art = n_struct_ + n_aux_;
    for (std::size_t i = 0; i < r; ++i) {
      const double sign = lp.rows[i].rhs < 0.0 ? -1.0 : 1.0;
      for (std::size_t j = 0; j < n_struct_; ++j)
        tab_[i][j] = sign * lp.rows[i].coeffs[j];
      tab_[i][cols_ - 1] = sign * lp.rows[i].rhs;
      if (kind[i] == 0) {
        tab_[i][next_aux] = 1.0;
        basis_[i] = next_aux++;
      } else if (kind[i] == 1) {
        tab_[i][next_aux] = -1.0;  // surplus
        ++next_aux;
        tab_[i][next_art] = 1.0;
        basis_[i] = next_art++;
      } else {
        tab_[i][next_art] = 1.0;
        basis_[i] = next_art++;
      }
    }
    original_ = tab_;  // pristine standardized system, for basis re-solves
  }

  LpSolution solve() {
    LpSolution sol;
    // Phase 1: minimize the sum of artificials.
    if (n_art_ > 0) {
      std::vector<double> phase1(cols_ - 1, 0.0);
      for (std::size_t j = n_struct_ + n_aux_; j < cols_ - 1; ++j) phase1[j] = 1.0;
      if (!run_phase_status(phase1, /*forbid_artificials=*/false))
        throw SolverError("simplex: phase-1 objective unbounded");
      const std::vector<double> basics = refined_basic_values();
      double art_sum = 0.0;
      for (std::size_t i = 0; i < basis_.size(); ++i)
        if (basis_[i] >= n_struct_ + n_aux_) art_sum += std::max(basics[i], 0.0);
      if (art_sum > kLpResidualTol) {
        sol.status = LpStatus::Infeasible;
        return sol;
      }
      drop_basic_artificials();
    }
    // Phase 2: artificial columns may no longer enter.
    std::vector<double> cost(cols_ - 1, 0.0);
    if (!lp_.objective.empty())
      for (std::size_t j = 0; j < n_struct_; ++j) cost[j] = lp_.objective[j];
    if (!run_phase_status(cost, /*forbid_artificials=*/true)) {
      sol.status = LpStatus::Unbounded;
      return sol;
    }

    sol.status = LpStatus::Optimal;
    sol.x.assign(n_struct_, 0.0);
    const std::vector<double> basics = refined_basic_values();
    for (std::size_t i = 0; i < basis_.size(); ++i)
      if (basis_[i] < n_struct_) sol.x[basis_[i]] = basics[i];
    sol.objective_value = 0.0;
    if (!lp_.objective.empty())
      for (std::size_t j = 0; j < n_struct_; ++j)
        sol.objective_value += lp_.objective[j] * sol.x[j];
    sol.max_residual = residual(sol.x);
    if (sol.max_residual > kLpResidualTol)
      throw SolverError("simplex: solution failed the residual certificate (" +
                        std::to_string(sol.max_residual) + ")");
    return sol;
  }

 private:
  // Re-derives the basic variable values from the pristine standardized
  // system via Gauss-Jordan elimination restricted to the basis columns.
  // Pivoting in the tableau accumulates rounding error; the basis itself is
  // exact combinatorial information, so this recovers full precision. Falls
  // back to the (possibly degraded) tableau column if elimination stalls.
  std::vector<double> refined_basic_values() const {
    const std::size_t r = basis_.size();
    std::vector<std::vector<double>> aug(original_.size(), std::vector<double>(r + 1));
    for (std::size_t i = 0; i < original_.size(); ++i) {
      for (std::size_t b = 0; b < r; ++b) aug[i][b] = original_[i][basis_[b]];
      aug[i][r] = original_[i][cols_ - 1];
    }
    std::vector<std::ptrdiff_t> pivot_row_of_col(r, -1);
    std::size_t rank = 0;
    for (std::size_t col = 0; col < r && rank < aug.size(); ++col) {
      std::size_t best = rank;
      for (std::size_t i = rank; i < aug.size(); ++i)
        if (std::abs(aug[i][col]) > std::abs(aug[best][col])) best = i;
      if (std::abs(aug[best][col]) < 1e-12) continue;
      std::swap(aug[rank], aug[best]);
      const double piv = aug[rank][col];
      for (double& v : aug[rank]) v /= piv;
      for (std::size_t i = 0; i < aug.size(); ++i) {
        if (i == rank) continue;
        const double f = aug[i][col];
        if (f == 0.0) continue;
        for (std::size_t j = col; j <= r; ++j) aug[i][j] -= f * aug[rank][j];
      }
      pivot_row_of_col[col] = static_cast<std::ptrdiff_t>(rank);
      ++rank;
    }
    std::vector<double> values(r);
    for (std::size_t b = 0; b < r; ++b) {
      if (pivot_row_of_col[b] >= 0)
        values[b] = aug[static_cast<std::size_t>(pivot_row_of_col[b])][r];
      else
        values[b] = tab_[b][cols_ - 1];  // basis_[b] is row b's basic variable
    }
    return values;
  }

  bool run_phase_status(const std::vector<double>& cost, bool forbid_artificials) {
    const std::size_t r = tab_.size();
    const std::size_t art_begin = n_struct_ + n_aux_;
    // Reduced costs maintained directly: z_j = c_j - c_B * B^-1 A_j.
    std::vector<double> reduced(cols_ - 1);
    auto recompute_reduced = [&]() {
      for (std::size_t j = 0; j < cols_ - 1; ++j) {
        double z = cost[j];
        for (std::size_t i = 0; i < r; ++i) z -= cost[basis_[i]] * tab_[i][j];
        reduced[j] = z;
      }
    };
    recompute_reduced();

    const std::size_t max_iter = 2000 + 200 * (r + cols_);
    for (std::size_t iter = 0; iter < max_iter; ++iter) {
      // Bland: entering column is the lowest index with negative reduced cost.
      std::size_t enter = cols_ - 1;
      for (std::size_t j = 0; j < cols_ - 1; ++j) {
        if (forbid_artificials && j >= art_begin) break;
        if (reduced[j] < -kLpPivotTol && !is_basic(j)) {
          enter = j;
          break;
        }
      }
      if (enter == cols_ - 1) return true;  // optimal

      // Ratio test; ties by smallest basis variable index (Bland).
      std::size_t leave = r;
      double best_ratio = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < r; ++i) {
        if (tab_[i][enter] > kLpPivotTol) {
          const double ratio = tab_[i][cols_ - 1] / tab_[i][enter];
          if (ratio < best_ratio - kLpPivotTol ||
              (ratio < best_ratio + kLpPivotTol &&
               (leave == r || basis_[i] < basis_[leave]))) {
            best_ratio = ratio;
            leave = i;
          }
        }
      }
      if (leave == r) return false;  // unbounded direction

      pivot(leave, enter);
      recompute_reduced();
    }
    throw SolverError("simplex: iteration limit exceeded");
  }

  // Pivots zero-valued artificials out of the basis so phase 2 cannot grow
  // them again; rows where that is impossible are redundant and removed.
  void drop_basic_artificials() {
    const std::size_t art_begin = n_struct_ + n_aux_;
    for (std::size_t i = tab_.size(); i-- > 0;) {
      if (basis_[i] < art_begin) continue;
      std::size_t enter = art_begin;
      for (std::size_t j = 0; j < art_begin; ++j) {
        if (std::abs(tab_[i][j]) > kLpPivotTol) {
          enter = j;
          break;
        }
      }
      if (enter < art_begin) {
        pivot(i, enter);
      } else {
        tab_.erase(tab_.begin() + static_cast<std::ptrdiff_t>(i));
        basis_.erase(basis_.begin() + static_cast<std::ptrdiff_t>(i));
      }
    }
  }

  bool is_basic(std::size_t col) const {
    for (std::size_t b : basis_)
      if (b == col) return true;
    return false;
  }

  void pivot(std::size_t row, std::size_t col) {
    const double piv = tab_[row][col];
    for (std::size_t j = 0; j < cols_; ++j) tab_[row][j] /= piv;
    for (std::size_t i = 0; i < tab_.size(); ++i) {
      if (i == row) continue;
      const double factor = tab_[i][col];
      if (factor == 0.0) continue;
      for (std::size_t j = 0; j < cols_; ++j) tab_[i][j] -= factor * tab_[row][j];
    }
    basis_[row] = col;
  }

  double residual(const std::vector<double>& x) const {
    double worst = 0.0;
    for (double v : x) worst = std::max(worst, -v);
    for (const auto& row : lp_.rows) {
      double lhs = 0.0;
      for (std::size_t j = 0; j < n_struct_; ++j) lhs += row.coeffs[j] * x[j];
      const double gap = row.rel == LinearProgram::Relation::Equal
                             ? std::abs(lhs - row.rhs)
                             : std::max(0.0, lhs - row.rhs);
      worst = std::max(worst, gap);
    }
    return worst;
  }

  const LinearProgram& lp_;
  std::vector<std::vector<double>> tab_;
  std::vector<std::vector<double>> original_;
  std::vector<std::size_t> basis_;
  std::size_t n_struct_ = 0, n_aux_ = 0, n_art_ = 0, cols_ = 0;
};

}  // namespace detail

/// Solves min c'x subject to the rows and x >= 0. The returned point is a
/// basic feasible solution, so at most rows.size() entries are nonzero.
inline LpSolution solve_lp(const LinearProgram& lp) {
  if (!lp.objective.empty() && lp.objective.size() != lp.num_vars)
    throw std::invalid_argument("solve_lp: objective length != num_vars");
  detail::SimplexTableau tableau(lp);
  return tableau.solve();
}

}  // namespace sparseq
