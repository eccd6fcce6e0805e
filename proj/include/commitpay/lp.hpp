#ifndef COMMITPAY_LP_HPP
#define COMMITPAY_LP_HPP

#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "commitpay/errors.hpp"
#include "commitpay/rational.hpp"

namespace commitpay {

enum class Relation { LessEqual, GreaterEqual, Equal };

template <typename Scalar>
struct LinearTerm {
  int variable;
  Scalar coefficient;
};

template <typename Scalar>
struct LinearConstraint {
  std::vector<LinearTerm<Scalar>> terms;
  Relation relation;
  Scalar rhs;
  std::string name;
};

/// Maximization LP with sparse rows. Variables default to the bound x >= 0;
/// pass `std::nullopt` as the lower bound for a free variable.
template <typename Scalar>
class BasicLinearProgram {
 public:
  int add_variable(std::string name, std::optional<Scalar> lower = Scalar(0),
                   std::optional<Scalar> upper = std::nullopt) {
    if (lower && upper && *upper < *lower)
      throw SchemaError("variable " + name + " has an empty bound interval");
    names_.push_back(std::move(name));
    lower_.push_back(std::move(lower));
    upper_.push_back(std::move(upper));
    objective_.push_back(Scalar(0));
    return static_cast<int>(names_.size()) - 1;
  }

  void set_objective(int variable, Scalar coefficient) {
    objective_.at(variable) = std::move(coefficient);
  }

  void add_constraint(std::vector<LinearTerm<Scalar>> terms, Relation relation, Scalar rhs,
                      std::string name = {}) {
    for (const auto& t : terms) {
      if (t.variable < 0 || t.variable >= variable_count())
        throw SchemaError("constraint " + name + " references an unknown variable");
    }
    constraints_.push_back({std::move(terms), relation, std::move(rhs), std::move(name)});
  }

  int variable_count() const { return static_cast<int>(names_.size()); }
  int constraint_count() const { return static_cast<int>(constraints_.size()); }
  const std::string& variable_name(int j) const { return names_[j]; }
  const std::optional<Scalar>& lower(int j) const { return lower_[j]; }
  const std::optional<Scalar>& upper(int j) const { return upper_[j]; }
  const std::vector<Scalar>& objective() const { return objective_; }
  const std::vector<LinearConstraint<Scalar>>& constraints() const { return constraints_; }

  /// Left-hand side of constraint `i` at `x`.
  Scalar row_value(int i, const VectorX<Scalar>& x) const {
    Scalar v = 0;
    for (const auto& t : constraints_[i].terms) v += t.coefficient * x[t.variable];
    return v;
  }

  Scalar objective_value(const VectorX<Scalar>& x) const {
    Scalar v = 0;
    for (int j = 0; j < variable_count(); ++j) v += objective_[j] * x[j];
    return v;
  }

  /// True iff `x` meets every row and bound exactly.
  bool is_feasible(const VectorX<Scalar>& x) const {
    if (x.size() != variable_count()) return false;
    for (int j = 0; j < variable_count(); ++j) {
      if (lower_[j] && x[j] < *lower_[j]) return false;
      if (upper_[j] && x[j] > *upper_[j]) return false;
    }
    for (int i = 0; i < constraint_count(); ++i) {
      const Scalar lhs = row_value(i, x);
      const auto& c = constraints_[i];
      if (c.relation == Relation::LessEqual && lhs > c.rhs) return false;
      if (c.relation == Relation::GreaterEqual && lhs < c.rhs) return false;
      if (c.relation == Relation::Equal && lhs != c.rhs) return false;
    }
    return true;
  }

 private:
  std::vector<std::string> names_;
  std::vector<std::optional<Scalar>> lower_;
  std::vector<std::optional<Scalar>> upper_;
  std::vector<Scalar> objective_;
  std::vector<LinearConstraint<Scalar>> constraints_;
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

template <typename Scalar>
struct BasicLpSolution {
  LpStatus status = LpStatus::Infeasible;
  VectorX<Scalar> assignment;
  Scalar objective_value = 0;
  /// One multiplier per constraint row (Optimal only).
  VectorX<Scalar> duals;
  /// Improving feasible direction (Unbounded only).
  VectorX<Scalar> ray;
};

namespace detail {

/// Dense two-phase tableau simplex with Bland's smallest-index rule.
/// Requires an exact ordered field for Scalar.
template <typename Scalar>
class TableauSimplex {
 public:
  explicit TableauSimplex(const BasicLinearProgram<Scalar>& lp) : lp_(lp) { build(); }

  BasicLpSolution<Scalar> run() {
    BasicLpSolution<Scalar> out;
    if (!artificials_.empty()) {
      // phase 1: maximize minus the artificial sum
      cost_.setZero(total_cols_);
      for (int col : artificials_) cost_[col] = -1;
      price_out();
      const auto phase1 = iterate(/*allow_artificial=*/true);
      if (phase1 == Step::Unbounded) throw std::logic_error("phase 1 cannot be unbounded");
      if (objective_row_value() != 0) {
        out.status = LpStatus::Infeasible;
        return out;
      }
      expel_artificials();
    }
    cost_ = std_cost_;
    price_out();
    if (iterate(/*allow_artificial=*/false) == Step::Unbounded) {
      out.status = LpStatus::Unbounded;
      out.ray = unbounded_ray();
      return out;
    }
    out.status = LpStatus::Optimal;
    out.assignment = original_point();
    out.objective_value = lp_.objective_value(out.assignment);
    out.duals = row_duals();
    return out;
  }

 private:
  enum class Step { Optimal, Unbounded };

  // Each original variable x_j = offset_j + sum_k sign_k * s_k over its
  // standard-form columns s_k >= 0.
  struct VarMap {
    Scalar offset = 0;
    std::vector<std::pair<int, int>> columns;  // (column, sign)
  };

  void build() {
    const int n = lp_.variable_count();
    maps_.resize(n);
    std_cols_ = 0;
    struct ExtraRow {
      int column;
      Scalar rhs;
    };
    std::vector<ExtraRow> upper_rows;
    for (int j = 0; j < n; ++j) {
      const auto& lo = lp_.lower(j);
      const auto& hi = lp_.upper(j);
      auto& map = maps_[j];
      if (lo) {
        map.offset = *lo;
        map.columns.push_back({std_cols_++, 1});
        if (hi) upper_rows.push_back({map.columns[0].first, *hi - *lo});
      } else if (hi) {
        map.offset = *hi;
        map.columns.push_back({std_cols_++, -1});
      } else {
        map.columns.push_back({std_cols_++, 1});
        map.columns.push_back({std_cols_++, -1});
      }
    }

    const int m_orig = lp_.constraint_count();
    rows_ = m_orig + static_cast<int>(upper_rows.size());
    // Row data in standard-form columns before slack/artificial allocation.
    std::vector<std::vector<Scalar>> coeffs(rows_, std::vector<Scalar>(std_cols_, Scalar(0)));
    std::vector<Scalar> rhs(rows_);
    std::vector<Relation> rel(rows_);
    for (int i = 0; i < m_orig; ++i) {
      const auto& c = lp_.constraints()[i];
      rhs[i] = c.rhs;
      rel[i] = c.relation;
      for (const auto& t : c.terms) {
        const auto& map = maps_[t.variable];
        rhs[i] -= t.coefficient * map.offset;
        for (auto [col, sign] : map.columns) coeffs[i][col] += sign * t.coefficient;
      }
    }
    for (std::size_t k = 0; k < upper_rows.size(); ++k) {
      const int i = m_orig + static_cast<int>(k);
      coeffs[i][upper_rows[k].column] = 1;
      rhs[i] = upper_rows[k].rhs;
      rel[i] = Relation::LessEqual;
    }
    flipped_.assign(rows_, false);
    for (int i = 0; i < rows_; ++i) {
      if (rhs[i] < 0) {
        flipped_[i] = true;
        rhs[i] = -rhs[i];
        for (auto& v : coeffs[i]) v = -v;
        if (rel[i] == Relation::LessEqual)
          rel[i] = Relation::GreaterEqual;
        else if (rel[i] == Relation::GreaterEqual)
          rel[i] = Relation::LessEqual;
      }
    }

    // Column layout: structural | slack/surplus | artificial.
    int next = std_cols_;
    std::vector<int> slack_col(rows_, -1);
    for (int i = 0; i < rows_; ++i)
      if (rel[i] != Relation::Equal) slack_col[i] = next++;
    is_artificial_.assign(next, false);
    identity_col_.assign(rows_, -1);
    for (int i = 0; i < rows_; ++i) {
      if (rel[i] == Relation::LessEqual) {
        identity_col_[i] = slack_col[i];
      } else {
        identity_col_[i] = next++;
        artificials_.push_back(identity_col_[i]);
        is_artificial_.push_back(true);
      }
    }
    total_cols_ = next;
    is_artificial_.resize(total_cols_, false);
    for (int col : artificials_) is_artificial_[col] = true;

    tableau_ = MatrixX<Scalar>::Zero(rows_, total_cols_ + 1);
    basis_.assign(rows_, -1);
    for (int i = 0; i < rows_; ++i) {
      for (int j = 0; j < std_cols_; ++j) tableau_(i, j) = coeffs[i][j];
      if (slack_col[i] >= 0) tableau_(i, slack_col[i]) = rel[i] == Relation::LessEqual ? 1 : -1;
      tableau_(i, identity_col_[i]) = 1;
      tableau_(i, total_cols_) = rhs[i];
      basis_[i] = identity_col_[i];
    }

    std_cost_ = VectorX<Scalar>::Zero(total_cols_);
    for (int j = 0; j < n; ++j)
      for (auto [col, sign] : maps_[j].columns) std_cost_[col] += sign * lp_.objective()[j];
  }

  // Reduced costs r_j = c_j - c_B^T B^{-1} A_j for the current cost vector.
  void price_out() {
    reduced_ = cost_;
    objective_ = 0;
    for (int i = 0; i < rows_; ++i) {
      const Scalar cb = cost_[basis_[i]];
      if (cb == 0) continue;
      for (int j = 0; j < total_cols_; ++j)
        if (tableau_(i, j) != 0) reduced_[j] -= cb * tableau_(i, j);
      objective_ += cb * tableau_(i, total_cols_);
    }
  }

  Scalar objective_row_value() const { return objective_; }

  Step iterate(bool allow_artificial) {
    for (;;) {
      int entering = -1;
      for (int j = 0; j < total_cols_; ++j) {
        if (!allow_artificial && is_artificial_[j]) continue;
        if (reduced_[j] > 0) {
          entering = j;
          break;
        }
      }
      if (entering < 0) return Step::Optimal;
      int leave = -1;
      Scalar best_ratio;
      for (int i = 0; i < rows_; ++i) {
        const Scalar& a = tableau_(i, entering);
        if (a <= 0) continue;
        Scalar ratio = tableau_(i, total_cols_) / a;
        if (leave < 0 || ratio < best_ratio ||
            (ratio == best_ratio && basis_[i] < basis_[leave])) {
          leave = i;
          best_ratio = std::move(ratio);
        }
      }
      if (leave < 0) {
        unbounded_column_ = entering;
        return Step::Unbounded;
      }
      pivot(leave, entering);
    }
  }

  void pivot(int row, int col) {
    const Scalar p = tableau_(row, col);
    for (int j = 0; j <= total_cols_; ++j)
      if (tableau_(row, j) != 0) tableau_(row, j) /= p;
    for (int i = 0; i < rows_; ++i) {
      if (i == row) continue;
      const Scalar f = tableau_(i, col);
      if (f == 0) continue;
      for (int j = 0; j <= total_cols_; ++j)
        if (tableau_(row, j) != 0) tableau_(i, j) -= f * tableau_(row, j);
    }
    const Scalar r = reduced_[col];
    if (r != 0) {
      for (int j = 0; j < total_cols_; ++j)
        if (tableau_(row, j) != 0) reduced_[j] -= r * tableau_(row, j);
      objective_ += r * tableau_(row, total_cols_);
    }
    basis_[row] = col;
  }

  // Pivots zero-valued artificials out of the basis where possible; rows where
  // no pivot exists are linearly dependent and keep a zero artificial.
  void expel_artificials() {
    for (int i = 0; i < rows_; ++i) {
      if (!is_artificial_[basis_[i]]) continue;
      for (int j = 0; j < total_cols_; ++j) {
        if (!is_artificial_[j] && tableau_(i, j) != 0) {
          pivot(i, j);
          break;
        }
      }
    }
  }

  VectorX<Scalar> standard_point() const {
    VectorX<Scalar> s = VectorX<Scalar>::Zero(total_cols_);
    for (int i = 0; i < rows_; ++i) s[basis_[i]] = tableau_(i, total_cols_);
    return s;
  }

  VectorX<Scalar> to_original(const VectorX<Scalar>& s, bool with_offset) const {
    VectorX<Scalar> x(lp_.variable_count());
    for (int j = 0; j < lp_.variable_count(); ++j) {
      x[j] = with_offset ? maps_[j].offset : Scalar(0);
      for (auto [col, sign] : maps_[j].columns) x[j] += sign * s[col];
    }
    return x;
  }

  VectorX<Scalar> original_point() const { return to_original(standard_point(), true); }

  VectorX<Scalar> unbounded_ray() const {
    VectorX<Scalar> d = VectorX<Scalar>::Zero(total_cols_);
    d[unbounded_column_] = 1;
    for (int i = 0; i < rows_; ++i) d[basis_[i]] -= tableau_(i, unbounded_column_);
    return to_original(d, false);
  }

  // y_i = c_e - r_e for the column e that started as the unit vector of row i;
  // those columns carry zero phase-2 cost.
  VectorX<Scalar> row_duals() const {
    VectorX<Scalar> y(lp_.constraint_count());
    for (int i = 0; i < lp_.constraint_count(); ++i) {
      const Scalar yi = -reduced_[identity_col_[i]];
      y[i] = flipped_[i] ? Scalar(-yi) : yi;
    }
    return y;
  }

  const BasicLinearProgram<Scalar>& lp_;
  std::vector<VarMap> maps_;
  int std_cols_ = 0;
  int rows_ = 0;
  int total_cols_ = 0;
  std::vector<bool> flipped_;
  std::vector<bool> is_artificial_;
  std::vector<int> artificials_;
  std::vector<int> identity_col_;
  std::vector<int> basis_;
  MatrixX<Scalar> tableau_;
  VectorX<Scalar> std_cost_;
  VectorX<Scalar> cost_;
  VectorX<Scalar> reduced_;
  Scalar objective_ = 0;
  int unbounded_column_ = -1;
};

}  // namespace detail

/// Solves `lp` exactly. Deterministic: the pivot sequence depends only on
/// the input.
template <typename Scalar>
BasicLpSolution<Scalar> solve_lp(const BasicLinearProgram<Scalar>& lp) {
  return detail::TableauSimplex<Scalar>(lp).run();
}

/// Checks an Optimal solution against its dual multipliers: primal
/// feasibility, dual sign conditions, reduced costs compatible with the
/// variable bounds, and a duality gap of exactly zero.
template <typename Scalar>
bool check_optimality_certificate(const BasicLinearProgram<Scalar>& lp,
                                  const BasicLpSolution<Scalar>& sol) {
  if (sol.status != LpStatus::Optimal) return false;
  if (!lp.is_feasible(sol.assignment)) return false;
  if (sol.duals.size() != lp.constraint_count()) return false;
  VectorX<Scalar> reduced(lp.variable_count());
  for (int j = 0; j < lp.variable_count(); ++j) reduced[j] = lp.objective()[j];
  Scalar dual_value = 0;
  for (int i = 0; i < lp.constraint_count(); ++i) {
    const auto& c = lp.constraints()[i];
    const Scalar& y = sol.duals[i];
    if (c.relation == Relation::LessEqual && y < 0) return false;
    if (c.relation == Relation::GreaterEqual && y > 0) return false;
    for (const auto& t : c.terms) reduced[t.variable] -= y * t.coefficient;
    dual_value += y * c.rhs;
  }
  for (int j = 0; j < lp.variable_count(); ++j) {
    if (reduced[j] > 0) {
      if (!lp.upper(j)) return false;
      dual_value += reduced[j] * *lp.upper(j);
    } else if (reduced[j] < 0) {
      if (!lp.lower(j)) return false;
      dual_value += reduced[j] * *lp.lower(j);
    }
  }
  return dual_value == sol.objective_value && lp.objective_value(sol.assignment) == dual_value;
}

/// Human-readable dump used by the CLI's --dump-lp flag.
template <typename Scalar>
void write_lp(std::ostream& os, const BasicLinearProgram<Scalar>& lp, const std::string& title) {
  auto term = [&](const Scalar& c, int j) {
    os << (c < 0 ? " - " : " + ") << to_string(Rational(c < 0 ? Scalar(-c) : c)) << " "
       << lp.variable_name(j);
  };
  os << "\\ " << title << "\nmaximize\n ";
  for (int j = 0; j < lp.variable_count(); ++j)
    if (lp.objective()[j] != 0) term(lp.objective()[j], j);
  os << "\nsubject to\n";
  for (const auto& c : lp.constraints()) {
    os << " " << (c.name.empty() ? "row" : c.name) << ":";
    for (const auto& t : c.terms) term(t.coefficient, t.variable);
    os << (c.relation == Relation::LessEqual      ? " <= "
           : c.relation == Relation::GreaterEqual ? " >= "
                                                  : " = ")
       << to_string(Rational(c.rhs)) << "\n";
  }
  os << "bounds\n";
  for (int j = 0; j < lp.variable_count(); ++j) {
    os << " " << (lp.lower(j) ? to_string(Rational(*lp.lower(j))) : std::string("-inf")) << " <= "
       << lp.variable_name(j) << " <= "
       << (lp.upper(j) ? to_string(Rational(*lp.upper(j))) : std::string("+inf")) << "\n";
  }
  os << "end\n\n";
}

using LinearProgram = BasicLinearProgram<Rational>;
using LpSolution = BasicLpSolution<Rational>;

}  // namespace commitpay

#endif  // COMMITPAY_LP_HPP
