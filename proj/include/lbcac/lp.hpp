#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "lbcac/error.hpp"

namespace lbcac {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class Sense { Maximize, Minimize };
enum class Rel { Le, Eq, Ge };

struct LpRow {
  std::vector<std::pair<int, double>> terms;  // (variable, coefficient)
  Rel rel = Rel::Le;
  double rhs = 0.0;
  std::string name;
};

// General LP container: sparse rows, per-variable bounds with the usual
// [0, +inf) default. Equality rows are first-class; they are not split
// into inequality pairs.
struct LinearProgram {
  Sense sense = Sense::Maximize;
  std::vector<double> objective;
  std::vector<double> lower;
  std::vector<double> upper;
  std::vector<std::string> var_names;
  std::vector<LpRow> rows;

  int num_vars() const { return static_cast<int>(objective.size()); }
  int num_rows() const { return static_cast<int>(rows.size()); }

  int add_var(std::string name, double obj = 0.0, double lb = 0.0,
              double ub = kInf) {
    objective.push_back(obj);
    lower.push_back(lb);
    upper.push_back(ub);
    var_names.push_back(std::move(name));
    return num_vars() - 1;
  }

  void add_row(Rel rel, double rhs, std::vector<std::pair<int, double>> terms,
               std::string name = {}) {
    rows.push_back(LpRow{std::move(terms), rel, rhs, std::move(name)});
  }
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpSolution {
  LpStatus status = LpStatus::Infeasible;
  std::vector<double> x;
  double objective_value = 0.0;
  long iterations = 0;
};

/// Largest constraint or bound violation of a candidate point. Used by the
/// solver's self-check and handy for tests.
inline double max_violation(const LinearProgram& lp,
                            const std::vector<double>& x) {
  double worst = 0.0;
  for (int v = 0; v < lp.num_vars(); ++v) {
    if (lp.lower[v] > -kInf) worst = std::max(worst, lp.lower[v] - x[v]);
    if (lp.upper[v] < kInf) worst = std::max(worst, x[v] - lp.upper[v]);
  }
  for (const LpRow& row : lp.rows) {
    double lhs = 0.0;
    for (auto [v, c] : row.terms) lhs += c * x[v];
    switch (row.rel) {
      case Rel::Le: worst = std::max(worst, lhs - row.rhs); break;
      case Rel::Ge: worst = std::max(worst, row.rhs - lhs); break;
      case Rel::Eq: worst = std::max(worst, std::abs(lhs - row.rhs)); break;
    }
  }
  return worst;
}

namespace detail {

// Dense two-phase primal simplex with Bland's rule throughout, which makes
// the pivot sequence (and therefore the returned vertex) deterministic and
// cycle-free. After the tableau converges, the final basis system is
// re-solved from pristine data in long double to shed accumulated pivot
// error before the solution is handed back.
class DenseSimplex {
 public:
  explicit DenseSimplex(const LinearProgram& lp) : lp_(lp) {}

  LpSolution run() {
    validate();
    transform_variables();
    build_standard_form();
    iter_cap_ = 50L * (static_cast<long>(num_cols_) + static_cast<long>(m_));

    if (!phase1()) return make_result(LpStatus::Infeasible);
    if (!phase2()) return make_result(LpStatus::Unbounded);
    return make_result(LpStatus::Optimal);
  }

 private:
  static constexpr double kPivTol = 1e-9;
  static constexpr double kCostTol = 1e-9;
  static constexpr double kPhase1Tol = 1e-7;

  // x = offset + sign * y[col]  (+ optionally - y[neg_col] for free vars)
  struct VarMap {
    int col = -1;
    int neg_col = -1;
    double offset = 0.0;
    double sign = 1.0;
  };

  void validate() const {
    for (int v = 0; v < lp_.num_vars(); ++v) {
      if (!(lp_.lower[v] <= lp_.upper[v]))
        fail(Errc::InvalidArgument,
             "variable " + std::to_string(v) + " has lower > upper");
    }
    for (const LpRow& row : lp_.rows) {
      for (auto [v, c] : row.terms) {
        if (v < 0 || v >= lp_.num_vars())
          fail(Errc::InvalidArgument,
               "constraint references unknown variable " + std::to_string(v));
        if (!std::isfinite(c) || !std::isfinite(row.rhs))
          fail(Errc::InvalidArgument, "non-finite constraint data");
      }
    }
  }

  // Rewrite every variable as one or two nonnegative columns; finite upper
  // bounds become extra Le rows.
  void transform_variables() {
    vmap_.resize(lp_.num_vars());
    for (int v = 0; v < lp_.num_vars(); ++v) {
      const double lb = lp_.lower[v], ub = lp_.upper[v];
      VarMap& m = vmap_[v];
      if (lb == -kInf && ub == kInf) {
        m.col = num_struct_++;
        m.neg_col = num_struct_++;
      } else if (lb == -kInf) {
        m.col = num_struct_++;  // x = ub - y
        m.offset = ub;
        m.sign = -1.0;
      } else {
        m.col = num_struct_++;  // x = lb + y
        m.offset = lb;
        m.sign = 1.0;
        if (ub < kInf) ub_rows_.emplace_back(m.col, ub - lb);
      }
    }
  }

  void build_standard_form() {
    m_ = lp_.num_rows() + static_cast<int>(ub_rows_.size());

    std::vector<std::vector<double>> rows(m_, std::vector<double>(num_struct_, 0.0));
    std::vector<double> rhs(m_, 0.0);
    std::vector<Rel> rel(m_, Rel::Le);

    for (int r = 0; r < lp_.num_rows(); ++r) {
      const LpRow& row = lp_.rows[r];
      double b = row.rhs;
      for (auto [v, c] : row.terms) {
        const VarMap& m = vmap_[v];
        rows[r][m.col] += c * m.sign;
        if (m.neg_col >= 0) rows[r][m.neg_col] -= c;
        b -= c * m.offset;
      }
      rhs[r] = b;
      rel[r] = row.rel;
    }
    for (std::size_t u = 0; u < ub_rows_.size(); ++u) {
      const int r = lp_.num_rows() + static_cast<int>(u);
      rows[r][ub_rows_[u].first] = 1.0;
      rhs[r] = ub_rows_[u].second;
      rel[r] = Rel::Le;
    }

    // Objective in minimization form over the transformed columns.
    cost_.assign(num_struct_, 0.0);
    const double s = (lp_.sense == Sense::Maximize) ? -1.0 : 1.0;
    for (int v = 0; v < lp_.num_vars(); ++v) {
      const VarMap& m = vmap_[v];
      cost_[m.col] += s * lp_.objective[v] * m.sign;
      if (m.neg_col >= 0) cost_[m.neg_col] -= s * lp_.objective[v];
    }

    // Nonnegative right-hand sides.
    for (int r = 0; r < m_; ++r) {
      if (rhs[r] < 0) {
        for (double& a : rows[r]) a = -a;
        rhs[r] = -rhs[r];
        if (rel[r] == Rel::Le) rel[r] = Rel::Ge;
        else if (rel[r] == Rel::Ge) rel[r] = Rel::Le;
      }
    }

    // Column layout: structural | slack/surplus | artificial.
    int num_slack = 0, num_art = 0;
    for (int r = 0; r < m_; ++r) {
      if (rel[r] != Rel::Eq) ++num_slack;
      if (rel[r] != Rel::Le) ++num_art;
    }
    art_begin_ = num_struct_ + num_slack;
    num_cols_ = art_begin_ + num_art;

    A_.assign(m_, std::vector<double>(num_cols_, 0.0));
    b_ = rhs;
    basis_.assign(m_, -1);
    int slack = num_struct_, art = art_begin_;
    for (int r = 0; r < m_; ++r) {
      std::copy(rows[r].begin(), rows[r].end(), A_[r].begin());
      switch (rel[r]) {
        case Rel::Le:
          A_[r][slack] = 1.0;
          basis_[r] = slack++;
          break;
        case Rel::Ge:
          A_[r][slack++] = -1.0;
          A_[r][art] = 1.0;
          basis_[r] = art++;
          break;
        case Rel::Eq:
          A_[r][art] = 1.0;
          basis_[r] = art++;
          break;
      }
    }
    A0_ = A_;  // pristine copy for the final basis re-solve
    b0_ = b_;
    in_basis_.assign(num_cols_, false);
    for (int r = 0; r < m_; ++r) in_basis_[basis_[r]] = true;
  }

  // Reduced-cost row for a given cost vector under the current basis.
  void price(const std::vector<double>& c, std::vector<double>& d) const {
    d.assign(num_cols_, 0.0);
    std::copy(c.begin(), c.end(), d.begin());
    for (int r = 0; r < m_; ++r) {
      const double cb = basis_[r] < static_cast<int>(c.size()) ? c[basis_[r]] : 0.0;
      if (cb == 0.0) continue;
      const std::vector<double>& row = A_[r];
      for (int j = 0; j < num_cols_; ++j) d[j] -= cb * row[j];
    }
  }

  void pivot(int r, int s, std::vector<double>& d) {
    std::vector<double>& prow = A_[r];
    const double inv = 1.0 / prow[s];
    for (double& a : prow) a *= inv;
    b_[r] *= inv;
    prow[s] = 1.0;

    for (int i = 0; i < m_; ++i) {
      if (i == r) continue;
      const double f = A_[i][s];
      if (f == 0.0) continue;
      std::vector<double>& row = A_[i];
      for (int j = 0; j < num_cols_; ++j) row[j] -= f * prow[j];
      row[s] = 0.0;
      b_[i] -= f * b_[r];
      if (b_[i] < 0 && b_[i] > -1e-11) b_[i] = 0.0;
    }
    const double fd = d[s];
    if (fd != 0.0) {
      for (int j = 0; j < num_cols_; ++j) d[j] -= fd * prow[j];
      d[s] = 0.0;
    }
    in_basis_[basis_[r]] = false;
    in_basis_[s] = true;
    basis_[r] = s;
  }

  // Bland's rule: entering = lowest-index column with an improving reduced
  // cost; leaving = minimum ratio, ties broken by lowest basic column index.
  // Returns false when no improving column remains (optimal for this cost).
  bool simplex_loop(std::vector<double>& d, bool exclude_artificials,
                    bool* unbounded) {
    *unbounded = false;
    const int limit = exclude_artificials ? art_begin_ : num_cols_;
    for (;;) {
      int s = -1;
      for (int j = 0; j < limit; ++j) {
        if (in_basis_[j]) continue;
        if (d[j] < -kCostTol) { s = j; break; }
      }
      if (s < 0) return true;

      if (++iterations_ > iter_cap_)
        fail(Errc::NumericalFailure,
             "simplex iteration cap exceeded (" + std::to_string(iter_cap_) +
                 ")");

      int r = -1;
      double best = 0.0;
      for (int i = 0; i < m_; ++i) {
        if (A_[i][s] <= kPivTol) continue;
        const double ratio = b_[i] / A_[i][s];
        if (r < 0 || ratio < best - 1e-12 ||
            (std::abs(ratio - best) <= 1e-12 && basis_[i] < basis_[r])) {
          r = i;
          best = ratio;
        }
      }
      if (r < 0) {
        *unbounded = true;
        return false;
      }
      pivot(r, s, d);
    }
  }

  bool phase1() {
    if (art_begin_ == num_cols_) return true;  // pure-Le system, origin works

    std::vector<double> c1(num_cols_, 0.0);
    for (int j = art_begin_; j < num_cols_; ++j) c1[j] = 1.0;
    std::vector<double> d;
    price(c1, d);
    bool unbounded = false;
    simplex_loop(d, /*exclude_artificials=*/false, &unbounded);
    // Phase 1 is always bounded below by 0.

    double art_sum = 0.0;
    for (int r = 0; r < m_; ++r)
      if (basis_[r] >= art_begin_) art_sum += b_[r];
    if (art_sum > kPhase1Tol) return false;

    // Pivot leftover zero-valued artificials out where the row allows it;
    // rows that do not allow it are redundant and stay parked at zero.
    for (int r = 0; r < m_; ++r) {
      if (basis_[r] < art_begin_) continue;
      for (int j = 0; j < art_begin_; ++j) {
        if (!in_basis_[j] && std::abs(A_[r][j]) > 1e-7) {
          pivot(r, j, d);
          break;
        }
      }
    }
    return true;
  }

  bool phase2() {
    std::vector<double> c2(num_cols_, 0.0);
    std::copy(cost_.begin(), cost_.end(), c2.begin());
    std::vector<double> d;
    price(c2, d);
    bool unbounded = false;
    simplex_loop(d, /*exclude_artificials=*/true, &unbounded);
    return !unbounded;
  }

  // Solve B y_B = b from the pristine arrays in long double, replacing the
  // pivoted tableau values. Falls back to tableau values if B is singular.
  std::vector<double> extract_column_values() const {
    std::vector<double> y(num_cols_, 0.0);
    std::vector<std::vector<long double>> B(
        m_, std::vector<long double>(m_ + 1, 0.0L));
    for (int i = 0; i < m_; ++i) {
      for (int r = 0; r < m_; ++r) B[i][r] = A0_[i][basis_[r]];
      B[i][m_] = b0_[i];
    }
    bool singular = false;
    for (int k = 0; k < m_ && !singular; ++k) {
      int piv = k;
      for (int i = k + 1; i < m_; ++i)
        if (std::abs(static_cast<double>(B[i][k])) >
            std::abs(static_cast<double>(B[piv][k])))
          piv = i;
      if (std::abs(static_cast<double>(B[piv][k])) < 1e-13) {
        singular = true;
        break;
      }
      std::swap(B[k], B[piv]);
      for (int i = k + 1; i < m_; ++i) {
        const long double f = B[i][k] / B[k][k];
        if (f == 0.0L) continue;
        for (int j = k; j <= m_; ++j) B[i][j] -= f * B[k][j];
      }
    }
    if (!singular) {
      std::vector<long double> yb(m_, 0.0L);
      for (int k = m_ - 1; k >= 0; --k) {
        long double s = B[k][m_];
        for (int j = k + 1; j < m_; ++j) s -= B[k][j] * yb[j];
        yb[k] = s / B[k][k];
      }
      for (int r = 0; r < m_; ++r)
        y[basis_[r]] = static_cast<double>(yb[r]);
    } else {
      for (int r = 0; r < m_; ++r) y[basis_[r]] = b_[r];
    }
    return y;
  }

  std::vector<double> to_original_space(const std::vector<double>& y) const {
    std::vector<double> x(lp_.num_vars(), 0.0);
    for (int v = 0; v < lp_.num_vars(); ++v) {
      const VarMap& m = vmap_[v];
      double val = m.offset + m.sign * y[m.col];
      if (m.neg_col >= 0) val -= y[m.neg_col];
      x[v] = val;
    }
    return x;
  }

  LpSolution make_result(LpStatus status) {
    LpSolution sol;
    sol.status = status;
    sol.iterations = iterations_;
    if (status != LpStatus::Optimal) {
      if (status == LpStatus::Unbounded)
        sol.objective_value =
            (lp_.sense == Sense::Maximize) ? kInf : -kInf;
      return sol;
    }

    std::vector<double> x_repaired = to_original_space(extract_column_values());
    std::vector<double> y_tab(num_cols_, 0.0);
    for (int r = 0; r < m_; ++r) y_tab[basis_[r]] = b_[r];
    std::vector<double> x_tab = to_original_space(y_tab);

    const double viol_rep = max_violation(lp_, x_repaired);
    const double viol_tab = max_violation(lp_, x_tab);
    std::vector<double>& x = (viol_rep <= viol_tab) ? x_repaired : x_tab;
    if (std::min(viol_rep, viol_tab) > 1e-9)
      fail(Errc::NumericalFailure,
           "optimal basis violates constraints by " +
               std::to_string(std::min(viol_rep, viol_tab)));

    double obj = 0.0;
    for (int v = 0; v < lp_.num_vars(); ++v) obj += lp_.objective[v] * x[v];
    sol.x = std::move(x);
    sol.objective_value = obj;
    return sol;
  }

  const LinearProgram& lp_;

  std::vector<VarMap> vmap_;
  std::vector<std::pair<int, double>> ub_rows_;  // (column, bound)
  int num_struct_ = 0;

  int m_ = 0;
  int num_cols_ = 0;
  int art_begin_ = 0;
  std::vector<std::vector<double>> A_, A0_;
  std::vector<double> b_, b0_;
  std::vector<double> cost_;
  std::vector<int> basis_;
  std::vector<bool> in_basis_;
  long iterations_ = 0;
  long iter_cap_ = 0;
};

}  // namespace detail

/// Solve an LP to proven optimality. Deterministic: the same program yields
/// the same vertex, bit for bit, on every run and platform.
inline LpSolution solve(const LinearProgram& lp) {
  return detail::DenseSimplex(lp).run();
}

/// Plain-text listing of a program (objective, constraints, bounds) for
/// cross-checking against external solvers.
inline void dump_lp(const LinearProgram& lp, std::ostream& os) {
  auto var = [&](int v) {
    return lp.var_names[v].empty() ? "x" + std::to_string(v)
                                   : lp.var_names[v];
  };
  os << (lp.sense == Sense::Maximize ? "Maximize\n" : "Minimize\n") << " obj:";
  for (int v = 0; v < lp.num_vars(); ++v) {
    if (lp.objective[v] == 0.0) continue;
    os << (lp.objective[v] >= 0 ? " + " : " - ")
       << std::abs(lp.objective[v]) << " " << var(v);
  }
  os << "\nSubject To\n";
  for (int r = 0; r < lp.num_rows(); ++r) {
    const LpRow& row = lp.rows[r];
    os << " " << (row.name.empty() ? "c" + std::to_string(r) : row.name)
       << ":";
    for (auto [v, c] : row.terms)
      os << (c >= 0 ? " + " : " - ") << std::abs(c) << " " << var(v);
    switch (row.rel) {
      case Rel::Le: os << " <= "; break;
      case Rel::Eq: os << " = "; break;
      case Rel::Ge: os << " >= "; break;
    }
    os << row.rhs << "\n";
  }
  os << "Bounds\n";
  for (int v = 0; v < lp.num_vars(); ++v) {
    os << " " << lp.lower[v] << " <= " << var(v) << " <= " << lp.upper[v]
       << "\n";
  }
  os << "End\n";
}

}  // namespace lbcac
