#include "conetess/linprog.hpp"

#include <limits>
#include <vector>

namespace conetess {

namespace {

constexpr double kPivotTol = 1e-11;
constexpr double kFeasTol = 1e-9;

// Tableau simplex over columns [structural | slack | artificial | rhs].
// Bland's rule throughout, so no cycling.
class Tableau {
 public:
  Tableau(const Eigen::MatrixXd& A_ub, const Eigen::VectorXd& b_ub,
          const Eigen::MatrixXd& A_eq, const Eigen::VectorXd& b_eq, int n_vars)
      : n_(n_vars),
        m_(static_cast<int>(A_ub.rows() + A_eq.rows())),
        n_slack_(static_cast<int>(A_ub.rows())) {
    n_art_ = 0;
    for (int i = 0; i < A_ub.rows(); ++i)
      if (b_ub(i) < 0) ++n_art_;
    n_art_ += static_cast<int>(A_eq.rows());

    int cols = n_ + n_slack_ + n_art_ + 1;
    t_.setZero(m_, cols);
    basis_.assign(m_, -1);

    int art = 0;
    for (int i = 0; i < m_; ++i) {
      bool is_ub = i < n_slack_;
      double bi = is_ub ? b_ub(i) : b_eq(i - n_slack_);
      Eigen::RowVectorXd row = is_ub ? Eigen::RowVectorXd(A_ub.row(i))
                                     : Eigen::RowVectorXd(A_eq.row(i - n_slack_));
      double sign = (bi < 0) ? -1.0 : 1.0;
      t_.block(i, 0, 1, n_) = sign * row;
      if (is_ub) t_(i, n_ + i) = sign;
      t_(i, cols - 1) = sign * bi;
      bool needs_art = (!is_ub) || (bi < 0);
      if (needs_art) {
        t_(i, n_ + n_slack_ + art) = 1.0;
        basis_[i] = n_ + n_slack_ + art;
        ++art;
      } else {
        basis_[i] = n_ + i;
      }
    }
  }

  int cols() const { return static_cast<int>(t_.cols()); }
  int rhs_col() const { return cols() - 1; }
  bool is_artificial(int col) const { return col >= n_ + n_slack_; }

  void pivot(int row, int col) {
    t_.row(row) /= t_(row, col);
    for (int i = 0; i < m_; ++i) {
      if (i == row) continue;
      double f = t_(i, col);
      if (f != 0.0) t_.row(i) -= f * t_.row(row);
    }
    basis_[row] = col;
  }

  // Maximize obj.x with Bland's rule. allow_artificial controls whether
  // artificial columns may enter the basis.
  LpStatus optimize(const Eigen::RowVectorXd& obj, bool allow_artificial) {
    Eigen::RowVectorXd z = obj;
    for (int i = 0; i < m_; ++i) {
      double cb = obj(basis_[i]);
      if (cb != 0.0) z -= cb * t_.row(i).head(cols() - 1);
    }
    // z_j is the improvement rate of column j; entering requires z_j > 0.
    while (true) {
      int enter = -1;
      for (int j = 0; j < cols() - 1; ++j) {
        if (!allow_artificial && is_artificial(j)) continue;
        if (z(j) > kPivotTol) {
          enter = j;
          break;  // Bland: lowest index
        }
      }
      if (enter < 0) return LpStatus::optimal;
      int leave = -1;
      double best = std::numeric_limits<double>::infinity();
      for (int i = 0; i < m_; ++i) {
        double a = t_(i, enter);
        if (a > kPivotTol) {
          double ratio = t_(i, rhs_col()) / a;
          if (ratio < best - 1e-14 ||
              (ratio < best + 1e-14 && (leave < 0 || basis_[i] < basis_[leave]))) {
            best = ratio;
            leave = i;
          }
        }
      }
      if (leave < 0) return LpStatus::unbounded;
      double zq = z(enter);
      pivot(leave, enter);
      z -= zq * t_.row(leave).head(cols() - 1);
      z(enter) = 0.0;
    }
  }

  // Phase 1: drive the artificial variables to zero.
  bool make_feasible() {
    if (n_art_ == 0) return true;
    Eigen::RowVectorXd obj = Eigen::RowVectorXd::Zero(cols() - 1);
    for (int j = n_ + n_slack_; j < cols() - 1; ++j) obj(j) = -1.0;
    optimize(obj, true);
    double infeas = 0;
    for (int i = 0; i < m_; ++i)
      if (is_artificial(basis_[i])) infeas += t_(i, rhs_col());
    if (infeas > kFeasTol) return false;
    // Pivot leftover artificials out of the basis where a pivot exists;
    // otherwise the row is redundant and the artificial stays at level ~0.
    for (int i = 0; i < m_; ++i) {
      if (!is_artificial(basis_[i])) continue;
      for (int j = 0; j < n_ + n_slack_; ++j) {
        if (std::abs(t_(i, j)) > 1e-8) {
          pivot(i, j);
          break;
        }
      }
    }
    return true;
  }

  Eigen::VectorXd solution() const {
    Eigen::VectorXd x = Eigen::VectorXd::Zero(n_);
    for (int i = 0; i < m_; ++i)
      if (basis_[i] < n_) x(basis_[i]) = t_(i, rhs_col());
    return x;
  }

 private:
  int n_, m_, n_slack_, n_art_;
  Eigen::MatrixXd t_;
  std::vector<int> basis_;
};

}  // namespace

LpSolution simplex_solve(const Eigen::MatrixXd& A_ub, const Eigen::VectorXd& b_ub,
                         const Eigen::MatrixXd& A_eq, const Eigen::VectorXd& b_eq,
                         const Eigen::VectorXd& c) {
  const int n = static_cast<int>(c.size());
  Tableau tab(A_ub, b_ub, A_eq, b_eq, n);
  LpSolution out;
  if (!tab.make_feasible()) {
    out.status = LpStatus::infeasible;
    return out;
  }
  Eigen::RowVectorXd obj = Eigen::RowVectorXd::Zero(tab.cols() - 1);
  obj.head(n) = c.transpose();
  out.status = tab.optimize(obj, false);
  out.x = tab.solution();
  out.objective = c.dot(out.x);
  return out;
}

bool lp_feasible(const Eigen::MatrixXd& A_ub, const Eigen::VectorXd& b_ub,
                 const Eigen::MatrixXd& A_eq, const Eigen::VectorXd& b_eq) {
  int n = static_cast<int>(A_ub.cols() > 0 ? A_ub.cols() : A_eq.cols());
  Tableau tab(A_ub, b_ub, A_eq, b_eq, n);
  return tab.make_feasible();
}

InteriorPoint strict_interior(const Eigen::MatrixXd& rows, double slack_threshold) {
  InteriorPoint out;
  const int m = static_cast<int>(rows.cols());
  const int q = static_cast<int>(rows.rows());
  if (q == 0) {
    out.feasible = true;
    out.slack = 1.0;
    out.point = Eigen::VectorXd::Zero(m);
    return out;
  }
  // Substitute z = w - 1, w in [0,2]^m; variables (w, t) >= 0; maximize t:
  //   rows w + t <= rows.1,   w <= 2,   t <= 1.
  Eigen::MatrixXd A(q + m + 1, m + 1);
  Eigen::VectorXd b(q + m + 1);
  A.setZero();
  A.block(0, 0, q, m) = rows;
  A.block(0, m, q, 1).setOnes();
  b.head(q) = rows.rowwise().sum();
  for (int i = 0; i < m; ++i) {
    A(q + i, i) = 1.0;
    b(q + i) = 2.0;
  }
  A(q + m, m) = 1.0;
  b(q + m) = 1.0;
  Eigen::VectorXd c = Eigen::VectorXd::Zero(m + 1);
  c(m) = 1.0;
  LpSolution sol =
      simplex_solve(A, b, Eigen::MatrixXd(0, m + 1), Eigen::VectorXd(0), c);
  if (sol.status != LpStatus::optimal) return out;  // box keeps it bounded
  out.slack = sol.objective;
  out.feasible = sol.objective > slack_threshold;
  out.point = sol.x.head(m).array() - 1.0;
  return out;
}

bool cone_has_nonzero_point(const Eigen::MatrixXd& rows, const Eigen::VectorXd& probe) {
  const int m = static_cast<int>(probe.size());
  if (m == 0) return false;
  if (rows.rows() == 0) return true;
  // z = p - q with p, q >= 0; rows (p - q) <= 0; probe.(p - q) = s.
  Eigen::MatrixXd A_ub(rows.rows(), 2 * m);
  A_ub << rows, -rows;
  Eigen::VectorXd b_ub = Eigen::VectorXd::Zero(rows.rows());
  Eigen::MatrixXd A_eq(1, 2 * m);
  A_eq << probe.transpose(), -probe.transpose();
  Eigen::VectorXd b_eq(1);
  for (double s : {1.0, -1.0}) {
    b_eq(0) = s;
    if (lp_feasible(A_ub, b_ub, A_eq, b_eq)) return true;
  }
  return false;
}

}  // namespace conetess
