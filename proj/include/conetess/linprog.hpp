#pragma once

#include <Eigen/Dense>

namespace conetess {

enum class LpStatus { optimal, infeasible, unbounded };

struct LpSolution {
  LpStatus status = LpStatus::infeasible;
  double objective = 0;
  Eigen::VectorXd x;
};

/// max c.x subject to A_ub x <= b_ub, A_eq x = b_eq, x >= 0.
/// Dense two-phase simplex with Bland's rule; intended for the tiny,
/// well-scaled instances produced by the cone predicates below.
LpSolution simplex_solve(const Eigen::MatrixXd& A_ub, const Eigen::VectorXd& b_ub,
                         const Eigen::MatrixXd& A_eq, const Eigen::VectorXd& b_eq,
                         const Eigen::VectorXd& c);

/// Feasibility only (phase 1).
bool lp_feasible(const Eigen::MatrixXd& A_ub, const Eigen::VectorXd& b_ub,
                 const Eigen::MatrixXd& A_eq, const Eigen::VectorXd& b_eq);

struct InteriorPoint {
  bool feasible = false;
  double slack = 0;       // best margin min_i(-rows_i . z) within the unit box
  Eigen::VectorXd point;  // witness with that margin
};

/// Strict feasibility of {z : rows z < 0}: maximizes the uniform slack t
/// subject to rows z + t <= 0 and |z|_inf <= 1. Feasible iff the optimal
/// slack clears the threshold. rows may be empty (trivially feasible).
InteriorPoint strict_interior(const Eigen::MatrixXd& rows,
                              double slack_threshold = 1e-9);

/// Whether the cone {z : rows z <= 0} contains a nonzero point, decided by
/// normalizing with the given (generically chosen) linear functional at both
/// signs: probe.z = 1 and probe.z = -1.
bool cone_has_nonzero_point(const Eigen::MatrixXd& rows,
                            const Eigen::VectorXd& probe);

}  // namespace conetess
