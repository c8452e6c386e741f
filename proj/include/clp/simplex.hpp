#ifndef CTLP_SIMPLEX_HPP
#define CTLP_SIMPLEX_HPP

#include <Eigen/Dense>
#include <string>

#include "clp/discretize.hpp"

namespace clp {

enum class SolveStatus { Optimal, Infeasible, Unbounded, NumericalFailure };

const char* to_string(SolveStatus s);

struct LPSolution {
  SolveStatus status = SolveStatus::NumericalFailure;
  Eigen::VectorXd primal;  // variable values (user orientation)
  Eigen::VectorXd dual;    // nonnegative row multipliers (user orientation)
  double objective = 0.0;  // in the problem's own sense
  int iterations = 0;
  double primal_residual = 0.0;  // feasibility violation, user space
  double dual_residual = 0.0;    // dual feasibility violation, user space
  double duality_gap = 0.0;      // |primal objective - dual bound|
  double complementarity = 0.0;  // worst componentwise slack * multiplier
  std::string note;              // failure detail when not optimal
};

// Dense revised simplex, two-phase, deterministic pivoting: most negative
// reduced cost with lowest-index ties, switching to Bland's rule after 200
// non-improving pivots. The basis inverse is refactorized every 50 pivots.
LPSolution solve(const FiniteLP& lp);

// Independent oracle for small problems: enumerates every basis of the
// slack-extended system, keeps the best feasible vertex and scans each
// feasible basis for an unbounded improving ray. Requires
// num_vars + num_rows <= 14.
LPSolution brute_force_solve(const FiniteLP& lp);

}  // namespace clp

#endif
