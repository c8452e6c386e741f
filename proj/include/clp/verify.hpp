#ifndef CTLP_VERIFY_HPP
#define CTLP_VERIFY_HPP

#include <cstddef>
#include <string>
#include <vector>

#include "clp/discretize.hpp"
#include "clp/mesh.hpp"
#include "clp/piecewise.hpp"
#include "clp/reconstruct.hpp"
#include "clp/simplex.hpp"

namespace clp {

// Constraint-check abscissae: per interval, the midpoint plus Chebyshev
// nodes, which never touch the partition points (where the constraints are
// not required to hold). At least 3 points per interval.
std::vector<double> check_grid(const Partition& part, std::size_t per_interval);

struct ResidualDetail {
  double max_violation = 0.0;
  std::size_t worst_component = 0;
  double worst_t = 0.0;
  // Per constraint row (primal) or column (dual): worst violation and where.
  std::vector<std::pair<double, double>> per_component;
};

// Worst positive part of  B(t) z(t) - c(t) - int_0^t K(t,s) z(s) ds  over
// the check grid; the time integral is taken exactly per interval.
ResidualDetail primal_residual(const StepFunction& z, const CLPInstance& inst,
                               std::size_t grid_per_interval);

// Worst positive part of  a(t) + int_t^T K(s,t)' w(s) ds - B(t)' w(t).
ResidualDetail dual_residual(const StepFunction& w, const CLPInstance& inst,
                             std::size_t grid_per_interval);

// Exact piecewise quadrature of the objectives of step solutions.
double continuous_primal_objective(const StepFunction& z, const CLPInstance& inst);
double continuous_dual_objective(const StepFunction& w, const CLPInstance& inst);

enum class Verdict { Holds, NotApplicable, Violated };

const char* to_string(Verdict v);

struct WeakDualityReport {
  Verdict verdict = Verdict::NotApplicable;
  double primal_objective = 0.0;
  double dual_objective = 0.0;
  double primal_res = 0.0;
  double dual_res = 0.0;
  double slack = 0.0;  // allowance derived from the measured near-feasibility
};

// Feasible-within-tol pairs must satisfy the objective ordering; pairs that
// are not near-feasible yield NotApplicable rather than a violation claim.
WeakDualityReport weak_duality_check(const StepFunction& z, const StepFunction& w,
                                     const CLPInstance& inst, double tol_feas,
                                     std::size_t grid_per_interval = 8);

struct EpsilonCertificate {
  double oscillation = 0.0;  // worst coefficient oscillation on the mesh
  double eps_bar = 0.0;      // max(oscillation, mesh norm)
  double eps1 = 0.0;         // constraint-matrix mismatch term
  double eps2 = 0.0;         // kernel tail and mismatch term
  double total = 0.0;        // eps_bar + eps1 + eps2
};

// Certified perturbation level: the reconstructed truncated dual step
// function satisfies the dual constraints relaxed by `total`.
EpsilonCertificate certify_epsilon(const CLPInstance& inst, const Partition& part,
                                   const GlobalBounds& bounds);

struct AuditRow {
  std::size_t block = 0;
  double value = 0.0;  // block 1-norm (primal) or largest entry (dual)
  double bound = 0.0;
  bool pass = false;
};

struct BoundAudit {
  bool all_pass = false;
  std::vector<AuditRow> primal_rows;
  std::vector<AuditRow> dual_rows;
  double primal_cap = 0.0;         // partition-independent exponential cap
  std::string primal_bound_note;   // formula with its constant choices spelled out
};

// Primal blocks against the geometric growth bound and its exponential cap;
// truncated dual blocks against the per-point values of the bounding curve.
BoundAudit bound_audit(const std::vector<Eigen::VectorXd>& z_blocks,
                       const std::vector<Eigen::VectorXd>& w_blocks, const Partition& part,
                       const GlobalBounds& bounds, std::size_t constraint_count, double epsilon);

struct PerturbationRow {
  double epsilon = 0.0;
  SolveStatus primal_status = SolveStatus::NumericalFailure;
  SolveStatus dual_status = SolveStatus::NumericalFailure;
  double primal_objective = 0.0;  // optimum with rhs shifted up by epsilon
  double dual_objective = 0.0;    // optimum with objective data shifted down
};

struct PerturbationTable {
  std::vector<PerturbationRow> rows;
  bool primal_monotone = false;  // nondecreasing across rows
  bool dual_monotone = false;    // nonincreasing across rows
};

// Solves the shifted problems for each epsilon (reusing one discretization,
// since infima commute with constant shifts) and checks the expected
// monotone trends to 1e-9.
PerturbationTable perturbation_monotonicity(const CLPInstance& inst, const Partition& part,
                                            const std::vector<double>& epsilons);

}  // namespace clp

#endif
