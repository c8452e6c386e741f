#ifndef CTLP_RECONSTRUCT_HPP
#define CTLP_RECONSTRUCT_HPP

#include <Eigen/Dense>
#include <cstddef>
#include <string>
#include <vector>

#include "clp/discretize.hpp"
#include "clp/mesh.hpp"
#include "clp/piecewise.hpp"

namespace clp {

// Vector-valued piecewise-constant function on a partition: block u rules
// [t_{u-1}, t_u), the last block also covers t = T.
class StepFunction {
 public:
  StepFunction(Partition part, std::vector<Eigen::VectorXd> blocks);

  const Partition& partition() const { return part_; }
  std::size_t dimension() const { return dim_; }
  std::size_t block_count() const { return blocks_.size(); }
  const Eigen::VectorXd& block(std::size_t u) const { return blocks_[u]; }

  Eigen::VectorXd value(double t) const;
  double value(double t, std::size_t component) const;
  double max_abs() const;
  // Sum over components of the largest block 1-norm.
  double max_block_sum() const;

  // Rows "t,v0,...,v{d-1}": one row per block at its left endpoint plus a
  // closing row at T for step plotting.
  std::string to_csv() const;

 private:
  Partition part_;
  std::size_t dim_;
  std::vector<Eigen::VectorXd> blocks_;
};

StepFunction primal_step(const std::vector<Eigen::VectorXd>& z_blocks, const Partition& part);
StepFunction dual_step(const std::vector<Eigen::VectorXd>& w_blocks, const Partition& part);

// Which kernel constant drives the exponential rate of the dual bounding
// curve: the column-sum bound or the entrywise supremum.
enum class RhoRate { ColumnSum, KernelSup };

// rho(t) = ((a_sup - epsilon)/sigma) * exp(rate * (T - t) / sigma); the
// decreasing curve that caps feasible dual solutions.
double rho(double t, double horizon, const GlobalBounds& bounds, RhoRate rate, double epsilon);

// Explicit feasible point of the aggregated-and-rescaled dual: every entry
// of block u equals (a_sup/sigma) * (1 + mesh_norm * k_col_sum/sigma)^(N-u).
std::vector<Eigen::VectorXd> dual_certificate(const Partition& part, const GlobalBounds& bounds,
                                              std::size_t p);

// Componentwise min with rho_u = rho(t_u) (kernel-sup rate). Requires the
// certified threshold and nonnegative kernel blocks; preserves feasibility
// and, for optimal inputs, the objective.
std::vector<Eigen::VectorXd> truncate_dual(const std::vector<Eigen::VectorXd>& d_blocks,
                                           const Partition& part, const GlobalBounds& bounds,
                                           const DiscreteLPData& data);

// u -> theta1 * (1 + theta2)^(u-1), u = 1..n: the explicit cap implied by
// x_1 <= theta1, x_u <= theta1 + theta2 * sum_{v<u} x_v.
std::vector<double> discrete_gronwall(double theta1, double theta2, std::size_t n);

// theta1 * exp(theta2 * t): the continuous analogue.
double gronwall_bound(double theta1, double theta2, double t);

// Uniform bound on feasible primal solutions of the epsilon-relaxed problem:
// (p*(c_sup + eps)/sigma) * exp(p * k_row_sum * t / sigma).
double primal_bound(std::size_t p, const GlobalBounds& bounds, double epsilon, double t);

// Analytic constants carried along with a reconstructed solution.
struct CertificateBundle {
  double a_sup = 0.0;
  double sigma = 0.0;
  double rate = 0.0;     // exponential rate constant in use
  double epsilon = 0.0;  // perturbation level
  double theta1 = 0.0;   // discrete primal bound parameters
  double theta2 = 0.0;
  std::vector<double> dual_cert_values;  // per-block certificate level
};

}  // namespace clp

#endif
