#ifndef CTLP_DISCRETIZE_HPP
#define CTLP_DISCRETIZE_HPP

#include <Eigen/Dense>
#include <cstddef>
#include <vector>

#include "clp/mesh.hpp"
#include "clp/piecewise.hpp"

namespace clp {

// Interval data feeding the finite LP pair: objective and right-hand-side
// coefficients are interval infima, the constraint matrix entries interval
// suprema, and the kernel blocks rectangle infima (kept only for v < u,
// the strict lower block triangle the constraints reference).
struct DiscreteLPData {
  std::size_t n = 0;  // interval count
  std::size_t p = 0, q = 0;
  std::vector<double> deltas;            // n interval widths
  std::vector<Eigen::VectorXd> a;        // n blocks of size q (infima)
  std::vector<Eigen::VectorXd> c;        // n blocks of size p (infima)
  std::vector<Eigen::MatrixXd> b;        // n blocks, p x q (suprema)
  std::vector<std::vector<Eigen::MatrixXd>> k;  // k[u][v], v < u, p x q (infima)

  double min_kernel_entry() const;  // smallest stored kernel coefficient
};

DiscreteLPData discretize(const CLPInstance& inst, const Partition& part);

// Finite LP in inequality form with nonnegative variables. Variables and
// rows are laid out block-major: flat index = block * block_size + component.
struct FiniteLP {
  enum class Sense { Maximize, Minimize };
  enum class RowSense { LessEqual, GreaterEqual };

  Sense sense = Sense::Maximize;
  RowSense row_sense = RowSense::LessEqual;
  Eigen::VectorXd cost;
  Eigen::MatrixXd a;
  Eigen::VectorXd rhs;

  std::size_t var_blocks = 0, var_block_size = 0;
  std::size_t row_blocks = 0, row_block_size = 0;

  std::size_t num_vars() const { return static_cast<std::size_t>(cost.size()); }
  std::size_t num_rows() const { return static_cast<std::size_t>(rhs.size()); }
  std::size_t var_index(std::size_t block, std::size_t comp) const {
    return block * var_block_size + comp;
  }
  std::size_t row_index(std::size_t block, std::size_t comp) const {
    return block * row_block_size + comp;
  }
};

// max sum_u delta_u a_u'z_u  s.t.  b_u z_u - sum_{v<u} delta_v k_uv z_v <= c_u,
// z >= 0.  Optional uniform shift of the right-hand side (the perturbed
// problem adds epsilon to every c entry).
FiniteLP assemble_primal(const DiscreteLPData& d, double rhs_shift = 0.0);

// min sum_u delta_u c_u'w_u  s.t.  b_u'w_u - sum_{v>u} delta_v k_vu'w_v >= a_u,
// w >= 0.  rhs_shift subtracts epsilon from every a entry; cost_shift adds
// epsilon to every c entry (the exact dual of the shifted primal).
FiniteLP assemble_dual(const DiscreteLPData& d, double rhs_shift = 0.0, double cost_shift = 0.0);

// Block rescaling between the aggregated dual variables and per-interval
// rates: rates block u = aggregate block u / delta_u.
std::vector<Eigen::VectorXd> dual_to_rates(const std::vector<Eigen::VectorXd>& aggregate,
                                           const DiscreteLPData& d);
std::vector<Eigen::VectorXd> dual_to_aggregates(const std::vector<Eigen::VectorXd>& rates,
                                                const DiscreteLPData& d);

// Flat vector <-> block views for the layouts above.
std::vector<Eigen::VectorXd> split_blocks(const Eigen::VectorXd& flat, std::size_t blocks,
                                          std::size_t block_size);
Eigen::VectorXd join_blocks(const std::vector<Eigen::VectorXd>& blocks);

}  // namespace clp

#endif
