#include "clp/discretize.hpp"

#include <stdexcept>

namespace clp {

double DiscreteLPData::min_kernel_entry() const {
  double mn = 0.0;
  bool first = true;
  for (const auto& row : k) {
    for (const auto& m : row) {
      const double v = m.minCoeff();
      mn = first ? v : std::min(mn, v);
      first = false;
    }
  }
  return first ? 0.0 : mn;
}

DiscreteLPData discretize(const CLPInstance& inst, const Partition& part) {
  inst.validate();
  DiscreteLPData d;
  d.n = part.intervals();
  d.p = inst.p;
  d.q = inst.q;
  d.deltas.resize(d.n);
  d.a.assign(d.n, Eigen::VectorXd(inst.q));
  d.c.assign(d.n, Eigen::VectorXd(inst.p));
  d.b.assign(d.n, Eigen::MatrixXd(inst.p, inst.q));
  d.k.resize(d.n);

  for (std::size_t u = 0; u < d.n; ++u) {
    d.deltas[u] = part.delta(u);
    const Interval iu = part.interval(u);
    for (std::size_t j = 0; j < inst.q; ++j) d.a[u](j) = inst.a[j].inf_on(iu.lo, iu.hi);
    for (std::size_t i = 0; i < inst.p; ++i) d.c[u](i) = inst.c[i].inf_on(iu.lo, iu.hi);
    for (std::size_t i = 0; i < inst.p; ++i)
      for (std::size_t j = 0; j < inst.q; ++j) d.b[u](i, j) = inst.B.at(i, j).sup_on(iu.lo, iu.hi);
    d.k[u].resize(u);
    for (std::size_t v = 0; v < u; ++v) {
      Eigen::MatrixXd m(inst.p, inst.q);
      const Interval iv = part.interval(v);
      for (std::size_t i = 0; i < inst.p; ++i)
        for (std::size_t j = 0; j < inst.q; ++j) m(i, j) = inst.K.at(i, j).inf_on(iu, iv);
      d.k[u][v] = std::move(m);
    }
  }
  return d;
}

FiniteLP assemble_primal(const DiscreteLPData& d, double rhs_shift) {
  FiniteLP lp;
  lp.sense = FiniteLP::Sense::Maximize;
  lp.row_sense = FiniteLP::RowSense::LessEqual;
  lp.var_blocks = d.n;
  lp.var_block_size = d.q;
  lp.row_blocks = d.n;
  lp.row_block_size = d.p;

  const std::size_t nv = d.n * d.q, nr = d.n * d.p;
  lp.cost = Eigen::VectorXd::Zero(nv);
  lp.rhs = Eigen::VectorXd::Zero(nr);
  lp.a = Eigen::MatrixXd::Zero(nr, nv);

  for (std::size_t u = 0; u < d.n; ++u) {
    for (std::size_t j = 0; j < d.q; ++j) lp.cost(lp.var_index(u, j)) = d.deltas[u] * d.a[u](j);
    for (std::size_t i = 0; i < d.p; ++i) lp.rhs(lp.row_index(u, i)) = d.c[u](i) + rhs_shift;
    lp.a.block(u * d.p, u * d.q, d.p, d.q) = d.b[u];
    for (std::size_t v = 0; v < u; ++v) {
      lp.a.block(u * d.p, v * d.q, d.p, d.q) = -d.deltas[v] * d.k[u][v];
    }
  }
  return lp;
}

FiniteLP assemble_dual(const DiscreteLPData& d, double rhs_shift, double cost_shift) {
  FiniteLP lp;
  lp.sense = FiniteLP::Sense::Minimize;
  lp.row_sense = FiniteLP::RowSense::GreaterEqual;
  lp.var_blocks = d.n;
  lp.var_block_size = d.p;
  lp.row_blocks = d.n;
  lp.row_block_size = d.q;

  const std::size_t nv = d.n * d.p, nr = d.n * d.q;
  lp.cost = Eigen::VectorXd::Zero(nv);
  lp.rhs = Eigen::VectorXd::Zero(nr);
  lp.a = Eigen::MatrixXd::Zero(nr, nv);

  for (std::size_t u = 0; u < d.n; ++u) {
    for (std::size_t i = 0; i < d.p; ++i)
      lp.cost(lp.var_index(u, i)) = d.deltas[u] * (d.c[u](i) + cost_shift);
    for (std::size_t j = 0; j < d.q; ++j) lp.rhs(lp.row_index(u, j)) = d.a[u](j) - rhs_shift;
    lp.a.block(u * d.q, u * d.p, d.q, d.p) = d.b[u].transpose();
    for (std::size_t v = u + 1; v < d.n; ++v) {
      lp.a.block(u * d.q, v * d.p, d.q, d.p) = -d.deltas[v] * d.k[v][u].transpose();
    }
  }
  return lp;
}

std::vector<Eigen::VectorXd> dual_to_rates(const std::vector<Eigen::VectorXd>& aggregate,
                                           const DiscreteLPData& d) {
  if (aggregate.size() != d.n) throw std::invalid_argument("dual_to_rates: block count mismatch");
  std::vector<Eigen::VectorXd> out(aggregate);
  for (std::size_t u = 0; u < d.n; ++u) {
    if (!(d.deltas[u] > 0.0)) throw std::invalid_argument("dual_to_rates: zero-width interval");
    out[u] /= d.deltas[u];
  }
  return out;
}

std::vector<Eigen::VectorXd> dual_to_aggregates(const std::vector<Eigen::VectorXd>& rates,
                                                const DiscreteLPData& d) {
  if (rates.size() != d.n) throw std::invalid_argument("dual_to_aggregates: block count mismatch");
  std::vector<Eigen::VectorXd> out(rates);
  for (std::size_t u = 0; u < d.n; ++u) out[u] *= d.deltas[u];
  return out;
}

std::vector<Eigen::VectorXd> split_blocks(const Eigen::VectorXd& flat, std::size_t blocks,
                                          std::size_t block_size) {
  if (static_cast<std::size_t>(flat.size()) != blocks * block_size)
    throw std::invalid_argument("split_blocks: size mismatch");
  std::vector<Eigen::VectorXd> out;
  out.reserve(blocks);
  for (std::size_t u = 0; u < blocks; ++u)
    out.push_back(flat.segment(static_cast<Eigen::Index>(u * block_size),
                               static_cast<Eigen::Index>(block_size)));
  return out;
}

Eigen::VectorXd join_blocks(const std::vector<Eigen::VectorXd>& blocks) {
  Eigen::Index total = 0;
  for (const auto& b : blocks) total += b.size();
  Eigen::VectorXd flat(total);
  Eigen::Index at = 0;
  for (const auto& b : blocks) {
    flat.segment(at, b.size()) = b;
    at += b.size();
  }
  return flat;
}

}  // namespace clp
