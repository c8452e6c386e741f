#include "clp/reconstruct.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <stdexcept>

namespace clp {

namespace {

std::string fmt(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

double require_sigma(const GlobalBounds& bounds, const char* who) {
  if (!bounds.b_threshold || !(*bounds.b_threshold > 0.0))
    throw std::invalid_argument(std::string(who) + ": needs a certified positive threshold for B");
  return *bounds.b_threshold;
}

}  // namespace

StepFunction::StepFunction(Partition part, std::vector<Eigen::VectorXd> blocks)
    : part_(std::move(part)), dim_(blocks.empty() ? 0 : blocks.front().size()),
      blocks_(std::move(blocks)) {
  if (blocks_.size() != part_.intervals())
    throw std::invalid_argument("StepFunction: block count must match partition intervals");
  for (const auto& b : blocks_) {
    if (static_cast<std::size_t>(b.size()) != dim_)
      throw std::invalid_argument("StepFunction: inconsistent block dimension");
  }
}

Eigen::VectorXd StepFunction::value(double t) const {
  if (t < 0.0 || t > part_.horizon()) throw std::domain_error("StepFunction: t outside [0, T]");
  if (t == part_.horizon()) return blocks_.back();
  const auto it = std::upper_bound(part_.points.begin(), part_.points.end(), t);
  return blocks_[static_cast<std::size_t>(it - part_.points.begin()) - 1];
}

double StepFunction::value(double t, std::size_t component) const { return value(t)(component); }

double StepFunction::max_abs() const {
  double m = 0.0;
  for (const auto& b : blocks_) m = std::max(m, b.lpNorm<Eigen::Infinity>());
  return m;
}

double StepFunction::max_block_sum() const {
  double m = 0.0;
  for (const auto& b : blocks_) m = std::max(m, b.lpNorm<1>());
  return m;
}

std::string StepFunction::to_csv() const {
  std::string out = "t";
  for (std::size_t d = 0; d < dim_; ++d) out += ",v" + std::to_string(d);
  out += "\n";
  const auto row = [&](double t, const Eigen::VectorXd& b) {
    out += fmt(t);
    for (Eigen::Index d = 0; d < b.size(); ++d) out += "," + fmt(b(d));
    out += "\n";
  };
  for (std::size_t u = 0; u < blocks_.size(); ++u) row(part_.points[u], blocks_[u]);
  row(part_.horizon(), blocks_.back());
  return out;
}

StepFunction primal_step(const std::vector<Eigen::VectorXd>& z_blocks, const Partition& part) {
  return StepFunction(part, z_blocks);
}

StepFunction dual_step(const std::vector<Eigen::VectorXd>& w_blocks, const Partition& part) {
  return StepFunction(part, w_blocks);
}

double rho(double t, double horizon, const GlobalBounds& bounds, RhoRate rate, double epsilon) {
  const double sigma = require_sigma(bounds, "rho");
  if (t < 0.0 || t > horizon) throw std::domain_error("rho: t outside [0, T]");
  const double r = rate == RhoRate::ColumnSum ? bounds.k_col_sum : bounds.k_sup;
  return (bounds.a_sup - epsilon) / sigma * std::exp(r * (horizon - t) / sigma);
}

std::vector<Eigen::VectorXd> dual_certificate(const Partition& part, const GlobalBounds& bounds,
                                              std::size_t p) {
  const double sigma = require_sigma(bounds, "dual_certificate");
  const std::size_t n = part.intervals();
  const double growth = 1.0 + part.mesh_norm() * bounds.k_col_sum / sigma;
  std::vector<Eigen::VectorXd> blocks(n);
  for (std::size_t u = 0; u < n; ++u) {
    const double level =
        bounds.a_sup / sigma * std::pow(growth, static_cast<double>(n - 1 - u));
    blocks[u] = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(p), level);
  }
  return blocks;
}

std::vector<Eigen::VectorXd> truncate_dual(const std::vector<Eigen::VectorXd>& d_blocks,
                                           const Partition& part, const GlobalBounds& bounds,
                                           const DiscreteLPData& data) {
  const double sigma = require_sigma(bounds, "truncate_dual");
  (void)sigma;
  if (d_blocks.size() != part.intervals())
    throw std::invalid_argument("truncate_dual: block count must match the partition");
  if (data.min_kernel_entry() < -1e-12)
    throw std::invalid_argument(
        "truncate_dual: kernel blocks must be nonnegative for the clamp to stay feasible");
  std::vector<Eigen::VectorXd> out(d_blocks);
  for (std::size_t u = 0; u < out.size(); ++u) {
    const double cap = rho(part.points[u + 1], part.horizon(), bounds, RhoRate::KernelSup, 0.0);
    for (Eigen::Index i = 0; i < out[u].size(); ++i) out[u](i) = std::min(out[u](i), cap);
  }
  return out;
}

std::vector<double> discrete_gronwall(double theta1, double theta2, std::size_t n) {
  if (theta1 < 0.0 || theta2 <= 0.0)
    throw std::invalid_argument("discrete_gronwall: needs theta1 >= 0 and theta2 > 0");
  std::vector<double> bound(n);
  for (std::size_t u = 0; u < n; ++u)
    bound[u] = theta1 * std::pow(1.0 + theta2, static_cast<double>(u));
  return bound;
}

double gronwall_bound(double theta1, double theta2, double t) {
  if (theta1 < 0.0 || theta2 <= 0.0)
    throw std::invalid_argument("gronwall_bound: needs theta1 >= 0 and theta2 > 0");
  return theta1 * std::exp(theta2 * t);
}

double primal_bound(std::size_t p, const GlobalBounds& bounds, double epsilon, double t) {
  const double sigma = require_sigma(bounds, "primal_bound");
  const double pd = static_cast<double>(p);
  return pd * (bounds.c_sup + epsilon) / sigma * std::exp(pd * bounds.k_row_sum * t / sigma);
}

}  // namespace clp
