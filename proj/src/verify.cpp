#include "clp/verify.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace clp {

namespace {

constexpr double kMonotoneTol = 1e-9;

double require_sigma(const GlobalBounds& bounds, const char* who) {
  if (!bounds.b_threshold || !(*bounds.b_threshold > 0.0))
    throw std::invalid_argument(std::string(who) + ": needs a certified positive threshold for B");
  return *bounds.b_threshold;
}

}  // namespace

std::vector<double> check_grid(const Partition& part, std::size_t per_interval) {
  if (per_interval < 3)
    throw std::invalid_argument("check_grid: need at least 3 points per interval");
  std::vector<double> pts;
  pts.reserve(part.intervals() * per_interval);
  for (std::size_t u = 0; u < part.intervals(); ++u) {
    const double mid = 0.5 * (part.points[u] + part.points[u + 1]);
    const double half = 0.5 * part.delta(u);
    pts.push_back(mid);
    const std::size_t cheb = per_interval - 1;
    for (std::size_t k = 1; k <= cheb; ++k) {
      const double angle = std::numbers::pi * (2.0 * static_cast<double>(k) - 1.0) /
                           (2.0 * static_cast<double>(cheb));
      pts.push_back(mid + half * std::cos(angle));
    }
  }
  std::sort(pts.begin(), pts.end());
  return pts;
}

ResidualDetail primal_residual(const StepFunction& z, const CLPInstance& inst,
                               std::size_t grid_per_interval) {
  inst.validate();
  const Partition& part = z.partition();
  const std::vector<double> canonical = check_grid(Partition{{0.0, 1.0}, 1.0}, grid_per_interval);
  ResidualDetail out;
  out.per_component.assign(inst.p, {0.0, 0.0});
  for (std::size_t u = 0; u < part.intervals(); ++u) {
    const double lo_u = part.points[u], hi_u = part.points[u + 1];
    for (double t : canonical) {
      const double tt = lo_u + t * (hi_u - lo_u);
      for (std::size_t i = 0; i < inst.p; ++i) {
        double lhs = 0.0;
        for (std::size_t j = 0; j < inst.q; ++j)
          lhs += inst.B.at(i, j).value(tt) * z.block(u)(static_cast<Eigen::Index>(j));
        double rhs = inst.c[i].value(tt);
        for (std::size_t j = 0; j < inst.q; ++j) {
          double integral = 0.0;
          for (std::size_t v = 0; v <= u; ++v) {
            const double lo = part.points[v];
            const double hi = std::min(part.points[v + 1], tt);
            if (hi <= lo) break;
            integral += z.block(v)(static_cast<Eigen::Index>(j)) *
                        inst.K.at(i, j).integrate_s(tt, lo, hi);
          }
          rhs += integral;
        }
        const double viol = lhs - rhs;
        if (viol > out.per_component[i].first) out.per_component[i] = {viol, tt};
        if (viol > out.max_violation) {
          out.max_violation = viol;
          out.worst_component = i;
          out.worst_t = tt;
        }
      }
    }
  }
  return out;
}

ResidualDetail dual_residual(const StepFunction& w, const CLPInstance& inst,
                             std::size_t grid_per_interval) {
  inst.validate();
  const Partition& part = w.partition();
  const std::vector<double> canonical = check_grid(Partition{{0.0, 1.0}, 1.0}, grid_per_interval);
  ResidualDetail out;
  out.per_component.assign(inst.q, {0.0, 0.0});
  for (std::size_t u = 0; u < part.intervals(); ++u) {
    const double lo_u = part.points[u], hi_u = part.points[u + 1];
    for (double t : canonical) {
      const double tt = lo_u + t * (hi_u - lo_u);
      for (std::size_t j = 0; j < inst.q; ++j) {
        double lhs = 0.0;
        for (std::size_t i = 0; i < inst.p; ++i)
          lhs += inst.B.at(i, j).value(tt) * w.block(u)(static_cast<Eigen::Index>(i));
        double rhs = inst.a[j].value(tt);
        for (std::size_t i = 0; i < inst.p; ++i) {
          double integral = 0.0;
          for (std::size_t v = u; v < part.intervals(); ++v) {
            const double lo = std::max(part.points[v], tt);
            const double hi = part.points[v + 1];
            if (hi <= lo) continue;
            integral += w.block(v)(static_cast<Eigen::Index>(i)) *
                        inst.K.at(i, j).integrate_t(tt, lo, hi);
          }
          rhs += integral;
        }
        const double viol = rhs - lhs;
        if (viol > out.per_component[j].first) out.per_component[j] = {viol, tt};
        if (viol > out.max_violation) {
          out.max_violation = viol;
          out.worst_component = j;
          out.worst_t = tt;
        }
      }
    }
  }
  return out;
}

double continuous_primal_objective(const StepFunction& z, const CLPInstance& inst) {
  const Partition& part = z.partition();
  double obj = 0.0;
  for (std::size_t u = 0; u < part.intervals(); ++u) {
    for (std::size_t j = 0; j < inst.q; ++j) {
      obj += z.block(u)(static_cast<Eigen::Index>(j)) *
             inst.a[j].integrate(part.points[u], part.points[u + 1]);
    }
  }
  return obj;
}

double continuous_dual_objective(const StepFunction& w, const CLPInstance& inst) {
  const Partition& part = w.partition();
  double obj = 0.0;
  for (std::size_t u = 0; u < part.intervals(); ++u) {
    for (std::size_t i = 0; i < inst.p; ++i) {
      obj += w.block(u)(static_cast<Eigen::Index>(i)) *
             inst.c[i].integrate(part.points[u], part.points[u + 1]);
    }
  }
  return obj;
}

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Holds: return "holds";
    case Verdict::NotApplicable: return "not_applicable";
    case Verdict::Violated: return "violated";
  }
  return "unknown";
}

WeakDualityReport weak_duality_check(const StepFunction& z, const StepFunction& w,
                                     const CLPInstance& inst, double tol_feas,
                                     std::size_t grid_per_interval) {
  WeakDualityReport rep;
  rep.primal_res = primal_residual(z, inst, grid_per_interval).max_violation;
  rep.dual_res = dual_residual(w, inst, grid_per_interval).max_violation;
  rep.primal_objective = continuous_primal_objective(z, inst);
  rep.dual_objective = continuous_dual_objective(w, inst);
  if (rep.primal_res > tol_feas || rep.dual_res > tol_feas) {
    rep.verdict = Verdict::NotApplicable;
    return rep;
  }
  const GlobalBounds g = global_bounds(inst);
  const double horizon = inst.horizon;
  const double eps_slack = std::max(rep.primal_res, rep.dual_res);
  rep.slack = static_cast<double>(inst.p) * static_cast<double>(inst.q) * g.k_sup * horizon *
                  horizon * eps_slack +
              (static_cast<double>(inst.p) + static_cast<double>(inst.q)) * horizon * eps_slack *
                  (1.0 + z.max_abs() + w.max_abs()) +
              1e-12 * (1.0 + std::fabs(rep.dual_objective));
  rep.verdict =
      rep.primal_objective <= rep.dual_objective + rep.slack ? Verdict::Holds : Verdict::Violated;
  return rep;
}

EpsilonCertificate certify_epsilon(const CLPInstance& inst, const Partition& part,
                                   const GlobalBounds& bounds) {
  const double sigma = require_sigma(bounds, "certify_epsilon");
  EpsilonCertificate cert;
  cert.oscillation = oscillations(inst, part).max_osc;
  cert.eps_bar = std::max(cert.oscillation, part.mesh_norm());
  const double horizon = inst.horizon;
  const double dual_cap = bounds.a_sup / sigma * std::exp(bounds.k_sup * horizon / sigma);
  const double p = static_cast<double>(inst.p);
  cert.eps1 = p * cert.eps_bar * dual_cap;
  cert.eps2 = p * cert.eps_bar * dual_cap * (bounds.k_sup + part.kappa * horizon);
  cert.total = cert.eps_bar + cert.eps1 + cert.eps2;
  return cert;
}

BoundAudit bound_audit(const std::vector<Eigen::VectorXd>& z_blocks,
                       const std::vector<Eigen::VectorXd>& w_blocks, const Partition& part,
                       const GlobalBounds& bounds, std::size_t constraint_count, double epsilon) {
  const double sigma = require_sigma(bounds, "bound_audit");
  BoundAudit audit;
  audit.all_pass = true;
  const std::size_t n = part.intervals();
  const double p = static_cast<double>(constraint_count);

  const double theta1 = p * (bounds.c_sup + epsilon) / sigma;
  const double theta2 = p * bounds.k_col_sum * part.mesh_norm() / sigma;
  audit.primal_cap =
      theta1 * std::exp(p * bounds.k_col_sum * part.kappa * part.horizon() / sigma);
  audit.primal_bound_note =
      "block 1-norm <= (p*(c_sup+eps)/sigma)*(1+p*k_col_sum*mesh/sigma)^(u-1); the row-sum "
      "factor uses the constraint count p";

  for (std::size_t u = 0; u < z_blocks.size() && u < n; ++u) {
    AuditRow row;
    row.block = u;
    row.value = z_blocks[u].lpNorm<1>();
    row.bound = theta1 * std::pow(1.0 + theta2, static_cast<double>(u));
    row.pass = row.value <= row.bound * (1.0 + 1e-9) + 1e-9 &&
               row.value <= audit.primal_cap * (1.0 + 1e-9) + 1e-9;
    audit.all_pass = audit.all_pass && row.pass;
    audit.primal_rows.push_back(row);
  }
  for (std::size_t u = 0; u < w_blocks.size() && u < n; ++u) {
    AuditRow row;
    row.block = u;
    row.value = w_blocks[u].size() > 0 ? w_blocks[u].maxCoeff() : 0.0;
    row.bound = rho(part.points[u + 1], part.horizon(), bounds, RhoRate::KernelSup, 0.0);
    row.pass = row.value <= row.bound * (1.0 + 1e-9) + 1e-9;
    audit.all_pass = audit.all_pass && row.pass;
    audit.dual_rows.push_back(row);
  }
  return audit;
}

PerturbationTable perturbation_monotonicity(const CLPInstance& inst, const Partition& part,
                                            const std::vector<double>& epsilons) {
  for (std::size_t k = 0; k < epsilons.size(); ++k) {
    if (epsilons[k] < 0.0)
      throw std::invalid_argument("perturbation_monotonicity: epsilons must be nonnegative");
    if (k > 0 && epsilons[k] < epsilons[k - 1])
      throw std::invalid_argument("perturbation_monotonicity: epsilons must be sorted");
  }
  const DiscreteLPData d = discretize(inst, part);
  PerturbationTable table;
  for (double eps : epsilons) {
    PerturbationRow row;
    row.epsilon = eps;
    const LPSolution primal = solve(assemble_primal(d, eps));
    const LPSolution dual = solve(assemble_dual(d, eps, 0.0));
    row.primal_status = primal.status;
    row.dual_status = dual.status;
    if (primal.status == SolveStatus::Optimal) row.primal_objective = primal.objective;
    if (dual.status == SolveStatus::Optimal) row.dual_objective = dual.objective;
    table.rows.push_back(row);
  }
  table.primal_monotone = true;
  table.dual_monotone = true;
  for (std::size_t k = 1; k < table.rows.size(); ++k) {
    const auto& prev = table.rows[k - 1];
    const auto& cur = table.rows[k];
    if (prev.primal_status == SolveStatus::Optimal && cur.primal_status == SolveStatus::Optimal &&
        cur.primal_objective < prev.primal_objective - kMonotoneTol)
      table.primal_monotone = false;
    if (prev.dual_status == SolveStatus::Optimal && cur.dual_status == SolveStatus::Optimal &&
        cur.dual_objective > prev.dual_objective + kMonotoneTol)
      table.dual_monotone = false;
  }
  return table;
}

}  // namespace clp
