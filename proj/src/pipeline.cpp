#include "clp/pipeline.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <stdexcept>

namespace clp {

namespace {

constexpr double kGapTol = 1e-8;

[[noreturn]] void stage_fail(const char* stage, const std::string& what) {
  throw std::runtime_error(std::string("[") + stage + "] " + what);
}

template <typename F>
auto stage(const char* name, F&& f) {
  try {
    return f();
  } catch (const std::exception& e) {
    stage_fail(name, e.what());
  }
}

}  // namespace

std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

bool SolveResult::ok() const {
  if (lp_gap > kGapTol * (1.0 + std::fabs(primal_lp.objective))) return false;
  if (audit && !audit->all_pass) return false;
  if (eps_cert && dual_res.max_violation > eps_cert->total + 1e-9) return false;
  if (weak.verdict == Verdict::Violated) return false;
  return true;
}

SolveResult run_solve(const CLPInstance& inst, const SolveOptions& opts) {
  const auto t0 = std::chrono::steady_clock::now();
  SolveResult r;

  r.part = stage("partition", [&] { return build_partition(inst, opts.mesh, opts.kappa); });
  const DiscreteLPData d = stage("discretize", [&] { return discretize(inst, r.part); });

  r.bounds = stage("bounds", [&] { return global_bounds(inst); });
  r.sigma = detect_sigma(inst.B, 1e-9);
  if (r.sigma.ok()) r.bounds.b_threshold = r.sigma.sigma;
  r.certified = r.sigma.ok() && d.min_kernel_entry() >= -1e-12;

  const FiniteLP primal_lp = stage("assemble", [&] { return assemble_primal(d, opts.epsilon); });
  const FiniteLP dual_lp = stage("assemble", [&] { return assemble_dual(d, 0.0, opts.epsilon); });

  r.primal_lp = stage("solve", [&] { return solve(primal_lp); });
  r.dual_lp = stage("solve", [&] { return solve(dual_lp); });
  if (r.primal_lp.status != SolveStatus::Optimal)
    stage_fail("solve", std::string("primal LP not optimal: ") + to_string(r.primal_lp.status) +
                            (r.primal_lp.note.empty() ? "" : " (" + r.primal_lp.note + ")"));
  if (r.dual_lp.status != SolveStatus::Optimal)
    stage_fail("solve", std::string("dual LP not optimal: ") + to_string(r.dual_lp.status) +
                            (r.dual_lp.note.empty() ? "" : " (" + r.dual_lp.note + ")"));
  r.lp_gap = std::fabs(r.primal_lp.objective - r.dual_lp.objective);
  if (r.lp_gap > kGapTol * (1.0 + std::fabs(r.primal_lp.objective)))
    stage_fail("solve", "finite LP pair gap " + format_double(r.lp_gap) +
                            " exceeds tolerance; the pair must agree at optimality");

  r.z_blocks = split_blocks(r.primal_lp.primal, d.n, d.q);
  r.w_blocks = split_blocks(r.dual_lp.primal, d.n, d.p);
  r.w_truncated = r.certified
                      ? stage("truncate",
                              [&] { return truncate_dual(r.w_blocks, r.part, r.bounds, d); })
                      : r.w_blocks;

  r.z_step = stage("reconstruct", [&] { return primal_step(r.z_blocks, r.part); });
  r.w_step = stage("reconstruct", [&] { return dual_step(r.w_truncated, r.part); });

  stage("verify", [&] {
    r.primal_res = primal_residual(*r.z_step, inst, opts.grid);
    r.dual_res = dual_residual(*r.w_step, inst, opts.grid);
    r.cont_primal_objective = continuous_primal_objective(*r.z_step, inst);
    r.cont_dual_objective = continuous_dual_objective(*r.w_step, inst);
    r.cont_gap = r.cont_dual_objective - r.cont_primal_objective;
    if (r.certified) {
      r.eps_cert = certify_epsilon(inst, r.part, r.bounds);
      r.audit = bound_audit(r.z_blocks, r.w_truncated, r.part, r.bounds, inst.p, opts.epsilon);
      r.weak = weak_duality_check(*r.z_step, *r.w_step, inst, r.eps_cert->total + 1e-9, opts.grid);

      const double sigma = *r.bounds.b_threshold;
      r.certs.a_sup = r.bounds.a_sup;
      r.certs.sigma = sigma;
      r.certs.rate = r.bounds.k_sup;
      r.certs.epsilon = opts.epsilon;
      r.certs.theta1 = static_cast<double>(inst.p) * (r.bounds.c_sup + opts.epsilon) / sigma;
      r.certs.theta2 =
          static_cast<double>(inst.p) * r.bounds.k_col_sum * r.part.mesh_norm() / sigma;
      for (const auto& block : dual_certificate(r.part, r.bounds, inst.p))
        r.certs.dual_cert_values.push_back(block(0));
    } else {
      r.weak = weak_duality_check(*r.z_step, *r.w_step, inst, 1e-9, opts.grid);
    }
    return 0;
  });

  r.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

ConvergenceReport run_convergence(const CLPInstance& inst, std::vector<std::size_t> meshes,
                                  double kappa, std::size_t grid) {
  std::sort(meshes.begin(), meshes.end());
  ConvergenceReport rep;
  for (std::size_t n : meshes) {
    ConvergenceRow row;
    row.mesh = n;
    try {
      SolveOptions opts;
      opts.mesh = n;
      opts.kappa = kappa;
      opts.grid = grid;
      const SolveResult r = run_solve(inst, opts);
      row.mesh_norm = r.part.mesh_norm();
      row.primal_lp_objective = r.primal_lp.objective;
      row.dual_lp_objective = r.dual_lp.objective;
      row.lp_gap = r.lp_gap;
      row.cont_primal_objective = r.cont_primal_objective;
      row.cont_dual_objective = r.cont_dual_objective;
      row.cont_gap = r.cont_gap;
      row.certified_epsilon = r.eps_cert ? r.eps_cert->total : std::nan("");
      row.primal_res = r.primal_res.max_violation;
      row.dual_res = r.dual_res.max_violation;
      row.wall_seconds = r.wall_seconds;
    } catch (const std::exception& e) {
      row.error = e.what();
    }
    rep.rows.push_back(row);
  }
  for (std::size_t k = 1; k < rep.rows.size(); ++k) {
    const auto& prev = rep.rows[k - 1];
    const auto& cur = rep.rows[k];
    if (!prev.error.empty() || !cur.error.empty()) continue;
    if (cur.mesh >= 2 * prev.mesh && cur.cont_gap > prev.cont_gap * 1.10 + 1e-12)
      rep.trend_ok = false;
  }
  return rep;
}

PerturbationTable run_perturbation(const CLPInstance& inst, std::size_t mesh, double kappa,
                                   const std::vector<double>& epsilons) {
  const Partition part = build_partition(inst, mesh, kappa);
  return perturbation_monotonicity(inst, part, epsilons);
}

std::string solve_report_csv(const SolveResult& r) {
  std::string out = "metric,value\n";
  const auto kv = [&](const char* k, double v) { out += std::string(k) + "," + format_double(v) + "\n"; };
  out += std::string("status,") + (r.ok() ? "pass" : "fail") + "\n";
  kv("mesh", static_cast<double>(r.part.intervals()));
  kv("mesh_norm", r.part.mesh_norm());
  kv("kappa", r.part.kappa);
  kv("primal_lp_objective", r.primal_lp.objective);
  kv("dual_lp_objective", r.dual_lp.objective);
  kv("lp_gap", r.lp_gap);
  kv("cont_primal_objective", r.cont_primal_objective);
  kv("cont_dual_objective", r.cont_dual_objective);
  kv("cont_gap", r.cont_gap);
  kv("primal_residual", r.primal_res.max_violation);
  kv("dual_residual", r.dual_res.max_violation);
  if (r.eps_cert) {
    kv("certified_epsilon", r.eps_cert->total);
    kv("oscillation", r.eps_cert->oscillation);
  }
  if (r.bounds.b_threshold) kv("sigma", *r.bounds.b_threshold);
  kv("a_sup", r.bounds.a_sup);
  kv("c_sup", r.bounds.c_sup);
  kv("k_sup", r.bounds.k_sup);
  out += std::string("weak_duality,") + to_string(r.weak.verdict) + "\n";
  if (r.audit) out += std::string("bound_audit,") + (r.audit->all_pass ? "pass" : "fail") + "\n";
  return out;
}

std::string convergence_csv(const ConvergenceReport& r) {
  std::string out =
      "mesh,mesh_norm,primal_lp_objective,dual_lp_objective,lp_gap,cont_primal_objective,"
      "cont_dual_objective,cont_gap,certified_epsilon,primal_residual,dual_residual,error\n";
  for (const auto& row : r.rows) {
    out += std::to_string(row.mesh) + ",";
    if (row.error.empty()) {
      out += format_double(row.mesh_norm) + "," + format_double(row.primal_lp_objective) + "," +
             format_double(row.dual_lp_objective) + "," + format_double(row.lp_gap) + "," +
             format_double(row.cont_primal_objective) + "," +
             format_double(row.cont_dual_objective) + "," + format_double(row.cont_gap) + "," +
             format_double(row.certified_epsilon) + "," + format_double(row.primal_res) + "," +
             format_double(row.dual_res) + ",";
    } else {
      out += ",,,,,,,,,,";
      std::string msg = row.error;
      std::replace(msg.begin(), msg.end(), ',', ';');
      std::replace(msg.begin(), msg.end(), '\n', ' ');
      out += msg;
    }
    out += "\n";
  }
  return out;
}

std::string perturbation_csv(const PerturbationTable& t) {
  std::string out = "epsilon,primal_status,primal_objective,dual_status,dual_objective\n";
  for (const auto& row : t.rows) {
    out += format_double(row.epsilon) + "," + to_string(row.primal_status) + "," +
           format_double(row.primal_objective) + "," + to_string(row.dual_status) + "," +
           format_double(row.dual_objective) + "\n";
  }
  return out;
}

std::string solve_report_text(const SolveResult& r) {
  std::string out;
  out += "mesh intervals        : " + std::to_string(r.part.intervals()) + "\n";
  out += "mesh norm             : " + format_double(r.part.mesh_norm()) + "\n";
  out += "primal LP objective   : " + format_double(r.primal_lp.objective) + "\n";
  out += "dual LP objective     : " + format_double(r.dual_lp.objective) + "\n";
  out += "LP gap                : " + format_double(r.lp_gap) + "\n";
  out += "continuous primal obj : " + format_double(r.cont_primal_objective) + "\n";
  out += "continuous dual obj   : " + format_double(r.cont_dual_objective) + "\n";
  out += "continuous gap        : " + format_double(r.cont_gap) + "\n";
  out += "primal residual       : " + format_double(r.primal_res.max_violation) + "\n";
  out += "dual residual         : " + format_double(r.dual_res.max_violation) + "\n";
  if (r.eps_cert) {
    out += "certified epsilon     : " + format_double(r.eps_cert->total) + "\n";
    out += "  oscillation         : " + format_double(r.eps_cert->oscillation) + "\n";
  }
  if (r.sigma.ok()) {
    out += "sigma threshold       : " + format_double(*r.sigma.sigma) + "\n";
  } else {
    out += "sigma threshold       : not certified (" + r.sigma.failure + ")\n";
  }
  out += std::string("weak duality          : ") + to_string(r.weak.verdict) + "\n";
  if (r.audit) {
    out += std::string("bound audit           : ") + (r.audit->all_pass ? "pass" : "fail") + "\n";
    out += "  " + r.audit->primal_bound_note + "\n";
  }
  out += "wall time             : " + format_double(r.wall_seconds) + " s\n";
  out += std::string("overall               : ") + (r.ok() ? "pass" : "fail") + "\n";
  return out;
}

}  // namespace clp
