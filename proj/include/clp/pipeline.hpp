#ifndef CTLP_PIPELINE_HPP
#define CTLP_PIPELINE_HPP

#include <optional>
#include <string>
#include <vector>

#include "clp/discretize.hpp"
#include "clp/mesh.hpp"
#include "clp/reconstruct.hpp"
#include "clp/simplex.hpp"
#include "clp/verify.hpp"

namespace clp {

struct SolveOptions {
  std::size_t mesh = 64;
  double kappa = 2.0;
  double epsilon = 0.0;  // perturbation level applied to the solved pair
  std::size_t grid = 8;  // residual-check points per interval
};

// Everything one discretize-solve-reconstruct-verify pass produces.
struct SolveResult {
  Partition part{{0.0, 1.0}, 2.0};
  GlobalBounds bounds;
  SigmaCertificate sigma;
  bool certified = false;  // threshold found and kernel blocks nonnegative

  LPSolution primal_lp;
  LPSolution dual_lp;
  double lp_gap = 0.0;

  std::vector<Eigen::VectorXd> z_blocks;
  std::vector<Eigen::VectorXd> w_blocks;     // rescaled dual rates
  std::vector<Eigen::VectorXd> w_truncated;  // clamped at the bounding curve
  std::optional<StepFunction> z_step;
  std::optional<StepFunction> w_step;  // built from the truncated blocks

  double cont_primal_objective = 0.0;
  double cont_dual_objective = 0.0;
  double cont_gap = 0.0;
  ResidualDetail primal_res;
  ResidualDetail dual_res;
  std::optional<EpsilonCertificate> eps_cert;
  std::optional<BoundAudit> audit;
  WeakDualityReport weak;
  CertificateBundle certs;

  double wall_seconds = 0.0;

  bool ok() const;  // gap within tolerance and every available audit green
};

// partition -> discretize -> assemble -> solve both -> truncate ->
// reconstruct -> verify. Throws with a [stage] tag on hard failures,
// including an LP pair gap above 1e-8.
SolveResult run_solve(const CLPInstance& inst, const SolveOptions& opts);

struct ConvergenceRow {
  std::size_t mesh = 0;
  double mesh_norm = 0.0;
  double primal_lp_objective = 0.0;
  double dual_lp_objective = 0.0;
  double lp_gap = 0.0;
  double cont_primal_objective = 0.0;
  double cont_dual_objective = 0.0;
  double cont_gap = 0.0;
  double certified_epsilon = 0.0;
  double primal_res = 0.0;
  double dual_res = 0.0;
  double wall_seconds = 0.0;
  std::string error;  // nonempty when this mesh failed
};

struct ConvergenceReport {
  std::vector<ConvergenceRow> rows;  // sorted by mesh size
  bool trend_ok = true;  // continuous gap nonincreasing across doublings (10% slack)
};

ConvergenceReport run_convergence(const CLPInstance& inst, std::vector<std::size_t> meshes,
                                  double kappa, std::size_t grid);

PerturbationTable run_perturbation(const CLPInstance& inst, std::size_t mesh, double kappa,
                                   const std::vector<double>& epsilons);

// Deterministic CSV renderings (shortest round-trip numerals, no timing
// columns, byte-identical across runs).
std::string solve_report_csv(const SolveResult& r);
std::string convergence_csv(const ConvergenceReport& r);
std::string perturbation_csv(const PerturbationTable& t);

// Human-readable summary (includes wall time).
std::string solve_report_text(const SolveResult& r);

std::string format_double(double v);

}  // namespace clp

#endif
