// Command-line driver: solve / converge / perturb / replay over instance
// files, emitting CSV reports suitable for external plotting.
#include <exception>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "clp/instance_io.hpp"
#include "clp/pipeline.hpp"

namespace {

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << content;
}

std::vector<std::size_t> parse_meshes(const std::string& csv) {
  std::vector<std::size_t> out;
  std::stringstream ss(csv);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (!tok.empty()) out.push_back(static_cast<std::size_t>(std::stoul(tok)));
  }
  if (out.empty()) throw std::runtime_error("empty mesh list");
  return out;
}

std::vector<double> parse_epsilons(const std::string& csv) {
  std::vector<double> out;
  std::stringstream ss(csv);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (!tok.empty()) out.push_back(std::stod(tok));
  }
  if (out.empty()) throw std::runtime_error("empty epsilon list");
  return out;
}

std::string sibling_path(const std::string& base, const char* tag) {
  const auto dot = base.find_last_of('.');
  if (dot == std::string::npos) return base + tag;
  return base.substr(0, dot) + tag + base.substr(dot);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"continuous-time LP solver: discretize, solve, certify"};
  app.require_subcommand(1);

  std::string instance_path, report_path, dump_lp_path;
  std::size_t mesh = 64;
  double kappa = 2.0;
  double epsilon = 0.0;
  std::size_t grid = 8;
  std::string meshes_csv = "10,20,40,80";
  std::string epsilons_csv = "0,0.1,0.5,1";
  std::string lp_path;

  auto* solve_cmd = app.add_subcommand("solve", "solve one instance and verify the result");
  solve_cmd->add_option("file", instance_path, "instance JSON file")->required();
  solve_cmd->add_option("--mesh", mesh, "number of partition intervals");
  solve_cmd->add_option("--kappa", kappa, "mesh-norm constant (>= 1)");
  solve_cmd->add_option("--epsilon", epsilon, "perturbation level for the solved pair");
  solve_cmd->add_option("--grid", grid, "residual-check points per interval");
  solve_cmd->add_option("--report", report_path, "write summary CSV here (plus .primal/.dual)");
  solve_cmd->add_option("--dump-lp", dump_lp_path, "write the assembled primal LP as JSON");

  auto* conv_cmd = app.add_subcommand("converge", "mesh-refinement study");
  conv_cmd->add_option("file", instance_path, "instance JSON file")->required();
  conv_cmd->add_option("--meshes", meshes_csv, "comma-separated interval counts");
  conv_cmd->add_option("--kappa", kappa, "mesh-norm constant (>= 1)");
  conv_cmd->add_option("--grid", grid, "residual-check points per interval");
  conv_cmd->add_option("--report", report_path, "write the study CSV here");

  auto* pert_cmd = app.add_subcommand("perturb", "perturbation monotonicity table");
  pert_cmd->add_option("file", instance_path, "instance JSON file")->required();
  pert_cmd->add_option("--mesh", mesh, "number of partition intervals");
  pert_cmd->add_option("--kappa", kappa, "mesh-norm constant (>= 1)");
  pert_cmd->add_option("--epsilons", epsilons_csv, "comma-separated perturbation levels");
  pert_cmd->add_option("--report", report_path, "write the table CSV here");

  auto* replay_cmd = app.add_subcommand("replay", "re-solve a dumped LP JSON");
  replay_cmd->add_option("file", lp_path, "LP JSON produced by --dump-lp")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (solve_cmd->parsed()) {
      const clp::CLPInstance inst = clp::load_instance(instance_path);
      clp::SolveOptions opts;
      opts.mesh = mesh;
      opts.kappa = kappa;
      opts.epsilon = epsilon;
      opts.grid = grid;
      if (!dump_lp_path.empty()) {
        const auto part = clp::build_partition(inst, opts.mesh, opts.kappa);
        const auto d = clp::discretize(inst, part);
        write_file(dump_lp_path, clp::lp_to_json(clp::assemble_primal(d, opts.epsilon)).dump(2));
      }
      const clp::SolveResult r = clp::run_solve(inst, opts);
      std::cout << clp::solve_report_text(r);
      if (!report_path.empty()) {
        write_file(report_path, clp::solve_report_csv(r));
        write_file(sibling_path(report_path, ".primal"), r.z_step->to_csv());
        write_file(sibling_path(report_path, ".dual"), r.w_step->to_csv());
      }
      return r.ok() ? 0 : 1;
    }
    if (conv_cmd->parsed()) {
      const clp::CLPInstance inst = clp::load_instance(instance_path);
      const auto rep = clp::run_convergence(inst, parse_meshes(meshes_csv), kappa, grid);
      const std::string csv = clp::convergence_csv(rep);
      std::cout << csv;
      if (!report_path.empty()) write_file(report_path, csv);
      bool any_error = !rep.trend_ok;
      for (const auto& row : rep.rows) any_error = any_error || !row.error.empty();
      if (!rep.trend_ok) std::cerr << "warning: continuous gap trend is not monotone\n";
      return any_error ? 1 : 0;
    }
    if (pert_cmd->parsed()) {
      const clp::CLPInstance inst = clp::load_instance(instance_path);
      const auto table = clp::run_perturbation(inst, mesh, kappa, parse_epsilons(epsilons_csv));
      const std::string csv = clp::perturbation_csv(table);
      std::cout << csv;
      if (!report_path.empty()) write_file(report_path, csv);
      if (!table.primal_monotone) std::cerr << "warning: shifted primal optima not nondecreasing\n";
      if (!table.dual_monotone) std::cerr << "warning: shifted dual optima not nonincreasing\n";
      return table.primal_monotone && table.dual_monotone ? 0 : 1;
    }
    if (replay_cmd->parsed()) {
      const clp::FiniteLP lp = clp::load_lp(lp_path);
      const clp::LPSolution sol = clp::solve(lp);
      std::cout << "status    : " << clp::to_string(sol.status) << "\n";
      if (sol.status == clp::SolveStatus::Optimal) {
        std::cout << "objective : " << clp::format_double(sol.objective) << "\n"
                  << "iterations: " << sol.iterations << "\n";
      }
      return sol.status == clp::SolveStatus::Optimal ? 0 : 1;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
