#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "clp/pipeline.hpp"
#include "clp/verify.hpp"
#include "support.hpp"

using namespace clp;

namespace {

StepFunction constant_step(const Partition& part, std::size_t dim, double value) {
  std::vector<Eigen::VectorXd> blocks(part.intervals(),
                                      Eigen::VectorXd::Constant(static_cast<Eigen::Index>(dim), value));
  return StepFunction(part, blocks);
}

}  // namespace

TEST_CASE("check grid avoids partition points") {
  const Partition part{{0.0, 0.25, 1.0}, 2.0};
  const auto grid = check_grid(part, 8);
  CHECK(grid.size() == 16);
  for (double t : grid) {
    for (double b : part.points) CHECK(t != b);
    CHECK(t > 0.0);
    CHECK(t < 1.0);
  }
  CHECK_THROWS_AS(check_grid(part, 2), std::invalid_argument);
}

TEST_CASE("primal residual") {
  const auto inst = testsup::volterra_unit();
  SUBCASE("zero solution is feasible when c >= 0") {
    const Partition part{{0.0, 0.5, 1.0}, 2.0};
    CHECK(primal_residual(constant_step(part, 1, 0.0), inst, 8).max_violation ==
          doctest::Approx(0.0));
  }
  SUBCASE("constant two violates by one when the kernel is off") {
    auto k0 = testsup::diagonal_unit();
    const Partition part{{0.0, 0.5, 1.0}, 2.0};
    const auto res = primal_residual(constant_step(part, 1, 2.0), k0, 8);
    CHECK(res.max_violation == doctest::Approx(1.0));
    REQUIRE(res.per_component.size() == 1);
    CHECK(res.per_component[0].first == doctest::Approx(1.0));
    CHECK(res.worst_component == 0);
  }
  SUBCASE("optimal blocks stay within the mesh-driven bound") {
    for (std::size_t n : {5, 10, 20}) {
      const auto part = build_partition(inst, n, 2.0);
      const auto d = discretize(inst, part);
      const auto sol = solve(assemble_primal(d));
      REQUIRE(sol.status == SolveStatus::Optimal);
      const auto z = primal_step(split_blocks(sol.primal, d.n, d.q), part);
      const auto res = primal_residual(z, inst, 8);
      // A-priori bound nu * mesh * max block norm; the unit instance is
      // exactly feasible so the measurement is far below it.
      const double bound = 1.0 * part.mesh_norm() * z.max_block_sum();
      CHECK(res.max_violation <= bound + 1e-12);
      CHECK(res.max_violation <= 1e-10);
    }
  }
}

TEST_CASE("dual residual") {
  const auto inst = testsup::volterra_unit();
  SUBCASE("kernel-free cover is exactly feasible") {
    const auto k0 = testsup::diagonal_unit();
    const Partition part{{0.0, 0.5, 1.0}, 2.0};
    CHECK(dual_residual(constant_step(part, 1, 1.0), k0, 8).max_violation == doctest::Approx(0.0));
  }
  SUBCASE("optimal dual blocks obey the mesh-driven bound") {
    for (std::size_t n : {5, 10, 20}) {
      const auto part = build_partition(inst, n, 2.0);
      const auto d = discretize(inst, part);
      const auto sol = solve(assemble_dual(d));
      REQUIRE(sol.status == SolveStatus::Optimal);
      const auto w = dual_step(split_blocks(sol.primal, d.n, d.p), part);
      const auto res = dual_residual(w, inst, 8);
      const double bound = 1.0 * part.mesh_norm() * w.max_block_sum();
      CHECK(res.max_violation <= bound + 1e-12);
      CHECK(res.max_violation > 0.0);  // lag behind the integral tail
    }
  }
  SUBCASE("certificate cover is feasible up to the oscillation allowance") {
    std::mt19937 rng(555u);
    for (int rep = 0; rep < 10; ++rep) {
      const auto rinst = testsup::random_certified_instance(rng);
      const auto part = build_partition(rinst, 8, 2.0);
      auto bounds = global_bounds(rinst);
      const auto cert = detect_sigma(rinst.B, 1e-9);
      REQUIRE(cert.ok());
      bounds.b_threshold = cert.sigma;
      const auto w = dual_step(dual_certificate(part, bounds, rinst.p), part);
      const auto eps = certify_epsilon(rinst, part, bounds);
      CHECK(dual_residual(w, rinst, 8).max_violation <= eps.total + 1e-9);
    }
  }
}

TEST_CASE("weak duality check") {
  SUBCASE("unit instance closed form at several meshes") {
    const auto inst = testsup::volterra_unit();
    for (std::size_t n : {4, 8, 16}) {
      const auto part = build_partition(inst, n, 2.0);
      const auto d = discretize(inst, part);
      const auto zsol = solve(assemble_primal(d));
      const auto wsol = solve(assemble_dual(d));
      REQUIRE(zsol.status == SolveStatus::Optimal);
      const auto z = primal_step(split_blocks(zsol.primal, d.n, d.q), part);
      const auto w = dual_step(split_blocks(wsol.primal, d.n, d.p), part);
      // Both objectives collapse to the LP sums for constant coefficients.
      const double closed = std::pow(1.0 + 1.0 / n, static_cast<double>(n)) - 1.0;
      CHECK(continuous_primal_objective(z, inst) == doctest::Approx(closed).epsilon(1e-10));
      CHECK(continuous_dual_objective(w, inst) == doctest::Approx(closed).epsilon(1e-10));
      // Both step functions are near-feasible: the dual lags by at most
      // nu * mesh * max block sum.
      const double tol_feas = part.mesh_norm() * w.max_block_sum() * 1.01;
      const auto rep = weak_duality_check(z, w, inst, tol_feas);
      CHECK(rep.verdict == Verdict::Holds);
    }
  }
  SUBCASE("zero primal against any feasible dual") {
    const auto inst = testsup::diagonal_unit();
    const Partition part{{0.0, 0.5, 1.0}, 2.0};
    const auto rep =
        weak_duality_check(constant_step(part, 1, 0.0), constant_step(part, 1, 1.5), inst, 1e-9);
    CHECK(rep.verdict == Verdict::Holds);
    CHECK(rep.primal_objective == doctest::Approx(0.0));
  }
  SUBCASE("infeasible inputs yield not-applicable, never a violation claim") {
    const auto inst = testsup::diagonal_unit();
    const Partition part{{0.0, 0.5, 1.0}, 2.0};
    const auto rep =
        weak_duality_check(constant_step(part, 1, 5.0), constant_step(part, 1, 0.0), inst, 1e-9);
    CHECK(rep.verdict == Verdict::NotApplicable);
  }
  SUBCASE("never flags exact kernel-free optima") {
    std::mt19937 rng(808u);
    testsup::GenOptions opt;
    opt.zero_kernel = true;
    for (int rep = 0; rep < 40; ++rep) {
      const auto inst = testsup::random_certified_instance(rng, opt);
      const auto part = build_partition(inst, 4, 2.0);
      const auto d = discretize(inst, part);
      const auto zsol = solve(assemble_primal(d));
      const auto wsol = solve(assemble_dual(d));
      REQUIRE(zsol.status == SolveStatus::Optimal);
      REQUIRE(wsol.status == SolveStatus::Optimal);
      const auto z = primal_step(split_blocks(zsol.primal, d.n, d.q), part);
      const auto w = dual_step(split_blocks(wsol.primal, d.n, d.p), part);
      const auto wd = weak_duality_check(z, w, inst, 1e-9);
      REQUIRE(wd.verdict != Verdict::NotApplicable);
      CHECK(wd.verdict == Verdict::Holds);
    }
  }
}

TEST_CASE("epsilon certification") {
  SUBCASE("constant coefficients leave only the mesh term") {
    const auto inst = testsup::volterra_unit();
    const auto part = build_partition(inst, 10, 2.0);
    auto bounds = global_bounds(inst);
    bounds.b_threshold = 1.0;
    const auto cert = certify_epsilon(inst, part, bounds);
    CHECK(cert.oscillation == doctest::Approx(0.0));
    CHECK(cert.eps_bar == doctest::Approx(part.mesh_norm()));
    // eps = mesh * (1 + p*W + p*W*(eta + kappa*T)) with W = e.
    const double w = std::exp(1.0);
    CHECK(cert.total == doctest::Approx(part.mesh_norm() * (1.0 + w + w * 3.0)));
  }
  SUBCASE("halving the mesh roughly halves the certificate for affine data") {
    auto inst = testsup::volterra_unit();
    inst.a = {PiecewiseFn1D::single(1.0, Piece1D::poly({0.5, 0.5}))};
    auto bounds = global_bounds(inst);
    bounds.b_threshold = 1.0;
    const auto coarse = certify_epsilon(inst, build_partition(inst, 8, 2.0), bounds);
    const auto fine = certify_epsilon(inst, build_partition(inst, 16, 2.0), bounds);
    CHECK(fine.total == doctest::Approx(coarse.total / 2.0).epsilon(0.05));
  }
  SUBCASE("reconstructed truncated dual satisfies the certified relaxation") {
    std::mt19937 rng(31337u);
    testsup::GenOptions opt;
    opt.polynomial_pieces = true;
    for (int rep = 0; rep < 10; ++rep) {
      const auto inst = testsup::random_certified_instance(rng, opt);
      SolveOptions opts;
      opts.mesh = 12;
      const auto r = run_solve(inst, opts);
      REQUIRE(r.certified);
      REQUIRE(r.eps_cert.has_value());
      CHECK(r.dual_res.max_violation <= r.eps_cert->total + 1e-9);
    }
  }
}

TEST_CASE("bound audit") {
  SUBCASE("unit-kernel equality case passes") {
    const auto inst = testsup::volterra_unit();
    const auto part = build_partition(inst, 10, 2.0);
    const auto d = discretize(inst, part);
    const auto zsol = solve(assemble_primal(d));
    const auto wsol = solve(assemble_dual(d));
    auto bounds = global_bounds(inst);
    bounds.b_threshold = 1.0;
    const auto w_trunc =
        truncate_dual(split_blocks(wsol.primal, d.n, d.p), part, bounds, d);
    const auto audit = bound_audit(split_blocks(zsol.primal, d.n, d.q), w_trunc, part, bounds,
                                   inst.p, 0.0);
    CHECK(audit.all_pass);
    // The first primal block saturates its bound: z_1 = 1 = p*c_sup/sigma.
    CHECK(audit.primal_rows[0].value == doctest::Approx(audit.primal_rows[0].bound));
  }
  SUBCASE("truncated duals always sit under the curve") {
    std::mt19937 rng(99887u);
    for (int rep = 0; rep < 20; ++rep) {
      const auto inst = testsup::random_certified_instance(rng);
      SolveOptions opts;
      opts.mesh = 8;
      const auto r = run_solve(inst, opts);
      REQUIRE(r.certified);
      REQUIRE(r.audit.has_value());
      for (const auto& row : r.audit->dual_rows) CHECK(row.pass);
    }
  }
  SUBCASE("oversized block fails the audit") {
    const auto inst = testsup::volterra_unit();
    const Partition part{{0.0, 0.5, 1.0}, 2.0};
    auto bounds = global_bounds(inst);
    bounds.b_threshold = 1.0;
    std::vector<Eigen::VectorXd> huge{Eigen::VectorXd::Constant(1, 100.0),
                                      Eigen::VectorXd::Constant(1, 100.0)};
    const auto audit = bound_audit(huge, {}, part, bounds, inst.p, 0.0);
    CHECK(!audit.all_pass);
  }
}

TEST_CASE("a-priori primal residual bound holds even for mixed-sign kernels") {
  std::mt19937 rng(246810u);
  testsup::GenOptions opt;
  opt.mixed_kernel = true;
  for (int rep = 0; rep < 15; ++rep) {
    const auto inst = testsup::random_certified_instance(rng, opt);
    const auto part = build_partition(inst, 8, 2.0);
    const auto d = discretize(inst, part);
    const auto sol = solve(assemble_primal(d));
    REQUIRE(sol.status == SolveStatus::Optimal);
    const auto z = primal_step(split_blocks(sol.primal, d.n, d.q), part);
    const auto bounds = global_bounds(inst);
    const double eps_bar = oscillations(inst, part).max_osc;
    const double predicted = bounds.k_col_sum * part.mesh_norm() * z.max_block_sum() +
                             eps_bar * (1.0 + z.max_block_sum());
    CHECK(primal_residual(z, inst, 8).max_violation <= predicted + 1e-12);
  }
}

TEST_CASE("continuous gap obeys its certificate bound and shrinks under refinement") {
  std::mt19937 rng(135791u);
  testsup::GenOptions opt;
  opt.polynomial_pieces = true;
  opt.max_breaks = 0;
  for (int rep = 0; rep < 5; ++rep) {
    const auto inst = testsup::random_certified_instance(rng, opt);
    std::vector<double> gaps;
    for (std::size_t n : {8, 16, 32, 64}) {
      SolveOptions opts;
      opts.mesh = n;
      const auto r = run_solve(inst, opts);
      REQUIRE(r.certified);
      const double norms = 1.0 + std::max(r.z_step->max_abs(), r.w_step->max_abs());
      const double cap = r.eps_cert->total *
                         (static_cast<double>(inst.p) + static_cast<double>(inst.q)) *
                         inst.horizon * norms;
      CHECK(std::fabs(r.cont_gap) <= cap + 1e-9);
      gaps.push_back(std::fabs(r.cont_gap));
    }
    // Trend only: each doubling may wobble a little but the end of the
    // ladder has to come down.
    for (std::size_t k = 1; k < gaps.size(); ++k) CHECK(gaps[k] <= gaps[k - 1] * 1.5 + 1e-9);
    CHECK(gaps.back() <= gaps.front() * 0.9 + 1e-9);
  }
}

TEST_CASE("perturbation monotonicity") {
  SUBCASE("epsilon zero matches the unperturbed pair") {
    const auto inst = testsup::volterra_unit();
    const auto part = build_partition(inst, 8, 2.0);
    const auto d = discretize(inst, part);
    const auto base_primal = solve(assemble_primal(d));
    const auto base_dual = solve(assemble_dual(d));
    const auto table = perturbation_monotonicity(inst, part, {0.0, 0.5});
    REQUIRE(table.rows.size() == 2);
    CHECK(table.rows[0].primal_objective == doctest::Approx(base_primal.objective));
    CHECK(table.rows[0].dual_objective == doctest::Approx(base_dual.objective));
  }
  SUBCASE("unit instance doubles at epsilon one") {
    const auto inst = testsup::volterra_unit();
    const auto part = build_partition(inst, 8, 2.0);
    const auto table = perturbation_monotonicity(inst, part, {0.0, 1.0});
    const double base = table.rows[0].primal_objective;
    CHECK(table.rows[1].primal_objective == doctest::Approx(2.0 * base).epsilon(1e-10));
  }
  SUBCASE("monotone trends on random instances") {
    std::mt19937 rng(60606u);
    for (int rep = 0; rep < 20; ++rep) {
      const auto inst = testsup::random_certified_instance(rng);
      const auto part = build_partition(inst, 5, 2.0);
      const auto table = perturbation_monotonicity(inst, part, {0.0, 0.1, 0.5, 1.0});
      CHECK(table.primal_monotone);
      CHECK(table.dual_monotone);
      for (const auto& row : table.rows) {
        CHECK(row.primal_status == SolveStatus::Optimal);
        CHECK(row.dual_status == SolveStatus::Optimal);
      }
    }
  }
  SUBCASE("unsorted or negative lists are rejected") {
    const auto inst = testsup::volterra_unit();
    const auto part = build_partition(inst, 4, 2.0);
    CHECK_THROWS_AS(perturbation_monotonicity(inst, part, {0.5, 0.1}), std::invalid_argument);
    CHECK_THROWS_AS(perturbation_monotonicity(inst, part, {-0.1}), std::invalid_argument);
  }
}
