#include <doctest.h>

#include <stdexcept>

#include "clp/mesh.hpp"
#include "support.hpp"

using namespace clp;

namespace {

CLPInstance with_breakpoint(double b) {
  CLPInstance inst = testsup::volterra_unit();
  inst.a = {PiecewiseFn1D({0.0, b, 1.0}, {Piece1D::poly({1.0}), Piece1D::poly({1.0})})};
  return inst;
}

}  // namespace

TEST_CASE("build_partition") {
  SUBCASE("uniform split without breakpoints") {
    const auto part = build_partition(testsup::volterra_unit(), 4, 1.0);
    REQUIRE(part.points.size() == 5);
    CHECK(part.points[1] == doctest::Approx(0.25));
    CHECK(part.points[2] == doctest::Approx(0.5));
    CHECK(part.points[3] == doctest::Approx(0.75));
    CHECK(part.mesh_norm() == doctest::Approx(0.25));
  }
  SUBCASE("forced breakpoint") {
    const auto part = build_partition(with_breakpoint(0.3), 2, 2.0);
    REQUIRE(part.points.size() == 3);
    CHECK(part.points[1] == doctest::Approx(0.3));
    CHECK(part.mesh_norm() == doctest::Approx(0.7));
  }
  SUBCASE("too few intervals for the breakpoints") {
    CHECK_THROWS_WITH_AS(build_partition(with_breakpoint(0.5), 1, 2.0),
                         doctest::Contains("minimum feasible N is 2"), std::invalid_argument);
  }
  SUBCASE("kappa below one is rejected") {
    CHECK_THROWS_AS(build_partition(testsup::volterra_unit(), 4, 0.5), std::invalid_argument);
  }
  SUBCASE("clustered breakpoint needs more intervals under tight kappa") {
    // Breakpoint at 0.9 with kappa=1, N=2 would need norm <= 0.5 but the
    // seed cell [0, 0.9] cannot shrink below 0.45 with only one extra cut.
    const auto inst = with_breakpoint(0.9);
    CHECK_THROWS_AS(build_partition(inst, 2, 1.0), std::invalid_argument);
    const auto part = build_partition(inst, 2, 2.0);
    CHECK(part.mesh_norm() == doctest::Approx(0.9));
  }
  SUBCASE("every breakpoint appears among the points") {
    const auto inst = with_breakpoint(0.3);
    const auto part = build_partition(inst, 16, 2.0);
    bool found = false;
    for (double t : part.points) found = found || t == 0.3;
    CHECK(found);
    CHECK(part.mesh_norm() <= 2.0 * 1.0 / 16.0 * (1.0 + 1e-9));
  }
}

TEST_CASE("refine") {
  SUBCASE("uniform halving") {
    Partition part{{0.0, 1.0}, 2.0};
    const auto fine = refine(part, 2);
    REQUIRE(fine.points.size() == 3);
    CHECK(fine.points[1] == doctest::Approx(0.5));
  }
  SUBCASE("non-uniform halving keeps original points") {
    Partition part{{0.0, 0.3, 1.0}, 2.0};
    const auto fine = refine(part, 2);
    REQUIRE(fine.points.size() == 5);
    CHECK(fine.points[1] == doctest::Approx(0.15));
    CHECK(fine.points[2] == doctest::Approx(0.3));
    CHECK(fine.points[3] == doctest::Approx(0.65));
  }
  SUBCASE("mesh norm divides by the factor") {
    Partition part{{0.0, 0.3, 1.0}, 2.0};
    for (std::size_t f : {2, 4, 8}) {
      CHECK(refine(part, f).mesh_norm() == doctest::Approx(part.mesh_norm() / f));
    }
  }
  SUBCASE("refinement keeps breakpoint containment") {
    const auto inst = with_breakpoint(0.3);
    auto part = build_partition(inst, 4, 2.0);
    const auto fine = refine(part, 3);
    for (double b : inst.all_breakpoints()) {
      bool found = false;
      for (double t : fine.points) found = found || t == b;
      CHECK(found);
    }
  }
}

TEST_CASE("oscillations") {
  SUBCASE("constants have zero oscillation") {
    const auto inst = testsup::volterra_unit();
    const auto part = build_partition(inst, 8, 2.0);
    CHECK(oscillations(inst, part).max_osc == doctest::Approx(0.0));
  }
  SUBCASE("affine slope times width") {
    auto inst = testsup::volterra_unit();
    inst.a = {PiecewiseFn1D::single(1.0, Piece1D::poly({0.0, 1.0}))};
    const auto part = build_partition(inst, 10, 1.0);
    const auto table = oscillations(inst, part);
    CHECK(table.max_osc == doctest::Approx(0.1));
  }
  SUBCASE("bilinear kernel oscillation via corner oracle") {
    auto inst = testsup::volterra_unit();
    inst.K = Grid<PiecewiseFn2D>(
        1, 1, {PiecewiseFn2D::single(1.0, Piece2D::poly2({{0.0, 0.0}, {0.0, 1.0}}))});
    const auto part = build_partition(inst, 2, 1.0);
    // On each half-square the oscillation of t*s is the corner spread; the
    // worst cell is [0.5,1]^2 with 1*1 - 0.25 = 0.75.
    double oracle = 0.0;
    for (std::size_t u = 0; u < 2; ++u)
      for (std::size_t v = 0; v < 2; ++v) {
        const auto iu = part.interval(u), iv = part.interval(v);
        double mn = 1e300, mx = -1e300;
        for (double t : {iu.lo, iu.hi})
          for (double s : {iv.lo, iv.hi}) {
            mn = std::min(mn, t * s);
            mx = std::max(mx, t * s);
          }
        oracle = std::max(oracle, mx - mn);
      }
    CHECK(oracle == doctest::Approx(0.75));
    CHECK(oscillations(inst, part).max_osc == doctest::Approx(oracle));
  }
  SUBCASE("oscillations shrink monotonically under refinement") {
    auto inst = testsup::volterra_unit();
    inst.a = {PiecewiseFn1D::single(1.0, Piece1D::poly({0.3, -1.2, 2.0, 0.5}))};
    inst.K = Grid<PiecewiseFn2D>(
        1, 1, {PiecewiseFn2D::single(1.0, Piece2D::poly2({{0.1, 0.7, -0.3}, {0.2, -0.5, 0.4}}))});
    const auto base = build_partition(inst, 3, 2.0);
    double prev = oscillations(inst, base).max_osc;
    for (std::size_t f : {2, 4, 8}) {
      const double osc = oscillations(inst, refine(base, f)).max_osc;
      CHECK(osc <= prev + 1e-12);
      prev = osc;
    }
    CHECK(prev < oscillations(inst, base).max_osc);
  }
  SUBCASE("no partition interval straddles a coefficient piece") {
    const auto inst = with_breakpoint(0.3);
    const auto part = build_partition(inst, 7, 2.0);
    for (std::size_t u = 0; u < part.intervals(); ++u) {
      CHECK_NOTHROW(inst.a[0].inf_on(part.points[u], part.points[u + 1]));
    }
  }
}
