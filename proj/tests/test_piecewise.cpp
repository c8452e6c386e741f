#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "clp/piecewise.hpp"

using namespace clp;

namespace {

// Independent oracle: infimum/supremum by dense sampling.
std::pair<double, double> grid_range(const std::function<double(double)>& f, double lo, double hi,
                                     double step) {
  double mn = 1e300, mx = -1e300;
  for (double t = lo; t <= hi + 0.5 * step; t += step) {
    const double v = f(std::min(t, hi));
    mn = std::min(mn, v);
    mx = std::max(mx, v);
  }
  return {mn, mx};
}

CLPInstance unit_constant_instance() {
  CLPInstance inst;
  inst.horizon = 1.0;
  inst.p = 1;
  inst.q = 1;
  inst.a = {PiecewiseFn1D::constant(1.0, 1.0)};
  inst.c = {PiecewiseFn1D::constant(1.0, 1.0)};
  inst.B = Grid<PiecewiseFn1D>(1, 1, {PiecewiseFn1D::constant(1.0, 1.0)});
  inst.K = Grid<PiecewiseFn2D>(1, 1, {PiecewiseFn2D::constant(1.0, 1.0)});
  return inst;
}

}  // namespace

TEST_CASE("eval follows the right-piece convention") {
  SUBCASE("single quadratic piece") {
    const auto f = PiecewiseFn1D::single(1.0, Piece1D::poly({0.0, 0.0, 1.0}));
    CHECK(f.value(0.5) == doctest::Approx(0.25));
  }
  SUBCASE("breakpoint takes the right limit, horizon takes the left") {
    const PiecewiseFn1D f({0.0, 0.5, 1.0}, {Piece1D::poly({1.0}), Piece1D::poly({2.0})});
    CHECK(f.value(0.5) == doctest::Approx(2.0));
    CHECK(f.value(0.49) == doctest::Approx(1.0));
    CHECK(f.value(1.0) == doctest::Approx(2.0));
    CHECK(f.value(0.0) == doctest::Approx(1.0));
  }
  SUBCASE("sampled handle passes through") {
    const auto f = PiecewiseFn1D::single(
        1.0, Piece1D::sampled([](double t) { return std::sin(3.0 * t) + 2.0; }, 3.0, 1e-3));
    CHECK(f.value(0.0) == doctest::Approx(2.0));
    CHECK(f.value(0.25) == doctest::Approx(std::sin(0.75) + 2.0));
  }
  SUBCASE("outside the domain is an error") {
    const auto f = PiecewiseFn1D::constant(1.0, 1.0);
    CHECK_THROWS_AS(f.value(-0.1), std::domain_error);
    CHECK_THROWS_AS(f.value(1.1), std::domain_error);
  }
}

TEST_CASE("interval infima and suprema") {
  SUBCASE("monotone affine") {
    const auto f = PiecewiseFn1D::single(1.0, Piece1D::poly({0.0, 1.0}));
    CHECK(f.inf_on(0.0, 1.0) == doctest::Approx(0.0));
    CHECK(f.sup_on(0.0, 1.0) == doctest::Approx(1.0));
  }
  SUBCASE("interior minimum of t^2 - t") {
    const auto f = PiecewiseFn1D::single(1.0, Piece1D::poly({0.0, -1.0, 1.0}));
    // Oracle: dense grid with step 1e-5.
    const auto [gmn, gmx] = grid_range([](double t) { return t * t - t; }, 0.0, 1.0, 1e-5);
    CHECK(f.inf_on(0.0, 1.0) == doctest::Approx(gmn).epsilon(1e-9));
    CHECK(f.inf_on(0.0, 1.0) == doctest::Approx(-0.25));
    CHECK(f.sup_on(0.0, 1.0) == doctest::Approx(gmx).epsilon(1e-9));
  }
  SUBCASE("constant") {
    const auto f = PiecewiseFn1D::constant(1.0, 7.0);
    CHECK(f.inf_on(0.2, 0.8) == doctest::Approx(7.0));
    CHECK(f.sup_on(0.2, 0.8) == doctest::Approx(7.0));
  }
  SUBCASE("straddling a breakpoint is a structural error") {
    const PiecewiseFn1D f({0.0, 0.5, 1.0}, {Piece1D::poly({1.0}), Piece1D::poly({2.0})});
    CHECK_THROWS_AS(f.inf_on(0.25, 0.75), std::invalid_argument);
  }
}

TEST_CASE("rectangle extrema") {
  SUBCASE("bilinear corner minimum") {
    const auto k = PiecewiseFn2D::single(1.0, Piece2D::poly2({{0.0, 0.0}, {0.0, 1.0}}));  // t*s
    CHECK(k.inf_on({0.0, 1.0}, {0.0, 1.0}) == doctest::Approx(0.0));
    CHECK(k.sup_on({0.0, 1.0}, {0.0, 1.0}) == doctest::Approx(1.0));
  }
  SUBCASE("interior critical point of (t-.5)^2+(s-.5)^2") {
    const auto k = PiecewiseFn2D::single(
        1.0, Piece2D::poly2({{0.5, -1.0, 1.0}, {-1.0, 0.0, 0.0}, {1.0, 0.0, 0.0}}));
    CHECK(k.inf_on({0.0, 1.0}, {0.0, 1.0}) == doctest::Approx(0.0).epsilon(1e-10));
    CHECK(k.sup_on({0.0, 1.0}, {0.0, 1.0}) == doctest::Approx(0.5));
  }
  SUBCASE("constant") {
    const auto k = PiecewiseFn2D::constant(1.0, 1.0);
    CHECK(k.inf_on({0.2, 0.4}, {0.1, 0.9}) == doctest::Approx(1.0));
  }
  SUBCASE("separable product range") {
    const auto k = Piece2D::separable({0.0, 1.0}, {1.0, -1.0});  // t * (1 - s)
    const auto [mn, mx] = k.range_on({0.0, 1.0}, {0.0, 1.0});
    CHECK(mn == doctest::Approx(0.0));
    CHECK(mx == doctest::Approx(1.0));
  }
  SUBCASE("straddling the grid is a structural error") {
    const PiecewiseFn2D k(
        {0.0, 0.5, 1.0},
        {{Piece2D::poly2({{1.0}}), Piece2D::poly2({{2.0}})},
         {Piece2D::poly2({{3.0}}), Piece2D::poly2({{4.0}})}});
    CHECK_THROWS_AS(k.inf_on({0.25, 0.75}, {0.0, 0.5}), std::invalid_argument);
    CHECK(k.inf_on({0.5, 1.0}, {0.0, 0.5}) == doctest::Approx(3.0));
  }
}

TEST_CASE("poly2 range matches a dense grid oracle on random quadratics") {
  std::mt19937 rng(911u);
  std::uniform_real_distribution<double> coeff(-2.0, 2.0);
  for (int rep = 0; rep < 60; ++rep) {
    std::vector<std::vector<double>> c(3, std::vector<double>(3));
    for (auto& row : c)
      for (double& v : row) v = coeff(rng);
    const auto piece = Piece2D::poly2(c);
    const auto [mn, mx] = piece.range_on({0.0, 1.0}, {0.0, 1.0});
    double gmn = 1e300, gmx = -1e300;
    for (int i = 0; i <= 160; ++i)
      for (int j = 0; j <= 160; ++j) {
        const double v = piece.value(i / 160.0, j / 160.0);
        gmn = std::min(gmn, v);
        gmx = std::max(gmx, v);
      }
    CHECK(mn <= gmn + 1e-10);
    CHECK(mx >= gmx - 1e-10);
    CHECK(mn >= gmn - 1e-2);
    CHECK(mx <= gmx + 1e-2);
  }
}

TEST_CASE("global bounds") {
  SUBCASE("all-one instance") {
    const auto g = global_bounds(unit_constant_instance());
    CHECK(g.a_sup == doctest::Approx(1.0));
    CHECK(g.c_sup == doctest::Approx(1.0));
    CHECK(g.k_sup == doctest::Approx(1.0));
    CHECK(g.k_col_sum == doctest::Approx(1.0));
    CHECK(g.k_row_sum == doctest::Approx(1.0));
  }
  SUBCASE("absolute values drive the bound") {
    auto inst = unit_constant_instance();
    inst.a = {PiecewiseFn1D({0.0, 0.5, 1.0}, {Piece1D::poly({2.0}), Piece1D::poly({-3.0})})};
    CHECK(global_bounds(inst).a_sup == doctest::Approx(3.0));
  }
  SUBCASE("kernel t*s against grid oracle") {
    auto inst = unit_constant_instance();
    inst.K = Grid<PiecewiseFn2D>(
        1, 1, {PiecewiseFn2D::single(1.0, Piece2D::poly2({{0.0, 0.0}, {0.0, 1.0}}))});
    const auto g = global_bounds(inst);
    double oracle = 0.0;
    for (int i = 0; i <= 100; ++i)
      for (int j = 0; j <= 100; ++j) oracle = std::max(oracle, (i / 100.0) * (j / 100.0));
    CHECK(g.k_sup == doctest::Approx(oracle));
    CHECK(g.k_col_sum == doctest::Approx(1.0));
    CHECK(g.k_row_sum == doctest::Approx(1.0));
  }
  SUBCASE("column and row sums respect the dimensional inequalities") {
    std::mt19937 rng(77u);
    std::uniform_real_distribution<double> coeff(-1.5, 1.5);
    for (int rep = 0; rep < 20; ++rep) {
      CLPInstance inst;
      inst.horizon = 1.0;
      inst.p = 2;
      inst.q = 3;
      for (std::size_t j = 0; j < inst.q; ++j)
        inst.a.push_back(PiecewiseFn1D::constant(1.0, coeff(rng)));
      for (std::size_t i = 0; i < inst.p; ++i)
        inst.c.push_back(PiecewiseFn1D::constant(1.0, coeff(rng)));
      std::vector<PiecewiseFn1D> bs;
      std::vector<PiecewiseFn2D> ks;
      for (std::size_t i = 0; i < inst.p * inst.q; ++i) {
        bs.push_back(PiecewiseFn1D::constant(1.0, 1.0));
        ks.push_back(PiecewiseFn2D::single(
            1.0, Piece2D::poly2({{coeff(rng), coeff(rng)}, {coeff(rng), coeff(rng)}})));
      }
      inst.B = Grid<PiecewiseFn1D>(inst.p, inst.q, std::move(bs));
      inst.K = Grid<PiecewiseFn2D>(inst.p, inst.q, std::move(ks));
      const auto g = global_bounds(inst);
      CHECK(g.k_col_sum <= static_cast<double>(inst.p) * g.k_sup + 1e-12);
      CHECK(g.k_row_sum <= static_cast<double>(inst.q) * g.k_sup + 1e-12);
    }
  }
}

TEST_CASE("sigma detection") {
  SUBCASE("constant one") {
    const Grid<PiecewiseFn1D> B(1, 1, {PiecewiseFn1D::constant(1.0, 1.0)});
    const auto cert = detect_sigma(B, 1e-9);
    REQUIRE(cert.ok());
    CHECK(*cert.sigma == doctest::Approx(1.0));
  }
  SUBCASE("zero piece then positive piece") {
    const Grid<PiecewiseFn1D> B(
        1, 1, {PiecewiseFn1D({0.0, 0.5, 1.0}, {Piece1D::poly({0.0}), Piece1D::poly({2.0})})});
    const auto cert = detect_sigma(B, 1e-9);
    REQUIRE(cert.ok());
    CHECK(*cert.sigma == doctest::Approx(2.0));
  }
  SUBCASE("identity ramp violates the dichotomy") {
    const Grid<PiecewiseFn1D> B(1, 1, {PiecewiseFn1D::single(1.0, Piece1D::poly({0.0, 1.0}))});
    const auto cert = detect_sigma(B, 1e-9);
    CHECK(!cert.ok());
    CHECK(cert.failure.find("crosses") != std::string::npos);
  }
  SUBCASE("negative entries are rejected") {
    const Grid<PiecewiseFn1D> B(1, 1, {PiecewiseFn1D::constant(1.0, -1.0)});
    CHECK(!detect_sigma(B, 1e-9).ok());
  }
  SUBCASE("an entirely zero column fails") {
    const Grid<PiecewiseFn1D> B(1, 2,
                                {PiecewiseFn1D::constant(1.0, 1.0), PiecewiseFn1D::constant(1.0, 0.0)});
    const auto cert = detect_sigma(B, 1e-9);
    CHECK(!cert.ok());
    CHECK(cert.failure.find("column 1") != std::string::npos);
  }
}

TEST_CASE("integration") {
  SUBCASE("antiderivative of t") {
    const auto f = PiecewiseFn1D::single(1.0, Piece1D::poly({0.0, 1.0}));
    CHECK(f.integrate(0.0, 1.0) == doctest::Approx(0.5));
  }
  SUBCASE("kernel slice of a constant") {
    const auto k = PiecewiseFn2D::constant(1.0, 1.0);
    CHECK(k.integrate_s(0.3, 0.0, 1.0) == doctest::Approx(1.0));
    CHECK(k.integrate_t(0.7, 0.0, 1.0) == doctest::Approx(1.0));
  }
  SUBCASE("piecewise constant split") {
    const PiecewiseFn1D f({0.0, 0.5, 1.0}, {Piece1D::poly({1.0}), Piece1D::poly({3.0})});
    CHECK(f.integrate(0.0, 1.0) == doctest::Approx(2.0));
  }
  SUBCASE("additive over splits for polynomials") {
    std::mt19937 rng(5u);
    std::uniform_real_distribution<double> coeff(-2.0, 2.0);
    std::uniform_real_distribution<double> cut(0.05, 0.95);
    for (int rep = 0; rep < 50; ++rep) {
      poly::Coeffs c(5);
      for (double& v : c) v = coeff(rng);
      const auto f = PiecewiseFn1D::single(1.0, Piece1D::poly(c));
      const double m = cut(rng);
      CHECK(f.integrate(0.0, 1.0) ==
            doctest::Approx(f.integrate(0.0, m) + f.integrate(m, 1.0)).epsilon(1e-12));
    }
  }
}

TEST_CASE("sampled pieces respect their declared tolerance") {
  const double L = 4.0, delta = 1e-3;
  const auto handle = [](double t) { return std::sin(4.0 * t) + 0.5 * t; };
  const auto f = PiecewiseFn1D::single(1.0, Piece1D::sampled(handle, L, delta));
  const auto [gmn, gmx] = grid_range(handle, 0.0, 1.0, 1e-6);
  CHECK(std::fabs(f.inf_on(0.0, 1.0) - gmn) <= delta);
  CHECK(std::fabs(f.sup_on(0.0, 1.0) - gmx) <= delta);
  // Simpson integral against the smooth antiderivative.
  const double exact = (1.0 - std::cos(4.0)) / 4.0 + 0.25;
  CHECK(f.integrate(0.0, 1.0) == doctest::Approx(exact).epsilon(1e-6));
  CHECK(f.integrate_error_bound(0.0, 1.0) > 0.0);
}

TEST_CASE("property: polynomial values stay within the reported range") {
  std::mt19937 rng(321u);
  std::uniform_real_distribution<double> coeff(-2.0, 2.0);
  std::uniform_int_distribution<int> deg(0, 8);
  for (int rep = 0; rep < 100; ++rep) {
    poly::Coeffs c(static_cast<std::size_t>(deg(rng)) + 1);
    for (double& v : c) v = coeff(rng);
    const auto f = PiecewiseFn1D::single(1.0, Piece1D::poly(c));
    const double lo = 0.1, hi = 0.9;
    const double mn = f.inf_on(lo, hi), mx = f.sup_on(lo, hi);
    for (int k = 0; k <= 37; ++k) {
      const double t = lo + (hi - lo) * k / 37.0;
      const double v = f.value(t);
      CHECK(v >= mn - 1e-10);
      CHECK(v <= mx + 1e-10);
    }
    // inf(-f) == -sup(f)
    poly::Coeffs neg = c;
    for (double& v : neg) v = -v;
    const auto g = PiecewiseFn1D::single(1.0, Piece1D::poly(neg));
    CHECK(g.inf_on(lo, hi) == doctest::Approx(-mx).epsilon(1e-12));
  }
}

TEST_CASE("instance validation catches shape mismatches") {
  auto inst = unit_constant_instance();
  inst.a.clear();
  CHECK_THROWS_AS(inst.validate(), std::invalid_argument);

  auto inst2 = unit_constant_instance();
  inst2.B = Grid<PiecewiseFn1D>(1, 1, {PiecewiseFn1D::constant(2.0, 1.0)});
  CHECK_THROWS_AS(inst2.validate(), std::invalid_argument);
}
