// Shared instance builders and random generators for the test suites.
#ifndef CTLP_TESTS_SUPPORT_HPP
#define CTLP_TESTS_SUPPORT_HPP

#include <random>
#include <vector>

#include "clp/piecewise.hpp"

namespace testsup {

using namespace clp;

// a = c = B = K = 1 on [0, 1]: the closed-form benchmark whose discrete
// optimum is (1 + 1/N)^N - 1 on uniform meshes.
inline CLPInstance volterra_unit() {
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

// K = 0, B = I-like, a = c = 1: every mesh yields the same decoupled LP.
inline CLPInstance diagonal_unit() {
  CLPInstance inst;
  inst.horizon = 1.0;
  inst.p = 1;
  inst.q = 1;
  inst.a = {PiecewiseFn1D::constant(1.0, 1.0)};
  inst.c = {PiecewiseFn1D::constant(1.0, 1.0)};
  inst.B = Grid<PiecewiseFn1D>(1, 1, {PiecewiseFn1D::constant(1.0, 1.0)});
  inst.K = Grid<PiecewiseFn2D>(1, 1, {PiecewiseFn2D::constant(1.0, 0.0)});
  return inst;
}

struct GenOptions {
  bool zero_kernel = false;       // force K identically zero
  bool mixed_kernel = false;      // allow negative kernel values
  bool polynomial_pieces = false; // affine/quadratic pieces instead of constants
  std::size_t max_dim = 3;
  std::size_t max_breaks = 2;     // interior breakpoints
};

// Random instance satisfying every certificate precondition: c >= 0,
// K >= 0, and B obeying the positive-threshold dichotomy with at least one
// active entry per column on every stretch.
inline CLPInstance random_certified_instance(std::mt19937& rng, const GenOptions& opt = {}) {
  std::uniform_int_distribution<std::size_t> dim(1, opt.max_dim);
  std::uniform_int_distribution<std::size_t> nbreaks(0, opt.max_breaks);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> mag(0.0, 2.0);
  std::uniform_real_distribution<double> signedmag(-2.0, 2.0);
  const double horizon = 1.0;

  CLPInstance inst;
  inst.horizon = horizon;
  inst.p = dim(rng);
  inst.q = dim(rng);

  // One shared interior-breakpoint pool per instance keeps the union small
  // enough for coarse meshes.
  std::vector<double> pool{0.0};
  {
    const std::size_t nb = nbreaks(rng);
    for (std::size_t k = 0; k < nb; ++k) pool.push_back(0.1 + 0.8 * unit(rng));
    pool.push_back(horizon);
    std::sort(pool.begin(), pool.end());
    pool.erase(std::unique(pool.begin(), pool.end()), pool.end());
  }
  const auto make_breaks = [&]() {
    if (pool.size() == 2 || unit(rng) < 0.3) return std::vector<double>{0.0, horizon};
    return pool;
  };

  // Piece in [lo_val, lo_val + spread], affine or quadratic when requested,
  // nonnegative slope coefficients keep signs predictable.
  const auto make_piece = [&](double lo_val, double spread) {
    if (!opt.polynomial_pieces) return Piece1D::poly({lo_val + spread * unit(rng)});
    const double c0 = lo_val + spread * unit(rng);
    const double c1 = 0.5 * spread * unit(rng);
    const double c2 = 0.25 * spread * unit(rng);
    return Piece1D::poly({c0, c1, c2});
  };

  const auto make_fn = [&](double lo_val, double spread) {
    const auto bp = make_breaks();
    std::vector<Piece1D> pieces;
    for (std::size_t m = 0; m + 1 < bp.size(); ++m) pieces.push_back(make_piece(lo_val, spread));
    return PiecewiseFn1D(bp, pieces);
  };

  for (std::size_t j = 0; j < inst.q; ++j) {
    // Mixed-sign objective with a positive stretch somewhere.
    if (opt.polynomial_pieces) {
      inst.a.push_back(make_fn(0.2, 1.5));
    } else {
      const auto bp = make_breaks();
      std::vector<Piece1D> pieces;
      for (std::size_t m = 0; m + 1 < bp.size(); ++m)
        pieces.push_back(Piece1D::poly({m == 0 ? 0.2 + mag(rng) : signedmag(rng)}));
      inst.a.push_back(PiecewiseFn1D(bp, pieces));
    }
  }
  for (std::size_t i = 0; i < inst.p; ++i) inst.c.push_back(make_fn(0.1, 1.5));

  const double sigma_floor = 0.4;
  std::vector<PiecewiseFn1D> bs;
  // One shared breakpoint list per B row keeps the active-column bookkeeping
  // simple: we force entry (j mod p, j) active on every piece.
  for (std::size_t i = 0; i < inst.p; ++i) {
    for (std::size_t j = 0; j < inst.q; ++j) {
      const bool forced_active = (j % inst.p) == i;
      const auto bp = make_breaks();
      std::vector<Piece1D> pieces;
      for (std::size_t m = 0; m + 1 < bp.size(); ++m) {
        const bool active = forced_active || unit(rng) > 0.4;
        if (!active) {
          pieces.push_back(Piece1D::poly({0.0}));
        } else if (opt.polynomial_pieces) {
          pieces.push_back(Piece1D::poly({sigma_floor + mag(rng), 0.5 * unit(rng)}));
        } else {
          pieces.push_back(Piece1D::poly({sigma_floor + mag(rng)}));
        }
      }
      bs.push_back(PiecewiseFn1D(bp, pieces));
    }
  }
  inst.B = Grid<PiecewiseFn1D>(inst.p, inst.q, std::move(bs));

  std::vector<PiecewiseFn2D> ks;
  for (std::size_t i = 0; i < inst.p * inst.q; ++i) {
    if (opt.zero_kernel) {
      ks.push_back(PiecewiseFn2D::constant(horizon, 0.0));
    } else if (opt.mixed_kernel) {
      ks.push_back(PiecewiseFn2D::constant(horizon, -0.5 + 1.5 * unit(rng)));
    } else if (opt.polynomial_pieces) {
      // Nonnegative coefficients keep K >= 0 on the unit square.
      ks.push_back(PiecewiseFn2D::single(
          horizon,
          Piece2D::poly2({{0.5 * mag(rng), 0.4 * unit(rng)}, {0.4 * unit(rng), 0.3 * unit(rng)}})));
    } else {
      ks.push_back(PiecewiseFn2D::constant(horizon, 0.75 * mag(rng)));
    }
  }
  inst.K = Grid<PiecewiseFn2D>(inst.p, inst.q, std::move(ks));

  inst.validate();
  return inst;
}

}  // namespace testsup

#endif
