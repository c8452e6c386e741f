#ifndef CTLP_PIECEWISE_HPP
#define CTLP_PIECEWISE_HPP

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "clp/poly.hpp"

namespace clp {

// Closed subinterval of the time horizon.
struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  double width() const { return hi - lo; }
};

// One coefficient piece on an open interval: either a polynomial of degree
// at most 8, or a black-box Lipschitz evaluation handle with a declared
// bound tolerance. Handles must be side-effect-free; all piece types are
// immutable after construction, so shared concurrent use is safe.
class Piece1D {
 public:
  enum class Kind { Poly, Sampled };

  static Piece1D poly(poly::Coeffs coeffs);
  static Piece1D sampled(std::function<double(double)> handle, double lipschitz, double delta);

  Kind kind() const { return kind_; }
  const poly::Coeffs& coeffs() const { return coeffs_; }
  double lipschitz() const { return lipschitz_; }
  double delta() const { return delta_; }

  double value(double t) const;
  // (min, max) of the continuous extension on [lo, hi]; exact for Poly,
  // within +-delta for Sampled (grid step delta/L).
  std::pair<double, double> range_on(double lo, double hi) const;
  double integrate(double lo, double hi) const;
  // Zero for Poly; Lipschitz-based Simpson bound for Sampled.
  double integrate_error_bound(double lo, double hi) const;

 private:
  Piece1D() = default;
  Kind kind_ = Kind::Poly;
  poly::Coeffs coeffs_;
  std::function<double(double)> handle_;
  double lipschitz_ = 0.0;
  double delta_ = 0.0;
};

// Piecewise-continuous function on [0, T]: breakpoints 0 = b_0 < ... < b_M = T
// with one piece per open interval. Values at interior breakpoints follow the
// right-piece limit; the left limit applies at T.
class PiecewiseFn1D {
 public:
  PiecewiseFn1D(std::vector<double> breakpoints, std::vector<Piece1D> pieces);

  static PiecewiseFn1D constant(double horizon, double value);
  static PiecewiseFn1D single(double horizon, Piece1D piece);

  double horizon() const { return breakpoints_.back(); }
  const std::vector<double>& breakpoints() const { return breakpoints_; }
  std::size_t piece_count() const { return pieces_.size(); }
  const Piece1D& piece(std::size_t m) const { return pieces_[m]; }

  double value(double t) const;
  // [lo, hi] must lie inside the closure of a single piece interval.
  double inf_on(double lo, double hi) const;
  double sup_on(double lo, double hi) const;
  std::pair<double, double> range_on(double lo, double hi) const;
  // Splits at breakpoints internally.
  double integrate(double lo, double hi) const;
  double integrate_error_bound(double lo, double hi) const;
  // sup of |f| over the whole domain.
  double abs_sup() const;

  // Index of the piece whose closure contains [lo, hi]; throws if the
  // interval straddles a breakpoint.
  std::size_t piece_containing(double lo, double hi) const;

 private:
  std::size_t piece_index_at(double t) const;
  std::vector<double> breakpoints_;
  std::vector<Piece1D> pieces_;
};

// Two-variable piece on an open rectangle: bivariate polynomial of degree
// at most 2 per variable, a product of two 1-D polynomials, or a Lipschitz
// handle (Lipschitz with respect to the max metric on (t, s)).
class Piece2D {
 public:
  enum class Kind { Poly2, Separable, Sampled2 };

  // coeffs[i][j] multiplies t^i s^j, i and j at most 2.
  static Piece2D poly2(std::vector<std::vector<double>> coeffs);
  static Piece2D separable(poly::Coeffs t_coeffs, poly::Coeffs s_coeffs);
  static Piece2D sampled2(std::function<double(double, double)> handle, double lipschitz,
                          double delta);

  Kind kind() const { return kind_; }

  double value(double t, double s) const;
  std::pair<double, double> range_on(Interval t_iv, Interval s_iv) const;
  // Integral in s over [s_iv.lo, s_iv.hi] at fixed t.
  double integrate_s(double t, Interval s_iv) const;
  // Integral in t over [t_iv.lo, t_iv.hi] at fixed s.
  double integrate_t(double s, Interval t_iv) const;

 private:
  Piece2D() = default;
  Kind kind_ = Kind::Poly2;
  std::vector<std::vector<double>> coeffs2_;  // Poly2
  poly::Coeffs t_coeffs_, s_coeffs_;          // Separable
  std::function<double(double, double)> handle_;
  double lipschitz_ = 0.0;
  double delta_ = 0.0;
};

// Piecewise-continuous kernel on [0, T]^2 with one shared breakpoint grid on
// both axes and one piece per open rectangle.
class PiecewiseFn2D {
 public:
  // pieces[u][v] covers (b_u, b_{u+1}) x (b_v, b_{v+1}) in (t, s).
  PiecewiseFn2D(std::vector<double> breakpoints, std::vector<std::vector<Piece2D>> pieces);

  static PiecewiseFn2D constant(double horizon, double value);
  static PiecewiseFn2D single(double horizon, Piece2D piece);

  double horizon() const { return breakpoints_.back(); }
  const std::vector<double>& breakpoints() const { return breakpoints_; }

  double value(double t, double s) const;
  // Rectangle must lie inside the closure of a single piece rectangle.
  double inf_on(Interval t_iv, Interval s_iv) const;
  double sup_on(Interval t_iv, Interval s_iv) const;
  std::pair<double, double> range_on(Interval t_iv, Interval s_iv) const;
  // Integrals split at grid lines internally; the fixed coordinate follows
  // the same right-cell convention as value().
  double integrate_s(double t, double lo, double hi) const;
  double integrate_t(double s, double lo, double hi) const;
  double abs_sup() const;

 private:
  std::size_t cell_index_at(double x) const;
  std::size_t cell_containing(Interval iv) const;
  std::vector<double> breakpoints_;
  std::vector<std::vector<Piece2D>> pieces_;
};

// Row-major fixed-shape grid of coefficient functions.
template <typename T>
class Grid {
 public:
  Grid() = default;
  Grid(std::size_t rows, std::size_t cols, std::vector<T> cells)
      : rows_(rows), cols_(cols), cells_(std::move(cells)) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  const T& at(std::size_t i, std::size_t j) const { return cells_[i * cols_ + j]; }
  T& at(std::size_t i, std::size_t j) { return cells_[i * cols_ + j]; }

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<T> cells_;
};

// Problem data (T, p, q, a, c, B, K): maximize the integral of a'z subject
// to B(t)z(t) <= c(t) + integral_0^t K(t,s)z(s)ds, z >= 0.
struct CLPInstance {
  double horizon = 1.0;
  std::size_t p = 0;  // constraint count
  std::size_t q = 0;  // variable count
  std::vector<PiecewiseFn1D> a;  // size q
  std::vector<PiecewiseFn1D> c;  // size p
  Grid<PiecewiseFn1D> B;         // p x q
  Grid<PiecewiseFn2D> K;         // p x q

  // Throws std::invalid_argument on shape or horizon mismatches.
  void validate() const;
  // Sorted union (exact-duplicate free) of every coefficient breakpoint,
  // including 0 and T.
  std::vector<double> all_breakpoints() const;
};

// Essential bounds of the coefficient data.
struct GlobalBounds {
  double a_sup = 0.0;        // max_j sup|a_j|
  double c_sup = 0.0;        // max_i sup|c_i|
  double k_sup = 0.0;        // max_{i,j} sup|K_ij|
  double k_col_sum = 0.0;    // max_j sum_i sup|K_ij|
  double k_row_sum = 0.0;    // max_i sum_j sup|K_ij|
  std::optional<double> b_threshold;  // positive floor for nonzero B entries
};

GlobalBounds global_bounds(const CLPInstance& inst);

struct SigmaCertificate {
  std::optional<double> sigma;
  std::string failure;  // empty when certified
  bool ok() const { return sigma.has_value(); }
};

// Certifies the dichotomy "B_ij is either ~0 or >= sigma" piece by piece:
// every piece value above tol must stay above a common positive floor,
// no value may drop below -tol, and each column must carry at least one
// active piece somewhere on the horizon. Returns the largest admissible
// sigma or the offending (i, j, piece).
SigmaCertificate detect_sigma(const Grid<PiecewiseFn1D>& B, double tol);

}  // namespace clp

#endif
