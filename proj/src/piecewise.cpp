#include "clp/piecewise.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace clp {

namespace {

constexpr std::size_t kMaxGridPoints = 4'000'000;

void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) throw std::runtime_error(std::string("non-finite value in ") + what);
}

poly::Coeffs poly_add(const poly::Coeffs& x, const poly::Coeffs& y) {
  poly::Coeffs r(std::max(x.size(), y.size()), 0.0);
  for (std::size_t k = 0; k < x.size(); ++k) r[k] += x[k];
  for (std::size_t k = 0; k < y.size(); ++k) r[k] += y[k];
  return r;
}

poly::Coeffs poly_mul(const poly::Coeffs& x, const poly::Coeffs& y) {
  if (x.empty() || y.empty()) return {};
  poly::Coeffs r(x.size() + y.size() - 1, 0.0);
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = 0; j < y.size(); ++j) r[i + j] += x[i] * y[j];
  return r;
}

poly::Coeffs poly_scale(poly::Coeffs x, double f) {
  for (double& v : x) v *= f;
  return x;
}

poly::Coeffs poly_shift_up(const poly::Coeffs& x) {  // multiply by the variable
  poly::Coeffs r(x.size() + 1, 0.0);
  for (std::size_t k = 0; k < x.size(); ++k) r[k + 1] = x[k];
  return r;
}

std::size_t sample_count(double width, double lipschitz, double delta) {
  if (width <= 0.0 || lipschitz == 0.0) return 1;
  const double n = std::ceil(width * lipschitz / delta);
  if (n + 1 > static_cast<double>(kMaxGridPoints))
    throw std::runtime_error("sampled piece: certification grid exceeds point budget; "
                             "increase delta or shrink the piece");
  return static_cast<std::size_t>(n) + 1;
}

double simpson(const std::function<double(double)>& f, double lo, double hi, double max_step) {
  const double width = hi - lo;
  if (width <= 0.0) return 0.0;
  std::size_t panels = 2;
  if (max_step > 0.0) {
    const double n = std::ceil(width / max_step);
    if (n > static_cast<double>(kMaxGridPoints))
      throw std::runtime_error("sampled piece: quadrature grid exceeds point budget");
    panels = std::max<std::size_t>(2, static_cast<std::size_t>(n));
  }
  if (panels % 2 == 1) ++panels;
  const double h = width / static_cast<double>(panels);
  double acc = f(lo) + f(hi);
  for (std::size_t k = 1; k < panels; ++k) {
    const double t = lo + h * static_cast<double>(k);
    acc += f(t) * ((k % 2 == 1) ? 4.0 : 2.0);
  }
  return acc * h / 3.0;
}

}  // namespace

// ---------------------------------------------------------------------------
// Piece1D

Piece1D Piece1D::poly(poly::Coeffs coeffs) {
  if (coeffs.empty()) coeffs.push_back(0.0);
  if (coeffs.size() > 9) throw std::invalid_argument("Piece1D: polynomial degree above 8");
  for (double v : coeffs) {
    if (!std::isfinite(v)) throw std::invalid_argument("Piece1D: non-finite coefficient");
  }
  Piece1D p;
  p.kind_ = Kind::Poly;
  p.coeffs_ = std::move(coeffs);
  return p;
}

Piece1D Piece1D::sampled(std::function<double(double)> handle, double lipschitz, double delta) {
  if (!handle) throw std::invalid_argument("Piece1D: null evaluation handle");
  if (!std::isfinite(lipschitz) || lipschitz < 0.0)
    throw std::invalid_argument("Piece1D: Lipschitz constant must be finite and >= 0");
  if (!std::isfinite(delta) || delta <= 0.0)
    throw std::invalid_argument("Piece1D: bound tolerance must be positive");
  Piece1D p;
  p.kind_ = Kind::Sampled;
  p.handle_ = std::move(handle);
  p.lipschitz_ = lipschitz;
  p.delta_ = delta;
  return p;
}

double Piece1D::value(double t) const {
  if (kind_ == Kind::Poly) return poly::eval(coeffs_, t);
  const double v = handle_(t);
  require_finite(v, "sampled piece evaluation");
  return v;
}

std::pair<double, double> Piece1D::range_on(double lo, double hi) const {
  if (kind_ == Kind::Poly) return poly::range_on(coeffs_, lo, hi);
  const std::size_t n = sample_count(hi - lo, lipschitz_, delta_);
  double mn = std::numeric_limits<double>::infinity();
  double mx = -mn;
  for (std::size_t k = 0; k < n; ++k) {
    const double t = (n == 1) ? 0.5 * (lo + hi)
                              : lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(n - 1);
    const double v = value(t);
    mn = std::min(mn, v);
    mx = std::max(mx, v);
  }
  return {mn, mx};
}

double Piece1D::integrate(double lo, double hi) const {
  if (hi <= lo) return 0.0;
  if (kind_ == Kind::Poly) return poly::integrate(coeffs_, lo, hi);
  const double step = (lipschitz_ == 0.0) ? (hi - lo) : delta_ / lipschitz_;
  return simpson([this](double t) { return value(t); }, lo, hi, step);
}

double Piece1D::integrate_error_bound(double lo, double hi) const {
  if (kind_ == Kind::Poly || hi <= lo) return 0.0;
  if (lipschitz_ == 0.0) return 0.0;
  const double h = std::min(delta_ / lipschitz_, hi - lo);
  return lipschitz_ * (hi - lo) * h;
}

// ---------------------------------------------------------------------------
// PiecewiseFn1D

PiecewiseFn1D::PiecewiseFn1D(std::vector<double> breakpoints, std::vector<Piece1D> pieces)
    : breakpoints_(std::move(breakpoints)), pieces_(std::move(pieces)) {
  if (breakpoints_.size() < 2) throw std::invalid_argument("PiecewiseFn1D: need at least [0, T]");
  if (breakpoints_.front() != 0.0)
    throw std::invalid_argument("PiecewiseFn1D: first breakpoint must be 0");
  for (std::size_t m = 0; m + 1 < breakpoints_.size(); ++m) {
    if (!(breakpoints_[m] < breakpoints_[m + 1]))
      throw std::invalid_argument("PiecewiseFn1D: breakpoints must be strictly increasing");
  }
  for (double b : breakpoints_) {
    if (!std::isfinite(b)) throw std::invalid_argument("PiecewiseFn1D: non-finite breakpoint");
  }
  if (pieces_.size() + 1 != breakpoints_.size())
    throw std::invalid_argument("PiecewiseFn1D: piece count must match interval count");
}

PiecewiseFn1D PiecewiseFn1D::constant(double horizon, double value) {
  return single(horizon, Piece1D::poly({value}));
}

PiecewiseFn1D PiecewiseFn1D::single(double horizon, Piece1D piece) {
  return PiecewiseFn1D({0.0, horizon}, {std::move(piece)});
}

std::size_t PiecewiseFn1D::piece_index_at(double t) const {
  if (t < 0.0 || t > horizon()) throw std::domain_error("PiecewiseFn1D: t outside [0, T]");
  if (t == horizon()) return pieces_.size() - 1;
  const auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), t);
  return static_cast<std::size_t>(it - breakpoints_.begin()) - 1;
}

double PiecewiseFn1D::value(double t) const { return pieces_[piece_index_at(t)].value(t); }

std::size_t PiecewiseFn1D::piece_containing(double lo, double hi) const {
  if (lo > hi) throw std::invalid_argument("PiecewiseFn1D: empty interval");
  const std::size_t m = piece_index_at(lo);
  if (hi > breakpoints_[m + 1])
    throw std::invalid_argument("PiecewiseFn1D: interval straddles a breakpoint");
  return m;
}

std::pair<double, double> PiecewiseFn1D::range_on(double lo, double hi) const {
  const std::size_t m = piece_containing(lo, hi);
  return pieces_[m].range_on(lo, hi);
}

double PiecewiseFn1D::inf_on(double lo, double hi) const { return range_on(lo, hi).first; }

double PiecewiseFn1D::sup_on(double lo, double hi) const { return range_on(lo, hi).second; }

double PiecewiseFn1D::integrate(double lo, double hi) const {
  if (lo > hi) throw std::invalid_argument("PiecewiseFn1D: empty interval");
  if (lo < 0.0 || hi > horizon()) throw std::domain_error("PiecewiseFn1D: range outside [0, T]");
  double acc = 0.0;
  for (std::size_t m = 0; m < pieces_.size(); ++m) {
    const double a = std::max(lo, breakpoints_[m]);
    const double b = std::min(hi, breakpoints_[m + 1]);
    if (b > a) acc += pieces_[m].integrate(a, b);
  }
  return acc;
}

double PiecewiseFn1D::integrate_error_bound(double lo, double hi) const {
  double acc = 0.0;
  for (std::size_t m = 0; m < pieces_.size(); ++m) {
    const double a = std::max(lo, breakpoints_[m]);
    const double b = std::min(hi, breakpoints_[m + 1]);
    if (b > a) acc += pieces_[m].integrate_error_bound(a, b);
  }
  return acc;
}

double PiecewiseFn1D::abs_sup() const {
  double best = 0.0;
  for (std::size_t m = 0; m < pieces_.size(); ++m) {
    const auto [mn, mx] = pieces_[m].range_on(breakpoints_[m], breakpoints_[m + 1]);
    require_finite(mn, "coefficient bound");
    require_finite(mx, "coefficient bound");
    best = std::max({best, std::fabs(mn), std::fabs(mx)});
  }
  return best;
}

// ---------------------------------------------------------------------------
// Piece2D

Piece2D Piece2D::poly2(std::vector<std::vector<double>> coeffs) {
  if (coeffs.empty()) coeffs.push_back({0.0});
  if (coeffs.size() > 3) throw std::invalid_argument("Piece2D: t-degree above 2");
  std::size_t cols = 0;
  for (const auto& row : coeffs) {
    if (row.size() > 3) throw std::invalid_argument("Piece2D: s-degree above 2");
    cols = std::max(cols, row.size());
    for (double v : row) {
      if (!std::isfinite(v)) throw std::invalid_argument("Piece2D: non-finite coefficient");
    }
  }
  for (auto& row : coeffs) row.resize(std::max<std::size_t>(cols, 1), 0.0);
  Piece2D p;
  p.kind_ = Kind::Poly2;
  p.coeffs2_ = std::move(coeffs);
  return p;
}

Piece2D Piece2D::separable(poly::Coeffs t_coeffs, poly::Coeffs s_coeffs) {
  if (t_coeffs.size() > 9 || s_coeffs.size() > 9)
    throw std::invalid_argument("Piece2D: factor degree above 8");
  for (double v : t_coeffs) {
    if (!std::isfinite(v)) throw std::invalid_argument("Piece2D: non-finite coefficient");
  }
  for (double v : s_coeffs) {
    if (!std::isfinite(v)) throw std::invalid_argument("Piece2D: non-finite coefficient");
  }
  if (t_coeffs.empty()) t_coeffs.push_back(0.0);
  if (s_coeffs.empty()) s_coeffs.push_back(0.0);
  Piece2D p;
  p.kind_ = Kind::Separable;
  p.t_coeffs_ = std::move(t_coeffs);
  p.s_coeffs_ = std::move(s_coeffs);
  return p;
}

Piece2D Piece2D::sampled2(std::function<double(double, double)> handle, double lipschitz,
                          double delta) {
  if (!handle) throw std::invalid_argument("Piece2D: null evaluation handle");
  if (!std::isfinite(lipschitz) || lipschitz < 0.0)
    throw std::invalid_argument("Piece2D: Lipschitz constant must be finite and >= 0");
  if (!std::isfinite(delta) || delta <= 0.0)
    throw std::invalid_argument("Piece2D: bound tolerance must be positive");
  Piece2D p;
  p.kind_ = Kind::Sampled2;
  p.handle_ = std::move(handle);
  p.lipschitz_ = lipschitz;
  p.delta_ = delta;
  return p;
}

double Piece2D::value(double t, double s) const {
  switch (kind_) {
    case Kind::Poly2: {
      double v = 0.0;
      for (std::size_t i = coeffs2_.size(); i-- > 0;) v = v * t + poly::eval(coeffs2_[i], s);
      return v;
    }
    case Kind::Separable:
      return poly::eval(t_coeffs_, t) * poly::eval(s_coeffs_, s);
    case Kind::Sampled2: {
      const double v = handle_(t, s);
      require_finite(v, "sampled2 piece evaluation");
      return v;
    }
  }
  return 0.0;
}

std::pair<double, double> Piece2D::range_on(Interval t_iv, Interval s_iv) const {
  double mn = std::numeric_limits<double>::infinity();
  double mx = -mn;
  const auto consider = [&](double v) {
    mn = std::min(mn, v);
    mx = std::max(mx, v);
  };

  if (kind_ == Kind::Separable) {
    const auto [tm, tM] = poly::range_on(t_coeffs_, t_iv.lo, t_iv.hi);
    const auto [sm, sM] = poly::range_on(s_coeffs_, s_iv.lo, s_iv.hi);
    for (double x : {tm, tM})
      for (double y : {sm, sM}) consider(x * y);
    return {mn, mx};
  }

  if (kind_ == Kind::Sampled2) {
    const std::size_t nt = sample_count(t_iv.width(), lipschitz_, delta_);
    const std::size_t ns = sample_count(s_iv.width(), lipschitz_, delta_);
    if (nt > 1 && ns > 1 && nt > kMaxGridPoints / ns)
      throw std::runtime_error("sampled2 piece: certification grid exceeds point budget");
    for (std::size_t i = 0; i < nt; ++i) {
      const double t = (nt == 1) ? 0.5 * (t_iv.lo + t_iv.hi)
                                 : t_iv.lo + t_iv.width() * static_cast<double>(i) /
                                                 static_cast<double>(nt - 1);
      for (std::size_t j = 0; j < ns; ++j) {
        const double s = (ns == 1) ? 0.5 * (s_iv.lo + s_iv.hi)
                                   : s_iv.lo + s_iv.width() * static_cast<double>(j) /
                                                   static_cast<double>(ns - 1);
        consider(value(t, s));
      }
    }
    return {mn, mx};
  }

  // Poly2: four edge restrictions (1-D problems) plus interior critical
  // points obtained by eliminating one variable from the gradient system.
  const auto row_poly = [&](std::size_t i) { return coeffs2_[i]; };  // in s
  const auto col_poly = [&](std::size_t j) {
    poly::Coeffs c(coeffs2_.size(), 0.0);
    for (std::size_t i = 0; i < coeffs2_.size(); ++i)
      c[i] = (j < coeffs2_[i].size()) ? coeffs2_[i][j] : 0.0;
    return c;  // in t
  };
  const std::size_t dt = coeffs2_.size() - 1;
  const std::size_t ds = coeffs2_[0].size() - 1;

  const auto s_poly_at_t = [&](double t) {
    poly::Coeffs c(ds + 1, 0.0);
    for (std::size_t j = 0; j <= ds; ++j) c[j] = poly::eval(col_poly(j), t);
    return c;
  };
  const auto t_poly_at_s = [&](double s) {
    poly::Coeffs c(dt + 1, 0.0);
    for (std::size_t i = 0; i <= dt; ++i) c[i] = poly::eval(row_poly(i), s);
    return c;
  };

  for (double t : {t_iv.lo, t_iv.hi}) {
    const auto [a, b] = poly::range_on(s_poly_at_t(t), s_iv.lo, s_iv.hi);
    consider(a);
    consider(b);
  }
  for (double s : {s_iv.lo, s_iv.hi}) {
    const auto [a, b] = poly::range_on(t_poly_at_s(s), t_iv.lo, t_iv.hi);
    consider(a);
    consider(b);
  }

  double scale = 0.0;
  for (const auto& row : coeffs2_)
    for (double v : row) scale = std::max(scale, std::fabs(v));
  const double tiny = 1e-12 * (1.0 + scale);

  // df/dt = P(s) + 2 t Q(s), df/ds = R(t) + 2 s U(t).
  const poly::Coeffs P = (dt >= 1) ? row_poly(1) : poly::Coeffs{0.0};
  const poly::Coeffs Q = (dt >= 2) ? row_poly(2) : poly::Coeffs{0.0};
  const poly::Coeffs R = (ds >= 1) ? col_poly(1) : poly::Coeffs{0.0};
  const poly::Coeffs U = (ds >= 2) ? col_poly(2) : poly::Coeffs{0.0};

  if (dt >= 2) {
    // Substitute t = -P/(2Q) into df/ds scaled by 4Q^2.
    const poly::Coeffs q2 = poly_mul(Q, Q);
    const poly::Coeffs pq = poly_mul(P, Q);
    const poly::Coeffs p2 = poly_mul(P, P);
    const auto comb = [&](double c0, double c1, double c2) {
      return poly_add(poly_add(poly_scale(q2, 4.0 * c0), poly_scale(pq, -2.0 * c1)),
                      poly_scale(p2, c2));
    };
    const double c01 = (ds >= 1) ? coeffs2_[0][1] : 0.0;
    const double c11 = (dt >= 1 && ds >= 1) ? coeffs2_[1][1] : 0.0;
    const double c21 = (ds >= 1) ? coeffs2_[2][1] : 0.0;
    const double c02 = (ds >= 2) ? coeffs2_[0][2] : 0.0;
    const double c12 = (dt >= 1 && ds >= 2) ? coeffs2_[1][2] : 0.0;
    const double c22 = (ds >= 2) ? coeffs2_[2][2] : 0.0;
    const poly::Coeffs g =
        poly_add(comb(c01, c11, c21), poly_scale(poly_shift_up(comb(c02, c12, c22)), 2.0));
    for (double s : poly::roots_in_interval(g, s_iv.lo, s_iv.hi)) {
      const double qv = poly::eval(Q, s);
      if (std::fabs(qv) <= tiny) continue;
      const double t = -poly::eval(P, s) / (2.0 * qv);
      if (t > t_iv.lo && t < t_iv.hi) consider(value(t, s));
    }
  }
  if (ds >= 2) {
    const poly::Coeffs u2 = poly_mul(U, U);
    const poly::Coeffs ru = poly_mul(R, U);
    const poly::Coeffs r2 = poly_mul(R, R);
    const auto comb = [&](double c0, double c1, double c2) {
      return poly_add(poly_add(poly_scale(u2, 4.0 * c0), poly_scale(ru, -2.0 * c1)),
                      poly_scale(r2, c2));
    };
    const double c10 = (dt >= 1) ? coeffs2_[1][0] : 0.0;
    const double c11 = (dt >= 1 && ds >= 1) ? coeffs2_[1][1] : 0.0;
    const double c12 = (dt >= 1) ? coeffs2_[1][2] : 0.0;
    const double c20 = (dt >= 2) ? coeffs2_[2][0] : 0.0;
    const double c21 = (dt >= 2 && ds >= 1) ? coeffs2_[2][1] : 0.0;
    const double c22 = (dt >= 2) ? coeffs2_[2][2] : 0.0;
    const poly::Coeffs h =
        poly_add(comb(c10, c11, c12), poly_scale(poly_shift_up(comb(c20, c21, c22)), 2.0));
    for (double t : poly::roots_in_interval(h, t_iv.lo, t_iv.hi)) {
      const double uv = poly::eval(U, t);
      if (std::fabs(uv) <= tiny) continue;
      const double s = -poly::eval(R, t) / (2.0 * uv);
      if (s > s_iv.lo && s < s_iv.hi) consider(value(t, s));
    }
  }
  return {mn, mx};
}

double Piece2D::integrate_s(double t, Interval s_iv) const {
  if (s_iv.width() <= 0.0) return 0.0;
  switch (kind_) {
    case Kind::Poly2: {
      poly::Coeffs c(coeffs2_[0].size(), 0.0);
      for (std::size_t j = 0; j < c.size(); ++j) {
        double v = 0.0;
        for (std::size_t i = coeffs2_.size(); i-- > 0;) v = v * t + coeffs2_[i][j];
        c[j] = v;
      }
      return poly::integrate(c, s_iv.lo, s_iv.hi);
    }
    case Kind::Separable:
      return poly::eval(t_coeffs_, t) * poly::integrate(s_coeffs_, s_iv.lo, s_iv.hi);
    case Kind::Sampled2: {
      const double step = (lipschitz_ == 0.0) ? s_iv.width() : delta_ / lipschitz_;
      return simpson([&](double s) { return value(t, s); }, s_iv.lo, s_iv.hi, step);
    }
  }
  return 0.0;
}

double Piece2D::integrate_t(double s, Interval t_iv) const {
  if (t_iv.width() <= 0.0) return 0.0;
  switch (kind_) {
    case Kind::Poly2: {
      poly::Coeffs c(coeffs2_.size(), 0.0);
      for (std::size_t i = 0; i < c.size(); ++i) c[i] = poly::eval(coeffs2_[i], s);
      return poly::integrate(c, t_iv.lo, t_iv.hi);
    }
    case Kind::Separable:
      return poly::eval(s_coeffs_, s) * poly::integrate(t_coeffs_, t_iv.lo, t_iv.hi);
    case Kind::Sampled2: {
      const double step = (lipschitz_ == 0.0) ? t_iv.width() : delta_ / lipschitz_;
      return simpson([&](double t) { return value(t, s); }, t_iv.lo, t_iv.hi, step);
    }
  }
  return 0.0;
}

// ---------------------------------------------------------------------------
// PiecewiseFn2D

PiecewiseFn2D::PiecewiseFn2D(std::vector<double> breakpoints,
                             std::vector<std::vector<Piece2D>> pieces)
    : breakpoints_(std::move(breakpoints)), pieces_(std::move(pieces)) {
  if (breakpoints_.size() < 2) throw std::invalid_argument("PiecewiseFn2D: need at least [0, T]");
  if (breakpoints_.front() != 0.0)
    throw std::invalid_argument("PiecewiseFn2D: first breakpoint must be 0");
  for (std::size_t m = 0; m + 1 < breakpoints_.size(); ++m) {
    if (!(breakpoints_[m] < breakpoints_[m + 1]))
      throw std::invalid_argument("PiecewiseFn2D: breakpoints must be strictly increasing");
  }
  const std::size_t cells = breakpoints_.size() - 1;
  if (pieces_.size() != cells)
    throw std::invalid_argument("PiecewiseFn2D: piece rows must match grid");
  for (const auto& row : pieces_) {
    if (row.size() != cells)
      throw std::invalid_argument("PiecewiseFn2D: piece columns must match grid");
  }
}

PiecewiseFn2D PiecewiseFn2D::constant(double horizon, double value) {
  return single(horizon, Piece2D::poly2({{value}}));
}

PiecewiseFn2D PiecewiseFn2D::single(double horizon, Piece2D piece) {
  return PiecewiseFn2D({0.0, horizon}, {{std::move(piece)}});
}

std::size_t PiecewiseFn2D::cell_index_at(double x) const {
  if (x < 0.0 || x > horizon()) throw std::domain_error("PiecewiseFn2D: point outside [0, T]");
  if (x == horizon()) return breakpoints_.size() - 2;
  const auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), x);
  return static_cast<std::size_t>(it - breakpoints_.begin()) - 1;
}

std::size_t PiecewiseFn2D::cell_containing(Interval iv) const {
  if (iv.lo > iv.hi) throw std::invalid_argument("PiecewiseFn2D: empty interval");
  const std::size_t m = cell_index_at(iv.lo);
  if (iv.hi > breakpoints_[m + 1])
    throw std::invalid_argument("PiecewiseFn2D: rectangle straddles a grid line");
  return m;
}

double PiecewiseFn2D::value(double t, double s) const {
  return pieces_[cell_index_at(t)][cell_index_at(s)].value(t, s);
}

std::pair<double, double> PiecewiseFn2D::range_on(Interval t_iv, Interval s_iv) const {
  const std::size_t u = cell_containing(t_iv);
  const std::size_t v = cell_containing(s_iv);
  return pieces_[u][v].range_on(t_iv, s_iv);
}

double PiecewiseFn2D::inf_on(Interval t_iv, Interval s_iv) const {
  return range_on(t_iv, s_iv).first;
}

double PiecewiseFn2D::sup_on(Interval t_iv, Interval s_iv) const {
  return range_on(t_iv, s_iv).second;
}

double PiecewiseFn2D::integrate_s(double t, double lo, double hi) const {
  if (lo > hi) throw std::invalid_argument("PiecewiseFn2D: empty integration range");
  if (lo < 0.0 || hi > horizon()) throw std::domain_error("PiecewiseFn2D: range outside [0, T]");
  const std::size_t u = cell_index_at(t);
  double acc = 0.0;
  for (std::size_t v = 0; v + 1 < breakpoints_.size(); ++v) {
    const double a = std::max(lo, breakpoints_[v]);
    const double b = std::min(hi, breakpoints_[v + 1]);
    if (b > a) acc += pieces_[u][v].integrate_s(t, {a, b});
  }
  return acc;
}

double PiecewiseFn2D::integrate_t(double s, double lo, double hi) const {
  if (lo > hi) throw std::invalid_argument("PiecewiseFn2D: empty integration range");
  if (lo < 0.0 || hi > horizon()) throw std::domain_error("PiecewiseFn2D: range outside [0, T]");
  const std::size_t v = cell_index_at(s);
  double acc = 0.0;
  for (std::size_t u = 0; u + 1 < breakpoints_.size(); ++u) {
    const double a = std::max(lo, breakpoints_[u]);
    const double b = std::min(hi, breakpoints_[u + 1]);
    if (b > a) acc += pieces_[u][v].integrate_t(s, {a, b});
  }
  return acc;
}

double PiecewiseFn2D::abs_sup() const {
  double best = 0.0;
  for (std::size_t u = 0; u + 1 < breakpoints_.size(); ++u) {
    for (std::size_t v = 0; v + 1 < breakpoints_.size(); ++v) {
      const auto [mn, mx] = pieces_[u][v].range_on({breakpoints_[u], breakpoints_[u + 1]},
                                                   {breakpoints_[v], breakpoints_[v + 1]});
      require_finite(mn, "kernel bound");
      require_finite(mx, "kernel bound");
      best = std::max({best, std::fabs(mn), std::fabs(mx)});
    }
  }
  return best;
}

// ---------------------------------------------------------------------------
// CLPInstance

void CLPInstance::validate() const {
  if (p == 0 || q == 0) throw std::invalid_argument("instance: p and q must be positive");
  if (!(horizon > 0.0) || !std::isfinite(horizon))
    throw std::invalid_argument("instance: horizon must be positive and finite");
  if (a.size() != q) throw std::invalid_argument("instance: a must have q entries");
  if (c.size() != p) throw std::invalid_argument("instance: c must have p entries");
  if (B.rows() != p || B.cols() != q) throw std::invalid_argument("instance: B must be p x q");
  if (K.rows() != p || K.cols() != q) throw std::invalid_argument("instance: K must be p x q");
  const auto check_horizon = [&](double h, const char* what) {
    if (h != horizon)
      throw std::invalid_argument(std::string("instance: ") + what + " horizon differs from T");
  };
  for (const auto& f : a) check_horizon(f.horizon(), "a");
  for (const auto& f : c) check_horizon(f.horizon(), "c");
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = 0; j < q; ++j) {
      check_horizon(B.at(i, j).horizon(), "B");
      check_horizon(K.at(i, j).horizon(), "K");
    }
}

std::vector<double> CLPInstance::all_breakpoints() const {
  std::vector<double> pts;
  const auto add = [&](const std::vector<double>& xs) {
    pts.insert(pts.end(), xs.begin(), xs.end());
  };
  for (const auto& f : a) add(f.breakpoints());
  for (const auto& f : c) add(f.breakpoints());
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = 0; j < q; ++j) {
      add(B.at(i, j).breakpoints());
      add(K.at(i, j).breakpoints());
    }
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

GlobalBounds global_bounds(const CLPInstance& inst) {
  inst.validate();
  GlobalBounds g;
  for (const auto& f : inst.a) g.a_sup = std::max(g.a_sup, f.abs_sup());
  for (const auto& f : inst.c) g.c_sup = std::max(g.c_sup, f.abs_sup());
  std::vector<double> col_sum(inst.q, 0.0), row_sum(inst.p, 0.0);
  for (std::size_t i = 0; i < inst.p; ++i) {
    for (std::size_t j = 0; j < inst.q; ++j) {
      const double s = inst.K.at(i, j).abs_sup();
      g.k_sup = std::max(g.k_sup, s);
      col_sum[j] += s;
      row_sum[i] += s;
    }
  }
  for (double v : col_sum) g.k_col_sum = std::max(g.k_col_sum, v);
  for (double v : row_sum) g.k_row_sum = std::max(g.k_row_sum, v);
  for (double v : {g.a_sup, g.c_sup, g.k_sup, g.k_col_sum, g.k_row_sum}) require_finite(v, "bounds");
  return g;
}

SigmaCertificate detect_sigma(const Grid<PiecewiseFn1D>& B, double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("detect_sigma: tol must be positive");
  SigmaCertificate cert;
  double sigma = std::numeric_limits<double>::infinity();
  bool any_active = false;

  for (std::size_t i = 0; i < B.rows(); ++i) {
    for (std::size_t j = 0; j < B.cols(); ++j) {
      const auto& f = B.at(i, j);
      for (std::size_t m = 0; m < f.piece_count(); ++m) {
        const auto [mn, mx] = f.piece(m).range_on(f.breakpoints()[m], f.breakpoints()[m + 1]);
        if (mn < -tol) {
          cert.failure = "B[" + std::to_string(i) + "][" + std::to_string(j) + "] piece " +
                         std::to_string(m) + " takes negative values";
          return cert;
        }
        if (mx > tol) {
          if (mn <= tol) {
            cert.failure = "B[" + std::to_string(i) + "][" + std::to_string(j) + "] piece " +
                           std::to_string(m) +
                           " crosses the zero band, no positive gap exists";
            return cert;
          }
          sigma = std::min(sigma, mn);
          any_active = true;
        }
      }
    }
  }
  if (!any_active) {
    cert.failure = "B vanishes identically, no positive threshold exists";
    return cert;
  }

  // Each column needs at least one active stretch so the column sums do not
  // vanish everywhere.
  for (std::size_t j = 0; j < B.cols(); ++j) {
    std::vector<double> grid;
    for (std::size_t i = 0; i < B.rows(); ++i) {
      const auto& bp = B.at(i, j).breakpoints();
      grid.insert(grid.end(), bp.begin(), bp.end());
    }
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    bool column_active = false;
    for (std::size_t m = 0; m + 1 < grid.size() && !column_active; ++m) {
      for (std::size_t i = 0; i < B.rows(); ++i) {
        if (B.at(i, j).sup_on(grid[m], grid[m + 1]) > tol) {
          column_active = true;
          break;
        }
      }
    }
    if (!column_active) {
      cert.failure = "column " + std::to_string(j) + " of B has no active stretch";
      return cert;
    }
  }

  cert.sigma = sigma;
  return cert;
}

}  // namespace clp
