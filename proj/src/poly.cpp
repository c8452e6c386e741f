#include "clp/poly.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace clp::poly {

namespace {

constexpr double kRootTol = 1e-13;

// Bisection on a bracket where the polynomial is monotone.
double bisect(const Coeffs& c, double a, double b, double fa) {
  for (int iter = 0; iter < 200 && (b - a) > kRootTol; ++iter) {
    const double mid = 0.5 * (a + b);
    const double fm = eval(c, mid);
    if (fm == 0.0) return mid;
    if ((fa < 0.0) == (fm < 0.0)) {
      a = mid;
      fa = fm;
    } else {
      b = mid;
    }
  }
  return 0.5 * (a + b);
}

void push_unique_sorted(std::vector<double>& xs, double x) {
  for (double y : xs) {
    if (std::fabs(x - y) <= 4.0 * kRootTol) return;
  }
  xs.push_back(x);
}

}  // namespace

double eval(const Coeffs& c, double t) {
  double v = 0.0;
  for (std::size_t k = c.size(); k-- > 0;) v = v * t + c[k];
  return v;
}

Coeffs derivative(const Coeffs& c) {
  if (c.size() <= 1) return {};
  Coeffs d(c.size() - 1);
  for (std::size_t k = 1; k < c.size(); ++k) d[k - 1] = c[k] * static_cast<double>(k);
  return d;
}

Coeffs antiderivative(const Coeffs& c) {
  Coeffs a(c.size() + 1, 0.0);
  for (std::size_t k = 0; k < c.size(); ++k) a[k + 1] = c[k] / static_cast<double>(k + 1);
  return a;
}

double integrate(const Coeffs& c, double lo, double hi) {
  const Coeffs a = antiderivative(c);
  return eval(a, hi) - eval(a, lo);
}

int effective_degree(const Coeffs& c) {
  double scale = 0.0;
  for (double v : c) scale = std::max(scale, std::fabs(v));
  if (scale == 0.0) return -1;
  for (std::size_t k = c.size(); k-- > 0;) {
    if (std::fabs(c[k]) > 1e-14 * scale) return static_cast<int>(k);
  }
  return -1;
}

std::vector<double> roots_in_interval(const Coeffs& c, double lo, double hi) {
  std::vector<double> roots;
  if (lo > hi) return roots;
  const int deg = effective_degree(c);
  if (deg <= 0) return roots;

  if (deg == 1) {
    const double r = -c[0] / c[1];
    if (r >= lo - kRootTol && r <= hi + kRootTol) roots.push_back(std::clamp(r, lo, hi));
    return roots;
  }
  if (deg == 2) {
    const double a = c[2], b = c[1], cc = c[0];
    const double disc = b * b - 4.0 * a * cc;
    if (disc >= 0.0) {
      const double sq = std::sqrt(disc);
      // Numerically stable pair: avoid cancellation in the smaller root.
      const double qv = -0.5 * (b + (b >= 0.0 ? sq : -sq));
      double r1 = qv / a;
      double r2 = (qv != 0.0) ? cc / qv : -b / (2.0 * a);
      if (r1 > r2) std::swap(r1, r2);
      for (double r : {r1, r2}) {
        if (r >= lo - kRootTol && r <= hi + kRootTol) push_unique_sorted(roots, std::clamp(r, lo, hi));
      }
    }
    std::sort(roots.begin(), roots.end());
    return roots;
  }

  // Higher degree: the derivative's roots split [lo, hi] into monotone
  // brackets; scan each for a sign change.
  Coeffs trimmed(c.begin(), c.begin() + deg + 1);
  const std::vector<double> crit = roots_in_interval(derivative(trimmed), lo, hi);
  std::vector<double> knots;
  knots.push_back(lo);
  for (double r : crit) {
    if (r > knots.back() + kRootTol && r < hi - kRootTol) knots.push_back(r);
  }
  knots.push_back(hi);

  for (std::size_t k = 0; k + 1 < knots.size(); ++k) {
    const double a = knots[k], b = knots[k + 1];
    const double fa = eval(trimmed, a), fb = eval(trimmed, b);
    if (std::fabs(fa) <= kRootTol * (1.0 + std::fabs(fa))) {
      push_unique_sorted(roots, a);
      continue;
    }
    if (std::fabs(fb) == 0.0) {
      push_unique_sorted(roots, b);
      continue;
    }
    if ((fa < 0.0) != (fb < 0.0)) {
      push_unique_sorted(roots, bisect(trimmed, a, b, fa));
    }
  }
  std::sort(roots.begin(), roots.end());
  return roots;
}

std::vector<double> extremum_candidates(const Coeffs& c, double lo, double hi) {
  std::vector<double> pts{lo, hi};
  const int deg = effective_degree(c);
  if (deg >= 2) {
    Coeffs trimmed(c.begin(), c.begin() + deg + 1);
    for (double r : roots_in_interval(derivative(trimmed), lo, hi)) {
      if (r > lo && r < hi) pts.push_back(r);
    }
  }
  return pts;
}

std::pair<double, double> range_on(const Coeffs& c, double lo, double hi) {
  if (lo > hi) throw std::invalid_argument("poly::range_on: empty interval");
  double mn = eval(c, lo), mx = mn;
  for (double t : extremum_candidates(c, lo, hi)) {
    const double v = eval(c, t);
    mn = std::min(mn, v);
    mx = std::max(mx, v);
  }
  return {mn, mx};
}

}  // namespace clp::poly
