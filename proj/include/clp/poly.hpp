#ifndef CTLP_POLY_HPP
#define CTLP_POLY_HPP

#include <cstddef>
#include <utility>
#include <vector>

namespace clp::poly {

// Dense univariate polynomial, coeffs[k] multiplies t^k.
using Coeffs = std::vector<double>;

double eval(const Coeffs& c, double t);

Coeffs derivative(const Coeffs& c);

// Antiderivative with zero constant term.
Coeffs antiderivative(const Coeffs& c);

// Definite integral over [lo, hi] by exact antiderivative.
double integrate(const Coeffs& c, double lo, double hi);

// Degree after dropping leading coefficients that are negligible relative
// to the largest one (guards against arithmetic noise from composed polys).
int effective_degree(const Coeffs& c);

// All real roots in [lo, hi], ascending, deduplicated. Closed form for
// degree <= 2, otherwise monotone brackets from the derivative's roots
// plus bisection to ~1e-12. An identically-zero polynomial yields no
// roots (callers treat constants separately).
std::vector<double> roots_in_interval(const Coeffs& c, double lo, double hi);

// Candidate extremum locations on [lo, hi]: both endpoints plus the
// derivative's roots.
std::vector<double> extremum_candidates(const Coeffs& c, double lo, double hi);

// Exact (minimum, maximum) of the polynomial on [lo, hi].
std::pair<double, double> range_on(const Coeffs& c, double lo, double hi);

}  // namespace clp::poly

#endif
