#pragma once

// Independent reference computations used by the test suites.  Nothing here
// calls into the library's quadrature, basis, or Galerkin code: integrals
// use tanh-sinh quadrature, basis values come from explicit polynomial
// coefficients, eigenvalues come from a finite-difference discretization of
// the Liouville normal form, and limits are Richardson-extrapolated.

#include <functional>

namespace oracles {

// Tanh-sinh (double-exponential) quadrature over (a, b); handles integrable
// endpoint singularities such as (1 - x^2)^{-1/2}.
double tanh_sinh(const std::function<double(double)>& f, double a, double b,
                 double tol = 1e-13);

// Orthonormal associated Legendre function built from the explicit monomial
// coefficients of P_l and m-fold differentiation (positive normalization,
// no Condon-Shortley phase).  Intended for moderate l (binomials in double).
double legendre_explicit(int ell, int m_abs, double x);

// lim_{h->0+} g(h) by Neville extrapolation on h0, h0/2, ..., h0/2^(levels-1).
double limit_at_zero(const std::function<double(double)>& g, double h0, int levels);

// Lowest eigenvalue of -w'' + qhat w = lambda w on (eps, pi - eps) with
//   qhat = (m^2 - 1/4)/sin^2(theta) - m b / sin(theta) + (b^2 - 1)/4
// by second-order finite differences.  Boundary conditions are Robin with
// the logarithmic derivative of the recessive Frobenius solution
// theta^{1/2+|m|}(1 + a_1 theta + ...) (series order 6, coefficients from
// the recurrence carried out locally).  The boundary data depend on lambda,
// so the solve is iterated three times; the result is Richardson-
// extrapolated from grids of n and 2n points.
double fd_liouville_lowest(int m, double b, double eps = 0.05, int n = 4000);

// Smaller eigenvalue of the symmetric 2x2 matrix [[a, c], [c, d]].
double lowest_2x2(double a, double d, double c);

}  // namespace oracles
