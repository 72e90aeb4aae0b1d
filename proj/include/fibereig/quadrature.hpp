#pragma once

#include <functional>
#include <vector>

namespace fibereig {

/// A quadrature rule on (-1, 1). Nodes are strictly increasing; weights are
/// positive. GaussLegendre integrates polynomials of degree <= 2n-1 against
/// weight 1; GaussChebyshev2 integrates them against weight sqrt(1-x^2).
struct QuadratureRule {
  enum class Kind { GaussLegendre, GaussChebyshev2 };

  Kind kind;
  std::vector<double> nodes;
  std::vector<double> weights;

  std::size_t size() const { return nodes.size(); }

  /// Sum of w_k * f(x_k). For GaussChebyshev2 the sqrt(1-x^2) factor is part
  /// of the weights, so f is the remaining factor of the integrand.
  double integrate(const std::function<double(double)>& f) const;
};

/// n-point Gauss-Legendre rule, computed by Newton iteration on P_n.
/// Throws std::invalid_argument for n = 0.
QuadratureRule gauss_legendre(int n);

/// n-point Gauss-Chebyshev rule of the second kind:
/// nodes cos(k pi/(n+1)), weights (pi/(n+1)) sin^2(k pi/(n+1)), k = 1..n,
/// stored in increasing node order. Throws std::invalid_argument for n = 0.
QuadratureRule gauss_chebyshev2(int n);

/// Quadrature order used for all basis-size-n assemblies: exactness up to
/// twice the maximal polynomial degree plus a fixed margin.
inline int quad_order_for(int max_degree, int extra = 16) {
  return 2 * max_degree + extra;
}

}  // namespace fibereig
