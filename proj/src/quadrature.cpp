#include "fibereig/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace fibereig {

double QuadratureRule::integrate(const std::function<double(double)>& f) const {
  double acc = 0.0;
  for (std::size_t k = 0; k < nodes.size(); ++k) acc += weights[k] * f(nodes[k]);
  return acc;
}

namespace {

// P_n(x) and P_n'(x) by the three-term recurrence.
void legendre_pair(int n, double x, double& p, double& dp) {
  double p0 = 1.0, p1 = x;
  if (n == 0) {
    p = 1.0;
    dp = 0.0;
    return;
  }
  for (int k = 2; k <= n; ++k) {
    const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
    p0 = p1;
    p1 = p2;
  }
  p = p1;
  dp = n * (x * p1 - p0) / (x * x - 1.0);
}

}  // namespace

QuadratureRule gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: n must be >= 1");

  QuadratureRule rule;
  rule.kind = QuadratureRule::Kind::GaussLegendre;
  rule.nodes.resize(n);
  rule.weights.resize(n);

  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    // Root i (counting from the positive end) of P_n.
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double p, dp;
    for (int it = 0; it < 100; ++it) {
      legendre_pair(n, x, p, dp);
      const double dx = p / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    legendre_pair(n, x, p, dp);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[n - 1 - i] = x;
    rule.nodes[i] = -x;
    rule.weights[n - 1 - i] = w;
    rule.weights[i] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

QuadratureRule gauss_chebyshev2(int n) {
  if (n < 1) throw std::invalid_argument("gauss_chebyshev2: n must be >= 1");

  QuadratureRule rule;
  rule.kind = QuadratureRule::Kind::GaussChebyshev2;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int k = 1; k <= n; ++k) {
    const double t = k * std::numbers::pi / (n + 1);
    const double s = std::sin(t);
    // cos(t) decreases in k; store reversed so nodes increase.
    rule.nodes[n - k] = std::cos(t);
    rule.weights[n - k] = std::numbers::pi / (n + 1) * s * s;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

}  // namespace fibereig
