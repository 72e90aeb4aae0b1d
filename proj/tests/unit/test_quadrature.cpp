#include <stdexcept>
#include <cmath>
#include <numbers>

#include "doctest.h"
#include "fibereig/quadrature.hpp"
#include "support/oracles.hpp"

using fibereig::gauss_chebyshev2;
using fibereig::gauss_legendre;
using fibereig::QuadratureRule;

TEST_CASE("gauss-legendre: structure and exactness") {
  const QuadratureRule rule = gauss_legendre(12);
  REQUIRE(rule.size() == 12);

  SUBCASE("nodes strictly increasing, weights positive, both symmetric") {
    double w_sum = 0.0;
    for (std::size_t k = 0; k < rule.size(); ++k) {
      if (k > 0) CHECK(rule.nodes[k] > rule.nodes[k - 1]);
      CHECK(rule.weights[k] > 0.0);
      CHECK(rule.nodes[k] == doctest::Approx(-rule.nodes[rule.size() - 1 - k]).epsilon(1e-15));
      w_sum += rule.weights[k];
    }
    CHECK(w_sum == doctest::Approx(2.0).epsilon(1e-15));
  }

  SUBCASE("integrates monomials of degree <= 2n-1 exactly") {
    // integral of x^p over (-1,1) is 0 for odd p and 2/(p+1) for even p
    for (int p = 0; p <= 23; ++p) {
      const double got = rule.integrate([p](double x) { return std::pow(x, p); });
      const double want = (p % 2 == 1) ? 0.0 : 2.0 / (p + 1);
      CHECK(got == doctest::Approx(want).epsilon(1e-13));
    }
  }

  SUBCASE("smooth non-polynomial integrand matches adaptive reference") {
    const auto f = [](double x) { return std::exp(x) * std::cos(3.0 * x); };
    const double reference = oracles::tanh_sinh(f, -1.0, 1.0);
    CHECK(gauss_legendre(24).integrate(f) == doctest::Approx(reference).epsilon(1e-13));
  }
}

TEST_CASE("gauss-chebyshev2: closed-form nodes and the sqrt weight") {
  const int n = 9;
  const QuadratureRule rule = gauss_chebyshev2(n);
  REQUIRE(rule.size() == static_cast<std::size_t>(n));

  SUBCASE("nodes and weights match the closed form") {
    for (int k = 1; k <= n; ++k) {
      const double angle = k * std::numbers::pi / (n + 1);
      // stored in increasing node order, so k counts from the right end
      const std::size_t idx = static_cast<std::size_t>(n - k);
      CHECK(rule.nodes[idx] == doctest::Approx(std::cos(angle)).epsilon(1e-15));
      CHECK(rule.weights[idx] ==
            doctest::Approx(std::numbers::pi / (n + 1) * std::sin(angle) * std::sin(angle))
                .epsilon(1e-15));
    }
  }

  SUBCASE("first moments of the sqrt(1-x^2) weight") {
    CHECK(rule.integrate([](double) { return 1.0; }) ==
          doctest::Approx(std::numbers::pi / 2.0).epsilon(1e-15));
    CHECK(rule.integrate([](double x) { return x * x; }) ==
          doctest::Approx(std::numbers::pi / 8.0).epsilon(1e-14));
  }

  SUBCASE("absorbs the inverse-sqrt factor that appears in the couplings") {
    // Coupling integrands have the shape g(x) / sqrt(1 - x^2) where g carries
    // a full (1 - x^2) factor, so g / (1 - x^2) is a polynomial and the rule
    // is exact.  Here g(x) = (15/4) x^2 (1 - x^2) and
    // integral g / sqrt(1 - x^2) dx = (15/4) * pi/8.
    const double got = rule.integrate([](double x) {
      const double g = 15.0 / 4.0 * x * x * (1.0 - x * x);
      return g / (1.0 - x * x);
    });
    CHECK(got == doctest::Approx(15.0 / 32.0 * std::numbers::pi).epsilon(1e-14));
  }
}

TEST_CASE("quadrature rejects zero points") {
  CHECK_THROWS_AS((void)gauss_legendre(0), std::invalid_argument);
  CHECK_THROWS_AS((void)gauss_chebyshev2(0), std::invalid_argument);
}

TEST_CASE("tanh-sinh oracle sanity") {
  // Bounded integrand with infinite endpoint derivatives -- the shape the
  // oracle is used for (coupling integrands vanish at the endpoints):
  // integral of sqrt(1-x^2) over (-1,1) = pi/2.
  const double bounded =
      oracles::tanh_sinh([](double x) { return std::sqrt(1.0 - x * x); }, -1.0, 1.0);
  CHECK(bounded == doctest::Approx(std::numbers::pi / 2.0).epsilon(1e-13));

  // An integrand that blows up at the endpoints is handled too, but the
  // abscissas saturate at the interval ends in double precision, so only a
  // looser tolerance is attainable: integral of 1/sqrt(1-x^2) = pi.
  const double singular =
      oracles::tanh_sinh([](double x) { return 1.0 / std::sqrt(1.0 - x * x); }, -1.0, 1.0);
  CHECK(singular == doctest::Approx(std::numbers::pi).epsilon(1e-6));
}
