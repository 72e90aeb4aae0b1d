#include <stdexcept>
#include <cmath>
#include <numbers>

#include "doctest.h"
#include "fibereig/liouville.hpp"
#include "fibereig/rational.hpp"
#include "support/oracles.hpp"

using namespace fibereig;

TEST_CASE("rational arithmetic: normalization, comparison, rendering") {
  CHECK(Rational(2, 4) == Rational(1, 2));
  CHECK(Rational(3, -6) == Rational(-1, 2));
  CHECK((Rational(1, 3) + Rational(1, 6)) == Rational(1, 2));
  CHECK((Rational(1, 2) * Rational(2, 3)) == Rational(1, 3));
  CHECK((Rational(1, 2) / Rational(3, 2)) == Rational(1, 3));
  CHECK((-Rational(5, 10)).to_string() == "-1/2");
  CHECK(Rational(-4, 1).to_string() == "-4");
  CHECK(Rational(3, 4).to_string() == "3/4");
  CHECK(Rational(3, 4).value() == doctest::Approx(0.75));
  CHECK(Rational(0, 7).is_zero());
  CHECK(Rational(1, 3) < Rational(1, 2));
  CHECK_THROWS_AS(Rational(1, 0), std::invalid_argument);

  const Rational big(2305843009213693951LL, 1);  // ~2^61
  CHECK_THROWS_AS((void)(big * Rational(16, 1)), std::overflow_error);
}

TEST_CASE("normal-form potential: closed form and Laurent coefficients") {
  const ModeProblem problem{2, 1.3};
  const LiouvillePotential q = liouville_qhat(problem, 4);
  REQUIRE(q.laurent.size() == 7);  // powers theta^-2 .. theta^4

  SUBCASE("closed form at an interior point") {
    const double theta = 1.0;
    const double s = std::sin(theta);
    const double want = (4.0 - 0.25) / (s * s) - 2.0 * 1.3 / s + (1.3 * 1.3 - 1.0) / 4.0;
    CHECK(q(theta) == doctest::Approx(want).epsilon(1e-15));
    CHECK_THROWS_AS((void)q(0.0), std::invalid_argument);
    CHECK_THROWS_AS((void)q(std::numbers::pi), std::invalid_argument);
    CHECK_THROWS_AS((void)q(-0.3), std::invalid_argument);
  }

  SUBCASE("leading coefficients match the textbook expansions") {
    const double mm = 4.0 - 0.25;
    const double mb = 2.0 * 1.3;
    CHECK(q.laurent[0] == doctest::Approx(mm).epsilon(1e-15));
    CHECK(q.laurent[1] == doctest::Approx(-mb).epsilon(1e-15));
    CHECK(q.laurent[2] == doctest::Approx(mm / 3.0 + (1.3 * 1.3 - 1.0) / 4.0).epsilon(1e-15));
    CHECK(q.laurent[3] == doctest::Approx(-mb / 6.0).epsilon(1e-15));
    CHECK(q.laurent[4] == doctest::Approx(mm / 15.0).epsilon(1e-15));
    CHECK(q.laurent[5] == doctest::Approx(-mb * 7.0 / 360.0).epsilon(1e-15));
    CHECK(q.laurent[6] == doctest::Approx(mm * 2.0 / 189.0).epsilon(1e-15));
  }

  SUBCASE("low-order coefficients agree with a Richardson limit of the closed form") {
    // Extract coefficient k by stripping the lower-order terms and taking the
    // limit of the rescaled remainder at theta -> 0.  Rounding noise in
    // q(theta) is amplified by theta^(2-k), so the extraction is only
    // reliable for small k (k = 4 already drifts to ~2e-3 relative error);
    // the higher coefficients are covered by the closed-form subcase above
    // and the decay-rate subcases below.
    std::vector<double> acc;  // coefficients extracted so far
    for (std::size_t k = 0; k <= 3; ++k) {
      const auto remainder = [&](double h) {
        double value = q(h);
        double power = 1.0 / (h * h);
        for (double c : acc) {
          value -= c * power;
          power *= h;
        }
        return value * (h * h) / std::pow(h, static_cast<double>(k));
      };
      const double limit = oracles::limit_at_zero(remainder, 0.4, 9);
      CAPTURE(k);
      CHECK(limit == doctest::Approx(q.laurent[k]).epsilon(1e-6));
      acc.push_back(q.laurent[k]);
    }
  }

  SUBCASE("dropping the last coefficient degrades the truncation order") {
    // With all terms through theta^4 the remainder is O(theta^5); stopping
    // one term earlier leaves an O(theta^4) remainder.  The observed decay
    // ratio under theta -> theta/2 pins the exponent, and hence checks that
    // laurent[6] really is the theta^4 coefficient of the closed form.
    const auto remainder_through = [&](std::size_t count, double theta) {
      double sum = 0.0, power = 1.0 / (theta * theta);
      for (std::size_t k = 0; k < count; ++k) {
        sum += q.laurent[k] * power;
        power *= theta;
      }
      return std::abs(q(theta) - sum);
    };
    const double ratio6 = remainder_through(6, 0.2) / remainder_through(6, 0.1);
    CHECK(ratio6 > 13.0);  // ~2^4
    CHECK(ratio6 < 19.5);
  }

  SUBCASE("the truncated expansion converges at the expected rate") {
    const auto truncation_error = [&](double theta) {
      double sum = 0.0, power = 1.0 / (theta * theta);
      for (double c : q.laurent) {
        sum += c * power;
        power *= theta;
      }
      return std::abs(q(theta) - sum);
    };
    // remainder is O(theta^5): halving theta should shrink it by about 2^5
    const double ratio = truncation_error(0.2) / truncation_error(0.1);
    CHECK(ratio > 20.0);
    CHECK(ratio < 40.0);
  }
}

TEST_CASE("indicial exponents solve s(s-1) = m^2 - 1/4") {
  for (int m : {0, 1, -1, 3, -5}) {
    const auto [s_plus, s_minus] = indicial_exponents(m);
    CHECK(s_plus == doctest::Approx(0.5 + std::abs(m)));
    CHECK(s_minus == doctest::Approx(0.5 - std::abs(m)));
    CHECK(s_plus * (s_plus - 1.0) == doctest::Approx(m * m - 0.25).epsilon(1e-14));
    CHECK(s_minus * (s_minus - 1.0) == doctest::Approx(m * m - 0.25).epsilon(1e-14));
  }
}

TEST_CASE("endpoint classification: limit circle exactly for m = 0") {
  for (Endpoint ep : {Endpoint::Zero, Endpoint::Pi}) {
    const EndpointClass c0 = classify_endpoint({0, 0.7}, ep);
    CHECK(c0.verdict == EndpointVerdict::LimitCircle);
    CHECK(c0.log_case);
    CHECK(c0.endpoint == ep);
    CHECK(c0.exponents.first == doctest::Approx(0.5));
    CHECK(c0.exponents.second == doctest::Approx(0.5));

    for (int m : {1, -1, 2, 4}) {
      const EndpointClass c = classify_endpoint({m, 0.7}, ep);
      CHECK(c.verdict == EndpointVerdict::LimitPoint);
      CHECK_FALSE(c.log_case);
      // the verdict is the square-integrability of theta^{s_minus}:
      // 2 s_minus > -1 holds only at m = 0
      CHECK(2.0 * c.exponents.second <= -1.0);
    }
  }
}

TEST_CASE("numeric series solution: leading coefficients") {
  SUBCASE("recessive branch at |m| = 1 starts with -b/3") {
    for (double b : {0.3, 0.9, 2.0}) {
      const FrobeniusExpansion e = frobenius_expansion({1, b}, 1.5, 0.0, 4);
      REQUIRE(e.coeffs.size() == 5);
      CHECK(e.coeffs[0] == doctest::Approx(1.0));
      CHECK(e.coeffs[1] == doctest::Approx(-b / 3.0).epsilon(1e-14));
      CHECK_FALSE(e.log_case);
      CHECK_FALSE(e.resonance_order.has_value());
    }
  }
  SUBCASE("second branch at |m| = 1 starts with +b and stops at the resonance") {
    const FrobeniusExpansion e = frobenius_expansion({1, 0.9}, -0.5, 0.0, 6);
    REQUIRE(e.resonance_order.has_value());
    CHECK(*e.resonance_order == 2);
    REQUIRE(e.coeffs.size() == 2);  // a_0, a_1; a_2 would need a log term
    CHECK(e.coeffs[1] == doctest::Approx(0.9).epsilon(1e-14));
  }
  SUBCASE("m = 0: double root, zero linear term, quadratic from the constant term") {
    const double b = 1.1, lambda = 0.4;
    const FrobeniusExpansion e = frobenius_expansion({0, b}, 0.5, lambda, 4);
    CHECK(e.log_case);
    CHECK(e.coeffs[1] == doctest::Approx(0.0));
    CHECK(e.coeffs[2] ==
          doctest::Approx(-1.0 / 12.0 - lambda / 4.0 + b * b / 16.0).epsilon(1e-14));
  }
  SUBCASE("an exponent away from both indicial roots is rejected") {
    CHECK_THROWS_AS((void)frobenius_expansion({1, 0.9}, 0.7, 0.0, 4), std::invalid_argument);
  }
}

TEST_CASE("numeric series satisfies the differential equation to high order") {
  // residual r = -w'' + (q - lambda) w for the truncated series
  // w = theta^s sum a_k theta^k of order p behaves like theta^(s + p - 1).
  const ModeProblem problem{1, 1.3};
  const double lambda = 0.85;
  const int order = 6;
  const double s = 1.5;
  const FrobeniusExpansion e = frobenius_expansion(problem, s, lambda, order);
  const LiouvillePotential q = liouville_qhat(problem, order + 2);

  const auto residual = [&](double theta) {
    double w = 0.0, w2 = 0.0;
    for (std::size_t k = 0; k < e.coeffs.size(); ++k) {
      const double p = s + static_cast<double>(k);
      w += e.coeffs[k] * std::pow(theta, p);
      w2 += e.coeffs[k] * p * (p - 1.0) * std::pow(theta, p - 2.0);
    }
    return std::abs(-w2 + (q(theta) - lambda) * w);
  };
  // expected decay exponent s + order - 1 = 6.5
  const double rate = std::log2(residual(0.1) / residual(0.05));
  CHECK(rate > 6.0);
  CHECK(rate < 7.2);
}

TEST_CASE("series polynomial algebra and rendering") {
  const SeriesPoly b = SeriesPoly::var_b();
  const SeriesPoly lam = SeriesPoly::var_lambda();
  const SeriesPoly square = (b + lam) * (b + lam);
  CHECK(square.coeff(2, 0) == Rational(1));
  CHECK(square.coeff(1, 1) == Rational(2));
  CHECK(square.coeff(0, 2) == Rational(1));
  CHECK(square.degree_b() == 2);
  CHECK(square.degree_lambda() == 2);
  CHECK(square.eval(2.0, 3.0) == doctest::Approx(25.0));

  const SeriesPoly zero = square - square;
  CHECK(zero.is_zero());

  const SeriesPoly combo =
      SeriesPoly::constant(Rational(-1, 12)) + lam.scaled(Rational(-1, 4)) + (b * b).scaled(Rational(1, 16));
  CHECK(combo.to_string() == "-1/12 - 1/4*lambda + 1/16*b^2");
}

TEST_CASE("symbolic series matches the numeric recurrence everywhere") {
  const double b = 0.9, lambda = 0.37;
  for (int m : {0, 1, 2, -2}) {
    const auto [s_plus, s_minus] = indicial_exponents(m);
    const SymbolicExpansion sym = frobenius_symbolic(m, IndicialBranch::Plus, 5);
    const FrobeniusExpansion num = frobenius_expansion({m, b}, s_plus, lambda, 5);
    REQUIRE(sym.coeffs.size() == num.coeffs.size());
    CHECK(sym.exponent.value() == doctest::Approx(s_plus));
    for (std::size_t k = 0; k < sym.coeffs.size(); ++k) {
      CAPTURE(m);
      CAPTURE(k);
      CHECK(sym.coeffs[k].eval(b, lambda) == doctest::Approx(num.coeffs[k]).epsilon(1e-13));
    }
  }
}

TEST_CASE("symbolic series: exact strings for the documented coefficients") {
  SUBCASE("|m| = 1, recessive branch: a_1 = -b/3") {
    const SymbolicExpansion sym = frobenius_symbolic(1, IndicialBranch::Plus, 3);
    CHECK(sym.exponent.to_string() == "3/2");
    CHECK(sym.coeffs[1].to_string() == "-1/3*b");
    CHECK_FALSE(sym.log_case);
  }
  SUBCASE("|m| = 1, second branch: a_1 = +b, resonance at order 2") {
    const SymbolicExpansion sym = frobenius_symbolic(1, IndicialBranch::Minus, 6);
    CHECK(sym.exponent.to_string() == "-1/2");
    REQUIRE(sym.coeffs.size() == 2);
    CHECK(sym.coeffs[1].to_string() == "b");
    REQUIRE(sym.resonance_order.has_value());
    CHECK(*sym.resonance_order == 2);
  }
  SUBCASE("m = 0: a_1 = 0 and a_2 = -1/12 - lambda/4 + b^2/16") {
    const SymbolicExpansion sym = frobenius_symbolic(0, IndicialBranch::Plus, 4);
    CHECK(sym.exponent.to_string() == "1/2");
    CHECK(sym.log_case);
    CHECK(sym.coeffs[1].is_zero());
    CHECK(sym.coeffs[2].to_string() == "-1/12 - 1/4*lambda + 1/16*b^2");
  }
}
