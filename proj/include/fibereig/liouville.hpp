#pragma once

// Singular-endpoint analysis of the fiber operators in Liouville normal
// form.  The substitution u(theta) = w(theta) sin^{-1/2}(theta) turns the
// weighted problem into -w'' + qhat(theta) w = lambda w on (0, pi) with
//
//   qhat(theta) = (m^2 - 1/4)/sin^2(theta) - m*b/sin(theta) + (b^2 - 1)/4.
//
// This header provides the potential (closed form plus Laurent expansion at
// theta = 0), the indicial exponents 1/2 +- |m|, Frobenius series solutions
// (numeric, and exact-symbolic in b and lambda), and the limit-point /
// limit-circle classification of the endpoints.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fibereig/eigensolver.hpp"
#include "fibereig/rational.hpp"

namespace fibereig {

struct LiouvillePotential {
  int m = 0;
  double b = 0.0;
  // laurent[k] is the coefficient of theta^(k-2) in the expansion at
  // theta = 0, so laurent[0] = m^2 - 1/4 and laurent[1] = -m*b.
  std::vector<double> laurent;

  // Closed-form value; theta must lie in the open interval (0, pi).
  double operator()(double theta) const;
};

// Potential with Laurent coefficients through theta^order (order >= 0).
LiouvillePotential liouville_qhat(const ModeProblem& problem, int order);

// Roots (s_plus, s_minus) = (1/2 + |m|, 1/2 - |m|) of s(s-1) = m^2 - 1/4.
std::pair<double, double> indicial_exponents(int m);

enum class Endpoint { Zero, Pi };
enum class EndpointVerdict { LimitPoint, LimitCircle };

struct EndpointClass {
  Endpoint endpoint = Endpoint::Zero;
  std::pair<double, double> exponents{0.0, 0.0};  // (s_plus, s_minus)
  EndpointVerdict verdict = EndpointVerdict::LimitPoint;
  bool log_case = false;  // double indicial root (m = 0 only)
};

// Verdict by square-integrability of the Frobenius behaviors theta^s near
// the endpoint (theta^s lies in L^2 iff 2s > -1; a log factor does not
// change that).  Both endpoints agree: theta -> pi - theta maps the problem
// onto itself.  The endpoint Pi expansion variable is pi - theta.
EndpointClass classify_endpoint(const ModeProblem& problem, Endpoint endpoint);

// Polynomial in the field strength b and the spectral parameter lambda with
// exact rational coefficients.  coeff[i][j] multiplies b^i * lambda^j.
class SeriesPoly {
 public:
  SeriesPoly() = default;
  static SeriesPoly constant(const Rational& c);
  static SeriesPoly var_b();
  static SeriesPoly var_lambda();

  const Rational& coeff(int b_pow, int lambda_pow) const;  // 0 outside range
  int degree_b() const;
  int degree_lambda() const;
  bool is_zero() const;

  SeriesPoly& operator+=(const SeriesPoly& o);
  SeriesPoly& operator-=(const SeriesPoly& o);
  friend SeriesPoly operator+(SeriesPoly a, const SeriesPoly& b) { return a += b; }
  friend SeriesPoly operator-(SeriesPoly a, const SeriesPoly& b) { return a -= b; }
  friend SeriesPoly operator*(const SeriesPoly& a, const SeriesPoly& b);
  SeriesPoly scaled(const Rational& c) const;
  friend bool operator==(const SeriesPoly& a, const SeriesPoly& b);

  double eval(double b, double lambda) const;
  // Deterministic rendering, e.g. "-1/12 - 1/4*lambda + 1/16*b^2"; terms are
  // ordered by total degree, then by power of b.
  std::string to_string() const;

 private:
  void set(int b_pow, int lambda_pow, const Rational& c);
  void trim();
  std::vector<std::vector<Rational>> coeff_;  // rectangular, trimmed
  friend class SeriesPolyBuilder;
};

struct FrobeniusExpansion {
  double exponent = 0.0;
  // coeffs[k] = a_k with a_0 = 1; the series is theta^s * sum a_k theta^k.
  std::vector<double> coeffs;
  // Set for the smaller exponent when |m| >= 1: the recurrence denominator
  // k(k - 2|m|) vanishes at k = 2|m|, where a log term would enter.  The
  // coefficient list is truncated before that order.
  std::optional<int> resonance_order;
  // True iff the indicial root is double (m = 0): the companion solution
  // carries a log factor, while this series itself is log-free.
  bool log_case = false;
};

// Series solution w = theta^s (1 + a_1 theta + ...) of -w'' + qhat w =
// lambda w with coefficients through a_order (truncated at a resonance).
// The exponent must match one of the indicial roots within 1e-12.
FrobeniusExpansion frobenius_expansion(const ModeProblem& problem, double exponent,
                                       double lambda, int order);

enum class IndicialBranch { Plus, Minus };

struct SymbolicExpansion {
  Rational exponent;                // 1/2 +- |m|
  std::vector<SeriesPoly> coeffs;   // a_k as exact polynomials in (b, lambda)
  std::optional<int> resonance_order;
  bool log_case = false;
};

// Same recurrence carried out in exact arithmetic, with b and lambda left
// symbolic.  Throws std::overflow_error if the rationals outgrow 64 bits
// (large orders); the numeric frobenius_expansion has no such limit.
SymbolicExpansion frobenius_symbolic(int m, IndicialBranch branch, int order);

}  // namespace fibereig
