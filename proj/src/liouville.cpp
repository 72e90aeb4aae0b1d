#include "fibereig/liouville.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace fibereig {

namespace {

// sin(theta)/theta = sum_k S_k theta^{2k} with S_k = (-1)^k / (2k+1)!.
// T = 1/S gives csc(theta) = theta^{-1} sum T_k theta^{2k}; squaring gives
// csc^2(theta) = theta^{-2} sum U_k theta^{2k}.

std::vector<double> csc_series(int k_max) {
  std::vector<double> s(static_cast<std::size_t>(k_max) + 1);
  s[0] = 1.0;
  for (int k = 1; k <= k_max; ++k) s[k] = -s[k - 1] / (2.0 * k * (2.0 * k + 1.0));
  std::vector<double> t(s.size());
  t[0] = 1.0;
  for (int k = 1; k <= k_max; ++k) {
    double acc = 0.0;
    for (int j = 1; j <= k; ++j) acc += s[j] * t[k - j];
    t[k] = -acc;
  }
  return t;
}

std::vector<double> square_series(const std::vector<double>& t) {
  std::vector<double> u(t.size(), 0.0);
  for (std::size_t k = 0; k < t.size(); ++k)
    for (std::size_t j = 0; j <= k; ++j) u[k] += t[j] * t[k - j];
  return u;
}

std::vector<Rational> csc_series_exact(int k_max) {
  std::vector<Rational> s(static_cast<std::size_t>(k_max) + 1);
  s[0] = Rational(1);
  for (int k = 1; k <= k_max; ++k)
    s[k] = s[k - 1] / Rational(-2LL * k * (2LL * k + 1));
  std::vector<Rational> t(s.size());
  t[0] = Rational(1);
  for (int k = 1; k <= k_max; ++k) {
    Rational acc(0);
    for (int j = 1; j <= k; ++j) acc += s[j] * t[k - j];
    t[k] = -acc;
  }
  return t;
}

std::vector<Rational> square_series_exact(const std::vector<Rational>& t) {
  std::vector<Rational> u(t.size(), Rational(0));
  for (std::size_t k = 0; k < t.size(); ++k)
    for (std::size_t j = 0; j <= k; ++j) u[k] += t[j] * t[k - j];
  return u;
}

int abs_mode(const ModeProblem& problem) { return problem.m < 0 ? -problem.m : problem.m; }

}  // namespace

double LiouvillePotential::operator()(double theta) const {
  if (!(theta > 0.0) || !(theta < std::numbers::pi))
    throw std::invalid_argument("LiouvillePotential: theta must lie in (0, pi)");
  const double s = std::sin(theta);
  const double m2q = m * m - 0.25;
  return m2q / (s * s) - m * b / s + (b * b - 1.0) / 4.0;
}

LiouvillePotential liouville_qhat(const ModeProblem& problem, int order) {
  if (order < 0) throw std::invalid_argument("liouville_qhat: order must be >= 0");
  if (!std::isfinite(problem.b)) throw std::invalid_argument("liouville_qhat: b must be finite");

  LiouvillePotential pot;
  pot.m = problem.m;
  pot.b = problem.b;
  pot.laurent.assign(static_cast<std::size_t>(order) + 3, 0.0);

  const double m2q = static_cast<double>(problem.m) * problem.m - 0.25;
  const int k_csc2 = (order + 2) / 2;  // U_k multiplies theta^{2k-2}
  const int k_csc = (order + 1) / 2;   // T_k multiplies theta^{2k-1}
  const std::vector<double> t = csc_series(std::max(k_csc2, k_csc));
  const std::vector<double> u = square_series(t);

  for (int k = 0; k <= k_csc2; ++k) pot.laurent[2 * k] += m2q * u[k];
  for (int k = 0; k <= k_csc; ++k) pot.laurent[2 * k + 1] -= problem.m * problem.b * t[k];
  pot.laurent[2] += (problem.b * problem.b - 1.0) / 4.0;
  return pot;
}

std::pair<double, double> indicial_exponents(int m) {
  const double ma = std::abs(m);
  return {0.5 + ma, 0.5 - ma};
}

EndpointClass classify_endpoint(const ModeProblem& problem, Endpoint endpoint) {
  EndpointClass out;
  out.endpoint = endpoint;
  out.exponents = indicial_exponents(problem.m);
  // theta^s is square-integrable near 0 iff 2s > -1.  The larger exponent
  // always qualifies; the smaller one, 1/2 - |m|, qualifies only at m = 0,
  // where the second solution's log factor leaves integrability intact.
  out.verdict = problem.m == 0 ? EndpointVerdict::LimitCircle : EndpointVerdict::LimitPoint;
  out.log_case = problem.m == 0;
  return out;
}

// --- SeriesPoly -----------------------------------------------------------

SeriesPoly SeriesPoly::constant(const Rational& c) {
  SeriesPoly p;
  p.set(0, 0, c);
  p.trim();
  return p;
}

SeriesPoly SeriesPoly::var_b() {
  SeriesPoly p;
  p.set(1, 0, Rational(1));
  return p;
}

SeriesPoly SeriesPoly::var_lambda() {
  SeriesPoly p;
  p.set(0, 1, Rational(1));
  return p;
}

const Rational& SeriesPoly::coeff(int b_pow, int lambda_pow) const {
  static const Rational zero(0);
  if (b_pow < 0 || lambda_pow < 0) return zero;
  if (static_cast<std::size_t>(b_pow) >= coeff_.size()) return zero;
  const auto& row = coeff_[static_cast<std::size_t>(b_pow)];
  if (static_cast<std::size_t>(lambda_pow) >= row.size()) return zero;
  return row[static_cast<std::size_t>(lambda_pow)];
}

int SeriesPoly::degree_b() const { return static_cast<int>(coeff_.size()) - 1; }

int SeriesPoly::degree_lambda() const {
  return coeff_.empty() ? -1 : static_cast<int>(coeff_.front().size()) - 1;
}

bool SeriesPoly::is_zero() const { return coeff_.empty(); }

void SeriesPoly::set(int b_pow, int lambda_pow, const Rational& c) {
  const std::size_t rows = std::max(coeff_.size(), static_cast<std::size_t>(b_pow) + 1);
  std::size_t cols = coeff_.empty() ? 0 : coeff_.front().size();
  cols = std::max(cols, static_cast<std::size_t>(lambda_pow) + 1);
  coeff_.resize(rows);
  for (auto& row : coeff_) row.resize(cols, Rational(0));
  coeff_[static_cast<std::size_t>(b_pow)][static_cast<std::size_t>(lambda_pow)] = c;
}

void SeriesPoly::trim() {
  std::size_t rows = coeff_.size();
  std::size_t cols = coeff_.empty() ? 0 : coeff_.front().size();
  auto row_zero = [&](std::size_t i) {
    for (const Rational& c : coeff_[i])
      if (!c.is_zero()) return false;
    return true;
  };
  while (rows > 0 && row_zero(rows - 1)) --rows;
  coeff_.resize(rows);
  std::size_t used = 0;
  for (const auto& row : coeff_)
    for (std::size_t j = 0; j < cols; ++j)
      if (!row[j].is_zero()) used = std::max(used, j + 1);
  for (auto& row : coeff_) row.resize(used);
  if (used == 0) coeff_.clear();
}

SeriesPoly& SeriesPoly::operator+=(const SeriesPoly& o) {
  for (int i = 0; i <= o.degree_b(); ++i)
    for (int j = 0; j <= o.degree_lambda(); ++j) {
      const Rational& c = o.coeff(i, j);
      if (!c.is_zero()) set(i, j, coeff(i, j) + c);
    }
  trim();
  return *this;
}

SeriesPoly& SeriesPoly::operator-=(const SeriesPoly& o) {
  for (int i = 0; i <= o.degree_b(); ++i)
    for (int j = 0; j <= o.degree_lambda(); ++j) {
      const Rational& c = o.coeff(i, j);
      if (!c.is_zero()) set(i, j, coeff(i, j) - c);
    }
  trim();
  return *this;
}

SeriesPoly operator*(const SeriesPoly& a, const SeriesPoly& b) {
  SeriesPoly out;
  for (int i = 0; i <= a.degree_b(); ++i)
    for (int j = 0; j <= a.degree_lambda(); ++j) {
      const Rational& ca = a.coeff(i, j);
      if (ca.is_zero()) continue;
      for (int k = 0; k <= b.degree_b(); ++k)
        for (int l = 0; l <= b.degree_lambda(); ++l) {
          const Rational& cb = b.coeff(k, l);
          if (cb.is_zero()) continue;
          out.set(i + k, j + l, out.coeff(i + k, j + l) + ca * cb);
        }
    }
  out.trim();
  return out;
}

SeriesPoly SeriesPoly::scaled(const Rational& c) const {
  SeriesPoly out = *this;
  for (auto& row : out.coeff_)
    for (Rational& v : row) v *= c;
  out.trim();
  return out;
}

bool operator==(const SeriesPoly& a, const SeriesPoly& b) {
  const int db = std::max(a.degree_b(), b.degree_b());
  const int dl = std::max(a.degree_lambda(), b.degree_lambda());
  for (int i = 0; i <= db; ++i)
    for (int j = 0; j <= dl; ++j)
      if (a.coeff(i, j) != b.coeff(i, j)) return false;
  return true;
}

double SeriesPoly::eval(double b, double lambda) const {
  double acc = 0.0;
  for (int i = 0; i <= degree_b(); ++i)
    for (int j = 0; j <= degree_lambda(); ++j) {
      const Rational& c = coeff(i, j);
      if (!c.is_zero()) acc += c.value() * std::pow(b, i) * std::pow(lambda, j);
    }
  return acc;
}

std::string SeriesPoly::to_string() const {
  struct Term {
    int i, j;
    Rational c;
  };
  std::vector<Term> terms;
  for (int i = 0; i <= degree_b(); ++i)
    for (int j = 0; j <= degree_lambda(); ++j)
      if (!coeff(i, j).is_zero()) terms.push_back({i, j, coeff(i, j)});
  if (terms.empty()) return "0";
  std::sort(terms.begin(), terms.end(), [](const Term& a, const Term& b) {
    if (a.i + a.j != b.i + b.j) return a.i + a.j < b.i + b.j;
    return a.i < b.i;
  });

  std::string out;
  for (std::size_t t = 0; t < terms.size(); ++t) {
    const Term& term = terms[t];
    const bool negative = term.c.num < 0;
    Rational mag = negative ? -term.c : term.c;
    if (t == 0) {
      if (negative) out += "-";
    } else {
      out += negative ? " - " : " + ";
    }
    std::string vars;
    if (term.i >= 1) vars += term.i == 1 ? "b" : "b^" + std::to_string(term.i);
    if (term.j >= 1) {
      if (!vars.empty()) vars += "*";
      vars += term.j == 1 ? "lambda" : "lambda^" + std::to_string(term.j);
    }
    if (vars.empty()) {
      out += mag.to_string();
    } else if (mag == Rational(1)) {
      out += vars;
    } else {
      out += mag.to_string() + "*" + vars;
    }
  }
  return out;
}

// --- Frobenius series -----------------------------------------------------

namespace {

// Laurent coefficients Q_j of qhat - lambda for j = -1 .. j_max, with b and
// lambda symbolic.  (Q_{-2} = m^2 - 1/4 sits in the recurrence denominator
// and is not included here.)
std::vector<SeriesPoly> symbolic_q(int m, int j_max) {
  std::vector<SeriesPoly> q(static_cast<std::size_t>(j_max) + 2);  // index j+1
  const int k_csc2 = j_max >= 0 ? (j_max + 2) / 2 : 0;
  const int k_csc = (j_max + 1) / 2;
  const std::vector<Rational> t = csc_series_exact(std::max(k_csc2, k_csc));
  const std::vector<Rational> u = square_series_exact(t);
  const Rational m2q(4LL * m * m - 1, 4);
  const SeriesPoly mb = SeriesPoly::var_b().scaled(Rational(m));

  for (int k = 0;; ++k) {
    const int j = 2 * k - 2;  // csc^2 exponents
    if (j > j_max) break;
    if (j >= -1) q[static_cast<std::size_t>(j + 1)] += SeriesPoly::constant(m2q * u[k]);
  }
  for (int k = 0;; ++k) {
    const int j = 2 * k - 1;  // csc exponents
    if (j > j_max) break;
    q[static_cast<std::size_t>(j + 1)] -= mb.scaled(t[k]);
  }
  if (j_max >= 0) {
    SeriesPoly extra = (SeriesPoly::var_b() * SeriesPoly::var_b()).scaled(Rational(1, 4));
    extra -= SeriesPoly::constant(Rational(1, 4));
    extra -= SeriesPoly::var_lambda();
    q[1] += extra;
  }
  return q;
}

}  // namespace

SymbolicExpansion frobenius_symbolic(int m, IndicialBranch branch, int order) {
  if (order < 0) throw std::invalid_argument("frobenius_symbolic: order must be >= 0");
  const int ma = std::abs(m);

  SymbolicExpansion out;
  out.exponent = branch == IndicialBranch::Plus ? Rational(1 + 2LL * ma, 2) : Rational(1 - 2LL * ma, 2);
  out.log_case = ma == 0;
  int k_stop = order;
  if (branch == IndicialBranch::Minus && ma >= 1) {
    out.resonance_order = 2 * ma;
    k_stop = std::min(order, 2 * ma - 1);
  }

  const std::vector<SeriesPoly> q = symbolic_q(m, k_stop - 2);
  out.coeffs.resize(static_cast<std::size_t>(k_stop) + 1);
  out.coeffs[0] = SeriesPoly::constant(Rational(1));
  const long long two_s_minus_1 = branch == IndicialBranch::Plus ? 2LL * ma : -2LL * ma;
  for (int k = 1; k <= k_stop; ++k) {
    // d_k = (s+k)(s+k-1) - s(s-1) = k (k + 2s - 1), nonzero below resonance
    const Rational dk(static_cast<long long>(k) * (k + two_s_minus_1));
    SeriesPoly rhs;
    for (int j = 1; j <= k; ++j) rhs += q[static_cast<std::size_t>(j - 1)] * out.coeffs[static_cast<std::size_t>(k - j)];
    out.coeffs[static_cast<std::size_t>(k)] = rhs.scaled(Rational(1) / dk);
  }
  return out;
}

FrobeniusExpansion frobenius_expansion(const ModeProblem& problem, double exponent,
                                       double lambda, int order) {
  if (order < 0) throw std::invalid_argument("frobenius_expansion: order must be >= 0");
  if (!std::isfinite(lambda)) throw std::invalid_argument("frobenius_expansion: lambda must be finite");
  if (!std::isfinite(problem.b)) throw std::invalid_argument("frobenius_expansion: b must be finite");

  const int ma = abs_mode(problem);
  const auto [s_plus, s_minus] = indicial_exponents(problem.m);
  IndicialBranch branch;
  if (std::abs(exponent - s_plus) <= 1e-12) {
    branch = IndicialBranch::Plus;
  } else if (std::abs(exponent - s_minus) <= 1e-12) {
    branch = IndicialBranch::Minus;
  } else {
    throw std::invalid_argument("frobenius_expansion: exponent is not an indicial root");
  }

  FrobeniusExpansion out;
  out.exponent = branch == IndicialBranch::Plus ? s_plus : s_minus;
  out.log_case = ma == 0;
  int k_stop = order;
  if (branch == IndicialBranch::Minus && ma >= 1) {
    out.resonance_order = 2 * ma;
    k_stop = std::min(order, 2 * ma - 1);
  }

  const LiouvillePotential pot = liouville_qhat(problem, std::max(0, k_stop - 2));
  auto q_at = [&](int j) {
    double v = pot.laurent[static_cast<std::size_t>(j + 2)];
    if (j == 0) v -= lambda;
    return v;
  };

  out.coeffs.assign(static_cast<std::size_t>(k_stop) + 1, 0.0);
  out.coeffs[0] = 1.0;
  const double two_s_minus_1 = 2.0 * out.exponent - 1.0;
  for (int k = 1; k <= k_stop; ++k) {
    const double dk = k * (k + two_s_minus_1);
    double rhs = 0.0;
    for (int j = 1; j <= k; ++j) rhs += q_at(j - 2) * out.coeffs[static_cast<std::size_t>(k - j)];
    out.coeffs[static_cast<std::size_t>(k)] = rhs / dk;
  }
  return out;
}

}  // namespace fibereig
