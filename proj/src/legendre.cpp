#include "fibereig/legendre.hpp"

#include <cmath>
#include <stdexcept>

namespace fibereig {

namespace {

void check_args(int ell, int m_abs, double x) {
  if (m_abs < 0) throw std::invalid_argument("assoc_legendre_normalized: m_abs must be >= 0");
  if (ell < m_abs) throw std::invalid_argument("assoc_legendre_normalized: requires ell >= m_abs");
  if (!(std::abs(x) <= 1.0)) throw std::invalid_argument("assoc_legendre_normalized: requires |x| <= 1");
}

// Seed Ptilde_m^m(x) = sqrt(1/2) prod_{k=1..m} sqrt((2k+1)/(2k)) (1-x^2)^{1/2}.
double seed(int m_abs, double x) {
  double p = std::sqrt(0.5);
  const double s2 = (1.0 - x) * (1.0 + x);
  const double s = std::sqrt(s2 < 0.0 ? 0.0 : s2);
  for (int k = 1; k <= m_abs; ++k) p *= std::sqrt((2.0 * k + 1.0) / (2.0 * k)) * s;
  return p;
}

inline double coeff_a(int ell, int m) {
  return std::sqrt((4.0 * ell * ell - 1.0) / (static_cast<double>(ell) * ell - static_cast<double>(m) * m));
}

inline double coeff_b(int ell, int m) {
  const double num = (2.0 * ell + 1.0) * (ell - 1.0 - m) * (ell - 1.0 + m);
  const double den = (2.0 * ell - 3.0) * (static_cast<double>(ell) * ell - static_cast<double>(m) * m);
  return std::sqrt(num / den);
}

}  // namespace

double assoc_legendre_normalized(int ell, int m_abs, double x) {
  check_args(ell, m_abs, x);
  double p = seed(m_abs, x);
  if (ell == m_abs) return p;
  double pm1 = p;
  p = coeff_a(m_abs + 1, m_abs) * x * p;
  for (int l = m_abs + 2; l <= ell; ++l) {
    const double next = coeff_a(l, m_abs) * x * p - coeff_b(l, m_abs) * pm1;
    pm1 = p;
    p = next;
  }
  return p;
}

std::vector<double> basis_table(const BasisSpec& spec, const std::vector<double>& points) {
  if (spec.n_funcs < 1) throw std::invalid_argument("basis_table: n_funcs must be >= 1");
  const int n = spec.n_funcs;
  const int m = spec.m_abs;
  std::vector<double> table(points.size() * static_cast<std::size_t>(n));
  for (std::size_t i = 0; i < points.size(); ++i) {
    const double x = points[i];
    check_args(m, m, x);
    double* row = table.data() + i * n;
    double p = seed(m, x);
    row[0] = p;
    if (n == 1) continue;
    double pm1 = p;
    p = coeff_a(m + 1, m) * x * p;
    row[1] = p;
    for (int j = 2; j < n; ++j) {
      const int l = m + j;
      const double next = coeff_a(l, m) * x * p - coeff_b(l, m) * pm1;
      pm1 = p;
      p = next;
      row[j] = p;
    }
  }
  return table;
}

}  // namespace fibereig
