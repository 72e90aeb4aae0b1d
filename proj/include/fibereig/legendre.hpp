#pragma once

#include <vector>

namespace fibereig {

/// Trial space for one angular mode: the L2(-1,1)-orthonormal associated
/// Legendre functions Ptilde_l^{m_abs}, l = m_abs .. m_abs + n_funcs - 1.
/// Sign convention is positive normalization without the Condon-Shortley
/// phase; with x = cos(theta) the functions behave like sin^{m_abs}(theta)
/// at both endpoints.
struct BasisSpec {
  int m_abs = 0;
  int n_funcs = 1;

  static constexpr bool positive_normalization = true;

  /// Largest polynomial degree present in the space.
  int max_degree() const { return m_abs + n_funcs - 1; }
};

/// Value of the orthonormal associated Legendre function Ptilde_ell^{m_abs}
/// at x, by the upward three-term recurrence in ell from the closed-form
/// seed at ell = m_abs. Throws std::invalid_argument if ell < m_abs,
/// m_abs < 0, or |x| > 1.
double assoc_legendre_normalized(int ell, int m_abs, double x);

/// Column j holds Ptilde_{m_abs+j}^{m_abs} evaluated at all points; one
/// recurrence pass per point. Result is row-major with stride spec.n_funcs.
std::vector<double> basis_table(const BasisSpec& spec, const std::vector<double>& points);

}  // namespace fibereig
