#pragma once

#include <Eigen/Dense>
#include <utility>

namespace fibereig {

/// One fiber problem: angular mode m (any integer) and field strength b
/// (any finite real; the physical range is b >= 0).
struct ModeProblem {
  int m = 0;
  double b = 0.0;
};

/// Convergence controls for solve_mode. The Galerkin dimension doubles from
/// n_initial until the relative Cauchy test passes or n_max is reached.
struct SolverConfig {
  int n_initial = 16;
  int n_max = 1536;
  double rel_tol = 1e-10;
  double residual_tol = 1e-8;
  /// Quadrature order used for coupling integrals: 2*max_degree + quad_extra.
  int quad_extra = 16;

  /// Throws std::invalid_argument when the fields are inconsistent.
  void validate() const;
};

/// Converged lowest eigenpair of one fiber problem. coeffs are the basis
/// coefficients of the minimizer; unit Euclidean norm, which equals unit
/// norm in the weighted L2 space.
struct EigenPair {
  double lambda = 0.0;
  Eigen::VectorXd coeffs;
  int n_used = 0;
  double residual = 0.0;
  bool converged = false;
};

/// Galerkin matrix of the mode form in the orthonormal associated Legendre
/// basis of order |m|, size n x n:
///
///   A = diag(l(l+1)) + (b^2/4) I - m b G,   l = |m| .. |m|+n-1,
///
/// where G_{ll'} integrates Ptilde_l Ptilde_l' / sqrt(1-x^2). The derivative
/// term together with the m^2/sin^2 part of the potential is exactly
/// diagonal in this basis; only G needs quadrature, and the Chebyshev-2 rule
/// is exact for it when |m| >= 1. For m = 0 the G term is absent.
Eigen::MatrixXd assemble_matrix(const ModeProblem& problem, int n);

/// Minimal eigenvalue and a unit eigenvector of a symmetric matrix
/// (symmetrized defensively). The sign is fixed so the first component of
/// the eigenvector that is nonzero is positive. Throws std::invalid_argument
/// on non-finite entries or an empty matrix.
std::pair<double, Eigen::VectorXd> smallest_eigenpair(const Eigen::MatrixXd& A);

/// Lowest eigenvalue of the fiber problem by Rayleigh-Ritz on nested
/// subspaces. Doubles the dimension until |lambda(2n) - lambda(n)| <=
/// rel_tol * max(1, |lambda(n)|), capping at n_max; returns the finer
/// result. Every returned lambda is a variational upper bound for the true
/// eigenvalue, and the sequence in n is non-increasing. A cap hit without
/// passing the Cauchy test is reported via converged = false, not an
/// exception.
EigenPair solve_mode(const ModeProblem& problem, const SolverConfig& config = {});

/// c^T G c for the coupling matrix G of order m_abs at the size of c.
/// In the weighted space this is the integral of |f|^2 / sin(theta) weight,
/// the quantity behind the field derivative of the eigenvalue.
double coupling_form(int m_abs, const Eigen::VectorXd& coeffs, int quad_extra = 16);

}  // namespace fibereig
