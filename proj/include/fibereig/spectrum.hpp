#pragma once

// Analysis built on top of the fiber eigensolver: the effective eigenvalue
// e(b) = min_m lambda_m(b), grid sweeps, the lambda_0/lambda_1 crossing,
// the Hellmann-Feynman derivative d lambda_m / db, non-monotonicity
// detection for e(b), trial-function Rayleigh quotients, and the Robin
// eigenvalue asymptotic -gamma^2 + 2 gamma + e(b).

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "fibereig/eigensolver.hpp"

namespace fibereig {

// One solved fiber mode, as reported by effective_eigenvalue.
struct ModeValue {
  int m = 0;
  double lambda = 0.0;
  bool converged = false;
  int n_used = 0;
  double residual = 0.0;
};

struct EffectiveResult {
  double e_value = 0.0;
  int argmin_m = 0;
  std::vector<ModeValue> per_mode;  // every scanned mode, ascending m
};

// One (b, m) cell of a sweep.
struct SweepRow {
  double b = 0.0;
  int m = 0;
  double lambda = 0.0;
  bool converged = false;
  int n_used = 0;
  double residual = 0.0;
};

struct SweepPerB {
  double b = 0.0;
  double e_value = 0.0;  // minimum over the converged rows at this b
  int argmin_m = 0;
};

struct SweepTable {
  std::vector<SweepRow> rows;     // sorted by (b, m)
  std::vector<SweepPerB> per_b;   // sorted by b; omits b with no converged row
  std::vector<std::string> warnings;  // one entry per unconverged row
};

struct CrossingResult {
  double b0 = 0.0;
  // Final bisection bracket enclosing b0 (width <= 1e-8 unless the root was
  // hit exactly, in which case the bracket collapses to a point).
  std::pair<double, double> bracket_used{0.0, 0.0};
  int iterations = 0;
  double lambda_at_b0 = 0.0;  // lambda_{m_a}(b0)
  double gap = 0.0;           // |lambda_{m_a}(b0) - lambda_{m_b}(b0)|
};

// A concrete decrease of e(b): e(b + delta) = e_after < e_before = e(b).
struct MonotonicityWitness {
  double b = 0.0;
  double delta = 0.0;
  double e_before = 0.0;
  double e_after = 0.0;
};

struct MonotonicityReport {
  std::vector<double> grid;
  std::vector<double> e_values;
  std::vector<std::pair<double, double>> decreasing_intervals;
  bool non_monotonic = false;
  std::optional<MonotonicityWitness> witness;  // first decreasing step
};

// Modes that can attain the minimum at field strength b >= 0: m = 0 ..
// ceil(b)+1.  Larger m have potential >= (m - b/2)^2 > b^2/4 = lambda_0(b),
// and negative m satisfy lambda_m(b) > b^2/4 outright.
std::vector<int> mode_scan_range(double b);

// Ordering used for argmin ties: smaller lambda wins; exact ties prefer
// smaller |m|, then the non-negative sign.  Exposed for direct testing.
bool argmin_prefers(int m_new, double lambda_new, int m_cur, double lambda_cur);

// e(b) with the scan range above.  Throws std::invalid_argument for b < 0
// or non-finite b, and std::runtime_error naming the offending modes if any
// scanned mode fails to converge.
EffectiveResult effective_eigenvalue(double b, const SolverConfig& config = {});

// Solve every (b, m) pair on the grid.  An empty m_set selects the
// per-b automatic range of effective_eigenvalue (requires all b >= 0);
// an explicit m_set must contain 0 so that the per-b minimum is always
// defined (lambda_0(b) = b^2/4 anchors every column).  Duplicate grid
// values are collapsed.  Unconverged rows are kept but flagged, excluded
// from the per-b minimum, and reported in warnings.  Solves run in
// parallel; the result is deterministic.
SweepTable sweep(const std::vector<double>& b_grid, const std::vector<int>& m_set,
                 const SolverConfig& config = {});

// Locate a root of g(b) = lambda_{m_a}(b) - lambda_{m_b}(b) by bisection,
// stopping when the bracket is shorter than 1e-8.  Requires m_a != m_b,
// lo < hi, and a sign change of g over [lo, hi]; throws std::invalid_argument
// or std::runtime_error ("no sign change") otherwise.
CrossingResult find_crossing(int m_a, int m_b, std::pair<double, double> bracket,
                             const SolverConfig& config = {});

// d lambda_m / db at (m, b) via the Hellmann-Feynman identity: with the
// normalized ground-state coefficient vector c, the derivative is
// b/2 - m * (c^T G c).  Throws std::runtime_error if the solve does not
// converge.
double hf_derivative(const ModeProblem& problem, const SolverConfig& config = {});

// Scan e(b) over a strictly increasing grid (>= 3 points, all b >= 0) and
// report where it decreases.  non_monotonic is true when e both strictly
// increases and strictly decreases on the grid beyond a 1e-9 noise
// tolerance.
MonotonicityReport monotonicity_report(const std::vector<double>& b_grid,
                                       const SolverConfig& config = {});

// Rayleigh quotient of a trial state given by its coefficients in the
// order-|m| normalized associated-Legendre basis: c^T A c / c^T c.
double rayleigh_quotient(const ModeProblem& problem, const Eigen::VectorXd& coeffs);

// Rayleigh quotient of a closed-form trial function of theta in (0, pi),
// supplied with its derivative.  The trial must lie in the form domain
// (decay at least like sin^|m| theta at the endpoints when m != 0); the
// quotient is evaluated with n_quad-point Gauss rules in x = cos theta.
double rayleigh_quotient(const ModeProblem& problem,
                         const std::function<double(double)>& f,
                         const std::function<double(double)>& df, int n_quad = 128);

// Leading Robin-Laplacian asymptotic for attraction strength gamma:
// -gamma^2 + 2*gamma + e(b), with the o(1) remainder dropped.
double robin_asymptotic(double gamma, double b, const SolverConfig& config = {});

}  // namespace fibereig
