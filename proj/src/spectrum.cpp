#include "fibereig/spectrum.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "fibereig/quadrature.hpp"

namespace fibereig {

namespace {

constexpr double kNoiseTol = 1e-9;      // monotonicity noise floor
constexpr double kBracketTol = 1e-8;    // crossing bisection stop

// Run fn(0..n-1) on a small thread pool.  Work items must be independent;
// the first exception (if any) is rethrown on the calling thread.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const std::size_t workers = std::min<std::size_t>(hw, n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mu;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i; (i = next.fetch_add(1)) < n;) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mu);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

std::string describe_unconverged(int m, double b, int n_used, double residual) {
  std::ostringstream os;
  os << "mode m=" << m << " at b=" << b << " did not converge (n_used=" << n_used
     << ", residual=" << residual << ")";
  return os.str();
}

}  // namespace

std::vector<int> mode_scan_range(double b) {
  if (!(b >= 0.0)) throw std::invalid_argument("mode_scan_range: b must be >= 0");
  const int m_top = static_cast<int>(std::ceil(b)) + 1;
  std::vector<int> modes;
  modes.reserve(static_cast<std::size_t>(m_top) + 1);
  for (int m = 0; m <= m_top; ++m) modes.push_back(m);
  return modes;
}

bool argmin_prefers(int m_new, double lambda_new, int m_cur, double lambda_cur) {
  if (lambda_new != lambda_cur) return lambda_new < lambda_cur;
  if (std::abs(m_new) != std::abs(m_cur)) return std::abs(m_new) < std::abs(m_cur);
  return m_new > m_cur;
}

EffectiveResult effective_eigenvalue(double b, const SolverConfig& config) {
  if (!std::isfinite(b)) throw std::invalid_argument("effective_eigenvalue: b must be finite");
  if (b < 0.0) throw std::invalid_argument("effective_eigenvalue: b must be >= 0");
  config.validate();

  const std::vector<int> modes = mode_scan_range(b);
  EffectiveResult result;
  result.per_mode.resize(modes.size());
  parallel_for(modes.size(), [&](std::size_t i) {
    const EigenPair pair = solve_mode({modes[i], b}, config);
    result.per_mode[i] = {modes[i], pair.lambda, pair.converged, pair.n_used, pair.residual};
  });

  std::string failures;
  for (const ModeValue& mv : result.per_mode) {
    if (!mv.converged) {
      if (!failures.empty()) failures += ", ";
      failures += "m=" + std::to_string(mv.m);
    }
  }
  if (!failures.empty()) {
    std::ostringstream os;
    os << "effective_eigenvalue: unconverged modes at b=" << b << ": " << failures;
    throw std::runtime_error(os.str());
  }

  bool first = true;
  for (const ModeValue& mv : result.per_mode) {
    if (first || argmin_prefers(mv.m, mv.lambda, result.argmin_m, result.e_value)) {
      result.e_value = mv.lambda;
      result.argmin_m = mv.m;
      first = false;
    }
  }
  return result;
}

SweepTable sweep(const std::vector<double>& b_grid, const std::vector<int>& m_set,
                 const SolverConfig& config) {
  if (b_grid.empty()) throw std::invalid_argument("sweep: b_grid must be non-empty");
  for (double b : b_grid)
    if (!std::isfinite(b)) throw std::invalid_argument("sweep: b_grid must be finite");
  config.validate();

  std::vector<double> grid = b_grid;
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

  const bool auto_range = m_set.empty();
  std::vector<int> modes;
  if (!auto_range) {
    modes = m_set;
    std::sort(modes.begin(), modes.end());
    modes.erase(std::unique(modes.begin(), modes.end()), modes.end());
    if (!std::binary_search(modes.begin(), modes.end(), 0))
      throw std::invalid_argument("sweep: m_set must contain mode 0 (it anchors the per-b minimum)");
  } else {
    for (double b : grid)
      if (b < 0.0)
        throw std::invalid_argument("sweep: the automatic mode range requires b >= 0");
  }

  SweepTable table;
  for (double b : grid) {
    const std::vector<int> row_modes = auto_range ? mode_scan_range(b) : modes;
    for (int m : row_modes) table.rows.push_back({b, m, 0.0, false, 0, 0.0});
  }

  parallel_for(table.rows.size(), [&](std::size_t i) {
    SweepRow& row = table.rows[i];
    const EigenPair pair = solve_mode({row.m, row.b}, config);
    row.lambda = pair.lambda;
    row.converged = pair.converged;
    row.n_used = pair.n_used;
    row.residual = pair.residual;
  });

  // Rows were generated sorted by (b, m); reduce consecutive groups.
  std::size_t i = 0;
  while (i < table.rows.size()) {
    std::size_t j = i;
    bool have_min = false;
    SweepPerB best;
    best.b = table.rows[i].b;
    while (j < table.rows.size() && table.rows[j].b == best.b) {
      const SweepRow& row = table.rows[j];
      if (!row.converged) {
        table.warnings.push_back(describe_unconverged(row.m, row.b, row.n_used, row.residual));
      } else if (!have_min || argmin_prefers(row.m, row.lambda, best.argmin_m, best.e_value)) {
        best.e_value = row.lambda;
        best.argmin_m = row.m;
        have_min = true;
      }
      ++j;
    }
    if (have_min) {
      table.per_b.push_back(best);
    } else {
      std::ostringstream os;
      os << "no mode converged at b=" << best.b << "; omitting it from the per-b minima";
      table.warnings.push_back(os.str());
    }
    i = j;
  }
  return table;
}

CrossingResult find_crossing(int m_a, int m_b, std::pair<double, double> bracket,
                             const SolverConfig& config) {
  if (m_a == m_b) throw std::invalid_argument("find_crossing: the two modes must differ");
  if (!std::isfinite(bracket.first) || !std::isfinite(bracket.second) ||
      !(bracket.first < bracket.second))
    throw std::invalid_argument("find_crossing: bracket must satisfy lo < hi");
  config.validate();

  auto gap = [&](double b) {
    const EigenPair pa = solve_mode({m_a, b}, config);
    const EigenPair pb = solve_mode({m_b, b}, config);
    if (!pa.converged || !pb.converged) {
      std::ostringstream os;
      os << "find_crossing: solver did not converge at b=" << b;
      throw std::runtime_error(os.str());
    }
    return pa.lambda - pb.lambda;
  };

  double lo = bracket.first, hi = bracket.second;
  double g_lo = gap(lo);
  double g_hi = gap(hi);
  CrossingResult result;

  if (g_lo == 0.0 || g_hi == 0.0) {
    result.b0 = g_lo == 0.0 ? lo : hi;
    lo = hi = result.b0;
  } else {
    if ((g_lo > 0.0) == (g_hi > 0.0)) {
      std::ostringstream os;
      os << "find_crossing: no sign change of lambda_" << m_a << " - lambda_" << m_b
         << " over [" << lo << ", " << hi << "]";
      throw std::runtime_error(os.str());
    }
    while (hi - lo > kBracketTol) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;  // bracket at floating-point resolution
      const double g_mid = gap(mid);
      ++result.iterations;
      if (g_mid == 0.0) {
        lo = hi = mid;
        break;
      }
      if ((g_mid > 0.0) == (g_lo > 0.0)) {
        lo = mid;
        g_lo = g_mid;
      } else {
        hi = mid;
      }
    }
    result.b0 = 0.5 * (lo + hi);
  }
  result.bracket_used = {lo, hi};

  const EigenPair pa = solve_mode({m_a, result.b0}, config);
  const EigenPair pb = solve_mode({m_b, result.b0}, config);
  result.lambda_at_b0 = pa.lambda;
  result.gap = std::abs(pa.lambda - pb.lambda);
  return result;
}

double hf_derivative(const ModeProblem& problem, const SolverConfig& config) {
  if (problem.m == 0) return problem.b / 2.0;  // lambda_0(b) = b^2/4 exactly
  const EigenPair pair = solve_mode(problem, config);
  if (!pair.converged)
    throw std::runtime_error(
        "hf_derivative: " + describe_unconverged(problem.m, problem.b, pair.n_used, pair.residual));
  return problem.b / 2.0 -
         problem.m * coupling_form(std::abs(problem.m), pair.coeffs, config.quad_extra);
}

MonotonicityReport monotonicity_report(const std::vector<double>& b_grid,
                                       const SolverConfig& config) {
  if (b_grid.size() < 3)
    throw std::invalid_argument("monotonicity_report: need at least 3 grid points");
  for (std::size_t i = 0; i < b_grid.size(); ++i) {
    if (!std::isfinite(b_grid[i]) || b_grid[i] < 0.0)
      throw std::invalid_argument("monotonicity_report: grid must be finite and >= 0");
    if (i > 0 && !(b_grid[i] > b_grid[i - 1]))
      throw std::invalid_argument("monotonicity_report: grid must be strictly increasing");
  }
  config.validate();

  MonotonicityReport report;
  report.grid = b_grid;
  report.e_values.resize(b_grid.size());
  parallel_for(b_grid.size(), [&](std::size_t i) {
    report.e_values[i] = effective_eigenvalue(b_grid[i], config).e_value;
  });

  bool increases = false;
  bool decreases = false;
  for (std::size_t i = 0; i + 1 < b_grid.size(); ++i) {
    const double step = report.e_values[i + 1] - report.e_values[i];
    if (step > kNoiseTol) increases = true;
    if (step < -kNoiseTol) {
      decreases = true;
      if (!report.witness) {
        report.witness = MonotonicityWitness{b_grid[i], b_grid[i + 1] - b_grid[i],
                                             report.e_values[i], report.e_values[i + 1]};
      }
      if (!report.decreasing_intervals.empty() &&
          report.decreasing_intervals.back().second == b_grid[i]) {
        report.decreasing_intervals.back().second = b_grid[i + 1];
      } else {
        report.decreasing_intervals.emplace_back(b_grid[i], b_grid[i + 1]);
      }
    }
  }
  report.non_monotonic = increases && decreases;
  return report;
}

double rayleigh_quotient(const ModeProblem& problem, const Eigen::VectorXd& coeffs) {
  if (coeffs.size() == 0 || coeffs.norm() == 0.0)
    throw std::invalid_argument("rayleigh_quotient: trial coefficients must be nonzero");
  const Eigen::MatrixXd A = assemble_matrix(problem, static_cast<int>(coeffs.size()));
  return coeffs.dot(A * coeffs) / coeffs.squaredNorm();
}

double rayleigh_quotient(const ModeProblem& problem, const std::function<double(double)>& f,
                         const std::function<double(double)>& df, int n_quad) {
  if (!f || !df) throw std::invalid_argument("rayleigh_quotient: trial callbacks must be set");
  if (n_quad < 2) throw std::invalid_argument("rayleigh_quotient: n_quad must be >= 2");
  if (!std::isfinite(problem.b)) throw std::invalid_argument("rayleigh_quotient: b must be finite");

  // In x = cos(theta): the measure sin(theta) dtheta becomes dx, the
  // singular factor 1/sin^2 becomes 1/(1-x^2), and the cross term
  // -m*b*f^2 dtheta becomes -m*b*f^2 / sqrt(1-x^2) dx, which the
  // Chebyshev rule absorbs.
  const QuadratureRule gl = gauss_legendre(n_quad);
  const double m2 = static_cast<double>(problem.m) * problem.m;
  const double shift = problem.b * problem.b / 4.0;

  double numerator = 0.0;
  double denominator = 0.0;
  for (std::size_t k = 0; k < gl.size(); ++k) {
    const double x = gl.nodes[k];
    const double theta = std::acos(x);
    const double fv = f(theta);
    const double dv = df(theta);
    const double f2 = fv * fv;
    double term = dv * dv + shift * f2;
    if (problem.m != 0) term += m2 * f2 / ((1.0 - x) * (1.0 + x));
    numerator += gl.weights[k] * term;
    denominator += gl.weights[k] * f2;
  }
  if (problem.m != 0 && problem.b != 0.0) {
    const QuadratureRule gc = gauss_chebyshev2(n_quad);
    double cross = 0.0;
    for (std::size_t k = 0; k < gc.size(); ++k) {
      const double x = gc.nodes[k];
      const double fv = f(std::acos(x));
      cross += gc.weights[k] * fv * fv / ((1.0 - x) * (1.0 + x));
    }
    numerator -= problem.m * problem.b * cross;
  }
  if (denominator == 0.0)
    throw std::invalid_argument("rayleigh_quotient: trial function vanishes on the quadrature grid");
  return numerator / denominator;
}

double robin_asymptotic(double gamma, double b, const SolverConfig& config) {
  if (!std::isfinite(gamma)) throw std::invalid_argument("robin_asymptotic: gamma must be finite");
  return -gamma * gamma + 2.0 * gamma + effective_eigenvalue(b, config).e_value;
}

}  // namespace fibereig
