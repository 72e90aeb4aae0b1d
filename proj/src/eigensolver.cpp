#include "fibereig/eigensolver.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>

#include "fibereig/legendre.hpp"
#include "fibereig/quadrature.hpp"

namespace fibereig {

namespace {

// Coupling integrals split by parity: Ptilde_l^m has parity (-1)^{l-m}, and
// 1/sqrt(1-x^2) is even, so G_{ll'} vanishes for odd l-l'. "even" holds the
// sub-block for l-m even, "odd" for l-m odd.
struct CouplingBlocks {
  int n_funcs = 0;
  Eigen::MatrixXd even;
  Eigen::MatrixXd odd;
};

std::shared_ptr<const CouplingBlocks> compute_blocks(int m_abs, int n, int quad_extra) {
  const BasisSpec spec{m_abs, n};
  const int order = quad_order_for(spec.max_degree(), quad_extra);
  const QuadratureRule rule = gauss_chebyshev2(order);

  const std::vector<double> table = basis_table(spec, rule.nodes);
  const int ne = (n + 1) / 2;
  const int no = n / 2;
  Eigen::MatrixXd pe(static_cast<Eigen::Index>(rule.size()), ne);
  Eigen::MatrixXd po(static_cast<Eigen::Index>(rule.size()), no);
  Eigen::VectorXd we(static_cast<Eigen::Index>(rule.size()));
  for (std::size_t k = 0; k < rule.size(); ++k) {
    const double x = rule.nodes[k];
    // The rule integrates g(x) sqrt(1-x^2); the coupling integrand is
    // Ptilde_l Ptilde_l' / sqrt(1-x^2), so g carries a 1/(1-x^2) factor.
    we[static_cast<Eigen::Index>(k)] = rule.weights[k] / ((1.0 - x) * (1.0 + x));
    const double* row = table.data() + k * static_cast<std::size_t>(n);
    for (int j = 0; j < ne; ++j) pe(static_cast<Eigen::Index>(k), j) = row[2 * j];
    for (int j = 0; j < no; ++j) po(static_cast<Eigen::Index>(k), j) = row[2 * j + 1];
  }

  auto blocks = std::make_shared<CouplingBlocks>();
  blocks->n_funcs = n;
  blocks->even = pe.transpose() * we.asDiagonal() * pe;
  blocks->odd = po.transpose() * we.asDiagonal() * po;
  blocks->even = 0.5 * (blocks->even + blocks->even.transpose()).eval();
  blocks->odd = 0.5 * (blocks->odd + blocks->odd.transpose()).eval();
  return blocks;
}

// Process-wide cache of coupling blocks per |m|; entries only grow. Values
// are immutable once published, so concurrent solves can share them.
std::shared_ptr<const CouplingBlocks> coupling_blocks(int m_abs, int n, int quad_extra) {
  struct Entry {
    std::mutex mu;
    std::shared_ptr<const CouplingBlocks> blocks;
  };
  static std::mutex map_mu;
  static std::map<int, std::unique_ptr<Entry>> cache;

  Entry* entry = nullptr;
  {
    std::lock_guard<std::mutex> lock(map_mu);
    auto& slot = cache[m_abs];
    if (!slot) slot = std::make_unique<Entry>();
    entry = slot.get();
  }
  std::lock_guard<std::mutex> lock(entry->mu);
  if (!entry->blocks || entry->blocks->n_funcs < n) entry->blocks = compute_blocks(m_abs, n, quad_extra);
  return entry->blocks;
}

void fix_sign(Eigen::VectorXd& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (v[i] != 0.0) {
      if (v[i] < 0.0) v = -v;
      return;
    }
  }
}

struct BlockSolve {
  double lambda = 0.0;
  Eigen::VectorXd vec;
  double residual = 0.0;
};

BlockSolve solve_block(const Eigen::MatrixXd& A) {
  BlockSolve out;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A);
  if (es.info() != Eigen::Success) throw std::runtime_error("solve_block: eigensolver failed");
  out.vec = es.eigenvectors().col(0);
  // Rayleigh-quotient polish: the QR sweeps perturb eigenvalues by roughly
  // eps*||A|| (the diagonal grows like n^2), but the eigenvector angle stays
  // accurate and the ground state's coefficients decay fast, so v'Av is
  // evaluated with O(lambda) effective weight and recovers the lost digits.
  const Eigen::VectorXd av = A * out.vec;
  out.lambda = out.vec.dot(av) / out.vec.squaredNorm();
  out.residual = (av - out.lambda * out.vec).norm();
  return out;
}

// Parity sub-block of the Galerkin matrix: indices j (0-based within the
// block) map to l = m_abs + 2j + parity.
Eigen::MatrixXd assemble_block(int m_abs, double coupling_coeff, double shift, int n, int parity,
                               const CouplingBlocks* blocks) {
  const int size = parity == 0 ? (n + 1) / 2 : n / 2;
  Eigen::MatrixXd A;
  if (coupling_coeff != 0.0) {
    const Eigen::MatrixXd& g = parity == 0 ? blocks->even : blocks->odd;
    A = -coupling_coeff * g.topLeftCorner(size, size);
  } else {
    A = Eigen::MatrixXd::Zero(size, size);
  }
  for (int j = 0; j < size; ++j) {
    const double l = m_abs + 2 * j + parity;
    A(j, j) += l * (l + 1.0) + shift;
  }
  return A;
}

struct RitzValue {
  double lambda = 0.0;
  Eigen::VectorXd coeffs;  // full-length, zeros in the losing parity sector
  double residual = 0.0;
};

RitzValue ritz_at(const ModeProblem& problem, int n, int quad_extra) {
  const int m_abs = std::abs(problem.m);
  const double coupling_coeff = problem.m * problem.b;
  const double shift = problem.b * problem.b / 4.0;

  std::shared_ptr<const CouplingBlocks> blocks;
  if (coupling_coeff != 0.0) blocks = coupling_blocks(m_abs, n, quad_extra);

  const BlockSolve even = solve_block(assemble_block(m_abs, coupling_coeff, shift, n, 0, blocks.get()));
  RitzValue out;
  out.coeffs = Eigen::VectorXd::Zero(n);
  if (n >= 2) {
    const BlockSolve odd = solve_block(assemble_block(m_abs, coupling_coeff, shift, n, 1, blocks.get()));
    if (odd.lambda < even.lambda) {
      out.lambda = odd.lambda;
      out.residual = odd.residual;
      for (int j = 0; j < odd.vec.size(); ++j) out.coeffs[2 * j + 1] = odd.vec[j];
      fix_sign(out.coeffs);
      return out;
    }
  }
  out.lambda = even.lambda;
  out.residual = even.residual;
  for (int j = 0; j < even.vec.size(); ++j) out.coeffs[2 * j] = even.vec[j];
  fix_sign(out.coeffs);
  return out;
}

}  // namespace

void SolverConfig::validate() const {
  if (n_initial < 1) throw std::invalid_argument("SolverConfig: n_initial must be >= 1");
  if (n_max < n_initial) throw std::invalid_argument("SolverConfig: n_max must be >= n_initial");
  if (!(rel_tol > 0.0)) throw std::invalid_argument("SolverConfig: rel_tol must be positive");
  if (!(residual_tol > 0.0)) throw std::invalid_argument("SolverConfig: residual_tol must be positive");
  if (quad_extra < 0) throw std::invalid_argument("SolverConfig: quad_extra must be >= 0");
}

Eigen::MatrixXd assemble_matrix(const ModeProblem& problem, int n) {
  if (n < 1) throw std::invalid_argument("assemble_matrix: n must be >= 1");
  if (!std::isfinite(problem.b)) throw std::invalid_argument("assemble_matrix: b must be finite");

  const int m_abs = std::abs(problem.m);
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
  for (int j = 0; j < n; ++j) {
    const double l = m_abs + j;
    A(j, j) = l * (l + 1.0) + problem.b * problem.b / 4.0;
  }
  const double coupling_coeff = problem.m * problem.b;
  if (coupling_coeff != 0.0) {
    const auto blocks = coupling_blocks(m_abs, n, SolverConfig{}.quad_extra);
    for (int j = 0; j < n; j += 2)
      for (int k = 0; k < n; k += 2) A(j, k) -= coupling_coeff * blocks->even(j / 2, k / 2);
    for (int j = 1; j < n; j += 2)
      for (int k = 1; k < n; k += 2) A(j, k) -= coupling_coeff * blocks->odd(j / 2, k / 2);
  }
  return A;
}

std::pair<double, Eigen::VectorXd> smallest_eigenpair(const Eigen::MatrixXd& A) {
  if (A.rows() == 0 || A.rows() != A.cols()) throw std::invalid_argument("smallest_eigenpair: matrix must be square and non-empty");
  if (!A.allFinite()) throw std::invalid_argument("smallest_eigenpair: matrix has non-finite entries");

  const Eigen::MatrixXd S = 0.5 * (A + A.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(S);
  if (es.info() != Eigen::Success) throw std::runtime_error("smallest_eigenpair: eigensolver failed");
  Eigen::VectorXd v = es.eigenvectors().col(0);
  fix_sign(v);
  const double lambda = v.dot(S * v) / v.squaredNorm();  // same polish as solve_block
  return {lambda, std::move(v)};
}

EigenPair solve_mode(const ModeProblem& problem, const SolverConfig& config) {
  config.validate();
  if (!std::isfinite(problem.b)) throw std::invalid_argument("solve_mode: b must be finite");

  int n = config.n_initial;
  RitzValue cur = ritz_at(problem, n, config.quad_extra);
  bool cauchy_ok = false;
  while (n < config.n_max) {
    const int next = std::min(2 * n, config.n_max);
    RitzValue fine = ritz_at(problem, next, config.quad_extra);
    const bool pass = std::abs(fine.lambda - cur.lambda) <= config.rel_tol * std::max(1.0, std::abs(cur.lambda));
    cur = std::move(fine);
    n = next;
    if (pass) {
      cauchy_ok = true;
      break;
    }
  }

  EigenPair result;
  result.lambda = cur.lambda;
  result.coeffs = std::move(cur.coeffs);
  result.n_used = n;
  result.residual = cur.residual;
  result.converged = cauchy_ok && cur.residual <= config.residual_tol;
  return result;
}

double coupling_form(int m_abs, const Eigen::VectorXd& coeffs, int quad_extra) {
  if (m_abs < 0) throw std::invalid_argument("coupling_form: m_abs must be >= 0");
  if (coeffs.size() == 0) throw std::invalid_argument("coupling_form: empty coefficient vector");
  const int n = static_cast<int>(coeffs.size());
  const auto blocks = coupling_blocks(m_abs, n, quad_extra);
  const int ne = (n + 1) / 2;
  const int no = n / 2;
  Eigen::VectorXd ce(ne), co(no);
  for (int j = 0; j < ne; ++j) ce[j] = coeffs[2 * j];
  for (int j = 0; j < no; ++j) co[j] = coeffs[2 * j + 1];
  double acc = ce.dot(blocks->even.topLeftCorner(ne, ne) * ce);
  if (no > 0) acc += co.dot(blocks->odd.topLeftCorner(no, no) * co);
  return acc;
}

}  // namespace fibereig
