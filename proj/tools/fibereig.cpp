// Command-line interface for the fiber-eigenvalue toolkit: single-mode
// solves, grid sweeps with CSV/SVG emission, the effective eigenvalue and
// its non-monotonicity certificate, eigenvalue-curve crossings, derivative
// checks, and the singular-endpoint analysis.
//
// Exit codes: 0 success, 1 usage/validation error (including unwritable
// output and bad config files), 2 solver failure or a failed certification
// / validation item.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "CLI11.hpp"
#include "json.hpp"

#include "fibereig/eigensolver.hpp"
#include "fibereig/legendre.hpp"
#include "fibereig/liouville.hpp"
#include "fibereig/quadrature.hpp"
#include "fibereig/report.hpp"
#include "fibereig/spectrum.hpp"

namespace {

using nlohmann::json;

const double kCrossingUpper = 16.0 / (3.0 * std::numbers::pi);

// ---------------------------------------------------------------------------
// Shared options: solver configuration, output directory, config file.

struct CommonOpts {
  std::string config_file;
  std::string out_dir;
  std::optional<int> n_initial, n_max, quad_extra;
  std::optional<double> rel_tol, residual_tol;
  std::vector<std::string> formats;  // sweep outputs: csv, svg, json
};

void add_common_options(CLI::App* cmd, CommonOpts& opts) {
  cmd->add_option("--config", opts.config_file, "Flat JSON config file (flags override it)");
  cmd->add_option("--out", opts.out_dir, "Output directory for generated files [./out]");
  cmd->add_option("--n-initial", opts.n_initial, "Initial basis size [16]");
  cmd->add_option("--n-max", opts.n_max, "Basis size cap [1536]");
  cmd->add_option("--rel-tol", opts.rel_tol, "Relative Cauchy tolerance [1e-10]");
  cmd->add_option("--residual-tol", opts.residual_tol, "Residual tolerance [1e-8]");
  cmd->add_option("--quad-extra", opts.quad_extra, "Extra quadrature order beyond 2*degree [16]");
}

// Applies the config file (if any), then explicit flags, on top of defaults.
// Unknown config keys are a hard error.
void resolve_options(CommonOpts& opts, fibereig::SolverConfig& solver, std::string& out_dir) {
  out_dir = "./out";
  if (!opts.config_file.empty()) {
    std::ifstream in(opts.config_file);
    if (!in) throw std::invalid_argument("cannot read config file " + opts.config_file);
    json cfg;
    try {
      in >> cfg;
    } catch (const json::parse_error& e) {
      throw std::invalid_argument("config file " + opts.config_file + ": " + e.what());
    }
    if (!cfg.is_object()) throw std::invalid_argument("config file must hold a JSON object");
    for (const auto& [key, value] : cfg.items()) {
      if (key == "n_initial") {
        solver.n_initial = value.get<int>();
      } else if (key == "n_max") {
        solver.n_max = value.get<int>();
      } else if (key == "rel_tol") {
        solver.rel_tol = value.get<double>();
      } else if (key == "residual_tol") {
        solver.residual_tol = value.get<double>();
      } else if (key == "quad_extra") {
        solver.quad_extra = value.get<int>();
      } else if (key == "out") {
        out_dir = value.get<std::string>();
      } else if (key == "formats") {
        opts.formats = value.get<std::vector<std::string>>();
      } else {
        throw std::invalid_argument("config file: unknown key \"" + key + "\"");
      }
    }
  }
  if (opts.n_initial) solver.n_initial = *opts.n_initial;
  if (opts.n_max) solver.n_max = *opts.n_max;
  if (opts.rel_tol) solver.rel_tol = *opts.rel_tol;
  if (opts.residual_tol) solver.residual_tol = *opts.residual_tol;
  if (opts.quad_extra) solver.quad_extra = *opts.quad_extra;
  if (!opts.out_dir.empty()) out_dir = opts.out_dir;
  for (const std::string& f : opts.formats)
    if (f != "csv" && f != "svg" && f != "json")
      throw std::invalid_argument("formats: unknown entry \"" + f + "\" (expected csv, svg, json)");
  solver.validate();
}

// ---------------------------------------------------------------------------
// Range parsing.

double parse_number(const std::string& text, const char* what) {
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument(std::string(what) + ": cannot parse \"" + text + "\"");
  }
  if (used != text.size() || !std::isfinite(v))
    throw std::invalid_argument(std::string(what) + ": cannot parse \"" + text + "\"");
  return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = s.find(sep, start);
    parts.push_back(s.substr(start, pos == std::string::npos ? pos : pos - start));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return parts;
}

// "lo:hi:step" (inclusive of hi within half a step) or a single value.
// Grid points are snapped to 12 decimal places so decimal steps land on
// round values like b = 2 exactly.
std::vector<double> parse_grid(const std::string& spec, const char* what) {
  const std::vector<std::string> parts = split(spec, ':');
  if (parts.size() == 1) return {parse_number(parts[0], what)};
  if (parts.size() != 3)
    throw std::invalid_argument(std::string(what) + ": expected VALUE or LO:HI:STEP, got \"" + spec + "\"");
  const double lo = parse_number(parts[0], what);
  const double hi = parse_number(parts[1], what);
  const double step = parse_number(parts[2], what);
  if (!(step > 0)) throw std::invalid_argument(std::string(what) + ": step must be positive");
  if (hi < lo) throw std::invalid_argument(std::string(what) + ": reversed range (hi < lo)");
  const int count = static_cast<int>(std::floor((hi - lo) / step + 0.5)) + 1;
  std::vector<double> grid;
  grid.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    const double raw = lo + i * step;
    grid.push_back(std::round(raw * 1e12) / 1e12);
  }
  return grid;
}

// "lo:hi" (integers, step 1), a comma list "0,1,-2", or a single integer.
std::vector<int> parse_mode_set(const std::string& spec) {
  std::vector<int> modes;
  auto to_int = [](const std::string& text) {
    const double v = parse_number(text, "--m");
    const int i = static_cast<int>(std::llround(v));
    if (v != static_cast<double>(i)) throw std::invalid_argument("--m: expected integers, got \"" + text + "\"");
    return i;
  };
  if (spec.find(':') != std::string::npos) {
    const std::vector<std::string> parts = split(spec, ':');
    if (parts.size() != 2) throw std::invalid_argument("--m: expected LO:HI, got \"" + spec + "\"");
    const int lo = to_int(parts[0]);
    const int hi = to_int(parts[1]);
    if (hi < lo) throw std::invalid_argument("--m: reversed range (hi < lo)");
    for (int m = lo; m <= hi; ++m) modes.push_back(m);
    return modes;
  }
  for (const std::string& part : split(spec, ',')) modes.push_back(to_int(part));
  return modes;
}

// ---------------------------------------------------------------------------
// Output helpers.

void print_json(const json& j) { std::printf("%s\n", j.dump(2).c_str()); }

bool use_color() {
  return isatty(fileno(stdout)) != 0 && std::getenv("NO_COLOR") == nullptr;
}

void print_check(bool pass, const std::string& name, const std::string& detail) {
  const char* tag = pass ? "PASS" : "FAIL";
  if (use_color())
    std::printf("[%s%s%s] %-34s %s\n", pass ? "\033[32m" : "\033[31m", tag, "\033[0m",
                name.c_str(), detail.c_str());
  else
    std::printf("[%s] %-34s %s\n", tag, name.c_str(), detail.c_str());
}

json mode_value_json(const fibereig::ModeValue& mv) {
  return {{"m", mv.m},
          {"lambda", mv.lambda},
          {"converged", mv.converged},
          {"n_used", mv.n_used},
          {"residual", mv.residual}};
}

// ---------------------------------------------------------------------------
// Quadrature / basis self-tests (the `validate` subcommand).

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

// Integral of sin(x) * [integral of 1/sin(t), t from x to pi/2], x from 0 to
// pi/2.  Swapping the integration order collapses it to the smooth integrand
// tan(t/2), whose Gauss-Legendre value must equal ln 2.
double nested_log2_integral(int n_quad) {
  const fibereig::QuadratureRule gl = fibereig::gauss_legendre(n_quad);
  const double half_pi = std::numbers::pi / 2.0;
  double acc = 0.0;
  for (std::size_t k = 0; k < gl.size(); ++k) {
    const double t = half_pi / 2.0 * (gl.nodes[k] + 1.0);
    acc += half_pi / 2.0 * gl.weights[k] * std::tan(t / 2.0);
  }
  return acc;
}

// The same integral evaluated the direct way: the inner integral in closed
// form, the outer one by quadrature.  The integrand behaves like x*log(x)
// near 0, so this converges slowly; it serves as a loose cross-check.
double nested_log2_integral_direct(int n_quad) {
  const fibereig::QuadratureRule gl = fibereig::gauss_legendre(n_quad);
  const double half_pi = std::numbers::pi / 2.0;
  double acc = 0.0;
  for (std::size_t k = 0; k < gl.size(); ++k) {
    const double x = half_pi / 2.0 * (gl.nodes[k] + 1.0);
    acc += half_pi / 2.0 * gl.weights[k] * std::sin(x) * (-std::log(std::tan(x / 2.0)));
  }
  return acc;
}

std::vector<CheckResult> run_validation_checks() {
  using fibereig::format_double;
  std::vector<CheckResult> checks;
  auto add = [&](const std::string& name, double err, double tol) {
    checks.push_back({name, err <= tol,
                      "error " + format_double(err) + " (tol " + format_double(tol) + ")"});
  };

  {  // Gauss-Legendre: exact for polynomials of degree 2n-1
    const fibereig::QuadratureRule gl = fibereig::gauss_legendre(8);
    double w_sum = 0, x14 = 0;
    for (std::size_t k = 0; k < gl.size(); ++k) {
      w_sum += gl.weights[k];
      x14 += gl.weights[k] * std::pow(gl.nodes[k], 14);
    }
    add("gauss-legendre weight sum", std::abs(w_sum - 2.0), 1e-14);
    add("gauss-legendre degree-14 moment", std::abs(x14 - 2.0 / 15.0), 1e-14);
  }
  {  // Gauss-Chebyshev-2: integrates f(x)*sqrt(1-x^2)
    const fibereig::QuadratureRule gc = fibereig::gauss_chebyshev2(16);
    double w_sum = 0, x2 = 0;
    for (std::size_t k = 0; k < gc.size(); ++k) {
      w_sum += gc.weights[k];
      x2 += gc.weights[k] * gc.nodes[k] * gc.nodes[k];
    }
    add("gauss-chebyshev2 weight sum", std::abs(w_sum - std::numbers::pi / 2.0), 1e-14);
    add("gauss-chebyshev2 x^2 moment", std::abs(x2 - std::numbers::pi / 8.0), 1e-14);
  }
  {  // basis seeds and orthonormality
    const double p00 = fibereig::assoc_legendre_normalized(0, 0, 0.37);
    add("basis P~_0^0 = 1/sqrt(2)", std::abs(p00 - 1.0 / std::sqrt(2.0)), 1e-15);
    const double p11 = fibereig::assoc_legendre_normalized(1, 1, 0.0);
    add("basis P~_1^1(0) = sqrt(3)/2", std::abs(p11 - std::sqrt(3.0) / 2.0), 1e-15);

    const fibereig::QuadratureRule gl = fibereig::gauss_legendre(64);
    double norm = 0, ortho = 0;
    for (std::size_t k = 0; k < gl.size(); ++k) {
      const double p5 = fibereig::assoc_legendre_normalized(5, 2, gl.nodes[k]);
      const double p7 = fibereig::assoc_legendre_normalized(7, 2, gl.nodes[k]);
      norm += gl.weights[k] * p5 * p5;
      ortho += gl.weights[k] * p5 * p7;
    }
    add("basis normalization (l=5, m=2)", std::abs(norm - 1.0), 1e-13);
    add("basis orthogonality (5,7; m=2)", std::abs(ortho), 1e-13);
  }
  {  // the nested-integral golden value
    add("nested integral = ln 2", std::abs(nested_log2_integral(64) - std::numbers::ln2), 1e-10);
    add("nested integral, direct form", std::abs(nested_log2_integral_direct(512) - std::numbers::ln2),
        1e-6);
  }
  return checks;
}

// ---------------------------------------------------------------------------
// Certification (the `certify` subcommand).

struct CertifyItem {
  std::string name;
  bool pass = false;
  std::string detail;
  json details;
};

std::vector<CertifyItem> run_certification(double b_min, double b_max, double step,
                                           const fibereig::SolverConfig& solver) {
  using namespace fibereig;
  std::vector<CertifyItem> items;

  std::ostringstream grid_spec;
  grid_spec << b_min << ":" << b_max << ":" << step;
  const std::vector<double> grid = parse_grid(grid_spec.str(), "--grid");
  if (grid.size() < 3)
    throw std::invalid_argument("certify: grid must contain at least 3 points");

  const MonotonicityReport report = monotonicity_report(grid, solver);
  {
    CertifyItem item;
    item.name = "effective-non-monotonic";
    item.pass = report.non_monotonic && report.witness.has_value();
    json intervals = json::array();
    for (const auto& [lo, hi] : report.decreasing_intervals) intervals.push_back({lo, hi});
    item.details = {{"non_monotonic", report.non_monotonic},
                    {"grid_points", report.grid.size()},
                    {"decreasing_intervals", intervals}};
    if (report.witness) {
      const MonotonicityWitness& w = *report.witness;
      item.details["witness"] = {
          {"b", w.b}, {"delta", w.delta}, {"e_before", w.e_before}, {"e_after", w.e_after}};
      std::ostringstream os;
      os << "e(" << w.b + w.delta << ") = " << w.e_after << " < e(" << w.b << ") = " << w.e_before;
      item.detail = os.str();
    } else {
      item.detail = "no decreasing step found";
    }
    items.push_back(std::move(item));
  }
  {
    CertifyItem item;
    item.name = "effective-increasing-below-1";
    double min_step = std::numeric_limits<double>::infinity();
    int pairs = 0;
    for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
      if (grid[i + 1] > 1.0 + 1e-12) continue;
      min_step = std::min(min_step, report.e_values[i + 1] - report.e_values[i]);
      ++pairs;
    }
    item.pass = pairs > 0 && min_step > -1e-9;
    std::ostringstream os;
    if (pairs == 0) {
      os << "no grid pairs below b = 1";
      item.pass = false;
    } else {
      os << pairs << " steps, smallest increment " << min_step;
    }
    item.detail = os.str();
    item.details = {{"pairs", pairs},
                    {"min_step", pairs > 0 ? min_step : 0.0}};
    items.push_back(std::move(item));
  }
  {
    CertifyItem item;
    item.name = "lambda0-lambda1-crossing";
    const CrossingResult cr = find_crossing(0, 1, {1.0, kCrossingUpper}, solver);
    item.pass = cr.gap <= 1e-7 && cr.b0 > 1.0 && cr.b0 < kCrossingUpper;
    std::ostringstream os;
    os << "b0 = " << cr.b0 << ", |lambda0-lambda1| = " << cr.gap;
    item.detail = os.str();
    item.details = {{"b0", cr.b0},
                    {"gap", cr.gap},
                    {"iterations", cr.iterations},
                    {"lambda_at_b0", cr.lambda_at_b0},
                    {"final_bracket", {cr.bracket_used.first, cr.bracket_used.second}}};
    items.push_back(std::move(item));

    CertifyItem hf;
    hf.name = "derivative-negative-at-crossing";
    const double d = hf_derivative({1, cr.b0}, solver);
    hf.pass = d < 0.0;
    std::ostringstream hs;
    hs << "d lambda_1/db at b0 = " << d;
    hf.detail = hs.str();
    hf.details = {{"b0", cr.b0}, {"derivative", d}};
    items.push_back(std::move(hf));
  }
  {
    CertifyItem item;
    item.name = "mode-inequalities";
    json sub = json::array();
    bool all = true;
    auto run_suite = [&](const std::string& name, const std::vector<int>& ms,
                         const std::vector<double>& bs,
                         const std::function<double(double)>& floor_of_b) {
      double worst = std::numeric_limits<double>::infinity();
      for (int m : ms)
        for (double b : bs) {
          const EigenPair p = solve_mode({m, b}, solver);
          if (!p.converged) throw std::runtime_error("certify: unconverged solve in " + name);
          worst = std::min(worst, p.lambda - floor_of_b(b));
        }
      sub.push_back({{"name", name}, {"min_margin", worst}, {"pass", worst > 0}});
      all = all && worst > 0;
      return worst;
    };
    std::vector<double> low_b, mid_b, neg_b;
    for (double b = 0.0; b < 1.0 - 1e-12; b += 0.1) low_b.push_back(std::round(b * 1e12) / 1e12);
    for (double b = 1.0; b < 2.0 - 1e-12; b += 0.1) mid_b.push_back(std::round(b * 1e12) / 1e12);
    for (double b = 0.25; b <= 2.5 + 1e-12; b += 0.25) neg_b.push_back(std::round(b * 1e12) / 1e12);
    run_suite("lambda_m > b^2/4 for m in {1,2}, b in [0,1)", {1, 2}, low_b,
              [](double b) { return b * b / 4.0; });
    run_suite("lambda_m > 1 for m in {2,3}, b in [1,2)", {2, 3}, mid_b,
              [](double) { return 1.0; });
    run_suite("lambda_m > b^2/4 for m in {-1,-2}, b in (0,2.5]", {-1, -2}, neg_b,
              [](double b) { return b * b / 4.0; });
    item.pass = all;
    item.detail = all ? "all margins positive" : "margin violation";
    item.details = {{"suites", sub}};
    items.push_back(std::move(item));
  }
  {
    CertifyItem item;
    item.name = "trial-upper-bound";
    auto f = [](double t) { return std::sin(t); };
    auto df = [](double t) { return std::cos(t); };
    double worst_gap = std::numeric_limits<double>::infinity();
    double worst_formula = 0.0;
    for (double b = 0.0; b <= 2.0 + 1e-12; b += 0.1) {
      const double bb = std::round(b * 1e12) / 1e12;
      const double rq = fibereig::rayleigh_quotient({1, bb}, f, df);
      const double closed = bb * bb / 4.0 - 3.0 * std::numbers::pi / 8.0 * bb + 2.0;
      worst_formula = std::max(worst_formula, std::abs(rq - closed));
      const EigenPair p = solve_mode({1, bb}, solver);
      if (!p.converged) throw std::runtime_error("certify: unconverged solve in trial-upper-bound");
      worst_gap = std::min(worst_gap, closed - p.lambda);
    }
    item.pass = worst_gap >= -1e-10 && worst_formula <= 1e-12;
    std::ostringstream os;
    os << "min(bound - lambda_1) = " << worst_gap << ", quotient vs formula " << worst_formula;
    item.detail = os.str();
    item.details = {{"min_bound_minus_lambda", worst_gap}, {"max_formula_error", worst_formula}};
    items.push_back(std::move(item));
  }
  {
    CertifyItem item;
    item.name = "nested-integral-ln2";
    const double value = nested_log2_integral(64);
    const double err = std::abs(value - std::numbers::ln2);
    item.pass = err <= 1e-10;
    std::ostringstream os;
    os << "value " << value << ", error " << err;
    item.detail = os.str();
    item.details = {{"value", value}, {"error", err}};
    items.push_back(std::move(item));
  }
  return items;
}

}  // namespace

// ---------------------------------------------------------------------------

int main(int argc, char** argv) {
  CLI::App app{"Lowest eigenvalues of the magnetic fiber operators on (0, pi) "
               "and the effective-eigenvalue analysis built on them"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "fibereig 0.1.0");

  CommonOpts common;

  // lambda
  auto* cmd_lambda = app.add_subcommand("lambda", "Solve one mode: lowest eigenvalue of L_{m,b}");
  int lam_m = 0;
  double lam_b = 0.0;
  cmd_lambda->add_option("--m", lam_m, "Angular mode (integer)")->required();
  cmd_lambda->add_option("--b", lam_b, "Field strength")->required();
  add_common_options(cmd_lambda, common);

  // sweep
  auto* cmd_sweep = app.add_subcommand("sweep", "Solve on a b-grid and write sweep.csv / effective.csv");
  std::string sweep_b, sweep_m = "auto";
  bool sweep_svg_flag = false;
  cmd_sweep->add_option("--b", sweep_b, "Grid LO:HI:STEP (or single value)")->required();
  cmd_sweep->add_option("--m", sweep_m, "Modes: LO:HI, comma list, or 'auto' [auto]");
  cmd_sweep->add_flag("--svg", sweep_svg_flag, "Also render sweep.svg");
  add_common_options(cmd_sweep, common);

  // effective
  auto* cmd_effective = app.add_subcommand("effective", "Effective eigenvalue e(b) = min_m lambda_m(b)");
  std::string eff_b;
  cmd_effective->add_option("--b", eff_b, "Single value or grid LO:HI:STEP")->required();
  add_common_options(cmd_effective, common);

  // crossing
  auto* cmd_crossing = app.add_subcommand("crossing", "Locate b with lambda_{m_a}(b) = lambda_{m_b}(b)");
  int cross_ma = 0, cross_mb = 1;
  std::string cross_bracket;
  cmd_crossing->add_option("--m-a", cross_ma, "First mode [0]");
  cmd_crossing->add_option("--m-b", cross_mb, "Second mode [1]");
  cmd_crossing->add_option("--bracket", cross_bracket, "Bracket LO:HI [1:16/(3*pi)]");
  add_common_options(cmd_crossing, common);

  // derivative
  auto* cmd_derivative = app.add_subcommand("derivative", "d lambda_m / db via the Hellmann-Feynman identity");
  int der_m = 0;
  double der_b = 0.0;
  cmd_derivative->add_option("--m", der_m, "Angular mode (integer)")->required();
  cmd_derivative->add_option("--b", der_b, "Field strength")->required();
  add_common_options(cmd_derivative, common);

  // classify
  auto* cmd_classify = app.add_subcommand("classify", "Endpoint classification and Frobenius data");
  int cls_m = 0;
  double cls_b = 0.0;
  int cls_order = 4;
  cmd_classify->add_option("--m", cls_m, "Angular mode (integer)")->required();
  cmd_classify->add_option("--b", cls_b, "Field strength")->required();
  cmd_classify->add_option("--order", cls_order, "Series order for the reported coefficients [4]");
  add_common_options(cmd_classify, common);

  // series
  auto* cmd_series = app.add_subcommand("series", "Frobenius series solution near theta = 0");
  int ser_m = 0, ser_order = 6;
  double ser_b = 0.0, ser_lambda = 0.0;
  std::string ser_branch = "plus";
  bool ser_symbolic = false;
  cmd_series->add_option("--m", ser_m, "Angular mode (integer)")->required();
  cmd_series->add_option("--b", ser_b, "Field strength")->required();
  cmd_series->add_option("--lambda", ser_lambda, "Spectral parameter [0]");
  cmd_series->add_option("--branch", ser_branch, "Indicial branch: plus or minus [plus]")
      ->check(CLI::IsMember({"plus", "minus"}));
  cmd_series->add_option("--order", ser_order, "Series order [6]");
  cmd_series->add_flag("--symbolic", ser_symbolic, "Include exact coefficients in b and lambda");
  add_common_options(cmd_series, common);

  // certify
  auto* cmd_certify = app.add_subcommand("certify", "Non-monotonicity certificate and inequality suite");
  double cert_bmin = 0.0, cert_bmax = 2.0, cert_step = 0.02;
  cmd_certify->add_option("--b-min", cert_bmin, "Grid start [0]");
  cmd_certify->add_option("--b-max", cert_bmax, "Grid end [2]");
  cmd_certify->add_option("--grid-step", cert_step, "Grid step [0.02]");
  add_common_options(cmd_certify, common);

  // validate
  auto* cmd_validate = app.add_subcommand("validate", "Quadrature and basis self-tests (incl. the ln 2 value)");
  add_common_options(cmd_validate, common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    fibereig::SolverConfig solver;
    std::string out_dir;
    resolve_options(common, solver, out_dir);
    const std::filesystem::path out_path(out_dir);

    if (cmd_lambda->parsed()) {
      const fibereig::EigenPair pair = fibereig::solve_mode({lam_m, lam_b}, solver);
      print_json({{"m", lam_m},
                  {"b", lam_b},
                  {"lambda", pair.lambda},
                  {"n_used", pair.n_used},
                  {"residual", pair.residual},
                  {"converged", pair.converged}});
      return pair.converged ? 0 : 2;
    }

    if (cmd_sweep->parsed()) {
      const std::vector<double> grid = parse_grid(sweep_b, "--b");
      std::vector<int> modes;  // empty = automatic per-b range
      if (sweep_m != "auto") modes = parse_mode_set(sweep_m);
      const fibereig::SweepTable table = fibereig::sweep(grid, modes, solver);
      for (const std::string& w : table.warnings) std::fprintf(stderr, "warning: %s\n", w.c_str());

      std::vector<std::string> formats = common.formats;
      if (formats.empty()) formats = {"csv"};
      if (sweep_svg_flag && std::find(formats.begin(), formats.end(), "svg") == formats.end())
        formats.push_back("svg");

      json written = json::array();
      for (const std::string& f : formats) {
        if (f == "csv") {
          fibereig::write_text_file(out_path / "sweep.csv", fibereig::sweep_csv(table));
          fibereig::write_text_file(out_path / "effective.csv", fibereig::effective_csv(table));
          written.push_back((out_path / "sweep.csv").string());
          written.push_back((out_path / "effective.csv").string());
        } else if (f == "svg") {
          fibereig::write_text_file(out_path / "sweep.svg", fibereig::sweep_svg(table));
          written.push_back((out_path / "sweep.svg").string());
        }
      }
      json summary = {{"rows", table.rows.size()},
                      {"b_points", table.per_b.size()},
                      {"warnings", table.warnings.size()},
                      {"written", written}};
      if (std::find(formats.begin(), formats.end(), "json") != formats.end()) {
        json rows = json::array();
        for (const fibereig::SweepRow& r : table.rows)
          rows.push_back({{"b", r.b},
                          {"m", r.m},
                          {"lambda", r.lambda},
                          {"converged", r.converged},
                          {"n_used", r.n_used},
                          {"residual", r.residual}});
        json per_b = json::array();
        for (const fibereig::SweepPerB& p : table.per_b)
          per_b.push_back({{"b", p.b}, {"e_value", p.e_value}, {"argmin_m", p.argmin_m}});
        summary["table"] = {{"rows", rows}, {"per_b", per_b}};
      }
      print_json(summary);
      return 0;
    }

    if (cmd_effective->parsed()) {
      const std::vector<double> grid = parse_grid(eff_b, "--b");
      if (grid.size() == 1) {
        const fibereig::EffectiveResult res = fibereig::effective_eigenvalue(grid[0], solver);
        json per_mode = json::array();
        for (const fibereig::ModeValue& mv : res.per_mode) per_mode.push_back(mode_value_json(mv));
        print_json({{"b", grid[0]},
                    {"e_value", res.e_value},
                    {"argmin_m", res.argmin_m},
                    {"per_mode", per_mode}});
        return 0;
      }
      const fibereig::SweepTable table = fibereig::sweep(grid, {}, solver);
      for (const std::string& w : table.warnings) std::fprintf(stderr, "warning: %s\n", w.c_str());
      fibereig::write_text_file(out_path / "effective.csv", fibereig::effective_csv(table));
      print_json({{"b_points", table.per_b.size()},
                  {"written", {(out_path / "effective.csv").string()}}});
      return 0;
    }

    if (cmd_crossing->parsed()) {
      std::pair<double, double> bracket{1.0, kCrossingUpper};
      if (!cross_bracket.empty()) {
        const std::vector<std::string> parts = split(cross_bracket, ':');
        if (parts.size() != 2) throw std::invalid_argument("--bracket: expected LO:HI");
        bracket = {parse_number(parts[0], "--bracket"), parse_number(parts[1], "--bracket")};
      }
      const fibereig::CrossingResult cr = fibereig::find_crossing(cross_ma, cross_mb, bracket, solver);
      print_json({{"m_a", cross_ma},
                  {"m_b", cross_mb},
                  {"b0", cr.b0},
                  {"bracket", {bracket.first, bracket.second}},
                  {"final_bracket", {cr.bracket_used.first, cr.bracket_used.second}},
                  {"iterations", cr.iterations},
                  {"lambda_at_b0", cr.lambda_at_b0},
                  {"gap", cr.gap}});
      return 0;
    }

    if (cmd_derivative->parsed()) {
      const double d = fibereig::hf_derivative({der_m, der_b}, solver);
      print_json({{"m", der_m}, {"b", der_b}, {"dlambda_db", d}});
      return 0;
    }

    if (cmd_classify->parsed()) {
      const fibereig::ModeProblem problem{cls_m, cls_b};
      auto endpoint_json = [&](fibereig::Endpoint ep) {
        const fibereig::EndpointClass c = fibereig::classify_endpoint(problem, ep);
        return json{{"endpoint", ep == fibereig::Endpoint::Zero ? "zero" : "pi"},
                    {"verdict", c.verdict == fibereig::EndpointVerdict::LimitPoint ? "limit_point"
                                                                                   : "limit_circle"},
                    {"exponents", {c.exponents.first, c.exponents.second}},
                    {"log_case", c.log_case}};
      };
      auto series_json = [&](fibereig::IndicialBranch branch, double exponent) {
        const fibereig::FrobeniusExpansion num =
            fibereig::frobenius_expansion(problem, exponent, 0.0, cls_order);
        const fibereig::SymbolicExpansion sym =
            fibereig::frobenius_symbolic(cls_m, branch, cls_order);
        json coeffs = json::array();
        json symbolic = json::array();
        for (double a : num.coeffs) coeffs.push_back(a);
        for (const fibereig::SeriesPoly& p : sym.coeffs) symbolic.push_back(p.to_string());
        json out = {{"exponent", exponent},
                    {"coeffs", coeffs},
                    {"symbolic", symbolic},
                    {"log_case", num.log_case}};
        if (num.resonance_order) out["resonance_order"] = *num.resonance_order;
        return out;
      };
      const auto [s_plus, s_minus] = fibereig::indicial_exponents(cls_m);
      json out = {{"m", cls_m},
                  {"b", cls_b},
                  {"indicial_exponents", {s_plus, s_minus}},
                  {"endpoints", {endpoint_json(fibereig::Endpoint::Zero), endpoint_json(fibereig::Endpoint::Pi)}},
                  {"series_plus", series_json(fibereig::IndicialBranch::Plus, s_plus)}};
      if (cls_m != 0) out["series_minus"] = series_json(fibereig::IndicialBranch::Minus, s_minus);
      print_json(out);
      return 0;
    }

    if (cmd_series->parsed()) {
      const fibereig::IndicialBranch branch =
          ser_branch == "plus" ? fibereig::IndicialBranch::Plus : fibereig::IndicialBranch::Minus;
      const auto [s_plus, s_minus] = fibereig::indicial_exponents(ser_m);
      const double exponent = branch == fibereig::IndicialBranch::Plus ? s_plus : s_minus;
      const fibereig::FrobeniusExpansion exp =
          fibereig::frobenius_expansion({ser_m, ser_b}, exponent, ser_lambda, ser_order);
      json coeffs = json::array();
      for (double a : exp.coeffs) coeffs.push_back(a);
      json out = {{"m", ser_m},
                  {"b", ser_b},
                  {"lambda", ser_lambda},
                  {"exponent", exp.exponent},
                  {"coeffs", coeffs},
                  {"log_case", exp.log_case}};
      if (exp.resonance_order) out["resonance_order"] = *exp.resonance_order;
      if (ser_symbolic) {
        const fibereig::SymbolicExpansion sym = fibereig::frobenius_symbolic(ser_m, branch, ser_order);
        json symbolic = json::array();
        for (const fibereig::SeriesPoly& p : sym.coeffs) symbolic.push_back(p.to_string());
        out["symbolic"] = symbolic;
      }
      print_json(out);
      return 0;
    }

    if (cmd_certify->parsed()) {
      if (!(cert_step > 0)) throw std::invalid_argument("certify: --grid-step must be positive");
      if (!(cert_bmax > cert_bmin)) throw std::invalid_argument("certify: --b-max must exceed --b-min");
      const std::vector<CertifyItem> items = run_certification(cert_bmin, cert_bmax, cert_step, solver);
      bool all = true;
      json jitems = json::array();
      for (const CertifyItem& item : items) {
        print_check(item.pass, item.name, item.detail);
        all = all && item.pass;
        json j = {{"name", item.name}, {"pass", item.pass}};
        j["details"] = item.details;
        jitems.push_back(std::move(j));
      }
      const json doc = {{"tool", "fibereig certify"},
                        {"parameters",
                         {{"b_min", cert_bmin},
                          {"b_max", cert_bmax},
                          {"grid_step", cert_step},
                          {"crossing_bracket", {1.0, kCrossingUpper}},
                          {"solver",
                           {{"n_initial", solver.n_initial},
                            {"n_max", solver.n_max},
                            {"rel_tol", solver.rel_tol},
                            {"residual_tol", solver.residual_tol}}}}},
                        {"items", jitems},
                        {"all_pass", all}};
      fibereig::write_text_file(out_path / "certify.json", doc.dump(2) + "\n");
      std::printf("%s: %s (report: %s)\n", "certify", all ? "PASS" : "FAIL",
                  (out_path / "certify.json").string().c_str());
      return all ? 0 : 2;
    }

    if (cmd_validate->parsed()) {
      bool all = true;
      for (const CheckResult& check : run_validation_checks()) {
        print_check(check.pass, check.name, check.detail);
        all = all && check.pass;
      }
      std::printf("validate: %s\n", all ? "PASS" : "FAIL");
      return all ? 0 : 2;
    }
  } catch (const std::ios_base::failure& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
