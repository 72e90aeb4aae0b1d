// Python bindings for the fiber-eigenvalue toolkit.  The module mirrors the
// C++ API: mode solves, the effective eigenvalue, sweeps, crossings, the
// Hellmann-Feynman derivative, trial-function quotients, and the
// singular-endpoint (Liouville / Frobenius) analysis.

#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <numbers>
#include <sstream>

#include "fibereig/eigensolver.hpp"
#include "fibereig/legendre.hpp"
#include "fibereig/liouville.hpp"
#include "fibereig/spectrum.hpp"

namespace py = pybind11;
using namespace fibereig;

namespace {

const double kCrossingUpper = 16.0 / (3.0 * std::numbers::pi);

SolverConfig config_or_default(const std::optional<SolverConfig>& cfg) {
  return cfg.value_or(SolverConfig{});
}

}  // namespace

PYBIND11_MODULE(_fibereig, mod) {
  mod.doc() = "Lowest eigenvalues of the magnetic fiber operators on (0, pi), "
              "the effective eigenvalue e(b), and the singular-endpoint analysis.";

  py::class_<SolverConfig>(mod, "SolverConfig")
      .def(py::init<>())
      .def_readwrite("n_initial", &SolverConfig::n_initial)
      .def_readwrite("n_max", &SolverConfig::n_max)
      .def_readwrite("rel_tol", &SolverConfig::rel_tol)
      .def_readwrite("residual_tol", &SolverConfig::residual_tol)
      .def_readwrite("quad_extra", &SolverConfig::quad_extra)
      .def("validate", &SolverConfig::validate)
      .def("__repr__", [](const SolverConfig& c) {
        std::ostringstream os;
        os << "SolverConfig(n_initial=" << c.n_initial << ", n_max=" << c.n_max
           << ", rel_tol=" << c.rel_tol << ", residual_tol=" << c.residual_tol
           << ", quad_extra=" << c.quad_extra << ")";
        return os.str();
      });

  py::class_<EigenPair>(mod, "EigenPair")
      .def_readonly("lambda_", &EigenPair::lambda, "Lowest eigenvalue (Ritz upper bound).")
      .def_readonly("coeffs", &EigenPair::coeffs)
      .def_readonly("n_used", &EigenPair::n_used)
      .def_readonly("residual", &EigenPair::residual)
      .def_readonly("converged", &EigenPair::converged)
      .def("__repr__", [](const EigenPair& p) {
        std::ostringstream os;
        os << "EigenPair(lambda_=" << p.lambda << ", n_used=" << p.n_used
           << ", residual=" << p.residual << ", converged=" << (p.converged ? "True" : "False")
           << ")";
        return os.str();
      });

  py::class_<ModeValue>(mod, "ModeValue")
      .def_readonly("m", &ModeValue::m)
      .def_readonly("lambda_", &ModeValue::lambda)
      .def_readonly("converged", &ModeValue::converged)
      .def_readonly("n_used", &ModeValue::n_used)
      .def_readonly("residual", &ModeValue::residual)
      .def("__repr__", [](const ModeValue& v) {
        std::ostringstream os;
        os << "ModeValue(m=" << v.m << ", lambda_=" << v.lambda << ")";
        return os.str();
      });

  py::class_<EffectiveResult>(mod, "EffectiveResult")
      .def_readonly("e_value", &EffectiveResult::e_value)
      .def_readonly("argmin_m", &EffectiveResult::argmin_m)
      .def_readonly("per_mode", &EffectiveResult::per_mode)
      .def("__repr__", [](const EffectiveResult& r) {
        std::ostringstream os;
        os << "EffectiveResult(e_value=" << r.e_value << ", argmin_m=" << r.argmin_m << ")";
        return os.str();
      });

  py::class_<SweepRow>(mod, "SweepRow")
      .def_readonly("b", &SweepRow::b)
      .def_readonly("m", &SweepRow::m)
      .def_readonly("lambda_", &SweepRow::lambda)
      .def_readonly("converged", &SweepRow::converged)
      .def_readonly("n_used", &SweepRow::n_used)
      .def_readonly("residual", &SweepRow::residual);

  py::class_<SweepPerB>(mod, "SweepPerB")
      .def_readonly("b", &SweepPerB::b)
      .def_readonly("e_value", &SweepPerB::e_value)
      .def_readonly("argmin_m", &SweepPerB::argmin_m);

  py::class_<SweepTable>(mod, "SweepTable")
      .def_readonly("rows", &SweepTable::rows)
      .def_readonly("per_b", &SweepTable::per_b)
      .def_readonly("warnings", &SweepTable::warnings);

  py::class_<CrossingResult>(mod, "CrossingResult")
      .def_readonly("b0", &CrossingResult::b0)
      .def_readonly("bracket_used", &CrossingResult::bracket_used)
      .def_readonly("iterations", &CrossingResult::iterations)
      .def_readonly("lambda_at_b0", &CrossingResult::lambda_at_b0)
      .def_readonly("gap", &CrossingResult::gap)
      .def("__repr__", [](const CrossingResult& c) {
        std::ostringstream os;
        os << "CrossingResult(b0=" << c.b0 << ", gap=" << c.gap << ")";
        return os.str();
      });

  py::class_<MonotonicityWitness>(mod, "MonotonicityWitness")
      .def_readonly("b", &MonotonicityWitness::b)
      .def_readonly("delta", &MonotonicityWitness::delta)
      .def_readonly("e_before", &MonotonicityWitness::e_before)
      .def_readonly("e_after", &MonotonicityWitness::e_after)
      .def("__repr__", [](const MonotonicityWitness& w) {
        std::ostringstream os;
        os << "MonotonicityWitness(b=" << w.b << ", delta=" << w.delta
           << ", e_before=" << w.e_before << ", e_after=" << w.e_after << ")";
        return os.str();
      });

  py::class_<MonotonicityReport>(mod, "MonotonicityReport")
      .def_readonly("grid", &MonotonicityReport::grid)
      .def_readonly("e_values", &MonotonicityReport::e_values)
      .def_readonly("decreasing_intervals", &MonotonicityReport::decreasing_intervals)
      .def_readonly("non_monotonic", &MonotonicityReport::non_monotonic)
      .def_readonly("witness", &MonotonicityReport::witness);

  py::enum_<Endpoint>(mod, "Endpoint")
      .value("Zero", Endpoint::Zero)
      .value("Pi", Endpoint::Pi);

  py::enum_<EndpointVerdict>(mod, "EndpointVerdict")
      .value("LimitPoint", EndpointVerdict::LimitPoint)
      .value("LimitCircle", EndpointVerdict::LimitCircle);

  py::enum_<IndicialBranch>(mod, "IndicialBranch")
      .value("Plus", IndicialBranch::Plus)
      .value("Minus", IndicialBranch::Minus);

  py::class_<EndpointClass>(mod, "EndpointClass")
      .def_readonly("endpoint", &EndpointClass::endpoint)
      .def_readonly("exponents", &EndpointClass::exponents)
      .def_readonly("verdict", &EndpointClass::verdict)
      .def_readonly("log_case", &EndpointClass::log_case);

  py::class_<LiouvillePotential>(mod, "LiouvillePotential")
      .def_readonly("m", &LiouvillePotential::m)
      .def_readonly("b", &LiouvillePotential::b)
      .def_readonly("laurent", &LiouvillePotential::laurent,
                    "laurent[k] multiplies theta^(k-2) in the expansion at 0.")
      .def("__call__", &LiouvillePotential::operator(), py::arg("theta"));

  py::class_<FrobeniusExpansion>(mod, "FrobeniusExpansion")
      .def_readonly("exponent", &FrobeniusExpansion::exponent)
      .def_readonly("coeffs", &FrobeniusExpansion::coeffs)
      .def_readonly("resonance_order", &FrobeniusExpansion::resonance_order)
      .def_readonly("log_case", &FrobeniusExpansion::log_case);

  py::class_<SeriesPoly>(mod, "SeriesPoly")
      .def("eval", &SeriesPoly::eval, py::arg("b"), py::arg("lambda_"))
      .def("degree_b", &SeriesPoly::degree_b)
      .def("degree_lambda", &SeriesPoly::degree_lambda)
      .def("is_zero", &SeriesPoly::is_zero)
      .def("__str__", &SeriesPoly::to_string)
      .def("__repr__",
           [](const SeriesPoly& p) { return "SeriesPoly(" + p.to_string() + ")"; });

  py::class_<SymbolicExpansion>(mod, "SymbolicExpansion")
      .def_property_readonly("exponent",
                             [](const SymbolicExpansion& e) { return e.exponent.value(); })
      .def_property_readonly("exponent_str",
                             [](const SymbolicExpansion& e) { return e.exponent.to_string(); })
      .def_readonly("coeffs", &SymbolicExpansion::coeffs)
      .def_readonly("resonance_order", &SymbolicExpansion::resonance_order)
      .def_readonly("log_case", &SymbolicExpansion::log_case);

  // ---- solver ----
  mod.def(
      "solve_mode",
      [](int m, double b, const std::optional<SolverConfig>& config) {
        return solve_mode({m, b}, config_or_default(config));
      },
      py::arg("m"), py::arg("b"), py::arg("config") = py::none(),
      py::call_guard<py::gil_scoped_release>(),
      "Lowest eigenvalue of the mode-(m) fiber operator at field strength b.");

  mod.def("assemble_matrix",
          [](int m, double b, int n) { return assemble_matrix({m, b}, n); },
          py::arg("m"), py::arg("b"), py::arg("n"),
          "Galerkin matrix diag(l(l+1)) + (b^2/4) I - m b G of size n.");

  mod.def("smallest_eigenpair", &smallest_eigenpair, py::arg("A"),
          "Minimal eigenvalue and unit eigenvector of a symmetric matrix.");

  mod.def("coupling_form", &coupling_form, py::arg("m_abs"), py::arg("coeffs"),
          py::arg("quad_extra") = 16,
          "c^T G c, the 1/sin(theta)-weighted square norm of the trial state.");

  mod.def("assoc_legendre_normalized", &assoc_legendre_normalized, py::arg("l"),
          py::arg("m_abs"), py::arg("x"),
          "Orthonormal associated Legendre function (positive normalization).");

  // ---- spectrum analysis ----
  mod.def(
      "effective_eigenvalue",
      [](double b, const std::optional<SolverConfig>& config) {
        return effective_eigenvalue(b, config_or_default(config));
      },
      py::arg("b"), py::arg("config") = py::none(),
      py::call_guard<py::gil_scoped_release>(),
      "Effective eigenvalue e(b) = min over modes, with the per-mode table.");

  mod.def("mode_scan_range", &mode_scan_range, py::arg("b"),
          "Modes 0 .. ceil(b)+1 that can attain the minimum at b >= 0.");

  mod.def(
      "sweep",
      [](const std::vector<double>& b_grid, const std::vector<int>& m_set,
         const std::optional<SolverConfig>& config) {
        return sweep(b_grid, m_set, config_or_default(config));
      },
      py::arg("b_grid"), py::arg("m_set") = std::vector<int>{},
      py::arg("config") = py::none(), py::call_guard<py::gil_scoped_release>(),
      "Solve every (b, m) cell; an empty m_set selects the automatic range.");

  mod.def(
      "find_crossing",
      [](int m_a, int m_b, std::pair<double, double> bracket,
         const std::optional<SolverConfig>& config) {
        return find_crossing(m_a, m_b, bracket, config_or_default(config));
      },
      py::arg("m_a") = 0, py::arg("m_b") = 1,
      py::arg("bracket") = std::pair<double, double>{1.0, kCrossingUpper},
      py::arg("config") = py::none(), py::call_guard<py::gil_scoped_release>(),
      "Bisection root of lambda_{m_a}(b) - lambda_{m_b}(b) on the bracket.");

  mod.def(
      "hf_derivative",
      [](int m, double b, const std::optional<SolverConfig>& config) {
        return hf_derivative({m, b}, config_or_default(config));
      },
      py::arg("m"), py::arg("b"), py::arg("config") = py::none(),
      py::call_guard<py::gil_scoped_release>(),
      "d lambda_m / db via the Hellmann-Feynman identity b/2 - m c^T G c.");

  mod.def(
      "monotonicity_report",
      [](const std::vector<double>& b_grid, const std::optional<SolverConfig>& config) {
        return monotonicity_report(b_grid, config_or_default(config));
      },
      py::arg("b_grid"), py::arg("config") = py::none(),
      py::call_guard<py::gil_scoped_release>(),
      "Scan e(b) on the grid and report decreasing intervals and a witness.");

  mod.def(
      "rayleigh_quotient",
      [](int m, double b, const Eigen::VectorXd& coeffs) {
        return rayleigh_quotient({m, b}, coeffs);
      },
      py::arg("m"), py::arg("b"), py::arg("coeffs"),
      "Rayleigh quotient of a coefficient vector in the Legendre basis.");

  mod.def(
      "rayleigh_quotient_fn",
      [](int m, double b, const std::function<double(double)>& f,
         const std::function<double(double)>& df, int n_quad) {
        return rayleigh_quotient({m, b}, f, df, n_quad);
      },
      py::arg("m"), py::arg("b"), py::arg("f"), py::arg("df"), py::arg("n_quad") = 128,
      "Rayleigh quotient of a closed-form trial function of theta.");

  mod.def(
      "robin_asymptotic",
      [](double gamma, double b, const std::optional<SolverConfig>& config) {
        return robin_asymptotic(gamma, b, config_or_default(config));
      },
      py::arg("gamma"), py::arg("b"), py::arg("config") = py::none(),
      py::call_guard<py::gil_scoped_release>(),
      "Leading Robin asymptotic -gamma^2 + 2 gamma + e(b).");

  // ---- singular-endpoint analysis ----
  mod.def(
      "liouville_qhat",
      [](int m, double b, int order) { return liouville_qhat({m, b}, order); },
      py::arg("m"), py::arg("b"), py::arg("order") = 8,
      "Liouville-normal-form potential with its Laurent expansion at 0.");

  mod.def("indicial_exponents", &indicial_exponents, py::arg("m"),
          "Indicial roots (1/2 + |m|, 1/2 - |m|) at the endpoints.");

  mod.def(
      "classify_endpoint",
      [](int m, double b, Endpoint endpoint) { return classify_endpoint({m, b}, endpoint); },
      py::arg("m"), py::arg("b") = 0.0, py::arg("endpoint") = Endpoint::Zero,
      "Limit-point / limit-circle classification of an endpoint.");

  mod.def(
      "frobenius_expansion",
      [](int m, double b, double exponent, double lambda, int order) {
        return frobenius_expansion({m, b}, exponent, lambda, order);
      },
      py::arg("m"), py::arg("b"), py::arg("exponent"), py::arg("lambda_") = 0.0,
      py::arg("order") = 6,
      "Frobenius coefficients a_k of theta^s (1 + a_1 theta + ...).");

  mod.def("frobenius_symbolic", &frobenius_symbolic, py::arg("m"), py::arg("branch"),
          py::arg("order") = 6,
          "Frobenius coefficients as exact polynomials in b and lambda.");

  mod.attr("CROSSING_BRACKET_UPPER") = kCrossingUpper;
}
