"""Lowest eigenvalues of the magnetic fiber operators on (0, pi).

The heavy lifting lives in the compiled extension ``_fibereig``; this
package re-exports it.  In an installed wheel the extension sits inside the
package; in an in-tree build it is on ``sys.path`` as a top-level module.
"""

try:
    from ._fibereig import *  # noqa: F401,F403
    from ._fibereig import __doc__ as _core_doc
except ImportError:
    from _fibereig import *  # noqa: F401,F403
    from _fibereig import __doc__ as _core_doc

__all__ = [
    "SolverConfig",
    "EigenPair",
    "ModeValue",
    "EffectiveResult",
    "SweepRow",
    "SweepPerB",
    "SweepTable",
    "CrossingResult",
    "MonotonicityWitness",
    "MonotonicityReport",
    "Endpoint",
    "EndpointVerdict",
    "IndicialBranch",
    "EndpointClass",
    "LiouvillePotential",
    "FrobeniusExpansion",
    "SeriesPoly",
    "SymbolicExpansion",
    "solve_mode",
    "assemble_matrix",
    "smallest_eigenpair",
    "coupling_form",
    "assoc_legendre_normalized",
    "effective_eigenvalue",
    "mode_scan_range",
    "sweep",
    "find_crossing",
    "hf_derivative",
    "monotonicity_report",
    "rayleigh_quotient",
    "rayleigh_quotient_fn",
    "robin_asymptotic",
    "liouville_qhat",
    "indicial_exponents",
    "classify_endpoint",
    "frobenius_expansion",
    "frobenius_symbolic",
    "CROSSING_BRACKET_UPPER",
]

__version__ = "0.1.0"
