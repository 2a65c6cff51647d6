"""Certified dual lower bounds for the sphere-packing linear program.

The continuous program of Cohn-Elkies type admits a finite relaxation
on the group Z_m^d whose dual optima, once rounded to rationals and
re-verified in exact arithmetic, are rigorous lower bounds on the
continuous optimum for any m at least twice the packing radius.  This
package enumerates the hyperoctahedral orbits that radialize the finite
program, builds the symmetrized transform exactly and in floats, solves
the dual with a deterministic dense simplex, rounds solutions to exact
rational certificates, verifies them with certified sign arithmetic,
and ships closed-form certificates at modulus four together with the
Krawtchouk identities behind them.
"""

from .orbits import OrbitIndex, Params, canonicalize, enumerate_reps, norm_sq, orbit_size
from .symdft import SymDFTMatrix, build_matrix, scale_decomposition
from .exactnum import (
    BoundValue,
    CycloReal,
    IndeterminateSignError,
    RInterval,
    SurdPair,
    bound_decimal,
    parse_bound_expr,
)
from .lp import (
    LPConstraint,
    LPInstance,
    LPSolution,
    LPVariable,
    build_dual_lp,
    build_primal_lp,
    simplex_solve,
)
from .certify import (
    ComparisonReport,
    DualCertificate,
    KNOWN_DENSITIES,
    LambdaVector,
    VerificationReport,
    compare_known,
    compute_lambda,
    objective,
    rationalize,
    read_certificate,
    verify,
    write_certificate,
)
from .closedform import (
    LambdaTable,
    binom,
    certificate_from_lambda,
    closed_form_mu,
    explicit_lambda,
    general_odd_lambda,
    krawtchouk,
)
from .reduction import (
    FoldedFn,
    LatticeFn,
    autocorrelation,
    check_restriction_identity,
    discrete_feasibility,
    fold,
)
from .presets import PRESETS, Preset, PresetResult, run_pipeline, run_preset

__version__ = "0.1.0"

__all__ = [
    "Params",
    "OrbitIndex",
    "canonicalize",
    "enumerate_reps",
    "norm_sq",
    "orbit_size",
    "SymDFTMatrix",
    "build_matrix",
    "scale_decomposition",
    "BoundValue",
    "CycloReal",
    "IndeterminateSignError",
    "RInterval",
    "SurdPair",
    "bound_decimal",
    "parse_bound_expr",
    "LPVariable",
    "LPConstraint",
    "LPInstance",
    "LPSolution",
    "build_dual_lp",
    "build_primal_lp",
    "simplex_solve",
    "DualCertificate",
    "LambdaVector",
    "VerificationReport",
    "ComparisonReport",
    "KNOWN_DENSITIES",
    "rationalize",
    "compute_lambda",
    "objective",
    "verify",
    "compare_known",
    "read_certificate",
    "write_certificate",
    "LambdaTable",
    "binom",
    "krawtchouk",
    "general_odd_lambda",
    "explicit_lambda",
    "closed_form_mu",
    "certificate_from_lambda",
    "LatticeFn",
    "FoldedFn",
    "fold",
    "autocorrelation",
    "check_restriction_identity",
    "discrete_feasibility",
    "Preset",
    "PresetResult",
    "PRESETS",
    "run_pipeline",
    "run_preset",
    "__version__",
]
