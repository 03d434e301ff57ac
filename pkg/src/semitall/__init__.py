"""Typical ranks of real order-3 tensors at the critical semi-tall format.

For 3 <= m <= n and p = (m-1)(n-1)+1 this package decides, where two
decidable criteria apply, whether p x n x m tensors have the plural
typical-rank set {p, p+1}: failure of bit-disjointness of m-1 and n-1, or
a real-divisor count alpha(m, n) below p.  It also certifies individual
tensors as rank p or rank > p by tracking a fully known determinantal
start system to the tensor's kernel pencil and measuring the span of the
truncated Kronecker vectors at the real solutions.
"""

from .certifier import (
    INCONCLUSIVE,
    RANK_GT_P,
    RANK_P,
    CertifyOptions,
    ExperimentStats,
    RankCertificate,
    certify,
    global_experiment,
    perturb_experiment,
)
from .classifier import Verdict, bit_disjoint, classify, theorem_table
from .errors import (
    ChartViolationError,
    DegenerateStartError,
    PathError,
    ResourceLimitError,
)
from .polyfactor import (
    ComplexPoly,
    DivisorSelection,
    RootIndex,
    alpha_brute,
    alpha_closed,
    divisor_to_point,
    neg_roots,
    real_divisors,
)
from .recurrence import ConditionReport, LambdaSeq, build_N, lambda_seq, rank_conditions
from .solver import SolveReport, Solution, TrackOptions, real_filter, solve_all, start_solutions, track_path
from .tensorcore import (
    FL1,
    FL2,
    Format,
    StartFrame,
    Tensor3,
    flatten,
    load_tensor,
    make_base_tensor,
    make_start_frame,
    mu,
    nu,
    pencil_eval,
    psi,
    save_tensor,
    sigma,
    span_dim,
    tau,
    unflatten,
)

__version__ = "0.1.0"

__all__ = [
    "Format", "Tensor3", "StartFrame", "FL1", "FL2",
    "flatten", "unflatten", "pencil_eval", "psi", "span_dim",
    "sigma", "tau", "mu", "nu",
    "make_base_tensor", "make_start_frame", "save_tensor", "load_tensor",
    "RootIndex", "ComplexPoly", "DivisorSelection",
    "neg_roots", "real_divisors", "alpha_closed", "alpha_brute", "divisor_to_point",
    "LambdaSeq", "ConditionReport", "lambda_seq", "build_N", "rank_conditions",
    "Solution", "TrackOptions", "SolveReport",
    "start_solutions", "track_path", "solve_all", "real_filter",
    "RankCertificate", "ExperimentStats", "CertifyOptions",
    "certify", "perturb_experiment", "global_experiment",
    "RANK_P", "RANK_GT_P", "INCONCLUSIVE",
    "Verdict", "bit_disjoint", "classify", "theorem_table",
    "ChartViolationError", "DegenerateStartError", "PathError", "ResourceLimitError",
]
