"""Amortised interval evaluation of sparse polynomials on CSF box sets,
and a subdivision solver built on it."""

from .criteria import (
    TaylorForm,
    c0_exclude,
    c1_taylor_linear,
    c1_vertex_sign,
    enclose,
    scaled_derivative,
    taylor_build,
)
from .csf import CsfTree, csf_build, csf_dump, csf_iterate, csf_projection_count, csf_reverse_projection_count
from .dft import dft_csf, dft_naive
from .errors import (
    ArityMismatch,
    CsfPolyError,
    DimensionUnsupported,
    DuplicateTuple,
    EmptyPolynomial,
    IndexOutOfRange,
    InvalidThreshold,
    NotPowerOfTwo,
    PolySyntaxError,
    Univariate,
    UnsupportedOrder,
)
from .evalgrid import EvalResult, Grid, eval_box_csf, evaluate_csf, evaluate_dense_grid
from .fasteval import CompiledPoly, evaluate_boxes
from .interval import WHOLE, Interval, hull, iv_add_sub_mul, iv_geometry, iv_pow
from .opcount import OpCounter, op_count_report
from .poly import (
    SparsePoly,
    differentiate,
    eval_box_direct,
    eval_univariate,
    horner_sparse,
    parse_poly,
    partial_eval,
    read_poly,
)
from .subdivide import BoxSet, Enclosure, SolveOptions, bisect, box_of_index, subdivide_enclose

__all__ = [name for name in dir() if not name.startswith("_")]
