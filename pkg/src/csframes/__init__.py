"""Operator-valued frames on Hilbert C*-modules over finite-dimensional C*-algebras."""

__version__ = "0.1.0"

from .algebra import (
    DEFAULT_TOL,
    AlgebraElement,
    AlgebraSpec,
    BlockMatrix,
    Tolerance,
    alg_arith,
    alg_norm,
    flatten,
    is_positive,
    positive_power,
)
from .composition import (
    ComposedFrame,
    cancel_left,
    cancel_right,
    compose,
    generate_example_frame,
    multiframe_decompose,
)
from .equivalence import (
    SimilarityWitness,
    detect_right_similarity,
    frame_from_projection,
    left_transform,
    mv_equivalent,
    parseval_parametrize,
    commutation_check,
    prop39_check,
    right_transform,
)
from .errors import *  # noqa: F401,F403
from .frames import (
    FrameAnalysis,
    OperatorFrame,
    VectorFrame,
    analyze,
    frame_operator,
    is_parseval,
    parseval_normalize,
    reconstruct,
    stabilization_monitor,
    vector_frame_bounds,
    vector_to_operator_frame,
)
from .hilbert_module import (
    ModuleOperator,
    ModuleVector,
    inner,
    is_projection,
    module_action,
    op_apply,
    op_norm,
    rank_one,
)
