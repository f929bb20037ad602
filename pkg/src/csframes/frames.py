"""Operator-valued frames on ``A^N``.

A frame is a finite family ``{A_j}`` of operators on ``A^N`` with ranges in
``H_0 = E_0 A^N`` whose frame operator ``D = sum_j A_j^* A_j`` is invertible.
The frame transform is realized in the dilated module ``A^{N |J|}``: it is
the vertical stack of the ``A_j`` (the ``j``-th block row of ``theta`` is
``A_j``), so ``theta^* theta = D`` and ``P = theta D^{-1} theta^*`` is the
frame projection.

Frames may also carry a *domain* projection.  This is only needed for the
outer factor of a composition, which is a frame on a submodule ``H_0``
rather than on the whole module; all inverses and the identity are then
taken in the corner of that projection.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .algebra import (
    DEFAULT_TOL,
    BlockMatrix,
    Tolerance,
    block_ranks,
    extremal_eigenvalues,
    is_positive,
    positive_power,
    projection_basis,
)
from .errors import (
    DimensionMismatch,
    NotAFrame,
    NotProjection,
    NotUnitalVector,
    RangeMismatch,
    SpecMismatch,
    VerificationError,
)
from .hilbert_module import ModuleVector, inner, is_projection, op_apply, rank_one

__all__ = [
    "OperatorFrame",
    "VectorFrame",
    "FrameAnalysis",
    "frame_operator",
    "frame_transform",
    "analyze",
    "is_parseval",
    "parseval_criteria",
    "parseval_normalize",
    "normalize_vector_frame",
    "reconstruct",
    "is_nondegenerate",
    "rank_one_sum",
    "vector_frame_bounds",
    "frame_inequality_holds",
    "extremal_probe",
    "vector_to_operator_frame",
    "stabilization_monitor",
    "StabilizationReport",
]


def _check_projection(p, spec, rank, what, tol):
    if p.spec != spec:
        raise SpecMismatch(f"{what} lives over {p.spec.block_dims}, expected {spec.block_dims}")
    if p.shape != (rank, rank):
        raise DimensionMismatch(f"{what} has shape {p.shape}, expected {(rank, rank)}")
    if not is_projection(p, tol):
        raise NotProjection(f"{what} is not a projection")


class OperatorFrame:
    """A finite operator-valued frame candidate ``{A_j}`` on ``A^N``.

    The frame condition itself is only checked by :func:`analyze`; the
    constructor checks shapes and that every element maps into the codomain
    ``E_0`` (and vanishes off the domain projection, if one is given).
    """

    def __init__(self, elements: Iterable[BlockMatrix], codomain=None, domain=None, *,
                 spec=None, rank=None, tol: Tolerance = DEFAULT_TOL):
        elements = tuple(elements)
        if elements:
            spec = spec or elements[0].spec
            rank = rank or elements[0].shape[1]
        elif spec is None or rank is None:
            raise ValueError("an empty frame needs explicit spec and rank")
        for j, a in enumerate(elements):
            if a.spec != spec:
                raise SpecMismatch(f"element {j} lives over {a.spec.block_dims}")
            if a.shape != (rank, rank):
                raise DimensionMismatch(f"element {j} has shape {a.shape}, expected {(rank, rank)}")
        if codomain is None:
            codomain = BlockMatrix.identity(spec, rank)
        else:
            _check_projection(codomain, spec, rank, "codomain projection", tol)
        if domain is not None:
            _check_projection(domain, spec, rank, "domain projection", tol)
        for j, a in enumerate(elements):
            bound = tol.bound(max(1.0, a.norm()))
            if (codomain @ a - a).norm() > bound:
                raise RangeMismatch(f"element {j} does not map into the codomain projection")
            if domain is not None and (a @ domain - a).norm() > bound:
                raise RangeMismatch(f"element {j} does not vanish off the domain projection")
        self.spec = spec
        self.rank = int(rank)
        self.elements = tuple(e if type(e) is BlockMatrix else e.cast(BlockMatrix) for e in elements)
        self.codomain = codomain
        self.domain = domain
        self._cache = {}

    @property
    def unit(self) -> BlockMatrix:
        """Identity of the domain: ``I`` or the domain projection."""
        return BlockMatrix.identity(self.spec, self.rank) if self.domain is None else self.domain

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __getitem__(self, j):
        return self.elements[j]

    def replace(self, elements, codomain=None, domain="same"):
        """A frame with new elements and otherwise the same structure."""
        return OperatorFrame(
            elements,
            codomain=self.codomain if codomain is None else codomain,
            domain=self.domain if domain == "same" else domain,
            spec=self.spec,
            rank=self.rank,
        )

    def __repr__(self):
        return f"OperatorFrame(spec={self.spec.block_dims}, rank={self.rank}, count={len(self)})"


@dataclass(frozen=True)
class FrameAnalysis:
    frame_operator: BlockMatrix
    lower_bound: float
    upper_bound: float
    transform: BlockMatrix
    projection: BlockMatrix
    inverse: BlockMatrix
    inverse_sqrt: BlockMatrix
    sqrt: BlockMatrix
    residuals: dict = field(default_factory=dict)

    @property
    def condition(self) -> float:
        return self.upper_bound / self.lower_bound

    def is_tight(self, tol: Tolerance = DEFAULT_TOL) -> bool:
        return self.upper_bound - self.lower_bound <= tol.bound(self.upper_bound)

    # short aliases matching the usual notation
    @property
    def D(self):
        return self.frame_operator

    @property
    def theta(self):
        return self.transform

    @property
    def P(self):
        return self.projection


def frame_operator(frame: OperatorFrame) -> BlockMatrix:
    total = BlockMatrix.zeros(frame.spec, frame.rank, frame.rank)
    for a in frame.elements:
        total = total + a.adjoint() @ a
    return total


def frame_transform(frame: OperatorFrame) -> BlockMatrix:
    return BlockMatrix.stack(frame.elements)


def analyze(frame: OperatorFrame, tol: Tolerance = DEFAULT_TOL) -> FrameAnalysis:
    """Frame operator, optimal bounds, transform and frame projection.

    Raises :class:`NotAFrame` when the smallest eigenvalue of ``D`` (on the
    domain) is not above ``tol.rel`` times the largest.  Results are cached
    on the frame per tolerance.
    """
    cached = frame._cache.get(tol)
    if cached is not None:
        return cached
    if not frame.elements:
        raise NotAFrame(0.0, "not a frame: empty index set")
    d = frame_operator(frame)
    lo, hi = extremal_eigenvalues(d, frame.domain)
    if hi <= tol.abs or lo <= tol.rel * hi:
        raise NotAFrame(lo)
    d_inv = positive_power(d, -1.0, tol, frame.domain)
    d_isqrt = positive_power(d, -0.5, tol, frame.domain)
    d_sqrt = positive_power(d, 0.5, tol, frame.domain)
    theta = frame_transform(frame)
    unit = frame.unit
    v = theta @ d_isqrt
    # theta D^{-1} theta^* = v v^*; with v^* v = 1 on the domain, v v^* is a
    # projection fixing theta, so only the small residuals need checking
    p = v @ v.adjoint()
    residuals = {
        "gram": (theta.adjoint() @ theta - d).norm() / hi,
        "isometry": (v.adjoint() @ v - unit).norm(),
    }
    # inversion errors grow with the condition number of D
    bound = tol.bound(hi / lo)
    bad = {k: r for k, r in residuals.items() if r > bound}
    if bad:
        raise VerificationError(f"frame analysis failed its invariants: {bad}")
    result = FrameAnalysis(d, lo, hi, theta, p, d_inv, d_isqrt, d_sqrt, residuals)
    frame._cache[tol] = result
    return result


def parseval_criteria(frame: OperatorFrame, tol: Tolerance = DEFAULT_TOL) -> tuple:
    """The three equivalent Parseval tests: ``D = I``, ``theta`` isometric, ``theta theta^*`` a projection."""
    an = analyze(frame, tol)
    unit = frame.unit
    theta = an.transform
    return (
        (an.frame_operator - unit).norm() <= tol.bound(1.0),
        (theta.adjoint() @ theta - unit).norm() <= tol.bound(1.0),
        is_projection(theta @ theta.adjoint(), tol),
    )


def is_parseval(frame: OperatorFrame, tol: Tolerance = DEFAULT_TOL) -> bool:
    an = analyze(frame, tol)
    return (an.frame_operator - frame.unit).norm() <= tol.bound(1.0)


def parseval_normalize(frame: OperatorFrame, tol: Tolerance = DEFAULT_TOL) -> OperatorFrame:
    """The Parseval frame ``{A_j D^{-1/2}}``; it has the same frame projection."""
    an = analyze(frame, tol)
    return frame.replace([a @ an.inverse_sqrt for a in frame.elements])


def reconstruct(frame: OperatorFrame, xi: ModuleVector, analysis: FrameAnalysis | None = None,
                tol: Tolerance = DEFAULT_TOL) -> ModuleVector:
    """Synthesize ``D^{-1} sum_j A_j^* (A_j xi)`` from the analysis coefficients."""
    an = analysis if analysis is not None else analyze(frame, tol)
    total = None
    for a in frame.elements:
        term = op_apply(a.adjoint(), op_apply(a, xi))
        total = term if total is None else total + term
    return op_apply(an.inverse, total)


def is_nondegenerate(frame: OperatorFrame, tol: Tolerance = DEFAULT_TOL) -> bool:
    """Ranges of the ``A_j`` span ``E_0 A^N``: equal per-block ranks of ``sum A_j A_j^*`` and ``E_0``."""
    g = BlockMatrix.zeros(frame.spec, frame.rank, frame.rank)
    for a in frame.elements:
        g = g + a @ a.adjoint()
    return block_ranks(g, tol) == block_ranks(frame.codomain, tol)


# vector frames -------------------------------------------------------------


class VectorFrame:
    """A finite family of vectors ``{xi_j}`` in ``A^N`` (optionally a frame on a submodule)."""

    def __init__(self, vectors: Iterable[ModuleVector], domain=None, *, spec=None, rank=None,
                 tol: Tolerance = DEFAULT_TOL):
        vectors = tuple(v if isinstance(v, ModuleVector) else v.cast(ModuleVector) for v in vectors)
        if vectors:
            spec = spec or vectors[0].spec
            rank = rank or vectors[0].length
        elif spec is None or rank is None:
            raise ValueError("an empty vector family needs explicit spec and rank")
        for j, v in enumerate(vectors):
            if v.spec != spec:
                raise SpecMismatch(f"vector {j} lives over {v.spec.block_dims}")
            if v.length != rank:
                raise DimensionMismatch(f"vector {j} has length {v.length}, expected {rank}")
        if domain is not None:
            _check_projection(domain, spec, rank, "domain projection", tol)
            for j, v in enumerate(vectors):
                if (domain @ v - v).norm() > tol.bound(max(1.0, v.norm())):
                    raise RangeMismatch(f"vector {j} is not in the domain submodule")
        self.spec = spec
        self.rank = int(rank)
        self.vectors = vectors
        self.domain = domain

    def __len__(self):
        return len(self.vectors)

    def __iter__(self):
        return iter(self.vectors)

    def __repr__(self):
        return f"VectorFrame(spec={self.spec.block_dims}, rank={self.rank}, count={len(self)})"


def rank_one_sum(vf: VectorFrame) -> BlockMatrix:
    total = BlockMatrix.zeros(vf.spec, vf.rank, vf.rank)
    for xi in vf.vectors:
        total = total + rank_one(xi, xi)
    return total


def vector_frame_bounds(vf: VectorFrame, tol: Tolerance = DEFAULT_TOL) -> tuple:
    """Optimal ``(a, b)`` with ``a I <= sum_j theta_{xi_j, xi_j} <= b I``."""
    if not vf.vectors:
        raise NotAFrame(0.0, "not a frame: empty index set")
    lo, hi = extremal_eigenvalues(rank_one_sum(vf), vf.domain)
    if hi <= tol.abs or lo <= tol.rel * hi:
        raise NotAFrame(lo)
    return lo, hi


def frame_inequality_holds(vf: VectorFrame, lower: float, upper: float, probe: ModuleVector,
                           tol: Tolerance = DEFAULT_TOL) -> bool:
    """``lower <xi,xi> <= sum_j <xi,xi_j><xi_j,xi> <= upper <xi,xi>`` in the order of ``A``."""
    g = inner(probe, probe)
    s = vf.spec.zero()
    for xj in vf.vectors:
        s = s + inner(probe, xj) @ inner(xj, probe)
    scale = max(abs(upper), abs(lower), 1.0) * g.norm()
    return is_positive(s - lower * g, tol, scale) and is_positive(upper * g - s, tol, scale)


def extremal_probe(vf: VectorFrame, which: str = "min") -> ModuleVector:
    """The eigenvector of the extreme eigenvalue of the rank-one sum, pulled back to ``A^N``.

    In the flattened block ``k`` holding that eigenvalue, the probe is the
    eigenvector placed in the first column; all other blocks vanish.  Then
    ``<S xi, xi> = lambda <xi, xi>`` exactly.
    """
    s = rank_one_sum(vf)
    herm = [0.5 * (f + f.conj().T) for f in s.flatten()]
    bases = None if vf.domain is None else projection_basis(vf.domain)
    best = None
    for k, h in enumerate(herm):
        if bases is not None:
            h = bases[k].conj().T @ h @ bases[k]
        if h.size == 0:
            continue
        w, v = np.linalg.eigh(h)
        idx = 0 if which == "min" else -1
        vec = v[:, idx] if bases is None else bases[k] @ v[:, idx]
        if best is None or (w[idx] < best[1] if which == "min" else w[idx] > best[1]):
            best = (k, w[idx], vec)
    k, _, vec = best
    flats = []
    for kk, n in enumerate(vf.spec.block_dims):
        f = np.zeros((vf.rank * n, n), dtype=np.complex128)
        if kk == k:
            f[:, 0] = vec
        flats.append(f)
    return ModuleVector.from_flat(vf.spec, flats, vf.rank, 1)


def normalize_vector_frame(vf: VectorFrame, tol: Tolerance = DEFAULT_TOL) -> VectorFrame:
    """The Parseval vector frame ``{S^{-1/2} xi_j}``."""
    vector_frame_bounds(vf, tol)
    root = positive_power(rank_one_sum(vf), -0.5, tol, vf.domain)
    return VectorFrame([op_apply(root, xi) for xi in vf.vectors], domain=vf.domain)


def vector_to_operator_frame(vf: VectorFrame, eta: ModuleVector,
                             tol: Tolerance = DEFAULT_TOL) -> OperatorFrame:
    """The rank-one frame ``A_j = theta_{eta, xi_j}`` with codomain ``theta_{eta, eta}``.

    Requires ``<eta, eta> = I`` so that ``A_j^* A_j = theta_{xi_j, xi_j}``.
    """
    if eta.spec != vf.spec or eta.length != vf.rank:
        raise DimensionMismatch("eta must be a vector of the same module as the frame")
    if (inner(eta, eta) - vf.spec.identity()).norm() > tol.bound(1.0):
        raise NotUnitalVector("<eta, eta> is not the identity")
    return OperatorFrame(
        [rank_one(eta, xi) for xi in vf.vectors],
        codomain=rank_one(eta, eta),
        domain=vf.domain,
        spec=vf.spec,
        rank=vf.rank,
    )


# streamed frames ------------------------------------------------------------


@dataclass(frozen=True)
class StabilizationStep:
    index: int
    increment: float
    transform_increment: float
    lower: float
    upper: float


@dataclass(frozen=True)
class StabilizationReport:
    steps: tuple
    stabilized: bool
    stabilized_at: int | None
    exhausted: bool


def stabilization_monitor(stream: Iterable[BlockMatrix], tol: Tolerance = DEFAULT_TOL, window: int = 1,
                          max_elements: int | None = None) -> StabilizationReport:
    """Watch the partial sums ``D_k = sum_{j<=k} A_j^* A_j`` of a streamed frame.

    After each element the report records ``||D_k - D_{k-1}||``, the
    transform increment ``||A_k||`` and the extreme eigenvalues of ``D_k``.
    The sum is declared stabilized at the first ``k`` where the last
    ``window`` increments are all below ``tol.bound(||D_k||)``.  An exhausted
    stream is an exact finite sum and counts as stabilized at its last
    element.  Consumption stops at stabilization or after ``max_elements``.
    """
    if window < 1:
        raise ValueError("window must be a positive integer")
    steps = []
    recent = []
    total = None
    source = iter(stream) if max_elements is None else itertools.islice(stream, max_elements)
    for index, a in enumerate(source):
        term = a.adjoint() @ a
        prev = total
        total = term if total is None else total + term
        inc = total.norm() if prev is None else (total - prev).norm()
        lo, hi = extremal_eigenvalues(total)
        steps.append(StabilizationStep(index, inc, a.norm(), lo, hi))
        recent.append(inc < tol.bound(total.norm()))
        if len(recent) >= window and all(recent[-window:]):
            return StabilizationReport(tuple(steps), True, index, False)
    exhausted = max_elements is None or len(steps) < max_elements
    if exhausted and steps:
        return StabilizationReport(tuple(steps), True, len(steps) - 1, True)
    return StabilizationReport(tuple(steps), False, None, exhausted)
