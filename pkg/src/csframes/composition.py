"""Composition of frames, cancellation, multiframes and the generic generator.

``C = B A`` has elements ``C_{i,j} = B_i A_j`` listed in row-major order
over ``I x J`` (outer index ``i`` varies slowest).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .algebra import DEFAULT_TOL, AlgebraSpec, BlockMatrix, Tolerance, inverse, pinv
from .errors import (
    DegenerateInnerFrame,
    DimensionMismatch,
    IncompatibleRanges,
    InconsistentIndexing,
    NotInvertible,
    NotLeftInvertible,
    NotUnitalVector,
    SpecMismatch,
)
from .frames import (
    OperatorFrame,
    VectorFrame,
    analyze,
    is_nondegenerate,
    vector_frame_bounds,
)
from .hilbert_module import ModuleVector, inner, op_apply
from .sampling import random_isometry, random_operator

__all__ = [
    "ComposedFrame",
    "Cancellation",
    "Multiframe",
    "compose",
    "cancel_right",
    "cancel_left",
    "multiframe_decompose",
    "generate_example_frame",
]


@dataclass(frozen=True)
class ComposedFrame:
    outer: OperatorFrame
    inner: OperatorFrame
    frame: OperatorFrame

    @property
    def elements(self):
        return self.frame.elements

    def element(self, i: int, j: int) -> BlockMatrix:
        return self.frame.elements[i * len(self.inner) + j]

    @property
    def pairs(self) -> list:
        return [(i, j) for i in range(len(self.outer)) for j in range(len(self.inner))]


@dataclass(frozen=True)
class Cancellation:
    """A recovered factor together with ``max ||C_{i,j} - B_i A_j||``."""

    frame: OperatorFrame
    residual: float


def compose(outer: OperatorFrame, inner_frame: OperatorFrame, tol: Tolerance = DEFAULT_TOL) -> ComposedFrame:
    """``C_{i,j} = B_i A_j`` for ``B`` a frame on (a module containing) ``E_0 A^N``."""
    if outer.spec != inner_frame.spec:
        raise SpecMismatch("frames over different algebras")
    if outer.rank != inner_frame.rank:
        raise DimensionMismatch(f"ranks {outer.rank} and {inner_frame.rank} differ")
    e0 = inner_frame.codomain
    if (outer.unit @ e0 - e0).norm() > tol.bound(1.0):
        raise IncompatibleRanges("the outer frame's domain does not contain the inner codomain")
    analyze(outer, tol)
    analyze(inner_frame, tol)
    elements = [b @ a for b in outer.elements for a in inner_frame.elements]
    c = OperatorFrame(elements, codomain=outer.codomain, domain=inner_frame.domain,
                      spec=outer.spec, rank=outer.rank)
    analyze(c, tol)
    return ComposedFrame(outer, inner_frame, c)


def _products(c) -> tuple:
    if isinstance(c, ComposedFrame):
        return c.elements, c.frame.codomain, c.frame.domain
    if isinstance(c, OperatorFrame):
        return c.elements, c.codomain, c.domain
    return tuple(c), None, None


def cancel_right(outer: OperatorFrame, c, tol: Tolerance = DEFAULT_TOL) -> Cancellation:
    """Recover ``A`` from ``C = B A`` via ``A_j = D_B^{-1} sum_i B_i^* C_{i,j}``."""
    elements, _, domain = _products(c)
    n_outer = len(outer)
    if n_outer == 0 or len(elements) % n_outer or not elements:
        raise InconsistentIndexing(f"{len(elements)} products do not split over {n_outer} outer elements")
    n_inner = len(elements) // n_outer
    an = analyze(outer, tol)
    recovered = []
    for j in range(n_inner):
        acc = BlockMatrix.zeros(outer.spec, outer.rank, outer.rank)
        for i, b in enumerate(outer.elements):
            acc = acc + b.adjoint() @ elements[i * n_inner + j]
        recovered.append(an.inverse @ acc)
    residual = max(
        (elements[i * n_inner + j] - b @ recovered[j]).norm()
        for i, b in enumerate(outer.elements)
        for j in range(n_inner)
    )
    frame = OperatorFrame(recovered, codomain=outer.domain, domain=domain, spec=outer.spec,
                          rank=outer.rank, tol=tol)
    return Cancellation(frame, residual)


def cancel_left(inner_frame: OperatorFrame, c, tol: Tolerance = DEFAULT_TOL) -> Cancellation:
    """Recover ``B`` from ``C = B A`` for non-degenerate ``A``.

    ``B_i = (sum_j C_{i,j} A_j^*) G^+`` with ``G = sum_j A_j A_j^*``; the
    Moore-Penrose inverse of ``G`` is its inverse in the corner of ``E_0``.
    """
    if not is_nondegenerate(inner_frame, tol):
        raise DegenerateInnerFrame("inner frame ranges do not span its codomain")
    elements, codomain, _ = _products(c)
    n_inner = len(inner_frame)
    if n_inner == 0 or not elements or len(elements) % n_inner:
        raise InconsistentIndexing(f"{len(elements)} products do not split over {n_inner} inner elements")
    n_outer = len(elements) // n_inner
    g = BlockMatrix.zeros(inner_frame.spec, inner_frame.rank, inner_frame.rank)
    for a in inner_frame.elements:
        g = g + a @ a.adjoint()
    g_plus = pinv(g, tol)
    recovered = []
    for i in range(n_outer):
        acc = BlockMatrix.zeros(inner_frame.spec, inner_frame.rank, inner_frame.rank)
        for j, a in enumerate(inner_frame.elements):
            acc = acc + elements[i * n_inner + j] @ a.adjoint()
        recovered.append(acc @ g_plus)
    residual = max(
        (elements[i * n_inner + j] - recovered[i] @ a).norm()
        for i in range(n_outer)
        for j, a in enumerate(inner_frame.elements)
    )
    frame = OperatorFrame(recovered, codomain=codomain, domain=inner_frame.codomain,
                          spec=inner_frame.spec, rank=inner_frame.rank, tol=tol)
    return Cancellation(frame, residual)


@dataclass(frozen=True)
class Multiframe:
    """``combined`` lists ``A_j^* xi_i`` row-major over ``(i, j)``; ``components[i]`` fixes ``i``."""

    combined: VectorFrame
    components: tuple
    pairs: tuple


def multiframe_decompose(frame: OperatorFrame, vf: VectorFrame, eta: ModuleVector,
                         tol: Tolerance = DEFAULT_TOL) -> Multiframe:
    """Split an operator-valued frame into the vector family ``{A_j^* xi_i}``.

    ``vf`` must be a vector frame on ``H_0 = E_0 A^N`` and ``eta`` a unital
    vector; the result is the vector frame identified with the composition
    of ``{theta_{eta, xi_i}}`` and ``{A_j}``.
    """
    if eta.spec != frame.spec or eta.length != frame.rank:
        raise DimensionMismatch("eta must be a vector of the frame's module")
    if (inner(eta, eta) - frame.spec.identity()).norm() > tol.bound(1.0):
        raise NotUnitalVector("<eta, eta> is not the identity")
    on_h0 = VectorFrame(vf.vectors, domain=frame.codomain, spec=vf.spec, rank=vf.rank, tol=tol)
    vector_frame_bounds(on_h0, tol)
    analyze(frame, tol)
    adjoints = [a.adjoint() for a in frame.elements]
    components = tuple(
        VectorFrame([op_apply(a_star, xi) for a_star in adjoints], spec=frame.spec, rank=frame.rank)
        for xi in vf.vectors
    )
    combined = VectorFrame([v for comp in components for v in comp.vectors], domain=frame.domain,
                           spec=frame.spec, rank=frame.rank)
    pairs = tuple((i, j) for i in range(len(vf)) for j in range(len(frame)))
    return Multiframe(combined, components, pairs)


def _shift(spec: AlgebraSpec, rank: int, size: int, j: int) -> BlockMatrix:
    """Partial isometry moving coordinates ``0..size-1`` onto ``j*size..(j+1)*size-1``."""
    data = []
    for n in spec.block_dims:
        d = np.zeros((rank, rank, n, n), dtype=np.complex128)
        for t in range(size):
            d[j * size + t, t] = np.eye(n)
        data.append(d)
    return BlockMatrix(spec, data)


def generate_example_frame(spec: AlgebraSpec, rank: int, count: int, t: BlockMatrix | None = None,
                           seed=None, isometry: bool = False, codomain: BlockMatrix | None = None,
                           tol: Tolerance = DEFAULT_TOL) -> OperatorFrame:
    """The frame ``A_j = L_j^* T`` for a left-invertible ``T``; its frame operator is ``T^* T``.

    Two shapes of ``T`` are accepted:

    * ``(rank*count) x rank``: ``L_j`` embeds ``A^rank`` as the ``j``-th block
      of the dilated module, so ``A_j`` is the ``j``-th block row of ``T``
      and ``E_0 = I`` (or ``codomain`` if given).
    * ``rank x rank`` with ``count`` dividing ``rank``: the identity of
      ``A^rank`` is split into ``count`` coordinate groups of size
      ``m = rank/count``; ``L_j`` moves group 0 onto group ``j`` and ``E_0``
      is the projection onto the first group.

    When ``t`` is None a random dilated ``T`` is drawn from ``seed``;
    ``isometry=True`` orthonormalizes it, giving a Parseval frame.
    """
    if t is None:
        rng = np.random.default_rng(seed)
        if isometry:
            t = random_isometry(rng, spec, rank * count, rank)
        else:
            t = random_operator(rng, spec, rank * count, rank)
    if t.spec != spec:
        raise SpecMismatch("T lives over a different algebra")
    try:
        inverse(t.adjoint() @ t, tol)
    except NotInvertible as exc:
        raise NotLeftInvertible(exc.smallest, "T^* T is not invertible") from None

    if t.shape == (rank * count, rank):
        parts = [t.rows(j * rank, (j + 1) * rank) for j in range(count)]
        return OperatorFrame(parts, codomain=codomain, spec=spec, rank=rank)
    if t.shape == (rank, rank) and rank % count == 0:
        size = rank // count
        shifts = [_shift(spec, rank, size, j) for j in range(count)]
        e0 = shifts[0].adjoint() @ shifts[0]
        return OperatorFrame([l.adjoint() @ t for l in shifts], codomain=e0, spec=spec, rank=rank)
    raise DimensionMismatch(
        f"T must be {(rank * count, rank)} or square with {count} dividing {rank}, got {t.shape}"
    )
