"""Right/left similarity of frames and Murray-von Neumann equivalence.

Right similarity ``B_j = A_j T`` is decided by comparing frame projections;
the witness is ``T = D_A^{-1} theta_A^* theta_B``.  Projections on the
dilated module are compared up to Murray-von Neumann equivalence, which in
finite dimension is equality of per-block ranks, and every equivalent
projection is the frame projection of ``B_j = L_j^* V theta_A``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebra import (
    DEFAULT_TOL,
    BlockMatrix,
    Tolerance,
    block_ranks,
    inverse,
    is_positive,
)
from .errors import (
    DimensionMismatch,
    IncomparableFrames,
    NotCompatiblePartialIsometry,
    NotCornerUnitary,
    NotEquivalent,
    NotInCorner,
    NotInvertible,
    NotInvertibleInCorner,
    NotParseval,
    NotProjection,
    NotSimilar,
    SpecMismatch,
    UnsupportedDomain,
)
from .frames import OperatorFrame, analyze, frame_operator, is_parseval
from .hilbert_module import is_projection

__all__ = [
    "SimilarityWitness",
    "right_transform",
    "detect_right_similarity",
    "mv_equivalent",
    "frame_from_projection",
    "parseval_parametrize",
    "left_transform",
    "left_sandwich",
    "is_corner_unitary",
    "commutation_check",
    "prop39_check",
    "CommutationReport",
]


@dataclass(frozen=True)
class SimilarityWitness:
    """``kind`` is one of ``right``, ``right_unitary``, ``left``, ``left_unitary``."""

    kind: str
    operator: BlockMatrix
    residual: float
    projection_gap: float = 0.0

    @property
    def is_unitary(self) -> bool:
        return self.kind.endswith("_unitary")


def _full_domain(frame: OperatorFrame):
    if frame.domain is not None:
        raise UnsupportedDomain("operation requires a frame on the whole module")


def _blocks_of(big: BlockMatrix, rank: int):
    return [big.rows(j * rank, (j + 1) * rank) for j in range(big.shape[0] // rank)]


def right_transform(frame: OperatorFrame, t: BlockMatrix, tol: Tolerance = DEFAULT_TOL) -> OperatorFrame:
    """``{A_j T}`` for invertible ``T``."""
    _full_domain(frame)
    if t.shape != (frame.rank, frame.rank):
        raise DimensionMismatch(f"T must be {frame.rank}x{frame.rank}, got {t.shape}")
    inverse(t, tol)
    return frame.replace([a @ t for a in frame.elements])


def _comparable(f: OperatorFrame, g: OperatorFrame, tol: Tolerance):
    if f.spec != g.spec:
        raise SpecMismatch("frames over different algebras")
    if f.rank != g.rank or len(f) != len(g):
        raise IncomparableFrames(
            f"frame shapes differ: rank {f.rank} vs {g.rank}, count {len(f)} vs {len(g)}"
        )
    if (f.codomain - g.codomain).norm() > tol.bound(1.0):
        raise IncomparableFrames("frames have different codomain projections")
    if (f.domain is None) != (g.domain is None) or (
        f.domain is not None and (f.domain - g.domain).norm() > tol.bound(1.0)
    ):
        raise IncomparableFrames("frames have different domain projections")


def _is_unitary(t: BlockMatrix, unit: BlockMatrix, tol: Tolerance) -> bool:
    bound = tol.bound(1.0)
    return (t.adjoint() @ t - unit).norm() <= bound and (t @ t.adjoint() - unit).norm() <= bound


def detect_right_similarity(f: OperatorFrame, g: OperatorFrame, tol: Tolerance = DEFAULT_TOL) -> SimilarityWitness:
    """Find the unique ``T`` with ``G_j = F_j T``, or raise :class:`NotSimilar`.

    The frames are similar iff their frame projections agree.  The projection
    gap is compared against ``tol.bound(kappa)`` with ``kappa`` the larger
    condition number of the two frame operators, since computed projections
    carry errors of that order.  The residual ``max_j ||G_j - F_j T||`` is
    returned for the caller to judge.
    """
    _comparable(f, g, tol)
    an_f = analyze(f, tol)
    an_g = analyze(g, tol)
    gap = (an_f.projection - an_g.projection).norm()
    if gap > tol.bound(max(an_f.condition, an_g.condition)):
        raise NotSimilar(gap)
    t = an_f.inverse @ an_f.transform.adjoint() @ an_g.transform
    try:
        inverse(t, tol, f.domain)
    except NotInvertible:
        raise NotSimilar(gap) from None
    residual = max((b - a @ t).norm() for a, b in zip(f.elements, g.elements))
    kind = "right_unitary" if _is_unitary(t, f.unit, tol) else "right"
    return SimilarityWitness(kind, t, residual, gap)


def mv_equivalent(p: BlockMatrix, q: BlockMatrix, tol: Tolerance = DEFAULT_TOL) -> BlockMatrix:
    """A partial isometry ``V`` with ``V V^* = P`` and ``V^* V = Q``.

    Equivalence holds iff the flattened ranks agree block by block.  ``V`` is
    assembled per block from orthonormal bases of the two ranges.
    """
    if p.spec != q.spec:
        raise SpecMismatch("projections over different algebras")
    if p.shape != q.shape:
        raise DimensionMismatch(f"projections of shapes {p.shape} and {q.shape}")
    for name, x in (("P", p), ("Q", q)):
        if not is_projection(x, tol):
            raise NotProjection(f"{name} is not a projection")
    rp, rq = block_ranks(p, tol), block_ranks(q, tol)
    if rp != rq:
        raise NotEquivalent(rp, rq)
    flats = []
    for fp, fq, r in zip(p.flatten(), q.flatten(), rp):
        up = np.linalg.eigh(0.5 * (fp + fp.conj().T))[1][:, fp.shape[0] - r:]
        uq = np.linalg.eigh(0.5 * (fq + fq.conj().T))[1][:, fq.shape[0] - r:]
        flats.append(up @ uq.conj().T)
    return BlockMatrix.from_flat(p.spec, flats, *p.shape)


def _frame_from_dilated(frame: OperatorFrame, theta_b: BlockMatrix, tol: Tolerance) -> OperatorFrame:
    """Split ``theta_B`` into ``B_j = L_j^* theta_B``.

    The codomain of ``F`` is kept when every ``B_j`` maps into it; otherwise
    the result is a frame with range in the whole module.
    """
    parts = _blocks_of(theta_b, frame.rank)
    codomain = frame.codomain
    if any((codomain @ b - b).norm() > tol.bound(max(1.0, b.norm())) for b in parts):
        codomain = None
    return OperatorFrame(parts, codomain=codomain, spec=frame.spec, rank=frame.rank)


def frame_from_projection(frame: OperatorFrame, p: BlockMatrix, tol: Tolerance = DEFAULT_TOL) -> OperatorFrame:
    """A frame ``B`` with ``P_B = P`` and ``D_B = D_A``, given ``P ~ P_A``."""
    _full_domain(frame)
    an = analyze(frame, tol)
    if p.shape != an.projection.shape:
        raise DimensionMismatch(f"P must act on the dilated module, shape {an.projection.shape}")
    v = mv_equivalent(p, an.projection, tol)
    return _frame_from_dilated(frame, v @ an.transform, tol)


def parseval_parametrize(frame: OperatorFrame, v: BlockMatrix, tol: Tolerance = DEFAULT_TOL) -> OperatorFrame:
    """The Parseval frame ``{L_j^* V theta_A}`` for ``V^* V = P_A``."""
    _full_domain(frame)
    if not is_parseval(frame, tol):
        raise NotParseval("input frame is not Parseval")
    an = analyze(frame, tol)
    if v.shape != an.projection.shape or (v.adjoint() @ v - an.projection).norm() > tol.bound(1.0):
        raise NotCompatiblePartialIsometry("V^* V differs from the frame projection")
    return _frame_from_dilated(frame, v @ an.transform, tol)


def _corner_check(frame: OperatorFrame, s: BlockMatrix, tol: Tolerance):
    if s.shape != (frame.rank, frame.rank):
        raise DimensionMismatch(f"S must be {frame.rank}x{frame.rank}, got {s.shape}")
    e0 = frame.codomain
    if (s - e0 @ s @ e0).norm() > tol.bound(max(1.0, s.norm())):
        raise NotInCorner("S is not in the corner E_0 M E_0")


def _corner_inverse(frame: OperatorFrame, s: BlockMatrix, tol: Tolerance) -> BlockMatrix:
    try:
        return inverse(s, tol, frame.codomain)
    except NotInvertible as exc:
        raise NotInvertibleInCorner(exc.smallest, "S is not invertible in the corner algebra") from None


def left_transform(frame: OperatorFrame, s: BlockMatrix, tol: Tolerance = DEFAULT_TOL) -> OperatorFrame:
    """``{S A_j}`` for ``S`` invertible in the corner ``E_0 M E_0``."""
    _corner_check(frame, s, tol)
    _corner_inverse(frame, s, tol)
    return frame.replace([s @ a for a in frame.elements])


@dataclass(frozen=True)
class SandwichReport:
    lower_factor: float
    upper_factor: float
    lower_holds: bool
    upper_holds: bool

    @property
    def holds(self) -> bool:
        return self.lower_holds and self.upper_holds


def left_sandwich(frame: OperatorFrame, s: BlockMatrix, tol: Tolerance = DEFAULT_TOL) -> SandwichReport:
    """Check ``||S^{-1}||^{-2} D_A <= D_B <= ||S||^2 D_A`` for ``B = S A``."""
    g = left_transform(frame, s, tol)
    d_a, d_b = frame_operator(frame), frame_operator(g)
    lower = _corner_inverse(frame, s, tol).norm() ** -2
    upper = s.norm() ** 2
    scale = upper * d_a.norm()
    return SandwichReport(
        lower,
        upper,
        is_positive(d_b - lower * d_a, tol, scale),
        is_positive(upper * d_a - d_b, tol, scale),
    )


def is_corner_unitary(s: BlockMatrix, e0: BlockMatrix, tol: Tolerance = DEFAULT_TOL) -> bool:
    if (s - e0 @ s @ e0).norm() > tol.bound(max(1.0, s.norm())):
        return False
    return _is_unitary(s, e0, tol)


@dataclass(frozen=True)
class CommutationReport:
    """Outcome of the commutation test for a left-unitary ``S``.

    ``right_witness`` is ``D^{-1/2} U D^{1/2}`` when ``S`` commutes with all
    ``A_j D^{-1} A_i^*``; it satisfies ``S A_j = A_j W``.  It is a unitary
    only when ``U`` commutes with ``D`` (see ``witness_unitary``); the
    Parseval-normalized frames are always related by the unitary ``U``.
    """

    commutes: bool
    commutator_norm: float
    u: BlockMatrix | None
    u_defect: float | None
    right_witness: BlockMatrix | None
    residual: float | None
    witness_unitary: bool
    similarity_detected: bool

    @property
    def consistent(self) -> bool:
        return self.commutes == self.similarity_detected


def commutation_check(frame: OperatorFrame, s: BlockMatrix, tol: Tolerance = DEFAULT_TOL) -> CommutationReport:
    """Decide whether ``{S A_j}`` is right-similar to ``{A_j}`` via commutation.

    Both directions are evaluated: the commutator test with the explicit
    witness, and independently :func:`detect_right_similarity`.
    """
    _full_domain(frame)
    _corner_check(frame, s, tol)
    if not _is_unitary(s, frame.codomain, tol):
        raise NotCornerUnitary("S is not a unitary of the corner algebra")
    an = analyze(frame, tol)
    comm = 0.0
    for a_j in frame.elements:
        left = a_j @ an.inverse
        for a_i in frame.elements:
            k = left @ a_i.adjoint()
            comm = max(comm, (s @ k - k @ s).norm())
    commutes = comm <= tol.bound(an.condition)

    u = u_defect = witness = residual = None
    witness_unitary = False
    if commutes:
        total = BlockMatrix.zeros(frame.spec, frame.rank, frame.rank)
        for a in frame.elements:
            total = total + a.adjoint() @ s @ a
        u = an.inverse_sqrt @ total @ an.inverse_sqrt
        ident = frame.unit
        u_defect = max((u.adjoint() @ u - ident).norm(), (u @ u.adjoint() - ident).norm())
        witness = an.inverse_sqrt @ u @ an.sqrt
        residual = max((s @ a - a @ witness).norm() for a in frame.elements)
        witness_unitary = _is_unitary(witness, ident, tol)

    g = frame.replace([s @ a for a in frame.elements])
    try:
        detect_right_similarity(frame, g, tol)
        detected = True
    except NotSimilar:
        detected = False
    return CommutationReport(commutes, comm, u, u_defect, witness, residual, witness_unitary, detected)


# name used by the published operation list
prop39_check = commutation_check
