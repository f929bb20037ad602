"""The standard right Hilbert module ``A^N``.

Vectors are columns ``N x 1`` over ``A``; operators ``A^N -> A^M`` are
``M x N`` matrices over ``A``.  The inner product is ``<xi, eta> = xi^* eta``
(conjugate-linear in the first slot) and the right action is
``(xi . a)_i = xi_i a``.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .algebra import DEFAULT_TOL, AlgebraElement, AlgebraSpec, BlockMatrix, Tolerance
from .errors import DimensionMismatch, LengthMismatch, SpecMismatch

__all__ = [
    "ModuleVector",
    "ModuleOperator",
    "inner",
    "module_action",
    "rank_one",
    "op_apply",
    "op_norm",
    "vector_norm",
    "is_projection",
]

# Adjointable operators on A^N are exactly the matrices over A.
ModuleOperator = BlockMatrix


class ModuleVector(BlockMatrix):
    """An element of ``A^N`` stored as an ``N x 1`` matrix over ``A``."""

    __slots__ = ()

    @staticmethod
    def _accepts(shape) -> bool:
        return shape[1] == 1

    @classmethod
    def from_elements(cls, spec: AlgebraSpec, elements: Sequence[AlgebraElement]):
        return cls.from_entries(spec, [[a] for a in elements])

    @classmethod
    def basis(cls, spec: AlgebraSpec, length: int, index: int):
        """The unital vector with the identity in slot ``index``."""
        elems = [spec.identity() if i == index else spec.zero() for i in range(length)]
        return cls.from_elements(spec, elems)

    @property
    def length(self) -> int:
        return self.shape[0]

    @property
    def elements(self) -> list:
        return [self.entry(i, 0) for i in range(self.length)]

    def __repr__(self):
        return f"ModuleVector(spec={self.spec.block_dims}, length={self.length})"


def _check_pair(xi: BlockMatrix, eta: BlockMatrix):
    if xi.spec != eta.spec:
        raise SpecMismatch(f"vectors over {xi.spec.block_dims} and {eta.spec.block_dims}")


def inner(xi: ModuleVector, eta: ModuleVector) -> AlgebraElement:
    """``<xi, eta> = sum_i xi_i^* eta_i``."""
    _check_pair(xi, eta)
    if xi.shape != eta.shape:
        raise LengthMismatch(f"lengths {xi.shape[0]} and {eta.shape[0]}")
    return (xi.adjoint() @ eta).cast(AlgebraElement)


def module_action(xi: ModuleVector, a: AlgebraElement) -> ModuleVector:
    _check_pair(xi, a)
    return (xi @ a).cast(ModuleVector)


def rank_one(xi: ModuleVector, eta: ModuleVector) -> BlockMatrix:
    """``theta_{xi,eta}: zeta -> xi <eta, zeta>``, an ``len(xi) x len(eta)`` operator."""
    _check_pair(xi, eta)
    return (xi @ eta.adjoint()).cast(BlockMatrix)


def op_apply(op: BlockMatrix, xi: ModuleVector) -> ModuleVector:
    _check_pair(op, xi)
    if op.shape[1] != xi.shape[0]:
        raise DimensionMismatch(f"operator with {op.shape[1]} columns applied to length {xi.shape[0]}")
    return (op @ xi).cast(ModuleVector)


def op_norm(op: BlockMatrix) -> float:
    return op.norm()


def vector_norm(xi: ModuleVector) -> float:
    """``||xi|| = ||<xi, xi>||^{1/2}``."""
    return float(np.sqrt(inner(xi, xi).norm()))


def is_projection(p: BlockMatrix, tol: Tolerance = DEFAULT_TOL) -> bool:
    if not p.is_square:
        raise DimensionMismatch(f"projection must be square, got {p.shape}")
    bound = tol.bound(max(1.0, p.norm()))
    return (p - p.adjoint()).norm() <= bound and (p @ p - p).norm() <= bound
