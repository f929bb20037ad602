"""Random algebras, vectors, operators and frames for tests and the generator."""

from __future__ import annotations

import numpy as np

from .algebra import AlgebraElement, AlgebraSpec, BlockMatrix, projection_basis
from .hilbert_module import ModuleVector


def _gauss(rng, *shape):
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2)


def random_spec(rng, max_blocks=3, max_dim=4) -> AlgebraSpec:
    m = int(rng.integers(1, max_blocks + 1))
    return AlgebraSpec(tuple(int(n) for n in rng.integers(1, max_dim + 1, size=m)))


def random_operator(rng, spec, rows, cols) -> BlockMatrix:
    return BlockMatrix(spec, [_gauss(rng, rows, cols, n, n) for n in spec.block_dims])


def random_element(rng, spec) -> AlgebraElement:
    return AlgebraElement(spec, [_gauss(rng, 1, 1, n, n) for n in spec.block_dims])


def random_vector(rng, spec, length) -> ModuleVector:
    return ModuleVector(spec, [_gauss(rng, length, 1, n, n) for n in spec.block_dims])


def _haar(rng, dim):
    q, r = np.linalg.qr(_gauss(rng, dim, dim))
    d = np.diagonal(r)
    return q * (d / np.abs(d))


def random_unitary(rng, spec, size) -> BlockMatrix:
    return BlockMatrix.from_flat(spec, [_haar(rng, size * n) for n in spec.block_dims], size, size)


def random_isometry(rng, spec, rows, cols) -> BlockMatrix:
    """``V`` with ``V^* V = I``; needs ``rows >= cols``."""
    flats = []
    for n in spec.block_dims:
        q, _ = np.linalg.qr(_gauss(rng, rows * n, cols * n))
        flats.append(q)
    return BlockMatrix.from_flat(spec, flats, rows, cols)


def random_projection(rng, spec, size, ranks=None) -> BlockMatrix:
    """Projection on ``A^size`` with the given flattened rank per block (random if None)."""
    flats = []
    for k, n in enumerate(spec.block_dims):
        r = int(rng.integers(0, size * n + 1)) if ranks is None else int(ranks[k])
        u = _haar(rng, size * n)[:, :r]
        flats.append(u @ u.conj().T)
    return BlockMatrix.from_flat(spec, flats, size, size)


def random_invertible(rng, spec, size, max_condition=10.0) -> BlockMatrix:
    """``U diag(s) W^*`` with singular values spread over ``[1, max_condition]``."""
    flats = []
    for n in spec.block_dims:
        d = size * n
        s = np.exp(rng.uniform(0.0, np.log(max_condition), d))
        s[0], s[-1] = 1.0, max_condition
        flats.append((_haar(rng, d) * s) @ _haar(rng, d).conj().T)
    return BlockMatrix.from_flat(spec, flats, size, size)


def random_corner_unitary(rng, projection: BlockMatrix) -> BlockMatrix:
    """A unitary of the corner algebra ``E . M_N(A) . E``."""
    flats = []
    for u in projection_basis(projection):
        w = _haar(rng, u.shape[1]) if u.shape[1] else np.zeros((0, 0))
        flats.append(u @ w @ u.conj().T)
    return BlockMatrix.from_flat(projection.spec, flats, *projection.shape)


def random_frame(rng, spec, rank, count, codomain=None):
    """Gaussian elements ``E_0 X_j``; a frame whenever the ranks add up."""
    from .frames import OperatorFrame

    ops = [random_operator(rng, spec, rank, rank) for _ in range(count)]
    if codomain is not None:
        ops = [codomain @ x for x in ops]
    return OperatorFrame(ops, codomain=codomain, spec=spec, rank=rank)
