"""Small constructors shared by the test modules."""

import numpy as np

from csframes import AlgebraSpec, BlockMatrix, ModuleVector, OperatorFrame, VectorFrame
from csframes.algebra import AlgebraElement

SQ3 = np.sqrt(3.0)
MERCEDES = [(1.0, 0.0), (-0.5, SQ3 / 2), (-0.5, -SQ3 / 2)]

C = AlgebraSpec((1,))


def scalar_vector(values, spec=C):
    """Vector of ``A^N`` whose entries are scalar multiples of the unit."""
    return ModuleVector.from_elements(
        spec, [AlgebraElement.from_blocks(spec, [v * np.eye(n) for n in spec.block_dims]) for v in values]
    )


def scalar_operator(matrix, spec=C):
    """Operator whose (i, j) entry is ``matrix[i][j]`` times the unit."""
    m = np.asarray(matrix, dtype=complex)
    data = [np.einsum("ij,ab->ijab", m, np.eye(n)) for n in spec.block_dims]
    return BlockMatrix(spec, data)


def mercedes_vectors(spec=C):
    return VectorFrame([scalar_vector(v, spec) for v in MERCEDES], spec=spec, rank=2)


def flat_operator(spec, flats, rows, cols):
    return BlockMatrix.from_flat(spec, flats, rows, cols)


def identity_frame(spec, rank):
    return OperatorFrame([BlockMatrix.identity(spec, rank)])
