"""Finite-dimensional C*-algebras and matrices over them.

An algebra ``A = M_{n_1} (+) ... (+) M_{n_m}`` is described by its block
dimensions.  A matrix over ``A`` with ``M`` rows and ``N`` columns is stored
per block ``k`` as a complex array of shape ``(M, N, n_k, n_k)``: entry
``(i, j)`` of block ``k`` is the ``n_k x n_k`` matrix ``data[k][i, j]``.

Products and adjoints are computed entrywise on that layout.  Everything
spectral (norms, positivity, powers, ranks) goes through :func:`flatten`,
the *-isomorphism that turns block ``k`` into one dense
``(M n_k) x (N n_k)`` complex matrix.
"""

from __future__ import annotations

from dataclasses import dataclass
from numbers import Number
from typing import Iterable, Sequence

import numpy as np

from .errors import DimensionMismatch, NotInvertible, NotPositive, SpecMismatch

__all__ = [
    "Tolerance",
    "DEFAULT_TOL",
    "AlgebraSpec",
    "BlockMatrix",
    "AlgebraElement",
    "alg_arith",
    "alg_norm",
    "flatten",
    "is_positive",
    "positive_power",
    "eigenvalues",
    "extremal_eigenvalues",
    "singular_values",
    "block_ranks",
    "projection_basis",
    "inverse",
    "pinv",
    "condition_number",
]


@dataclass(frozen=True)
class Tolerance:
    """Relative/absolute thresholds used for every numerical decision."""

    rel: float = 1e-9
    abs: float = 1e-12

    def __post_init__(self):
        if not (self.rel >= 0 and self.abs >= 0):
            raise ValueError("tolerances must be nonnegative")

    def bound(self, scale: float = 1.0) -> float:
        return self.abs + self.rel * scale


DEFAULT_TOL = Tolerance()


@dataclass(frozen=True)
class AlgebraSpec:
    """Block dimensions ``(n_1, ..., n_m)`` of ``A = (+)_k M_{n_k}(C)``."""

    block_dims: tuple

    def __post_init__(self):
        dims = tuple(int(n) for n in self.block_dims)
        if not dims or any(n < 1 for n in dims):
            raise ValueError(f"block dimensions must be positive, got {self.block_dims!r}")
        object.__setattr__(self, "block_dims", dims)

    @property
    def num_blocks(self) -> int:
        return len(self.block_dims)

    @property
    def dimension(self) -> int:
        """Complex dimension of the algebra."""
        return sum(n * n for n in self.block_dims)

    def identity(self) -> "AlgebraElement":
        return AlgebraElement.from_blocks(self, [np.eye(n) for n in self.block_dims])

    def zero(self) -> "AlgebraElement":
        return AlgebraElement.from_blocks(self, [np.zeros((n, n)) for n in self.block_dims])

    def element(self, blocks) -> "AlgebraElement":
        return AlgebraElement.from_blocks(self, blocks)

    def __str__(self):
        return "(+)".join(f"M_{n}" for n in self.block_dims)


def _spectral_norm(f: np.ndarray) -> float:
    """Largest singular value; tall or wide blocks go through the smaller Gram matrix."""
    if f.size == 0:
        return 0.0
    rows, cols = f.shape
    if rows == cols:
        return float(np.linalg.norm(f, 2))
    g = f.conj().T @ f if rows > cols else f @ f.conj().T
    return float(np.sqrt(max(np.linalg.eigvalsh(g)[-1], 0.0)))


def _frozen(arr):
    arr.setflags(write=False)
    return arr


class BlockMatrix:
    """An ``M x N`` matrix with entries in a finite-dimensional C*-algebra.

    Instances are immutable.  ``@`` is the matrix product, ``*`` and ``/``
    take complex scalars, and :meth:`adjoint` (also ``.H``) is the
    conjugate transpose with entries replaced by their adjoints.
    """

    __slots__ = ("spec", "shape", "_data")

    def __init__(self, spec: AlgebraSpec, data: Sequence):
        if len(data) != spec.num_blocks:
            raise SpecMismatch(f"expected {spec.num_blocks} blocks, got {len(data)}")
        arrays = []
        shape = None
        for n, d in zip(spec.block_dims, data):
            arr = np.array(d, dtype=np.complex128)
            if arr.ndim != 4 or arr.shape[2:] != (n, n):
                raise DimensionMismatch(
                    f"block data of shape {arr.shape} does not fit entries of size {n}x{n}"
                )
            if shape is None:
                shape = arr.shape[:2]
            elif arr.shape[:2] != shape:
                raise DimensionMismatch("blocks disagree on the number of rows/columns")
            arrays.append(_frozen(arr))
        if shape[0] < 1 or shape[1] < 1:
            raise DimensionMismatch("matrices over A need at least one row and column")
        if not self._accepts(shape):
            raise DimensionMismatch(f"{type(self).__name__} cannot have shape {shape}")
        self.spec = spec
        self.shape = (int(shape[0]), int(shape[1]))
        self._data = tuple(arrays)

    @staticmethod
    def _accepts(shape) -> bool:
        return True

    @classmethod
    def _trusted(cls, spec, data):
        obj = object.__new__(cls)
        obj.spec = spec
        obj.shape = tuple(int(s) for s in data[0].shape[:2])
        obj._data = tuple(_frozen(d) for d in data)
        return obj

    def _wrap(self, data, other=None):
        cls = type(self) if other is None or type(other) is type(self) else BlockMatrix
        if not cls._accepts(data[0].shape[:2]):
            cls = BlockMatrix
        return cls._trusted(self.spec, data)

    def cast(self, cls):
        """Reinterpret the same data as another matrix class (e.g. a vector)."""
        return cls(self.spec, self._data)

    # construction ---------------------------------------------------------

    @classmethod
    def zeros(cls, spec: AlgebraSpec, rows: int, cols: int):
        return cls(spec, [np.zeros((rows, cols, n, n)) for n in spec.block_dims])

    @classmethod
    def identity(cls, spec: AlgebraSpec, size: int):
        data = []
        for n in spec.block_dims:
            d = np.zeros((size, size, n, n), dtype=np.complex128)
            for i in range(size):
                d[i, i] = np.eye(n)
            data.append(d)
        return cls(spec, data)

    @classmethod
    def from_entries(cls, spec: AlgebraSpec, entries):
        """Build from a 2-d nested list of :class:`AlgebraElement`."""
        rows = [list(r) for r in entries]
        if not rows or not rows[0] or any(len(r) != len(rows[0]) for r in rows):
            raise DimensionMismatch("entries must form a nonempty rectangular array")
        data = []
        for k, n in enumerate(spec.block_dims):
            d = np.empty((len(rows), len(rows[0]), n, n), dtype=np.complex128)
            for i, r in enumerate(rows):
                for j, a in enumerate(r):
                    if a.spec != spec:
                        raise SpecMismatch(f"entry ({i},{j}) lives over {a.spec}, expected {spec}")
                    d[i, j] = a._data[k][0, 0]
            data.append(d)
        return cls(spec, data)

    @classmethod
    def from_flat(cls, spec: AlgebraSpec, flats: Sequence, rows: int, cols: int):
        """Inverse of :meth:`flatten`."""
        if len(flats) != spec.num_blocks:
            raise SpecMismatch(f"expected {spec.num_blocks} flattened blocks, got {len(flats)}")
        data = []
        for n, f in zip(spec.block_dims, flats):
            f = np.asarray(f, dtype=np.complex128)
            if f.shape != (rows * n, cols * n):
                raise DimensionMismatch(f"flat block {f.shape} != {(rows * n, cols * n)}")
            data.append(f.reshape(rows, n, cols, n).transpose(0, 2, 1, 3))
        return cls(spec, data)

    @classmethod
    def stack(cls, items: Sequence["BlockMatrix"]):
        """Vertical concatenation."""
        items = list(items)
        if not items:
            raise DimensionMismatch("nothing to stack")
        spec = items[0].spec
        for x in items:
            _same_spec(spec, x.spec)
            if x.shape[1] != items[0].shape[1]:
                raise DimensionMismatch("stacked matrices need equal column counts")
        data = [np.concatenate([x._data[k] for x in items], axis=0) for k in range(spec.num_blocks)]
        return cls._trusted(spec, data) if cls._accepts(data[0].shape[:2]) else BlockMatrix._trusted(spec, data)

    @classmethod
    def block_diag(cls, items: Sequence["BlockMatrix"]):
        items = list(items)
        spec = items[0].spec
        rows = sum(x.shape[0] for x in items)
        cols = sum(x.shape[1] for x in items)
        data = []
        for k, n in enumerate(spec.block_dims):
            d = np.zeros((rows, cols, n, n), dtype=np.complex128)
            r = c = 0
            for x in items:
                _same_spec(spec, x.spec)
                d[r:r + x.shape[0], c:c + x.shape[1]] = x._data[k]
                r += x.shape[0]
                c += x.shape[1]
            data.append(d)
        return BlockMatrix._trusted(spec, data)

    # access ---------------------------------------------------------------

    @property
    def data(self) -> tuple:
        return self._data

    def entry(self, i: int, j: int) -> "AlgebraElement":
        return AlgebraElement._trusted(self.spec, [d[i:i + 1, j:j + 1] for d in self._data])

    @property
    def entries(self) -> list:
        return [[self.entry(i, j) for j in range(self.shape[1])] for i in range(self.shape[0])]

    def rows(self, start: int, stop: int) -> "BlockMatrix":
        if not 0 <= start < stop <= self.shape[0]:
            raise DimensionMismatch(f"row range {start}:{stop} outside {self.shape[0]} rows")
        return BlockMatrix._trusted(self.spec, [d[start:stop] for d in self._data])

    def flatten(self) -> list:
        m, n_cols = self.shape
        return [
            d.transpose(0, 2, 1, 3).reshape(m * n, n_cols * n)
            for n, d in zip(self.spec.block_dims, self._data)
        ]

    @property
    def is_square(self) -> bool:
        return self.shape[0] == self.shape[1]

    # arithmetic -----------------------------------------------------------

    def _conform(self, other):
        if not isinstance(other, BlockMatrix):
            return NotImplemented
        _same_spec(self.spec, other.spec)
        return other

    def __add__(self, other):
        if self._conform(other) is NotImplemented:
            return NotImplemented
        if self.shape != other.shape:
            raise DimensionMismatch(f"cannot add shapes {self.shape} and {other.shape}")
        return self._wrap([a + b for a, b in zip(self._data, other._data)], other)

    def __sub__(self, other):
        if self._conform(other) is NotImplemented:
            return NotImplemented
        if self.shape != other.shape:
            raise DimensionMismatch(f"cannot subtract shapes {self.shape} and {other.shape}")
        return self._wrap([a - b for a, b in zip(self._data, other._data)], other)

    def __neg__(self):
        return self._wrap([-a for a in self._data])

    def __mul__(self, scalar):
        if not isinstance(scalar, Number):
            return NotImplemented
        return self._wrap([complex(scalar) * a for a in self._data])

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        if not isinstance(scalar, Number):
            return NotImplemented
        return self._wrap([a / complex(scalar) for a in self._data])

    def __matmul__(self, other):
        if self._conform(other) is NotImplemented:
            return NotImplemented
        if self.shape[1] != other.shape[0]:
            raise DimensionMismatch(f"cannot multiply shapes {self.shape} and {other.shape}")
        m, k = self.shape
        p = other.shape[1]
        data = []
        for n, a, b in zip(self.spec.block_dims, self._data, other._data):
            # one BLAS product on the flattened blocks
            fa = a.transpose(0, 2, 1, 3).reshape(m * n, k * n)
            fb = b.transpose(0, 2, 1, 3).reshape(k * n, p * n)
            data.append((fa @ fb).reshape(m, n, p, n).transpose(0, 2, 1, 3))
        return self._wrap(data, other)

    def adjoint(self):
        return self._wrap([d.transpose(1, 0, 3, 2).conj() for d in self._data])

    @property
    def H(self):
        return self.adjoint()

    def norm(self) -> float:
        """C*-norm: the largest singular value over all flattened blocks."""
        return max(_spectral_norm(f) for f in self.flatten())

    def distance(self, other: "BlockMatrix") -> float:
        return (self - other).norm()

    def __repr__(self):
        return f"{type(self).__name__}(spec={self.spec.block_dims}, shape={self.shape})"


class AlgebraElement(BlockMatrix):
    """An element of ``A``: a ``1 x 1`` matrix over ``A``."""

    __slots__ = ()

    @staticmethod
    def _accepts(shape) -> bool:
        return tuple(shape) == (1, 1)

    @classmethod
    def from_blocks(cls, spec: AlgebraSpec, blocks: Sequence):
        if len(blocks) != spec.num_blocks:
            raise SpecMismatch(f"expected {spec.num_blocks} blocks, got {len(blocks)}")
        return cls(spec, [np.asarray(b, dtype=np.complex128)[None, None] for b in blocks])

    @property
    def blocks(self) -> tuple:
        return tuple(d[0, 0] for d in self._data)


def _same_spec(a: AlgebraSpec, b: AlgebraSpec):
    if a != b:
        raise SpecMismatch(f"algebra {a.block_dims} incompatible with {b.block_dims}")


def alg_arith(a: AlgebraElement, b: AlgebraElement | None = None, op: str = "add", scalar: complex = 1.0):
    """Dispatch one C*-algebra operation: ``add``, ``mul``, ``adjoint`` or ``scale``."""
    if op == "add":
        return a + b
    if op == "mul":
        return a @ b
    if op == "adjoint":
        return a.adjoint()
    if op == "scale":
        return complex(scalar) * a
    raise ValueError(f"unknown operation {op!r}")


def alg_norm(a: BlockMatrix) -> float:
    return a.norm()


def flatten(x: BlockMatrix) -> list:
    return x.flatten()


# spectral helpers -------------------------------------------------------


def _require_square(a: BlockMatrix):
    if not a.is_square:
        raise DimensionMismatch(f"square matrix required, got shape {a.shape}")


def _hermitian_parts(a: BlockMatrix) -> list:
    return [0.5 * (f + f.conj().T) for f in a.flatten()]


def projection_basis(p: BlockMatrix) -> list:
    """Orthonormal bases (columns) of the range of a projection, per block."""
    _require_square(p)
    bases = []
    for h in _hermitian_parts(p):
        w, v = np.linalg.eigh(h)
        bases.append(v[:, w > 0.5])
    return bases


def _corner(a: BlockMatrix, unit: BlockMatrix | None):
    """Hermitian parts compressed to the range of ``unit`` (whole space if None)."""
    herm = _hermitian_parts(a)
    if unit is None:
        return herm, None
    _same_spec(a.spec, unit.spec)
    if unit.shape != a.shape:
        raise DimensionMismatch("unit projection must have the shape of the element")
    bases = projection_basis(unit)
    return [u.conj().T @ h @ u for h, u in zip(herm, bases)], bases


def eigenvalues(a: BlockMatrix, unit: BlockMatrix | None = None) -> list:
    """Eigenvalues of the Hermitian part of each flattened block (ascending)."""
    _require_square(a)
    herm, _ = _corner(a, unit)
    return [np.linalg.eigvalsh(h) for h in herm]


def extremal_eigenvalues(a: BlockMatrix, unit: BlockMatrix | None = None) -> tuple:
    """``(min, max)`` eigenvalue over all blocks; ``(0, 0)`` for an empty corner."""
    ws = [w for w in eigenvalues(a, unit) if w.size]
    if not ws:
        return 0.0, 0.0
    return float(min(w[0] for w in ws)), float(max(w[-1] for w in ws))


def is_positive(a: BlockMatrix, tol: Tolerance = DEFAULT_TOL, scale: float | None = None) -> bool:
    """Self-adjoint with spectrum >= 0, up to ``tol.bound(scale)`` (scale defaults to ``||a||``)."""
    _require_square(a)
    bound = tol.bound(a.norm() if scale is None else scale)
    if (a - a.adjoint()).norm() > bound:
        return False
    return all(np.linalg.eigvalsh(h)[0] >= -bound for h in _hermitian_parts(a))


_POWERS = (0.5, -0.5, -1.0)


def positive_power(a: BlockMatrix, p: float, tol: Tolerance = DEFAULT_TOL, unit: BlockMatrix | None = None):
    """``a**p`` for positive ``a`` and ``p`` in {1/2, -1/2, -1}.

    With ``unit`` (a projection commuting with ``a``, e.g. ``unit a unit = a``)
    the power is taken inside the corner algebra ``unit . A . unit``; negative
    powers are then corner inverses.
    """
    if p not in _POWERS:
        raise ValueError(f"unsupported power {p}; expected one of {_POWERS}")
    _require_square(a)
    if not is_positive(a, tol):
        smallest, _ = extremal_eigenvalues(a)
        raise NotPositive(f"element is not positive (smallest eigenvalue {smallest:.6g})")
    herm, bases = _corner(a, unit)
    decomps = [np.linalg.eigh(h) for h in herm]
    if p < 0:
        spectra = [w for w, _ in decomps if w.size]
        smallest = min((float(w[0]) for w in spectra), default=0.0)
        if not spectra or smallest <= tol.rel * a.norm():
            raise NotInvertible(smallest)
    flats = []
    for k, (w, v) in enumerate(decomps):
        f = (v * np.clip(w, 0.0, None) ** p) @ v.conj().T if w.size else np.zeros((0, 0))
        if bases is not None:
            u = bases[k]
            f = u @ f @ u.conj().T
        flats.append(f)
    return a._wrap(BlockMatrix.from_flat(a.spec, flats, *a.shape)._data)


def singular_values(x: BlockMatrix) -> list:
    return [np.linalg.svd(f, compute_uv=False) for f in x.flatten()]


def _threshold(svals: Iterable, tol: Tolerance) -> float:
    smax = max((float(s[0]) for s in svals if s.size), default=0.0)
    return max(tol.abs, tol.rel * smax)


def block_ranks(x: BlockMatrix, tol: Tolerance = DEFAULT_TOL) -> tuple:
    """Per-block rank of the flattening; singular values above ``rel * sigma_max`` count."""
    svals = singular_values(x)
    t = _threshold(svals, tol)
    return tuple(int(np.count_nonzero(s > t)) for s in svals)


def inverse(x: BlockMatrix, tol: Tolerance = DEFAULT_TOL, unit: BlockMatrix | None = None):
    """Inverse of ``x`` (inside the corner of ``unit`` when given).

    Raises :class:`NotInvertible` when the smallest singular value is not
    above ``tol.rel`` times the largest one.
    """
    _require_square(x)
    flats = x.flatten()
    bases = None if unit is None else projection_basis(unit)
    comp = flats if bases is None else [u.conj().T @ f @ u for f, u in zip(flats, bases)]
    svals = [np.linalg.svd(c, compute_uv=False) for c in comp]
    nonempty = [s for s in svals if s.size]
    smax = max((float(s[0]) for s in nonempty), default=0.0)
    smin = min((float(s[-1]) for s in nonempty), default=0.0)
    if not nonempty or smin <= tol.rel * smax:
        raise NotInvertible(smin)
    out = []
    for k, c in enumerate(comp):
        inv = np.linalg.inv(c) if c.size else c
        if bases is not None:
            inv = bases[k] @ inv @ bases[k].conj().T
        out.append(inv)
    return x._wrap(BlockMatrix.from_flat(x.spec, out, *x.shape)._data)


def pinv(x: BlockMatrix, tol: Tolerance = DEFAULT_TOL) -> BlockMatrix:
    """Moore-Penrose inverse with the global rank threshold."""
    decomps = [np.linalg.svd(f, full_matrices=False) for f in x.flatten()]
    t = _threshold([s for _, s, _ in decomps], tol)
    out = []
    for u, s, vh in decomps:
        keep = s > t
        out.append((vh[keep].conj().T / s[keep]) @ u[:, keep].conj().T)
    return BlockMatrix.from_flat(x.spec, out, x.shape[1], x.shape[0])


def condition_number(x: BlockMatrix) -> float:
    svals = [s for s in singular_values(x) if s.size]
    smin = min(float(s[-1]) for s in svals)
    smax = max(float(s[0]) for s in svals)
    return np.inf if smin == 0 else smax / smin
