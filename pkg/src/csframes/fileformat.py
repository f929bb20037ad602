"""Canonical JSON frame files.

Layout of a file::

    {
      "algebra": [n_1, ..., n_m],
      "ambient_rank": N,
      "elements": [...],
      "kind": "operator_frame" | "vector_frame",
      "metadata": {...},
      "version": 1,
      "E0": operator,          (optional codomain projection)
      "domain": operator       (optional domain projection)
    }

An algebra element is a list of blocks, a block is a list of rows and each
entry is a ``[re, im]`` pair.  Operators are lists of rows of algebra
elements; vectors are lists of algebra elements.  Canonical output has
sorted keys and every float written with 17 significant digits, so that
``dumps(loads(text)) == text`` for canonical text.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .algebra import AlgebraSpec, BlockMatrix
from .errors import CSFramesError
from .frames import OperatorFrame, VectorFrame
from .hilbert_module import ModuleVector

FORMAT_VERSION = 1
KINDS = ("operator_frame", "vector_frame")


class FileFormatError(CSFramesError):
    def __init__(self, message, line=None, column=None, where=None):
        self.line = line
        self.column = column
        self.where = where
        loc = ""
        if line is not None:
            loc = f"line {line}, column {column}: "
        elif where:
            loc = f"{where}: "
        super().__init__(loc + message)


@dataclass
class FrameFile:
    algebra: tuple
    ambient_rank: int
    kind: str
    elements: list
    codomain: BlockMatrix | None = None
    domain: BlockMatrix | None = None
    metadata: dict = field(default_factory=dict)
    version: int = FORMAT_VERSION

    @property
    def spec(self) -> AlgebraSpec:
        return AlgebraSpec(tuple(self.algebra))

    def to_frame(self):
        """The :class:`OperatorFrame` or :class:`VectorFrame` described by the file."""
        try:
            if self.kind == "operator_frame":
                return OperatorFrame(self.elements, codomain=self.codomain, domain=self.domain,
                                     spec=self.spec, rank=self.ambient_rank)
            return VectorFrame(self.elements, domain=self.domain, spec=self.spec, rank=self.ambient_rank)
        except CSFramesError as exc:
            raise FileFormatError(f"inconsistent frame data: {exc}") from None

    @classmethod
    def from_frame(cls, frame, metadata=None) -> "FrameFile":
        if isinstance(frame, VectorFrame):
            return cls(frame.spec.block_dims, frame.rank, "vector_frame", list(frame.vectors),
                       None, frame.domain, dict(metadata or {}))
        identity = BlockMatrix.identity(frame.spec, frame.rank)
        codomain = None if _exactly_equal(frame.codomain, identity) else frame.codomain
        return cls(frame.spec.block_dims, frame.rank, "operator_frame", list(frame.elements),
                   codomain, frame.domain, dict(metadata or {}))


def _exactly_equal(x: BlockMatrix, y: BlockMatrix) -> bool:
    return x.shape == y.shape and all(np.array_equal(a, b) for a, b in zip(x.data, y.data))



# encoding ------------------------------------------------------------------


def encode_element(blocks) -> list:
    return [
        [[[float(z.real) + 0.0, float(z.imag) + 0.0] for z in row] for row in block]
        for block in blocks
    ]


def encode_operator(x: BlockMatrix) -> list:
    return [
        [encode_element([d[i, j] for d in x.data]) for j in range(x.shape[1])]
        for i in range(x.shape[0])
    ]


def encode_vector(x: ModuleVector) -> list:
    return [encode_element([d[i, 0] for d in x.data]) for i in range(x.shape[0])]


def _depth(value) -> int:
    if isinstance(value, list):
        return 1 + max((_depth(v) for v in value), default=0)
    return 0


def _scalar(value) -> str:
    if value is None:
        return "null"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        if not math.isfinite(value):
            raise ValueError("non-finite numbers cannot be serialized")
        return format(value + 0.0, ".17g")
    if isinstance(value, str):
        return json.dumps(value)
    raise TypeError(f"cannot serialize {type(value).__name__}")


def _dump(value, indent: int) -> str:
    pad = "  " * (indent + 1)
    if isinstance(value, dict):
        if not value:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {_dump(value[k], indent + 1)}" for k in sorted(value)]
        return "{\n" + ",\n".join(items) + "\n" + "  " * indent + "}"
    if isinstance(value, (list, tuple)):
        value = list(value)
        if _depth(value) <= 3:
            return "[" + ",".join(_dump(v, 0) for v in value) + "]"
        return "[\n" + ",\n".join(pad + _dump(v, indent + 1) for v in value) + "\n" + "  " * indent + "]"
    return _scalar(value)


def canonical_json(value) -> str:
    """Deterministic text: sorted keys, 17 significant digits, inline leaf arrays."""
    return _dump(value, 0) + "\n"


def to_document(ff: FrameFile) -> dict:
    encode = encode_vector if ff.kind == "vector_frame" else encode_operator
    doc = {
        "version": int(ff.version),
        "algebra": [int(n) for n in ff.algebra],
        "ambient_rank": int(ff.ambient_rank),
        "kind": ff.kind,
        "elements": [encode(x) for x in ff.elements],
        "metadata": dict(ff.metadata),
    }
    if ff.codomain is not None:
        doc["E0"] = encode_operator(ff.codomain)
    if ff.domain is not None:
        doc["domain"] = encode_operator(ff.domain)
    return doc


def dumps(ff: FrameFile) -> str:
    return canonical_json(to_document(ff))


# decoding ------------------------------------------------------------------


def _number(x, where) -> float:
    if isinstance(x, bool) or not isinstance(x, (int, float)):
        raise FileFormatError("expected a number", where=where)
    return float(x)


def decode_element(value, spec: AlgebraSpec, where: str) -> list:
    if not isinstance(value, list) or len(value) != spec.num_blocks:
        raise FileFormatError(f"expected {spec.num_blocks} blocks", where=where)
    blocks = []
    for k, (n, block) in enumerate(zip(spec.block_dims, value)):
        w = f"{where}[{k}]"
        if not isinstance(block, list) or len(block) != n:
            raise FileFormatError(f"expected {n} rows", where=w)
        arr = np.empty((n, n), dtype=np.complex128)
        for r, row in enumerate(block):
            if not isinstance(row, list) or len(row) != n:
                raise FileFormatError(f"expected {n} entries", where=f"{w}[{r}]")
            for c, pair in enumerate(row):
                pw = f"{w}[{r}][{c}]"
                if not isinstance(pair, list) or len(pair) != 2:
                    raise FileFormatError("expected a [re, im] pair", where=pw)
                arr[r, c] = complex(_number(pair[0], pw), _number(pair[1], pw))
        blocks.append(arr)
    return blocks


def decode_operator(value, spec: AlgebraSpec, rows: int, cols: int, where: str) -> BlockMatrix:
    if not isinstance(value, list) or len(value) != rows:
        raise FileFormatError(f"expected {rows} rows", where=where)
    data = [np.empty((rows, cols, n, n), dtype=np.complex128) for n in spec.block_dims]
    for i, row in enumerate(value):
        if not isinstance(row, list) or len(row) != cols:
            raise FileFormatError(f"expected {cols} entries", where=f"{where}[{i}]")
        for j, entry in enumerate(row):
            for k, b in enumerate(decode_element(entry, spec, f"{where}[{i}][{j}]")):
                data[k][i, j] = b
    return BlockMatrix(spec, data)


def decode_vector(value, spec: AlgebraSpec, length: int, where: str) -> ModuleVector:
    if not isinstance(value, list) or len(value) != length:
        raise FileFormatError(f"expected {length} entries", where=where)
    data = [np.empty((length, 1, n, n), dtype=np.complex128) for n in spec.block_dims]
    for i, entry in enumerate(value):
        for k, b in enumerate(decode_element(entry, spec, f"{where}[{i}]")):
            data[k][i, 0] = b
    return ModuleVector(spec, data)


def from_document(doc) -> FrameFile:
    if not isinstance(doc, dict):
        raise FileFormatError("top level must be an object")
    allowed = {"version", "algebra", "ambient_rank", "kind", "elements", "metadata", "E0", "domain"}
    unknown = sorted(set(doc) - allowed)
    if unknown:
        raise FileFormatError(f"unknown keys {unknown}")
    for key in ("version", "algebra", "ambient_rank", "kind", "elements"):
        if key not in doc:
            raise FileFormatError(f"missing key {key!r}")
    if doc["version"] != FORMAT_VERSION:
        raise FileFormatError(f"unsupported version {doc['version']!r}", where="version")
    algebra = doc["algebra"]
    if (not isinstance(algebra, list) or not algebra
            or not all(isinstance(n, int) and not isinstance(n, bool) and n >= 1 for n in algebra)):
        raise FileFormatError("expected a nonempty list of positive integers", where="algebra")
    spec = AlgebraSpec(tuple(algebra))
    rank = doc["ambient_rank"]
    if not isinstance(rank, int) or isinstance(rank, bool) or rank < 1:
        raise FileFormatError("expected a positive integer", where="ambient_rank")
    kind = doc["kind"]
    if kind not in KINDS:
        raise FileFormatError(f"expected one of {list(KINDS)}", where="kind")
    elements = doc["elements"]
    if not isinstance(elements, list):
        raise FileFormatError("expected a list", where="elements")
    if kind == "operator_frame":
        decoded = [decode_operator(x, spec, rank, rank, f"elements[{j}]") for j, x in enumerate(elements)]
    else:
        decoded = [decode_vector(x, spec, rank, f"elements[{j}]") for j, x in enumerate(elements)]
    codomain = doc.get("E0")
    if codomain is not None:
        if kind == "vector_frame":
            raise FileFormatError("vector frames carry no E0", where="E0")
        codomain = decode_operator(codomain, spec, rank, rank, "E0")
    domain = doc.get("domain")
    if domain is not None:
        domain = decode_operator(domain, spec, rank, rank, "domain")
    metadata = doc.get("metadata", {})
    if not isinstance(metadata, dict):
        raise FileFormatError("expected an object", where="metadata")
    return FrameFile(tuple(algebra), rank, kind, decoded, codomain, domain, metadata, FORMAT_VERSION)


def loads(text: str) -> FrameFile:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FileFormatError(exc.msg, line=exc.lineno, column=exc.colno) from None
    return from_document(doc)


def load(path) -> FrameFile:
    return loads(Path(path).read_text())


def save(ff: FrameFile, path) -> None:
    Path(path).write_text(dumps(ff))
