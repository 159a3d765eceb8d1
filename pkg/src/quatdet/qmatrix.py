"""Dense quaternionic matrices.

Entries live in a read-only float array of shape ``(rows, cols, 4)``.  The
complexification writes ``M = M1 + j M2`` with ``M1 = a + i b`` and
``M2 = c - i d`` entrywise, so that ``j (c - i d) = c j + d k`` and each
entry is reproduced exactly; ``Z[M] = [[M1, -conj(M2)], [M2, conj(M1)]]``.
"""
from __future__ import annotations

import json
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    BadSplitIndex,
    DimensionMismatch,
    IndexEqual,
    IndexOutOfRange,
    NonSquare,
    NotAPermutation,
)
from .quaternion import Quaternion, qconj, qmul


class QMatrix:
    """Immutable n x m quaternion matrix."""

    __slots__ = ("_data",)

    def __init__(self, data):
        arr = np.array(data, dtype=float)
        if arr.ndim != 3 or arr.shape[2] != 4:
            raise DimensionMismatch(f"expected shape (rows, cols, 4), got {arr.shape}")
        if arr.shape[0] < 1 or arr.shape[1] < 1:
            raise DimensionMismatch("matrices need at least one row and one column")
        arr.setflags(write=False)
        self._data = arr

    # -- construction ----------------------------------------------------

    @classmethod
    def zeros(cls, rows: int, cols: int | None = None) -> QMatrix:
        return cls(np.zeros((rows, rows if cols is None else cols, 4)))

    @classmethod
    def identity(cls, n: int) -> QMatrix:
        arr = np.zeros((n, n, 4))
        arr[np.arange(n), np.arange(n), 0] = 1.0
        return cls(arr)

    @classmethod
    def from_entries(cls, rows: Sequence[Sequence]) -> QMatrix:
        """Build from nested lists of Quaternion, numbers, complex or 4-sequences."""
        return cls([[Quaternion.coerce(q).to_array() for q in row] for row in rows])

    @classmethod
    def from_complex(cls, m1, m2=None) -> QMatrix:
        """``M1 + j M2``; with ``m2`` omitted this embeds a complex matrix."""
        m1 = np.atleast_2d(np.asarray(m1, dtype=complex))
        m2 = np.zeros_like(m1) if m2 is None else np.atleast_2d(np.asarray(m2, dtype=complex))
        if m1.shape != m2.shape:
            raise DimensionMismatch("M1 and M2 differ in shape")
        return cls(np.stack([m1.real, m1.imag, m2.real, -m2.imag], axis=-1))

    @classmethod
    def diag(cls, values: Iterable) -> QMatrix:
        vals = [Quaternion.coerce(v).to_array() for v in values]
        arr = np.zeros((len(vals), len(vals), 4))
        for i, v in enumerate(vals):
            arr[i, i] = v
        return cls(arr)

    @classmethod
    def column(cls, entries: Iterable) -> QMatrix:
        return cls([[Quaternion.coerce(q).to_array()] for q in entries])

    # -- basic access ----------------------------------------------------

    @property
    def data(self) -> np.ndarray:
        return self._data

    @property
    def shape(self) -> tuple[int, int]:
        return self._data.shape[0], self._data.shape[1]

    @property
    def rows(self) -> int:
        return self._data.shape[0]

    @property
    def cols(self) -> int:
        return self._data.shape[1]

    def is_square(self) -> bool:
        return self.rows == self.cols

    def require_square(self) -> int:
        if self.rows != self.cols:
            raise NonSquare(f"expected a square matrix, got {self.rows}x{self.cols}")
        return self.rows

    def __getitem__(self, idx):
        i, j = idx
        if isinstance(i, slice) or isinstance(j, slice):
            return QMatrix(self._data[i, j])
        return Quaternion.from_array(self._data[i, j])

    def tolist(self) -> list:
        return self._data.tolist()

    def entry_norms(self) -> np.ndarray:
        return np.sqrt(np.sum(self._data**2, axis=-1))

    def max_norm(self) -> float:
        """Largest entry norm; used as the problem scale."""
        return float(self.entry_norms().max())

    def fro(self) -> float:
        return float(np.sqrt(np.sum(self._data**2)))

    def __repr__(self) -> str:
        return f"QMatrix({self.rows}x{self.cols})"

    def __eq__(self, other) -> bool:
        if not isinstance(other, QMatrix):
            return NotImplemented
        return self.shape == other.shape and bool(np.array_equal(self._data, other._data))

    __hash__ = None

    def allclose(self, other: QMatrix, tol: float = 1e-12) -> bool:
        return self.shape == other.shape and float(np.max(np.abs(self._data - other._data))) <= tol

    # -- algebra ---------------------------------------------------------

    def __add__(self, other: QMatrix) -> QMatrix:
        _same_shape(self, other)
        return QMatrix(self._data + other._data)

    def __sub__(self, other: QMatrix) -> QMatrix:
        _same_shape(self, other)
        return QMatrix(self._data - other._data)

    def __neg__(self) -> QMatrix:
        return QMatrix(-self._data)

    def __matmul__(self, other: QMatrix) -> QMatrix:
        return matmul(self, other)

    def __mul__(self, other) -> QMatrix:
        # M * q: every entry right-multiplied by the scalar q
        if isinstance(other, (int, float, np.floating, np.integer)):
            return QMatrix(self._data * float(other))
        q = Quaternion.coerce(other).to_array()
        return QMatrix(qmul(self._data, q))

    def __rmul__(self, other) -> QMatrix:
        if isinstance(other, (int, float, np.floating, np.integer)):
            return QMatrix(self._data * float(other))
        q = Quaternion.coerce(other).to_array()
        return QMatrix(qmul(q, self._data))

    def __truediv__(self, other: float) -> QMatrix:
        return QMatrix(self._data / float(other))

    @property
    def H(self) -> QMatrix:
        return adjoint(self)

    def conj(self) -> QMatrix:
        return QMatrix(qconj(self._data))

    def transpose(self) -> QMatrix:
        return QMatrix(np.swapaxes(self._data, 0, 1))

    def complex_parts(self) -> tuple[np.ndarray, np.ndarray]:
        d = self._data
        return d[..., 0] + 1j * d[..., 1], d[..., 2] - 1j * d[..., 3]

    def complexify(self) -> np.ndarray:
        return complexify(self)

    def is_complex(self, tol: float = 0.0) -> bool:
        return float(np.max(np.abs(self._data[..., 2:]))) <= tol


def _same_shape(x: QMatrix, y: QMatrix) -> None:
    if x.shape != y.shape:
        raise DimensionMismatch(f"shape mismatch {x.shape} vs {y.shape}")


def matmul(x: QMatrix, y: QMatrix) -> QMatrix:
    """Product over H; each term is X_ik * Y_kj in that order."""
    if x.cols != y.rows:
        raise DimensionMismatch(f"cannot multiply {x.rows}x{x.cols} by {y.rows}x{y.cols}")
    xa, xb, xc, xd = np.moveaxis(x.data, -1, 0)
    ya, yb, yc, yd = np.moveaxis(y.data, -1, 0)
    return QMatrix(
        np.stack(
            [
                xa @ ya - xb @ yb - xc @ yc - xd @ yd,
                xa @ yb + xb @ ya + xc @ yd - xd @ yc,
                xa @ yc - xb @ yd + xc @ ya + xd @ yb,
                xa @ yd + xb @ yc - xc @ yb + xd @ ya,
            ],
            axis=-1,
        )
    )


def adjoint(m: QMatrix) -> QMatrix:
    return QMatrix(qconj(np.swapaxes(m.data, 0, 1)))


def is_hermitian(m: QMatrix, tol: float = 1e-10) -> bool:
    m.require_square()
    scale = max(m.max_norm(), 1e-300)
    return float(np.max(np.abs(m.data - adjoint(m).data))) <= tol * scale


def is_unitary(u: QMatrix, tol: float = 1e-10) -> bool:
    n = u.require_square()
    gram = matmul(adjoint(u), u)
    scale = max(1.0, u.max_norm())
    return float(np.max(np.abs(gram.data - QMatrix.identity(n).data))) <= tol * scale


def complexify(m: QMatrix) -> np.ndarray:
    """2n x 2m complex matrix ``[[M1, -conj(M2)], [M2, conj(M1)]]``."""
    m1, m2 = m.complex_parts()
    return np.block([[m1, -m2.conj()], [m2, m1.conj()]])


def decomplexify(z: np.ndarray) -> QMatrix:
    """Inverse of complexify; reads the left block column only."""
    z = np.asarray(z, dtype=complex)
    r2, c2 = z.shape
    if r2 % 2 or c2 % 2:
        raise DimensionMismatch("complexification has even dimensions")
    n, m = r2 // 2, c2 // 2
    return QMatrix.from_complex(z[:n, :m], z[n:, :m])


def column_from_complex(v: np.ndarray) -> QMatrix:
    """Quaternion column ``x + j y`` from a complex 2n-vector ``(x; y)``."""
    v = np.asarray(v, dtype=complex).reshape(-1)
    n = v.size // 2
    return QMatrix.from_complex(v[:n, None], v[n:, None])


def elementary_diag(n: int, i: int, q) -> QMatrix:
    """``I + (q - 1) E_ii`` with a 1-based index."""
    if not 1 <= i <= n:
        raise IndexOutOfRange(f"index {i} outside 1..{n}")
    arr = QMatrix.identity(n).data.copy()
    arr[i - 1, i - 1] = Quaternion.coerce(q).to_array()
    return QMatrix(arr)


def elementary_shear(n: int, i: int, j: int, q) -> QMatrix:
    """``I + q E_ij`` with 1-based indices, i != j."""
    if not (1 <= i <= n and 1 <= j <= n):
        raise IndexOutOfRange(f"indices ({i}, {j}) outside 1..{n}")
    if i == j:
        raise IndexEqual("shear needs i != j")
    arr = QMatrix.identity(n).data.copy()
    arr[i - 1, j - 1] = Quaternion.coerce(q).to_array()
    return QMatrix(arr)


def permutation(perm: Sequence[int]) -> QMatrix:
    """Matrix with ``P[perm(j), j] = 1`` for a 1-based permutation sequence."""
    perm = [int(p) for p in perm]
    n = len(perm)
    if n == 0 or sorted(perm) != list(range(1, n + 1)):
        raise NotAPermutation(f"{perm} is not a permutation of 1..{n}")
    arr = np.zeros((n, n, 4))
    for j, p in enumerate(perm):
        arr[p - 1, j, 0] = 1.0
    return QMatrix(arr)


def hadamard(x: QMatrix, y: QMatrix) -> QMatrix:
    _same_shape(x, y)
    return QMatrix(qmul(x.data, y.data))


def block_split(m: QMatrix, k: int) -> tuple[QMatrix, QMatrix, QMatrix, QMatrix]:
    n = m.require_square()
    if not 1 <= k < n:
        raise BadSplitIndex(f"split index {k} must satisfy 1 <= k < {n}")
    d = m.data
    return QMatrix(d[:k, :k]), QMatrix(d[:k, k:]), QMatrix(d[k:, :k]), QMatrix(d[k:, k:])


def block_join(a: QMatrix, b: QMatrix, c: QMatrix, d: QMatrix) -> QMatrix:
    if a.rows != b.rows or c.rows != d.rows or a.cols != c.cols or b.cols != d.cols:
        raise DimensionMismatch("blocks do not tile a matrix")
    top = np.concatenate([a.data, b.data], axis=1)
    bottom = np.concatenate([c.data, d.data], axis=1)
    return QMatrix(np.concatenate([top, bottom], axis=0))


def direct_sum(a: QMatrix, b: QMatrix) -> QMatrix:
    return block_join(a, QMatrix.zeros(a.rows, b.cols), QMatrix.zeros(b.rows, a.cols), b)


# -- random helpers used by tests and the CLI demo -----------------------

def random_qmatrix(rng: np.random.Generator, rows: int, cols: int | None = None) -> QMatrix:
    cols = rows if cols is None else cols
    return QMatrix(rng.standard_normal((rows, cols, 4)))


def random_unitary(rng: np.random.Generator, n: int, reflections: int | None = None) -> QMatrix:
    """Product of quaternionic Householder reflectors and a diagonal of unit phases."""
    u = QMatrix.diag([Quaternion.from_array(v / np.linalg.norm(v)) for v in rng.standard_normal((n, 4))])
    for _ in range(n if reflections is None else reflections):
        v = random_qmatrix(rng, n, 1)
        u = matmul(householder(v), u)
    return u


def householder(v: QMatrix) -> QMatrix:
    """Reflector ``I - 2 v v^+ / (v^+ v)``; hermitian and unitary."""
    n = v.rows
    nv2 = float(np.sum(v.data**2))
    if nv2 == 0.0:
        return QMatrix.identity(n)
    return QMatrix.identity(n) - matmul(v, adjoint(v)) * (2.0 / nv2)


# -- JSON file format ----------------------------------------------------

class MatrixFormatError(ValueError):
    """Malformed matrix file; ``location`` holds 'line:col' or a JSON path."""

    def __init__(self, msg: str, location: str = ""):
        super().__init__(f"{location}: {msg}" if location else msg)
        self.location = location


def to_json_obj(m: QMatrix) -> dict:
    return {"rows": m.rows, "cols": m.cols, "entries": m.tolist()}


def dumps(m: QMatrix) -> str:
    return json.dumps(to_json_obj(m))


def from_json_obj(obj) -> QMatrix:
    if not isinstance(obj, dict):
        raise MatrixFormatError("top level must be an object", "$")
    for key in ("rows", "cols", "entries"):
        if key not in obj:
            raise MatrixFormatError(f"missing key {key!r}", "$")
    rows, cols, entries = obj["rows"], obj["cols"], obj["entries"]
    for key, val in (("rows", rows), ("cols", cols)):
        if isinstance(val, bool) or not isinstance(val, int) or val < 1:
            raise MatrixFormatError("must be a positive integer", f"$.{key}")
    if not isinstance(entries, list) or not entries:
        raise MatrixFormatError("must be a non-empty array", "$.entries")
    if len(entries) != rows:
        raise MatrixFormatError(f"has {len(entries)} rows, header says {rows}", "$.entries")
    arr = np.empty((rows, cols, 4))
    for i, row in enumerate(entries):
        if not isinstance(row, list) or len(row) != cols:
            raise MatrixFormatError(f"expected a row of {cols} entries", f"$.entries[{i}]")
        for j, q in enumerate(row):
            where = f"$.entries[{i}][{j}]"
            if not isinstance(q, list) or len(q) != 4:
                raise MatrixFormatError("expected [a, b, c, d]", where)
            for t, x in enumerate(q):
                if isinstance(x, bool) or not isinstance(x, (int, float)):
                    raise MatrixFormatError("components must be numbers", f"{where}[{t}]")
                arr[i, j, t] = float(x)
    return QMatrix(arr)


def loads(text: str) -> QMatrix:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MatrixFormatError(exc.msg, f"{exc.lineno}:{exc.colno}") from exc
    return from_json_obj(obj)


def load(path) -> QMatrix:
    return loads(Path(path).read_text())


def save(m: QMatrix, path) -> None:
    Path(path).write_text(dumps(m) + "\n")
