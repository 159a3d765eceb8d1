"""Schur-complement inversion over H and closed forms for 2x2 matrices.

With ``M = [[A, B], [C, D]]`` and A invertible, ``A_S = D - C A^-1 B`` and

    M    = [[I, 0], [C A^-1, I]] (A + A_S) [[I, A^-1 B], [0, I]]
    M^-1 = [[I, -A^-1 B], [0, I]] (A^-1 + A_S^-1) [[I, 0], [-C A^-1, I]]

where ``+`` between blocks is the direct sum.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    DimensionMismatch,
    SingularLeadingBlock,
    SingularMatrix,
    SingularSchurComplement,
    ZeroEntry,
)
from .qdet import PIVOT_TOL, sdet_gauss
from .qmatrix import QMatrix, block_join, block_split, direct_sum, hadamard, matmul
from .quaternion import Quaternion, qinv, qmul

ZERO_ENTRY_TOL = 1e-12
# entries between these relative sizes are too small for the closed form
# to be accurate but too large to treat as exact zeros
ILL_BAND = (1e-12, 1e-6)


@dataclass(frozen=True)
class BlockFactorization:
    """``M = L Dblk R`` with ``Dblk = A (+) A_S``."""

    k: int
    L: QMatrix
    Dblk: QMatrix
    R: QMatrix

    def product(self) -> QMatrix:
        return matmul(matmul(self.L, self.Dblk), self.R)


def _leading_inverse(m: QMatrix, k: int):
    a, b, c, d = block_split(m, k)
    try:
        ainv = invert(a)
    except SingularMatrix as exc:
        raise SingularLeadingBlock(f"leading {k}x{k} block is singular") from exc
    return a, b, c, d, ainv


def schur_complement(m: QMatrix, k: int) -> QMatrix:
    """``D - C A^-1 B`` for the split after row/column k."""
    _, b, c, d, ainv = _leading_inverse(m, k)
    return d - matmul(matmul(c, ainv), b)


def block_factorization(m: QMatrix, k: int) -> BlockFactorization:
    n = m.rows
    a, b, c, d, ainv = _leading_inverse(m, k)
    a_s = d - matmul(matmul(c, ainv), b)
    eye_k, eye_r = QMatrix.identity(k), QMatrix.identity(n - k)
    lower = block_join(eye_k, QMatrix.zeros(k, n - k), matmul(c, ainv), eye_r)
    upper = block_join(eye_k, matmul(ainv, b), QMatrix.zeros(n - k, k), eye_r)
    return BlockFactorization(k, lower, direct_sum(a, a_s), upper)


def _assemble_inverse(ainv, b, c, a_s_inv) -> QMatrix:
    k, r = ainv.rows, a_s_inv.rows
    eye_k, eye_r = QMatrix.identity(k), QMatrix.identity(r)
    left = block_join(eye_k, -matmul(ainv, b), QMatrix.zeros(r, k), eye_r)
    right = block_join(eye_k, QMatrix.zeros(k, r), -matmul(c, ainv), eye_r)
    return matmul(matmul(left, direct_sum(ainv, a_s_inv)), right)


def block_inverse(m: QMatrix, k: int) -> QMatrix:
    """Inverse from one Schur-complement split; no pivoting."""
    _, b, c, d, ainv = _leading_inverse(m, k)
    a_s = d - matmul(matmul(c, ainv), b)
    try:
        a_s_inv = invert(a_s)
    except SingularMatrix as exc:
        raise SingularSchurComplement("Schur complement is singular") from exc
    return _assemble_inverse(ainv, b, c, a_s_inv)


def _pivot_rows(data: np.ndarray, k: int, scale: float) -> np.ndarray:
    """Row order putting greedily chosen max-norm pivots of the first k columns on top."""
    n = data.shape[0]
    work = data[:, :k].copy()
    order = np.arange(n)
    for j in range(k):
        col = np.linalg.norm(work[j:, j], axis=-1)
        p = j + int(np.argmax(col))
        if col[p - j] <= PIVOT_TOL * scale:
            raise SingularMatrix("no invertible pivot block")
        if p != j:
            work[[j, p]] = work[[p, j]]
            order[[j, p]] = order[[p, j]]
        if j + 1 < k:
            f = qmul(work[j + 1:, j], qinv(work[j, j]))
            work[j + 1:, j:] -= qmul(f[:, None, :], work[j, j:][None, :, :])
    return order


def invert(m: QMatrix, _scale: float | None = None) -> QMatrix:
    """Recursive Schur-complement inverse with a ``floor(n/2)`` split.

    Rows are reordered first so that the leading block carries greedily
    chosen max-norm pivots; the reordering is undone on the columns of the
    result.
    """
    n = m.require_square()
    scale = m.max_norm() if _scale is None else _scale
    if scale == 0.0:
        raise SingularMatrix("zero matrix")
    if n == 1:
        q = m.data[0, 0]
        if np.linalg.norm(q) <= PIVOT_TOL * scale:
            raise SingularMatrix("zero pivot")
        return QMatrix(qinv(q)[None, None, :])
    k = n // 2
    order = _pivot_rows(m.data, k, scale)
    pm = QMatrix(m.data[order])
    a, b, c, d = block_split(pm, k)
    ainv = invert(a, scale)
    a_s = d - matmul(matmul(c, ainv), b)
    a_s_inv = invert(a_s, scale)
    inv_pm = _assemble_inverse(ainv, b, c, a_s_inv).data
    out = np.empty_like(inv_pm)
    out[:, order] = inv_pm
    return QMatrix(out)


def gauss_inverse(m: QMatrix) -> QMatrix:
    """Gauss-Jordan elimination with partial pivoting on ``[M | I]``."""
    n = m.require_square()
    scale = m.max_norm()
    if scale == 0.0:
        raise SingularMatrix("zero matrix")
    aug = np.concatenate([m.data, QMatrix.identity(n).data], axis=1)
    for k in range(n):
        col = np.linalg.norm(aug[k:, k], axis=-1)
        p = k + int(np.argmax(col))
        if col[p - k] <= PIVOT_TOL * scale:
            raise SingularMatrix("zero pivot column")
        if p != k:
            aug[[k, p]] = aug[[p, k]]
        aug[k] = qmul(qinv(aug[k, k]), aug[k])
        others = np.arange(n) != k
        f = aug[others, k].copy()
        aug[others] -= qmul(f[:, None, :], aug[k][None, :, :])
    return QMatrix(aug[:, n:])


# --- 2x2 ------------------------------------------------------------------

def _require_2x2(m: QMatrix) -> None:
    if m.shape != (2, 2):
        raise DimensionMismatch(f"expected a 2x2 matrix, got {m.rows}x{m.cols}")


def _entries(m: QMatrix):
    return m[0, 0], m[0, 1], m[1, 0], m[1, 1]


def _zero_flags(m: QMatrix) -> np.ndarray:
    norms = m.entry_norms()
    return norms <= ZERO_ENTRY_TOL * m.max_norm()


def _tilde(m: QMatrix, zero: np.ndarray) -> tuple[Quaternion, ...]:
    """Entries of the inverse; a zero entry sends the opposite slot to zero.

    The opposite-slot rule is the limit of the full formula as the entry
    tends to zero (e.g. ``a -> 0`` forces ``d~ -> 0``).
    """
    a, b, c, d = _entries(m)
    za, zb, zc, zd = zero[0, 0], zero[0, 1], zero[1, 0], zero[1, 1]
    nil = Quaternion()
    at = nil if zd else (a - b * d.inverse() * c).inverse()
    bt = nil if zb else (c - d * b.inverse() * a).inverse()
    ct = nil if zc else (b - a * c.inverse() * d).inverse()
    dt = nil if za else (d - c * a.inverse() * b).inverse()
    return at, bt, ct, dt


def _check_invertible(m: QMatrix) -> None:
    scale = m.max_norm()
    if scale == 0.0 or sdet_gauss(m) <= PIVOT_TOL * scale * scale:
        raise SingularMatrix("2x2 matrix is singular")


def inverse_2x2(m: QMatrix) -> QMatrix:
    """Entrywise inverse ``[[a~, b~], [c~, d~]]`` with

    ``a~ = (a - b d^-1 c)^-1``, ``b~ = (c - d b^-1 a)^-1``,
    ``c~ = (b - a c^-1 d)^-1``, ``d~ = (d - c a^-1 b)^-1``.

    Exactly zero entries use the limiting values; entries that are tiny but
    not negligible route through ``invert`` instead.
    """
    _require_2x2(m)
    _check_invertible(m)
    rel = m.entry_norms() / m.max_norm()
    if np.any((rel > ILL_BAND[0]) & (rel < ILL_BAND[1])):
        return invert(m)
    at, bt, ct, dt = _tilde(m, _zero_flags(m))
    return QMatrix.from_entries([[at, bt], [ct, dt]])


def inverse_2x2_hadamard(m: QMatrix) -> QMatrix:
    """``M^-1 = (1/sdet M) [[|d|, |b|], [|c|, |a|]] o [[a~/|a~|, ...]]``."""
    _require_2x2(m)
    zero = _zero_flags(m)
    if np.any(zero):
        raise ZeroEntry("the Hadamard form needs four nonzero entries")
    _check_invertible(m)
    a, b, c, d = _entries(m)
    tilde = _tilde(m, zero)
    weights = QMatrix.from_entries([[d.norm(), b.norm()], [c.norm(), a.norm()]])
    units = QMatrix.from_entries([[t * (1.0 / t.norm()) for t in tilde[:2]], [t * (1.0 / t.norm()) for t in tilde[2:]]])
    return hadamard(weights, units) * (1.0 / sdet_gauss(m))


def four_expressions(m: QMatrix) -> tuple[float, float, float, float]:
    """``|a||d - c a^-1 b|, |b||c - d b^-1 a|, |c||b - a c^-1 d|, |d||a - b d^-1 c|``.

    An expression whose leading entry is zero is replaced by its limit
    (``|b||c|`` for a or d, ``|a||d|`` for b or c).
    """
    _require_2x2(m)
    a, b, c, d = _entries(m)
    zero = _zero_flags(m)
    ea = b.norm() * c.norm() if zero[0, 0] else a.norm() * (d - c * a.inverse() * b).norm()
    eb = a.norm() * d.norm() if zero[0, 1] else b.norm() * (c - d * b.inverse() * a).norm()
    ec = a.norm() * d.norm() if zero[1, 0] else c.norm() * (b - a * c.inverse() * d).norm()
    ed = b.norm() * c.norm() if zero[1, 1] else d.norm() * (a - b * d.inverse() * c).norm()
    return ea, eb, ec, ed
