"""Right eigenvalues, quaternionic Schur form and SVD.

Everything goes through the complexification: if ``Z[M] (x; y) = (x; y) l``
then ``psi = x + j y`` satisfies ``M psi = psi l``.  The spectrum of ``Z[M]``
is the multiset ``{l_1, conj(l_1), ..., l_n, conj(l_n)}``; pairing it back up
gives one complex representative (imaginary part >= 0) per right eigenvalue.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .complexla import complex_eigenvalues, hermitian_eigenvalues, null_vector
from .errors import NotAnEigenvalue, PairingFailure
from .qmatrix import (
    QMatrix,
    adjoint,
    block_join,
    column_from_complex,
    complexify,
    householder,
    matmul,
)
from .quaternion import Quaternion, qconj, qmul

__all__ = [
    "Spectrum",
    "SchurForm",
    "SvdForm",
    "complex_eigenvalues",
    "right_eigenvalues",
    "right_eigenvector",
    "schur",
    "svd",
    "singular_values",
    "unitary_with_first_column",
]

PAIR_TOL = 1e-6


@dataclass(frozen=True)
class Spectrum:
    """n canonical right eigenvalues, sorted by real then imaginary part, descending."""

    values: tuple[complex, ...]
    pairing_residual: float = 0.0

    def __len__(self) -> int:
        return len(self.values)

    def __iter__(self):
        return iter(self.values)

    def __getitem__(self, i) -> complex:
        return self.values[i]

    def moduli(self) -> np.ndarray:
        return np.abs(np.array(self.values, dtype=complex))


@dataclass(frozen=True)
class SchurForm:
    """``M = U^+ T U`` with U unitary and T upper triangular."""

    U: QMatrix
    T: QMatrix


@dataclass(frozen=True)
class SvdForm:
    """``M = U Sigma V`` with U, V unitary and sigma non-increasing."""

    U: QMatrix
    sigma: tuple[float, ...]
    V: QMatrix

    def sigma_matrix(self) -> QMatrix:
        s = np.zeros((self.U.cols, self.V.rows, 4))
        for i, v in enumerate(self.sigma):
            s[i, i, 0] = v
        return QMatrix(s)

    def reconstruct(self) -> QMatrix:
        return matmul(matmul(self.U, self.sigma_matrix()), self.V)


def _canonical_sort(values):
    return sorted(values, key=lambda z: (-z.real, -z.imag))


def pair_conjugates(eigs: np.ndarray, scale: float, tol: float = PAIR_TOL) -> Spectrum:
    """Greedy pairing of ``l`` with the closest remaining ``conj(l)``."""
    rest = [complex(v) for v in eigs]
    if len(rest) % 2:
        raise PairingFailure("odd number of eigenvalues")
    reps = []
    worst = 0.0
    while rest:
        i = max(range(len(rest)), key=lambda t: rest[t].imag)
        lam = rest.pop(i)
        j = min(range(len(rest)), key=lambda t: abs(rest[t] - lam.conjugate()))
        mu = rest.pop(j)
        res = abs(mu - lam.conjugate())
        worst = max(worst, res)
        if res > tol * scale:
            raise PairingFailure(
                f"eigenvalue {lam} has no conjugate partner (closest miss {res:.3e})"
            )
        reps.append(complex(0.5 * (lam.real + mu.real), 0.5 * (abs(lam.imag) + abs(mu.imag))))
    return Spectrum(tuple(_canonical_sort(reps)), worst)


def right_eigenvalues(m: QMatrix, tol: float = PAIR_TOL) -> Spectrum:
    m.require_square()
    eigs = complex_eigenvalues(complexify(m))
    return pair_conjugates(eigs, max(m.fro(), 1e-300), tol)


def right_eigenvector(m: QMatrix, lam: complex, tol: float = 1e-6) -> QMatrix:
    """Unit column psi with ``M psi = psi lam``."""
    n = m.require_square()
    lam = complex(lam)
    z = complexify(m)
    v = null_vector(z - lam * np.eye(2 * n))
    psi = column_from_complex(v)
    psi = psi / psi.fro()
    res = (matmul(m, psi) - psi * Quaternion.from_complex(lam)).fro()
    if res > tol * max(m.fro(), abs(lam), 1e-300):
        raise NotAnEigenvalue(f"{lam} is not a right eigenvalue (residual {res:.3e})")
    return psi


def unitary_with_first_column(psi: QMatrix) -> QMatrix:
    """Unitary Q with ``Q e_1 = psi`` for a unit column psi.

    A reflector sends psi to ``e_1 theta`` where theta is the unit phase of
    psi's first entry; a diagonal phase then restores psi exactly.
    """
    n = psi.rows
    p1 = psi.data[0, 0]
    r1 = float(np.linalg.norm(p1))
    theta = p1 / r1 if r1 > 1e-150 else np.array([1.0, 0.0, 0.0, 0.0])
    v = psi.data.copy()
    v[0, 0] -= theta
    h = householder(QMatrix(v))
    phase = np.zeros((n, n, 4))
    phase[np.arange(n), np.arange(n), 0] = 1.0
    phase[0, 0] = theta
    return matmul(h, QMatrix(phase))


def schur(m: QMatrix) -> SchurForm:
    """Unitary triangularization by repeated eigenvector deflation.

    Each deflated block is similar to what is left of M, so its spectrum is
    the remainder of M's; it is recomputed only if a reused value fails.
    """
    n = m.require_square()
    t = m
    q_total = QMatrix.identity(n)
    lams = list(right_eigenvalues(m)) if n > 1 else []
    for k in range(n - 1):
        sub = QMatrix(t.data[k:, k:])
        try:
            psi = right_eigenvector(sub, lams[k], tol=1e-11)
        except NotAnEigenvalue:
            lams[k:] = list(right_eigenvalues(sub))
            psi = right_eigenvector(sub, lams[k])
        qk = unitary_with_first_column(psi)
        if k:
            qk = block_join(
                QMatrix.identity(k), QMatrix.zeros(k, n - k), QMatrix.zeros(n - k, k), qk
            )
        t = matmul(matmul(adjoint(qk), t), qk)
        q_total = matmul(q_total, qk)
    return SchurForm(adjoint(q_total), t)


def _dilation(m: QMatrix) -> QMatrix:
    r, c = m.shape
    return block_join(QMatrix.zeros(r, r), m, adjoint(m), QMatrix.zeros(c, c))


def singular_values(m: QMatrix) -> tuple[float, ...]:
    """min(rows, cols) singular values, non-increasing.

    Read from the eigenvalues ``+-sigma`` of the hermitian dilation
    ``[[0, M], [M^+, 0]]`` so small singular values keep absolute accuracy
    ``eps ||M||`` instead of ``sqrt(eps) ||M||``.
    """
    k = min(m.shape)
    # +-sigma each appear twice in the complexified dilation
    eigs = hermitian_eigenvalues(complexify(_dilation(m)))[::-1]
    return tuple(float(max(v, 0.0)) for v in eigs[:2 * k:2])


def _inner(u: np.ndarray, x: np.ndarray) -> np.ndarray:
    """``u^+ x`` for column vectors stored as (n, 4) arrays."""
    return np.sum(qmul(qconj(u), x), axis=0)


def _orthonormal_columns(vectors: list[np.ndarray], n: int) -> np.ndarray:
    """Gram-Schmidt (twice) over H, then completed to a basis of H^n."""
    basis: list[np.ndarray] = []
    candidates = list(vectors) + [np.eye(n)[:, i][:, None] * np.array([1.0, 0, 0, 0]) for i in range(n)]
    for x in candidates:
        if len(basis) == n:
            break
        y = x.copy()
        for _ in range(2):
            for u in basis:
                y = y - qmul(u, _inner(u, y))
        ny = np.linalg.norm(y)
        if ny > 1e-8 * max(np.linalg.norm(x), 1e-300):
            basis.append(y / ny)
    return np.stack(basis, axis=1)


def svd(m: QMatrix) -> SvdForm:
    """SVD through the Schur form of the hermitian dilation.

    Eigenvectors of ``[[0, M], [M^+, 0]]`` for ``+sigma`` have the shape
    ``(u; v) / sqrt(2)`` with ``M v = u sigma``.
    """
    r, c = m.shape
    k = min(r, c)
    form = schur(_dilation(m))
    q = adjoint(form.U).data
    diag = form.T.data[np.arange(r + c), np.arange(r + c), 0]
    sigma = np.abs(diag[:k])
    order = np.argsort(-sigma, kind="stable")
    sigma = sigma[order]
    thr = 1e-10 * (sigma[0] if k else 0.0)
    vs = []
    for idx in order:
        if abs(diag[idx]) <= thr or diag[idx] <= 0:
            break
        v = q[r:, idx]
        vs.append(v / np.linalg.norm(v))
    rank = len(vs)
    v_cols = _orthonormal_columns(vs, c)
    us = []
    mv = matmul(m, QMatrix(v_cols[:, :rank])).data if rank else None
    for i in range(rank):
        us.append(mv[:, i] / sigma[i])
    u_cols = _orthonormal_columns(us, r)
    return SvdForm(QMatrix(u_cols), tuple(float(s) for s in sigma), adjoint(QMatrix(v_cols)))
