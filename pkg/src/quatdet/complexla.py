"""Complex dense kernels: general and hermitian eigenvalues, and LU.

All work on numpy complex arrays.  They are deliberately plain (no
balancing, single-shift QR) because problems here stay below ~100 rows.
"""
from __future__ import annotations

import math

import numpy as np

from .errors import DimensionMismatch, NoConvergence

EPS = np.finfo(float).eps
PROBES = 15


def _phase(z: complex) -> complex:
    """``z / |z|`` without forming ``1 / |z|``, which overflows for subnormal z."""
    r = abs(z)
    return complex(z.real / r, z.imag / r)


def hessenberg(a: np.ndarray) -> np.ndarray:
    """Upper Hessenberg matrix unitarily similar to ``a`` (Householder)."""
    h = np.array(a, dtype=complex, copy=True)
    n = h.shape[0]
    for k in range(n - 2):
        x = h[k + 1:, k]
        alpha = np.linalg.norm(x)
        if alpha == 0.0:
            continue
        phase = _phase(x[0]) if x[0] != 0 else 1.0
        v = x.copy()
        v[0] += phase * alpha
        v /= np.linalg.norm(v)
        h[k + 1:, k:] -= 2.0 * np.outer(v, v.conj() @ h[k + 1:, k:])
        h[:, k + 1:] -= 2.0 * np.outer(h[:, k + 1:] @ v, v.conj())
        h[k + 2:, k] = 0.0
    return h


def _eig2(a, b, c, d):
    mid = 0.5 * (a + d)
    disc = np.sqrt(0.25 * (a - d) ** 2 + b * c)
    big = mid + disc if abs(mid + disc) >= abs(mid - disc) else mid - disc
    if big == 0:
        return 0j, 0j
    return big, (a * d - b * c) / big


def _givens(a: complex, b: complex):
    """c real, s complex with [[c, s], [-conj(s), c]] @ (a, b) = (r, 0)."""
    if b == 0:
        return 1.0, 0j
    if a == 0:
        return 0.0, _phase(b).conjugate()
    rho = math.hypot(abs(a), abs(b))
    return abs(a) / rho, _phase(a) * (b.conjugate() / rho)


def complex_eigenvalues(z: np.ndarray, max_sweeps: int | None = None) -> np.ndarray:
    """All eigenvalues of a square complex matrix.

    Hessenberg reduction, then single-shift QR with a Wilkinson shift on the
    active window; converged 1x1 and 2x2 blocks are split off.  Raises
    NoConvergence after ``100 n`` sweeps in total.
    """
    z = np.asarray(z, dtype=complex)
    if z.ndim != 2 or z.shape[0] != z.shape[1]:
        raise DimensionMismatch("eigenvalues need a square matrix")
    n = z.shape[0]
    if n == 0:
        return np.zeros(0, dtype=complex)
    h = hessenberg(z)
    cap = 100 * n if max_sweeps is None else max_sweeps
    out: list[complex] = []
    hi = n - 1
    sweeps = 0
    its = 0
    hnorm = np.linalg.norm(h) or 1.0
    while hi >= 0:
        if hi == 0:
            out.append(h[0, 0])
            break
        lo = hi
        while lo > 0:
            tst = abs(h[lo - 1, lo - 1]) + abs(h[lo, lo])
            if tst == 0.0:
                tst = hnorm
            if abs(h[lo, lo - 1]) <= EPS * tst:
                h[lo, lo - 1] = 0.0
                break
            lo -= 1
        if lo == hi:
            out.append(h[hi, hi])
            hi -= 1
            its = 0
            continue
        if lo == hi - 1:
            out.extend(_eig2(h[lo, lo], h[lo, hi], h[hi, lo], h[hi, hi]))
            hi -= 2
            its = 0
            continue
        sweeps += 1
        its += 1
        if sweeps > cap:
            raise NoConvergence(f"QR iteration exceeded {cap} sweeps")
        if its % 11 == 10:
            # exceptional shift to break cycles
            mu = h[hi, hi] + 0.75 * abs(h[hi, hi - 1]) * (1 + 1j)
        else:
            e1, e2 = _eig2(h[hi - 1, hi - 1], h[hi - 1, hi], h[hi, hi - 1], h[hi, hi])
            mu = e1 if abs(e1 - h[hi, hi]) <= abs(e2 - h[hi, hi]) else e2
        _qr_sweep(h, lo, hi, mu)
    return np.array(out, dtype=complex)


def hermitian_eigenvalues(z: np.ndarray) -> np.ndarray:
    """Eigenvalues of a hermitian matrix, ascending.

    The Hessenberg form of a hermitian matrix is tridiagonal, and its
    spectrum depends only on the diagonal and the moduli of the
    off-diagonal.  Bisection on Sturm counts then brackets every eigenvalue
    at once, to absolute accuracy of a few ``eps ||z||``.
    """
    z = np.asarray(z, dtype=complex)
    if z.ndim != 2 or z.shape[0] != z.shape[1]:
        raise DimensionMismatch("eigenvalues need a square matrix")
    n = z.shape[0]
    if n == 0:
        return np.zeros(0)
    h = hessenberg(z)
    d = h.diagonal().real.copy()
    e2 = np.abs(h.diagonal(-1)) ** 2
    bound = float(np.max(np.abs(d) + np.r_[0.0, np.sqrt(e2)] + np.r_[np.sqrt(e2), 0.0]))
    if bound == 0.0:
        return np.zeros(n)
    pivmin = EPS * EPS * max(bound * bound, 1e-300)
    lo = np.full(n, -bound * (1 + 4 * EPS))
    hi = np.full(n, bound * (1 + 4 * EPS))
    rank = np.arange(n)[:, None]
    # multisection: PROBES interior points per bracket and pass
    frac = np.arange(1, PROBES + 1) / (PROBES + 1)
    atol = EPS * bound
    for _ in range(60):
        gap = hi - lo
        if np.all(gap <= 2 * EPS * np.maximum(np.abs(lo), np.abs(hi)) + atol):
            break
        pts = lo[:, None] + gap[:, None] * frac
        up = _sturm_count(d, e2, pts, pivmin) > rank
        first = np.argmax(up, axis=1)
        some = up[np.arange(n), first]
        new_hi = np.where(some, pts[np.arange(n), first], hi)
        new_lo = np.where(some, np.where(first > 0, pts[np.arange(n), first - 1], lo), pts[:, -1])
        lo, hi = new_lo, new_hi
    return 0.5 * (lo + hi)


def _sturm_count(d: np.ndarray, e2: np.ndarray, x: np.ndarray, pivmin: float) -> np.ndarray:
    """Number of eigenvalues below each entry of x (tridiagonal d, e^2)."""
    q = d[0] - x
    q = np.where(np.abs(q) < pivmin, -pivmin, q)
    count = (q < 0).astype(int)
    for i in range(1, d.shape[0]):
        q = d[i] - x - e2[i - 1] / q
        q = np.where(np.abs(q) < pivmin, -pivmin, q)
        count += q < 0
    return count


def _qr_sweep(h: np.ndarray, lo: int, hi: int, mu: complex) -> None:
    """One shifted QR step ``RQ + mu`` on the active window, in place."""
    w = h[lo:hi + 1, lo:hi + 1]
    m = w.shape[0]
    idx = np.arange(m)
    w[idx, idx] -= mu
    rots = []
    for k in range(m - 1):
        c, s = _givens(complex(w[k, k]), complex(w[k + 1, k]))
        g = np.array([[c, s], [-s.conjugate(), c]])
        w[k:k + 2, k:] = g @ w[k:k + 2, k:]
        w[k + 1, k] = 0.0
        rots.append(g.conj().T)
    for k, gh in enumerate(rots):
        top = min(k + 2, m - 1) + 1
        w[:top, k:k + 2] = w[:top, k:k + 2] @ gh
    w[idx, idx] += mu


def lu_factor(a: np.ndarray):
    """Partial-pivoting LU packed in one array; returns (lu, perm, sign)."""
    lu = np.array(a, dtype=complex, copy=True)
    n = lu.shape[0]
    if lu.ndim != 2 or lu.shape[1] != n:
        raise DimensionMismatch("LU needs a square matrix")
    perm = np.arange(n)
    sign = 1.0
    for k in range(n):
        p = k + int(np.argmax(np.abs(lu[k:, k])))
        if p != k:
            lu[[k, p]] = lu[[p, k]]
            perm[[k, p]] = perm[[p, k]]
            sign = -sign
        piv = lu[k, k]
        if piv == 0:
            continue
        lu[k + 1:, k] /= piv
        lu[k + 1:, k + 1:] -= np.outer(lu[k + 1:, k], lu[k, k + 1:])
    return lu, perm, sign


def lu_det(a: np.ndarray) -> complex:
    lu, _, sign = lu_factor(a)
    return complex(sign * np.prod(np.diag(lu)))


def lu_solve(lu: np.ndarray, perm: np.ndarray, b: np.ndarray) -> np.ndarray:
    n = lu.shape[0]
    x = np.array(b, dtype=complex)[perm]
    for i in range(1, n):
        x[i] -= lu[i, :i] @ x[:i]
    for i in range(n - 1, -1, -1):
        x[i] = (x[i] - lu[i, i + 1:] @ x[i + 1:]) / lu[i, i]
    return x


def null_vector(a: np.ndarray, iterations: int = 3, seed: int = 12345) -> np.ndarray:
    """Unit vector approximately in the kernel of a (nearly) singular matrix.

    Inverse iteration from a fixed pseudo-random start; exactly zero pivots
    are nudged to ``eps * ||a||`` so the solve stays finite.
    """
    n = a.shape[0]
    scale = np.linalg.norm(a) or 1.0
    lu, perm, _ = lu_factor(a)
    diag = np.diag(lu).copy()
    tiny = EPS * scale
    small = np.abs(diag) < tiny
    lu[np.arange(n)[small], np.arange(n)[small]] = tiny
    rng = np.random.default_rng(seed)
    v = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    v /= np.linalg.norm(v)
    for _ in range(iterations):
        v = lu_solve(lu, perm, v)
        nv = np.linalg.norm(v)
        if not np.isfinite(nv) or nv == 0.0:
            raise NoConvergence("inverse iteration broke down")
        v /= nv
    return v
