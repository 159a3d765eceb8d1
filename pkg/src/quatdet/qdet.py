"""The Study determinant and its relatives.

``sdet`` is the nonnegative multiplicative functional with
``sdet(q I_n) = |q|**n``.  Five routes compute it:

* ``gauss``       product of pivot norms under partial pivoting
* ``complexify``  ``sqrt(det Z[M])`` via complex LU
* ``eigen``       product of right-eigenvalue moduli
* ``svd``         product of singular values
* ``schur``       recursive scalar Schur complements ``|a| sdet(D - C a^-1 B)``

``qdet = sdet**2`` (the determinant of the complexification) and
``ddet = sdet**0.5``.  For hermitian H there is also the signed real
determinant, the product of its (real) eigenvalues.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .complexla import hermitian_eigenvalues as hermitian_kernel, lu_det
from .errors import (
    CriteriaDisagreement,
    DimensionMismatch,
    NonRealDeterminant,
    NotHermitian,
    StrategyDisagreement,
)
from .qmatrix import QMatrix, adjoint, complexify, is_hermitian, matmul
from .quaternion import Quaternion, qconj, qinv, qmul
from .spectral import right_eigenvalues, singular_values

PIVOT_TOL = 1e-12
AGREEMENT_TOL = 1e-6
ZERO_TOL = 1e-9


def sdet_gauss(m: QMatrix) -> float:
    """Gaussian elimination with partial pivoting by entry norm.

    Row swaps and shears ``I + q E_ij`` leave sdet unchanged, so the result is
    the product of the pivot norms.  A pivot column whose largest entry is
    below ``1e-12 * max|M_ij|`` makes the matrix singular.
    """
    n = m.require_square()
    scale = m.max_norm()
    if scale == 0.0:
        return 0.0
    a = m.data.copy()
    result = 1.0
    for k in range(n):
        col = np.linalg.norm(a[k:, k], axis=-1)
        p = k + int(np.argmax(col))
        if col[p - k] <= PIVOT_TOL * scale:
            return 0.0
        if p != k:
            a[[k, p]] = a[[p, k]]
        piv = a[k, k]
        result *= float(np.linalg.norm(piv))
        if k + 1 < n:
            factors = qmul(a[k + 1:, k], qinv(piv))
            a[k + 1:, k:] -= qmul(factors[:, None, :], a[k, k:][None, :, :])
    return result


def sdet_schur_complement(m: QMatrix) -> float:
    """``|a| * sdet(D - C a^-1 B)`` with the largest-norm entry as pivot ``a``.

    The pivot is moved to the corner by a row and a column swap, both of
    which are sdet-neutral; the recursion is unrolled into a loop.
    """
    n = m.require_square()
    scale = m.max_norm()
    if scale == 0.0:
        return 0.0
    block = m.data.copy()
    result = 1.0
    while True:
        norms = np.linalg.norm(block, axis=-1)
        i, j = np.unravel_index(int(np.argmax(norms)), norms.shape)
        if norms[i, j] <= PIVOT_TOL * scale:
            return 0.0
        result *= float(norms[i, j])
        if block.shape[0] == 1:
            return result
        block[[0, i]] = block[[i, 0]]
        block[:, [0, j]] = block[:, [j, 0]]
        ainv = qinv(block[0, 0])
        c = block[1:, :1]
        b = block[:1, 1:]
        block = block[1:, 1:] - qmul(qmul(c, ainv), b)


def _hadamard_bound(z: np.ndarray) -> float:
    return float(np.prod(np.linalg.norm(z, axis=1)))


def sdet_complexify(m: QMatrix) -> float:
    """``sqrt(det Z[M])``; the complex determinant must come out real and >= 0."""
    m.require_square()
    z = complexify(m)
    det = lu_det(z)
    slack = 1e-8 * abs(det) + 1e-12 * _hadamard_bound(z)
    if abs(det.imag) > slack or det.real < -slack:
        raise NonRealDeterminant(f"det Z[M] = {det} is not a nonnegative real")
    return math.sqrt(det.real) if det.real > 0.0 else 0.0


def sdet_eigen(m: QMatrix) -> float:
    return float(np.prod(right_eigenvalues(m).moduli()))


def sdet_svd(m: QMatrix) -> float:
    m.require_square()
    return float(np.prod(singular_values(m)))


STRATEGIES = {
    "gauss": sdet_gauss,
    "eigen": sdet_eigen,
    "svd": sdet_svd,
    "complexify": sdet_complexify,
    "schur": sdet_schur_complement,
}


def sdet(m: QMatrix, strategy: str = "gauss") -> float:
    try:
        fn = STRATEGIES[strategy]
    except KeyError:
        raise ValueError(f"unknown strategy {strategy!r}; choose from {sorted(STRATEGIES)}") from None
    return fn(m)


def qdet(m: QMatrix, strategy: str = "gauss") -> float:
    return sdet(m, strategy) ** 2


def ddet(m: QMatrix, strategy: str = "gauss") -> float:
    return math.sqrt(sdet(m, strategy))


@dataclass(frozen=True)
class DetReport:
    sdet_gauss: float
    sdet_eigen: float
    sdet_svd: float
    sdet_complexify: float
    sdet_schur: float
    max_rel_spread: float
    singular: bool
    scale: float = 1.0

    @property
    def values(self) -> dict[str, float]:
        return {
            "gauss": self.sdet_gauss,
            "eigen": self.sdet_eigen,
            "svd": self.sdet_svd,
            "complexify": self.sdet_complexify,
            "schur": self.sdet_schur,
        }

    @property
    def sdet(self) -> float:
        return self.sdet_gauss

    @property
    def qdet(self) -> float:
        return self.sdet_gauss**2

    @property
    def ddet(self) -> float:
        return math.sqrt(self.sdet_gauss)


def det_report(m: QMatrix, tol: float = AGREEMENT_TOL, check: bool = True) -> DetReport:
    """Run all five strategies and measure how far apart they land.

    A matrix counts as singular when every value is at most
    ``1e-9 * scale**n`` (scale = largest entry norm); the spread is then
    measured in units of ``scale**n`` rather than relative to the values.
    """
    n = m.require_square()
    vals = {name: fn(m) for name, fn in STRATEGIES.items()}
    scale = m.max_norm()
    unit = scale**n
    hi, lo = max(vals.values()), min(vals.values())
    singular = hi <= ZERO_TOL * unit
    if singular:
        spread = (hi - lo) / unit if unit > 0 else 0.0
    else:
        spread = (hi - lo) / hi
    report = DetReport(
        sdet_gauss=vals["gauss"],
        sdet_eigen=vals["eigen"],
        sdet_svd=vals["svd"],
        sdet_complexify=vals["complexify"],
        sdet_schur=vals["schur"],
        max_rel_spread=spread,
        singular=singular,
        scale=scale,
    )
    if check and spread > tol:
        raise StrategyDisagreement(f"strategies disagree: relative spread {spread:.3e} > {tol:.1e}", report)
    return report


# --- hermitian matrices ---------------------------------------------------

def _require_hermitian(h: QMatrix, tol: float) -> int:
    n = h.require_square()
    if not is_hermitian(h, tol):
        raise NotHermitian("matrix is not hermitian")
    return n


def hermitian_eigenvalues(h: QMatrix, tol: float = 1e-10) -> np.ndarray:
    """Real eigenvalues, ascending; each one of Z[H] appears twice."""
    _require_hermitian(h, tol)
    return hermitian_kernel(complexify(h))[::2]


def hermitian_det(h: QMatrix, tol: float = 1e-10) -> float:
    """Signed product of the real eigenvalues of a hermitian matrix."""
    return float(np.prod(hermitian_eigenvalues(h, tol)))


def _real_form(h: QMatrix) -> np.ndarray:
    """Real 4n x 4n matrix R of ``x -> H x`` on H^n = R^4n.

    ``Re(x^+ H x)`` is then the ordinary dot product ``x . (R x)``.
    """
    n = h.rows
    basis = np.eye(4 * n).reshape(4 * n, n, 4).transpose(1, 0, 2)
    images = matmul(h, QMatrix(basis)).data
    return images.transpose(0, 2, 1).reshape(4 * n, 4 * n)


def _quadratic_form_positive(h: QMatrix, samples: int, iterations: int, seed: int) -> bool:
    """Search for a direction with ``x^+ H x <= 0``.

    Random unit vectors are pushed toward the bottom of the spectrum by
    power iteration on ``A = c I - H`` (c above a Gershgorin bound, so A is
    positive definite).  For such A the Rayleigh quotient along ``A^k x``
    never decreases, so the form along the iterates never increases and it
    is enough to look at ``A^(2^t - 1) x``, reached by repeated squaring.
    """
    r = _real_form(h)
    dim = r.shape[0]
    rng = np.random.default_rng(seed)
    x0 = rng.standard_normal((dim, samples))
    shift = 1.5 * float(np.max(np.sum(h.entry_norms(), axis=1))) + 1e-300
    power = np.eye(dim)
    step = shift * np.eye(dim) - r
    step /= np.linalg.norm(step)
    for _ in range(max(1, math.ceil(math.log2(max(iterations, 2)))) + 1):
        x = power @ x0
        x /= np.linalg.norm(x, axis=0)
        if np.min(np.sum(x * (r @ x), axis=0)) <= 0.0:
            return False
        power = power @ step
        power /= np.linalg.norm(power)
        step = step @ step
        step /= np.linalg.norm(step)
    return True


def is_positive_definite(
    h: QMatrix, tol: float = 1e-10, samples: int = 32, iterations: int = 2**20, seed: int = 0
) -> bool:
    """Positive definiteness by three independent criteria, which must agree.

    1. the quadratic form ``x^+ H x`` stays positive on sampled directions
    2. every eigenvalue is positive
    3. every leading principal minor has positive real determinant
    """
    n = _require_hermitian(h, tol)
    by_form = _quadratic_form_positive(h, samples, iterations, seed)
    by_eigs = bool(np.all(hermitian_eigenvalues(h, tol) > 0.0))
    by_minors = all(hermitian_det(QMatrix(h.data[:k, :k]), tol) > 0.0 for k in range(1, n + 1))
    if not by_form == by_eigs == by_minors:
        raise CriteriaDisagreement(
            f"quadratic form says {by_form}, eigenvalues say {by_eigs}, minors say {by_minors}"
        )
    return by_eigs


def double_det_squared(m: QMatrix) -> float:
    """``|M^+ M|_r``, defined for rectangular M."""
    g = matmul(adjoint(m), m)
    return hermitian_det(g)


def double_det(m: QMatrix) -> float:
    """``sqrt(|M^+ M|_r)``; agrees with sdet on square matrices."""
    value = double_det_squared(m)
    return math.sqrt(value) if value > 0.0 else 0.0


# --- what does not work ---------------------------------------------------

def _require_2x2(m: QMatrix) -> None:
    if m.shape != (2, 2):
        raise DimensionMismatch(f"expected a 2x2 matrix, got {m.rows}x{m.cols}")


def wrong2_expressions(m: QMatrix) -> tuple[Quaternion, Quaternion, Quaternion, Quaternion]:
    """The naive 2x2 candidates ``ad-cb, ad-bc, da-cb, da-bc``."""
    _require_2x2(m)
    a, b, c, d = m[0, 0], m[0, 1], m[1, 0], m[1, 1]
    return (a * d - c * b, a * d - b * c, d * a - c * b, d * a - b * c)


@dataclass(frozen=True)
class ExtensionCounterexample:
    M: QMatrix
    N: QMatrix
    S: QMatrix
    residual: QMatrix
    det_m: complex
    det_n: complex

    @property
    def intertwined(self) -> bool:
        return not np.any(self.residual.data)

    @property
    def real_parts_differ(self) -> bool:
        return self.det_m.real != self.det_n.real

    @property
    def holds(self) -> bool:
        return self.intertwined and self.real_parts_differ


def extension_counterexample() -> ExtensionCounterexample:
    """Complex diagonal M, N with ``S M = N S`` but ``Re det M != Re det N``.

    Any H-valued multiplicative F agreeing with det on complex diagonal
    matrices would make F[M] and F[N] similar, hence of equal real part.
    """
    m = QMatrix.diag([1 + 1j, 1j])
    n = QMatrix.diag([1 + 1j, -1j])
    s = QMatrix.diag([1, Quaternion(0, 0, 1, 0)])
    residual = matmul(s, m) - matmul(n, s)
    det_m = lu_det(m.complex_parts()[0])
    det_n = lu_det(n.complex_parts()[0])
    return ExtensionCounterexample(m, n, s, residual, det_m, det_n)


def naive_det_witnesses() -> tuple[QMatrix, QMatrix]:
    """Two unitary 2x2 matrices on which the naive expressions vanish.

    ``A = [[1, i], [j, k]] / sqrt 2`` kills two of the four candidates and
    ``B = [[i, j], [j, i]] / sqrt 2`` kills all four, although both have
    sdet 1.
    """
    i, j, k = Quaternion(0, 1), Quaternion(0, 0, 1), Quaternion(0, 0, 0, 1)
    s = 1.0 / math.sqrt(2.0)
    a = QMatrix.from_entries([[1, i], [j, k]]) * s
    b = QMatrix.from_entries([[i, j], [j, i]]) * s
    return a, b
