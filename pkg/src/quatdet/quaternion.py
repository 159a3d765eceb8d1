"""Scalar quaternion arithmetic.

A quaternion ``a + b i + c j + d k`` is stored as four doubles.  The helpers
``qmul``/``qconj`` work on arrays whose trailing axis has length 4 and are
what the matrix code builds on.

Every quaternion is similar to exactly one complex number with nonnegative
imaginary part (``complex_representative``).  Note that no single fixed
``s`` conjugates every ``q`` onto its conjugate: ``s`` has to be chosen per
``q``, which is why similarity is tested through the invariants
``Re q`` and ``|Im q|`` rather than by searching for ``s``.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass

import numpy as np

from .errors import Degenerate


def qmul(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Hamilton product of broadcastable arrays with a trailing axis of 4."""
    a1, b1, c1, d1 = np.moveaxis(x, -1, 0)
    a2, b2, c2, d2 = np.moveaxis(y, -1, 0)
    return np.stack(
        [
            a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2,
            a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2,
            a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2,
            a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2,
        ],
        axis=-1,
    )


_CONJ = np.array([1.0, -1.0, -1.0, -1.0])


def qconj(x: np.ndarray) -> np.ndarray:
    return x * _CONJ


def qinv(x: np.ndarray) -> np.ndarray:
    """Elementwise inverse; zero entries produce inf/nan, callers check first."""
    n2 = np.sum(x * x, axis=-1, keepdims=True)
    return qconj(x) / n2


@dataclass(frozen=True, slots=True)
class Quaternion:
    a: float = 0.0
    b: float = 0.0
    c: float = 0.0
    d: float = 0.0

    @classmethod
    def from_array(cls, arr) -> Quaternion:
        a, b, c, d = (float(v) for v in arr)
        return cls(a, b, c, d)

    @classmethod
    def from_complex(cls, z: complex) -> Quaternion:
        z = complex(z)
        return cls(z.real, z.imag, 0.0, 0.0)

    @classmethod
    def coerce(cls, value) -> Quaternion:
        if isinstance(value, Quaternion):
            return value
        if isinstance(value, (int, float, np.floating, np.integer)):
            return cls(float(value))
        if isinstance(value, (complex, np.complexfloating)):
            return cls.from_complex(value)
        return cls.from_array(value)

    def to_array(self) -> np.ndarray:
        return np.array([self.a, self.b, self.c, self.d])

    @property
    def real(self) -> float:
        return self.a

    @property
    def imag(self) -> Quaternion:
        return Quaternion(0.0, self.b, self.c, self.d)

    def imag_norm(self) -> float:
        return math.sqrt(self.b * self.b + self.c * self.c + self.d * self.d)

    def is_complex(self, tol: float = 0.0) -> bool:
        return math.hypot(self.c, self.d) <= tol

    def to_complex(self) -> complex:
        return complex(self.a, self.b)

    def conj(self) -> Quaternion:
        return Quaternion(self.a, -self.b, -self.c, -self.d)

    def norm(self) -> float:
        return math.sqrt(self.a * self.a + self.b * self.b + self.c * self.c + self.d * self.d)

    def inverse(self) -> Quaternion:
        n2 = self.a * self.a + self.b * self.b + self.c * self.c + self.d * self.d
        if n2 == 0.0:
            raise ZeroDivisionError("quaternion inverse of zero")
        return Quaternion(self.a / n2, -self.b / n2, -self.c / n2, -self.d / n2)

    def __add__(self, other):
        o = _maybe(other)
        if o is None:
            return NotImplemented
        return Quaternion(self.a + o.a, self.b + o.b, self.c + o.c, self.d + o.d)

    __radd__ = __add__

    def __sub__(self, other):
        o = _maybe(other)
        if o is None:
            return NotImplemented
        return Quaternion(self.a - o.a, self.b - o.b, self.c - o.c, self.d - o.d)

    def __rsub__(self, other):
        o = _maybe(other)
        if o is None:
            return NotImplemented
        return o - self

    def __neg__(self) -> Quaternion:
        return Quaternion(-self.a, -self.b, -self.c, -self.d)

    def __mul__(self, other):
        o = _maybe(other)
        if o is None:
            return NotImplemented
        return _hamilton(self, o)

    def __rmul__(self, other):
        o = _maybe(other)
        if o is None:
            return NotImplemented
        return _hamilton(o, self)

    def __truediv__(self, other):
        # p / q means p * q^{-1}
        o = _maybe(other)
        if o is None:
            return NotImplemented
        return _hamilton(self, o.inverse())

    def __abs__(self) -> float:
        return self.norm()

    def __str__(self) -> str:
        return format_quaternion(self)

    def isclose(self, other, tol: float = 1e-12) -> bool:
        return (self - Quaternion.coerce(other)).norm() <= tol


def _maybe(value) -> Quaternion | None:
    try:
        return Quaternion.coerce(value)
    except (TypeError, ValueError):
        return None


def _hamilton(p: Quaternion, q: Quaternion) -> Quaternion:
    return Quaternion(
        p.a * q.a - p.b * q.b - p.c * q.c - p.d * q.d,
        p.a * q.b + p.b * q.a + p.c * q.d - p.d * q.c,
        p.a * q.c - p.b * q.d + p.c * q.a + p.d * q.b,
        p.a * q.d + p.b * q.c - p.c * q.b + p.d * q.a,
    )


ONE = Quaternion(1.0)
I = Quaternion(0.0, 1.0)
J = Quaternion(0.0, 0.0, 1.0)
K = Quaternion(0.0, 0.0, 0.0, 1.0)


def mul(p: Quaternion, q: Quaternion) -> Quaternion:
    return _hamilton(Quaternion.coerce(p), Quaternion.coerce(q))


def conj(q: Quaternion) -> Quaternion:
    return Quaternion.coerce(q).conj()


def norm(q: Quaternion) -> float:
    return Quaternion.coerce(q).norm()


def inverse(q: Quaternion) -> Quaternion:
    return Quaternion.coerce(q).inverse()


def similar(p: Quaternion, q: Quaternion, tol: float = 1e-12) -> bool:
    """True when p and q lie in the same similarity class s^{-1} p s."""
    p, q = Quaternion.coerce(p), Quaternion.coerce(q)
    return abs(p.a - q.a) <= tol and abs(p.imag_norm() - q.imag_norm()) <= tol


def complex_representative(q: Quaternion) -> complex:
    """The complex number ``Re q + i |Im q|`` similar to q."""
    q = Quaternion.coerce(q)
    return complex(q.a, q.imag_norm())


# --- quadratic -----------------------------------------------------------

def _complexify_2x2(m: np.ndarray) -> np.ndarray:
    # m has shape (2, 2, 4); same block layout as QMatrix.complexify
    z1 = m[..., 0] + 1j * m[..., 1]
    z2 = m[..., 2] - 1j * m[..., 3]
    return np.block([[z1, -z2.conj()], [z2, z1.conj()]])


def _left_mul_matrix(q: np.ndarray) -> np.ndarray:
    """Real 4x4 matrix L with L @ h == q*h (as 4-vectors)."""
    a, b, c, d = q
    return np.array([[a, -b, -c, -d], [b, a, -d, c], [c, d, a, -b], [d, -c, b, a]])


def _right_mul_matrix(q: np.ndarray) -> np.ndarray:
    """Real 4x4 matrix R with R @ h == h*q."""
    a, b, c, d = q
    return np.array([[a, -b, -c, -d], [b, a, d, -c], [c, -d, a, b], [d, c, -b, a]])


def _quadratic_residual(alpha, b, e, c):
    return qmul(qmul(alpha, alpha), b) + qmul(alpha, e) - c


def _polish(alpha, p, r, steps=3):
    """Newton steps for f(x) = x^2 + x p - r, a map on R^4."""
    best = alpha
    best_res = np.linalg.norm(qmul(best, best) + qmul(best, p) - r)
    x = alpha
    for _ in range(steps):
        f = qmul(x, x) + qmul(x, p) - r
        # Df(h) = h x + x h + h p
        jac = _right_mul_matrix(x) + _left_mul_matrix(x) + _right_mul_matrix(p)
        try:
            h = np.linalg.solve(jac, -f)
        except np.linalg.LinAlgError:
            break
        x = x + h
        res = np.linalg.norm(qmul(x, x) + qmul(x, p) - r)
        if res < best_res:
            best, best_res = x, res
    return best


def _rank_key(alpha: np.ndarray):
    z = complex_representative(Quaternion.from_array(alpha))
    return (round(z.imag, 12), -z.real)


def solve_quadratic(b, e, c, tol: float = 1e-10) -> Quaternion:
    """Solve ``x^2 b + x e - c = 0`` for a quaternion x.

    Right-multiplying by ``b^{-1}`` gives ``x^2 + x p = r``.  Conjugating
    turns this into the left-coefficient equation ``y^2 + conj(p) y - conj(r) = 0``
    for ``y = conj(x)``, whose roots are right eigenvalues of the companion
    matrix ``[[0, 1], [conj(r), -conj(p)]]`` with eigenvectors ``(1, y)``.
    Roots are read off the eigenvectors of that matrix's complexification and
    refined by Newton's method.  When p and r are real, every root is similar
    to a complex one and the complex root is returned directly.

    Among several roots the one with the smallest nonnegative imaginary part
    in its complex representative wins, ties going to the larger real part.
    """
    b, e, c = (Quaternion.coerce(v) for v in (b, e, c))
    scale = max(b.norm(), e.norm(), c.norm())
    if b.norm() <= 1e-300 or b.norm() <= 1e-14 * scale:
        raise Degenerate("leading coefficient b vanishes; permute the problem first")
    binv = b.inverse()
    p = e * binv
    r = c * binv

    pr_scale = max(p.norm(), r.norm(), 1.0)
    if p.imag_norm() <= 1e-14 * pr_scale and r.imag_norm() <= 1e-14 * pr_scale:
        disc = p.a * p.a + 4.0 * r.a
        if disc >= 0.0:
            root = Quaternion((-p.a + math.sqrt(disc)) / 2.0)
        else:
            root = Quaternion(-p.a / 2.0, math.sqrt(-disc) / 2.0)
        return root

    pa, ra = p.to_array(), r.to_array()
    companion = np.zeros((2, 2, 4))
    companion[0, 1, 0] = 1.0
    companion[1, 0] = qconj(ra)
    companion[1, 1] = -qconj(pa)
    _, vecs = np.linalg.eig(_complexify_2x2(companion))
    candidates = []
    for k in range(4):
        x, y = vecs[:2, k], vecs[2:, k]
        psi = np.stack([x.real, x.imag, y.real, -y.imag], axis=-1)
        if np.linalg.norm(psi[0]) < 1e-8 * np.linalg.norm(psi):
            continue
        root_y = qmul(psi[1], qinv(psi[0]))
        alpha = _polish(qconj(root_y), pa, ra)
        res = np.linalg.norm(_quadratic_residual(alpha, b.to_array(), e.to_array(), c.to_array()))
        candidates.append((res, alpha))
    bound = tol * scale
    good = [
        alpha for res, alpha in candidates
        if res <= bound * (1.0 + float(np.dot(alpha, alpha)))
    ]
    if not good:
        # fall back to the best residual; Niven guarantees a root exists
        good = [min(candidates, key=lambda t: t[0])[1]]
    return Quaternion.from_array(min(good, key=_rank_key))


# --- text form -----------------------------------------------------------

def format_real(x: float) -> str:
    """17 significant digits; integral values keep a trailing '.0'."""
    s = format(float(x) + 0.0, ".17g")  # + 0.0 turns -0.0 into 0.0
    if s.lstrip("-").isdigit():
        s += ".0"
    return s


def format_quaternion(q: Quaternion) -> str:
    q = Quaternion.coerce(q)
    out = format_real(q.a)
    for value, unit in ((q.b, "i"), (q.c, "j"), (q.d, "k")):
        s = format_real(value)
        if not s.startswith("-"):
            s = "+" + s
        out += s + unit
    return out


_NUM = r"(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?|inf|nan"
_TERM = re.compile(rf"([+-]?)\s*({_NUM})?\s*\*?\s*([ijk]?)")


def parse_quaternion(text: str) -> Quaternion:
    """Parse ``a+bi+cj+dk``; terms may be omitted or reordered."""
    s = text.strip().replace(" ", "")
    if not s:
        raise ValueError("empty quaternion literal")
    comps = {"": 0.0, "i": 0.0, "j": 0.0, "k": 0.0}
    pos = 0
    while pos < len(s):
        m = _TERM.match(s, pos)
        if (
            m is None
            or m.end() == pos
            or (m.group(2) is None and not m.group(3))
            or (pos > 0 and not m.group(1))
        ):
            raise ValueError(f"bad quaternion literal {text!r} at offset {pos}")
        sign, num, unit = m.groups()
        value = float(num) if num is not None else 1.0
        if sign == "-":
            value = -value
        comps[unit] += value
        pos = m.end()
    return Quaternion(comps[""], comps["i"], comps["j"], comps["k"])
