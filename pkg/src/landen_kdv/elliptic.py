"""Jacobi elliptic functions and the complete integral K, in double precision.

Convention
----------
Every ``m`` in this package is the modulus PARAMETER, m = k^2, where k is
the modulus.  Abramowitz & Stegun chapter 16/17 notation: sn(x|m), K(m).
Some references (and scipy's ``ellipj``) share this convention; others take
k itself, so a value near 1 is ambiguous in the literature.  Here, always m.

Evaluation uses the descending Landen ladder: the modulus is driven to zero
through k_{j+1} = k_j^2 / (1 + k'_j)^2, the argument is rescaled alongside,
the base of the ladder is seeded with circular functions, and one ascending
back-substitution per level recovers (sn, cn, dn) at the original modulus.
Arguments are first reduced modulo the real period 4K so accuracy does not
degrade for large |x|.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .errors import DomainError

# Ladder levels below this contribute less than one ulp to the ascent.
_LADDER_FLOOR = 1e-16


def _check_m(m: float) -> float:
    m = float(m)
    if not math.isfinite(m) or not 0.0 <= m <= 1.0:
        raise DomainError(f"modulus parameter must lie in [0, 1], got {m!r}")
    return m


def complete_K(m: float) -> float:
    """Complete elliptic integral of the first kind, K(m).

    Computed as pi / (2 * AGM(1, sqrt(1 - m))).  The AGM converges
    quadratically, so a handful of iterations reach machine precision.
    Domain: 0 <= m < 1 (K diverges logarithmically as m -> 1).
    """
    m = _check_m(m)
    if m == 1.0:
        raise DomainError("K(m) diverges at m = 1")
    a, b = 1.0, math.sqrt(1.0 - m)
    # capped: for some m the converged gap parks one ulp above the
    # threshold and a bare while-loop never exits
    for _ in range(32):
        if abs(a - b) <= 2e-16 * a:
            break
        a, b = 0.5 * (a + b), math.sqrt(a * b)
    return math.pi / (2.0 * a)


@lru_cache(maxsize=None)
def _modulus_ladder(m: float) -> tuple[tuple[float, ...], float]:
    """Descending sequence of moduli k_1, k_2, ... and the residual parameter.

    Iterates k_{j+1} = k_j^2 / (1 + k'_j)^2 starting from k_1 derived from
    m, stopping once the squared modulus drops below ``_LADDER_FLOOR``.
    Returns the moduli (top first) and the parameter left at the bottom.
    """
    ks: list[float] = []
    m_j = m
    while m_j > _LADDER_FLOOR:
        kp = math.sqrt(1.0 - m_j)
        k = m_j / (1.0 + kp) ** 2
        ks.append(k)
        m_j = k * k
    return tuple(ks), m_j


def jacobi_sn_cn_dn(x, m: float):
    """sn, cn and dn of x with modulus parameter m, elementwise.

    ``x`` may be a scalar or an ndarray; scalars come back as floats.
    Handles the degenerate ends exactly: m = 0 gives (sin, cos, 1) and
    m = 1 gives (tanh, sech, sech).
    """
    m = _check_m(m)
    x_arr = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(x_arr)):
        raise DomainError("argument must be finite")

    if m == 1.0:
        sech = 1.0 / np.cosh(x_arr)
        s, c, d = np.tanh(x_arr), sech, sech.copy()
    else:
        big_k = complete_K(m)
        # reduce mod the real period 4K; |z| <= 2K keeps the seed accurate
        z = x_arr - (4.0 * big_k) * np.round(x_arr / (4.0 * big_k))
        ks, m_bottom = _modulus_ladder(m)
        for k in ks:
            z = z / (1.0 + k)
        s = np.sin(z)
        c = np.cos(z)
        d = np.sqrt(1.0 - m_bottom * s * s)
        for k in reversed(ks):
            t = k * s * s
            denom = 1.0 + t
            s, c, d = (1.0 + k) * s / denom, c * d / denom, (1.0 - t) / denom

    if np.ndim(x) == 0:
        return float(s), float(c), float(d)
    return s, c, d


@dataclass(frozen=True)
class JacobiTriple:
    """Point values (sn, cn, dn) at one argument and modulus parameter."""

    x: float
    m: float
    sn: float
    cn: float
    dn: float


def jacobi(x: float, m: float) -> JacobiTriple:
    """Scalar convenience wrapper around :func:`jacobi_sn_cn_dn`."""
    s, c, d = jacobi_sn_cn_dn(float(x), m)
    return JacobiTriple(x=float(x), m=float(m), sn=s, cn=c, dn=d)


@dataclass(frozen=True)
class ModulusParameter:
    """A validated modulus parameter with its cached quarter period.

    K is computed once at construction; use this when the same m feeds many
    evaluations.  m = 1 is rejected here because K diverges there.
    """

    m: float
    K: float = field(init=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "K", complete_K(self.m))
