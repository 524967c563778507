"""Generalized p-term Landen maps for dn and the derived wave constants.

A p-term map relates a sum of p equally shifted dn functions at modulus
parameter m to a single dn at a smaller parameter m_tilde:

    dn(x, m_tilde) = gamma * sum_i dn(gamma*x + 2*(i-1)*K(m)/p, m)

with gamma the reciprocal of the shifted-dn sum at x = 0.  Squaring the
identity brings in the cyclic constants a_p(r): sums of products of dn
values a fixed shift apart, which are independent of x.  Everything here
is pure and cached per (p, m).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .elliptic import complete_K, jacobi_sn_cn_dn
from .errors import ConsistencyError, DomainError
from .fourier import fit_traveling_velocity

# Constancy probes for a_p(r): scattered points chosen off the K/p shift
# lattice, where a symmetry could mask genuine x-dependence.
_PROBES = np.asarray([0.1 + 0.25 * j for j in range(8)])
_CONSTANCY_TOL = 1e-9

# Dual determinations of A(p, m) must agree this closely.
_A_AGREEMENT_TOL = 1e-8

# Grid for the residual-fit determination of A(p, m).
_FIT_POINTS = 512

# Oscillation-to-mean ratio below which the residual fit is unconditioned:
# the superposed field is nearly constant and every speed nearly zeroes its
# residual.  The fit error scales like roundoff / oscillation, so the floor
# must keep that quotient well under _A_AGREEMENT_TOL; 1e-7 was too low
# (gap 1.2e-8 at p = 5, m = 0.266).
_FIT_FLOOR = 1e-5


@dataclass(frozen=True)
class LandenMap:
    """The (p, m) Landen data: scale, target modulus, shifts and constants.

    ``a`` holds the cyclic constants a_p(r) for r = 1..p-1 (empty for
    p = 1): the r = p pairing would be sum_i dn^2, which depends on x and
    so is not a constant of the identity.  ``A`` is the velocity offset
    entering b_p = 8 - 4m - 6*beta + 12*A.
    """

    p: int
    m: float
    gamma: float
    m_tilde: float
    shifts: tuple[float, ...]
    a: tuple[float, ...]
    A: float

    @property
    def cyclic_sum(self) -> float:
        """Sum of the cyclic constants, the S appearing in beta_tilde."""
        return math.fsum(self.a)


@dataclass(frozen=True)
class TransformedParams:
    """Single-cnoidal parameters equivalent to a p-term superposition."""

    alpha_tilde: float
    c_tilde: float
    beta_tilde: float
    m_tilde: float


def _check_pm(p: int, m: float) -> tuple[int, float]:
    if not isinstance(p, (int, np.integer)) or isinstance(p, bool) or p < 1:
        raise DomainError(f"p must be an integer >= 1, got {p!r}")
    m = float(m)
    if not math.isfinite(m) or not 0.0 < m < 1.0:
        raise DomainError(f"modulus parameter must lie in (0, 1), got {m!r}")
    return int(p), m


def _cyclic_constants(p: int, m: float, shifts: tuple[float, ...]) -> tuple[float, ...]:
    """a_p(r) = sum_i dn(u + shifts[i]) * dn(u + shifts[i+r mod p]), r=1..p-1.

    Each sum is evaluated at eight scattered u values; any drift beyond
    tolerance means the convention is wrong for this (p, m) and is an error,
    not a warning.
    """
    if p == 1:
        return ()
    # d[i, j] = dn(probe_j + shifts[i], m)
    d = np.stack([jacobi_sn_cn_dn(_PROBES + s, m)[2] for s in shifts])
    out = []
    for r in range(1, p):
        sums = np.sum(d * np.roll(d, -r, axis=0), axis=0)
        if np.std(sums) > _CONSTANCY_TOL:
            raise ConsistencyError(
                f"a_{p}({r}) varies with x at m={m}: std {np.std(sums):.3e}"
            )
        out.append(float(np.mean(sums)))
    return tuple(out)


def _residual_fit_A(p: int, m: float, shifts: tuple[float, ...]) -> float | None:
    """A(p, m) from the speed that makes the superposed wave a KdV solution.

    Sample u = -2 sum_i dn^2(x + shifts[i], m) (alpha = 1, beta = 0, t = 0)
    over one spatial period, fit the traveling speed V in the least-squares
    sense, and invert b_p = 8 - 4m + 12A.  Independent of the closed-form
    route: the speed comes out of spectral derivatives of the field, not
    out of the Landen constants.

    Returns None when the field is constant to within the fit's working
    precision (large p with small m: the surviving harmonics sit below the
    double-precision noise floor).  There every speed zeroes the residual,
    so the cross-check holds vacuously and pins down no value.
    """
    length = 2.0 * complete_K(m) / p
    x = length * np.arange(_FIT_POINTS) / _FIT_POINTS
    u = np.zeros(_FIT_POINTS)
    for s in shifts:
        u -= 2.0 * jacobi_sn_cn_dn(x + s, m)[2] ** 2
    mean = float(np.mean(u))
    oscillation = float(np.max(np.abs(u - mean)))
    if oscillation <= _FIT_FLOOR * max(1.0, abs(mean)):
        return None
    v_fit = fit_traveling_velocity(u, length)
    return (v_fit - (8.0 - 4.0 * m)) / 12.0


@lru_cache(maxsize=None)
def landen_map(p: int, m: float) -> LandenMap:
    """Build the full Landen data for (p, m), with internal cross-checks.

    The velocity constant A is computed from the closed consistency
    relation  12A = (8 - 4*m_tilde)/gamma^2 - (8 - 4m) - 12*sum_r a_p(r)
    (the beta terms cancel identically when the transformed offset
    beta_tilde = beta*gamma^2 + 2*gamma^2*sum_r a_p(r) is substituted into
    the single-cnoidal speed) and checked against the residual-fit
    determination; disagreement raises rather than returning a guess.
    """
    p, m = _check_pm(p, m)
    if p == 1:
        # identity map; assign exactly rather than route m through
        # (m - 2) + 2, which loses the last bit
        gamma, m_tilde = 1.0, m
        shifts: tuple[float, ...] = (0.0,)
    else:
        big_k = complete_K(m)
        shifts = tuple(2.0 * i * big_k / p for i in range(p))
        d0 = jacobi_sn_cn_dn(np.asarray(shifts), m)[2]
        gamma = 1.0 / math.fsum(d0)
        m_tilde = (m - 2.0) * gamma**2 + 2.0 * gamma**3 * math.fsum(d0**3)
        # the two terms cancel to ~2 gamma^2 ulps; once the true m~ drops
        # under that, the float result can come out negative
        m_tilde = max(m_tilde, 0.0)
    a = _cyclic_constants(p, m, shifts)

    a_closed = ((8.0 - 4.0 * m_tilde) / gamma**2 - (8.0 - 4.0 * m)) / 12.0 - math.fsum(a)
    a_fit = _residual_fit_A(p, m, shifts)
    if a_fit is not None and abs(a_closed - a_fit) > _A_AGREEMENT_TOL:
        raise ConsistencyError(
            f"A({p}, {m}) determinations disagree: consistency relation "
            f"{a_closed!r} vs residual fit {a_fit!r}"
        )

    return LandenMap(p=p, m=m, gamma=gamma, m_tilde=m_tilde, shifts=shifts, a=a, A=a_closed)


def A_constant(p: int, m: float) -> float:
    """Velocity offset A(p, m) in b_p = 8 - 4m - 6*beta + 12*A(p, m).

    A(1, m) = 0 for every m: the single cnoidal speed is 8 - 4m - 6*beta
    with no correction.  For p >= 2 the value comes from the cross-checked
    construction in :func:`landen_map`.
    """
    return landen_map(p, m).A


def dual_oracle_gap(p: int, m: float) -> float:
    """Disagreement between the two A(p, m) determinations, recomputed.

    landen_map already enforces agreement at construction; this re-runs
    the residual fit so callers can report the gap as a metric.  Returns
    0.0 when the fit is unconditioned (see _residual_fit_A): every speed
    zeroes the residual there, so the determinations agree vacuously.
    """
    lmap = landen_map(p, m)
    fit = _residual_fit_A(p, m, lmap.shifts)
    if fit is None:
        return 0.0
    return abs(lmap.A - fit)


def dn_landen_rhs(x, lmap: LandenMap):
    """Right side of the dn identity: gamma * sum_i dn(gamma*x + shifts[i], m).

    Equals dn(x, m_tilde) for all real x.  Scalar in, float out; array in,
    array out.
    """
    x_arr = np.asarray(x, dtype=float)
    total = np.zeros_like(x_arr)
    for s in lmap.shifts:
        total += jacobi_sn_cn_dn(lmap.gamma * x_arr + s, lmap.m)[2]
    total *= lmap.gamma
    if np.ndim(x) == 0:
        return float(total)
    return total


def dn2_landen_rhs(x, lmap: LandenMap):
    """Squared-identity right side: gamma^2 * (sum_i dn^2 + sum_r a_p(r)).

    Equals dn^2(x, m_tilde).  The cross terms of squaring the dn identity
    collapse into the x-independent cyclic constants.
    """
    x_arr = np.asarray(x, dtype=float)
    total = np.full_like(x_arr, math.fsum(lmap.a))
    for s in lmap.shifts:
        total += jacobi_sn_cn_dn(lmap.gamma * x_arr + s, lmap.m)[2] ** 2
    total *= lmap.gamma**2
    if np.ndim(x) == 0:
        return float(total)
    return total


def transform_params(alpha: float, beta: float, lmap: LandenMap) -> TransformedParams:
    """Parameters of the single cnoidal wave equal to the (alpha, beta) superposition.

        alpha_tilde = alpha / gamma
        c_tilde     = b_p * alpha^2        (b_p = 8 - 4m - 6*beta + 12*A)
        beta_tilde  = beta*gamma^2 + 2*gamma^2 * sum_r a_p(r)
    """
    alpha = float(alpha)
    if not math.isfinite(alpha) or alpha <= 0.0:
        raise DomainError(f"alpha must be positive, got {alpha!r}")
    beta = float(beta)
    if not math.isfinite(beta):
        raise DomainError(f"beta must be finite, got {beta!r}")
    b_p = 8.0 - 4.0 * lmap.m - 6.0 * beta + 12.0 * lmap.A
    g2 = lmap.gamma**2
    return TransformedParams(
        alpha_tilde=alpha / lmap.gamma,
        c_tilde=b_p * alpha**2,
        beta_tilde=beta * g2 + 2.0 * g2 * lmap.cyclic_sum,
        m_tilde=lmap.m_tilde,
    )
