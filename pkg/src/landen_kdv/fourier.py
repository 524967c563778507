"""Radix-2 FFT and periodic spectral differentiation.

The transform is implemented here (iterative Cooley-Tukey, decimation in
time) rather than taken from numpy so the package carries no black box in
the one place accuracy claims depend on; numpy.fft appears only in the test
suite as an independent oracle.  Grids are restricted to power-of-two sizes,
which is all the radix-2 scheme supports and all the solvers need.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from functools import cached_property, lru_cache

import numpy as np

from .errors import AliasingWarning, DomainError

# Spectral coefficients below this relative magnitude are rounding debris;
# multiplying them by k^3 would otherwise let the noise floor grow with n.
DROP_FLOOR = 1e-13

# |signed index| >= n/3: the band the 2/3 dealiasing rule discards.
_TOP_THIRD = 3


def _require_pow2(n: int) -> int:
    if n < 1 or n & (n - 1):
        raise DomainError(f"transform size must be a power of two, got {n}")
    return n


@lru_cache(maxsize=None)
def _plan(n: int):
    """Bit-reversal permutation and per-stage twiddle factors for size n."""
    bits = n.bit_length() - 1
    idx = np.arange(n)
    rev = np.zeros(n, dtype=np.intp)
    for _ in range(bits):
        rev = (rev << 1) | (idx & 1)
        idx >>= 1
    twiddles = []
    size = 2
    while size <= n:
        half = size // 2
        twiddles.append(np.exp(-2j * np.pi * np.arange(half) / size))
        size *= 2
    return rev, tuple(twiddles)


def fft(a: np.ndarray) -> np.ndarray:
    """Forward discrete Fourier transform of a 1-D array (radix-2)."""
    a = np.asarray(a)
    if a.ndim != 1:
        raise DomainError("fft operates on 1-D arrays")
    n = _require_pow2(a.size)
    rev, twiddles = _plan(n)
    buf = a[rev].astype(complex)
    for stage, w in enumerate(twiddles):
        size = 2 << stage
        half = size >> 1
        b = buf.reshape(-1, size)
        odd = b[:, half:] * w
        even = b[:, :half]
        total, diff = even + odd, even - odd
        b[:, :half] = total
        b[:, half:] = diff
    return buf


def ifft(a: np.ndarray) -> np.ndarray:
    """Inverse transform, normalized so ifft(fft(x)) == x."""
    a = np.asarray(a)
    return np.conj(fft(np.conj(a))) / a.size


def signed_modes(n: int) -> np.ndarray:
    """Integer mode numbers in transform order: 0..n/2-1, -n/2..-1."""
    j = np.arange(_require_pow2(n))
    j[j >= n // 2] -= n
    return j


def wavenumbers(n: int, length: float) -> np.ndarray:
    """Physical wavenumbers 2*pi*j/length in transform order."""
    return (2.0 * np.pi / length) * signed_modes(n)


def drop_noise_floor(u_hat: np.ndarray, floor: float = DROP_FLOOR) -> np.ndarray:
    """Zero coefficients below ``floor`` times the spectral peak.

    Differentiation multiplies by powers of k; without this the rounding
    noise in empty modes is amplified until it dominates small residuals.
    """
    if floor <= 0.0:
        return u_hat
    peak = np.max(np.abs(u_hat))
    if peak == 0.0:
        return u_hat
    out = u_hat.copy()
    out[np.abs(out) < floor * peak] = 0.0
    return out


def high_mode_energy_fraction(values: np.ndarray) -> float:
    """Fraction of non-mean spectral energy in the top third of modes.

    This is the band the 2/3 rule would discard; energy here means products
    of the field alias back into resolved modes.  The mean is excluded so a
    large constant offset cannot mask genuine high-mode content.
    """
    u_hat = fft(np.asarray(values, dtype=float))
    j = np.abs(signed_modes(u_hat.size))
    power = np.abs(u_hat) ** 2
    total = float(np.sum(power[1:]))
    if total == 0.0:
        return 0.0
    return float(np.sum(power[j >= u_hat.size // _TOP_THIRD]) / total)


def spectral_derivative(
    values: np.ndarray,
    length: float,
    order: int = 1,
    floor: float = DROP_FLOOR,
) -> np.ndarray:
    """d^order/dx^order of a real periodic field sampled on n points.

    Odd orders zero the Nyquist mode: it has no signed partner, so keeping
    it would turn a real field complex.
    """
    values = np.asarray(values, dtype=float)
    if order < 1:
        raise DomainError("derivative order must be >= 1")
    u_hat = drop_noise_floor(fft(values), floor)
    k = wavenumbers(values.size, length)
    d_hat = (1j * k) ** order * u_hat
    if order % 2 == 1:
        d_hat[values.size // 2] = 0.0
    return ifft(d_hat).real


def fit_traveling_velocity(values: np.ndarray, length: float) -> float:
    """Least-squares speed V for which u(x, t) = f(x - V t) fits the flow.

    For u_t - 6 u u_x + u_xxx = 0 a traveling profile obeys
    -V u_x - 6 u u_x + u_xxx = 0, so V is the L2 projection of
    (u_xxx - 6 u u_x) onto u_x.  Constant fields have no velocity.

    Derivatives are taken on the mean-removed field: the mean contributes
    nothing to any derivative, but a large offset would anchor the
    noise-floor threshold and wipe out small oscillatory modes.
    """
    u = np.asarray(values, dtype=float)
    osc = u - float(np.mean(u))
    u_x = spectral_derivative(osc, length, 1)
    u_xxx = spectral_derivative(osc, length, 3)
    denom = float(np.dot(u_x, u_x))
    if denom == 0.0:
        raise DomainError("velocity fit needs a non-constant field")
    return float(np.dot(u_x, u_xxx - 6.0 * u * u_x) / denom)


@dataclass(frozen=True)
class PeriodicGrid:
    """Uniform periodic grid on [0, L): N samples at x_j = j*L/N, none at the seam.

    N must be a power of two and at least 64; coarser grids cannot resolve
    the steep cnoidal profiles this package verifies.
    """

    N: int
    L: float

    def __post_init__(self) -> None:
        _require_pow2(self.N)
        if self.N < 64:
            raise DomainError(f"grid needs at least 64 points, got {self.N}")
        if not math.isfinite(self.L) or self.L <= 0.0:
            raise DomainError(f"grid length must be positive, got {self.L!r}")

    @cached_property
    def x(self) -> np.ndarray:
        return self.L * np.arange(self.N) / self.N

    @cached_property
    def k(self) -> np.ndarray:
        return wavenumbers(self.N, self.L)

    @property
    def spacing(self) -> float:
        return self.L / self.N

    def warn_if_aliased(self, values: np.ndarray, threshold: float = 1e-12) -> float:
        """Measure high-mode energy and warn when products would alias."""
        frac = high_mode_energy_fraction(values)
        if frac > threshold:
            warnings.warn(
                f"top-third modes hold {frac:.3e} of spectral energy; "
                "nonlinear products will alias on this grid",
                AliasingWarning,
                stacklevel=2,
            )
        return frac
