"""Pseudo-spectral time integration of u_t - 6 u u_x + u_xxx = 0.

The linear dispersive part is propagated exactly in spectral space with
the integrating factor exp(i k^3 t); only the quadratic term is stepped,
with classical RK4 on the transformed variable.  This removes the k^3
stiffness entirely, so the remaining step-size limit comes from the
nonlinear term and accuracy.  The 2/3-rule dealiasing mask is on by
default: the product u^2 scatters energy to wavenumbers the grid cannot
represent, and without the mask those corruptions fold back into resolved
modes and pollute 1e-6 comparisons.

The k = 0 mode is untouched by both the integrating factor and the
nonlinear term (which carries a factor i*k), so the mean of u is conserved
exactly, not just to tolerance.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import DomainError, InstabilityError
from .fourier import PeriodicGrid, fft, ifft, signed_modes

# Stability heuristic: dt <= STABILITY_C * (L/N)^3.  Measured for cnoidal
# initial data at N in {128, 256, 512}: runs at this dt are stable while
# plain (non-integrating-factor) RK4 requires dt below (L/N)^3 / 2.8; the
# factor is deliberately conservative so accuracy, not stability, decides
# the step size in practice.
STABILITY_C = 64.0

# A spectral amplitude beyond this multiple of the initial peak means the
# integration has blown up.
_BLOWUP_FACTOR = 1e6


class Scheme(enum.Enum):
    INTEGRATING_FACTOR_RK4 = "integrating_factor_rk4"


@dataclass(frozen=True)
class EvolverConfig:
    """Grid, step size, final time and scheme options for one run.

    T must be an integer number of steps (dt * round(T/dt) == T to 1e-9
    relative); anything else silently lands at the wrong final time.
    ``snapshot_every`` = s keeps every s-th step in the trajectory
    (0 keeps only the endpoints).
    """

    grid: PeriodicGrid
    dt: float
    T: float
    scheme: Scheme = Scheme.INTEGRATING_FACTOR_RK4
    dealias: bool = True
    snapshot_every: int = 0

    def __post_init__(self) -> None:
        if not math.isfinite(self.dt) or self.dt <= 0.0:
            raise DomainError(f"dt must be positive, got {self.dt!r}")
        if not math.isfinite(self.T) or self.T <= 0.0:
            raise DomainError(f"T must be positive, got {self.T!r}")
        steps = round(self.T / self.dt)
        if steps < 1 or abs(steps * self.dt - self.T) > 1e-9 * self.T:
            raise DomainError(
                f"T = {self.T!r} is not an integer number of steps of dt = {self.dt!r}"
            )
        if self.snapshot_every < 0:
            raise DomainError("snapshot_every must be >= 0")

    @property
    def steps(self) -> int:
        return round(self.T / self.dt)

    @property
    def stability_cap(self) -> float:
        return STABILITY_C * self.grid.spacing**3

    @classmethod
    def for_duration(cls, grid: PeriodicGrid, duration: float,
                     target_dt: float, **kwargs) -> "EvolverConfig":
        """Config reaching ``duration`` in whole steps of size <= target_dt."""
        if target_dt <= 0.0 or duration <= 0.0:
            raise DomainError("duration and target_dt must be positive")
        steps = max(1, math.ceil(duration / target_dt))
        return cls(grid=grid, dt=duration / steps, T=duration, **kwargs)


@dataclass(frozen=True)
class Trajectory:
    """Snapshots of one evolution; fields[i] is u(., times[i])."""

    grid: PeriodicGrid
    times: tuple[float, ...]
    fields: tuple[np.ndarray, ...]

    @property
    def final(self) -> np.ndarray:
        return self.fields[-1]


def _rk4_step_factory(config: EvolverConfig) -> Callable[[np.ndarray], np.ndarray]:
    grid, dt = config.grid, config.dt
    k = grid.k
    e_full = np.exp(1j * k**3 * dt)
    e_half = np.exp(1j * k**3 * (dt / 2.0))
    if config.dealias:
        mask = (np.abs(signed_modes(grid.N)) < grid.N // 3).astype(float)
    else:
        mask = np.ones(grid.N)
    coeff = 3j * k * mask

    def nonlinear(v_hat: np.ndarray) -> np.ndarray:
        u = ifft(v_hat).real
        return coeff * fft(u * u)

    def step(u_hat: np.ndarray) -> np.ndarray:
        a = nonlinear(u_hat)
        b = nonlinear(e_half * (u_hat + (dt / 2.0) * a))
        c = nonlinear(e_half * u_hat + (dt / 2.0) * b)
        d = nonlinear(e_full * u_hat + dt * e_half * c)
        return e_full * u_hat + (dt / 6.0) * (e_full * a + 2.0 * e_half * (b + c) + d)

    return step


def evolve_trajectory(u0: np.ndarray, config: EvolverConfig) -> Trajectory:
    """Integrate u0 forward to T, keeping snapshots per the config.

    Raises InstabilityError if dt violates the stability heuristic or if
    any spectral amplitude grows beyond 1e6 times the initial peak; the
    check runs before the report stage so a blown-up run never produces
    drift numbers.
    """
    grid = config.grid
    u0 = np.asarray(u0, dtype=float)
    if u0.shape != (grid.N,):
        raise DomainError(f"u0 must have shape ({grid.N},), got {u0.shape}")
    if config.dt > config.stability_cap:
        raise InstabilityError(
            f"dt = {config.dt!r} exceeds the stability heuristic "
            f"{STABILITY_C} * (L/N)^3 = {config.stability_cap!r}"
        )
    step = _rk4_step_factory(config)
    u_hat = fft(u0)
    limit = _BLOWUP_FACTOR * float(np.max(np.abs(u_hat)))
    if limit == 0.0:
        limit = _BLOWUP_FACTOR  # u0 == 0 evolves to 0; guard still armed

    times = [0.0]
    fields = [u0.copy()]
    for n in range(1, config.steps + 1):
        u_hat = step(u_hat)
        peak = float(np.max(np.abs(u_hat)))
        if not math.isfinite(peak) or peak > limit:
            raise InstabilityError(
                f"spectral peak {peak!r} after step {n} (limit {limit!r})"
            )
        keep = n == config.steps or (
            config.snapshot_every > 0 and n % config.snapshot_every == 0
        )
        if keep:
            times.append(n * config.dt)
            fields.append(ifft(u_hat).real)
    return Trajectory(grid=grid, times=tuple(times), fields=tuple(fields))


def evolve(u0: np.ndarray, config: EvolverConfig) -> np.ndarray:
    """Field samples at t = T; see evolve_trajectory for the guards."""
    return evolve_trajectory(u0, config).final


@dataclass(frozen=True)
class ConservationReport:
    """Relative drifts of the first two KdV invariants over a trajectory."""

    mass_drift: float
    momentum_drift: float


def conservation_report(trajectory: Trajectory) -> ConservationReport:
    """Worst-case relative drift of mean(u) and mean(u^2) across snapshots.

    Drifts are relative to the initial value, floored at an absolute scale
    of 1 so an initial invariant near zero does not inflate the ratio.
    """
    u0 = trajectory.fields[0]
    mass0 = float(np.mean(u0))
    mom0 = float(np.mean(u0**2))
    mass_drift = 0.0
    mom_drift = 0.0
    for u in trajectory.fields[1:]:
        mass_drift = max(mass_drift, abs(float(np.mean(u)) - mass0))
        mom_drift = max(mom_drift, abs(float(np.mean(u**2)) - mom0))
    return ConservationReport(
        mass_drift=mass_drift / max(1.0, abs(mass0)),
        momentum_drift=mom_drift / max(1.0, abs(mom0)),
    )


def translation_lag(u0: np.ndarray, u_final: np.ndarray, grid: PeriodicGrid) -> float:
    """Shift s in [0, L) maximizing the circular correlation of u_final with u0.

    For a rigidly translating wave u(x, T) = u(x - V*T, 0), the peak sits
    at V*T mod L; comparing against the predicted velocity confirms the
    velocity law dynamically, independent of pointwise comparisons.
    """
    c = ifft(fft(np.asarray(u_final, dtype=float))
             * np.conj(fft(np.asarray(u0, dtype=float)))).real
    return float(np.argmax(c) * grid.spacing)
