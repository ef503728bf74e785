"""Fractional integral and derivative operators.

Smooth inputs are sampled functions with piecewise-linear interpolation; the
singular kernel (t-s)^(gamma-1) is integrated exactly per interval (product
integration), which keeps the schemes stable up to the kernel singularity.

Counting paths get closed forms: the Riemann-Liouville integral of a unit-jump
step path is sum_i (t - tau_i)^gamma / Gamma(gamma+1), and its derivative in t
is the convergent jump sum sum_i (t - tau_i)^(-theta) / Gamma(1-theta).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

JUMP_SINGULARITY_TOL = 1e-12


@dataclass(frozen=True)
class SampledFunction:
    """Function sampled on a strictly increasing grid, linear in between."""

    grid: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        grid = np.asarray(self.grid, dtype=float)
        values = np.asarray(self.values, dtype=float)
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "values", values)
        if grid.ndim != 1 or grid.size < 2:
            raise ValueError("grid needs at least 2 points")
        if values.shape != grid.shape:
            raise ValueError("values must match grid shape")
        if not np.all(np.diff(grid) > 0):
            raise ValueError("grid must be strictly increasing")
        if not np.all(np.isfinite(values)):
            raise ValueError("values must be finite")

    @classmethod
    def from_callable(cls, f, grid) -> "SampledFunction":
        grid = np.asarray(grid, dtype=float)
        return cls(grid, np.array([f(t) for t in grid], dtype=float))

    def __call__(self, t: float) -> float:
        return float(np.interp(t, self.grid, self.values))


@dataclass(frozen=True)
class JumpPath:
    """Sorted unit-jump times of a counting process on (0, horizon]."""

    horizon: float
    jumps: np.ndarray = field(default_factory=lambda: np.empty(0))

    def __post_init__(self):
        jumps = np.asarray(self.jumps, dtype=float)
        object.__setattr__(self, "jumps", jumps)
        if self.horizon <= 0:
            raise ValueError("horizon must be positive")
        if jumps.size:
            if not np.all(np.diff(jumps) > 0):
                raise ValueError("jump times must be strictly sorted")
            if jumps[0] <= 0 or jumps[-1] > self.horizon:
                raise ValueError("jump times must lie in (0, horizon]")

    def count(self, t: float) -> int:
        """N(t): number of jumps at or before t."""
        return int(np.searchsorted(self.jumps, t, side="right"))


def _check_t(t: float, horizon: float):
    if not (0.0 < t <= horizon):
        raise ValueError(f"t={t} outside (0, {horizon}]")


def rl_integral(f: SampledFunction, gamma: float, t: float) -> float:
    """Riemann-Liouville integral I^gamma f(t), exact for piecewise-linear f.

    On each interval the integrand (a + b*s)(t-s)^(gamma-1) has the primitive
    built from int (t-s)^(gamma-1) ds and int s (t-s)^(gamma-1) ds.
    """
    if not (0.0 < gamma <= 1.0):
        raise ValueError(f"gamma must lie in (0, 1], got {gamma}")
    _check_t(t, f.grid[-1])
    if t < f.grid[0]:
        raise ValueError(f"t={t} below the sampled range start {f.grid[0]}")
    grid = f.grid
    vals = f.values
    total = 0.0
    for j in range(len(grid) - 1):
        s0 = grid[j]
        if s0 >= t:
            break
        s1 = min(grid[j + 1], t)
        v0 = vals[j]
        v1 = vals[j] + (vals[j + 1] - vals[j]) * (s1 - grid[j]) / (grid[j + 1] - grid[j])
        # u = t - s; f(s) = v0 + slope*(s - s0) = c0 + c1*u with
        # c0 = v0 + slope*(t - s0), c1 = -slope
        slope = (v1 - v0) / (s1 - s0)
        u1 = t - s0
        u0 = t - s1
        c0 = v0 + slope * (t - s0)
        # int_{u0}^{u1} (c0 - slope*u) u^(gamma-1) du
        total += c0 * (u1 ** gamma - u0 ** gamma) / gamma
        total -= slope * (u1 ** (gamma + 1.0) - u0 ** (gamma + 1.0)) / (gamma + 1.0)
    return total / math.gamma(gamma)


def caputo_deriv(f: SampledFunction, beta: float, t: float) -> float:
    """Caputo derivative of order beta in (0,1) of the sampled function at t.

    Uses the piecewise-constant derivative of the linear interpolant against
    the exact kernel integral (the classical L1 construction).
    """
    if not (0.0 < beta < 1.0):
        raise ValueError(f"beta must lie in (0, 1), got {beta}")
    _check_t(t, f.grid[-1])
    grid = f.grid
    vals = f.values
    total = 0.0
    omb = 1.0 - beta
    for j in range(len(grid) - 1):
        s0 = grid[j]
        if s0 >= t:
            break
        s1 = min(grid[j + 1], t)
        deriv = (vals[j + 1] - vals[j]) / (grid[j + 1] - grid[j])
        total += deriv * ((t - s0) ** omb - (t - s1) ** omb)
    return total / (omb * math.gamma(omb))


def rl_deriv_step(path: JumpPath, theta: float, t: float) -> float:
    """Pathwise Riemann-Liouville derivative D^theta of a unit-jump path.

    Exact value (1/Gamma(1-theta)) * sum_{tau_i < t} (t - tau_i)^(-theta),
    the t-derivative of rl_integral_step at order 1-theta.
    """
    if not (0.0 < theta < 1.0):
        raise ValueError(f"theta must lie in (0, 1), got {theta}")
    _check_t(t, path.horizon)
    jumps = path.jumps
    if jumps.size and np.min(np.abs(jumps - t)) <= JUMP_SINGULARITY_TOL:
        raise ValueError(
            f"t={t} coincides with a jump time within {JUMP_SINGULARITY_TOL}"
        )
    before = jumps[jumps < t]
    if before.size == 0:
        return 0.0
    return float(np.sum((t - before) ** (-theta))) / math.gamma(1.0 - theta)


def rl_integral_step(path: JumpPath, gamma: float, t: float) -> float:
    """Riemann-Liouville integral I^gamma of a unit-jump path, exact."""
    if not (0.0 < gamma <= 1.0):
        raise ValueError(f"gamma must lie in (0, 1], got {gamma}")
    _check_t(t, path.horizon)
    before = path.jumps[path.jumps < t]
    if before.size == 0:
        return 0.0
    return float(np.sum((t - before) ** gamma)) / math.gamma(gamma + 1.0)


def noise_increment(path: JumpPath, theta: float, t0: float, t1: float) -> float:
    """int_{t0}^{t1} D_s^theta N(s) ds, exact via the integral-process values."""
    if not (0.0 <= t0 < t1 <= path.horizon):
        raise ValueError(f"need 0 <= t0 < t1 <= horizon, got [{t0}, {t1}]")
    hi = rl_integral_step(path, 1.0 - theta, t1)
    lo = rl_integral_step(path, 1.0 - theta, t0) if t0 > 0.0 else 0.0
    return hi - lo
