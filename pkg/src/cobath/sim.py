"""Numerical integration of the two-mode master equation.

Integrates d rho/dt = (Gamma/2)(N0+1) D[L] rho + (Gamma/2) N0 D'[L] rho
with the collective jump operator L = a1 + a2 ("correlated" reservoir),
and the per-mode baseline L1 = a1, L2 = a2 each at rate Gamma
("independent" reservoirs), using fixed-step classical RK4 on the dense
density matrix in truncated Fock space.

The stepping kernel is a compiled extension when available; set
COBATH_PURE=1 to force the numpy fallback. Both backends are
single-threaded and deterministic, so trajectories are reproducible
bit for bit regardless of how many worker threads run around them.
"""

from __future__ import annotations

import math
import os
import warnings
from dataclasses import dataclass, field

import numpy as np

from .analytic import ChannelParams
from .errors import DimensionMismatchError, IntegrationFailureError, StabilityWarning
from .fock import DensityOperator, ModeCutoff

if os.environ.get("COBATH_PURE"):
    from . import _pykernel as _kern

    _BACKEND = "python"
else:
    try:
        from . import _cykernel as _kern

        _BACKEND = "compiled"
    except ImportError:
        from . import _pykernel as _kern

        _BACKEND = "python"

GENERATORS = ("correlated", "independent")


def kernel_backend() -> str:
    """Which stepping kernel was selected at import: 'compiled' or 'python'."""
    return _BACKEND


def default_dt(p: ChannelParams) -> float:
    """Default RK4 step, 1e-3 / (Gamma (N0+1)).

    Far below the stability bound for the cutoffs this package targets,
    and small enough that the O(dt^4) error sits orders of magnitude under
    the verification tolerances; the step-halving diagnostic checks that
    claim on every run that asks for it.
    """
    return 1e-3 / (p.gamma * (1.0 + p.n0))


def _tables(cutoff: ModeCutoff, p: ChannelParams):
    k1 = p.gamma * (p.n0 + 1.0)
    k0 = p.gamma * p.n0
    sq1 = np.sqrt(np.arange(cutoff.d1 + 1, dtype=float))
    sq2 = np.sqrt(np.arange(cutoff.d2 + 1, dtype=float))

    def diag(d):
        n = np.arange(d, dtype=float)
        gain = n + 1.0
        gain[-1] = 0.0  # truncated a a^dag has an empty top level
        return -0.5 * (k1 * n + k0 * gain)

    return k1, k0, sq1, sq2, diag(cutoff.d1), diag(cutoff.d2)


def _apply_generator(rho: DensityOperator, p: ChannelParams, cross: bool) -> np.ndarray:
    cut = rho.cutoff
    k1, k0, sq1, sq2, u1, u2 = _tables(cut, p)
    y = np.ascontiguousarray(
        rho.matrix.reshape(cut.d1, cut.d2, cut.d1, cut.d2), dtype=complex
    )
    out = np.empty_like(y)
    _kern.rhs(out, y, k1, k0, cross, sq1, sq2, u1, u2)
    return out.reshape(cut.dim, cut.dim)


def correlated_generator(rho: DensityOperator, p: ChannelParams) -> np.ndarray:
    """Time derivative of rho under the common-reservoir Lindbladian
    (jump operator a1 + a2). Traceless and hermitian for hermitian input."""
    return _apply_generator(rho, p, cross=True)


def independent_generator(rho: DensityOperator, p: ChannelParams) -> np.ndarray:
    """Time derivative under two independent per-mode thermal dampers,
    each at rate Gamma."""
    return _apply_generator(rho, p, cross=False)


@dataclass(frozen=True)
class SimConfig:
    """Integrator settings.

    dt=None picks default_dt(params) at evolve time. With step_halving the
    integration is repeated at dt/2 and the largest state difference over
    the grid is recorded as the convergence estimate.
    """

    dt: float | None = None
    t_final: float = 0.0
    trace_tol: float = 1e-8
    positivity_tol: float = 1e-8
    step_halving: bool = False

    def __post_init__(self):
        if self.dt is not None and not self.dt > 0.0:
            raise ValueError(f"dt must be > 0, got {self.dt}")
        if self.t_final < 0.0:
            raise ValueError(f"t_final must be >= 0, got {self.t_final}")
        if not (self.trace_tol > 0.0 and self.positivity_tol > 0.0):
            raise ValueError("tolerances must be > 0")


@dataclass(frozen=True)
class PointDiagnostics:
    """Integrator health at one grid time; drift and defect are maxima over
    the steps since the previous grid point, before the per-step cleanup."""

    time: float
    trace_drift: float
    hermiticity_defect: float
    min_eigenvalue: float


@dataclass(frozen=True)
class Trajectory:
    """Grid times, the state at each, and per-point diagnostics."""

    grid: np.ndarray
    states: tuple[DensityOperator, ...]
    diagnostics: tuple[PointDiagnostics, ...]
    generator: str
    params: ChannelParams
    dt: float
    convergence_estimate: float | None = None

    @property
    def final_state(self) -> DensityOperator:
        return self.states[-1]

    def max_trace_drift(self) -> float:
        return max(d.trace_drift for d in self.diagnostics)

    def min_eigenvalue(self) -> float:
        return min(d.min_eigenvalue for d in self.diagnostics)


def _validate_grid(grid, t_final: float) -> np.ndarray:
    grid = np.asarray(grid, dtype=float)
    if grid.ndim != 1 or grid.size < 1:
        raise ValueError("grid must be a non-empty 1-d array of times")
    if grid[0] != 0.0:
        raise ValueError(f"grid must start at 0, got {grid[0]}")
    if np.any(np.diff(grid) <= 0.0):
        raise ValueError("grid times must be strictly increasing")
    if t_final > 0.0 and grid[-1] > t_final + 1e-12:
        raise ValueError(f"grid end {grid[-1]} exceeds t_final {t_final}")
    return grid


def evolve(
    rho0: DensityOperator,
    generator: str,
    p: ChannelParams,
    config: SimConfig,
    grid,
) -> Trajectory:
    """Integrate from rho0 over the given time grid (must start at 0).

    Fixed-step RK4 with the step subdivided to land exactly on each grid
    time; each step symmetrizes the state and renormalizes the trace.
    Raises IntegrationFailureError as soon as the trace drift or the most
    negative eigenvalue at a grid point exceeds the configured tolerances.
    """
    if generator not in GENERATORS:
        raise ValueError(f"generator must be one of {GENERATORS}, got {generator!r}")
    cut = rho0.cutoff
    grid = _validate_grid(grid, config.t_final)
    dt = config.dt if config.dt is not None else default_dt(p)
    stability_scale = p.gamma * (p.n0 + 1.0) * 2.0 * (cut.d1 + cut.d2)
    if dt >= 1.0 / stability_scale:
        warnings.warn(
            f"dt={dt:.3g} is at or beyond 1/(Gamma (N0+1) |L^dag L|) ~ "
            f"{1.0 / stability_scale:.3g}; RK4 may be unstable",
            StabilityWarning,
        )

    k1, k0, sq1, sq2, u1, u2 = _tables(cut, p)
    cross = generator == "correlated"
    rho = np.ascontiguousarray(
        rho0.matrix.reshape(cut.d1, cut.d2, cut.d1, cut.d2), dtype=complex
    ).copy()

    m0 = rho0.matrix
    diags = [
        PointDiagnostics(
            time=float(grid[0]),
            trace_drift=abs(float(np.trace(m0).real) - 1.0),
            hermiticity_defect=float(np.abs(m0 - m0.conj().T).max()),
            min_eigenvalue=rho0.min_eigenvalue(),
        )
    ]
    states = [rho0]
    for t_prev, t_next in zip(grid[:-1], grid[1:]):
        span = float(t_next - t_prev)
        n_sub = max(1, math.ceil(span / dt - 1e-12))
        h = span / n_sub
        drift, asym = _kern.run_rk4(rho, h, n_sub, k1, k0, cross, sq1, sq2, u1, u2)
        matrix = rho.reshape(cut.dim, cut.dim).copy()
        min_eig = float(np.linalg.eigvalsh(matrix)[0])
        rec = PointDiagnostics(float(t_next), float(drift), float(asym), min_eig)
        diags.append(rec)
        if drift >= config.trace_tol or min_eig < -config.positivity_tol:
            raise IntegrationFailureError(
                f"integration failed at t={t_next:g}: trace drift {drift:.3e} "
                f"(tol {config.trace_tol:.1e}), min eigenvalue {min_eig:.3e} "
                f"(tol -{config.positivity_tol:.1e})",
                diagnostics=diags,
            )
        states.append(DensityOperator(matrix, cut))

    estimate = None
    if config.step_halving:
        half = SimConfig(
            dt=dt / 2.0,
            t_final=config.t_final,
            trace_tol=config.trace_tol,
            positivity_tol=config.positivity_tol,
            step_halving=False,
        )
        other = evolve(rho0, generator, p, half, grid)
        estimate = max(
            float(np.abs(a.matrix - b.matrix).max())
            for a, b in zip(states, other.states)
        )

    return Trajectory(
        grid=grid,
        states=tuple(states),
        diagnostics=tuple(diags),
        generator=generator,
        params=p,
        dt=dt,
        convergence_estimate=estimate,
    )
