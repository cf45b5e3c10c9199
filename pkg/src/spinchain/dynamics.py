"""Open-system dynamics of the damped dimer.

The state obeys the Markovian master equation

    d(rho)/dt = -i [H, rho]
                + gamma * sum_j ( L_j rho L_j^+ - {L_j^+ L_j, rho}/2 )

with H from `model.hamiltonian_block` and L_j the per-site lowering
operators. Because H shares the X sparsity pattern and both jump operators
map X states to X states, an X-form initial condition stays X-form for all
times; populations couple only to populations and each coherence evolves
inside its own 2x2 block.

Two independent routes to rho(t) live here and the test suite pins them to
elementwise agreement: * `analytic_state` evaluates closed-form
trajectories; * `evolve` integrates the generator directly with a classical
fixed-step 4th-order Runge-Kutta scheme.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .model import ModelParams, derived_scales, hamiltonian_block, jump_operators

# evolve aborts when |tr(rho) - 1| exceeds this at any accepted step
STEP_TRACE_TOL = 1e-6

# X-form off-pattern budget for states fed to the X-only measures
X_FORM_TOL = 1e-9


class StepUnstable(RuntimeError):
    """Fixed-step integration lost the trace; dt too large for the scales."""


class SingularScale(ValueError):
    """A closed-form expression divides by Omega or omega equal to zero."""


class NoDissipation(ValueError):
    """Long-time limit requested with gamma = 0; no unique stationary state."""


@dataclass(frozen=True)
class IntegratorConfig:
    """Fixed-step integration window and sampling cadence."""

    dt: float = 1e-3
    t_max: float = 20.0
    record_every: int = 10

    def __post_init__(self):
        if not (math.isfinite(self.dt) and self.dt > 0):
            raise ValueError(f"dt must be positive and finite, got {self.dt!r}")
        if not (math.isfinite(self.t_max) and self.t_max >= 0):
            raise ValueError(f"t_max must be >= 0 and finite, got {self.t_max!r}")
        if int(self.record_every) != self.record_every or self.record_every < 1:
            raise ValueError(f"record_every must be an integer >= 1, got {self.record_every!r}")


class XComponents(NamedTuple):
    """The six independent entries of an X-form state.

    Populations are returned as real parts; their imaginary parts are
    bounded by the Hermiticity budget of the state.
    """

    rho11: float
    rho22: float
    rho33: float
    rho44: float
    rho14: complex
    rho23: complex


# index pairs outside the X sparsity pattern
_OFF_PATTERN = [(0, 1), (0, 2), (1, 0), (1, 3), (2, 0), (2, 3), (3, 1), (3, 2)]


def x_components(rho) -> XComponents:
    r = np.asarray(rho, dtype=complex)
    return XComponents(
        rho11=r[0, 0].real,
        rho22=r[1, 1].real,
        rho33=r[2, 2].real,
        rho44=r[3, 3].real,
        rho14=complex(r[0, 3]),
        rho23=complex(r[1, 2]),
    )


def x_leakage(rho) -> float:
    """Largest entry magnitude outside the X sparsity pattern."""
    r = np.asarray(rho, dtype=complex)
    return max(abs(r[i, j]) for i, j in _OFF_PATTERN)


def validate_density(rho, herm_tol: float = 1e-10, trace_tol: float = 1e-9,
                     eig_floor: float = -1e-9) -> np.ndarray:
    """Check the density-matrix invariants, returning the array on success.

    Hermitian within `herm_tol`, unit trace within `trace_tol`, eigenvalues
    above `eig_floor`, every entry finite; 4x4.
    """
    r = np.asarray(rho, dtype=complex)
    if r.shape != (4, 4):
        raise ValueError(f"density matrix must be 4x4, got {r.shape}")
    if not np.all(np.isfinite(r.real)) or not np.all(np.isfinite(r.imag)):
        raise ValueError("density matrix contains NaN or Inf entries")
    herm = float(np.max(np.abs(r - r.conj().T)))
    if herm > herm_tol:
        raise ValueError(f"density matrix hermiticity defect {herm:.3e} > {herm_tol:.3e}")
    tr_dev = abs(complex(np.trace(r)) - 1.0)
    if tr_dev > trace_tol:
        raise ValueError(f"density matrix trace deviates from 1 by {tr_dev:.3e}")
    min_eig = float(np.linalg.eigvalsh((r + r.conj().T) / 2.0)[0])
    if min_eig < eig_floor:
        raise ValueError(f"density matrix eigenvalue {min_eig:.3e} below {eig_floor:.3e}")
    return r


def _precompute_jumps(jumps):
    pre = []
    for op, rate in jumps:
        op = np.asarray(op, dtype=complex)
        op_dag = op.conj().T
        pre.append((op, op_dag, op_dag @ op, float(rate)))
    return pre


def _rhs(rho, h, pre):
    out = -1j * (h @ rho - rho @ h)
    for op, op_dag, number, rate in pre:
        out += rate * (op @ rho @ op_dag - 0.5 * (number @ rho + rho @ number))
    return out


def lindblad_rhs(rho, h, jumps) -> np.ndarray:
    """Right-hand side of the master equation for state `rho`.

    `jumps` is a list of (operator, rate) pairs as produced by
    `model.jump_operators`. The result is traceless and Hermitian for
    Hermitian input (up to roundoff).
    """
    return _rhs(np.asarray(rho, dtype=complex), np.asarray(h, dtype=complex),
                _precompute_jumps(jumps))


def evolve(rho0, p: ModelParams, cfg: IntegratorConfig | None = None
           ) -> list[tuple[float, np.ndarray]]:
    """Integrate the master equation from `rho0` with fixed-step RK4.

    Returns [(t, rho)] sampled every `cfg.record_every` steps, always
    including t = 0 and the final step. Raises StepUnstable when the trace
    drifts beyond STEP_TRACE_TOL or an entry stops being finite, which for
    this generator only happens once dt leaves the stability region of the
    fastest block frequency.
    """
    if cfg is None:
        cfg = IntegratorConfig()
    rho = validate_density(rho0).astype(complex, copy=True)
    h = hamiltonian_block(p)
    pre = _precompute_jumps(jump_operators(p))
    dt = cfg.dt
    n_steps = int(round(cfg.t_max / dt))
    out = [(0.0, rho.copy())]
    for k in range(1, n_steps + 1):
        k1 = _rhs(rho, h, pre)
        k2 = _rhs(rho + (0.5 * dt) * k1, h, pre)
        k3 = _rhs(rho + (0.5 * dt) * k2, h, pre)
        k4 = _rhs(rho + dt * k3, h, pre)
        rho = rho + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        tr_dev = abs(complex(np.trace(rho)) - 1.0)
        if not math.isfinite(tr_dev) or tr_dev > STEP_TRACE_TOL:
            raise StepUnstable(
                f"trace deviation {tr_dev:.3e} at t={k * dt:.6g} (dt={dt:g}); reduce dt")
        if k % cfg.record_every == 0 or k == n_steps:
            out.append((k * dt, rho.copy()))
    return out


def analytic_state(p: ModelParams, t: float) -> np.ndarray:
    """Closed-form X-state trajectory at time t >= 0.

    Evaluates the exact solution of the master equation for the initial
    state sin(theta)|01> + cos(theta)|10>. Singular parameter points
    Omega = 0 (eta = 0 and Delta = 0) or omega = 0 (J = 0 and b = 0) are
    rejected rather than regularized.
    """
    if t < 0:
        raise ValueError(f"t must be >= 0, got {t!r}")
    delta, big_om, om = derived_scales(p)
    if big_om == 0.0:
        raise SingularScale("Omega = 0 (eta = 0 and Delta = 0): closed forms divide by Omega")
    if om == 0.0:
        raise SingularScale("omega = 0 (J = 0 and b = 0): closed forms divide by omega")

    j, eta, b, g = p.J, p.eta, p.b, p.gamma
    om2 = om * om
    big2 = big_om * big_om
    denom = big2 + g * g
    a2 = j * j * eta * eta  # J^2 eta^2
    s2t = math.sin(2.0 * p.theta)
    c2t = math.cos(2.0 * p.theta)
    eg = math.exp(-g * t)
    eg2 = math.exp(-2.0 * g * t)
    sin_big = math.sin(big_om * t)
    cos_big = math.cos(big_om * t)
    sin_om = math.sin(om * t)
    cos_om = math.cos(om * t)

    rho11 = a2 * (big_om * (1.0 - eg2) - 2.0 * g * sin_big * eg) / (4.0 * big_om * denom)
    rho22 = (
        (j * (2.0 * b * s2t - j * c2t) * cos_om) * eg / (2.0 * om2)
        - (2.0 * big2 * b * b * c2t + big2 * j * b * s2t - 2.0 * delta**2 * om2) * eg / (big2 * om2)
        + a2 * g * g * cos_big * eg / (2.0 * big2 * denom)
        + a2 * (1.0 + eg2) / (4.0 * denom)
    )
    rho33 = (
        (j * (j * c2t - 2.0 * b * s2t) * cos_om) * eg / (2.0 * om2)
        + (2.0 * big2 * b * b * c2t + big2 * j * b * s2t + 2.0 * delta**2 * om2) * eg / (big2 * om2)
        + a2 * g * g * cos_big * eg / (2.0 * big2 * denom)
        + a2 * (1.0 + eg2) / (4.0 * denom)
    )
    rho44 = (
        a2 * g * (big_om * sin_big - 2.0 * g * cos_big) * eg / (2.0 * big2 * denom)
        - 4.0 * delta**2 * eg / big2
        + (-a2 * eg2 + big2 + 12.0 * delta**2 + 4.0 * g * g) / (4.0 * denom)
    )
    rho23 = (
        -(j * c2t - 2.0 * b * s2t) * (1j * om * sin_om + 2.0 * b * cos_om) * eg / (2.0 * om2)
        + j * (j * s2t + 2.0 * b * c2t) * eg / (2.0 * om2)
    )
    rho14 = (
        j * eta * g * ((1j * g + 2.0 * delta) * big_om * sin_big
                       + (1j * big2 - 2.0 * g * delta) * cos_big) * eg / (2.0 * big2 * denom)
        + j * eta * (2.0 * delta * denom * eg - (1j * g + 2.0 * delta) * big2) / (2.0 * big2 * denom)
    )

    rho = np.zeros((4, 4), dtype=complex)
    rho[0, 0] = rho11
    rho[1, 1] = rho22
    rho[2, 2] = rho33
    rho[3, 3] = rho44
    rho[1, 2] = rho23
    rho[2, 1] = np.conj(rho23)
    rho[0, 3] = rho14
    rho[3, 0] = np.conj(rho14)
    return rho


def steady_state_limit(p: ModelParams) -> np.ndarray:
    """The t -> infinity limit of the closed-form trajectories.

    Populations rho11 = rho22 = rho33 = J^2 eta^2 / (4 (Omega^2 + gamma^2)),
    rho44 carries the rest of the trace, rho23 -> 0, and
    rho14 -> -J eta (i gamma + 2 Delta) / (2 (Omega^2 + gamma^2)).
    Independent of theta. Requires gamma > 0; with eta = 0 the limit is the
    pure state |11><11|.
    """
    if p.gamma == 0:
        raise NoDissipation("gamma = 0: no unique long-time limit")
    delta, big_om, om = derived_scales(p)
    if big_om == 0.0:
        raise SingularScale("Omega = 0 (eta = 0 and Delta = 0): closed forms divide by Omega")
    if om == 0.0:
        raise SingularScale("omega = 0 (J = 0 and b = 0): closed forms divide by omega")
    g = p.gamma
    denom = big_om**2 + g * g
    pop = p.J**2 * p.eta**2 / (4.0 * denom)
    rho = np.zeros((4, 4), dtype=complex)
    rho[0, 0] = rho[1, 1] = rho[2, 2] = pop
    rho[3, 3] = (big_om**2 + 12.0 * delta**2 + 4.0 * g * g) / (4.0 * denom)
    rho14 = -p.J * p.eta * (1j * g + 2.0 * delta) / (2.0 * denom)
    rho[0, 3] = rho14
    rho[3, 0] = np.conj(rho14)
    return rho


@dataclass(frozen=True)
class TimeSeriesRecord:
    """Per-sample populations, coherence magnitudes, and health diagnostics."""

    t: float
    rho11: float
    rho22: float
    rho33: float
    rho44: float
    abs_rho14: float
    abs_rho23: float
    trace_dev: float
    min_eig: float


def record_from_state(t: float, rho) -> TimeSeriesRecord:
    r = np.asarray(rho, dtype=complex)
    c = x_components(r)
    min_eig = float(np.linalg.eigvalsh((r + r.conj().T) / 2.0)[0])
    return TimeSeriesRecord(
        t=float(t),
        rho11=c.rho11,
        rho22=c.rho22,
        rho33=c.rho33,
        rho44=c.rho44,
        abs_rho14=abs(c.rho14),
        abs_rho23=abs(c.rho23),
        trace_dev=abs(complex(np.trace(r)) - 1.0),
        min_eig=min_eig,
    )
