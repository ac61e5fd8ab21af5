"""Blended (filtered) time stepping: monotone backbone, high-order overlay.

One step writes

    u_next = S_M(u) + phi * eps * dt * F((S_A(u) - S_M(u)) / (eps * dt)),

with F the hard-cutoff filter (identity on [-1, 1], zero outside), phi the
binary smoothness mask, and eps a switching scale recomputed once per time
step from the detected region of regularity.  The output therefore never
strays more than eps * dt from the monotone update, and on every node it
equals either the high-order or the monotone result exactly.

The switching scale compares the leading difference between the two
numerical hamiltonians: the one-shot time-curvature correction of the
high-order family plus the antidiffusion content of the monotone
hamiltonian, probed by swapping one-sided slopes into one argument slot
at a time.
"""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from enum import Enum

import numpy as np

from .grids import GridField
from .hamiltonians import Hamiltonian
from .highorder import (centered_slopes, cross_diff, high_order_step,
                        second_diffs, _staggered_secants)
from .indicators2d import Indicator2DConfig, smoothness_2d
from .monotone import (CflViolation, MonotoneScheme, cfl_check,
                       monotone_hamiltonian, monotone_step, one_sided_slopes)


class EpsVariant(Enum):
    DERIVATIVE = "derivative"     # needs H_p, H_q (and H_x, H_y if present)
    HAMILTONIAN = "hamiltonian"   # secant form, H independent of (x, y)


@dataclass(frozen=True)
class FilterState:
    epsilon_n: float
    region_mask: np.ndarray
    K: float = 1.0
    eps_floor: float = 1e-14

    def __post_init__(self) -> None:
        if self.epsilon_n < 0:
            raise ValueError("switching scale must be nonnegative")
        if not self.K > 0.5:
            raise ValueError(f"safety factor K must exceed 1/2, got {self.K}")


def filter_F(rho):
    """Hard-cutoff filter: identity for |rho| <= 1 (boundary included),
    zero outside."""
    rho = np.asarray(rho, dtype=np.float64)
    out = np.where(np.abs(rho) <= 1.0, rho, 0.0)
    return out if out.ndim else float(out)


def _htilde_differences(field: GridField, scheme: MonotoneScheme,
                        H: Hamiltonian):
    """(p-slot difference, q-slot difference) of the monotone hamiltonian:
    each slot in turn is swapped between the forward and backward slope
    while every other slot holds the centered slope."""
    x, y = field.grid.meshes()
    pm, pp, qm, qp = one_sided_slopes(field)
    pc, qc = 0.5 * (pm + pp), 0.5 * (qm + qp)

    def h(a, b, c, d):
        return monotone_hamiltonian(scheme, H, x, y, a, b, c, d)

    hp_plus = h(pc, pp, qc, qc) - h(pc, pm, qc, qc)
    hp_minus = h(pp, pc, qc, qc) - h(pm, pc, qc, qc)
    hq_plus = h(pc, pc, qc, qp) - h(pc, pc, qc, qm)
    hq_minus = h(pc, pc, qp, qc) - h(pc, pc, qm, qc)
    return hp_plus - hp_minus, hq_plus - hq_minus


def epsilon_field(field: GridField, H: Hamiltonian, scheme: MonotoneScheme,
                  dt: float, K: float, variant: EpsVariant = EpsVariant.DERIVATIVE,
                  corrected: bool = False) -> np.ndarray:
    """Switching-scale integrand K * |...| at every node (before the
    region maximum)."""
    x, y = field.grid.meshes()
    dp_term, dq_term = _htilde_differences(field, scheme, H)
    dxu, dyu = centered_slopes(field)
    if variant is EpsVariant.DERIVATIVE:
        d2x, d2y = second_diffs(field)
        dxy = cross_diff(field)
        hp = H.dp(x, y, dxu, dyu)
        hq = H.dq(x, y, dxu, dyu)
        hx = H.dx_(x, y, dxu, dyu)
        hy = H.dy_(x, y, dxu, dyu)
        bracket = (hp * (hx + hp * d2x) + hq * (hy + hq * d2y)
                   + 2.0 * hp * hq * dxy)
        core = 0.5 * dt * bracket
    else:
        if H.space_dependent:
            raise ValueError("secant switching scale requires H independent of (x, y)")
        lam_x = dt / field.grid.dx
        lam_y = dt / field.grid.dy
        hx_star, hy_star = _staggered_secants(field, H, corrected)
        core = (H.eval(x, y, dxu, dyu)
                - H.eval(x, y, dxu - 0.5 * lam_x * hx_star,
                         dyu - 0.5 * lam_y * hy_star))
    return K * np.abs(core + dp_term + dq_term)


def epsilon_n(field: GridField, H: Hamiltonian, scheme: MonotoneScheme,
              dt: float, mask: np.ndarray, K: float = 1.0,
              variant: EpsVariant = EpsVariant.DERIVATIVE,
              corrected: bool = False) -> float:
    """Maximum of the switching-scale integrand over the trusted region;
    0 when the region is empty."""
    mask = np.asarray(mask, dtype=bool)
    if not mask.any():
        return 0.0
    vals = epsilon_field(field, H, scheme, dt, K, variant, corrected)
    return float(vals[mask].max())


def af_step(field: GridField, scheme: MonotoneScheme, highorder, H: Hamiltonian,
            dt: float, phi_mask: np.ndarray, eps: float,
            eps_floor: float = 1e-14) -> GridField:
    """One blended step.

    Implemented as a selection: with the hard-cutoff filter the blend
    formula reduces node-wise to 'high-order where trusted and within
    eps*dt of the monotone value, monotone everywhere else', and the
    selection keeps the chosen branch bit-exact.  When eps is at or below
    the floor the two schemes agree on the trusted data anyway, so the
    step falls back to the monotone update (avoids 0/0 in the filter
    argument).
    """
    u_m = monotone_step(field, scheme, H, dt)
    if eps <= eps_floor:
        return u_m
    u_a = highorder(field, H, dt)
    trusted = np.asarray(phi_mask, dtype=bool)
    within = np.abs(u_a.values - u_m.values) <= eps * dt
    return field.like(np.where(trusted & within, u_a.values, u_m.values))


class EvolutionError(RuntimeError):
    pass


@dataclass(frozen=True)
class SolverConfig:
    """Everything af_evolve needs besides the initial field.

    mode: 'af' (adaptive blend), 'fixed' (blend with a constant eps and
    phi forced to one), 'monotone', or 'raw' (bare high-order scheme).
    """

    hamiltonian: Hamiltonian
    monotone: MonotoneScheme
    highorder: str = "hc"
    mode: str = "af"
    indicator: Indicator2DConfig = dc_field(default_factory=Indicator2DConfig)
    K: float = 1.0
    eps_variant: EpsVariant = EpsVariant.DERIVATIVE
    eps_fixed: float | None = None
    eps_floor: float = 1e-14
    lw2_corrected: bool = False

    def __post_init__(self) -> None:
        if self.mode not in ("af", "fixed", "monotone", "raw"):
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.mode == "fixed" and self.eps_fixed is None:
            raise ValueError("fixed mode needs eps_fixed")
        if not self.K > 0.5:
            raise ValueError(f"safety factor K must exceed 1/2, got {self.K}")


@dataclass
class Diagnostics:
    """Per-step record: (step index, time reached, switching scale,
    number of untrusted nodes)."""

    rows: list[tuple[int, float, float, int]] = dc_field(default_factory=list)

    def write_csv(self, out) -> None:
        out.write("step,t,epsilon_n,phi_zero_count\n")
        for step, t, eps, nz in self.rows:
            out.write(f"{step},{t:.17g},{eps:.17g},{nz}\n")


def af_evolve(initial: GridField, config: SolverConfig, T: float,
              n_steps: int) -> tuple[GridField, Diagnostics]:
    """March the blended scheme to time T in n_steps equal steps.

    The smoothness mask and the switching scale are recomputed once per
    time step (never per Runge-Kutta stage).  Aborts with the offending
    step number if the solution leaves the finite range.
    """
    if T <= 0:
        raise ValueError(f"final time must be positive, got {T}")
    if n_steps < 1:
        raise ValueError(f"need at least one step, got {n_steps}")
    dt = T / n_steps
    H = config.hamiltonian
    if config.mode in ("af", "fixed", "monotone"):
        report = cfl_check(config.monotone, H, dt, initial.grid)
        if not report.passed:
            raise CflViolation(
                f"time step violates the stability bound before stepping: "
                f"max(lam*vmax) = {report.value:.4g} > 0.5")
    step_fn = None
    if config.mode != "monotone":
        step_fn = high_order_step(config.highorder, config.lw2_corrected)

    u = initial
    diag = Diagnostics()
    ones = np.ones(initial.grid.shape, dtype=np.int8)
    for step in range(1, n_steps + 1):
        if config.mode == "monotone":
            u_next = monotone_step(u, config.monotone, H, dt)
            eps, phi = 0.0, ones
        elif config.mode == "raw":
            u_next = step_fn(u, H, dt)
            eps, phi = 0.0, ones
        elif config.mode == "fixed":
            eps, phi = config.eps_fixed, ones
            u_next = af_step(u, config.monotone, step_fn, H, dt, phi == 1,
                             eps, config.eps_floor)
        else:
            sm = smoothness_2d(u, config.indicator)
            phi = sm.phi
            eps = epsilon_n(u, H, config.monotone, dt, phi == 1, config.K,
                            config.eps_variant, config.lw2_corrected)
            u_next = af_step(u, config.monotone, step_fn, H, dt, phi == 1,
                             eps, config.eps_floor)
        if not np.all(np.isfinite(u_next.values)):
            raise EvolutionError(f"non-finite values at step {step} (t = {step * dt:.6g})")
        u = u_next
        diag.rows.append((step, step * dt, float(eps), int(np.sum(phi == 0))))
    return u, diag
