"""One-dimensional smoothness indicators for gradient-kink detection.

The building block is the squared, once-rescaled second difference

    s_c = ((f_{c+1} - 2 f_c + f_{c-1}) / dx)**2,

which is O(dx^2) where the data is C^2 with nonzero curvature and O(1)
across a kink in the first derivative.  Left/right pairs of these feed a
WENO-style normalized weight ``omega`` that sits near 1/2 on smooth data
and collapses to O(dx^4) when a kink lies strictly inside the 3-node hull.
Several accuracy-boosting post-processings of the raw weight are provided:
a polynomial remapping and two tau-based reweightings (the second of which
uses the full 5-point stencil).
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .grids import GridField, ghost_value


class Variant1D(Enum):
    RAW = "raw"
    MAPPED_G = "mapped-g"
    WENO_Z = "weno-z"
    WENO_Z_NEW = "weno-z-new"


@dataclass(frozen=True)
class Indicator1DConfig:
    """Knobs for the 1D indicator.

    sigma scales the desingularization term sigma_h = sigma * dx**2 added
    to every squared curvature; M is the flagging threshold on omega.
    """

    sigma: float = 1.0
    M: float = 0.2
    variant: Variant1D = Variant1D.RAW

    def __post_init__(self) -> None:
        if not self.sigma > 0:
            raise ValueError(f"sigma must be positive, got {self.sigma}")
        if not 0 < self.M < 0.5:
            raise ValueError(f"threshold M must lie in (0, 1/2), got {self.M}")


@dataclass(frozen=True)
class Smoothness1D:
    omega: np.ndarray
    phi: np.ndarray

    def __post_init__(self) -> None:
        if self.omega.shape != self.phi.shape:
            raise ValueError("omega and phi shapes differ")


def map_g(omega):
    """Accuracy remapping g(w) = 4 w (3/4 - 3/2 w + w^2).

    Fixed points at 0, 1/2, 1 with g'(1/2) = g''(1/2) = 0, so deviations
    of order eps around 1/2 shrink to order eps^3.  Inputs are clamped to
    [0, 1] defensively.
    """
    w = np.clip(omega, 0.0, 1.0)
    return 4.0 * w * (0.75 - 1.5 * w + w * w)


def curvature_sq(field: GridField) -> np.ndarray:
    """Array of s_c = ((f_{c+1} - 2 f_c + f_{c-1}) / dx)^2 for every node."""
    d2 = field.shifted(1) - 2.0 * field.values + field.shifted(-1)
    return (d2 / field.grid.dx) ** 2


def beta_pm_1d(field: GridField, j: int) -> tuple[float, float, float, float]:
    """(beta0-, beta1-, beta0+, beta1+) at node j.

    beta-_k is the squared rescaled second difference on the stencil
    centered at node j-1+k; beta+_k the one centered at node j+k, so
    beta+ at j coincides with beta- at j+1 and the center stencil is
    shared between the two sides.
    """
    dx = field.grid.dx

    def s(c: int) -> float:
        d2 = ghost_value(field, c + 1) - 2.0 * ghost_value(field, c) \
            + ghost_value(field, c - 1)
        return (d2 / dx) ** 2

    return s(j - 1), s(j), s(j), s(j + 1)


def _omega_sides(field: GridField, cfg: Indicator1DConfig) -> tuple[np.ndarray, np.ndarray]:
    """Arrays (omega_minus, omega_plus) for every node, before the min."""
    s = curvature_sq(field)
    sigma_h = cfg.sigma * field.grid.dx ** 2
    sf = field.like(s)
    b0m = sf.shifted(-1)      # stencil centered one node left
    b1m = s                   # center stencil, shared with the + side
    b0p = s
    b1p = sf.shifted(1)
    return _combine_sides(b0m, b1m, b0p, b1p, sigma_h, cfg.variant)


def _combine_sides(b0m, b1m, b0p, b1p, sigma_h, variant):
    if variant in (Variant1D.RAW, Variant1D.MAPPED_G):
        a0m = 1.0 / (b0m + sigma_h) ** 2
        a1m = 1.0 / (b1m + sigma_h) ** 2
        a0p = 1.0 / (b0p + sigma_h) ** 2
        a1p = 1.0 / (b1p + sigma_h) ** 2
        wm = a1m / (a0m + a1m)
        wp = a0p / (a0p + a1p)
        if variant is Variant1D.MAPPED_G:
            wm, wp = map_g(wm), map_g(wp)
        return wm, wp
    if variant is Variant1D.WENO_Z:
        tau_m = np.abs(b0m - b1m)
        tau_p = np.abs(b0p - b1p)
    else:  # WENO_Z_NEW: one tau from the full 5-point stencil, both sides
        tau_m = tau_p = np.abs(b0m - 2.0 * b1m + b1p)
    z0m = 0.5 * (1.0 + (tau_m / (b0m + sigma_h)) ** 2)
    z1m = 0.5 * (1.0 + (tau_m / (b1m + sigma_h)) ** 2)
    z0p = 0.5 * (1.0 + (tau_p / (b0p + sigma_h)) ** 2)
    z1p = 0.5 * (1.0 + (tau_p / (b1p + sigma_h)) ** 2)
    return z1m / (z0m + z1m), z0p / (z0p + z1p)


def omega_field_1d(field: GridField, cfg: Indicator1DConfig) -> np.ndarray:
    """Smoothness weight omega at every node (min of the two sides)."""
    wm, wp = _omega_sides(field, cfg)
    return np.minimum(wm, wp)


def omega_1d(field: GridField, j: int, cfg: Indicator1DConfig) -> float:
    b0m, b1m, b0p, b1p = beta_pm_1d(field, j)
    sigma_h = cfg.sigma * field.grid.dx ** 2
    wm, wp = _combine_sides(np.float64(b0m), np.float64(b1m),
                            np.float64(b0p), np.float64(b1p),
                            sigma_h, cfg.variant)
    return float(min(wm, wp))


def phi_1d(omega: np.ndarray, cfg: Indicator1DConfig) -> np.ndarray:
    """Binary trust mask: 1 where omega >= M, else 0.  No smoothing."""
    return (np.asarray(omega) >= cfg.M).astype(np.int8)


def flagged_cells_1d(phi: np.ndarray) -> np.ndarray:
    """Cell-interval report: cell (x_j, x_{j+1}) is flagged iff either of
    its endpoint nodes is untrusted.  Length n-1 boolean array."""
    phi = np.asarray(phi)
    return (phi[:-1] == 0) | (phi[1:] == 0)


def smoothness_1d(field: GridField, cfg: Indicator1DConfig) -> Smoothness1D:
    omega = omega_field_1d(field, cfg)
    return Smoothness1D(omega=omega, phi=phi_1d(omega, cfg))
