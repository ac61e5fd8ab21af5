"""Genuinely two-dimensional smoothness indicators on structured grids.

Around each node, the 3x3-neighborhood regularity is probed quadrant by
quadrant: for each of the four subcells touching the node, a smoothness
coefficient beta is computed for the centered biquadratic interpolant
(index 0) and for the interpolant on the stencil shifted away across that
subcell (index 1).  Each beta is the integral, over the subcell, of scaled
squared derivatives of total order >= 2 of the interpolant; it is O(delta^2)
on smooth data and O(1) when a gradient kink crosses the stencil hull.

A single closed-form quadratic in undivided differences evaluates all four
quadrants: the differences are taken as forward differences along *ordered*
stencils whose listing order absorbs every sign flip.  With x offsets
(z1, 0, -z1) / (0, z1, 2*z1) for the inner/outer stencil (same in y with
z2), one formula serves the four (z1, z2) in {-1, +1}^2.

Two coefficient sets are provided: FULL keeps every derivative with total
order >= 2 (per-axis order <= 2); PARTIAL keeps only total order exactly 2.
A dimensional-splitting baseline built from the 1D indicators is included
for comparison; it is blind to singularities whose axis restrictions look
smooth (e.g. a non-differentiable point with vanishing axis slopes).
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .grids import GridField, ghost_value
from .indicators1d import Variant1D, _combine_sides, map_g

# Quadrants keyed by the sign of the subcell relative to the node,
# (z1, z2) = (x side, y side).
QUADRANTS: dict[str, tuple[int, int]] = {
    "--": (-1, -1),
    "+-": (1, -1),
    "-+": (-1, 1),
    "++": (1, 1),
}

# Coefficients (c21, c22) of the squared (2,1)/(1,2) and (2,2) undivided
# differences in the closed form.  FULL sums every mixed derivative of
# total order >= 2 of the biquadratic; PARTIAL restricts to total order 2.
# Values are fixed by exact agreement with Gauss quadrature of the
# defining subcell integral (see the oracle tests).
FULL_COEFFS = (17.0 / 12.0, 857.0 / 720.0)
PARTIAL_COEFFS = (5.0 / 12.0, 17.0 / 720.0)


class Formula2D(Enum):
    FULL = "full"
    PARTIAL = "partial"
    SPLIT = "split"


class PostMap(Enum):
    NONE = "none"
    MAPPED_G = "mapped-g"
    WENO_Z = "weno-z"


@dataclass(frozen=True)
class Indicator2DConfig:
    """sigma scales sigma_h = sigma * delta**2 with delta = max(dx, dy);
    M thresholds the combined weight; crossing_fix controls the
    untrusted-node diagnostic where singularity curves intersect."""

    sigma: float = 2.0
    M: float = 0.2
    variant: Formula2D = Formula2D.FULL
    postmap: PostMap = PostMap.MAPPED_G
    crossing_fix: bool = True

    def __post_init__(self) -> None:
        if not self.sigma > 0:
            raise ValueError(f"sigma must be positive, got {self.sigma}")
        if not 0 < self.M < 0.5:
            raise ValueError(f"threshold M must lie in (0, 1/2), got {self.M}")


@dataclass(frozen=True)
class QuadrantBetas:
    """Per-quadrant (beta0, beta1) pairs at one node."""

    mm: tuple[float, float]
    pm: tuple[float, float]
    mp: tuple[float, float]
    pp: tuple[float, float]

    def pair(self, key: str) -> tuple[float, float]:
        return {"--": self.mm, "+-": self.pm, "-+": self.mp, "++": self.pp}[key]


@dataclass(frozen=True)
class Smoothness2D:
    omega: np.ndarray
    phi: np.ndarray
    untrusted: np.ndarray | None = None


def _stencil_offsets(z1: int, z2: int, k: int) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Ordered (x offsets, y offsets) of stencil k for quadrant (z1, z2)."""
    if k == 0:
        return (z1, 0, -z1), (z2, 0, -z2)
    return (0, z1, 2 * z1), (0, z2, 2 * z2)


def _beta_from_diffs(u20, u02, u11, u21, u12, u22, dxdy, coeffs):
    c21, c22 = coeffs
    v = (u20 ** 2 + u02 ** 2 + u11 ** 2
         + c21 * (u21 ** 2 + u12 ** 2) + c22 * u22 ** 2
         + u20 * u21 + u02 * u12
         - (u20 + u02) * u22 / 6.0
         - (u21 + u12) * u22 / 12.0)
    return v / dxdy


class _ShiftCache:
    """Memoized BC-aware whole-grid shifts of one field."""

    def __init__(self, field: GridField):
        self.field = field
        self._cache: dict[tuple[int, int], np.ndarray] = {}

    def __call__(self, dj: int, di: int) -> np.ndarray:
        key = (dj, di)
        if key not in self._cache:
            self._cache[key] = self.field.shifted(dj, di)
        return self._cache[key]


def _quadrant_diffs(shift: _ShiftCache, ax: tuple[int, ...], ay: tuple[int, ...]):
    """The six order->=2 forward undivided differences along an ordered
    stencil, as whole-grid arrays."""
    f = {(a, b): shift(a, b) for a in ax for b in ay}

    def d2x(b):
        return f[(ax[2], b)] - 2.0 * f[(ax[1], b)] + f[(ax[0], b)]

    def d2y(a):
        return f[(a, ay[2])] - 2.0 * f[(a, ay[1])] + f[(a, ay[0])]

    u20 = d2x(ay[0])
    u02 = d2y(ax[0])
    u11 = (f[(ax[1], ay[1])] - f[(ax[0], ay[1])]
           - f[(ax[1], ay[0])] + f[(ax[0], ay[0])])
    u21 = d2x(ay[1]) - d2x(ay[0])
    u12 = d2y(ax[1]) - d2y(ax[0])
    u22 = d2x(ay[2]) - 2.0 * d2x(ay[1]) + d2x(ay[0])
    return u20, u02, u11, u21, u12, u22


def quadrant_beta_fields(field: GridField, formula: Formula2D = Formula2D.FULL,
                         ) -> dict[str, tuple[np.ndarray, np.ndarray]]:
    """(beta0, beta1) arrays for each quadrant, for every node at once."""
    if field.ndim != 2:
        raise ValueError("quadrant smoothness coefficients need a 2D field")
    coeffs = FULL_COEFFS if formula is Formula2D.FULL else PARTIAL_COEFFS
    dxdy = field.grid.dx * field.grid.dy
    shift = _ShiftCache(field)
    out = {}
    for key, (z1, z2) in QUADRANTS.items():
        betas = []
        for k in (0, 1):
            ax, ay = _stencil_offsets(z1, z2, k)
            betas.append(_beta_from_diffs(*_quadrant_diffs(shift, ax, ay),
                                          dxdy, coeffs))
        out[key] = (betas[0], betas[1])
    return out


def _beta_quadrant(field: GridField, i: int, j: int, zeta: str,
                   formula: Formula2D) -> tuple[float, float]:
    coeffs = FULL_COEFFS if formula is Formula2D.FULL else PARTIAL_COEFFS
    z1, z2 = QUADRANTS[zeta]
    dxdy = field.grid.dx * field.grid.dy
    betas = []
    for k in (0, 1):
        ax, ay = _stencil_offsets(z1, z2, k)
        f = {(a, b): ghost_value(field, j + a, i + b) for a in ax for b in ay}

        def d2x(b):
            return f[(ax[2], b)] - 2.0 * f[(ax[1], b)] + f[(ax[0], b)]

        def d2y(a):
            return f[(a, ay[2])] - 2.0 * f[(a, ay[1])] + f[(a, ay[0])]

        u20, u02 = d2x(ay[0]), d2y(ax[0])
        u11 = f[(ax[1], ay[1])] - f[(ax[0], ay[1])] - f[(ax[1], ay[0])] + f[(ax[0], ay[0])]
        u21 = d2x(ay[1]) - d2x(ay[0])
        u12 = d2y(ax[1]) - d2y(ax[0])
        u22 = d2x(ay[2]) - 2.0 * d2x(ay[1]) + d2x(ay[0])
        betas.append(float(_beta_from_diffs(u20, u02, u11, u21, u12, u22,
                                            dxdy, coeffs)))
    return betas[0], betas[1]


def beta_quadrant_full(field: GridField, i: int, j: int, zeta: str) -> tuple[float, float]:
    """(beta0, beta1) at node (i, j) for quadrant ``zeta``, full formula."""
    return _beta_quadrant(field, i, j, zeta, Formula2D.FULL)


def beta_quadrant_partial(field: GridField, i: int, j: int, zeta: str) -> tuple[float, float]:
    """Same with the total-order-2 restriction of the derivative sum."""
    return _beta_quadrant(field, i, j, zeta, Formula2D.PARTIAL)


def quadrant_betas(field: GridField, i: int, j: int,
                   formula: Formula2D = Formula2D.FULL) -> QuadrantBetas:
    return QuadrantBetas(*(_beta_quadrant(field, i, j, z, formula)
                           for z in ("--", "+-", "-+", "++")))


def _quadrant_omega(b0, b1, sigma_h, postmap: PostMap):
    if postmap is PostMap.WENO_Z:
        tau = np.abs(b0 - b1)
        z0 = 0.5 * (1.0 + (tau / (b0 + sigma_h)) ** 2)
        z1 = 0.5 * (1.0 + (tau / (b1 + sigma_h)) ** 2)
        return z0 / (z0 + z1)
    a0 = 1.0 / (b0 + sigma_h) ** 2
    a1 = 1.0 / (b1 + sigma_h) ** 2
    w = a0 / (a0 + a1)
    if postmap is PostMap.MAPPED_G:
        w = map_g(w)
    return w


def omega_field_2d(field: GridField, cfg: Indicator2DConfig) -> np.ndarray:
    """Combined smoothness weight at every node: min over the four
    quadrant weights (splitting baseline when so configured)."""
    if cfg.variant is Formula2D.SPLIT:
        return omega_split_field(field, cfg)
    sigma_h = cfg.sigma * field.grid.delta ** 2
    betas = quadrant_beta_fields(field, cfg.variant)
    omega = None
    for key in QUADRANTS:
        w = _quadrant_omega(*betas[key], sigma_h, cfg.postmap)
        omega = w if omega is None else np.minimum(omega, w)
    return omega


def omega_2d(field: GridField, i: int, j: int, cfg: Indicator2DConfig) -> float:
    if cfg.variant is Formula2D.SPLIT:
        return float(omega_split_field(field, cfg)[i, j])
    sigma_h = cfg.sigma * field.grid.delta ** 2
    qb = quadrant_betas(field, i, j, cfg.variant)
    vals = [_quadrant_omega(np.float64(b0), np.float64(b1), sigma_h, cfg.postmap)
            for b0, b1 in (qb.mm, qb.pm, qb.mp, qb.pp)]
    return float(min(vals))


def _axis_omega(field: GridField, axis: str, sigma_h: float,
                variant: Variant1D) -> np.ndarray:
    """1D indicator applied along one axis with the other frozen."""
    dj, di = (1, 0) if axis == "x" else (0, 1)
    h = field.grid.dx if axis == "x" else field.grid.dy
    d2 = (field.shifted(dj, di) - 2.0 * field.values + field.shifted(-dj, -di))
    s = (d2 / h) ** 2
    sf = field.like(s)
    b0m, b1m = sf.shifted(-dj, -di), s
    b0p, b1p = s, sf.shifted(dj, di)
    wm, wp = _combine_sides(b0m, b1m, b0p, b1p, sigma_h, variant)
    return np.minimum(wm, wp)


def omega_split_field(field: GridField, cfg: Indicator2DConfig) -> np.ndarray:
    """Dimensional-splitting baseline: min of the two axis-wise 1D weights."""
    variant = Variant1D.MAPPED_G if cfg.postmap is PostMap.MAPPED_G else (
        Variant1D.WENO_Z if cfg.postmap is PostMap.WENO_Z else Variant1D.RAW)
    wx = _axis_omega(field, "x", cfg.sigma * field.grid.dx ** 2, variant)
    wy = _axis_omega(field, "y", cfg.sigma * field.grid.dy ** 2, variant)
    return np.minimum(wx, wy)


def omega_split(field: GridField, i: int, j: int, cfg: Indicator2DConfig) -> float:
    return float(omega_split_field(field, cfg)[i, j])


# Cyclic walk around a node's eight neighbors, as (dj, di) steps.
_RING = ((1, 0), (1, 1), (0, 1), (-1, 1), (-1, 0), (-1, -1), (0, -1), (1, -1))


def phi_2d(omega: np.ndarray, field: GridField, cfg: Indicator2DConfig,
           ) -> tuple[np.ndarray, np.ndarray]:
    """Binary trust mask, plus an 'untrusted' diagnostic.

    phi is the plain threshold omega >= M.  Where phi = 0 and no two
    cyclically consecutive ring neighbors are trusted, the node likely sits
    at a crossing of singularity curves: every quadrant stencil is polluted,
    so the weight itself carries no usable information.  phi stays 0 there
    (conservative: the blend falls back to the monotone scheme) and the node
    is reported in the untrusted mask.
    """
    phi = (np.asarray(omega) >= cfg.M).astype(np.int8)
    if not cfg.crossing_fix:
        return phi, np.zeros_like(phi, dtype=bool)
    pf = field.like(phi.astype(np.float64))
    ring = [pf.shifted(dj, di) > 0.5 for dj, di in _RING]
    consec = np.zeros(phi.shape, dtype=bool)
    for k in range(len(ring)):
        consec |= ring[k] & ring[(k + 1) % len(ring)]
    untrusted = (phi == 0) & ~consec
    return phi, untrusted


def smooth_phi(omega, M: float):
    """Smooth alternative mask (exp(-M*w) - 1)/(exp(-M) - 1); rises
    monotonically from 0 at w=0 to 1 at w=1, steep near 0 for large M."""
    w = np.asarray(omega, dtype=np.float64)
    return np.expm1(-M * w) / np.expm1(-M)


def smoothness_2d(field: GridField, cfg: Indicator2DConfig) -> Smoothness2D:
    omega = omega_field_2d(field, cfg)
    phi, untrusted = phi_2d(omega, field, cfg)
    return Smoothness2D(omega=omega, phi=phi, untrusted=untrusted)
