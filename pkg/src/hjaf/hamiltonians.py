"""Hamiltonian evaluation interface H(x, y, p, q) with derivative closures.

Partial derivatives default to analytic closures supplied per problem;
when a closure is missing, a centered finite-difference fallback with a
relative step is wired in, good to second order for smooth H.  The global
velocity bounds vmax_p >= max|H_p| and vmax_q >= max|H_q| (over the
relevant state range) feed the time-step restriction check.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

ArrayFn = Callable[..., np.ndarray]


@dataclass(frozen=True)
class Hamiltonian:
    eval: ArrayFn                 # (x, y, p, q) -> value
    dp: ArrayFn                   # dH/dp
    dq: ArrayFn                   # dH/dq
    dx_: ArrayFn                  # dH/dx at frozen (p, q)
    dy_: ArrayFn                  # dH/dy at frozen (p, q)
    vmax_p: float
    vmax_q: float
    space_dependent: bool = False
    is_eikonal: bool = False
    # Optional fast interval bounds max|H_p| over p in [lo, hi] at frozen q
    # (and the q analog).  Must equal the generic sampled scan; supply them
    # only when |H_p| is monotone/affine in p so the endpoint maximum is
    # exact.  Signature (x, y, lo, hi, frozen_other) -> array.
    alpha_p: ArrayFn | None = None
    alpha_q: ArrayFn | None = None


def _fd_p(h):
    def dp(x, y, p, q):
        step = 1e-6 * np.maximum(1.0, np.abs(p))
        return (h(x, y, p + step, q) - h(x, y, p - step, q)) / (2.0 * step)
    return dp


def _fd_q(h):
    def dq(x, y, p, q):
        step = 1e-6 * np.maximum(1.0, np.abs(q))
        return (h(x, y, p, q + step) - h(x, y, p, q - step)) / (2.0 * step)
    return dq


def _fd_x(h):
    def dx_(x, y, p, q):
        step = 1e-6 * np.maximum(1.0, np.abs(x))
        return (h(x + step, y, p, q) - h(x - step, y, p, q)) / (2.0 * step)
    return dx_


def _fd_y(h):
    def dy_(x, y, p, q):
        step = 1e-6 * np.maximum(1.0, np.abs(y))
        return (h(x, y + step, p, q) - h(x, y - step, p, q)) / (2.0 * step)
    return dy_


def make_hamiltonian(eval_fn: ArrayFn, *, dp: ArrayFn | None = None,
                     dq: ArrayFn | None = None, dx_: ArrayFn | None = None,
                     dy_: ArrayFn | None = None, vmax_p: float, vmax_q: float,
                     space_dependent: bool = False, is_eikonal: bool = False,
                     alpha_p: ArrayFn | None = None,
                     alpha_q: ArrayFn | None = None) -> Hamiltonian:
    """Assemble a Hamiltonian, filling missing derivatives with centered
    finite differences."""
    if vmax_p <= 0 or vmax_q <= 0:
        raise ValueError("velocity bounds must be positive")
    return Hamiltonian(
        eval=eval_fn,
        dp=dp if dp is not None else _fd_p(eval_fn),
        dq=dq if dq is not None else _fd_q(eval_fn),
        dx_=dx_ if dx_ is not None else (_zero if not space_dependent else _fd_x(eval_fn)),
        dy_=dy_ if dy_ is not None else (_zero if not space_dependent else _fd_y(eval_fn)),
        vmax_p=vmax_p, vmax_q=vmax_q,
        space_dependent=space_dependent, is_eikonal=is_eikonal,
        alpha_p=alpha_p, alpha_q=alpha_q,
    )


def _zero(x, y, p, q):
    return np.zeros(np.broadcast(x, y, p, q).shape)


def transport_hamiltonian() -> Hamiltonian:
    """H = p + q: translation at unit speed along both axes."""
    one = lambda x, y, p, q: np.ones(np.broadcast(x, y, p, q).shape)
    unit_bound = lambda x, y, lo, hi, other: np.ones(np.broadcast(lo, hi).shape)
    return make_hamiltonian(lambda x, y, p, q: p + q, dp=one, dq=one,
                            vmax_p=1.0, vmax_q=1.0,
                            alpha_p=unit_bound, alpha_q=unit_bound)


def eikonal_hamiltonian() -> Hamiltonian:
    """H = sqrt(p^2 + q^2): unit-speed front expansion.

    The gradient is undefined at p = q = 0; the closures return 0 there
    (a valid subgradient choice) to keep the switching-parameter formula
    finite at flat or kinked nodes.
    """
    def ev(x, y, p, q):
        return np.sqrt(p * p + q * q)

    def dp(x, y, p, q):
        r = np.sqrt(p * p + q * q)
        return np.divide(p, r, out=np.zeros(np.broadcast(p, r).shape), where=r > 0)

    def dq(x, y, p, q):
        r = np.sqrt(p * p + q * q)
        return np.divide(q, r, out=np.zeros(np.broadcast(q, r).shape), where=r > 0)

    return make_hamiltonian(ev, dp=dp, dq=dq, vmax_p=1.0, vmax_q=1.0,
                            is_eikonal=True)


def rotation_hamiltonian(radius: float) -> Hamiltonian:
    """H = -y p + x q: rigid rotation about the origin; ``radius`` bounds
    |x|, |y| over the computational domain for the velocity bounds."""
    return make_hamiltonian(
        lambda x, y, p, q: -y * p + x * q,
        dp=lambda x, y, p, q: np.broadcast_to(np.asarray(-y, dtype=float),
                                              np.broadcast(x, y, p, q).shape),
        dq=lambda x, y, p, q: np.broadcast_to(np.asarray(x, dtype=float),
                                              np.broadcast(x, y, p, q).shape),
        dx_=lambda x, y, p, q: np.broadcast_to(np.asarray(q, dtype=float),
                                               np.broadcast(x, y, p, q).shape),
        dy_=lambda x, y, p, q: np.broadcast_to(np.asarray(-p, dtype=float),
                                               np.broadcast(x, y, p, q).shape),
        vmax_p=radius, vmax_q=radius, space_dependent=True,
        alpha_p=lambda x, y, lo, hi, other: np.broadcast_to(
            np.abs(np.asarray(y, dtype=float)), np.broadcast(y, lo).shape),
        alpha_q=lambda x, y, lo, hi, other: np.broadcast_to(
            np.abs(np.asarray(x, dtype=float)), np.broadcast(x, lo).shape),
    )


def shifted_quadratic_hamiltonian(slope_bound: float) -> Hamiltonian:
    """H = (p+1)^2 + (q+1)^2, a Burgers-like convex hamiltonian;
    ``slope_bound`` bounds |p|, |q| over the run for the velocity bounds."""
    def endpoint_bound(x, y, lo, hi, other):
        # |2(p+1)| is affine in p: the interval max sits at an endpoint
        return np.maximum(np.abs(2.0 * (lo + 1.0)), np.abs(2.0 * (hi + 1.0)))

    return make_hamiltonian(
        lambda x, y, p, q: (p + 1.0) ** 2 + (q + 1.0) ** 2,
        dp=lambda x, y, p, q: 2.0 * (p + 1.0) * np.ones(np.broadcast(x, y, p, q).shape),
        dq=lambda x, y, p, q: 2.0 * (q + 1.0) * np.ones(np.broadcast(x, y, p, q).shape),
        vmax_p=2.0 * (1.0 + slope_bound), vmax_q=2.0 * (1.0 + slope_bound),
        alpha_p=endpoint_bound, alpha_q=endpoint_bound,
    )
