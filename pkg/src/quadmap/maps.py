"""Closed-form maps from free-particle solutions to oscillator, inverted
oscillator and free-fall solutions, plus their inverses.

Conventions: a trapped solution ``psi(xi, tau)`` obeys
``i hbar d_tau psi = -(hbar^2 / 2M) d_xi^2 psi + V psi``. Maps return
evaluators that broadcast over numpy arrays like every other evaluator.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .qcore import NATURAL, PhysicalParams, bridged

# |omega tau - pi/2| below which the tan/cos map is not evaluated
EDGE_TOL = 1e-9
# half-width (in omega tau) of the interpolation bridge across a branch edge
EDGE_BRIDGE = 1e-4


class BranchError(ValueError):
    """Evaluation requested outside a map's principal time domain."""


@dataclass(frozen=True)
class TrapParams:
    """Spring constant ``k``, trap centre and the stretch parameter ``b``.

    ``b`` defaults to the smooth choice ``1/omega``. For inverted traps the
    sign of ``k`` is ignored; only ``|k|`` enters.
    """

    k: float
    center: float = 0.0
    b: float | None = None
    params: PhysicalParams = NATURAL

    def __post_init__(self):
        if self.k == 0 or not np.isfinite(self.k):
            raise ValueError(f"spring constant must be finite and nonzero, got {self.k}")
        if self.b is None:
            object.__setattr__(self, "b", 1.0 / self.omega)
        if not self.b > 0:
            raise ValueError(f"stretch parameter b must be positive, got {self.b}")

    @property
    def omega(self) -> float:
        return float(np.sqrt(abs(self.k) / self.params.mass))

    @property
    def period(self) -> float:
        return 2 * np.pi / self.omega

    @property
    def smooth(self) -> bool:
        return bool(np.isclose(self.b * self.omega, 1.0, rtol=1e-12, atol=0.0))

    def require_smooth(self, what: str):
        if not self.smooth:
            raise ValueError(f"{what} requires the smooth choice b = 1/omega (got b*omega = {self.b * self.omega})")


@dataclass(frozen=True)
class CoordinateMap:
    """Position map, time map and form factor of one equivalence map.

    The mapped wavefunction is ``psi(xi, tau) = phi(X(xi, tau), T(tau)) / F(xi, tau)``.
    """

    position_map: Callable
    time_map: Callable
    form_factor: Callable
    principal_domain: tuple = (-np.inf, np.inf)
    inverse_position: Callable | None = None
    inverse_time: Callable | None = None
    edge_tol: float = 0.0

    def check(self, tau):
        lo, hi = self.principal_domain
        tau = np.asarray(tau, dtype=float)
        if np.any(tau <= lo + self.edge_tol) or np.any(tau >= hi - self.edge_tol):
            bad = tau[(tau <= lo + self.edge_tol) | (tau >= hi - self.edge_tol)]
            raise BranchError(
                f"tau={np.ravel(bad)[0]!r} outside the principal domain ({lo!r}, {hi!r}); "
                "use extend_half_period for longer times"
            )

    def forward(self, xi, tau):
        self.check(tau)
        return self.position_map(xi, tau), self.time_map(tau)


@dataclass(frozen=True)
class MappedWave:
    phi: Callable
    cmap: CoordinateMap

    def __call__(self, xi, tau):
        xi = np.asarray(xi, dtype=float)
        tau = np.asarray(tau, dtype=float)
        x, t = self.cmap.forward(xi, tau)
        return self.phi(x, t) / self.cmap.form_factor(xi, tau)


@dataclass(frozen=True)
class UnmappedWave:
    """Inverse of :class:`MappedWave`: ``phi(x, t) = psi(xi, tau) * F(xi, tau)``."""

    psi: Callable
    cmap: CoordinateMap

    def __call__(self, x, t):
        x = np.asarray(x, dtype=float)
        t = np.asarray(t, dtype=float)
        tau = self.cmap.inverse_time(t)
        xi = self.cmap.inverse_position(x, t)
        return self.psi(xi, tau) * self.cmap.form_factor(xi, tau)


# ---------------------------------------------------------------- form factors


def form_factor_f(x, t, b, params: PhysicalParams = NATURAL):
    if not b > 0:
        raise ValueError("b must be positive")
    hbar, mass = params.hbar, params.mass
    x = np.asarray(x, dtype=float)
    t = np.asarray(t, dtype=float)
    return np.exp(1j * mass * t * x**2 / (2 * hbar * (t**2 + b**2))) / (1 + t**2 / b**2) ** 0.25


def form_factor_inverted(x, t, b, params: PhysicalParams = NATURAL):
    """``form_factor_f`` continued to ``b^2 -> -b^2``; finite for ``|t| < b``."""
    hbar, mass = params.hbar, params.mass
    x = np.asarray(x, dtype=float)
    t = np.asarray(t, dtype=float)
    return np.exp(-1j * mass * t * x**2 / (2 * hbar * (b**2 - t**2))) / (1 - t**2 / b**2) ** 0.25


def form_factor_g(x, t, a, params: PhysicalParams = NATURAL):
    """Unit-modulus free-fall factor ``exp(i (M a t / hbar)(x - a t^2/2) + i (M a^2 / 6 hbar) t^3)``."""
    hbar, mass = params.hbar, params.mass
    x = np.asarray(x, dtype=float)
    t = np.asarray(t, dtype=float)
    return np.exp(1j * mass * a * t * (x - 0.5 * a * t**2) / hbar + 1j * mass * a**2 * t**3 / (6 * hbar))


# ------------------------------------------------------------- trapped maps


def _trapped_map(tp: TrapParams) -> CoordinateMap:
    w, b, c = tp.omega, tp.b, tp.center
    stretch = np.sqrt(b * w)
    params = tp.params

    def position(xi, tau):
        return (xi - c) * stretch / np.cos(w * tau) + c

    def time(tau):
        return b * np.tan(w * tau)

    def factor(xi, tau):
        return form_factor_f((xi - c) * stretch / np.cos(w * tau), b * np.tan(w * tau), b, params)

    def inv_position(x, t):
        return (x - c) / (stretch * np.sqrt(1 + t**2 / b**2)) + c

    def inv_time(t):
        return np.arctan(t / b) / w

    half = np.pi / (2 * w)
    return CoordinateMap(position, time, factor, (-half, half), inv_position, inv_time, EDGE_TOL / w)


def free_to_trapped_map(tp: TrapParams) -> CoordinateMap:
    if tp.center != 0:
        tp.require_smooth("a laterally shifted trap")
    return _trapped_map(tp)


def coord_free_to_trapped(xi, tau, tp: TrapParams):
    """``(x, t)`` for trap coordinates ``(xi, tau)``."""
    return free_to_trapped_map(tp).forward(xi, tau)


def coord_trapped_to_free(x, t, tp: TrapParams):
    cmap = free_to_trapped_map(tp)
    t = np.asarray(t, dtype=float)
    return cmap.inverse_position(np.asarray(x, dtype=float), t), cmap.inverse_time(t)


def apply_lateral_shift(inner: Callable, xi0: float, tp: TrapParams) -> MappedWave:
    """Map the free solution ``inner`` into a trap centred at ``xi0``.

    The argument of ``inner`` is compensated by ``+xi0`` while the dividing
    form factor stays unshifted, so the result equals ``inner(xi, 0)`` at
    ``tau = 0``.
    """
    tp.require_smooth("a laterally shifted trap")
    shifted = TrapParams(tp.k, xi0, tp.b, tp.params)
    return MappedWave(inner, _trapped_map(shifted))


def map_free_to_trapped(phi: Callable, tp: TrapParams) -> MappedWave:
    """Trapped solution on the principal domain ``|omega tau| < pi/2``."""
    if tp.k < 0:
        raise ValueError("use map_free_to_inverted for negative spring constants")
    if tp.center != 0:
        return apply_lateral_shift(phi, tp.center, tp)
    return MappedWave(phi, _trapped_map(tp))


def map_trapped_to_free(psi: Callable, tp: TrapParams) -> UnmappedWave:
    return UnmappedWave(psi, free_to_trapped_map(tp))


@dataclass(frozen=True)
class HalfPeriodExtension:
    """Continue a principal-branch oscillator solution to all times with
    ``psi(xi, tau + pi/omega) = exp(-i pi/2) psi(2c - xi, tau)``.

    Points within ``EDGE_BRIDGE / omega`` of a branch edge are interpolated
    from both sides, since tan and 1/cos lose all precision there.
    """

    principal: Callable
    omega: float
    center: float = 0.0

    def _reduced(self, xi, tau):
        xi = np.asarray(xi, dtype=float)
        tau = np.asarray(tau, dtype=float)
        n = np.round(self.omega * tau / np.pi)
        tau_r = tau - n * np.pi / self.omega
        sign = np.where(np.mod(n, 2) == 0, 1.0, -1.0)
        xi_r = self.center + sign * (xi - self.center)
        return np.exp(-0.5j * np.pi * n) * self.principal(xi_r, tau_r)

    def __call__(self, xi, tau):
        tau = np.asarray(tau, dtype=float)
        half = np.pi / self.omega
        edge = (np.floor(tau / half) + 0.5) * half
        return bridged(self._reduced, xi, tau, edge, EDGE_BRIDGE / self.omega)


def extend_half_period(psi_principal: Callable, tp: TrapParams) -> HalfPeriodExtension:
    if tp.k < 0:
        raise ValueError("inverted oscillators have no periodic continuation")
    return HalfPeriodExtension(psi_principal, tp.omega, tp.center)


# ---------------------------------------------------------- trap to trap


@dataclass(frozen=True)
class TrapToTrapWave:
    psi: Callable
    source: TrapParams
    target: TrapParams

    def __call__(self, xi, tau):
        xi = np.asarray(xi, dtype=float)
        tau = np.asarray(tau, dtype=float)
        src, dst = self.source, self.target
        w, W = src.omega, dst.omega
        _trapped_map(dst).check(tau)
        c, s = np.cos(W * tau), np.sin(W * tau)
        ratio = src.k / dst.k
        root = np.sqrt(c**2 + ratio * s**2)
        xi_src = src.center + ((xi - dst.center) + (dst.center - src.center) * c) / root
        tau_src = np.arctan(np.sqrt(ratio) * np.tan(W * tau)) / w
        u = (xi - dst.center) / c
        t = np.tan(W * tau) / W
        factor = form_factor_f(u + dst.center - src.center, t, 1 / w, src.params) / form_factor_f(u, t, 1 / W, dst.params)
        return self.psi(xi_src, tau_src) * factor


def map_trap_to_trap(psi: Callable, source: TrapParams, target: TrapParams) -> TrapToTrapWave:
    """Solution in trap ``target`` that coincides with ``psi`` (a solution in
    ``source``) at ``tau = 0``; principal domain of ``target``."""
    if source.k <= 0 or target.k <= 0:
        raise ValueError("trap-to-trap maps need positive spring constants on both sides")
    source.require_smooth("trap-to-trap map (source)")
    target.require_smooth("trap-to-trap map (target)")
    if source.params != target.params:
        raise ValueError("both traps must share physical parameters")
    return TrapToTrapWave(psi, source, target)


# ------------------------------------------------------------- inverted


def free_to_inverted_map(tp: TrapParams) -> CoordinateMap:
    tp.require_smooth("the inverted-oscillator map")
    w, b, c = tp.omega, tp.b, tp.center
    params = tp.params

    def position(xi, tau):
        return (xi - c) / np.cosh(w * tau) + c

    def time(tau):
        return np.tanh(w * tau) / w

    def factor(xi, tau):
        return form_factor_inverted((xi - c) / np.cosh(w * tau), np.tanh(w * tau) / w, b, params)

    def chart(t):
        if np.any(np.abs(t) >= b):
            raise BranchError(f"free times |t| >= {b} lie beyond the inverted-oscillator chart")

    def inv_position(x, t):
        chart(t)
        return (x - c) / np.sqrt(1 - t**2 / b**2) + c

    def inv_time(t):
        chart(t)
        return np.arctanh(np.asarray(t) / b) / w

    return CoordinateMap(position, time, factor, (-np.inf, np.inf), inv_position, inv_time)


def map_free_to_inverted(phi: Callable, tp: TrapParams) -> MappedWave:
    """Solution for the potential ``-|k| (xi - c)^2 / 2``, valid for all tau."""
    return MappedWave(phi, free_to_inverted_map(tp))


def map_inverted_to_free(psi: Callable, tp: TrapParams) -> UnmappedWave:
    """Inverse chart; only covers free times ``|t| < 1/omega``."""
    return UnmappedWave(psi, free_to_inverted_map(tp))


# ------------------------------------------------------------- free fall


def free_to_falling_map(a: float, params: PhysicalParams = NATURAL) -> CoordinateMap:
    def position(xi, tau):
        return xi + 0.5 * a * tau**2

    def time(tau):
        return tau

    def factor(xi, tau):
        return form_factor_g(xi + 0.5 * a * tau**2, tau, a, params)

    def inv_position(x, t):
        return x - 0.5 * a * t**2

    def inv_time(t):
        return t

    return CoordinateMap(position, time, factor, (-np.inf, np.inf), inv_position, inv_time)


def map_free_to_falling(phi: Callable, a: float, params: PhysicalParams = NATURAL) -> MappedWave:
    """Solution for the potential ``M a xi``."""
    return MappedWave(phi, free_to_falling_map(a, params))


def map_falling_to_free(psi: Callable, a: float, params: PhysicalParams = NATURAL) -> UnmappedWave:
    return UnmappedWave(psi, free_to_falling_map(a, params))
