"""Symmetries of the free Schrodinger equation acting on free solutions.

Each transform maps a free solution to another free solution. Gaussians
(and superpositions of them) are transformed exactly through their
parameters; any other evaluator is wrapped pointwise.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .qcore import NATURAL, PhysicalParams, bridged
from .states import FreeGaussian, Superposition, as_free_gaussian

# |1 + gamma t| below which the pointwise lens is bridged across its focus
FOCUS_GAP = 1e-4


def _termwise(w, op):
    if isinstance(w, Superposition):
        return Superposition(tuple((c, op(term)) for c, term in w.terms))
    return None


@dataclass(frozen=True)
class TimeShifted:
    inner: Callable
    shift: float

    def __call__(self, x, t):
        return self.inner(x, np.asarray(t, dtype=float) + self.shift)


@dataclass(frozen=True)
class Translated:
    inner: Callable
    offset: float

    def __call__(self, x, t):
        return self.inner(np.asarray(x, dtype=float) - self.offset, t)


@dataclass(frozen=True)
class Reflected:
    inner: Callable
    center: float = 0.0

    def __call__(self, x, t):
        return self.inner(2 * self.center - np.asarray(x, dtype=float), t)


@dataclass(frozen=True)
class Phased:
    inner: Callable
    theta: float

    def __call__(self, x, t):
        return np.exp(1j * self.theta) * self.inner(x, t)


@dataclass(frozen=True)
class Boosted:
    inner: Callable
    velocity: float
    params: PhysicalParams = NATURAL

    def __call__(self, x, t):
        hbar, mass = self.params.hbar, self.params.mass
        x = np.asarray(x, dtype=float)
        t = np.asarray(t, dtype=float)
        u = self.velocity
        return np.exp(1j * mass * u * (x - 0.5 * u * t) / hbar) * self.inner(x - u * t, t)


@dataclass(frozen=True)
class Dilated:
    inner: Callable
    scale: float

    def __call__(self, x, t):
        lam = self.scale
        return self.inner(np.asarray(x, dtype=float) / lam, np.asarray(t, dtype=float) / lam**2) / np.sqrt(lam)


@dataclass(frozen=True)
class Lensed:
    """Free solution whose t=0 data is multiplied by ``exp(i M gamma x^2 / 2 hbar)``."""

    inner: Callable
    gamma: float
    params: PhysicalParams = NATURAL

    def _direct(self, x, t):
        hbar, mass = self.params.hbar, self.params.mass
        z = 1 + self.gamma * t
        # continuous square root of z along real t: the branch flips by i
        # when the focus is crossed forward in time, by -i backwards
        root = np.where(z > 0, np.sqrt(np.abs(z)) + 0j, 1j * np.sign(t) * np.sqrt(np.abs(z)))
        chirp = np.exp(1j * mass * self.gamma * x**2 / (2 * hbar * z))
        return chirp * self.inner(x / z, t / z) / root

    def __call__(self, x, t):
        x = np.asarray(x, dtype=float)
        t = np.asarray(t, dtype=float)
        if self.gamma == 0:
            return self.inner(x, t)
        focus = -1.0 / self.gamma
        return bridged(self._direct, x, t, focus, FOCUS_GAP / abs(self.gamma))


def time_shift(w, s: float):
    """``w(x, t + s)``."""
    if s == 0:
        return w
    g = as_free_gaussian(w)
    if g is not None:
        hbar, mass = g.params.hbar, g.params.mass
        amp = g.amp * np.exp(1j * mass * g.v**2 * s / (2 * hbar)) / np.sqrt(1 + s / g.q0)
        return FreeGaussian(g.x0 + g.v * s, g.v, g.q0 + s, amp, g.params)
    return _termwise(w, lambda u: time_shift(u, s)) or TimeShifted(w, s)


def translate(w, a: float):
    """``w(x - a, t)``."""
    if a == 0:
        return w
    g = as_free_gaussian(w)
    if g is not None:
        return FreeGaussian(g.x0 + a, g.v, g.q0, g.amp, g.params)
    return _termwise(w, lambda u: translate(u, a)) or Translated(w, a)


def reflect(w, center: float = 0.0):
    """``w(2 center - x, t)``."""
    g = as_free_gaussian(w)
    if g is not None:
        return FreeGaussian(2 * center - g.x0, -g.v, g.q0, g.amp, g.params)
    return _termwise(w, lambda u: reflect(u, center)) or Reflected(w, center)


def phase(w, theta: float):
    if theta == 0:
        return w
    g = as_free_gaussian(w)
    if g is not None:
        return FreeGaussian(g.x0, g.v, g.q0, g.amp * np.exp(1j * theta), g.params)
    return _termwise(w, lambda u: phase(u, theta)) or Phased(w, theta)


def boost(w, velocity: float, params: PhysicalParams = NATURAL):
    """Galilean boost; t=0 data gains the factor ``exp(i M v x / hbar)``."""
    if velocity == 0:
        return w
    g = as_free_gaussian(w)
    if g is not None:
        amp = g.amp * np.exp(1j * g.params.mass * velocity * g.x0 / g.params.hbar)
        return FreeGaussian(g.x0, g.v + velocity, g.q0, amp, g.params)
    return _termwise(w, lambda u: boost(u, velocity, params)) or Boosted(w, velocity, params)


def dilate(w, scale: float):
    """Norm-preserving dilation ``scale^(-1/2) w(x/scale, t/scale^2)``."""
    if not scale > 0:
        raise ValueError("dilation scale must be positive")
    if scale == 1:
        return w
    g = as_free_gaussian(w)
    if g is not None:
        return FreeGaussian(scale * g.x0, g.v / scale, scale**2 * g.q0, g.amp / np.sqrt(scale), g.params)
    return _termwise(w, lambda u: dilate(u, scale)) or Dilated(w, scale)


def lens(w, gamma: float, params: PhysicalParams = NATURAL):
    """Quadratic chirp of the t=0 data, ``exp(i M gamma x^2 / 2 hbar)``."""
    if gamma == 0:
        return w
    g = as_free_gaussian(w)
    if g is not None:
        hbar, mass = g.params.hbar, g.params.mass
        q0 = 1.0 / (1.0 / g.q0 + gamma)
        amp = g.amp * np.exp(1j * mass * gamma * g.x0**2 / (2 * hbar))
        return FreeGaussian(g.x0, g.v + gamma * g.x0, q0, amp, g.params)
    return _termwise(w, lambda u: lens(u, gamma, params)) or Lensed(w, gamma, params)


def affine_chirp_state(phi, a, adot, b, bdot, xi0, t_free, params: PhysicalParams = NATURAL):
    """Free solution whose t=0 data is
    ``sqrt(a) exp(-i eps(x)) phi(a x + b, t_free)`` with
    ``eps = (M / hbar a)(adot x^2/2 + bdot x) + M xi0 / hbar``.

    This is the state reached at the end of any segment whose evolution is
    ``phi`` pushed through a linear coordinate map ``X = a xi + b``.
    """
    hbar, mass = params.hbar, params.mass
    if not a > 0:
        raise ValueError("stretch factor must be positive")
    out = time_shift(phi, t_free)
    out = translate(out, -b)
    out = dilate(out, 1.0 / a)
    out = lens(out, -adot / a, params)
    out = boost(out, -bdot / a, params)
    return phase(out, -mass * xi0 / hbar)
