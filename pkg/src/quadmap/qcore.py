"""Shared types and grid numerics.

A wave evaluator is any callable ``w(x, t)`` returning complex amplitudes.
Evaluators in this package broadcast over numpy arrays in both arguments,
so sampling a whole grid is a single call.
"""
from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Protocol

import numpy as np


class WaveEvaluator(Protocol):
    def __call__(self, x, t): ...


class EvaluationError(RuntimeError):
    """An evaluator failed at a specific coordinate."""

    def __init__(self, message, x=None, t=None):
        super().__init__(message)
        self.x = x
        self.t = t


@dataclass(frozen=True)
class PhysicalParams:
    hbar: float = 1.0
    mass: float = 1.0

    def __post_init__(self):
        if not (self.hbar > 0 and self.mass > 0):
            raise ValueError(f"hbar and mass must be positive, got {self.hbar}, {self.mass}")


NATURAL = PhysicalParams()


@dataclass(frozen=True)
class Grid:
    """Uniform sampling window ``[x_min, x_max]`` with ``n_points`` nodes."""

    x_min: float
    x_max: float
    n_points: int

    def __post_init__(self):
        if not self.x_min < self.x_max:
            raise ValueError(f"x_min ({self.x_min}) must be below x_max ({self.x_max})")
        if int(self.n_points) != self.n_points or self.n_points < 2:
            raise ValueError(f"n_points must be an integer >= 2, got {self.n_points}")

    @property
    def dx(self) -> float:
        return (self.x_max - self.x_min) / (self.n_points - 1)

    @property
    def x(self) -> np.ndarray:
        return self.x_min + np.arange(self.n_points) * self.dx

    @property
    def width(self) -> float:
        return self.x_max - self.x_min


def thread_count() -> int:
    """Worker cap from ``QUADMAP_THREADS`` (0 or unset means one per CPU)."""
    raw = os.environ.get("QUADMAP_THREADS", "0").strip() or "0"
    try:
        n = int(raw)
    except ValueError:
        raise ValueError(f"QUADMAP_THREADS must be an integer, got {raw!r}") from None
    if n < 0:
        raise ValueError("QUADMAP_THREADS must be >= 0")
    return n if n > 0 else (os.cpu_count() or 1)


_CHUNK = 8192


def _evaluate(w: Callable, x: np.ndarray, t: float) -> np.ndarray:
    try:
        values = np.asarray(w(x, t), dtype=complex)
    except EvaluationError:
        raise
    except Exception as exc:  # locate the offending coordinate
        for xi in np.atleast_1d(x):
            try:
                w(np.asarray(xi), t)
            except Exception:
                raise EvaluationError(f"evaluator failed at x={xi!r}, t={t!r}: {exc}", xi, t) from exc
        raise EvaluationError(f"evaluator failed at t={t!r}: {exc}", None, t) from exc
    values = np.broadcast_to(values, x.shape).copy()
    bad = ~np.isfinite(values)
    if bad.any():
        i = int(np.argmax(bad))
        raise EvaluationError(f"non-finite amplitude at x={x[i]!r}, t={t!r}", x[i], t)
    return values


def sample_on_grid(w: Callable, g: Grid, t: float) -> np.ndarray:
    """Evaluate ``w`` at every node of ``g`` at time ``t``."""
    x = g.x
    workers = min(thread_count(), max(1, len(x) // _CHUNK))
    if workers <= 1:
        return _evaluate(w, x, t)
    chunks = np.array_split(x, workers)
    with ThreadPoolExecutor(max_workers=workers) as pool:
        parts = list(pool.map(lambda c: _evaluate(w, c, t), chunks))
    return np.concatenate(parts)


def trapezoid_weights(n: int, dx: float) -> np.ndarray:
    wts = np.full(n, dx)
    if n > 1:
        wts[0] = wts[-1] = 0.5 * dx
    return wts


def integrate(values: np.ndarray, dx: float) -> complex | float:
    """Trapezoid rule with half end weights."""
    values = np.asarray(values)
    if values.size == 0:
        raise ValueError("cannot integrate an empty vector")
    if values.size == 1:
        return values[0] * 0.0
    return np.dot(trapezoid_weights(values.size, dx), values)


def l2_norm(samples, dx: float) -> float:
    if not dx > 0:
        raise ValueError("dx must be positive")
    samples = np.asarray(samples)
    if samples.size == 0:
        raise ValueError("l2_norm of an empty vector")
    return float(np.sqrt(integrate(np.abs(samples) ** 2, dx)))


def l2_distance(a, b, dx: float) -> float:
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape != b.shape:
        raise ValueError(f"length mismatch: {a.shape} vs {b.shape}")
    return l2_norm(a - b, dx)


def inner_product(a, b, dx: float) -> complex:
    """<a|b> by trapezoid quadrature."""
    return complex(integrate(np.conj(np.asarray(a)) * np.asarray(b), dx))


_BRIDGE_NODES = np.array([-2.0, -1.0, 1.0, 2.0])


def _lagrange_weights(s: np.ndarray) -> np.ndarray:
    nodes = _BRIDGE_NODES
    w = np.ones((len(nodes),) + s.shape)
    for j, nj in enumerate(nodes):
        for m, nm in enumerate(nodes):
            if m != j:
                w[j] *= (s - nm) / (nj - nm)
    return w


def bridged(evaluate: Callable, x, t, t_sing, delta: float) -> np.ndarray:
    """Evaluate ``evaluate(x, t)`` but replace points within ``delta`` of
    ``t_sing`` by cubic interpolation through ``t_sing +- delta, +- 2 delta``.

    Used where a closed form is exact but numerically unusable, e.g. at the
    branch edges of the tan/arctan time map or at a lens focus.
    """
    x, t, t_sing = np.broadcast_arrays(np.asarray(x, float), np.asarray(t, float), np.asarray(t_sing, float))
    shape = x.shape
    x, t, t_sing = x.ravel(), t.ravel(), t_sing.ravel()
    near = np.abs(t - t_sing) < delta
    out = np.empty(x.shape, dtype=complex)
    far = ~near
    if far.any():
        out[far] = evaluate(x[far], t[far])
    if near.any():
        xs, ts = x[near], t_sing[near]
        wts = _lagrange_weights((t[near] - ts) / delta)
        acc = np.zeros(xs.shape, dtype=complex)
        for j, nj in enumerate(_BRIDGE_NODES):
            acc += wts[j] * evaluate(xs, ts + nj * delta)
        out[near] = acc
    return out.reshape(shape)
