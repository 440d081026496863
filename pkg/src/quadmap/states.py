"""Closed-form free-particle packets and oscillator eigenstates."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .qcore import NATURAL, PhysicalParams

MAX_EIGEN_N = 50


@dataclass(frozen=True)
class GaussianPacket:
    """Freely evolving Gaussian with centre ``x0``, momentum ``p0`` and spread ``sigma0``.

    ``p0`` is the expectation value of momentum, so the packet centre moves
    as ``x0 + p0 t / M``.
    """

    x0: float = 0.0
    p0: float = 0.0
    sigma0: float = 1.0
    params: PhysicalParams = NATURAL

    def __post_init__(self):
        if not self.sigma0 > 0:
            raise ValueError(f"sigma0 must be positive, got {self.sigma0}")

    def sigma_t(self, t):
        hbar, mass = self.params.hbar, self.params.mass
        return self.sigma0 + 1j * np.asarray(t, dtype=float) * hbar / (self.sigma0 * mass)

    def __call__(self, x, t):
        return gaussian_value(self, x, t)

    def to_free_gaussian(self) -> "FreeGaussian":
        hbar, mass = self.params.hbar, self.params.mass
        return FreeGaussian(
            x0=self.x0,
            v=self.p0 / mass,
            q0=-1j * mass * self.sigma0**2 / hbar,
            amp=(np.sqrt(np.pi) * self.sigma0) ** -0.5 + 0j,
            params=self.params,
        )


def gaussian_value(pkt: GaussianPacket, x, t):
    hbar, mass = pkt.params.hbar, pkt.params.mass
    x = np.asarray(x, dtype=float)
    t = np.asarray(t, dtype=float)
    v0 = pkt.p0 / mass
    s0 = pkt.sigma0
    s = pkt.sigma_t(t)
    y = x - pkt.x0
    exponent = (
        1j * mass * v0 * y * s0 / (hbar * s)
        - y**2 / (2 * s0 * s)
        - 1j * 0.5 * mass * v0**2 * t * s0 / (hbar * s)
    )
    return np.exp(exponent) / np.sqrt(np.sqrt(np.pi) * s)


@dataclass(frozen=True)
class FreeGaussian:
    """General free Gaussian solution in complex-width form.

    ``amp * (1 + t/q0)^(-1/2) * exp(iM(x - x0 - v t)^2 / (2 hbar (q0 + t))
    + iMv(x - x0)/hbar - iMv^2 t / (2 hbar))`` with ``Im q0 < 0``.

    The family is closed under time shifts, translations, boosts, dilations
    and quadratic chirps, which keeps every such transform exact.
    """

    x0: float
    v: float
    q0: complex
    amp: complex
    params: PhysicalParams = NATURAL

    def __post_init__(self):
        if not np.imag(self.q0) < 0:
            raise ValueError(f"q0 must have negative imaginary part, got {self.q0}")

    def __call__(self, x, t):
        hbar, mass = self.params.hbar, self.params.mass
        x = np.asarray(x, dtype=float)
        t = np.asarray(t, dtype=float)
        q = self.q0 + t
        y = x - self.x0
        exponent = (
            1j * mass * (y - self.v * t) ** 2 / (2 * hbar * q)
            + 1j * mass * self.v * y / hbar
            - 1j * mass * self.v**2 * t / (2 * hbar)
        )
        return self.amp * np.exp(exponent) / np.sqrt(1 + t / self.q0)

    def quadratic_form(self):
        """Coefficients ``(log amp, a, b, c)`` of the t=0 exponent ``a x^2 + b x + c``."""
        hbar, mass = self.params.hbar, self.params.mass
        a = 1j * mass / (2 * hbar * self.q0)
        b = -2 * a * self.x0 + 1j * mass * self.v / hbar
        c = a * self.x0**2 - 1j * mass * self.v * self.x0 / hbar
        return a, b, c


def gaussian_overlap(g1: FreeGaussian, g2: FreeGaussian) -> complex:
    """Exact <g1|g2> at t = 0."""
    a1, b1, c1 = g1.quadratic_form()
    a2, b2, c2 = g2.quadratic_form()
    A = np.conj(a1) + a2
    B = np.conj(b1) + b2
    C = np.conj(c1) + c2
    return complex(np.conj(g1.amp) * g2.amp * np.sqrt(np.pi / -A) * np.exp(C - B**2 / (4 * A)))


def as_free_gaussian(w) -> FreeGaussian | None:
    if isinstance(w, FreeGaussian):
        return w
    if isinstance(w, GaussianPacket):
        return w.to_free_gaussian()
    return None


@dataclass(frozen=True)
class Superposition:
    """Pointwise linear combination ``sum c_j w_j``; never renormalised implicitly."""

    terms: tuple = field(default_factory=tuple)

    def __post_init__(self):
        terms = tuple((complex(c), w) for c, w in self.terms)
        if not terms:
            raise ValueError("a superposition needs at least one term")
        object.__setattr__(self, "terms", terms)

    def __call__(self, x, t):
        total = None
        for c, w in self.terms:
            value = c * np.asarray(w(x, t), dtype=complex)
            total = value if total is None else total + value
        return total

    def is_gaussian(self) -> bool:
        return all(as_free_gaussian(w) is not None for _, w in self.terms)

    def norm(self) -> float:
        """Exact norm for Gaussian terms."""
        if not self.is_gaussian():
            raise TypeError("exact norm requires Gaussian terms")
        gs = [(c, as_free_gaussian(w)) for c, w in self.terms]
        s = sum(np.conj(ci) * cj * gaussian_overlap(gi, gj) for ci, gi in gs for cj, gj in gs)
        return float(np.sqrt(s.real))

    def normalized(self) -> "Superposition":
        n = self.norm()
        return Superposition(tuple((c / n, w) for c, w in self.terms))


def superpose(terms: Sequence[tuple[complex, Callable]]) -> Superposition:
    return Superposition(tuple(terms))


def hermite_functions(n_max: int, y) -> np.ndarray:
    """Normalised Hermite functions ``h_0..h_n_max`` at ``y``, shape ``(n_max+1, *y.shape)``.

    Uses the three-term recurrence on the Gaussian-weighted, normalised
    polynomials so that no factorials or large powers appear.
    """
    y = np.asarray(y, dtype=float)
    out = np.empty((n_max + 1,) + y.shape)
    out[0] = np.pi**-0.25 * np.exp(-0.5 * y**2)
    if n_max >= 1:
        out[1] = np.sqrt(2.0) * y * out[0]
    for n in range(2, n_max + 1):
        out[n] = np.sqrt(2.0 / n) * y * out[n - 1] - np.sqrt((n - 1) / n) * out[n - 2]
    return out


@dataclass(frozen=True)
class HOEigenstate:
    n: int
    omega: float
    center: float = 0.0
    params: PhysicalParams = NATURAL

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 0:
            raise ValueError(f"n must be a nonnegative integer, got {self.n}")
        if self.n > MAX_EIGEN_N:
            raise ValueError(f"n={self.n} exceeds the supported bound {MAX_EIGEN_N}")
        if not self.omega > 0:
            raise ValueError("omega must be positive")

    @property
    def energy(self) -> float:
        return self.params.hbar * self.omega * (self.n + 0.5)

    def __call__(self, xi, tau):
        return ho_eigenstate_value(self, xi, tau)


def ho_eigenstate_value(e: HOEigenstate, xi, tau):
    hbar, mass = e.params.hbar, e.params.mass
    scale = np.sqrt(mass * e.omega / hbar)
    xi = np.asarray(xi, dtype=float)
    tau = np.asarray(tau, dtype=float)
    h = hermite_functions(e.n, scale * (xi - e.center))[e.n]
    return np.sqrt(scale) * h * np.exp(-1j * (e.n + 0.5) * e.omega * tau)
