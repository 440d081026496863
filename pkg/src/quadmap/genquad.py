"""Maps from free solutions to time-dependent quadratic potentials built
from a stretch profile A(tau), a drift B(tau) and a phase reference Xi0(tau).

The spatial map is ``X = A xi + B`` and the time map ``T = int A^2``. The
mapped wavefunction ``sqrt(A) exp(-i eps) phi(X, T)`` solves the
Schrodinger equation with the potential returned by :func:`potential_V`.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.optimize import bisect

from .qcore import NATURAL, PhysicalParams
from .symmetry import affine_chirp_state, boost, lens, phase

FD_STEP_1 = 1e-6
FD_STEP_2 = 1e-3
LATTICE_STEP = 0.01

_GL_X, _GL_W = np.polynomial.legendre.leggauss(16)


@dataclass(frozen=True)
class ProfileCurve:
    """A real function of tau with its first two derivatives.

    ``log_d1``/``log_d2`` optionally give the derivatives of ``ln value``
    analytically; otherwise they are derived from the plain derivatives.
    """

    value: Callable
    first_derivative: Callable
    second_derivative: Callable
    log_d1: Callable | None = None
    log_d2: Callable | None = None
    name: str = "custom"

    def __call__(self, tau):
        return self.value(tau)

    @classmethod
    def from_function(cls, f: Callable, name: str = "custom") -> "ProfileCurve":
        """Derivatives by central differences.

        First derivative: two-point stencil, step 1e-6. Second derivative:
        five-point stencil, step 1e-3, which keeps round-off near 1e-10.
        """
        h1, h2 = FD_STEP_1, FD_STEP_2

        def fv(tau):
            out = np.asarray(f(np.asarray(tau, dtype=float)))
            if np.iscomplexobj(out):
                raise ValueError("profiles must be real-valued")
            return out.astype(float)

        def d1(tau):
            tau = np.asarray(tau, dtype=float)
            return (fv(tau + h1) - fv(tau - h1)) / (2 * h1)

        def d2(tau):
            tau = np.asarray(tau, dtype=float)
            return (-fv(tau + 2 * h2) + 16 * fv(tau + h2) - 30 * fv(tau) + 16 * fv(tau - h2) - fv(tau - 2 * h2)) / (
                12 * h2**2
            )

        return cls(fv, d1, d2, name=name)

    @classmethod
    def constant(cls, c: float) -> "ProfileCurve":
        zero = lambda tau: np.zeros_like(np.asarray(tau, dtype=float))
        return cls(lambda tau: np.full_like(np.asarray(tau, dtype=float), c), zero, zero, zero, zero, name=f"const({c})")

    @classmethod
    def exponential(cls, alpha: Callable, d_alpha: Callable, d2_alpha: Callable, name: str) -> "ProfileCurve":
        """``A = exp(alpha)`` with analytic derivatives of ``alpha``."""

        def value(tau):
            return np.exp(alpha(np.asarray(tau, dtype=float)))

        def d1(tau):
            return d_alpha(np.asarray(tau, dtype=float)) * value(tau)

        def d2(tau):
            tau = np.asarray(tau, dtype=float)
            return (d2_alpha(tau) + d_alpha(tau) ** 2) * value(tau)

        return cls(value, d1, d2, d_alpha, d2_alpha, name=name)

    def alpha_derivatives(self, tau):
        tau = np.asarray(tau, dtype=float)
        if self.log_d1 is not None and self.log_d2 is not None:
            return self.log_d1(tau), self.log_d2(tau)
        a, a1, a2 = self.value(tau), self.first_derivative(tau), self.second_derivative(tau)
        return a1 / a, a2 / a - (a1 / a) ** 2


def builtin_profiles(name: str) -> ProfileCurve:
    """The two stretch profiles ``A1`` (symmetric double hump) and ``A2``
    (A1 shifted by one and rescaled so that ``A2(0) = 1``)."""
    if name == "A1":
        return ProfileCurve.exponential(
            lambda s: s**4 / 8 + s**2 / 4,
            lambda s: s**3 / 2 + s / 2,
            lambda s: 1.5 * s**2 + 0.5,
            "A1",
        )
    if name == "A2":
        return ProfileCurve.exponential(
            lambda s: (s - 1) ** 4 / 8 + (s - 1) ** 2 / 4 - 3 / 8,
            lambda s: (s - 1) ** 3 / 2 + (s - 1) / 2,
            lambda s: 1.5 * (s - 1) ** 2 + 0.5,
            "A2",
        )
    raise ValueError(f"unknown profile {name!r}; available: A1, A2")


class _CumulativeIntegral:
    """``F(tau) = int_{tau0}^{tau} g`` on a window, cached on a lattice.

    The lattice is anchored at ``tau0`` and summed outward from it, so values
    near ``tau0`` never cancel against the large tails of fast-growing
    integrands. Lattice nodes carry 16-point Gauss-Legendre sums; a query
    adds one more Gauss-Legendre pass from the nearest node below.
    """

    def __init__(self, integrand: Callable, tau0: float, window: tuple, step: float = LATTICE_STEP):
        lo, hi = float(window[0]), float(window[1])
        if not lo <= tau0 <= hi:
            raise ValueError(f"tau0={tau0} outside window {window}")
        self.integrand = integrand
        self.lo, self.hi = lo, hi
        right = tau0 + step * np.arange(0, int(np.ceil((hi - tau0) / step)) + 1)
        left = tau0 - step * np.arange(int(np.ceil((tau0 - lo) / step)), 0, -1)
        self.nodes = np.clip(np.concatenate([left, right]), lo, hi)
        k0 = len(left)
        pieces = self._gl(self.nodes[:-1], self.nodes[1:])
        if not np.all(np.isfinite(pieces)):
            raise ValueError("integrand is not finite on the window")
        self.cum = np.concatenate([-np.cumsum(pieces[:k0][::-1])[::-1], [0.0], np.cumsum(pieces[k0:])])

    def _gl(self, a, b):
        a = np.asarray(a, dtype=float)
        b = np.asarray(b, dtype=float)
        mid = 0.5 * (a + b)
        half = 0.5 * (b - a)
        pts = mid[..., None] + half[..., None] * _GL_X
        return half * np.sum(_GL_W * self.integrand(pts), axis=-1)

    def _at(self, tau, cum):
        i = np.clip(np.searchsorted(self.nodes, tau, side="right") - 1, 0, len(self.nodes) - 2)
        return cum[i] + self._gl(self.nodes[i], tau)

    def __call__(self, tau):
        tau = np.asarray(tau, dtype=float)
        if np.any(tau < self.lo) or np.any(tau > self.hi):
            raise ValueError(f"tau outside the integration window [{self.lo}, {self.hi}]")
        return self._at(tau, self.cum)


_ZERO = ProfileCurve.constant(0.0)


@dataclass(frozen=True)
class GeneralQuadraticMap:
    """Stretch ``A``, drift ``B``, phase reference ``Xi0`` and transition time ``tau0``.

    ``Xi0="auto"`` picks ``int Bdot^2 / (2 A^2)`` from ``tau0``, which removes
    the constant term from the potential.
    """

    A: ProfileCurve
    B: ProfileCurve | None = None
    Xi0: ProfileCurve | str | None = "auto"
    tau0: float = 0.0
    params: PhysicalParams = NATURAL
    window: tuple | None = None
    _T: _CumulativeIntegral = field(init=False, repr=False, compare=False)
    _xi0: Callable = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.B is None:
            object.__setattr__(self, "B", _ZERO)
        window = self.window or (self.tau0 - 4.0, self.tau0 + 4.0)
        object.__setattr__(self, "window", (float(window[0]), float(window[1])))
        probe = np.linspace(*self.window, 2001)
        values = self.A(probe)
        if np.iscomplexobj(values) or not np.all(np.isfinite(values)):
            raise ValueError("A must be real and finite on the window")
        if not np.all(values > 0):
            raise ValueError("A must stay positive on the window")
        if abs(float(self.A(self.tau0)) - 1.0) > 1e-12:
            raise ValueError(f"smooth linkage needs A(tau0) = 1, got {float(self.A(self.tau0))}")
        if abs(float(self.B(self.tau0))) > 1e-12:
            raise ValueError("the drift B must vanish at tau0")
        object.__setattr__(self, "_T", _CumulativeIntegral(lambda s: self.A(s) ** 2, self.tau0, self.window))
        if self.Xi0 is None:
            object.__setattr__(self, "_xi0", lambda s: np.zeros_like(np.asarray(s, dtype=float)))
        elif isinstance(self.Xi0, str):
            if self.Xi0 != "auto":
                raise ValueError(f"Xi0 must be a profile, None or 'auto', got {self.Xi0!r}")
            if self.B is _ZERO:
                object.__setattr__(self, "_xi0", lambda s: np.zeros_like(np.asarray(s, dtype=float)))
            else:
                integ = _CumulativeIntegral(
                    lambda s: self.B.first_derivative(s) ** 2 / (2 * self.A(s) ** 2), self.tau0, self.window
                )
                object.__setattr__(self, "_xi0", integ)
        else:
            object.__setattr__(self, "_xi0", self.Xi0.value)

    def xi0(self, tau):
        return self._xi0(np.asarray(tau, dtype=float))

    def xi0_derivative(self, tau):
        tau = np.asarray(tau, dtype=float)
        if isinstance(self.Xi0, ProfileCurve):
            return self.Xi0.first_derivative(tau)
        if self.Xi0 is None or self.B is _ZERO:
            return np.zeros_like(tau)
        return self.B.first_derivative(tau) ** 2 / (2 * self.A(tau) ** 2)

    def check_window(self, tau):
        tau = np.asarray(tau, dtype=float)
        lo, hi = self.window
        if np.any(tau < lo) or np.any(tau > hi):
            raise ValueError(f"tau outside the profile window [{lo}, {hi}]")


def time_map_T(m: GeneralQuadraticMap, tau):
    """``T(tau) = int_{tau0}^{tau} A^2``."""
    return m._T(tau)


def _positive_A(m: GeneralQuadraticMap, tau):
    a = m.A(tau)
    if np.any(a <= 0):
        raise ValueError("A vanished or changed sign")
    return a


def epsilon_phase(m: GeneralQuadraticMap, xi, tau):
    """Real phase removing the momentum coupling from the mapped equation."""
    hbar, mass = m.params.hbar, m.params.mass
    xi = np.asarray(xi, dtype=float)
    tau = np.asarray(tau, dtype=float)
    a = _positive_A(m, tau)
    a1 = m.A.first_derivative(tau)
    b1 = m.B.first_derivative(tau)
    return mass / (hbar * a) * (0.5 * a1 * xi**2 + b1 * xi) + mass * m.xi0(tau) / hbar


def potential_terms(m: GeneralQuadraticMap, tau):
    """Coefficients ``(quadratic, linear, constant)`` of ``V = q xi^2 + l xi + c``."""
    mass = m.params.mass
    tau = np.asarray(tau, dtype=float)
    a = _positive_A(m, tau)
    a1, a2 = m.A.first_derivative(tau), m.A.second_derivative(tau)
    b1, b2 = m.B.first_derivative(tau), m.B.second_derivative(tau)
    quad = 0.5 * mass / a**2 * (a * a2 - 2 * a1**2)
    lin = mass * (b2 / a - 2 * b1 * a1 / a**2)
    const = mass * (m.xi0_derivative(tau) - b1**2 / (2 * a**2))
    return quad, lin, const


def potential_V(m: GeneralQuadraticMap, xi, tau):
    quad, lin, const = potential_terms(m, tau)
    xi = np.asarray(xi, dtype=float)
    return quad * xi**2 + lin * xi + const


def quadratic_coefficient_VQ(m: GeneralQuadraticMap, tau):
    """``(M/2)(alpha'' - alpha'^2)`` with ``alpha = ln A``; positive means attractive."""
    tau = np.asarray(tau, dtype=float)
    _positive_A(m, tau)
    d1, d2 = m.A.alpha_derivatives(tau)
    return 0.5 * m.params.mass * (d2 - d1**2)


def repulsive_crossover(m: GeneralQuadraticMap, lo: float, hi: float, xtol: float = 1e-12) -> float:
    """Bisection for the sign change of the quadratic coefficient in ``[lo, hi]``."""
    f = lambda s: float(quadratic_coefficient_VQ(m, s))
    if f(lo) * f(hi) > 0:
        raise ValueError(f"no sign change of the quadratic coefficient in [{lo}, {hi}]")
    return bisect(f, lo, hi, xtol=xtol)


@dataclass(frozen=True)
class GeneralMappedWave:
    """``sqrt(A) exp(-i eps) phi(A xi + B, T(tau))`` with tau the profile time."""

    phi: Callable
    qmap: GeneralQuadraticMap

    def __call__(self, xi, tau):
        m = self.qmap
        xi = np.asarray(xi, dtype=float)
        tau = np.asarray(tau, dtype=float)
        m.check_window(tau)
        a = _positive_A(m, tau)
        x = a * xi + m.B(tau)
        return np.sqrt(a) * np.exp(-1j * epsilon_phase(m, xi, tau)) * self.phi(x, time_map_T(m, tau))


def matched_ancestor(phi: Callable, m: GeneralQuadraticMap):
    """Free solution ``Phi`` with ``Phi(x, 0) = phi(x, 0) exp(i eps(x, tau0))``.

    Mapping ``Phi`` instead of ``phi`` makes the result equal ``phi`` at the
    transition even when ``A`` or ``B`` have nonzero slope there.
    """
    hbar, mass = m.params.hbar, m.params.mass
    t0 = m.tau0
    out = lens(phi, float(m.A.first_derivative(t0)), m.params)
    out = boost(out, float(m.B.first_derivative(t0)), m.params)
    return phase(out, mass * float(m.xi0(t0)) / hbar)


def map_free_to_general(phi: Callable, m: GeneralQuadraticMap, match: bool = True) -> GeneralMappedWave:
    """Map a free solution onto the potential of ``m``.

    With ``match`` (default) the result coincides with ``phi(xi, 0)`` at
    ``tau0``; without it the bare map is applied, which differs from
    ``phi`` at ``tau0`` by the chirp ``exp(-i eps(xi, tau0))``.
    """
    return GeneralMappedWave(matched_ancestor(phi, m) if match else phi, m)


def general_end_state(wave: GeneralMappedWave, tau_end: float):
    """Free solution whose t=0 data equals ``wave(x, tau_end)``."""
    m = wave.qmap
    m.check_window(tau_end)
    s = float(tau_end)
    return affine_chirp_state(
        wave.phi,
        float(m.A(s)),
        float(m.A.first_derivative(s)),
        float(m.B(s)),
        float(m.B.first_derivative(s)),
        float(m.xi0(s)),
        float(time_map_T(m, s)),
        m.params,
    )
