"""Tagged descriptions of the supported potential regimes.

``value(xi, tau, params)`` takes the segment-local time ``tau``; only the
general profile depends on it.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .genquad import GeneralQuadraticMap, ProfileCurve, builtin_profiles, potential_V
from .maps import TrapParams
from .qcore import NATURAL, PhysicalParams


@dataclass(frozen=True)
class Free:
    kind = "free"

    def value(self, xi, tau=0.0, params: PhysicalParams = NATURAL):
        return np.zeros(np.broadcast(np.asarray(xi), np.asarray(tau)).shape)


@dataclass(frozen=True)
class Harmonic:
    k: float
    center: float = 0.0
    kind = "harmonic"

    def __post_init__(self):
        if not self.k > 0:
            raise ValueError(f"harmonic spring constant must be positive, got {self.k}")

    def trap(self, params: PhysicalParams = NATURAL) -> TrapParams:
        return TrapParams(self.k, self.center, None, params)

    def value(self, xi, tau=0.0, params: PhysicalParams = NATURAL):
        xi = np.asarray(xi, dtype=float)
        return 0.5 * self.k * (xi - self.center) ** 2 + 0.0 * np.asarray(tau)


@dataclass(frozen=True)
class Inverted:
    """Repulsive ``-|k| (xi - center)^2 / 2``; the sign of ``k`` is not used."""

    k: float
    center: float = 0.0
    kind = "inverted"

    def __post_init__(self):
        if self.k == 0 or not np.isfinite(self.k):
            raise ValueError("inverted spring constant must be finite and nonzero")

    def trap(self, params: PhysicalParams = NATURAL) -> TrapParams:
        return TrapParams(abs(self.k), self.center, None, params)

    def value(self, xi, tau=0.0, params: PhysicalParams = NATURAL):
        xi = np.asarray(xi, dtype=float)
        return -0.5 * abs(self.k) * (xi - self.center) ** 2 + 0.0 * np.asarray(tau)


@dataclass(frozen=True)
class Gravity:
    """Uniform field ``M a xi``."""

    a: float
    kind = "gravity"

    def value(self, xi, tau=0.0, params: PhysicalParams = NATURAL):
        return params.mass * self.a * np.asarray(xi, dtype=float) + 0.0 * np.asarray(tau)


@dataclass(frozen=True)
class General:
    """Time-dependent quadratic potential generated by a stretch profile.

    Segment-local time ``tau`` corresponds to profile time ``tau0 + tau``.
    """

    profile: str | ProfileCurve = "A1"
    tau0: float = 0.0
    B: ProfileCurve | None = None
    Xi0: ProfileCurve | str | None = "auto"
    window: tuple | None = None
    kind = "general"
    _maps: dict = field(default_factory=dict, init=False, repr=False, compare=False, hash=False)

    @property
    def profile_name(self) -> str:
        return self.profile if isinstance(self.profile, str) else self.profile.name

    def quadratic_map(self, params: PhysicalParams = NATURAL) -> GeneralQuadraticMap:
        if params not in self._maps:
            A = builtin_profiles(self.profile) if isinstance(self.profile, str) else self.profile
            self._maps[params] = GeneralQuadraticMap(A, self.B, self.Xi0, self.tau0, params, self.window)
        return self._maps[params]

    def value(self, xi, tau=0.0, params: PhysicalParams = NATURAL):
        return potential_V(self.quadratic_map(params), xi, self.tau0 + np.asarray(tau, dtype=float))


PotentialSpec = Free | Harmonic | Inverted | Gravity | General
