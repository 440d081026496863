"""Splice potential regimes at instantaneous transition times.

Every segment starts from a free-particle "ancestor": a free solution whose
t=0 data is the state at the segment start. The segment's wavefunction is
the ancestor pushed through the smooth-choice map of the segment potential,
so both sides agree at the transition. At the segment end the state is
converted back into a free ancestor for the next segment.
"""
from __future__ import annotations

import bisect as _bisect
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from . import maps
from .genquad import general_end_state, map_free_to_general
from .potentials import Free, General, Gravity, Harmonic, Inverted, PotentialSpec
from .qcore import NATURAL, Grid, PhysicalParams, sample_on_grid
from .symmetry import TimeShifted, affine_chirp_state, time_shift, translate


@dataclass(frozen=True)
class Segment:
    start_time: float
    potential: PotentialSpec

    def __post_init__(self):
        if not isinstance(self.potential, (Free, Harmonic, Inverted, Gravity, General)):
            raise TypeError(f"unsupported potential {self.potential!r}")
        if not np.isfinite(self.start_time):
            raise ValueError("segment start times must be finite")


@dataclass(frozen=True)
class Scenario:
    """An initial free solution and its potential timeline.

    ``initial_state(x, 0)`` is the state at global time ``time_origin``,
    which defaults to the first segment's start. A scenario can open with a
    free prehistory by placing ``time_origin`` after that start.
    """

    initial_state: Callable
    segments: tuple
    params: PhysicalParams = NATURAL
    time_origin: float | None = None

    def __post_init__(self):
        segs = tuple(self.segments)
        if not segs:
            raise ValueError("a scenario needs at least one segment")
        for i in range(1, len(segs)):
            if not segs[i].start_time > segs[i - 1].start_time:
                raise ValueError(
                    f"segment {i}: start_time {segs[i].start_time} is not after {segs[i - 1].start_time}"
                )
        object.__setattr__(self, "segments", segs)
        if self.time_origin is None:
            object.__setattr__(self, "time_origin", float(segs[0].start_time))
        elif not np.isfinite(self.time_origin):
            raise ValueError("time_origin must be finite")

    @property
    def start_time(self) -> float:
        return self.segments[0].start_time

    @property
    def transition_times(self) -> list[float]:
        return [s.start_time for s in self.segments[1:]]


@dataclass(frozen=True)
class Branch:
    """One segment: ``wave(x, tau)`` in local time ``tau = t - start``."""

    start: float
    end: float
    potential: PotentialSpec
    ancestor: Callable
    wave: Callable
    global_time: bool = False

    def __call__(self, x, t):
        if self.global_time:
            return self.wave(x, t)
        return self.wave(x, np.asarray(t, dtype=float) - self.start)

    def local(self, x, tau):
        if self.global_time:
            return self.wave(x, np.asarray(tau, dtype=float) + self.start)
        return self.wave(x, tau)


def _segment_wave(ancestor: Callable, pot: PotentialSpec, params: PhysicalParams):
    if isinstance(pot, Free):
        return ancestor
    if isinstance(pot, Harmonic):
        tp = pot.trap(params)
        return maps.extend_half_period(maps.map_free_to_trapped(ancestor, tp), tp)
    if isinstance(pot, Inverted):
        return maps.map_free_to_inverted(ancestor, pot.trap(params))
    if isinstance(pot, Gravity):
        return maps.map_free_to_falling(ancestor, pot.a, params)
    if isinstance(pot, General):
        inner = map_free_to_general(ancestor, pot.quadratic_map(params))
        return _ProfileClock(inner, pot.tau0)
    raise TypeError(f"unsupported potential {pot!r}")


@dataclass(frozen=True)
class _ProfileClock:
    """Segment-local time to profile time for general segments."""

    inner: Callable
    tau0: float

    def __call__(self, x, tau):
        return self.inner(x, np.asarray(tau, dtype=float) + self.tau0)


def _next_ancestor(branch: Branch, duration: float, params: PhysicalParams):
    pot = branch.potential
    if isinstance(pot, Free):
        if branch.global_time:
            return time_shift(branch.wave, branch.end)
        return time_shift(branch.ancestor, duration)
    if isinstance(pot, Harmonic):
        return maps.map_trapped_to_free(TimeShifted(branch.wave, duration), pot.trap(params))
    if isinstance(pot, Gravity):
        return maps.map_falling_to_free(TimeShifted(branch.wave, duration), pot.a, params)
    if isinstance(pot, Inverted):
        w, c = pot.trap(params).omega, pot.center
        s = w * duration
        centred = translate(branch.ancestor, -c)
        end = affine_chirp_state(
            centred,
            1.0 / np.cosh(s),
            -w * np.tanh(s) / np.cosh(s),
            0.0,
            0.0,
            0.0,
            np.tanh(s) / w,
            params,
        )
        return translate(end, c)
    if isinstance(pot, General):
        return general_end_state(branch.wave.inner, pot.tau0 + duration)
    raise TypeError(f"unsupported potential {pot!r}")


@dataclass(frozen=True)
class Timeline:
    """Global evaluator ``psi(x, t)`` for ``t >= scenario start``."""

    scenario: Scenario
    branches: tuple = field(default_factory=tuple)

    @property
    def starts(self) -> list[float]:
        return [b.start for b in self.branches]

    def branch_index(self, t: float) -> int:
        if t < self.branches[0].start:
            raise ValueError(f"t={t} precedes the scenario start {self.branches[0].start}")
        return _bisect.bisect_right(self.starts, t) - 1

    def __call__(self, x, t):
        x = np.asarray(x, dtype=float)
        t = np.asarray(t, dtype=float)
        if t.ndim == 0:
            return self.branches[self.branch_index(float(t))](x, t)
        x, t = np.broadcast_arrays(x, t)
        if np.any(t < self.branches[0].start):
            raise ValueError(f"t={t.min()} precedes the scenario start {self.branches[0].start}")
        idx = np.searchsorted(self.starts, t, side="right") - 1
        out = np.empty(x.shape, dtype=complex)
        for i in np.unique(idx):
            sel = idx == i
            out[sel] = self.branches[i](x[sel], t[sel])
        return out

    def left_limit(self, transition_index: int, x):
        """State just before transition ``transition_index`` (1-based segment index)."""
        b = self.branches[transition_index - 1]
        return b.local(x, b.end - b.start)

    def right_limit(self, transition_index: int, x):
        b = self.branches[transition_index]
        return b.local(x, 0.0)


def build_timeline(s: Scenario) -> Timeline:
    params = s.params
    segs = s.segments
    branches = []
    first = segs[0]
    ends = [seg.start_time for seg in segs[1:]] + [np.inf]
    if isinstance(first.potential, Free):
        wave = time_shift(s.initial_state, -s.time_origin)
        branches.append(Branch(first.start_time, ends[0], first.potential, wave, wave, True))
    else:
        anc = time_shift(s.initial_state, first.start_time - s.time_origin)
        branches.append(Branch(first.start_time, ends[0], first.potential, anc, _segment_wave(anc, first.potential, params)))
    for i in range(1, len(segs)):
        prev = branches[-1]
        anc = _next_ancestor(prev, prev.end - prev.start, params)
        seg = segs[i]
        branches.append(Branch(seg.start_time, ends[i], seg.potential, anc, _segment_wave(anc, seg.potential, params)))
    return Timeline(s, tuple(branches))


def wave_at(s: Scenario | Timeline, x, t: float):
    tl = s if isinstance(s, Timeline) else build_timeline(s)
    return tl(x, t)


def energy_jump(s: Scenario | Timeline, transition_index: int, g: Grid) -> float:
    """``E_after - E_before`` at a transition, by quadrature on ``g``.

    ``transition_index`` counts segments: 1 is the switch into the second
    segment.
    """
    from .verify import observables

    tl = s if isinstance(s, Timeline) else build_timeline(s)
    if not 1 <= transition_index < len(tl.branches):
        raise IndexError(f"transition index {transition_index} out of range 1..{len(tl.branches) - 1}")
    params = tl.scenario.params
    before = tl.branches[transition_index - 1]
    after = tl.branches[transition_index]
    d = before.end - before.start
    e_before = observables(before.local, g, d, before.potential, params=params)
    e_after = observables(after.local, g, 0.0, after.potential, params=params)
    return e_after.total - e_before.total


def sample_timeline(tl: Timeline, g: Grid, times: Sequence[float]) -> list[np.ndarray]:
    return [sample_on_grid(tl, g, float(t)) for t in times]
