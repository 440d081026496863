"""Numerical verification suites run by ``quadmap verify``."""
from __future__ import annotations

import time
from dataclasses import asdict, dataclass
from typing import Callable

import numpy as np

from .maps import TrapParams, map_free_to_trapped, map_trap_to_trap
from .potentials import Free, Gravity, Harmonic
from .qcore import Grid, l2_distance, l2_norm, sample_on_grid
from .scenario_io import FIGURES, figure_preset, to_scenario
from .states import GaussianPacket
from .timeline import Scenario, Segment, build_timeline
from .verify import OracleConfig, oracle_propagate, probe_lattice, schrodinger_residual

SUITES = ("residual", "oracle", "continuity")
RESIDUAL_LIMIT = 1e-4
GLUE_LIMIT = 1e-12


@dataclass(frozen=True)
class CheckResult:
    suite: str
    name: str
    value: float
    limit: float
    passed: bool
    seconds: float

    def as_dict(self) -> dict:
        return asdict(self)


def _timed(suite, name, limit, fn: Callable[[], float], passes=None) -> CheckResult:
    start = time.perf_counter()
    value = float(fn())
    ok = passes(value) if passes else value < limit
    return CheckResult(suite, name, value, limit, bool(ok), time.perf_counter() - start)


def _figure_branch(name: str):
    tl = build_timeline(to_scenario(figure_preset(name)))
    return tl.branches[1]


# ----------------------------------------------------------------- residual


def _residual_cases():
    fig1 = _figure_branch("fig1")
    period = 2 * np.pi / np.sqrt(5.0)
    fall = build_timeline(Scenario(GaussianPacket(0.0, 1.0, 1.0), (Segment(0.0, Gravity(2.0)),))).branches[0]
    src, dst = TrapParams(5.0), TrapParams(2.0, 0.5)
    t2t = map_trap_to_trap(map_free_to_trapped(GaussianPacket(0.3, 1.0, 1.0), src), src, dst)
    edge = np.pi / (2 * dst.omega)
    cases = [
        ("trapped", fig1.local, fig1.potential, (-4, 4), (0.05, period / 4 - 0.05)),
        ("trapped-extended", fig1.local, fig1.potential, (-4, 4), (period / 4 + 0.05, 3 * period / 4 - 0.05)),
        ("trap-to-trap", t2t, Harmonic(2.0, 0.5), (-3, 3), (-edge + 0.05, edge - 0.05)),
        ("falling", fall.local, fall.potential, (-4, 4), (0.0, 2.0)),
    ]
    for fig, label, xr, tr in (
        ("fig2", "shifted", (-2, 6), (0.05, np.pi / 2 - 0.05)),
        ("fig3", "inverted", (-4, 4), (0.0, 1.5)),
        ("fig4", "general-A1", (-4, 4), (0.0, 1.6)),
        ("fig5", "general-A2", (-4, 4), (0.0, 2.6)),
    ):
        b = _figure_branch(fig)
        cases.append((label, b.local, b.potential, xr, tr))
    return cases


def residual_suite() -> list[CheckResult]:
    out = []
    for name, w, pot, xr, tr in _residual_cases():
        probes = probe_lattice(xr, tr, 21, 11)
        out.append(_timed("residual", name, RESIDUAL_LIMIT, lambda: schrodinger_residual(w, pot, probes).relative))
    return out


# ------------------------------------------------------------------- oracle


def fig1_oracle_distance(n_points: int = 4096, dt: float = 1e-4) -> float:
    """Density L2 distance, mapped vs Crank-Nicolson, for fig1 at a quarter period."""
    b = _figure_branch("fig1")
    g = Grid(-15.0, 15.0, n_points)
    t1 = 2 * np.pi / np.sqrt(5.0) / 4
    pot = b.potential
    psi = oracle_propagate(sample_on_grid(b.local, g, 0.0), lambda x, t: pot.value(x, t), OracleConfig(g, dt), 0.0, t1)
    return l2_distance(np.abs(psi) ** 2, np.abs(sample_on_grid(b.local, g, t1)) ** 2, g.dx)


def free_oracle_distance(n_points: int = 4096, dt: float = 1e-4) -> float:
    pkt = GaussianPacket(0.0, 1.0, 1.0)
    g = Grid(-20.0, 20.0, n_points)
    psi = oracle_propagate(sample_on_grid(pkt, g, 0.0), lambda x, t: 0 * x, OracleConfig(g, dt), 0.0, 1.0)
    return l2_distance(psi, sample_on_grid(pkt, g, 1.0), g.dx)


def capture_release_distance(n_points: int = 4096, dt: float = 1e-3) -> float:
    """free -> k=1 trap for half a period -> free, mapped vs oracle at t=5."""
    segs = (Segment(0.0, Free()), Segment(1.0, Harmonic(1.0)), Segment(1.0 + np.pi, Free()))
    tl = build_timeline(Scenario(GaussianPacket(-1.0, 1.0, 1.0), segs))
    g = Grid(-20.0, 20.0, n_points)
    psi = sample_on_grid(tl, g, 0.0)
    ends = [1.0, 1.0 + np.pi, 5.0]
    for seg, branch, end in zip(segs, tl.branches, ends):
        pot = seg.potential
        psi = oracle_propagate(psi, lambda x, t, p=pot: p.value(x, t), OracleConfig(g, dt), seg.start_time, end)
    return l2_distance(psi, sample_on_grid(tl, g, 5.0), g.dx)


def convergence_factor() -> tuple[float, float]:
    """Error ratio under dt halving against the analytic free Gaussian, and
    the worst per-step norm drift seen."""
    pkt = GaussianPacket(0.0, 3.0, 1.0)
    g = Grid(-20.0, 20.0, 16384)
    psi0 = sample_on_grid(pkt, g, 0.0)
    exact = sample_on_grid(pkt, g, 2.0)
    zero = lambda x, t: 0 * x
    errs = []
    for dt in (0.04, 0.02):
        psi = oracle_propagate(psi0, zero, OracleConfig(g, dt), 0.0, 2.0)
        errs.append(l2_distance(psi, exact, g.dx))
    drift, psi, n0 = 0.0, psi0, l2_norm(psi0, g.dx)
    for _ in range(20):
        psi = oracle_propagate(psi, zero, OracleConfig(g, 0.02), 0.0, 0.02)
        n1 = l2_norm(psi, g.dx)
        drift, n0 = max(drift, abs(n1 - n0)), n1
    return errs[0] / errs[1], drift


def oracle_suite() -> list[CheckResult]:
    out = [
        _timed("oracle", "fig1-quarter-period", 1e-3, fig1_oracle_distance),
        _timed("oracle", "free-gaussian", 1e-4, free_oracle_distance),
        _timed("oracle", "capture-release", 1e-3, capture_release_distance),
    ]
    start = time.perf_counter()
    factor, drift = convergence_factor()
    elapsed = time.perf_counter() - start
    out.append(CheckResult("oracle", "dt-halving-factor", factor, 0.5, abs(factor - 4) < 0.5, elapsed))
    out.append(CheckResult("oracle", "norm-drift-per-step", drift, 1e-12, drift < 1e-12, 0.0))
    return out


# --------------------------------------------------------------- continuity


def glue_mismatch(name: str, n_points: int = 4096) -> float:
    sf = figure_preset(name)
    tl = build_timeline(to_scenario(sf))
    x = Grid(sf.output.x_min, sf.output.x_max, n_points).x
    worst = 0.0
    for i in range(1, len(tl.branches)):
        worst = max(worst, float(np.max(np.abs(tl.left_limit(i, x) - tl.right_limit(i, x)))))
    return worst


def continuity_suite() -> list[CheckResult]:
    return [_timed("continuity", name, GLUE_LIMIT, lambda n=name: glue_mismatch(n)) for name in FIGURES]


def run_suites(which: str = "all") -> list[CheckResult]:
    if which == "all":
        names = SUITES
    elif which in SUITES:
        names = (which,)
    else:
        raise ValueError(f"unknown suite {which!r}; available: all, {', '.join(SUITES)}")
    table = {"residual": residual_suite, "oracle": oracle_suite, "continuity": continuity_suite}
    out = []
    for n in names:
        out.extend(table[n]())
    return out
