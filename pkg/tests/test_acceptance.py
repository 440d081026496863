"""Acceptance criteria 1-10. Each test records one PASS/FAIL line, printed
in the terminal summary (and by running this file directly)."""
import subprocess
import sys
import time

import numpy as np
import pytest

from quadmap.genquad import repulsive_crossover
from quadmap.maps import TrapParams, extend_half_period, map_free_to_trapped, map_trap_to_trap, map_trapped_to_free
from quadmap.potentials import General, Gravity
from quadmap.qcore import Grid, integrate, l2_norm, sample_on_grid
from quadmap.scenario_io import FIGURES, figure_preset, to_scenario
from quadmap.states import GaussianPacket
from quadmap.suites import convergence_factor, fig1_oracle_distance, glue_mismatch, residual_suite
from quadmap.timeline import Scenario, Segment, build_timeline, energy_jump
from quadmap.verify import mean_positions

RESULTS = []


def report(n, ok, detail):
    RESULTS.append(f"criterion {n:>2}: {'PASS' if ok else 'FAIL'}  {detail}")
    assert ok, detail


def fwhm(x, rho):
    i = int(np.argmax(rho))
    half = rho[i] / 2
    lo = i
    while lo > 0 and rho[lo] > half:
        lo -= 1
    hi = i
    while hi < len(rho) - 1 and rho[hi] > half:
        hi += 1
    left = x[lo] + (half - rho[lo]) * (x[lo + 1] - x[lo]) / (rho[lo + 1] - rho[lo])
    right = x[hi - 1] + (half - rho[hi - 1]) * (x[hi] - x[hi - 1]) / (rho[hi] - rho[hi - 1])
    return right - left


def count_maxima(rho):
    return int(np.sum((rho[1:-1] > rho[:-2]) & (rho[1:-1] > rho[2:])))


FIG1_T = 2 * np.pi / np.sqrt(5.0)


def test_criterion_01_residual_suite():
    start = time.perf_counter()
    results = residual_suite()
    elapsed = time.perf_counter() - start
    worst = max(r.value for r in results)
    names = {r.name for r in results}
    needed = {"trapped", "shifted", "inverted", "falling", "general-A1", "general-A2"}
    ok = needed <= names and all(r.passed for r in results) and elapsed < 10
    report(1, ok, f"worst relative residual {worst:.2e} < 1e-4 over {len(results)} evaluators, {elapsed:.2f}s < 10s")


def test_criterion_02_gluing():
    start = time.perf_counter()
    worst = max(glue_mismatch(name, 4096) for name in FIGURES)
    elapsed = time.perf_counter() - start
    report(2, worst < 1e-12 and elapsed < 5, f"max transition mismatch {worst:.2e} < 1e-12 over {len(FIGURES)} presets, {elapsed:.2f}s < 5s")


def test_criterion_03_fig1():
    start = time.perf_counter()
    tp = TrapParams(5.0)
    g = Grid(-8, 8, 16001)
    # (a) width of one squeezed component; the full density at tau=0 is fringe-modulated
    single = extend_half_period(map_free_to_trapped(GaussianPacket(0, 4, 1.5), tp), tp)
    widths = {tau: fwhm(g.x, np.abs(sample_on_grid(single, g, tau)) ** 2) for tau in (0.0, FIG1_T / 4, 3 * FIG1_T / 4)}
    tl = build_timeline(to_scenario(figure_preset("fig1")))
    pair_q = fwhm(g.x, np.abs(sample_on_grid(tl, g, FIG1_T / 4)) ** 2)
    ok_a = widths[FIG1_T / 4] < widths[0.0] and widths[3 * FIG1_T / 4] < widths[0.0] and pair_q < widths[0.0]
    # (b) interference fringes near the origin while the packets overlap
    inner = Grid(-2, 2, 4001)
    maxima = [count_maxima(np.abs(sample_on_grid(tl, inner, tau)) ** 2) for tau in (0.0, FIG1_T / 2)]
    ok_b = min(maxima) >= 3
    # (c) density period
    x = Grid(-8, 8, 2001).x
    drift = max(
        float(np.max(np.abs(np.abs(tl(x, tau)) ** 2 - np.abs(tl(x, tau + FIG1_T)) ** 2))) for tau in (0.1, 0.7, 1.6, 2.5)
    )
    ok_c = drift < 1e-8
    elapsed = time.perf_counter() - start
    report(
        3,
        ok_a and ok_b and ok_c and elapsed < 30,
        f"(a) FWHM {widths[0.0]:.3f} at 0 vs {widths[FIG1_T / 4]:.3f} at T/4, {widths[3 * FIG1_T / 4]:.3f} at 3T/4"
        f" (pair peak {pair_q:.3f}); (b) maxima in |x|<2: {maxima} >= 3; (c) period drift {drift:.1e} < 1e-8;"
        f" {elapsed:.2f}s < 30s",
    )


def test_criterion_04_oracle_equivalence():
    start = time.perf_counter()
    d = fig1_oracle_distance(4096, 1e-4)
    elapsed = time.perf_counter() - start
    report(4, d < 1e-3 and elapsed < 60, f"density L2 distance at T/4 {d:.2e} < 1e-3, {elapsed:.2f}s < 60s")


def test_criterion_05_round_trips():
    rng = np.random.default_rng(5)
    start = time.perf_counter()
    phi = GaussianPacket(0.3, 1.2, 1.0)
    tp = TrapParams(5.0)
    x = rng.uniform(-4, 4, 1000)
    t = rng.uniform(-3, 3, 1000)
    back = map_trapped_to_free(map_free_to_trapped(phi, tp), tp)
    e1 = float(np.max(np.abs(back(x, t) - phi(x, t))))
    k, K = TrapParams(5.0, 0.5), TrapParams(2.0, -0.5)
    psi = map_free_to_trapped(phi, k)
    rt = map_trap_to_trap(map_trap_to_trap(psi, k, K), K, k)
    tau = rng.uniform(-0.95, 0.95, 1000) * np.pi / (2 * k.omega)
    e2 = float(np.max(np.abs(rt(x, tau) - psi(x, tau))))
    elapsed = time.perf_counter() - start
    report(5, max(e1, e2) < 1e-12 and elapsed < 1, f"free-trap-free {e1:.1e}, trap-trap-trap {e2:.1e} < 1e-12, {elapsed:.3f}s < 1s")


def test_criterion_06_energy_bookkeeping():
    tl = build_timeline(to_scenario(figure_preset("fig1")))
    g = Grid(-15, 15, 4096)
    jump = energy_jump(tl, 1, g)
    state = sample_on_grid(lambda x, t: tl.left_limit(1, x), g, 0.0)
    moment = 2.5 * integrate(g.x**2 * np.abs(state) ** 2, g.dx)
    norm_drift = abs(l2_norm(tl.left_limit(1, g.x), g.dx) - l2_norm(tl.right_limit(1, g.x), g.dx))
    err = abs(jump - moment)
    report(6, err < 1e-8 and norm_drift < 1e-8, f"jump {jump:.12f} vs (k/2)<x^2> {moment:.12f}, diff {err:.1e}; norm drift {norm_drift:.1e}")


def test_criterion_07_ehrenfest():
    tl = build_timeline(to_scenario(figure_preset("fig2")))
    ts = np.linspace(0, 2 * np.pi, 17)
    e2 = float(np.max(np.abs(mean_positions(tl, Grid(-15, 20, 4096), ts) - 2 * (1 - np.cos(ts)))))
    fall = build_timeline(Scenario(GaussianPacket(0.0, 1.0, 1.0), (Segment(0.0, Gravity(2.0)),)))
    ts = np.linspace(0, 2, 9)
    ef = float(np.max(np.abs(mean_positions(fall, Grid(-25, 15, 4096), ts) - (ts - ts**2))))
    report(7, e2 < 1e-6 and ef < 1e-6, f"fig2 <x> vs 2(1-cos t): {e2:.1e}; free fall vs t-t^2: {ef:.1e} (< 1e-6)")


def test_criterion_08_crossovers():
    start = time.perf_counter()
    r1 = repulsive_crossover(General("A1").quadratic_map(), 1.25, 1.35)
    r2 = repulsive_crossover(General("A2").quadratic_map(), 2.25, 2.35)
    elapsed = time.perf_counter() - start
    ok = 1.25 < r1 < 1.35 and abs(r2 - 2.30) <= 0.05 and elapsed < 1
    report(8, ok, f"A1 crossover {r1:.6f} in (1.25, 1.35); A2 crossover {r2:.6f} = 2.30 +- 0.05; {elapsed:.3f}s < 1s")


def test_criterion_09_oracle_convergence():
    factor, drift = convergence_factor()
    report(9, abs(factor - 4) < 0.5 and drift < 1e-12, f"dt-halving error ratio {factor:.3f} = 4 +- 0.5; per-step norm drift {drift:.1e} < 1e-12")


def test_criterion_10_determinism(tmp_path):
    outs = []
    for i in range(2):
        path = tmp_path / f"fig1_{i}.csv"
        subprocess.run([sys.executable, "-m", "quadmap.cli", "figure", "fig1", "--out", str(path)], check=True)
        outs.append(path.read_bytes())
    report(10, outs[0] == outs[1] and len(outs[0]) > 0, f"two runs of 'quadmap figure fig1' byte-identical ({len(outs[0])} bytes)")


if __name__ == "__main__":
    code = pytest.main([__file__, "-q", "-p", "no:cacheprovider"])
    print("\n".join(RESULTS))
    sys.exit(code)
