"""Independent checks: finite-difference residuals, a Crank-Nicolson
reference propagator, and quadrature observables."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from scipy.integrate import solve_ivp
from scipy.linalg import get_lapack_funcs

from .potentials import Free, General, Gravity, Harmonic, Inverted
from .qcore import NATURAL, Grid, PhysicalParams, integrate, sample_on_grid

RESIDUAL_STEP = 1e-3
LEAKAGE_LIMIT = 1e-6


class WindowLeakageError(ValueError):
    """Probability mass outside the quadrature window exceeds the limit."""


@dataclass(frozen=True)
class ResidualReport:
    max_abs_residual: float
    max_abs_psi: float
    relative: float
    probe_count: int
    richardson_ok: bool = True

    def __post_init__(self):
        if self.probe_count <= 0:
            raise ValueError("a residual report needs at least one probe")


def _d2_space(w, x, t, h):
    f = [w(x + k * h, t) for k in (-2, -1, 0, 1, 2)]
    return (-f[0] + 16 * f[1] - 30 * f[2] + 16 * f[3] - f[4]) / (12 * h * h), f[2]


def _d1_time(w, x, t, h):
    f = [w(x, t + k * h) for k in (-2, -1, 1, 2)]
    return (f[0] - 8 * f[1] + 8 * f[2] - f[3]) / (12 * h)


def _residual(w, potential, x, t, h, params):
    hbar, mass = params.hbar, params.mass
    d2, psi = _d2_space(w, x, t, h)
    dt = _d1_time(w, x, t, h)
    v = potential.value(x, t, params)
    return -(hbar**2) / (2 * mass) * d2 - 1j * hbar * dt + v * psi, psi


def schrodinger_residual(
    w: Callable,
    potential,
    probes: Sequence,
    h: float = RESIDUAL_STEP,
    params: PhysicalParams = NATURAL,
) -> ResidualReport:
    """Residual of ``i hbar psi_t = -hbar^2/2M psi'' + V psi`` at the probes.

    Both derivatives use fourth-order central stencils. The residual is
    repeated at ``h/2``; ``richardson_ok`` is False when halving the step
    makes it grow more than tenfold, a sign the step sits in round-off noise.
    """
    pts = np.asarray(probes, dtype=float).reshape(-1, 2)
    if len(pts) == 0:
        raise ValueError("no probes given")
    x, t = pts[:, 0], pts[:, 1]
    r, psi = _residual(w, potential, x, t, h, params)
    r2, _ = _residual(w, potential, x, t, h / 2, params)
    max_r = float(np.max(np.abs(r)))
    max_psi = float(np.max(np.abs(psi)))
    if max_psi == 0:
        raise ValueError("wavefunction vanishes at every probe")
    a, b = max_r, float(np.max(np.abs(r2)))
    floor = 1e-12 * max_psi
    ok = b <= 10 * max(a, floor)
    return ResidualReport(max_r, max_psi, max_r / max_psi, len(pts), bool(ok))


def probe_lattice(x_range, t_range, nx: int = 21, nt: int = 11) -> np.ndarray:
    xs = np.linspace(*x_range, nx)
    ts = np.linspace(*t_range, nt)
    X, T = np.meshgrid(xs, ts)
    return np.column_stack([X.ravel(), T.ravel()])


@dataclass(frozen=True)
class OracleConfig:
    """Crank-Nicolson on ``grid`` with hard walls just outside its end nodes."""

    grid: Grid
    dt: float
    params: PhysicalParams = NATURAL

    def __post_init__(self):
        if not (self.dt > 0 and np.isfinite(self.dt)):
            raise ValueError(f"oracle time step must be positive, got {self.dt}")


def _static(potential_of_t, x, t0, t1):
    va = np.asarray(potential_of_t(x, t0), dtype=float)
    vb = np.asarray(potential_of_t(x, t1), dtype=float)
    vc = np.asarray(potential_of_t(x, 0.5 * (t0 + t1)), dtype=float)
    return np.array_equal(va, vb) and np.array_equal(va, vc)


def oracle_propagate(initial, potential_of_t: Callable, cfg: OracleConfig, t0: float, t1: float) -> np.ndarray:
    """Propagate grid samples from ``t0`` to ``t1``.

    The step count is ``ceil(|t1 - t0| / dt)`` (to within 1e-9 of an
    integer) and the step is shrunk so that ``t1`` is hit exactly. The
    potential is sampled at step midpoints.
    """
    psi = np.array(initial, dtype=complex)
    x = cfg.grid.x
    if psi.shape != x.shape:
        raise ValueError(f"initial state has {psi.size} samples, grid has {x.size}")
    span = t1 - t0
    if span == 0:
        return psi
    ratio = abs(span) / cfg.dt
    n = int(np.ceil(ratio - 1e-9))
    dt = span / n
    hbar, mass = cfg.params.hbar, cfg.params.mass
    dx = cfg.grid.dx
    kin = hbar**2 / (2 * mass * dx * dx)
    c = 0.5j * dt / hbar
    off = np.full(x.size - 1, -c * kin, dtype=complex)
    gttrf, gttrs = get_lapack_funcs(("gttrf", "gttrs"), dtype=complex)

    def factor(v):
        with np.errstate(invalid="ignore", over="ignore"):
            diag = 1 + c * (2 * kin + v)
        dl, d, du, du2, ipiv, info = gttrf(off, diag, off)
        if info != 0 or not np.all(np.isfinite(d)):
            raise FloatingPointError("tridiagonal factorisation failed (non-finite potential?)")
        return dl, d, du, du2, ipiv, diag

    def step(psi, fac):
        dl, d, du, du2, ipiv, diag = fac
        rhs = (2 - diag) * psi
        rhs[1:] += c * kin * psi[:-1]
        rhs[:-1] += c * kin * psi[1:]
        out, info = gttrs(dl, d, du, du2, ipiv, rhs)
        if info != 0:
            raise FloatingPointError("tridiagonal solve failed")
        return out

    if _static(potential_of_t, x, t0, t1):
        fac = factor(np.asarray(potential_of_t(x, t0), dtype=float))
        for _ in range(n):
            psi = step(psi, fac)
    else:
        for i in range(n):
            v = np.asarray(potential_of_t(x, t0 + (i + 0.5) * dt), dtype=float)
            psi = step(psi, factor(v))
    if not np.all(np.isfinite(psi)):
        raise FloatingPointError("oracle produced non-finite values")
    return psi


@dataclass(frozen=True)
class Observables:
    time: float
    norm: float
    mean_x: float
    var_x: float
    mean_p: float
    kinetic: float
    potential: float
    total: float

    def as_dict(self) -> dict:
        return {k: float(getattr(self, k)) for k in self.__dataclass_fields__}


def _derivative(psi, dx):
    p = np.concatenate([[0, 0], psi, [0, 0]])
    return (p[:-4] - 8 * p[1:-3] + 8 * p[3:-1] - p[4:]) / (12 * dx)


def leakage(w: Callable, g: Grid, t: float, n_strip: int = 512) -> float:
    """Probability mass in two strips of half the window width beyond each edge."""
    width = 0.5 * g.width
    total = 0.0
    for lo in (g.x_min - width, g.x_max):
        strip = Grid(lo, lo + width, n_strip)
        total += float(integrate(np.abs(sample_on_grid(w, strip, t)) ** 2, strip.dx))
    return total


def check_window(w: Callable, g: Grid, t: float, limit: float = LEAKAGE_LIMIT):
    mass = leakage(w, g, t)
    if mass > limit:
        raise WindowLeakageError(f"mass {mass:.3g} outside [{g.x_min}, {g.x_max}] at t={t} exceeds {limit:g}")


def observables(
    w: Callable,
    g: Grid,
    t: float,
    potential,
    params: PhysicalParams = NATURAL,
    check_leakage: bool = True,
) -> Observables:
    """Quadrature moments of ``w(., t)``; expectation values are normalised."""
    if check_leakage:
        check_window(w, g, t)
    hbar, mass = params.hbar, params.mass
    x, dx = g.x, g.dx
    psi = sample_on_grid(w, g, t)
    rho = np.abs(psi) ** 2
    norm = float(integrate(rho, dx))
    if not norm > 0:
        raise ValueError("wavefunction vanishes on the grid")
    dpsi = _derivative(psi, dx)
    mean_x = float(integrate(x * rho, dx)) / norm
    var_x = float(integrate((x - mean_x) ** 2 * rho, dx)) / norm
    mean_p = float(np.real(integrate(np.conj(psi) * (-1j * hbar) * dpsi, dx))) / norm
    kinetic = hbar**2 / (2 * mass) * float(integrate(np.abs(dpsi) ** 2, dx)) / norm
    pot = float(integrate(potential.value(x, t, params) * rho, dx)) / norm
    return Observables(float(t), norm, mean_x, var_x, mean_p, kinetic, pot, kinetic + pot)


def classical_path(potential, x0: float, v0: float, tau, params: PhysicalParams = NATURAL):
    """Classical position under ``potential`` from ``(x0, v0)`` at local time 0."""
    tau = np.asarray(tau, dtype=float)
    if isinstance(potential, Free):
        return x0 + v0 * tau
    if isinstance(potential, Gravity):
        return x0 + v0 * tau - 0.5 * potential.a * tau**2
    if isinstance(potential, Harmonic):
        w, c = potential.trap(params).omega, potential.center
        return c + (x0 - c) * np.cos(w * tau) + v0 / w * np.sin(w * tau)
    if isinstance(potential, Inverted):
        w, c = potential.trap(params).omega, potential.center
        return c + (x0 - c) * np.cosh(w * tau) + v0 / w * np.sinh(w * tau)
    if isinstance(potential, General):
        from .genquad import potential_terms

        m = potential.quadratic_map(params)

        def rhs(s, y):
            q, lin, _ = potential_terms(m, potential.tau0 + s)
            return [y[1], -(2 * q * y[0] + lin) / params.mass]

        flat = np.atleast_1d(tau)
        order = np.argsort(flat)
        end = float(flat.max()) if flat.size else 0.0
        if end == 0:
            return np.full(tau.shape, x0)
        sol = solve_ivp(rhs, (0.0, end), [x0, v0], t_eval=flat[order], rtol=1e-12, atol=1e-12, method="DOP853")
        out = np.empty(flat.shape)
        out[order] = sol.y[0]
        return out.reshape(tau.shape)
    raise TypeError(f"unsupported potential {potential!r}")


def mean_positions(s, g: Grid, times: Sequence[float]) -> np.ndarray:
    from .timeline import Timeline, build_timeline

    tl = s if isinstance(s, Timeline) else build_timeline(s)
    out = []
    for t in times:
        b = tl.branches[tl.branch_index(float(t))]
        out.append(observables(tl, g, float(t), _GlobalPotential(b), tl.scenario.params).mean_x)
    return np.array(out)


@dataclass(frozen=True)
class _GlobalPotential:
    branch: object

    def value(self, x, t, params=NATURAL):
        return self.branch.potential.value(x, np.asarray(t, dtype=float) - self.branch.start, params)


def ehrenfest_check(s, g: Grid, times: Sequence[float]) -> float:
    """Largest ``|<x>(t) - x_classical(t)|`` over ``times``.

    Each segment's classical path starts from the quadrature moments
    ``<x>`` and ``<p>/M`` at its start.
    """
    from .timeline import Timeline, build_timeline

    tl = s if isinstance(s, Timeline) else build_timeline(s)
    params = tl.scenario.params
    starts = {}
    worst = 0.0
    for t in times:
        i = tl.branch_index(float(t))
        b = tl.branches[i]
        if i not in starts:
            o = observables(b.local, g, 0.0, b.potential, params)
            starts[i] = (o.mean_x, o.mean_p / params.mass)
        x0, v0 = starts[i]
        expected = float(classical_path(b.potential, x0, v0, float(t) - b.start, params))
        got = observables(b.local, g, float(t) - b.start, b.potential, params).mean_x
        worst = max(worst, abs(got - expected))
    return worst
