"""Scenario files (YAML), figure presets and dataset output."""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Any, Iterator, TextIO

import numpy as np
import yaml

from .potentials import Free, General, Gravity, Harmonic, Inverted
from .qcore import Grid, PhysicalParams, sample_on_grid
from .states import GaussianPacket, Superposition
from .timeline import Scenario, Segment, Timeline, build_timeline
from .verify import observables

CSV_HEADER = "t,x,density,re_psi,im_psi"
OBSERVABLE_KEYS = ("time", "norm", "mean_x", "var_x", "mean_p", "kinetic", "potential", "total")
QUANTITIES = ("dataset", "observables")
POTENTIAL_TYPES = ("free", "harmonic", "inverted", "gravity", "general")
PROFILES = ("A1", "A2")


class ScenarioError(ValueError):
    """Invalid scenario file. ``path`` names the offending field."""

    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}" if path else message)
        self.path = path


# ------------------------------------------------------------------ schema


@dataclass(frozen=True)
class PacketSpec:
    x0: float = 0.0
    p0: float = 0.0
    sigma0: float = 1.0
    coefficient: complex = 1.0


@dataclass(frozen=True)
class InitialSpec:
    """A single Gaussian is a superposition with one term."""

    packets: tuple = (PacketSpec(),)
    normalize: bool = True
    time_origin: float | None = None


@dataclass(frozen=True)
class PotentialBlock:
    type: str = "free"
    k: float | None = None
    center: float = 0.0
    a: float | None = None
    profile: str | None = None
    tau0: float = 0.0


@dataclass(frozen=True)
class SegmentSpec:
    start_time: float
    potential: PotentialBlock = PotentialBlock()


@dataclass(frozen=True)
class OutputSpec:
    x_min: float = -10.0
    x_max: float = 10.0
    n_points: int = 401
    times: tuple = ()
    quantities: tuple = QUANTITIES


@dataclass(frozen=True)
class ScenarioFile:
    segments: tuple
    initial: InitialSpec = InitialSpec()
    hbar: float = 1.0
    mass: float = 1.0
    output: OutputSpec = OutputSpec()

    @property
    def params(self) -> PhysicalParams:
        return PhysicalParams(self.hbar, self.mass)


# ------------------------------------------------------------- validation


def _mapping(node, path, allowed, required=()):
    if not isinstance(node, dict):
        raise ScenarioError(path, f"expected a mapping, got {type(node).__name__}")
    for key in node:
        if key not in allowed:
            raise ScenarioError(f"{path}.{key}" if path else str(key), f"unknown key (allowed: {', '.join(allowed)})")
    for key in required:
        if key not in node:
            raise ScenarioError(f"{path}.{key}" if path else key, "missing required key")
    return node


def _number(node, path, positive=False, allow_none=False):
    if node is None and allow_none:
        return None
    if isinstance(node, bool) or not isinstance(node, (int, float)):
        raise ScenarioError(path, f"expected a number, got {node!r}")
    value = float(node)
    if not math.isfinite(value):
        raise ScenarioError(path, "must be finite")
    if positive and not value > 0:
        raise ScenarioError(path, "must be positive")
    return value


def _coefficient(node, path):
    if isinstance(node, list):
        if len(node) != 2:
            raise ScenarioError(path, "complex coefficients are written [re, im]")
        return complex(_number(node[0], f"{path}[0]"), _number(node[1], f"{path}[1]"))
    return complex(_number(node, path))


def _packet(node, path) -> PacketSpec:
    _mapping(node, path, ("x0", "p0", "sigma0", "coefficient"))
    return PacketSpec(
        _number(node.get("x0", 0.0), f"{path}.x0"),
        _number(node.get("p0", 0.0), f"{path}.p0"),
        _number(node.get("sigma0", 1.0), f"{path}.sigma0", positive=True),
        _coefficient(node.get("coefficient", 1.0), f"{path}.coefficient"),
    )


def _initial(node, path) -> InitialSpec:
    _mapping(node, path, ("gaussian", "superposition", "normalize", "time_origin"))
    if ("gaussian" in node) == ("superposition" in node):
        raise ScenarioError(path, "give exactly one of 'gaussian' or 'superposition'")
    if "gaussian" in node:
        packets = (_packet(node["gaussian"], f"{path}.gaussian"),)
    else:
        terms = node["superposition"]
        if not isinstance(terms, list) or not terms:
            raise ScenarioError(f"{path}.superposition", "expected a non-empty list of packets")
        packets = tuple(_packet(t, f"{path}.superposition[{i}]") for i, t in enumerate(terms))
    normalize = node.get("normalize", True)
    if not isinstance(normalize, bool):
        raise ScenarioError(f"{path}.normalize", "expected true or false")
    origin = _number(node.get("time_origin"), f"{path}.time_origin", allow_none=True)
    return InitialSpec(packets, normalize, origin)


_POTENTIAL_KEYS = {
    "free": ((), ()),
    "harmonic": (("k", "center"), ("k",)),
    "inverted": (("k", "center"), ("k",)),
    "gravity": (("a",), ("a",)),
    "general": (("profile", "tau0", "B", "Xi0"), ("profile",)),
}


def _potential(node, path) -> PotentialBlock:
    if not isinstance(node, dict) or "type" not in node:
        raise ScenarioError(path, f"expected a mapping with a 'type' ({', '.join(POTENTIAL_TYPES)})")
    kind = node["type"]
    if kind not in POTENTIAL_TYPES:
        raise ScenarioError(f"{path}.type", f"unknown potential {kind!r} (known: {', '.join(POTENTIAL_TYPES)})")
    allowed, required = _POTENTIAL_KEYS[kind]
    _mapping(node, path, ("type",) + allowed, required)
    if kind == "free":
        return PotentialBlock("free")
    if kind in ("harmonic", "inverted"):
        k = _number(node["k"], f"{path}.k")
        if kind == "harmonic" and not k > 0:
            raise ScenarioError(f"{path}.k", "harmonic spring constant must be positive")
        if kind == "inverted" and k == 0:
            raise ScenarioError(f"{path}.k", "inverted spring constant must be nonzero")
        return PotentialBlock(kind, k=k, center=_number(node.get("center", 0.0), f"{path}.center"))
    if kind == "gravity":
        return PotentialBlock("gravity", a=_number(node["a"], f"{path}.a"))
    profile = node["profile"]
    if profile not in PROFILES:
        raise ScenarioError(f"{path}.profile", f"unknown profile {profile!r} (known: {', '.join(PROFILES)})")
    if node.get("B", None) not in (None, "none"):
        raise ScenarioError(f"{path}.B", "only B: none is supported in scenario files")
    if node.get("Xi0", "auto") != "auto":
        raise ScenarioError(f"{path}.Xi0", "only Xi0: auto is supported in scenario files")
    return PotentialBlock("general", profile=profile, tau0=_number(node.get("tau0", 0.0), f"{path}.tau0"))


def _output(node, path) -> OutputSpec:
    _mapping(node, path, ("grid", "times", "quantities"))
    grid = node.get("grid", {})
    _mapping(grid, f"{path}.grid", ("x_min", "x_max", "n_points"))
    n = grid.get("n_points", 401)
    if isinstance(n, bool) or not isinstance(n, int) or n < 2:
        raise ScenarioError(f"{path}.grid.n_points", "expected an integer >= 2")
    x_min = _number(grid.get("x_min", -10.0), f"{path}.grid.x_min")
    x_max = _number(grid.get("x_max", 10.0), f"{path}.grid.x_max")
    if not x_max > x_min:
        raise ScenarioError(f"{path}.grid", "x_max must exceed x_min")
    times = node.get("times", [])
    if not isinstance(times, list):
        raise ScenarioError(f"{path}.times", "expected a list of times")
    times = tuple(_number(t, f"{path}.times[{i}]") for i, t in enumerate(times))
    quantities = node.get("quantities", list(QUANTITIES))
    if not isinstance(quantities, list) or any(q not in QUANTITIES for q in quantities):
        raise ScenarioError(f"{path}.quantities", f"expected a list drawn from {', '.join(QUANTITIES)}")
    return OutputSpec(x_min, x_max, n, times, tuple(quantities))


def scenario_from_dict(doc) -> ScenarioFile:
    _mapping(doc, "", ("params", "initial", "segments", "output"), ("initial", "segments"))
    params = doc.get("params", {})
    _mapping(params, "params", ("hbar", "mass"))
    hbar = _number(params.get("hbar", 1.0), "params.hbar", positive=True)
    mass = _number(params.get("mass", 1.0), "params.mass", positive=True)
    initial = _initial(doc["initial"], "initial")
    segs = doc["segments"]
    if not isinstance(segs, list) or not segs:
        raise ScenarioError("segments", "expected a non-empty list")
    segments = []
    for i, node in enumerate(segs):
        path = f"segments[{i}]"
        _mapping(node, path, ("start_time", "potential"), ("start_time", "potential"))
        start = _number(node["start_time"], f"{path}.start_time")
        if segments and not start > segments[-1].start_time:
            raise ScenarioError(f"{path}.start_time", f"{start} is not after the previous start {segments[-1].start_time}")
        segments.append(SegmentSpec(start, _potential(node["potential"], f"{path}.potential")))
    output = _output(doc.get("output", {}), "output")
    if initial.time_origin is not None and initial.time_origin < segments[0].start_time:
        raise ScenarioError("initial.time_origin", "must not precede the first segment")
    return ScenarioFile(tuple(segments), initial, hbar, mass, output)


def parse_scenario_text(text: str) -> ScenarioFile:
    try:
        doc = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        where = f"line {mark.line + 1}, column {mark.column + 1}: " if mark is not None else ""
        raise ScenarioError("", f"parse error at {where}{getattr(exc, 'problem', None) or exc}") from exc
    if doc is None:
        raise ScenarioError("", "empty scenario file")
    return scenario_from_dict(doc)


def parse_scenario_file(path) -> ScenarioFile:
    with open(path, encoding="utf-8") as fh:
        return parse_scenario_text(fh.read())


# ------------------------------------------------------------- serialise


def _packet_dict(p: PacketSpec) -> dict:
    c = complex(p.coefficient)
    coef: Any = c.real if c.imag == 0 else [c.real, c.imag]
    return {"x0": p.x0, "p0": p.p0, "sigma0": p.sigma0, "coefficient": coef}


def _potential_dict(b: PotentialBlock) -> dict:
    if b.type == "free":
        return {"type": "free"}
    if b.type in ("harmonic", "inverted"):
        return {"type": b.type, "k": b.k, "center": b.center}
    if b.type == "gravity":
        return {"type": "gravity", "a": b.a}
    return {"type": "general", "profile": b.profile, "tau0": b.tau0, "B": None, "Xi0": "auto"}


def scenario_to_dict(sf: ScenarioFile) -> dict:
    ini = sf.initial
    initial: dict = {}
    if len(ini.packets) == 1:
        initial["gaussian"] = _packet_dict(ini.packets[0])
    else:
        initial["superposition"] = [_packet_dict(p) for p in ini.packets]
    initial["normalize"] = ini.normalize
    if ini.time_origin is not None:
        initial["time_origin"] = ini.time_origin
    out = sf.output
    return {
        "params": {"hbar": sf.hbar, "mass": sf.mass},
        "initial": initial,
        "segments": [{"start_time": s.start_time, "potential": _potential_dict(s.potential)} for s in sf.segments],
        "output": {
            "grid": {"x_min": out.x_min, "x_max": out.x_max, "n_points": out.n_points},
            "times": list(out.times),
            "quantities": list(out.quantities),
        },
    }


def serialize_scenario(sf: ScenarioFile) -> str:
    return yaml.safe_dump(scenario_to_dict(sf), sort_keys=False, default_flow_style=None)


# -------------------------------------------------------------- building


def _potential_spec(b: PotentialBlock):
    if b.type == "free":
        return Free()
    if b.type == "harmonic":
        return Harmonic(b.k, b.center)
    if b.type == "inverted":
        return Inverted(b.k, b.center)
    if b.type == "gravity":
        return Gravity(b.a)
    return General(b.profile, b.tau0)


def to_scenario(sf: ScenarioFile) -> Scenario:
    params = sf.params
    terms = tuple((p.coefficient, GaussianPacket(p.x0, p.p0, p.sigma0, params)) for p in sf.initial.packets)
    if len(terms) == 1 and terms[0][0] == 1:
        state = terms[0][1]
    else:
        state = Superposition(terms)
        if sf.initial.normalize:
            state = state.normalized()
    segments = tuple(Segment(s.start_time, _potential_spec(s.potential)) for s in sf.segments)
    return Scenario(state, segments, params, sf.initial.time_origin)


def output_grid(sf: ScenarioFile) -> Grid:
    o = sf.output
    return Grid(o.x_min, o.x_max, o.n_points)


# --------------------------------------------------------------- presets


def _pair(p0: float, sigma0: float = 1.5) -> InitialSpec:
    return InitialSpec((PacketSpec(0.0, p0, sigma0), PacketSpec(0.0, -p0, sigma0)), True, 0.0)


def _preset(initial, potential: PotentialBlock, grid, times) -> ScenarioFile:
    segments = (SegmentSpec(-1.0, PotentialBlock("free")), SegmentSpec(0.0, potential))
    return ScenarioFile(segments, initial, output=OutputSpec(*grid, tuple(float(t) for t in times)))


def figure_preset(name: str) -> ScenarioFile:
    """Two packets at ``+-p0`` released from a free prehistory into the
    figure's potential at ``t = 0``."""
    if name == "fig1":
        period = 2 * np.pi / np.sqrt(5.0)
        return _preset(_pair(4.0), PotentialBlock("harmonic", k=5.0), (-8.0, 8.0, 401), period * np.arange(5) / 4)
    if name == "fig2":
        return _preset(
            _pair(2.0), PotentialBlock("harmonic", k=1.0, center=2.0), (-6.0, 10.0, 401), np.linspace(0, 2 * np.pi, 9)
        )
    if name == "fig3":
        return _preset(
            _pair(2.0), PotentialBlock("inverted", k=-1.0, center=2.0), (-30.0, 26.0, 4001), np.linspace(0, 1.5, 7)
        )
    if name == "fig4":
        return _preset(_pair(2.0), PotentialBlock("general", profile="A1"), (-8.0, 8.0, 801), np.linspace(0, 1.6, 9))
    if name == "fig5":
        return _preset(_pair(2.0), PotentialBlock("general", profile="A2"), (-8.0, 8.0, 801), np.linspace(0, 2.6, 14))
    raise ScenarioError("", f"unknown figure {name!r}; available: {', '.join(FIGURES)}")


FIGURES = ("fig1", "fig2", "fig3", "fig4", "fig5")


# ---------------------------------------------------------------- output


@dataclass(frozen=True)
class RunResult:
    times: tuple
    grid: Grid
    samples: tuple = field(repr=False)
    observables: tuple = ()

    def rows(self) -> Iterator[tuple]:
        x = self.grid.x
        for t, psi in zip(self.times, self.samples):
            dens = psi.real**2 + psi.imag**2
            for j in range(x.size):
                yield (t, x[j], dens[j], psi.real[j], psi.imag[j])


def _active_potential(tl: Timeline, t: float):
    b = tl.branches[tl.branch_index(t)]
    return _Shifted(b.potential, b.start)


@dataclass(frozen=True)
class _Shifted:
    potential: Any
    start: float

    def value(self, x, t, params):
        return self.potential.value(x, np.asarray(t, dtype=float) - self.start, params)


def run_scenario(sf: ScenarioFile, want_observables: bool | None = None) -> RunResult:
    """Sample the scenario on its output grid at every requested time."""
    tl = build_timeline(to_scenario(sf))
    g = output_grid(sf)
    if want_observables is None:
        want_observables = "observables" in sf.output.quantities
    samples, obs = [], []
    for i, t in enumerate(sf.output.times):
        try:
            samples.append(sample_on_grid(tl, g, t))
            if want_observables:
                obs.append(observables(tl, g, t, _active_potential(tl, t), sf.params).as_dict())
        except ValueError as exc:
            raise ScenarioError(f"output.times[{i}]", f"t={t}: {exc}") from exc
    return RunResult(tuple(sf.output.times), g, tuple(samples), tuple(obs))


def write_csv(result: RunResult, fh: TextIO):
    fh.write(CSV_HEADER + "\n")
    for row in result.rows():
        fh.write(",".join("%.17g" % v for v in row) + "\n")


def write_observables(result: RunResult, fh: TextIO):
    json.dump([{k: d[k] for k in OBSERVABLE_KEYS} for d in result.observables], fh, indent=2)
    fh.write("\n")


__all__ = [
    "CSV_HEADER",
    "FIGURES",
    "InitialSpec",
    "OutputSpec",
    "PacketSpec",
    "PotentialBlock",
    "RunResult",
    "ScenarioError",
    "ScenarioFile",
    "SegmentSpec",
    "figure_preset",
    "output_grid",
    "parse_scenario_file",
    "parse_scenario_text",
    "run_scenario",
    "scenario_from_dict",
    "scenario_to_dict",
    "serialize_scenario",
    "to_scenario",
    "write_csv",
    "write_observables",
]
