"""Command-line front end: ``quadmap run|figure|verify|oracle``."""
from __future__ import annotations

import argparse
import json
import sys
from contextlib import contextmanager

from .qcore import EvaluationError, sample_on_grid
from .scenario_io import (
    FIGURES,
    RunResult,
    ScenarioError,
    figure_preset,
    output_grid,
    parse_scenario_file,
    run_scenario,
    serialize_scenario,
    to_scenario,
    write_csv,
    write_observables,
)
from .suites import SUITES, run_suites
from .timeline import build_timeline
from .verify import OracleConfig, WindowLeakageError, oracle_propagate

EXIT_OK, EXIT_INVALID, EXIT_SUITE = 0, 1, 2


@contextmanager
def _sink(path):
    if path in (None, "-"):
        yield sys.stdout
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            yield fh


def _emit(sf, args):
    want_obs = args.observables is not None and "observables" in sf.output.quantities
    result = run_scenario(sf, want_observables=want_obs)
    if "dataset" in sf.output.quantities:
        with _sink(args.out) as fh:
            write_csv(result, fh)
    if want_obs:
        with _sink(args.observables) as fh:
            write_observables(result, fh)


def cmd_run(args) -> int:
    _emit(parse_scenario_file(args.scenario), args)
    return EXIT_OK


def cmd_figure(args) -> int:
    sf = figure_preset(args.name)
    if args.dump_scenario:
        with _sink(args.dump_scenario) as fh:
            fh.write(serialize_scenario(sf))
    _emit(sf, args)
    return EXIT_OK


def cmd_verify(args) -> int:
    results = run_suites(args.suite)
    failed = [r for r in results if not r.passed]
    summary = {
        "suite": args.suite,
        "passed": not failed,
        "checks": [r.as_dict() for r in results],
        "failures": [r.name for r in failed],
    }
    json.dump(summary, sys.stdout, indent=2)
    sys.stdout.write("\n")
    return EXIT_OK if not failed else EXIT_SUITE


def cmd_oracle(args) -> int:
    """Crank-Nicolson propagation of the scenario's initial grid samples
    through the same piecewise potential, written in the run CSV layout."""
    sf = parse_scenario_file(args.scenario)
    scenario = to_scenario(sf)
    tl = build_timeline(scenario)
    g = output_grid(sf)
    cfg = OracleConfig(g, args.dt, sf.params)
    starts = [b.start for b in tl.branches]
    times = sorted(sf.output.times)
    now = starts[0]
    if times and times[0] < now:
        raise ScenarioError("output.times", f"t={times[0]} precedes the scenario start {now}")
    psi = sample_on_grid(tl, g, now)
    samples = {}
    for t in times:
        while now < t:
            i = tl.branch_index(now)
            b = tl.branches[i]
            stop = min(t, starts[i + 1]) if i + 1 < len(starts) else t
            psi = oracle_propagate(
                psi, lambda x, s, b=b: b.potential.value(x, s - b.start, sf.params), cfg, now, stop
            )
            now = stop
        samples[t] = psi.copy()
    result = RunResult(tuple(sf.output.times), g, tuple(samples[t] for t in sf.output.times))
    with _sink(args.out) as fh:
        write_csv(result, fh)
    return EXIT_OK


class _Parser(argparse.ArgumentParser):
    # usage errors are validation errors; exit code 2 is reserved for suites
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INVALID, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="quadmap", description="Closed-form wave packets in switched quadratic potentials.")
    sub = p.add_subparsers(dest="command", required=True)

    r = sub.add_parser("run", help="evaluate a scenario file")
    r.add_argument("scenario")
    r.add_argument("--out", default=None, help="CSV path (default stdout)")
    r.add_argument("--observables", default=None, help="JSON sidecar path")
    r.set_defaults(func=cmd_run)

    f = sub.add_parser("figure", help="evaluate a figure preset")
    f.add_argument("name", choices=FIGURES)
    f.add_argument("--out", default=None)
    f.add_argument("--observables", default=None)
    f.add_argument("--dump-scenario", default=None, help="also write the preset as a scenario file")
    f.set_defaults(func=cmd_figure)

    v = sub.add_parser("verify", help="run numerical verification suites")
    v.add_argument("--suite", default="all", choices=("all",) + SUITES)
    v.set_defaults(func=cmd_verify)

    o = sub.add_parser("oracle", help="reference Crank-Nicolson run of a scenario file")
    o.add_argument("scenario")
    o.add_argument("--out", default=None)
    o.add_argument("--dt", type=float, default=1e-3)
    o.set_defaults(func=cmd_oracle)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # --help or a usage error
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (ScenarioError, WindowLeakageError, EvaluationError, FileNotFoundError, ValueError) as exc:
        print(f"quadmap: error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
