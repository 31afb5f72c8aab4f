"""Command-line front end.

Exit codes: 0 success, 2 usage error, 3 domain error, 4 I/O error.

Any subcommand accepts ``--config FILE``: an INI file whose section named
after the subcommand holds ``option = value`` pairs (option names as on the
command line, without the leading dashes).  Flags given on the command line
override file values.  If ``PHOTONQFA_OUTPUT_DIR`` is set, ``sweep`` and
``simulate`` write there when no ``--output`` is given.
"""

from __future__ import annotations

import argparse
import configparser
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from typing import List, Optional, Sequence

from . import __version__
from .automaton import AutomatonSpec, Variant, accept_probability
from .errors import DomainError, SearchCapError
from .io import (
    ROW_ERROR,
    ROW_MIN_BINARY,
    ROW_MIN_IDEAL,
    ResultRow,
    base_metadata,
    format_value,
    metadata_lines,
    rows_to_csv,
    rows_to_json,
)
from .montecarlo import DEFAULT_ERROR_REPETITIONS, DEFAULT_RUN_REPETITIONS, RNG_ID, RunConfig, simulate_runs
from .photon import Detector, PhotonBudget, binary_regime_min_photons, ideal_min_photons, threshold
from .strategies import Strategy, binary_valid, error_probability

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_DOMAIN = 3
EXIT_IO = 4

OUTPUT_DIR_ENV = "PHOTONQFA_OUTPUT_DIR"


class UsageError(Exception):
    pass


# -- argument types ---------------------------------------------------------

def _int_at_least(lower: int):
    def parse(text: str) -> int:
        try:
            value = int(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
        if value < lower:
            raise argparse.ArgumentTypeError(f"must be >= {lower}, got {value}")
        return value

    parse.__name__ = f"int>={lower}"
    return parse


def _non_negative_float(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a number, got {text!r}") from None
    if not value >= 0:
        raise argparse.ArgumentTypeError(f"must be >= 0, got {text}")
    return value


def _seed(text: str) -> int:
    value = _int_at_least(0)(text)
    if value >= 2**64:
        raise argparse.ArgumentTypeError("seed must fit in 64 bits")
    return value


def _int_list(text: str) -> List[int]:
    """Comma-separated integers or inclusive ranges start:stop[:step]."""
    values: List[int] = []
    for item in filter(None, (p.strip() for p in text.split(","))):
        try:
            parts = [int(p) for p in item.split(":")]
        except ValueError:
            raise argparse.ArgumentTypeError(f"bad integer list item {item!r}") from None
        if len(parts) == 1:
            values.append(parts[0])
        elif len(parts) in (2, 3):
            step = parts[2] if len(parts) == 3 else 1
            if step < 1:
                raise argparse.ArgumentTypeError(f"range step must be >= 1 in {item!r}")
            values.extend(range(parts[0], parts[1] + 1, step))
        else:
            raise argparse.ArgumentTypeError(f"bad range {item!r}")
    if not values:
        raise argparse.ArgumentTypeError("empty list")
    return values


def _float_list(text: str) -> List[float]:
    values = [_non_negative_float(p.strip()) for p in text.split(",") if p.strip()]
    if not values:
        raise argparse.ArgumentTypeError("empty list")
    return values


def _strategy_list(text: str) -> List[Strategy]:
    try:
        chosen = {Strategy.parse(p.strip()) for p in text.split(",") if p.strip()}
    except DomainError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None
    if not chosen:
        raise argparse.ArgumentTypeError("empty strategy list")
    return [s for s in Strategy if s in chosen]


def _detector_list(text: str) -> List[Detector]:
    chosen = {p.strip().upper() for p in text.split(",") if p.strip()}
    if not chosen or not chosen <= {"H", "V"}:
        raise argparse.ArgumentTypeError(f"detectors must be drawn from H,V, got {text!r}")
    return [d for d in Detector if d.value in chosen]


def _strategy(text: str) -> Strategy:
    try:
        return Strategy.parse(text)
    except DomainError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


# -- shared row builders ----------------------------------------------------

def error_row(m: int, nc: float, ndc: float, strategy: Strategy, empirical=None) -> ResultRow:
    spec = AutomatonSpec(m)
    budget = PhotonBudget(nc, ndc)
    th = threshold(spec, budget)
    return ResultRow(
        row_type=ROW_ERROR,
        m=m,
        nc=float(nc),
        ndc=float(ndc),
        strategy=strategy.value,
        analytic_error=error_probability(spec, budget, strategy),
        threshold_h=th.n_th_h,
        threshold_v=th.n_th_v,
        floor_h=th.floor_h,
        floor_v=th.floor_v,
        binary_valid=binary_valid(spec, budget, strategy),
        empirical_error=None if empirical is None else empirical.empirical,
        standard_error=None if empirical is None else empirical.standard_error,
    )


def _error_rows_for_tuple(args) -> List[ResultRow]:
    m, nc, ndc, strategies, seed, reps = args
    empirical = {}
    if seed is not None:
        from .montecarlo import empirical_errors

        empirical = empirical_errors(AutomatonSpec(m), PhotonBudget(nc, ndc), reps, seed)
    return [error_row(m, nc, ndc, s, empirical.get(s)) for s in strategies]


def _min_row(m: int, ndc: Optional[float], detector: Detector, regime: str) -> ResultRow:
    spec = AutomatonSpec(m)
    if regime == "ideal":
        return ResultRow(ROW_MIN_IDEAL, m, nc=float(ideal_min_photons(spec, detector)), strategy=detector.value)
    value = binary_regime_min_photons(spec, ndc, detector)
    return ResultRow(ROW_MIN_BINARY, m, nc=float(value), ndc=float(ndc), strategy=detector.value)


# -- output helpers ---------------------------------------------------------

def _resolve_output(path: Optional[str], default_name: str) -> Optional[str]:
    if path:
        return path
    directory = os.environ.get(OUTPUT_DIR_ENV)
    if directory:
        return os.path.join(directory, default_name)
    return None


def _emit(text: str, path: Optional[str]) -> None:
    if path is None:
        sys.stdout.write(text)
        return
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def _render(rows: Sequence[ResultRow], metadata: dict, fmt: str) -> str:
    return rows_to_json(rows, metadata) if fmt == "json" else rows_to_csv(rows, metadata)


# -- commands ---------------------------------------------------------------

def cmd_accept_prob(ns) -> int:
    spec = AutomatonSpec(ns.m, Variant.A1 if ns.variant == "A1" else Variant.A2)
    print(f"{accept_probability(spec, ns.k):.12f}")
    return EXIT_OK


def cmd_error_prob(ns) -> int:
    if ns.nc <= 0:
        raise DomainError("--nc must be > 0")
    row = error_row(ns.m, ns.nc, ns.ndc, ns.strategy)
    if ns.format in ("csv", "json"):
        meta = base_metadata(command="error-prob")
        sys.stdout.write(_render([row], meta, ns.format))
        return EXIT_OK
    print(f"m={ns.m} nc={format_value(row.nc)} ndc={format_value(row.ndc)} strategy={row.strategy}")
    print(f"error probability: {row.analytic_error:.3g}")
    print(f"threshold H: {row.threshold_h:.6f} (floor {row.floor_h})")
    print(f"threshold V: {row.threshold_v:.6f} (floor {row.floor_v})")
    print(f"binary regime valid: {format_value(row.binary_valid)}")
    return EXIT_OK


def cmd_thresholds(ns) -> int:
    if ns.nc <= 0:
        raise DomainError("--nc must be > 0")
    th = threshold(AutomatonSpec(ns.m), PhotonBudget(ns.nc, ns.ndc))
    if ns.format == "json":
        print(json.dumps({"n_th_h": th.n_th_h, "n_th_v": th.n_th_v, "floor_h": th.floor_h, "floor_v": th.floor_v}))
    else:
        print(f"N_th^H = {th.n_th_h:.12g} (floor {th.floor_h})")
        print(f"N_th^V = {th.n_th_v:.12g} (floor {th.floor_v})")
    return EXIT_OK


def cmd_min_photons(ns) -> int:
    spec = AutomatonSpec(ns.m)
    if ns.regime == "ideal":
        value = ideal_min_photons(spec, ns.detector, cap=ns.cap)
    else:
        value = binary_regime_min_photons(spec, ns.ndc, ns.detector, cap=ns.cap)
    print(value)
    return EXIT_OK


def cmd_sweep(ns) -> int:
    if any(m < 2 for m in ns.m):
        raise UsageError("every m must be >= 2")
    meta = base_metadata(command="sweep", kind=ns.kind)
    rows: List[ResultRow] = []
    if ns.kind == "min-photons":
        for m in sorted(set(ns.m)):
            for detector in ns.detectors:
                if ns.regime == "ideal":
                    rows.append(_min_row(m, None, detector, "ideal"))
                elif m >= 3:
                    for ndc in sorted(set(ns.ndc)):
                        rows.append(_min_row(m, ndc, detector, "binary"))
        meta.update(regime=ns.regime)
    else:
        if any(nc < 1 for nc in ns.nc):
            raise UsageError("nc range must start at >= 1")
        tuples = [
            (m, float(nc), ndc, ns.strategies, ns.seed, ns.reps)
            for m in sorted(set(ns.m))
            for nc in sorted(set(ns.nc))
            for ndc in sorted(set(ns.ndc))
        ]
        if ns.workers > 1:
            with ProcessPoolExecutor(max_workers=ns.workers) as pool:
                chunks = list(pool.map(_error_rows_for_tuple, tuples, chunksize=64))
        else:
            chunks = [_error_rows_for_tuple(t) for t in tuples]
        rows = [row for chunk in chunks for row in chunk]
        for m in sorted(set(ns.m)):
            if m < 3:
                continue
            for ndc in sorted(set(ns.ndc)):
                for detector in Detector:
                    rows.append(_min_row(m, ndc, detector, "binary"))
        meta.update(
            rng=RNG_ID,
            seed="none" if ns.seed is None else ns.seed,
            repetitions=ns.reps if ns.seed is not None else "none",
        )
    _emit(_render(rows, meta, ns.format), _resolve_output(ns.output, f"sweep.{ns.format}"))
    return EXIT_OK


def simulate_csv(m: int, k: int, nc: float, ndc: float, reps: int, seed: int) -> str:
    spec = AutomatonSpec(m)
    budget = PhotonBudget(nc, ndc)
    th = threshold(spec, budget)
    records = simulate_runs(RunConfig(spec, budget, k, reps, seed), th)
    meta = base_metadata(
        command="simulate",
        m=m,
        k=k,
        nc=format_value(float(nc)),
        ndc=format_value(float(ndc)),
        repetitions=reps,
        seed=seed,
        rng=RNG_ID,
        threshold_h=format_value(th.n_th_h),
        threshold_v=format_value(th.n_th_v),
        floor_h=th.floor_h,
        floor_v=th.floor_v,
    )
    lines = metadata_lines(meta)
    lines.append("rep,n_h,n_v,decision_H,decision_V,decision_Joint,joint_conclusive")
    for rec in records:
        d = rec.decisions
        lines.append(
            f"{rec.rep_index},{rec.counts.n_h},{rec.counts.n_v},"
            f"{int(d[Strategy.H].accept)},{int(d[Strategy.V].accept)},"
            f"{int(d[Strategy.JOINT].accept)},{int(d[Strategy.JOINT].conclusive)}"
        )
    return "\n".join(lines) + "\n"


def cmd_simulate(ns) -> int:
    if ns.nc <= 0:
        raise DomainError("--nc must be > 0")
    text = simulate_csv(ns.m, ns.k, ns.nc, ns.ndc, ns.reps, ns.seed)
    _emit(text, _resolve_output(ns.output, "simulate.csv"))
    return EXIT_OK


# -- parser -----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="photonqfa",
        description="Photonic quantum finite automaton for L_m = {a^k : k mod m = 0}.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    m_type = _int_at_least(2)

    def add(name, help_text, func):
        p = sub.add_parser(name, help=help_text, description=help_text)
        p.add_argument("--config", help="INI file with a [%s] section of option defaults" % name)
        p.set_defaults(func=func)
        return p

    p = add("accept-prob", "Acceptance probability cos^2(k pi/m) of the word a^k.", cmd_accept_prob)
    p.add_argument("--m", type=m_type, required=True)
    p.add_argument("--k", type=_int_at_least(0), required=True)
    p.add_argument("--variant", choices=["A1", "A2"], default="A1")

    p = add("error-prob", "Analytic error probability of one strategy.", cmd_error_prob)
    p.add_argument("--m", type=m_type, required=True)
    p.add_argument("--nc", type=_non_negative_float, required=True, help="mean signal photons")
    p.add_argument("--ndc", type=_non_negative_float, default=0.0, help="mean dark counts per detector")
    p.add_argument("--strategy", type=_strategy, required=True, help="H, V or Joint")
    p.add_argument("--format", choices=["text", "csv", "json"], default="text")

    p = add("thresholds", "Decision thresholds of both detectors.", cmd_thresholds)
    p.add_argument("--m", type=m_type, required=True)
    p.add_argument("--nc", type=_non_negative_float, required=True)
    p.add_argument("--ndc", type=_non_negative_float, default=0.0)
    p.add_argument("--format", choices=["text", "json"], default="text")

    p = add("min-photons", "Minimum mean photon number for a detector.", cmd_min_photons)
    p.add_argument("--m", type=m_type, required=True)
    p.add_argument("--ndc", type=_non_negative_float, default=0.0)
    p.add_argument("--detector", choices=["H", "V"], required=True)
    p.add_argument("--regime", choices=["ideal", "binary"], default="binary")
    p.add_argument("--cap", type=_int_at_least(1), default=10**7, help="search cap")

    p = add("sweep", "Tabulate error probabilities or photon minima over a grid.", cmd_sweep)
    p.add_argument("--kind", choices=["error", "min-photons"], default="error")
    p.add_argument("--m", type=_int_list, default=[5, 11, 23], help="e.g. 5,11,23 or 2:30")
    p.add_argument("--nc", type=_int_list, default=[1, *range(10, 3001, 10)], help="e.g. 1:3000:10")
    p.add_argument("--ndc", type=_float_list, default=[0.0, 100.0])
    p.add_argument("--strategies", type=_strategy_list, default=list(Strategy))
    p.add_argument("--detectors", type=_detector_list, default=list(Detector))
    p.add_argument("--regime", choices=["ideal", "binary"], default="binary")
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.add_argument("--output", help="output file (default: stdout)")
    p.add_argument("--seed", type=_seed, default=None, help="also run Monte Carlo with this seed")
    p.add_argument("--reps", type=_int_at_least(1), default=DEFAULT_ERROR_REPETITIONS)
    p.add_argument("--workers", type=_int_at_least(1), default=1)

    p = add("simulate", "Per-repetition simulated counts and decisions for one word.", cmd_simulate)
    p.add_argument("--m", type=m_type, required=True)
    p.add_argument("--k", type=_int_at_least(0), required=True)
    p.add_argument("--nc", type=_non_negative_float, required=True)
    p.add_argument("--ndc", type=_non_negative_float, default=0.0)
    p.add_argument("--reps", type=_int_at_least(1), default=DEFAULT_RUN_REPETITIONS)
    p.add_argument("--seed", type=_seed, default=0)
    p.add_argument("--output", help="output CSV (default: stdout)")
    return parser


def _config_argv(argv: List[str]) -> List[str]:
    """Splice options from --config FILE in front of the explicit flags."""
    if not argv or "--config" not in argv and not any(a.startswith("--config=") for a in argv):
        return argv
    command = argv[0]
    path = None
    for i, arg in enumerate(argv):
        if arg == "--config" and i + 1 < len(argv):
            path = argv[i + 1]
        elif arg.startswith("--config="):
            path = arg.split("=", 1)[1]
    if path is None:
        return argv
    parser = configparser.ConfigParser()
    try:
        with open(path, encoding="utf-8") as fh:
            parser.read_file(fh)
    except OSError as exc:
        raise OSError(f"cannot read config file {path}: {exc.strerror}") from exc
    if not parser.has_section(command):
        return argv
    injected = []
    for key, value in parser.items(command):
        injected += [f"--{key}", value]
    return [command, *injected, *argv[1:]]


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        ns = parser.parse_args(_config_argv(argv))
    except SystemExit as exc:
        return int(exc.code or 0)
    except OSError as exc:
        print(f"photonqfa: error: {exc}", file=sys.stderr)
        return EXIT_IO
    try:
        return ns.func(ns)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"photonqfa: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DomainError, SearchCapError) as exc:
        print(f"photonqfa: domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except OSError as exc:
        print(f"photonqfa: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
