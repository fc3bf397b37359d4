"""Command-line front end.

Exit codes: 0 all checks pass, 1 a check reported violations, 2 bad input,
3 an enumeration could not be certified.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

from . import suites
from .enumeration import UncertifiedEnumeration
from .flowspace import LongnessInputError
from .lattice import NotSaturated, Sublattice, canonical_polygon, instability
from .report import Report, dumps, emit_report
from .symspace import InnerProduct, NotPositiveDefinite

EXIT_OK, EXIT_VIOLATION, EXIT_INPUT, EXIT_UNCERTIFIED = 0, 1, 2, 3
COMMANDS = ("polygon", "dw", "cover-verify", "grad-check", "flow-verify", "report")


class InputError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    command: str
    gram: list | None = None
    sublattice: list | None = None
    seed: int = 0
    samples: int | None = None
    t: float = 1.0
    alpha: float | None = None
    delta: float = 1.0
    tau: float = 1.0
    n: int = 3
    enum_bound: float | None = None
    output_path: Path | None = None

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise InputError(f"unknown command {self.command!r}")
        if self.samples is not None and self.samples < 1:
            raise InputError("--samples must be at least 1")
        if self.t < 1:
            raise InputError("--t must be at least 1")
        for name in ("alpha", "enum_bound"):
            v = getattr(self, name)
            if v is not None and not v > 0:
                raise InputError(f"--{name.replace('_', '-')} must be positive")
        if self.delta < 0 or self.tau < 0:
            raise InputError("--delta and --tau must be nonnegative")
        if not 0 <= self.seed < 2 ** 64:
            raise InputError("--seed must be a 64-bit unsigned integer")


def _load_json(text: str, what: str):
    """Inline JSON, or the contents of a file if ``text`` names one."""
    path = Path(text)
    try:
        if not text.lstrip().startswith(("[", "{")) and path.is_file():
            text = path.read_text()
        return json.loads(text)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"{what}: {exc}") from exc


def _gram_value(doc):
    if isinstance(doc, dict):
        doc = InnerProduct.from_json(doc).gram.tolist()
    return doc


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="grayson-lab", description=__doc__.splitlines()[0])
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--gram", help="Gram matrix as JSON rows, or a JSON file")
    p.add_argument("--sublattice", help="n x m integer basis (columns) as JSON rows")
    p.add_argument("--input", help="JSON file with 'gram' and optionally 'sublattice'")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--samples", type=int)
    p.add_argument("--t", type=float, default=1.0)
    p.add_argument("--alpha", type=float)
    p.add_argument("--delta", type=float, default=1.0)
    p.add_argument("--tau", type=float, default=1.0)
    p.add_argument("--n", type=int, default=3)
    p.add_argument("--enum-bound", type=float, help="search radius for lattice enumeration")
    p.add_argument("--out", type=Path)
    return p


def parse_args(argv: list[str]) -> RunConfig:
    """Validate ``argv``; raises :class:`InputError` (or ``SystemExit(2)`` from argparse)."""
    ns = _parser().parse_args(argv)
    gram = sub = None
    if ns.input:
        doc = _load_json(ns.input, "--input")
        if not isinstance(doc, dict):
            raise InputError("--input must hold a JSON object")
        gram = _gram_value(doc.get("gram"))
        sub = doc.get("sublattice")
        if isinstance(sub, dict):
            sub = Sublattice.from_json(sub).matrix()
    if ns.gram:
        gram = _gram_value(_load_json(ns.gram, "--gram"))
    if ns.sublattice:
        sub = _load_json(ns.sublattice, "--sublattice")
    if ns.command in ("polygon", "dw") and gram is None:
        raise InputError(f"{ns.command} needs --gram or --input")
    if ns.command == "dw" and sub is None:
        raise InputError("dw needs --sublattice")
    return RunConfig(command=ns.command, gram=gram, sublattice=sub, seed=ns.seed,
                     samples=ns.samples, t=ns.t, alpha=ns.alpha, delta=ns.delta, tau=ns.tau,
                     n=ns.n, enum_bound=ns.enum_bound, output_path=ns.out)


def _inner_product(config: RunConfig) -> InnerProduct:
    try:
        return InnerProduct(config.gram)
    except (TypeError, ValueError) as exc:
        raise InputError(f"--gram: {exc}") from exc


def _sublattice(config: RunConfig, n: int) -> Sublattice:
    rows = config.sublattice
    try:
        if not isinstance(rows, list) or len(rows) != n or any(not isinstance(r, list) for r in rows):
            raise ValueError(f"expected an {n} x m list of integer rows")
        if any(isinstance(v, float) and not v.is_integer() for r in rows for v in r):
            raise ValueError("entries must be integers")
        m = len(rows[0])
        cols = tuple(tuple(int(r[j]) for r in rows) for j in range(m))
        W = Sublattice(n, cols)
    except (TypeError, ValueError, IndexError) as exc:
        raise InputError(f"--sublattice: {exc}") from exc
    if not W.is_proper():
        raise InputError("--sublattice must be neither 0 nor all of Z^n")
    return W


def _enum(config: RunConfig) -> dict:
    return {} if config.enum_bound is None else {"radius": config.enum_bound}


def _suite_calls(config: RunConfig) -> list[tuple]:
    """``(callable, kwargs)`` pairs for the verification command, in output order."""
    seed = config.seed
    base = {"seed": seed}
    if config.samples is not None:
        base["samples"] = config.samples
    grad = [(suites.gradient_suite, base), (suites.norm_suite, base)]
    geometry = [(suites.metric_invariance_suite, base), (suites.distance_quadrature_suite, base),
                (suites.lipschitz_suite, base)]
    cover = [
        (suites.sandwich_suite, base),
        (suites.neighborhood_suite, {**base, "t": config.t, "alpha": config.alpha}),
        (suites.slope_identity_suite, base),
        (suites.chain_suite, {**base, "t": config.t, "n": config.n}),
        (suites.polygon_suite, base),
        (suites.multiplicativity_suite, base),
        (suites.descent_suite, base),
        (suites.cover_equivariance_suite, {**base, "t": config.t}),
        (suites.cusp_suite, {**base, "ts": (config.t,) if config.t != 1.0 else (1.0, 2.0, 4.0)}),
    ]
    flow = [(suites.flow_suite, base),
            (suites.longness_suite, {**base, "t": config.t, "delta": config.delta,
                                     "tau": config.tau})]
    return {"grad-check": grad, "cover-verify": cover, "flow-verify": flow,
            "report": grad + geometry + cover + flow}[config.command]


def _threads() -> int:
    try:
        return max(1, int(os.environ.get("GRAYSON_LAB_THREADS", "1")))
    except ValueError:
        raise InputError("GRAYSON_LAB_THREADS must be an integer")


def _run_suites(config: RunConfig) -> list[Report]:
    calls = _suite_calls(config)
    with ThreadPoolExecutor(max_workers=_threads()) as pool:
        futures = [pool.submit(fn, **kw) for fn, kw in calls]
        results = [f.result() for f in futures]       # fixed order regardless of timing
    out: list[Report] = []
    for r in results:
        out.extend(r if isinstance(r, list) else [r])
    return out


def _emit(config: RunConfig, doc: dict, csv: str | None = None) -> None:
    text = dumps(doc)
    if config.output_path is None:
        sys.stdout.write(text)
        return
    try:
        config.output_path.write_text(text)
        if csv is not None:
            config.output_path.with_suffix(".csv").write_text(csv)
    except OSError as exc:
        raise InputError(f"--out: {exc}") from exc


def run(config: RunConfig) -> int:
    """Execute ``config`` and return the exit code."""
    try:
        if config.command == "polygon":
            s = _inner_product(config)
            poly = canonical_polygon(s, **_enum(config))
            doc = poly.to_json()
            doc["csv"] = poly.to_csv()
            _emit(config, doc, poly.to_csv())
            return EXIT_OK
        if config.command == "dw":
            s = _inner_product(config)
            W = _sublattice(config, s.dim)
            _emit(config, instability(s, W, **_enum(config)).to_json())
            return EXIT_OK
        reports = _run_suites(config)
        _emit(config, emit_report(reports))
        return EXIT_OK if all(r.passed for r in reports) else EXIT_VIOLATION
    except UncertifiedEnumeration as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_UNCERTIFIED
    except (InputError, NotPositiveDefinite, NotSaturated, LongnessInputError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ValueError as exc:
        # remaining ValueErrors come from validating user-supplied values
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


def main(argv: list[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    try:
        config = parse_args(argv)
    except SystemExit as exc:                  # argparse usage errors
        return EXIT_INPUT if exc.code else EXIT_OK
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    return run(config)


if __name__ == "__main__":
    sys.exit(main())
