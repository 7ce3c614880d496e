"""Command-line front end.

    sdentropy entropy     --spec FILE --process NAME [--partition NAME] [--horizon N]
    sdentropy topological --spec FILE --sft NAME [--horizon N]
    sdentropy verify      [--spec FILE] [--seed S] [--filter a,b]
    sdentropy sweep       --spec FILE [--horizon N]

CSV goes to stdout, diagnostics to stderr.  Exit codes: 0 ok, 1 a
verification check failed, 2 usage or parse error, 3 enumeration budget
exceeded (rows completed before the overrun are still printed).
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import io
import math
import sys

from .core import Partition
from .entropy import BudgetExceeded, EntropySeries, entropy_series, hsd_estimate, markov_closed_form
from .properties import REGISTRY, CheckConfig, reports_to_csv, reports_to_text, run_all
from .specfile import Model, ParseError, load_spec
from .topological import ht_estimate, parry_measure, perron, strong_components

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3


def fmt(x) -> str:
    if isinstance(x, float):
        if math.isinf(x):
            return "-inf" if x < 0 else "inf"
        return format(x, ".15g")
    return str(x)


class _Out:
    """Single CSV writer; values are scaled to the display base here and nowhere else."""

    def __init__(self, stream, log_base: str):
        self.stream = stream
        self.scale = 1.0 if log_base == "e" else 1.0 / math.log(2.0)
        self.w = csv.writer(stream, lineterminator="\n")

    def nats(self, x: float) -> float:
        return x * self.scale if not math.isinf(x) else x

    def row(self, *cells):
        self.w.writerow([fmt(c) for c in cells])
        self.stream.flush()


def _series_rows(out: _Out, series: EntropySeries, prefix=()):
    for n, (e, a, de) in enumerate(zip(series.block_values, series.values, series.increments), start=1):
        out.row(*prefix, n, out.nats(e), out.nats(a), out.nats(de))


def _model(args) -> Model | None:
    if args.spec is None:
        return None
    return load_spec(args.spec)


def _setting(args, model, name, default):
    v = getattr(args, name, None)
    if v is not None:
        return v
    if model is not None:
        return getattr(model, name)
    return default


def _pick(kind, mapping, name):
    if name is None:
        if len(mapping) == 1:
            return next(iter(mapping.values()))
        raise ParseError(f"choose a {kind} with --{kind}; defined: {', '.join(mapping) or 'none'}")
    if name not in mapping:
        raise ParseError(f"unknown {kind} {name!r}; defined: {', '.join(mapping) or 'none'}")
    return mapping[name]


def cmd_entropy(args, out: _Out) -> int:
    model = _model(args)
    if model is None:
        raise ParseError("entropy needs --spec")
    proc = _pick("process", model.processes, args.process)
    part = model.partition_for(proc, args.partition)
    N = _setting(args, model, "horizon", 12)
    budget = _setting(args, model, "budget", None)
    out.row("n", "E_n", "a_n", "dE_n")
    try:
        series = entropy_series(proc.oracle, part, N, budget, workers=args.workers)
    except BudgetExceeded as exc:
        if exc.partial is not None:
            _series_rows(out, exc.partial)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    _series_rows(out, series)
    est = hsd_estimate(series, args.policy)
    out.row("estimate", out.nats(est.value))
    out.row("policy", est.policy)
    cf = proc.closed_form(part)
    if cf is not None:
        out.row("closed_form", out.nats(cf))
        out.row("gap", out.nats(est.value - cf))
    if part.same_cells(Partition.singletons(part.space)):
        print("note: singleton partition refines every partition of a finite alphabet", file=sys.stderr)
    return EXIT_OK


def cmd_topological(args, out: _Out) -> int:
    model = _model(args)
    if model is None:
        raise ParseError("topological needs --spec")
    s = _pick("sft", model.sfts, args.sft)
    N = max(2, _setting(args, model, "horizon", 12))
    est = ht_estimate(s, N)
    out.row("n", "N_S", "h_n")
    for n, (c, v) in enumerate(zip(est.counts, est.values), start=1):
        out.row(n, c, out.nats(v))
    out.row("log_spectral_radius", out.nats(est.exact))
    comps = strong_components(s.allowed)
    if len(comps) == 1:
        chain = parry_measure(s)
        lab = s.space.labels
        for i in range(s.size):
            out.row("parry_initial", lab[i], float(chain.initial.weights[i]))
        for i in range(s.size):
            for j in range(s.size):
                out.row("parry_transition", lab[i], lab[j], float(chain.transition[i, j]))
        out.row("parry_entropy", out.nats(markov_closed_form(chain)))
    else:
        print(f"note: allowed matrix is reducible ({len(comps)} components)", file=sys.stderr)
        for c in comps:
            block = s.allowed[[[i] for i in c], list(c)]
            rho = perron(block).value
            out.row("component", " ".join(s.space.labels[i] for i in c),
                    out.nats(math.log(rho)) if rho > 0 else -math.inf)
    return EXIT_OK


def _verify_config(args, model) -> CheckConfig:
    cfg = model.verify if model is not None else CheckConfig()
    if args.instances is not None:
        cfg = dataclasses.replace(cfg, instances=args.instances)
    if args.budget is not None:
        cfg = dataclasses.replace(cfg, budget=args.budget)
    return cfg


def cmd_verify(args, out: _Out) -> int:
    model = _model(args)
    seed = _setting(args, model, "seed", 0)
    names = None
    if args.filter:
        names = [x.strip() for x in args.filter.split(",") if x.strip()]
        unknown = [x for x in names if x not in REGISTRY]
        if unknown or not names:
            raise ParseError(f"unknown check(s) {unknown}; available: {', '.join(sorted(REGISTRY))}")
    reports = run_all(_verify_config(args, model), seed=seed, names=names)
    out.stream.write(reports_to_csv(reports))
    out.stream.flush()
    print(reports_to_text(reports), file=sys.stderr)
    return EXIT_OK if all(r.passed for r in reports) else EXIT_FAIL


def cmd_sweep(args, out: _Out) -> int:
    model = _model(args)
    if model is None:
        raise ParseError("sweep needs --spec")
    N = _setting(args, model, "horizon", 12)
    budget = _setting(args, model, "budget", None)
    out.row("process", "partition", "n", "E_n", "a_n", "dE_n")
    status = EXIT_OK
    for name, proc in model.processes.items():
        pname = proc.partition or "singletons"
        part = model.partition_for(proc, pname)
        try:
            series = entropy_series(proc.oracle, part, N, budget, workers=args.workers)
        except BudgetExceeded as exc:
            if exc.partial is not None:
                _series_rows(out, exc.partial, (name, pname))
            print(f"error: process {name}: {exc}", file=sys.stderr)
            status = EXIT_BUDGET
            continue
        _series_rows(out, series, (name, pname))
    return status


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--spec", help="YAML file with states, processes, partitions and sfts")
    common.add_argument("--horizon", type=int, help="largest block length N")
    common.add_argument("--budget", type=int, help="maximum number of enumerated leaf words")
    common.add_argument("--log-base", choices=("e", "2"), help="display base (computation is in nats)")
    common.add_argument("--seed", type=int)
    common.add_argument("--filter", help="comma-separated check names (verify only)")
    common.add_argument("--workers", type=int, default=1, help="enumeration threads")

    ap = argparse.ArgumentParser(prog="sdentropy", description="Entropy of stochastic processes and subshifts.")
    sub = ap.add_subparsers(dest="command", required=True)
    e = sub.add_parser("entropy", parents=[common], help="block-entropy series of one process")
    e.add_argument("--process")
    e.add_argument("--partition", help="partition name, 'singletons' or 'trivial'")
    e.add_argument("--policy", default="auto", choices=("auto", "tail-max", "last", "increment"))
    t = sub.add_parser("topological", parents=[common], help="word counts and Parry measure of an SFT")
    t.add_argument("--sft")
    v = sub.add_parser("verify", parents=[common], help="run the property checks")
    v.add_argument("--instances", type=int, help="override the per-check instance count")
    sub.add_parser("sweep", parents=[common], help="series for every process in the spec file")
    return ap


COMMANDS = {"entropy": cmd_entropy, "topological": cmd_topological, "verify": cmd_verify, "sweep": cmd_sweep}


def main(argv=None, stdout=None) -> int:
    stdout = stdout if stdout is not None else sys.stdout
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    for flag in ("horizon", "budget", "workers"):
        v = getattr(args, flag, None)
        if v is not None and v < 1:
            print(f"error: --{flag} must be >= 1", file=sys.stderr)
            return EXIT_USAGE
    try:
        model_base = None
        if args.log_base is None and args.spec is not None:
            model_base = load_spec(args.spec).log_base
        out = _Out(stdout, args.log_base or model_base or "e")
        return COMMANDS[args.command](args, out)
    except ParseError as exc:
        where = f"{args.spec}: " if args.spec else ""
        print(f"error: {where}{exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def run(argv=None) -> tuple[int, str]:
    """Run ``main`` and capture stdout; handy for tests and notebooks."""
    buf = io.StringIO()
    code = main(argv, buf)
    return code, buf.getvalue()


if __name__ == "__main__":
    raise SystemExit(main())
