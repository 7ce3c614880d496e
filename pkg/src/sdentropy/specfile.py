"""Process and subshift descriptions read from a YAML document.

Example::

    states: [a, b]
    run: {horizon: 12, log_base: e}
    partitions:
      coarse: [[a, b]]
    processes:
      chain:
        kind: markov
        transition: [[0.9, 0.1], [0.5, 0.5]]
        initial: [5/6, 1/6]
        stationary: true
      slow: {kind: dilation, of: chain, k: 2}
    sfts:
      golden: {allowed: [[1, 1], [1, 0]]}

Numbers written as ``p/q`` (or integers) are kept as exact fractions when a
whole vector or matrix is rational.  Every error names the offending field
and, when it can be located, the line.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable

import yaml

from .core import Distribution, Partition, StateSpace
from .entropy import DEFAULT_BUDGET, iid_closed_form, markov_closed_form
from .measures import (
    CylinderOracle,
    MarkovSpec,
    TransformationSpec,
    block_recode,
    convex_mix,
    dilation_pushforward,
    factor_pushforward,
    from_transformation,
    iid,
    markov,
    point_path,
    product_measure,
    product_sequence,
    restriction_pushforward,
    shift_pushforward,
)
from .properties import GOLDEN_MEAN, CheckConfig
from .topological import Sft

__all__ = ["ParseError", "Process", "Model", "parse_spec", "load_spec", "KINDS"]

KINDS = ("iid", "product_sequence", "markov", "transformation", "mix", "product", "shift",
         "restriction", "dilation", "factor", "block_recode", "point")
ROW_TOL = 1e-9


class ParseError(ValueError):
    def __init__(self, message: str, field: str | None = None, line: int | None = None):
        self.field, self.line, self.message = field, line, message
        where = []
        if line is not None:
            where.append(f"line {line}")
        if field is not None:
            where.append(f"field '{field}'")
        super().__init__(f"{', '.join(where)}: {message}" if where else message)


@dataclass
class Process:
    name: str
    kind: str
    oracle: CylinderOracle
    partition: str | None = None
    closed_form: Callable[[Partition], float | None] = field(default=lambda p: None, repr=False)


@dataclass
class Model:
    states: StateSpace | None
    processes: dict[str, Process]
    partitions: dict[str, list]
    sfts: dict[str, Sft]
    horizon: int = 12
    budget: int = DEFAULT_BUDGET
    log_base: str = "e"
    seed: int = 0
    verify: CheckConfig = field(default_factory=CheckConfig)

    def partition_for(self, proc: Process, name: str | None) -> Partition:
        name = name or proc.partition or "singletons"
        if name == "singletons":
            return Partition.singletons(proc.oracle.space)
        if name == "trivial":
            return Partition.trivial(proc.oracle.space)
        if name not in self.partitions:
            raise ParseError(f"unknown partition {name!r}; defined: {sorted(self.partitions)}", "partition")
        try:
            return Partition.from_labels(proc.oracle.space, self.partitions[name])
        except (ValueError, KeyError, IndexError) as exc:
            raise ParseError(f"partition {name!r} does not fit process {proc.name!r}: {exc}", f"partitions.{name}")


def _line_map(text: str) -> dict[tuple, int]:
    out: dict[tuple, int] = {}

    def walk(node, path):
        out[path] = node.start_mark.line + 1
        if isinstance(node, yaml.MappingNode):
            for k, v in node.value:
                out[path + (k.value,)] = k.start_mark.line + 1
                walk(v, path + (k.value,))
        elif isinstance(node, yaml.SequenceNode):
            for i, v in enumerate(node.value):
                walk(v, path + (i,))

    root = yaml.compose(text, Loader=yaml.SafeLoader)
    if root is not None:
        walk(root, ())
    return out


class _Ctx:
    def __init__(self, lines):
        self.lines = lines

    def err(self, msg, *path):
        p = tuple(path)
        line = None
        while p and line is None:
            line = self.lines.get(p)
            p = p[:-1]
        return ParseError(msg, ".".join(str(x) for x in path), line)


def _number(x, ctx, *path):
    if isinstance(x, bool):
        raise ctx.err(f"expected a number, got {x!r}", *path)
    if isinstance(x, int):
        return x
    if isinstance(x, float):
        return x
    if isinstance(x, str):
        try:
            return Fraction(x.strip())
        except ValueError:
            pass
    raise ctx.err(f"expected a number, got {x!r}", *path)


def _vector(v, ctx, *path):
    if not isinstance(v, list) or not v:
        raise ctx.err("expected a nonempty list of numbers", *path)
    vals = [_number(x, ctx, *path, i) for i, x in enumerate(v)]
    if all(isinstance(x, (int, Fraction)) for x in vals):
        return [Fraction(x) for x in vals]
    return [float(x) for x in vals]


def _matrix(m, ctx, *path):
    if not isinstance(m, list) or not m:
        raise ctx.err("expected a nonempty list of rows", *path)
    rows = [_vector(r, ctx, *path, i) for i, r in enumerate(m)]
    if any(isinstance(x, float) for r in rows for x in r):
        rows = [[float(x) for x in r] for r in rows]
    return rows


def _dist(v, ctx, *path):
    vals = _vector(v, ctx, *path)
    try:
        return Distribution(tuple(vals))
    except ValueError as exc:
        raise ctx.err(str(exc), *path) from None


def _stochastic(m, ctx, *path):
    rows = _matrix(m, ctx, *path)
    k = len(rows)
    for i, r in enumerate(rows):
        if len(r) != k:
            raise ctx.err(f"row {i} has {len(r)} entries, expected {k}", *path, i)
        if any(x < 0 for x in r):
            raise ctx.err(f"row {i} has negative entries", *path, i)
        s = sum(r) if isinstance(r[0], Fraction) else math.fsum(r)
        if abs(s - 1) > ROW_TOL:
            raise ctx.err(f"row {i} sums to {float(s)!r}, not 1", *path, i)
        if not isinstance(r[0], Fraction):
            rows[i] = [x / s for x in r]
    return rows


def _space(labels, ctx, *path):
    if not isinstance(labels, list) or not labels:
        raise ctx.err("expected a nonempty list of state labels", *path)
    try:
        return StateSpace(tuple(str(x) for x in labels))
    except ValueError as exc:
        raise ctx.err(str(exc), *path) from None


def _int(v, ctx, *path, lo=1):
    if isinstance(v, bool) or not isinstance(v, int) or v < lo:
        raise ctx.err(f"expected an integer >= {lo}, got {v!r}", *path)
    return v


def _require(block, key, ctx, *path):
    if key not in block:
        raise ctx.err(f"missing required field '{key}'", *path, key)
    return block[key]


def _labels_to_indices(seq, space, ctx, *path):
    if not isinstance(seq, list):
        raise ctx.err("expected a list of state labels", *path)
    try:
        return [space.index(x if isinstance(x, int) and not isinstance(x, bool) else str(x)) for x in seq]
    except (KeyError, IndexError) as exc:
        raise ctx.err(str(exc).strip('"'), *path) from None


def _build(name, blk, resolved, default_space, ctx) -> Process:
    path = ("processes", name)
    kind = _require(blk, "kind", ctx, *path)
    if kind not in KINDS:
        raise ctx.err(f"unknown kind {kind!r}; expected one of {', '.join(KINDS)}", *path, "kind")
    part = blk.get("partition")

    def space_for(k):
        if "states" in blk:
            sp = _space(blk["states"], ctx, *path, "states")
        elif default_space is not None and default_space.size == k:
            sp = default_space
        else:
            sp = StateSpace.range(k)
        if sp.size != k:
            raise ctx.err(f"{sp.size} state labels but {k} states implied", *path, "states")
        return sp

    def ref(key):
        return resolved[blk[key]]

    try:
        if kind == "iid":
            nu = _dist(_require(blk, "weights", ctx, *path), ctx, *path, "weights")
            sp = space_for(len(nu))
            return Process(name, kind, iid(nu, sp), part, lambda p, nu=nu: iid_closed_form(nu, p))
        if kind == "product_sequence":
            prefix = [_dist(v, ctx, *path, "prefix", i) for i, v in enumerate(blk.get("prefix", []) or [])]
            tail = [_dist(v, ctx, *path, "tail", i) for i, v in enumerate(blk.get("tail", []) or [])]
            if not prefix and not tail:
                raise ctx.err("needs 'prefix' and/or 'tail'", *path)
            k = len((prefix or tail)[0])
            if any(len(d) != k for d in prefix + tail):
                raise ctx.err("all coordinate laws must have the same length", *path)
            mu = product_sequence(prefix, tail=tail, space=space_for(k))
            cf = (lambda p, nu=tail[0]: iid_closed_form(nu, p)) if mu.stationary else (lambda p: None)
            return Process(name, kind, mu, part, cf)
        if kind == "markov":
            P = _stochastic(_require(blk, "transition", ctx, *path), ctx, *path, "transition")
            init = blk.get("initial", "stationary")
            if init != "stationary":
                init = _dist(init, ctx, *path, "initial")
            try:
                spec = MarkovSpec(P, init, stationary=bool(blk.get("stationary", False)), space=space_for(len(P)))
            except ValueError as exc:
                raise ctx.err(str(exc), *path) from None

            def cf(p, spec=spec):
                if spec.stationary and p.same_cells(Partition.singletons(p.space)):
                    return markov_closed_form(spec)
                return None

            return Process(name, kind, markov(spec), part, cf)
        if kind == "point":
            path_ = _require(blk, "path", ctx, *path)
            sp = default_space if "states" not in blk else _space(blk["states"], ctx, *path, "states")
            if sp is None:
                raise ctx.err("point process needs 'states'", *path)
            idx = _labels_to_indices(path_ if isinstance(path_, list) else [path_], sp, ctx, *path, "path")
            return Process(name, kind, point_path(sp, idx), part, lambda p: 0.0)
        if kind == "transformation":
            nu = _dist(_require(blk, "weights", ctx, *path), ctx, *path, "weights")
            sp = space_for(len(nu))
            T = _labels_to_indices(_require(blk, "map", ctx, *path), sp, ctx, *path, "map")
            if len(T) != sp.size:
                raise ctx.err(f"map has {len(T)} entries, expected {sp.size}", *path, "map")
            spec = TransformationSpec(T, nu, preserving=blk.get("preserving"), space=sp)
            return Process(name, kind, from_transformation(spec), part)
        # combinators
        if kind in ("mix", "product"):
            of = _require(blk, "of", ctx, *path)
            a, b = resolved[of[0]].oracle, resolved[of[1]].oracle
            if kind == "mix":
                t = _number(_require(blk, "t", ctx, *path), ctx, *path, "t")
                return Process(name, kind, convex_mix(t, a, b), part)
            return Process(name, kind, product_measure(a, b), part)
        base = ref("of").oracle
        if kind == "shift":
            return Process(name, kind, shift_pushforward(base), part, resolved[blk["of"]].closed_form
                           if base.stationary else (lambda p: None))
        if kind == "restriction":
            if "indices" in blk:
                r = [_int(x, ctx, *path, "indices", i, lo=0) for i, x in enumerate(blk["indices"])]
            else:
                step = _int(blk.get("step", 1), ctx, *path, "step")
                offset = _int(blk.get("offset", 0), ctx, *path, "offset", lo=0)
                r = range(offset, 2**62, step)
            return Process(name, kind, restriction_pushforward(base, r), part)
        if kind == "dilation":
            k = _int(_require(blk, "k", ctx, *path), ctx, *path, "k")
            return Process(name, kind, dilation_pushforward(base, k), part)
        if kind == "block_recode":
            k = _int(_require(blk, "k", ctx, *path), ctx, *path, "k")
            return Process(name, kind, block_recode(base, k), part)
        if kind == "factor":
            tgt = _space(_require(blk, "target_states", ctx, *path), ctx, *path, "target_states")
            f = _labels_to_indices(_require(blk, "map", ctx, *path), tgt, ctx, *path, "map")
            if len(f) != base.space.size:
                raise ctx.err(f"map has {len(f)} entries, expected {base.space.size}", *path, "map")
            return Process(name, kind, factor_pushforward(f, base, tgt), part)
    except ParseError:
        raise
    except (ValueError, IndexError, KeyError) as exc:
        raise ctx.err(str(exc), *path) from None
    raise AssertionError(kind)


def _deps(blk) -> list[tuple[str, Any]]:
    if not isinstance(blk, dict):
        return []
    of = blk.get("of")
    if blk.get("kind") in ("mix", "product"):
        return [("of", x) for x in of] if isinstance(of, list) else [("of", of)]
    return [("of", of)] if "of" in blk else []


def parse_spec(text: str) -> Model:
    """Parse and fully resolve a spec document.

    Raises
    ------
    ParseError
        On malformed YAML, unknown or cyclic references, non-stochastic rows
        and partitions that do not fit their state space.
    """
    try:
        raw = yaml.safe_load(text)
        lines = _line_map(text)
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        raise ParseError(f"malformed YAML: {getattr(exc, 'problem', exc)}", None,
                         mark.line + 1 if mark else None) from None
    if raw is None:
        raw = {}
    ctx = _Ctx(lines)
    if not isinstance(raw, dict):
        raise ctx.err("top level must be a mapping")
    known = {"states", "run", "partitions", "processes", "sfts", "verify"}
    for key in raw:
        if key not in known:
            raise ctx.err(f"unknown top-level section {key!r}", key)
    states = _space(raw["states"], ctx, "states") if "states" in raw else None

    partitions = raw.get("partitions") or {}
    if not isinstance(partitions, dict):
        raise ctx.err("expected a mapping of named partitions", "partitions")
    for pname, cells in partitions.items():
        if not isinstance(cells, list) or not all(isinstance(c, list) for c in cells):
            raise ctx.err("a partition is a list of cells, each a list of state labels", "partitions", pname)

    blocks = raw.get("processes") or {}
    if not isinstance(blocks, dict):
        raise ctx.err("expected a mapping of named processes", "processes")
    resolved: dict[str, Process] = {}
    visiting: list[str] = []

    def resolve(name):
        if name in resolved:
            return
        if name in visiting:
            cyc = visiting[visiting.index(name):] + [name]
            raise ctx.err(f"cycle among processes: {' -> '.join(cyc)}", "processes", name)
        blk = blocks[name]
        if not isinstance(blk, dict):
            raise ctx.err("a process is a mapping with a 'kind'", "processes", name)
        visiting.append(name)
        for key, dep in _deps(blk):
            if not isinstance(dep, str) or dep not in blocks:
                raise ctx.err(f"reference to undefined process {dep!r}", "processes", name, key)
            resolve(dep)
        visiting.pop()
        resolved[name] = _build(name, blk, resolved, states, ctx)

    for name in blocks:
        resolve(name)
    procs = {name: resolved[name] for name in blocks}

    sfts = {}
    for sname, blk in (raw.get("sfts") or {}).items():
        if not isinstance(blk, dict) or "allowed" not in blk:
            raise ctx.err("an sft block needs 'allowed'", "sfts", sname)
        A = blk["allowed"]
        if not isinstance(A, list) or not all(isinstance(r, list) for r in A):
            raise ctx.err("allowed must be a list of 0/1 rows", "sfts", sname, "allowed")
        labels = blk.get("states")
        if labels is None and states is not None and states.size == len(A):
            labels = list(states.labels)
        try:
            import warnings

            with warnings.catch_warnings():
                warnings.simplefilter("ignore")
                sfts[sname] = Sft(A, labels)
        except ValueError as exc:
            raise ctx.err(str(exc), "sfts", sname, "allowed") from None

    model = Model(states, procs, partitions, sfts)
    for name, proc in procs.items():
        if proc.partition is not None:
            try:
                model.partition_for(proc, proc.partition)
            except ParseError as exc:
                raise ctx.err(exc.message, "processes", name, "partition") from None
    for pname in partitions:
        if states is not None and not any(p.partition == pname for p in procs.values()):
            try:
                Partition.from_labels(states, partitions[pname])
            except (ValueError, KeyError, IndexError) as exc:
                raise ctx.err(str(exc).strip('"'), "partitions", pname) from None

    run = raw.get("run") or {}
    if not isinstance(run, dict):
        raise ctx.err("expected a mapping", "run")
    model.horizon = _int(run.get("horizon", 12), ctx, "run", "horizon")
    model.budget = _int(run.get("budget", DEFAULT_BUDGET), ctx, "run", "budget")
    model.seed = _int(run.get("seed", 0), ctx, "run", "seed", lo=0)
    model.log_base = str(run.get("log_base", "e"))
    if model.log_base not in ("e", "2"):
        raise ctx.err("log_base must be 'e' or '2'", "run", "log_base")

    ver = raw.get("verify") or {}
    if not isinstance(ver, dict):
        raise ctx.err("expected a mapping", "verify")
    kw = {}
    for key in ("instances", "max_states", "max_n", "horizon", "budget", "random_sfts"):
        if key in ver:
            kw[key] = _int(ver[key], ctx, "verify", key, lo=0 if key == "random_sfts" else 1)
    if "sfts" in ver:
        mats = []
        for i, sname in enumerate(ver["sfts"]):
            if sname not in sfts:
                raise ctx.err(f"reference to undefined sft {sname!r}", "verify", "sfts", i)
            mats.append(tuple(tuple(int(x) for x in row) for row in sfts[sname].allowed))
        kw["sfts"] = tuple(mats)
    else:
        kw["sfts"] = (GOLDEN_MEAN,)
    model.verify = CheckConfig(**kw)
    return model


def load_spec(path) -> Model:
    with open(path, encoding="utf-8") as fh:
        return parse_spec(fh.read())
