"""Command-line entry point.

    incompress codec {encode,decode,pair,unpair,census} ...
    incompress lcs {dp,zm,trace,untrace,reencode,sim} ...
    incompress mesh {map,scan,corner} ...
    incompress walk sim ...
    incompress monopoly sim ...
    incompress sort bench ...

Exit status: 0 on success, 1 on usage errors, 2 on runtime errors.
"""

from __future__ import annotations

import argparse
import io
import json
import os
import sys
import time
from typing import Any

from . import __version__, codes, lcs, mesh, monopoly, sortbench, walk
from .core import MASK64, Rng

SEED_ENV = "INCOMPRESS_SEED"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.format_usage()}{self.prog}: error: {message}")


def _default_seed() -> int:
    raw = os.environ.get(SEED_ENV)
    if raw is None or raw == "":
        return 0
    try:
        return int(raw, 0) & MASK64
    except ValueError:
        raise UsageError(f"{SEED_ENV} must be an integer, got {raw!r}") from None


def _seed(text: str) -> int:
    value = int(text, 0)
    if not 0 <= value <= MASK64:
        raise argparse.ArgumentTypeError("seed must be a 64-bit unsigned integer")
    return value


def _bits(text: str) -> str:
    try:
        return codes.parse_bits(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return value


# --------------------------------------------------------------------------
# handlers: each returns (result dict, csv rows or None)

Rows = list[list[Any]]

_ENCODERS = {
    "e0": lambda x: codes.encode(0, x),
    "e1": lambda x: codes.encode(1, x),
    "e2": lambda x: codes.encode(2, x),
    "e3": lambda x: codes.encode(3, x),
    "identity": lambda x: x,
}


def _flat(result: dict) -> Rows:
    return [list(result), ["eps" if v == "" else v for v in result.values()]]


def codec_encode(a):
    out = codes.encode(a.level, a.input)
    return {"level": a.level, "input": a.input, "codeword": out, "length": len(out)}, None


def codec_decode(a):
    x, rest = codes.decode(a.level, a.input)
    return {"level": a.level, "value": x, "remainder": rest}, None


def codec_pair(a):
    return {"x": a.x, "y": a.y, "pair": codes.pair(a.x, a.y)}, None


def codec_unpair(a):
    x, y = codes.unpair(a.input)
    return {"x": x, "y": y}, None


def codec_census(a):
    if a.encoder == "random":
        encoder = codes.random_injection(a.n, Rng(a.seed))
    else:
        encoder = _ENCODERS[a.encoder]
    frac = codes.census(encoder, a.n, a.c)
    result = {"encoder": a.encoder, "n": a.n, "c": a.c, "fraction": frac, "bound": 2.0 ** -a.c}
    return result, _flat(result)


def lcs_dp(a):
    u = lcs.lcs_dp(a.s, a.t)
    return {"s": a.s, "t": a.t, "u": u, "length": len(u)}, None


def lcs_zm(a):
    u = lcs.zero_major(a.s, a.t)
    return {"s": a.s, "t": a.t, "u": u, "length": len(u)}, None


def lcs_trace(a):
    enc = lcs.trace_encode(a.s, a.t)
    u = lcs.zero_major(a.s, a.t)
    result = {
        "s": a.s,
        "t": a.t,
        "u": u,
        "y": enc.y,
        "z": enc.z,
        "w": enc.w,
        "n": enc.n,
        "exhausted": enc.exhausted,
    }
    return result, None


def lcs_untrace(a):
    enc = lcs.TraceEncoding(a.y, a.z, a.n, a.exhausted)
    s, t = lcs.trace_decode(enc)
    return {"y": a.y, "z": a.z, "n": a.n, "s": s, "t": t}, None


def lcs_reencode(a):
    if a.decode:
        s = lcs.subseq_decode(a.s, a.u)
        return {"encoded": a.s, "u": a.u, "s": s}, None
    enc = lcs.subseq_encode(a.s, a.u)
    return {"s": a.s, "u": a.u, "encoded": enc.encoded, "m": enc.m}, None


def lcs_sim(a):
    summary = lcs.lcs_mc(a.n, a.trials, a.seed, a.algorithm, exhaustive=a.exhaustive)
    rows: Rows = [["n", "algorithm", "trial", "ratio"]]
    rows += [[a.n, a.algorithm, i, r] for i, r in enumerate(summary.ratios)]
    return summary.to_dict(), rows


def mesh_map(a):
    scheme = mesh.IndexingScheme(a.scheme, a.n)
    if a.index is not None:
        row, col = scheme.index_to_cell(a.index)
        result = {"scheme": a.scheme, "n": a.n, "index": a.index, "row": row, "col": col}
        return result, _flat(result)
    if a.row is None or a.col is None:
        rows: Rows = [["index", "row", "col"]]
        rows += [[i + 1, r, c] for i, (r, c) in enumerate(scheme.cells.tolist())]
        return {"scheme": a.scheme, "n": a.n, "cells": [r[1:] for r in rows[1:]]}, rows
    index = scheme.cell_to_index(a.row, a.col)
    result = {"scheme": a.scheme, "n": a.n, "index": index, "row": a.row, "col": a.col}
    return result, _flat(result)


def mesh_scan(a):
    scheme = mesh.IndexingScheme(a.scheme, a.n)
    res = mesh.worst_dilation(scheme, a.metric, samples=a.samples, seed=a.seed)
    result = {
        "scheme": res.scheme,
        "n": res.n,
        "metric": res.metric,
        "c_max": res.c_max,
        "witness_i": res.witness[0],
        "witness_j": res.witness[1],
        "sampled": res.sampled,
    }
    header = ["scheme", "n", "metric", "c_max", "witness_i", "witness_j"]
    return result, [header, [result[h] for h in header]]


def mesh_corner(a):
    scheme = mesh.IndexingScheme(a.scheme, a.n)
    fractions = mesh.corner_locality(scheme, a.metric, a.c0)
    rows: Rows = [["scheme", "n", "metric", "c0", "corner", "fraction"]]
    items = []
    for (r, c), frac in fractions.items():
        rows.append([a.scheme, a.n, a.metric, a.c0, f"{r}:{c}", frac])
        items.append({"corner": [r, c], "index": scheme.cell_to_index(r, c), "fraction": frac})
    return {"scheme": a.scheme, "n": a.n, "metric": a.metric, "c0": a.c0, "corners": items}, rows


def walk_sim(a):
    stats = walk.walk_batch(a.k, a.n, a.trials, a.seed)
    rows: Rows = [["k", "n", "trial", "dim", "m_i", "D_i", "M_i"]]
    for t, rec in enumerate(stats.records):
        for d in range(a.k):
            rows.append([a.k, a.n, t, d, rec.steps[d], rec.displacement[d], rec.max_excursion[d]])
    return stats.to_dict(), rows


def monopoly_sim(a):
    stats = monopoly.monopoly_batch(a.k, a.I, a.trials, a.seed, a.max_rounds)
    a.max_rounds = stats.max_rounds
    rows: Rows = [["k", "I", "trial", "rounds", "terminated", "winner"]]
    for t, o in enumerate(stats.outcomes):
        rows.append([a.k, a.I, t, o.rounds, str(o.terminated).lower(), "" if o.winner is None else o.winner])
    return stats.to_dict(), rows


def sort_bench(a):
    bench = sortbench.sort_bench(a.n, a.trials, a.algorithms, a.seed)
    rows: Rows = [["algorithm", "n", "trial", "comparisons", "log2_factorial"]]
    for name in a.algorithms:
        for t, c in enumerate(bench.counts[name]):
            rows.append([name, a.n, t, c, bench.log2_factorial])
    for name in a.algorithms:
        rows.append([name, a.n, "mean", bench.summaries[name].mean, bench.log2_factorial])
    return bench.to_dict(), rows


# --------------------------------------------------------------------------


def _add_common(p: argparse.ArgumentParser, default_format: str) -> None:
    p.add_argument("--seed", type=_seed, default=None, help=f"64-bit seed (default ${SEED_ENV} or 0)")
    p.add_argument("--format", choices=("json", "csv", "text"), default=default_format)
    p.add_argument("--output", "-o", default=None, help="write here instead of standard output")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="incompress", description="Incompressibility-method experiment workbench.")
    parser.add_argument("--version", action="version", version=f"incompress {__version__}")
    groups = parser.add_subparsers(dest="group", metavar="{codec,lcs,mesh,walk,monopoly,sort}", parser_class=_Parser)
    groups.required = True

    def command(group, name, handler, default_format="json", help=None):
        p = group.add_parser(name, help=help)
        _add_common(p, default_format)
        p.set_defaults(handler=handler)
        return p

    def subgroup(name, help):
        g = groups.add_parser(name, help=help).add_subparsers(dest="command", parser_class=_Parser)
        g.required = True
        return g

    g = subgroup("codec", "self-delimiting codes and pairing")
    p = command(g, "encode", codec_encode, "text", "codeword of --input at --level")
    p.add_argument("--level", type=int, choices=range(4), required=True)
    p.add_argument("--input", type=_bits, required=True)
    p = command(g, "decode", codec_decode, "text", "split one codeword off --input")
    p.add_argument("--level", type=int, choices=range(4), required=True)
    p.add_argument("--input", type=_bits, required=True)
    p = command(g, "pair", codec_pair, "text", "<x,y> = E2(x) y")
    p.add_argument("--x", type=_bits, required=True)
    p.add_argument("--y", type=_bits, required=True)
    p = command(g, "unpair", codec_unpair, "text", "inverse of pair")
    p.add_argument("--input", type=_bits, required=True)
    p = command(g, "census", codec_census, "json", "fraction of length-n strings shortened below n-c")
    p.add_argument("--encoder", choices=(*_ENCODERS, "random"), default="random")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--c", type=_positive, required=True)

    g = subgroup("lcs", "common subsequences")
    for name, handler, what in (("dp", lcs_dp, "a longest common subsequence"), ("zm", lcs_zm, "Zero-Major subsequence"), ("trace", lcs_trace, "Zero-Major (y, z) trace")):
        p = command(g, name, handler, help=what)
        p.add_argument("--s", type=_bits, required=True)
        p.add_argument("--t", type=_bits, required=True)
    p = command(g, "untrace", lcs_untrace, help="decode a (y, z) trace")
    p.add_argument("--y", type=_bits, required=True)
    p.add_argument("--z", type=_bits, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--exhausted", choices=("s", "t", "both"), default="both")
    p = command(g, "reencode", lcs_reencode, help="s(u) re-encoding against a subsequence u")
    p.add_argument("--s", type=_bits, required=True, help="the string, or its encoding with --decode")
    p.add_argument("--u", type=_bits, required=True)
    p.add_argument("--decode", action="store_true")
    p = command(g, "sim", lcs_sim, help="Monte Carlo expected LCS ratio")
    p.add_argument("--n", type=_positive, required=True)
    p.add_argument("--trials", type=_positive, default=200)
    p.add_argument("--algorithm", choices=lcs.ALGORITHMS, default="dp")
    p.add_argument("--exhaustive", action="store_true", help="all 4^n pairs (n <= 8)")

    g = subgroup("mesh", "mesh indexing schemes")
    p = command(g, "map", mesh_map, help="index <-> cell")
    p.add_argument("--scheme", choices=mesh.SCHEMES, required=True)
    p.add_argument("--n", type=_positive, required=True)
    p.add_argument("--index", type=int)
    p.add_argument("--row", type=int)
    p.add_argument("--col", type=int)
    p = command(g, "scan", mesh_scan, help="worst-case dilation")
    p.add_argument("--scheme", choices=mesh.SCHEMES, required=True)
    p.add_argument("--n", type=_positive, required=True)
    p.add_argument("--metric", choices=mesh.METRICS, default="euclidean")
    p.add_argument("--samples", type=_positive, help="sample this many pairs instead of scanning all")
    p = command(g, "corner", mesh_corner, help="corner locality fractions")
    p.add_argument("--scheme", choices=mesh.SCHEMES, required=True)
    p.add_argument("--n", type=_positive, required=True)
    p.add_argument("--metric", choices=mesh.METRICS, default="euclidean")
    p.add_argument("--c0", type=float, default=2.5)

    g = subgroup("walk", "random walks")
    p = command(g, "sim", walk_sim, help="batch of k-dimensional walks")
    p.add_argument("--k", type=_positive, default=1)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--trials", type=_positive, default=1000)

    g = subgroup("monopoly", "the monopolist game")
    p = command(g, "sim", monopoly_sim, help="batch of games")
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--I", type=_positive, required=True)
    p.add_argument("--trials", type=_positive, default=1000)
    p.add_argument("--max-rounds", type=_positive, default=None)

    g = subgroup("sort", "comparison sorting")
    p = command(g, "bench", sort_bench, help="comparison counts vs log2 n!")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--trials", type=_positive, default=1000)
    p.add_argument("--algorithms", type=lambda s: s.split(","), default=list(sortbench.SORTS))
    return parser


def _config(args: argparse.Namespace) -> dict:
    skip = {"handler", "output"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip}


def _render_csv(rows: Rows) -> str:
    # empty cells stay empty; bit strings arrive already in their column
    return "".join(",".join(str(v) for v in row) + "\n" for row in rows)


def _render_text(result: dict) -> str:
    primary = ("codeword", "pair")
    for key in primary:
        if key in result:
            return f"{codes.format_bits(result[key])}\n"
    buf = io.StringIO()
    for key, value in result.items():
        if isinstance(value, str):
            value = codes.format_bits(value)
        elif isinstance(value, (dict, list)):
            value = json.dumps(value, sort_keys=True)
        buf.write(f"{key} {value}\n")
    return buf.getvalue()


def _eps(obj: Any) -> Any:
    if isinstance(obj, dict):
        return {k: _eps(v) for k, v in obj.items()}
    if isinstance(obj, list):
        return [_eps(v) for v in obj]
    return "eps" if obj == "" else obj


def run(argv: list[str] | None = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.seed is None:
            args.seed = _default_seed()
    except UsageError as exc:
        print(exc, file=stderr)
        return 1
    except SystemExit as exc:  # --help / --version
        return int(exc.code or 0)

    started = time.perf_counter()
    try:
        result, rows = args.handler(args)
    except (ValueError, OverflowError) as exc:
        print(f"incompress: error: {exc}", file=stderr)
        return 2
    elapsed = time.perf_counter() - started

    if args.format == "csv":
        text = _render_csv(rows if rows is not None else _flat(result))
    elif args.format == "text":
        text = _render_text(result)
    else:
        report = {
            "tool": "incompress",
            "version": __version__,
            "command": f"{args.group} {args.command}",
            "seed": args.seed,
            "config": _config(args),
            "result": _eps(result),
            "wall_time": elapsed,
        }
        text = json.dumps(report, indent=2) + "\n"

    if args.output:
        try:
            with open(args.output, "w", encoding="utf-8") as fh:
                fh.write(text)
        except OSError as exc:
            print(f"incompress: error: {exc}", file=stderr)
            return 2
    else:
        stdout.write(text)
    return 0


def main() -> None:
    sys.exit(run())
