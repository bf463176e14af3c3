"""Command-line interface: distinguish, gen, table, props, iso, so2.

Exit codes: 0 = indistinguishable/isomorphic (or plain success), 10 =
distinguished/non-isomorphic, 2 = usage error, 3 = input error, 4 =
oracle cap exceeded. Distinguished runs get their own success code so
shell scripts can compare engines without parsing output.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Optional

from . import engines, generators, properties, so2
from .graph import (
    GeometricGraph,
    GraphError,
    GroupSpec,
    dump_graph,
    load_graph,
)
from .numeric import DEFAULT_EPS
from .oracle import OracleCapExceeded, geometric_isomorphism_oracle

EXIT_SAME = 0
EXIT_DIFFERENT = 10
EXIT_USAGE = 2
EXIT_INPUT = 3
EXIT_CAP = 4

TOLERANCE_ENV = "GWLKIT_TOLERANCE"


class CliInputError(Exception):
    pass


class CliUsageError(Exception):
    pass


def _tolerance_default() -> float:
    raw = os.environ.get(TOLERANCE_ENV)
    if raw is None:
        return DEFAULT_EPS
    try:
        eps = float(raw)
    except ValueError:
        raise CliInputError(f"{TOLERANCE_ENV} is not a number: {raw!r}")
    if eps <= 0:
        raise CliInputError(f"{TOLERANCE_ENV} must be positive")
    return eps


def _load(path: str, eps: float) -> GeometricGraph:
    try:
        return load_graph(path, eps=eps)
    except FileNotFoundError:
        raise CliInputError(f"no such file: {path}")
    except GraphError as exc:
        raise CliInputError(str(exc))


def _group(variant: str, dim: int) -> GroupSpec:
    return GroupSpec(variant, dim)


def cmd_distinguish(args) -> int:
    eps = args.tolerance
    g1 = _load(args.graph_a, eps)
    g2 = _load(args.graph_b, eps)
    grp = None if args.test == "wl" else _group(args.group, g1.dim)
    try:
        if args.test == "wl":
            verdict, trace = engines.run_wl(g1, g2, args.max_iters)
        elif args.test == "gwl":
            verdict, trace = engines.run_gwl(g1, g2, grp, args.max_iters)
        elif args.test == "igwl":
            verdict, trace = engines.run_igwl(g1, g2, grp, args.max_iters)
        elif args.test == "igwl-k":
            verdict, trace = engines.run_igwl_k(g1, g2, grp, args.k, args.max_iters)
        else:  # so2
            verdict, trace = so2.run_so2_gwl(g1, g2, args.max_iters)
    except (ValueError, GraphError) as exc:
        raise CliInputError(str(exc))
    report = engines.report_dict(args.test, grp, verdict, trace)
    if args.format == "json":
        print(json.dumps(report, indent=1))
    else:
        print(f"test: {args.test}" + (f"  group: {report['group']}" if grp else ""))
        if verdict.distinguished:
            print(f"verdict: distinguished at iteration {verdict.iteration}")
        else:
            print(
                f"verdict: indistinguishable after {verdict.iteration} iteration(s)"
                f" ({'stable' if verdict.stable else 'iteration cap reached'})"
            )
        for row in trace.rows:
            print(
                f"  t={row.iteration}: classes={row.class_count}"
                f" histograms {'equal' if row.histograms_equal else 'DIFFER'}"
            )
    return EXIT_DIFFERENT if verdict.distinguished else EXIT_SAME


def cmd_gen(args) -> int:
    out = args.out
    os.makedirs(out, exist_ok=True)
    if args.family == "kchain":
        if args.k is None or args.k < 2:
            raise CliUsageError("kchain requires --k >= 2")
        g1, g2, spec = generators.gen_kchain(args.k)
        stem = f"kchain_k{args.k}"
    elif args.family == "tri-hex":
        g1, g2, spec = generators.gen_triangles_vs_hexagon()
        stem = "tri_hex"
    elif args.family == "onehop":
        g1, g2, spec = generators.gen_onehop_identical_pair()
        stem = "onehop_identical"
    elif args.family == "lfold":
        if args.L is None or args.L < 2:
            raise CliUsageError("lfold requires --L >= 2")
        g = generators.gen_lfold(args.L, args.alpha)
        path = os.path.join(out, f"lfold_L{args.L}.json")
        dump_graph(g, path)
        print(path)
        return EXIT_SAME
    else:
        raise CliUsageError(f"unknown family {args.family!r}")
    paths = [os.path.join(out, f"{stem}_{side}.json") for side in ("a", "b")]
    dump_graph(g1, paths[0])
    dump_graph(g2, paths[1])
    sidecar = os.path.join(out, f"{stem}_pair.json")
    with open(sidecar, "w") as fh:
        json.dump(spec.to_dict(), fh, indent=1)
        fh.write("\n")
    for p in paths + [sidecar]:
        print(p)
    verified = "oracle-verified" if spec.verified else "not verified (beyond oracle cap)"
    print(f"claimed relation: {spec.claim} ({verified})")
    return EXIT_SAME


def _verdict_word(verdict) -> str:
    return "distinguished" if verdict.distinguished else "indistinguishable"


def cmd_table(args) -> int:
    lo, hi = args.range
    if lo > hi or lo < 2:
        raise CliUsageError("range must satisfy 2 <= lo <= hi")
    lines = []
    if args.which == "kchains":
        budgets_of = lambda k: list(range(k // 2, k // 2 + 5))
        lines.append("| k | engine | budget floor(k/2) .. floor(k/2)+4 |")
        lines.append("|---|--------|------------------------------------|")
        for k in range(lo, hi + 1):
            g1, g2, _ = generators.gen_kchain(k)
            grp = GroupSpec("O", 3)
            for name, runner in (
                ("GWL", lambda b: engines.run_gwl(g1, g2, grp, b)),
                ("IGWL", lambda b: engines.run_igwl(g1, g2, grp, b)),
            ):
                cells = []
                for b in budgets_of(k):
                    verdict, _ = runner(b)
                    cells.append(f"{b}:{_verdict_word(verdict)}")
                lines.append(f"| {k} | {name} | " + ", ".join(cells) + " |")
    elif args.which == "lfold-invariance":
        lines.append("| L | rotated copies under GWL/SO(2) |")
        lines.append("|---|--------------------------------|")
        import math as _math

        for L in range(lo, hi + 1):
            ga = generators.gen_lfold(L, 0.0)
            gb = generators.gen_lfold(L, _math.pi / L)
            if ga.ctx.mode != gb.ctx.mode:
                ga = generators.gen_lfold(L, 1e-12)  # force float on both sides
            verdict, _ = engines.run_gwl(ga, gb, GroupSpec("SO", 2))
            lines.append(f"| {L} | {_verdict_word(verdict)} |")
    else:
        raise CliInputError(f"unknown table {args.which!r}")
    lines.append("")
    lines.append("Accuracy columns for trained models: out of scope: trained models.")
    print("\n".join(lines))
    return EXIT_SAME


def cmd_props(args) -> int:
    g = _load(args.graph, args.tolerance)
    quads = []
    for raw in args.dihedral or ():
        parts = raw.split(",")
        if len(parts) != 4:
            raise CliInputError("--dihedral wants l,j,k,m")
        quads.append(tuple(int(p) for p in parts))
    try:
        report = properties.property_report(g, quads)
    except (ValueError, properties.DegenerateGeometryError) as exc:
        raise CliInputError(str(exc))
    data = report.to_dict()
    if args.format == "json":
        print(json.dumps(data, indent=1))
    else:
        for key in ("dim", "extents", "perimeter", "area", "volume", "centroid"):
            if key in data:
                print(f"{key}: {data[key]}")
        print(f"centroid distances: {data['centroid_distances']}")
        if "dihedrals" in data:
            for q, v in data["dihedrals"].items():
                print(f"dihedral({q}): {v}")
    return EXIT_SAME


def cmd_iso(args) -> int:
    g1 = _load(args.graph_a, args.tolerance)
    g2 = _load(args.graph_b, args.tolerance)
    grp = _group(args.group, g1.dim)
    same, witness = geometric_isomorphism_oracle(g1, g2, grp, cap=args.cap)
    print("isomorphic" if same else "non-isomorphic")
    if witness is not None:
        print(f"witness permutation: {list(witness.permutation)}")
    return EXIT_SAME if same else EXIT_DIFFERENT


def cmd_so2(args) -> int:
    g = _load(args.graph, args.tolerance)
    if g.dim != 2:
        raise CliInputError("so2 commands require a 2-dimensional graph")
    pts = list(g.positions)
    if args.so2_cmd == "stab":
        info = so2.stabilizer_order(pts, args.tolerance)
        if info.continuous:
            print("stabilizer: continuous")
        else:
            print(f"stabilizer order: {info.order} (theta = {info.theta:.6f})")
        return EXIT_SAME
    if args.so2_cmd == "hash":
        reg = so2.so2_registry(args.tolerance)
        h = so2.so2_hash(pts, reg)
        print(json.dumps({"vector": list(h.vector), "norm": h.norm, "angle": h.angle}))
        return EXIT_SAME
    # refine: graph against a second file
    g2 = _load(args.graph_b, args.tolerance)
    verdict, trace = so2.run_so2_gwl(g, g2, args.max_iters)
    print(json.dumps(engines.report_dict("so2", None, verdict, trace), indent=1))
    return EXIT_DIFFERENT if verdict.distinguished else EXIT_SAME


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="geowl",
        description="Discriminate geometric graphs with WL-style refinement tests.",
    )
    sub = parser.add_subparsers(dest="cmd", required=True)

    def add_tolerance(p):
        p.add_argument("--tolerance", type=float, default=None, help="float comparison epsilon")

    d = sub.add_parser("distinguish", help="run a refinement test on a graph pair")
    d.add_argument("graph_a")
    d.add_argument("graph_b")
    d.add_argument("--test", choices=["wl", "gwl", "igwl", "igwl-k", "so2"], default="gwl")
    d.add_argument("--group", choices=["O", "SO"], default="O")
    d.add_argument("--k", type=int, default=None, help="body order (igwl-k only)")
    d.add_argument("--max-iters", type=int, default=None)
    d.add_argument("--format", choices=["json", "text"], default="text")
    add_tolerance(d)

    g = sub.add_parser("gen", help="generate a synthetic family")
    g.add_argument("family", choices=["kchain", "lfold", "tri-hex", "onehop"])
    g.add_argument("--k", type=int, default=None)
    g.add_argument("--L", type=int, default=None)
    g.add_argument("--alpha", type=float, default=0.0)
    g.add_argument("--out", default=".")

    t = sub.add_parser("table", help="engine verdict grids for the synthetic families")
    t.add_argument("which", choices=["kchains", "lfold-invariance"])
    t.add_argument("--range", type=int, nargs=2, default=[2, 8], metavar=("LO", "HI"))

    p = sub.add_parser("props", help="geometric property report for one graph")
    p.add_argument("graph")
    p.add_argument("--dihedral", action="append", metavar="l,j,k,m")
    p.add_argument("--format", choices=["json", "text"], default="text")
    add_tolerance(p)

    i = sub.add_parser("iso", help="brute-force congruence oracle")
    i.add_argument("graph_a")
    i.add_argument("graph_b")
    i.add_argument("--group", choices=["O", "SO"], default="O")
    i.add_argument("--cap", type=int, default=10)
    add_tolerance(i)

    s = sub.add_parser("so2", help="planar orbit-and-orientation encoding tools")
    ssub = s.add_subparsers(dest="so2_cmd", required=True)
    for name in ("hash", "stab"):
        sp = ssub.add_parser(name)
        sp.add_argument("graph")
        add_tolerance(sp)
    sr = ssub.add_parser("refine")
    sr.add_argument("graph")
    sr.add_argument("graph_b")
    sr.add_argument("--max-iters", type=int, default=None)
    add_tolerance(sr)
    return parser


def main(argv: Optional[list] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0,) else 0
    try:
        if getattr(args, "tolerance", None) is None and hasattr(args, "tolerance"):
            args.tolerance = _tolerance_default()
        if args.cmd == "distinguish":
            if args.test == "igwl-k" and args.k is None:
                parser.error("--test igwl-k requires --k")
            if args.test != "igwl-k" and args.k is not None:
                parser.error("--k only applies to --test igwl-k")
            return cmd_distinguish(args)
        if args.cmd == "gen":
            return cmd_gen(args)
        if args.cmd == "table":
            return cmd_table(args)
        if args.cmd == "props":
            return cmd_props(args)
        if args.cmd == "iso":
            return cmd_iso(args)
        if args.cmd == "so2":
            return cmd_so2(args)
        return EXIT_USAGE
    except SystemExit as exc:  # parser.error inside command dispatch
        return EXIT_USAGE if exc.code not in (0,) else 0
    except OracleCapExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP
    except CliUsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except CliInputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
