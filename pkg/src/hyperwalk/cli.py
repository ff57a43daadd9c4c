"""Command-line surface: gen, analyze, simulate, bounds, check.

Exit codes: 0 success, 2 validation error, 3 infeasible query (disconnected
input or unreachable target), 4 bound violated / invariant check failed.

Every subcommand is deterministic given its flags (seed included) and input
bytes; numeric artifacts use 17 significant digits. Report paths with an
output file also render PNG figures next to it unless --no-plots is given.
The HYPERWALK_THREADS environment variable caps simulation workers.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .core import (
    DirectedHypergraph,
    DisconnectedError,
    Hypergraph,
    ValidationError,
    dump_hypergraph,
    load_hypergraph,
)
from .exact import hitting_matrix, radio_hitting_matrix, _argmax_pair
from .families import (
    clique_line,
    default_grid,
    hyperline,
    mesh2d,
    radio_line,
    random_uniform,
    read_points_csv,
    single_edge,
    unit_disk,
)
from .operators import (
    build_directed_operators,
    build_operators,
    coupling_check,
    lift_walk_check,
    spectrum_check,
)
from .bounds import (
    INSTANCE_CHECKS,
    instance_bound_reports,
    line1d_check,
    lower_trend,
    mesh2d_identity_reports,
    mesh2d_trend,
)
from .simulate import (
    estimate_cover,
    estimate_radio_cover,
    estimate_speedups,
    sample_first_times,
)
from . import report as rpt

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_INFEASIBLE = 3
EXIT_VIOLATED = 4


def _write_or_print(doc, out: str | None) -> None:
    text = rpt.to_json(doc) + "\n"
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _parse_int_list(text: str) -> list[int]:
    try:
        return [int(tok) for tok in text.split(",") if tok != ""]
    except ValueError as exc:
        raise ValidationError(f"expected comma-separated integers, got {text!r}") from exc


def family_from_spec(spec: str):
    """Build a family instance from "name:key=val,key=val"."""
    name, _, rest = spec.partition(":")
    params: dict[str, str] = {}
    for kv in rest.split(","):
        if not kv:
            continue
        if "=" not in kv:
            raise ValidationError(f"malformed family parameter {kv!r} in {spec!r}")
        k, v = kv.split("=", 1)
        params[k.strip()] = v.strip()

    def need(*keys):
        missing = [k for k in keys if k not in params]
        if missing:
            raise ValidationError(f"family {name!r} needs parameters {missing}")
        return [int(params[k]) for k in keys]

    name = name.replace("_", "-")
    if name == "hyperline":
        n, k = need("n", "k")
        return hyperline(n, k)
    if name == "radio-line":
        n, k = need("n", "k")
        ring = params.get("ring", "true").lower() not in ("false", "0", "no")
        return radio_line(n, k, ring=ring)
    if name == "mesh2d":
        side, k = need("side", "k")
        return mesh2d(side, k)
    if name == "single-edge":
        (n,) = need("n")
        return single_edge(n)
    if name == "clique-line":
        np_, c = need("nprime", "c")
        return clique_line(np_, c)
    if name == "random-uniform":
        n, m, k, seed = need("n", "m", "k", "seed")
        return random_uniform(n, m, k, seed)
    raise ValidationError(f"unknown family {name!r}")


def _load_instances(args) -> list[tuple[str, Hypergraph | DirectedHypergraph]]:
    if getattr(args, "input", None):
        return [(Path(args.input).name, load_hypergraph(args.input))]
    if getattr(args, "family", None):
        return [(args.family, family_from_spec(args.family))]
    if getattr(args, "grid", False):
        return default_grid()
    raise ValidationError("give --input, --family or --grid")


# --- gen ------------------------------------------------------------------------

def cmd_gen(args) -> int:
    fam = args.family_name
    if fam == "hyperline":
        H = hyperline(args.n, args.k)
    elif fam == "radio-line":
        H = radio_line(args.n, args.k, ring=not args.line)
    elif fam == "mesh2d":
        H = mesh2d(args.side, args.k)
    elif fam == "single-edge":
        H = single_edge(args.n)
    elif fam == "clique-line":
        H = clique_line(args.nprime, args.c)
    elif fam == "random-uniform":
        H = random_uniform(args.n, args.m, args.k, args.seed)
    elif fam == "unit-disk":
        pts = read_points_csv(Path(args.points).read_text(encoding="utf-8"))
        H = unit_disk(pts, args.radius)
    else:  # pragma: no cover - argparse restricts choices
        raise ValidationError(f"unknown family {fam!r}")
    text = dump_hypergraph(H)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return EXIT_OK


# --- analyze ---------------------------------------------------------------------

def _analysis_tables(struct):
    if isinstance(struct, DirectedHypergraph):
        ops = build_directed_operators(struct)
    else:
        ops = build_operators(struct)
    h = hitting_matrix(ops.P)
    hr, hr_raw = radio_hitting_matrix(struct)
    return ops, h, hr, hr_raw


def _record(v, u, h, hr, hr_raw) -> dict:
    fin = np.isfinite(h[v, u]) and np.isfinite(hr[v, u])
    return {"start": int(v), "target": int(u),
            "h": float(h[v, u]) if np.isfinite(h[v, u]) else None,
            "h_radio": float(hr[v, u]) if np.isfinite(hr[v, u]) else None,
            "h_radio_raw": float(hr_raw[v, u]) if np.isfinite(hr_raw[v, u]) else None,
            "reachable": bool(fin)}


def cmd_analyze(args) -> int:
    struct = load_hypergraph(args.input)
    ops, h, hr, hr_raw = _analysis_tables(struct)
    n = struct.n
    h_max, h_pair = _argmax_pair(np.where(np.isfinite(h), h, -np.inf))
    hr_max, hr_pair = _argmax_pair(np.where(np.isfinite(hr), hr, -np.inf))
    doc = {
        "input": {"n": n, "m": struct.m,
                  "directed": isinstance(struct, DirectedHypergraph)},
        "h_max": h_max, "h_max_pair": list(h_pair),
        "h_radio_max": hr_max, "h_radio_max_pair": list(hr_pair),
    }
    records = None
    rc = EXIT_OK
    if args.source is not None or args.target is not None:
        if args.source is None or args.target is None:
            raise ValidationError("--source and --target go together")
        records = [_record(args.source, args.target, h, hr, hr_raw)]
        if not records[0]["reachable"]:
            rc = EXIT_INFEASIBLE
    elif args.full:
        records = [_record(v, u, h, hr, hr_raw) for v in range(n) for u in range(n)]
    if records is not None:
        doc["records"] = records

    if args.dump_operators:
        outdir = Path(args.dump_operators)
        outdir.mkdir(parents=True, exist_ok=True)
        names = (("A", ops.A), ("B", ops.B)) if isinstance(struct, Hypergraph) \
            else (("A", ops.A_fwd), ("B", ops.B_bwd))
        for tag, M in names + (("P", ops.P), ("Q", ops.Q)):
            rpt.dump_matrix_csv(M, outdir / f"{tag}.csv")
        if isinstance(struct, Hypergraph):
            rpt.dump_matrix_csv(ops.pi, outdir / "pi.csv")
            rpt.dump_matrix_csv(ops.zeta, outdir / "zeta.csv")

    if args.format == "csv":
        if args.out:
            rpt.write_csv(records or [], args.out,
                          header=["start", "target", "h", "h_radio", "h_radio_raw", "reachable"])
        else:
            raise ValidationError("--format csv needs -o")
    else:
        _write_or_print(doc, args.out)
    return rc


# --- simulate ---------------------------------------------------------------------

def cmd_simulate(args) -> int:
    struct = load_hypergraph(args.input)
    start = args.start
    if start not in ("all", "stationary"):
        start = int(start)
    kw = dict(trials=args.trials, seed=args.seed, cap=args.cap)
    if args.quantity == "cover":
        out = estimate_cover(struct, start, **kw)
        doc = out.to_dict()
    elif args.quantity == "radio-cover":
        out = estimate_radio_cover(struct, start, **kw)
        doc = out.to_dict()
    else:
        sp = estimate_speedups(struct, trials=args.trials, seed=args.seed, cap=args.cap)
        doc = sp.to_dict()
    doc["config"] = {"input": str(args.input), "quantity": args.quantity,
                     "trials": args.trials, "seed": args.seed,
                     "cap": args.cap, "start": str(args.start),
                     "format": args.format}

    if args.per_trial:
        if args.quantity == "speedups":
            raise ValidationError("--per-trial applies to cover and radio-cover only")
        mode = "visit" if args.quantity == "cover" else "heard"
        st = 0 if start in ("all", "stationary") else start
        times, _ = sample_first_times(struct, st, args.trials, args.seed, mode=mode,
                                      cap=args.cap)
        rows = [{"trial": i, "value": int(times[i].max())} for i in range(args.trials)]
        rpt.write_csv(rows, args.per_trial, header=["trial", "value"])

    if args.format == "csv":
        if not args.out:
            raise ValidationError("--format csv needs -o")
        if args.quantity == "speedups":
            rows = [{"quantity": k, "value": v} for k, v in doc.items()
                    if isinstance(v, (int, float))]
            rpt.write_csv(rows, args.out, header=["quantity", "value"])
        else:
            rows = [{k: doc[k] for k in ("quantity", "trials", "mean", "variance",
                                         "ci95", "seed", "cap", "capped", "valid", "start")}]
            rpt.write_csv(rows, args.out)
    else:
        _write_or_print(doc, args.out)

    if args.out and not args.no_plots and args.quantity != "speedups":
        mode = "visit" if args.quantity == "cover" else "heard"
        st = 0 if start in ("all", "stationary") else start
        times, _ = sample_first_times(struct, st, min(args.trials, 4000), args.seed,
                                      mode=mode, cap=args.cap)
        rpt.render_histogram(times.max(axis=1),
                             f"{args.quantity} per-trial values (start {st})",
                             "steps", rpt.figure_path(args.out, "hist"))
    return EXIT_OK


# --- bounds -----------------------------------------------------------------------

TREND_CHECKS = ("line1d", "mesh2d-trend", "lower-trend", "identities")
ALL_CHECKS = INSTANCE_CHECKS + TREND_CHECKS + ("all",)


def cmd_bounds(args) -> int:
    checks = [c.strip() for c in args.check.split(",") if c.strip()]
    unknown = [c for c in checks if c not in ALL_CHECKS]
    if unknown:
        raise ValidationError(f"unknown bound check(s) {unknown}; "
                              f"choose from {sorted(ALL_CHECKS)}")
    if "all" in checks:
        checks = list(INSTANCE_CHECKS)
    reports = []
    trends = []
    inst_checks = [c for c in checks if c in INSTANCE_CHECKS]
    if inst_checks:
        for label, struct in _load_instances(args):
            reports.extend(r.to_dict() for r in instance_bound_reports(
                struct, inst_checks, trials=args.trials, seed=args.seed, label=label))
    if "line1d" in checks:
        tr = line1d_check(args.n, args.k[0] if args.k else 2,
                          trials=args.trials, seed=args.seed)
        trends.append(tr.to_dict())
        reports.extend(c.to_dict() for c in tr.checks)
    if "mesh2d-trend" in checks:
        tr = mesh2d_trend(args.side, args.k or [1, 2, 3], trials=args.trials,
                          seed=args.seed)
        trends.append(tr.to_dict())
        reports.extend(c.to_dict() for c in tr.checks)
    if "identities" in checks:
        for rep in mesh2d_identity_reports(args.side, (args.k or [1])[0]):
            reports.append(rep.to_dict())
    if "lower-trend" in checks:
        tr = lower_trend(args.nprime or [6, 8, 10], args.c or [2, 3])
        trends.append(tr.to_dict())
        reports.extend(c.to_dict() for c in tr.checks)

    doc = {"checks": reports, "trends": trends,
           "config": {"check": args.check, "trials": args.trials, "seed": args.seed}}
    _write_or_print(doc, args.out)

    for r in reports:
        mark = {"holds": "ok", "flagged": "--"}.get(r["verdict"], "!!")
        sys.stderr.write(f"[{mark}] {r['name']:24s} measured={rpt.fmt_float(r['measured'])} "
                         f"bound={rpt.fmt_float(r['bound'])} verdict={r['verdict']}\n")

    if args.out and not args.no_plots:
        if reports:
            plottable = [r for r in reports
                         if np.isfinite(r["measured"]) and np.isfinite(r["bound"])]
            if plottable:
                rpt.render_bound_bars(plottable, "bound checks",
                                      rpt.figure_path(args.out, "bounds"))
        for tr in trends:
            if tr["name"] == "mesh2d-trend":
                rpt.render_trend(tr["rows"], "k", ["h_radio_max", "radio_cover_mc"],
                                 "torus radio quantities vs k",
                                 rpt.figure_path(args.out, "mesh2d"))
            elif tr["name"] == "lower-trend":
                rpt.render_trend(tr["rows"], "mnc", ["h_radio"],
                                 "gadget radio hitting vs m*n*c",
                                 rpt.figure_path(args.out, "lower"),
                                 logx=True, logy=True)

    violated = any(r["verdict"] == "violated" for r in reports)
    return EXIT_VIOLATED if violated else EXIT_OK


# --- check ------------------------------------------------------------------------

def _invariant_rows(label: str, struct, trials: int, seed: int) -> list[dict]:
    rows = []

    def add(rep):
        rows.append({"instance": label, **rep.to_dict()})

    if isinstance(struct, DirectedHypergraph):
        ops = build_directed_operators(struct)
    else:
        ops = build_operators(struct)
    for name, M in (("P", ops.P), ("Q", ops.Q)):
        dev = float(np.abs(M.sum(axis=1) - 1).max())
        rows.append({"instance": label, "name": f"row-stochastic-{name}",
                     "deviation": dev, "tol": 1e-12, "passed": dev <= 1e-12,
                     "notes": ""})
    add(coupling_check(ops, t=5))
    add(spectrum_check(ops))
    if isinstance(struct, Hypergraph):
        add(lift_walk_check(struct))
        rev = float(np.abs(ops.pi[:, None] * ops.P - (ops.pi[:, None] * ops.P).T).max())
        rows.append({"instance": label, "name": "reversibility", "deviation": rev,
                     "tol": 1e-12, "passed": rev <= 1e-12, "notes": ""})
        dev = float(max(np.abs(ops.pi @ ops.P - ops.pi).max(),
                        np.abs(ops.zeta @ ops.Q - ops.zeta).max()))
        rows.append({"instance": label, "name": "stationarity", "deviation": dev,
                     "tol": 1e-10, "passed": dev <= 1e-10, "notes": ""})
    for rep in instance_bound_reports(struct, ("matthews", "radio-matthews", "mnr",
                                               "speedup"),
                                      trials=trials, seed=seed, label=label):
        rows.append({"instance": label, "name": rep.name, "deviation": rep.measured,
                     "tol": rep.bound, "passed": rep.verdict != "violated",
                     "notes": rep.verdict})
    return rows


def cmd_check(args) -> int:
    rows = []
    for label, struct in _load_instances(args):
        rows.extend(_invariant_rows(label, struct, args.trials, args.seed))
    doc = {"rows": rows,
           "config": {"trials": args.trials, "seed": args.seed}}
    _write_or_print(doc, args.out)
    failed = [r for r in rows if not r["passed"]]
    for r in rows:
        mark = "ok" if r["passed"] else "!!"
        sys.stderr.write(f"[{mark}] {r['instance']:24s} {r['name']:22s} "
                         f"deviation={rpt.fmt_float(r['deviation'])}\n")
    return EXIT_VIOLATED if failed else EXIT_OK


# --- parser -----------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="hyperwalk",
                                description="Random walks on hyper-graphs: exact "
                                "radio hitting times, cover simulation, bound checks.")
    p.add_argument("--version", action="version", version=f"hyperwalk {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="generate a family instance as hyper-graph JSON")
    gsub = g.add_subparsers(dest="family_name", required=True)
    for fam, flags in (
        ("hyperline", ("n", "k")),
        ("radio-line", ("n", "k", "line")),
        ("mesh2d", ("side", "k")),
        ("single-edge", ("n",)),
        ("clique-line", ("nprime", "c")),
        ("random-uniform", ("n", "m", "k", "seed")),
        ("unit-disk", ("points", "radius")),
    ):
        fp = gsub.add_parser(fam)
        for fl in flags:
            if fl == "line":
                fp.add_argument("--line", action="store_true",
                                help="clip distances instead of wrapping (default: ring)")
            elif fl == "points":
                fp.add_argument("--points", required=True, help="x,y CSV with header")
            elif fl == "radius":
                fp.add_argument("--radius", type=float, required=True)
            else:
                fp.add_argument(f"--{fl}", type=int, required=True)
        fp.add_argument("-o", "--out", help="output path (default: stdout)")
        fp.set_defaults(func=cmd_gen)

    a = sub.add_parser("analyze", help="exact hitting / radio hitting tables")
    a.add_argument("input")
    a.add_argument("--full", action="store_true", help="emit every ordered pair")
    a.add_argument("--source", type=int)
    a.add_argument("--target", type=int)
    a.add_argument("--format", choices=("json", "csv"), default="json")
    a.add_argument("--dump-operators", metavar="DIR",
                   help="dump A,B,P,Q (and pi,zeta) as CSV into DIR")
    a.add_argument("-o", "--out")
    a.set_defaults(func=cmd_analyze)

    s = sub.add_parser("simulate", help="Monte-Carlo cover / radio cover / speedups")
    s.add_argument("input")
    s.add_argument("--quantity", choices=("cover", "radio-cover", "speedups"),
                   default="radio-cover")
    s.add_argument("--trials", type=int, default=1000)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--cap", type=int, default=None,
                   help="per-trial step cap (default 50*2mnr)")
    s.add_argument("--start", default="all",
                   help="start vertex index, 'all' or 'stationary'")
    s.add_argument("--format", choices=("json", "csv"), default="json")
    s.add_argument("--per-trial", metavar="FILE", help="also write per-trial CSV")
    s.add_argument("--no-plots", action="store_true")
    s.add_argument("-o", "--out")
    s.set_defaults(func=cmd_simulate)

    b = sub.add_parser("bounds", help="evaluate closed-form bounds")
    b.add_argument("--input", help="hyper-graph JSON file")
    b.add_argument("--family", help="family spec like mesh2d:side=5,k=2")
    b.add_argument("--grid", action="store_true", help="run on the default grid")
    b.add_argument("--check", required=True,
                   help=f"comma list from {sorted(ALL_CHECKS)}")
    b.add_argument("--trials", type=int, default=1000)
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--n", type=int, default=200, help="line1d: ring size")
    b.add_argument("--k", type=_parse_int_list, default=None,
                   help="k values (single value for line1d/identities)")
    b.add_argument("--side", type=int, default=15, help="mesh2d-trend torus side")
    b.add_argument("--nprime", type=_parse_int_list, default=None)
    b.add_argument("--c", type=_parse_int_list, default=None)
    b.add_argument("--no-plots", action="store_true")
    b.add_argument("-o", "--out")
    b.set_defaults(func=cmd_bounds)

    c = sub.add_parser("check", help="run the invariant suite")
    c.add_argument("--input")
    c.add_argument("--family")
    c.add_argument("--grid", action="store_true")
    c.add_argument("--trials", type=int, default=400)
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("-o", "--out")
    c.set_defaults(func=cmd_check)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ValidationError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_VALIDATION
    except DisconnectedError as exc:
        sys.stderr.write(f"error: {exc}\n")
        for i, comp in enumerate(exc.components):
            sys.stderr.write(f"  component {i}: {comp}\n")
        return EXIT_INFEASIBLE
    except FileNotFoundError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_VALIDATION


if __name__ == "__main__":
    raise SystemExit(main())
