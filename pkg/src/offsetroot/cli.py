"""Command-line experiments.

    python -m offsetroot approx --x 5 --d 2 --b 4 --c1 10 --tol 1e-9
    python -m offsetroot stability --x 7
    python -m offsetroot scan --x 1250 --d 7 --b-min 3 --b-max 7 --steps 4000
    python -m offsetroot compare --x 7 --d 2 --b 4
    python -m offsetroot cf --x 5 --b 4 --depth 10

Every command accepts ``--format {text,csv,json}`` and ``--out PATH``.
Exit status: 0 on success, 1 on bad arguments, 2 when the offset iteration
does not converge to the correct root (approx, compare).
"""

from __future__ import annotations

import argparse
import csv
import enum
import io
import json
import math
import sys
from dataclasses import replace
from typing import Any

import numpy as np

from . import __version__
from .baselines import BaselineMethod, InsufficientDataError, estimate_convergence, run_baseline
from .contfrac import build_gcf, evaluate_gcf, format_gcf, gcf_iteration_equivalence, truncations
from .core import IterationConfig, RootQuery, Verdict, recover_root, run_iteration
from .stability import SCAN_CONFIG, cubic_validity_bounds, regime_table, scan_b, stability_report, threshold_ratio

EXIT_OK, EXIT_USAGE, EXIT_NOT_CONVERGED = 0, 1, 2
TEXT_ROWS_HEAD, TEXT_ROWS_TAIL = 20, 5


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


# ---------- serialization ----------


def fmt(v: Any) -> str:
    """17 significant digits; round-trips binary64 exactly."""
    if v is None:
        return ""
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return format(float(v), ".17g")
    return str(v)


def dump_json(obj: Any, indent: int = 0) -> str:
    pad, inner = "  " * indent, "  " * (indent + 1)
    if obj is None:
        return "null"
    if isinstance(obj, enum.Enum):
        obj = obj.value
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return fmt(obj) if math.isfinite(obj) else "null"
    if isinstance(obj, str):
        return json.dumps(obj, ensure_ascii=False)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{inner}{json.dumps(str(k))}: {dump_json(v, indent + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        if len(obj) == 0:
            return "[]"
        if all(not isinstance(v, (dict, list, tuple, np.ndarray)) for v in obj):
            return "[" + ", ".join(dump_json(v, indent + 1) for v in obj) + "]"
        return "[\n" + ",\n".join(inner + dump_json(v, indent + 1) for v in obj) + "\n" + pad + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dump_csv(header: list[str], rows: list[list[Any]]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([fmt(v) for v in row])
    return buf.getvalue()


class Report:
    def __init__(self, command: str, inputs: dict, results: dict, header: list[str], rows: list[list], text: str):
        self.command, self.inputs, self.results = command, inputs, results
        self.header, self.rows, self.text = header, rows, text

    def render(self, output_format: str) -> str:
        if output_format == "json":
            doc = {"command": self.command, "inputs": self.inputs, "results": self.results, "version": __version__}
            return dump_json(doc) + "\n"
        if output_format == "csv":
            return dump_csv(self.header, self.rows)
        return self.text if self.text.endswith("\n") else self.text + "\n"


def _table(header: list[str], rows: list[list[str]]) -> str:
    widths = [max(len(h), *(len(r[i]) for r in rows)) if rows else len(h) for i, h in enumerate(header)]
    line = lambda cells: "  ".join(c.rjust(w) for c, w in zip(cells, widths)).rstrip()  # noqa: E731
    out = [line(header), "  ".join("-" * w for w in widths)]
    if len(rows) > TEXT_ROWS_HEAD + TEXT_ROWS_TAIL + 5:
        skipped = len(rows) - TEXT_ROWS_HEAD - TEXT_ROWS_TAIL
        out += [line(r) for r in rows[:TEXT_ROWS_HEAD]]
        out.append(f"... ({skipped} rows omitted)")
        out += [line(r) for r in rows[-TEXT_ROWS_TAIL:]]
    else:
        out += [line(r) for r in rows]
    return "\n".join(out)


def _convention(args) -> str:
    if args.convention == "auto":
        return "minus" if args.d == 2 else "plus"
    return args.convention


def _root(q: RootQuery) -> str:
    return f"sqrt({q.x:g})" if q.d == 2 else f"root({q.x:g}, {q.d})"


def _g(v, digits=12) -> str:
    return "-" if v is None else f"{v:.{digits}g}"


# ---------- commands ----------


def cmd_approx(args) -> tuple[int, Report]:
    q = RootQuery(args.x, args.d)
    cfg = IterationConfig(
        b=args.b, c1=args.c1, tol=args.tol, max_iter=args.max_iter, max_restarts=args.max_restarts
    )
    conv = _convention(args)
    tr = run_iteration(q, cfg, conv)
    rows = [[n, c] for n, c in enumerate(tr.iterates, start=1)]
    inputs = {"x": q.x, "d": q.d, "b": cfg.b, "c1": cfg.c1, "tol": cfg.tol, "max_iter": cfg.max_iter,
              "max_restarts": cfg.max_restarts, "convention": conv}
    results = {"verdict": tr.verdict, "root_estimate": tr.root_estimate, "residual": tr.residual,
               "restarts_used": tr.restarts_used, "steps": tr.n_steps, "iterates": list(tr.iterates),
               "oracle_root": q.oracle_root()}
    rel = "b/2 - c_n" if conv == "minus" else "b/2 + c_n"
    text = "\n".join([
        f"offset iteration for {_root(q)} with b = {cfg.b:g}, c1 = {cfg.c1:g}",
        "",
        _table(["n", "c_n"], [[str(n), f"{c:.11f}"] for n, c in rows]),
        "",
        f"verdict:   {tr.verdict}",
        f"estimate:  {rel} = {_g(tr.root_estimate)}",
        f"residual:  {tr.residual:.3g}",
        f"restarts:  {tr.restarts_used}",
    ])
    code = EXIT_OK if tr.verdict is Verdict.CONVERGED_CORRECT else EXIT_NOT_CONVERGED
    return code, Report("approx", inputs, results, ["n", "c_n"], rows, text)


def cmd_stability(args) -> tuple[int, Report]:
    q = RootQuery(args.x, args.d)
    inputs = {"x": q.x, "d": q.d, "b": args.b}
    if args.b is None:
        if q.d != 2:
            raise UsageError("--b is required for d >= 3")
        table = regime_table(q.x)
        rows = [[r.regime, r.b, r.minus, r.derivative_minus, r.plus, r.derivative_plus] for r in table]
        header = ["regime", "b", "class_minus", "deriv_minus", "class_plus", "deriv_plus"]
        results = {"regimes": [dict(zip(header, row)) for row in rows]}
        text = "\n".join([
            f"stability of c_minus = b/2 - sqrt(x) and c_plus = b/2 + sqrt(x) for x = {q.x:g}",
            "",
            _table(["regime", "b", "c_minus", "|f'(c_minus)|", "c_plus", "|f'(c_plus)|"],
                   [[r.regime, f"{r.b:.6g}", str(r.minus), _g(r.derivative_minus, 6), str(r.plus),
                     _g(r.derivative_plus, 6)] for r in table]),
        ])
        return EXIT_OK, Report("stability", inputs, results, header, rows, text)
    rep = stability_report(q.x, args.b, q.d)
    header = ["which", "location", "derivative_magnitude", "class", "root"]
    rows = [[fp.which, fp.location, fp.derivative_magnitude, fp.stability, fp.root] for fp in rep.fixed_points]
    results = {"regime": rep.regime, "fixed_points": [dict(zip(header, row)) for row in rows]}
    lines = [f"fixed points for {_root(q)} with b = {args.b:g}"]
    if rep.regime:
        lines.append(f"regime: {rep.regime}")
    lines += ["", _table(["which", "c*", "|f'(c*)|", "class", "root"],
                         [[fp.which, _g(fp.location, 10), _g(fp.derivative_magnitude, 6), str(fp.stability),
                           _g(fp.root, 10)] for fp in rep.fixed_points])]
    return EXIT_OK, Report("stability", inputs, results, header, rows, "\n".join(lines))


def cmd_scan(args) -> tuple[int, Report]:
    q = RootQuery(args.x, args.d)
    if not args.b_min < args.b_max:
        raise UsageError("--b-min must be less than --b-max")
    if args.steps < 2:
        raise UsageError("--steps must be at least 2")
    cfg = replace(SCAN_CONFIG, c1=args.c1, tol=args.tol, max_iter=args.max_iter, max_restarts=args.max_restarts)
    res = scan_b(q, args.b_min, args.b_max, args.steps, cfg, args.refine_tol)
    ratio = threshold_ratio(res.least_positive_b, q) if res.least_positive_b else None
    rows = [[b, v, e if math.isfinite(e) else None, r]
            for b, v, e, r in zip(res.grid, res.verdict_per_b, res.root_estimates, res.residuals)]
    inputs = {"x": q.x, "d": q.d, "b_min": args.b_min, "b_max": args.b_max, "steps": args.steps,
              "c1": cfg.c1, "tol": cfg.tol, "max_iter": cfg.max_iter, "refine_tol": args.refine_tol}
    results = {
        "intervals": [list(iv) for iv in res.intervals],
        "least_positive_b": res.least_positive_b,
        "least_positive_b_grid": res.least_positive_b_grid,
        "threshold_ratio": ratio,
        "grid": res.grid,
        "verdicts": res.verdict_per_b,
        "root_estimates": [r[2] for r in rows],
        "residuals": [r[3] for r in rows],
    }
    counts = {str(v): sum(1 for w in res.verdict_per_b if w is v) for v in Verdict}
    lines = [
        f"scan of b in [{args.b_min:g}, {args.b_max:g}] ({len(res.grid)} points) for {_root(q)}",
        "verdicts: " + ", ".join(f"{k}={n}" for k, n in counts.items() if n),
        "converging intervals:",
    ]
    lines += [f"  [{lo:.6f}, {hi:.6f}]" for lo, hi in res.intervals] or ["  (none)"]
    lines.append(f"least positive b: {_g(res.least_positive_b, 8)}")
    lines.append(f"b**d / x:         {_g(ratio, 8)}")
    if q.d == 3:
        hi, lo = cubic_validity_bounds(q.x)
        results["cubic_validity_bounds"] = [hi, lo]
        lines.append(f"analytic failure interval: ({lo:.6f}, {hi:.6f})")
    return EXIT_OK, Report("scan", inputs, results, ["b", "verdict", "root_estimate", "residual"], rows,
                           "\n".join(lines))


def cmd_compare(args) -> tuple[int, Report]:
    q = RootQuery(args.x, args.d)
    cfg = IterationConfig(b=args.b, c1=args.c1, tol=args.tol, max_iter=args.max_iter,
                          max_restarts=args.max_restarts)
    conv = _convention(args)
    root = q.oracle_root()
    x1 = recover_root(args.c1, args.b, q.d, conv) or 1.0
    traces = {"offset": run_iteration(q, cfg, conv)}
    traces["newton"] = run_baseline(BaselineMethod.NEWTON_RAPHSON, q, x1, args.tol, args.max_iter)
    if q.d == 2:
        traces["babylonian"] = run_baseline(BaselineMethod.BABYLONIAN, q, x1, args.tol, args.max_iter)
    traces["halley"] = run_baseline(BaselineMethod.HALLEY, q, x1, args.tol, args.max_iter)

    errors = {k: np.abs(t.estimates() - root) for k, t in traces.items()}
    names = ["offset", "newton", "babylonian", "halley"]
    length = max(len(e) for e in errors.values())
    rows = []
    for n in range(length):
        row: list[Any] = [n + 1]
        for k in names:
            e = errors.get(k)
            row.append(float(e[n]) if e is not None and n < len(e) else None)
        rows.append(row)

    methods = {}
    summary = []
    for k, t in traces.items():
        try:
            est = estimate_convergence(t, root)
            order, rate, used = est.order, est.rate, est.samples_used
        except InsufficientDataError:
            order = rate = used = None
        reach = next((n + 1 for n, e in enumerate(errors[k]) if e <= args.target), None)
        methods[k] = {"verdict": t.verdict, "steps": t.n_steps, "root_estimate": t.root_estimate,
                      "residual": t.residual, "order": order, "rate": rate, "samples_used": used,
                      "first_n_below_target": reach, "errors": errors[k]}
        summary.append([k, str(t.verdict), str(t.n_steps), _g(t.root_estimate), _g(order, 4), _g(rate, 4),
                        "-" if reach is None else str(reach)])
    inputs = {"x": q.x, "d": q.d, "b": cfg.b, "c1": cfg.c1, "x1": x1, "tol": cfg.tol, "max_iter": cfg.max_iter,
              "convention": conv, "target": args.target}
    header = ["n", "err_offset", "err_newton", "err_babylonian", "err_halley"]
    text = "\n".join([
        f"{_root(q)}: offset b = {cfg.b:g}, c1 = {cfg.c1:g}; baselines start at {x1:g}",
        "",
        _table(["method", "verdict", "steps", "estimate", "order", "rate", f"n(err<={args.target:g})"], summary),
        "",
        _table(["n"] + [f"|err| {k}" for k in names if k in traces],
               [[str(r[0])] + [_g(v, 6) for v, k in zip(r[1:], names) if k in traces] for r in rows]),
    ])
    code = EXIT_OK if traces["offset"].verdict is Verdict.CONVERGED_CORRECT else EXIT_NOT_CONVERGED
    return code, Report("compare", inputs, {"oracle_root": root, "methods": methods}, header, rows, text)


def cmd_cf(args) -> tuple[int, Report]:
    if args.d != 2:
        raise UsageError("continued fraction defined for d=2 only")
    q = RootQuery(args.x, 2)
    if args.b == 0:
        raise UsageError("--b must be nonzero")
    g = build_gcf(q.x, args.b, args.depth)
    values = truncations(g)
    same = gcf_iteration_equivalence(q.x, args.b, args.depth)
    limit = args.b / 2 - math.sqrt(q.x)
    rows = [[k, v] for k, v in values]
    inputs = {"x": q.x, "d": 2, "b": args.b, "depth": args.depth}
    results = {"partial_numerator": g.partial_numerator, "partial_denominator": g.partial_denominator,
               "simple": g.is_simple, "value": evaluate_gcf(g), "limit": limit,
               "truncations": [v for _, v in values], "matches_iteration": same,
               "compact": format_gcf(g, "compact")}
    text = "\n".join([
        f"continued fraction for b/2 - sqrt(x) with x = {q.x:g}, b = {args.b:g}",
        f"partial numerator:   {g.partial_numerator:.12g}" + ("  (simple continued fraction)" if g.is_simple else ""),
        f"partial denominator: {g.partial_denominator:.12g}",
        "",
        format_gcf(g, "compact"),
        "",
        format_gcf(g, "nested"),
        "",
        _table(["depth", "value"], [[str(k), f"{v:.12f}"] for k, v in values]),
        "",
        f"limit b/2 - sqrt(x) = {limit:.12f}",
        f"truncations match iterates from c1 = 0: {'yes' if same else 'no'}",
    ])
    return EXIT_OK, Report("cf", inputs, results, ["depth", "value"], rows, text)


COMMANDS = {"approx": cmd_approx, "stability": cmd_stability, "scan": cmd_scan, "compare": cmd_compare,
            "cf": cmd_cf}


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="offsetroot", description="Offset fixed-point iteration for d-th roots.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, d=True):
        p.add_argument("--x", type=float, required=True, help="radicand (> 0)")
        if d:
            p.add_argument("--d", type=int, default=2, help="root degree (default 2)")
        p.add_argument("--format", choices=("text", "csv", "json"), default="text")
        p.add_argument("--out", help="write output to this file instead of stdout")

    def iteration(p, c1=0.0, tol=1e-10, max_iter=10_000):
        p.add_argument("--c1", type=float, default=c1, help=f"initial iterate (default {c1:g})")
        p.add_argument("--tol", type=float, default=tol)
        p.add_argument("--max-iter", type=int, default=max_iter)
        p.add_argument("--max-restarts", type=int, default=3)

    def convention(p):
        p.add_argument("--convention", choices=("auto", "minus", "plus"), default="auto",
                       help="root = b/2 - c (minus) or b/2 + c (plus); auto: minus for d=2")

    p = sub.add_parser("approx", help="run the offset iteration and print the trace")
    common(p)
    p.add_argument("--b", type=float, required=True)
    iteration(p)
    convention(p)

    p = sub.add_parser("stability", help="fixed points and their stability")
    common(p)
    p.add_argument("--b", type=float, help="offset; omit for the seven-regime table (d=2)")

    p = sub.add_parser("scan", help="run the iteration over a grid of offsets")
    common(p)
    p.add_argument("--b-min", type=float, required=True)
    p.add_argument("--b-max", type=float, required=True)
    p.add_argument("--steps", type=int, default=1000)
    p.add_argument("--refine-tol", type=float, default=1e-4)
    iteration(p, c1=SCAN_CONFIG.c1, max_iter=SCAN_CONFIG.max_iter)

    p = sub.add_parser("compare", help="offset iteration against Newton, Babylonian and Halley")
    common(p)
    p.add_argument("--b", type=float, required=True)
    p.add_argument("--target", type=float, default=1e-12, help="error level for the iteration-count column")
    iteration(p, tol=1e-13)
    convention(p)

    p = sub.add_parser("cf", help="continued fraction of the square-root recurrence")
    common(p)
    p.add_argument("--b", type=float, required=True)
    p.add_argument("--depth", type=int, default=10)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        code, report = COMMANDS[args.command](args)
    except (UsageError, ValueError) as exc:
        print(f"offsetroot: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    out = report.render(args.format)
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(out)
    else:
        sys.stdout.write(out)
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
