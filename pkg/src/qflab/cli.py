"""Batch command-line front end.

Subcommands map one-to-one onto library operations and emit JSON lines
(17 significant digits) or CSV (6 significant digits).  Sweeps honor the
QFLAB_THREADS environment variable; outputs are assembled in input order
so runs are byte-identical regardless of worker count.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

from . import verify as _verify
from .arith import class_number_analytic, dirichlet_l1, is_fundamental
from .forms import QuadraticForm, enumerate_reduced_forms, reduce_form, representation_count
from .fourier import BandlimitedFn, functional_report, gap_constant, greedy_search
from .latticesums import (
    congruence_main_term,
    congruence_sum_exact,
    poisson_identity_check,
)
from .sieve import (
    bt_theoretical_bound,
    sieved_sum_exact,
    count_represented_primes,
    prime_gap_scan,
    sieve_upper_bound,
)

__all__ = ["CommandPlan", "parse_invocation", "execute_plan", "main"]


@dataclass
class CommandPlan:
    group: str
    action: str
    params: dict = field(default_factory=dict)
    output: str | None = None
    fmt: str = "json"


def _form_arg(text: str) -> QuadraticForm:
    try:
        a, b, c = (int(part) for part in text.split(","))
        return QuadraticForm(a, b, c)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad --form {text!r}: {exc}") from exc


def _coeffs_arg(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(p) for p in text.split(","))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad --coeffs {text!r}: {exc}") from exc


def _grid_arg(text: str) -> list[float]:
    """start:stop:points[:log] -> list of grid values."""
    parts = text.split(":")
    if len(parts) not in (3, 4) or (len(parts) == 4 and parts[3] != "log"):
        raise argparse.ArgumentTypeError(
            f"bad --grid {text!r}: want start:stop:points[:log]")
    try:
        start, stop, points = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad --grid {text!r}: {exc}") from exc
    if points < 1:
        raise argparse.ArgumentTypeError("grid needs at least one point")
    if points == 1:
        return [start]
    if len(parts) == 4:
        lo, hi = math.log(start), math.log(stop)
        return [math.exp(lo + (hi - lo) * i / (points - 1)) for i in range(points)]
    return [start + (stop - start) * i / (points - 1) for i in range(points)]


# true defaults per (group, action, param); argparse itself runs with
# SUPPRESS so that config-file values can slot between CLI and defaults
_DEFAULTS: dict[tuple[str, str], dict] = {}
_TYPES: dict[tuple[str, str], dict] = {}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qflab", description=__doc__)
    parser.add_argument("--out", metavar="PATH", default=None,
                        help="write records here instead of stdout")
    parser.add_argument("--format", choices=("json", "csv"), default="json", dest="fmt")
    parser.add_argument("--config", metavar="PATH", default=None,
                        help="JSON file with default parameters")
    # the same options are accepted after the subcommand; SUPPRESS keeps the
    # leaf parser from clobbering values parsed at the top level
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", metavar="PATH", default=argparse.SUPPRESS)
    common.add_argument("--format", choices=("json", "csv"), dest="fmt",
                        default=argparse.SUPPRESS)
    common.add_argument("--config", metavar="PATH", default=argparse.SUPPRESS)
    groups = parser.add_subparsers(dest="group", required=True)

    current: list = []

    def add(sub, group_name, name):
        leaf = sub.add_parser(name, parents=[common])
        current.clear()
        current.append((group_name, name))
        _DEFAULTS.setdefault((group_name, name), {})
        _TYPES.setdefault((group_name, name), {})
        return leaf

    def opt(leaf, flag, **kw):
        key = current[0]
        dest = kw.get("dest", flag.lstrip("-").replace("-", "_"))
        if "default" in kw:
            _DEFAULTS[key][dest] = kw["default"]
            kw["default"] = argparse.SUPPRESS
        if "type" in kw:
            _TYPES[key][dest] = kw["type"]
        leaf.add_argument(flag, **kw)

    forms = groups.add_parser("forms").add_subparsers(dest="action", required=True)
    p = add(forms, "forms", "reduce")
    opt(p, "--form", type=_form_arg, required=True)
    p = add(forms, "forms", "enumerate")
    opt(p, "--d", type=int, required=True)
    p = add(forms, "forms", "classnum")
    opt(p, "--d", type=int, required=True)

    rep = groups.add_parser("repr").add_subparsers(dest="action", required=True)
    p = add(rep, "repr", "rf")
    opt(p, "--form", type=_form_arg, required=True)
    opt(p, "--n", type=int, required=True)
    p = add(rep, "repr", "congruence-sum")
    opt(p, "--form", type=_form_arg, required=True)
    opt(p, "--ell", type=int, default=1)
    opt(p, "--x", type=float, required=True)
    p = add(rep, "repr", "error-scaling")
    opt(p, "--form", type=_form_arg, required=True)
    opt(p, "--ell", type=int, default=1)
    opt(p, "--grid", type=_grid_arg, default=None)
    p = add(rep, "repr", "poisson-check")
    opt(p, "--form", type=_form_arg, required=True)
    opt(p, "--ell", type=int, default=1)
    opt(p, "--t", type=float, default=1.0)

    sieve = groups.add_parser("sieve").add_subparsers(dest="action", required=True)
    p = add(sieve, "sieve", "bound")
    opt(p, "--form", type=_form_arg, required=True)
    opt(p, "--x", type=float, required=True)
    opt(p, "--y", type=float, required=True)
    opt(p, "--z", type=float, required=True)
    p = add(sieve, "sieve", "pif")
    opt(p, "--form", type=_form_arg, required=True)
    opt(p, "--x", type=float, required=True)
    p = add(sieve, "sieve", "gaps")
    opt(p, "--form", type=_form_arg, required=True)
    opt(p, "--x", type=float, required=True)
    opt(p, "--min-p", type=int, default=100, dest="min_p")
    p = add(sieve, "sieve", "bt-constants")
    opt(p, "--form", type=_form_arg, required=True)
    opt(p, "--x", type=float, required=True)
    opt(p, "--y", type=float, required=True)
    opt(p, "--variant", default="cuberoot_range",
        choices=("cuberoot_range", "mid_range", "sqrt_range"))
    opt(p, "--eps", type=float, default=0.01)

    fourier = groups.add_parser("fourier").add_subparsers(dest="action", required=True)
    p = add(fourier, "fourier", "eval")
    opt(p, "--coeffs", type=_coeffs_arg, required=True)
    opt(p, "--x", type=float, required=True)
    opt(p, "--lam", type=float, default=1.0)
    p = add(fourier, "fourier", "report")
    opt(p, "--coeffs", type=_coeffs_arg, required=True)
    opt(p, "--lam", type=float, default=1.0)
    opt(p, "--A", type=float, required=True, dest="A")
    p = add(fourier, "fourier", "search")
    opt(p, "--A", type=float, required=True, dest="A")
    opt(p, "--terms", type=int, default=3)
    opt(p, "--budget", type=int, default=4000)
    p = add(fourier, "fourier", "tables")
    opt(p, "--a-grid", type=_grid_arg, default=None, dest="a_grid")
    opt(p, "--terms", type=int, default=3)
    opt(p, "--budget", type=int, default=4000)

    ver = groups.add_parser("verify")
    ver.add_argument("action", choices=("fast", "full"))
    return parser


def _load_config(path: str, key: tuple[str, str], parser) -> dict:
    with open(path, encoding="utf-8") as fh:
        cfg = json.load(fh)
    if not isinstance(cfg, dict):
        parser.error(f"config {path} must hold a JSON object")
    known = set(_DEFAULTS.get(key, {})) | set(_TYPES.get(key, {}))
    out = {}
    for name, value in cfg.items():
        if name not in known:
            parser.error(f"config key {name!r} unknown for {key[0]} {key[1]}")
        conv = _TYPES.get(key, {}).get(name)
        try:
            if conv is not None and isinstance(value, str):
                value = conv(value)
            elif name in ("grid", "a_grid") and isinstance(value, list):
                value = [float(v) for v in value]
        except (ValueError, argparse.ArgumentTypeError) as exc:
            parser.error(f"config key {name!r}: {exc}")
        out[name] = value
    return out


def parse_invocation(argv) -> CommandPlan:
    """Validate argv into an executable plan; exits with status 2 on usage
    errors.  Precedence: command line > config file > built-in defaults."""
    parser = build_parser()
    ns = parser.parse_args(argv)
    given = dict(vars(ns))
    group = given.pop("group")
    action = given.pop("action")
    output = given.pop("out", None)
    fmt = given.pop("fmt", "json")
    config = given.pop("config", None)
    key = (group, action)
    params = dict(_DEFAULTS.get(key, {}))
    if config:
        params.update(_load_config(config, key, parser))
    params.update(given)
    return CommandPlan(group, action, params, output, fmt)


def _fmt_float(v: float) -> str:
    return format(v, ".17g")


def _json_default(o):
    if isinstance(o, Fraction):
        return str(o)
    raise TypeError(f"not JSON serializable: {type(o)}")


def emit(records: list[dict], fmt: str, stream) -> None:
    if fmt == "json":
        for rec in records:
            rec = {k: (float(_fmt_float(v)) if isinstance(v, float) else v)
                   for k, v in rec.items()}
            stream.write(json.dumps(rec, default=_json_default) + "\n")
        return
    if not records:
        return
    writer = csv.writer(stream, lineterminator="\n")
    keys = list(records[0].keys())
    writer.writerow(keys)
    for rec in records:
        writer.writerow([format(v, ".6g") if isinstance(v, float) else v
                         for v in (rec[k] for k in keys)])


def _worker_count() -> int:
    raw = os.environ.get("QFLAB_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def _map_ordered(fn, items):
    workers = _worker_count()
    if workers == 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def _scaling_row(args) -> dict:
    form_triple, ell, x = args
    f = QuadraticForm(*form_triple)
    from .latticesums import CongruenceSumResult

    return CongruenceSumResult(x, ell, congruence_sum_exact(f, ell, x),
                               congruence_main_term(f, ell, x)).record()


def _table_row(args) -> dict:
    A, terms, budget = args
    res = greedy_search(A, terms, budget)
    coeffs = list(res.fn.coeffs) + [0.0] * (3 - len(res.fn.coeffs))
    return {"A": A, "c_plus_lower": res.report.j_plus, "a1": coeffs[0],
            "a2": coeffs[1], "a3": coeffs[2], "lambda": res.fn.lam}


def execute_plan(plan: CommandPlan) -> tuple[list[dict], int]:
    """Run the plan; returns (records, exit_status)."""
    p = plan.params
    key = (plan.group, plan.action)
    if key == ("forms", "reduce"):
        f = p["form"]
        g = reduce_form(f)
        return [{"input": f.triple(), "a": g.a, "b": g.b, "c": g.c, "D": g.D}], 0
    if key == ("forms", "enumerate"):
        cls = enumerate_reduced_forms(p["d"])
        return [{"D": cls.D, "a": f.a, "b": f.b, "c": f.c} for f in cls], 0
    if key == ("forms", "classnum"):
        D = p["d"]
        rec = {"D": D, "h_enumeration": len(enumerate_reduced_forms(D))}
        if is_fundamental(D):
            rec["h_analytic"] = class_number_analytic(D)
            rec["L1_chi"] = dirichlet_l1(D)
        return [rec], 0
    if key == ("repr", "rf"):
        return [{"form": p["form"].triple(), "n": p["n"],
                 "rf": representation_count(p["form"], p["n"])}], 0
    if key == ("repr", "congruence-sum"):
        f, ell, x = p["form"], p["ell"], p["x"]
        from .latticesums import CongruenceSumResult

        row = CongruenceSumResult(x, ell, congruence_sum_exact(f, ell, x),
                                  congruence_main_term(f, ell, x))
        return [row.record()], 0
    if key == ("repr", "error-scaling"):
        grid = p["grid"] or _grid_arg("1e3:1e6:7:log")
        rows = _map_ordered(_scaling_row,
                            [(p["form"].triple(), p["ell"], x) for x in grid])
        import numpy as np

        pts = [(math.log(r["x"]), math.log(abs(r["error"])))
               for r in rows if abs(r["error"]) >= 1.0]
        slope = float(np.polyfit(*zip(*pts), 1)[0]) if len(pts) >= 2 else None
        for r in rows:
            r["slope"] = slope
        return rows, 0
    if key == ("repr", "poisson-check"):
        lhs, rhs = poisson_identity_check(p["form"], p["ell"], p["t"])
        return [{"form": p["form"].triple(), "ell": p["ell"], "t": p["t"],
                 "lhs": lhs, "rhs": rhs,
                 "relative_gap": abs(lhs - rhs) / abs(lhs)}], 0
    if key == ("sieve", "bound"):
        sb = sieve_upper_bound(p["form"], p["x"], p["y"], p["z"])
        rec = sb.record()
        rec["exact"] = sieved_sum_exact(p["form"], p["x"], p["y"], p["z"])
        return [rec], 0
    if key == ("sieve", "pif"):
        return [{"form": p["form"].triple(), "x": p["x"],
                 "pi_f": count_represented_primes(p["form"], p["x"])}], 0
    if key == ("sieve", "gaps"):
        best, records = prime_gap_scan(p["form"], p["x"], p["min_p"])
        rows = [r.record() for r in records]
        for r in rows:
            r["is_max"] = r["p_n"] == best.p_n
        return rows, 0
    if key == ("sieve", "bt-constants"):
        bt = bt_theoretical_bound(p["form"], p["x"], p["y"], p["variant"], p["eps"])
        return [{"form": p["form"].triple(), "x": p["x"], "y": p["y"],
                 "variant": p["variant"], "eps": p["eps"], "theta": bt.theta,
                 "constant": bt.constant, "range_ok": bt.range_ok}], 0
    if key == ("fourier", "eval"):
        fn = BandlimitedFn(p["coeffs"], p["lam"])
        return [{"coeffs": list(p["coeffs"]), "lambda": p["lam"], "x": p["x"],
                 "value": float(fn(p["x"]))}], 0
    if key == ("fourier", "report"):
        fn = BandlimitedFn(p["coeffs"], p["lam"])
        rep = functional_report(fn, p["A"])
        rec = rep.record()
        rec["coeffs"] = list(p["coeffs"])
        rec["lambda"] = p["lam"]
        try:
            rec["gap_constant"] = gap_constant(fn, p["A"], 0.0, Fraction(1, 2), 1)
        except ValueError:
            rec["gap_constant"] = None
        return [rec], 0
    if key == ("fourier", "search"):
        res = greedy_search(p["A"], p["terms"], p["budget"])
        rec = res.report.record()
        rec.update({"coeffs": list(res.fn.coeffs), "lambda": res.fn.lam,
                    "evaluations": res.evaluations, "exhausted": res.exhausted})
        return [rec], 0
    if key == ("fourier", "tables"):
        grid = p["a_grid"] or [1.0, 5.0, 10.0, 28.0, 34.5]
        rows = _map_ordered(_table_row, [(A, p["terms"], p["budget"]) for A in grid])
        return rows, 0
    raise AssertionError(f"unroutable plan {key}")


def main(argv=None) -> int:
    plan = parse_invocation(sys.argv[1:] if argv is None else argv)
    if plan.group == "verify":
        return _verify.run_suite(plan.action)
    records, status = execute_plan(plan)
    buf = io.StringIO()
    emit(records, plan.fmt, buf)
    text = buf.getvalue()
    if plan.output:
        with open(plan.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return status


if __name__ == "__main__":
    sys.exit(main())
