"""Command line: count, verify, sample, stats, approx.

Exit codes: 0 success, 1 a checked assertion failed, 2 usage or budget error.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import math
import os
import sys
import time
from datetime import datetime, timezone
from fractions import Fraction
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

from . import approximation as ap
from . import sampling as sp
from .config import Config
from .counting import (
    asymptotic_report,
    count_brute,
    count_by_range,
    count_dp,
    count_rank_functions,
)
from .cube import Cube
from .dyadic import DyadicSum
from .errors import BudgetExceeded, CubeError
from .verify import SUITES, run_suite

SCHEMA_VERSION = 1
CACHE_ENV = "CUBEHOM_CACHE_DIR"
EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
COUNT_ENGINES = ("backtrack", "brute", "dp", "rank")


def code_version() -> str:
    h = hashlib.sha256()
    for p in sorted(Path(__file__).parent.glob("*.py")):
        h.update(p.name.encode())
        h.update(p.read_bytes())
    return h.hexdigest()[:16]


def exact(x) -> Dict[str, Any]:
    """An exact rational as a string plus a float for humans."""
    if isinstance(x, DyadicSum):
        return {"exact": str(x), "approx": float(x)}
    return {"exact": str(x), "approx": float(x)}


def _now() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


# -- cache ------------------------------------------------------------------------


class Cache:
    """One JSON payload per (kind, d, engine), addressed by a hash of the config."""

    def __init__(self, root: Optional[str]):
        self.root = Path(root) if root else None

    def path(self, kind: str, d: int, engine: str, key: Dict[str, Any]) -> Optional[Path]:
        if self.root is None:
            return None
        digest = hashlib.sha256(_canonical(key).encode()).hexdigest()[:16]
        return self.root / kind / f"d{d}-{engine}-{digest}.json"

    def get_or_compute(self, kind: str, d: int, engine: str, key: Dict[str, Any],
                       compute: Callable[[], Any]) -> Tuple[Any, str]:
        p = self.path(kind, d, engine, key)
        if p is not None and p.exists():
            return json.loads(p.read_text(encoding="utf-8")), "hit"
        payload = json.loads(_canonical(compute()))
        if p is None:
            return payload, "disabled"
        p.parent.mkdir(parents=True, exist_ok=True)
        tmp = p.with_suffix(".tmp")
        tmp.write_text(_canonical(payload), encoding="utf-8")
        tmp.replace(p)
        return payload, "miss"


def _canonical(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


# -- commands ---------------------------------------------------------------------


def _config(args) -> Config:
    return Config(alpha=args.alpha, gamma=args.gamma, memory_budget=args.budget_mb)


def _config_echo(args, d) -> Dict[str, Any]:
    return {"d": d, "alpha": args.alpha, "gamma": args.gamma, "seed": args.seed,
            "n": args.n, "jobs": args.jobs, "budget_mb": args.budget_mb,
            "engine": getattr(args, "engine", None)}


def _count_total(d: int, engine: str, args) -> int:
    if engine == "brute":
        return count_brute(d, jobs=args.jobs)
    if engine == "dp":
        return count_dp(d, memory_budget_mb=args.budget_mb)
    if engine == "rank":
        return count_rank_functions(d)
    return count_by_range(d).total


def cmd_count(args) -> Tuple[Dict[str, Any], int, List[List[Any]]]:
    d, engine = args.d, args.engine

    def compute():
        t0 = time.perf_counter()
        total = _count_total(d, engine, args)
        out: Dict[str, Any] = {"total": total, "engine": engine,
                               "wall_time_s": round(time.perf_counter() - t0, 3)}
        try:
            table = count_by_range(d)
        except CubeError:
            return out
        rep = asymptotic_report(table)
        out["range_table"] = {str(k): v for k, v in table.counts.items()}
        out["range_table_engine"] = table.engine
        out["engines_agree"] = table.total == total
        scale = 2 ** (1 << (d - 1))
        out["trend"] = {
            "F_over_2^M": exact(Fraction(total, scale)),
            "reference_2e": 2 * math.e,
            "P_range_le_5": exact(Fraction(table.le5(), table.total)),
            "ratios": rep.ratios,
            "references": rep.references,
            "deviations": rep.deviations,
        }
        return out

    key = {"command": "count", "d": d, "engine": engine, "code": code_version()}
    res, status = Cache(args.cache_dir).get_or_compute("count", d, engine, key, compute)
    args.cache_status = status
    rows = [["range", "count"]] + [[k, v] for k, v in res.get("range_table", {}).items()]
    rows.append(["total", res["total"]])
    return res, EXIT_OK if res.get("engines_agree", True) else EXIT_FAIL, rows


def _d_range(text: str) -> List[int]:
    lo, _, hi = text.partition("-")
    lo_i, hi_i = int(lo), int(hi or lo)
    if lo_i < 1 or hi_i < lo_i:
        raise argparse.ArgumentTypeError(f"bad dimension range {text!r}")
    return list(range(lo_i, hi_i + 1))


def cmd_verify(args):
    cfg = _config(args)
    per_d = {}
    rows = [["d", "assertion", "passed", "checked", "counterexample"]]
    ok = True
    for d in _d_range(args.d):
        found = run_suite(args.suite, d, cfg, args.seed)
        per_d[str(d)] = [a.as_dict() for a in found]
        for a in found:
            ok &= a.passed
            rows.append([d, a.name, a.passed, a.checked, a.counterexample or ""])
    return {"suite": args.suite, "by_d": per_d, "all_passed": ok}, EXIT_OK if ok else EXIT_FAIL, rows


def cmd_sample(args):
    scfg = sp.SampleConfig(args.d, seed=args.seed, count=args.n, engine=args.engine,
                           burn_in=args.burn_in, thin=args.thin)
    if args.engine == "exact":
        fs, flags = sp.sample_uniform(scfg), {"approximate": False}
    else:
        r = sp.mcmc_sample(scfg)
        fs, flags = r.samples, {"approximate": True, "diagnostics": r.diagnostics}
    res = {"engine": args.engine, "count": len(fs), **flags,
           "samples": [f.to_array() for f in fs]}
    rows = [[f"v{v}" for v in range(1 << args.d)]] + [f.to_array() for f in fs]
    return res, EXIT_OK, rows


def cmd_stats(args):
    d = args.d
    engine = "exact" if args.exact else args.engine
    cfg = _config(args)

    def compute():
        scfg = sp.SampleConfig(d, seed=args.seed, count=args.n, engine="mcmc",
                               burn_in=args.burn_in, thin=args.thin) if engine == "mcmc" else None
        rep = sp.range_statistics(d, engine, scfg)
        out: Dict[str, Any] = {
            "engine": rep.engine, "exact": rep.exact, "n": rep.n,
            "range_freq": {str(k): exact(v) for k, v in rep.range_freq.items()},
            "range_se": {str(k): v for k, v in rep.range_se.items()},
            "P_range_gt_5": exact(rep.p_above_5),
        }
        out.update({k: v for k, v in rep.extra.items()})
        if d <= sp.EXACT_EDGE_MAX_D:
            per_edge = sp.edge_C_all_edges(d)
            vals = set(per_edge.values())
            out["edge_C"] = exact(per_edge[(0, 1)])
            out["edge_C_uniform_across_edges"] = len(vals) == 1
            mc = sp.mostly_constant_fraction(d, cfg)
            out["mostly_constant"] = {k: exact(getattr(mc, k)) for k in ("even", "odd", "both", "either")}
        return out

    key = {"command": "stats", "d": d, "engine": engine, "alpha": args.alpha, "seed": args.seed,
           "n": args.n, "burn_in": args.burn_in, "thin": args.thin, "code": code_version()}
    res, status = Cache(args.cache_dir).get_or_compute("stats", d, engine, key, compute)
    args.cache_status = status
    rows = [["range", "probability", "approx"]] + [
        [k, v["exact"], v["approx"]] for k, v in res["range_freq"].items()]
    if "edge_C" in res:
        rows.append(["edge_C", res["edge_C"]["exact"], res["edge_C"]["approx"]])
    ok = res.get("edge_C_uniform_across_edges", True)
    return res, EXIT_OK if ok else EXIT_FAIL, rows


def cmd_approx(args):
    d = args.d
    cube = Cube(d)
    max_size = None if args.sweep == "all" else int(args.sweep)

    def compute():
        recs, failures = [], 0
        for r in ap.sweep(cube, max_size):
            ok = (r.check.all_pass and r.exact_check.all_pass and r.covers_meet_bound
                  and r.iterations_ok)
            failures += not ok
            recs.append({"A": cube.labels(r.A), "key": list(r.key), "sizes": list(r.sizes),
                         "failed": r.check.failed() + ([] if r.covers_meet_bound else ["cover_bound"])
                         + ([] if r.iterations_ok else ["iterations"]), "passed": ok})
        return {"subjects": len(recs), "failures": failures, "records": recs}

    key = {"command": "approx", "d": d, "sweep": args.sweep, "code": code_version()}
    res, status = Cache(args.cache_dir).get_or_compute("approx", d, "sweep", key, compute)
    args.cache_status = status
    rows = [["A", "a", "g", "b", "h", "F", "S", "P", "Q", "passed", "failed"]]
    for r in res["records"]:
        rows.append([" ".join(r["A"]), *r["key"], *r["sizes"], r["passed"], " ".join(r["failed"])])
    return res, EXIT_OK if res["failures"] == 0 else EXIT_FAIL, rows


COMMANDS = {"count": cmd_count, "verify": cmd_verify, "sample": cmd_sample,
            "stats": cmd_stats, "approx": cmd_approx}


# -- parser -------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--alpha", type=float, default=1.9)
    common.add_argument("--gamma", type=float, default=0.1)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--n", type=int, default=1000)
    common.add_argument("--jobs", type=int, default=1)
    common.add_argument("--format", choices=("doc", "csv"), default="doc")
    common.add_argument("--cache-dir", default=os.environ.get(CACHE_ENV),
                        help=f"result cache (default ${CACHE_ENV}; unset disables caching)")
    common.add_argument("--budget-mb", type=int, default=1024)

    p = argparse.ArgumentParser(prog="cubehom", description="Hamming cube homomorphism toolkit")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("count", parents=[common], help="count normalized height functions")
    c.add_argument("--d", type=int, required=True)
    c.add_argument("--engine", choices=COUNT_ENGINES, default="backtrack")

    v = sub.add_parser("verify", parents=[common], help="run an invariant suite")
    v.add_argument("--suite", choices=sorted(SUITES), required=True)
    v.add_argument("--d", required=True, help="dimension or range such as 3-5")

    for name, help_ in (("sample", "draw members of F"), ("stats", "range and edge statistics")):
        s = sub.add_parser(name, parents=[common], help=help_)
        s.add_argument("--d", type=int, required=True)
        s.add_argument("--engine", choices=("exact", "mcmc"), default="exact")
        s.add_argument("--burn-in", type=int, default=200)
        s.add_argument("--thin", type=int, default=2)
        if name == "stats":
            s.add_argument("--exact", action="store_true", help="shorthand for --engine exact")

    a = sub.add_parser("approx", parents=[common], help="approximating quadruple sweep")
    a.add_argument("--d", type=int, required=True)
    a.add_argument("--sweep", default="all", help="'all' or a maximum |A|")
    return p


def _emit(doc: Dict[str, Any], rows: Sequence[Sequence[Any]], fmt: str, out) -> None:
    if fmt == "csv":
        buf = io.StringIO()
        csv.writer(buf, lineterminator="\n").writerows(rows)
        out.write(buf.getvalue())
    else:
        out.write(json.dumps(doc, indent=2, sort_keys=True, ensure_ascii=False) + "\n")


def main(argv: Optional[Sequence[str]] = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    started = _now()
    echo = _config_echo(args, args.d)
    doc: Dict[str, Any] = {"schema_version": SCHEMA_VERSION, "command": args.command,
                           "config": echo, "code_version": code_version(), "started": started}
    try:
        Config(alpha=args.alpha, gamma=args.gamma)
        results, code, rows = COMMANDS[args.command](args)
    except (CubeError, ValueError, argparse.ArgumentTypeError) as exc:
        msg = f"engine budget: {exc}" if isinstance(exc, BudgetExceeded) else str(exc)
        doc.update({"finished": _now(), "status": "error",
                    "error": {"kind": type(exc).__name__, "message": msg,
                              "required": getattr(exc, "required", None)}})
        if args.format == "csv":
            _emit(doc, [["error", "message"], [type(exc).__name__, msg]], "csv", out)
        else:
            _emit(doc, [], "doc", out)
        return EXIT_USAGE
    doc.update({"finished": _now(), "status": "ok" if code == EXIT_OK else "assertion-failure",
                "cache": getattr(args, "cache_status", "disabled"), "results": results})
    _emit(doc, rows, args.format, out)
    return code


def run() -> None:
    sys.exit(main())


if __name__ == "__main__":
    run()
