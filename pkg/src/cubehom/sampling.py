"""Samplers over F and exact small-d statistics.

Exact sampling draws uniform indices into a cached enumeration.  The
approximate engine runs heat-bath Glauber dynamics on proper 3-colorings
of Q_d and lifts each state (re-rooted so vertex 0 has color 0) to a
height function.  Rotating colors is a bijection, so uniform colorings
push forward to uniform members of F; mixing itself is not guaranteed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy import stats as _scipy_stats

from .config import DEFAULT, Config
from .counting import BACKTRACK_MAX_D, iter_height_values
from .cube import Cube
from .errors import BudgetExceeded, PreconditionError
from .homomorphism import (
    HeightFunction,
    ThreeColoring,
    constant_nbhd_set,
    is_mostly_constant,
    lift_coloring,
    range_size,
)

MCMC_MAX_D = 8
EXACT_EDGE_MAX_D = 4


@lru_cache(maxsize=None)
def _table(d: int) -> np.ndarray:
    rows = list(iter_height_values(d))
    arr = np.array(rows, dtype=np.int8)
    arr.setflags(write=False)
    return arr


def enumeration_table(d: int) -> np.ndarray:
    """All of F as a read-only (|F|, 2^d) int8 array in backtracking order."""
    if d > BACKTRACK_MAX_D:
        raise BudgetExceeded(f"enumeration limited to d <= {BACKTRACK_MAX_D}", required=d)
    return _table(d)


def enumerate_F(d: int) -> List[HeightFunction]:
    return [HeightFunction._trusted(d, tuple(int(x) for x in row)) for row in enumeration_table(d)]


def make_rng(seed: int, stream: int = 0) -> np.random.Generator:
    """Counter-based Philox generator keyed by (seed, stream)."""
    ss = np.random.SeedSequence(seed, spawn_key=(stream,))
    return np.random.Generator(np.random.Philox(ss))


@dataclass(frozen=True)
class SampleConfig:
    d: int
    seed: int = 0
    count: int = 1000
    engine: str = "exact"
    burn_in: int = 200
    thin: int = 2
    stream: int = 0

    def __post_init__(self):
        if self.engine not in ("exact", "mcmc"):
            raise PreconditionError(f"unknown engine {self.engine!r}")
        if self.count < 0:
            raise PreconditionError("count must be non-negative")
        if not 0 <= self.seed < 1 << 64:
            raise PreconditionError("seed must be a 64-bit unsigned integer")


def sample_indices(cfg: SampleConfig) -> np.ndarray:
    if cfg.engine != "exact":
        raise PreconditionError("index sampling needs the exact engine")
    n = len(enumeration_table(cfg.d))
    return make_rng(cfg.seed, cfg.stream).integers(0, n, size=cfg.count)


def sample_uniform(cfg: SampleConfig) -> List[HeightFunction]:
    if cfg.count == 0:
        return []
    table = enumeration_table(cfg.d)
    return [HeightFunction._trusted(cfg.d, tuple(int(x) for x in table[i]))
            for i in sample_indices(cfg)]


# -- mcmc ---------------------------------------------------------------------


@dataclass
class McmcResult:
    samples: List[HeightFunction]
    approximate: bool = True
    diagnostics: Dict[str, float] = field(default_factory=dict)


def mcmc_sample(cfg: SampleConfig) -> McmcResult:
    """Heat-bath chain on 3-colorings; one sweep updates every vertex once in random order."""
    d = cfg.d
    if cfg.engine != "mcmc":
        raise PreconditionError("mcmc_sample needs engine='mcmc'")
    if d < 1 or d > MCMC_MAX_D:
        raise BudgetExceeded(f"mcmc limited to 1 <= d <= {MCMC_MAX_D}", required=d)
    if cfg.thin <= 0:
        raise PreconditionError("thin must be at least one sweep between samples")
    if cfg.burn_in < 0:
        raise PreconditionError("burn_in must be non-negative")
    rng = make_rng(cfg.seed, cfg.stream)
    n = 1 << d
    nbrs = [[v ^ (1 << i) for i in range(d)] for v in range(n)]
    # parity coloring (0 on E, 1 on O) is proper
    col = [bin(v).count("1") & 1 for v in range(n)]

    def sweep():
        order = rng.permutation(n)
        draws = rng.random(n)
        for v, u in zip(order.tolist(), draws.tolist()):
            used = {col[w] for w in nbrs[v]}
            free = [c for c in (0, 1, 2) if c not in used]
            col[v] = free[int(u * len(free))]

    for _ in range(cfg.burn_in):
        sweep()
    samples: List[HeightFunction] = []
    for _ in range(cfg.count):
        for _ in range(cfg.thin):
            sweep()
        shift = col[0]
        chi = ThreeColoring(d, tuple((c - shift) % 3 for c in col))
        samples.append(lift_coloring(chi))
    return McmcResult(samples, True, mcmc_diagnostics(samples))


def mcmc_diagnostics(samples: Sequence[HeightFunction]) -> Dict[str, float]:
    """Drift of the mean range size between the first and second half."""
    if len(samples) < 2:
        return {"n": float(len(samples))}
    r = np.array([range_size(f.values) for f in samples], dtype=float)
    half = len(r) // 2
    a, b = r[:half], r[half:]
    se = math.sqrt(a.var(ddof=1) / len(a) + b.var(ddof=1) / len(b)) if half > 1 else float("nan")
    return {
        "n": float(len(r)),
        "mean_range": float(r.mean()),
        "first_half_mean": float(a.mean()),
        "second_half_mean": float(b.mean()),
        "drift": float(b.mean() - a.mean()),
        "drift_se": se,
    }


# -- statistics -----------------------------------------------------------------


@dataclass
class StatReport:
    d: int
    engine: str
    n: int
    range_freq: Dict[int, Fraction]
    range_se: Dict[int, float]
    p_above_5: Fraction
    exact: bool
    extra: Dict[str, object] = field(default_factory=dict)


def _empirical(d: int, ranges: Sequence[int], engine: str) -> StatReport:
    n = len(ranges)
    counts: Dict[int, int] = {}
    for r in ranges:
        counts[r] = counts.get(r, 0) + 1
    freq = {r: Fraction(c, n) for r, c in sorted(counts.items())}
    se = {r: math.sqrt(float(p) * (1 - float(p)) / n) for r, p in freq.items()}
    above = sum((p for r, p in freq.items() if r > 5), Fraction(0))
    return StatReport(d, engine, n, freq, se, above, False)


def range_statistics(d: int, engine: str = "exact", cfg: Optional[SampleConfig] = None) -> StatReport:
    """P(|R| = i) for uniform f in F; exact from the enumeration, empirical otherwise."""
    if engine == "exact":
        table = enumeration_table(d)
        ranges = (table.max(axis=1).astype(int) - table.min(axis=1) + 1)
        vals, cnt = np.unique(ranges, return_counts=True)
        total = len(table)
        freq = {int(r): Fraction(int(c), total) for r, c in zip(vals, cnt)}
        above = sum((p for r, p in freq.items() if r > 5), Fraction(0))
        return StatReport(d, "exact", total, freq, {r: 0.0 for r in freq}, above, True)
    cfg = cfg or SampleConfig(d, engine=engine)
    if engine == "mcmc":
        res = mcmc_sample(cfg)
        rep = _empirical(d, [range_size(f.values) for f in res.samples], "mcmc")
        rep.extra["approximate"] = True
        rep.extra["diagnostics"] = res.diagnostics
        return rep
    raise PreconditionError(f"unknown engine {engine!r}")


def _edge_indicator(C: int, u: int, v: int) -> int:
    return (C >> u & 1) ^ (C >> v & 1)


def edge_C_statistic(d: int, edge: Optional[Tuple[int, int]] = None) -> Fraction:
    """Exact P(exactly one endpoint of the edge lies in C(f)) for uniform f in F."""
    if d > EXACT_EDGE_MAX_D:
        raise BudgetExceeded(f"exact edge statistic limited to d <= {EXACT_EDGE_MAX_D}", required=d)
    u, v = edge if edge is not None else (0, 1)
    cube = Cube(d)
    cube.check_vertex(u)
    cube.check_vertex(v)
    if cube.distance(u, v) != 1:
        raise PreconditionError("not an edge")
    hits = total = 0
    for f in enumerate_F(d):
        hits += _edge_indicator(constant_nbhd_set(f), u, v)
        total += 1
    return Fraction(hits, total)


def edge_C_all_edges(d: int) -> Dict[Tuple[int, int], Fraction]:
    """The statistic for every edge, from one pass over F."""
    if d > EXACT_EDGE_MAX_D:
        raise BudgetExceeded(f"exact edge statistic limited to d <= {EXACT_EDGE_MAX_D}", required=d)
    edges = [(v, v | 1 << i) for v in range(1 << d) for i in range(d) if not v >> i & 1]
    hits = dict.fromkeys(edges, 0)
    fs = enumerate_F(d)
    for f in fs:
        C = constant_nbhd_set(f)
        for e in edges:
            hits[e] += _edge_indicator(C, *e)
    return {e: Fraction(h, len(fs)) for e, h in hits.items()}


@dataclass(frozen=True)
class MostlyConstant:
    even: Fraction
    odd: Fraction
    both: Fraction
    either: Fraction


def mostly_constant_fraction(d: int, cfg: Config = DEFAULT) -> MostlyConstant:
    if d > EXACT_EDGE_MAX_D:
        raise BudgetExceeded(f"exact mostly-constant fractions limited to d <= {EXACT_EDGE_MAX_D}",
                             required=d)
    tally = {"even-side": 0, "odd-side": 0, "both": 0, "neither": 0}
    fs = enumerate_F(d)
    for f in fs:
        tally[is_mostly_constant(f, cfg)] += 1
    n = len(fs)
    return MostlyConstant(
        even=Fraction(tally["even-side"] + tally["both"], n),
        odd=Fraction(tally["odd-side"] + tally["both"], n),
        both=Fraction(tally["both"], n),
        either=Fraction(n - tally["neither"], n),
    )


def chi_square_uniform(cfg: SampleConfig) -> Tuple[float, float]:
    """Chi-square statistic and p-value of exact samples against uniform on F."""
    n = len(enumeration_table(cfg.d))
    idx = sample_indices(cfg)
    observed = np.bincount(idx, minlength=n)
    res = _scipy_stats.chisquare(observed)
    return float(res.statistic), float(res.pvalue)
