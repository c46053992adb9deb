"""Invariant suites shared by the command line and the acceptance tests."""

from __future__ import annotations

import random
from itertools import combinations
from dataclasses import dataclass
from typing import Callable, Dict, Iterable, List, Optional

from . import approximation as ap
from . import weights as w
from .config import DEFAULT, Config
from .counting import count_brute, count_by_range, count_dp, count_rank_functions
from .cube import Cube, iter_submasks, popcount
from .dyadic import DyadicSum
from .errors import BudgetExceeded, PreconditionError
from .homomorphism import (
    HeightFunction,
    chain_compose,
    chain_decompose,
    count_fe_functions,
    fe_support,
    from_rank_function,
    in_fe,
    iter_level_chains,
    lift_coloring,
    to_coloring,
    to_rank_function,
)
from .sampling import SampleConfig, enumerate_F, sample_uniform


@dataclass
class Assertion:
    name: str
    passed: bool
    checked: int
    counterexample: Optional[str] = None

    def as_dict(self) -> Dict[str, object]:
        return {"name": self.name, "passed": self.passed, "checked": self.checked,
                "counterexample": self.counterexample}


class _Tally:
    """Accumulates one assertion over many cases, keeping the first failure."""

    def __init__(self, name: str):
        self.name, self.n, self.bad = name, 0, None

    def check(self, ok: bool, describe: Callable[[], str]):
        self.n += 1
        if not ok and self.bad is None:
            self.bad = describe()

    def result(self) -> Assertion:
        return Assertion(self.name, self.bad is None, self.n, self.bad)


def _sets(cube: Cube, A: int) -> str:
    return "{" + ",".join(cube.labels(A)) + "}"


def _functions(d: int, seed: int, exhaustive_max_d: int = 3, n: int = 10_000) -> Iterable[HeightFunction]:
    if d <= exhaustive_max_d:
        return enumerate_F(d)
    return sample_uniform(SampleConfig(d, seed=seed, count=n))


# -- suites ---------------------------------------------------------------------


def suite_bijection(d: int, cfg: Config = DEFAULT, seed: int = 0, n: int = 10_000) -> List[Assertion]:
    rank = _Tally("rank round trip")
    color = _Tally("coloring round trip")
    for f in _functions(d, seed, n=n):
        rank.check(from_rank_function(to_rank_function(f)) == f, lambda: str(f.values))
        color.check(lift_coloring(to_coloring(f)) == f, lambda: str(f.values))
    out = [rank.result(), color.result()]
    if d <= 4:
        total = _Tally("engines agree")
        engines = {"brute": count_brute(d), "dp": count_dp(d, cfg.memory_budget),
                   "rank": count_rank_functions(d), "by-range": count_by_range(d).total}
        total.check(len(set(engines.values())) == 1, lambda: str(engines))
        out.append(total.result())
    return out


def suite_chains(d: int, cfg: Config = DEFAULT, seed: int = 0) -> List[Assertion]:
    if d > 4:
        raise BudgetExceeded("chain suite is exhaustive and limited to d <= 4", required=d)
    cube = Cube(d)
    trip = _Tally("compose then decompose")
    member = _Tally("composed function lies in F^E(A)")
    count = _Tally("chain count equals direct search")
    for A in iter_submasks(cube.even):
        if not cfg.is_small(popcount(A), d):
            continue
        k = 0
        for lc in iter_level_chains(cube, A):
            f = chain_compose(lc)
            k += 1
            member.check(in_fe(f, cfg) and fe_support(f) == A, lambda: _sets(cube, A))
            trip.check(chain_decompose(f, cfg) == lc, lambda: f"{_sets(cube, A)} {f.values}")
        direct = count_fe_functions(cube, A)
        count.check(k == direct, lambda: f"{_sets(cube, A)}: {k} chains vs {direct}")
    return [trip.result(), member.result(), count.result()]


def suite_sums(d: int, cfg: Config = DEFAULT, seed: int = 0, samples: int = 300) -> List[Assertion]:
    cube = Cube(d)
    if d <= 4:
        subjects = list(iter_submasks(cube.even))
    else:
        rng = random.Random(seed)
        subjects = [rng.getrandbits(cube.n) & cube.even for _ in range(samples)]
    subjects = [A for A in subjects if cfg.is_small(popcount(A), d)]
    fg = _Tally("g factorizes over 2-components")
    fh = _Tally("h factorizes over 2-components")
    hg = _Tally("h >= 2^c g")
    sparse = _Tally("g on sparse sets is 2^(-d|A|)")
    for A in subjects:
        fg.check(w.factorization_check(cube, A, "g", cfg), lambda: _sets(cube, A))
        fh.check(w.factorization_check(cube, A, "h", cfg), lambda: _sets(cube, A))
        g = w.g_weight(cube, A)
        hg.check(w.h_weight(cube, A, cfg) >= DyadicSum.pow2(cube.component_count(A)) * g,
                 lambda: _sets(cube, A))
        if cube.is_sparse(A):
            sparse.check(g == DyadicSum.pow2(-d * popcount(A)), lambda: _sets(cube, A))
    out = [fg.result(), fh.result(), hg.result(), sparse.result()]
    comp = _Tally("binomial companion identity")
    for c in (1, 2, 3):
        for D in (cube.even, cube.even & (cube.even - 1), 0):
            if popcount(D) <= w.EXHAUSTIVE_SUBSET_LIMIT:
                comp.check(w.sparse_companion_sum(cube, D, c) == w.companion(cube, popcount(D), c),
                           lambda: f"c={c} D={_sets(cube, D)}")
    out.append(comp.result())
    if d <= 4:
        fe = _Tally("2^M h(A) equals |F^E(A)|")
        for A in subjects:
            formula, direct = w.fe_count_check(cube, A, cfg)
            fe.check(formula == direct, lambda: f"{_sets(cube, A)}: {formula} vs {direct}")
        out.append(fe.result())
        tot = _Tally("2^M sum h equals |F^E|")
        a, b = w.fe_total_formula(cube, cfg), w.count_fe_total(cube, cfg)
        tot.check(a == b, lambda: f"{a} vs {b}")
        out.append(tot.result())
    if 2 <= d <= 5:
        ns = _Tally("nice sum engines agree")
        a, b = w.nice_sum(cube, cfg, "naive"), w.nice_sum(cube, cfg, "linked")
        ns.check(a == b, lambda: f"{a} vs {b}")
        out.append(ns.result())
    return out


def suite_isoperimetry(d: int, cfg: Config = DEFAULT, seed: int = 0, max_size: int = 3) -> List[Assertion]:
    cube = Cube(d)
    cube.require_set_level("isoperimetry suite")
    lb = _Tally(f"|N(A)| >= d|A| - 2|A|(|A|-1) for |A| <= {max_size}")
    for side in (cube.even, cube.odd):
        for n in range(1, max_size + 1):
            for A in _subsets_of_side(side, n):
                lb.check(w.iso_lower_bound_check(cube, A), lambda: _sets(cube, A))
    return [lb.result()]


def _subsets_of_side(side: int, n: int):
    verts = [v for v in range(side.bit_length()) if side >> v & 1]
    for pick in combinations(verts, n):
        m = 0
        for v in pick:
            m |= 1 << v
        yield m


def suite_kw(d: int, cfg: Config = DEFAULT, seed: int = 0) -> List[Assertion]:
    cube = Cube(d)
    t = _Tally("even Hamming ball witness exists")
    for A in iter_submasks(cube.even):
        t.check(w.kw_existence_check(cube, A) is not None, lambda: _sets(cube, A))
    return [t.result()]


def suite_approximation(d: int, cfg: Config = DEFAULT, seed: int = 0,
                        gammas=(0.05, 0.1, 0.3)) -> List[Assertion]:
    cube = Cube(d)
    names = ["quad1", "quad2", "quad3", "quad4", "quad5", "quad6", "size_S", "size_union"]
    quad = {k: _Tally(f"computed quadruple {k}") for k in names}
    exact = _Tally("exact quadruple validates")
    cover = _Tally("greedy covers meet the cover bound")
    iters = _Tally("step iterations within budget/sqrt(d)")
    linked = _Tally("F' is 4-linked")
    for r in ap.sweep(cube):
        for k in names:
            quad[k].check(getattr(r.check, k), lambda: _sets(cube, r.A))
        exact.check(r.exact_check.all_pass, lambda: _sets(cube, r.A))
        cover.check(r.covers_meet_bound, lambda: _sets(cube, r.A))
        iters.check(r.iterations_ok, lambda: _sets(cube, r.A))
        linked.check(r.F_prime_4linked, lambda: _sets(cube, r.A))
    out = [t.result() for t in quad.values()] + [exact.result(), cover.result(), iters.result(), linked.result()]
    if d <= 4:
        for gamma in gammas:
            g_cfg = Config(cfg.alpha, gamma, cfg.set_budget, cfg.memory_budget)
            t = _Tally(f"reconstruction contains A (gamma={gamma})")
            for A in ap.iter_sweep_subjects(cube):
                q = ap.approximating_quadruple(cube, A).quad
                t.check(A in set(ap.reconstruct_candidates(cube, q, ap.class_key(cube, A), g_cfg)),
                        lambda: _sets(cube, A))
            out.append(t.result())
    return out


SUITES: Dict[str, Callable[..., List[Assertion]]] = {
    "bijection": suite_bijection,
    "sums": suite_sums,
    "isoperimetry": suite_isoperimetry,
    "approximation": suite_approximation,
    "chains": suite_chains,
    "kw": suite_kw,
}


def run_suite(name: str, d: int, cfg: Config = DEFAULT, seed: int = 0) -> List[Assertion]:
    if name not in SUITES:
        raise PreconditionError(f"unknown suite {name!r}; choose from {sorted(SUITES)}")
    if d < 1:
        raise PreconditionError("d must be >= 1")
    return SUITES[name](d, cfg, seed)
