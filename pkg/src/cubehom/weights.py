"""Exact weight sums over even sets and isoperimetric checks.

All weights are dyadic rationals and every identity is checked exactly.
The two weights are

    g(A) = 2^(-|N(A)| + |B(A)|)
    h(A) = 2^(c(A) - |N(A)| + |B(A)|) * sum over legitimate chains of
           prod_{i >= 2} 2^(-|N(C_2i)| + |B(C_2i)|)

and 2^M * h(A) counts the height functions vanishing exactly on E minus A.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Dict, Iterator, List, Optional, Tuple, Union

from .config import DEFAULT, Config
from .cube import DEFAULT_STREAM_BUDGET, Cube, iter_bits, iter_submasks, popcount
from .dyadic import ONE, ZERO, DyadicSum
from .errors import BudgetExceeded, PreconditionError
from .homomorphism import count_fe_functions, max_even_height

EXHAUSTIVE_SUBSET_LIMIT = 16

Weight = Union[str, Callable[[Cube, int], DyadicSum]]


@lru_cache(maxsize=None)
def _cube(d: int) -> Cube:
    return Cube(d)


def _require_even(cube: Cube, A: int):
    cube.check(A)
    if A & cube.odd:
        raise PreconditionError("weights are defined on subsets of the even side")


def _exp(cube: Cube, C: int) -> int:
    return -popcount(cube.neighborhood(C)) + popcount(cube.interior(C))


def g_weight(cube: Cube, A: int) -> DyadicSum:
    _require_even(cube, A)
    return DyadicSum.pow2(_exp(cube, A))


@lru_cache(maxsize=None)
def _chain_sum(d: int, C: int, levels_left: int) -> DyadicSum:
    if levels_left == 0:
        return ONE
    cube = _cube(d)
    room = cube.interior(cube.interior(C)) & cube.even
    total = ZERO
    for nxt in iter_submasks(room):
        total = total + DyadicSum.pow2(_exp(cube, nxt)) * _chain_sum(d, nxt, levels_left - 1)
    return total


def chain_sum(cube: Cube, A: int) -> DyadicSum:
    """Sum over legitimate C_4 >= ... >= C_{2 floor(d/2)} below A of the inner products."""
    _require_even(cube, A)
    return _chain_sum(cube.d, A, max(cube.d // 2 - 1, 0))


def h_weight(cube: Cube, A: int, cfg: Config = DEFAULT) -> DyadicSum:
    _require_even(cube, A)
    if not cfg.is_small(popcount(A), cube.d):
        raise PreconditionError(f"h_weight needs a small set (|A|={popcount(A)})")
    return DyadicSum.pow2(cube.component_count(A) + _exp(cube, A)) * chain_sum(cube, A)


def _weight_fn(weight: Weight, cfg: Config) -> Callable[[Cube, int], DyadicSum]:
    if weight == "g":
        return g_weight
    if weight == "h":
        return lambda cube, A: h_weight(cube, A, cfg)
    if callable(weight):
        return weight
    raise PreconditionError(f"unknown weight {weight!r}")


# -- sums over small sets ---------------------------------------------------


@dataclass(frozen=True)
class SmallSum:
    total: DyadicSum
    companion: DyadicSum
    difference: DyadicSum


def companion(cube: Cube, size: int, c: int) -> DyadicSum:
    """(1 + c 2^-d)^size, exactly."""
    return DyadicSum((cube.n + c) ** size, cube.d * size)


def sum_small(cube: Cube, D: int, weight: Weight = "g", cfg: Config = DEFAULT,
              c: Optional[int] = None) -> SmallSum:
    """Sum of weight(A) over small A inside D, next to (1 + c 2^-d)^|D|.

    c defaults to the singleton constant of the named weight (1 for g, 2 for h).
    """
    _require_even(cube, D)
    if popcount(D) > EXHAUSTIVE_SUBSET_LIMIT:
        raise BudgetExceeded(f"|D|={popcount(D)} exceeds {EXHAUSTIVE_SUBSET_LIMIT}", required=popcount(D))
    if c is None:
        c = {"g": 1, "h": 2}.get(weight) if isinstance(weight, str) else None
        if c is None:
            raise PreconditionError("pass c explicitly for a custom weight")
    fn = _weight_fn(weight, cfg)
    total = ZERO
    for A in iter_submasks(D):
        if cfg.is_small(popcount(A), cube.d):
            total = total + fn(cube, A)
    comp = companion(cube, popcount(D), c)
    return SmallSum(total, comp, total - comp)


def sparse_companion_sum(cube: Cube, D: int, c: int) -> DyadicSum:
    """Direct sum of c^|A| 2^(-d|A|) over every A inside D."""
    total = ZERO
    for A in iter_submasks(D):
        k = popcount(A)
        total = total + DyadicSum(c ** k, cube.d * k)
    return total


def factorization_check(cube: Cube, A: int, weight: Weight = "g", cfg: Config = DEFAULT) -> bool:
    """weight(A) equals the product of weight over the 2-components of A."""
    fn = _weight_fn(weight, cfg)
    prod = ONE
    for comp in cube.k_components(A, 2):
        prod = prod * fn(cube, comp)
    return fn(cube, A) == prod


# -- nice sets ---------------------------------------------------------------


def max_small_size(cube: Cube, cfg: Config) -> int:
    s = min(cube.M, math.ceil(cfg.alpha ** cube.d))
    while s > 0 and not cfg.is_small(s, cube.d):
        s -= 1
    return s


def iter_nice_sets(cube: Cube, cfg: Config = DEFAULT, engine: str = "naive") -> Iterator[int]:
    """Small, 2-linked even sets of size at least 2."""
    cube.require_set_level("nice-set enumeration")
    top = max_small_size(cube, cfg)
    if engine == "naive":
        if cube.M > EXHAUSTIVE_SUBSET_LIMIT:
            raise BudgetExceeded(f"naive engine needs M <= {EXHAUSTIVE_SUBSET_LIMIT}", required=1 << cube.M)
        for A in iter_submasks(cube.even):
            k = popcount(A)
            if 2 <= k <= top and cube.is_klinked(A, 2):
                yield A
    elif engine == "linked":
        # fail before enumerating anything if some size is out of budget
        for n in range(2, top + 1):
            est = cube.M * cube.klinked_estimate(2, n)
            if est > DEFAULT_STREAM_BUDGET:
                raise BudgetExceeded(f"about {est} 2-linked sets of size {n}", required=est)
        for n in range(2, top + 1):
            yield from cube.klinked_sets(2, n, cube.even)
    else:
        raise PreconditionError(f"unknown engine {engine!r}")


def nice_sum(cube: Cube, cfg: Config = DEFAULT, engine: str = "naive") -> DyadicSum:
    total = ZERO
    for A in iter_nice_sets(cube, cfg, engine):
        total = total + g_weight(cube, A)
    return total


def type_classify(d: int, A: int) -> str:
    k = popcount(A)
    if 2 * k < d:
        return "I"
    if k < d * d:
        return "II"
    return "III"


def typed_partial_sums(cube: Cube, cfg: Config = DEFAULT, engine: str = "naive") -> Dict[str, DyadicSum]:
    sums = {"I": ZERO, "II": ZERO, "III": ZERO}
    for A in iter_nice_sets(cube, cfg, engine):
        t = type_classify(cube.d, A)
        sums[t] = sums[t] + g_weight(cube, A)
    return sums


# -- counting F^E --------------------------------------------------------------


def fe_count_check(cube: Cube, A: int, cfg: Config = DEFAULT) -> Tuple[int, int]:
    """(2^M h(A), |F^E(A)| by direct search)."""
    formula = DyadicSum.pow2(cube.M) * h_weight(cube, A, cfg)
    if not formula.is_integer():
        raise AssertionError(f"2^M h(A) = {formula} is not an integer")
    if cube.d > 4:
        raise BudgetExceeded("direct F^E(A) search is limited to d <= 4", required=cube.d)
    return int(formula), count_fe_functions(cube, A)


def count_fe_total(cube: Cube, cfg: Config = DEFAULT) -> int:
    """|F^E| by one backtracking pass over even labelings, with no split by support.

    Even values range over 0, +-2, ..., +-2 floor(d/2); neighbors of a
    common odd vertex must lie within 2 of each other; the nonzero support
    must be small.  Odd vertices contribute 2 when their neighbors agree and
    1 when they span a window of width 2.
    """
    if cube.d > 4:
        raise BudgetExceeded("direct F^E search is limited to d <= 4", required=cube.d)
    cap = max_even_height(cube.d)
    values = [0] + [s * m for m in range(2, cap + 1, 2) for s in (1, -1)]
    evens = list(iter_bits(cube.even))
    near = {u: [w for w in evens if w < u and popcount(u ^ w) == 2] for u in evens}
    odd_nbrs = [(v, [v ^ (1 << i) for i in range(cube.d)]) for v in iter_bits(cube.odd)]
    vals = [0] * cube.n
    total = 0

    def rec(k, support):
        nonlocal total
        if k == len(evens):
            if not cfg.is_small(support, cube.d):
                return
            prod = 1
            for _, nb in odd_nbrs:
                xs = [vals[w] for w in nb]
                prod *= 2 if max(xs) == min(xs) else 1
            total += prod
            return
        u = evens[k]
        for x in values:
            if all(abs(x - vals[w]) <= 2 for w in near[u]):
                vals[u] = x
                rec(k + 1, support + (x != 0))
        vals[u] = 0

    rec(0, 0)
    return total


def fe_total_formula(cube: Cube, cfg: Config = DEFAULT) -> int:
    """2^M times the sum of h over small even sets."""
    total = ZERO
    for A in iter_submasks(cube.even):
        if cfg.is_small(popcount(A), cube.d):
            total = total + h_weight(cube, A, cfg)
    out = DyadicSum.pow2(cube.M) * total
    return int(out)


# -- isoperimetry --------------------------------------------------------------


def iso_ratio(cube: Cube, A: int) -> Fraction:
    """|A| / |N(A)| for a nonempty single-parity A."""
    if cube.side_of(cube.check(A)) is None:
        raise PreconditionError("iso_ratio needs a nonempty single-parity set")
    return Fraction(popcount(A), popcount(cube.neighborhood(A)))


@dataclass(frozen=True)
class IsoReport:
    d: int
    max_ratio: Fraction
    argmax: int
    max_size: int


def max_iso_ratio(cube: Cube, cfg: Config = DEFAULT) -> IsoReport:
    """Largest |A|/|N(A)| over small nonempty single-parity A (both sides)."""
    cube.require_set_level("iso sweep")
    if cube.M > EXHAUSTIVE_SUBSET_LIMIT:
        raise BudgetExceeded("iso sweep needs M <= 16", required=1 << cube.M)
    best, arg = Fraction(0), 0
    for side in (cube.even, cube.odd):
        for A in iter_submasks(side):
            if A and cfg.is_small(popcount(A), cube.d):
                r = iso_ratio(cube, A)
                if r > best:
                    best, arg = r, A
    return IsoReport(cube.d, best, arg, max_small_size(cube, cfg))


def iso_lower_bound(cube: Cube, A: int) -> int:
    k = popcount(A)
    return cube.d * k - 2 * k * (k - 1)


def iso_lower_bound_check(cube: Cube, A: int) -> bool:
    """|N(A)| >= d|A| - 2|A|(|A|-1).

    Holds for every single-parity A; for |A| > d/2 the right side is at
    most d and the check is weak but still evaluated.
    """
    if cube.side_of(cube.check(A)) is None:
        raise PreconditionError("iso_lower_bound_check needs a nonempty single-parity set")
    return popcount(cube.neighborhood(A)) >= iso_lower_bound(cube, A)


@lru_cache(maxsize=None)
def _ball_catalog(d: int, side_is_even: bool) -> Dict[int, Tuple[int, ...]]:
    cube = _cube(d)
    side = cube.even if side_is_even else cube.odd
    catalog: Dict[int, List[int]] = {}
    for size in range(cube.M + 1):
        seen, order = set(), []
        for center in range(cube.n):
            for ball in cube.hamming_balls(center, size, side):
                if ball not in seen:
                    seen.add(ball)
                    order.append(ball)
        catalog[size] = order
    return {k: tuple(v) for k, v in catalog.items()}


def kw_existence_check(cube: Cube, A: int, max_d: int = 5) -> Optional[int]:
    """A same-size even Hamming ball whose neighborhood is no larger than N(A).

    Centers of both parities and every completion of the outer layer are
    searched.  Returns A itself when A is already such a ball, None when no
    witness exists.
    """
    _require_even(cube, A)
    if cube.d > max_d:
        raise BudgetExceeded(f"ball search limited to d <= {max_d}", required=cube.d)
    balls = _ball_catalog(cube.d, True)[popcount(A)]
    if A in balls:
        return A
    target = popcount(cube.neighborhood(A))
    for ball in balls:
        if popcount(cube.neighborhood(ball)) <= target:
            return ball
    return None
