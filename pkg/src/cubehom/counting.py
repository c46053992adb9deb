"""Exact counts of F and F_i, and the explicit lower-bound families.

Four independent engines compute |F|:

* ``count_brute``: backtracking over proper 3-colorings with chi(0) = 0 in
  vertex-index order;
* ``count_dp``: frontier dynamic programming over 3-colorings along the
  weight-then-index vertex order (numpy tensors, one axis per live vertex);
* ``count_by_range``: backtracking over height functions in BFS order,
  tallying range sizes;
* ``count_rank_functions``: level-by-level backtracking over the Boolean
  lattice.
"""

from __future__ import annotations

import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import product
from typing import Dict, Iterator, List, Set, Tuple

import numpy as np

from .cube import Cube, iter_bits, popcount
from .errors import BudgetExceeded, PreconditionError
from .homomorphism import HeightFunction, range_size

BRUTE_MAX_D = 4
BACKTRACK_MAX_D = 5
RANK_MAX_D = 5


def bfs_order(d: int) -> List[int]:
    """Vertices by Hamming weight, ties by index."""
    return sorted(range(1 << d), key=lambda v: (popcount(v), v))


# -- height-function backtracking -------------------------------------------


def iter_height_values(d: int, max_d: int = BACKTRACK_MAX_D) -> Iterator[Tuple[int, ...]]:
    """Every normalized height function as a value tuple, in a fixed order.

    Vertices are visited in BFS order, so when v is reached all of its
    lower neighbors are labeled: if they agree on c, v takes c-1 or c+1; if
    they span {c-1, c+1}, v is forced to c; otherwise the branch dies.
    """
    if d < 1:
        raise PreconditionError("d must be >= 1")
    if d > max_d:
        raise BudgetExceeded(f"height backtracking limited to d <= {max_d}", required=d)
    n = 1 << d
    order = bfs_order(d)
    lower = [[v ^ (1 << i) for i in range(d) if v >> i & 1] for v in range(n)]
    vals = [0] * n

    def rec(k):
        if k == n:
            yield tuple(vals)
            return
        v = order[k]
        lo = hi = vals[lower[v][0]]
        for w in lower[v][1:]:
            x = vals[w]
            if x < lo:
                lo = x
            elif x > hi:
                hi = x
        if hi == lo:
            vals[v] = lo - 1
            yield from rec(k + 1)
            vals[v] = lo + 1
            yield from rec(k + 1)
        elif hi - lo == 2:
            vals[v] = lo + 1
            yield from rec(k + 1)

    yield from rec(1)


@dataclass
class RangeTable:
    d: int
    counts: Dict[int, int]
    total: int
    engine: str = "backtrack"
    wall_time: float = 0.0

    def le5(self) -> int:
        return sum(c for i, c in self.counts.items() if i <= 5)


def count_by_range(d: int) -> RangeTable:
    t0 = time.perf_counter()
    counts: Dict[int, int] = {}
    for vals in iter_height_values(d):
        r = range_size(vals)
        counts[r] = counts.get(r, 0) + 1
    counts = dict(sorted(counts.items()))
    return RangeTable(d, counts, sum(counts.values()), "backtrack", time.perf_counter() - t0)


# -- coloring engines ---------------------------------------------------------


def _brute_from(d: int, prefix: Tuple[int, ...]) -> int:
    n = 1 << d
    earlier = [[v ^ (1 << i) for i in range(d) if v >> i & 1] for v in range(n)]
    col = [0] * n
    for v, c in enumerate(prefix):
        col[v] = c
        if any(col[w] == c for w in earlier[v]):
            return 0
    start = len(prefix)
    count = 0

    def rec(v):
        nonlocal count
        if v == n:
            count += 1
            return
        for c in (0, 1, 2):
            for w in earlier[v]:
                if col[w] == c:
                    break
            else:
                col[v] = c
                rec(v + 1)

    rec(start)
    return count


def count_brute(d: int, jobs: int = 1, max_d: int = BRUTE_MAX_D) -> int:
    """|F| as the number of proper 3-colorings with chi(0) = 0.

    With jobs > 1 the colorings of vertices 1..k are split across worker
    processes and the partial counts added.
    """
    if d < 1:
        raise PreconditionError("d must be >= 1")
    if d > max_d:
        raise BudgetExceeded(f"brute force limited to d <= {max_d}", required=3 ** ((1 << d) - 1))
    if jobs <= 1 or d < 3:
        return _brute_from(d, (0,))
    k = min(4, (1 << d) - 1)
    prefixes = [(0,) + p for p in product((0, 1, 2), repeat=k)]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return sum(pool.map(_brute_from, [d] * len(prefixes), prefixes))


def count_proper_colorings(d: int) -> int:
    """All proper 3-colorings of Q_d, no root condition (small d only)."""
    if d > 3:
        raise BudgetExceeded("unrestricted coloring count limited to d <= 3", required=3 ** (1 << d))
    n = 1 << d
    edges = [(v, v | (1 << i)) for v in range(n) for i in range(d) if not v >> i & 1]
    return sum(
        1 for col in product((0, 1, 2), repeat=n) if all(col[u] != col[w] for u, w in edges)
    )


def frontier_width(d: int) -> int:
    """Largest number of live vertices in the DP along bfs_order."""
    order = bfs_order(d)
    pos = {v: i for i, v in enumerate(order)}
    last = {v: max(pos[v ^ (1 << i)] for i in range(d)) for v in order}
    live, width = set(), 0
    for step, v in enumerate(order):
        live.add(v)
        width = max(width, len(live))
        live = {w for w in live if last[w] > step}
    return width


def count_dp(d: int, memory_budget_mb: int = 1024) -> int:
    """|F| by frontier DP over proper 3-colorings with chi(0) = 0.

    The table has one axis of length 3 per live vertex (processed with an
    unprocessed neighbor).  A vertex enters as a new axis, colorings that
    clash with a live neighbor are zeroed, and vertices with no remaining
    unprocessed neighbors are summed out.
    """
    if d < 1:
        raise PreconditionError("d must be >= 1")
    width = frontier_width(d)
    states = 3 ** width
    big = 3 ** ((1 << d) - 1) >= 2 ** 63
    itemsize = 64 if big else 8
    if states * itemsize > memory_budget_mb * (1 << 20) or width > 60:
        raise BudgetExceeded(
            f"frontier DP needs {states} states (width {width}); budget is {memory_budget_mb} MB",
            required=states,
        )
    order = bfs_order(d)
    pos = {v: i for i, v in enumerate(order)}
    last = {v: max(pos[v ^ (1 << i)] for i in range(d)) for v in order}
    table = np.ones((), dtype=object if big else np.int64)
    axes: List[int] = []
    for step, v in enumerate(order):
        table = np.stack([table] * 3, axis=-1)
        axes.append(v)
        if step == 0:
            table[..., 1:] = 0
        nd = len(axes)
        new_color = np.arange(3).reshape((1,) * (nd - 1) + (3,))
        for j, w in enumerate(axes[:-1]):
            if popcount(v ^ w) == 1:
                shape = [1] * nd
                shape[j] = 3
                table = np.where(np.arange(3).reshape(shape) == new_color, 0, table)
        drop = tuple(j for j, w in enumerate(axes) if last[w] <= step)
        if drop:
            table = table.sum(axis=drop)
            axes = [w for j, w in enumerate(axes) if j not in drop]
    return int(table.sum())


def count_rank_functions(d: int, max_d: int = RANK_MAX_D) -> int:
    """Number of rank functions on 2^[d], by level-by-level backtracking.

    g(S) must satisfy g(S - x) <= g(S) <= g(S - x) + 1 for every x in S,
    so its admissible values form the interval
    [max_x g(S - x), min_x g(S - x) + 1].
    """
    if d < 1:
        raise PreconditionError("d must be >= 1")
    if d > max_d:
        raise BudgetExceeded(f"rank-function count limited to d <= {max_d}", required=d)
    subsets = sorted(range(1, 1 << d), key=lambda S: (popcount(S), S))
    below = {S: [S & ~(1 << x) for x in range(d) if S >> x & 1] for S in subsets}
    g = [0] * (1 << d)
    count = 0

    def rec(k):
        nonlocal count
        if k == len(subsets):
            count += 1
            return
        S = subsets[k]
        lows = [g[T] for T in below[S]]
        for val in range(max(lows), min(lows) + 2):
            g[S] = val
            rec(k + 1)

    rec(0)
    return count


# -- lower-bound families ----------------------------------------------------


def iter_sparse_sets(cube: Cube, k: int) -> Iterator[int]:
    """Even k-sets whose members are pairwise at distance > 2."""
    evens = list(iter_bits(cube.even))

    def rec(start, chosen, mask):
        if len(chosen) == k:
            yield mask
            return
        for i in range(start, len(evens)):
            u = evens[i]
            if all(popcount(u ^ w) > 2 for w in chosen):
                chosen.append(u)
                yield from rec(i + 1, chosen, mask | (1 << u))
                chosen.pop()

    yield from rec(0, [], 0)


def _check_family_input(cube: Cube, A: int, min_size: int):
    cube.check(A)
    if A & cube.odd:
        raise PreconditionError("family support must be even")
    if popcount(A) < min_size:
        raise PreconditionError(f"family support needs at least {min_size} vertices")
    if not cube.is_sparse(A):
        raise PreconditionError("family support must be sparse")


def _family(cube: Cube, A: int, sign_patterns) -> Set[HeightFunction]:
    members = list(iter_bits(A))
    nbhd = cube.neighborhood(A)
    free = list(iter_bits(cube.odd & ~nbhd))
    forced = list(iter_bits(nbhd))
    out = set()
    for signs in sign_patterns:
        vals = [0] * cube.n
        for u, s in zip(members, signs):
            vals[u] = 2 * s
        for v in forced:
            # sparse A: exactly one neighbor of v is in A
            w = next(v ^ (1 << i) for i in range(cube.d) if A >> (v ^ (1 << i)) & 1)
            vals[v] = vals[w] // 2
        for bits in product((1, -1), repeat=len(free)):
            for v, b in zip(free, bits):
                vals[v] = b
            out.add(HeightFunction(cube.d, tuple(vals)))
    return out


def build_family_5(cube: Cube, A: int) -> Set[HeightFunction]:
    """Values +-2 on A with both signs present, 0 elsewhere on E, +-1 freely off N(A)."""
    _check_family_input(cube, A, 2)
    k = popcount(A)
    patterns = [s for s in product((1, -1), repeat=k) if 1 in s and -1 in s]
    return _family(cube, A, patterns)


def build_family_4(cube: Cube, A: int) -> Set[HeightFunction]:
    """One common value +2 or -2 on A, 0 elsewhere on E, +-1 freely off N(A).

    The two members whose free odd values all share A's sign have range
    size 3, not 4; every other member has range [-2, 1] or [-1, 2].
    """
    _check_family_input(cube, A, 1)
    k = popcount(A)
    return _family(cube, A, [(1,) * k, (-1,) * k])


def family_5_size(cube: Cube, k: int) -> int:
    return (2 ** k - 2) * 2 ** (cube.M - cube.d * k)


def family_4_size(cube: Cube, k: int) -> int:
    return 2 ** (1 + cube.M - cube.d * k)


# -- reports -------------------------------------------------------------------

REFERENCE_CONSTANTS = {
    "F": 2 * math.e,
    "F3": 2.0,
    "F4": 4 * math.sqrt(math.e) - 4,
    "F5": 2 * math.e - 4 * math.sqrt(math.e) + 2,
}


@dataclass
class AsymptoticReport:
    d: int
    ratios: Dict[str, float]
    references: Dict[str, float] = field(default_factory=lambda: dict(REFERENCE_CONSTANTS))
    deviations: Dict[str, float] = field(default_factory=dict)
    le5_fraction: float = 0.0


def asymptotic_report(table: RangeTable) -> AsymptoticReport:
    scale = 2 ** (1 << (table.d - 1))
    ratios = {
        "F": table.total / scale,
        "F3": table.counts.get(3, 0) / scale,
        "F4": table.counts.get(4, 0) / scale,
        "F5": table.counts.get(5, 0) / scale,
    }
    dev = {k: ratios[k] - REFERENCE_CONSTANTS[k] for k in ratios}
    return AsymptoticReport(table.d, ratios, dict(REFERENCE_CONSTANTS), dev, table.le5() / table.total)
