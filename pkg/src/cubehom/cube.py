"""Hamming cube topology on packed bitmasks.

A vertex of Q_d is an integer in [0, 2**d).  A vertex set is an int whose
bit v is set iff vertex v is a member, so union/intersection/difference are
the usual bitwise operators.  Neighborhood and interior are computed
word-parallel: flipping coordinate i permutes bit positions v <-> v ^ 2**i,
which is a block swap on the mask.
"""

from __future__ import annotations

import math
from itertools import combinations
from typing import Iterable, Iterator, List, Optional, Tuple

from .errors import BudgetExceeded, DimensionMismatch, PreconditionError

MAX_VERTEX_DIM = 24
DEFAULT_SET_BUDGET = 6
# enumerate_klinked refuses streams whose size estimate exceeds this
DEFAULT_STREAM_BUDGET = 1 << 24


def popcount(x: int) -> int:
    return x.bit_count()


def iter_bits(mask: int) -> Iterator[int]:
    """Yield the set bit positions of mask in ascending order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def iter_submasks(mask: int) -> Iterator[int]:
    """Yield every submask of mask, including 0 and mask itself."""
    sub = mask
    while True:
        yield sub
        if sub == 0:
            return
        sub = (sub - 1) & mask


def fuss_catalan(delta: int, n: int) -> int:
    """Number of n-vertex rooted subtrees of the infinite delta-branching tree."""
    return math.comb(delta * n, n) // ((delta - 1) * n + 1)


class Cube:
    """The d-dimensional Hamming cube.

    Vertex-level methods work up to d = 24; anything that enumerates
    subsets should check ``require_set_level`` first.
    """

    def __init__(self, d: int, set_budget: int = DEFAULT_SET_BUDGET):
        if not 1 <= d <= MAX_VERTEX_DIM:
            raise PreconditionError(f"dimension must be in [1, {MAX_VERTEX_DIM}], got {d}")
        self.d = d
        self.n = 1 << d
        self.M = 1 << (d - 1)
        self.set_budget = set_budget
        self.full = (1 << self.n) - 1
        # blocks of 2**i ones then 2**i zeros, repeated
        self._low = []
        for i in range(d):
            period = 1 << (i + 1)
            unit = (1 << (1 << i)) - 1
            self._low.append(unit * (self.full // ((1 << period) - 1)))
        even, odd = 1, 0
        for k in range(d):
            shift = 1 << k
            even, odd = even | (odd << shift), odd | (even << shift)
        self.even = even
        self.odd = odd
        self._link_adj = {}

    def __repr__(self):
        return f"Cube(d={self.d})"

    def __eq__(self, other):
        return isinstance(other, Cube) and other.d == self.d

    def __hash__(self):
        return hash(("Cube", self.d))

    # -- vertices ---------------------------------------------------------

    def check_vertex(self, v: int) -> int:
        if not 0 <= v < self.n:
            raise DimensionMismatch(f"vertex {v} is not a vertex of Q_{self.d}")
        return v

    def check(self, A: int) -> int:
        if A < 0 or A >> self.n:
            raise DimensionMismatch(f"set {A:#x} has members outside Q_{self.d}")
        return A

    def parity(self, v: int) -> int:
        return popcount(v) & 1

    def is_even(self, v: int) -> bool:
        return not popcount(v) & 1

    def vertex_neighbors(self, v: int) -> List[int]:
        self.check_vertex(v)
        return [v ^ (1 << i) for i in range(self.d)]

    def fmt(self, v: int) -> str:
        return format(v, f"0{self.d}b")

    def parse(self, s: str) -> int:
        if len(s) != self.d or set(s) - {"0", "1"}:
            raise DimensionMismatch(f"{s!r} is not a {self.d}-bit string")
        return int(s, 2)

    def vset(self, vertices: Iterable) -> int:
        """Build a mask from vertex indices or bit strings."""
        mask = 0
        for v in vertices:
            if isinstance(v, str):
                v = self.parse(v)
            mask |= 1 << self.check_vertex(v)
        return mask

    def members(self, A: int) -> List[int]:
        return list(iter_bits(self.check(A)))

    def labels(self, A: int) -> List[str]:
        return [self.fmt(v) for v in iter_bits(A)]

    def side_of(self, A: int) -> Optional[int]:
        """The parity class mask containing A, None if A is empty or mixed."""
        if A and not A & self.odd:
            return self.even
        if A and not A & self.even:
            return self.odd
        return None

    def other_side(self, side: int) -> int:
        return self.full ^ side

    def require_set_level(self, what: str = "set-level enumeration"):
        if self.d > self.set_budget:
            raise BudgetExceeded(
                f"{what} needs d <= {self.set_budget} (got d={self.d})", required=self.d
            )

    # -- word-parallel set operators -------------------------------------

    def flip(self, A: int, i: int) -> int:
        """Image of A under v -> v ^ 2**i."""
        s = 1 << i
        low = self._low[i]
        return ((A & low) << s) | ((A >> s) & low)

    def neighborhood(self, A: int) -> int:
        self.check(A)
        out = 0
        for i in range(self.d):
            out |= self.flip(A, i)
        return out

    def interior(self, A: int) -> int:
        """B(A) = {v : N(v) is a subset of A}."""
        self.check(A)
        out = self.full
        for i in range(self.d):
            out &= self.flip(A, i)
        return out

    def closure(self, A: int) -> int:
        """[A] = vertices of A's parity class whose neighborhood lies in N(A)."""
        side = self.side_of(A)
        if side is None:
            if A == 0:
                return 0
            raise PreconditionError("closure needs a single-parity set")
        return self.interior(self.neighborhood(A)) & side

    def degree_into(self, v: int, C: int) -> int:
        """d_C(v) = |N(v) & C|."""
        return sum((C >> (v ^ (1 << i))) & 1 for i in range(self.d))

    def ball(self, A: int, r: int) -> int:
        """All vertices within distance r of A."""
        out = A
        for _ in range(r):
            out |= self.neighborhood(out)
        return out

    def vertex_ball(self, v: int, r: int) -> int:
        return self.ball(1 << self.check_vertex(v), r)

    def sphere(self, v: int, r: int) -> int:
        """Vertices at distance exactly r from v."""
        self.check_vertex(v)
        out = 0
        for bits in combinations(range(self.d), r):
            w = v
            for b in bits:
                w ^= 1 << b
            out |= 1 << w
        return out

    def boundary_edges(self, A: int, C: Optional[int] = None) -> Tuple[int, List[Tuple[int, int]]]:
        """Edges with exactly one end in A, or (when C is given) one end in each of A, C."""
        self.check(A)
        if C is not None:
            self.check(C)
            if A & C:
                raise PreconditionError("boundary_edges(A, C) needs disjoint A and C")
        edges = []
        for u in iter_bits(A):
            for i in range(self.d):
                w = u ^ (1 << i)
                inside = (A >> w) & 1
                if C is None:
                    if not inside:
                        edges.append((min(u, w), max(u, w)))
                elif (C >> w) & 1:
                    edges.append((min(u, w), max(u, w)))
        edges.sort()
        return len(edges), edges

    # -- distances and linkage --------------------------------------------

    def distance(self, u: int, v: int) -> int:
        self.check_vertex(u)
        self.check_vertex(v)
        return popcount(u ^ v)

    def set_distance(self, A: int, C: int) -> int:
        self.check(A)
        self.check(C)
        if not A or not C:
            raise PreconditionError("set_distance needs nonempty sets")
        r, reach = 0, A
        while not reach & C:
            reach |= self.neighborhood(reach)
            r += 1
        return r

    def k_components(self, A: int, k: int) -> List[int]:
        """Maximal k-linked pieces of A, ordered by smallest member."""
        if k < 1:
            raise PreconditionError("k must be >= 1")
        self.check(A)
        comps = []
        rest = A
        while rest:
            comp = rest & -rest
            while True:
                grown = self.ball(comp, k) & A
                if grown == comp:
                    break
                comp = grown
            comps.append(comp)
            rest &= ~comp
        return comps

    def component_count(self, A: int) -> int:
        """c(A), the number of 2-components."""
        return len(self.k_components(A, 2))

    def is_klinked(self, A: int, k: int) -> bool:
        return len(self.k_components(A, k)) <= 1

    def is_sparse(self, A: int) -> bool:
        return all(popcount(c) == 1 for c in self.k_components(A, 2))

    # -- enumeration ------------------------------------------------------

    def linked_adjacency(self, k: int) -> List[int]:
        """For each vertex, the mask of same-parity vertices within distance k."""
        if k not in self._link_adj:
            adj = []
            for v in range(self.n):
                side = self.odd if self.parity(v) else self.even
                adj.append(self.vertex_ball(v, k) & side & ~(1 << v))
            self._link_adj[k] = adj
        return self._link_adj[k]

    def linked_degree(self, k: int) -> int:
        return sum(math.comb(self.d, j) for j in range(2, k + 1, 2))

    def klinked_estimate(self, k: int, n: int) -> int:
        """Upper bound on the number of k-linked n-sets through a fixed root."""
        delta = self.linked_degree(k)
        if delta == 0:
            return 1 if n == 1 else 0
        return min(fuss_catalan(delta, n), math.comb(self.M - 1, n - 1))

    def enumerate_klinked(self, k: int, n: int, root: int, *, min_root: bool = False,
                          budget: int = DEFAULT_STREAM_BUDGET) -> Iterator[int]:
        """Yield each k-linked n-subset of root's parity class containing root, once.

        Branching: take the lowest candidate v, then either include it
        (candidates grow by v's k-neighbors) or ban it for the rest of the
        subtree.  The two branches are disjoint, so there are no duplicates.
        With ``min_root`` only sets whose smallest member is root are produced,
        which lets a caller enumerate all k-linked sets by looping over roots.
        """
        if n < 1:
            raise PreconditionError("n must be >= 1")
        if k < 1:
            raise PreconditionError("k must be >= 1")
        self.check_vertex(root)
        self.require_set_level("enumerate_klinked")
        est = self.klinked_estimate(k, n)
        if est > budget:
            raise BudgetExceeded(
                f"about {est} {k}-linked sets of size {n}; budget is {budget}", required=est
            )
        adj = self.linked_adjacency(k)
        banned = ((1 << root) - 1) if min_root else 0
        start = 1 << root

        def grow(S, cand, banned, left):
            if left == 0:
                yield S
                return
            while cand:
                if popcount(cand) < left and not _can_reach(cand, S, banned, left):
                    return
                low = cand & -cand
                v = low.bit_length() - 1
                cand ^= low
                ext = (cand | adj[v]) & ~S & ~low & ~banned
                yield from grow(S | low, ext, banned, left - 1)
                banned |= low

        def _can_reach(cand, S, banned, left):
            # cheap pruning: can the remaining candidates and their reachable
            # region still supply `left` vertices?
            reach, frontier = 0, cand
            while frontier:
                reach |= frontier
                nxt = 0
                for v in iter_bits(frontier):
                    nxt |= adj[v]
                frontier = nxt & ~reach & ~S & ~banned
                if popcount(reach) >= left:
                    return True
            return popcount(reach) >= left

        yield from grow(start, adj[root] & ~banned, banned, n - 1)

    def klinked_sets(self, k: int, n: int, side: int, **kw) -> Iterator[int]:
        """All k-linked n-subsets of a parity class, each exactly once."""
        for root in iter_bits(side):
            yield from self.enumerate_klinked(k, n, root, min_root=True, **kw)

    def hamming_balls(self, center: int, size: int, side: int, mode: str = "exhaustive") -> Iterator[int]:
        """Single-parity Hamming balls of exactly `size` vertices centered at `center`.

        Inside a parity class the distance layers from center are
        alternate spheres.  A ball is all layers up to some radius plus a
        subset of the next layer; "exhaustive" yields every such subset,
        "greedy" only the lexicographically first.
        """
        self.check_vertex(center)
        if mode not in ("exhaustive", "greedy"):
            raise PreconditionError(f"unknown completion mode {mode!r}")
        if not 0 <= size <= self.M:
            raise PreconditionError(f"ball size must be in [0, {self.M}], got {size}")
        layers = []
        for r in range(self.d + 1):
            s = self.sphere(center, r) & side
            if s:
                layers.append(s)
        if size == 0:
            yield 0
            return
        base, j = 0, 0
        while j < len(layers) and popcount(base | layers[j]) <= size:
            base |= layers[j]
            j += 1
        need = size - popcount(base)
        if need == 0:
            yield base
            return
        nxt = sorted(iter_bits(layers[j]))
        for pick in combinations(nxt, need):
            extra = 0
            for v in pick:
                extra |= 1 << v
            yield base | extra
            if mode == "greedy":
                return

    def even_hamming_balls(self, center: int, size: int, mode: str = "exhaustive") -> Iterator[int]:
        return self.hamming_balls(center, size, self.even, mode)
