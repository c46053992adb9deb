"""Height functions on Q_d and their encodings.

A height function is a labeling f: V -> Z with |f(u) - f(v)| = 1 on every
edge.  Besides validation and basic statistics this module holds the three
bijections used throughout the package:

* rank functions on the Boolean lattice, f(A) = 2 g(A) - |A|;
* proper 3-colorings with chi(0) = 0, chi = f mod 3;
* level chains, which encode a height function that is 0 on most of the
  even side by its nonzero support A, a sign per 2-component of A, the
  nested sets C_{2i} = {u even : |f(u)| >= 2i} and one binary choice per
  free odd vertex.
"""

from __future__ import annotations

from collections import Counter, deque
from dataclasses import dataclass, field
from itertools import product
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from .config import DEFAULT, Config
from .cube import Cube, iter_bits, iter_submasks, popcount
from .errors import DimensionMismatch, InvalidHeightFunction, PreconditionError


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    violations: Tuple[Tuple[int, int], ...] = ()


def validate(d: int, values: Sequence[int], limit: int = 10) -> ValidationReport:
    """Check the unit-step edge constraint, reporting up to `limit` bad edges."""
    n = 1 << d
    if len(values) != n:
        raise DimensionMismatch(f"expected {n} values for Q_{d}, got {len(values)}")
    bad = []
    for v in range(n):
        fv = values[v]
        for i in range(d):
            w = v | (1 << i)
            if w != v and abs(values[w] - fv) != 1:
                bad.append((v, w))
                if len(bad) >= limit:
                    return ValidationReport(False, tuple(bad))
    return ValidationReport(not bad, tuple(bad))


@dataclass(frozen=True)
class HeightFunction:
    """Integer labeling of Q_d, stored in vertex-index order."""

    d: int
    values: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(int(x) for x in self.values))
        report = validate(self.d, self.values)
        if not report.ok:
            raise InvalidHeightFunction(f"edge constraint violated at {list(report.violations)}")

    @classmethod
    def _trusted(cls, d: int, values: Tuple[int, ...]) -> "HeightFunction":
        # skips validation; only for values produced by the enumerators
        obj = object.__new__(cls)
        object.__setattr__(obj, "d", d)
        object.__setattr__(obj, "values", values)
        return obj

    @property
    def normalized(self) -> bool:
        return self.values[0] == 0

    def __getitem__(self, v: int) -> int:
        return self.values[v]

    def __len__(self):
        return len(self.values)

    def shifted(self, c: int) -> "HeightFunction":
        return HeightFunction._trusted(self.d, tuple(x + c for x in self.values))

    def to_array(self) -> List[int]:
        return list(self.values)

    @classmethod
    def from_array(cls, d: int, values: Sequence[int]) -> "HeightFunction":
        return cls(d, tuple(values))


@dataclass(frozen=True)
class RankFunction:
    """g: 2^[d] -> N indexed by subset bitmask, g(empty) = 0 and unit monotone steps."""

    d: int
    values: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(int(x) for x in self.values))
        n = 1 << self.d
        if len(self.values) != n:
            raise DimensionMismatch(f"expected {n} values, got {len(self.values)}")
        if self.values[0] != 0:
            raise PreconditionError("rank function must vanish on the empty set")
        for A in range(n):
            for x in range(self.d):
                if not A >> x & 1:
                    step = self.values[A | (1 << x)] - self.values[A]
                    if step not in (0, 1):
                        raise PreconditionError(
                            f"rank step {step} between subsets {A:#x} and {A | (1 << x):#x}"
                        )

    def to_array(self) -> List[int]:
        return list(self.values)


@dataclass(frozen=True)
class ThreeColoring:
    d: int
    colors: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "colors", tuple(int(x) for x in self.colors))
        n = 1 << self.d
        if len(self.colors) != n:
            raise DimensionMismatch(f"expected {n} colors, got {len(self.colors)}")
        if any(c not in (0, 1, 2) for c in self.colors):
            raise PreconditionError("colors must lie in {0, 1, 2}")
        for v in range(n):
            for i in range(self.d):
                w = v | (1 << i)
                if w != v and self.colors[v] == self.colors[w]:
                    raise PreconditionError(f"improper coloring on edge ({v}, {w})")

    def to_array(self) -> List[int]:
        return list(self.colors)


# -- basic statistics ------------------------------------------------------


def range_of(f: HeightFunction) -> List[int]:
    """R(f), sorted."""
    return sorted(set(f.values))


def range_size(values: Sequence[int]) -> int:
    # R(f) is an integer interval for any height function on a connected graph
    return max(values) - min(values) + 1


def constant_nbhd_set(f: HeightFunction) -> int:
    """C(f): vertices whose neighbors all carry the same value."""
    d, vals = f.d, f.values
    out = 0
    for v in range(1 << d):
        first = vals[v ^ 1]
        if all(vals[v ^ (1 << i)] == first for i in range(1, d)):
            out |= 1 << v
    return out


def two_step_component(f: HeightFunction, u: int) -> int:
    """K_u(f): vertices reachable from u inside C(f) by steps of length exactly 2."""
    cube = Cube(f.d)
    cube.check_vertex(u)
    C = constant_nbhd_set(f)
    if not C >> u & 1:
        return 0
    comp, frontier = 1 << u, [u]
    while frontier:
        nxt = []
        for v in frontier:
            for i in range(f.d):
                for j in range(i + 1, f.d):
                    w = v ^ (1 << i) ^ (1 << j)
                    if C >> w & 1 and not comp >> w & 1:
                        comp |= 1 << w
                        nxt.append(w)
        frontier = nxt
    return comp


# -- rank functions ---------------------------------------------------------


def from_rank_function(g: RankFunction) -> HeightFunction:
    return HeightFunction(g.d, tuple(2 * g.values[A] - popcount(A) for A in range(1 << g.d)))


def to_rank_function(f: HeightFunction) -> RankFunction:
    if not f.normalized:
        raise PreconditionError("to_rank_function needs a normalized height function")
    vals = []
    for A, x in enumerate(f.values):
        twice = x + popcount(A)
        if twice % 2:
            # impossible for a valid normalized f
            raise AssertionError(f"parity defect at vertex {A}")
        vals.append(twice // 2)
    return RankFunction(f.d, tuple(vals))


# -- 3-colorings ------------------------------------------------------------


def to_coloring(f: HeightFunction) -> ThreeColoring:
    if not f.normalized:
        raise PreconditionError("to_coloring needs a normalized height function")
    return ThreeColoring(f.d, tuple(x % 3 for x in f.values))


def lift_coloring(chi: ThreeColoring) -> HeightFunction:
    """Unique height function with f(0) = 0 and f = chi (mod 3).

    Breadth-first from vertex 0; across an edge the height rises by one iff
    the color rises by one mod 3.  Every edge is re-checked at the end by
    the HeightFunction constructor, which is what makes the lift well defined.
    """
    if chi.colors[0] != 0:
        raise PreconditionError("lift_coloring needs chi(0) = 0")
    d, col = chi.d, chi.colors
    vals: List[Optional[int]] = [None] * (1 << d)
    vals[0] = 0
    queue = deque([0])
    while queue:
        v = queue.popleft()
        for i in range(d):
            w = v ^ (1 << i)
            if vals[w] is None:
                vals[w] = vals[v] + (1 if (col[w] - col[v]) % 3 == 1 else -1)
                queue.append(w)
    f = HeightFunction(d, tuple(vals))
    if any(x % 3 != c for x, c in zip(f.values, col)):
        raise AssertionError("lift does not reduce to the coloring")
    return f


# -- mostly constant --------------------------------------------------------


def _deviating_size(values: Sequence[int], side: int) -> int:
    vals = [values[v] for v in iter_bits(side)]
    return len(vals) - Counter(vals).most_common(1)[0][1]


def is_mostly_constant(f: HeightFunction, cfg: Config = DEFAULT) -> str:
    """'even-side', 'odd-side', 'both' or 'neither'.

    A side is mostly constant when, for its most common value c, the set
    of vertices on that side where f differs from c is small.
    """
    cube = Cube(f.d)
    even = cfg.is_small(_deviating_size(f.values, cube.even), f.d)
    odd = cfg.is_small(_deviating_size(f.values, cube.odd), f.d)
    if even and odd:
        return "both"
    if even:
        return "even-side"
    if odd:
        return "odd-side"
    return "neither"


# -- the functions that are mostly 0 on the even side -----------------------


def max_even_height(d: int) -> int:
    """2 * floor(d/2), the largest |f| on an even vertex when f vanishes somewhere on E."""
    return 2 * (d // 2)


def fe_support(f: HeightFunction) -> int:
    """A = E minus the zero set of f."""
    cube = Cube(f.d)
    A = 0
    for u in iter_bits(cube.even):
        if f.values[u] != 0:
            A |= 1 << u
    return A


def in_fe(f: HeightFunction, cfg: Config = DEFAULT) -> bool:
    """Membership in F^E: the nonzero support on E is small.

    Even heights above 2*floor(d/2) are only possible when f has no zero on
    E at all; such functions are excluded (see iter_fe_functions).
    """
    cube = Cube(f.d)
    if any(f.values[u] % 2 for u in iter_bits(cube.even)):
        return False
    cap = max_even_height(f.d)
    if any(abs(f.values[u]) > cap for u in iter_bits(cube.even)):
        return False
    return cfg.is_small(popcount(fe_support(f)), f.d)


def _odd_options(values, v: int, d: int) -> Tuple[int, ...]:
    lo = hi = values[v ^ 1]
    for i in range(1, d):
        x = values[v ^ (1 << i)]
        if x < lo:
            lo = x
        elif x > hi:
            hi = x
    if hi == lo:
        return (lo - 1, lo + 1)
    if hi - lo == 2:
        return (lo + 1,)
    return ()


def iter_fe_functions(cube: Cube, A: int) -> Iterator[HeightFunction]:
    """Every f with f = 0 exactly on E minus A, by direct search.

    Even values are drawn from +-2, ..., +-2*floor(d/2) on A, pruning on the
    pairwise distance-2 window constraint; odd values are then filled in
    with every admissible choice.  Nothing here knows about components,
    signs or level chains, so it serves as an independent oracle for the
    chain encoding.
    """
    for vals in _fe_even_assignments(cube, A):
        opts = [(v, _odd_options(vals, v, cube.d)) for v in iter_bits(cube.odd)]
        if any(not o for _, o in opts):
            continue
        odd_vs = [v for v, _ in opts]
        for choice in product(*(o for _, o in opts)):
            for v, x in zip(odd_vs, choice):
                vals[v] = x
            yield HeightFunction._trusted(cube.d, tuple(vals))


def count_fe_functions(cube: Cube, A: int) -> int:
    """|F^E(A)| by the same direct search, without materializing functions."""
    total = 0
    for vals in _fe_even_assignments(cube, A):
        prod = 1
        for v in iter_bits(cube.odd):
            k = len(_odd_options(vals, v, cube.d))
            if not k:
                prod = 0
                break
            prod *= k
        total += prod
    return total


def _fe_even_assignments(cube: Cube, A: int) -> Iterator[List[int]]:
    cube.check(A)
    if A & cube.odd:
        raise PreconditionError("support must lie in the even side")
    if cube.d < 2:
        raise PreconditionError("F^E(A) enumeration needs d >= 2")
    cap = max_even_height(cube.d)
    levels = [s * m for m in range(2, cap + 1, 2) for s in (1, -1)]
    evens = list(iter_bits(cube.even))
    near = {u: [w for w in evens if w < u and popcount(u ^ w) == 2] for u in evens}
    vals = [0] * cube.n

    def rec(k):
        if k == len(evens):
            yield vals
            return
        u = evens[k]
        options = levels if A >> u & 1 else (0,)
        for x in options:
            if all(abs(x - vals[w]) <= 2 for w in near[u]):
                vals[u] = x
                yield from rec(k + 1)
        vals[u] = 0

    yield from rec(0)


# -- level chains -----------------------------------------------------------


@dataclass(frozen=True)
class LevelChain:
    """Encoding of a member of F^E(A).

    signs: one of +1/-1 per 2-component of A (components ordered by least
        member).
    chain: (C_2, C_4, ..., C_{2 floor(d/2)}) with C_2 = A.
    odd_choices: sorted (vertex, +1/-1) pairs for the free odd vertices.  A
        vertex outside N(A) takes the choice as its value; a vertex of
        B(C_{2i}) minus N(C_{2i+2}) takes magnitude 2i + choice.
    """

    d: int
    A: int
    signs: Tuple[int, ...]
    chain: Tuple[int, ...]
    odd_choices: Tuple[Tuple[int, int], ...] = field(default=())


def chain_levels(d: int) -> int:
    return d // 2


def chain_violation(cube: Cube, chain: Sequence[int]) -> Optional[Tuple[int, int]]:
    """First (level i, vertex) breaking N(C_{2i+2}) within B(C_{2i}), or None.

    Nesting failures are reported the same way, with the offending member
    of C_{2i+2} that is missing from C_{2i}.
    """
    padded = list(chain) + [0]
    for i in range(1, len(padded)):
        cur, nxt = padded[i - 1], padded[i]
        if nxt & ~cur:
            return i, next(iter_bits(nxt & ~cur))
        bad = cube.neighborhood(nxt) & ~cube.interior(cur)
        if bad:
            return i, next(iter_bits(bad))
    return None


def free_odd_vertices(cube: Cube, chain: Sequence[int]) -> List[Tuple[int, int]]:
    """(vertex, base magnitude) for every odd vertex with a binary choice."""
    A = chain[0] if chain else 0
    out = [(v, 0) for v in iter_bits(cube.odd & ~cube.neighborhood(A))]
    padded = list(chain) + [0]
    for i in range(1, len(padded)):
        free = cube.interior(padded[i - 1]) & ~cube.neighborhood(padded[i])
        out.extend((v, 2 * i) for v in iter_bits(free))
    out.sort()
    return out


def chain_compose(lc: LevelChain) -> HeightFunction:
    cube = Cube(lc.d)
    if lc.d < 2:
        raise PreconditionError("level chains need d >= 2")
    chain = list(lc.chain)
    if len(chain) != chain_levels(lc.d):
        raise PreconditionError(f"chain must have {chain_levels(lc.d)} levels, got {len(chain)}")
    if chain[0] != lc.A or lc.A & cube.odd:
        raise PreconditionError("chain must start at the even set A")
    bad = chain_violation(cube, chain)
    if bad is not None:
        i, v = bad
        raise PreconditionError(f"illegitimate chain at level i={i}, vertex {cube.fmt(v)}")
    comps = cube.k_components(lc.A, 2)
    if len(lc.signs) != len(comps) or any(s not in (1, -1) for s in lc.signs):
        raise PreconditionError(f"need one sign per 2-component ({len(comps)})")
    free = free_odd_vertices(cube, chain)
    choices = dict(lc.odd_choices)
    if sorted(choices) != [v for v, _ in free] or any(c not in (1, -1) for c in choices.values()):
        raise PreconditionError("odd choices must cover exactly the free odd vertices with +-1")

    sign_of = {}
    for comp, s in zip(comps, lc.signs):
        for u in iter_bits(comp):
            sign_of[u] = s
    vals = [0] * cube.n
    for u in iter_bits(lc.A):
        depth = sum(1 for C in chain if C >> u & 1)
        vals[u] = sign_of[u] * 2 * depth
    for v in iter_bits(cube.odd):
        nb = [v ^ (1 << i) for i in range(cube.d)]
        mags = [abs(vals[w]) for w in nb]
        lo, hi = min(mags), max(mags)
        if hi == 0:
            vals[v] = choices[v]
            continue
        s = next(sign_of[w] for w in nb if w in sign_of)
        if hi == lo:
            vals[v] = s * (lo + choices[v])
        else:
            vals[v] = s * (lo + 1)
    return HeightFunction(lc.d, tuple(vals))


def chain_decompose(f: HeightFunction, cfg: Config = DEFAULT) -> LevelChain:
    cube = Cube(f.d)
    if f.d < 2:
        raise PreconditionError("level chains need d >= 2")
    if not in_fe(f, cfg):
        raise PreconditionError("f is not in F^E (support not small or heights out of range)")
    A = fe_support(f)
    signs = []
    for comp in cube.k_components(A, 2):
        comp_signs = {1 if f.values[u] > 0 else -1 for u in iter_bits(comp)}
        if len(comp_signs) != 1:
            raise AssertionError("sign changes inside a 2-component")
        signs.append(comp_signs.pop())
    chain = []
    for i in range(1, chain_levels(f.d) + 1):
        C = 0
        for u in iter_bits(A):
            if abs(f.values[u]) >= 2 * i:
                C |= 1 << u
        chain.append(C)
    choices = []
    for v, base in free_odd_vertices(cube, chain):
        choices.append((v, f.values[v] if base == 0 else abs(f.values[v]) - base))
    return LevelChain(f.d, A, tuple(signs), tuple(chain), tuple(choices))


def iter_legit_chains(cube: Cube, A: int) -> Iterator[Tuple[int, ...]]:
    """All legitimate chains starting at A.

    C_{2i+2} may be any subset of the even vertices whose neighborhood lies
    in B(C_{2i}); that set is B(B(C_{2i})).
    """
    levels = chain_levels(cube.d)

    def rec(prefix):
        if len(prefix) == levels:
            yield tuple(prefix)
            return
        room = cube.interior(cube.interior(prefix[-1])) & cube.even
        for nxt in iter_submasks(room):
            yield from rec(prefix + [nxt])

    yield from rec([A])


def iter_level_chains(cube: Cube, A: int) -> Iterator[LevelChain]:
    """Every legitimate LevelChain with support A (signs x chains x odd choices)."""
    ncomp = cube.component_count(A)
    for chain in iter_legit_chains(cube, A):
        free = [v for v, _ in free_odd_vertices(cube, chain)]
        for signs in product((1, -1), repeat=ncomp):
            for bits in product((1, -1), repeat=len(free)):
                yield LevelChain(cube.d, A, signs, chain, tuple(zip(free, bits)))
