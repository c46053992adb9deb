"""Container approximations for 2-linked even sets.

For A inside E write G = N(A), B = B(A) and H = N(B).  A covering
approximation is a pair of small covers (F', P') of A inside G and of B
inside H.  The two-step algorithm turns it into an approximating
quadruple (F, S, P, Q): F inner approximation of G, S outer approximation
of A, and likewise (P, Q) for (H, B).  The reconstruction procedure then
lists every A that a quadruple could have come from.

Square-root thresholds are compared in integers: t >= sqrt(d) iff
t*t >= d, and t > d - sqrt(d) iff (d - t)**2 < d.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations
from typing import Dict, Iterator, List, NamedTuple, Optional, Tuple

from .config import DEFAULT, Config
from .cube import Cube, iter_bits, popcount
from .errors import BudgetExceeded, PreconditionError


def at_least_sqrt(t: int, d: int) -> bool:
    return t >= 0 and t * t >= d


def above_d_minus_sqrt(t: int, d: int) -> bool:
    gap = d - t
    return gap <= 0 or gap * gap < d


def _degrees(cube: Cube, X: int, C: int) -> Dict[int, int]:
    return {v: cube.degree_into(v, C) for v in iter_bits(X)}


class ClassKey(NamedTuple):
    a: int
    g: int
    b: int
    h: int


def class_key(cube: Cube, A: int) -> ClassKey:
    G = cube.neighborhood(A)
    B = cube.interior(A)
    H = cube.neighborhood(B)
    return ClassKey(popcount(A), popcount(G), popcount(B), popcount(H))


# -- covers --------------------------------------------------------------------


@dataclass(frozen=True)
class CoverResult:
    cover: int
    min_degree: int
    max_degree: int
    bound: float

    @property
    def meets_bound(self) -> bool:
        return popcount(self.cover) <= self.bound + 1e-9


def greedy_cover(cube: Cube, X: int, Y: int) -> CoverResult:
    """Greedy Y' inside Y such that every x in X has a neighbor in Y'.

    Picks the y covering the most uncovered vertices, lowest index on ties.
    Also reports the degree hypotheses a = min_x d_Y(x), b = max_y d_X(y)
    and the guaranteed size (|Y|/a)(1 + ln b).
    """
    cube.check(X)
    cube.check(Y)
    if not X:
        return CoverResult(0, 0, 0, 0.0)
    if X & ~cube.neighborhood(Y):
        raise PreconditionError("some vertex of X has no neighbor in Y")
    a = min(_degrees(cube, X, Y).values())
    ydeg = _degrees(cube, Y, X)
    b = max(ydeg.values())
    bound = (popcount(Y) / a) * (1 + math.log(b)) if b > 0 else 0.0
    uncovered, cover = X, 0
    candidates = [y for y in iter_bits(Y) if ydeg[y]]
    while uncovered:
        best, best_gain = -1, 0
        for y in candidates:
            gain = cube.degree_into(y, uncovered)
            if gain > best_gain:
                best, best_gain = y, gain
        cover |= 1 << best
        uncovered &= ~cube.neighborhood(1 << best)
    return CoverResult(cover, a, b, bound)


@dataclass(frozen=True)
class CoverPair:
    F_prime: int
    P_prime: int
    F_result: CoverResult
    P_result: CoverResult


def _require_nice_input(cube: Cube, A: int):
    cube.check(A)
    if A & cube.odd:
        raise PreconditionError("A must be a subset of the even side")
    if popcount(A) < 2 or not cube.is_klinked(A, 2):
        raise PreconditionError("A must be 2-linked with at least 2 vertices")


def covering_approximation(cube: Cube, A: int) -> CoverPair:
    _require_nice_input(cube, A)
    G = cube.neighborhood(A)
    B = cube.interior(A)
    H = cube.neighborhood(B)
    Fr = greedy_cover(cube, A, G)
    Pr = greedy_cover(cube, B, H)
    return CoverPair(Fr.cover, Pr.cover, Fr, Pr)


# -- the two-step algorithm -----------------------------------------------------


@dataclass(frozen=True)
class StepTrace:
    step1_iterations: int
    step2_iterations: int
    step1_budget: int  # |G minus the initial F'|
    step2_budget: int  # |S'' minus A| at the start of step 2


def approx_step(cube: Cube, A: int, F_prime: int, S_prime: int,
                side: Optional[int] = None) -> Tuple[int, int, StepTrace]:
    """One stage of the approximation algorithm: (F', S') -> (F, S).

    `side` is the parity class containing A (needed when A is empty); the
    outer approximation S lives there and F in the opposite class.  The
    linear order is ascending vertex index.
    """
    d = cube.d
    if side is None:
        side = cube.side_of(A)
        if side is None:
            raise PreconditionError("pass side explicitly for an empty or mixed subject")
    other = cube.other_side(side)
    if A & ~side:
        raise PreconditionError("subject set must lie in one parity class")
    G = cube.neighborhood(A)
    if F_prime & ~G:
        raise PreconditionError("F' must lie inside N(A)")
    if A & ~S_prime or S_prime & ~side:
        raise PreconditionError("S' must contain A and lie in A's parity class")

    F = F_prime
    it1 = 0
    while True:
        rest = G & ~F
        pick = next((u for u in iter_bits(A) if at_least_sqrt(cube.degree_into(u, rest), d)), None)
        if pick is None:
            break
        F |= cube.neighborhood(1 << pick)
        it1 += 1
    F2 = F
    S = S_prime
    for u in iter_bits(S_prime):
        if at_least_sqrt(cube.degree_into(u, other & ~F2), d):
            S &= ~(1 << u)
    budget2 = popcount(S & ~A)
    it2 = 0
    outside = other & ~G
    while True:
        pick = next((w for w in iter_bits(outside) if at_least_sqrt(cube.degree_into(w, S), d)), None)
        if pick is None:
            break
        S &= ~cube.neighborhood(1 << pick)
        it2 += 1
    F_out = F2
    for w in iter_bits(other):
        if at_least_sqrt(cube.degree_into(w, S), d):
            F_out |= 1 << w
    trace = StepTrace(it1, it2, popcount(G & ~F_prime), budget2)
    return F_out, S, trace


def iterations_within_bound(trace: StepTrace, d: int) -> bool:
    """it * sqrt(d) <= budget for both steps, compared as it^2 d <= budget^2."""
    return (trace.step1_iterations ** 2 * d <= trace.step1_budget ** 2
            and trace.step2_iterations ** 2 * d <= trace.step2_budget ** 2)


@dataclass(frozen=True)
class ApproxQuadruple:
    F: int
    S: int
    P: int
    Q: int


@dataclass(frozen=True)
class QuadrupleResult:
    quad: ApproxQuadruple
    cover: CoverPair
    stage1: StepTrace
    stage2: StepTrace


def approximating_quadruple(cube: Cube, A: int) -> QuadrupleResult:
    """Stage 1 on (F', E) for A, stage 2 on (P', O) for B = B(A) with parities swapped."""
    _require_nice_input(cube, A)
    cp = covering_approximation(cube, A)
    F, S, t1 = approx_step(cube, A, cp.F_prime, cube.even, side=cube.even)
    B = cube.interior(A)
    P, Q, t2 = approx_step(cube, B, cp.P_prime, cube.odd, side=cube.odd)
    return QuadrupleResult(ApproxQuadruple(F, S, P, Q), cp, t1, t2)


def exact_quadruple(cube: Cube, A: int) -> ApproxQuadruple:
    B = cube.interior(A)
    return ApproxQuadruple(cube.neighborhood(A), A, cube.neighborhood(B), B)


@dataclass(frozen=True)
class QuadCheck:
    quad1: bool
    quad2: bool
    quad3: bool
    quad4: bool
    quad5: bool
    quad6: bool
    size_S: bool
    size_union: bool

    @property
    def all_pass(self) -> bool:
        return all(getattr(self, f) for f in self.__dataclass_fields__)

    def failed(self) -> List[str]:
        return [f for f in self.__dataclass_fields__ if not getattr(self, f)]


def _sqrt_le(lhs: int, rhs: int, d: int) -> bool:
    """lhs * sqrt(d) <= rhs for integers lhs, rhs >= 0."""
    if lhs <= 0:
        return True
    return lhs * lhs * d <= rhs * rhs


def validate_quadruple(cube: Cube, A: int, q: ApproxQuadruple) -> QuadCheck:
    """Conditions quad1-quad6 plus the two explicit size inequalities.

    size_S:     |S| <= |F| + |(G - F) u (S - A)| / sqrt(d)
    size_union: |(G - F) u (S - A)| <= 2 g d / (d - sqrt(d))
    """
    d = cube.d
    G = cube.neighborhood(A)
    B = cube.interior(A)
    H = cube.neighborhood(B)
    E, O = cube.even, cube.odd
    q1 = not (q.F & ~G) and not (A & ~q.S)
    q2 = all(above_d_minus_sqrt(cube.degree_into(u, q.F), d) for u in iter_bits(q.S))
    q3 = all(above_d_minus_sqrt(cube.degree_into(v, E & ~q.S), d) for v in iter_bits(O & ~q.F))
    q4 = not (q.P & ~H) and not (B & ~q.Q)
    q5 = all(above_d_minus_sqrt(cube.degree_into(u, q.P), d) for u in iter_bits(q.Q))
    q6 = all(above_d_minus_sqrt(cube.degree_into(v, O & ~q.Q), d) for v in iter_bits(E & ~q.P))
    X = popcount(G & ~q.F) + popcount(q.S & ~A)
    g = popcount(G)
    size_S = _sqrt_le(popcount(q.S) - popcount(q.F), X, d)
    # X (d - sqrt d) <= 2 g d  <=>  X d - 2 g d <= X sqrt d
    size_union = d > 1 and _sqrt_le(X * d - 2 * g * d, X, d)
    return QuadCheck(q1, q2, q3, q4, q5, q6, size_S, size_union)


# -- classes H(a, g, b, h) ----------------------------------------------------------


def class_enumerate(cube: Cube, key: ClassKey, cfg: Config = DEFAULT) -> Iterator[int]:
    """All 2-linked even A with (|A|, |N(A)|, |B(A)|, |N(B(A))|) equal to key."""
    cube.require_set_level("class enumeration")
    if cube.d > 5:
        raise BudgetExceeded("class enumeration is exhaustive only for d <= 5", required=cube.d)
    if key.b > key.g or key.h > key.a or key.a < 1 or key.a > cube.M:
        return
    for A in cube.klinked_sets(2, key.a, cube.even):
        if class_key(cube, A) == key:
            yield A


# -- reconstruction ------------------------------------------------------------------


def _subsets_of_size(mask: int, k: int) -> Iterator[int]:
    if k < 0:
        return
    for pick in combinations(list(iter_bits(mask)), k):
        out = 0
        for v in pick:
            out |= 1 << v
        yield out


@dataclass(frozen=True)
class Branch:
    Q_tight: bool
    S_tight: bool


def classify_branch(cube: Cube, q: ApproxQuadruple, key: ClassKey, gamma: float) -> Branch:
    logd = math.log2(cube.d) if cube.d > 1 else 1.0
    q_tight = popcount(q.Q) < key.b + gamma * key.h / logd
    s_tight = popcount(q.S) < key.g - gamma * key.g / (4 * logd)
    return Branch(q_tight, s_tight)


def reconstruct_candidates(cube: Cube, q: ApproxQuadruple, key: ClassKey,
                           cfg: Config = DEFAULT, budget: int = 1 << 22) -> Iterator[int]:
    """Every A the procedure can output from q, each once.

    D is chosen first: N(B) for each b-subset B of Q when Q is tight, P when
    Q is slack.  If S is tight the rest of A is a subset of S - D; if S is
    slack, G is completed from N(S) - F first and the rest of A is a subset
    of [A] - D, where [A] = {u even : N(u) inside G}.  Cardinalities from
    the key (|D| = h when Q is tight, |G| = g, |A| = a) fix the sizes of
    the subsets chosen.
    """
    d = cube.d
    if q.F & ~cube.odd or q.S & ~cube.even or q.P & ~cube.even or q.Q & ~cube.odd:
        raise PreconditionError("malformed quadruple: parts on the wrong side")
    br = classify_branch(cube, q, key, cfg.gamma)
    if br.Q_tight:
        Ds = []
        seen = set()
        for B in _subsets_of_size(q.Q, key.b):
            D = cube.neighborhood(B)
            if popcount(D) == key.h and D not in seen:
                seen.add(D)
                Ds.append(D)
    else:
        Ds = [q.P]
    if br.S_tight:
        pools = [(D, q.S & ~D) for D in Ds]
    else:
        pools = []
        extra = cube.neighborhood(q.S) & ~q.F
        need = key.g - popcount(q.F)
        n_g = math.comb(popcount(extra), need) if need >= 0 else 0
        if n_g * max(len(Ds), 1) > budget:
            raise BudgetExceeded(f"{n_g} completions of G", required=n_g)
        for Y in _subsets_of_size(extra, need):
            closure = cube.interior(q.F | Y) & cube.even
            for D in Ds:
                pools.append((D, closure & ~D))
    emitted = set()
    for D, pool in pools:
        need = key.a - popcount(D)
        if need < 0 or D & ~cube.even:
            continue
        if math.comb(popcount(pool), need) > budget:
            raise BudgetExceeded("too many completions of A", required=math.comb(popcount(pool), need))
        for X in _subsets_of_size(pool, need):
            A = D | X
            if A not in emitted:
                emitted.add(A)
                yield A


def in_class(cube: Cube, A: int, key: ClassKey) -> bool:
    return cube.is_klinked(A, 2) and class_key(cube, A) == key


# -- sweeps ----------------------------------------------------------------------------


@dataclass(frozen=True)
class SweepRecord:
    A: int
    key: ClassKey
    sizes: Tuple[int, int, int, int]
    check: QuadCheck
    exact_check: QuadCheck
    covers_meet_bound: bool
    iterations_ok: bool
    F_prime_4linked: bool


def sweep_record(cube: Cube, A: int) -> SweepRecord:
    res = approximating_quadruple(cube, A)
    q = res.quad
    cp = res.cover
    return SweepRecord(
        A=A,
        key=class_key(cube, A),
        sizes=(popcount(q.F), popcount(q.S), popcount(q.P), popcount(q.Q)),
        check=validate_quadruple(cube, A, q),
        exact_check=validate_quadruple(cube, A, exact_quadruple(cube, A)),
        covers_meet_bound=cp.F_result.meets_bound and cp.P_result.meets_bound,
        iterations_ok=iterations_within_bound(res.stage1, cube.d)
        and iterations_within_bound(res.stage2, cube.d),
        F_prime_4linked=cube.is_klinked(cp.F_prime, 4),
    )


def iter_sweep_subjects(cube: Cube, max_size: Optional[int] = None) -> Iterator[int]:
    """Every 2-linked even set with at least 2 vertices (up to max_size)."""
    top = cube.M if max_size is None else min(max_size, cube.M)
    for n in range(2, top + 1):
        yield from cube.klinked_sets(2, n, cube.even)


def sweep(cube: Cube, max_size: Optional[int] = None) -> Iterator[SweepRecord]:
    for A in iter_sweep_subjects(cube, max_size):
        yield sweep_record(cube, A)
