from collections import Counter

import pytest
from hypothesis import given, settings, strategies as st

import oracles as o
from cubehom.config import Config
from cubehom.cube import Cube, iter_bits, iter_submasks, popcount
from cubehom.errors import DimensionMismatch, InvalidHeightFunction, PreconditionError
from cubehom.homomorphism import (
    HeightFunction,
    LevelChain,
    RankFunction,
    ThreeColoring,
    chain_compose,
    chain_decompose,
    chain_violation,
    constant_nbhd_set,
    count_fe_functions,
    fe_support,
    from_rank_function,
    in_fe,
    is_mostly_constant,
    iter_fe_functions,
    iter_level_chains,
    lift_coloring,
    range_of,
    to_coloring,
    to_rank_function,
    two_step_component,
    validate,
)
from cubehom.sampling import enumerate_F

F_TUPLES = {d: sorted(o.all_height_tuples(d)) for d in (1, 2, 3, 4)}


def member(d):
    return st.sampled_from(F_TUPLES[d]).map(lambda t: HeightFunction(d, t))


# -- validation -----------------------------------------------------------------


def test_validate_examples():
    assert validate(2, (0, 1, 1, 2)).ok
    assert validate(2, (0, 1, 1, 0)).ok
    rep = validate(2, (0, 0, 1, 2))
    assert not rep.ok and rep.violations[0] == (0, 1)


def test_validate_length_mismatch():
    with pytest.raises(DimensionMismatch):
        validate(3, (0, 1))


def test_constructor_rejects_bad_values():
    with pytest.raises(InvalidHeightFunction):
        HeightFunction(2, (0, 0, 1, 2))


def test_validate_reports_at_most_limit():
    rep = validate(4, (0,) * 16, limit=10)
    assert len(rep.violations) == 10


# -- range and C(f) ----------------------------------------------------------------


@pytest.mark.parametrize("vals,expected", [((0, 1, 1, 0), [0, 1]), ((0, 1, 1, 2), [0, 1, 2]),
                                           ((0, -1, -1, -2), [-2, -1, 0])])
def test_range_examples(vals, expected):
    assert range_of(HeightFunction(2, vals)) == expected


def test_constant_nbhd_examples():
    c = Cube(2)
    assert constant_nbhd_set(HeightFunction(2, (0, 1, 1, 0))) == c.full
    assert c.labels(constant_nbhd_set(HeightFunction(2, (0, 1, 1, 2)))) == ["00", "11"]
    assert constant_nbhd_set(HeightFunction(1, (0, 1))) == 0b11


@pytest.mark.parametrize("d", [1, 2, 3, 4])
def test_constant_nbhd_matches_oracle(d):
    for t in F_TUPLES[d]:
        C = constant_nbhd_set(HeightFunction(d, t))
        assert set(iter_bits(C)) == o.constant_nbhd(d, t)


@settings(max_examples=100, deadline=None)
@given(member(4), st.integers(-5, 5))
def test_constant_nbhd_invariant_under_shift(f, c):
    assert constant_nbhd_set(f.shifted(c)) == constant_nbhd_set(f)


def test_two_step_component_examples():
    c = Cube(2)
    f = HeightFunction(2, (0, 1, 1, 0))
    assert c.labels(two_step_component(f, 0)) == ["00", "11"]
    g = HeightFunction(2, (0, 1, 1, 2))
    assert two_step_component(g, 1) == 0
    assert c.labels(two_step_component(g, 0)) == ["00", "11"]


@settings(max_examples=100, deadline=None)
@given(member(4), st.integers(0, 15))
def test_two_step_component_stays_in_C_and_parity(f, u):
    K = two_step_component(f, u)
    C = constant_nbhd_set(f)
    assert not K & ~C
    assert all(popcount(v) % 2 == popcount(u) % 2 for v in iter_bits(K))


# -- structural invariants of F ----------------------------------------------------------


@pytest.mark.parametrize("d", [1, 2, 3, 4])
def test_values_have_vertex_parity_and_interval_range(d):
    for t in F_TUPLES[d]:
        assert all((x - popcount(v)) % 2 == 0 for v, x in enumerate(t))
        r = sorted(set(t))
        assert len(r) >= 2 and r == list(range(r[0], r[-1] + 1))


@pytest.mark.parametrize("d", [1, 2, 3, 4])
def test_backtracking_enumeration_matches_oracle(d):
    assert sorted(f.values for f in enumerate_F(d)) == F_TUPLES[d]


# -- rank functions ----------------------------------------------------------------


def test_rank_function_examples():
    zero = RankFunction(2, (0, 0, 0, 0))
    assert from_rank_function(zero).values == (0, -1, -1, -2)
    full = RankFunction(2, (0, 1, 1, 2))
    assert from_rank_function(full).values == (0, 1, 1, 2)


def test_rank_function_rejects_bad_steps():
    with pytest.raises(PreconditionError):
        RankFunction(2, (0, 2, 1, 2))
    with pytest.raises(PreconditionError):
        RankFunction(2, (1, 1, 1, 2))


@pytest.mark.parametrize("d", [1, 2, 3, 4])
def test_rank_round_trip_all(d):
    for t in F_TUPLES[d]:
        f = HeightFunction(d, t)
        g = to_rank_function(f)
        assert from_rank_function(g) == f


def test_to_rank_needs_normalized():
    with pytest.raises(PreconditionError):
        to_rank_function(HeightFunction(1, (1, 0)))


@pytest.mark.parametrize("d", [1, 2, 3, 4])
def test_rank_function_count_matches_independent_oracle(d):
    assert o.rank_function_count(d) == len(F_TUPLES[d])


# -- colorings -----------------------------------------------------------------------


def test_coloring_examples():
    assert to_coloring(HeightFunction(2, (0, 1, 1, 2))).colors == (0, 1, 1, 2)
    assert to_coloring(HeightFunction(2, (0, -1, -1, -2))).colors == (0, 2, 2, 1)


def test_coloring_rejections():
    with pytest.raises(PreconditionError):
        ThreeColoring(2, (0, 0, 1, 2))
    with pytest.raises(PreconditionError):
        lift_coloring(ThreeColoring(2, (1, 0, 0, 1)))
    with pytest.raises(PreconditionError):
        ThreeColoring(1, (0, 3))


@pytest.mark.parametrize("d", [1, 2, 3, 4])
def test_coloring_round_trip_all(d):
    for t in F_TUPLES[d]:
        f = HeightFunction(d, t)
        assert lift_coloring(to_coloring(f)) == f


@pytest.mark.parametrize("d", [1, 2, 3])
def test_total_colorings_are_three_times_F(d):
    assert o.proper_colorings(d) == 3 * len(F_TUPLES[d])


@settings(max_examples=100, deadline=None)
@given(member(4))
def test_negation_is_a_symmetry(f):
    neg = HeightFunction(4, tuple(-x for x in f.values))
    assert lift_coloring(to_coloring(neg)) == neg
    assert len(range_of(neg)) == len(range_of(f))


# -- F^E and level chains ------------------------------------------------------------------


def fe_oracle(d, A):
    """F^E(A) for A a proper subset of E, by shifting every member of F."""
    c = Cube(d)
    out = set()
    rest = c.even & ~A
    z = next(iter_bits(rest))
    for t in F_TUPLES[d]:
        g = tuple(x - t[z] for x in t)
        if all(g[u] == 0 for u in iter_bits(rest)) and all(g[u] != 0 for u in iter_bits(A)):
            out.add(g)
    return out


@pytest.mark.parametrize("d", [2, 3, 4])
def test_fe_search_matches_shift_oracle(d):
    c = Cube(d)
    for A in iter_submasks(c.even):
        if A == c.even:
            continue
        ours = {f.values for f in iter_fe_functions(c, A)}
        assert ours == fe_oracle(d, A)
        assert count_fe_functions(c, A) == len(ours)


@pytest.mark.parametrize("d", [2, 3, 4])
def test_chains_enumerate_fe_exactly_once(d):
    c = Cube(d)
    for A in iter_submasks(c.even):
        composed = [chain_compose(lc).values for lc in iter_level_chains(c, A)]
        assert len(composed) == len(set(composed))
        assert set(composed) == {f.values for f in iter_fe_functions(c, A)}


@pytest.mark.parametrize("d", [2, 3, 4])
def test_chain_round_trip(d):
    c = Cube(d)
    for A in iter_submasks(c.even):
        for lc in iter_level_chains(c, A):
            f = chain_compose(lc)
            assert chain_decompose(f) == lc
            assert fe_support(f) == A and in_fe(f)


def test_chain_example_predominant_zero():
    c = Cube(3)
    chains = list(iter_level_chains(c, 0))
    assert len(chains) == 16
    assert all(chain_compose(lc).values[0] == 0 for lc in chains)


def test_chain_example_single_vertex_d3():
    c = Cube(3)
    fs = [chain_compose(lc) for lc in iter_level_chains(c, c.vset(["000"]))]
    assert len(fs) == 4
    plus = [f for f in fs if f.values[0] == 2]
    assert len(plus) == 2
    assert all(f.values[v] == 1 for f in plus for v in c.vertex_neighbors(0))


def test_chain_example_d2():
    c = Cube(2)
    fs = {chain_compose(lc).values[0] for lc in iter_level_chains(c, c.vset(["00"]))}
    assert fs == {2, -2}


def test_compose_rejects_illegitimate_chain():
    c = Cube(4)
    A = c.vset(["0000", "0011"])
    bad = LevelChain(4, A, (1,), (A, A), ())
    assert chain_violation(c, bad.chain) is not None
    with pytest.raises(PreconditionError, match="level i="):
        chain_compose(bad)


def test_decompose_rejects_outside_fe():
    odd_on_even = HeightFunction(2, (1, 2, 2, 3))
    with pytest.raises(PreconditionError):
        chain_decompose(odd_on_even)
    c = Cube(4)
    two = c.vset(["0000", "1111"])
    f = next(iter_fe_functions(c, two))
    assert in_fe(f)
    with pytest.raises(PreconditionError):
        chain_decompose(f, Config(alpha=1.1))


# -- mostly constant --------------------------------------------------------------------------


def test_mostly_constant_degenerate_d2():
    assert {is_mostly_constant(HeightFunction(2, t)) for t in F_TUPLES[2]} == {"both"}


def test_mostly_constant_zero_on_even():
    f = HeightFunction(4, tuple(0 if popcount(v) % 2 == 0 else 1 for v in range(16)))
    assert is_mostly_constant(f) in ("even-side", "both")


def test_mostly_constant_small_alpha():
    cfg = Config(alpha=1.1)
    tally = Counter(is_mostly_constant(HeightFunction(4, t), cfg) for t in F_TUPLES[4])
    assert tally["neither"] > 0
