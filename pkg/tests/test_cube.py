import math
from itertools import combinations

import pytest
from hypothesis import given, settings, strategies as st

import oracles as o
from cubehom.config import Config
from cubehom.cube import Cube, fuss_catalan, iter_bits, iter_submasks, popcount
from cubehom.errors import BudgetExceeded, DimensionMismatch, PreconditionError


def sets_of(d):
    return st.integers(min_value=0, max_value=(1 << (1 << d)) - 1)


# -- construction --------------------------------------------------------


@pytest.mark.parametrize("d", range(1, 8))
def test_parity_classes_split_evenly(d):
    c = Cube(d)
    assert popcount(c.even) == popcount(c.odd) == c.M == 2 ** (d - 1)
    assert c.even | c.odd == c.full and not c.even & c.odd
    assert c.even == o.mask(o.even(d))


@pytest.mark.parametrize("d", [0, 25, -1])
def test_dimension_out_of_range(d):
    with pytest.raises(PreconditionError):
        Cube(d)


def test_vertex_checks():
    c = Cube(3)
    with pytest.raises(DimensionMismatch):
        c.check_vertex(8)
    with pytest.raises(DimensionMismatch):
        c.neighborhood(1 << 8)
    with pytest.raises(DimensionMismatch):
        c.parse("0101")
    assert c.vset(["011", 0]) == 0b1001


def test_vertex_level_operations_at_large_d():
    c = Cube(20)
    assert len(c.vertex_neighbors(12345)) == 20
    assert c.distance(0, (1 << 20) - 1) == 20


# -- neighborhood, interior, boundary ------------------------------------------


def test_neighborhood_examples():
    c = Cube(2)
    assert c.labels(c.neighborhood(c.vset(["00"]))) == ["01", "10"]
    assert c.labels(c.neighborhood(c.vset(["00", "11"]))) == ["01", "10"]
    assert c.neighborhood(0) == 0


def test_interior_examples():
    c = Cube(2)
    assert c.labels(c.interior(c.vset(["00", "11"]))) == ["01", "10"]
    for d in (2, 3, 5):
        cd = Cube(d)
        assert cd.interior(1 << 3 % cd.n) == 0
        assert cd.interior(cd.full) == cd.full


def test_boundary_edge_examples():
    c = Cube(2)
    assert c.boundary_edges(c.vset(["00"]))[0] == 2
    assert c.boundary_edges(c.vset(["00", "11"]), c.vset(["01", "10"]))[0] == 4
    with pytest.raises(PreconditionError):
        c.boundary_edges(1, 1)


@pytest.mark.parametrize("d", [1, 2, 3, 4])
def test_set_operators_match_oracle_exhaustively(d):
    c = Cube(d)
    limit = 1 << c.n if d <= 3 else 4096
    step = max(1, (1 << c.n) // limit)
    for A in range(0, 1 << c.n, step):
        S = o.unmask(d, A)
        assert c.neighborhood(A) == o.mask(o.N(S))
        assert c.interior(A) == o.mask(o.B(d, S))


@settings(max_examples=200, deadline=None)
@given(st.integers(1, 7).flatmap(lambda d: st.tuples(st.just(d), sets_of(d), sets_of(d))))
def test_neighborhood_is_a_union_homomorphism(args):
    d, A, C = args
    c = Cube(d)
    assert c.neighborhood(A | C) == c.neighborhood(A) | c.neighborhood(C)


@settings(max_examples=200, deadline=None)
@given(st.integers(1, 7).flatmap(lambda d: st.tuples(st.just(d), sets_of(d))))
def test_interior_complements_neighborhood(args):
    d, A = args
    c = Cube(d)
    # v in B(A) iff no neighbor of v lies outside A
    assert c.interior(A) == c.full & ~c.neighborhood(c.full & ~A)


@settings(max_examples=150, deadline=None)
@given(st.integers(1, 7).flatmap(lambda d: st.tuples(st.just(d), sets_of(d))))
def test_single_parity_neighborhood_switches_side(args):
    d, A = args
    c = Cube(d)
    for side in (c.even, c.odd):
        X = A & side
        if X:
            assert not c.neighborhood(X) & side


@settings(max_examples=150, deadline=None)
@given(st.integers(2, 7).flatmap(lambda d: st.tuples(st.just(d), sets_of(d))))
def test_boundary_count_is_degree_sum_minus_internal(args):
    d, A = args
    c = Cube(d)
    internal = sum(c.degree_into(v, A) for v in iter_bits(A))
    assert c.boundary_edges(A)[0] == d * popcount(A) - internal


def test_closure_contains_set():
    c = Cube(4)
    A = c.vset(["0000", "0011"])
    cl = c.closure(A)
    assert A & ~cl == 0 and not cl & c.odd
    assert c.neighborhood(cl) == c.neighborhood(A)


# -- distances and linkage ------------------------------------------------------


def test_distance_examples():
    c = Cube(4)
    assert c.distance(c.parse("0000"), c.parse("0011")) == 2
    assert c.set_distance(c.vset(["0000"]), c.vset(["1110", "0111"])) == 3
    with pytest.raises(PreconditionError):
        c.set_distance(0, 1)


@pytest.mark.parametrize("d,k", [(3, 2), (4, 2), (4, 3), (4, 1)])
def test_k_components_match_union_find(d, k):
    c = Cube(d)
    for A in range(0, 1 << c.n, 97):
        ours = sorted(sorted(c.labels(x)) for x in c.k_components(A, k))
        ref = sorted(sorted(x) for x in o.components(o.unmask(d, A), k))
        assert ours == ref


@settings(max_examples=150, deadline=None)
@given(st.integers(2, 6).flatmap(lambda d: st.tuples(st.just(d), sets_of(d), st.integers(1, 4))))
def test_k_components_partition(args):
    d, A, k = args
    c = Cube(d)
    comps = c.k_components(A, k)
    joined = 0
    for x in comps:
        assert not joined & x
        joined |= x
        assert c.is_klinked(x, k)
    assert joined == A


def test_sparse_examples():
    c = Cube(4)
    assert c.is_sparse(c.vset(["0000", "1111"]))
    assert not c.is_sparse(c.vset(["0000", "0011"]))


# -- enumeration -------------------------------------------------------------------


@pytest.mark.parametrize("d,k", [(3, 2), (4, 2), (4, 4), (5, 2)])
def test_klinked_sets_counts_match_brute_force(d, k):
    c = Cube(d)
    verts = sorted(o.even(d))
    top = min(c.M, 5 if d == 5 else c.M)
    for n in range(1, top + 1):
        ours = list(c.klinked_sets(k, n, c.even))
        assert len(ours) == len(set(ours))
        brute = sum(1 for pick in combinations(verts, n) if o.is_linked(pick, k))
        assert len(ours) == brute


def test_enumerate_klinked_root_and_size():
    c = Cube(4)
    for A in c.enumerate_klinked(2, 3, 0):
        assert A & 1 and popcount(A) == 3 and c.is_klinked(A, 2) and not A & c.odd


def test_enumerate_klinked_is_deterministic():
    c = Cube(4)
    assert list(c.enumerate_klinked(2, 4, 0)) == list(c.enumerate_klinked(2, 4, 0))


def test_enumerate_klinked_budget():
    c = Cube(6)
    with pytest.raises(BudgetExceeded) as err:
        list(c.enumerate_klinked(2, 20, 0, budget=1000))
    assert err.value.required > 1000


def test_set_level_budget():
    with pytest.raises(BudgetExceeded):
        list(Cube(7).enumerate_klinked(2, 2, 0))


def test_fuss_catalan_small_values():
    # Delta = 2 gives the Catalan numbers
    assert [fuss_catalan(2, n) for n in range(1, 7)] == [1, 2, 5, 14, 42, 132]


def test_klinked_estimate_bounds_counts():
    c = Cube(4)
    for n in range(1, 6):
        count = sum(1 for _ in c.enumerate_klinked(2, n, 0))
        assert count <= c.klinked_estimate(2, n)


# -- Hamming balls ---------------------------------------------------------------


def test_even_hamming_ball_layers():
    c = Cube(4)
    balls = list(c.even_hamming_balls(0, 7))
    assert balls == [c.even & c.vertex_ball(0, 2)]
    assert len(list(c.even_hamming_balls(0, 3))) == math.comb(6, 2)
    assert len(list(c.even_hamming_balls(0, 3, mode="greedy"))) == 1


@pytest.mark.parametrize("size", range(0, 9))
def test_hamming_balls_have_requested_size(size):
    c = Cube(4)
    for center in (0, 1, 5):
        for ball in c.even_hamming_balls(center, size):
            assert popcount(ball) == size and not ball & c.odd


def test_iter_submasks_counts():
    assert sum(1 for _ in iter_submasks(0b1011)) == 8


def test_config_validation_and_smallness():
    with pytest.raises(ValueError):
        Config(alpha=2.0)
    with pytest.raises(ValueError):
        Config(gamma=0.0)
    cfg = Config()
    assert cfg.is_small(8, 4) and not cfg.is_small(14, 4)
