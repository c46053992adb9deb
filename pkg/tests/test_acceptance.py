"""One test per acceptance criterion; each records a PASS/FAIL line for the terminal summary."""

import time
from fractions import Fraction
from itertools import combinations

import numpy as np
import pytest
from scipy import stats

import oracles as o
from conftest import record_acceptance
from cubehom.approximation import approximating_quadruple, class_key, iter_sweep_subjects, reconstruct_candidates, sweep
from cubehom.cli import cmd_count, build_parser
from cubehom.config import Config
from cubehom.counting import (build_family_4, build_family_5, count_brute, count_by_range, count_dp,
                              count_rank_functions, iter_sparse_sets)
from cubehom.cube import Cube, iter_bits, iter_submasks, popcount
from cubehom.dyadic import DyadicSum
from cubehom.homomorphism import range_of, validate
from cubehom.sampling import (SampleConfig, edge_C_all_edges, edge_C_statistic, enumeration_table,
                              sample_indices, sample_uniform)
from cubehom.verify import suite_bijection
from cubehom.weights import (companion, count_fe_total, factorization_check, fe_count_check,
                             fe_total_formula, g_weight, iso_lower_bound_check, kw_existence_check,
                             nice_sum, sparse_companion_sum)


def timed(fn, *args, **kw):
    t0 = time.perf_counter()
    out = fn(*args, **kw)
    return out, time.perf_counter() - t0


def test_criterion_01_exact_counts():
    checks = [count_brute(1) == 2, count_brute(2) == 6, 3 * count_brute(2) == (3 - 1) ** 4 + (3 - 1)]
    times = {}
    for d in (3, 4):
        brute, times[f"brute{d}"] = timed(count_brute, d)
        dp, times[f"dp{d}"] = timed(count_dp, d)
        rank, _ = timed(count_rank_functions, d)
        table, times[f"backtrack{d}"] = timed(count_by_range, d)
        checks.append(brute == dp == rank == sum(table.counts.values()) == table.total)
    dp5, times["dp5"] = timed(count_dp, 5)
    checks.append(dp5 == count_by_range(5).total)
    within = times["brute4"] <= 600 and times["dp4"] <= 5 and times["backtrack4"] <= 5 and times["dp5"] <= 60
    ok = all(checks) and within
    record_acceptance(1, ok, "counts 2, 6, 38, 990 agree across engines; "
                      + ", ".join(f"{k} {v:.2f}s" for k, v in times.items()))
    assert ok


def test_criterion_02_range_tables():
    t2 = count_by_range(2)
    ok = t2.counts == {2: 2, 3: 4}
    for d in range(1, 6):
        t = count_by_range(d)
        ok &= t.counts.get(1, 0) == 0 and t.counts[2] == 2 and t.total == count_dp(d)
    record_acceptance(2, ok, "d=2 table {2:2, 3:4}; counts[1]=0 and counts[2]=2 for d<=5")
    assert ok


def test_criterion_03_bijections():
    failures = 0
    checked = 0
    for d in range(1, 6):
        for a in suite_bijection(d, n=10_000, seed=d):
            failures += not a.passed
            checked += a.checked
    record_acceptance(3, failures == 0, f"{checked} round trips and engine checks, {failures} failures")
    assert failures == 0


def test_criterion_04_families_corrected_range():
    c = Cube(4)
    sizes_ok = True
    valid = True
    f5_range_ok = True
    f4_literal = True
    f4_corrected = True
    seen, total = set(), 0
    for k in (1, 2):
        for A in iter_sparse_sets(c, k):
            fam4 = build_family_4(c, A)
            sizes_ok &= len(fam4) == 2 ** (1 + 8 - 4 * k)
            fams = [fam4]
            if k >= 2:
                fam5 = build_family_5(c, A)
                sizes_ok &= len(fam5) == (2 ** k - 2) * 2 ** (8 - 4 * k)
                f5_range_ok &= all(range_of(f) == [-2, -1, 0, 1, 2] for f in fam5)
                fams.append(fam5)
            rsizes = [len(range_of(f)) for f in fam4]
            f4_literal &= all(r == 4 for r in rsizes)
            f4_corrected &= rsizes.count(3) == 2 and set(rsizes) <= {3, 4}
            for fam in fams:
                valid &= all(validate(4, f.values).ok for f in fam)
                vals = {f.values for f in fam}
                seen |= vals
                total += len(vals)
    disjoint = total == len(seen)
    ok = sizes_ok and valid and f5_range_ok and disjoint and f4_literal
    record_acceptance(4, ok, "sizes, validity, range [-2,2] for family 5 and disjointness hold; "
                      f"literal |R|=4 for every family-4 member {'holds' if f4_literal else 'is false'} "
                      "(the two members with every free odd value on the sign of A have |R|=3)")
    assert sizes_ok and valid and f5_range_ok and disjoint and f4_corrected


@pytest.mark.xfail(strict=True, reason="two members of each family-4 set have range size 3, not 4")
def test_criterion_04_literal_range_four():
    c = Cube(4)
    for k in (1, 2):
        for A in iter_sparse_sets(c, k):
            assert all(len(range_of(f)) == 4 for f in build_family_4(c, A))


def test_criterion_05_fe_formula():
    ok = True
    for d in (3, 4):
        c = Cube(d)
        subsets = list(iter_submasks(c.even))
        assert len(subsets) == 2 ** c.M
        for A in subsets:
            formula, direct = fe_count_check(c, A)
            ok &= formula == direct
        ok &= fe_total_formula(c) == count_fe_total(c)
    record_acceptance(5, ok, "per-subset formula at d=3 (16) and d=4 (256); totals 92 and 4208")
    assert ok


def test_criterion_06_weight_components():
    ok = True
    for d in (4, 5):
        c = Cube(d)
        verts = list(iter_bits(c.even))
        for k in (1, 2, 3):
            for A in iter_sparse_sets(c, k):
                ok &= g_weight(c, A) == DyadicSum.pow2(-d * k)
        for A in iter_submasks(c.even):
            ok &= factorization_check(c, A, "g") and factorization_check(c, A, "h")
        for cc in (1, 2, 3):
            for D in (c.even, sum(1 << v for v in verts[: len(verts) // 2])):
                ok &= sparse_companion_sum(c, D, cc) == companion(c, popcount(D), cc)
    record_acceptance(6, ok, "sparse g values, factorization for all A, companion identity at d=4, 5")
    assert ok


NICE = {4: DyadicSum(425, 7), 5: DyadicSum(174695, 15)}


def test_criterion_07_nice_sum_engines():
    ok = True
    for d in (4, 5):
        c = Cube(d)
        ok &= nice_sum(c, engine="naive") == nice_sum(c, engine="linked") == NICE[d]
    record_acceptance(7, ok, f"engines agree; d=4 {NICE[4]}, d=5 {NICE[5]}")
    assert ok


def test_criterion_08_isoperimetry():
    ok = True
    n_sets = 0
    for d in (4, 5, 6):
        c = Cube(d)
        for side in (c.even, c.odd):
            verts = list(iter_bits(side))
            for n in (1, 2, 3):
                for pick in combinations(verts, n):
                    ok &= iso_lower_bound_check(c, sum(1 << v for v in pick))
                    n_sets += 1
    c4 = Cube(4)
    witnesses = [kw_existence_check(c4, A) for A in iter_submasks(c4.even)]
    kw_ok = len(witnesses) == 256 and all(w is not None for w in witnesses)
    ok &= kw_ok
    record_acceptance(8, ok, f"{n_sets} single-parity sets checked; witness for all 256 subsets at d=4")
    assert ok


def test_criterion_09_approximation_sweep():
    counts, bad, times = {}, 0, {}
    for d in (4, 5):
        t0 = time.perf_counter()
        n = 0
        for r in sweep(Cube(d)):
            n += 1
            bad += not (r.check.all_pass and r.exact_check.all_pass and r.covers_meet_bound
                        and r.iterations_ok)
        counts[d], times[d] = n, time.perf_counter() - t0
    ok = bad == 0 and times[5] <= 300
    record_acceptance(9, ok, f"{counts[4]} sets at d=4 and {counts[5]} at d=5, {bad} failures; "
                      f"d=5 sweep {times[5]:.1f}s")
    assert ok


def test_criterion_10_reconstruction():
    c = Cube(4)
    subjects = list(iter_sweep_subjects(c))
    missing = 0
    for gamma in (0.05, 0.1, 0.3):
        cfg = Config(gamma=gamma)
        for A in subjects:
            q = approximating_quadruple(c, A).quad
            missing += A not in set(reconstruct_candidates(c, q, class_key(c, A), cfg))
    record_acceptance(10, missing == 0, f"{len(subjects)} sets x 3 gammas, {missing} missing")
    assert missing == 0


def test_criterion_11_sampling():
    table = enumeration_table(3)
    ranges = table.max(axis=1).astype(int) - table.min(axis=1) + 1
    sizes = sorted(set(ranges.tolist()))
    exact_p = np.array([np.mean(ranges == r) for r in sizes])
    pvals = []
    for seed in (1, 2, 3):
        idx = sample_indices(SampleConfig(3, seed=seed, count=100_000))
        member_p = stats.chisquare(np.bincount(idx, minlength=len(table))).pvalue
        obs = np.array([np.sum(ranges[idx] == r) for r in sizes])
        range_p = stats.chisquare(obs, exact_p * len(idx)).pvalue
        pvals.append(min(member_p, range_p))
    majority = sum(p > 0.001 for p in pvals) >= 2
    a = sample_uniform(SampleConfig(4, seed=99, count=1000))
    b = sample_uniform(SampleConfig(4, seed=99, count=1000))
    same = np.array([f.values for f in a], np.int8).tobytes() == np.array([f.values for f in b], np.int8).tobytes()
    ok = majority and same
    record_acceptance(11, ok, "chi-square p-values " + ", ".join(f"{p:.3g}" for p in pvals)
                      + f"; reproducible {same}")
    assert ok


def test_criterion_12_edge_statistic():
    ok = edge_C_statistic(2) == Fraction(2, 3)
    vals = {}
    for d in (3, 4):
        vals[d] = edge_C_statistic(d)
        ok &= vals[d] == o.edge_C_oracle(d)
    for d in (1, 2, 3):
        ok &= len(set(edge_C_all_edges(d).values())) == 1
    record_acceptance(12, ok, f"d=2 2/3, d=3 {vals[3]}, d=4 {vals[4]}; uniform across edges for d<=3")
    assert ok


def test_criterion_13_trend_report():
    parts = []
    for d in (2, 3, 4, 5):
        args = build_parser().parse_args(["count", "--d", str(d)])
        args.cache_dir = None
        res, _, _ = cmd_count(args)
        tr = res["trend"]
        parts.append(f"d={d} |F|/2^M={tr['F_over_2^M']['approx']:.4f} P(|R|<=5)={tr['P_range_le_5']['exact']}")
    record_acceptance(13, None, "; ".join(parts) + "; reference 2e = 5.4366")
