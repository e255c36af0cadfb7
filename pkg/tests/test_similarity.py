import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qipwsd.instance import Instance, SenseCandidate, TargetWord
from qipwsd.similarity import (
    RelatednessParams,
    build_sim_tables,
    cosine,
    relatedness,
    relatedness_block,
)
from qipwsd.synthetic import random_instance

from conftest import hand_tables


def naive_cos(u, v):
    dot = sum(a * b for a, b in zip(u, v))
    nu = math.sqrt(sum(a * a for a in u))
    nv = math.sqrt(sum(b * b for b in v))
    return dot / (nu * nv)


@pytest.mark.parametrize(
    "u, v, expected",
    [([1, 0], [0, 1], 0.0), ([1, 2], [2, 4], 1.0), ([1, 0], [-1, 0], -1.0)],
)
def test_cosine_examples(u, v, expected):
    assert cosine(u, v) == pytest.approx(expected, abs=1e-15)


def test_cosine_dimension_mismatch():
    with pytest.raises(ValueError):
        cosine([1, 0], [1, 0, 0])


def test_cosine_is_clamped():
    v = [0.1, 0.2, 0.3]
    assert -1.0 <= cosine(v, v) <= 1.0


def word(wid, ctx, senses):
    return TargetWord(wid, wid, tuple(ctx), tuple(
        SenseCandidate(f"{wid}%{k}", tuple(s)) for k, s in enumerate(senses)
    ))


def test_tables_match_naive_oracle():
    rng = np.random.default_rng(7)
    for _ in range(20):
        counts = rng.integers(1, 5, size=rng.integers(2, 5))
        inst = random_instance(rng, counts, dim=6)
        t = build_sim_tables(inst)
        W = inst.words
        for i, wi in enumerate(W):
            for m, sm in enumerate(wi.senses):
                assert t.c[i, m] == pytest.approx(naive_cos(wi.context_embedding, sm.embedding), abs=1e-12)
            for j, wj in enumerate(W):
                if i == j:
                    assert math.isnan(t.e[i, j])
                    continue
                assert t.e[i, j] == pytest.approx(
                    abs(naive_cos(wi.context_embedding, wj.context_embedding)), abs=1e-12)
                for n, sn in enumerate(wj.senses):
                    assert t.b[i, j, n] == pytest.approx(
                        abs(naive_cos(wi.context_embedding, sn.embedding)), abs=1e-12)
                    for m, sm in enumerate(wi.senses):
                        assert t.h[i, m, j, n] == pytest.approx(
                            abs(naive_cos(sm.embedding, sn.embedding)), abs=1e-12)


def test_identical_embeddings_give_all_ones():
    v = [0.3, -1.0, 2.0]
    inst = Instance(3, (word("a", v, [v, v]), word("b", v, [v, v, v])))
    t = build_sim_tables(inst)
    for arr in (t.c[0, :2], t.c[1, :3], t.h[0, :2, 1, :3], t.b[0, 1, :3], t.b[1, 0, :2], t.e[[0, 1], [1, 0]]):
        assert np.allclose(arr, 1.0, atol=1e-15)


def test_orthogonal_senses_give_zero_h():
    e = np.eye(4)
    inst = Instance(4, (word("a", e[0] + e[2], [e[0], e[1]]), word("b", e[2] + e[3], [e[2], e[3]])))
    t = build_sim_tables(inst)
    assert np.all(t.h[0, :2, 1, :2] == 0.0)


def test_absolute_value_rule_skips_c():
    # context of word a is the negation of its own sense and of word b's sense / context
    s = [1.0, 2.0, 0.5]
    neg = [-x for x in s]
    inst = Instance(3, (word("a", neg, [s]), word("b", s, [neg])))
    t = build_sim_tables(inst)
    assert t.c[0, 0] == pytest.approx(-1.0)
    assert t.h[0, 0, 1, 0] == pytest.approx(1.0)   # s vs -s
    assert t.b[0, 1, 0] == pytest.approx(1.0)      # -s vs -s
    assert t.b[1, 0, 0] == pytest.approx(1.0)      # s vs s
    assert t.e[0, 1] == pytest.approx(1.0)         # -s vs s
    assert np.all(t.h[np.isfinite(t.h)] >= 0)


def example_tables():
    # b(i,j,n)=0.2, b(j,i,m)=0.3, h=0.4, c(i,m)=0.5, e=0.1, c(j,n)=0.6
    return hand_tables(
        [[0.5], [0.6]],
        h={(0, 0, 1, 0): 0.4},
        b={(0, 1, 0): 0.2, (1, 0, 0): 0.3},
        e={(0, 1): 0.1},
    )


def test_relatedness_hand_value():
    # 1*(0.2+0.3) + 1*0.4 + 1*(0.5+0.1+0.6)
    t = example_tables()
    assert relatedness(t, RelatednessParams(1, 1, 1), 0, 0, 1, 0) == pytest.approx(2.1, abs=1e-12)


def test_relatedness_special_cases():
    t = example_tables()
    assert relatedness(t, RelatednessParams(0, 1, 0), 0, 0, 1, 0) == pytest.approx(0.4)
    assert relatedness(t, RelatednessParams(1, 0, 0), 0, 0, 1, 0) == pytest.approx(0.5)


def test_relatedness_rejects_self_pair():
    t = example_tables()
    with pytest.raises(ValueError):
        relatedness(t, RelatednessParams(), 0, 0, 0, 0)
    with pytest.raises(IndexError):
        relatedness(t, RelatednessParams(), 0, 1, 1, 0)


def test_block_matches_scalar():
    inst = random_instance(3, (3, 2, 4))
    t = build_sim_tables(inst)
    p = RelatednessParams(0.7, -0.2, 1.3)
    for i in range(3):
        for j in range(3):
            if i == j:
                continue
            blk = relatedness_block(t, p, i, j)
            for m in range(t.sense_counts[i]):
                for n in range(t.sense_counts[j]):
                    assert blk[m, n] == pytest.approx(relatedness(t, p, i, m, j, n), abs=1e-14)


def test_params_must_be_finite():
    with pytest.raises(ValueError):
        RelatednessParams(float("nan"), 1, 1)


counts_st = st.lists(st.integers(1, 4), min_size=2, max_size=4)
lam_st = st.floats(0, 3, allow_nan=False)


@settings(max_examples=60, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), counts=counts_st, l1=lam_st, l2=lam_st, l3=lam_st)
def test_relatedness_symmetry_and_range(seed, counts, l1, l2, l3):
    t = build_sim_tables(random_instance(seed, counts, dim=5))
    p = RelatednessParams(l1, l2, l3)
    hi = 2 * l1 + l2 + 3 * l3
    lo = -2 * l3
    n = len(counts)
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            for m in range(counts[i]):
                for k in range(counts[j]):
                    r = relatedness(t, p, i, m, j, k)
                    assert r == pytest.approx(relatedness(t, p, j, k, i, m), abs=1e-12)
                    assert lo - 1e-12 <= r <= hi + 1e-12


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), counts=counts_st, scale=st.floats(1e-3, 1e3))
def test_tables_scale_invariant(seed, counts, scale):
    inst = random_instance(seed, counts, dim=5)
    a, b = build_sim_tables(inst), build_sim_tables(inst.scaled(scale))
    for x, y in ((a.c, b.c), (a.h, b.h), (a.b, b.b), (a.e, b.e)):
        np.testing.assert_allclose(x, y, atol=1e-12, equal_nan=True)


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), counts=counts_st)
def test_table_symmetry_and_ranges(seed, counts):
    t = build_sim_tables(random_instance(seed, counts, dim=5))
    n, mmax = len(counts), max(counts)
    assert np.array_equal(t.h, t.h.transpose(2, 3, 0, 1), equal_nan=True)
    assert np.array_equal(t.e, t.e.T, equal_nan=True)
    for arr in (t.h, t.b, t.e):
        vals = arr[np.isfinite(arr)]
        assert np.all((0 <= vals) & (vals <= 1))
    c = t.c[np.isfinite(t.c)]
    assert np.all((-1 <= c) & (c <= 1))
