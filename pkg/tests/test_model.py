import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qipwsd.instance import Assignment, enumerate_assignments
from qipwsd.model import (
    FixedVariableError,
    QipModel,
    SolverConfig,
    Variant,
    apply_theta_pruning,
    build_model,
    objective,
)
from qipwsd.similarity import RelatednessParams, build_sim_tables, relatedness
from qipwsd.synthetic import random_instance

from conftest import hand_tables


def model_for(inst, **cfg):
    return build_model(inst, build_sim_tables(inst), SolverConfig(**cfg))


def test_config_validation():
    with pytest.raises(ValueError):
        SolverConfig(theta=1.5)
    with pytest.raises(ValueError):
        SolverConfig(beta=float("inf"))
    assert SolverConfig(variant="adjacent").variant is Variant.ADJACENT
    d = SolverConfig()
    assert (d.beta, d.theta, d.variant) == (1.0, 1.0, Variant.FULL)
    assert d.params == RelatednessParams(1.0, 1.0, 1.0)


def test_pair_structure(paper_sized):
    assert model_for(paper_sized, variant=Variant.QIP_R).quadratic == {}
    assert sorted(model_for(paper_sized).quadratic) == list(itertools.combinations(range(4), 2))
    assert sorted(model_for(paper_sized, variant="adjacent").quadratic) == [(0, 1), (1, 2), (2, 3)]


def test_quadratic_coefficients_are_relatedness(paper_sized):
    params = RelatednessParams(0.5, 2.0, -0.3)
    tables = build_sim_tables(paper_sized)
    m = build_model(paper_sized, tables, SolverConfig(params=params))
    for (i, j), blk in m.quadratic.items():
        assert blk.shape == (paper_sized.sense_counts[i], paper_sized.sense_counts[j])
        for u, v in itertools.product(range(blk.shape[0]), range(blk.shape[1])):
            assert blk[u, v] == pytest.approx(relatedness(tables, params, i, u, j, v), abs=1e-14)


def hand_model():
    return QipModel(
        linear=(np.array([0.5]), np.array([0.6])),
        quadratic={(0, 1): np.array([[0.4]])},
        beta=2.0,
        fixed=frozenset({(0, 0), (1, 0)}),
        variant=Variant.FULL,
    )


def test_objective_hand_value():
    # 0.5 + 0.6 + 2 * 0.4
    assert objective(hand_model(), Assignment((0, 0))) == pytest.approx(1.9, abs=1e-15)


def test_objective_single_word():
    inst = random_instance(5, (3,))
    m = model_for(inst)
    for k in range(3):
        assert objective(m, (k,)) == m.linear[0][k]


def test_objective_beta_zero_is_sum_of_c(paper_sized):
    m = model_for(paper_sized, beta=0.0)
    for a in enumerate_assignments(paper_sized):
        assert objective(m, a) == pytest.approx(sum(m.linear[i][k] for i, k in enumerate(a.choices)), abs=1e-15)


def test_objective_rejects_fixed_violation():
    tables = hand_tables([[0.9, 0.1], [0.2, 0.3]],
                         h={(0, a, 1, b): 0.1 for a in range(2) for b in range(2)},
                         b={(i, j, k): 0.1 for i, j in ((0, 1), (1, 0)) for k in range(2)},
                         e={(0, 1): 0.1})
    from qipwsd.instance import Instance, SenseCandidate, TargetWord
    words = tuple(TargetWord(f"w{i}", "x", (1.0,), (SenseCandidate("a", (1.0,)), SenseCandidate("b", (1.0,))))
                  for i in range(2))
    m = build_model(Instance(1, words), tables, SolverConfig(theta=0.5))
    assert m.fixed == frozenset({(0, 0)})
    with pytest.raises(FixedVariableError, match="word 0"):
        objective(m, (1, 0))
    objective(m, (0, 1))


def test_objective_rejects_invalid_assignment(paper_sized):
    with pytest.raises(ValueError):
        objective(model_for(paper_sized), (0, 0, 0))


def test_pair_counting_convention(paper_sized):
    # i<j sum equals half of the ordered-pair sum, by symmetry of r
    tables = build_sim_tables(paper_sized)
    params = RelatednessParams(0.3, 1.1, 0.7)
    m = build_model(paper_sized, tables, SolverConfig(beta=1.7, params=params))
    for a in list(enumerate_assignments(paper_sized))[::7]:
        k = a.choices
        ordered = sum(relatedness(tables, params, i, k[i], j, k[j])
                      for i in range(4) for j in range(4) if i != j)
        expected = sum(m.linear[i][k[i]] for i in range(4)) + 1.7 * ordered / 2
        assert objective(m, a) == pytest.approx(expected, abs=1e-12)


def test_degeneration_full_beta0_equals_qipr(paper_sized):
    full = model_for(paper_sized, beta=0.0)
    qipr = model_for(paper_sized, variant="qipr")
    for a in enumerate_assignments(paper_sized):
        assert objective(full, a) == objective(qipr, a)


# --- margin pruning ---------------------------------------------------------

def test_theta_ratio_example():
    # (0.9 - 0.45) / 0.9 = 0.5 >= 0.4
    t = hand_tables([[0.45, 0.9]])
    assert apply_theta_pruning(t, 0.4) == frozenset({(0, 1)})
    assert apply_theta_pruning(t, 0.6) == frozenset()


def test_theta_boundary_fixes():
    t = hand_tables([[0.5, 1.0]])  # margin exactly 0.5
    assert apply_theta_pruning(t, 0.5) == frozenset({(0, 1)})


def test_theta_one_fixes_only_single_sense_words():
    # margins of 1 (zero runner-up) and above 1 (negative runner-up) included
    t = hand_tables([[0.9, -0.5], [0.3], [0.8, 0.1, 0.0], [0.7, 0.0]])
    assert apply_theta_pruning(t, 1.0) == frozenset({(1, 0)})
    assert apply_theta_pruning(t, 0.99) == frozenset({(0, 0), (1, 0), (3, 0)})


def test_theta_zero_fixes_positive_argmax_with_low_index_ties():
    t = hand_tables([[0.4, 0.4, 0.1], [-0.2, -0.1], [0.0, 0.0]])
    assert apply_theta_pruning(t, 0.0) == frozenset({(0, 0)})


def test_theta_out_of_range():
    with pytest.raises(ValueError):
        apply_theta_pruning(hand_tables([[0.1, 0.2]]), -0.1)


@settings(max_examples=50, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), counts=st.lists(st.integers(1, 5), min_size=1, max_size=6))
def test_pruning_monotone_in_theta(seed, counts):
    t = build_sim_tables(random_instance(seed, counts))
    thetas = np.linspace(0, 1, 11)
    sets = [apply_theta_pruning(t, th) for th in thetas]
    for lo, hi in zip(sets, sets[1:]):
        assert hi <= lo
    for i, k in sets[0]:
        row = t.c_row(i)
        assert k == int(np.argmax(row))
    assert {i for i, _ in sets[0]} == {i for i in range(len(counts)) if counts[i] == 1 or t.c_row(i).max() > 0}
