import math

import pytest
from hypothesis import given, settings, strategies as st

from mazurlab.errors import DegeneratePair
from mazurlab.matcore import AlgebraShape, Element, Rng, random_element
from mazurlab.mazur import MazurParams
from mazurlab.schatten import schatten_norm
from mazurlab.search import Budget, holder_ratio, maximize, scalar_grid_optimum, sweep

D = Element.diag


def test_holder_ratio_scalar_examples():
    assert holder_ratio(D([0.01]), D([-0.01]), MazurParams(1, 2)) == pytest.approx(math.sqrt(2))
    assert holder_ratio(D([1.0]), D([0.0]), MazurParams(1, 2)) == pytest.approx(1.0)
    with pytest.raises(DegeneratePair):
        holder_ratio(D([0.5]), D([0.5 + 1e-8]), MazurParams(1, 2))


@given(st.integers(0, 2**32), st.sampled_from([(1, 2), (2, 1), (1.5, 4)]))
def test_holder_ratio_symmetric(seed, pq):
    rng = Rng(seed)
    shape = AlgebraShape.single(3)
    x, y = random_element(shape, rng), random_element(shape, rng)
    params = MazurParams(*pq)
    assert holder_ratio(x, y, params) == pytest.approx(holder_ratio(y, x, params), rel=1e-12)


def test_maximize_scalar_optimum():
    res = maximize(MazurParams(1, 2), AlgebraShape.single(1), Budget(4, 300), 3)
    assert abs(res.best_ratio - math.sqrt(2)) <= 1e-3
    assert res.replay() == pytest.approx(res.best_ratio, rel=1e-12)


def test_maximize_equal_exponents():
    res = maximize(MazurParams(2, 2), AlgebraShape.single(2), Budget(2, 200), 0)
    assert abs(res.best_ratio - 1.0) <= 1e-12


def test_maximize_deterministic():
    a = maximize(MazurParams(1, 1.5), AlgebraShape.single(2), Budget(2, 150), 9)
    b = maximize(MazurParams(1, 1.5), AlgebraShape.single(2), Budget(2, 150), 9)
    assert a.best_ratio == b.best_ratio and a.history == b.history


@settings(max_examples=10)
@given(st.integers(0, 1000), st.sampled_from(["general", "selfadjoint", "psd"]))
def test_history_monotone_and_pairs_in_ball(seed, cone):
    params = MazurParams(1.5, 2)
    res = maximize(params, AlgebraShape.single(2), Budget(2, 60), seed, cone)
    marks = res.restart_marks + [len(res.history)]
    for lo, hi in zip(marks, marks[1:]):
        vals = [v for _, v in res.history[lo:hi]]
        assert all(b > a for a, b in zip(vals, vals[1:]))
    for z in res.best_pair:
        assert schatten_norm(z, params.p) <= 1 + 1e-12
        if cone != "general":
            assert z.is_hermitian()


def test_bad_cone_and_budget():
    with pytest.raises(ValueError):
        maximize(MazurParams(1, 2), AlgebraShape.single(1), cone="nope")
    with pytest.raises(ValueError):
        Budget(0, 10)


def test_scalar_grid_optimum():
    assert scalar_grid_optimum(1, 2) == pytest.approx(math.sqrt(2), rel=1e-12)
    assert scalar_grid_optimum(2, 2) == pytest.approx(1.0, rel=1e-12)


def test_sweep_rows_sorted_and_reproducible():
    rows = sweep([2, 1], [1.5, 1.2], AlgebraShape.single(1), Budget(2, 100), 5)
    assert [(r.p, r.q) for r in rows] == [(1, 1.2), (1, 1.5), (2, 1.2), (2, 1.5)]
    r = rows[1]
    again = maximize(MazurParams(r.p, r.q), AlgebraShape.single(1), Budget(2, 100), r.seed)
    assert again.best_ratio == r.best_ratio
    for r in rows[:2]:
        # p < q: antipodal starts reach the scalar optimum immediately
        assert r.best_ratio >= scalar_grid_optimum(r.p, r.q) * (1 - 1e-9)
