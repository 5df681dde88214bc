import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from mazurlab.errors import DomainError, NotHermitian, ShapeMismatch
from mazurlab.funccalc import signed_power
from mazurlab.matcore import (AlgebraShape, Element, Rng, corner, random_contraction,
                              random_element, random_positive, random_selfadjoint)
from mazurlab.mazur import (MazurParams, cayley, cayley_gap_norm, dilate_commutator,
                            dilate_selfadjoint, in_unit_ball, mazur_map, project_unit_ball)
from mazurlab.schatten import INF, schatten_norm

from conftest import mat

seeds = st.integers(0, 2**63 - 1)
exps = st.floats(1.0, 4.0)


def test_params_validation():
    with pytest.raises(DomainError):
        MazurParams(0.5, 2)
    with pytest.raises(DomainError):
        MazurParams(1, INF)
    assert MazurParams(1, 2).theta == 0.5 and MazurParams(3, 2).theta == 1.0


def test_mazur_examples():
    np.testing.assert_allclose(mazur_map(Element.diag([4.0]), MazurParams(1, 2)).blocks[0], [[2.0]])
    np.testing.assert_allclose(mazur_map(mat([[0, 2], [0, 0]]), MazurParams(1, 2)).blocks[0],
                               [[0, math.sqrt(2)], [0, 0]], atol=1e-15)
    x = random_element(AlgebraShape.single(3), Rng(1))
    assert mazur_map(x, MazurParams(2.5, 2.5)).allclose(x, atol=1e-12)


@given(seeds, exps, exps)
def test_norm_covariance(seed, p, q):
    x = random_element(AlgebraShape.of((3, 2), (1.0, 0.4)), Rng(seed))
    lhs = schatten_norm(mazur_map(x, MazurParams(p, q)), q)
    assert lhs == pytest.approx(schatten_norm(x, p) ** (p / q), rel=1e-9)


@given(seeds, exps, exps, st.floats(0.01, 100.0))
def test_homogeneity_on_positives(seed, p, q, lam):
    x = random_positive(AlgebraShape.single(3), Rng(seed))
    params = MazurParams(p, q)
    left = mazur_map(x * lam, params)
    right = mazur_map(x, params) * lam ** (p / q)
    assert left.allclose(right, atol=1e-10 * max(1.0, schatten_norm(right, INF)))


@given(seeds, exps, exps, exps)
def test_exponent_composition(seed, p, r, q):
    x = random_element(AlgebraShape.single(3), Rng(seed))
    two = mazur_map(mazur_map(x, MazurParams(p, r)), MazurParams(r, q))
    one = mazur_map(x, MazurParams(p, q))
    assert two.allclose(one, atol=1e-8 * max(1.0, schatten_norm(one, INF)))


@given(seeds, exps, exps)
def test_selfadjoint_matches_signed_power(seed, p, q):
    x = random_selfadjoint(AlgebraShape.single(4), Rng(seed))
    m = mazur_map(x, MazurParams(p, q))
    assert m.allclose(signed_power(x, p / q), atol=1e-10 * max(1.0, schatten_norm(m, INF)))


def test_unit_ball():
    x = Element.diag([0.5, 0.5])
    assert in_unit_ball(x, 1) is x
    y = Element.diag([0.5, 0.5 + 1e-13])
    assert schatten_norm(in_unit_ball(y, 1), 1) <= 1.0
    with pytest.raises(DomainError):
        in_unit_ball(Element.diag([1.0, 0.1]), 1)
    assert schatten_norm(project_unit_ball(Element.diag([3.0, 4.0]), 2), 2) == pytest.approx(1.0)


def test_dilate_selfadjoint_zero():
    z = Element.zeros(AlgebraShape.single(2))
    xd, _ = dilate_selfadjoint(z, z)
    assert np.abs(xd.blocks[0]).max() == 0 and xd.shape.dims == (4,)


@given(seeds, st.sampled_from([1.0, 2.0, 3.0]), exps)
def test_dilation_identities(seed, p, q):
    rng = Rng(seed)
    shape = AlgebraShape.single(3)
    x, y = random_element(shape, rng), random_element(shape, rng)
    xd, yd = dilate_selfadjoint(x, y)
    assert xd.is_hermitian()
    assert schatten_norm(xd, p) == pytest.approx(2 ** (1 / p) * schatten_norm(x, p), rel=1e-10)
    params = MazurParams(p, q)
    mx = mazur_map(xd, params)
    assert corner(mx, 0, 1).allclose(mazur_map(x, params), atol=1e-10)
    assert corner(mx, 1, 0).allclose(mazur_map(x, params).H, atol=1e-10)


@given(seeds, exps, exps)
def test_commutator_dilation(seed, p, q):
    rng = Rng(seed)
    shape = AlgebraShape.single(3)
    x, y = random_element(shape, rng), random_element(shape, rng)
    params = MazurParams(p, q)
    big, b = dilate_commutator(x, y)
    assert schatten_norm(big.commutator(b), p) == pytest.approx(schatten_norm(x - y, p), rel=1e-10)
    lhs = schatten_norm(mazur_map(big, params).commutator(b), q)
    rhs = schatten_norm(mazur_map(x, params) - mazur_map(y, params), q)
    assert lhs == pytest.approx(rhs, rel=1e-10, abs=1e-12)


def test_commutator_dilation_scalars():
    big, b = dilate_commutator(Element.diag([1.0]), Element.diag([0.0]))
    assert schatten_norm(big.commutator(b), 1) == pytest.approx(1.0)
    x = Element.diag([0.3])
    big, b = dilate_commutator(x, x)
    assert schatten_norm(mazur_map(big, MazurParams(1, 2)).commutator(b), 2) == 0.0


def test_dilation_shape_mismatch():
    with pytest.raises(ShapeMismatch):
        dilate_commutator(Element.diag([1.0]), Element.diag([1.0, 2.0]))


def test_cayley_examples():
    u = cayley(Element.zeros(AlgebraShape.single(2)))
    np.testing.assert_allclose(u.blocks[0], -np.eye(2), atol=1e-15)
    assert cayley_gap_norm(u) == pytest.approx(0.5)
    u = cayley(Element.identity(AlgebraShape.single(1)))
    np.testing.assert_allclose(u.blocks[0], [[-1j]], atol=1e-15)
    assert cayley_gap_norm(u) == pytest.approx(2 ** -0.5, abs=1e-15)
    with pytest.raises(NotHermitian):
        cayley(mat([[0, 1], [0, 0]]))


@given(seeds, st.integers(1, 6))
def test_cayley_contractions(seed, d):
    b = random_contraction(AlgebraShape.single(d), Rng(seed), selfadjoint=True)
    u = cayley(b)
    np.testing.assert_allclose(u.blocks[0].conj().T @ u.blocks[0], np.eye(d), atol=1e-10)
    assert cayley_gap_norm(u) <= 2 ** -0.5 + 1e-10
