import numpy as np
import pytest
from hypothesis import given, strategies as st

from mazurlab.errors import DomainError, NotNormalized, ShapeMismatch
from mazurlab.funccalc import QuadratureScheme, resolvent_family
from mazurlab.matcore import AlgebraShape, Element, Rng, haar_unitary, random_element, random_positive
from mazurlab.schatten import INF, schatten_norm
from mazurlab.schur import (Multiplier, averaged_conjugation, multiplier_for,
                            multiplier_geometric, multiplier_mean_power, schur_apply)

seeds = st.integers(0, 2**63 - 1)
spectra = st.lists(st.floats(1e-3, 1e3), min_size=1, max_size=6)


def test_mean_power_examples():
    np.testing.assert_array_equal(multiplier_mean_power([1, 1], 0.3).matrix, np.ones((2, 2)))
    m = multiplier_mean_power([1, 4], 0.5).matrix
    assert m[0, 1] == pytest.approx(0.8) and m[0, 0] == 1.0
    for a in (0.0, 1.0):
        np.testing.assert_allclose(multiplier_mean_power([1, 4, 9], a).matrix, 1.0)
    with pytest.raises(DomainError):
        multiplier_mean_power([1, 0], 0.5)
    with pytest.raises(DomainError):
        multiplier_mean_power([1, 2], 1.5)


def test_geometric_examples():
    np.testing.assert_allclose(multiplier_geometric([1, 1]).matrix, 0.5)
    assert multiplier_geometric([1, 4]).matrix[0, 1] == pytest.approx(0.4)


@given(spectra, st.floats(0.0, 1.0))
def test_mean_power_unital_psd(lam, alpha):
    m = multiplier_mean_power(lam, alpha)
    assert m.is_unital() and m.is_positive()


@given(spectra)
def test_geometric_psd(lam):
    assert multiplier_geometric(lam).min_eigenvalue() >= -1e-10


@given(seeds, spectra, st.sampled_from([1.0, 1.7, 2.0, INF]))
def test_geometric_norm_half(seed, mu, p):
    # PSD multiplier: norm is the largest diagonal entry
    rng = Rng(seed)
    m = multiplier_geometric(mu)
    a = random_element(AlgebraShape.single(len(mu)), rng)
    assert schatten_norm(schur_apply(m, a), p) <= (0.5 + 1e-8) * schatten_norm(a, p)


@given(seeds, spectra, st.floats(0.0, 1.0), st.sampled_from([1.0, 1.7, 2.0, 3.0, INF]))
def test_mean_power_contractive(seed, lam, alpha, p):
    rng = Rng(seed)
    d = len(lam)
    m = multiplier_mean_power(lam, alpha).in_basis(haar_unitary(d, rng))
    a = random_element(AlgebraShape.single(d), rng)
    assert schatten_norm(schur_apply(m, a), p) <= (1 + 1e-8) * schatten_norm(a, p)


@given(seeds, spectra, st.sampled_from([1.0, 2.0, 3.0, INF]))
def test_geometric_norm_at_most_one(seed, lam, p):
    rng = Rng(seed)
    a = random_element(AlgebraShape.single(len(lam)), rng)
    m = multiplier_geometric(lam)
    assert schatten_norm(schur_apply(m, a), p) <= (1 + 1e-8) * schatten_norm(a, p)


def test_schur_apply_trivial_cases(rng):
    a = random_element(AlgebraShape.single(2), rng)
    assert schur_apply(Multiplier(np.ones((2, 2))), a).allclose(a, atol=1e-13)
    assert schur_apply(multiplier_geometric([1, 1]), a).allclose(a * 0.5, atol=1e-15)
    with pytest.raises(ShapeMismatch):
        schur_apply(Multiplier(np.ones((3, 3))), a)


@given(seeds)
def test_unital_keeps_basis_diagonal(seed):
    rng = Rng(seed)
    x = random_positive(AlgebraShape.single(4), rng)
    m = multiplier_for(x, "mean_power", 0.3)
    a = random_element(x.shape, rng)
    b = m.basis
    before = np.diag(b.conj().T @ a.blocks[0] @ b)
    after = np.diag(b.conj().T @ schur_apply(m, a).blocks[0] @ b)
    np.testing.assert_allclose(after, before, atol=1e-12)


def test_multiplier_rejects_asymmetric():
    with pytest.raises(ValueError):
        Multiplier(np.array([[1.0, 2.0], [0.0, 1.0]]))


def test_averaged_conjugation_trivial(rng):
    a = random_element(AlgebraShape.single(3), rng)
    assert averaged_conjugation([1.0], [Element.identity(a.shape)], a).allclose(a, atol=0)
    with pytest.raises(NotNormalized):
        averaged_conjugation([0.5], [Element.identity(a.shape)], a)


@pytest.mark.parametrize("p", [1.0, 2.0, INF])
def test_resolvent_family_averaging_contracts(p):
    rng = Rng(31)
    z = random_positive(AlgebraShape.single(3), rng, 0.1, 3.0)
    fam = resolvent_family(z, 0.6, QuadratureScheme(N=400))
    ident = Element.identity(z.shape)
    assert averaged_conjugation(fam.weights, fam.v, ident).allclose(ident, atol=1e-9)
    for _ in range(5):
        a = random_element(z.shape, rng)
        out = averaged_conjugation(fam.weights, fam.v, a)
        assert schatten_norm(out, p) <= (1 + 1e-8) * schatten_norm(a, p)
