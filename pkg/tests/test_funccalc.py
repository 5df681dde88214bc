import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy.integrate import quad
from scipy.linalg import fractional_matrix_power

from mazurlab.errors import DomainError, IllConditioned
from mazurlab.funccalc import (DEFAULT_SCHEME, QuadratureScheme, c_theta, f_t, frechet_f_t,
                               gamma_square, power_diff_integral, power_diff_terms, power_pos,
                               power_via_integral, resolvent_family, resolvent_map, signed_power)
from mazurlab.matcore import AlgebraShape, Element, Rng, random_positive, random_selfadjoint
from mazurlab.mazur import MazurParams, mazur_map
from mazurlab.oracles import conditioned_positive, richardson_slope
from mazurlab.schatten import schatten_norm
from mazurlab.schur import averaged_conjugation

seeds = st.integers(0, 2**63 - 1)

# 1 / int_R e^{theta v} / (1 + e^v) dv, tanh-sinh quadrature at 30 digits
C_THETA = {0.3: 0.25751810740024193, 0.5: 0.31830988618379067,
           0.7: 0.25751810740024196, 0.9: 0.098363164308346576}


@pytest.mark.parametrize("theta", sorted(C_THETA))
def test_c_theta_frozen(theta):
    assert c_theta(theta) == pytest.approx(C_THETA[theta], abs=1e-12)


@pytest.mark.parametrize("theta", [0.05, 0.2, 0.45, 0.8, 0.95])
def test_c_theta_vs_scipy(theta):
    f = lambda v: math.exp(theta * v) / (1 + math.exp(v)) if v < 0 else math.exp((theta - 1) * v) / (1 + math.exp(-v))  # noqa: E731
    val = quad(f, -np.inf, 0, epsabs=1e-15)[0] + quad(f, 0, np.inf, epsabs=1e-15)[0]
    assert c_theta(theta) == pytest.approx(1 / val, rel=1e-9)


@given(st.floats(0.01, 0.99))
def test_c_theta_symmetry(theta):
    assert abs(c_theta(theta) - c_theta(1 - theta)) <= 1e-10


def test_c_theta_domain():
    with pytest.raises(DomainError):
        c_theta(1.0)


def test_truncated_scheme_without_tails_is_worse():
    plain = QuadratureScheme(tail_correction=False)
    exact = math.sin(0.9 * math.pi) / math.pi
    assert abs(c_theta(0.9, plain) - exact) > 1e-3
    assert abs(c_theta(0.9) - exact) < 1e-14


def test_power_pos_examples(rng):
    np.testing.assert_allclose(power_pos(Element.diag([4.0]), 0.5).blocks[0], [[2.0]])
    x = random_positive(AlgebraShape.single(4), rng)
    assert power_pos(x, 1.0).allclose(x, atol=1e-13)
    with pytest.raises(DomainError):
        power_pos(x, 0.0)


@given(seeds)
def test_power_roundtrip(seed):
    x = random_positive(AlgebraShape.single(4), Rng(seed), 1e-2, 10.0)
    assert power_pos(power_pos(x, 0.37), 1 / 0.37).allclose(x, atol=1e-9)


@given(seeds, st.floats(0.1, 3.0))
def test_power_vs_scipy(seed, alpha):
    x = random_positive(AlgebraShape.single(3), Rng(seed), 1e-2, 10.0)
    ref = fractional_matrix_power(x.blocks[0], alpha)
    np.testing.assert_allclose(power_pos(x, alpha).blocks[0], ref, atol=1e-9 * np.abs(ref).max())


def test_signed_power_examples():
    np.testing.assert_allclose(signed_power(Element.diag([1.0, -1.0]), 0.5).blocks[0], np.diag([1, -1]))
    np.testing.assert_allclose(signed_power(Element.diag([-4.0]), 0.5).blocks[0], [[-2.0]])


@given(seeds, st.floats(0.25, 3.0))
def test_signed_power_matches_mazur(seed, r):
    x = random_selfadjoint(AlgebraShape.single(4), Rng(seed))
    m = mazur_map(x, MazurParams(r * 4.0, 4.0))
    assert signed_power(x, r).allclose(m, atol=1e-10 * max(1, schatten_norm(m, math.inf)))


def test_signed_power_on_positive_is_power_pos(rng):
    x = random_positive(AlgebraShape.single(4), rng)
    assert signed_power(x, 0.7).allclose(power_pos(x, 0.7), atol=0.0)


def test_resolvent_map_examples(rng):
    assert resolvent_map(Element.diag([1.0]), 1.0).blocks[0][0, 0] == pytest.approx(0.5)
    assert np.abs(resolvent_map(Element.diag([0.0, 0.0]), 2.0).blocks[0]).max() == 0
    g = resolvent_map(random_positive(AlgebraShape.single(5), rng), 0.3)
    w = np.linalg.eigvalsh(g.blocks[0])
    assert w.min() >= -1e-14 and w.max() < 1


def test_power_via_integral_examples():
    assert power_via_integral(Element.diag([1.0]), 0.5).blocks[0][0, 0] == pytest.approx(1.0, abs=1e-8)
    assert power_via_integral(Element.diag([4.0]), 0.5).blocks[0][0, 0] == pytest.approx(2.0, abs=1e-6)
    with pytest.raises(IllConditioned):
        power_via_integral(Element.diag([1.0, 1e-10]), 0.5)


@given(seeds, st.sampled_from([0.3, 0.5, 0.9]), st.floats(1.0, 4.0))
def test_power_via_integral_cross_route(seed, theta, log_cond):
    x = conditioned_positive(4, 10 ** log_cond, Rng(seed))
    ref = power_pos(x, theta)
    assert schatten_norm(power_via_integral(x, theta) - ref, 2) <= 1e-6 * schatten_norm(ref, 2)


def test_frechet_scalar():
    d = frechet_f_t(Element.diag([1.0]), 1.0, Element.diag([1.0]))
    assert d.blocks[0][0, 0] == pytest.approx(0.75, abs=1e-15)
    z = frechet_f_t(Element.diag([1.0, 2.0]), 1.0, Element.diag([0.0, 0.0]))
    assert np.abs(z.blocks[0]).max() == 0


def test_frechet_finite_differences(rng):
    shape = AlgebraShape.single(3)
    s = random_positive(shape, rng, 0.2, 1.0)
    delta = random_selfadjoint(shape, rng)
    exact = frechet_f_t(s, 0.7, delta)
    assert np.abs(exact.blocks[0] - exact.blocks[0].conj().T).max() <= 1e-12
    errs = []
    for h in (1e-3, 1e-4):
        fd = (f_t(s + h * delta, 0.7) - f_t(s - h * delta, 0.7)) / (2 * h)
        errs.append(schatten_norm(fd - exact, math.inf))
    assert errs[0] < 1e-5 and errs[1] < errs[0] / 10


@given(seeds)
def test_richardson_slope(seed):
    rng = Rng(seed)
    shape = AlgebraShape.single(3)
    s = random_positive(shape, rng, 0.2, 1.0)
    delta = random_selfadjoint(shape, rng)
    delta = delta / schatten_norm(delta, math.inf)
    assert 1.8 <= richardson_slope(s, 0.5, delta) <= 2.2


def test_power_diff_examples():
    x = Element.diag([4.0])
    assert np.abs(power_diff_integral(x, x, 0.5).blocks[0]).max() <= 1e-10
    d = power_diff_integral(Element.diag([4.0]), Element.diag([1.0]), 0.5)
    assert d.blocks[0][0, 0] == pytest.approx(7.0, abs=1e-4)


@pytest.mark.parametrize("theta", [0.2, 0.5, 0.8])
def test_power_diff_cross_route(theta):
    rng = Rng(77)
    for d in (2, 3):
        x, y = conditioned_positive(d, 100, rng), conditioned_positive(d, 100, rng)
        ref = power_pos(x, 1 + theta) - power_pos(y, 1 + theta)
        got = power_diff_integral(x, y, theta)
        assert schatten_norm(got - ref, 2) <= 1e-4 * schatten_norm(ref, 2)


def test_power_diff_endpoint_correction_improves():
    rng = Rng(5)
    x, y = conditioned_positive(3, 100, rng), conditioned_positive(3, 100, rng)
    ref = power_pos(x, 1.3) - power_pos(y, 1.3)
    plain = schatten_norm(power_diff_integral(x, y, 0.3, endpoint_correction=False) - ref, 2)
    corrected = schatten_norm(power_diff_integral(x, y, 0.3) - ref, 2)
    assert corrected < plain / 20


def test_power_diff_terms_sum():
    rng = Rng(8)
    x, y = conditioned_positive(3, 20, rng), conditioned_positive(3, 20, rng)
    first, second = power_diff_terms(x, y, 0.5, u_nodes=128)
    ref = power_pos(x, 1.5) - power_pos(y, 1.5)
    assert schatten_norm(first - second - ref, 2) <= 1e-3 * schatten_norm(ref, 2)


def test_gamma_square_scalar():
    # (1 - theta) z^theta for commuting arguments
    assert gamma_square(Element.diag([1.0]), 0.5).blocks[0][0, 0] == pytest.approx(0.5, abs=1e-12)
    g = gamma_square(Element.diag([3.0]), 0.3).blocks[0][0, 0].real
    assert g == pytest.approx(0.7 * 3.0 ** 0.3, rel=1e-12)
    assert g <= 3.0 ** 0.3


@given(seeds, st.sampled_from([0.2, 0.5, 0.8]))
def test_gamma_square_dominated(seed, theta):
    z = random_positive(AlgebraShape.single(4), Rng(seed), 1e-2, 10.0)
    diff = power_pos(z, theta) - gamma_square(z, theta)
    assert np.linalg.eigvalsh(diff.blocks[0]).min() >= -1e-8


def test_resolvent_family_normalized(rng):
    z = random_positive(AlgebraShape.single(3), rng, 0.1, 2.0)
    fam = resolvent_family(z, 0.4, QuadratureScheme(N=400))
    a = Element.identity(z.shape)
    out = averaged_conjugation(fam.weights, fam.v, a)
    assert out.allclose(a, atol=1e-10)
    assert (fam.gamma @ fam.gamma).allclose(fam.gamma_sq, atol=1e-12)
