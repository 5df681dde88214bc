"""Cross-route oracle battery run by ``mazurlab selftest``.

Each oracle compares two independent computations of the same quantity
(quadrature against spectral calculus, finite differences against an
analytic derivative, and so on) and returns :class:`OracleResult` rows.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterable

import numpy as np

from . import kernels
from .funccalc import (DEFAULT_SCHEME, QuadratureScheme, c_theta, f_t, frechet_f_t,
                       power_diff_integral, power_pos, power_via_integral)
from .matcore import (AlgebraShape, Element, Rng, _spectral_element, corner, haar_unitary,
                      random_contraction, random_element, random_positive,
                      random_selfadjoint)
from .mazur import MazurParams, cayley, cayley_gap_norm, dilate_commutator, dilate_selfadjoint, mazur_map
from .schatten import INF, schatten_norm
from .schur import multiplier_mean_power, schur_apply

SELFTEST_SEED = 20240531


@dataclass
class OracleResult:
    name: str
    value: float
    tolerance: float
    passed: bool
    detail: str = ""

    def line(self) -> str:
        mark = "PASS" if self.passed else "FAIL"
        extra = f"  {self.detail}" if self.detail else ""
        return f"{mark}  {self.name:<44s} {self.value:.3e} (tol {self.tolerance:.1e}){extra}"


def _result(name, value, tol, detail="", upper=True):
    ok = bool(np.isfinite(value)) and (value <= tol if upper else value >= tol)
    return OracleResult(name, float(value), tol, ok, detail)


def _rel2(a: Element, b: Element) -> float:
    return schatten_norm(a - b, 2.0) / max(schatten_norm(b, 2.0), 1e-300)


def conditioned_positive(dim: int, cond: float, rng: Rng) -> Element:
    """PSD matrix with spectrum spread log-uniformly and exactly spanning ``[1/cond, 1]``."""
    lam = np.exp(rng.uniform(-math.log(cond), 0.0, dim))
    if dim >= 2:
        lam[0], lam[1] = 1.0 / cond, 1.0
    else:
        lam[0] = 1.0
    return _spectral_element(AlgebraShape.single(dim), [lam], [haar_unitary(dim, rng)])


def c_theta_deltas(thetas: Iterable[float] = (0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9),
                   scheme: QuadratureScheme = DEFAULT_SCHEME, tol: float = 1e-8):
    """Quadrature normalising constant against ``sin(pi theta)/pi``."""
    out = []
    for th in thetas:
        d = abs(c_theta(th, scheme) - math.sin(math.pi * th) / math.pi)
        out.append(_result(f"c_theta theta={th:g}", d, tol))
    return out


def power_integral_oracle(rng: Rng, thetas=(0.3, 0.5, 0.9), dims=(2, 4, 6),
                          conds=(10.0, 1e2, 1e4), scheme=DEFAULT_SCHEME, tol=1e-6):
    """Worst relative Schatten-2 gap between the integral and spectral powers."""
    out = []
    for th in thetas:
        worst = 0.0
        for d in dims:
            for cond in conds:
                x = conditioned_positive(d, cond, rng)
                worst = max(worst, _rel2(power_via_integral(x, th, scheme), power_pos(x, th)))
        out.append(_result(f"power_via_integral theta={th:g}", worst, tol))
    return out


def power_diff_oracle(rng: Rng, thetas=(0.3, 0.5, 0.9), dims=(2, 3, 4), cond=100.0,
                      scheme=DEFAULT_SCHEME, tol=1e-4):
    out = []
    for th in thetas:
        worst = 0.0
        for d in dims:
            x = conditioned_positive(d, cond, rng)
            y = conditioned_positive(d, cond, rng)
            ref = power_pos(x, 1 + th) - power_pos(y, 1 + th)
            worst = max(worst, _rel2(power_diff_integral(x, y, th, scheme), ref))
        out.append(_result(f"power_diff_integral theta={th:g}", worst, tol))
    return out


def richardson_slope(s: Element, t: float, delta: Element, h: float = 1e-2) -> float:
    """``log2(err(h) / err(h/2))`` for the central difference of ``f_t``."""
    exact = frechet_f_t(s, t, delta)

    def err(step):
        fd = (f_t(s + step * delta, t) - f_t(s - step * delta, t)) / (2.0 * step)
        return schatten_norm(fd - exact, 2.0)

    return math.log2(err(h) / err(h / 2.0))


def frechet_oracle(rng: Rng, cases: int = 6):
    """Slopes must sit in ``[1.8, 2.2]``; reports the worst distance from 2."""
    slopes = []
    for k in range(cases):
        d = 2 + k % 4
        shape = AlgebraShape.single(d)
        s = random_positive(shape, rng, 0.2, 1.0)
        delta = random_selfadjoint(shape, rng)
        delta = delta / schatten_norm(delta, INF)
        slopes.append(richardson_slope(s, 10.0 ** rng.uniform(-1, 1), delta))
    worst = max(abs(sl - 2.0) for sl in slopes)
    return [_result("frechet_f_t richardson slope", worst, 0.2,
                    f"slopes {min(slopes):.3f}..{max(slopes):.3f}")]


def dilation_oracle(rng: Rng, trials: int = 50):
    """2x2 tricks: norm scaling ``2^(1/p)``, Mazur corner, commutator = difference."""
    worst_norm = worst_corner = worst_comm = 0.0
    for k in range(trials):
        shape = AlgebraShape.single(1 + k % 4)
        x, y = random_element(shape, rng), random_element(shape, rng)
        p, q = 1.0 + 3.0 * rng.uniform(), 1.0 + 3.0 * rng.uniform()
        xd, yd = dilate_selfadjoint(x, y)
        lhs = schatten_norm(xd - yd, p)
        rhs = 2.0 ** (1.0 / p) * schatten_norm(x - y, p)
        worst_norm = max(worst_norm, abs(lhs - rhs) / max(rhs, 1e-300))
        params = MazurParams(p, q)
        mc = corner(mazur_map(xd, params), 0, 1)
        worst_corner = max(worst_corner, schatten_norm(mc - mazur_map(x, params), INF))
        big, e12 = dilate_commutator(x, y)
        c = big.commutator(e12)
        worst_comm = max(worst_comm, schatten_norm(corner(c, 0, 1) - (x - y), INF))
    return [_result("selfadjoint dilation norm relation", worst_norm, 1e-10),
            _result("dilated Mazur map corner", worst_corner, 1e-10),
            _result("commutator dilation identity", worst_comm, 1e-10)]


def cayley_oracle(rng: Rng, trials: int = 200):
    worst = 0.0
    for k in range(trials):
        b = random_contraction(AlgebraShape.single(1 + k % 6), rng, selfadjoint=True)
        worst = max(worst, cayley_gap_norm(cayley(b)))
    return [_result("cayley gap |(1-u)^-1| - 1/sqrt2", worst - 2 ** -0.5, 1e-10)]


def multiplier_oracle(rng: Rng, trials: int = 500):
    """Mean-power multipliers: unital, PSD and contractive on random ``S_p`` inputs."""
    worst_psd = worst_contr = 0.0
    unital = True
    for k in range(trials):
        d = 1 + k % 6
        lam = np.exp(rng.uniform(math.log(1e-3), math.log(1e3), d))
        alpha = rng.uniform()
        m = multiplier_mean_power(lam, alpha).in_basis(haar_unitary(d, rng))
        unital &= m.is_unital()
        worst_psd = max(worst_psd, -m.min_eigenvalue())
        a = random_element(AlgebraShape.single(d), rng)
        p = [1.0, 1.5, 2.0, 4.0, INF][k % 5]
        ratio = schatten_norm(schur_apply(m, a), p) / schatten_norm(a, p)
        worst_contr = max(worst_contr, ratio - 1.0)
    return [OracleResult("mean-power multiplier unital", 0.0 if unital else 1.0, 0.0, unital),
            _result("mean-power multiplier -min eigenvalue", worst_psd, 1e-10),
            _result("mean-power multiplier S_p norm - 1", worst_contr, 1e-10)]


def kernel_oracle(rng: Rng, trials: int = 100):
    """Jacobi kernels against LAPACK."""
    worst_eig = worst_sv = 0.0
    for k in range(trials):
        d = 1 + k % 8
        g = rng.complex_normal((d, d))
        h = 0.5 * (g + g.conj().T)
        w, _, _ = kernels.heevj(h)
        worst_eig = max(worst_eig, np.max(np.abs(w - np.linalg.eigvalsh(h))) / max(1, np.max(np.abs(w))))
        s, _ = kernels.svdvals(g)
        ref = np.linalg.svd(g, compute_uv=False)
        worst_sv = max(worst_sv, np.max(np.abs(s - ref)) / ref[0])
    return [_result("jacobi eigenvalues vs LAPACK", worst_eig, 1e-12),
            _result("jacobi singular values vs LAPACK", worst_sv, 1e-12)]


def battery(scheme: QuadratureScheme = DEFAULT_SCHEME, seed: int = SELFTEST_SEED):
    """Run every oracle with a fixed seed; ``scheme`` feeds the quadrature-based ones."""
    rng = Rng(seed)
    groups: list[Callable[[], list]] = [
        lambda: c_theta_deltas(scheme=scheme),
        lambda: power_integral_oracle(rng, scheme=scheme),
        lambda: power_diff_oracle(rng, scheme=scheme),
        lambda: frechet_oracle(rng),
        lambda: dilation_oracle(rng),
        lambda: cayley_oracle(rng),
        lambda: multiplier_oracle(rng),
        lambda: kernel_oracle(rng),
    ]
    out = []
    for g in groups:
        out.extend(g())
    return out
