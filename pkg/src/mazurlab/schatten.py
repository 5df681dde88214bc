"""Weighted trace and Schatten norms ``|x|_p = tau(|x|^p)^(1/p)``."""
from __future__ import annotations

import math

import numpy as np

from .errors import ExponentMismatch
from .matcore import Element, singular_values
from .records import CheckRecord, make_record

INF = math.inf
PNorm = float  # an exponent in (0, inf]; values below 1 give the quasi-norm


def trace(x: Element) -> complex:
    """``sum_k w_k Tr(x_k)``."""
    return complex(sum(w * np.trace(a) for a, w in zip(x.blocks, x.shape.weights)))


def _norm_from_singular_values(svals, weights, p: float) -> float:
    if p == INF:
        return max(float(np.max(s)) for s in svals)
    if p <= 0:
        raise ValueError(f"exponent must be positive, got {p}")
    top = max(float(np.max(s)) for s in svals)
    if top == 0.0:
        return 0.0
    total = sum(w * float(np.sum((s / top) ** p)) for s, w in zip(svals, weights))
    return top * total ** (1.0 / p)


def schatten_norm(x: Element, p: PNorm) -> float:
    """Schatten ``p``-norm with respect to the weighted trace.

    ``p = inf`` gives the operator norm (weights play no role there).
    Exponents in ``(0, 1)`` are accepted and return the quasi-norm, which
    the power inequalities need for ``|x - y|_{theta p}`` when ``theta p < 1``.
    """
    return _norm_from_singular_values(singular_values(x), x.shape.weights, p)


def conjugate_exponent_defect(p: float, *parts: float) -> float:
    inv = lambda r: 0.0 if r == INF else 1.0 / r  # noqa: E731
    return abs(sum(inv(r) for r in parts) - inv(p))


def holder_bound(x: Element, y: Element, z: Element, a: PNorm, b: PNorm, c: PNorm,
                 p: PNorm) -> CheckRecord:
    """Check ``|xyz|_p <= |x|_a |y|_b |z|_c`` for ``1/a + 1/b + 1/c = 1/p``."""
    if conjugate_exponent_defect(p, a, b, c) > 1e-12:
        raise ExponentMismatch(f"1/{a} + 1/{b} + 1/{c} != 1/{p}")
    lhs = schatten_norm(x @ y @ z, p)
    rhs = schatten_norm(x, a) * schatten_norm(y, b) * schatten_norm(z, c)
    return make_record("holder", lhs, rhs, 1.0, slack=1e-9,
                       digest={"exponents": [a, b, c, p]})
