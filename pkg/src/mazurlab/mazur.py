"""Mazur maps ``x -> u |x|^(p/q)`` and the 2x2 reduction gadgets."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, NotHermitian, ShapeMismatch
from .matcore import Element, block_2x2, operator_norm, svd
from .schatten import schatten_norm

# the closed unit ball absorbs this much roundoff before rejecting
BALL_SLACK = 1e-12


@dataclass(frozen=True)
class MazurParams:
    p: float
    q: float

    def __post_init__(self):
        for name, v in (("p", self.p), ("q", self.q)):
            if not (1.0 <= v < np.inf):
                raise DomainError(f"{name} must be a finite exponent >= 1, got {v}")

    @property
    def ratio(self) -> float:
        return self.p / self.q

    @property
    def theta(self) -> float:
        """Hölder exponent ``min(p/q, 1)``."""
        return min(self.p / self.q, 1.0)


def mazur_map(x: Element, params: MazurParams) -> Element:
    """``M_{p,q}(x) = U Sigma^(p/q) V*`` from the SVD ``x = U Sigma V*``.

    Maps the ``L_p`` sphere onto the ``L_q`` sphere; ``p == q`` returns
    ``x`` itself.
    """
    if params.p == params.q:
        return x
    r = params.ratio
    d = svd(x)
    out = []
    for u, s, v in zip(d.u, d.s, d.v):
        out.append((u * s ** r) @ v.conj().T)
    return Element._raw(x.shape, out)


def in_unit_ball(x: Element, p: float) -> Element:
    """Accept ``x`` with ``|x|_p <= 1`` (renormalising roundoff overshoot)."""
    n = schatten_norm(x, p)
    if n > 1.0 + BALL_SLACK:
        raise DomainError(f"|x|_{p} = {n!r} exceeds the unit ball")
    return x / n if n > 1.0 else x


def project_unit_ball(x: Element, p: float) -> Element:
    """Radial projection onto the closed unit ``p``-ball."""
    n = schatten_norm(x, p)
    return x / n if n > 1.0 else x


def dilate_selfadjoint(x: Element, y: Element):
    """``x -> [[0, x], [x*, 0]]`` for both arguments.

    ``|x~ - y~|_p = 2^(1/p) |x - y|_p`` and ``M_{p,q}(x~)`` carries
    ``M_{p,q}(x)`` in its upper-right corner.
    """
    if x.shape != y.shape:
        raise ShapeMismatch(f"{x.shape} vs {y.shape}")
    z = Element.zeros(x.shape)
    return block_2x2(z, x, x.H, z), block_2x2(z, y, y.H, z)


def dilate_commutator(x: Element, y: Element):
    """``(diag(x, y), [[0, 1], [0, 0]])``: turns ``x - y`` into a commutator."""
    if x.shape != y.shape:
        raise ShapeMismatch(f"{x.shape} vs {y.shape}")
    z = Element.zeros(x.shape)
    one = Element.identity(x.shape)
    return block_2x2(x, z, z, y), block_2x2(z, one, z, z)


def cayley(b: Element) -> Element:
    """``u = (b - i)(b + i)^{-1}`` for self-adjoint ``b``; ``u`` is unitary."""
    if not b.is_hermitian():
        raise NotHermitian(f"hermitian defect {b.hermitian_defect():.3e}")
    out = []
    for a in b.blocks:
        eye = np.eye(a.shape[0])
        out.append(np.linalg.solve(a + 1j * eye, a - 1j * eye))
    return Element._raw(b.shape, out)


def cayley_gap_norm(u: Element) -> float:
    """``|(1 - u)^{-1}|_inf``; at most ``1/sqrt(2)`` when ``|b|_inf <= 1``."""
    inv = u.map_blocks(lambda a: np.linalg.inv(np.eye(a.shape[0]) - a))
    return operator_norm(inv)
