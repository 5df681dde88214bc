"""Schur multipliers in the eigenbasis of a positive element.

A multiplier is a real symmetric matrix ``m`` acting by entrywise product
after conjugating into a fixed orthonormal basis.  It is completely
positive exactly when ``m`` is PSD (Schur product theorem), which is how
positivity is certified here.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .errors import DomainError, NotNormalized, ShapeMismatch
from .matcore import Element, psd_eig

PSD_SLACK = 1e-10


@dataclass(frozen=True)
class Multiplier:
    matrix: np.ndarray
    basis: Optional[np.ndarray] = None  # None means the standard basis

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=float)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ShapeMismatch(f"multiplier must be square, got {m.shape}")
        if not np.all(np.isfinite(m)):
            raise ValueError("multiplier entries must be finite")
        if not np.allclose(m, m.T, rtol=0, atol=1e-14):
            raise ValueError("multiplier must be symmetric")
        object.__setattr__(self, "matrix", m)

    @property
    def size(self) -> int:
        return self.matrix.shape[0]

    def min_eigenvalue(self) -> float:
        return float(np.linalg.eigvalsh(self.matrix)[0])

    def is_positive(self, slack: float = PSD_SLACK) -> bool:
        return self.min_eigenvalue() >= -slack

    def is_unital(self) -> bool:
        return bool(np.all(np.diagonal(self.matrix) == 1.0))

    def in_basis(self, basis: np.ndarray) -> "Multiplier":
        return Multiplier(self.matrix, basis)


def _positive_spectrum(values, name):
    lam = np.asarray(values, dtype=float).ravel()
    if lam.size == 0 or not np.all(lam > 0):
        raise DomainError(f"{name} must be strictly positive")
    return lam


def multiplier_mean_power(lam: Sequence[float], alpha: float) -> Multiplier:
    """``m_ij = (l_i^a l_j^(1-a) + l_i^(1-a) l_j^a) / (l_i + l_j)``.

    Unital and PSD for every ``alpha`` in ``[0, 1]``.
    """
    lam = _positive_spectrum(lam, "lambda")
    if not 0.0 <= alpha <= 1.0:
        raise DomainError(f"alpha must lie in [0, 1], got {alpha}")
    li, lj = lam[:, None], lam[None, :]
    m = (li ** alpha * lj ** (1 - alpha) + li ** (1 - alpha) * lj ** alpha) / (li + lj)
    m = 0.5 * (m + m.T)
    np.fill_diagonal(m, 1.0)
    return Multiplier(m)


def multiplier_geometric(mu: Sequence[float]) -> Multiplier:
    """``m_ij = sqrt(mu_i mu_j) / (mu_i + mu_j)``; diagonal ``1/2``, PSD."""
    mu = _positive_spectrum(mu, "mu")
    r = np.sqrt(mu)
    m = np.outer(r, r) / (mu[:, None] + mu[None, :])
    m = 0.5 * (m + m.T)
    np.fill_diagonal(m, 0.5)
    return Multiplier(m)


def multiplier_for(x: Element, kind: str, alpha: float = 0.5) -> Multiplier:
    """Multiplier built from the spectrum of a single-block positive ``x``, in its eigenbasis."""
    if len(x.blocks) != 1:
        raise ShapeMismatch("multipliers act on single-block elements")
    sd = psd_eig(x)
    lam, v = sd.eigenvalues[0], sd.eigenvectors[0]
    if kind == "mean_power":
        m = multiplier_mean_power(lam, alpha)
    elif kind == "geometric":
        m = multiplier_geometric(lam)
    else:
        raise ValueError(f"unknown multiplier kind {kind!r}")
    return m.in_basis(v)


def schur_apply(m: Multiplier, a: Element) -> Element:
    """``B (m o (B* a B)) B*`` with ``B`` the multiplier's basis."""
    if len(a.blocks) != 1 or a.blocks[0].shape[0] != m.size:
        raise ShapeMismatch(f"multiplier of size {m.size} cannot act on {a.shape}")
    blk = a.blocks[0]
    if m.basis is None:
        return Element._raw(a.shape, [m.matrix * blk])
    b = m.basis
    inner = b.conj().T @ blk @ b
    return Element._raw(a.shape, [b @ (m.matrix * inner) @ b.conj().T])


def averaged_conjugation(weights, family: Sequence[Element], a: Element,
                         tol: float = 1e-6) -> Element:
    """``sum_j w_j v_j a v_j`` for a family normalised by ``sum_j w_j v_j^2 = 1``.

    Raises :class:`NotNormalized` when the normalisation is off by more
    than ``tol`` in operator norm.
    """
    weights = np.asarray(weights, dtype=float)
    if len(weights) != len(family):
        raise ValueError("one weight per family member")
    out = []
    for b in range(len(a.blocks)):
        vs = np.stack([v.blocks[b] for v in family])
        norm_defect = np.tensordot(weights, vs @ vs, axes=1) - np.eye(vs.shape[1])
        if np.linalg.norm(norm_defect, 2) > tol:
            raise NotNormalized(f"sum w_j v_j^2 deviates from 1 by {np.linalg.norm(norm_defect, 2):.3e}")
        out.append(np.tensordot(weights, vs @ a.blocks[b] @ vs, axes=1))
    return Element._raw(a.shape, out)
