"""Block-diagonal complex matrices over a finite-dimensional tracial algebra.

An :class:`AlgebraShape` is a direct sum of full matrix algebras
``M_{d_1} + ... + M_{d_k}`` with trace ``sum_k w_k Tr_k``; an
:class:`Element` stores one dense ``d_k x d_k`` block per summand.  The
spectral routines run the Jacobi kernels from :mod:`mazurlab.kernels`
block by block.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

import numpy as np

from . import kernels
from .errors import NoConvergence, NotHermitian, NotPositive, ShapeMismatch

MAX_SWEEPS = 100
HERMITIAN_TOL = 1e-10
# eigenvalues in [-PSD_CLAMP * |x|, 0) are roundoff; anything lower is a bug
PSD_CLAMP = 1e-10
# singular values below SUPPORT_TOL * sigma_max are treated as zero
SUPPORT_TOL = 1e-13

_MASK64 = (1 << 64) - 1


# ---------------------------------------------------------------------------
# shapes and elements


@dataclass(frozen=True)
class AlgebraShape:
    """Block dimensions and positive trace weights, one pair per summand."""

    blocks: tuple[tuple[int, float], ...]

    def __post_init__(self):
        blocks = tuple((int(d), float(w)) for d, w in self.blocks)
        if not blocks:
            raise ValueError("an algebra needs at least one block")
        for d, w in blocks:
            if d < 1:
                raise ValueError(f"block dimension must be >= 1, got {d}")
            if not (w > 0 and math.isfinite(w)):
                raise ValueError(f"trace weight must be positive and finite, got {w}")
        object.__setattr__(self, "blocks", blocks)

    @classmethod
    def single(cls, dim: int, weight: float = 1.0) -> "AlgebraShape":
        return cls(((dim, weight),))

    @classmethod
    def of(cls, dims: Iterable[int], weights: Iterable[float] | None = None) -> "AlgebraShape":
        dims = list(dims)
        weights = [1.0] * len(dims) if weights is None else list(weights)
        return cls(tuple(zip(dims, weights)))

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(d for d, _ in self.blocks)

    @property
    def weights(self) -> tuple[float, ...]:
        return tuple(w for _, w in self.blocks)

    @property
    def total_weight(self) -> float:
        """Trace of the identity."""
        return sum(d * w for d, w in self.blocks)

    def doubled(self) -> "AlgebraShape":
        """Shape of ``M_2(M)`` with the tensor trace ``Tr_2 (x) tau``."""
        return AlgebraShape(tuple((2 * d, w) for d, w in self.blocks))

    def __str__(self):
        return "+".join(f"M{d}" if w == 1.0 else f"M{d}@{w:g}" for d, w in self.blocks)


class Element:
    """Immutable element of the algebra described by ``shape``.

    Arithmetic (``+``, ``-``, scalar ``*``, ``@``) acts block by block.
    Spectral data computed once is cached on the instance.
    """

    __slots__ = ("shape", "blocks", "_eig", "_svd", "_sv")

    def __init__(self, shape: AlgebraShape, blocks: Sequence, *, check: bool = True):
        blocks = tuple(np.asarray(b, dtype=np.complex128) for b in blocks)
        if check:
            if len(blocks) != len(shape.blocks):
                raise ShapeMismatch(f"{len(blocks)} blocks for shape {shape}")
            for b, d in zip(blocks, shape.dims):
                if b.shape != (d, d):
                    raise ShapeMismatch(f"block of shape {b.shape}, expected {(d, d)}")
                if not np.all(np.isfinite(b)):
                    raise ValueError("element entries must be finite")
            for b in blocks:
                b.flags.writeable = False
        self.shape = shape
        self.blocks = blocks
        self._eig = None
        self._svd = None
        self._sv = None

    @classmethod
    def _raw(cls, shape, blocks) -> "Element":
        out = cls.__new__(cls)
        out.shape = shape
        out.blocks = tuple(blocks)
        out._eig = None
        out._svd = None
        out._sv = None
        return out

    @classmethod
    def from_matrix(cls, m, weight: float = 1.0) -> "Element":
        m = np.atleast_2d(np.asarray(m, dtype=np.complex128))
        return cls(AlgebraShape.single(m.shape[0], weight), [m])

    @classmethod
    def diag(cls, values, weight: float = 1.0) -> "Element":
        return cls.from_matrix(np.diag(np.asarray(values, dtype=np.complex128)), weight)

    @classmethod
    def zeros(cls, shape: AlgebraShape) -> "Element":
        return cls._raw(shape, [np.zeros((d, d), np.complex128) for d in shape.dims])

    @classmethod
    def identity(cls, shape: AlgebraShape) -> "Element":
        return cls._raw(shape, [np.eye(d, dtype=np.complex128) for d in shape.dims])

    # arithmetic -----------------------------------------------------------

    def _check_same(self, other):
        if not isinstance(other, Element):
            return NotImplemented
        if other.shape != self.shape:
            raise ShapeMismatch(f"{self.shape} vs {other.shape}")
        return other

    def __add__(self, other):
        if self._check_same(other) is NotImplemented:
            return NotImplemented
        return Element._raw(self.shape, [a + b for a, b in zip(self.blocks, other.blocks)])

    def __sub__(self, other):
        if self._check_same(other) is NotImplemented:
            return NotImplemented
        return Element._raw(self.shape, [a - b for a, b in zip(self.blocks, other.blocks)])

    def __matmul__(self, other):
        if self._check_same(other) is NotImplemented:
            return NotImplemented
        return Element._raw(self.shape, [a @ b for a, b in zip(self.blocks, other.blocks)])

    def __mul__(self, scalar):
        if isinstance(scalar, Element):
            return NotImplemented
        return Element._raw(self.shape, [scalar * a for a in self.blocks])

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        return self * (1.0 / scalar)

    def __neg__(self):
        return Element._raw(self.shape, [-a for a in self.blocks])

    @property
    def H(self) -> "Element":
        """Adjoint."""
        return Element._raw(self.shape, [a.conj().T for a in self.blocks])

    def commutator(self, other: "Element") -> "Element":
        return self @ other - other @ self

    def map_blocks(self, fn: Callable[[np.ndarray], np.ndarray]) -> "Element":
        return Element._raw(self.shape, [fn(a) for a in self.blocks])

    def hermitian_defect(self) -> float:
        """Frobenius norm of ``x - x*`` relative to ``max(1, |x|_F)``."""
        num = sum(float(np.sum(np.abs(a - a.conj().T) ** 2)) for a in self.blocks)
        den = sum(float(np.sum(np.abs(a) ** 2)) for a in self.blocks)
        return math.sqrt(num) / max(1.0, math.sqrt(den))

    def is_hermitian(self, tol: float = HERMITIAN_TOL) -> bool:
        return self.hermitian_defect() <= tol

    def to_dense(self) -> np.ndarray:
        n = sum(self.shape.dims)
        out = np.zeros((n, n), np.complex128)
        i = 0
        for a in self.blocks:
            d = a.shape[0]
            out[i:i + d, i:i + d] = a
            i += d
        return out

    def allclose(self, other: "Element", atol: float = 1e-12) -> bool:
        return self.shape == other.shape and all(
            np.allclose(a, b, rtol=0.0, atol=atol) for a, b in zip(self.blocks, other.blocks))

    def __repr__(self):
        return f"Element({self.shape}, {[b.tolist() for b in self.blocks]!r})"


def hermitian_part(x: Element) -> Element:
    return x.map_blocks(lambda a: 0.5 * (a + a.conj().T))


def block_2x2(a11: Element, a12: Element, a21: Element, a22: Element) -> Element:
    """Element of ``M_2(M)`` from four entries, block by block."""
    shape = a11.shape
    for e in (a12, a21, a22):
        if e.shape != shape:
            raise ShapeMismatch(f"{shape} vs {e.shape}")
    blocks = [np.block([[b11, b12], [b21, b22]]) for b11, b12, b21, b22 in
              zip(a11.blocks, a12.blocks, a21.blocks, a22.blocks)]
    return Element._raw(shape.doubled(), blocks)


def corner(x: Element, i: int, j: int) -> Element:
    """Entry ``(i, j)`` of an element of ``M_2(M)`` built by :func:`block_2x2`."""
    half = AlgebraShape(tuple((d // 2, w) for d, w in x.shape.blocks))
    out = []
    for a, d in zip(x.blocks, half.dims):
        out.append(a[i * d:(i + 1) * d, j * d:(j + 1) * d].copy())
    return Element._raw(half, out)


# ---------------------------------------------------------------------------
# spectral data


@dataclass(frozen=True)
class SpectralDecomposition:
    """Ascending eigenvalues and unitary eigenvectors, one pair per block."""

    shape: AlgebraShape
    eigenvalues: tuple[np.ndarray, ...]
    eigenvectors: tuple[np.ndarray, ...]

    def apply(self, fn: Callable[[np.ndarray], np.ndarray]) -> Element:
        """Functional calculus ``V fn(Lambda) V*``; the result is Hermitian-symmetrized."""
        out = []
        for lam, v in zip(self.eigenvalues, self.eigenvectors):
            m = (v * fn(lam)) @ v.conj().T
            out.append(0.5 * (m + m.conj().T))
        return Element._raw(self.shape, out)

    def min_eigenvalue(self) -> float:
        return min(float(lam[0]) for lam in self.eigenvalues)

    def max_abs_eigenvalue(self) -> float:
        return max(float(np.max(np.abs(lam))) for lam in self.eigenvalues)


@dataclass(frozen=True)
class SVD:
    """``x = U diag(s) V*`` per block with ``s`` descending.

    Columns of ``U`` outside the numerical support are zero.
    """

    shape: AlgebraShape
    u: tuple[np.ndarray, ...]
    s: tuple[np.ndarray, ...]
    v: tuple[np.ndarray, ...]

    def support(self) -> tuple[np.ndarray, ...]:
        return tuple(np.linalg.norm(u, axis=0) > 0 for u in self.u)

    def max_singular_value(self) -> float:
        return max(float(s[0]) for s in self.s)


@dataclass(frozen=True)
class PolarDecomposition:
    isometry: Element
    modulus: Element


def hermitian_eig(x: Element) -> SpectralDecomposition:
    """Eigendecomposition of a Hermitian element by cyclic Jacobi.

    Raises :class:`NotHermitian` when ``|x - x*|_F > 1e-10 max(1, |x|_F)``
    and :class:`NoConvergence` if a block exhausts the sweep budget.
    """
    if x._eig is not None:
        return x._eig
    if x.hermitian_defect() > HERMITIAN_TOL:
        raise NotHermitian(f"hermitian defect {x.hermitian_defect():.3e}")
    lams, vecs = [], []
    for a in x.blocks:
        w, v, sweeps = kernels.heevj(a, MAX_SWEEPS)
        if sweeps < 0:
            raise NoConvergence(f"Jacobi exceeded {MAX_SWEEPS} sweeps on a {a.shape[0]}x{a.shape[0]} block")
        lams.append(w)
        vecs.append(v)
    x._eig = SpectralDecomposition(x.shape, tuple(lams), tuple(vecs))
    return x._eig


def psd_eig(x: Element) -> SpectralDecomposition:
    """Eigendecomposition of a nominally PSD element with roundoff clamping.

    Eigenvalues in ``[-1e-10 |x|_inf, 0)`` become 0; anything more negative
    raises :class:`NotPositive`.
    """
    sd = hermitian_eig(x)
    scale = sd.max_abs_eigenvalue()
    if sd.min_eigenvalue() >= 0.0:
        return sd
    if sd.min_eigenvalue() < -PSD_CLAMP * scale:
        raise NotPositive(f"eigenvalue {sd.min_eigenvalue():.3e} with |x| = {scale:.3e}")
    return SpectralDecomposition(x.shape, tuple(np.maximum(lam, 0.0) for lam in sd.eigenvalues),
                                 sd.eigenvectors)


def svd(x: Element) -> SVD:
    """Singular value decomposition by one-sided Jacobi, block by block."""
    if x._svd is not None:
        return x._svd
    us, ss, vs = [], [], []
    for a in x.blocks:
        g, v, sweeps = kernels.svdj(a, MAX_SWEEPS)
        if sweeps < 0:
            raise NoConvergence(f"one-sided Jacobi exceeded {MAX_SWEEPS} sweeps")
        s = np.linalg.norm(g, axis=0)
        order = np.argsort(-s, kind="stable")
        s, g, v = s[order], g[:, order], v[:, order]
        keep = s > SUPPORT_TOL * s[0] if s[0] > 0 else np.zeros(len(s), bool)
        u = np.zeros_like(g)
        u[:, keep] = g[:, keep] / s[keep]
        us.append(u)
        ss.append(s)
        vs.append(v)
    x._svd = SVD(x.shape, tuple(us), tuple(ss), tuple(vs))
    return x._svd


def singular_values(x: Element) -> tuple[np.ndarray, ...]:
    """Per-block singular values; absolute eigenvalues when ``x`` is Hermitian."""
    if x._sv is not None:
        return x._sv
    if x._eig is not None:
        sv = tuple(-np.sort(-np.abs(lam)) for lam in x._eig.eigenvalues)
    elif x._svd is not None:
        sv = x._svd.s
    else:
        out = []
        for a in x.blocks:
            s, sweeps = kernels.svdvals(a, MAX_SWEEPS)
            if sweeps < 0:
                raise NoConvergence(f"one-sided Jacobi exceeded {MAX_SWEEPS} sweeps")
            out.append(s)
        sv = tuple(out)
    x._sv = sv
    return sv


def operator_norm(x: Element) -> float:
    return max(float(np.max(s)) for s in singular_values(x))


def polar(x: Element) -> PolarDecomposition:
    """``x = u |x|`` with ``u*u`` the support projection of ``|x|``."""
    d = svd(x)
    us, mods = [], []
    for u, s, v in zip(d.u, d.s, d.v):
        vh = v.conj().T
        us.append(u @ vh)
        m = (v * s) @ vh
        mods.append(0.5 * (m + m.conj().T))
    return PolarDecomposition(Element._raw(x.shape, us), Element._raw(x.shape, mods))


def pos_neg_parts(x: Element):
    """Split a self-adjoint ``x`` as ``x_plus - x_minus``.

    Returns ``(x_plus, x_minus, e_plus, e_minus)`` where ``e_plus`` is the
    spectral projection on ``[0, inf)`` and ``e_minus`` on ``(-inf, 0)``.
    """
    sd = hermitian_eig(x)
    x_plus = sd.apply(lambda lam: np.where(lam >= 0, lam, 0.0))
    x_minus = sd.apply(lambda lam: np.where(lam < 0, -lam, 0.0))
    e_plus = sd.apply(lambda lam: (lam >= 0).astype(float))
    e_minus = sd.apply(lambda lam: (lam < 0).astype(float))
    return x_plus, x_minus, e_plus, e_minus


# ---------------------------------------------------------------------------
# randomness


def mix64(seed: int, index: int) -> int:
    """SplitMix64 finalizer applied to ``seed + (index + 1) * golden``.

    This is the fixed derivation of per-trial (and per-cell) seeds.
    """
    z = (seed + (index + 1) * 0x9E3779B97F4A7C15) & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


_SQRT_HALF = math.sqrt(0.5)


class Rng:
    """Counter-based generator: numpy's Philox-4x64 keyed by a 64-bit seed.

    The stream for a seed is fixed: key ``(seed, 0)``, counter starting at
    zero.  :meth:`reseed` rewinds in place, which is much cheaper than
    building a new generator per trial.
    """

    def __init__(self, seed: int):
        self._bg = np.random.Philox(key=int(seed) & _MASK64)
        self.gen = np.random.Generator(self._bg)
        self.seed = int(seed) & _MASK64

    def reseed(self, seed: int) -> "Rng":
        self.seed = int(seed) & _MASK64
        self._bg.state = {
            "bit_generator": "Philox",
            "state": {"counter": np.zeros(4, np.uint64),
                      "key": np.array([self.seed, 0], np.uint64)},
            "buffer": np.zeros(4, np.uint64),
            "buffer_pos": 4,
            "has_uint32": 0,
            "uinteger": 0,
        }
        return self

    def derive(self, index: int) -> "Rng":
        return Rng(mix64(self.seed, index))

    @property
    def position(self) -> tuple[int, int]:
        """(Philox block counter, words consumed in the current block)."""
        st = self._bg.state
        c = st["state"]["counter"]
        return int(c[0]) | (int(c[1]) << 64), int(st["buffer_pos"])

    def uniform(self, lo=0.0, hi=1.0, size=None):
        return self.gen.uniform(lo, hi, size)

    def normal(self, size=None):
        return self.gen.standard_normal(size)

    def complex_normal(self, size):
        """Standard complex Gaussian: ``E|z|^2 = 1``."""
        shape = (size,) if isinstance(size, int) else tuple(size)
        g = self.gen.standard_normal(shape + (2,))
        return g.view(np.complex128)[..., 0] * _SQRT_HALF

    def integers(self, lo, hi=None, size=None):
        return self.gen.integers(lo, hi, size)


def haar_unitary(n: int, rng: Rng) -> np.ndarray:
    """Haar unitary: Gram-Schmidt QR of a complex Gaussian, R diagonal positive."""
    return kernels.haar_unitary(rng.complex_normal((n, n)))


def _spectral_element(shape, lams, vecs) -> Element:
    blocks = []
    sorted_l, sorted_v = [], []
    for lam, v in zip(lams, vecs):
        order = np.argsort(lam, kind="stable")
        lam, v = lam[order], v[:, order]
        m = (v * lam) @ v.conj().T
        blocks.append(0.5 * (m + m.conj().T))
        sorted_l.append(lam)
        sorted_v.append(v)
    x = Element._raw(shape, blocks)
    x._eig = SpectralDecomposition(shape, tuple(sorted_l), tuple(sorted_v))
    return x


def random_positive(shape: AlgebraShape, rng: Rng, lo: float = 1e-3, hi: float = 1.0) -> Element:
    """PSD element with log-uniform spectrum in ``[lo, hi]`` and Haar eigenbasis.

    The generating eigensystem is kept as the element's spectral cache, so
    later functional calculus on it does not re-diagonalize.
    """
    if not (0 < lo <= hi):
        raise ValueError(f"need 0 < lo <= hi, got [{lo}, {hi}]")
    lams, vecs = [], []
    for d in shape.dims:
        v = haar_unitary(d, rng)
        if lo == hi:
            lam = np.full(d, float(lo))
        else:
            lam = np.exp(rng.uniform(math.log(lo), math.log(hi), d))
        lams.append(lam)
        vecs.append(v)
    return _spectral_element(shape, lams, vecs)


def random_selfadjoint(shape: AlgebraShape, rng: Rng, scale: float = 1.0) -> Element:
    blocks = []
    for d in shape.dims:
        g = rng.complex_normal((d, d))
        blocks.append(scale * 0.5 * (g + g.conj().T))
    return Element._raw(shape, blocks)


def random_element(shape: AlgebraShape, rng: Rng, scale: float = 1.0) -> Element:
    return Element._raw(shape, [scale * rng.complex_normal((d, d)) for d in shape.dims])


def random_contraction(shape: AlgebraShape, rng: Rng, selfadjoint: bool = False) -> Element:
    """Gaussian element divided by its operator norm, scaled by uniform(0, 1]."""
    g = random_selfadjoint(shape, rng) if selfadjoint else random_element(shape, rng)
    nrm = operator_norm(g)
    factor = 1.0 - rng.uniform()  # in (0, 1]
    if nrm == 0.0:
        return g
    b = g * (factor / nrm)
    if selfadjoint:
        b = hermitian_part(b)
    return b
