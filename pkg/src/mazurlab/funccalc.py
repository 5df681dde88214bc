"""Operator function calculus for positive elements.

Two independent routes to fractional powers are provided: spectral
calculus on the Jacobi eigensystem (:func:`power_pos`) and quadrature of
the Stieltjes-type representation

    s**theta = c_theta * int_0^inf t**theta * s / (s + t) dt / t

evaluated with matrix resolvents only (:func:`power_via_integral`).  The
same machinery gives the difference formula for ``x**(1+theta) -
y**(1+theta)`` and the averaging family behind it.

Quadrature.  With ``t = sigma * exp(v)`` the measure ``dt/t`` becomes
``dv`` and the integrand is analytic in a strip, so the composite
trapezoid rule converges geometrically.  The nodes outside ``[-L, L]``
are not negligible for ``theta`` near 0 or 1 (the integrand decays only
like ``exp(theta v)`` and ``exp((theta - 1) v)``), so each integral adds
the trapezoid sum over the missing nodes, in closed form, for the leading
exponential of the integrand at either end.  ``sigma`` centres the window
on the spectrum of the argument.
"""
from __future__ import annotations

import functools
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, IllConditioned, NotPositive
from .matcore import Element, hermitian_eig, psd_eig

# integral routes need min eigenvalue >= INVERTIBILITY_FLOOR * |x|_inf
INVERTIBILITY_FLOOR = 1e-8


@dataclass(frozen=True)
class QuadratureScheme:
    """Composite trapezoid in ``v = log(t / sigma)`` on ``[-L, L]``."""

    L: float = 30.0
    N: int = 2000
    tail_correction: bool = True

    def __post_init__(self):
        if not self.L > 0:
            raise ValueError("L must be positive")
        if self.N < 2:
            raise ValueError("need at least two nodes")

    @property
    def step(self) -> float:
        return 2.0 * self.L / (self.N - 1)

    def nodes(self) -> tuple[np.ndarray, np.ndarray]:
        """Nodes and weights; endpoints carry a full step when tails are summed."""
        v = np.linspace(-self.L, self.L, self.N)
        h = self.step
        w = np.full(self.N, h)
        if not self.tail_correction:
            w[0] = w[-1] = 0.5 * h
        return v, w


DEFAULT_SCHEME = QuadratureScheme()


def _check_theta(theta):
    if not 0.0 < theta < 1.0:
        raise DomainError(f"theta must lie in (0, 1), got {theta}")


def _geometric_tail(rate: float, L: float, h: float) -> float:
    """``h * sum_{m>=1} exp(-rate (L + m h))``: trapezoid nodes beyond the cut."""
    r = math.exp(-rate * h)
    return h * math.exp(-rate * L) * r / (1.0 - r)


def _scalar_tail(theta: float, L: float, h: float, terms: int = 8) -> float:
    # e^{theta v}/(1+e^v) expanded at both ends, summed over the missing nodes
    lower = sum((-1) ** k * _geometric_tail(theta + k, L, h) for k in range(terms))
    upper = sum((-1) ** k * _geometric_tail(1 + k - theta, L, h) for k in range(terms))
    return lower + upper


def stieltjes_integral(theta: float, scheme: QuadratureScheme = DEFAULT_SCHEME) -> float:
    """Quadrature value of ``int_0^inf u**theta / (u (1 + u)) du``."""
    _check_theta(theta)
    v, w = scheme.nodes()
    # e^{theta v}/(1+e^v) written to avoid overflow at large v
    vals = np.where(v < 0, np.exp(theta * v) / (1.0 + np.exp(v)),
                    np.exp((theta - 1.0) * v) / (1.0 + np.exp(-v)))
    total = float(np.dot(w, vals))
    if scheme.tail_correction:
        total += _scalar_tail(theta, scheme.L, scheme.step)
    return total


@functools.lru_cache(maxsize=256)
def _c_theta_cached(theta: float, scheme: QuadratureScheme) -> float:
    return 1.0 / stieltjes_integral(theta, scheme)


def c_theta(theta: float, scheme: QuadratureScheme = DEFAULT_SCHEME) -> float:
    """Normalising constant of the integral representation of ``s**theta``.

    Computed as the reciprocal of the quadrature of its defining integral;
    it agrees with ``sin(pi theta) / pi`` to about 1e-15.
    """
    _check_theta(theta)
    return _c_theta_cached(float(theta), scheme)


# ---------------------------------------------------------------------------
# spectral route


def power_pos(x: Element, alpha: float) -> Element:
    """``x**alpha`` for PSD ``x`` by spectral calculus, with ``0**alpha = 0``."""
    if not alpha > 0:
        raise DomainError(f"alpha must be positive, got {alpha}")
    sd = psd_eig(x)
    if alpha == 1.0:
        return sd.apply(lambda lam: lam)
    return sd.apply(lambda lam: np.where(lam > 0, np.abs(lam) ** alpha, 0.0))


def signed_power(x: Element, alpha: float) -> Element:
    """``sign(x) |x|**alpha`` for self-adjoint ``x``."""
    if not alpha > 0:
        raise DomainError(f"alpha must be positive, got {alpha}")
    sd = hermitian_eig(x)
    if sd.min_eigenvalue() >= 0.0:
        return power_pos(x, alpha)
    return sd.apply(lambda lam: np.sign(lam) * np.abs(lam) ** alpha)


# ---------------------------------------------------------------------------
# resolvent route


def _invertible_scale(x: Element) -> float:
    """Check the invertibility floor and return a window centre for ``t``."""
    sd = psd_eig(x)
    top = sd.max_abs_eigenvalue()
    low = sd.min_eigenvalue()
    if top == 0.0 or low < INVERTIBILITY_FLOOR * top:
        raise IllConditioned(f"min eigenvalue {low:.3e} below {INVERTIBILITY_FLOOR:g} * {top:.3e}")
    return math.sqrt(low * top)


def _resolvent_stack(a: np.ndarray, ts: np.ndarray) -> np.ndarray:
    """``g_t(a) = (a + t)^{-1} a`` for every ``t`` in ``ts``, shape (N, d, d)."""
    d = a.shape[0]
    eye = np.eye(d)
    lhs = a[None, :, :] + ts[:, None, None] * eye
    rhs = np.broadcast_to(a, lhs.shape)
    return np.linalg.solve(lhs, rhs)


def _log_weights(theta, scheme, sigma):
    """Nodes ``t_j`` and weights absorbing ``t**theta`` (no ``c_theta``)."""
    v, w = scheme.nodes()
    ts = sigma * np.exp(v)
    return ts, w * sigma ** theta * np.exp(theta * v)


def _tail_weights(theta, scheme, sigma, decay=1):
    """Weights of the closed-form tails.

    Lower tail multiplies the ``t -> 0`` limit of the integrand; upper tail
    multiplies the coefficient of ``t**-decay`` at infinity.
    """
    if not scheme.tail_correction:
        return 0.0, 0.0
    L, h = scheme.L, scheme.step
    lower = sigma ** theta * _geometric_tail(theta, L, h)
    upper = sigma ** (theta - decay) * _geometric_tail(decay - theta, L, h)
    return lower, upper


def resolvent_map(x: Element, t: float) -> Element:
    """``g_t(x) = x (x + t)^{-1}``, a positive contraction for PSD ``x``."""
    if not t > 0:
        raise DomainError(f"t must be positive, got {t}")
    psd_eig(x)
    out = []
    for a in x.blocks:
        g = np.linalg.solve(a + t * np.eye(a.shape[0]), a)
        out.append(0.5 * (g + g.conj().T))
    return Element._raw(x.shape, out)


def power_via_integral(x: Element, theta: float,
                       scheme: QuadratureScheme = DEFAULT_SCHEME) -> Element:
    """``x**theta`` from ``c_theta int t**theta x (x+t)^{-1} dt/t`` by quadrature.

    Only linear solves touch ``x`` in the integral; the eigensystem is used
    solely to enforce the invertibility floor and centre the window.
    """
    _check_theta(theta)
    sigma = _invertible_scale(x)
    ts, wt = _log_weights(theta, scheme, sigma)
    low, up = _tail_weights(theta, scheme, sigma, decay=1)
    c = c_theta(theta, scheme)
    out = []
    for a in x.blocks:
        acc = np.tensordot(wt, _resolvent_stack(a, ts), axes=1)
        acc = acc + low * np.eye(a.shape[0]) + up * a
        acc = c * acc
        out.append(0.5 * (acc + acc.conj().T))
    return Element._raw(x.shape, out)


def f_t(s: Element, t: float) -> Element:
    """``s**2 / (s + t) = s (s+t)^{-1} s``."""
    return s.map_blocks(lambda a: a @ np.linalg.solve(a + t * np.eye(a.shape[0]), a))


def frechet_f_t(s: Element, t: float, delta: Element) -> Element:
    """Derivative of ``s -> s (s+t)^{-1} s`` at ``s`` in direction ``delta``.

    ``delta (s+t)^{-1} s + s (s+t)^{-1} delta - s (s+t)^{-1} delta (s+t)^{-1} s``
    """
    if not t > 0:
        raise DomainError(f"t must be positive, got {t}")
    sd = psd_eig(s)
    if sd.min_eigenvalue() <= 0.0:
        raise NotPositive("s must be invertible")
    out = []
    for a, dl in zip(s.blocks, delta.blocks):
        k = np.linalg.solve(a + t * np.eye(a.shape[0]), a)  # (s+t)^{-1} s
        kh = k.conj().T  # s (s+t)^{-1}
        out.append(dl @ k + kh @ dl - kh @ dl @ k)
    return Element._raw(s.shape, out)


def _frechet_integral_block(a, dl, theta, scheme, sigma):
    """``c_theta int t**theta D_a f_t(dl) dt/t`` for one block."""
    ts, wt = _log_weights(theta, scheme, sigma)
    low, up = _tail_weights(theta, scheme, sigma, decay=1)
    k = _resolvent_stack(a, ts)  # (N, d, d), Hermitian up to roundoff
    kh = np.conj(np.swapaxes(k, 1, 2))
    d = dl @ k + kh @ dl - kh @ dl @ k
    acc = np.tensordot(wt, d, axes=1)
    # t -> 0: D -> delta ; t -> inf: D ~ (delta a + a delta) / t
    acc = acc + low * dl + up * (dl @ a + a @ dl)
    return c_theta(theta, scheme) * acc


def _second_derivative_block(a, dl, theta, scheme, sigma):
    """``d^2/du^2`` of ``(a + u dl)**(1+theta)`` at ``u = 0``, by quadrature.

    Uses ``f_t(s) = s - t + t^2 (s+t)^{-1}``, whose second derivative is
    ``2 t^2 R dl R dl R`` with ``R = (s+t)^{-1}``.
    """
    ts, wt = _log_weights(theta, scheme, sigma)
    _, up = _tail_weights(theta, scheme, sigma, decay=1)
    eye = np.eye(a.shape[0])
    r = np.linalg.solve(a[None, :, :] + ts[:, None, None] * eye,
                        np.broadcast_to(eye, (len(ts),) + eye.shape))
    d2 = 2.0 * (ts ** 2)[:, None, None] * (r @ dl @ r @ dl @ r)
    acc = np.tensordot(wt, d2, axes=1) + up * 2.0 * (dl @ dl)
    return c_theta(theta, scheme) * acc


def _trapezoid_unit(n: int):
    u = np.linspace(0.0, 1.0, n)
    w = np.full(n, 1.0 / (n - 1))
    w[0] = w[-1] = 0.5 / (n - 1)
    return u, w


def power_diff_integral(x: Element, y: Element, theta: float,
                        scheme: QuadratureScheme = DEFAULT_SCHEME,
                        u_nodes: int = 64, endpoint_correction: bool = True) -> Element:
    """``x**(1+theta) - y**(1+theta)`` by the double integral of ``D f_t``.

    ``c_theta int_0^1 int t**theta D_{y+u delta} f_t(delta) dt/t du`` with
    ``delta = x - y``; trapezoid in ``u``, log-trapezoid in ``t``.  The
    endpoint correction subtracts the leading Euler-Maclaurin term
    ``h^2/12 (F'(1) - F'(0))`` of the ``u`` rule, lifting it to order ``h^4``.
    """
    _check_theta(theta)
    if u_nodes < 2:
        raise ValueError("u_nodes must be >= 2")
    delta = x - y
    us, uw = _trapezoid_unit(u_nodes)
    acc = [np.zeros_like(a) for a in x.blocks]
    for u, wu in zip(us, uw):
        s = y + u * delta
        sigma = _invertible_scale(s)
        for i, (a, dl) in enumerate(zip(s.blocks, delta.blocks)):
            acc[i] = acc[i] + wu * _frechet_integral_block(a, dl, theta, scheme, sigma)
    if endpoint_correction:
        h = 1.0 / (u_nodes - 1)
        ends = []
        for s in (y, x):
            sigma = _invertible_scale(s)
            ends.append([_second_derivative_block(a, dl, theta, scheme, sigma)
                         for a, dl in zip(s.blocks, delta.blocks)])
        acc = [a - h * h / 12.0 * (e1 - e0) for a, e0, e1 in zip(acc, *ends)]
    return Element._raw(x.shape, [0.5 * (a + a.conj().T) for a in acc])


def power_diff_terms(x: Element, y: Element, theta: float,
                     scheme: QuadratureScheme = DEFAULT_SCHEME, u_nodes: int = 64):
    """Split ``x**(1+theta) - y**(1+theta) = first - second``.

    ``first = int_0^1 (s_u**theta delta + delta s_u**theta) du`` (spectral)
    and ``second = c_theta int_0^1 int t**theta g_t(s_u) delta g_t(s_u) dt/t du``
    (quadrature), where ``s_u = y + u delta``.
    """
    _check_theta(theta)
    delta = x - y
    us, uw = _trapezoid_unit(u_nodes)
    first = [np.zeros_like(a) for a in x.blocks]
    second = [np.zeros_like(a) for a in x.blocks]
    c = c_theta(theta, scheme)
    for u, wu in zip(us, uw):
        s = y + u * delta
        sigma = _invertible_scale(s)
        st = power_pos(s, theta)
        ts, wt = _log_weights(theta, scheme, sigma)
        low, up = _tail_weights(theta, scheme, sigma, decay=2)
        for i, (a, dl, sth) in enumerate(zip(s.blocks, delta.blocks, st.blocks)):
            first[i] = first[i] + wu * (sth @ dl + dl @ sth)
            g = _resolvent_stack(a, ts)
            gdg = np.tensordot(wt, g @ dl @ g, axes=1)
            # t -> 0: g -> 1 ; t -> inf: g delta g ~ a delta a / t^2
            gdg = gdg + low * dl + up * (a @ dl @ a)
            second[i] = second[i] + wu * c * gdg
    return Element._raw(x.shape, first), Element._raw(x.shape, second)


@dataclass(frozen=True)
class ResolventFamily:
    """Discretized averaging family ``sum_j w_j v_j a v_j`` with ``sum_j w_j v_j**2 = 1``.

    ``weights`` already include ``c_theta`` and the tail nodes; ``gamma_sq``
    is ``sum_j w_j g_j**2`` for the same nodes.
    """

    weights: np.ndarray
    v: tuple[Element, ...]
    gamma_sq: Element
    gamma: Element


def _family_nodes(z: Element, theta, scheme):
    sigma = _invertible_scale(z)
    ts, wt = _log_weights(theta, scheme, sigma)
    low, up = _tail_weights(theta, scheme, sigma, decay=2)
    c = c_theta(theta, scheme)
    weights = list(c * wt)
    stacks = [_resolvent_stack(a, ts) for a in z.blocks]
    gs = [Element._raw(z.shape, [st[j] for st in stacks]) for j in range(len(ts))]
    if scheme.tail_correction:
        # t -> 0 node: g = 1 ; t -> inf node: g^2 ~ z^2 / t^2
        weights.append(c * low)
        gs.append(Element.identity(z.shape))
        weights.append(c * up)
        gs.append(z)
    return np.asarray(weights), gs


def gamma_square(z: Element, theta: float,
                 scheme: QuadratureScheme = DEFAULT_SCHEME) -> Element:
    """``c_theta int t**theta g_t(z)**2 dt/t``; dominated by ``z**theta``.

    (For scalars the integral equals ``(1 - theta) z**theta``.)
    """
    _check_theta(theta)
    weights, gs = _family_nodes(z, theta, scheme)
    out = []
    for b in range(len(z.blocks)):
        stack = np.stack([g.blocks[b] for g in gs])
        acc = np.tensordot(weights, stack @ stack, axes=1)
        out.append(0.5 * (acc + acc.conj().T))
    return Element._raw(z.shape, out)


def resolvent_family(z: Element, theta: float,
                     scheme: QuadratureScheme = DEFAULT_SCHEME) -> ResolventFamily:
    """Factor ``g_t(z) = v_t gamma`` with ``gamma = (gamma_square)**(1/2)``."""
    _check_theta(theta)
    weights, gs = _family_nodes(z, theta, scheme)
    gsq = []
    for b in range(len(z.blocks)):
        stack = np.stack([g.blocks[b] for g in gs])
        acc = np.tensordot(weights, stack @ stack, axes=1)
        gsq.append(0.5 * (acc + acc.conj().T))
    gamma_sq = Element._raw(z.shape, gsq)
    sd = psd_eig(gamma_sq)
    gamma = sd.apply(np.sqrt)
    gamma_inv = sd.apply(lambda lam: 1.0 / np.sqrt(lam))
    vs = tuple(g @ gamma_inv for g in gs)
    return ResolventFamily(weights, vs, gamma_sq, gamma)
