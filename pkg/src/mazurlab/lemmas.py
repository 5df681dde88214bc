"""The power, commutator and anticommutator inequalities as executable checks.

Each ``check_*`` function evaluates one inequality on concrete elements and
returns a :class:`~mazurlab.records.CheckRecord`.  :func:`run_suite`
drives them over randomized instances, cell by cell, with per-trial seeds
derived from the base seed so that any record can be replayed from its
digest alone.
"""
from __future__ import annotations

import hashlib
import json
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Callable, Optional

import numpy as np

from .errors import DomainError, MazurlabError
from .funccalc import power_pos
from .mazur import MazurParams, in_unit_ball, mazur_map
from .matcore import (AlgebraShape, Element, Rng, _spectral_element, haar_unitary,
                      hermitian_eig, mix64, operator_norm, pos_neg_parts, psd_eig,
                      random_contraction, random_element, random_positive,
                      random_selfadjoint)
from .records import EMPIRICAL, SLACK_REL, CheckRecord, make_record, within_slack
from .schatten import INF, schatten_norm, trace

DEFAULT_CAP = 64.0
DECOMPOSITION_TOL = 1e-10
THEOREM_MIN_DISTANCE = 1e-6


# ---------------------------------------------------------------------------
# positive elements: powers


def check_power_contraction(x, y, theta, p, *, digest=None, slack=SLACK_REL):
    """``|x^t - y^t|_p <= |x - y|_{tp}^t`` for PSD ``x, y``, ``0 < t <= 1``."""
    _check_exponents(theta=theta, p=p)
    lhs = schatten_norm(power_pos(x, theta) - power_pos(y, theta), p)
    rhs = schatten_norm(x - y, theta * p) ** theta
    return make_record("power_contraction", lhs, rhs, 1.0, digest=digest, slack=slack)


def check_power_expansion(x, y, theta, p, *, digest=None, slack=SLACK_REL):
    """``|x^(1+t) - y^(1+t)|_p <= 3 |x - y|_{(1+t)p} max(|x|, |y|)_{(1+t)p}^t``."""
    _check_exponents(theta=theta, p=p)
    r = (1.0 + theta) * p
    lhs = schatten_norm(power_pos(x, 1.0 + theta) - power_pos(y, 1.0 + theta), p)
    big = max(schatten_norm(x, r), schatten_norm(y, r))
    rhs = schatten_norm(x - y, r) * big ** theta
    return make_record("power_expansion", lhs, rhs, 3.0, digest=digest, slack=slack)


def check_alpha_lipschitz(x, y, alpha, p, *, digest=None, slack=SLACK_REL):
    """``|x^a - y^a|_p <= 3a |x - y|_{ap} max(|x|, |y|)_{ap}^(a-1)`` for ``a > 1``."""
    if not alpha > 1:
        raise DomainError(f"alpha must exceed 1, got {alpha}")
    _check_exponents(p=p)
    r = alpha * p
    lhs = schatten_norm(power_pos(x, alpha) - power_pos(y, alpha), p)
    big = max(schatten_norm(x, r), schatten_norm(y, r))
    rhs = schatten_norm(x - y, r) * big ** (alpha - 1.0)
    return make_record("alpha_lipschitz", lhs, rhs, 3.0 * alpha, digest=digest, slack=slack)


# ---------------------------------------------------------------------------
# commutators and anticommutators


def check_commutator_up(x, b, theta, p, *, digest=None, slack=SLACK_REL):
    """``|[x^t, b]|_{p/t} <= 2^t |b|_inf^(1-t) |[x, b]|_p^t``."""
    _check_exponents(theta=theta, p=p)
    xt = power_pos(x, theta)
    lhs = schatten_norm(xt.commutator(b), p / theta)
    rhs = operator_norm(b) ** (1.0 - theta) * schatten_norm(x.commutator(b), p) ** theta
    return make_record("commutator_up", lhs, rhs, 2.0 ** theta, digest=digest, slack=slack)


def check_commutator_down(x, b, theta, p, *, digest=None, slack=SLACK_REL):
    """``|[x, b]|_p <= (12/t) |x|_p^(1-t) |[x^t, b]|_{p/t}``."""
    _check_exponents(theta=theta, p=p)
    xt = power_pos(x, theta)
    lhs = schatten_norm(x.commutator(b), p)
    rhs = schatten_norm(x, p) ** (1.0 - theta) * schatten_norm(xt.commutator(b), p / theta)
    return make_record("commutator_down", lhs, rhs, 12.0 / theta, digest=digest, slack=slack)


def _anti(x, b, y):
    return x @ b + b @ y


def check_anticommutator_up(x, y, b, theta, p, *, cap=DEFAULT_CAP, digest=None,
                            slack=SLACK_REL):
    """``|x^t b + b y^t|_{p/t}`` against ``|b|_inf^(1-t) |x b + b y|_p^t``.

    The constant is not explicit, so the ratio is the output.  For ``p = 1``
    and ``t <= 1/2`` the record also tests the explicit constant 2 obtained
    from Jensen's inequality (after the 2x2 reduction to ``x = y``).
    """
    _check_exponents(theta=theta, p=p)
    lhs = schatten_norm(_anti(power_pos(x, theta), b, power_pos(y, theta)), p / theta)
    rhs = operator_norm(b) ** (1.0 - theta) * schatten_norm(_anti(x, b, y), p) ** theta
    rec = make_record("anticommutator_up", lhs, rhs, EMPIRICAL, cap=cap, digest=digest)
    if p == 1.0 and theta <= 0.5:
        ok = within_slack(lhs, 2.0 * rhs, slack)
        rec.extras.update(jensen_constant=2.0, jensen_pass=ok)
        if not ok:
            rec.passed = False
    return rec


def check_anticommutator_down(x, y, b, theta, p, *, cap=DEFAULT_CAP, digest=None):
    """``|x b + b y|_p`` against ``max(|x|_p, |y|_p)^(1-t) |x^t b + b y^t|_{p/t}``."""
    _check_exponents(theta=theta, p=p)
    lhs = schatten_norm(_anti(x, b, y), p)
    big = max(schatten_norm(x, p), schatten_norm(y, p))
    rhs = big ** (1.0 - theta) * schatten_norm(
        _anti(power_pos(x, theta), b, power_pos(y, theta)), p / theta)
    return make_record("anticommutator_down", lhs, rhs, EMPIRICAL, cap=cap, digest=digest)


def check_jensen_chain(x, b, theta, *, digest=None, slack=SLACK_REL):
    """``|x^t b + b x^t|_{1/t} <= 2 |x b + b x|_1^t`` for ``|b|_inf <= 1``, ``t <= 1/2``.

    Every link of the chain (raised to the power ``1/t``) is recorded in
    ``extras["chain"]`` and must be nondecreasing within the slack.
    """
    if not 0.0 < theta <= 0.5:
        raise DomainError(f"the Jensen chain needs 0 < theta <= 1/2, got {theta}")
    bn = operator_norm(b)
    if bn > 1.0 + 1e-12:
        raise DomainError(f"b must be a contraction, |b| = {bn}")
    e = 1.0 / theta
    xt = power_pos(x, theta)
    x2t = power_pos(x, 2.0 * theta)
    lhs = schatten_norm(_anti(xt, b, xt), e)
    jensen_arg = [b.H @ x2t @ b, b @ x2t @ b.H]
    chain = [
        lhs ** e,
        2.0 ** e * (schatten_norm(xt @ b, e) ** e + schatten_norm(b @ xt, e) ** e),
        2.0 ** e * sum(trace(power_pos(_psd(m), 0.5 * e)).real for m in jensen_arg),
        2.0 ** e * trace(b.H @ x @ b + b @ x @ b.H).real,
        2.0 ** e * schatten_norm(_anti(x, b, x), 1.0),
    ]
    rhs = schatten_norm(_anti(x, b, x), 1.0) ** theta
    rec = make_record("jensen_chain", lhs, rhs, 2.0, digest=digest, slack=slack)
    links = [within_slack(a, c, slack) for a, c in zip(chain, chain[1:])]
    rec.extras.update(chain=chain, links_ok=links)
    if not all(links):
        rec.passed = False
    return rec


def _psd(m: Element) -> Element:
    return m.map_blocks(lambda a: 0.5 * (a + a.conj().T))


# ---------------------------------------------------------------------------
# self-adjoint elements and the main estimate


def sign_decomposition(x: Element, b: Element, r: float) -> Element:
    """Four-term expansion of ``[M(x), b]`` through the spectral sign split.

    With ``x = x_+ - x_-`` and ``b_{st} = e_s b e_t``::

        [x_+^r, b_{++}] - [x_-^r, b_{--}] + (x_+^r b_{+-} + b_{+-} x_-^r)
                                          - (x_-^r b_{-+} + b_{-+} x_+^r)
    """
    xp, xm, ep, em = pos_neg_parts(x)
    xpr, xmr = power_pos(xp, r), power_pos(xm, r)
    bpp, bmm = ep @ b @ ep, em @ b @ em
    bpm, bmp = ep @ b @ em, em @ b @ ep
    return (xpr.commutator(bpp) - xmr.commutator(bmm)
            + (xpr @ bpm + bpm @ xmr) - (xmr @ bmp + bmp @ xpr))


def check_selfadjoint_commutator(x, b, p, q, *, cap=DEFAULT_CAP, digest=None):
    """``|[M_{p,q}(x), b]|_q`` for self-adjoint ``x``, against the structural side.

    ``q > p``: ``|b|_inf^(1-p/q) |[x, b]|_p^(p/q)``;
    ``p > q``: ``(p/q) |x|_p^(p/q-1) |[x, b]|_p``;
    ``p = q``: ``|[x, b]|_p``.
    The sign decomposition of the commutator is verified alongside
    (``extras["decomposition_residual"]`` must stay below 1e-10).
    """
    if not x.is_hermitian():
        raise DomainError("x must be self-adjoint")
    params = MazurParams(p, q)
    r = params.ratio
    comm = mazur_map(x, params).commutator(b)
    lhs = schatten_norm(comm, q)
    xb = schatten_norm(x.commutator(b), p)
    if q > p:
        rhs = operator_norm(b) ** (1.0 - r) * xb ** r
    elif p > q:
        rhs = r * schatten_norm(x, p) ** (r - 1.0) * xb
    else:
        rhs = xb
    residual = operator_norm(comm - sign_decomposition(x, b, r))
    scale = max(1.0, operator_norm(comm))
    rec = make_record("selfadjoint_commutator", lhs, rhs, EMPIRICAL, cap=cap, digest=digest)
    rec.extras["decomposition_residual"] = residual / scale
    if residual > DECOMPOSITION_TOL * scale:
        rec.passed = False
    return rec


def check_main_theorem(x, y, p, q, *, cap=DEFAULT_CAP, digest=None):
    """``|M(x) - M(y)|_q / |x - y|_p^theta`` on the closed unit ``p``-ball.

    Pairs closer than 1e-6 in ``L_p`` are recorded as skipped-degenerate.
    """
    params = MazurParams(p, q)
    x = in_unit_ball(x, p)
    y = in_unit_ball(y, p)
    dist = schatten_norm(x - y, p)
    rhs = dist ** params.theta
    if dist < THEOREM_MIN_DISTANCE:
        return CheckRecord("main_theorem", 0.0, rhs, EMPIRICAL, None, None, dict(digest or {}),
                           {"distance": dist})
    lhs = schatten_norm(mazur_map(x, params) - mazur_map(y, params), q)
    rec = make_record("main_theorem", lhs, rhs, EMPIRICAL, cap=cap, digest=digest)
    rec.extras["distance"] = dist
    return rec


def _check_exponents(theta=None, p=None):
    if theta is not None and not 0.0 < theta <= 1.0:
        raise DomainError(f"theta must lie in (0, 1], got {theta}")
    if p is not None and not 1.0 <= p < INF:
        raise DomainError(f"p must be a finite exponent >= 1, got {p}")


# ---------------------------------------------------------------------------
# randomized instances

SPECTRUM = (1e-3, 10.0)


def _positive(shape, rng, mode):
    """PSD sample; mode 2 zeroes a random number of eigenvalues."""
    x = random_positive(shape, rng, *SPECTRUM)
    if mode != 2:
        return x
    sd = x._eig
    lams = []
    for lam in sd.eigenvalues:
        k = int(rng.integers(0, len(lam) + 1))
        lam = lam.copy()
        lam[rng.gen.permutation(len(lam))[:k]] = 0.0
        lams.append(lam)
    return _spectral_element(shape, lams, sd.eigenvectors)


def positive_pair(shape, rng, mode):
    """Pairs of PSD elements: independent, nearby, low rank, or commuting."""
    mode %= 4
    x = _positive(shape, rng, mode)
    if mode == 1:
        scale = operator_norm(x) * 10.0 ** rng.uniform(-6.0, -1.0)
        h = random_selfadjoint(shape, rng)
        h = h * (scale / max(operator_norm(h), 1e-300))
        xp, _, _, _ = pos_neg_parts(x + h)
        return x, xp
    if mode == 3:
        lams = [np.exp(rng.uniform(math.log(SPECTRUM[0]), math.log(SPECTRUM[1]), len(lam)))
                for lam in x._eig.eigenvalues]
        return x, _spectral_element(shape, lams, x._eig.eigenvectors)
    return x, _positive(shape, rng, mode)


def contraction_for(x, rng, mode):
    """Contractions: general, self-adjoint, norm one, or almost commuting with ``x``."""
    mode %= 4
    shape = x.shape
    if mode == 1:
        return random_contraction(shape, rng, selfadjoint=True)
    b = random_contraction(shape, rng)
    if mode == 2:
        return b / operator_norm(b) if operator_norm(b) > 0 else b
    if mode == 3:
        sd = hermitian_eig(x)
        f = sd.apply(lambda lam: np.cos(lam))
        eps = 10.0 ** rng.uniform(-6.0, -1.0)
        g = f + eps * b
        return g / max(1.0, operator_norm(g))
    return b


def selfadjoint_sample(shape, rng, mode):
    """Self-adjoint element with signed log-uniform spectrum (or a PSD one)."""
    lams, vecs = [], []
    for d in shape.dims:
        mag = np.exp(rng.uniform(math.log(SPECTRUM[0]), math.log(SPECTRUM[1]), d))
        signs = np.ones(d) if mode % 4 == 3 else rng.gen.choice([-1.0, 1.0], d)
        lams.append(mag * signs)
        vecs.append(haar_unitary(d, rng))
    return _spectral_element(shape, lams, vecs)


def unit_ball_pair(shape, rng, p, mode):
    """Pairs in the closed unit ``p``-ball: independent, nearby, near-antipodal, self-adjoint."""
    mode %= 4

    def ball_point(g):
        return g * (rng.uniform(0.0, 1.0) ** 0.25 / schatten_norm(g, p))

    if mode == 3:
        x = ball_point(random_selfadjoint(shape, rng))
        y = ball_point(random_selfadjoint(shape, rng))
        return x, y
    x = ball_point(random_element(shape, rng))
    if mode == 0:
        return x, ball_point(random_element(shape, rng))
    h = random_element(shape, rng)
    h = h * (10.0 ** rng.uniform(-5.0, -1.0) / schatten_norm(h, p))
    y = x + h if mode == 1 else -x + h
    n = schatten_norm(y, p)
    return x, (y / n if n > 1.0 else y)


# ---------------------------------------------------------------------------
# suite driver

LEMMAS = ("power_contraction", "power_expansion", "alpha_lipschitz", "commutator_up",
          "commutator_down", "anticommutator_up", "anticommutator_down", "jensen_chain",
          "selfadjoint_commutator", "main_theorem")
EXPLICIT = {"power_contraction", "power_expansion", "alpha_lipschitz", "commutator_up",
            "commutator_down", "jensen_chain"}

DEFAULT_THETAS = tuple(round(0.1 * k, 10) for k in range(1, 11))
DEFAULT_PS = (1.0, 1.5, 2.0, 4.0)
DEFAULT_QS = (1.0, 1.1, 1.5, 2.0, 4.0)
DEFAULT_ALPHAS = (1.5, 2.7, 4.0)
ALGEBRAS = ("matrix", "mixed")


@dataclass
class SuiteConfig:
    lemmas: tuple = LEMMAS
    dims: tuple = (1, 2, 3, 4, 5, 6)
    trials: int = 2000
    seed: int = 0
    thetas: tuple = DEFAULT_THETAS
    ps: tuple = DEFAULT_PS
    qs: tuple = DEFAULT_QS
    alphas: tuple = DEFAULT_ALPHAS
    cap: float = DEFAULT_CAP
    slack: float = SLACK_REL
    algebra: str = "matrix"

    def __post_init__(self):
        self.lemmas = tuple(self.lemmas)
        self.dims = tuple(int(d) for d in self.dims)
        for name in ("thetas", "ps", "qs", "alphas"):
            setattr(self, name, tuple(float(v) for v in getattr(self, name)))
        self.validate()

    def validate(self):
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        unknown = set(self.lemmas) - set(LEMMAS)
        if unknown:
            raise ValueError(f"unknown lemma(s): {sorted(unknown)}")
        if not self.dims or min(self.dims) < 1:
            raise ValueError("dims must be positive integers")
        if any(not 0 < t <= 1 for t in self.thetas):
            raise ValueError("theta grid must lie in (0, 1]")
        if any(not 1 <= v < INF for v in self.ps + self.qs):
            raise ValueError("p and q grids must be finite and >= 1")
        if any(a <= 1 for a in self.alphas):
            raise ValueError("alpha grid must exceed 1")
        if self.algebra not in ALGEBRAS:
            raise ValueError(f"algebra must be one of {ALGEBRAS}")
        if not self.cap > 0:
            raise ValueError("cap must be positive")

    def to_dict(self):
        return asdict(self)


def shape_for(dim: int, algebra: str = "matrix") -> AlgebraShape:
    if algebra == "mixed":
        return AlgebraShape(((dim, 1.0), (max(1, dim - 1), 0.37)))
    return AlgebraShape.single(dim)


def cells(lemma: str, cfg: SuiteConfig) -> list[dict]:
    out = []
    for d in cfg.dims:
        if lemma == "alpha_lipschitz":
            out += [{"dim": d, "alpha": a, "p": p} for a in cfg.alphas for p in cfg.ps]
        elif lemma == "jensen_chain":
            out += [{"dim": d, "theta": t, "p": 1.0} for t in cfg.thetas if t <= 0.5]
        elif lemma in ("selfadjoint_commutator", "main_theorem"):
            out += [{"dim": d, "p": p, "q": q} for p in cfg.ps for q in cfg.qs]
        else:
            out += [{"dim": d, "theta": t, "p": p} for t in cfg.thetas for p in cfg.ps]
    return out


def cell_seed(base_seed: int, lemma: str, cell: dict) -> int:
    key = json.dumps([lemma, cell], sort_keys=True).encode()
    h = int.from_bytes(hashlib.blake2b(key, digest_size=8).digest(), "little")
    return mix64(base_seed, h)


def _trial(lemma, cell, shape, rng, trial, cap, slack, digest) -> CheckRecord:
    mode = trial % 4
    sub = (trial // 4) % 4
    th = cell.get("theta")
    p = cell.get("p")
    if lemma == "power_contraction":
        x, y = positive_pair(shape, rng, mode)
        return check_power_contraction(x, y, th, p, digest=digest, slack=slack)
    if lemma == "power_expansion":
        x, y = positive_pair(shape, rng, mode)
        return check_power_expansion(x, y, th, p, digest=digest, slack=slack)
    if lemma == "alpha_lipschitz":
        x, y = positive_pair(shape, rng, mode)
        return check_alpha_lipschitz(x, y, cell["alpha"], p, digest=digest, slack=slack)
    if lemma in ("commutator_up", "commutator_down"):
        x = _positive(shape, rng, 2 if mode == 2 else 0)
        b = contraction_for(x, rng, sub)
        fn = check_commutator_up if lemma == "commutator_up" else check_commutator_down
        return fn(x, b, th, p, digest=digest, slack=slack)
    if lemma in ("anticommutator_up", "anticommutator_down"):
        x, y = positive_pair(shape, rng, mode)
        b = contraction_for(x, rng, sub)
        if lemma == "anticommutator_up":
            return check_anticommutator_up(x, y, b, th, p, cap=cap, digest=digest, slack=slack)
        return check_anticommutator_down(x, y, b, th, p, cap=cap, digest=digest)
    if lemma == "jensen_chain":
        x = _positive(shape, rng, 2 if mode == 2 else 0)
        b = contraction_for(x, rng, sub)
        return check_jensen_chain(x, b, th, digest=digest, slack=slack)
    if lemma == "selfadjoint_commutator":
        x = selfadjoint_sample(shape, rng, mode)
        b = contraction_for(x, rng, sub)
        return check_selfadjoint_commutator(x, b, p, cell["q"], cap=cap, digest=digest)
    if lemma == "main_theorem":
        x, y = unit_ball_pair(shape, rng, p, mode)
        return check_main_theorem(x, y, p, cell["q"], cap=cap, digest=digest)
    raise ValueError(f"unknown lemma {lemma!r}")


def run_trial(lemma, cell, trial, base_seed, *, algebra="matrix", cap=DEFAULT_CAP,
              slack=SLACK_REL, rng: Optional[Rng] = None,
              seed_of_cell: Optional[int] = None) -> CheckRecord:
    """Evaluate trial ``trial`` of ``cell``; errors become ``status == "error"`` records."""
    if seed_of_cell is None:
        seed_of_cell = cell_seed(base_seed, lemma, cell)
    seed = mix64(seed_of_cell, trial)
    rng = Rng(seed) if rng is None else rng.reseed(seed)
    shape = shape_for(cell["dim"], algebra)
    digest = {"lemma": lemma, "cell": cell, "trial": trial, "base_seed": base_seed,
              "seed": seed, "algebra": algebra, "shape": [list(b) for b in shape.blocks]}
    try:
        return _trial(lemma, cell, shape, rng, trial, cap, slack, digest)
    except (MazurlabError, np.linalg.LinAlgError) as exc:
        return CheckRecord(lemma, math.nan, math.nan,
                           1.0 if lemma in EXPLICIT else EMPIRICAL, None, None, digest,
                           error=f"{type(exc).__name__}: {exc}")


def replay(digest: dict, cap=DEFAULT_CAP, slack=SLACK_REL) -> CheckRecord:
    """Re-run the trial identified by a record digest."""
    return run_trial(digest["lemma"], digest["cell"], digest["trial"], digest["base_seed"],
                     algebra=digest.get("algebra", "matrix"), cap=cap, slack=slack)


@dataclass
class CellSummary:
    lemma: str
    cell: dict
    trials: int = 0
    failures: int = 0
    skipped: int = 0
    errors: int = 0
    max_ratio: Optional[float] = None
    worst: Optional[dict] = None
    constant: object = None

    def add(self, rec: CheckRecord):
        self.trials += 1
        self.constant = rec.constant
        status = rec.status
        if status == "error":
            self.errors += 1
            return
        if status == "skipped-degenerate":
            self.skipped += 1
        elif status == "fail":
            self.failures += 1
        if rec.ratio is not None and (self.max_ratio is None or rec.ratio > self.max_ratio):
            self.max_ratio = rec.ratio
            self.worst = rec.inputs_digest


@dataclass
class SuiteReport:
    config: SuiteConfig
    cells: list = field(default_factory=list)
    records: list = field(default_factory=list)

    @property
    def failures(self) -> int:
        """Violations of inequalities with explicit constants."""
        return sum(c.failures for c in self.cells if c.lemma in EXPLICIT
                   or c.lemma == "anticommutator_up")

    @property
    def cap_exceedances(self) -> int:
        return sum(c.failures for c in self.cells if c.lemma not in EXPLICIT)

    @property
    def errors(self) -> int:
        return sum(c.errors for c in self.cells)

    def max_ratios(self) -> dict:
        out = {}
        for c in self.cells:
            if c.max_ratio is not None:
                out[c.lemma] = max(out.get(c.lemma, -math.inf), c.max_ratio)
        return out

    def summary(self) -> dict:
        return {
            "cells": [asdict(c) for c in self.cells],
            "failures": self.failures,
            "errors": self.errors,
            "max_ratios": self.max_ratios(),
        }

    def to_dict(self) -> dict:
        return {"config": self.config.to_dict(),
                "records": [r.to_dict() for r in self.records],
                "summary": self.summary()}


def _run_cell(args):
    lemma, cell, cfg, keep = args
    rng = Rng(0)
    cs = cell_seed(cfg.seed, lemma, cell)
    summ = CellSummary(lemma, cell)
    recs = []
    for t in range(cfg.trials):
        rec = run_trial(lemma, cell, t, cfg.seed, algebra=cfg.algebra, cap=cfg.cap,
                        slack=cfg.slack, rng=rng, seed_of_cell=cs)
        summ.add(rec)
        if keep:
            recs.append(rec)
    return summ, recs


def worker_count() -> int:
    raw = os.environ.get("MAZURLAB_THREADS", "1")
    try:
        n = int(raw)
    except ValueError:
        raise ValueError(f"MAZURLAB_THREADS must be a positive integer, got {raw!r}")
    if n < 1:
        raise ValueError(f"MAZURLAB_THREADS must be a positive integer, got {raw!r}")
    return n


def run_suite(cfg: SuiteConfig, *, keep_records: bool = True,
              progress: Optional[Callable[[CellSummary], None]] = None) -> SuiteReport:
    """Run every cell of every selected lemma; ordering is (lemma, cell, trial)."""
    cfg.validate()
    jobs = [(lemma, cell, cfg, keep_records) for lemma in cfg.lemmas for cell in cells(lemma, cfg)]
    report = SuiteReport(cfg)
    workers = worker_count()
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = pool.map(_run_cell, jobs, chunksize=max(1, len(jobs) // (4 * workers)))
            for summ, recs in results:
                report.cells.append(summ)
                report.records.extend(recs)
                if progress:
                    progress(summ)
    else:
        for job in jobs:
            summ, recs = _run_cell(job)
            report.cells.append(summ)
            report.records.extend(recs)
            if progress:
                progress(summ)
    return report
