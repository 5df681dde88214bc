"""Adversarial lower bounds on the Hölder constant of the Mazur map.

:func:`maximize` hill-climbs the ratio
``|M(x) - M(y)|_q / |x - y|_p^theta`` over pairs in the closed unit
``p``-ball; :func:`sweep` repeats that over a ``(p, q)`` grid.  Every
reported ratio is attained by a stored pair, so it is a certified lower
bound on the constant.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Union

import numpy as np

from .errors import DegeneratePair, MazurlabError
from .matcore import (AlgebraShape, Element, Rng, hermitian_part, mix64, pos_neg_parts,
                      random_element, random_positive, random_selfadjoint)
from .mazur import MazurParams, mazur_map
from .schatten import schatten_norm

MIN_DISTANCE = 1e-6
PATIENCE = 20
MIN_STEP = 1e-7
CONES = ("general", "selfadjoint", "psd")


def holder_ratio(x: Element, y: Element, params: MazurParams) -> float:
    """``|M(x) - M(y)|_q / |x - y|_p^theta``; raises DegeneratePair below distance 1e-6."""
    dist = schatten_norm(x - y, params.p)
    if dist < MIN_DISTANCE:
        raise DegeneratePair(f"|x - y|_p = {dist:.3e} is below {MIN_DISTANCE}")
    num = schatten_norm(mazur_map(x, params) - mazur_map(y, params), params.q)
    return num / dist ** params.theta


@dataclass(frozen=True)
class Budget:
    restarts: int = 8
    iters_per_restart: int = 2000

    def __post_init__(self):
        if self.restarts < 1 or self.iters_per_restart < 1:
            raise ValueError("search budget must be positive")


@dataclass
class SearchResult:
    params: MazurParams
    best_ratio: float
    best_pair: tuple
    iterations: int
    restarts: int
    seed: int
    history: list = field(default_factory=list)
    # index into ``history`` where each restart begins
    restart_marks: list = field(default_factory=list)

    def replay(self) -> float:
        return holder_ratio(*self.best_pair, self.params)


def _project(x: Element, p: float) -> Element:
    n = schatten_norm(x, p)
    return x / n if n > 1.0 else x


def _to_cone(x: Element, cone: str) -> Element:
    if cone == "selfadjoint":
        return hermitian_part(x)
    if cone == "psd":
        return pos_neg_parts(hermitian_part(x))[0]
    return x


def _random_point(shape, rng, p, cone):
    if cone == "psd":
        g = random_positive(shape, rng)
    elif cone == "selfadjoint":
        g = random_selfadjoint(shape, rng)
    else:
        g = random_element(shape, rng)
    n = schatten_norm(g, p)
    return g * (rng.uniform(0.2, 1.0) / n) if n > 0 else g


def _perturb(x: Element, step: float, rng: Rng) -> Element:
    blocks = []
    for a in x.blocks:
        g = rng.normal((2,) + a.shape)
        blocks.append(a + step * (g[0] + 1j * g[1]))
    return Element._raw(x.shape, blocks)


def _initial_pair(shape, rng, p, cone, restart):
    x = _random_point(shape, rng, p, cone)
    # odd restarts start antipodal, which already attains the scalar optimum
    if restart % 2 == 1 and cone != "psd":
        return x, -x
    return x, _random_point(shape, rng, p, cone)


def _as_rng(rng: Union[Rng, int, None]) -> Rng:
    if rng is None:
        return Rng(0)
    if isinstance(rng, Rng):
        return rng
    return Rng(int(rng))


def maximize(params: MazurParams, shape: AlgebraShape, budget: Budget = Budget(),
             rng: Union[Rng, int, None] = None, cone: str = "general") -> SearchResult:
    """Multi-restart hill climbing on the Hölder ratio.

    Proposals add ``step * (N + iN)`` entrywise to both elements, map into
    the chosen cone and project radially onto the unit ball.  A proposal
    is accepted only if it strictly improves the ratio; the step halves
    after 20 consecutive rejections and the restart ends once the step
    drops below 1e-7 or its iteration budget is used.
    """
    if cone not in CONES:
        raise ValueError(f"cone must be one of {CONES}")
    rng = _as_rng(rng)
    seed = rng.seed
    p = params.p
    base_step = 0.3 / max(shape.dims)
    best, best_pair = -np.inf, None
    history, marks = [], []
    iters = 0
    for restart in range(budget.restarts):
        marks.append(len(history))
        x, y = _initial_pair(shape, rng, p, cone, restart)
        x, y = _project(x, p), _project(y, p)
        try:
            cur = holder_ratio(x, y, params)
        except DegeneratePair:
            cur = -np.inf
        history.append((iters, cur))
        step, rejected = base_step, 0
        for _ in range(budget.iters_per_restart):
            iters += 1
            xn = _project(_to_cone(_perturb(x, step, rng), cone), p)
            yn = _project(_to_cone(_perturb(y, step, rng), cone), p)
            try:
                r = holder_ratio(xn, yn, params)
            except (DegeneratePair, MazurlabError):
                r = -np.inf
            if r > cur:
                x, y, cur = xn, yn, r
                rejected = 0
                history.append((iters, cur))
            else:
                rejected += 1
                if rejected >= PATIENCE:
                    step *= 0.5
                    rejected = 0
                    if step < MIN_STEP:
                        break
        if cur > best:
            best, best_pair = cur, (x, y)
    return SearchResult(params, float(best), best_pair, iters, budget.restarts, seed,
                        history, marks)


@dataclass(frozen=True)
class SweepRow:
    p: float
    q: float
    best_ratio: float
    seed: int
    iters: int


def sweep(p_grid, q_grid, shape: AlgebraShape, budget: Budget = Budget(),
          rng: Union[Rng, int, None] = None, cone: str = "general") -> list[SweepRow]:
    """One :func:`maximize` per ``(p, q)`` cell, ordered by ``(p, q)``.

    Cell seeds are derived from the base seed and the cell's position, so
    any row can be reproduced on its own with ``maximize(..., rng=row.seed)``.
    """
    ps, qs = sorted(set(map(float, p_grid))), sorted(set(map(float, q_grid)))
    if not ps or not qs:
        raise ValueError("sweep grids must be nonempty")
    base = _as_rng(rng).seed
    rows = []
    for i, p in enumerate(ps):
        for j, q in enumerate(qs):
            seed = mix64(base, i * len(qs) + j)
            res = maximize(MazurParams(p, q), shape, budget, Rng(seed), cone)
            rows.append(SweepRow(p, q, res.best_ratio, seed, res.iterations))
    return rows


def scalar_grid_optimum(p: float, q: float, n: int = 2001,
                        min_distance: float = MIN_DISTANCE) -> float:
    """Brute-force maximum of the ratio over real scalars on an ``n``-point grid of [-1, 1]."""
    params = MazurParams(p, q)
    t = np.linspace(-1.0, 1.0, n)
    m = np.sign(t) * np.abs(t) ** params.ratio
    dist = np.abs(t[:, None] - t[None, :])
    num = np.abs(m[:, None] - m[None, :])
    mask = dist >= min_distance
    return float(np.max(num[mask] / dist[mask] ** params.theta))
