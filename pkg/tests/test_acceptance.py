"""Acceptance criteria 1-10, each at its stated tolerance.

Every criterion prints one ``criterion N: PASS|FAIL ...`` line; they are
collected again in the terminal summary.  Criteria 1 and 2 run the full
default grids and take a few minutes on one core.
"""
import csv
import math
import time

import pytest

from conftest import ACCEPTANCE_LINES
from mazurlab import lemmas
from mazurlab.cli import main as cli_main
from mazurlab.matcore import AlgebraShape, Rng
from mazurlab.mazur import MazurParams
from mazurlab.oracles import (SELFTEST_SEED, c_theta_deltas, cayley_oracle, dilation_oracle,
                              frechet_oracle, multiplier_oracle, power_diff_oracle,
                              power_integral_oracle)
from mazurlab.search import Budget, maximize, scalar_grid_optimum

pytestmark = pytest.mark.acceptance


def report(n: int, ok: bool, detail: str):
    line = f"criterion {n}: {'PASS' if ok else 'FAIL'}  {detail}"
    print(line)
    ACCEPTANCE_LINES.append(line)
    assert ok, line


def suite(lemma_ids, **kw):
    cfg = lemmas.SuiteConfig(lemmas=tuple(lemma_ids), **kw)
    return lemmas.run_suite(cfg, keep_records=False)


def count(rep):
    return sum(c.trials for c in rep.cells)


def test_criterion_1_power_contraction():
    t0 = time.perf_counter()
    rep = suite(["power_contraction"], trials=2000)
    secs = time.perf_counter() - t0
    ok = rep.failures == 0 and rep.errors == 0 and secs < 180 and len(rep.cells) == 240
    report(1, ok, f"{count(rep)} trials, violations={rep.failures} errors={rep.errors} "
                  f"runtime={secs:.0f}s (limit 180s)")


def test_criterion_2_expansion_and_alpha():
    rep = suite(["power_expansion", "alpha_lipschitz"], trials=2000)
    ok = rep.failures == 0 and rep.errors == 0
    mr = rep.max_ratios()
    report(2, ok, f"{count(rep)} trials, violations={rep.failures} errors={rep.errors} "
                  f"max lhs/rhs: expansion {mr['power_expansion']:.3f} (C=3) "
                  f"alpha {mr['alpha_lipschitz']:.3f} (C=3 alpha)")


def test_criterion_3_commutators():
    rep = suite(["commutator_up", "commutator_down"], trials=500)
    mr = rep.max_ratios()
    ok = rep.failures == 0 and rep.errors == 0
    report(3, ok, f"{count(rep)} trials, violations={rep.failures} errors={rep.errors} "
                  f"max lhs/rhs: up {mr['commutator_up']:.3f} (C=2^theta) "
                  f"down {mr['commutator_down']:.3f} (C=12/theta)")


def test_criterion_4_jensen_chain():
    rep = suite(["jensen_chain"], trials=2000)
    ok = rep.failures == 0 and rep.errors == 0 and len(rep.cells) == 30
    report(4, ok, f"{count(rep)} trials over theta <= 1/2, violations={rep.failures} "
                  f"errors={rep.errors} max lhs/rhs {rep.max_ratios()['jensen_chain']:.3f} (C=2)")


def test_criterion_5_empirical_suites():
    ids = ["anticommutator_up", "anticommutator_down", "selfadjoint_commutator", "main_theorem"]
    rep = lemmas.run_suite(lemmas.SuiteConfig(lemmas=tuple(ids), trials=200,
                                              thetas=(0.1, 0.5, 1.0), dims=(1, 2, 4, 6)))
    finite = all(math.isfinite(r.ratio) for r in rep.records if r.ratio is not None)
    worst_replay, replayed = 0.0, 0
    for c in rep.cells:
        if c.worst is None:
            continue
        again = lemmas.replay(c.worst)
        worst_replay = max(worst_replay, abs(again.ratio - c.max_ratio) / c.max_ratio)
        replayed += 1
    mr = rep.max_ratios()
    ok = finite and worst_replay <= 1e-12 and rep.errors == 0 and set(mr) == set(ids)
    report(5, ok, f"{count(rep)} trials, finite={finite} replayed {replayed} cells, "
                  f"replay gap {worst_replay:.1e}; max ratios "
                  + " ".join(f"{k}={v:.3f}" for k, v in sorted(mr.items())))


def test_criterion_6_scalar_optimum():
    res = maximize(MazurParams(1, 2), AlgebraShape.single(1), Budget(), 0)
    gap = abs(res.best_ratio - math.sqrt(2))
    equal = [maximize(MazurParams(p, p), AlgebraShape.single(d), Budget(2, 300), 1).best_ratio
             for p in (1.0, 2.0, 4.0) for d in (1, 3)]
    ok = gap <= 1e-3 and all(r == 1.0 for r in equal)
    report(6, ok, f"dim 1 p=1 q=2 best {res.best_ratio:.6f} (|gap| {gap:.1e} <= 1e-3); "
                  f"p=q best ratios {sorted(set(equal))}")


def test_criterion_7_quadrature_oracles():
    rng = Rng(SELFTEST_SEED)
    rows = c_theta_deltas() + power_integral_oracle(rng) + power_diff_oracle(rng)
    worst = {k: max(r.value for r in rows if r.name.startswith(k))
             for k in ("c_theta", "power_via_integral", "power_diff_integral")}
    ok = all(r.passed for r in rows)
    report(7, ok, f"c_theta {worst['c_theta']:.1e} (<=1e-8), power_via_integral "
                  f"{worst['power_via_integral']:.1e} (<=1e-6), power_diff_integral "
                  f"{worst['power_diff_integral']:.1e} (<=1e-4)")


def test_criterion_8_richardson_slope():
    rows = frechet_oracle(Rng(SELFTEST_SEED), cases=12)
    report(8, rows[0].passed, f"{rows[0].detail} (required 1.8..2.2)")


def test_criterion_9_structural_identities():
    rng = Rng(SELFTEST_SEED)
    rows = dilation_oracle(rng) + cayley_oracle(rng) + multiplier_oracle(rng, trials=500)
    ok = all(r.passed for r in rows)
    report(9, ok, "; ".join(f"{r.name} {r.value:.1e}" for r in rows))


def test_criterion_10_sweep(tmp_path):
    out = tmp_path / "sweep.csv"
    qs = (1.05, 1.1, 1.2, 1.5, 2.0)
    code = cli_main(["sweep", "--p", "1", "--q", ",".join(map(str, qs)), "--dim", "2",
                     "--out", str(out)])
    rows = list(csv.DictReader(out.open()))
    short = []
    for r in rows:
        grid = scalar_grid_optimum(float(r["p"]), float(r["q"]))
        if float(r["best_ratio"]) < grid * (1 - 1e-9):
            short.append(r["q"])
    ok = code == 0 and len(rows) == len(qs) and not short
    trend = " ".join(f"q={float(r['q']):g}:{float(r['best_ratio']):.4f}" for r in rows)
    report(10, ok, f"{len(rows)} CSV rows, all >= 1-D grid optimum; lower bounds {trend}")
