"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Tolerances and runtime limits are the pinned acceptance values; nothing
here is loosened to make a criterion pass.
"""

import math
import time

import numpy as np
import pytest

from slowdec import (
    NOT_SLOWLY_DECREASING,
    SLOWLY_DECREASING,
    Phi0Evaluator,
    PoissonRepresentation,
    ProductEvaluator,
    SlowDecreaseParams,
    build_sequence,
    SequenceSpec,
    check_slow_decrease_def,
    check_theorem1,
    check_theorem2,
    check_theorem3,
    classify,
    cond2_quantity,
    favorov_log,
    from_points,
    lemma1_consistency,
    lemma3_diagnostic,
    lemma4_diagnostic,
    nu,
)
from slowdec.criteria import BOUNDED, DEFAULT_X_GRID, GROWING
from slowdec.product_eval import log_abs_sin_pi

from fixtures import FULL_RADIUS, sequence

pytestmark = pytest.mark.slow


@pytest.fixture
def verdict(capsys):
    """Print ``CRITERION k: PASS|FAIL`` (bypassing capture) and assert."""

    def emit(k, ok, detail):
        with capsys.disabled():
            print(f"\nCRITERION {k}: {'PASS' if ok else 'FAIL'} ({detail})")
        assert ok, detail

    return emit


def sinc_log(z):
    z = np.asarray(z, dtype=complex)
    return log_abs_sin_pi(z) - np.log(np.pi * np.abs(z))


def test_criterion_01_exact_integral_identity(verdict):
    start = time.perf_counter()
    worst = 0.0
    for seed in range(100):
        rng = np.random.default_rng(seed)
        n = int(rng.integers(1, 101))
        zeros = rng.uniform(1.0, 100.0, n) * np.exp(1j * rng.uniform(0, 2 * math.pi, n))
        seq = from_points(zeros, radius=math.inf)
        ev = ProductEvaluator(seq)
        probes = rng.uniform(-150, 150, 50) + 1j * rng.uniform(-150, 150, 50)
        prod = ev.log_abs_many(probes).value
        fav = np.array([favorov_log(seq, z) for z in probes])
        worst = max(worst, float(np.max(np.abs(fav - prod))))
    elapsed = time.perf_counter() - start
    verdict(1, worst <= 1e-9 and elapsed < 10, f"max residual {worst:.2e}, {elapsed:.1f} s")


def test_criterion_02_sine_product(verdict):
    start = time.perf_counter()
    seq = build_sequence(SequenceSpec("lattice"), 1e5)
    ev = ProductEvaluator(seq, "even")
    at_half = ev.log_abs(0.5).value
    diff = abs(at_half - math.log(2 / math.pi))
    rng = np.random.default_rng(2)
    z = rng.uniform(0, 10, 20) * np.exp(1j * rng.uniform(0, 2 * math.pi, 20))
    lm = ev.log_abs_many(z)
    within = bool(np.all(np.abs(lm.value - sinc_log(z)) <= lm.tail_bound))
    elapsed = time.perf_counter() - start
    verdict(2, diff <= 1e-5 and within and elapsed < 30,
            f"|value - ln(2/pi)| = {diff:.2e}, all 20 within tail_bound: {within}, {elapsed:.1f} s")


def test_criterion_03_poisson_oracle(verdict):
    start = time.perf_counter()
    seq = build_sequence(SequenceSpec("lattice"), 1e5)
    ev = ProductEvaluator(seq, "even")
    rep = PoissonRepresentation(ev, tail_cut=1e4)
    xs = (0.5, 3.25, 10.75, 40.5, 100.25)
    ys = (1.0, 2.5, 5.0, 7.5, 10.0)
    z = np.array([complex(x, y) for x in xs for y in ys])
    ref = ev.log_abs_many(z).corrected
    ok_abs, worst_rel = True, 0.0
    for zi, r in zip(z, ref):
        p = rep.log_abs(zi)
        ok_abs &= abs(p.value - r) <= p.error_estimate
        worst_rel = max(worst_rel, p.error_estimate / max(abs(r), 1.0))
    elapsed = time.perf_counter() - start
    verdict(3, ok_abs and worst_rel <= 1e-2 and elapsed < 120,
            f"residual within estimate: {ok_abs}, max relative estimate {worst_rel:.2e}, {elapsed:.1f} s")


def test_criterion_04_log_perturbed_lattice(verdict):
    start = time.perf_counter()
    seq = sequence("log_perturbed", 1e6)
    c = classify(seq)
    xs = np.asarray(DEFAULT_X_GRID)
    dev = float(np.max(np.abs(nu(seq, xs) - xs + np.log1p(xs * xs))))
    elapsed = time.perf_counter() - start
    ok = c.outcome == SLOWLY_DECREASING and c.witness_a is not None and c.witness_a <= 10
    verdict(4, ok and dev <= 2 and elapsed < 120,
            f"{c.outcome}, witness a = {c.witness_a}, max |nu - x + ln(1+x^2)| = {dev:.3f}, {elapsed:.1f} s")


def test_criterion_05_lacunary_quotient(verdict):
    start = time.perf_counter()
    v = check_slow_decrease_def(Phi0Evaluator(), SlowDecreaseParams())
    all_a_fail = all(not d["feasible_everywhere"] or d["exponent_trend"] == GROWING
                     for d in v.details["per_a"].values())
    # strict reading: the best value over the widest window (a = 20) at each probe
    deep = [(s["x"], s["best_log_abs"][-1], -0.1 * math.log(2 + s["x"]) ** 2) for s in v.details["samples"]]
    shallow = [(x, b, t) for x, b, t in deep if b > t]
    zeros = sequence("sparse_powers")
    thm1 = check_theorem1(zeros, 1.0, DEFAULT_X_GRID)
    c2 = check_theorem2(zeros)[2]
    c2_grows = max(c2.growth_ratios) >= 1.5
    elapsed = time.perf_counter() - start
    ok = (v.outcome == NOT_SLOWLY_DECREASING and all_a_fail and not shallow
          and thm1.trend == BOUNDED and c2_grows and elapsed < 180)
    shallow_txt = ", ".join(f"x={x:g}: {b:.3f} > {t:.3f}" for x, b, t in shallow) or "none"
    verdict(5, ok, f"definition {v.outcome}, all a fail: {all_a_fail}; windows above -0.1 ln^2(2+x): "
                   f"{shallow_txt}; L trend {thm1.trend}; cond2 growth ratios "
                   f"{[round(r, 2) for r in c2.growth_ratios]}; {elapsed:.1f} s")


def test_criterion_06_inner_bound(verdict):
    start = time.perf_counter()
    _, _, c2 = check_theorem2(sequence("integers"), delta=1.0)
    elapsed = time.perf_counter() - start
    est = c2.double_limsup_estimate
    verdict(6, est <= math.pi + 0.5 and elapsed < 60, f"double limsup estimate {est:.4f}, {elapsed:.1f} s")


def test_criterion_07_union_and_shifted(verdict):
    start = time.perf_counter()
    seq = sequence("perturbed_union")
    xs = np.asarray(DEFAULT_X_GRID)
    t = np.concatenate((xs, -xs))
    dev = float(np.max(np.abs(nu(seq, t) - t)))
    c_union = classify(seq)
    t_union = time.perf_counter() - start
    start = time.perf_counter()
    c_shift = classify(sequence("shifted"))
    t_shift = time.perf_counter() - start
    ok = (dev <= 3 and c_union.outcome == SLOWLY_DECREASING and t_union < 120
          and c_shift.outcome == SLOWLY_DECREASING and c_shift.criterion_name == "theorem3"
          and c_shift.criterion.outcome == SLOWLY_DECREASING and t_shift < 120)
    verdict(7, ok, f"union |nu - t| <= {dev:.2f}, {c_union.outcome} ({t_union:.1f} s); "
                   f"shifted {c_shift.outcome} via {c_shift.criterion_name} ({t_shift:.1f} s)")


EVEN_FIXTURES = ("integers", "sparse_powers", "perturbed_union", "lacunary")


def test_criterion_08_symmetrization(verdict):
    start = time.perf_counter()
    pairs = {}
    for name in EVEN_FIXTURES:
        seq = sequence(name)
        assert seq.even
        pairs[name] = (check_theorem2(seq)[0].outcome, check_theorem3(seq)[0].outcome)
    elapsed = time.perf_counter() - start
    ok = all(a == b for a, b in pairs.values())
    verdict(8, ok, f"{pairs}, {elapsed:.1f} s")


def test_criterion_09_projection(verdict):
    start = time.perf_counter()
    plain = lemma1_consistency(sequence("complex_log"))
    inflated = lemma1_consistency(sequence("complex_log_inflated"))
    proj_trend = inflated.projected.details["m(x,1)/ln|x|"]["trend"]
    orig_trend = inflated.original.details["lemma2_report"]["trend"]
    elapsed = time.perf_counter() - start
    ok = (plain.agree and plain.projected.outcome == SLOWLY_DECREASING
          and inflated.agree and inflated.original.outcome == NOT_SLOWLY_DECREASING
          and proj_trend == GROWING and orig_trend == GROWING)
    verdict(9, ok, f"plain: {plain.projected.outcome} / {plain.original.outcome}; inflated: "
                   f"{inflated.projected.outcome} / {inflated.original.outcome}, cluster trends "
                   f"{proj_trend} / {orig_trend}; {elapsed:.1f} s")


def test_criterion_10_integral_diagnostics(verdict):
    seq = sequence("integers")
    shift = [lemma3_diagnostic(seq, x, 1e6, 1.0) for x in (1e3, 1e4)]
    vert = [lemma4_diagnostic(seq, 1e3, A, 1.0) for A in (1.0, 2.0, 4.0, 8.0)]
    ratios = [d.ratio for d in vert]
    spread = max(ratios) / min(ratios)
    ok = all(abs(d.ratio) <= 5 for d in shift) and spread <= 2
    verdict(10, ok, f"shift-difference / ln x = {[f'{d.ratio:.1e}' for d in shift]}, "
                    f"vertical-shift / A^2 spread {spread:.3f}")
