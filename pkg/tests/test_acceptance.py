"""Acceptance gate.

Each test carries a ``criterion`` marker; the terminal summary prints one
PASS/FAIL line per criterion.  Run alone with

    pytest tests/test_acceptance.py
"""

import math
import time
from fractions import Fraction

import numpy as np
import pytest

from offsetroot import (
    BaselineMethod,
    IterationConfig,
    RootQuery,
    Verdict,
    build_gcf,
    cubic_validity_bounds,
    estimate_convergence,
    evaluate_gcf,
    fixed_points,
    gcf_iteration_equivalence,
    iteration_map,
    map_derivative,
    nth_step,
    regime_table,
    run_baseline,
    run_iteration,
    scan_b,
    sqrt_step,
    threshold_ratio,
)
from offsetroot.baselines import babylonian_step, newton_step
from offsetroot.core import ZeroDivisorError
from offsetroot.stability import StabilityClass

criterion = pytest.mark.criterion
RNG_SEED = 20240611


def ulps(a, b):
    if a == b:
        return 0.0
    return abs(a - b) / math.ulp(max(abs(a), abs(b)))


def truncate8(v):
    whole, frac = f"{abs(v):.15f}".split(".")
    return ("-" if v < 0 else "") + whole + "." + frac[:8]


def best_of(fn, repeat=5):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return out, min(times)


# ---------- 1: worked square-root trace ----------

PRINTED = ["10", "0.16666666", "-0.26068956", "-0.23469387", "-0.23614457", "-0.23606370", "-0.23606821",
           "-0.23606796", "-0.23606797", "-0.23606797"]


def _golden():
    return run_iteration(RootQuery(5.0, 2), IterationConfig(b=4.0, c1=10.0, tol=1e-9), "minus")


@criterion("AC1", "square-root trace x=5, b=4, c1=10")
def test_ac1_trace_rows():
    tr = _golden()
    assert tr.verdict is Verdict.CONVERGED_CORRECT
    assert tr.iterates[0] == 10.0
    assert tr.iterates[1] == 1 / 6
    for n, printed in enumerate(PRINTED, start=1):
        got = truncate8(tr.iterates[n - 1]) if n > 1 else f"{tr.iterates[0]:g}"
        if n == 3:
            # the printed row transposes two digits of -6/23
            assert tr.iterates[2] == float(Fraction(-6, 23))
            assert got == "-0.26086956" and sorted(got) == sorted(printed)
        else:
            assert got == printed, n


@criterion("AC1", "square-root trace x=5, b=4, c1=10")
def test_ac1_recovered_root():
    tr = _golden()
    c9, c10 = tr.iterates[8], tr.iterates[9]
    assert round(c9, 8) == round(c10, 8) == round(2 - math.sqrt(5), 8)
    est = 2 - c10
    assert abs(est - math.sqrt(5)) < 1e-9
    assert f"{est:.13f}".startswith("2.23606797745")


@criterion("AC1", "square-root trace x=5, b=4, c1=10")
def test_ac1_runtime():
    _golden()
    _, dt = best_of(_golden)
    assert dt < 1e-3


# ---------- 2: motivating derivative ----------


@criterion("AC2", "map derivative at 2 - sqrt(7) is -3/(11 + 4 sqrt(7)) ~ -0.139")
def test_ac2_derivative():
    v = map_derivative(2 - math.sqrt(7), 7.0, 4.0, 2)
    assert abs(v - (-3 / (11 + 4 * math.sqrt(7)))) <= 1e-12
    assert round(v, 3) == -0.139


# ---------- 3: regime table ----------

S, U, N, SS = StabilityClass.STABLE, StabilityClass.UNSTABLE, StabilityClass.NEUTRAL, StabilityClass.SUPERSTABLE
PRINTED_REGIMES = [
    ("b<-2sqrt(x)", U, S),
    ("b=-2sqrt(x)", U, SS),
    ("-2sqrt(x)<b<0", U, S),
    ("b=0", N, N),
    ("0<b<2sqrt(x)", S, U),
    ("b=2sqrt(x)", SS, U),
    ("2sqrt(x)<b", S, U),
]


@criterion("AC3", "seven-regime stability table at x=7")
def test_ac3_regime_table():
    rows = regime_table(7.0)
    assert [(r.regime, r.minus, r.plus) for r in rows] == PRINTED_REGIMES


# ---------- 4: cubic validity bounds ----------


@criterion("AC4", "cubic validity bounds for x=1250 and scanned edge")
def test_ac4_bounds():
    hi, lo = cubic_validity_bounds(1250.0)
    assert abs(hi - 7.88578) <= 1e-4
    assert abs(lo - (-29.43013)) <= 1e-4


@criterion("AC4", "cubic validity bounds for x=1250 and scanned edge")
def test_ac4_scanned_edge():
    t0 = time.perf_counter()
    res = scan_b(RootQuery(1250.0, 3), 6.0, 9.0, 3000)
    dt = time.perf_counter() - t0
    assert abs(res.least_positive_b - 7.88578) <= 2e-3
    assert dt < 10.0


# ---------- 5: cube-root runs ----------


@criterion("AC5", "cube root of 1250 with b=70 converges, b=7 does not")
@pytest.mark.parametrize("c1", [1.0, 10.0])
def test_ac5_good_offset(c1):
    tr = run_iteration(RootQuery(1250.0, 3), IterationConfig(b=70.0, c1=c1))
    assert tr.verdict is Verdict.CONVERGED_CORRECT
    assert abs(tr.root_estimate - 10.772) <= 5e-4


@criterion("AC5", "cube root of 1250 with b=70 converges, b=7 does not")
@pytest.mark.parametrize("c1", [1.0, 10.0])
def test_ac5_bad_offset(c1):
    tr = run_iteration(RootQuery(1250.0, 3), IterationConfig(b=7.0, c1=c1))
    assert tr.verdict is not Verdict.CONVERGED_CORRECT


# ---------- 6: degree-7 thresholds ----------

SEVENTH = [(1250.0, 3.0, 7.0, 4.1755), (12500.0, 4.0, 8.0, 5.8019), (125000.0, 6.0, 10.0, 8.0617)]


@criterion("AC6", "degree-7 least convergent offsets and b**7/x ~ 17.704")
def test_ac6_thresholds():
    t0 = time.perf_counter()
    for x, lo, hi, expected in SEVENTH:
        q = RootQuery(x, 7)
        res = scan_b(q, lo, hi, 4000)
        assert abs(res.least_positive_b - expected) <= 5e-3, x
        assert abs(threshold_ratio(res.least_positive_b, q) - 17.704) <= 0.02, x
    assert time.perf_counter() - t0 < 60.0


# ---------- 7: convergence orders ----------


@criterion("AC7", "Newton order 2, offset order 1 at rate |f'(c_minus)|")
def test_ac7_newton_quadratic():
    tr = run_baseline(BaselineMethod.NEWTON_RAPHSON, RootQuery(7.0, 2), 1.0, tol=1e-14)
    assert abs(estimate_convergence(tr, math.sqrt(7)).order - 2) <= 0.3


@criterion("AC7", "Newton order 2, offset order 1 at rate |f'(c_minus)|")
def test_ac7_offset_linear():
    tr = run_iteration(RootQuery(5.0, 2), IterationConfig(b=4.0, c1=10.0, tol=1e-15), "minus")
    est = estimate_convergence(tr, math.sqrt(5))
    m = abs(map_derivative(2 - math.sqrt(5), 5.0, 4.0, 2))
    assert m == pytest.approx(1 / (2 + math.sqrt(5)) ** 2, rel=1e-12)
    assert round(m, 4) == 0.0557
    assert abs(est.order - 1) <= 0.1
    assert abs(est.rate - m) <= 0.1 * m


# ---------- 8: continued fraction ----------


@criterion("AC8", "continued-fraction truncations equal iterates")
def test_ac8_random_equivalence():
    rng = np.random.default_rng(RNG_SEED)
    for _ in range(20):
        x = float(rng.uniform(0.1, 1000))
        b = float(rng.uniform(0.1, 4.0)) * 2 * math.sqrt(x)  # b > 0: c_minus attracts
        assert gcf_iteration_equivalence(x, b, 50, ulps=8), (x, b)


@criterion("AC8", "continued-fraction truncations equal iterates")
def test_ac8_depth_200():
    assert abs(evaluate_gcf(build_gcf(5.0, 4.0, 200)) - (2 - math.sqrt(5))) <= 1e-9


# ---------- 9: property suites ----------


@criterion("AC9", "property suites (sign swap, derivative, Newton/Babylonian, fixed points)")
def test_ac9_sign_swap():
    rng = np.random.default_rng(RNG_SEED)
    n = 0
    while n < 1000:
        x = float(rng.uniform(1e-3, 1e4))
        b = float(rng.choice([-1, 1]) * rng.uniform(0.05, 200))
        c = float(rng.uniform(-300, 300))
        try:
            a = sqrt_step(c, x, b)
        except ZeroDivisorError:
            continue
        assert ulps(a, -nth_step(-c, x, b, 2)) <= 4, (c, x, b)
        n += 1


@criterion("AC9", "property suites (sign swap, derivative, Newton/Babylonian, fixed points)")
def test_ac9_derivative_finite_difference():
    rng = np.random.default_rng(RNG_SEED + 1)
    n = 0
    while n < 100:
        x = float(rng.uniform(0.5, 500))
        b = float(rng.choice([-1, 1]) * rng.uniform(0.2, 40))
        c = float(rng.uniform(-20, 20))
        d = int(rng.integers(2, 8))
        f = iteration_map(x, b, d)
        h = 1e-6 * (1 + abs(c))
        try:
            analytic = map_derivative(c, x, b, d)
            numeric = (f(c + h) - f(c - h)) / (2 * h)
        except ZeroDivisorError:
            continue
        # near a pole or a critical point the difference quotient is ill-conditioned
        if not 1e-8 < abs(analytic) < 1e6:
            continue
        assert abs(numeric - analytic) <= 1e-5 * abs(analytic), (c, x, b, d)
        n += 1


@criterion("AC9", "property suites (sign swap, derivative, Newton/Babylonian, fixed points)")
def test_ac9_newton_babylonian():
    rng = np.random.default_rng(RNG_SEED + 2)
    ks = rng.uniform(1e-3, 1e6, 1000)
    vs = rng.uniform(1e-3, 1e4, 1000)
    for k, v in zip(ks.tolist(), vs.tolist()):
        assert ulps(newton_step(v, k, 2), babylonian_step(v, k)) <= 2, (k, v)


@criterion("AC9", "property suites (sign swap, derivative, Newton/Babylonian, fixed points)")
def test_ac9_fixed_point_residual():
    rng = np.random.default_rng(RNG_SEED + 3)
    n = 0
    while n < 500:
        d = int(rng.integers(2, 10))
        x = float(rng.uniform(0.1, 1e4))
        b = float(rng.choice([-1, 1]) * rng.uniform(0.05, 5.0) * 2 * x ** (1 / d))
        f = iteration_map(x, b, d)
        try:
            pts = fixed_points(x, b, d)
            for fp in pts:
                if math.isinf(fp.derivative_magnitude):
                    continue
                # at the even-degree double point the residual is 0/0
                if abs(fp.derivative_magnitude) > 1e3:
                    continue
                assert abs(f(fp.location) - fp.location) <= 1e-9 * (1 + abs(fp.location)), (x, b, d)
        except ZeroDivisorError:
            continue
        n += 1


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q"]))
