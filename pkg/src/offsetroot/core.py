"""Offset fixed-point iteration for d-th roots of positive reals.

The root ``r`` of ``r**d = x`` is written as ``r = b/2 + c`` (plus convention)
or ``r = b/2 - c`` (minus convention, the classic square-root form).  The
offset ``b`` turns the neutral map ``r -> x/r`` into a map on ``c`` whose
fixed point can be made attracting.

    >>> trace = run_iteration(RootQuery(5.0, 2), IterationConfig(b=4.0, c1=10.0), "minus")
    >>> round(trace.root_estimate, 9)
    2.236067977
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, replace
from math import comb
from typing import Callable, Sequence

import numba
import numpy as np

__all__ = [
    "ZeroDivisorError",
    "Verdict",
    "RootQuery",
    "IterationConfig",
    "IterationTrace",
    "sqrt_step",
    "nth_step",
    "divided_difference_coefficients",
    "offset_power",
    "recover_root",
    "divergence_bound",
    "residual_tolerance",
    "run_iteration",
    "run_iteration_batch",
]

DEFAULT_ZERO_GUARD = 1e-12


class ZeroDivisorError(ZeroDivisionError):
    """A map denominator fell below the zero guard."""


class Verdict(str, enum.Enum):
    CONVERGED_CORRECT = "ConvergedCorrect"
    CONVERGED_WRONG = "ConvergedWrong"
    DIVERGED = "Diverged"
    MAX_ITER_EXCEEDED = "MaxIterExceeded"
    ZERO_DIVISOR_EXHAUSTED = "ZeroDivisorExhausted"

    def __str__(self) -> str:
        return self.value

    @property
    def converged(self) -> bool:
        return self in (Verdict.CONVERGED_CORRECT, Verdict.CONVERGED_WRONG)


@dataclass(frozen=True)
class RootQuery:
    """Compute the principal ``d``-th root of ``x``."""

    x: float
    d: int = 2

    def __post_init__(self):
        if not (math.isfinite(self.x) and self.x > 0):
            raise ValueError(f"radicand must be a positive finite real, got x={self.x!r}")
        if isinstance(self.d, bool) or int(self.d) != self.d:
            raise ValueError(f"degree must be an integer, got d={self.d!r}")
        if self.d < 2:
            raise ValueError(f"degree must be at least 2, got d={self.d}")
        object.__setattr__(self, "x", float(self.x))
        object.__setattr__(self, "d", int(self.d))

    def oracle_root(self) -> float:
        return self.x ** (1.0 / self.d)


@dataclass(frozen=True)
class IterationConfig:
    b: float
    c1: float = 0.0
    tol: float = 1e-10
    max_iter: int = 10_000
    max_restarts: int = 3
    zero_guard: float = DEFAULT_ZERO_GUARD

    def __post_init__(self):
        if not math.isfinite(self.b):
            raise ValueError(f"offset b must be finite, got {self.b!r}")
        if self.b == 0:
            raise ValueError(
                "offset b = 0 is rejected: the fixed point is only neutrally stable "
                "and the iterates alternate between r1 and x/r1 forever"
            )
        if not math.isfinite(self.c1):
            raise ValueError(f"initial value c1 must be finite, got {self.c1!r}")
        if not self.tol > 0:
            raise ValueError(f"tol must be positive, got {self.tol!r}")
        if self.max_iter < 1:
            raise ValueError(f"max_iter must be >= 1, got {self.max_iter!r}")
        if self.max_restarts < 0:
            raise ValueError(f"max_restarts must be >= 0, got {self.max_restarts!r}")
        if not self.zero_guard > 0:
            raise ValueError(f"zero_guard must be positive, got {self.zero_guard!r}")


@dataclass(frozen=True)
class IterationTrace:
    """Result of a run.

    ``offset`` and ``sign`` map an iterate to a root estimate via
    ``offset + sign * c``; baselines iterate the estimate directly
    (offset 0, sign +1).
    """

    iterates: tuple[float, ...]
    verdict: Verdict
    restarts_used: int = 0
    root_estimate: float | None = None
    residual: float = math.inf
    offset: float = 0.0
    sign: int = 1
    method: str = "OffsetFixedPoint"

    @property
    def n_steps(self) -> int:
        return len(self.iterates) - 1

    @property
    def final(self) -> float:
        return self.iterates[-1]

    def estimates(self) -> np.ndarray:
        return self.offset + self.sign * np.asarray(self.iterates, dtype=float)


def sqrt_step(c: float, x: float, b: float, zero_guard: float = DEFAULT_ZERO_GUARD) -> float:
    """One step of ``c -> (x - b**2/4) / (c - b)`` (minus convention, d = 2)."""
    den = c - b
    if abs(den) < zero_guard:
        raise ZeroDivisorError(f"|c - b| = {abs(den):.3g} below zero guard at c={c!r}, b={b!r}")
    return (x - b * b / 4) / den


def _powers(a: float, d: int) -> list[float]:
    # repeated products, not pow(): a*a must equal b*b/4 bit for bit
    out = [1.0]
    for _ in range(d):
        out.append(out[-1] * a)
    return out


def offset_power(b: float, d: int) -> float:
    """``(b/2)**d`` by repeated multiplication."""
    return _powers(b / 2, d)[d]


def divided_difference_coefficients(b: float, d: int) -> list[float]:
    """Ascending coefficients of ``Q(c) = ((b/2 + c)**d - (b/2)**d) / c``.

    ``Q(c) = sum_{k=1..d} C(d, k) (b/2)**(d-k) c**(k-1)``.
    """
    pw = _powers(b / 2, d)
    return [comb(d, k) * pw[d - k] for k in range(1, d + 1)]


def _horner(coeffs: Sequence[float], c):
    # works elementwise on floats and ndarrays with identical rounding
    v = coeffs[-1]
    for co in coeffs[-2::-1]:
        v = v * c + co
    return v


def nth_step(c: float, x: float, b: float, d: int, zero_guard: float = DEFAULT_ZERO_GUARD) -> float:
    """One step of the general map ``c -> (x - (b/2)**d) / Q(c)`` (plus convention).

    This is ``c (x - (b/2)**d) / ((b/2 + c)**d - (b/2)**d)`` with the factor
    ``c`` cancelled, so ``c = 0`` takes the continuous limit.
    """
    q = _horner(divided_difference_coefficients(b, d), c)
    if abs(q) < zero_guard:
        raise ZeroDivisorError(f"|Q(c)| = {abs(q):.3g} below zero guard at c={c!r}, b={b!r}, d={d}")
    return (x - offset_power(b, d)) / q


def recover_root(c_final: float, b: float, d: int = 2, sign_convention: str = "plus") -> float:
    """Root estimate ``b/2 - c`` (minus) or ``b/2 + c`` (plus)."""
    if sign_convention == "minus":
        return b / 2 - c_final
    if sign_convention == "plus":
        return b / 2 + c_final
    raise ValueError(f"unknown sign convention {sign_convention!r}")


def divergence_bound(x: float, b: float) -> float:
    return 1e12 * (1 + abs(b) + x)


def residual_tolerance(x: float, tol: float) -> float:
    return max(1e-8, 100 * tol) * (1 + x)


def _residual(est: float, x: float, d: int) -> float:
    try:
        r = abs(est**d - x)
    except OverflowError:
        return math.inf
    return r if math.isfinite(r) else math.inf


def _step_function(q: RootQuery, cfg: IterationConfig, convention: str) -> Callable[[float], float]:
    x, b, d, g = q.x, cfg.b, q.d, cfg.zero_guard
    if convention == "plus":
        return lambda c: nth_step(c, x, b, d, g)
    if convention == "minus":
        if d == 2:
            return lambda c: sqrt_step(c, x, b, g)
        return lambda c: -nth_step(-c, x, b, d, g)
    raise ValueError(f"unknown sign convention {convention!r}")


def _judge(c_final: float, q: RootQuery, cfg: IterationConfig, sign: int) -> tuple[Verdict, float, float]:
    est = cfg.b / 2 + sign * c_final
    res = _residual(est, q.x, q.d)
    ok = est > 0 and res <= residual_tolerance(q.x, cfg.tol)
    return (Verdict.CONVERGED_CORRECT if ok else Verdict.CONVERGED_WRONG), est, res


def run_iteration(q: RootQuery, cfg: IterationConfig, convention: str = "plus") -> IterationTrace:
    """Iterate the offset map until the step size drops to ``cfg.tol``.

    A zero divisor triggers a restart from ``c1 + 1 + |b|/2`` (at most
    ``cfg.max_restarts`` times).  Every failure mode is reported through the
    trace verdict; nothing is raised for non-convergence.
    """
    step = _step_function(q, cfg, convention)
    sign = 1 if convention == "plus" else -1
    offset = cfg.b / 2
    bound = divergence_bound(q.x, cfg.b)
    c1 = cfg.c1
    restarts = 0

    def done(iterates, verdict, est=None, res=None):
        if res is None:
            res = _residual(offset + sign * iterates[-1], q.x, q.d)
        return IterationTrace(tuple(iterates), verdict, restarts, est, res, offset, sign)

    while True:
        c = c1
        iterates = [c]
        try:
            for _ in range(cfg.max_iter):
                cn = step(c)
                iterates.append(cn)
                if not math.isfinite(cn) or abs(cn) > bound:
                    return done(iterates, Verdict.DIVERGED, res=math.inf)
                if abs(cn - c) <= cfg.tol:
                    verdict, est, res = _judge(cn, q, cfg, sign)
                    return done(iterates, verdict, est, res)
                c = cn
        except ZeroDivisorError:
            if restarts >= cfg.max_restarts:
                return done(iterates, Verdict.ZERO_DIVISOR_EXHAUSTED)
            restarts += 1
            c1 = c1 + 1 + abs(cfg.b) / 2
            continue
        return done(iterates, Verdict.MAX_ITER_EXCEEDED)


_CYCLE_MEMORY = 8
_CONVERGED, _DIVERGED, _EXHAUSTED, _POLE = 0, 1, 2, 3


@numba.njit(cache=True)
def _lane_kernel(num, coeffs, bound, c1, tol, guard, max_iter):  # pragma: no cover - compiled
    n, deg = coeffs.shape
    status = np.empty(n, dtype=np.int8)
    final = np.empty(n)
    ring = np.empty(_CYCLE_MEMORY)
    for i in range(n):
        c = c1
        filled = 0
        pos = 0
        status[i] = _EXHAUSTED
        final[i] = c
        for step in range(max_iter):
            q = coeffs[i, deg - 1]
            for k in range(deg - 2, -1, -1):
                q = q * c + coeffs[i, k]
            if abs(q) < guard:
                status[i] = _POLE
                break
            cn = num[i] / q
            if not np.isfinite(cn) or abs(cn) > bound[i]:
                status[i] = _DIVERGED
                break
            if abs(cn - c) <= tol:
                status[i] = _CONVERGED
                final[i] = cn
                break
            period = 0
            for j in range(filled):
                if cn == ring[(pos - 1 - j) % _CYCLE_MEMORY]:
                    period = j + 2
                    break
            if period:
                # periodic from here on: pick the iterate the budget ends on
                phase = (max_iter - (step + 1 - period)) % period
                if phase == period - 1:
                    final[i] = c
                else:
                    final[i] = ring[(pos - 1 - (period - 2 - phase)) % _CYCLE_MEMORY]
                break
            ring[pos] = c
            pos = (pos + 1) % _CYCLE_MEMORY
            if filled < _CYCLE_MEMORY:
                filled += 1
            c = cn
            final[i] = c
    return status, final


def run_iteration_batch(
    q: RootQuery, bs: Sequence[float], cfg: IterationConfig
) -> tuple[list[Verdict], np.ndarray, np.ndarray]:
    """Verdicts of ``run_iteration(q, cfg with b)`` for every ``b`` in ``bs``.

    A compiled loop performs the same floating-point operations as the scalar
    path, so verdicts, estimates and residuals match it exactly.  Runs that
    hit the zero guard are handed to the scalar driver (restart policy).
    Orbits that revisit an earlier iterate exactly are periodic and cannot
    converge; they stop early with ``MaxIterExceeded`` and the residual of the
    iterate the full budget would have ended on.

    Returns ``(verdicts, root_estimates, residuals)``; estimates are NaN for
    non-converged runs.
    """
    bs = [float(b) for b in bs]
    if any(b == 0 for b in bs):
        raise ValueError("b = 0 is not a valid offset")
    n = len(bs)
    verdicts: list[Verdict] = []
    estimates = np.full(n, np.nan)
    residuals = np.full(n, np.inf)
    if n == 0:
        return verdicts, estimates, residuals
    x, d = q.x, q.d
    coeffs = np.array([divided_difference_coefficients(b, d) for b in bs], dtype=float)
    num = np.array([x - offset_power(b, d) for b in bs])
    bound = np.array([divergence_bound(x, b) for b in bs])
    status, final = _lane_kernel(
        num, coeffs, bound, float(cfg.c1), float(cfg.tol), float(cfg.zero_guard), int(cfg.max_iter)
    )
    for i, (st, cf, b) in enumerate(zip(status, final, bs)):
        cf = float(cf)
        if st == _CONVERGED:
            verdict, estimates[i], residuals[i] = _judge(cf, q, replace(cfg, b=b), 1)
        elif st == _DIVERGED:
            verdict = Verdict.DIVERGED
        elif st == _EXHAUSTED:
            verdict = Verdict.MAX_ITER_EXCEEDED
            residuals[i] = _residual(b / 2 + cf, x, d)
        else:
            tr = run_iteration(q, replace(cfg, b=b))
            verdict, residuals[i] = tr.verdict, tr.residual
            if tr.root_estimate is not None:
                estimates[i] = tr.root_estimate
        verdicts.append(verdict)
    return verdicts, estimates, residuals
