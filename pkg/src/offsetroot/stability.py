"""Fixed-point stability of the offset maps and empirical scans over ``b``.

Square roots (d = 2) use the minus convention ``r = b/2 - c``, which gives the
two fixed points ``c_minus = b/2 - sqrt(x)`` and ``c_plus = b/2 + sqrt(x)``.
Degrees d >= 3 use the plus convention ``r = b/2 + c``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .core import (
    DEFAULT_ZERO_GUARD,
    IterationConfig,
    RootQuery,
    Verdict,
    ZeroDivisorError,
    _horner,
    divided_difference_coefficients,
    offset_power,
    nth_step,
    run_iteration_batch,
    sqrt_step,
)

__all__ = [
    "StabilityClass",
    "FixedPointInfo",
    "StabilityReport",
    "RegimeRow",
    "ScanResult",
    "REGIMES",
    "iteration_map",
    "map_derivative",
    "fixed_points",
    "classify",
    "regime_of",
    "stability_report",
    "regime_table",
    "cubic_validity_bounds",
    "scan_b",
    "threshold_ratio",
    "SCAN_CONFIG",
]

DEFAULT_CLASS_TOL = 1e-9

# Budget for scans: near |f'| = 1 convergence is slow and a short budget
# shifts the apparent threshold upward.
SCAN_CONFIG = IterationConfig(b=1.0, c1=1.0, tol=1e-10, max_iter=1_000_000)

REGIMES = (
    "b<-2sqrt(x)",
    "b=-2sqrt(x)",
    "-2sqrt(x)<b<0",
    "b=0",
    "0<b<2sqrt(x)",
    "b=2sqrt(x)",
    "2sqrt(x)<b",
)


class StabilityClass(str, enum.Enum):
    UNSTABLE = "Unstable"
    NEUTRAL = "Neutral"
    STABLE = "Stable"
    SUPERSTABLE = "Superstable"

    def __str__(self) -> str:
        return self.value

    @property
    def attracting(self) -> bool:
        return self in (StabilityClass.STABLE, StabilityClass.SUPERSTABLE)


@dataclass(frozen=True)
class FixedPointInfo:
    location: float
    derivative_magnitude: float
    stability: StabilityClass
    which: str  # "c_minus", "c_plus" or "general"
    root: float  # the root this fixed point recovers


@dataclass(frozen=True)
class StabilityReport:
    query: RootQuery
    b: float
    fixed_points: list[FixedPointInfo]
    regime: str | None = None


@dataclass(frozen=True)
class RegimeRow:
    regime: str
    b: float
    minus: StabilityClass
    plus: StabilityClass
    derivative_minus: float
    derivative_plus: float


@dataclass(frozen=True)
class ScanResult:
    query: RootQuery
    grid: np.ndarray
    verdict_per_b: list[Verdict]
    root_estimates: np.ndarray
    residuals: np.ndarray
    intervals: list[tuple[float, float]]
    least_positive_b: float | None
    least_positive_b_grid: float | None = None

    def converged_mask(self) -> np.ndarray:
        return np.array([v is Verdict.CONVERGED_CORRECT for v in self.verdict_per_b], dtype=bool)


def iteration_map(x: float, b: float, d: int, zero_guard: float = DEFAULT_ZERO_GUARD):
    """The map whose fixed points are analysed for this degree."""
    if d == 2:
        return lambda c: sqrt_step(c, x, b, zero_guard)
    return lambda c: nth_step(c, x, b, d, zero_guard)


def map_derivative(c: float, x: float, b: float, d: int = 2, zero_guard: float = DEFAULT_ZERO_GUARD) -> float:
    """Signed derivative of the iteration map at ``c``.

    d = 2: ``-(x - b**2/4) / (c - b)**2``.  d >= 3: ``-P Q'(c) / Q(c)**2`` for
    the cancelled map ``P / Q(c)``.
    """
    if d == 2:
        den = c - b
        if abs(den) < zero_guard:
            raise ZeroDivisorError(f"map has a pole at c={c!r} (b={b!r})")
        return -(x - b * b / 4) / (den * den)
    coeffs = divided_difference_coefficients(b, d)
    q = _horner(coeffs, c)
    if abs(q) < zero_guard:
        raise ZeroDivisorError(f"map has a pole at c={c!r} (b={b!r}, d={d})")
    dq = _horner([k * co for k, co in enumerate(coeffs)][1:], c)
    p = x - offset_power(b, d)
    return -p * dq / (q * q)


def classify(derivative_magnitude: float, class_tol: float = DEFAULT_CLASS_TOL) -> StabilityClass:
    m = abs(derivative_magnitude)
    if m <= class_tol:
        return StabilityClass.SUPERSTABLE
    if abs(m - 1) <= class_tol:
        return StabilityClass.NEUTRAL
    if m > 1 + class_tol:
        return StabilityClass.UNSTABLE
    return StabilityClass.STABLE


def _info(c, x, b, d, which, root, class_tol, zero_guard):
    try:
        m = abs(map_derivative(c, x, b, d, zero_guard))
    except ZeroDivisorError:
        # the fixed point sits on the pole: |f'| -> infinity
        m = math.inf
    return FixedPointInfo(c, m, classify(m, class_tol), which, root)


def fixed_points(
    x: float,
    b: float,
    d: int = 2,
    class_tol: float = DEFAULT_CLASS_TOL,
    zero_guard: float = DEFAULT_ZERO_GUARD,
) -> list[FixedPointInfo]:
    """Fixed points of the map for degree ``d`` with their stability."""
    if d == 2:
        s = math.sqrt(x)
        return [
            _info(b / 2 - s, x, b, d, "c_minus", s, class_tol, zero_guard),
            _info(b / 2 + s, x, b, d, "c_plus", -s, class_tol, zero_guard),
        ]
    r = x ** (1.0 / d)
    roots = [r, -r] if d % 2 == 0 else [r]
    return [_info(root - b / 2, x, b, d, "general", root, class_tol, zero_guard) for root in roots]


def regime_of(x: float, b: float) -> str:
    """Which of the seven square-root regimes ``b`` falls in."""
    edge = 2 * math.sqrt(x)
    if b == 0:
        return "b=0"
    if math.isclose(b, edge, rel_tol=1e-12):
        return "b=2sqrt(x)"
    if math.isclose(b, -edge, rel_tol=1e-12):
        return "b=-2sqrt(x)"
    if b < -edge:
        return "b<-2sqrt(x)"
    if b < 0:
        return "-2sqrt(x)<b<0"
    if b < edge:
        return "0<b<2sqrt(x)"
    return "2sqrt(x)<b"


def stability_report(x: float, b: float, d: int = 2, class_tol: float = DEFAULT_CLASS_TOL) -> StabilityReport:
    q = RootQuery(x, d)
    fps = fixed_points(q.x, b, q.d, class_tol)
    return StabilityReport(q, b, fps, regime_of(q.x, b) if q.d == 2 else None)


def _regime_samples(x: float) -> list[float]:
    s = math.sqrt(x)
    lo, hi = -10 * s, 10 * s
    return [
        (lo + -2 * s) / 2,
        -2 * s,
        -s,
        0.0,
        s,
        2 * s,
        (2 * s + hi) / 2,
    ]


def regime_table(x: float, class_tol: float = DEFAULT_CLASS_TOL) -> list[RegimeRow]:
    """Observed stability of ``c_minus`` and ``c_plus`` at one ``b`` per regime."""
    if not x > 0:
        raise ValueError(f"x must be positive, got {x!r}")
    rows = []
    for regime, b in zip(REGIMES, _regime_samples(x)):
        lo, hi = fixed_points(x, b, 2, class_tol)
        rows.append(RegimeRow(regime, b, lo.stability, hi.stability, lo.derivative_magnitude, hi.derivative_magnitude))
    return rows


def cubic_validity_bounds(x: float) -> tuple[float, float]:
    """Offsets where the cube-root fixed point has ``f' = -1``.

    The iteration fails for ``b`` strictly between the two values.
    """
    if not x > 0:
        raise ValueError(f"x must be positive, got {x!r}")
    r = float(np.cbrt(x))
    s3 = math.sqrt(3.0)
    return r * (s3 - 1), r * (-s3 - 1)


def _intervals(grid: np.ndarray, ok: np.ndarray) -> list[tuple[float, float]]:
    out = []
    start = None
    for i, flag in enumerate(ok):
        if flag and start is None:
            start = i
        if not flag and start is not None:
            out.append((float(grid[start]), float(grid[i - 1])))
            start = None
    if start is not None:
        out.append((float(grid[start]), float(grid[-1])))
    return out


def _works(q: RootQuery, cfg: IterationConfig, b: float) -> bool:
    verdicts, _, _ = run_iteration_batch(q, [b], cfg)
    return verdicts[0] is Verdict.CONVERGED_CORRECT


def scan_b(
    q: RootQuery,
    b_min: float,
    b_max: float,
    steps: int,
    cfg_template: IterationConfig | None = None,
    refine_tol: float = 1e-4,
) -> ScanResult:
    """Run the iteration on an evenly spaced grid of offsets.

    ``b = 0`` is dropped from the grid.  The least positive working offset is
    refined by bisection between the last failing and first working positive
    grid points; the working end of the final bracket is returned.
    """
    if not b_min < b_max:
        raise ValueError(f"need b_min < b_max, got [{b_min}, {b_max}]")
    if steps < 2:
        raise ValueError(f"steps must be >= 2, got {steps}")
    cfg = cfg_template or SCAN_CONFIG
    grid = np.linspace(b_min, b_max, int(steps))
    grid = grid[grid != 0]
    verdicts, estimates, residuals = run_iteration_batch(q, grid, cfg)
    ok = np.array([v is Verdict.CONVERGED_CORRECT for v in verdicts], dtype=bool)

    least = least_grid = None
    pos = np.flatnonzero(ok & (grid > 0))
    if pos.size:
        i = int(pos[0])
        least = least_grid = float(grid[i])
        if i > 0 and grid[i - 1] > 0:
            lo, hi = float(grid[i - 1]), least
            while hi - lo > refine_tol:
                mid = (lo + hi) / 2
                if _works(q, cfg, mid):
                    hi = mid
                else:
                    lo = mid
            least = hi
    return ScanResult(q, grid, verdicts, estimates, residuals, _intervals(grid, ok), least, least_grid)


def threshold_ratio(least_positive_b: float, q: RootQuery) -> float:
    """``b**d / x``; constant across ``x`` for a fixed degree by scale invariance."""
    if not least_positive_b > 0:
        raise ValueError("threshold offset must be positive")
    return least_positive_b**q.d / q.x
