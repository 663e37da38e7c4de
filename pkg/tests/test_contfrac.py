import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from offsetroot.contfrac import (
    MAX_DEPTH,
    DepthBudgetError,
    GeneralizedCF,
    build_gcf,
    evaluate_gcf,
    format_gcf,
    gcf_iteration_equivalence,
    truncations,
)


def exact_truncation(a, beta, k):
    v = Fraction(a) / Fraction(beta)
    for _ in range(k - 1):
        v = Fraction(a) / (Fraction(beta) + v)
    return v


class TestEvaluate:
    def test_first_levels(self):
        g = build_gcf(5.0, 4.0, 2)
        assert (g.partial_numerator, g.partial_denominator) == (1.0, -4.0)
        assert evaluate_gcf(GeneralizedCF(1.0, -4.0, 1)) == -0.25
        assert evaluate_gcf(g) == pytest.approx(-4 / 17, abs=1e-16)

    def test_limit(self):
        assert evaluate_gcf(build_gcf(5.0, 4.0, 30)) == pytest.approx(2 - math.sqrt(5), abs=1e-15)

    @pytest.mark.parametrize("x,b", [(5.0, 4.0), (7.0, 4.0), (2.0, 3.0), (10.0, 5.0)])
    def test_against_fractions(self, x, b):
        g = build_gcf(x, b, 12)
        for k, v in truncations(g):
            assert v == pytest.approx(float(exact_truncation(g.partial_numerator, g.partial_denominator, k)), rel=1e-14)

    def test_depth_200_reaches_offset(self):
        for x, b in [(7.0, 4.0), (1250.0, 70.0), (2.0, 3.0)]:
            assert evaluate_gcf(build_gcf(x, b, 200)) == pytest.approx(b / 2 - math.sqrt(x), abs=1e-9)

    def test_truncation_subset(self):
        g = build_gcf(5.0, 4.0, 10)
        assert [k for k, _ in truncations(g, [1, 5, 10])] == [1, 5, 10]


class TestBuild:
    def test_coefficients(self):
        g = build_gcf(7.0, 4.0, 10)
        assert (g.partial_numerator, g.partial_denominator, g.depth) == (3.0, -4.0, 10)

    def test_perfect_offset_gives_zero(self):
        assert evaluate_gcf(build_gcf(9.0, 6.0, 5)) == 0.0

    def test_simple_flag(self):
        assert build_gcf(5.0, 4.0, 3).is_simple
        assert not build_gcf(7.0, 4.0, 3).is_simple

    def test_validation(self):
        with pytest.raises(ValueError):
            build_gcf(5.0, 0.0, 3)
        with pytest.raises(ValueError):
            build_gcf(5.0, 4.0, 0)
        with pytest.raises(DepthBudgetError):
            build_gcf(5.0, 4.0, MAX_DEPTH + 1)


@settings(max_examples=150, deadline=None)
@given(x=st.floats(0.1, 1e4), t=st.floats(0.05, 5), sign=st.sampled_from([1, -1]), depth=st.integers(1, 50))
def test_truncations_equal_iterates(x, t, sign, depth):
    b = sign * t * 2 * math.sqrt(x)
    assert gcf_iteration_equivalence(x, b, depth)


class TestFormat:
    def test_compact(self):
        assert format_gcf(build_gcf(5.0, 4.0, 10)) == "1/(-4 + 1/(-4 + 1/(-4 + …)))"

    def test_compact_exact_depth(self):
        assert format_gcf(build_gcf(7.0, 4.0, 2), levels=3) == "3/(-4 + 3/(-4))"

    def test_nested(self):
        s = format_gcf(build_gcf(5.0, 4.0, 10), style="nested", levels=2)
        assert s.splitlines()[0] == "1"
        assert s.rstrip().endswith("…")

    def test_unknown_style(self):
        with pytest.raises(ValueError):
            format_gcf(build_gcf(5.0, 4.0, 3), style="latex")
