"""The bisection and golden-section kernels on known 1-D problems."""

import math

import pytest

from lacunary.errors import NoInteriorMinimum
from lacunary.optimize import (
    bisect_nonincreasing,
    golden_section_max,
    golden_section_min,
    grid_then_golden_min,
)


class TestBisect:
    def test_finds_crossing_of_reciprocal(self):
        # g(rho) = 4 / rho crosses 1 at rho = 4
        got = bisect_nonincreasing(lambda r: 4.0 / r, 1.0, 1.0, 8.0, tol=1e-10)
        assert got == pytest.approx(4.0, abs=1e-9)
        assert 4.0 / got <= 1.0  # upper end of bracket: always feasible

    def test_result_within_tol_above_crossing(self):
        got = bisect_nonincreasing(lambda r: math.exp(-r), 0.5, 0.1, 10.0, tol=1e-8)
        assert 0.0 <= got - math.log(2.0) <= 1e-8


class TestGoldenSection:
    def test_quadratic_minimum(self):
        x, v = golden_section_min(lambda u: (u - 3.0) ** 2 + 1.0, 0.0, 10.0, tol=1e-10)
        assert x == pytest.approx(3.0, abs=1e-6)
        assert v == pytest.approx(1.0, abs=1e-12)

    def test_concave_maximum(self):
        x, v = golden_section_max(lambda u: -(u - 2.0) ** 2, 0.0, 5.0, tol=1e-10)
        assert x == pytest.approx(2.0, abs=1e-6)
        assert v == pytest.approx(0.0, abs=1e-12)


class TestGridThenGolden:
    def test_interior_minimum(self):
        grid = [2.0**e for e in range(-10, 11)]
        x, v, boundary = grid_then_golden_min(lambda k: (1 + k * k) / k, grid, tol=1e-10)
        assert not boundary
        assert v == pytest.approx(2.0, abs=1e-8)
        assert x == pytest.approx(1.0, abs=1e-4)

    def test_monotone_objective_flags_boundary(self):
        grid = [2.0**e for e in range(-5, 6)]
        x, v, boundary = grid_then_golden_min(lambda k: 2.0 + 1.0 / k, grid, tol=1e-6)
        assert boundary
        assert v == pytest.approx(2.0, abs=1e-5)

    def test_pathologically_slow_descent_raises(self):
        grid = [2.0**e for e in range(0, 4)]
        with pytest.raises(NoInteriorMinimum):
            grid_then_golden_min(
                lambda k: 1.0 / math.log(k + 2.0), grid, tol=1e-30, max_expansions=20
            )
