import math

import numpy as np
import pytest

from src.extension import (LocalMap, OutsideDomainError, bump_extend, extend_germ, identity_local_map,
                           integral_functional, integral_functional_global, integral_local_map,
                           linear_local_map)
from src.kmaps import make_space_bump
from src.spaces import GridFn, Space
from src.verify import ProbeConfig, ball_samples, random_probes


@pytest.fixture
def integral():
    return integral_local_map()


class TestLocalMap:
    def test_gate(self, rng, grid, integral):
        with pytest.raises(OutsideDomainError):
            integral(grid.random_element(rng, 1.5))

    def test_gate_is_value_error(self):
        assert issubclass(OutsideDomainError, ValueError)

    def test_radius_must_be_positive(self):
        with pytest.raises(ValueError):
            LocalMap(0.0, lambda x: x)

    def test_integral_bounds(self, integral):
        assert integral.deriv_bounds(0.5, 2) == (2.0, 4.0, 16.0)

    def test_integral_constants(self, grid, integral):
        assert integral(grid.zero()) == pytest.approx(1.0, abs=1e-14)
        quarter = GridFn(np.full(grid.size, 0.25))
        assert integral(quarter) == pytest.approx(4.0 / 3.0, abs=1e-14)

    def test_integral_needs_sup_below_one(self):
        with pytest.raises(OutsideDomainError):
            integral_functional(GridFn([0.0, 1.0, 0.0]))

    def test_linear(self, rng, grid):
        phi = np.linspace(-1.0, 1.0, grid.size)
        f = linear_local_map(grid, phi, 2.0)
        x = grid.random_element(rng, 1.0)
        assert f(x) == float(np.dot(phi, x.data))
        assert f.deriv_bounds(1.0)[1] == pytest.approx(np.sum(np.abs(phi)))
        with pytest.raises(OutsideDomainError):
            f(grid.random_element(rng, 3.0))


class TestExtendGerm:
    def test_agrees_on_identity_region(self, rng, grid, pointwise, integral):
        F = extend_germ(integral, pointwise)
        assert F.agreement_radius == pytest.approx(0.6, rel=1e-14)
        for x in ball_samples(grid, 0.59, 200, rng):
            assert F(x) == integral(x)

    def test_certified_sup(self, pointwise, integral):
        F = extend_germ(integral, pointwise)
        assert F.certified
        assert F.sup_bound == pytest.approx(10.0, rel=1e-12)
        assert len(F.deriv_bounds) == 7

    def test_total_and_bounded(self, pointwise, integral):
        F = extend_germ(integral, pointwise)
        for x in random_probes(pointwise.space, ProbeConfig(300, (1e-3, 1e6), 8)):
            value = F(x)
            assert math.isfinite(value)
            assert abs(value) <= F.sup_bound

    @pytest.mark.parametrize("eps", [0.0, 1.0, 1.5, -0.2])
    def test_eps_range(self, pointwise, integral, eps):
        with pytest.raises(ValueError):
            extend_germ(integral, pointwise, eps)

    def test_sampled_sup_is_not_certified(self, pointwise):
        f = LocalMap(1.0, integral_functional)
        F = extend_germ(f, pointwise, 0.5, np.random.default_rng(3), samples=200)
        assert not F.certified
        assert F.deriv_bounds == ()
        assert 2.0 / 3.0 <= F.sup_bound <= 2.0

    def test_half_radius_is_truncated_integral(self, rng, grid, pointwise, integral):
        F = extend_germ(integral, pointwise, 0.5)
        assert F.agreement_radius == pytest.approx(1.0 / 3.0)
        for x in random_probes(grid, ProbeConfig(200, (1e-2, 1e2), 9)):
            assert F(x) == integral_functional_global(x)

    def test_identity_extension(self, pointwise):
        F = extend_germ(identity_local_map(1.0), pointwise, 0.5)
        assert F.deriv_bounds[0] == 0.5
        assert F.deriv_bounds[1] == pytest.approx(pointwise.deriv_bounds[1])
        for x in random_probes(pointwise.space, ProbeConfig(200, (1e-3, 1e3), 10)):
            assert F(x).norm() <= 0.5


class TestGlobalIntegral:
    def test_range(self, grid):
        for x in random_probes(grid, ProbeConfig(300, (1e-3, 1e6), 12)):
            value = integral_functional_global(x)
            assert 0.0 < value <= 2.0 * (1.0 + 1e-14)

    def test_agrees_on_small_ball(self, rng, grid):
        for x in ball_samples(grid, 0.33, 100, rng):
            assert integral_functional_global(x) == integral_functional(x)


class TestBumpExtend:
    @pytest.fixture
    def setup(self):
        space = Space.pvec(16, 4)
        delta = make_space_bump(space, 0.25, 0.5)
        return space, delta, identity_local_map(1.0)

    def test_core_agreement(self, rng, setup):
        space, delta, f = setup
        F = bump_extend(f, delta, 0.75)
        assert F.agreement_radius == 0.25
        for x in ball_samples(space, 0.25, 100, rng):
            assert F(x) is x

    def test_zero_outside_support(self, rng, setup):
        space, delta, f = setup
        F = bump_extend(f, delta, 0.75)
        for r in (0.55, 0.6, 0.75, 5.0, 1e6):
            assert F(space.random_element(rng, r)).norm() == 0.0

    def test_product_form(self, rng, setup):
        space, delta, f = setup
        F = bump_extend(f, delta, 0.75)
        for x in ball_samples(space, 0.5, 100, rng):
            assert np.array_equal(F(x).data, delta(x) * x.data)

    def test_bounds(self, setup):
        _, delta, f = setup
        F = bump_extend(f, delta, 0.75)
        assert F.certified
        assert F.sup_bound == 0.5
        assert F.deriv_bounds[0] == 0.5

    def test_invalid_radii(self, setup):
        _, delta, f = setup
        with pytest.raises(ValueError):
            bump_extend(f, delta, 1.0)
        with pytest.raises(ValueError):
            bump_extend(f, delta, 0.4)
