import math

import numpy as np
import pytest

from src.kmaps import (BallKMap, KMap, bump_kmap, c1_growth_table, chain_rule_majorant, continuous_bump,
                       ideal_closure, kmap_at_ball, kmap_from_bump, kmap_from_descriptor, make_space_bump,
                       partial_bell, pointwise_kmap, rescale, vanishes_at)
from src.run_config import RunConfig
from src.spaces import Space, lincomb
from src.verify import (FDConfig, ProbeConfig, ball_samples, directional_deriv, identity_radius_probe, random_probes,
                        sup_probe)


class TestBell:
    def test_stirling_numbers(self):
        table = partial_bell([1.0] * 5, 4)
        assert table[4, 1] == 1.0
        assert table[4, 2] == 7.0
        assert table[4, 3] == 6.0
        assert table[4, 4] == 1.0
        assert table[3, 2] == 3.0

    def test_bell_number(self):
        assert chain_rule_majorant([1.0] * 5, [1.0] * 5, 4) == 15.0

    def test_zeroth_order(self):
        assert chain_rule_majorant([2.5, 1.0], [7.0, 1.0], 0) == 2.5

    def test_linear_inner(self):
        # f(c s): n-th derivative c^n f^(n)
        outer = [1.0, 2.0, 3.0, 4.0]
        assert chain_rule_majorant(outer, [0.0, 2.0, 0.0, 0.0], 3) == 4.0 * 8.0

    def test_missing_inner_bounds_propagate(self):
        table = partial_bell([1.0, 1.0], 3)
        assert table[3, 1] == math.inf
        assert table[3, 3] == 1.0

    def test_missing_outer_bounds(self):
        assert chain_rule_majorant([1.0, 1.0], [1.0, 1.0, 1.0], 2) == math.inf


class TestPointwise:
    def test_identity_is_bit_exact(self, rng, pointwise):
        for _ in range(200):
            x = pointwise.space.random_element(rng, rng.uniform(0.0, 1.0 / 3.0))
            assert np.array_equal(pointwise(x).data, x.data)

    def test_sup_bound(self, pointwise):
        for x in random_probes(pointwise.space, ProbeConfig(500, (1e-3, 1e6), 3)):
            assert pointwise(x).norm() <= pointwise.bound

    def test_descriptor_fields(self, pointwise):
        assert pointwise.r_id == 1.0 / 3.0
        assert pointwise.bound == 0.5
        assert pointwise.deriv_bound(0) == 0.5
        assert pointwise.deriv_bound(1) >= 1.0
        assert pointwise.deriv_bound(pointwise.deriv_order + 1) == math.inf

    def test_certificate_on_64_points(self):
        K = pointwise_kmap(1.0 / 3.0, 0.5, Space.grid(64))
        rng = np.random.default_rng(64)
        for x in ball_samples(K.space, 1.0 / 3.0, 1000, rng):
            assert np.array_equal(K(x).data, x.data)
        assert sup_probe(K, K.space, ProbeConfig(10000, (1e-3, 1e3), 64)) <= 0.5 + 1e-12

    def test_first_derivative_within_bound(self, rng, small_pointwise):
        space = small_pointwise.space
        fd = FDConfig(1e-4, 1)
        for _ in range(100):
            x = space.random_element(rng, rng.uniform(0.3, 0.6))
            v = space.random_direction(rng)
            d = directional_deriv(small_pointwise, x, v, 1, fd).value
            assert d.norm() <= small_pointwise.deriv_bound(1) * 1.001

    def test_identity_probe(self, pointwise):
        probe = identity_radius_probe(pointwise, ProbeConfig(300, seed=5))
        assert not probe.violated
        assert probe.radius >= 0.0

    def test_cheb_space_has_no_finite_bound(self):
        K = pointwise_kmap(1.0 / 3.0, 0.5, Space.cheb(16, 1))
        assert K.bound == math.inf
        assert K.deriv_bounds == ()
        assert pointwise_kmap(1.0 / 3.0, 0.5, Space.cheb(16, 0)).bound == 0.5

    def test_rejects_pvec(self, pvec):
        with pytest.raises(ValueError):
            pointwise_kmap(1.0 / 3.0, 0.5, pvec)


class TestBump:
    def test_identity_returns_input(self, rng, bump):
        for _ in range(200):
            x = bump.space.random_element(rng, rng.uniform(0.0, 0.5))
            assert bump(x) is x

    def test_sup_bound(self, bump):
        for x in random_probes(bump.space, ProbeConfig(500, (1e-2, 1e3), 4)):
            assert bump(x).norm() <= bump.bound

    def test_vanishes_outside(self, rng, bump):
        x = bump.space.random_element(rng, 1.5)
        assert bump(x).norm() == 0.0

    def test_derivative_bounds(self, bump):
        assert bump.deriv_bounds[0] == 1.0
        assert len(bump.deriv_bounds) == bump.deriv_order + 1
        assert all(math.isfinite(d) and d > 0.0 for d in bump.deriv_bounds)

    def test_needs_even_p(self):
        with pytest.raises(ValueError):
            make_space_bump(Space.pvec(4, 3), 0.5, 1.0)

    def test_needs_pvec(self, grid):
        with pytest.raises(ValueError):
            make_space_bump(grid, 0.5, 1.0)

    def test_radii_order(self, pvec):
        with pytest.raises(ValueError):
            bump_kmap(1.0, 0.5, pvec)

    def test_continuous_bump(self, rng, grid):
        K = kmap_from_bump(continuous_bump(grid, 0.25, 0.5))
        assert K.deriv_bounds == ()
        assert K.deriv_order == 0
        x = grid.random_element(rng, 0.2)
        assert K(x) is x
        assert K(grid.random_element(rng, 0.45)).norm() < 0.45
        assert K(grid.random_element(rng, 0.7)).norm() == 0.0


class TestKMapValidation:
    def test_bound_below_identity_radius(self, grid):
        with pytest.raises(ValueError):
            KMap(grid, 1.0, 0.5, lambda x: x)

    def test_identity_radius_positive(self, grid):
        with pytest.raises(ValueError):
            KMap(grid, 0.0, 0.5, lambda x: x)

    def test_rejects_other_space(self, pointwise):
        with pytest.raises(ValueError):
            pointwise(Space.grid(3).zero())


class TestRescale:
    def test_radii_and_bounds(self, pointwise):
        K = rescale(pointwise, 0.1)
        assert K.r_id == pytest.approx(1.0 / 15.0, rel=1e-15)
        assert K.bound == 0.1
        for k in range(1, len(K.deriv_bounds)):
            assert K.deriv_bounds[k] == pytest.approx(5.0 ** (k - 1) * pointwise.deriv_bounds[k], rel=1e-15)

    def test_identity_and_sup(self, rng, pointwise):
        K = rescale(pointwise, 0.1)
        for _ in range(100):
            x = K.space.random_element(rng, rng.uniform(0.0, K.r_id * (1.0 - 1e-9)))
            assert K(x) is x
        for x in random_probes(K.space, ProbeConfig(300, (1e-3, 1e3), 6)):
            assert K(x).norm() <= 0.1 * (1.0 + 1e-15)

    def test_rescale_to_own_bound_is_unchanged(self, rng, pointwise):
        K = rescale(pointwise, pointwise.bound)
        for x in random_probes(K.space, ProbeConfig(100, (1e-2, 10.0), 7)):
            assert np.array_equal(K(x).data, pointwise(x).data)

    def test_infinite_bound(self):
        with pytest.raises(ValueError):
            rescale(pointwise_kmap(1.0 / 3.0, 0.5, Space.cheb(16, 1)), 0.5)

    def test_non_positive_eps(self, pointwise):
        with pytest.raises(ValueError):
            rescale(pointwise, 0.0)


class TestBall:
    def test_identity_near_center(self, rng, pointwise):
        z = pointwise.space.random_element(rng, 2.0)
        B = kmap_at_ball(pointwise, z, 0.3, 0.1)
        assert isinstance(B, BallKMap)
        assert B.identity_radius == pytest.approx(0.35)
        for _ in range(100):
            w = pointwise.space.random_element(rng, rng.uniform(0.0, 0.34))
            x = lincomb(1.0, z, 1.0, w)
            assert B(x) is x

    def test_image_stays_near_center(self, rng, pointwise):
        z = pointwise.space.random_element(rng, 2.0)
        B = kmap_at_ball(pointwise, z, 0.3, 0.1)
        for _ in range(100):
            x = pointwise.space.random_element(rng, rng.uniform(0.0, 10.0))
            assert lincomb(1.0, B(x), -1.0, z).norm() <= B.image_radius + 1e-12

    def test_invalid(self, pointwise):
        z = pointwise.space.zero()
        with pytest.raises(ValueError):
            kmap_at_ball(pointwise, z, 0.3, 0.0)
        with pytest.raises(ValueError):
            kmap_at_ball(pointwise, z, -0.1, 0.1)


class TestDescriptors:
    def _same_action(self, K, L, space, seed):
        for x in random_probes(space, ProbeConfig(50, (1e-2, 10.0), seed)):
            assert np.array_equal(K(x).data, L(x).data)

    def test_pointwise(self, pointwise):
        L = kmap_from_descriptor(pointwise.descriptor(), pointwise.space)
        assert L == pointwise
        self._same_action(pointwise, L, pointwise.space, 1)

    def test_bump(self, bump):
        L = kmap_from_descriptor(bump.descriptor(), bump.space)
        assert L == bump
        self._same_action(bump, L, bump.space, 2)

    def test_rescaled(self, bump):
        K = rescale(bump, 0.25)
        L = kmap_from_descriptor(K.descriptor(), K.space)
        assert L.r_id == K.r_id
        self._same_action(K, L, K.space, 3)

    def test_ball(self, rng, pointwise):
        B = kmap_at_ball(pointwise, pointwise.space.random_element(rng, 1.0), 0.2, 0.05)
        L = kmap_from_descriptor(B.descriptor(), pointwise.space)
        assert L.c == B.c
        self._same_action(B, L, pointwise.space, 4)

    def test_run_config_descriptors(self, grid, pvec):
        config = RunConfig()
        K = kmap_from_descriptor(config.kmap_descriptor(), grid)
        assert K.kind == "pointwise"
        assert (K.r_id, K.bound) == (config.a, config.b)
        B = kmap_from_descriptor(config.kmap_descriptor("bump"), pvec)
        assert (B.r_id, B.bound) == (config.rho_in, config.rho_out)
        with pytest.raises(ValueError):
            kmap_from_descriptor(config.kmap_descriptor("bump"), grid)

    def test_unknown_kind(self, grid):
        with pytest.raises(ValueError):
            kmap_from_descriptor({"kind": "radial", "params": {}}, grid)

    def test_missing_parameter(self, grid):
        with pytest.raises(ValueError):
            kmap_from_descriptor({"kind": "pointwise", "params": {"a": 0.25}}, grid)


class TestIdealClosure:
    def _members(self, space, rng, count=100):
        out = []
        for _ in range(count):
            x = space.random_element(rng, rng.uniform(0.0, 2.0))
            data = np.array(x.data)
            data[3] = 0.0
            out.append(x.with_data(data))
        return out

    def test_pointwise_preserves_vanishing_ideal(self, rng, pointwise):
        checked, violations = ideal_closure(pointwise, vanishes_at(3), self._members(pointwise.space, rng))
        assert checked == 100
        assert violations == 0

    def test_bump_preserves_coordinate_subspace(self, rng, bump):
        checked, violations = ideal_closure(bump, vanishes_at(3), self._members(bump.space, rng))
        assert checked == 100
        assert violations == 0

    def test_non_members_are_skipped(self, rng, pointwise):
        samples = [pointwise.space.random_element(rng, 1.0) for _ in range(10)]
        assert ideal_closure(pointwise, vanishes_at(3), samples) == (0, 0)

    def test_detects_violation(self, grid, rng):
        shift = KMap(grid, 1.0, 10.0, lambda x: x.with_data(x.data + 1.0))
        checked, violations = ideal_closure(shift, vanishes_at(3), self._members(grid, rng, 10))
        assert (checked, violations) == (10, 10)


class TestC1Growth:
    def test_norm_grows_linearly(self):
        K = pointwise_kmap(1.0 / 3.0, 0.5, Space.cheb(128, 1))
        rows, slope = c1_growth_table(K, [4.0, 8.0, 16.0, 32.0], 0.25)
        assert len(rows) == 4
        assert slope >= 0.9
        assert rows[-1]["output_norm"] > rows[0]["output_norm"]

    def test_needs_cheb_space(self, pointwise):
        with pytest.raises(ValueError):
            c1_growth_table(pointwise, [4.0, 8.0], 0.25)
