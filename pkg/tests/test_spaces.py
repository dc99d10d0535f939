import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from src.scalar_smooth import make_truncator
from src.spaces import (CN_NORM_SAMPLES, ChebFn, GridFn, PVector, Space, SpaceMismatchError, as_array, cheb_compose,
                        cheb_derivative, cheb_eval, cn_norm, element_from_json, like, lincomb, pointwise_apply,
                        quadrature, restrict, scale, simpson_weights, value_norm)

finite = st.floats(min_value=-1e3, max_value=1e3, allow_nan=False, allow_infinity=False)


class TestNorms:
    def test_sup_norm(self):
        assert GridFn([0.1, -0.7, 0.3]).norm() == 0.7

    def test_p_norm(self):
        assert PVector([3.0, 4.0], 2).norm() == 5.0
        assert PVector([0.0, 0.0], 4).norm() == 0.0

    def test_p_norm_large_entries_stay_finite(self):
        assert PVector([1e200, 1e200], 4).norm() == pytest.approx(1e200 * 2 ** 0.25, rel=1e-12)

    def test_cn_norm_includes_derivative(self):
        # x(t) = t: sup |x| = sup |x'| = 1
        x = ChebFn([0.5, 0.5], 1)
        assert x.norm() == pytest.approx(1.0, abs=1e-14)
        steep = ChebFn([0.0, 0.0, 0.125], 1)  # T_2(2t - 1) / 8 has |x'| up to 1
        assert steep.norm() == pytest.approx(1.0, abs=1e-12)

    def test_cn_norm_sample_grid(self):
        x = ChebFn([0.1, 0.3, -0.2, 0.05, 0.02], 0)
        t = np.linspace(0.0, 1.0, 513)
        assert CN_NORM_SAMPLES == 513
        assert cn_norm(x) == float(np.max(np.abs(x.series()(t))))

    @given(arrays(np.float64, 9, elements=finite), arrays(np.float64, 9, elements=finite))
    @settings(max_examples=100, deadline=None)
    def test_grid_triangle_inequality(self, a, b):
        x, y = GridFn(a), GridFn(b)
        assert lincomb(1.0, x, 1.0, y).norm() <= x.norm() + y.norm() + 1e-12

    @given(arrays(np.float64, 6, elements=finite), st.floats(min_value=-10.0, max_value=10.0))
    @settings(max_examples=100, deadline=None)
    def test_pvec_homogeneity(self, a, lam):
        x = PVector(a, 4)
        assert scale(lam, x).norm() == pytest.approx(abs(lam) * x.norm(), rel=1e-12, abs=1e-300)

    @pytest.mark.parametrize("space", [Space.grid(17), Space.pvec(8, 4), Space.cheb(16, 1)])
    def test_random_direction_has_unit_norm(self, rng, space):
        for _ in range(20):
            assert space.random_direction(rng).norm() == pytest.approx(1.0, rel=1e-12)

    def test_random_element_norm(self, rng, grid):
        assert grid.random_element(rng, 3.5).norm() == pytest.approx(3.5, rel=1e-14)


class TestDualNorm:
    def test_grid_is_l1(self, grid):
        phi = np.linspace(-1.0, 1.0, grid.size)
        assert grid.dual_norm(phi) == pytest.approx(np.sum(np.abs(phi)))

    def test_pvec_is_conjugate(self):
        space = Space.pvec(2, 2)
        assert space.dual_norm([3.0, 4.0]) == pytest.approx(5.0)

    @pytest.mark.parametrize("space", [Space.grid(9), Space.pvec(9, 4), Space.cheb(8, 1)])
    def test_pairing_bound(self, rng, space):
        for _ in range(200):
            phi = rng.uniform(-1.0, 1.0, space.size)
            x = space.random_element(rng, rng.uniform(0.1, 5.0))
            assert abs(np.dot(phi, x.data)) <= space.dual_norm(phi) * x.norm() * (1.0 + 1e-12)

    def test_wrong_length(self, grid):
        with pytest.raises(SpaceMismatchError):
            grid.dual_norm([1.0, 2.0])


class TestSpaceDescriptor:
    def test_of(self):
        assert Space.of(GridFn([0.0, 1.0])) == Space.grid(2)
        assert Space.of(PVector([1.0], 6)) == Space.pvec(1, 6)
        assert Space.of(ChebFn([1.0, 2.0, 3.0], 2)) == Space.cheb(2, 2)

    def test_check_rejects_other_space(self, grid):
        with pytest.raises(SpaceMismatchError):
            grid.check(GridFn([0.0, 1.0]))

    def test_element_length(self, grid):
        with pytest.raises(SpaceMismatchError):
            grid.element([0.0, 1.0])

    def test_invalid(self):
        with pytest.raises(ValueError):
            Space("hilbert", 4)
        with pytest.raises(ValueError):
            Space.grid(1)

    def test_json(self):
        for space in (Space.grid(9), Space.pvec(5, 6), Space.cheb(12, 2)):
            assert Space.from_json(space.to_json()) == space

    def test_element_json(self, rng):
        x = Space.pvec(5, 6).random_direction(rng)
        y = element_from_json(x.to_json())
        assert isinstance(y, PVector) and y.p == 6
        assert np.array_equal(x.data, y.data)

    def test_element_json_errors(self):
        with pytest.raises(ValueError):
            element_from_json({"kind": "grid"})
        with pytest.raises(ValueError):
            element_from_json({"kind": "tensor", "data": [1.0]})


class TestElements:
    def test_immutable(self):
        x = GridFn([0.0, 1.0])
        with pytest.raises(ValueError):
            x.data[0] = 2.0

    def test_rejects_non_finite(self):
        with pytest.raises(ValueError):
            GridFn([0.0, np.inf])

    def test_lincomb_mismatch(self):
        with pytest.raises(SpaceMismatchError):
            lincomb(1.0, GridFn([0.0, 1.0, 2.0]), 1.0, GridFn([0.0, 1.0]))
        with pytest.raises(SpaceMismatchError):
            lincomb(1.0, PVector([1.0], 2), 1.0, PVector([1.0], 4))

    def test_codomain_helpers(self):
        assert as_array(2.5).shape == (1,)
        assert like(0.0, np.array([3.0])) == 3.0
        x = GridFn([1.0, -2.0])
        assert like(x, np.array([0.5, 0.5])).norm() == 0.5
        assert value_norm(-4.0) == 4.0
        assert value_norm(x) == 2.0
        assert value_norm(np.array([1.0, -3.0])) == 3.0


class TestGridOperations:
    def test_pointwise_apply(self):
        x = GridFn([0.0, 0.5, 1.0])
        assert np.array_equal(pointwise_apply(np.square, x).data, [0.0, 0.25, 1.0])

    def test_restrict(self):
        x = GridFn(np.arange(9.0))
        assert np.array_equal(restrict(x, 2).data, [0.0, 2.0, 4.0, 6.0, 8.0])
        with pytest.raises(ValueError):
            restrict(x, 3)

    def test_restriction_commutes_with_truncation(self, rng):
        h = make_truncator()
        x = Space.grid(33).random_element(rng, 0.45)
        assert np.array_equal(restrict(pointwise_apply(h, x), 4).data,
                              pointwise_apply(h, restrict(x, 4)).data)


class TestQuadrature:
    def test_weights_sum_to_one(self):
        assert np.sum(simpson_weights(65)) == pytest.approx(1.0, abs=1e-14)

    def test_cubic_exact(self):
        t = np.linspace(0.0, 1.0, 5)
        assert quadrature(GridFn(t ** 3)) == pytest.approx(0.25, abs=1e-15)

    def test_smooth_integrand(self):
        t = np.linspace(0.0, 1.0, 65)
        assert quadrature(GridFn(1.0 / (1.0 - t / 4.0))) == pytest.approx(4.0 * np.log(4.0 / 3.0), abs=1e-8)

    @pytest.mark.parametrize("d", [2, 4, 64])
    def test_needs_odd_size(self, d):
        with pytest.raises(ValueError):
            simpson_weights(d)


class TestChebyshev:
    def test_derivative_of_t(self):
        x = ChebFn([0.5, 0.5], 1)
        assert np.allclose(cheb_derivative(x).data, [1.0], atol=1e-14)

    def test_derivative_of_constant(self):
        assert np.array_equal(cheb_derivative(ChebFn([2.0], 1)).data, [0.0])

    def test_eval(self):
        x = ChebFn([0.5, 0.5], 1)
        assert np.allclose(cheb_eval(x, [0.0, 0.25, 1.0]), [0.0, 0.25, 1.0], atol=1e-15)

    def test_compose_identity(self, rng, cheb):
        x = cheb.random_element(rng, 1.0)
        y, aliasing = cheb_compose(lambda s: s, x)
        assert np.max(np.abs(y.data - x.data)) <= 1e-10
        assert aliasing <= 1e-10
        assert y.smoothness_order == x.smoothness_order

    def test_compose_truncator(self, cheb):
        h = make_truncator()
        coeffs = np.zeros(cheb.size)
        coeffs[:2] = [0.125, 0.125]  # t / 4
        y, _ = cheb_compose(h, ChebFn(coeffs, 1))
        t = np.linspace(0.0, 1.0, 50)
        assert np.max(np.abs(cheb_eval(y, t) - t / 4.0)) <= 1e-10
