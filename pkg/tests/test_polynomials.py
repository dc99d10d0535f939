import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from src.polynomials import (HomogeneousPoly, RankOneTerm, deriv_at, eval_poly, norm_bound,
                             random_rank_one_poly, zero_poly)
from src.spaces import GridFn, Space, SpaceMismatchError, lincomb, scale
from src.verify import FDConfig, directional_deriv, relative_error

SPACE = Space.grid(8)


def poly(seed, degree=None, terms=2, codomain=None):
    rng = np.random.default_rng(seed)
    degree = degree if degree is not None else int(rng.integers(1, 5))
    return random_rank_one_poly(SPACE, degree, terms, rng, codomain), rng


class TestEvaluation:
    def test_closed_form(self):
        P = HomogeneousPoly(2, Space.grid(2), [RankOneTerm(3.0, [1.0, 1.0], 2.0)])
        assert eval_poly(P, GridFn([0.5, 1.0])) == 3.0 * 1.5 ** 2 * 2.0

    def test_callable(self):
        P, rng = poly(0)
        x = SPACE.random_element(rng, 1.0)
        assert P(x) == eval_poly(P, x)

    @given(st.integers(min_value=0, max_value=10 ** 6), st.floats(min_value=-3.0, max_value=3.0))
    @settings(max_examples=100, deadline=None)
    def test_homogeneity(self, seed, lam):
        P, rng = poly(seed)
        x = SPACE.random_element(rng, rng.uniform(0.1, 2.0))
        floor = norm_bound(P) * x.norm() ** P.degree * max(abs(lam), 1.0) ** P.degree
        assert relative_error(eval_poly(P, scale(lam, x)), lam ** P.degree * eval_poly(P, x), floor) <= 1e-12

    def test_vector_codomain(self, rng):
        codomain = Space.pvec(3, 2).zero()
        P = random_rank_one_poly(SPACE, 2, 3, rng, codomain)
        value = eval_poly(P, SPACE.random_element(rng, 1.0))
        assert Space.of(value) == Space.pvec(3, 2)

    def test_zero_poly(self, rng):
        P = zero_poly(SPACE, 3)
        assert P.is_zero
        assert eval_poly(P, SPACE.random_element(rng, 5.0)) == 0.0
        assert norm_bound(P) == 0.0

    def test_rejects_other_space(self):
        P, _ = poly(1)
        with pytest.raises(SpaceMismatchError):
            eval_poly(P, Space.grid(9).zero())


class TestValidation:
    def test_negative_degree(self):
        with pytest.raises(ValueError):
            HomogeneousPoly(-1, SPACE)

    def test_functional_length(self):
        with pytest.raises(SpaceMismatchError):
            HomogeneousPoly(1, SPACE, [RankOneTerm(1.0, [1.0, 2.0], 1.0)])

    def test_mixed_codomains(self):
        terms = [RankOneTerm(1.0, np.ones(8), 1.0), RankOneTerm(1.0, np.ones(8), Space.pvec(2, 2).zero())]
        with pytest.raises(SpaceMismatchError):
            HomogeneousPoly(1, SPACE, terms)


class TestDerivatives:
    def test_zeroth_order_is_value(self, rng):
        P, _ = poly(2)
        z = SPACE.random_element(rng, 1.0)
        v = SPACE.random_direction(rng)
        assert deriv_at(P, z, v, 0) == pytest.approx(eval_poly(P, z), rel=1e-14, abs=1e-300)

    @pytest.mark.parametrize("seed", range(20))
    def test_against_finite_differences(self, seed):
        P, rng = poly(seed)
        z = SPACE.random_element(rng, 1.0)
        v = SPACE.random_direction(rng)
        fd = FDConfig(0.1, 4)
        floor = norm_bound(P) * 2.0 ** P.degree
        for n in range(1, 4):
            got = directional_deriv(P, z, v, n, fd).value
            assert relative_error(got, deriv_at(P, z, v, n), floor) <= 1e-6

    @pytest.mark.parametrize("degree", [1, 2, 3, 4])
    def test_top_order_is_constant(self, degree):
        P, rng = poly(degree, degree)
        v = SPACE.random_direction(rng)
        target = math.factorial(degree) * eval_poly(P, v)
        for _ in range(10):
            z = SPACE.random_element(rng, rng.uniform(0.0, 3.0))
            assert relative_error(deriv_at(P, z, v, degree), target, norm_bound(P)) <= 1e-12
            assert deriv_at(P, z, v, degree + 1) == 0.0

    def test_taylor_expansion_is_complete(self, rng):
        for seed in range(20):
            P, _ = poly(seed)
            z = SPACE.random_element(rng, 1.0)
            v = SPACE.random_element(rng, 1.0)
            series = sum(deriv_at(P, z, v, n) / math.factorial(n) for n in range(P.degree + 1))
            exact = eval_poly(P, lincomb(1.0, z, 1.0, v))
            assert relative_error(series, exact, norm_bound(P) * 2.0 ** P.degree) <= 1e-12

    def test_negative_order(self, rng):
        P, _ = poly(3)
        with pytest.raises(ValueError):
            deriv_at(P, SPACE.zero(), SPACE.zero(), -1)


class TestNormBound:
    @pytest.mark.parametrize("space", [Space.grid(8), Space.pvec(8, 4), Space.cheb(7, 1)])
    def test_bound_holds(self, rng, space):
        for _ in range(20):
            P = random_rank_one_poly(space, int(rng.integers(0, 5)), 3, rng)
            c = norm_bound(P)
            for _ in range(50):
                x = space.random_element(rng, math.exp(rng.uniform(-3.0, 3.0)))
                assert abs(eval_poly(P, x)) <= c * x.norm() ** P.degree * (1.0 + 1e-12)

    def test_rank_one_functionals_have_unit_dual_norm(self, rng):
        P = random_rank_one_poly(SPACE, 2, 4, rng)
        for term in P.terms:
            assert SPACE.dual_norm(term.functional) == pytest.approx(1.0, rel=1e-14)


class TestJson:
    def test_round_trip_evaluates_identically(self, rng):
        P, _ = poly(5)
        Q = HomogeneousPoly.from_json(P.to_json())
        x = SPACE.random_element(rng, 1.3)
        assert eval_poly(Q, x) == eval_poly(P, x)
        assert Q.domain == P.domain

    def test_domain_inferred_from_functional(self):
        P = HomogeneousPoly.from_json({"degree": 1, "terms": [{"c": 2.0, "phi": [1.0, 0.0, 0.0]}]})
        assert P.domain == Space.grid(3)
        assert eval_poly(P, GridFn([0.5, 9.0, 9.0])) == 1.0

    def test_missing_degree(self):
        with pytest.raises(ValueError):
            HomogeneousPoly.from_json({"terms": []})

    def test_empty_needs_domain(self):
        with pytest.raises(ValueError):
            HomogeneousPoly.from_json({"degree": 2, "terms": []})
