#!/usr/bin/env python
import math

from ..polynomials import deriv_at, eval_poly, norm_bound, random_rank_one_poly
from ..reporting import at_most, check
from ..spaces import Space, as_array, lincomb, scale, value_norm
from ..verify import FDConfig, directional_deriv, relative_error
from .base_suite import VerificationSuite

# polynomial restrictions are exact under Richardson, so a coarse step is fine
POLY_FD_STEP = 0.1
FD_CASES = 100
HOMOGENEITY_CASES = 1000
Z_SAMPLES = 10
BOUND_SAMPLES = 10000
MAX_DEGREE = 4


class PolynomialsSuite(VerificationSuite):
    """Derivative formulas, homogeneity and norm bounds of rank-one polynomials"""

    def __init__(self, config, settings=None):
        super().__init__(config, settings)
        self.name = "polynomials"
        self.description = "Homogeneous polynomial maps"

    def setup(self):
        self.space = Space.grid(self.config.borel_d)

    def _random_poly(self, rng):
        degree = int(rng.integers(1, MAX_DEGREE + 1))
        return random_rank_one_poly(self.space, degree, self.config.terms, rng)

    def run(self):
        return [
            self._homogeneity(),
            self._fd_agreement(),
            self._top_order(),
            self._bound(),
            self._taylor_completeness(),
        ]

    def _homogeneity(self):
        rng = self.rng(20)
        worst = 0.0
        for _ in range(HOMOGENEITY_CASES):
            P = self._random_poly(rng)
            x = self.space.random_element(rng, rng.uniform(0.1, 2.0))
            lam = rng.uniform(-3.0, 3.0)
            got = eval_poly(P, scale(lam, x))
            want = as_array(eval_poly(P, x)) * lam ** P.degree
            floor = norm_bound(P) * (abs(lam) * x.norm()) ** P.degree
            worst = max(worst, relative_error(got, want[0], floor))
        return at_most(self.check_name("homogeneity"), worst, 1e-12, cases=HOMOGENEITY_CASES)

    def _fd_agreement(self):
        rng = self.rng(21)
        fd = FDConfig(POLY_FD_STEP, self.config.levels)
        worst = 0.0
        for _ in range(FD_CASES):
            P = self._random_poly(rng)
            z = self.space.random_element(rng, 1.0)
            v = self.space.random_direction(rng)
            floor = norm_bound(P) * 2.0 ** P.degree
            for n in range(1, 4):
                got = directional_deriv(P, z, v, n, fd).value
                worst = max(worst, relative_error(got, deriv_at(P, z, v, n), floor))
        return at_most(self.check_name("deriv_vs_fd"), worst, self.config.tol_fd, cases=FD_CASES)

    def _top_order(self):
        rng = self.rng(22)
        worst_spread = 0.0
        worst_beyond = 0.0
        for _ in range(10):
            P = self._random_poly(rng)
            v = self.space.random_direction(rng)
            target = eval_poly(P, v) * math.factorial(P.degree)
            for _ in range(Z_SAMPLES):
                z = self.space.random_element(rng, rng.uniform(0.0, 3.0))
                worst_spread = max(worst_spread,
                                   relative_error(deriv_at(P, z, v, P.degree), target, norm_bound(P)))
                worst_beyond = max(worst_beyond, value_norm(deriv_at(P, z, v, P.degree + 1)))
        ok = worst_spread <= 1e-12 and worst_beyond == 0.0
        return check(self.check_name("top_order_derivative"), ok, worst_spread, 1e-12,
                     beyond_degree=worst_beyond)

    def _bound(self):
        rng = self.rng(23)
        violations = 0
        tightest = 0.0
        for _ in range(BOUND_SAMPLES // 100):
            P = self._random_poly(rng)
            c = norm_bound(P)
            for _ in range(100):
                x = self.space.random_element(rng, math.exp(rng.uniform(-3.0, 3.0)))
                limit = c * x.norm() ** P.degree
                value = value_norm(eval_poly(P, x))
                tightest = max(tightest, value / limit if limit else 0.0)
                if value > limit * (1.0 + 1e-12):
                    violations += 1
        return check(self.check_name("norm_bound"), violations == 0, violations, 0,
                     max_ratio=tightest, samples=BOUND_SAMPLES)

    def _taylor_completeness(self):
        rng = self.rng(24)
        worst = 0.0
        for _ in range(100):
            P = self._random_poly(rng)
            z = self.space.random_element(rng, 1.0)
            v = self.space.random_element(rng, 1.0)
            series = sum(as_array(deriv_at(P, z, v, n))[0] / math.factorial(n) for n in range(P.degree + 1))
            exact = eval_poly(P, lincomb(1.0, z, 1.0, v))
            worst = max(worst, relative_error(series, exact, norm_bound(P) * 2.0 ** P.degree))
        return at_most(self.check_name("taylor_completeness"), worst, 1e-10)
