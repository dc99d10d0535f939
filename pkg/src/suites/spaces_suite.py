#!/usr/bin/env python
import math

import numpy as np
from numpy.polynomial import Chebyshev

from ..reporting import at_most, check
from ..scalar_smooth import make_truncator
from ..spaces import (ChebFn, GridFn, Space, cheb_compose, cheb_derivative, cheb_eval, lincomb,
                      pointwise_apply, quadrature, restrict, scale)
from .base_suite import VerificationSuite

PAIRS = 1000


class SpacesSuite(VerificationSuite):
    """Norm axioms and exactness of the space representations"""

    def __init__(self, config, settings=None):
        super().__init__(config, settings)
        self.name = "spaces"
        self.description = "Grid, Chebyshev and l_p representations"

    def setup(self):
        cfg = self.config
        self.spaces = {
            "grid": Space.grid(cfg.d),
            "cheb": Space.cheb(cfg.D, cfg.n),
            "pvec": Space.pvec(cfg.pvec_d, cfg.p),
        }
        self.h = make_truncator(cfg.a, cfg.b, cfg.max_deriv_order)

    def run(self):
        checks = [self._norm_axioms(name, space) for name, space in self.spaces.items()]
        checks.append(self._refinement())
        checks.append(self._cheb_derivative())
        checks.append(self._quadrature())
        checks.append(self._composition())
        return checks

    def _norm_axioms(self, name, space):
        rng = self.rng(10)
        worst = 0.0
        for _ in range(PAIRS):
            x = space.random_element(rng, math.exp(rng.uniform(-3.0, 3.0)))
            y = space.random_element(rng, math.exp(rng.uniform(-3.0, 3.0)))
            lam = rng.uniform(-10.0, 10.0)
            nx, ny = x.norm(), y.norm()
            triangle = (lincomb(1.0, x, 1.0, y).norm() - nx - ny) / (nx + ny)
            homogeneity = abs(scale(lam, x).norm() - abs(lam) * nx) / (abs(lam) * nx)
            worst = max(worst, triangle, homogeneity)
        return at_most(self.check_name(f"norm_axioms_{name}"), worst, 1e-12, pairs=PAIRS)

    def _refinement(self):
        """g then restrict equals restrict then g on the coarse subgrid."""
        rng = self.rng(11)
        grid = self.spaces["grid"]
        stride = 2 if (grid.size - 1) % 2 == 0 else 1
        ok = True
        for _ in range(100):
            x = grid.random_element(rng, rng.uniform(0.0, 2.0 * self.h.outer))
            fine_first = restrict(pointwise_apply(self.h, x), stride)
            coarse_first = pointwise_apply(self.h, restrict(x, stride))
            ok = ok and np.array_equal(fine_first.data, coarse_first.data)
        return check(self.check_name("refinement_commutes"), ok, stride=stride)

    def _cheb_derivative(self):
        # t^3 on [0, 1] and its derivative 3 t^2 as degree-3 Chebyshev series
        cube = Chebyshev.fit([0.0, 0.25, 0.5, 0.75, 1.0], [0.0, 1 / 64, 1 / 8, 27 / 64, 1.0], 3, domain=[0.0, 1.0])
        square = Chebyshev.fit([0.0, 0.25, 0.5, 0.75, 1.0], [0.0, 3 / 16, 0.75, 27 / 16, 3.0], 2, domain=[0.0, 1.0])
        got = cheb_derivative(ChebFn(cube.coef, 1))
        err = float(np.max(np.abs(got.data - square.coef)))
        return at_most(self.check_name("cheb_derivative_exact"), err, 1e-12)

    def _quadrature(self):
        t = np.linspace(0.0, 1.0, self.config.d)
        errors = {
            "constant": abs(quadrature(GridFn(np.full(self.config.d, 0.7))) - 0.7),
            "linear": abs(quadrature(GridFn(t)) - 0.5),
            "quartic": abs(quadrature(GridFn(t ** 4)) - 0.2),
        }
        return at_most(self.check_name("simpson"), max(errors.values()), 1e-8, errors=errors)

    def _composition(self):
        space = self.spaces["cheb"]
        rng = self.rng(12)
        x = space.random_element(rng, 1.0)
        same, _ = cheb_compose(lambda s: s, x)
        identity_err = float(np.max(np.abs(same.data - x.data)))

        coeffs = np.zeros(space.size)
        coeffs[:2] = [0.125, 0.125]
        quarter_t = ChebFn(coeffs, space.n)
        composed, aliasing = cheb_compose(self.h, quarter_t)
        t = np.linspace(0.0, 1.0, 100)
        pointwise_err = float(np.max(np.abs(cheb_eval(composed, t) - self.h(t / 4.0))))
        return at_most(self.check_name("cheb_compose"), max(identity_err, pointwise_err), 1e-8,
                       identity_error=identity_err, pointwise_error=pointwise_err, aliasing=aliasing)
