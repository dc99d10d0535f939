#!/usr/bin/env python
import logging
import math

import numpy as np

from ..extension import (OutsideDomainError, bump_extend, extend_germ, identity_local_map,
                         integral_functional, integral_functional_global, integral_local_map,
                         linear_local_map)
from ..kmaps import POINTWISE, kmap_from_descriptor, make_space_bump, pointwise_kmap
from ..reporting import at_most, check, info
from ..spaces import GridFn, Space, scale
from ..verify import FDConfig, ball_samples, deriv_sup_probe, random_probes
from .base_suite import VerificationSuite

logger = logging.getLogger(__name__)

GLOBAL_NORM_RANGE = (1e-3, 1e6)
DERIV_PROBES = 200


class ExtensionSuite(VerificationSuite):
    """Germ extension of the integral functional and the bump extension on l_p"""

    def __init__(self, config, settings=None):
        super().__init__(config, settings)
        self.name = "extension"
        self.description = "Global extensions of local maps"

    def setup(self):
        cfg = self.config
        self.grid = Space.grid(cfg.d)
        self.K = kmap_from_descriptor(cfg.kmap_descriptor(POINTWISE), self.grid, cfg.max_deriv_order)
        self.f = integral_local_map()
        self.F = extend_germ(self.f, self.K, cfg.eps)

    def run(self):
        return [
            self._summary(),
            self._agreement(),
            self._totality(),
            self._closed_forms(),
            self._global_range(),
            self._global_is_extension(),
            self._derivative_transfer(),
            self._identity_and_linear(),
            self._bump_extension(),
        ]

    def _summary(self):
        return info(self.check_name("agreement_radius"), self.F.agreement_radius, None,
                    sup_bound=self.F.sup_bound, certified=self.F.certified,
                    eps=self.config.eps if self.config.eps is not None else 0.9 * self.f.domain_radius)

    def _agreement(self):
        rng = self.rng(40)
        worst = 0.0
        for x in ball_samples(self.grid, self.F.agreement_radius, self.config.identity_trials, rng):
            worst = max(worst, abs(self.F(x) - self.f(x)))
        return at_most(self.check_name("integral_agreement"), worst, self.config.tol_agreement,
                       probes=self.config.identity_trials, radius=self.F.agreement_radius)

    def _totality(self):
        cfg = self.config.probe_config(self.trials(), norm_range=GLOBAL_NORM_RANGE, offset=41)
        worst = 0.0
        for x in random_probes(self.grid, cfg):
            value = self.F(x)
            if not math.isfinite(value):
                return check(self.check_name("global_totality"), False, value, self.F.sup_bound)
            worst = max(worst, abs(value))
        return at_most(self.check_name("global_totality"), worst, self.F.sup_bound, self.config.tol_sup,
                       norm_range=list(GLOBAL_NORM_RANGE))

    def _closed_forms(self):
        t = np.linspace(0.0, 1.0, self.config.d)
        quarter = abs(self.F(GridFn(np.full(self.config.d, 0.25))) - 4.0 / 3.0)
        ramp = abs(self.F(GridFn(t / 4.0)) - 4.0 * math.log(4.0 / 3.0))
        ok = quarter <= 1e-14 and ramp <= 1e-8
        return check(self.check_name("closed_forms"), ok, {"constant": quarter, "ramp": ramp},
                     {"constant": 1e-14, "ramp": 1e-8})

    def _global_range(self):
        cfg = self.config.probe_config(self.trials(), norm_range=GLOBAL_NORM_RANGE, offset=42)
        values = [integral_functional_global(x) for x in random_probes(self.grid, cfg)]
        lo, hi = min(values), max(values)
        return check(self.check_name("global_range"), lo > 0.0 and hi <= 2.0, [lo, hi], [0.0, 2.0])

    def _global_is_extension(self):
        """integral_functional_global is extend_germ with eps = 1/2 and the (1/3, 1/2) truncator."""
        K = pointwise_kmap(1.0 / 3.0, 0.5, self.grid)
        F = extend_germ(self.f, K, 0.5)
        cfg = self.config.probe_config(self.config.identity_trials, norm_range=GLOBAL_NORM_RANGE, offset=43)
        same = all(F(x) == integral_functional_global(x) for x in random_probes(self.grid, cfg))
        rng = self.rng(44)
        inside = ball_samples(self.grid, 0.99 / 3.0, self.config.identity_trials, rng)
        agree = all(integral_functional_global(x) == integral_functional(x) for x in inside)
        return check(self.check_name("global_is_extension"), same and agree,
                     matches_extension=same, agrees_on_ball=agree)

    def _derivative_transfer(self):
        """Plain central differences of F against the chain-rule bounds."""
        if not self.F.deriv_bounds:
            return info(self.check_name("derivative_transfer"), None, None, reason="no certified bounds")
        fd = FDConfig(self.config.base_step * self.F.agreement_radius, 1)
        cfg = self.config.probe_config(DERIV_PROBES, norm_range=(1e-2, 10.0), offset=45)
        measured = {}
        ok = True
        for n in (1, 2):
            value = deriv_sup_probe(self.F, self.grid, n, cfg, fd)
            measured[n] = value
            ok = ok and value <= self.F.deriv_bounds[n] * (1.0 + 1e-9)
        return check(self.check_name("derivative_transfer"), ok, measured,
                     {n: self.F.deriv_bounds[n] for n in (1, 2)})

    def _identity_and_linear(self):
        rng = self.rng(46)
        ident = extend_germ(identity_local_map(1.0), self.K, 0.9)
        phi = rng.uniform(-1.0, 1.0, self.grid.size)
        linear = extend_germ(linear_local_map(self.grid, phi, 1.0), self.K, 0.9)
        ok = True
        for x in ball_samples(self.grid, ident.agreement_radius, 200, rng):
            ok = ok and ident(x) is x and linear(x) == float(np.dot(phi, x.data))
        far = self.grid.random_element(rng, 1e3)
        far_ok = ident(far).norm() <= ident.sup_bound
        return check(self.check_name("identity_and_linear"), ok and far_ok,
                     agreement_radius=ident.agreement_radius)

    def _bump_extension(self):
        space = Space.pvec(self.config.pvec_d, self.config.p)
        delta = make_space_bump(space, 0.25, 0.5, self.config.max_deriv_order)
        rng = self.rng(47)
        phi = rng.uniform(-1.0, 1.0, space.size)
        f = linear_local_map(space, phi, 1.0)
        F = bump_extend(f, delta, 0.5)
        ones = bump_extend(identity_local_map(1.0), delta, 0.5)

        core_ok = all(F(x) == f(x) for x in ball_samples(space, 0.25, 200, rng))
        outside = [space.random_element(rng, r) for r in rng.uniform(0.5, 100.0, 200)]
        zero_ok = all(F(x) == 0.0 for x in outside)
        x = space.random_element(rng, 0.4)
        delta_ok = np.array_equal(ones(x).data, scale(delta(x), x).data)
        try:
            f(space.random_element(rng, 2.0))
            gate_ok = False
        except OutsideDomainError:
            gate_ok = True
        return check(self.check_name("bump_extension"), core_ok and zero_ok and delta_ok and gate_ok,
                     core_agreement=core_ok, outside_zero=zero_ok, product_form=bool(delta_ok),
                     domain_gate=gate_ok)
