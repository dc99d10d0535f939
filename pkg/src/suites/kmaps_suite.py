#!/usr/bin/env python
import logging
import math

import numpy as np

from ..kmaps import BUMP, POINTWISE, ideal_closure, kmap_at_ball, kmap_from_descriptor, rescale, vanishes_at
from ..reporting import at_most, check
from ..spaces import Space, lincomb
from ..verify import (FDConfig, ball_samples, deriv_sup_probe, identity_radius_probe, random_probes,
                      sup_probe)
from .base_suite import VerificationSuite

logger = logging.getLogger(__name__)

RESCALE_EPS = 0.1
DERIV_PROBES = 300
CHEB_IDENTITY_ATOL = 1e-10
CHEB_PROBES = 50


class KMapsSuite(VerificationSuite):
    """Identity radii, sup bounds and derivative bounds of the K-map constructions"""

    def __init__(self, config, settings=None):
        super().__init__(config, settings)
        self.name = "kmaps"
        self.description = "K-maps on C(M), l_p and C^n"

    def setup(self):
        cfg = self.config
        self.grid = Space.grid(cfg.cert_d)
        self.pointwise = kmap_from_descriptor(cfg.kmap_descriptor(POINTWISE), self.grid, cfg.max_deriv_order)
        self.pvec = Space.pvec(cfg.pvec_d, cfg.p)
        self.bump = kmap_from_descriptor(cfg.kmap_descriptor(BUMP), self.pvec, cfg.max_deriv_order)

    def run(self):
        checks = []
        for label, K in (("pointwise", self.pointwise), ("bump", self.bump)):
            checks.append(self._identity(label, K))
            checks.append(self._sup(label, K))
        checks.append(self._derivatives())
        checks.append(self._ideal())
        checks.extend(self._rescale())
        checks.append(self._ball())
        checks.append(self._cheb_identity())
        return checks

    def _identity(self, label, K, atol=0.0):
        cfg = self.config.probe_config(self.config.identity_trials, offset=30)
        probe = identity_radius_probe(K, cfg, atol=atol)
        ok = not probe.violated
        return check(self.check_name(f"{label}_identity_radius"), ok, probe.radius, K.r_id,
                     first_failure=probe.first_failure, trials=cfg.trials)

    def _sup(self, label, K):
        cfg = self.config.probe_config(self.trials(), offset=31)
        measured = sup_probe(K, K.space, cfg)
        return at_most(self.check_name(f"{label}_sup_bound"), measured, K.bound, self.config.tol_sup,
                       trials=cfg.trials, norm_range=list(cfg.norm_range))

    def _derivatives(self):
        """Plain central differences equal h^(n)(xi) v^n, so they obey sup|h^(n)|."""
        K = self.pointwise
        fd = FDConfig(self.config.base_step, 1)
        cfg = self.config.probe_config(DERIV_PROBES, norm_range=(0.1 * K.r_id, 2.0 * K.bound), offset=32)
        measured = {}
        ok = True
        for n in (1, 2):
            value = deriv_sup_probe(K, K.space, n, cfg, fd)
            measured[n] = value
            ok = ok and value <= K.deriv_bound(n) * (1.0 + 1e-9)
        return check(self.check_name("pointwise_derivatives_bounded"), ok, measured,
                     {1: K.deriv_bound(1), 2: K.deriv_bound(2)})

    def _ideal(self):
        samples = []
        for x in random_probes(self.grid, self.config.probe_config(self.config.identity_trials, offset=33)):
            data = x.data.copy()
            data[0] = 0.0
            samples.append(x.with_data(data))
        checked, violations = ideal_closure(self.pointwise, vanishes_at(0), samples)
        return check(self.check_name("ideal_property"), violations == 0 and checked == len(samples),
                     violations, 0, checked=checked)

    def _rescale(self):
        K = self.pointwise
        H1 = rescale(K, RESCALE_EPS)
        expected_r_id = K.r_id * RESCALE_EPS / K.bound
        radius_err = abs(H1.r_id - expected_r_id)

        rng = self.rng(34)
        inside = ball_samples(self.grid, 0.9 * H1.r_id, self.config.identity_trials, rng)
        identity_ok = all(np.array_equal(H1(x).data, x.data) for x in inside)

        cfg = self.config.probe_config(self.trials(), offset=35)
        measured = sup_probe(H1, self.grid, cfg)

        same = rescale(K, K.bound)
        probes = random_probes(self.grid, self.config.probe_config(self.config.identity_trials, offset=36))
        unit_ok = all(np.array_equal(same(x).data, K(x).data) for x in probes)

        return [
            check(self.check_name("rescale_identity"), radius_err <= 1e-15 and identity_ok,
                  H1.r_id, expected_r_id, eps=RESCALE_EPS),
            at_most(self.check_name("rescale_sup_bound"), measured, RESCALE_EPS, self.config.tol_sup),
            check(self.check_name("rescale_unit"), unit_ok),
        ]

    def _ball(self):
        K = self.pointwise
        rng = self.rng(37)
        z = self.grid.random_element(rng, 2.0)
        r, margin = 0.5, 0.2
        B = kmap_at_ball(K, z, r, margin)

        center_ok = np.array_equal(B(z).data, z.data)
        on_sphere = lincomb(1.0, z, 1.0, self.grid.random_element(rng, r))
        sphere_ok = np.array_equal(B(on_sphere).data, on_sphere.data)
        far = lincomb(1.0, z, 1.0, self.grid.random_element(rng, 10.0 * (r + 1.0)))
        reach = lincomb(1.0, B(far), -1.0, z).norm()
        ok = center_ok and sphere_ok and reach <= B.image_radius * (1.0 + 1e-12)
        return check(self.check_name("ball_kmap"), ok, reach, B.image_radius,
                     center_fixed=bool(center_ok), identity_on_ball=bool(sphere_ok), c=B.c)

    def _cheb_identity(self):
        """On C^n the identity holds up to the refit error of the composition."""
        space = Space.cheb(self.config.D, self.config.n)
        K = kmap_from_descriptor(self.config.kmap_descriptor(POINTWISE), space, self.config.max_deriv_order)
        cfg = self.config.probe_config(CHEB_PROBES, offset=38)
        probe = identity_radius_probe(K, cfg, atol=CHEB_IDENTITY_ATOL)
        result = check(self.check_name("cheb_identity_radius"), not probe.violated, probe.radius, K.r_id,
                       CHEB_IDENTITY_ATOL, first_failure=probe.first_failure)
        if math.isinf(K.bound):
            logger.info("Pointwise K-map on C^n carries no finite sup bound; see the c1_probe suite")
        return result
