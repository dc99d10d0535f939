#!/usr/bin/env python
import logging

import numpy as np

from ..reporting import at_most, check
from ..scalar_smooth import deriv_sup, eval_deriv, make_bump, make_smooth_step, make_truncator
from ..spaces import Space
from ..verify import FDConfig, directional_deriv
from .base_suite import VerificationSuite

logger = logging.getLogger(__name__)

GLUE_OFFSET = 1e-12
# FD samples stay in the middle of the transition, where h^(k+8) is moderate
FD_BAND = (0.25, 0.75)
FD_STEP = 2e-3
FD_SAMPLES = 100
SAMPLES = 1000


class ScalarSuite(VerificationSuite):
    """Flat-region exactness, smoothness and derivative accuracy of the cutoffs"""

    def __init__(self, config, settings=None):
        super().__init__(config, settings)
        self.name = "scalar"
        self.description = "Mollifier step, bump and truncator"

    def setup(self):
        cfg = self.config
        self.step = make_smooth_step(cfg.max_deriv_order)
        self.bump = make_bump(cfg.a, cfg.b, cfg.max_deriv_order)
        self.h = make_truncator(cfg.a, cfg.b, cfg.max_deriv_order)

    def run(self):
        return [
            self._flat_regions(),
            self._step_symmetry(),
            self._gluing(),
            self._fd_agreement(),
            self._bounded_support(),
            self._examples(),
        ]

    def _flat_regions(self):
        rng = self.rng(1)
        a, b = self.h.inner, self.h.outer
        core = rng.uniform(-a, a, SAMPLES)
        far = np.concatenate([rng.uniform(b, 10.0 * b, SAMPLES // 2), -rng.uniform(b, 10.0 * b, SAMPLES // 2)])
        core_ok = bool(np.array_equal(self.h(core), core))
        far_ok = bool(np.all(self.h(far) == 0.0))
        return check(self.check_name("truncator_flat_exact"), core_ok and far_ok,
                     core_identity=core_ok, outside_zero=far_ok, a=a, b=b)

    def _step_symmetry(self):
        s = self.rng(2).uniform(-0.5, 1.5, SAMPLES)
        err = float(np.max(np.abs(self.step(s) + self.step(1.0 - s) - 1.0)))
        return at_most(self.check_name("step_symmetry"), err, 1e-14)

    def _gluing(self):
        worst = 0.0
        K = self.config.max_deriv_order
        for f in (self.bump, self.h):
            for point in (-f.outer, -f.inner, f.inner, f.outer):
                left = f.derivatives(point - GLUE_OFFSET, K)
                right = f.derivatives(point + GLUE_OFFSET, K)
                worst = max(worst, float(np.max(np.abs(left - right))))
        return at_most(self.check_name("gluing_continuity"), worst, 1e-10, orders=K)

    def _fd_agreement(self):
        """Analytic derivatives against Richardson-extrapolated differences.

        Errors are relative to sup|h^(k)|.
        """
        rng = self.rng(3)
        line = Space.pvec(1, 2)
        e = line.element([1.0])
        fd = FDConfig(FD_STEP, self.config.levels)
        a, b = self.h.inner, self.h.outer
        lo, hi = a + FD_BAND[0] * (b - a), a + FD_BAND[1] * (b - a)
        worst = 0.0
        for k in range(1, 4):
            scale = deriv_sup(self.h, k)
            for s in rng.uniform(lo, hi, FD_SAMPLES):
                fd_value = directional_deriv(lambda x: float(self.h(x.data[0])), line.element([s]), e, k, fd)
                worst = max(worst, abs(fd_value.value - eval_deriv(self.h, s, k)) / scale)
        return at_most(self.check_name("fd_agreement"), worst, self.config.tol_fd, orders=[1, 2, 3])

    def _bounded_support(self):
        b = self.h.outer
        s = np.linspace(-2.0 * b, 2.0 * b, 10001)
        d = self.h.derivatives(s, self.config.max_deriv_order)
        outside = np.abs(s) >= b
        sups = [float(np.max(np.abs(d[k]))) for k in range(d.shape[0])]
        finite = all(np.isfinite(sups))
        vanish = bool(np.all(d[:, outside] == 0.0))
        return check(self.check_name("derivatives_bounded"), finite and vanish,
                     sups=sups, vanish_outside=vanish)

    def _examples(self):
        values = {
            "step(-1)": (self.step(-1.0), 0.0),
            "step(2)": (self.step(2.0), 1.0),
            "step(1/2)": (self.step(0.5), 0.5),
            "h(0.2)": (self.h(0.2), 0.2 if 0.2 <= self.h.inner else None),
            "h(0.7)": (self.h(0.7), 0.0 if 0.7 >= self.h.outer else None),
            "h'(0)": (eval_deriv(self.h, 0.0, 1), 1.0),
            "step'''(-1)": (eval_deriv(self.step, -1.0, 3), 0.0),
            "bump(mid)": (self.bump(0.5 * (self.bump.inner + self.bump.outer)), 0.5),
        }
        worst = 0.0
        for got, want in values.values():
            if want is not None:
                worst = max(worst, abs(got - want))
        return at_most(self.check_name("examples"), worst, 1e-14,
                       values={k: v[0] for k, v in values.items()})
