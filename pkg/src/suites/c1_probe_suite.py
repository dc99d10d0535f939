#!/usr/bin/env python
import logging

from ..kmaps import POINTWISE, c1_growth_table, kmap_from_descriptor
from ..reporting import info
from ..spaces import Space
from .base_suite import VerificationSuite

logger = logging.getLogger(__name__)

# log-log slope at which ||H(x)||_{C^n} counts as growing with the frequency
GROWTH_SLOPE = 0.9


class C1ProbeSuite(VerificationSuite):
    """Growth of ||H(x)||_{C^n} for x(t) = A sin(M t) under the pointwise K-map

    Informational only: the outcome never fails a run.
    """

    def __init__(self, config, settings=None):
        super().__init__(config, settings)
        self.name = "c1_probe"
        self.description = "C^n boundedness probe of the pointwise K-map"

    def setup(self):
        cfg = self.config
        self.space = Space.cheb(cfg.c1_degree, max(cfg.n, 1))
        self.K = kmap_from_descriptor(cfg.kmap_descriptor(POINTWISE), self.space, cfg.max_deriv_order)

    def run(self):
        rows, slope = c1_growth_table(self.K, self.config.c1_frequencies, self.config.c1_amplitude)
        growing = slope >= GROWTH_SLOPE
        if growing:
            logger.warning(f"||H(x)||_C{self.space.n} grows like M^{slope:.2f}: "
                           f"no finite sup bound on C^{self.space.n}")
        return [info(self.check_name("growth"), slope, None, rows=rows, grows=growing,
                     amplitude=self.config.c1_amplitude, degree=self.config.c1_degree)]
