#!/usr/bin/env python
import logging
import math

import numpy as np

from ..borel import (build_series, derivative_constant, load_jet, random_jet, series_sup_bound, term_deriv_bound,
                     term_map, verify_jet)
from ..kmaps import BUMP, kmap_from_descriptor
from ..polynomials import eval_poly, norm_bound
from ..reporting import at_most, check, info
from ..spaces import Space, as_array, scale
from ..verify import FDConfig, ball_samples, directional_deriv, relative_error, sup_probe
from .base_suite import VerificationSuite

logger = logging.getLogger(__name__)

GLOBAL_NORM_RANGE = (1e-3, 1e6)
IDENTITY_TOL = 1e-12
SUP_SLACK = 1e-9
# (j, n) pairs for the eps^(j - n) scaling check
POWER_LAW_CASES = ((3, 1), (3, 2), (4, 2))
POWER_LAW_EPS = (0.5, 0.25)
POWER_LAW_POINTS = 20
POWER_LAW_SLACK = 1.5
CROSS_ORACLE_ORDERS = (0, 1, 2)


class BorelSuite(VerificationSuite):
    """Jet reproduction, identity region and global bounds of the Borel series"""

    def __init__(self, config, settings=None):
        super().__init__(config, settings)
        self.name = "borel"
        self.description = "Borel-lemma realization of a finite jet"

    def setup(self):
        cfg = self.config
        self.jet = self._load_jet()
        space = self.jet.domain
        self.K = kmap_from_descriptor(cfg.kmap_descriptor(), space, cfg.max_deriv_order)
        if self.jet.J > self.K.deriv_order + 1:
            logger.warning(f"Jet order {self.jet.J} exceeds the derivative order {self.K.deriv_order} of H")
        self.series = build_series(self.jet, self.K, cfg.budget)
        self.space = space

    def _load_jet(self):
        cfg = self.config
        if cfg.jet_path:
            logger.info(f"Loading jet from {cfg.jet_path}")
            return load_jet(cfg.jet_path)
        if cfg.kmap_kind == BUMP:
            domain = Space.pvec(cfg.borel_d, cfg.p)
        else:
            domain = Space.grid(cfg.borel_d)
        return random_jet(domain, cfg.J, cfg.terms, self.rng(50))

    def run(self):
        checks = [
            self._summary(),
            self._epsilons(),
            self._budget(),
        ]
        checks.extend(self._jet_reproduction())
        checks.append(self._identity_region())
        checks.append(self._global_sup())
        checks.extend(self._power_law())
        checks.append(self._cross_oracle())
        return checks

    def _summary(self):
        return info(self.check_name("series"), self.series.epsilons, None,
                    J=self.jet.J, identity_radius=self.series.identity_radius,
                    kmap=self.K.descriptor(), budget=self.config.budget)

    def _epsilons(self):
        eps = self.series.epsilons
        ok = all(0.0 < e <= 1.0 for e in eps) and all(b <= a for a, b in zip(eps, eps[1:]))
        return check(self.check_name("epsilons_valid"), ok, list(eps))

    def _budget(self):
        """eps_j^(j - n) c_{j,n} <= 2^-j budget for every n < j."""
        worst = 0.0
        rows = []
        for j, (P, eps) in enumerate(zip(self.jet.polys, self.series.epsilons)):
            for n in range(j):
                bound = term_deriv_bound(P, self.K, eps, n)
                ratio = bound / (2.0 ** -j * self.config.budget)
                worst = max(worst, ratio)
                rows.append({"j": j, "n": n, "bound": bound, "c": derivative_constant(P, self.K, n)})
        return at_most(self.check_name("derivative_budget"), worst, 1.0, 1e-12, terms=rows)

    def _jet_reproduction(self):
        rng = self.rng(51)
        directions = [self.space.random_direction(rng) for _ in range(self.config.directions)]
        report = verify_jet(self.series, directions, self.config.tol_jet)
        checks = [check(self.check_name("jet_reproduction"), report.passed, report.max_error,
                        report.tolerance, max_fit_residual=report.max_fit_residual,
                        well_conditioned=report.well_conditioned, rows=report.rows),
                   info(self.check_name("single_radius_fit"), report.single_fit_max_error, None,
                        resolvable=report.single_fit_conditioned, radius=self.series.identity_radius)]
        for n in range(self.jet.J + 1):
            worst = max(row["error"] for row in report.rows if row["n"] == n)
            checks.append(at_most(self.check_name(f"jet_order_{n}"), worst, self.config.tol_jet))
        return checks

    def _identity_region(self):
        """On the identity region the series is the Taylor polynomial sum_j P_j(x) / j!."""
        rng = self.rng(52)
        radius = self.series.identity_radius
        worst = 0.0
        for x in ball_samples(self.space, radius, self.config.identity_trials, rng):
            expected = np.zeros_like(as_array(self.jet.codomain))
            floor = 0.0
            for j, P in enumerate(self.jet.polys):
                if P.is_zero:
                    continue
                expected = expected + as_array(eval_poly(P, x)) / math.factorial(j)
                floor += norm_bound(P) * x.norm() ** j / math.factorial(j)
            worst = max(worst, relative_error(self.series(x), expected, floor))
        return at_most(self.check_name("identity_region"), worst, IDENTITY_TOL, radius=radius)

    def _global_sup(self):
        cfg = self.config.probe_config(self.trials(), norm_range=GLOBAL_NORM_RANGE, offset=53)
        measured = sup_probe(self.series, self.space, cfg)
        bound = series_sup_bound(self.series)
        return at_most(self.check_name("global_sup_bound"), measured, bound, SUP_SLACK * max(1.0, bound),
                       trials=cfg.trials, norm_range=list(GLOBAL_NORM_RANGE))

    def _power_law(self):
        """Derivatives of x -> P_j(eps K(x / eps)) at x = eps xi scale like eps^(j - n).

        Plain central differences with steps proportional to eps sample the
        same points of P_j o K for both scales.
        """
        checks = []
        rng = self.rng(54)
        points = [self.space.random_element(rng, r) for r in rng.uniform(0.1, 1.0, POWER_LAW_POINTS)]
        directions = [self.space.random_direction(rng) for _ in points]
        for j, n in POWER_LAW_CASES:
            name = self.check_name(f"eps_power_law_{j}_{n}")
            if j > self.jet.J or self.jet.polys[j].is_zero:
                checks.append(info(name, None, None, reason="no such jet term"))
                continue
            P = self.jet.polys[j]
            measured = {}
            within_bound = True
            for eps in POWER_LAW_EPS:
                f = term_map(P, self.K, eps)
                fd = FDConfig(self.config.base_step * eps, 1)
                best = 0.0
                for xi, v in zip(points, directions):
                    value = directional_deriv(f, scale(eps, xi), v, n, fd).value
                    best = max(best, float(np.max(np.abs(as_array(value)))))
                measured[eps] = best
                within_bound = within_bound and best <= term_deriv_bound(P, self.K, eps, n) * (1.0 + 1e-9)
            big, small = POWER_LAW_EPS
            expected = (small / big) ** (j - n)
            ratio = measured[small] / measured[big] if measured[big] > 0.0 else 0.0
            checks.append(check(name, ratio <= expected * POWER_LAW_SLACK and within_bound, ratio, expected,
                                POWER_LAW_SLACK, per_eps=measured, within_derivative_bound=within_bound))
        return checks

    def _cross_oracle(self):
        """Finite differences of each term at 0, summed, against P_n(v).

        Term j is differenced with steps inside its own identity region,
        where it is the polynomial P_j(x) / j!.
        """
        rng = self.rng(55)
        zero = self.space.zero()
        worst = 0.0
        for _ in range(self.config.directions):
            v = self.space.random_direction(rng)
            for n in CROSS_ORACLE_ORDERS:
                if n > self.jet.J:
                    continue
                got = np.zeros_like(as_array(self.jet.codomain))
                for j, (P, eps) in enumerate(zip(self.jet.polys, self.series.epsilons)):
                    if P.is_zero:
                        continue
                    fd = FDConfig(0.5 * eps * self.K.r_id, self.config.levels)
                    value = directional_deriv(term_map(P, self.K, eps), zero, v, n, fd).value
                    got = got + as_array(value) / math.factorial(j)
                P = self.jet.polys[n]
                worst = max(worst, relative_error(got, eval_poly(P, v), norm_bound(P)))
        return at_most(self.check_name("fd_cross_oracle"), worst, self.config.tol_fd,
                       orders=list(CROSS_ORACLE_ORDERS))
