#!/usr/bin/env python
"""
Borel-lemma realization of a finite jet {P_j}: the series
f(x) = sum_j P_j(H_j(x)) / j! with H_j(x) = eps_j H(x / eps_j).
"""
import json
import logging
import math
from dataclasses import dataclass, field
from typing import List

import numpy as np

from .kmaps import partial_bell
from .polynomials import HomogeneousPoly, eval_poly, norm_bound, random_rank_one_poly
from .spaces import Space, as_array, like, scale
from .verify import relative_error, taylor_coeffs

logger = logging.getLogger(__name__)

DEFAULT_BUDGET = 1.0
FIT_MARGIN = 0.9


@dataclass(frozen=True)
class Jet:
    """Polynomials P_0..P_J with degree(P_j) = j on one domain."""
    polys: List[HomogeneousPoly]

    def __post_init__(self):
        polys = tuple(self.polys)
        if not polys:
            raise ValueError("A jet needs at least P_0")
        for j, P in enumerate(polys):
            if P.degree != j:
                raise ValueError(f"Jet entry {j} has degree {P.degree}")
            if P.domain != polys[0].domain:
                raise ValueError(f"Jet entry {j} lives on {P.domain}, expected {polys[0].domain}")
            if type(P.codomain) is not type(polys[0].codomain) or \
                    np.shape(as_array(P.codomain)) != np.shape(as_array(polys[0].codomain)):
                raise ValueError(f"Jet entry {j} has a different codomain")
        object.__setattr__(self, "polys", polys)

    @property
    def J(self):
        return len(self.polys) - 1

    @property
    def domain(self):
        return self.polys[0].domain

    @property
    def codomain(self):
        return self.polys[0].codomain

    def to_json(self):
        return {"domain": self.domain.to_json(), "polys": [P.to_json() for P in self.polys]}

    @classmethod
    def from_json(cls, obj):
        """Build from {"domain": {...}, "polys": [{"degree": 0, "terms": [...]}, ...]}"""
        if "polys" not in obj:
            raise ValueError("Jet JSON needs a 'polys' list")
        domain = Space.from_json(obj["domain"]) if "domain" in obj else None
        polys = [HomogeneousPoly.from_json(p, domain) for p in obj["polys"]]
        polys.sort(key=lambda P: P.degree)
        return cls(polys)


def load_jet(path):
    """Read a Jet from a JSON file."""
    with open(path, "r", encoding="utf-8") as f:
        obj = json.load(f)
    if not isinstance(obj, dict):
        raise ValueError(f"Jet file {path} must hold a JSON object")
    return Jet.from_json(obj)


def random_jet(domain, J, terms, rng, codomain=None):
    """Seeded jet of random rank-one polynomials of degrees 0..J."""
    return Jet([random_rank_one_poly(domain, j, terms, rng, codomain) for j in range(J + 1)])


@dataclass(frozen=True)
class BorelSeries:
    """Truncated Borel series over a base K-map.

    Attributes:
        jet: Jet
        base_kmap: KMap H
        epsilons: eps_0..eps_J, in (0, 1] and nonincreasing
    """
    jet: Jet
    base_kmap: object
    epsilons: List[float] = field(default_factory=list)

    def __post_init__(self):
        eps = tuple(float(e) for e in self.epsilons)
        if len(eps) != self.jet.J + 1:
            raise ValueError(f"Need {self.jet.J + 1} scales, got {len(eps)}")
        if any(not (0.0 < e <= 1.0) for e in eps):
            raise ValueError(f"Scales must lie in (0, 1], got {eps}")
        if any(b > a for a, b in zip(eps, eps[1:])):
            raise ValueError(f"Scales must be nonincreasing, got {eps}")
        self.base_kmap.space.check(self.jet.domain.zero())
        object.__setattr__(self, "epsilons", eps)

    @property
    def truncation(self):
        return self.jet.J

    @property
    def identity_radius(self):
        """All H_j are the identity on ||x|| <= min_j eps_j r_id."""
        return min(self.epsilons) * self.base_kmap.r_id

    def __call__(self, x):
        return eval_series(self, x)


def scaled_kmap(K, eps):
    """H_eps(x) = eps K(x / eps), returning x itself where K acts as the identity."""
    def evaluate(x):
        y = scale(1.0 / eps, x)
        hy = K(y)
        if np.array_equal(hy.data, y.data):
            return x
        return scale(eps, hy)

    return evaluate


def term_map(P, K, eps):
    """x -> P(eps K(x / eps))"""
    H = scaled_kmap(K, eps)
    return lambda x: eval_poly(P, H(x))


def eval_series(B, x):
    """sum_{j <= J} P_j(eps_j K(x / eps_j)) / j!"""
    total = np.zeros_like(as_array(B.jet.codomain))
    for j, (P, eps) in enumerate(zip(B.jet.polys, B.epsilons)):
        if P.is_zero:
            continue
        total = total + as_array(term_map(P, B.base_kmap, eps)(x)) / math.factorial(j)
    return like(B.jet.codomain, total)


def derivative_constant(P, K, n):
    """c_{j,n} = sum_{m <= min(n, j)} j!/(j-m)! c_j N^(j-m) B_{n,m}(D_1, ..., D_{n-m+1}).

    Bounds ||(P o H)^(n)(x)(v)^n|| for unit v, with c_j = norm_bound(P),
    N = K.bound and D_k = K.deriv_bound(k).
    """
    j = P.degree
    cj = norm_bound(P)
    if cj == 0.0:
        return 0.0
    N = K.bound
    if n == 0:
        return cj * N ** j
    inner = [N] + [K.deriv_bound(k) for k in range(1, n + 1)]
    table = partial_bell(inner, n)
    total = 0.0
    for m in range(1, min(n, j) + 1):
        if table[n, m] == 0.0:
            continue
        total += math.perm(j, m) * cj * N ** (j - m) * table[n, m]
    return total


def term_deriv_bound(P, K, eps, n):
    """eps^(j - n) c_{j,n}: bound on the n-th derivative of x -> P(eps K(x / eps))"""
    if n < 0:
        raise ValueError(f"Derivative order must be >= 0, got {n}")
    c = derivative_constant(P, K, n)
    if c == 0.0:
        return 0.0
    return eps ** (P.degree - n) * c


def choose_epsilons(jet, K, derivative_budget=DEFAULT_BUDGET):
    """eps_j = min(1, 2^-j budget / (1 + c_j^)) with c_j^ = max_{n<j} c_{j,n}.

    Every term then satisfies eps_j^(j-n) c_{j,n} <= 2^-j budget for n < j.
    Zero polynomials and P_0 get eps = 1; a running minimum keeps the
    sequence nonincreasing.
    """
    if not derivative_budget > 0.0:
        raise ValueError(f"Derivative budget must be positive, got {derivative_budget}")
    epsilons = []
    for j, P in enumerate(jet.polys):
        if P.is_zero or j == 0:
            eps = 1.0
        else:
            c_hat = max(derivative_constant(P, K, n) for n in range(j))
            if not math.isfinite(c_hat):
                raise ValueError(f"K-map has no derivative bounds up to order {j - 1}")
            eps = 1.0 if c_hat == 0.0 else min(1.0, 2.0 ** -j * derivative_budget / (1.0 + c_hat))
        if epsilons:
            eps = min(eps, epsilons[-1])
        epsilons.append(eps)
    logger.info(f"Chosen scales for J={jet.J}: {[f'{e:.4g}' for e in epsilons]}")
    return epsilons


def build_series(jet, K, budget=DEFAULT_BUDGET):
    return BorelSeries(jet, K, choose_epsilons(jet, K, budget))


def series_sup_bound(B):
    """sum_j norm_bound(P_j) (eps_j N)^j / j!"""
    N = B.base_kmap.bound
    return float(sum(norm_bound(P) * (eps * N) ** P.degree / math.factorial(P.degree)
                     for P, eps in zip(B.jet.polys, B.epsilons)))


@dataclass
class JetReport:
    """Per-(n, direction) relative errors of the recovered jet.

    Attributes:
        rows: {"n", "direction", "error", "single_fit_error"} per pair
        max_error: Worst error of the term-by-term read-out
        tolerance: Pass threshold
        max_fit_residual: Worst residual over the term fits
        well_conditioned: Every term fit had a small residual and a resolvable radius
        single_fit_conditioned: The one-radius fit of the whole series was resolvable
        single_fit_max_error: Worst error of that one-radius fit
    """
    rows: List[dict]
    max_error: float
    tolerance: float
    max_fit_residual: float
    well_conditioned: bool = True
    single_fit_conditioned: bool = True
    single_fit_max_error: float = 0.0

    @property
    def passed(self):
        return self.well_conditioned and self.max_error <= self.tolerance


def _term_coeffs(B, v, size):
    """Taylor coefficients of s -> B(s v), summed over the series terms.

    Term j is fitted on its own identity region, radius 0.9 eps_j r_id / ||v||,
    where it is exactly the degree-j polynomial P_j(s v) / j!.
    """
    total = [np.zeros_like(as_array(B.jet.codomain)) for _ in range(B.truncation + 1)]
    residual = 0.0
    conditioned = True
    for j, (P, eps) in enumerate(zip(B.jet.polys, B.epsilons)):
        if P.is_zero:
            continue
        radius = FIT_MARGIN * eps * B.base_kmap.r_id / size
        fit = taylor_coeffs(term_map(P, B.base_kmap, eps), v, B.truncation, radius)
        residual = max(residual, fit.residual)
        conditioned = conditioned and fit.well_conditioned
        for n in range(B.truncation + 1):
            total[n] = total[n] + as_array(fit.coeffs[n]) / math.factorial(j)
    return total, residual, conditioned


def verify_jet(B, directions, tol):
    """Recover P_n(v) from the Taylor coefficients of s -> B(s v) at 0.

    The coefficients are read term by term (see _term_coeffs). A single fit
    of the whole series on 0.9 min_j(eps_j r_id) / ||v|| is reported next to
    it; with small eps_J it loses the top orders to round-off. Errors are
    ||n! c_n - P_n(v)|| / max(||P_n(v)||, norm_bound(P_n) ||v||^n).

    Args:
        B: BorelSeries
        directions: Nonzero elements of the domain
        tol: Pass threshold on the max relative error

    Returns:
        JetReport
    """
    rows = []
    worst = 0.0
    worst_single = 0.0
    worst_residual = 0.0
    conditioned = True
    single_conditioned = True
    for index, v in enumerate(directions):
        size = v.norm()
        if size == 0.0:
            raise ValueError(f"Direction {index} is zero")
        coeffs, residual, ok = _term_coeffs(B, v, size)
        worst_residual = max(worst_residual, residual)
        conditioned = conditioned and ok
        single = taylor_coeffs(B, v, B.truncation, FIT_MARGIN * B.identity_radius / size)
        single_conditioned = single_conditioned and single.well_conditioned
        for n, P in enumerate(B.jet.polys):
            expected = eval_poly(P, v)
            floor = norm_bound(P) * size ** n
            err = relative_error(like(B.jet.codomain, coeffs[n] * math.factorial(n)), expected, floor)
            single_err = relative_error(like(B.jet.codomain, as_array(single.coeffs[n]) * math.factorial(n)),
                                        expected, floor)
            worst = max(worst, err)
            worst_single = max(worst_single, single_err)
            rows.append({"n": n, "direction": index, "error": err, "single_fit_error": single_err})
    if not single_conditioned:
        logger.info(f"One-radius fit on {B.identity_radius:.3g} cannot resolve order {B.truncation}; "
                    f"its max rel. error is {worst_single:.3g}")
    logger.info(f"Jet recovery over {len(directions)} directions: max rel. error {worst:.3g}")
    return JetReport(rows, worst, tol, worst_residual, conditioned, single_conditioned, worst_single)
