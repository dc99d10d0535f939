#!/usr/bin/env python
"""
Germ extension: local maps, their global extensions through a rescaled
K-map or a smooth bump, and the integral functional example.
"""
import logging
import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Tuple

import numpy as np

from .kmaps import chain_rule_majorant, rescale
from .scalar_smooth import make_truncator
from .spaces import GridFn, as_array, codomain_zero, like, quadrature, sup_norm, value_norm
from .verify import ball_samples

logger = logging.getLogger(__name__)

DEFAULT_EPS_FRACTION = 0.9
SUP_SAMPLES = 10000
INTEGRAL_TRUNCATOR = make_truncator(1.0 / 3.0, 0.5)


class OutsideDomainError(ValueError):
    """Raised when a local map is evaluated outside its domain ball."""
    pass


@dataclass(frozen=True)
class LocalMap:
    """A map defined on the open ball ||x|| < domain_radius.

    Attributes:
        domain_radius: R
        evaluator: element -> codomain value
        deriv_bounds: Optional callable radius -> (sup, D_1, D_2, ...)
            certified on the closed ball of that radius
        name: Label used in reports
    """
    domain_radius: float
    evaluator: Callable = field(repr=False, compare=False)
    deriv_bounds: Optional[Callable] = field(default=None, repr=False, compare=False)
    name: str = "local"

    def __post_init__(self):
        if not self.domain_radius > 0.0:
            raise ValueError(f"domain_radius must be positive, got {self.domain_radius}")

    def __call__(self, x):
        r = x.norm()
        if r >= self.domain_radius:
            raise OutsideDomainError(
                f"{self.name} is defined for ||x|| < {self.domain_radius}, got ||x|| = {r:.6g}")
        return self.evaluator(x)


@dataclass(frozen=True)
class GlobalMap:
    """A map defined on the whole space.

    Attributes:
        evaluator: element -> codomain value
        agreement_radius: Ball on which it equals the local map
        sup_bound: Bound on ||F(x)||
        certified: False when sup_bound is a sampled estimate
        deriv_bounds: (sup, D_1, ...) when both parts certify them
    """
    evaluator: Callable = field(repr=False, compare=False)
    agreement_radius: float
    sup_bound: float
    certified: bool = False
    deriv_bounds: Tuple[float, ...] = ()

    def __call__(self, x):
        return self.evaluator(x)


def _sampled_sup(f, space, radius, rng, samples=SUP_SAMPLES):
    best = 0.0
    for x in ball_samples(space, radius, samples, rng):
        best = max(best, value_norm(f(x)))
    return best


def extend_germ(f, K, eps=None, rng=None, samples=SUP_SAMPLES):
    """Global extension F = f o H_1 with H_1 = rescale(K, eps).

    Args:
        f: LocalMap
        K: KMap with a finite sup bound
        eps: Image radius of H_1, 0 < eps < f.domain_radius (default 0.9 R)
        rng: numpy Generator for the sampled sup estimate
        samples: Sample count for the sampled sup estimate

    Returns:
        GlobalMap with agreement_radius K.r_id * eps / K.bound
    """
    if eps is None:
        eps = DEFAULT_EPS_FRACTION * f.domain_radius
    if not (0.0 < eps < f.domain_radius):
        raise ValueError(f"Need 0 < eps < {f.domain_radius}, got eps={eps}")

    H1 = rescale(K, eps)

    def evaluate(x):
        return f(H1(x))

    bounds = ()
    if f.deriv_bounds is not None:
        local = f.deriv_bounds(eps)
        sup_bound = float(local[0])
        certified = True
        if H1.deriv_bounds:
            order = min(len(local), len(H1.deriv_bounds)) - 1
            bounds = tuple(chain_rule_majorant(local, H1.deriv_bounds, n) for n in range(order + 1))
    else:
        rng = rng or np.random.default_rng(0)
        sup_bound = _sampled_sup(f, K.space, eps, rng, samples)
        certified = False

    logger.info(f"Extended {f.name}: eps={eps:.4g}, agreement radius {H1.r_id:.4g}, "
                f"sup {'<=' if certified else '~'} {sup_bound:.6g}")
    return GlobalMap(evaluate, H1.r_id, sup_bound, certified, bounds)


def _scaled(weight, value):
    if weight == 1.0:
        return value
    return like(value, weight * as_array(value))


def bump_extend(f, delta, U_radius, rng=None, samples=SUP_SAMPLES):
    """F(x) = delta(x) f(x) inside the ball U of radius U_radius, 0 outside.

    Args:
        f: LocalMap with domain_radius > U_radius
        delta: SpaceBump vanishing outside rho_out <= U_radius
        U_radius: Radius of U
        rng: numpy Generator for the sampled sup estimate
        samples: Sample count for the sampled sup estimate

    Returns:
        GlobalMap agreeing with f on the flat core of delta
    """
    if U_radius >= f.domain_radius:
        raise ValueError(f"U_radius {U_radius} must be below the domain radius {f.domain_radius}")
    if delta.rho_out > U_radius:
        raise ValueError(f"Bump support {delta.rho_out} exceeds U_radius {U_radius}")

    zero = {}

    def evaluate(x):
        if x.norm() >= U_radius:
            if "value" not in zero:
                zero["value"] = codomain_zero(f.evaluator(delta.space.zero()))
            return zero["value"]
        weight = delta(x)
        value = f(x)
        if weight == 0.0:
            return codomain_zero(value)
        return _scaled(weight, value)

    bounds = ()
    if f.deriv_bounds is not None:
        local = f.deriv_bounds(delta.rho_out)
        sup_bound = float(local[0])
        certified = True
        d = delta.deriv_bounds()
        if d:
            # Leibniz: (delta f)^(n) = sum_k C(n, k) delta^(k) f^(n-k)
            order = min(len(local), len(d)) - 1
            bounds = tuple(sum(math.comb(n, k) * d[k] * local[n - k] for k in range(n + 1))
                           for n in range(order + 1))
    else:
        rng = rng or np.random.default_rng(0)
        sup_bound = _sampled_sup(f, delta.space, delta.rho_out, rng, samples)
        certified = False

    return GlobalMap(evaluate, delta.rho_in, sup_bound, certified, bounds)


def integral_functional(x):
    """f(x) = integral_0^1 dt / (1 - x(t)) by composite Simpson, for sup|x| < 1."""
    if sup_norm(x) >= 1.0:
        raise OutsideDomainError(f"Integral functional needs sup|x| < 1, got {sup_norm(x):.6g}")
    return quadrature(GridFn(1.0 / (1.0 - x.samples)))


def integral_functional_global(x):
    """integral_0^1 dt / (1 - h(x(t))) with h the (1/3, 1/2) truncator; always in (0, 2]."""
    return quadrature(GridFn(1.0 / (1.0 - INTEGRAL_TRUNCATOR(x.samples))))


def integral_local_map():
    """The integral functional as a local map on the unit ball.

    On ||x|| <= r < 1 the k-th directional derivative is
    integral k! v^k / (1 - x)^(k+1) dt, bounded by k! / (1 - r)^(k+1) since
    the Simpson weights are positive and sum to 1.
    """
    def bounds(r, order=6):
        return tuple(math.factorial(k) / (1.0 - r) ** (k + 1) for k in range(order + 1))

    return LocalMap(1.0, integral_functional, deriv_bounds=bounds, name="integral_functional")


def identity_local_map(R=1.0):
    def bounds(r, order=6):
        return tuple([r, 1.0] + [0.0] * (order - 1))

    return LocalMap(float(R), lambda x: x, deriv_bounds=bounds, name="identity")


def linear_local_map(space, phi, R=1.0):
    """x -> <phi, x> on the ball of radius R"""
    phi = np.asarray(phi, dtype=float)
    size = space.dual_norm(phi)

    def bounds(r, order=6):
        return tuple([size * r, size] + [0.0] * (order - 1))

    return LocalMap(float(R), lambda x: float(np.dot(phi, x.data)),
                    deriv_bounds=bounds, name="linear")
