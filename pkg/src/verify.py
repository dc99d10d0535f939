#!/usr/bin/env python
"""
Numerical oracles: directional derivatives by central differences with
Richardson extrapolation, Taylor-coefficient read-out by polynomial fitting,
and seeded sup-norm / identity-radius probes.
"""
import logging
import math
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np
from numpy.polynomial import polynomial as npoly

from .spaces import as_array, like, scale, value_norm

logger = logging.getLogger(__name__)

CENTRAL = "central"
MAX_FD_ORDER = 4
DEFAULT_BASE_STEP = 1e-2
DEFAULT_LEVELS = 4
DEFAULT_FIT_TOL = 1e-8
# smallest (radius ||v||)^J per unit of max |F| at which a fit resolves degree J
FIT_RESOLUTION = 1e-10


@dataclass(frozen=True)
class FDConfig:
    """Central-difference settings.

    Attributes:
        base_step: Initial step h_0
        levels: Number of step halvings fed to Richardson extrapolation
        scheme: Only 'central'
    """
    base_step: float = DEFAULT_BASE_STEP
    levels: int = DEFAULT_LEVELS
    scheme: str = CENTRAL

    def __post_init__(self):
        if not self.base_step > 0.0:
            raise ValueError(f"base_step must be positive, got {self.base_step}")
        if self.levels < 1:
            raise ValueError(f"levels must be >= 1, got {self.levels}")
        if self.scheme != CENTRAL:
            raise ValueError(f"Unsupported difference scheme: {self.scheme}")


@dataclass(frozen=True)
class ProbeConfig:
    """Random probe settings; norms are drawn log-uniformly from norm_range."""
    trials: int = 1000
    norm_range: Tuple[float, float] = (1e-3, 1e3)
    seed: int = 0

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError(f"trials must be >= 1, got {self.trials}")
        lo, hi = self.norm_range
        if not (0.0 < lo <= hi):
            raise ValueError(f"norm_range must satisfy 0 < lo <= hi, got {self.norm_range}")


@dataclass(frozen=True)
class Derivative:
    value: object
    error: float


@dataclass(frozen=True)
class TaylorFit:
    coeffs: List[object]
    residual: float
    well_conditioned: bool
    resolvable: bool = True


@dataclass(frozen=True)
class IdentityProbe:
    """Result of an identity-radius probe.

    Attributes:
        radius: Largest sampled norm below the first non-identity sample
        violated: True when a sample inside r_id was moved
        first_failure: Norm of the first moved sample, None if none moved
    """
    radius: float
    violated: bool
    first_failure: Optional[float]


def relative_error(got, expected, scale_floor=0.0):
    """||got - expected|| / max(||expected||, scale_floor), absolute when both vanish."""
    diff = float(np.max(np.abs(as_array(got) - as_array(expected))))
    denom = max(value_norm(expected), scale_floor)
    if denom == 0.0:
        return diff
    return diff / denom


def random_probes(space, cfg):
    """cfg.trials elements with log-uniform norms and random unit directions."""
    rng = np.random.default_rng(cfg.seed)
    lo, hi = cfg.norm_range
    norms = np.exp(rng.uniform(math.log(lo), math.log(hi), cfg.trials))
    return [space.random_element(rng, float(r)) for r in norms]


def ball_samples(space, radius, count, rng):
    """count elements with norms uniform in [0, radius]."""
    norms = rng.uniform(0.0, radius, count)
    return [space.random_element(rng, float(r)) for r in norms]


def _difference(phi, h, n):
    # sum_i (-1)^i C(n, i) phi((n/2 - i) h) / h^n
    acc = None
    for i in range(n + 1):
        term = (-1.0) ** i * math.comb(n, i) * phi((0.5 * n - i) * h)
        acc = term if acc is None else acc + term
    return acc / h ** n


def directional_deriv(F, x, v, n, cfg=None):
    """n-th derivative of s -> F(x + s v) at s = 0.

    Central differences at steps h_0 / 2^k, k < levels, extrapolated with
    Richardson factors 4^m.

    Args:
        F: Map element -> codomain value
        x: Base point
        v: Direction
        n: Order, 0 <= n <= 4
        cfg: FDConfig

    Returns:
        Derivative(value, error) with error the gap between the last two
        extrapolants (inf for a single level)
    """
    cfg = cfg or FDConfig()
    if not 0 <= n <= MAX_FD_ORDER:
        raise ValueError(f"Finite-difference order must be in [0, {MAX_FD_ORDER}], got {n}")

    template = F(x)
    if n == 0:
        return Derivative(template, 0.0)

    def phi(s):
        return as_array(F(x.with_data(x.data + s * v.data)))

    table = []
    h = cfg.base_step
    for k in range(cfg.levels):
        row = [_difference(phi, h, n)]
        for m in range(1, k + 1):
            f = 4.0 ** m
            row.append((f * row[m - 1] - table[k - 1][m - 1]) / (f - 1.0))
        table.append(row)
        h *= 0.5

    best = table[-1][-1]
    if cfg.levels == 1:
        error = math.inf
    else:
        error = float(np.max(np.abs(best - table[-2][-1])))
    return Derivative(like(template, best), error)


def _chebyshev_points(count, radius):
    k = np.arange(count)
    return radius * np.cos((2 * k + 1) * math.pi / (2 * count))


def taylor_coeffs(F, v, J, radius, tol=DEFAULT_FIT_TOL):
    """Coefficients c_0..c_J of s -> F(s v) by least squares on [-radius, radius].

    The fit runs in u = s / radius at 4 (J + 1) Chebyshev points and
    c_n = b_n / radius^n. Round-off in b_n is about eps * max |F|, so the
    top coefficient is only resolved while (radius ||v||)^J stays above
    FIT_RESOLUTION * max |F|.

    Returns:
        TaylorFit with the max fit residual relative to max(1, max |F|);
        well_conditioned needs a small residual and a resolvable radius
    """
    if not radius > 0.0:
        raise ValueError(f"Fit radius must be positive, got {radius}")
    count = 4 * (J + 1)
    s = _chebyshev_points(count, radius)
    u = s / radius
    values = [F(scale(float(si), v)) for si in s]
    template = values[0]
    ys = np.array([as_array(y) for y in values])

    b = npoly.polyfit(u, ys, J)
    fitted = npoly.polyval(u, b).T
    amplitude = float(np.max(np.abs(ys)))
    residual = float(np.max(np.abs(fitted - ys))) / max(1.0, amplitude)
    resolvable = (radius * v.norm()) ** J >= FIT_RESOLUTION * amplitude
    if residual > tol:
        logger.warning(f"Taylor fit of degree {J} on radius {radius:.3g} has residual {residual:.3g}")
    if not resolvable:
        logger.warning(f"Taylor fit radius {radius:.3g} is too small to resolve degree {J} "
                       f"against values of size {amplitude:.3g}")
    coeffs = [like(template, b[n] / radius ** n) for n in range(J + 1)]
    return TaylorFit(coeffs, residual, residual <= tol and resolvable, resolvable)


def sup_probe(F, space, cfg):
    """max ||F(x)|| over the seeded probe set"""
    best = 0.0
    for x in random_probes(space, cfg):
        best = max(best, value_norm(F(x)))
    logger.debug(f"sup probe over {cfg.trials} samples: {best:.6g}")
    return best


def deriv_sup_probe(F, space, n, cfg, fd=None, points=None):
    """max ||d^n/ds^n F(x + s v)|| over probe points x and random unit v.

    Args:
        F: Map
        space: Domain space
        n: Derivative order
        cfg: ProbeConfig for points and directions
        fd: FDConfig
        points: Optional fixed base points (defaults to random_probes)
    """
    rng = np.random.default_rng(cfg.seed + 1)
    points = points if points is not None else random_probes(space, cfg)
    best = 0.0
    for x in points:
        v = space.random_direction(rng)
        best = max(best, value_norm(directional_deriv(F, x, v, n, fd).value))
    return best


def identity_radius_probe(K, cfg, span=2.0, atol=0.0):
    """Largest sampled radius on which K(x) == x.

    Norms are drawn uniformly from [0, span * K.r_id] and scanned in
    increasing order; the scan stops at the first moved sample.

    Args:
        K: KMap
        cfg: ProbeConfig (trials and seed)
        span: Sampling range in units of r_id
        atol: Allowed max coefficient deviation (0 means bit-exact)

    Returns:
        IdentityProbe
    """
    rng = np.random.default_rng(cfg.seed)
    samples = ball_samples(K.space, span * K.r_id, cfg.trials, rng)
    samples.sort(key=lambda x: x.norm())

    radius = 0.0
    first_failure = None
    for x in samples:
        hx = K(x)
        if atol == 0.0:
            same = np.array_equal(hx.data, x.data)
        else:
            same = float(np.max(np.abs(hx.data - x.data))) <= atol
        if not same:
            first_failure = x.norm()
            break
        radius = x.norm()

    violated = first_failure is not None and first_failure <= K.r_id
    if violated:
        logger.warning(f"Identity violated at norm {first_failure:.6g} inside r_id={K.r_id:.6g}")
    return IdentityProbe(radius, violated, first_failure)
