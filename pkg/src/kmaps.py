#!/usr/bin/env python
"""
K-maps: bounded global maps that coincide with the identity near zero.

Every KMap carries its identity radius r_id, a sup bound N and, when the
construction is smooth, derivative bounds (N, D_1, ..., D_q) with D_k the
sup over x and unit v of ||H^(k)(x)(v)^k||.
"""
import logging
import math
from dataclasses import dataclass, field
from typing import Callable, Tuple

import numpy as np
from numpy.polynomial import Chebyshev

from .scalar_smooth import DEFAULT_MAX_DERIV_ORDER, deriv_sup, make_bump, make_truncator
from .spaces import (CHEB, GRID, PVEC, ChebFn, Space, cheb_compose, cn_norm, element_from_json,
                     lincomb, pointwise_apply, scale)

logger = logging.getLogger(__name__)

POINTWISE = "pointwise"
BUMP = "bump"
CONTINUOUS = "continuous"
RESCALED = "rescaled"
BALL = "ball"

# relative padding of the flat core of tau so rounding in sum x_i^p cannot
# push a point of norm rho_in out of it
_CORE_PAD = 1e-12


def partial_bell(inner, n):
    """Table B[m][k] of partial Bell polynomials B_{m,k}(g_1, ..., g_{m-k+1}) for m, k <= n.

    Uses B_{m,k} = sum_{i=1}^{m-k+1} C(m-1, i-1) g_i B_{m-i,k-1} with B_{0,0} = 1.
    Missing or infinite inner bounds propagate as inf.
    """
    g = [math.inf] * (n + 1)
    for i in range(1, min(n, len(inner) - 1) + 1):
        g[i] = float(inner[i])
    table = np.zeros((n + 1, n + 1))
    table[0, 0] = 1.0
    with np.errstate(invalid="ignore"):
        for m in range(1, n + 1):
            for k in range(1, m + 1):
                acc = 0.0
                for i in range(1, m - k + 2):
                    prev = table[m - i, k - 1]
                    if prev == 0.0:
                        continue
                    acc += math.comb(m - 1, i - 1) * g[i] * prev
                table[m, k] = acc
    return table


def chain_rule_majorant(outer, inner, n):
    """Bound on the n-th derivative of f o g from derivative sups of f and g.

    Args:
        outer: [sup|f|, sup||f'||, ...]
        inner: [sup||g||, sup||g'||, ...]
        n: Derivative order

    Returns:
        sum_{m=1}^{n} outer[m] * B_{n,m}(inner[1], ...), or outer[0] for n = 0
    """
    if n == 0:
        return float(outer[0])
    table = partial_bell(inner, n)
    total = 0.0
    for m in range(1, n + 1):
        if table[n, m] == 0.0:
            continue
        if m >= len(outer):
            return math.inf
        total += float(outer[m]) * table[n, m]
    return total


@dataclass(frozen=True)
class KMap:
    """Global bounded map equal to the identity on the ball of radius r_id.

    Attributes:
        space: Space the map acts on
        r_id: Identity radius
        bound: Sup bound N on ||H(x)|| (inf when no bound holds)
        evaluator: element -> element
        deriv_order: Highest derivative order with a claimed bound
        kind: Descriptor kind
        params: Descriptor parameters
        deriv_bounds: (N, D_1, ..., D_q), empty when not smooth
    """
    space: Space
    r_id: float
    bound: float
    evaluator: Callable = field(repr=False, compare=False)
    deriv_order: int = 0
    kind: str = POINTWISE
    params: dict = field(default_factory=dict, compare=False)
    deriv_bounds: Tuple[float, ...] = ()

    def __post_init__(self):
        if not self.r_id > 0.0:
            raise ValueError(f"Identity radius must be positive, got {self.r_id}")
        if self.bound < self.r_id:
            raise ValueError(f"Sup bound {self.bound} is below the identity radius {self.r_id}")
        object.__setattr__(self, "deriv_bounds", tuple(float(b) for b in self.deriv_bounds))

    def __call__(self, x):
        self.space.check(x)
        return self.evaluator(x)

    def deriv_bound(self, k):
        """sup ||H^(k)(x)(v)^k|| over x and unit v, inf when unknown"""
        if k < len(self.deriv_bounds):
            return self.deriv_bounds[k]
        return math.inf

    def descriptor(self):
        return {"kind": self.kind, "params": dict(self.params)}


@dataclass(frozen=True)
class SpaceBump:
    """delta(x) = tau(||x||^power), 1 on ||x|| <= rho_in and 0 on ||x|| >= rho_out.

    With power = p on an l_p space of even p, ||x||^p = sum x_i^p is a
    polynomial and delta is C-infinity; with power = 1 delta is only continuous.
    """
    space: Space
    rho_in: float
    rho_out: float
    power: int
    max_deriv_order: int = DEFAULT_MAX_DERIV_ORDER

    def __post_init__(self):
        if not (0.0 < self.rho_in < self.rho_out):
            raise ValueError(f"Need 0 < rho_in < rho_out, got {self.rho_in}, {self.rho_out}")
        core = self.rho_in ** self.power * (1.0 + _CORE_PAD)
        tau = make_bump(core, self.rho_out ** self.power, self.max_deriv_order)
        object.__setattr__(self, "tau", tau)

    @property
    def smooth(self):
        return self.space.kind == PVEC and self.power == self.space.p and self.space.p % 2 == 0

    def level(self, x):
        if self.smooth:
            return x.power_sum()
        return x.norm() ** self.power

    def __call__(self, x):
        self.space.check(x)
        return float(self.tau(self.level(x)))

    def deriv_bounds(self):
        """(1, Delta_1, ..., Delta_q) bounding the directional derivatives of delta."""
        if not self.smooth:
            return ()
        p = self.power
        q = self.max_deriv_order
        # S(x) = sum x_i^p on ||x|| <= rho_out: |S^(k)(x)(v)^k| <= p!/(p-k)! rho_out^(p-k)
        level = [self.rho_out ** p]
        for k in range(1, q + 1):
            level.append(math.perm(p, k) * self.rho_out ** (p - k) if k <= p else 0.0)
        tau = [deriv_sup(self.tau, k) for k in range(q + 1)]
        return tuple([1.0] + [chain_rule_majorant(tau, level, n) for n in range(1, q + 1)])


def make_space_bump(space, rho_in, rho_out, max_deriv_order=DEFAULT_MAX_DERIV_ORDER):
    """The smooth bump tau(||x||_p^p) on an l_p space with even p."""
    if space.kind != PVEC:
        raise ValueError(f"A smooth bump needs an l_p space, got {space.kind}")
    if space.p % 2:
        raise ValueError(f"x -> ||x||_p^p is only smooth for even p, got p={space.p}")
    return SpaceBump(space, float(rho_in), float(rho_out), space.p, max_deriv_order)


def continuous_bump(space, rho_in, rho_out):
    """delta(x) = psi(||x||): a continuous bump on any space"""
    return SpaceBump(space, float(rho_in), float(rho_out), 1)


def kmap_from_bump(delta, kind=CONTINUOUS):
    """H(x) = delta(x) * x.

    Args:
        delta: SpaceBump
        kind: Descriptor kind recorded on the result

    Returns:
        KMap with r_id = rho_in and bound = rho_out
    """
    def evaluate(x):
        weight = delta(x)
        if weight == 1.0:
            return x
        return scale(weight, x)

    bounds = ()
    order = 0
    if delta.smooth:
        d = delta.deriv_bounds()
        q = len(d) - 1
        # H^(n)(x)(v)^n = delta^(n)(x)(v)^n x + n delta^(n-1)(x)(v)^(n-1) v, nonzero only on ||x|| < rho_out
        bounds = tuple([delta.rho_out] + [d[n] * delta.rho_out + n * d[n - 1] for n in range(1, q + 1)])
        order = q
    params = {"rho_in": delta.rho_in, "rho_out": delta.rho_out}
    logger.debug(f"K-map from {kind} bump on {delta.space}: r_id={delta.rho_in}, N={delta.rho_out}")
    return KMap(delta.space, delta.rho_in, delta.rho_out, evaluate, order, kind, params, bounds)


def bump_kmap(rho_in, rho_out, space, max_deriv_order=DEFAULT_MAX_DERIV_ORDER):
    """H(x) = tau(sum x_i^p) * x on an l_p space with even p."""
    delta = make_space_bump(space, rho_in, rho_out, max_deriv_order)
    return kmap_from_bump(delta, kind=BUMP)


def pointwise_kmap(a, b, space, max_deriv_order=DEFAULT_MAX_DERIV_ORDER):
    """H(x)(t) = h_{a,b}(x(t)) with h the truncator s -> psi_{a,b}(s) * s.

    On grid spaces H^(k)(x)(v)^k(t) = h^(k)(x(t)) v(t)^k, so D_k = sup|h^(k)|.
    On C^n spaces with n >= 1 no sup bound on ||H(x)||_{C^n} holds and the
    bound is inf.

    Args:
        a: Identity radius
        b: Support radius of the truncator
        space: Grid or cheb space
        max_deriv_order: Highest exact derivative order of h

    Returns:
        KMap
    """
    h = make_truncator(a, b, max_deriv_order)
    params = {"a": float(a), "b": float(b)}

    if space.kind == GRID:
        bounds = tuple([float(b)] + [deriv_sup(h, k) for k in range(1, max_deriv_order + 1)])
        logger.debug(f"Pointwise K-map on {space}: r_id={a}, N={b}, D_1={bounds[1]:.4g}")
        return KMap(space, float(a), float(b), lambda x: pointwise_apply(h, x),
                    max_deriv_order, POINTWISE, params, bounds)

    if space.kind == CHEB:
        bound = float(b) if space.n == 0 else math.inf
        if space.n > 0:
            logger.info(f"Pointwise K-map on C^{space.n}: no sup bound on ||H(x)|| is claimed")
        return KMap(space, float(a), bound, lambda x: cheb_compose(h, x)[0],
                    0, POINTWISE, params, ())

    raise ValueError(f"Pointwise K-map needs a grid or cheb space, got {space.kind}")


def rescale(K, eps):
    """H_eps(x) = (eps / N) * H((N / eps) * x) with N = K.bound.

    r_id becomes K.r_id * eps / N, the bound becomes eps and D_k picks up
    the factor (N / eps)^(k - 1).
    """
    if not eps > 0.0:
        raise ValueError(f"Rescaling needs eps > 0, got {eps}")
    N = K.bound
    if not math.isfinite(N):
        raise ValueError("Cannot rescale a K-map without a finite sup bound")
    up = N / eps

    def evaluate(x):
        y = scale(up, x)
        hy = K(y)
        if np.array_equal(hy.data, y.data):
            return x
        return scale(1.0 / up, hy)

    bounds = ()
    if K.deriv_bounds:
        bounds = tuple([eps] + [up ** (k - 1) * K.deriv_bounds[k] for k in range(1, len(K.deriv_bounds))])
    params = {"eps": float(eps), "base": K.descriptor()}
    return KMap(K.space, K.r_id / up, float(eps), evaluate, K.deriv_order, RESCALED, params, bounds)


@dataclass(frozen=True)
class BallKMap:
    """x -> z + (1/c) K(c (x - z)): the identity on ||x - z|| <= identity_radius."""
    base: KMap
    center: object
    radius: float
    margin: float
    c: float

    @property
    def identity_radius(self):
        return self.radius + 0.5 * self.margin

    @property
    def image_radius(self):
        return self.base.bound / self.c

    def __call__(self, x):
        offset = lincomb(1.0, x, -1.0, self.center)
        y = scale(self.c, offset)
        hy = self.base(y)
        if np.array_equal(hy.data, y.data):
            return x
        return lincomb(1.0, self.center, 1.0 / self.c, hy)

    def descriptor(self):
        return {"kind": BALL, "params": {"center": self.center.to_json(), "r": self.radius,
                                          "margin": self.margin, "base": self.base.descriptor()}}


def kmap_at_ball(K, z, r, margin):
    """K-map centred at z acting as the identity near the closed ball B_r(z).

    c = K.r_id / (r + margin / 2) puts the ball of radius r + margin / 2
    inside the identity region; the image lies within K.bound / c of z.
    """
    if not margin > 0.0:
        raise ValueError(f"margin must be positive, got {margin}")
    if r < 0.0:
        raise ValueError(f"Ball radius must be >= 0, got {r}")
    K.space.check(z)
    c = K.r_id / (r + 0.5 * margin)
    return BallKMap(K, z, float(r), float(margin), c)


def kmap_from_descriptor(desc, space, max_deriv_order=DEFAULT_MAX_DERIV_ORDER):
    """Build a K-map from {"kind": ..., "params": {...}}.

    Args:
        desc: Descriptor object
        space: Space the map acts on

    Returns:
        KMap, or BallKMap for kind 'ball'
    """
    kind = desc.get("kind")
    params = desc.get("params", {})
    try:
        if kind == POINTWISE:
            return pointwise_kmap(params["a"], params["b"], space, max_deriv_order)
        if kind == BUMP:
            return bump_kmap(params["rho_in"], params["rho_out"], space, max_deriv_order)
        if kind == CONTINUOUS:
            return kmap_from_bump(continuous_bump(space, params["rho_in"], params["rho_out"]))
        if kind == RESCALED:
            base = kmap_from_descriptor(params["base"], space, max_deriv_order)
            return rescale(base, params["eps"])
        if kind == BALL:
            base = kmap_from_descriptor(params["base"], space, max_deriv_order)
            return kmap_at_ball(base, element_from_json(params["center"]), params["r"], params["margin"])
    except KeyError as e:
        raise ValueError(f"K-map descriptor of kind '{kind}' is missing {e}") from e
    raise ValueError(f"Unknown K-map kind: {kind}")


def vanishes_at(index):
    """Predicate for the ideal {x : x(t_index) = 0}"""
    return lambda x: x.data[index] == 0.0


def ideal_closure(K, predicate, samples):
    """Count samples inside the subspace whose image leaves it.

    Args:
        K: KMap
        predicate: element -> bool membership test
        samples: Iterable of elements

    Returns:
        (members_checked, violations)
    """
    checked = 0
    violations = 0
    for x in samples:
        if not predicate(x):
            continue
        checked += 1
        if not predicate(K(x)):
            violations += 1
    if violations:
        logger.warning(f"{violations} of {checked} subspace members left the subspace under {K.kind}")
    return checked, violations


def sine_element(space, frequency, amplitude):
    """x(t) = amplitude * sin(frequency * t) interpolated on the cheb space."""
    series = Chebyshev.interpolate(lambda t: amplitude * np.sin(frequency * t),
                                   space.size - 1, domain=[0.0, 1.0])
    coeffs = np.zeros(space.size)
    coeffs[:len(series.coef)] = series.coef
    return ChebFn(coeffs, space.n)


def c1_growth_table(K, frequencies, amplitude):
    """Measure ||H(x)||_{C^n} for x(t) = amplitude * sin(M t) over M.

    Returns:
        (rows, slope) with rows [{"frequency", "input_norm", "output_norm"}]
        and slope the log-log growth rate of output_norm in M
    """
    if K.space.kind != CHEB:
        raise ValueError(f"The growth probe needs a cheb space, got {K.space.kind}")
    rows = []
    for M in frequencies:
        x = sine_element(K.space, M, amplitude)
        hx = K(x)
        rows.append({"frequency": float(M), "input_norm": cn_norm(x), "output_norm": cn_norm(hx)})
    slope = 0.0
    if len(rows) >= 2:
        logm = np.log([r["frequency"] for r in rows])
        logn = np.log([r["output_norm"] for r in rows])
        slope = float(np.polyfit(logm, logn, 1)[0])
    logger.info(f"C^{K.space.n} norm of H(x) grows like M^{slope:.3f}")
    return rows, slope
