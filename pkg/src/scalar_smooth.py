#!/usr/bin/env python
"""
Exact C-infinity scalar cutoffs built from the exp(-1/s) mollifier kernel.

Three kinds are provided: the smooth step, the bump psi_{a,b} and the
truncator h_{a,b}(s) = psi_{a,b}(s) * s. Flat regions are returned through
explicit branches, so h(s) == s and psi(s) == 1 hold bit-exactly there.
"""
import logging
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from numpy.polynomial import Polynomial

logger = logging.getLogger(__name__)

STEP = "step"
BUMP = "bump"
TRUNCATOR = "truncator"

DEFAULT_MAX_DERIV_ORDER = 6
DEFAULT_INNER = 1.0 / 3.0
DEFAULT_OUTER = 0.5

# exp(-w) is exactly 0.0 in double precision beyond this point
_UNDERFLOW_W = 745.2


class DerivativeOrderError(ValueError):
    """Raised when a derivative beyond max_deriv_order is requested."""
    pass


@lru_cache(maxsize=None)
def _kernel_poly(k):
    """Polynomial q_k with d^k/du^k exp(-1/u) = exp(-1/u) * q_k(1/u)."""
    q = Polynomial([1.0])
    w2 = Polynomial([0.0, 0.0, 1.0])
    for _ in range(k):
        q = w2 * (q - q.deriv())
    return q


def _kernel_derivs(u, order):
    """Derivatives 0..order of e(u) = exp(-1/u) for u > 0 (zero elsewhere).

    Returns:
        Array of shape (order + 1, len(u))
    """
    u = np.asarray(u, dtype=float)
    out = np.zeros((order + 1,) + u.shape)
    live = u > 1.0 / _UNDERFLOW_W
    if not np.any(live):
        return out
    w = 1.0 / u[live]
    base = np.exp(-w)
    for k in range(order + 1):
        out[k][live] = base * _kernel_poly(k)(w)
    return out


def _step_derivs(u, order):
    """Derivatives 0..order of sigma(u) = e(u) / (e(u) + e(1 - u)).

    Flat parts are set by branch, the transition uses the Leibniz rule on
    sigma * S = A with S = A + B.
    """
    u = np.atleast_1d(np.asarray(u, dtype=float))
    out = np.zeros((order + 1,) + u.shape)
    out[0][u >= 1.0] = 1.0

    mid = (u > 0.0) & (u < 1.0)
    if not np.any(mid):
        return out

    um = u[mid]
    a = _kernel_derivs(um, order)
    b = _kernel_derivs(1.0 - um, order)
    signs = np.array([(-1.0) ** k for k in range(order + 1)])[:, None]
    b = b * signs
    s = a + b

    sig = np.zeros_like(a)
    for k in range(order + 1):
        acc = a[k].copy()
        for i in range(k):
            acc -= math.comb(k, i) * sig[i] * s[k - i]
        sig[k] = acc / s[0]

    out[:, mid] = sig
    return out


@dataclass(frozen=True)
class ScalarSmoothFn:
    """A mollifier-built scalar cutoff with exact derivatives up to max_deriv_order.

    Attributes:
        kind: One of 'step', 'bump', 'truncator'
        inner: Flat-region boundary a (step: 0)
        outer: Support boundary b (step: 1)
        max_deriv_order: Highest derivative order evaluated exactly
    """
    kind: str
    inner: float
    outer: float
    max_deriv_order: int = DEFAULT_MAX_DERIV_ORDER

    def __post_init__(self):
        if self.kind not in (STEP, BUMP, TRUNCATOR):
            raise ValueError(f"Unknown smooth function kind: {self.kind}")
        if self.kind != STEP and not (0.0 < self.inner < self.outer):
            raise ValueError(f"Need 0 < inner < outer, got inner={self.inner}, outer={self.outer}")
        if self.max_deriv_order < 0:
            raise ValueError(f"max_deriv_order must be >= 0, got {self.max_deriv_order}")

    @property
    def width(self):
        return self.outer - self.inner

    def derivatives(self, s, order):
        """All derivatives 0..order at the points s.

        Args:
            s: Scalar or array of evaluation points
            order: Highest derivative order

        Returns:
            Array of shape (order + 1,) + shape(s)
        """
        if order > self.max_deriv_order:
            raise DerivativeOrderError(
                f"Derivative order {order} exceeds max_deriv_order={self.max_deriv_order}")
        if order < 0:
            raise DerivativeOrderError(f"Derivative order must be >= 0, got {order}")

        s_arr = np.asarray(s, dtype=float)
        flat = np.atleast_1d(s_arr).ravel()

        if self.kind == STEP:
            out = _step_derivs(flat, order)
        else:
            out = self._bump_derivs(flat, order)
            if self.kind == TRUNCATOR:
                out = self._truncator_from_bump(flat, out, order)

        return out.reshape((order + 1,) + s_arr.shape)

    def _bump_derivs(self, s, order):
        # psi(s) = sigma((b - |s|) / (b - a)); the chain factor is -sign(s) / (b - a)
        lam = 1.0 / self.width
        u = (self.outer - np.abs(s)) / self.width
        sig = _step_derivs(u, order)
        sign = np.where(s < 0.0, 1.0, -1.0)
        for k in range(1, order + 1):
            sig[k] *= (sign * lam) ** k
        return sig

    def _truncator_from_bump(self, s, psi, order):
        # h = s * psi  =>  h^(k) = s psi^(k) + k psi^(k-1)
        out = np.empty_like(psi)
        out[0] = psi[0] * s
        for k in range(1, order + 1):
            out[k] = s * psi[k] + k * psi[k - 1]
        return out

    def derivative(self, s, k):
        """k-th derivative at s (scalar in, float out; arrays map elementwise)."""
        value = self.derivatives(s, k)[k]
        if np.ndim(s) == 0:
            return float(value)
        return value

    def __call__(self, s):
        if self.kind == TRUNCATOR:
            return self._truncate(s)
        return self.derivative(s, 0)

    def _truncate(self, s):
        # the flat region returns the argument itself, not psi(s) * s
        s_arr = np.asarray(s, dtype=float)
        flat = np.atleast_1d(s_arr).ravel()
        out = np.zeros_like(flat)
        core = np.abs(flat) <= self.inner
        out[core] = flat[core]
        trans = (~core) & (np.abs(flat) < self.outer)
        if np.any(trans):
            psi = self._bump_derivs(flat[trans], 0)[0]
            out[trans] = psi * flat[trans]
        if s_arr.ndim == 0:
            return float(out[0])
        return out.reshape(s_arr.shape)


def make_smooth_step(max_deriv_order=DEFAULT_MAX_DERIV_ORDER):
    """The smooth step sigma(s) = e(s) / (e(s) + e(1 - s)), e(s) = exp(-1/s) for s > 0."""
    return ScalarSmoothFn(STEP, 0.0, 1.0, max_deriv_order)


def make_bump(a, b, max_deriv_order=DEFAULT_MAX_DERIV_ORDER):
    """Bump psi_{a,b}: 1 on [-a, a], 0 outside (-b, b).

    Args:
        a: Flat-core radius, 0 < a < b
        b: Support radius
        max_deriv_order: Highest exact derivative order

    Returns:
        ScalarSmoothFn of kind 'bump'
    """
    return ScalarSmoothFn(BUMP, float(a), float(b), max_deriv_order)


def make_truncator(a=DEFAULT_INNER, b=DEFAULT_OUTER, max_deriv_order=DEFAULT_MAX_DERIV_ORDER):
    """Truncator h_{a,b}(s) = psi_{a,b}(s) * s: the identity on |s| <= a, 0 on |s| >= b."""
    return ScalarSmoothFn(TRUNCATOR, float(a), float(b), max_deriv_order)


def eval_deriv(f, s, k):
    """Exact k-th derivative of f at s.

    Args:
        f: ScalarSmoothFn
        s: Evaluation point
        k: Derivative order, 0 <= k <= f.max_deriv_order

    Returns:
        The derivative value as a float
    """
    return f.derivative(float(s), k)


def deriv_sup(f, k, samples=10001):
    """Upper bound for sup_s |f^(k)(s)|.

    The sampled maximum over the support is widened by half the sample
    spacing times the sampled sup of the next derivative when that order is
    available, and by 1% otherwise.

    Args:
        f: ScalarSmoothFn
        k: Derivative order
        samples: Number of sample points over the support

    Returns:
        Bound as a float
    """
    if f.kind == STEP:
        lo, hi = 0.0, 1.0
    else:
        lo, hi = -f.outer, f.outer
    s = np.linspace(lo, hi, samples)
    spacing = (hi - lo) / (samples - 1)

    if k + 1 <= f.max_deriv_order:
        d = f.derivatives(s, k + 1)
        bound = float(np.max(np.abs(d[k])) + 0.5 * spacing * np.max(np.abs(d[k + 1])))
    else:
        bound = 1.01 * float(np.max(np.abs(f.derivatives(s, k)[k])))

    if f.kind == STEP and k == 0:
        bound = 1.0
    logger.debug(f"sup |{f.kind}^({k})| <= {bound:.6g} (a={f.inner}, b={f.outer})")
    return bound
