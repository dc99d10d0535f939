#!/usr/bin/env python
"""
Represented Banach spaces: C(M) on a finite grid, C^n[0,1] through Chebyshev
coefficients, and l_p truncated to d coordinates.

Elements are immutable; every operation returns a new element.
"""
import logging
import math
from abc import ABC, abstractmethod
from dataclasses import dataclass

import numpy as np
from numpy.polynomial import Chebyshev

logger = logging.getLogger(__name__)

GRID = "grid"
CHEB = "cheb"
PVEC = "pvec"

DEFAULT_GRID_SIZE = 65
DEFAULT_CHEB_DEGREE = 64
DEFAULT_PVEC_SIZE = 16
DEFAULT_P = 4
DEFAULT_SMOOTHNESS = 1

# sample count used for the C^n norm and for cheb/grid comparisons
CN_NORM_SAMPLES = 513
OVERSAMPLING = 4


class SpaceMismatchError(ValueError):
    """Raised when elements of different spaces or sizes are combined."""
    pass


def _frozen_array(values):
    arr = np.array(values, dtype=float)
    if arr.ndim != 1:
        raise ValueError(f"Element data must be one-dimensional, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("Element data must be finite")
    arr.setflags(write=False)
    return arr


class SpaceElement(ABC):
    """Base class for represented Banach-space elements

    Subclasses hold a read-only float vector in `data` and know their norm.
    """

    kind = None

    @property
    @abstractmethod
    def data(self):
        """The underlying coordinate vector"""
        pass

    @abstractmethod
    def norm(self):
        """Norm of the element in its space"""
        pass

    @abstractmethod
    def with_data(self, data):
        """New element of the same space carrying `data`"""
        pass

    @property
    def space(self):
        return Space.of(self)

    @property
    def size(self):
        return len(self.data)

    def meta(self):
        return {}

    def to_json(self):
        return {"kind": self.kind, "data": [float(v) for v in self.data], "meta": self.meta()}

    def __repr__(self):
        return f"{type(self).__name__}(size={self.size}, norm={self.norm():.6g})"


@dataclass(frozen=True, eq=False, repr=False)
class GridFn(SpaceElement):
    """x in C(M) with M the grid t_i = i/(d-1); exact, not a discretization."""
    samples: np.ndarray
    kind = GRID

    def __post_init__(self):
        arr = _frozen_array(self.samples)
        if len(arr) < 2:
            raise ValueError(f"GridFn needs at least 2 samples, got {len(arr)}")
        object.__setattr__(self, "samples", arr)

    @property
    def data(self):
        return self.samples

    @property
    def grid(self):
        return np.linspace(0.0, 1.0, len(self.samples))

    def norm(self):
        return sup_norm(self)

    def with_data(self, data):
        return GridFn(data)


@dataclass(frozen=True, eq=False, repr=False)
class ChebFn(SpaceElement):
    """x in C^n[0,1] stored as Chebyshev coefficients up to degree D."""
    coeffs: np.ndarray
    smoothness_order: int = DEFAULT_SMOOTHNESS
    kind = CHEB

    def __post_init__(self):
        object.__setattr__(self, "coeffs", _frozen_array(self.coeffs))
        if self.smoothness_order < 0:
            raise ValueError(f"smoothness_order must be >= 0, got {self.smoothness_order}")

    @property
    def data(self):
        return self.coeffs

    @property
    def degree(self):
        return len(self.coeffs) - 1

    def series(self):
        return Chebyshev(self.coeffs, domain=[0.0, 1.0])

    def norm(self):
        return cn_norm(self)

    def with_data(self, data):
        return ChebFn(data, self.smoothness_order)

    def meta(self):
        return {"n": self.smoothness_order}


@dataclass(frozen=True, eq=False, repr=False)
class PVector(SpaceElement):
    """x in l_p truncated to d coordinates, p an even positive integer."""
    entries: np.ndarray
    p: int = DEFAULT_P
    kind = PVEC

    def __post_init__(self):
        object.__setattr__(self, "entries", _frozen_array(self.entries))
        if int(self.p) != self.p or self.p < 1:
            raise ValueError(f"p must be a positive integer, got {self.p}")
        object.__setattr__(self, "p", int(self.p))

    @property
    def data(self):
        return self.entries

    def norm(self):
        return p_norm(self)

    def power_sum(self):
        """sum_i |x_i|^p, a polynomial in x when p is even"""
        return float(np.sum(np.abs(self.entries) ** self.p))

    def with_data(self, data):
        return PVector(data, self.p)

    def meta(self):
        return {"p": self.p}


@dataclass(frozen=True)
class Space:
    """Descriptor of a represented space.

    Attributes:
        kind: 'grid', 'cheb' or 'pvec'
        size: Number of coordinates (grid points, coefficients, entries)
        p: Exponent for 'pvec'
        n: Smoothness order for 'cheb'
    """
    kind: str
    size: int
    p: int = DEFAULT_P
    n: int = DEFAULT_SMOOTHNESS

    def __post_init__(self):
        if self.kind not in (GRID, CHEB, PVEC):
            raise ValueError(f"Unknown space kind: {self.kind}")
        if self.size < 1 or (self.kind == GRID and self.size < 2):
            raise ValueError(f"Invalid size {self.size} for space kind {self.kind}")
        # p and n only carry meaning for their own kinds
        if self.kind != PVEC:
            object.__setattr__(self, "p", DEFAULT_P)
        if self.kind != CHEB:
            object.__setattr__(self, "n", DEFAULT_SMOOTHNESS)

    @classmethod
    def of(cls, x):
        if isinstance(x, GridFn):
            return cls(GRID, x.size)
        if isinstance(x, ChebFn):
            return cls(CHEB, x.size, n=x.smoothness_order)
        if isinstance(x, PVector):
            return cls(PVEC, x.size, p=x.p)
        raise TypeError(f"Not a space element: {type(x).__name__}")

    @classmethod
    def grid(cls, d=DEFAULT_GRID_SIZE):
        return cls(GRID, d)

    @classmethod
    def cheb(cls, degree=DEFAULT_CHEB_DEGREE, n=DEFAULT_SMOOTHNESS):
        return cls(CHEB, degree + 1, n=n)

    @classmethod
    def pvec(cls, d=DEFAULT_PVEC_SIZE, p=DEFAULT_P):
        return cls(PVEC, d, p=p)

    def element(self, data):
        if len(data) != self.size:
            raise SpaceMismatchError(f"Expected {self.size} coordinates, got {len(data)}")
        if self.kind == GRID:
            return GridFn(data)
        if self.kind == CHEB:
            return ChebFn(data, self.n)
        return PVector(data, self.p)

    def zero(self):
        return self.element(np.zeros(self.size))

    def norm(self, x):
        self.check(x)
        return x.norm()

    def check(self, x):
        if Space.of(x) != self:
            raise SpaceMismatchError(f"Element {x!r} does not belong to {self}")

    def dual_norm(self, phi):
        """Norm of the functional x -> sum_i phi_i x_i.

        Exact for grid (l1 against the sup norm) and pvec (Hoelder conjugate);
        for cheb it uses |c_0| <= ||x|| and |c_k| <= 2 ||x|| for k >= 1.
        """
        phi = np.asarray(phi, dtype=float)
        if len(phi) != self.size:
            raise SpaceMismatchError(f"Functional has {len(phi)} entries, space has {self.size}")
        if self.kind == GRID:
            return float(np.sum(np.abs(phi)))
        if self.kind == PVEC:
            if self.p == 1:
                return float(np.max(np.abs(phi)))
            q = self.p / (self.p - 1.0)
            return float(np.sum(np.abs(phi) ** q) ** (1.0 / q))
        return float(abs(phi[0]) + 2.0 * np.sum(np.abs(phi[1:])))

    def random_direction(self, rng):
        """Random element of unit norm"""
        if self.kind == CHEB:
            decay = 1.0 / (1.0 + np.arange(self.size)) ** 2
            raw = rng.uniform(-1.0, 1.0, self.size) * decay
        else:
            raw = rng.uniform(-1.0, 1.0, self.size)
        x = self.element(raw)
        size = x.norm()
        if size == 0.0:
            return self.random_direction(rng)
        return scale(1.0 / size, x)

    def random_element(self, rng, norm):
        return scale(norm, self.random_direction(rng))

    def to_json(self):
        desc = {"kind": self.kind, "size": self.size}
        if self.kind == PVEC:
            desc["p"] = self.p
        if self.kind == CHEB:
            desc["n"] = self.n
        return desc

    @classmethod
    def from_json(cls, desc):
        try:
            return cls(desc["kind"], int(desc["size"]),
                       p=int(desc.get("p", DEFAULT_P)), n=int(desc.get("n", DEFAULT_SMOOTHNESS)))
        except KeyError as e:
            raise ValueError(f"Space descriptor missing field {e}") from e


def element_from_json(obj):
    """Rebuild an element from {"kind": ..., "data": [...], "meta": {...}}"""
    kind = obj.get("kind")
    data = obj.get("data")
    meta = obj.get("meta", {}) or {}
    if data is None:
        raise ValueError("Element JSON needs a 'data' list")
    if kind == GRID:
        return GridFn(data)
    if kind == CHEB:
        return ChebFn(data, int(meta.get("n", DEFAULT_SMOOTHNESS)))
    if kind == PVEC:
        return PVector(data, int(meta.get("p", DEFAULT_P)))
    raise ValueError(f"Unknown element kind: {kind}")


def sup_norm(x):
    return float(np.max(np.abs(x.samples)))


def p_norm(x):
    if not np.any(x.entries):
        return 0.0
    # scaled to keep |x_i|^p finite for large entries
    m = float(np.max(np.abs(x.entries)))
    return m * float(np.sum(np.abs(x.entries / m) ** x.p) ** (1.0 / x.p))


def cn_norm(x, samples=CN_NORM_SAMPLES):
    """max over k <= n of max over sample points of |x^(k)(t)|"""
    t = np.linspace(0.0, 1.0, samples)
    series = x.series()
    best = 0.0
    for k in range(x.smoothness_order + 1):
        deriv = series.deriv(k) if k else series
        best = max(best, float(np.max(np.abs(deriv(t)))))
    return best


def lincomb(alpha, x, beta, y):
    """alpha * x + beta * y, coordinatewise."""
    if type(x) is not type(y) or x.size != y.size or x.meta() != y.meta():
        raise SpaceMismatchError(f"Cannot combine {x!r} and {y!r}")
    return x.with_data(alpha * x.data + beta * y.data)


def scale(alpha, x):
    return x.with_data(alpha * x.data)


def pointwise_apply(g, x):
    """(g o x) sampled at every grid point; g must accept numpy arrays."""
    return GridFn(np.asarray(g(x.samples), dtype=float))


def restrict(x, stride):
    """Restriction of a grid function to every `stride`-th grid point.

    (d - 1) must be divisible by stride so the coarse grid is a subgrid.
    """
    if (x.size - 1) % stride:
        raise ValueError(f"Grid of size {x.size} has no subgrid with stride {stride}")
    return GridFn(x.samples[::stride])


def cheb_eval(x, t):
    return x.series()(np.asarray(t, dtype=float))


def cheb_derivative(x, k=1):
    """k-th derivative; degree D maps to degree D - k."""
    coeffs = x.series().deriv(k).coef if x.degree >= k else np.zeros(1)
    return ChebFn(coeffs, x.smoothness_order)


def cheb_compose(g, x, oversampling=OVERSAMPLING):
    """g o x refit to the degree of x.

    g is sampled at oversampling * (D + 1) Chebyshev points of [0, 1] and the
    result is a least-squares Chebyshev fit of degree D.

    Args:
        g: Scalar map accepting numpy arrays
        x: ChebFn
        oversampling: Sampling factor

    Returns:
        (ChebFn, aliasing_error) with aliasing_error the max fit residual at
        the sample points
    """
    count = oversampling * (x.degree + 1)
    k = np.arange(count)
    t = 0.5 * (1.0 - np.cos((2 * k + 1) * math.pi / (2 * count)))
    values = np.asarray(g(cheb_eval(x, t)), dtype=float)
    fit = Chebyshev.fit(t, values, deg=x.degree, domain=[0.0, 1.0])
    coeffs = np.zeros(x.degree + 1)
    coeffs[:len(fit.coef)] = fit.coef
    aliasing = float(np.max(np.abs(fit(t) - values)))
    if aliasing > 1e-8:
        logger.debug(f"cheb_compose aliasing error {aliasing:.3g} at degree {x.degree}")
    return ChebFn(coeffs, x.smoothness_order), aliasing


def simpson_weights(d):
    """Composite Simpson weights on the uniform grid of [0, 1] with d points."""
    if d < 3 or d % 2 == 0:
        raise ValueError(f"Composite Simpson needs an odd number of points >= 3, got {d}")
    h = 1.0 / (d - 1)
    w = np.ones(d)
    w[1:-1:2] = 4.0
    w[2:-1:2] = 2.0
    return w * (h / 3.0)


def quadrature(x):
    """Composite Simpson approximation of the integral of x over [0, 1]."""
    return float(np.dot(simpson_weights(x.size), x.samples))


def as_array(value):
    """Codomain value (float or element) as a float array"""
    if isinstance(value, SpaceElement):
        return np.asarray(value.data, dtype=float)
    return np.atleast_1d(np.asarray(value, dtype=float))


def like(template, array):
    """Rebuild a codomain value shaped like `template` from `array`"""
    if isinstance(template, SpaceElement):
        return template.with_data(array)
    return float(np.asarray(array).ravel()[0])


def value_norm(value):
    if isinstance(value, SpaceElement):
        return value.norm()
    if isinstance(value, np.ndarray):
        return float(np.max(np.abs(value))) if value.size else 0.0
    return abs(float(value))


def codomain_zero(template):
    if isinstance(template, SpaceElement):
        return template.with_data(np.zeros(template.size))
    return 0.0
