#!/usr/bin/env python
"""
Continuous homogeneous polynomial maps P(x) = sum_k c_k <phi_k, x>^j y_k.

Each rank-one term is the symmetric j-linear map
g(x_1, ..., x_j) = c * prod_i <phi, x_i> * y, so every derivative has a
closed form.
"""
import logging
import math
from dataclasses import dataclass, field
from typing import List, Union

import numpy as np

from .spaces import (Space, SpaceElement, SpaceMismatchError, as_array, codomain_zero,
                     element_from_json, like, value_norm)

logger = logging.getLogger(__name__)

Value = Union[float, SpaceElement]


@dataclass(frozen=True)
class RankOneTerm:
    """c * <phi, x>^j * y

    Attributes:
        weight: Scalar c
        functional: Dual vector phi, paired by <phi, x> = sum_i phi_i x_i
        output: Codomain value y (float or space element)
    """
    weight: float
    functional: np.ndarray
    output: Value

    def __post_init__(self):
        phi = np.array(self.functional, dtype=float)
        phi.setflags(write=False)
        object.__setattr__(self, "functional", phi)
        object.__setattr__(self, "weight", float(self.weight))
        if not isinstance(self.output, SpaceElement):
            object.__setattr__(self, "output", float(self.output))

    def pair(self, x):
        """<phi, x>"""
        if len(self.functional) != x.size:
            raise SpaceMismatchError(
                f"Functional of length {len(self.functional)} cannot pair with {x!r}")
        return float(np.dot(self.functional, x.data))


@dataclass(frozen=True)
class HomogeneousPoly:
    """Degree-j homogeneous polynomial map on `domain` as a sum of rank-one terms.

    An empty term list is the zero polynomial; its codomain is scalar unless
    `codomain` supplies a template value.
    """
    degree: int
    domain: Space
    terms: List[RankOneTerm] = field(default_factory=list)
    codomain: Value = 0.0

    def __post_init__(self):
        if self.degree < 0:
            raise ValueError(f"Polynomial degree must be >= 0, got {self.degree}")
        object.__setattr__(self, "terms", tuple(self.terms))
        if self.terms:
            template = codomain_zero(self.terms[0].output)
            object.__setattr__(self, "codomain", template)
        for term in self.terms:
            if len(term.functional) != self.domain.size:
                raise SpaceMismatchError(
                    f"Term functional has {len(term.functional)} entries, domain has {self.domain.size}")
            if np.shape(as_array(term.output)) != np.shape(as_array(self.codomain)) or \
                    type(term.output) is not type(self.codomain):
                raise SpaceMismatchError("All term outputs must share one codomain")

    @property
    def is_zero(self):
        return not self.terms or all(t.weight == 0.0 for t in self.terms)

    def _stacked(self):
        weights = np.array([t.weight for t in self.terms])
        phis = np.array([t.functional for t in self.terms]).reshape(len(self.terms), self.domain.size)
        outputs = np.array([as_array(t.output) for t in self.terms])
        return weights, phis, outputs

    def _combine(self, coefs, outputs):
        return like(self.codomain, coefs @ outputs)

    def __call__(self, x):
        return eval_poly(self, x)

    def to_json(self):
        terms = []
        for t in self.terms:
            y = t.output.to_json() if isinstance(t.output, SpaceElement) else t.output
            terms.append({"c": t.weight, "phi": [float(v) for v in t.functional], "y": y})
        return {"degree": self.degree, "domain": self.domain.to_json(), "terms": terms}

    @classmethod
    def from_json(cls, obj, domain=None):
        """Build from {"degree": j, "terms": [{"c": ..., "phi": [...], "y": ...}]}.

        Args:
            obj: Parsed JSON object
            domain: Space used when the object carries no "domain" entry
        """
        if "degree" not in obj:
            raise ValueError("Polynomial JSON needs a 'degree'")
        if "domain" in obj:
            domain = Space.from_json(obj["domain"])
        terms = []
        for raw in obj.get("terms", []):
            y = raw.get("y", 1.0)
            y = element_from_json(y) if isinstance(y, dict) else float(y)
            terms.append(RankOneTerm(raw.get("c", 1.0), raw["phi"], y))
        if domain is None:
            if not terms:
                raise ValueError("Cannot infer the domain of an empty polynomial")
            domain = Space.grid(len(terms[0].functional))
        return cls(int(obj["degree"]), domain, terms)


def zero_poly(domain, degree, codomain=0.0):
    return HomogeneousPoly(degree, domain, [], codomain_zero(codomain))


def eval_poly(P, x):
    """sum_k c_k <phi_k, x>^j y_k"""
    P.domain.check(x)
    if not P.terms:
        return P.codomain
    weights, phis, outputs = P._stacked()
    pairs = phis @ x.data
    return P._combine(weights * pairs ** P.degree, outputs)


def deriv_at(P, z, v, n):
    """n-th derivative of P at z applied to (v, ..., v).

    P^(n)(z)(v)^n = j!/(j-n)! * sum_k c_k <phi_k, z>^(j-n) <phi_k, v>^n y_k
    for n <= j and zero for n > j.
    """
    P.domain.check(z)
    P.domain.check(v)
    if n < 0:
        raise ValueError(f"Derivative order must be >= 0, got {n}")
    j = P.degree
    if n > j or not P.terms:
        return P.codomain
    weights, phis, outputs = P._stacked()
    pz = phis @ z.data
    pv = phis @ v.data
    factor = math.factorial(j) / math.factorial(j - n)
    return P._combine(factor * weights * pz ** (j - n) * pv ** n, outputs)


def norm_bound(P):
    """c_j = sum_k |c_k| * ||phi_k||_*^j * ||y_k||, so ||P(x)|| <= c_j ||x||^j."""
    return float(sum(abs(t.weight) * P.domain.dual_norm(t.functional) ** P.degree * value_norm(t.output)
                     for t in P.terms))


def random_rank_one_poly(domain, degree, terms, rng, codomain=None):
    """Seeded random polynomial with dual-norm-one functionals.

    Args:
        domain: Space of the argument
        degree: Degree j
        terms: Number of rank-one terms
        rng: numpy Generator
        codomain: Optional codomain template; scalar outputs when None

    Returns:
        HomogeneousPoly
    """
    out = []
    for _ in range(terms):
        phi = rng.uniform(-1.0, 1.0, domain.size)
        phi = phi / domain.dual_norm(phi)
        if codomain is None:
            y = float(rng.choice([-1.0, 1.0]))
        else:
            y = codomain.space.random_direction(rng)
        out.append(RankOneTerm(rng.uniform(-1.0, 1.0), phi, y))
    logger.debug(f"Random degree-{degree} polynomial with {terms} terms on {domain}")
    return HomogeneousPoly(degree, domain, out)
