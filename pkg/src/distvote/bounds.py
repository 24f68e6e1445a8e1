"""Closed-form worst-case distortion bounds for district-based elections.

All bounds are evaluated exactly over rationals and converted to float
at the interface, so monotonicity and cross-checks in tests are exact.
The ``*_exact`` variants return :class:`fractions.Fraction`.

For a rule with single-district distortion gamma, the distributed
distortion over k districts is at most

* symmetric:    gamma + gamma^2 * m * k / (gamma + 1)
* unweighted:   gamma + gamma^2 * m / (gamma + 1) * ((n + n_max) / n_min - 1)
* unrestricted: gamma + gamma * m * (n / n_min - 1)

Range voting has gamma = 1.  Plurality admits tighter direct bounds
(1 + 3 m^2 k / 4 and its unweighted/unrestricted counterparts), which is
why ``pv_bound`` is not the gamma bound with gamma = Theta(m^2).  The
ordinal lower bound is the ratio realized by the cyclic-ranking witness
family; the emitted witness instances achieve exactly that ratio plus m
(see :mod:`distvote.generators`), so these values are floors, not exact
witness distortions.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .core import ELECTION_CLASSES, SYMMETRIC, UNWEIGHTED
from .errors import DomainError


@dataclass(frozen=True)
class BoundQuery:
    """Parameters a bound formula may depend on.

    ``n_min`` and ``n_max`` are the smallest and largest district sizes;
    for the symmetric class both equal ``n / k``.
    """

    eclass: str
    n: int
    m: int
    k: int
    n_min: int
    n_max: int
    gamma: float = 1.0

    def __post_init__(self):
        if self.eclass not in ELECTION_CLASSES:
            raise DomainError(f"unknown election class {self.eclass!r}")
        if self.m < 2 or self.k < 1 or self.n < 1:
            raise DomainError("need n >= 1, m >= 2, k >= 1")
        if not 1 <= self.n_min <= self.n_max <= self.n:
            raise DomainError("district sizes must satisfy 1 <= n_min <= n_max <= n")
        if not self.n_min * self.k <= self.n <= self.n_max * self.k:
            raise DomainError("no k-partition has these extremes: need n_min*k <= n <= n_max*k")
        if self.gamma < 1:
            raise DomainError("gamma must be at least 1")
        if self.eclass == SYMMETRIC:
            if self.n % self.k != 0 or self.n_min != self.n // self.k or self.n_max != self.n_min:
                raise DomainError("symmetric queries need n_min = n_max = n/k")

    @classmethod
    def symmetric(cls, m: int, k: int, district_size: int = 1, gamma: float = 1.0) -> "BoundQuery":
        return cls(SYMMETRIC, k * district_size, m, k, district_size, district_size, gamma)

    @classmethod
    def for_sizes(cls, eclass: str, m: int, sizes, gamma: float = 1.0) -> "BoundQuery":
        sizes = [int(s) for s in sizes]
        return cls(eclass, sum(sizes), m, len(sizes), min(sizes), max(sizes), gamma)


def _size_ratio(q: BoundQuery) -> Fraction:
    # (n + n_max) / n_min - 1
    return Fraction(q.n + q.n_max, q.n_min) - 1


def gamma_bound_exact(q: BoundQuery) -> Fraction:
    g = Fraction(q.gamma)
    if g < 1:
        raise DomainError("gamma must be at least 1")
    if q.eclass == SYMMETRIC:
        return g + g * g * q.m * q.k / (g + 1)
    if q.eclass == UNWEIGHTED:
        return g + g * g * q.m / (g + 1) * _size_ratio(q)
    return g + g * q.m * (Fraction(q.n, q.n_min) - 1)


def rv_bound_exact(q: BoundQuery) -> Fraction:
    if q.eclass == SYMMETRIC:
        return 1 + Fraction(q.m * q.k, 2)
    if q.eclass == UNWEIGHTED:
        return 1 + Fraction(q.m, 2) * _size_ratio(q)
    return 1 + q.m * (Fraction(q.n, q.n_min) - 1)


def pv_bound_exact(q: BoundQuery) -> Fraction:
    if q.eclass == SYMMETRIC:
        return 1 + Fraction(3 * q.m * q.m * q.k, 4)
    if q.eclass == UNWEIGHTED:
        return 1 + Fraction(q.m * q.m, 4) * (Fraction(3 * q.n + q.n_max, q.n_min) - 1)
    return 1 + q.m * q.m * (Fraction(q.n, q.n_min) - Fraction(1, 2))


def ordinal_lower_bound_exact(q: BoundQuery) -> Fraction:
    if q.eclass in (SYMMETRIC, UNWEIGHTED):
        return 1 + Fraction(q.m * q.m, 4) * (Fraction(3 * q.n + q.n_max, q.n_min) - 3)
    return 1 + q.m * q.m * (Fraction(q.n, q.n_min) - 1)


def gamma_bound(q: BoundQuery) -> float:
    """Distributed-distortion bound for any rule with distortion ``q.gamma``."""
    return float(gamma_bound_exact(q))


def rv_bound(q: BoundQuery) -> float:
    """Distributed-distortion bound for range voting (the gamma bound at 1)."""
    return float(rv_bound_exact(q))


def pv_bound(q: BoundQuery) -> float:
    """Tight distributed-distortion bound for plurality."""
    return float(pv_bound_exact(q))


def ordinal_lower_bound(q: BoundQuery) -> float:
    """Distortion floor for every deterministic ordinal rule.

    For the symmetric class the statement is asymptotic; the value
    exposed here is the exact ratio of the witness construction's proof
    (with ``n_min = n_max = n/k`` it evaluates to 1 + (m^2/4)(3k - 2)).
    """
    return float(ordinal_lower_bound_exact(q))
