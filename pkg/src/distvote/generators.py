"""Worst-case election instances with known winners and closed-form distortion.

Each generator emits a complete district-based election together with
the alternative it is rigged to elect, the welfare-optimal alternative,
and the exact distortion the instance approaches as its perturbation
parameter vanishes.  The families are exposed under short tags that the
CLI and the verification suite share:

* ``t2``  - near-indifferent voters in one district override strong
  support elsewhere; tight for every unanimous rule (range voting is
  emitted).  Works in all three district classes.
* ``t3``  - approval-count ties rigged against the welfare optimum;
  tight for plurality in all three classes.
* ``t4``  - cyclic first-choice structure that defeats every ordinal
  rule; emitted with plurality.  Unweighted and unrestricted classes.
* ``t5``  - instances whose optimal alternative loses every district of
  every balanced partition (districting impossibility, range voting).
* ``t6``  - equal-split partition gadget: a balanced districting
  electing the optimum exists iff the embedded number-partition
  instance has an equal-cardinality, equal-sum split.
* ``t9``  - one approval per alternative; under adversarial tie-breaks
  any districting can elect the worst alternative, costing 1 + m^2/2.

Where a construction calls for exact ties, the default instance keeps
them and ships a tie-break order realizing the intended resolution;
``strict_margins=True`` instead perturbs valuations by delta = eps/10
so each voter's intended favorite is strict (structural count ties
remain and still use the order).  Every emitted row sums to 1 exactly;
no residual mass needs redistribution in these constructions.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .core import (
    ADVERSARIAL,
    SYMMETRIC,
    UNRESTRICTED,
    UNWEIGHTED,
    DistrictPartition,
    TieBreakOrder,
    ValuationProfile,
    WeightVector,
)
from .engine import DistrictElection, run_and_measure
from .errors import DomainError
from .rules import VotingRuleSpec, preset

DEFAULT_EPSILON = 1e-6


@dataclass(frozen=True)
class GeneratedInstance:
    """An adversarial election plus its intended outcome.

    ``limit_distortion`` is the exact distortion ratio the instance
    attains as ``epsilon`` tends to zero (for the tie-exact families it
    is attained exactly).  ``epsilon == 0`` means the construction has
    no perturbation parameter.
    """

    election: DistrictElection
    epsilon: float
    expected_winner: int
    optimal_alt: int
    limit_distortion: float
    theorem_tag: str
    notes: str = ""

    def __post_init__(self):
        if self.epsilon < 0:
            raise DomainError("epsilon must be non-negative")
        if self.limit_distortion < 1:
            raise DomainError("limit distortion must be at least 1")


def _validate_sizes(sizes, k: int) -> list[int]:
    sizes = [int(s) for s in sizes]
    if len(sizes) != k:
        raise DomainError(f"need {k} district sizes, got {len(sizes)}")
    if any(s < 1 for s in sizes):
        raise DomainError("district sizes must be positive")
    return sizes


def _require_class(eclass: str):
    if eclass not in (SYMMETRIC, UNWEIGHTED, UNRESTRICTED):
        raise DomainError(f"unknown election class {eclass!r}")


def _dominant_weights(k: int) -> WeightVector:
    # district 0 outweighs the sum of all others
    w = np.ones(k)
    w[0] = float(k)
    return WeightVector(w)


def gen_t2(
    eclass: str,
    m: int,
    k: int,
    district_sizes,
    epsilon: float = DEFAULT_EPSILON,
) -> GeneratedInstance:
    """Tight witness for the range-voting (gamma = 1) bounds.

    District 0 holds voters who are close to indifferent but lean
    toward alternative 0; its win drags the election away from the
    near-unanimous optimum, alternative 1.  In the symmetric and
    unweighted classes (which need m > k) every district winner is
    distinct and the top-level k-way tie resolves toward alternative 0;
    in the unrestricted class district 0 carries dominant weight and no
    tie occurs.
    """
    _require_class(eclass)
    sizes = _validate_sizes(district_sizes, k)
    if k < 2:
        raise DomainError("need at least two districts")
    if not 0 < epsilon < 1.0 / m:
        raise DomainError(f"epsilon must lie in (0, 1/m) = (0, {1.0 / m})")
    if eclass == SYMMETRIC and len(set(sizes)) != 1:
        raise DomainError("symmetric instances need equal district sizes")
    if eclass in (SYMMETRIC, UNWEIGHTED) and m <= k:
        raise DomainError("this construction needs m > k for symmetric/unweighted classes")

    n = sum(sizes)
    n1 = sizes[0]
    a, b = 0, 1
    rows = []
    if eclass == UNRESTRICTED:
        lean = np.full(m, 1.0 / m - epsilon / (m - 1))
        lean[a] = 1.0 / m + epsilon
        rows.extend([lean] * n1)
        all_b = np.zeros(m)
        all_b[b] = 1.0
        for size in sizes[1:]:
            rows.extend([all_b] * size)
        weights = _dominant_weights(k)
        limit = (Fraction(n1, m) + (n - n1)) / Fraction(n1, m)
    else:
        lean = np.full(m, 1.0 / m - epsilon / (m - 1))
        lean[a] = 1.0 / m + epsilon
        rows.extend([lean] * n1)
        all_b = np.zeros(m)
        all_b[b] = 1.0
        rows.extend([all_b] * sizes[1])
        for d in range(2, k):
            c = d  # distinct alternative per extra district, needs m > k
            row = np.zeros(m)
            row[c] = 0.5 + epsilon
            row[b] = 0.5 - epsilon
            rows.extend([row] * sizes[d])
        weights = WeightVector.uniform(k)
        n2 = sizes[1]
        limit = (Fraction(n1, m) + n2 + Fraction(n - n1 - n2, 2)) / Fraction(n1, m)

    election = DistrictElection(
        profile=ValuationProfile(np.array(rows)),
        partition=DistrictPartition.from_sizes(sizes),
        weights=weights,
        rule=VotingRuleSpec.range_voting(),
        tiebreak=TieBreakOrder.identity(m),
    )
    return GeneratedInstance(
        election=election,
        epsilon=epsilon,
        expected_winner=a,
        optimal_alt=b,
        limit_distortion=float(limit),
        theorem_tag="t2",
    )


def _halved_sizes_ok(sizes, first_structured: int):
    for d, s in enumerate(sizes):
        if d >= first_structured and s % 2 != 0:
            raise DomainError(f"district {d} size must be even, got {s}")


def gen_t3(
    eclass: str,
    m: int,
    k: int,
    district_sizes,
    epsilon: float = DEFAULT_EPSILON,
    strict_margins: bool = False,
) -> GeneratedInstance:
    """Tight witness for the plurality bounds.

    District 0 splits into m equal approval blocks, so plurality ties
    there and the order elects alternative m-2, whose welfare is a bare
    n_0/m^2; the optimum m-1 is approved outright elsewhere.  Exact by
    construction: the measured distortion equals ``limit_distortion``
    for the default tie-exact instance.
    """
    _require_class(eclass)
    sizes = _validate_sizes(district_sizes, k)
    if k < 2:
        raise DomainError("need at least two districts")
    if not 0 < epsilon < 1.0 / m:
        raise DomainError(f"epsilon must lie in (0, 1/m) = (0, {1.0 / m})")
    if sizes[0] % m != 0:
        raise DomainError(f"district 0 size must be a multiple of m={m}, got {sizes[0]}")
    if eclass == SYMMETRIC and len(set(sizes)) != 1:
        raise DomainError("symmetric instances need equal district sizes")

    n = sum(sizes)
    n1 = sizes[0]
    g = n1 // m
    a, b = m - 2, m - 1
    delta = epsilon / 10.0 if strict_margins else 0.0
    rows: list[np.ndarray] = []

    def half_half(own: int) -> np.ndarray:
        row = np.zeros(m)
        row[own] = 0.5 + delta
        row[b] = 0.5 - delta
        return row

    def uniform_leaning_a() -> np.ndarray:
        if delta == 0.0:
            return np.full(m, 1.0 / m)
        row = np.full(m, 1.0 / m - delta / (m - 1))
        row[a] = 1.0 / m + delta
        return row

    all_b = np.zeros(m)
    all_b[b] = 1.0

    if eclass == UNRESTRICTED:
        # district 0 has dominant weight; blocks approve c_0..c_{m-3}, a, b
        for c in range(m - 2):
            rows.extend([half_half(c)] * g)
        rows.extend([uniform_leaning_a()] * g)
        rows.extend([all_b] * g)
        for size in sizes[1:]:
            rows.extend([all_b] * size)
        weights = _dominant_weights(k)
        limit = (Fraction(n1, m * m) + n - Fraction(n1, 2)) / Fraction(n1, m * m)
    else:
        if m <= k:
            raise DomainError("this construction needs m > k for symmetric/unweighted classes")
        _halved_sizes_ok(sizes, first_structured=2)
        # district 0: approval blocks for alternatives 0..m-3, then a (uniform block), then b
        for c in range(m - 2):
            rows.extend([half_half(c)] * g)
        rows.extend([uniform_leaning_a()] * g)
        rows.extend([all_b] * g)
        rows.extend([all_b] * sizes[1])
        for d in range(2, k):
            c = d - 2  # alternatives 0..k-3, distinct from a and b since m > k
            half = sizes[d] // 2
            rows.extend([half_half(c)] * half)
            rows.extend([all_b] * half)
        weights = WeightVector.uniform(k)
        n2 = sizes[1]
        limit = (Fraction(n1, m * m) + Fraction(3 * n - n1 + n2, 4)) / Fraction(n1, m * m)

    election = DistrictElection(
        profile=ValuationProfile(np.array(rows)),
        partition=DistrictPartition.from_sizes(sizes),
        weights=weights,
        rule=preset("plurality", m),
        tiebreak=TieBreakOrder.prefer([a], m),
    )
    return GeneratedInstance(
        election=election,
        epsilon=epsilon,
        expected_winner=a,
        optimal_alt=b,
        limit_distortion=float(limit),
        theorem_tag="t3",
        notes="exact ties by default; strict_margins perturbs approvals by epsilon/10",
    )


def gen_t4(
    eclass: str,
    m: int,
    k: int,
    district_sizes,
    epsilon: float = DEFAULT_EPSILON,
    strict_margins: bool = False,
) -> GeneratedInstance:
    """Witness defeating every deterministic ordinal rule (run with plurality).

    District 0's blocks give every alternative the same number of first
    positions, so the rule cannot avoid electing alternative m-2, which
    only the uniform block values (welfare n_0/m^2).  The construction
    has no epsilon of its own: ``limit_distortion`` is attained exactly,
    and it exceeds the stated ordinal floor by exactly m because the
    optimum also collects the approval block that ranks it first.
    """
    _require_class(eclass)
    sizes = _validate_sizes(district_sizes, k)
    if k < 2:
        raise DomainError("need at least two districts")
    if not 0 < epsilon < 1.0 / m:
        raise DomainError(f"epsilon must lie in (0, 1/m) = (0, {1.0 / m})")
    if sizes[0] % m != 0:
        raise DomainError(f"district 0 size must be a multiple of m={m}, got {sizes[0]}")
    if eclass == SYMMETRIC and len(set(sizes)) != 1:
        raise DomainError("symmetric instances need equal district sizes")
    if eclass in (SYMMETRIC, UNWEIGHTED) and m <= k:
        raise DomainError("this construction needs m > k for symmetric/unweighted classes")

    n = sum(sizes)
    n1 = sizes[0]
    g = n1 // m
    a, b = m - 2, m - 1
    delta = epsilon / 10.0 if strict_margins else 0.0
    rows: list[np.ndarray] = []

    def one_hot(j: int) -> np.ndarray:
        row = np.zeros(m)
        row[j] = 1.0
        return row

    def uniform_leaning_a() -> np.ndarray:
        if delta == 0.0:
            return np.full(m, 1.0 / m)
        row = np.full(m, 1.0 / m - delta / (m - 1))
        row[a] = 1.0 / m + delta
        return row

    # district 0: one block per alternative; the block for a is uniform
    for j in range(m):
        rows.extend([uniform_leaning_a() if j == a else one_hot(j)] * g)

    if eclass == UNRESTRICTED:
        for size in sizes[1:]:
            rows.extend([one_hot(b)] * size)
        weights = _dominant_weights(k)
        limit = (Fraction(n1, m * m) + Fraction(n1, m) + (n - n1)) / Fraction(n1, m * m)
    else:
        _halved_sizes_ok(sizes, first_structured=2)
        rows.extend([one_hot(b)] * sizes[1])
        for d in range(2, k):
            c = d - 2
            half = sizes[d] // 2
            row = np.zeros(m)
            row[c] = 0.5 + delta
            row[b] = 0.5 - delta
            rows.extend([row] * half)
            rows.extend([one_hot(b)] * half)
        weights = WeightVector.uniform(k)
        n2 = sizes[1]
        limit = (
            Fraction(n1, m * m) + Fraction(n1, m) + n2 + Fraction(3 * (n - n1 - n2), 4)
        ) / Fraction(n1, m * m)

    election = DistrictElection(
        profile=ValuationProfile(np.array(rows)),
        partition=DistrictPartition.from_sizes(sizes),
        weights=weights,
        rule=preset("plurality", m),
        tiebreak=TieBreakOrder.prefer([a], m),
    )
    return GeneratedInstance(
        election=election,
        epsilon=epsilon,
        expected_winner=a,
        optimal_alt=b,
        limit_distortion=float(limit),
        theorem_tag="t4",
        notes="tie-exact; measured distortion equals the limit for every epsilon",
    )


def gen_t5(k: int, q: int, epsilon: float | None = None) -> GeneratedInstance:
    """Districting-impossibility family for range voting.

    q groups of voters each back their own alternative so strongly that
    every balanced district contains a group majority beating the
    near-optimal alternative b = q.  b maximizes welfare yet wins no
    district of any balanced k-partition (checked by brute force in the
    verification suite).  The emitted partition is the contiguous one.
    """
    if k < 2 or q < 2:
        raise DomainError("need k >= 2 and q >= 2")
    m = q + 1
    b = q
    if k == 2:
        n = 3 * q
        if n % 2 != 0:
            raise DomainError("k=2 needs 3q even, so q must be even")
        eps_sup = n / ((n + 3) * (n + 4))
        group, group_size = n / (n + 3), 3
        b_value = 3.0 / (n + 3)
        group_sign = -1.0  # group value shrinks by epsilon, b gains it
    else:
        n = (k - 1) * q
        if n % k != 0:
            raise DomainError(f"district size n/k = {n}/{k} must be an integer")
        eps_sup = n / ((n + k) * (n + k - 1))
        group, group_size = n / (n + k), k - 1
        b_value = float(k) / (n + k)
        group_sign = 1.0
    if epsilon is None:
        epsilon = min(DEFAULT_EPSILON, eps_sup / 2)
    if not 0 < epsilon < eps_sup:
        raise DomainError(f"epsilon must lie in (0, {eps_sup})")

    rows = []
    for i in range(q):
        row = np.zeros(m)
        row[i] = group + group_sign * epsilon
        row[b] = b_value - group_sign * epsilon
        rows.extend([row] * group_size)

    election = DistrictElection(
        profile=ValuationProfile(np.array(rows)),
        partition=DistrictPartition.from_sizes([n // k] * k),
        weights=WeightVector.uniform(k),
        rule=VotingRuleSpec.range_voting(),
        tiebreak=TieBreakOrder.identity(m),
    )
    expected = run_and_measure(election)[0].winner
    limit = Fraction(1) if k == 2 else Fraction(k, k - 1)
    return GeneratedInstance(
        election=election,
        epsilon=float(epsilon),
        expected_winner=expected,
        optimal_alt=b,
        limit_distortion=float(limit),
        theorem_tag="t5",
        notes="optimal alternative wins zero districts under every balanced partition",
    )


def gen_t9(m: int) -> GeneratedInstance:
    """Districting-proof family: adversarial ties cost 1 + m^2/2.

    Every alternative is some voter's unique first choice, so any
    partition produces all-tied approval counts and an adversarial
    tie-break can crown the alternative only the indifferent voter
    values.  A favorable order instead elects the optimum (alternative
    1) at distortion 1.
    """
    if m < 2:
        raise DomainError("need m >= 2")
    n = m
    values = np.zeros((n, m))
    values[0] = 1.0 / m  # the everywhere-indifferent voter backing the bad winner
    values[1, 1] = 1.0
    for i in range(2, n):
        values[i, i] = 0.5
        values[i, 1] = 0.5
    # voter i's approval must be alternative i: keep 1 behind every other index
    order = (0,) + tuple(range(2, m)) + (1,)
    sizes = [(m + 1) // 2, m // 2]
    election = DistrictElection(
        profile=ValuationProfile(values),
        partition=DistrictPartition.from_sizes(sizes),
        weights=WeightVector.uniform(len(sizes)),
        rule=preset("plurality", m),
        tiebreak=TieBreakOrder(order, ADVERSARIAL),
    )
    limit = 1 + Fraction(m * m, 2)
    return GeneratedInstance(
        election=election,
        epsilon=0.0,
        expected_winner=0,
        optimal_alt=1,
        limit_distortion=float(limit),
        theorem_tag="t9",
        notes="holds for every partition; the emitted one is a balanced 2-split",
    )


@dataclass(frozen=True)
class CPartitionInstance:
    """q positive rationals summing to 1, to be split into two equal-size,
    equal-sum halves.

    Numbers are kept as exact fractions so yes/no ground truth and the
    gadget's safe perturbation size are exact.  Values of exactly 1/2
    are allowed (they only arise for q = 2, where the normalized
    yes-instance is necessarily (1/2, 1/2)).
    """

    numbers: tuple[Fraction, ...]

    def __post_init__(self):
        numbers = tuple(Fraction(x) for x in self.numbers)
        q = len(numbers)
        if q < 2 or q % 2 != 0:
            raise DomainError("need an even count q >= 2 of numbers")
        if any(x <= 0 for x in numbers):
            raise DomainError("numbers must be positive")
        if any(x > Fraction(1, 2) for x in numbers):
            raise DomainError("each number must be at most 1/2 after normalization")
        if sum(numbers) != 1:
            raise DomainError("numbers must sum to exactly 1")
        object.__setattr__(self, "numbers", numbers)

    @classmethod
    def from_integers(cls, ints) -> "CPartitionInstance":
        ints = [int(x) for x in ints]
        if any(x <= 0 for x in ints):
            raise DomainError("numbers must be positive integers")
        total = sum(ints)
        return cls(tuple(Fraction(x, total) for x in ints))

    @property
    def q(self) -> int:
        return len(self.numbers)

    def common_denominator(self) -> int:
        return math.lcm(*(x.denominator for x in self.numbers))

    def safe_epsilon(self) -> Fraction:
        """Positive eps below half the smallest number and below every
        possible gap between a subset sum and 1/2, so the gadget's
        district comparisons are decided the right way."""
        return Fraction(1, 4 * self.common_denominator())

    def has_equal_split(self) -> bool:
        """Exhaustive ground truth: does a q/2-subset sum to exactly 1/2?"""
        half = Fraction(1, 2)
        indices = range(self.q)
        return any(
            sum(self.numbers[i] for i in subset) == half
            for subset in itertools.combinations(indices, self.q // 2)
        )


def gen_t6_gadget(inst: CPartitionInstance, k: int) -> GeneratedInstance:
    """Equal-split districting gadget.

    Number-voter i spreads her value across a private pair of
    alternatives and the shared target theta (= the last alternative,
    disfavored by the identity tie-break); dummy voters are indifferent
    between two private alternatives.  A balanced k-districting electing
    theta exists iff the numbers admit an equal-size equal-sum split:
    then the two pure number districts give theta welfare exactly 1/2,
    beating every private alternative's 1/2 - eps.
    """
    q = inst.q
    if k < 2:
        raise DomainError("need k >= 2")
    if q % 2 != 0:
        raise DomainError("q must be even")
    eps_frac = inst.safe_epsilon()
    if eps_frac < Fraction(1, 10**9):
        raise DomainError("numbers are too fine-grained for float-safe evaluation")
    eps = float(eps_frac)
    m = k * q + 1
    theta = m - 1
    n_dummies = (k - 2) * q // 2
    n = q + n_dummies

    rows = []
    for i, x in enumerate(inst.numbers):
        row = np.zeros(m)
        row[i] = 0.5 - eps  # private alternative alpha_i
        row[q + i] = float(Fraction(1, 2) + eps_frac - x)  # private beta_i
        row[theta] = float(x)
        rows.append(row)
    for j in range(n_dummies):
        row = np.zeros(m)
        row[2 * q + j] = 0.5  # gamma_j
        row[2 * q + n_dummies + j] = 0.5  # delta_j
        rows.append(row)

    election = DistrictElection(
        profile=ValuationProfile(np.array(rows)),
        partition=DistrictPartition.from_sizes([q // 2] * k),
        weights=WeightVector.uniform(k),
        rule=VotingRuleSpec.range_voting(),
        tiebreak=TieBreakOrder.identity(m),
    )
    outcome, report = run_and_measure(election)
    return GeneratedInstance(
        election=election,
        epsilon=eps,
        expected_winner=outcome.winner,
        optimal_alt=theta,
        limit_distortion=max(report.distortion, 1.0),
        theorem_tag="t6",
        notes="expected winner and distortion refer to the emitted contiguous "
        "partition; the districting question is decided by brute-force search",
    )


GENERATORS = {
    "t2": gen_t2,
    "t3": gen_t3,
    "t4": gen_t4,
    "t5": gen_t5,
    "t6": gen_t6_gadget,
    "t9": gen_t9,
}
