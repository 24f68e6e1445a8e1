"""Domain types and elementary computations for district-based elections.

Conventions used throughout the package:

* voters, alternatives and districts are 0-based integer indices;
* every voter's valuation row is non-negative and sums to 1 (unit-sum),
  enforced at construction within ``ROW_SUM_TOL``;
* all values are immutable after construction and every operation is a
  pure function, so everything here is safe for concurrent reads.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError

#: An alternative is identified by its column index in the profile.
AlternativeId = int

#: Tolerance for the unit-sum row invariant.
ROW_SUM_TOL = 1e-9

# District classes, ordered from most to least specific.
SYMMETRIC = "symmetric"
UNWEIGHTED = "unweighted"
UNRESTRICTED = "unrestricted"
ELECTION_CLASSES = (SYMMETRIC, UNWEIGHTED, UNRESTRICTED)

# Tie-break modes.
FIXED = "fixed"
ADVERSARIAL = "adversarial-min-welfare"


def _frozen_array(values, dtype) -> np.ndarray:
    arr = np.ascontiguousarray(values, dtype=dtype)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class TieBreakOrder:
    """Deterministic tie resolution, represented as data.

    ``order`` is a permutation of the alternatives; earlier entries win
    ties.  ``mode`` is either ``"fixed"`` (resolve by ``order``) or
    ``"adversarial-min-welfare"`` (among tied alternatives pick the one
    with minimal social welfare on the profile at hand, falling back to
    ``order`` on welfare ties).  The adversarial mode exists for
    worst-case verification only; ordinal induction always uses the
    fixed interpretation of ``order``.
    """

    order: tuple[int, ...]
    mode: str = FIXED

    def __post_init__(self):
        m = len(self.order)
        if sorted(self.order) != list(range(m)):
            raise DomainError(f"tie-break order {self.order!r} is not a permutation")
        if self.mode not in (FIXED, ADVERSARIAL):
            raise DomainError(f"unknown tie-break mode {self.mode!r}")

    @classmethod
    def identity(cls, m: int, mode: str = FIXED) -> "TieBreakOrder":
        """Lowest index wins; the package-wide default."""
        return cls(tuple(range(m)), mode)

    @classmethod
    def prefer(cls, favorites, m: int, mode: str = FIXED) -> "TieBreakOrder":
        """Order with ``favorites`` first (in the given order), rest ascending."""
        favorites = [int(j) for j in favorites]
        rest = [j for j in range(m) if j not in set(favorites)]
        return cls(tuple(favorites + rest), mode)

    @property
    def m(self) -> int:
        return len(self.order)

    def positions(self) -> np.ndarray:
        """positions[j] = rank of alternative j in the order (0 wins)."""
        pos = np.empty(self.m, dtype=np.int64)
        pos[np.asarray(self.order, dtype=np.int64)] = np.arange(self.m)
        return pos

    def as_fixed(self) -> "TieBreakOrder":
        """Same order with fixed semantics (used for ordinal induction)."""
        return self if self.mode == FIXED else TieBreakOrder(self.order, FIXED)


@dataclass(frozen=True)
class ValuationProfile:
    """An n-by-m matrix of non-negative, unit-sum voter valuations.

    Rows outside the unit-sum tolerance are rejected rather than
    renormalized; explicit rescaling belongs to the experiment pipeline
    where it is a declared step.
    """

    values: np.ndarray

    def __post_init__(self):
        values = _frozen_array(self.values, np.float64)
        if values.ndim != 2:
            raise DomainError("profile values must be a 2-d matrix")
        n, m = values.shape
        if n < 1 or m < 2:
            raise DomainError(f"profile needs n >= 1 voters and m >= 2 alternatives, got {n}x{m}")
        if np.any(values < 0):
            i = int(np.argwhere(values < 0)[0][0])
            raise DomainError(f"negative valuation in row {i}")
        sums = values.sum(axis=1)
        bad = np.flatnonzero(np.abs(sums - 1.0) > ROW_SUM_TOL)
        if bad.size:
            i = int(bad[0])
            raise DomainError(
                f"row {i} violates the unit-sum invariant (sum={sums[i]!r}, tolerance {ROW_SUM_TOL})"
            )
        object.__setattr__(self, "values", values)

    @classmethod
    def from_rows(cls, rows) -> "ValuationProfile":
        return cls(np.asarray(rows, dtype=np.float64))

    @property
    def n(self) -> int:
        return self.values.shape[0]

    @property
    def m(self) -> int:
        return self.values.shape[1]

    def welfare_vector(self) -> np.ndarray:
        """Social welfare of every alternative (column sums)."""
        return self.values.sum(axis=0)


@dataclass(frozen=True)
class OrdinalProfile:
    """One ranking (permutation of alternatives, best first) per voter."""

    rankings: np.ndarray

    def __post_init__(self):
        rankings = _frozen_array(self.rankings, np.int64)
        if rankings.ndim != 2:
            raise DomainError("rankings must be a 2-d matrix")
        m = rankings.shape[1]
        if not np.array_equal(np.sort(rankings, axis=1), np.broadcast_to(np.arange(m), rankings.shape)):
            raise DomainError("every ranking must be a permutation of the alternatives")
        object.__setattr__(self, "rankings", rankings)

    @property
    def n(self) -> int:
        return self.rankings.shape[0]

    @property
    def m(self) -> int:
        return self.rankings.shape[1]

    def first_positions(self) -> np.ndarray:
        return self.rankings[:, 0]


@dataclass(frozen=True)
class DistrictPartition:
    """Assignment of each voter to one of k non-empty districts."""

    k: int
    assignment: np.ndarray

    def __post_init__(self):
        assignment = _frozen_array(self.assignment, np.int64)
        if assignment.ndim != 1 or assignment.size < 1:
            raise DomainError("assignment must be a non-empty 1-d vector")
        if self.k < 1:
            raise DomainError("need at least one district")
        if assignment.min() < 0 or assignment.max() >= self.k:
            raise DomainError("district indices must lie in [0, k)")
        sizes = np.bincount(assignment, minlength=self.k)
        if np.any(sizes == 0):
            raise DomainError(f"district {int(np.argmin(sizes))} is empty")
        object.__setattr__(self, "assignment", assignment)

    @classmethod
    def from_blocks(cls, blocks, n: int | None = None) -> "DistrictPartition":
        """Build from explicit voter index lists, one list per district."""
        k = len(blocks)
        total = sum(len(b) for b in blocks)
        if n is None:
            n = total
        if total != n:
            raise DomainError("blocks must partition all voters")
        assignment = np.full(n, -1, dtype=np.int64)
        for d, block in enumerate(blocks):
            for v in block:
                if not 0 <= v < n:
                    raise DomainError(f"voter index {v} out of range for n={n}")
                if assignment[v] != -1:
                    raise DomainError(f"voter {v} assigned twice")
                assignment[v] = d
        return cls(k, assignment)

    @classmethod
    def from_sizes(cls, sizes) -> "DistrictPartition":
        """Contiguous blocks: the first sizes[0] voters form district 0, etc."""
        assignment = np.repeat(np.arange(len(sizes), dtype=np.int64), sizes)
        return cls(len(sizes), assignment)

    @classmethod
    def single(cls, n: int) -> "DistrictPartition":
        return cls(1, np.zeros(n, dtype=np.int64))

    @property
    def n(self) -> int:
        return self.assignment.size

    def sizes(self) -> np.ndarray:
        return np.bincount(self.assignment, minlength=self.k)

    def members(self, district: int) -> np.ndarray:
        return np.flatnonzero(self.assignment == district)


@dataclass(frozen=True)
class WeightVector:
    """Strictly positive district weights."""

    weights: np.ndarray

    def __post_init__(self):
        weights = _frozen_array(self.weights, np.float64)
        if weights.ndim != 1 or weights.size < 1:
            raise DomainError("weights must be a non-empty 1-d vector")
        if np.any(weights <= 0):
            raise DomainError("all district weights must be strictly positive")
        object.__setattr__(self, "weights", weights)

    @classmethod
    def uniform(cls, k: int) -> "WeightVector":
        return cls(np.ones(k))

    @property
    def k(self) -> int:
        return self.weights.size


def social_welfare(profile: ValuationProfile, alt: AlternativeId) -> float:
    """Total value the voters hold for ``alt``.

    Summed over all alternatives this recovers n, by the unit-sum rows.
    """
    if not 0 <= alt < profile.m:
        raise DomainError(f"alternative {alt} out of range for m={profile.m}")
    return float(profile.values[:, alt].sum())


def induce_ordinal(profile: ValuationProfile, tiebreak: TieBreakOrder) -> OrdinalProfile:
    """Rank alternatives per voter by value, descending; ties follow the order.

    Ordinal induction is deterministic data, never adversarial, so the
    tie-break must be in fixed mode.
    """
    if tiebreak.mode != FIXED:
        raise DomainError("ordinal induction requires a fixed tie-break")
    if tiebreak.m != profile.m:
        raise DomainError("tie-break order length must match the number of alternatives")
    pos = np.broadcast_to(tiebreak.positions(), profile.values.shape)
    # lexsort: last key is primary, so sort by -value then by tie-break position
    rankings = np.lexsort((pos, -profile.values), axis=-1)
    return OrdinalProfile(rankings)


def restrict(profile: ValuationProfile, partition: DistrictPartition, district: int) -> ValuationProfile:
    """Subprofile of the voters in ``district``, in original voter order."""
    if partition.n != profile.n:
        raise DomainError("partition and profile disagree on the number of voters")
    if not 0 <= district < partition.k:
        raise DomainError(f"district {district} out of range for k={partition.k}")
    return ValuationProfile(profile.values[partition.assignment == district])


def classify(partition: DistrictPartition, weights: WeightVector) -> str:
    """Most specific class of the district structure.

    symmetric (equal sizes, equal weights) < unweighted (equal weights)
    < unrestricted.  Weight equality is exact.
    """
    if weights.k != partition.k:
        raise DomainError("weights and partition disagree on the number of districts")
    w = weights.weights
    equal_weights = bool(np.all(w == w[0]))
    sizes = partition.sizes()
    equal_sizes = bool(np.all(sizes == sizes[0]))
    if equal_weights and equal_sizes:
        return SYMMETRIC
    if equal_weights:
        return UNWEIGHTED
    return UNRESTRICTED
