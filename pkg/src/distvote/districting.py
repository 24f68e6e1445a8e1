"""Choosing the partition: constructive, exhaustive, and randomized search.

Three ways to pick the districts instead of suffering a given one:

* :func:`plurality_districting` builds, in polynomial time, a balanced
  partition under which the single-pool plurality winner carries at
  least ceil(k/2) districts and therefore the election;
* :func:`brute_force_districting` enumerates every balanced partition
  (canonically, so each unordered partition appears once) and reports
  one electing a target alternative, if any exists;
* :func:`bad_partition_search` samples seeded random balanced
  partitions and keeps the most distortion-inducing one.

Randomness everywhere is numpy's ``default_rng`` (PCG64), which is
documented and stable across platforms, so results reproduce from the
seed alone.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .core import (
    DistrictPartition,
    TieBreakOrder,
    ValuationProfile,
    WeightVector,
    induce_ordinal,
)
from .engine import DistrictElection, run_and_measure, run_election
from .errors import DomainError, ResourceGuardError
from .rules import VotingRuleSpec, preset

#: Maximum number of balanced partitions brute force will enumerate.
PARTITION_GUARD = 10_000_000


@dataclass(frozen=True)
class TopChoiceProfile:
    """Only the voters' first choices, which is all plurality can see."""

    m: int
    top: np.ndarray

    def __post_init__(self):
        top = np.ascontiguousarray(self.top, dtype=np.int64)
        top.setflags(write=False)
        if top.ndim != 1 or top.size < 1:
            raise DomainError("tops must be a non-empty 1-d vector")
        if self.m < 2 or top.min() < 0 or top.max() >= self.m:
            raise DomainError("first choices must be alternatives in [0, m)")
        object.__setattr__(self, "top", top)

    @classmethod
    def from_profile(cls, profile: ValuationProfile, tiebreak: TieBreakOrder | None = None) -> "TopChoiceProfile":
        tiebreak = tiebreak or TieBreakOrder.identity(profile.m)
        tops = induce_ordinal(profile, tiebreak.as_fixed()).first_positions()
        return cls(profile.m, tops)

    @classmethod
    def from_counts(cls, counts) -> "TopChoiceProfile":
        counts = [int(c) for c in counts]
        top = np.repeat(np.arange(len(counts)), counts)
        return cls(len(counts), top)

    @property
    def n(self) -> int:
        return self.top.size

    def counts(self) -> np.ndarray:
        return np.bincount(self.top, minlength=self.m)

    def one_hot_profile(self) -> ValuationProfile:
        """Canonical valuations realizing these first choices."""
        values = np.zeros((self.n, self.m))
        values[np.arange(self.n), self.top] = 1.0
        return ValuationProfile(values)


@dataclass(frozen=True)
class DistrictingResult:
    """A constructed partition plus what it achieves.

    ``tiebreak`` is the order under which the result was verified; it
    must be used when re-running the election.
    """

    partition: DistrictPartition
    achieved_winner: int
    districts_won: int
    tiebreak: TieBreakOrder


def _partition_from_composition(by_alt: list[list[int]], comp: np.ndarray) -> DistrictPartition:
    """comp[d, j] voters of alternative j go to district d, in voter order."""
    k = comp.shape[0]
    cursors = [0] * len(by_alt)
    blocks: list[list[int]] = [[] for _ in range(k)]
    for d in range(k):
        for j, want in enumerate(comp[d]):
            take = int(want)
            blocks[d].extend(by_alt[j][cursors[j] : cursors[j] + take])
            cursors[j] += take
    return DistrictPartition.from_blocks(blocks)


def _verify_thm8(top: TopChoiceProfile, partition: DistrictPartition, winner: int,
                 tiebreak: TieBreakOrder) -> DistrictingResult | None:
    election = DistrictElection(
        profile=top.one_hot_profile(),
        partition=partition,
        weights=WeightVector.uniform(partition.k),
        rule=preset("plurality", top.m),
        tiebreak=tiebreak,
    )
    outcome = run_election(election)
    won = sum(1 for j in outcome.local_winners if j == winner)
    needed = -(-partition.k // 2)  # ceil(k/2)
    if outcome.winner == winner and won >= needed:
        return DistrictingResult(partition, winner, won, tiebreak)
    return None


def _even_composition(counts: np.ndarray, k: int, s: int, winner: int) -> np.ndarray:
    """Floor share everywhere; winner leftovers fill the front districts,
    rival leftovers round-robin from the back, capacity permitting.
    Total leftover mass always equals total free room, so placement
    cannot run out globally."""
    m = counts.size
    comp = np.tile(counts // k, (k, 1))
    room = s - comp.sum(axis=1)

    def place(j: int, order: list[int]) -> None:
        left = int(counts[j] % k)
        i = 0
        while left > 0:
            d = order[i % k]
            i += 1
            if room[d] > 0:
                comp[d, j] += 1
                room[d] -= 1
                left -= 1

    place(winner, list(range(k)))
    for j in sorted((j for j in range(m) if j != winner), key=lambda j: -counts[j]):
        place(j, list(range(k - 1, -1, -1)))
    return comp


def _concentrated_composition(counts: np.ndarray, k: int, s: int, winner: int) -> np.ndarray | None:
    """Pack the winner into the first ceil(k/2) districts and fill them with
    rivals capped at the winner's count; provably wins those districts
    (ties included) whenever n(winner) >= ceil(k/2) * ceil(s/m)."""
    m = counts.size
    h = -(-k // 2)
    packed = min(int(counts[winner]), h * s)
    base, extra = divmod(packed, h)
    if base < -(-s // m):
        return None
    c_w = [base + 1] * extra + [base] * (h - extra)
    comp = np.zeros((k, m), dtype=np.int64)
    remaining = counts.astype(np.int64).copy()
    for d in range(h):
        comp[d, winner] = c_w[d]
        remaining[winner] -= c_w[d]
        need = s - c_w[d]
        while need > 0:
            rivals = [j for j in range(m) if j != winner and remaining[j] > 0 and comp[d, j] < c_w[d]]
            if not rivals:
                return None
            j = max(rivals, key=lambda j: (remaining[j], -j))
            take = min(int(remaining[j]), c_w[d] - int(comp[d, j]), need)
            comp[d, j] += take
            remaining[j] -= take
            need -= take
    # back districts absorb whatever is left, in balanced chunks
    for d in range(h, k):
        need = s
        for j in range(m):
            take = min(int(remaining[j]), need)
            comp[d, j] += take
            remaining[j] -= take
            need -= take
    if remaining.any():
        return None
    return comp


def plurality_districting(top: TopChoiceProfile, k: int) -> DistrictingResult:
    """Balanced k-districting handing the election to the plurality winner.

    The winner of the single pool (lowest index among maximal counts) is
    guaranteed at least ceil(k/2) district wins.  District ties are
    resolved by a declared winner-first order, which does not change who
    the single-pool winner is; with a fully adversarial order the
    guarantee is unattainable on some inputs.  Runs in polynomial time:
    an even floor-share allocation with a leftover repair pass is tried
    first, then a winner-concentrated allocation, each checked by
    actually running the election.  Inputs where even the concentrated
    allocation cannot reach ceil(k/2) * ceil(s/m) winner votes are
    infeasible for every algorithm and rejected.
    """
    n = top.n
    if k < 2:
        raise DomainError("need k >= 2 districts")
    if n % k != 0:
        raise DomainError(f"n={n} must be divisible by k={k}")
    s = n // k
    counts = top.counts()
    winner = int(np.argmax(counts))
    tiebreak = TieBreakOrder.prefer([winner], top.m)
    by_alt = [list(np.flatnonzero(top.top == j)) for j in range(top.m)]

    comp = _even_composition(counts, k, s, winner)
    if comp.sum() == n and (comp.sum(axis=1) == s).all():
        result = _verify_thm8(top, _partition_from_composition(by_alt, comp), winner, tiebreak)
        if result is not None:
            return result

    comp = _concentrated_composition(counts, k, s, winner)
    if comp is not None:
        result = _verify_thm8(top, _partition_from_composition(by_alt, comp), winner, tiebreak)
        if result is not None:
            return result

    needed = -(-k // 2) * -(-s // top.m)
    if counts[winner] < needed:
        raise DomainError(
            f"no balanced {k}-districting can give the plurality winner ceil(k/2) districts: "
            f"a won district takes ceil(s/m)={-(-s // top.m)} first choices, so {needed} are "
            f"needed but only {counts[winner]} exist"
        )
    raise DomainError(
        f"failed to construct a winning {k}-districting for counts {list(counts)}; "
        "this input is outside the allocation's verified envelope"
    )


def count_symmetric_partitions(n: int, k: int) -> int:
    """Number of unordered partitions of n voters into k groups of n/k."""
    if n % k != 0:
        raise DomainError(f"n={n} must be divisible by k={k}")
    s = n // k
    return math.factorial(n) // (math.factorial(s) ** k * math.factorial(k))


def enumerate_symmetric_partitions(n: int, k: int) -> Iterator[DistrictPartition]:
    """All unordered balanced partitions, each exactly once.

    Canonical form: the lowest-index unassigned voter always joins the
    lowest-index district that is still empty (or any non-full district
    opened earlier), so permuting district labels never produces a
    duplicate.
    """
    if n % k != 0:
        raise DomainError(f"n={n} must be divisible by k={k}")
    s = n // k
    assignment = np.empty(n, dtype=np.int64)
    fill = [0] * k

    def rec(v: int) -> Iterator[DistrictPartition]:
        if v == n:
            yield DistrictPartition(k, assignment.copy())
            return
        opened = next((d for d in range(k) if fill[d] == 0), k)
        for d in range(min(opened + 1, k)):
            if fill[d] >= s:
                continue
            fill[d] += 1
            assignment[v] = d
            yield from rec(v + 1)
            fill[d] -= 1

    return rec(0)


def brute_force_districting(
    profile: ValuationProfile,
    k: int,
    rule: VotingRuleSpec,
    target: int,
    weights: WeightVector | None = None,
    tiebreak: TieBreakOrder | None = None,
    guard: int = PARTITION_GUARD,
) -> DistrictingResult | None:
    """Exhaustively search balanced partitions for one electing ``target``.

    Returns the first (in canonical enumeration order) partition whose
    district-based election elects ``target``, or None if none exists.
    Raises :class:`ResourceGuardError` when the enumeration would exceed
    ``guard`` partitions.
    """
    if not 0 <= target < profile.m:
        raise DomainError(f"alternative {target} out of range for m={profile.m}")
    total = count_symmetric_partitions(profile.n, k)
    if total > guard:
        raise ResourceGuardError(f"{total} partitions exceed the guard of {guard}")
    weights = weights or WeightVector.uniform(k)
    tiebreak = tiebreak or TieBreakOrder.identity(profile.m)
    for partition in enumerate_symmetric_partitions(profile.n, k):
        election = DistrictElection(profile, partition, weights, rule, tiebreak)
        outcome = run_election(election)
        if outcome.winner == target:
            won = sum(1 for j in outcome.local_winners if j == target)
            return DistrictingResult(partition, target, won, tiebreak)
    return None


def _draw_partition(sizes: list[int], rng: np.random.Generator) -> DistrictPartition:
    n = sum(sizes)
    assignment = np.empty(n, dtype=np.int64)
    assignment[rng.permutation(n)] = np.repeat(np.arange(len(sizes)), sizes)
    return DistrictPartition(len(sizes), assignment)


def random_partition(n: int, k: int, seed: int, sizes=None) -> DistrictPartition:
    """Uniformly random balanced assignment via a seeded shuffle.

    Passing explicit ``sizes`` switches to the unweighted mode with
    arbitrary district sizes.  Deterministic given the seed.
    """
    if sizes is None:
        if n % k != 0:
            raise DomainError(f"n={n} must be divisible by k={k}")
        sizes = [n // k] * k
    else:
        sizes = [int(s) for s in sizes]
        if len(sizes) != k or sum(sizes) != n or any(s < 1 for s in sizes):
            raise DomainError("sizes must be k positive integers summing to n")
    return _draw_partition(sizes, np.random.default_rng(seed))


def bad_partition_search(
    profile: ValuationProfile,
    k: int,
    rule: VotingRuleSpec,
    trials: int,
    seed: int,
    sizes=None,
) -> DistrictPartition:
    """The most distortion-inducing of ``trials`` seeded random partitions.

    Ties in measured distortion keep the earliest trial, so concurrent
    evaluation must reproduce this sequential argmax.
    """
    if trials < 1:
        raise DomainError("need at least one trial")
    if sizes is None:
        if profile.n % k != 0:
            raise DomainError(f"n={profile.n} must be divisible by k={k}")
        sizes = [profile.n // k] * k
    rng = np.random.default_rng(seed)
    weights = WeightVector.uniform(k)
    tiebreak = TieBreakOrder.identity(profile.m)
    best: DistrictPartition | None = None
    best_distortion = -math.inf
    for _ in range(trials):
        partition = _draw_partition(sizes, rng)
        _, report = run_and_measure(DistrictElection(profile, partition, weights, rule, tiebreak))
        if report.distortion > best_distortion:
            best, best_distortion = partition, report.distortion
    assert best is not None
    return best
