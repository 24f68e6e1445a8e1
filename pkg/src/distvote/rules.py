"""Deterministic voting rules over valuation (sub)profiles.

Two families are supported: range voting (elects a social-welfare
argmax from the cardinal values) and positional scoring rules (each
voter awards ``scores[p]`` points to the alternative she ranks at
position ``p``; the highest total wins).  Score totals accumulate in
double precision and ties are detected after rounding totals to 12
decimal digits, which keeps accumulated error well below tie
significance for the intended scales (m <= 64, n <= 1e6).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import (
    FIXED,
    AlternativeId,
    TieBreakOrder,
    ValuationProfile,
    induce_ordinal,
)
from .errors import DomainError

RANGE_VOTING = "range-voting"
POSITIONAL = "positional"

#: Decimal digits kept when comparing score totals for ties.
SCORE_DECIMALS = 12

PRESET_NAMES = ("plurality", "borda", "harmonic")


@dataclass(frozen=True)
class VotingRuleSpec:
    """A voting rule: range voting, or a positional rule given by its scores.

    Positional score vectors must be non-increasing, non-negative and
    not all equal.  ``name`` is the CLI spelling of the rule.
    """

    kind: str
    scores: tuple[float, ...] | None = None
    name: str = ""

    def __post_init__(self):
        if self.kind == RANGE_VOTING:
            if self.scores is not None:
                raise DomainError("range voting takes no score vector")
            if not self.name:
                object.__setattr__(self, "name", "rv")
            return
        if self.kind != POSITIONAL:
            raise DomainError(f"unknown rule kind {self.kind!r}")
        if not self.scores or len(self.scores) < 2:
            raise DomainError("positional rules need a score vector of length >= 2")
        scores = tuple(float(s) for s in self.scores)
        if any(s < 0 for s in scores):
            raise DomainError("positional scores must be non-negative")
        if any(a < b for a, b in zip(scores, scores[1:])):
            raise DomainError("positional scores must be non-increasing")
        if scores[0] == scores[-1]:
            raise DomainError("positional scores must not be all equal")
        object.__setattr__(self, "scores", scores)
        if not self.name:
            object.__setattr__(self, "name", "scores:" + ",".join(f"{s:g}" for s in scores))

    @classmethod
    def range_voting(cls) -> "VotingRuleSpec":
        return cls(RANGE_VOTING, name="rv")

    @property
    def is_positional(self) -> bool:
        return self.kind == POSITIONAL

    @property
    def m(self) -> int | None:
        return None if self.scores is None else len(self.scores)


def preset(name: str, m: int) -> VotingRuleSpec:
    """Positional presets: plurality (1,0,...), borda (m-1,...,0), harmonic (1,1/2,...,1/m)."""
    if m < 2:
        raise DomainError(f"presets need m >= 2 alternatives, got {m}")
    if name == "plurality":
        scores = (1.0,) + (0.0,) * (m - 1)
    elif name == "borda":
        scores = tuple(float(m - 1 - p) for p in range(m))
    elif name == "harmonic":
        scores = tuple(1.0 / (p + 1) for p in range(m))
    else:
        raise DomainError(f"unknown preset {name!r}")
    return VotingRuleSpec(POSITIONAL, scores, name=name)


def parse_rule(text: str, m: int) -> VotingRuleSpec:
    """Parse the CLI rule spelling: rv | plurality | borda | harmonic | scores:<s0>,<s1>,..."""
    text = text.strip()
    if text == "rv":
        return VotingRuleSpec.range_voting()
    if text in PRESET_NAMES:
        return preset(text, m)
    if text.startswith("scores:"):
        try:
            scores = tuple(float(s) for s in text[len("scores:"):].split(","))
        except ValueError as exc:
            raise DomainError(f"cannot parse score vector in {text!r}") from exc
        if len(scores) != m:
            raise DomainError(f"score vector has length {len(scores)}, expected m={m}")
        return VotingRuleSpec(POSITIONAL, scores)
    raise DomainError(f"unknown rule {text!r}")


def rule_scores(rule: VotingRuleSpec, profile: ValuationProfile, tiebreak: TieBreakOrder) -> np.ndarray:
    """Raw per-alternative totals the rule maximizes (welfare or points)."""
    if rule.kind == RANGE_VOTING:
        return profile.welfare_vector()
    scores = np.asarray(rule.scores, dtype=np.float64)
    if scores.size != profile.m:
        raise DomainError(f"score vector length {scores.size} != m={profile.m}")
    rankings = induce_ordinal(profile, tiebreak.as_fixed()).rankings
    totals = np.zeros(profile.m)
    np.add.at(totals, rankings, np.broadcast_to(scores, rankings.shape))
    return totals


def tied_argmax(scores: np.ndarray, decimals: int = SCORE_DECIMALS) -> np.ndarray:
    """Indices achieving the maximum after rounding to ``decimals`` digits."""
    rounded = np.round(scores, decimals)
    return np.flatnonzero(rounded == rounded.max())


def resolve_tie(
    tied: np.ndarray, tiebreak: TieBreakOrder, welfare: np.ndarray | None = None
) -> AlternativeId:
    """Pick one alternative from a tied set according to the tie-break.

    Fixed mode picks the earliest in the order.  Adversarial mode picks
    the minimum of ``welfare`` over the tied set (order as fallback).
    """
    tied = np.asarray(tied, dtype=np.int64)
    pos = tiebreak.positions()
    if tiebreak.mode == FIXED or welfare is None:
        return int(tied[np.argmin(pos[tied])])
    tied_welfare = np.round(welfare[tied], SCORE_DECIMALS)
    worst = tied[tied_welfare == tied_welfare.min()]
    return int(worst[np.argmin(pos[worst])])


def apply_rule(rule: VotingRuleSpec, profile: ValuationProfile, tiebreak: TieBreakOrder) -> AlternativeId:
    """Winning alternative of ``rule`` on ``profile`` under ``tiebreak``."""
    if tiebreak.m != profile.m:
        raise DomainError("tie-break order length must match the number of alternatives")
    totals = rule_scores(rule, profile, tiebreak)
    tied = tied_argmax(totals)
    return resolve_tie(tied, tiebreak, profile.welfare_vector())


def respects_pareto(profile: ValuationProfile, winner: AlternativeId) -> bool:
    """True iff no alternative strictly dominates ``winner`` in every valuation.

    A checker used by tests and verification, not a rule transformer.
    """
    if not 0 <= winner < profile.m:
        raise DomainError(f"alternative {winner} out of range for m={profile.m}")
    values = profile.values
    dominated = np.all(values > values[:, [winner]], axis=0)
    return not bool(dominated.any())
