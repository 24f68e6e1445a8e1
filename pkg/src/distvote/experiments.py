"""Ratings-driven simulation pipeline: ingest, rescale, sample, measure.

The pipeline mirrors a standard ratings-data methodology: keep the m
most-rated items, keep only voters who rated all of them, rescale each
voter's ratings to a non-negative unit-sum valuation, then repeatedly
sample a fixed-size electorate, partition it into k districts (randomly,
or keeping the worst of several random partitions), and record the
distortion of each configured rule.

Determinism contract: identical config, seed and input produce
byte-identical CSV output.  The voter sample of trial t is drawn from
``default_rng(seed + t)``; partition and weight draws for trial t at a
given k come from ``default_rng([seed + t, k])``, so random and bad
modes share the voter sample, the weights, and the first candidate
partition, and bad-mode distortion dominates random-mode distortion
trial by trial.  Aggregation uses compensated summation in trial order.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field

import numpy as np

from .core import TieBreakOrder, ValuationProfile, WeightVector
from .districting import _draw_partition
from .engine import DistrictElection, run_and_measure
from .errors import DataError, DomainError
from .rules import VotingRuleSpec

RANDOM_MODE = "random"
BAD_MODE = "bad"

RESULT_HEADER = "rule,k,mode,weighted,mean_distortion,stddev,trials"


@dataclass(frozen=True)
class RatingsTable:
    """Raw ratings with missing entries (NaN), bounded by [lo, hi]."""

    ratings: np.ndarray
    lo: float = -10.0
    hi: float = 10.0
    item_ids: tuple[str, ...] = ()

    def __post_init__(self):
        ratings = np.ascontiguousarray(self.ratings, dtype=np.float64)
        ratings.setflags(write=False)
        if ratings.ndim != 2:
            raise DataError("ratings must be a 2-d matrix")
        if not self.lo < self.hi:
            raise DataError("need lo < hi")
        present = ratings[~np.isnan(ratings)]
        if present.size and (present.min() < self.lo or present.max() > self.hi):
            raise DataError(f"ratings outside [{self.lo}, {self.hi}]")
        object.__setattr__(self, "ratings", ratings)
        if not self.item_ids:
            object.__setattr__(self, "item_ids", tuple(str(j) for j in range(ratings.shape[1])))

    @property
    def n_voters(self) -> int:
        return self.ratings.shape[0]

    @property
    def n_items(self) -> int:
        return self.ratings.shape[1]


def load_ratings_csv(path, lo: float = -10.0, hi: float = 10.0) -> RatingsTable:
    """Read a ratings CSV with header ``voter,<item ids...>``; blanks are missing."""
    rows = []
    with open(path, newline="") as f:
        reader = csv.reader(f)
        try:
            header = next(reader)
        except StopIteration:
            raise DataError(f"{path}: empty file") from None
        if not header or header[0] != "voter":
            raise DataError(f"{path}: first header column must be 'voter'")
        item_ids = tuple(header[1:])
        for lineno, row in enumerate(reader, start=2):
            if len(row) != len(header):
                raise DataError(f"{path}: row {lineno}: expected {len(header)} columns, got {len(row)}")
            try:
                rows.append([float(cell) if cell.strip() else math.nan for cell in row[1:]])
            except ValueError as exc:
                raise DataError(f"{path}: row {lineno}: {exc}") from None
    if not rows:
        raise DataError(f"{path}: no data rows")
    try:
        return RatingsTable(np.array(rows), lo, hi, item_ids)
    except DataError as exc:
        raise DataError(f"{path}: {exc}") from None


def ingest(table: RatingsTable, m: int) -> np.ndarray:
    """Candidate voter pool: the m most-rated columns, complete voters only.

    Column ties break toward the lower column index; selected columns
    keep their original relative order in the returned matrix.
    """
    if m < 2:
        raise DomainError("need m >= 2 alternatives")
    counts = np.sum(~np.isnan(table.ratings), axis=0)
    if np.count_nonzero(counts > 0) < m:
        raise DataError(f"only {np.count_nonzero(counts > 0)} rated columns, need {m}")
    ranked = np.lexsort((np.arange(counts.size), -counts))
    keep = np.sort(ranked[:m])
    pool = table.ratings[:, keep]
    complete = ~np.isnan(pool).any(axis=1)
    pool = pool[complete]
    if pool.shape[0] == 0:
        raise DataError("no voter rated all selected columns")
    return pool


def normalize_rows(rows: np.ndarray, lo: float, hi: float) -> np.ndarray:
    """Shift ratings by -lo and divide by the row total; all-lo rows become uniform."""
    rows = np.asarray(rows, dtype=np.float64)
    if rows.min() < lo or rows.max() > hi:
        raise DomainError(f"ratings outside [{lo}, {hi}]")
    shifted = rows - lo
    totals = shifted.sum(axis=-1, keepdims=True)
    m = rows.shape[-1]
    with np.errstate(invalid="ignore", divide="ignore"):
        out = np.where(totals > 0, shifted / np.where(totals > 0, totals, 1.0), 1.0 / m)
    return out


def normalize_row(row, lo: float, hi: float) -> np.ndarray:
    """Single-row convenience wrapper around :func:`normalize_rows`."""
    return normalize_rows(np.asarray(row, dtype=np.float64)[None, :], lo, hi)[0]


@dataclass(frozen=True)
class ExperimentConfig:
    """Everything a simulation run depends on, seed included."""

    m: int
    voters_per_trial: int
    trials: int
    k_values: tuple[int, ...]
    rules: tuple[VotingRuleSpec, ...]
    seed: int
    mode: str = RANDOM_MODE
    inner_trials: int = 100
    weighted: bool = False

    def __post_init__(self):
        object.__setattr__(self, "k_values", tuple(int(k) for k in self.k_values))
        object.__setattr__(self, "rules", tuple(self.rules))
        if self.trials < 1 or self.voters_per_trial < 1:
            raise DomainError("need at least one trial and one voter per trial")
        if self.mode not in (RANDOM_MODE, BAD_MODE):
            raise DomainError(f"unknown partition mode {self.mode!r}")
        if self.mode == BAD_MODE and self.inner_trials < 1:
            raise DomainError("bad mode needs at least one inner trial")
        if not self.k_values:
            raise DomainError("need at least one k")
        for k in self.k_values:
            if not 1 <= k <= self.voters_per_trial:
                raise DomainError(f"k={k} must lie in [1, voters_per_trial]")
        if not self.rules:
            raise DomainError("need at least one rule")


@dataclass(frozen=True)
class ResultRow:
    rule: str
    k: int
    mode: str
    weighted: bool
    mean_distortion: float
    stddev: float
    trials: int


@dataclass(frozen=True)
class ExperimentResult:
    rows: tuple[ResultRow, ...] = field(default_factory=tuple)


def run_experiment(pool: np.ndarray, config: ExperimentConfig) -> ExperimentResult:
    """Sampled district-election simulations over a normalized voter pool.

    ``pool`` must already be rescaled to unit-sum valuations (see
    :func:`normalize_rows`); rows are validated per trial.  Districts
    are as balanced as the electorate allows (sizes differ by at most
    one when k does not divide it).  Weighted mode draws integer
    district weights uniformly from [1, 10] per district per trial: a
    declared choice recorded in the output.
    """
    pool = np.asarray(pool, dtype=np.float64)
    if pool.ndim != 2 or pool.shape[1] != config.m:
        raise DataError(f"pool must be 2-d with m={config.m} columns")
    if pool.shape[0] < config.voters_per_trial:
        raise DataError(
            f"pool has {pool.shape[0]} complete voters, need {config.voters_per_trial} per trial"
        )
    tiebreak = TieBreakOrder.identity(config.m)
    n_inner = config.inner_trials if config.mode == BAD_MODE else 1
    samples: dict[tuple[int, int], list[float]] = {
        (r, k): [] for r in range(len(config.rules)) for k in config.k_values
    }

    for t in range(config.trials):
        sample_rng = np.random.default_rng(config.seed + t)
        voters = sample_rng.permutation(pool.shape[0])[: config.voters_per_trial]
        profile = ValuationProfile(pool[voters])
        for k in config.k_values:
            draw_rng = np.random.default_rng([config.seed + t, k])
            if config.weighted:
                weights = WeightVector(draw_rng.integers(1, 11, size=k).astype(np.float64))
            else:
                weights = WeightVector.uniform(k)
            # near-balanced district sizes; exactly balanced when k divides
            base, extra = divmod(config.voters_per_trial, k)
            sizes = [base + 1] * extra + [base] * (k - extra)
            best = [-math.inf] * len(config.rules)
            for _ in range(n_inner):
                partition = _draw_partition(sizes, draw_rng)
                for r, rule in enumerate(config.rules):
                    election = DistrictElection(profile, partition, weights, rule, tiebreak)
                    _, report = run_and_measure(election)
                    if report.distortion > best[r]:
                        best[r] = report.distortion
            for r in range(len(config.rules)):
                samples[(r, k)].append(best[r])

    rows = []
    for r, rule in enumerate(config.rules):
        for k in sorted(config.k_values):
            values = samples[(r, k)]
            mean = math.fsum(values) / len(values)
            var = math.fsum((x - mean) ** 2 for x in values) / len(values)
            rows.append(
                ResultRow(rule.name, k, config.mode, config.weighted, mean, math.sqrt(var), len(values))
            )
    return ExperimentResult(tuple(rows))


def emit_csv(result: ExperimentResult, path) -> None:
    """Write rows as ``rule,k,mode,weighted,mean_distortion,stddev,trials``.

    Ordering is bit-stable (rule order as configured, k ascending) and
    floats carry 12 significant digits so a round-trip parse recovers
    them.
    """
    if not result.rows:
        raise DomainError("refusing to write an empty result")
    with open(path, "w", newline="\n") as f:
        f.write(RESULT_HEADER + "\n")
        for row in result.rows:
            f.write(
                f"{row.rule},{row.k},{row.mode},{str(row.weighted).lower()},"
                f"{row.mean_distortion:.12g},{row.stddev:.12g},{row.trials}\n"
            )
