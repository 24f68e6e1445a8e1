"""CSV readers and writers for profiles, partitions, and weights.

Formats (all 0-based indices):

* profile:   header ``voter,<alt_0>,...,<alt_{m-1}>``, one row per voter,
  entries as decimal reals;
* partition: header ``voter,district``;
* weights:   header ``district,weight``.

Readers surface malformed content as :class:`DataError` naming the file
and row; writers emit floats via ``repr`` so values round-trip exactly.
"""

from __future__ import annotations

import csv

import numpy as np

from .core import DistrictPartition, ValuationProfile, WeightVector
from .errors import DataError, DistVoteError


def _read_rows(path) -> tuple[list[str], list[tuple[int, list[str]]]]:
    with open(path, newline="") as f:
        reader = csv.reader(f)
        try:
            header = next(reader)
        except StopIteration:
            raise DataError(f"{path}: empty file") from None
        rows = [(lineno, row) for lineno, row in enumerate(reader, start=2) if row]
    if not rows:
        raise DataError(f"{path}: no data rows")
    return header, rows


def read_profile_csv(path) -> ValuationProfile:
    header, rows = _read_rows(path)
    if not header or header[0] != "voter":
        raise DataError(f"{path}: first header column must be 'voter'")
    m = len(header) - 1
    values = np.empty((len(rows), m))
    for i, (lineno, row) in enumerate(rows):
        if len(row) != m + 1:
            raise DataError(f"{path}: row {lineno}: expected {m + 1} columns, got {len(row)}")
        if row[0] != str(i):
            raise DataError(f"{path}: row {lineno}: voters must be listed in order 0..n-1")
        try:
            values[i] = [float(cell) for cell in row[1:]]
        except ValueError as exc:
            raise DataError(f"{path}: row {lineno}: {exc}") from None
    try:
        return ValuationProfile(values)
    except DistVoteError as exc:
        raise DataError(f"{path}: {exc}") from None


def write_profile_csv(path, profile: ValuationProfile, alt_names=None) -> None:
    names = alt_names or [f"alt_{j}" for j in range(profile.m)]
    with open(path, "w", newline="\n") as f:
        f.write("voter," + ",".join(names) + "\n")
        for i, row in enumerate(profile.values):
            f.write(f"{i}," + ",".join(repr(float(v)) for v in row) + "\n")


def read_partition_csv(path) -> DistrictPartition:
    header, rows = _read_rows(path)
    if header[:2] != ["voter", "district"]:
        raise DataError(f"{path}: header must be 'voter,district'")
    assignment = np.empty(len(rows), dtype=np.int64)
    for i, (lineno, row) in enumerate(rows):
        if len(row) != 2 or row[0] != str(i):
            raise DataError(f"{path}: row {lineno}: voters must be listed in order 0..n-1")
        try:
            assignment[i] = int(row[1])
        except ValueError as exc:
            raise DataError(f"{path}: row {lineno}: {exc}") from None
    try:
        return DistrictPartition(int(assignment.max()) + 1, assignment)
    except DistVoteError as exc:
        raise DataError(f"{path}: {exc}") from None


def write_partition_csv(path, partition: DistrictPartition) -> None:
    with open(path, "w", newline="\n") as f:
        f.write("voter,district\n")
        for i, d in enumerate(partition.assignment):
            f.write(f"{i},{int(d)}\n")


def read_weights_csv(path) -> WeightVector:
    header, rows = _read_rows(path)
    if header[:2] != ["district", "weight"]:
        raise DataError(f"{path}: header must be 'district,weight'")
    weights = np.empty(len(rows))
    for i, (lineno, row) in enumerate(rows):
        if len(row) != 2 or row[0] != str(i):
            raise DataError(f"{path}: row {lineno}: districts must be listed in order 0..k-1")
        try:
            weights[i] = float(row[1])
        except ValueError as exc:
            raise DataError(f"{path}: row {lineno}: {exc}") from None
    try:
        return WeightVector(weights)
    except DistVoteError as exc:
        raise DataError(f"{path}: {exc}") from None


def write_weights_csv(path, weights: WeightVector) -> None:
    with open(path, "w", newline="\n") as f:
        f.write("district,weight\n")
        for d, w in enumerate(weights.weights):
            f.write(f"{d},{repr(float(w))}\n")
