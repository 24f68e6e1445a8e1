from __future__ import annotations

import numpy as np
import pytest

from distvote import DataError
from distvote.fileio import (
    read_partition_csv,
    read_profile_csv,
    read_weights_csv,
    write_partition_csv,
    write_profile_csv,
    write_weights_csv,
)


class TestProfileRoundTrip:
    def test_values_survive_exactly(self, example_profile, tmp_path):
        path = tmp_path / "p.csv"
        write_profile_csv(path, example_profile)
        back = read_profile_csv(path)
        assert np.array_equal(back.values, example_profile.values)

    def test_unit_sum_violation_names_file_and_cites_invariant(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("voter,alt_0,alt_1\n0,0.5,0.3\n")
        with pytest.raises(DataError, match="unit-sum") as err:
            read_profile_csv(path)
        assert "bad.csv" in str(err.value)

    def test_non_numeric_cell_names_row(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("voter,alt_0,alt_1\n0,0.5,0.5\n1,oops,0.5\n")
        with pytest.raises(DataError, match="row 3"):
            read_profile_csv(path)

    def test_out_of_order_voters_rejected(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("voter,alt_0,alt_1\n1,0.5,0.5\n0,0.5,0.5\n")
        with pytest.raises(DataError, match="order"):
            read_profile_csv(path)


class TestPartitionRoundTrip:
    def test_round_trip(self, example_partition, tmp_path):
        path = tmp_path / "d.csv"
        write_partition_csv(path, example_partition)
        back = read_partition_csv(path)
        assert back.k == example_partition.k
        assert np.array_equal(back.assignment, example_partition.assignment)

    def test_empty_district_reported(self, tmp_path):
        path = tmp_path / "d.csv"
        path.write_text("voter,district\n0,0\n1,2\n")
        with pytest.raises(DataError, match="empty"):
            read_partition_csv(path)


class TestWeightsRoundTrip:
    def test_round_trip(self, example_weights, tmp_path):
        path = tmp_path / "w.csv"
        write_weights_csv(path, example_weights)
        back = read_weights_csv(path)
        assert np.array_equal(back.weights, example_weights.weights)

    def test_non_positive_weight_reported(self, tmp_path):
        path = tmp_path / "w.csv"
        path.write_text("district,weight\n0,1.0\n1,0\n")
        with pytest.raises(DataError, match="positive"):
            read_weights_csv(path)

    def test_empty_file(self, tmp_path):
        path = tmp_path / "w.csv"
        path.write_text("")
        with pytest.raises(DataError, match="empty"):
            read_weights_csv(path)
