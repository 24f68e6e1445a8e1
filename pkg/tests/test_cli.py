from __future__ import annotations

import numpy as np
import pytest

from distvote import ValuationProfile
from distvote.cli import main
from distvote.fileio import write_partition_csv, write_profile_csv, write_weights_csv


@pytest.fixture
def example_files(tmp_path, example_profile, example_partition, example_weights):
    paths = {
        "profile": tmp_path / "p.csv",
        "partition": tmp_path / "d.csv",
        "weights": tmp_path / "w.csv",
    }
    write_profile_csv(paths["profile"], example_profile)
    write_partition_csv(paths["partition"], example_partition)
    write_weights_csv(paths["weights"], example_weights)
    return paths


def run_cli(*argv):
    return main([str(a) for a in argv])


class TestSimulate:
    def test_example_range_voting(self, example_files, capsys):
        code = run_cli(
            "simulate",
            "--profile", example_files["profile"],
            "--partition", example_files["partition"],
            "--weights", example_files["weights"],
            "--rule", "rv",
        )
        out = capsys.readouterr().out
        assert code == 0
        assert "seed: 0" in out
        assert "overall winner: alt_2" in out
        assert "distortion: 2.78571428571" in out

    def test_example_plurality_same_winner(self, example_files, capsys):
        code = run_cli(
            "simulate",
            "--profile", example_files["profile"],
            "--partition", example_files["partition"],
            "--weights", example_files["weights"],
            "--rule", "plurality",
        )
        assert code == 0
        assert "overall winner: alt_2" in capsys.readouterr().out

    def test_malformed_profile_exits_2(self, example_files, tmp_path, capsys):
        bad = tmp_path / "bad.csv"
        bad.write_text("voter,alt_0,alt_1,alt_2\n0,0.5,0.2,0.1\n")
        code = run_cli(
            "simulate",
            "--profile", bad,
            "--partition", example_files["partition"],
            "--weights", example_files["weights"],
            "--rule", "rv",
        )
        assert code == 2
        assert "unit-sum" in capsys.readouterr().err

    def test_unknown_rule_exits_1(self, example_files, capsys):
        code = run_cli(
            "simulate",
            "--profile", example_files["profile"],
            "--partition", example_files["partition"],
            "--weights", example_files["weights"],
            "--rule", "copeland",
        )
        assert code == 1

    def test_usage_error_exits_1(self):
        assert run_cli("simulate", "--nope") == 1

    def test_report_csv(self, example_files, tmp_path, capsys):
        report = tmp_path / "report.csv"
        code = run_cli(
            "simulate",
            "--profile", example_files["profile"],
            "--partition", example_files["partition"],
            "--weights", example_files["weights"],
            "--rule", "rv",
            "--report", report,
        )
        assert code == 0
        lines = report.read_text().splitlines()
        assert lines[0] == "alternative,social_welfare,weighted_approval,is_winner,is_optimal"
        assert len(lines) == 4


class TestBounds:
    def test_symmetric_row(self, capsys):
        assert run_cli("bounds", "--class", "symmetric", "--m", "3", "--k", "2") == 0
        out = capsys.readouterr().out.splitlines()
        assert out[-2] == "class,n,m,k,n_min,n_max,gamma,gamma_bound,rv_bound,pv_bound,ordinal_lower_bound"
        assert out[-1].startswith("symmetric,2,3,2,1,1,1,4,4,14.5,")

    def test_missing_sizes_exit_1(self):
        assert run_cli("bounds", "--class", "unweighted", "--m", "3", "--k", "2") == 1


class TestGenerateAndVerify:
    def test_generate_then_simulate_round_trip(self, tmp_path, capsys):
        prefix = tmp_path / "w"
        assert run_cli(
            "generate", "--theorem", "t3", "--class", "symmetric",
            "--m", "4", "--k", "2", "--sizes", "4,4", "--out", prefix,
        ) == 0
        out = capsys.readouterr().out
        assert "limit distortion: 25" in out
        tiebreak = next(line.split("tiebreak: ")[1] for line in out.splitlines() if "tiebreak: " in line)
        assert run_cli(
            "--tiebreak", tiebreak,
            "simulate",
            "--profile", f"{prefix}.profile.csv",
            "--partition", f"{prefix}.partition.csv",
            "--weights", f"{prefix}.weights.csv",
            "--rule", "plurality",
        ) == 0
        sim_out = capsys.readouterr().out
        assert "distortion: 25" in sim_out

    @pytest.mark.parametrize(
        "argv",
        [
            ("verify", "--theorem", "t2", "--class", "symmetric", "--m", "3", "--k", "2", "--sizes", "2,2"),
            ("verify", "--theorem", "t3", "--class", "unrestricted", "--m", "4", "--k", "2", "--sizes", "4,4"),
            ("verify", "--theorem", "t4", "--class", "unweighted", "--m", "4", "--k", "2", "--sizes", "4,4"),
            ("verify", "--theorem", "t5", "--k", "2", "--q", "2"),
            ("verify", "--theorem", "t6", "--numbers", "3,2,3,2", "--k", "2"),
            ("verify", "--theorem", "t6", "--numbers", "7,7,4,2", "--k", "2"),
            ("verify", "--theorem", "t8", "--cases", "25"),
            ("verify", "--theorem", "t8", "--counts", "4,2", "--k", "2"),
            ("verify", "--theorem", "t9", "--m", "4"),
        ],
    )
    def test_verify_passes(self, argv, capsys):
        assert run_cli(*argv) == 0
        assert capsys.readouterr().out.count("PASS") == 1

    def test_verify_failure_exits_3(self, capsys):
        # force a failing check by shrinking the tolerance below the
        # epsilon-induced gap of the t2 witness
        code = run_cli(
            "verify", "--theorem", "t2", "--class", "symmetric",
            "--m", "3", "--k", "2", "--sizes", "2,2", "--tol", "1e-12",
        )
        assert code == 3
        assert "FAIL" in capsys.readouterr().out

    def test_guard_exit_code(self, tmp_path, capsys):
        rng = np.random.default_rng(0)
        raw = rng.random((30, 3))
        profile = ValuationProfile(raw / raw.sum(axis=1, keepdims=True))
        path = tmp_path / "big.csv"
        write_profile_csv(path, profile)
        code = run_cli(
            "district", "--algo", "brute", "--profile", path,
            "--k", "5", "--rule", "rv", "--target", "0", "--out", tmp_path / "part.csv",
        )
        assert code == 4


class TestDistrict:
    def test_thm8_writes_partition(self, tmp_path, capsys):
        rng = np.random.default_rng(2)
        raw = rng.random((12, 3))
        raw[:6, 0] += 1.0  # a clear plurality favorite
        profile = ValuationProfile(raw / raw.sum(axis=1, keepdims=True))
        path = tmp_path / "p12.csv"
        write_profile_csv(path, profile)
        out = tmp_path / "part.csv"
        code = run_cli("district", "--algo", "thm8", "--profile", path, "--k", "3", "--out", out)
        assert code == 0
        assert out.exists()
        assert "districts_won=" in capsys.readouterr().out

    def test_bad_search_deterministic(self, tmp_path, example_files, capsys):
        out1, out2 = tmp_path / "a.csv", tmp_path / "b.csv"
        for out in (out1, out2):
            assert run_cli(
                "--seed", "9", "district", "--algo", "bad-search",
                "--profile", example_files["profile"], "--k", "7",
                "--rule", "rv", "--trials", "20", "--out", out,
            ) == 0
        assert out1.read_bytes() == out2.read_bytes()


class TestExperimentCli:
    def test_deterministic_csv(self, tmp_path, ratings_path, capsys):
        out1, out2 = tmp_path / "a.csv", tmp_path / "b.csv"
        for out in (out1, out2):
            assert run_cli(
                "--seed", "3", "experiment", "--ratings", ratings_path,
                "--m", "8", "--voters", "40", "--trials", "4",
                "--k", "1,2", "--mode", "random", "--rules", "rv,plurality",
                "--out", out,
            ) == 0
        assert out1.read_bytes() == out2.read_bytes()

    def test_missing_file_exits_2(self, tmp_path):
        code = run_cli(
            "experiment", "--ratings", tmp_path / "none.csv", "--out", tmp_path / "o.csv",
        )
        assert code == 2
