"""The command line surface: catalog, validate-ranges, eval, run."""

import csv
import io
import json

import numpy as np
import pytest

from gensanity import MetricConfig, compute_all
from gensanity.checks import build_catalog, catalog_json, load_catalog_json
from gensanity.cli import main
from gensanity.data import CATEGORICAL, NUMERICAL, Column, Dataset, save_dataset
from gensanity.embed import embed_pair


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestCatalogCommand:
    def test_prints_parseable_catalog(self, capsys):
        code, out, err = run_cli(capsys, "catalog", "--grid", "5")
        assert code == 0 and err == ""
        loaded = load_catalog_json(out)
        assert loaded == build_catalog(grid=5)
        assert catalog_json(loaded) == out.rstrip("\n")

    def test_bad_grid_reports_error(self, capsys):
        code, out, err = run_cli(capsys, "catalog", "--grid", "4")
        assert code == 2
        assert err.startswith("error: grid must be an odd integer")


class TestValidateRanges:
    def test_bounds_table(self, capsys):
        code, out, err = run_cli(capsys, "validate-ranges")
        assert code == 0 and err == ""
        rows = list(csv.DictReader(io.StringIO(out)))
        assert len(rows) == 6 * 13
        assert set(r["check"] for r in rows) == {
            "gaussian_mean_difference", "gaussian_std_difference",
        }
        assert {r["dim"] for r in rows} == {"1", "8", "64"}
        for r in rows:
            h2 = float(r["hellinger_sq"])
            lo, hi = float(r["tv_lower"]), float(r["tv_upper"])
            assert 0.0 <= h2 <= 1.0
            assert 0.0 <= lo <= hi <= 1.0

    def test_extremes_are_separated_and_centers_identical(self, capsys):
        _, out, _ = run_cli(capsys, "validate-ranges")
        rows = list(csv.DictReader(io.StringIO(out)))
        by_key = {}
        for r in rows:
            by_key.setdefault((r["check"], r["dim"]), []).append(r)
        for series in by_key.values():
            assert float(series[0]["tv_lower"]) >= 0.95
            assert float(series[-1]["tv_lower"]) >= 0.95
            assert float(series[6]["hellinger_sq"]) == pytest.approx(0.0, abs=1e-12)


class TestEvalCommand:
    def make_pair(self, tmp_path, rng, n=150, shift=0.3):
        cols = (
            Column("amount", NUMERICAL),
            Column("group", CATEGORICAL, categories=3),
        )
        real = Dataset(cols, np.column_stack([
            rng.normal(size=n),
            rng.integers(0, 3, size=n).astype(float),
        ]))
        syn = Dataset(cols, np.column_stack([
            rng.normal(loc=shift, size=n),
            rng.integers(0, 3, size=n).astype(float),
        ]))
        save_dataset(real, tmp_path / "real.csv", tmp_path / "schema.json")
        save_dataset(syn, tmp_path / "syn.csv", tmp_path / "syn_schema.json")
        return real, syn

    def test_matches_library_exactly(self, capsys, tmp_path, rng):
        real, syn = self.make_pair(tmp_path, rng)
        code, out, err = run_cli(
            capsys, "eval",
            "--real", str(tmp_path / "real.csv"),
            "--synthetic", str(tmp_path / "syn.csv"),
            "--schema", str(tmp_path / "schema.json"),
        )
        assert code == 0, err
        got = json.loads(out)
        emb_real, emb_syn = embed_pair(real, syn)
        want = compute_all(emb_real, emb_syn, MetricConfig())
        assert list(got) == list(want)
        for m, v in want.items():
            assert got[m] == v, m

    def test_header_schema_mismatch_reports_error(self, capsys, tmp_path, rng):
        self.make_pair(tmp_path, rng)
        (tmp_path / "other_schema.json").write_text(
            json.dumps({"columns": [{"name": "wrong", "kind": "numerical"}]}) + "\n"
        )
        code, _, err = run_cli(
            capsys, "eval",
            "--real", str(tmp_path / "real.csv"),
            "--synthetic", str(tmp_path / "syn.csv"),
            "--schema", str(tmp_path / "other_schema.json"),
        )
        assert code == 2
        assert "does not match schema" in err

    def test_missing_file_reports_error(self, capsys, tmp_path, rng):
        self.make_pair(tmp_path, rng)
        code, _, err = run_cli(
            capsys, "eval",
            "--real", str(tmp_path / "absent.csv"),
            "--synthetic", str(tmp_path / "syn.csv"),
            "--schema", str(tmp_path / "schema.json"),
        )
        assert code == 2
        assert err.startswith("error:")


class TestRunCommand:
    def test_end_to_end_export(self, capsys, tmp_path):
        out_dir = tmp_path / "suite"
        code, out, err = run_cli(
            capsys, "run",
            "--seed", "4", "--repeats", "1",
            "--checks", "gaussian_mean_difference",
            "--metrics", "iprec,irec",
            "--base-size", "120", "--grid", "3",
            "--out", str(out_dir),
        )
        assert code == 0, err
        assert "checks: 1" in out and "errored: 0" in out
        for name in ("results.json", "table_fidelity.md", "table_diversity.md",
                     "curves_gaussian_mean_difference.csv", "provenance.json"):
            assert (out_dir / name).exists(), name
        bundle = json.loads((out_dir / "results.json").read_text())
        assert bundle["config"]["seed"] == 4
        assert bundle["config"]["metrics"] == ["iprec", "irec"]

    def test_unknown_check_exits_2(self, capsys, tmp_path):
        code, _, err = run_cli(
            capsys, "run", "--checks", "not_a_check",
            "--out", str(tmp_path / "x"),
        )
        assert code == 2
        assert "unknown checks" in err

    def test_unknown_metric_exits_2(self, capsys, tmp_path):
        code, _, err = run_cli(
            capsys, "run", "--metrics", "bleu",
            "--out", str(tmp_path / "x"),
        )
        assert code == 2
        assert "unknown metrics" in err

    def test_argparse_rejects_unknown_subcommand(self, capsys):
        with pytest.raises(SystemExit) as info:
            main(["frobnicate"])
        assert info.value.code == 2
