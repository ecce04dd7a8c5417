"""CLI dispatch, exit codes, output files, and manifests."""

from __future__ import annotations

import json
import re

import pytest

from automode.cli import dispatch
from automode.fixtures import materialize_small

from conftest import MANUAL_BIAS_TEXT


@pytest.fixture
def fixture_dir(tmp_path):
    paths = materialize_small(tmp_path / "data")
    return paths


def _data_args(paths, with_examples=True):
    args = ["--schema", str(paths["schema"]), "--facts", str(paths["facts"])]
    if with_examples:
        args += ["--examples", str(paths["examples"]), "--target", "advisedBy"]
    return args


class TestExitCodes:
    def test_missing_required_flag_is_usage_error(self, fixture_dir, tmp_path):
        rc = dispatch(["learn", "--schema", str(fixture_dir["schema"])])
        assert rc == 2

    def test_unknown_flag_is_usage_error(self, fixture_dir):
        rc = dispatch(["discover-inds", *_data_args(fixture_dir, False), "--bogus"])
        assert rc == 2

    def test_threshold_zero_is_validation_error(self, fixture_dir, tmp_path, capsys):
        rc = dispatch(
            [
                "induce-bias",
                *_data_args(fixture_dir),
                "--constant-threshold",
                "0",
                "--out",
                str(tmp_path / "bias.txt"),
            ]
        )
        assert rc == 1
        assert "threshold must be >= 1" in capsys.readouterr().err

    def test_missing_input_file_is_validation_error(self, tmp_path):
        rc = dispatch(
            [
                "discover-inds",
                "--schema",
                str(tmp_path / "nope.txt"),
                "--facts",
                str(tmp_path),
            ]
        )
        assert rc == 1


class TestDiscoverInds:
    def test_writes_sorted_lines_and_manifest(self, fixture_dir, tmp_path):
        out = tmp_path / "inds.txt"
        rc = dispatch(
            [
                "discover-inds",
                *_data_args(fixture_dir),
                "--alpha",
                "0.5",
                "--out",
                str(out),
            ]
        )
        assert rc == 0
        lines = out.read_text().splitlines()
        assert lines == sorted(lines)
        assert all(
            re.match(r"^\w+\[\w+\] <= \w+\[\w+\] err=\d\.\d{6}$", l) for l in lines
        )
        manifest = json.loads((tmp_path / "inds.txt.manifest.json").read_text())
        assert manifest["command"] == "discover-inds"
        assert manifest["config"]["alpha"] == 0.5
        assert manifest["inputs"]

    def test_stdout_when_no_out(self, fixture_dir, capsys):
        # --target alone marks the relation as examples-backed
        rc = dispatch(
            ["discover-inds", *_data_args(fixture_dir, False), "--target", "advisedBy"]
        )
        assert rc == 0
        assert "<=" in capsys.readouterr().out


class TestInduceBias:
    def test_bias_file_round_trips_through_learn(self, fixture_dir, tmp_path):
        bias_file = tmp_path / "bias.txt"
        rc = dispatch(
            ["induce-bias", *_data_args(fixture_dir), "--out", str(bias_file)]
        )
        assert rc == 0
        text = bias_file.read_text()
        assert text.startswith("PREDICATES:")
        assert "MODES:\nadvisedBy(+,+)" in text

    def test_byte_identical_reruns(self, fixture_dir, tmp_path):
        outs = []
        for name in ("a.txt", "b.txt"):
            out = tmp_path / name
            assert dispatch(
                ["induce-bias", *_data_args(fixture_dir), "--out", str(out)]
            ) == 0
            outs.append(out.read_bytes())
        assert outs[0] == outs[1]


class TestLearn:
    def test_learn_with_induced_bias(self, fixture_dir, tmp_path):
        bias_file = tmp_path / "bias.txt"
        assert dispatch(
            ["induce-bias", *_data_args(fixture_dir), "--out", str(bias_file)]
        ) == 0
        model = tmp_path / "model.dl"
        rc = dispatch(
            [
                "learn",
                *_data_args(fixture_dir),
                "--bias",
                str(bias_file),
                "--out",
                str(model),
            ]
        )
        assert rc == 0
        text = model.read_text()
        assert "advisedBy(" in text
        assert "# train_precision=1.000000" in text
        assert "# train_recall=1.000000" in text
        assert re.search(r"# wall_ms=\d+", text)

    def test_learn_accepts_hand_written_bias(self, fixture_dir, tmp_path):
        bias_file = tmp_path / "manual.txt"
        bias_file.write_text(MANUAL_BIAS_TEXT)
        model = tmp_path / "model.dl"
        rc = dispatch(
            [
                "learn",
                *_data_args(fixture_dir),
                "--bias",
                str(bias_file),
                "--out",
                str(model),
            ]
        )
        assert rc == 0
        assert "# train_precision=1.000000" in model.read_text()

    def test_learn_target_defaults_from_bias(self, fixture_dir, tmp_path):
        bias_file = tmp_path / "manual.txt"
        bias_file.write_text(MANUAL_BIAS_TEXT)
        model = tmp_path / "model.dl"
        rc = dispatch(
            [
                "learn",
                "--schema",
                str(fixture_dir["schema"]),
                "--facts",
                str(fixture_dir["facts"]),
                "--examples",
                str(fixture_dir["examples"]),
                "--bias",
                str(bias_file),
                "--out",
                str(model),
            ]
        )
        assert rc == 0

    def test_lgg_generalizer_warns_about_modes(self, fixture_dir, tmp_path, capsys):
        bias_file = tmp_path / "bias.txt"
        assert dispatch(
            ["induce-bias", *_data_args(fixture_dir), "--out", str(bias_file)]
        ) == 0
        model = tmp_path / "model.dl"
        rc = dispatch(
            [
                "learn",
                *_data_args(fixture_dir),
                "--bias",
                str(bias_file),
                "--generalizer",
                "lgg",
                "--predicates-only",
                "--out",
                str(model),
            ]
        )
        assert rc == 0
        assert "ignored" in capsys.readouterr().err

    def test_models_identical_modulo_wall_time(self, fixture_dir, tmp_path):
        bias_file = tmp_path / "bias.txt"
        assert dispatch(
            ["induce-bias", *_data_args(fixture_dir), "--out", str(bias_file)]
        ) == 0
        texts = []
        for name in ("m1.dl", "m2.dl"):
            out = tmp_path / name
            assert dispatch(
                [
                    "learn",
                    *_data_args(fixture_dir),
                    "--bias",
                    str(bias_file),
                    "--out",
                    str(out),
                ]
            ) == 0
            texts.append(
                [l for l in out.read_text().splitlines() if not l.startswith("# wall_ms")]
            )
        assert texts[0] == texts[1]


class TestEvaluate:
    def test_report_shape_and_determinism(self, fixture_dir, tmp_path):
        reports = []
        for name in ("r1.json", "r2.json"):
            out = tmp_path / name
            rc = dispatch(
                [
                    "evaluate",
                    *_data_args(fixture_dir),
                    "--folds",
                    "2",
                    "--seed",
                    "1",
                    "--neg-ratio",
                    "2",
                    "--report",
                    str(out),
                ]
            )
            assert rc == 0
            reports.append(json.loads(out.read_text()))
        for report in reports:
            assert report["folds"] == 2
            assert len(report["per_fold"]) == 2
        assert _strip_wall(reports[0]) == _strip_wall(reports[1])

    def test_induces_bias_when_not_given(self, fixture_dir, tmp_path, capsys):
        out = tmp_path / "r.json"
        rc = dispatch(
            ["evaluate", *_data_args(fixture_dir), "--folds", "2", "--report", str(out)]
        )
        assert rc == 0
        assert "bias induction" in capsys.readouterr().err


class TestDemo:
    def test_demo_prints_model_and_writes_artifacts(self, tmp_path, capsys):
        out_dir = tmp_path / "demo"
        rc = dispatch(["demo", "--out-dir", str(out_dir)])
        assert rc == 0
        output = capsys.readouterr().out
        assert "learned definition:" in output
        assert "publication(" in output
        for artifact in ("schema.txt", "examples.txt", "bias.txt", "model.dl"):
            assert (out_dir / artifact).exists()
        assert (out_dir / "model.dl.manifest.json").exists()


def _strip_wall(report: dict) -> dict:
    out = dict(report)
    out.pop("mean_wall_ms")
    out["per_fold"] = [
        {k: v for k, v in fold.items() if k != "wall_ms"} for fold in report["per_fold"]
    ]
    return out
