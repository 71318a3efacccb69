import json
import shutil
import subprocess
import sys

import pytest

from rtplab_plots.cli import main
from rtplab_plots.render import FigureSpec, SchemaError, discover_specs, read_trace, render


@pytest.fixture(scope="session")
def scenario_dirs(tmp_path_factory):
    """Shortened scenario A and D runs produced through the rtplab CLI."""
    base = tmp_path_factory.mktemp("scenarios")
    runs = [
        ("A", str(base / "A"), ["--duration", "20"]),
        ("D", str(base / "D"), ["--duration", "60"]),
    ]
    for scenario, out, extra in runs:
        cmd = [sys.executable, "-m", "rtplab.cli", "run", scenario,
               "--out", out, "--quiet", *extra]
        proc = subprocess.run(cmd, capture_output=True, text=True)
        assert proc.returncode == 0, proc.stderr
    return base / "A", base / "D"


class TestScenarioRendering:
    def test_scenario_a_produces_all_figures(self, scenario_dirs, tmp_path):
        a_dir, _ = scenario_dirs
        out = tmp_path / "figs_a"
        code = main(["render", "--scenario-dir", str(a_dir), "--out", str(out)])
        assert code == 0
        produced = sorted(p.name for p in out.glob("*.png"))
        assert produced == [
            "learn_phase.png", "reuse_phase.png", "trajectory_portrait.png"
        ]
        assert all((out / name).stat().st_size > 0 for name in produced)

    def test_scenario_d_includes_accumulation_curve(self, scenario_dirs, tmp_path):
        _, d_dir = scenario_dirs
        out = tmp_path / "figs_d"
        code = main(["render", "--scenario-dir", str(d_dir), "--out", str(out)])
        assert code == 0
        assert (out / "accumulation.png").exists()

    def test_every_figure_has_nonzero_series(self, scenario_dirs):
        a_dir, d_dir = scenario_dirs
        for directory in (a_dir, d_dir):
            for spec in discover_specs(directory):
                result = render(spec)
                assert result["series"] > 0
                assert result["points"] > 0

    def test_rendering_does_not_touch_inputs(self, scenario_dirs, tmp_path):
        a_dir, _ = scenario_dirs
        before = {p.name: p.read_bytes() for p in a_dir.glob("*.csv")}
        main(["render", "--scenario-dir", str(a_dir), "--out", str(tmp_path / "f")])
        after = {p.name: p.read_bytes() for p in a_dir.glob("*.csv")}
        assert before == after

    def test_rerender_is_deterministic(self, scenario_dirs, tmp_path):
        a_dir, _ = scenario_dirs
        out1, out2 = tmp_path / "r1", tmp_path / "r2"
        assert main(["render", "--scenario-dir", str(a_dir), "--out", str(out1)]) == 0
        assert main(["render", "--scenario-dir", str(a_dir), "--out", str(out2)]) == 0
        for png in sorted(out1.glob("*.png")):
            assert png.read_bytes() == (out2 / png.name).read_bytes()


class TestSpecFile:
    def test_single_figure_spec(self, scenario_dirs, tmp_path):
        a_dir, _ = scenario_dirs
        spec_file = tmp_path / "spec.json"
        spec_file.write_text(json.dumps({
            "kind": "portrait",
            "inputs": [str(a_dir / "learn_rtpl.csv")],
            "output": str(tmp_path / "portrait.png"),
        }))
        assert main(["render", "--spec", str(spec_file)]) == 0
        assert (tmp_path / "portrait.png").stat().st_size > 0

    def test_spec_list(self, scenario_dirs, tmp_path):
        a_dir, _ = scenario_dirs
        spec_file = tmp_path / "spec.json"
        spec_file.write_text(json.dumps([
            {
                "kind": "learning",
                "inputs": [str(a_dir / "learn_pd.csv"), str(a_dir / "learn_rtpl.csv")],
                "labels": ["pd", "rtpl"],
                "output": str(tmp_path / "learning.png"),
            },
            {
                "kind": "reuse",
                "inputs": [str(a_dir / "reuse_rtpl.csv")],
                "labels": ["rtpl"],
                "output": str(tmp_path / "reuse.png"),
            },
        ]))
        assert main(["render", "--spec", str(spec_file)]) == 0
        assert (tmp_path / "learning.png").exists()
        assert (tmp_path / "reuse.png").exists()

    def test_unknown_kind_rejected(self, tmp_path):
        spec_file = tmp_path / "spec.json"
        spec_file.write_text(json.dumps({
            "kind": "pie", "inputs": ["x.csv"], "output": "x.png",
        }))
        assert main(["render", "--spec", str(spec_file)]) == 2


class TestSchemaErrors:
    def test_column_mismatch_reported_per_column(self, scenario_dirs, tmp_path, capsys):
        a_dir, _ = scenario_dirs
        broken_dir = tmp_path / "broken"
        shutil.copytree(a_dir, broken_dir)
        victim = broken_dir / "learn_pd.csv"
        lines = victim.read_text().splitlines()
        lines[0] = lines[0].replace("e1", "err1").replace("w_norm", "wn")
        victim.write_text("\n".join(lines) + "\n")
        code = main(["render", "--scenario-dir", str(broken_dir),
                     "--out", str(tmp_path / "f")])
        assert code == 1
        err = capsys.readouterr().err
        assert "e1" in err and "w_norm" in err
        assert "learn_pd.csv" in err

    def test_empty_csv_is_explicit_error_without_image(self, tmp_path, capsys):
        empty = tmp_path / "empty.csv"
        empty.write_text("")
        spec = FigureSpec(
            kind="portrait", inputs=(str(empty),), labels=("x",),
            output=str(tmp_path / "out.png"),
        )
        with pytest.raises(SchemaError):
            render(spec)
        assert not (tmp_path / "out.png").exists()

    def test_header_only_csv_rejected(self, scenario_dirs, tmp_path):
        a_dir, _ = scenario_dirs
        header = (a_dir / "learn_pd.csv").read_text().splitlines()[0]
        stub = tmp_path / "stub.csv"
        stub.write_text(header + "\n")
        with pytest.raises(SchemaError) as err:
            read_trace(stub)
        assert "no data rows" in str(err.value)

    def test_missing_file_reported(self, tmp_path):
        spec = FigureSpec(
            kind="portrait", inputs=(str(tmp_path / "ghost.csv"),), labels=("x",),
            output=str(tmp_path / "out.png"),
        )
        with pytest.raises(SchemaError) as err:
            render(spec)
        assert "does not exist" in str(err.value)

    def test_empty_scenario_dir_rejected(self, tmp_path):
        with pytest.raises(SchemaError):
            discover_specs(tmp_path)
