import csv
import json
import math
from pathlib import Path

import numpy as np
import pytest
from click.testing import CliRunner

from ecsim import cli as cli_module
from ecsim.catfidelity import fidelity_analytic
from ecsim.cli import cli, fig1_configs, fig2_config
from ecsim.config import load_config
from ecsim.reports import conditioned_state, format_float, wigner_for_config
from ecsim.phasespace import wigner_of_fock_vector

CONFIGS = Path(__file__).resolve().parent.parent / "configs"


def run(*args):
    result = CliRunner().invoke(cli, [str(a) for a in args], catch_exceptions=False)
    return result


def read_csv(path):
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    return rows[0], np.array([[float(x) for x in r] for r in rows[1:]])


def complex_of(value):
    return complex(value["re"], value["im"]) if isinstance(value, dict) else complex(value)


class TestProject:
    @pytest.mark.filterwarnings("ignore::ecsim.fockspace.TruncationWarning")
    def test_shg_demo_tuples(self, tmp_path):
        assert run("project", "--config", CONFIGS / "shg_demo.toml", "--out", tmp_path).exit_code == 0
        record = json.loads((tmp_path / "shg_project.json").read_text())
        tuples = {s["N"]: s["tuples"] for s in record["subspaces"]}
        assert tuples[2] == [[2, 0], [0, 1]]
        assert tuples[4] == [[2, 1], [0, 2]]
        assert tuples[6] == [[2, 2]]

    def test_vacuum(self, tmp_path):
        assert run("project", "--config", CONFIGS / "vacuum.toml", "--out", tmp_path).exit_code == 0
        record = json.loads((tmp_path / "vacuum_project.json").read_text())
        (sub,) = record["subspaces"]
        assert sub["tuples"] == [[0, 0]]
        assert sub["probability"] == 1
        assert sub["photon_loss"] == 0

    def test_fig1_n8_identity(self, tmp_path):
        assert run("project", "--config", CONFIGS / "fig1_N8.toml", "--out", tmp_path).exit_code == 0
        (sub,) = json.loads((tmp_path / "fig1_N8_project.json").read_text())["subspaces"]
        assert abs(sub["mean_ir_photon_number"] - (8 - sub["photon_loss"])) <= 1e-12
        assert sub["mixture"]["ir_photon_numbers"] == [2, 5, 8]
        assert sum(sub["mixture"]["probabilities"]) == pytest.approx(1, abs=1e-12)

    @pytest.mark.filterwarnings("ignore::ecsim.fockspace.TruncationWarning")
    def test_empty_subspace_exit_3(self, tmp_path):
        cfg = tmp_path / "c.toml"
        cfg.write_text('[state]\nalpha=1.0\ndelta_alpha=0.0\nladder=[1,2]\nchi=[0.5]\n'
                       'truncations=[2,2]\n[subspace]\nN=7\n')
        assert run("project", "--config", cfg, "--out", tmp_path / "o").exit_code == 3


class TestWigner:
    def test_vacuum_slice(self, tmp_path):
        assert run("wigner", "--config", CONFIGS / "vacuum.toml", "--slice", "--out", tmp_path).exit_code == 0
        header, data = read_csv(tmp_path / "vacuum_wigner_slice.csv")
        assert header == ["re", "w"]
        assert len(data) == 81
        np.testing.assert_allclose(data[:, 1], np.exp(-data[:, 0] ** 2) / math.pi, rtol=0, atol=1e-12)

    def test_fig1_slices_negative(self, tmp_path):
        for N in (3, 8, 15):
            assert run("wigner", "--config", CONFIGS / f"fig1_N{N}.toml", "--out", tmp_path).exit_code == 0
            _, data = read_csv(tmp_path / f"fig1_N{N}_wigner_slice.csv")
            assert data[:, 1].min() < 0

    def test_fig2_grid_passthrough(self, tmp_path):
        cfg = tmp_path / "fig2.toml"
        cfg.write_text((CONFIGS / "fig2.toml").read_text().replace(
            'source = "conditioned"',
            'source = "conditioned"\nre_points = 21\nim_points = 17\nim_min = -3.0\nim_max = 3.0'))
        assert run("wigner", "--config", cfg, "--grid", "--out", tmp_path).exit_code == 0
        header, data = read_csv(tmp_path / "fig2_wigner_grid.csv")
        assert header == ["re", "im", "w"]
        re_axis = np.linspace(-6, 6, 21)
        im_axis = np.linspace(-3, 3, 17)
        grid = wigner_of_fock_vector(conditioned_state(load_config(cfg)), re_axis, im_axis)
        assert len(data) == 21 * 17
        # rows run over re fastest; values must be bit-identical to the library
        np.testing.assert_array_equal(data[:, 2], grid.values.ravel())
        np.testing.assert_array_equal(data[:, 0], np.tile(re_axis, 17))
        np.testing.assert_array_equal(data[:, 1], np.repeat(im_axis, 21))

    def test_zero_vector_exit_3(self, tmp_path):
        cfg = tmp_path / "c.toml"
        cfg.write_text((CONFIGS / "fig2.toml").read_text().replace("n_q = 2", "n_q = 3"))
        result = run("wigner", "--config", cfg, "--grid", "--out", tmp_path)
        assert result.exit_code == 3
        assert "zero vector" in result.output

    def test_gnuplot(self, tmp_path):
        assert run("wigner", "--config", CONFIGS / "vacuum.toml", "--gnuplot", "--out", tmp_path).exit_code == 0
        script = (tmp_path / "vacuum_wigner_slice.gp").read_text()
        assert "vacuum_wigner_slice.csv" in script

    @pytest.mark.filterwarnings("ignore::ecsim.fockspace.TruncationWarning")
    def test_mixture_needs_single_energy(self, tmp_path):
        assert run("wigner", "--config", CONFIGS / "shg_demo.toml", "--out", tmp_path).exit_code == 2


class TestFidelity:
    def test_fig2_optimize(self, tmp_path):
        result = run("fidelity", "--config", CONFIGS / "fig2.toml", "--optimize", "--out", tmp_path)
        assert result.exit_code == 0
        record = json.loads((tmp_path / "fig2_fidelity.json").read_text())
        opt = record["optimized_cat"]
        assert 0.996 <= opt["fidelity"] <= 1.0
        assert opt["beta"] == pytest.approx(-0.38, abs=0.05)
        assert opt["delta_beta"] == pytest.approx(0.70, abs=0.05)
        diag = opt["diagnostics"]
        assert diag["restarts"] == 49 == len(diag["runs"])
        assert diag["converged_restarts"] > 0

    def test_matched_passthrough(self, tmp_path):
        assert run("fidelity", "--config", CONFIGS / "fig2.toml", "--out", tmp_path).exit_code == 0
        record = json.loads((tmp_path / "fig2_fidelity.json").read_text())
        assert "optimized_cat" not in record
        report = fidelity_analytic(2.5, -0.1, [9, 10, 11], 5, 2)
        m = record["matched_cat"]
        assert m["fidelity"] == report.fidelity
        assert complex_of(m["delta_p"]) == report.delta_p
        assert m["lower_bound"] == report.lower_bound and m["upper_bound"] == report.upper_bound

    def test_complex_amplitudes(self, tmp_path):
        result = run("fidelity", "--config", CONFIGS / "fig2.toml", "--optimize", "--complex-amplitudes",
                     "--out", tmp_path)
        assert result.exit_code == 0
        opt = json.loads((tmp_path / "fig2_fidelity.json").read_text())["optimized_cat"]
        assert isinstance(opt["beta"], dict)
        assert 0.99 <= opt["fidelity"] <= 1.0

    def test_degenerate_exit_3(self, tmp_path):
        result = run("fidelity", "--config", CONFIGS / "degenerate.toml", "--out", tmp_path)
        assert result.exit_code == 3
        assert not any(tmp_path.iterdir())

    def test_zero_support_exit_3(self, tmp_path):
        cfg = tmp_path / "c.toml"
        cfg.write_text((CONFIGS / "fig2.toml").read_text().replace("N0 = 10", "N0 = 4"))
        assert run("fidelity", "--config", cfg, "--out", tmp_path / "o").exit_code == 3

    def test_missing_conditioning_exit_2(self, tmp_path):
        assert run("fidelity", "--config", CONFIGS / "fig1_N3.toml", "--out", tmp_path).exit_code == 2

    @pytest.mark.parametrize("name", ["fig2", "seventh_harmonic"])
    def test_bounds_in_corpus(self, tmp_path, name):
        assert run("fidelity", "--config", CONFIGS / f"{name}.toml", "--out", tmp_path).exit_code == 0
        (path,) = tmp_path.glob("*fidelity.json")
        m = json.loads(path.read_text())["matched_cat"]
        assert m["lower_bound"] <= m["fidelity"] <= m["upper_bound"]


class TestConfigErrors:
    def test_missing_file(self, tmp_path):
        assert run("project", "--config", tmp_path / "nope.toml", "--out", tmp_path).exit_code == 2

    def test_bad_toml(self, tmp_path):
        cfg = tmp_path / "bad.toml"
        cfg.write_text("[state\nalpha = ")
        result = run("project", "--config", cfg, "--out", tmp_path)
        assert result.exit_code == 2
        assert "config error" in result.output

    def test_unknown_harmonic(self, tmp_path):
        cfg = tmp_path / "c.toml"
        cfg.write_text((CONFIGS / "fig2.toml").read_text().replace("q = 5", "q = 3"))
        assert run("fidelity", "--config", cfg, "--out", tmp_path).exit_code == 2


class TestRepro:
    def test_fig1(self, tmp_path):
        assert run("repro", "fig1", "--out", tmp_path).exit_code == 0
        manifest = json.loads((tmp_path / "fig1_manifest.json").read_text())
        assert manifest["q"] == 3
        assert [c["N"] for c in manifest["cases"]] == [3, 8, 15]
        for case in manifest["cases"]:
            _, data = read_csv(tmp_path / case["file"])
            assert data[:, 1].min() < 0

    def test_fig1_q_override(self, tmp_path):
        assert run("repro", "fig1", "--q", 5, "--out", tmp_path).exit_code == 0
        assert json.loads((tmp_path / "fig1_manifest.json").read_text())["q"] == 5

    def test_fig2(self, tmp_path):
        assert run("repro", "fig2", "--out", tmp_path).exit_code == 0
        assert (tmp_path / "fig2_wigner_grid.csv").exists()
        record = json.loads((tmp_path / "fig2_fidelity.json").read_text())
        assert 0.996 <= record["optimized_cat"]["fidelity"] <= 1.0

    def test_bundled_configs_match_repro(self):
        for N, config in fig1_configs().items():
            assert load_config(CONFIGS / f"fig1_N{N}.toml") == config
        assert load_config(CONFIGS / "fig2.toml") == fig2_config()

    def test_deterministic(self, tmp_path):
        a, b = tmp_path / "a", tmp_path / "b"
        for out in (a, b):
            assert run("repro", "fig1", "--out", out).exit_code == 0
            assert run("repro", "fig2", "--gnuplot", "--out", out).exit_code == 0
        names = sorted(p.name for p in a.iterdir())
        assert names == sorted(p.name for p in b.iterdir())
        for name in names:
            assert (a / name).read_bytes() == (b / name).read_bytes()


def test_slice_passthrough_digits(tmp_path):
    config = load_config(CONFIGS / "fig1_N3.toml")
    assert run("wigner", "--config", CONFIGS / "fig1_N3.toml", "--out", tmp_path).exit_code == 0
    text = (tmp_path / "fig1_N3_wigner_slice.csv").read_text().splitlines()
    grid = wigner_for_config(config, slice_only=True)
    expected = [f"{format_float(x)},{format_float(w)}" for x, w in zip(grid.re_axis, grid.values[0])]
    assert text[1:] == expected


def test_no_temp_files_left(tmp_path):
    assert run("repro", "fig1", "--out", tmp_path).exit_code == 0
    assert all(not p.name.startswith(".") and not p.name.endswith(".tmp") for p in tmp_path.iterdir())


def test_entry_point_exists():
    assert callable(cli_module.main)
