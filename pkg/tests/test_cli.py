"""
CLI de bout en bout : codes de sortie, sorties CSV/gnuplot, manifeste et reproductibilité
"""

import csv
import json

import pytest

from nwbound.config import settings
from nwbound.main import main
from nwbound.services.exporter import VALUE_COLUMNS

# ensemble réduit pour garder chaque run sous la seconde
FAST = ["--set", "ensemble.n=200", "--set", "ensemble.N=4", "--set", "grid.points=[5]"]


def run(configs_dir, out, *extra, config="sin_laplace.toml"):
    return main(["run", "--config", str(configs_dir / config), "--out", str(out), *FAST, *extra])


def read_rows(path):
    with open(path, newline="", encoding="utf-8") as f:
        return list(csv.reader(f))


class TestRun:
    def test_writes_csv_gnuplot_and_manifest(self, configs_dir, tmp_path):
        assert run(configs_dir, tmp_path) == 0
        assert sorted(p.name for p in tmp_path.iterdir()) == ["sin_laplace.csv", "sin_laplace.gp", "sin_laplace.manifest.json"]

        manifest = json.loads((tmp_path / "sin_laplace.manifest.json").read_text(encoding="utf-8"))
        assert manifest["status"] == "completed"
        assert manifest["progress"] == 100
        assert manifest["version"] == settings.APP_VERSION
        assert manifest["seed"] == 20240101
        assert manifest["config"]["ensemble"] == {"n": 200, "N": 4}
        assert set(manifest["outputs"]) == {"csv", "gnuplot"}
        assert manifest["wall_clock_seconds"] >= 0.0

    def test_csv_layout(self, configs_dir, tmp_path):
        run(configs_dir, tmp_path)
        raw = (tmp_path / "sin_laplace.csv").read_bytes()
        assert raw.startswith(b"x,m_true,m_hat_mean,empirical_bias,standard_error,bound_theorem1,bound_theorem2,")
        assert raw.count(b"\r\n") == 6
        assert b"\n" not in raw.replace(b"\r\n", b"")

        header, *rows = read_rows(tmp_path / "sin_laplace.csv")
        assert header == ["x"] + VALUE_COLUMNS
        assert [row[0] for row in rows] == ["-2", "-1", "0", "1", "2"]
        for row in rows:
            assert all(field != "" for field in row)
            bias, bound = abs(float(row[3])), float(row[5])
            assert bound >= 0.0
            assert float(row[4]) >= 0.0
            assert bias == pytest.approx(abs(float(row[2]) - float(row[1])), abs=1e-12)

    def test_full_precision_numbers(self, configs_dir, tmp_path):
        run(configs_dir, tmp_path)
        _, *rows = read_rows(tmp_path / "sin_laplace.csv")
        for row in rows:
            for field in row:
                assert format(float(field), ".17g") == field

    def test_gnuplot_script_reads_csv(self, configs_dir, tmp_path):
        run(configs_dir, tmp_path)
        script = (tmp_path / "sin_laplace.gp").read_text(encoding="utf-8")
        assert 'set datafile separator ","' in script
        assert '"sin_laplace.csv"' in script
        assert "multiplot layout 1,3" in script

    def test_bundled_alias(self, tmp_path):
        assert main(["run", "--config", "fig1a", "--out", str(tmp_path), *FAST]) == 0
        header, *rows = read_rows(tmp_path / "sin_laplace.csv")
        assert header[5:7] == ["bound_theorem1", "bound_theorem2"]
        assert len(rows) == 5

    def test_multidimensional_header(self, configs_dir, tmp_path):
        extra = ["--set", "grid.points=[2, 2]"]
        assert run(configs_dir, tmp_path, *extra, config="multidim.toml") == 0
        header, *rows = read_rows(tmp_path / "multidim.csv")
        assert header[:3] == ["x1", "x2", "m_true"]
        assert len(rows) == 4
        # M non borné : seule la borne non bornée est renseignée
        assert all(row[6] == "" and row[7] != "" for row in rows)


class TestReproducibility:
    def test_identical_bytes_across_runs(self, configs_dir, tmp_path):
        run(configs_dir, tmp_path / "a")
        run(configs_dir, tmp_path / "b")
        assert (tmp_path / "a" / "sin_laplace.csv").read_bytes() == (tmp_path / "b" / "sin_laplace.csv").read_bytes()

    def test_identical_bytes_across_thread_counts(self, configs_dir, tmp_path):
        run(configs_dir, tmp_path / "serial", "--jobs", "1")
        run(configs_dir, tmp_path / "parallel", "--jobs", "8")
        serial = (tmp_path / "serial" / "sin_laplace.csv").read_bytes()
        assert serial == (tmp_path / "parallel" / "sin_laplace.csv").read_bytes()

    def test_seed_flag_changes_draws(self, configs_dir, tmp_path):
        run(configs_dir, tmp_path / "a")
        run(configs_dir, tmp_path / "b", "--seed", "1")
        assert (tmp_path / "a" / "sin_laplace.csv").read_bytes() != (tmp_path / "b" / "sin_laplace.csv").read_bytes()

    def test_rerun_from_manifest(self, configs_dir, tmp_path):
        run(configs_dir, tmp_path / "first")
        manifest = tmp_path / "first" / "sin_laplace.manifest.json"
        assert main(["run", "--config", str(manifest), "--out", str(tmp_path / "again")]) == 0
        assert (tmp_path / "first" / "sin_laplace.csv").read_bytes() == (tmp_path / "again" / "sin_laplace.csv").read_bytes()


class TestExitCodes:
    def test_non_positive_bandwidth(self, configs_dir, tmp_path, caplog):
        assert run(configs_dir, tmp_path, "--set", "bandwidths.h=[0.0]") == 2
        assert "bandwidths.h" in caplog.text
        assert not tmp_path.exists() or list(tmp_path.iterdir()) == []

    def test_missing_config(self, tmp_path, caplog):
        assert main(["run", "--config", str(tmp_path / "absent.toml"), "--out", str(tmp_path)]) == 2
        assert "--config" in caplog.text

    def test_unknown_design_lists_catalog(self, configs_dir, tmp_path, caplog):
        assert run(configs_dir, tmp_path, "--set", "design.kind=gaussian") == 2
        assert "laplace" in caplog.text

    def test_gamma_outside_delta(self, configs_dir, tmp_path, caplog):
        boxes = ["--set", "lipschitz.delta=[[-1.0, 1.0]]", "--set", "lipschitz.gamma=[[-2.0, 2.0]]"]
        assert run(configs_dir, tmp_path, *boxes) == 2
        assert "lipschitz.gamma" in caplog.text

    def test_invalid_jobs(self, configs_dir, tmp_path):
        assert run(configs_dir, tmp_path, "--jobs", "0") == 2

    def test_empty_neighborhood_fails_and_cleans_up(self, configs_dir, tmp_path, caplog):
        assert run(configs_dir, tmp_path, "--set", "bandwidths.h=[1e-6]") == 3
        assert "EmptyNeighborhood" in caplog.text or "voisinage vide" in caplog.text
        assert list(tmp_path.iterdir()) == []

    def test_failed_rerun_keeps_previous_results(self, configs_dir, tmp_path):
        assert run(configs_dir, tmp_path) == 0
        before = {p.name: p.read_bytes() for p in tmp_path.iterdir()}
        assert run(configs_dir, tmp_path, "--set", "bandwidths.h=[1e-6]") == 3
        assert {p.name: p.read_bytes() for p in tmp_path.iterdir()} == before

    def test_allow_partial_keeps_empty_fields(self, configs_dir, tmp_path):
        extra = ["--set", "bandwidths.h=[1e-6]", "--set", "allow_partial=true"]
        assert run(configs_dir, tmp_path, *extra) == 0
        _, *rows = read_rows(tmp_path / "sin_laplace.csv")
        assert len(rows) == 5
        for row in rows:
            assert row[2] == "" and row[3] == "" and row[4] == ""
            assert row[1] != "" and row[5] != ""


class TestCheck:
    def test_prints_resolved_constants(self, configs_dir, capsys):
        assert main(["check", "--config", str(configs_dir / "sin_laplace.toml")]) == 0
        out = capsys.readouterr().out
        assert "L_f=1" in out.splitlines()
        assert "L_m=5" in out.splitlines()
        assert "M=2" in out.splitlines()
        assert "borne M fini : oui, borne non bornée : oui" in out

    def test_unbounded_function(self, configs_dir, capsys):
        assert main(["check", "--config", str(configs_dir / "logcosh_laplace.toml")]) == 0
        out = capsys.readouterr().out
        assert "M=unbounded" in out.splitlines()
        assert "borne M fini : non" in out

    def test_pareto_constant(self, configs_dir, capsys):
        assert main(["check", "--config", str(configs_dir / "log_pareto.toml")]) == 0
        assert "L_f=3" in capsys.readouterr().out.splitlines()

    def test_does_not_write(self, configs_dir, tmp_path, monkeypatch):
        monkeypatch.chdir(tmp_path)
        main(["check", "--config", str(configs_dir / "sin_uniform.toml")])
        assert list(tmp_path.iterdir()) == []

    def test_invalid_override(self, configs_dir):
        assert main(["check", "--config", str(configs_dir / "sin_laplace.toml"), "--set", "ensemble.n=10"]) == 2

    def test_missing_subcommand(self):
        with pytest.raises(SystemExit):
            main([])
