import json

import numpy as np
import pytest

from qpskrx.cli import main, run
from qpskrx.config import ConfigError, RunConfig, load_config


class TestLoadConfig:
    def test_defaults_mirror_experiment(self):
        cfg = load_config()
        assert cfg.eta_t == 0.90
        assert cfg.eta_spd == 0.73
        assert cfg.xi == 0.996
        assert cfg.nu_per_state == 9.1e-3
        assert cfg.t_total_us == 200.0
        assert cfg.dt_us == 1.1
        assert cfg.m == 10

    def test_discard_multiplier_reference_values(self):
        cfg = load_config()
        assert 1 - cfg.discard_multiplier(10) == pytest.approx(0.0495, abs=1e-12)
        assert 1 - cfg.discard_multiplier(4) == pytest.approx(0.0165, abs=1e-12)

    def test_unknown_keys_rejected(self, tmp_path):
        path = tmp_path / "cfg.json"
        path.write_text(json.dumps({"xi": 0.99, "bogus_key": 1}))
        with pytest.raises(ConfigError, match="bogus_key"):
            load_config(str(path))

    def test_out_of_range_named(self, tmp_path):
        path = tmp_path / "cfg.json"
        path.write_text(json.dumps({"xi": 1.2}))
        with pytest.raises(ConfigError, match="xi"):
            load_config(str(path))

    def test_flag_overrides_file(self, tmp_path):
        path = tmp_path / "cfg.json"
        path.write_text(json.dumps({"trials": 10**6}))
        cfg = load_config(str(path), {"trials": 1000})
        assert cfg.trials == 1000

    def test_mode_mismatch_rejected(self, tmp_path):
        path = tmp_path / "cfg.json"
        path.write_text(json.dumps({"mode": "bounds"}))
        with pytest.raises(ConfigError, match="mode"):
            load_config(str(path), mode="sweep")


class TestRun:
    def test_bounds_mode(self):
        cfg = load_config(overrides={"alpha_sq_start": 0.0, "alpha_sq_stop": 10.0,
                                     "alpha_sq_points": 11}, mode="bounds")
        columns, rows = run(cfg)
        assert columns == ["alpha_sq", "sql", "sql_lossy", "helstrom"]
        assert len(rows) == 11
        for row in rows:
            assert row["helstrom"] <= row["sql"] <= 0.75
            assert row["sql"] <= row["sql_lossy"]

    def test_enumerate_mode_reports_attenuated_signal(self):
        cfg = load_config(overrides={"alpha_sq_start": 1.0, "alpha_sq_stop": 2.0,
                                     "alpha_sq_points": 2, "m": 5}, mode="enumerate")
        _, rows = run(cfg)
        eta_eff = cfg.eta_se * cfg.discard_multiplier(5)
        assert rows[0]["alpha_sq_detected"] == pytest.approx(eta_eff, rel=1e-12)

    def test_sweep_mode_rows_in_grid_order(self):
        cfg = load_config(overrides={"alpha_sq_start": 0.5, "alpha_sq_stop": 1.5,
                                     "alpha_sq_points": 3, "trials": 2000, "m": 4},
                          mode="sweep")
        _, rows = run(cfg)
        assert [r["alpha_sq"] for r in rows] == [0.5, 1.0, 1.5]
        for r in rows:
            assert 0.0 <= r["error_prob"] <= 1.0

    def test_stages_sweep_columns(self):
        cfg = load_config(overrides={"m_start": 3, "m_stop": 4, "trials": 2000},
                          mode="stages-sweep")
        columns, rows = run(cfg)
        assert [r["m"] for r in rows] == [3, 4]
        assert "error_prob_no_discard" in columns
        assert "error_prob_discard" in columns

    def test_delay_sweep(self):
        cfg = load_config(overrides={"alpha_sq": 3.3, "dt_start_us": 0.0,
                                     "dt_stop_us": 2.0, "dt_points": 3,
                                     "trials": 2000}, mode="delay-sweep")
        _, rows = run(cfg)
        assert [r["dt_us"] for r in rows] == [0.0, 1.0, 2.0]

    def test_efficiency_sweep(self):
        cfg = load_config(overrides={"eta_spd_list": [0.73, 1.0],
                                     "alpha_sq_start": 1.0, "alpha_sq_stop": 1.0,
                                     "alpha_sq_points": 1, "trials": 2000},
                          mode="efficiency-sweep")
        _, rows = run(cfg)
        assert [r["eta_spd"] for r in rows] == [0.73, 1.0]


class TestCliMain:
    def test_bounds_to_file(self, tmp_path):
        out = tmp_path / "bounds.csv"
        rc = main(["bounds", "--alpha-sq-grid", "0:4:5", "--out", str(out)])
        assert rc == 0
        lines = out.read_text().splitlines()
        assert "np.float64" not in out.read_text()  # plain reprs only
        assert lines[0].startswith("# config=")
        assert lines[1] == "alpha_sq,sql,sql_lossy,helstrom"
        assert len(lines) == 7

    def test_roundtrip_is_byte_identical(self, tmp_path):
        out1 = tmp_path / "a.csv"
        rc = main(["sweep", "--alpha-sq-grid", "1:2:2", "--m", "4",
                   "--trials", "500", "--seed", "42", "--out", str(out1)])
        assert rc == 0
        header = out1.read_text().splitlines()[0]
        cfg_json = header.removeprefix("# config=")
        cfg_path = tmp_path / "echo.json"
        cfg_path.write_text(cfg_json)
        out2 = tmp_path / "b.csv"
        rc = main(["sweep", "--config", str(cfg_path), "--out", str(out2)])
        assert rc == 0
        assert out1.read_bytes() == out2.read_bytes()

    def test_json_mirror(self, tmp_path):
        out = tmp_path / "r.csv"
        rc = main(["bounds", "--alpha-sq-grid", "0:1:2", "--out", str(out), "--json"])
        assert rc == 0
        data = json.loads((tmp_path / "r.json").read_text())
        assert data["columns"] == ["alpha_sq", "sql", "sql_lossy", "helstrom"]
        assert len(data["rows"]) == 2

    def test_validation_error_exit_code(self, capsys):
        rc = main(["sweep", "--xi", "1.5", "--trials", "10"])
        assert rc == 1
        assert "xi" in capsys.readouterr().err

    def test_deterministic_given_seed(self, tmp_path):
        args = ["sweep", "--alpha-sq-grid", "1:1:1", "--m", "4", "--trials", "2000",
                "--seed", "9"]
        out1, out2 = tmp_path / "1.csv", tmp_path / "2.csv"
        assert main(args + ["--out", str(out1)]) == 0
        assert main(args + ["--out", str(out2)]) == 0
        assert out1.read_bytes() == out2.read_bytes()

    def test_stdout_when_no_out(self, capsys):
        rc = main(["bounds", "--alpha-sq-grid", "0:1:2"])
        assert rc == 0
        assert capsys.readouterr().out.startswith("# config=")
