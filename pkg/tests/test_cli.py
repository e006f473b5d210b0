import json

import numpy as np
import pytest

from cyclewalk.cli import (
    DEFAULTS,
    StrengthTable,
    TimeSweepTable,
    UsageError,
    main,
    parse_config,
    read_table_csv,
    run,
    write_table,
)
from cyclewalk.presets import PRESETS, get_preset


class TestParseConfig:
    def test_sweep_time_flags(self):
        cfg = parse_config(["sweep-time", "--k", "4", "--model", "static-phase",
                            "--delta", "0.5", "--steps", "15", "--n", "500",
                            "--seed", "42"])
        assert cfg.command == "sweep-time"
        assert cfg.k == 4
        assert cfg.model_kind == "static-phase"
        assert cfg.strength == 0.5
        assert cfg.t_max == 15
        assert cfg.n_realizations == 500
        assert cfg.master_seed == 42

    def test_negative_lambda_rejected(self):
        with pytest.raises(UsageError):
            parse_config(["sweep-time", "--model", "position", "--lambda", "-1"])
        assert main(["sweep-time", "--model", "position", "--lambda", "-1"]) == 2

    def test_strength_flag_must_match_model_family(self):
        with pytest.raises(UsageError, match="--delta"):
            parse_config(["sweep-time", "--model", "static-coin", "--delta", "0.5"])
        with pytest.raises(UsageError, match="--omega"):
            parse_config(["sweep-time", "--model", "position", "--omega", "0.5"])

    def test_model_requires_its_strength(self):
        with pytest.raises(UsageError, match="strength"):
            parse_config(["sweep-time", "--model", "dynamic-coin"])

    def test_figure_preset_expansion(self):
        cfg = parse_config(["figure", "--preset", "fig3a"])
        preset = get_preset(cfg.preset)
        assert preset.k == 4
        assert preset.variant == "static-phase"
        assert preset.strengths == (0.0, 0.2, 0.4, 0.6, 0.8, 1.0)
        assert preset.t_max == 15
        assert preset.n == 500

    def test_unknown_preset_rejected(self, tmp_path):
        cfg = parse_config(["figure", "--preset", "nope",
                            "--out", str(tmp_path / "x.csv")])
        assert main(["figure", "--preset", "nope",
                     "--out", str(tmp_path / "x.csv")]) != 0
        with pytest.raises(ValueError):
            get_preset(cfg.preset)

    def test_config_file_supplies_defaults_and_flags_override(self, tmp_path):
        path = tmp_path / "cfg.json"
        path.write_text(json.dumps({"k": 3, "t_max": 7, "model_kind": "static-phase",
                                    "delta": 0.4}))
        cfg = parse_config(["sweep-time", "--config", str(path), "--k", "5"])
        assert cfg.k == 5          # flag wins
        assert cfg.t_max == 7      # file value
        assert cfg.strength == 0.4

    def test_unknown_config_keys_are_errors(self, tmp_path):
        path = tmp_path / "cfg.json"
        path.write_text(json.dumps({"model_kind": "clean", "bogus": 1}))
        with pytest.raises(UsageError, match="bogus"):
            parse_config(["sweep-time", "--config", str(path)])

    def test_defaults_applied(self):
        cfg = parse_config(["sweep-time", "--model", "clean"])
        assert cfg.k == DEFAULTS["k"]
        assert cfg.nodes == DEFAULTS["nodes"]
        assert cfg.shift_convention == "literal"


class TestWriteTable:
    def test_header_only_for_empty_table(self, tmp_path):
        path = tmp_path / "empty.csv"
        write_table(TimeSweepTable(rows=()), path, "csv")
        assert path.read_text() == "series,t,mean_E_av,se_E_av,mean_P0,n_real,seed\n"

    def test_round_trip(self, tmp_path):
        rows = (("clean", 1, 1.0, 0.0, 0.0, 5, 42),
                ("clean", 2, 0.55730503137216081, 1.25e-9, 0.5, 5, 42))
        table = TimeSweepTable(rows=rows)
        path = tmp_path / "t.csv"
        write_table(table, path, "csv")
        assert read_table_csv(path).rows == rows

    def test_strength_round_trip(self, tmp_path):
        rows = ((0.0, 1, 1.0, 0.0), (0.5, 1, 0.9876543210987654, 3.5e-4))
        path = tmp_path / "s.csv"
        write_table(StrengthTable(rows=rows), path, "csv")
        assert read_table_csv(path).rows == rows

    def test_json_format(self, tmp_path):
        rows = ((0.5, 4, 0.25, 0.001),)
        path = tmp_path / "s.json"
        write_table(StrengthTable(rows=rows), path, "json")
        records = json.loads(path.read_text())
        assert records == [{"strength": 0.5, "t": 4, "mean_E_av": 0.25,
                            "se_E_av": 0.001}]


class TestRun:
    def test_verify_exits_zero_and_writes_report(self, tmp_path):
        out = tmp_path / "verify.json"
        assert main(["verify", "--out", str(out)]) == 0
        report = json.loads(out.read_text())
        assert report["ok"] is True

    def test_evolve_bell_state_dump(self, tmp_path):
        out = tmp_path / "evolve.json"
        assert main(["evolve", "--k", "4", "--model", "clean", "--steps", "1",
                     "--out", str(out)]) == 0
        payload = json.loads(out.read_text())
        final = payload["states"][-1]
        nonzero = [a for a in final["amplitudes"]
                   if a["re"] ** 2 + a["im"] ** 2 > 1e-20]
        assert len(nonzero) == 2
        for amp in nonzero:
            assert amp["re"] ** 2 + amp["im"] ** 2 == pytest.approx(0.5, abs=1e-12)
        assert final["entropy"] == pytest.approx(1.0, abs=1e-10)

    def test_fig3a_row_count_and_manifest(self, tmp_path):
        out = tmp_path / "fig3a.csv"
        assert main(["figure", "--preset", "fig3a", "--n", "3", "--seed", "9",
                     "--out", str(out)]) == 0
        lines = out.read_text().splitlines()
        assert lines[0] == "series,t,mean_E_av,se_E_av,mean_P0,n_real,seed"
        assert len(lines) == 1 + 6 * 15
        manifest = json.loads((tmp_path / "fig3a.manifest.json").read_text())
        assert manifest["command"] == "figure"
        assert manifest["config"]["preset"] == "fig3a"
        assert manifest["config"]["n_realizations"] == 3
        assert manifest["notes"]["preset"] == "fig3a"

    def test_clean_series_has_zero_se_column(self, tmp_path):
        out = tmp_path / "clean.csv"
        assert main(["sweep-time", "--model", "clean", "--steps", "6", "--n", "4",
                     "--out", str(out)]) == 0
        table = read_table_csv(out)
        assert all(row[3] == 0.0 for row in table.rows)

    def test_manifest_rerun_reproduces_csv_bytes(self, tmp_path):
        out = tmp_path / "first.csv"
        assert main(["figure", "--preset", "fig2a", "--out", str(out)]) == 0
        first = out.read_bytes()
        manifest = tmp_path / "first.manifest.json"
        out2 = tmp_path / "second.csv"
        assert main(["figure", "--config", str(manifest), "--out", str(out2)]) == 0
        assert out2.read_bytes() == first

    def test_manifest_command_mismatch_rejected(self, tmp_path):
        out = tmp_path / "p.csv"
        assert main(["figure", "--preset", "fig2a", "--out", str(out)]) == 0
        with pytest.raises(UsageError, match="command"):
            parse_config(["sweep-time", "--config",
                          str(tmp_path / "p.manifest.json")])

    def test_parity_notes_carry_scores(self, tmp_path):
        out = tmp_path / "parity.csv"
        assert main(["parity", "--k", "4", "--model", "position", "--lambda", "1.5",
                     "--steps", "3", "--n", "40", "--out", str(out),
                     "--shift-convention", "symmetric"]) == 0
        manifest = json.loads((tmp_path / "parity.manifest.json").read_text())
        assert manifest["notes"]["parity_violation_score"] > 0.0

    def test_outdir_env_used_when_out_omitted(self, tmp_path, monkeypatch):
        monkeypatch.setenv("CYCLEWALK_OUTDIR", str(tmp_path))
        assert main(["sweep-time", "--model", "clean", "--steps", "2", "--n", "1"]) == 0
        assert (tmp_path / "sweep-time.csv").exists()
        assert (tmp_path / "sweep-time.manifest.json").exists()

    def test_sweep_strength_csv_schema(self, tmp_path):
        out = tmp_path / "ss.csv"
        assert main(["sweep-strength", "--model", "dynamic-phase",
                     "--strengths", "0.0,1.0", "--ts", "1,2", "--n", "3",
                     "--out", str(out)]) == 0
        lines = out.read_text().splitlines()
        assert lines[0] == "strength,t,mean_E_av,se_E_av"
        assert len(lines) == 1 + 4

    def test_single_mode_flags(self, tmp_path):
        out = tmp_path / "single.csv"
        assert main(["sweep-time", "--model", "static-coin", "--omega", "1.0",
                     "--mode", "single", "--theta", str(np.pi / 2),
                     "--phi", str(np.pi / 2), "--steps", "1", "--n", "20",
                     "--out", str(out)]) == 0
        table = read_table_csv(out)
        assert table.rows[0][2] == pytest.approx(1.0, abs=1e-10)


class TestPresetTable:
    def test_every_preset_is_well_formed(self):
        for name, preset in PRESETS.items():
            assert preset.kind in ("time", "strength", "parity")
            assert preset.k >= 3
            if preset.kind in ("time", "parity"):
                labels = [label for label, _ in preset.series_models()]
                assert len(labels) == len(set(labels))
            else:
                assert preset.strengths and preset.ts

    def test_preset_count_covers_figure_families(self):
        assert len(PRESETS) >= 20
