"""Config loading, validation diagnostics, CSV/manifest output, determinism."""

import csv
import json
import math

import pytest

from dcskwpt.cli import (CSV_COLUMNS, apply_overrides, load_config, main,
                         validate_config)


def _read_csv(path):
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


def test_bundled_recipes_load_and_validate():
    for name, rows in (("base.cfg", 1), ("fig2.cfg", 15), ("fig3.cfg", 30),
                       ("fig4.cfg", 100)):
        config, source = load_config(name)
        assert source == f"bundled:{name}"
        assert validate_config(config) == []
        axes = (config.get("sweep") or {}).get("axes", [])
        n = 1
        for ax in axes:
            n *= len(ax["values"])
        assert n == rows


def test_missing_config_is_a_load_error():
    with pytest.raises(ValueError):
        load_config("no-such-file.cfg")


def test_validate_reports_field_paths(tmp_path):
    config, _ = load_config("base.cfg")
    config["channel"]["omega1"] = 0.6
    config["channel"]["omega2"] = 0.3
    diags = validate_config(config)
    assert any("omega sum != 1" in d for d in diags)

    config, _ = load_config("base.cfg")
    config["channel"]["tau"] = config["waveform"]["beta"]
    diags = validate_config(config)
    assert any("exceeds beta - 1" in d for d in diags)

    config, _ = load_config("base.cfg")
    config["mc"]["mode"] = "magic"
    assert any(d.startswith("mc.mode") for d in validate_config(config))

    config, _ = load_config("base.cfg")
    config["bogus"] = {}
    assert any("unknown section" in d for d in validate_config(config))


def test_overrides_dotted_paths():
    config, _ = load_config("base.cfg")
    out = apply_overrides(config, ["channel.tau=0", "mc.workers=4",
                                   "waveform.kind=classic-dcsk"])
    assert out["channel"]["tau"] == 0
    assert out["mc"]["workers"] == 4
    assert out["waveform"]["kind"] == "classic-dcsk"
    assert config["channel"]["tau"] == 3  # original untouched
    with pytest.raises(ValueError):
        apply_overrides(config, ["channel.bogus=1"])
    with pytest.raises(ValueError):
        apply_overrides(config, ["no-equals-sign"])


def test_run_single_point_outputs(tmp_path):
    code = main(["run", "base.cfg", "--out", str(tmp_path),
                 "--trials", "5000", "--seed", "3"])
    assert code == 0
    rows = _read_csv(tmp_path / "base.csv")
    assert len(rows) == 1
    assert list(rows[0].keys()) == CSV_COLUMNS
    row = rows[0]
    assert row["error"] == ""
    assert float(row["mc_m2"]) > 0
    assert "e-" in row["cf_total_w"]  # scientific notation for watt columns
    total = float(row["cf_linear_w"]) + float(row["cf_nonlinear_w"])
    assert math.isclose(total, float(row["cf_total_w"]), rel_tol=1e-9)

    manifest = json.loads((tmp_path / "base_manifest.json").read_text())
    assert manifest["tool"] == "dcsk-wpt"
    assert manifest["seed"] == 3 and manifest["trials"] == 5000
    assert manifest["rows"] == 1
    assert len(manifest["row_seconds"]) == 1
    assert manifest["config"]["mc"]["trials"] == 5000


def test_zero_delay_override_aligns_closed_forms(tmp_path):
    code = main(["run", "base.cfg", "--out", str(tmp_path),
                 "--trials", "2000", "--overrides", "channel.tau=0"])
    assert code == 0
    row = _read_csv(tmp_path / "base.csv")[0]
    cf = float(row["cf_total_w"])
    small = float(row["cf_small_delay_total_w"])
    assert math.isclose(cf, small, rel_tol=1e-12)


def test_csv_body_identical_across_worker_counts(tmp_path):
    out1, out3 = tmp_path / "w1", tmp_path / "w3"
    assert main(["run", "fig2.cfg", "--out", str(out1), "--seed", "42",
                 "--trials", "3000", "--overrides", "mc.workers=1"]) == 0
    assert main(["run", "fig2.cfg", "--out", str(out3), "--seed", "42",
                 "--trials", "3000", "--overrides", "mc.workers=3"]) == 0
    assert (out1 / "fig2.csv").read_bytes() == (out3 / "fig2.csv").read_bytes()
    rows = _read_csv(out1 / "fig2.csv")
    assert len(rows) == 15


def test_rerun_reproduces_csv_bytes(tmp_path):
    out1, out2 = tmp_path / "a", tmp_path / "b"
    args = ["run", "base.cfg", "--seed", "5", "--trials", "4000"]
    assert main(args + ["--out", str(out1)]) == 0
    assert main(args + ["--out", str(out2)]) == 0
    assert (out1 / "base.csv").read_bytes() == (out2 / "base.csv").read_bytes()


def test_sweep_error_rows_keep_going(tmp_path):
    code = main(["run", "base.cfg", "--out", str(tmp_path), "--trials", "2000",
                 "--overrides",
                 'sweep.axes=[{"name": "tau", "values": [0, 2, 40]}]'])
    assert code == 0
    rows = _read_csv(tmp_path / "base.csv")
    assert len(rows) == 3
    assert rows[0]["error"] == "" and rows[1]["error"] == ""
    assert rows[2]["error"] != "" and rows[2]["mc_m2"] == ""


def test_exit_codes(tmp_path):
    assert main(["run", "missing.cfg"]) == 2

    bad_json = tmp_path / "bad.cfg"
    bad_json.write_text("{not json")
    assert main(["run", str(bad_json)]) == 2
    assert main(["validate", str(bad_json)]) == 2

    assert main(["run", "base.cfg", "--out", str(tmp_path),
                 "--overrides", "channel.bogus=1"]) == 2

    broken = tmp_path / "broken.cfg"
    config, _ = load_config("base.cfg")
    config["channel"]["omega2"] = 0.5  # omega sum becomes 1.25
    broken.write_text(json.dumps(config))
    assert main(["run", str(broken), "--out", str(tmp_path)]) == 3
    assert main(["validate", str(broken)]) == 3

    assert main(["validate", "fig4.cfg"]) == 0


def test_validate_prints_diagnostics(tmp_path, capsys):
    config, _ = load_config("base.cfg")
    config["channel"]["omega1"] = 0.6
    config["channel"]["omega2"] = 0.3
    path = tmp_path / "bad_omega.cfg"
    path.write_text(json.dumps(config))
    assert main(["validate", str(path)]) == 3
    out = capsys.readouterr().out
    assert "omega sum != 1" in out


def test_classic_kind_rows_have_empty_closed_form(tmp_path):
    code = main(["run", "base.cfg", "--out", str(tmp_path), "--trials", "2000",
                 "--overrides", "waveform.kind=classic-dcsk", "channel.tau=0"])
    assert code == 0
    row = _read_csv(tmp_path / "base.csv")[0]
    assert row["cf_total_w"] == "" and row["z_m2"] == ""
    assert row["mc_m2"] != ""
