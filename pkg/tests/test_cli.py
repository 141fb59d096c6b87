import json

import numpy as np
import pytest

from rllsim.cli import main
from rllsim.config import ConfigError, ExperimentConfig

from oracles import chain_flip_probability


def write_cfg(tmp_path, obj, name="cfg.json"):
    p = tmp_path / name
    p.write_text(json.dumps(obj))
    return p


BASE_CODE = {"n": 128, "rate": 0.5, "vnd": [2, 5], "delta": [0.5, 0.5], "seed": 1}


def read_csv(path):
    lines = path.read_text().splitlines()
    comments = [l for l in lines if l.startswith("#")]
    rows = [l.split(",") for l in lines if not l.startswith("#")]
    return comments, rows[0], rows[1:]


def test_invalid_config_exit_code(tmp_path, capsys):
    p = write_cfg(tmp_path, {"mode": "warp"})
    assert main(["run", str(p), "--out", str(tmp_path)]) == 1
    err = capsys.readouterr().err
    assert "mode" in err


def test_malformed_json_diagnostic(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text('{"mode": "ber",}')
    with pytest.raises(ConfigError) as exc:
        ExperimentConfig.from_file(p)
    assert ":" in str(exc.value)  # line-precise location


def test_missing_field_named(tmp_path):
    with pytest.raises(ConfigError) as exc:
        ExperimentConfig.from_dict({"mode": "ber", "code": {"n": 4, "rate": 0.5}})
    assert "vnd" in str(exc.value)


def test_ber_noiseless_all_zero(tmp_path):
    cfg = {
        "mode": "ber", "code": BASE_CODE, "scheme": "type_II",
        "channel": {"kind": "pr"}, "noiseless": True, "snr_db": [],
        "trials": 3, "u_o": 2, "u_i": 2, "master_seed": 5,
        "output": "noiseless.csv",
    }
    p = write_cfg(tmp_path, cfg)
    assert main(["run", str(p), "--out", str(tmp_path)]) == 0
    comments, header, rows = read_csv(tmp_path / "noiseless.csv")
    ber_col = header.index("ber")
    assert all(float(r[ber_col]) == 0.0 for r in rows)
    assert rows[0][0] == "noiseless"


def test_ber_deterministic_csv_bodies(tmp_path):
    cfg = {
        "mode": "ber", "code": BASE_CODE, "scheme": "type_II",
        "channel": {"kind": "pr"}, "snr_db": [14.0], "trials": 4,
        "u_o": 2, "u_i": 2, "master_seed": 9, "output": "a.csv",
    }
    p1 = write_cfg(tmp_path, cfg, "c1.json")
    assert main(["run", str(p1), "--out", str(tmp_path / "r1")]) == 0
    cfg2 = dict(cfg)
    p2 = write_cfg(tmp_path, cfg2, "c2.json")
    assert main(["run", str(p2), "--out", str(tmp_path / "r2"), "--threads", "2"]) == 0
    body1 = [l for l in (tmp_path / "r1/a.csv").read_text().splitlines() if not l.startswith("#")]
    body2 = [l for l in (tmp_path / "r2/a.csv").read_text().splitlines() if not l.startswith("#")]
    assert body1 == body2


def test_flip_stats_matches_chain(tmp_path):
    cfg = {
        "mode": "flip_stats", "flip": {"k": 3, "n": 1000, "trials": 300},
        "master_seed": 11, "output": "flips.csv",
    }
    p = write_cfg(tmp_path, cfg)
    assert main(["run", str(p), "--out", str(tmp_path)]) == 0
    _, header, rows = read_csv(tmp_path / "flips.csv")
    mean = float(rows[0][header.index("mean_rate")])
    std = float(rows[0][header.index("std")])
    exact = chain_flip_probability(3, 1000, 0.5)
    assert abs(mean - exact) <= 3 * std / np.sqrt(300)


def test_config_hash_in_header(tmp_path):
    cfg = {
        "mode": "flip_stats", "flip": {"k": 2, "n": 100, "trials": 100},
        "output": "f.csv",
    }
    p = write_cfg(tmp_path, cfg)
    assert main(["run", str(p), "--out", str(tmp_path)]) == 0
    comments, _, _ = read_csv(tmp_path / "f.csv")
    assert any("config_hash" in c for c in comments)
    assert any("master_seed" in c for c in comments)
    assert any("source" in c for c in comments)


def test_de_mode_smoke(tmp_path):
    cfg = {
        "mode": "de", "code": BASE_CODE, "scheme": "type_II",
        "channel": {"kind": "pr"}, "snr_db": [16.0],
        "de": {"u_max": 3, "trials": 20}, "master_seed": 3,
        "output": "de.csv",
    }
    p = write_cfg(tmp_path, cfg)
    assert main(["run", str(p), "--out", str(tmp_path)]) == 0
    _, header, rows = read_csv(tmp_path / "de.csv")
    assert header[:4] == ["snr_db", "iteration", "pe", "converged"]
    assert len(rows) >= 1
    assert all(0.0 <= float(r[2]) <= 1.0 for r in rows)


def test_exit_mode_smoke(tmp_path):
    cfg = {
        "mode": "exit", "code": BASE_CODE, "scheme": "type_II",
        "channel": {"kind": "pr"}, "snr_db": [16.0],
        "exit": {"frames": 2}, "u_o": 2, "u_i": 2, "master_seed": 3,
        "output": "exit.csv",
    }
    p = write_cfg(tmp_path, cfg)
    assert main(["run", str(p), "--out", str(tmp_path)]) == 0
    _, header, rows = read_csv(tmp_path / "exit.csv")
    assert header[:4] == ["snr_db", "iteration", "i_in", "i_out"]
    assert len(rows) == 2
    assert all(0.0 <= float(r[2]) <= 1.0 and 0.0 <= float(r[3]) <= 1.0 for r in rows)


def test_optimize_mode_smoke(tmp_path):
    cfg = {
        "mode": "optimize",
        "optimize": {
            "n": 256, "rate": 0.5, "alpha": 0.5, "population": 4,
            "cap": 6, "generations": 2, "probe_snrs": [15.0, 16.0],
            "trials": 3, "u_o": 2, "u_i": 2,
        },
        "master_seed": 8, "output": "opt.csv",
    }
    p = write_cfg(tmp_path, cfg)
    assert main(["run", str(p), "--out", str(tmp_path)]) == 0
    _, header, rows = read_csv(tmp_path / "opt.csv")
    assert header[:6] == ["generation", "vnd", "delta", "error_floor", "ber", "is_best"]
    assert len(rows) >= 1 + 2 * 4  # init row + two generations of mutants
    # every logged candidate keeps the half/half class masses
    for r in rows:
        degs = [int(x) for x in r[1].split("|")]
        ws = [float(x) for x in r[2].split("|")]
        weak = sum(w for d, w in zip(degs, ws) if d <= 3)
        assert weak == pytest.approx(0.5, abs=1e-6)


def test_distribution_json_form(tmp_path):
    cfg = {
        "mode": "ber",
        "code": {
            "n": 128, "rate": 0.5,
            "distribution": {
                "var": [[2, 0.5], [5, 0.5]],
                "chk": [[7, 1.0]],
                "perspective": "node",
            },
            "seed": 1,
        },
        "scheme": "type_II", "channel": {"kind": "pr"}, "noiseless": True,
        "snr_db": [], "trials": 2, "u_o": 1, "u_i": 2,
        "master_seed": 4, "output": "dist.csv",
    }
    p = write_cfg(tmp_path, cfg, "dist.json")
    assert main(["run", str(p), "--out", str(tmp_path)]) == 0
    _, header, rows = read_csv(tmp_path / "dist.csv")
    assert float(rows[0][header.index("ber")]) == 0.0
    # provenance repeated on every row
    assert rows[0][header.index("config_hash")] != ""
