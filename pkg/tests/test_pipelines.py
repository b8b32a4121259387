import json

import pytest

from oamstore.pipelines import ConfigurationError, run, verify_report
from oamstore.presets import get_preset


def small_es_config(seed=11):
    return {
        "schema": 1, "pipeline": "entanglement-storage", "seed": seed,
        "source": {"c": [1.0, -1.0, 1.0], "v": 0.30375},
        "channel": {"eta": 0.2, "sigma_theta": 0.0, "delta": 25e6},
        "exposure": 2e4, "bell": {"restarts": 2},
    }


def small_bell_config():
    return {
        "schema": 1, "pipeline": "bell", "seed": 5,
        "source": {"c": [1.0, -1.0, 1.0], "v": 0.30375},
        "bell": {"restarts": 2, "exposure": 2e4},
    }


def small_state_config():
    return {
        "schema": 1, "pipeline": "state-tomo", "seed": 9,
        "source": {"c": [1.0, -1.0, 1.0], "v": 0.30375},
        "exposure": 2e4,
    }


def small_process_config():
    return {
        "schema": 1, "pipeline": "process-tomo", "seed": 7,
        "process": {"analyzer_depolarizing": 0.03375,
                    "memory": {"eta": 0.2, "sigma_theta": 0.0, "delta": 25e6}},
        "exposure": 5e4,
    }


def small_afc_config():
    return {
        "schema": 1, "pipeline": "afc-echo", "seed": 1,
        "comb": {"delta": 25e6, "finesse": 2.0, "d": 3.0, "d0": 0.0,
                 "bandwidth": 1e9, "shape": "square", "span": 4e9},
        "pulse": {"fwhm": 1e-8},
        "sweep": {"finesses": [2.0, 5.0], "depths": [1.0, 3.0],
                  "shapes": ["square"]},
    }


def small_scan_config():
    return {
        "schema": 1, "pipeline": "mode-scan", "seed": 2,
        "scan": {"l_max": 5, "w0": 1.0, "finesse": 2.0, "d0": 0.0,
                 "shape": "square", "calibrate": {"l": 5, "V": 0.97}},
        "pump": {"shape": "gaussian", "waist": 2.0, "s0": 1.0, "d_max": 3.0},
    }


ALL_SMALL = [small_es_config(), small_bell_config(), small_state_config(),
             small_process_config(), small_afc_config(), small_scan_config(),
             get_preset("capacity")]


@pytest.mark.parametrize("cfg", ALL_SMALL,
                         ids=[c["pipeline"] for c in ALL_SMALL])
def test_pipeline_runs_and_verifies(cfg, tmp_path):
    report, run_dir = run(dict(cfg), out=str(tmp_path))
    assert report["pipeline"] == cfg["pipeline"]
    assert report["converged"]
    assert report["summary_metrics"]
    assert all(isinstance(v, float) for v in report["summary_metrics"].values())
    assert "wall_time_s" in report and "wall_time_s" not in report["summary_metrics"]
    for fname in report["artifacts"].values():
        assert (tmp_path / "run-001" / fname).exists()
    findings, recomputed = verify_report(str(tmp_path / "run-001" / "report.json"))
    assert findings == [], [str(f) for f in findings]
    assert set(recomputed) == set(report["summary_metrics"])


def test_run_dirs_increment_and_index_appends(tmp_path):
    cfg = get_preset("capacity")
    _, d1 = run(dict(cfg), out=str(tmp_path))
    _, d2 = run(dict(cfg), out=str(tmp_path))
    assert d1.endswith("run-001") and d2.endswith("run-002")
    lines = (tmp_path / "runs.jsonl").read_text().strip().splitlines()
    assert len(lines) == 2
    assert json.loads(lines[0])["pipeline"] == "capacity"


def test_invalid_config_raises(tmp_path):
    with pytest.raises(ConfigurationError):
        run({"pipeline": "capacity"}, out=str(tmp_path))


def test_determinism_bit_identical(tmp_path):
    for cfg_fn in (small_es_config, small_bell_config, small_state_config):
        cfg = cfg_fn()
        r1, _ = run(dict(cfg), out=str(tmp_path / "a"))
        r2, _ = run(dict(cfg), out=str(tmp_path / "b"), threads=2)
        assert (json.dumps(r1["summary_metrics"], sort_keys=True)
                == json.dumps(r2["summary_metrics"], sort_keys=True))


def test_seed_changes_stochastic_metrics(tmp_path):
    r1, _ = run(small_es_config(seed=11), out=str(tmp_path))
    r2, _ = run(small_es_config(seed=12), out=str(tmp_path))
    assert (r1["summary_metrics"]["negativity_post"]
            != r2["summary_metrics"]["negativity_post"])


def test_entanglement_report_contents(tmp_path):
    cfg = small_es_config()
    cfg["comparison"] = {"negativity": 0.643, "S": 2.150,
                         "label": "measured reference values"}
    report, run_dir = run(cfg, out=str(tmp_path))
    m = report["summary_metrics"]
    assert m["herald"] == pytest.approx(0.2, abs=1e-12)
    assert m["mes_weight"] == pytest.approx(0.69625)
    # uniform loss does not disturb the stored state
    assert m["fidelity_in_out"] > 0.9
    assert report["comparison"]["model_gap_flag"] is True
    assert report["comparison"]["reference"]["negativity"] == 0.643
    assert any("not isotropic" in note for note in report["notes"])
    counts = (tmp_path / "run-001" / report["artifacts"]["counts_pre"]).read_text()
    assert counts.startswith("setting_i,setting_j,counts,exposure")


def test_afc_report_metrics(tmp_path):
    report, _ = run(small_afc_config(), out=str(tmp_path))
    m = report["summary_metrics"]
    assert abs(m["eta_echo"] - 0.20) <= 0.02
    assert abs(m["t_echo_s"] - 40e-9) <= m["dt_s"]
    assert m["sweep_max_abs_diff"] <= 0.02


def test_mode_scan_report_metrics(tmp_path):
    report, run_dir = run(small_scan_config(), out=str(tmp_path))
    m = report["summary_metrics"]
    assert m["v_after_last"] == pytest.approx(0.97, abs=1e-9)
    assert m["v_after_first"] > m["v_after_last"]
    rows = (tmp_path / "run-001" / report["artifacts"]["scan"]).read_text()
    assert rows.splitlines()[0] == "l,eta,p_plus,p_minus,v_before,v_after"
    assert len(rows.splitlines()) == 7  # header + l = 0..5
