import json
import os
import subprocess
import sys

import pytest

from meridian4.cli import main
from meridian4.config import COLUMNS, parse_config
from meridian4.errors import ConfigError

SPHERE = {"surface": {"family": "meridian", "curve": {"kind": "great_circle"},
                      "profile": {"kind": "sphere_arc", "k": 1.0}},
          "grid": {"u": [0.4, 2.7, 10], "v": [0.0, 6.0, 10]}}
CASE_II = {"surface": {"family": "meridian", "curve": {"kind": "circle", "kappa": 0.5},
                       "profile": {"kind": "line", "theta": 1.0, "f0": 0.2}},
           "grid": {"u": [0.5, 2.0, 4], "v": [0.0, 3.0, 4]}}
SMALL_CIRCLE = {"surface": {"family": "meridian", "curve": {"kind": "circle", "kappa": 1.0},
                            "profile": {"kind": "sphere_arc", "k": 1.0}},
                "grid": {"u": [0.8, 1.5, 4], "v": [0.0, 3.0, 4]}}
IMMERSION = {"surface": {"family": "immersion", "components": ["u", "v", "u*v", "(u**2 - v**2)/2"]},
             "grid": {"u": [-0.3, 0.3, 3], "v": [-0.3, 0.3, 3]}}


def write(tmp_path, doc, name="config.json"):
    path = tmp_path / name
    path.write_text(json.dumps(doc))
    return str(path)


def read_csv(path):
    lines = open(path, newline="").read().split("\n")
    header = lines[0].split(",")
    rows = [dict(zip(header, map(float, l.split(",")))) for l in lines[1:] if l and not l.startswith("#")]
    summary = dict(l[2:].split(",", 1) for l in lines if l.startswith("# ") and "," in l)
    return header, rows, summary


def test_sphere_analysis(tmp_path):
    out = tmp_path / "out.csv"
    assert main(["analyze", "--config", write(tmp_path, SPHERE), "--out", str(out)]) == 0
    header, rows, summary = read_csv(out)
    assert header == list(COLUMNS) and len(rows) == 100
    assert all(abs(r["K"] - 1.0) < 1e-9 for r in rows)
    assert summary["classification.case"] == "I" and summary["semi_parallel"] == "true"
    assert int(summary["rows_emitted"]) + int(summary["rows_skipped"]) == int(summary["grid_size"])


def test_case_two_summary(tmp_path):
    out = tmp_path / "out.json"
    assert main(["analyze", "--config", write(tmp_path, CASE_II), "--out", str(out), "--format", "json"]) == 0
    doc = json.loads(out.read_text())
    assert doc["summary"]["classification"]["case"] == "II"
    assert doc["summary"]["semi_parallel"] is True


def test_csv_format_details(tmp_path):
    out = tmp_path / "out.csv"
    main(["analyze", "--config", write(tmp_path, CASE_II), "--out", str(out)])
    raw = out.read_bytes()
    assert b"\r" not in raw
    first = raw.split(b"\n")[1].split(b",")
    assert first[0] == b"0.5" and float(first[1]) == 0.0


def test_pole_rows_are_counted(tmp_path):
    doc = json.loads(json.dumps(SPHERE))
    doc["grid"]["u"] = [0.0, 3.0, 4]
    out = tmp_path / "out.csv"
    assert main(["analyze", "--config", write(tmp_path, doc), "--out", str(out)]) == 0
    _, rows, summary = read_csv(out)
    assert int(summary["rows_skipped"]) > 0
    assert len(rows) + int(summary["rows_skipped"]) == 40


def test_output_selection(tmp_path):
    doc = dict(SPHERE, outputs=["u", "v", "K"])
    out = tmp_path / "out.csv"
    main(["analyze", "--config", write(tmp_path, doc), "--out", str(out)])
    assert read_csv(out)[0] == ["u", "v", "K"]


def test_missing_profile_exit_two(tmp_path):
    doc = json.loads(json.dumps(SPHERE))
    del doc["surface"]["profile"]
    out = tmp_path / "out.csv"
    assert main(["analyze", "--config", write(tmp_path, doc), "--out", str(out)]) == 2
    assert not out.exists()


def test_evaluation_error_exit_three(tmp_path, capsys):
    doc = {"surface": {"family": "immersion", "components": ["u", "u", "0", "u**2"]},
           "grid": {"u": [0, 1, 2], "v": [0, 1, 2]}}
    out = tmp_path / "out.csv"
    assert main(["analyze", "--config", write(tmp_path, doc), "--out", str(out)]) == 3
    assert "(0.0, 0.0)" in capsys.readouterr().err
    assert not out.exists()


def test_deterministic_bytes(tmp_path):
    cfg = write(tmp_path, SMALL_CIRCLE)
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    main(["analyze", "--config", cfg, "--out", str(a)])
    main(["analyze", "--config", cfg, "--out", str(b)])
    assert a.read_bytes() == b.read_bytes()


@pytest.mark.parametrize("doc,case,sp", [(SPHERE, "I", True), (SMALL_CIRCLE, "III", False)])
def test_classify(tmp_path, capsys, doc, case, sp):
    assert main(["classify", "--config", write(tmp_path, doc)]) == 0
    res = json.loads(capsys.readouterr().out)
    assert res["case"] == case and res["semi_parallel"] is sp
    if case == "I":
        assert res["theorem2_branch"] == "case_ii"


def test_classify_immersion_exit_four(tmp_path):
    assert main(["classify", "--config", write(tmp_path, IMMERSION)]) == 4


def test_verify_filter(capsys):
    assert main(["verify", "--filter", "ode-report"]) == 0
    out = capsys.readouterr().out
    assert "PASS ode-report" in out and "INFO ode-report" in out and "numkit" not in out


def test_verify_filter_meridian(capsys):
    main(["verify", "--filter", "curves"])
    assert "1/1 groups passed" in capsys.readouterr().out


def test_verify_unknown_filter():
    assert main(["verify", "--filter", "nothing-matches"]) == 1


def test_degraded_step_fails_numeric_groups():
    env = dict(os.environ, MERIDIAN_FD_STEP="1e-1")
    proc = subprocess.run([sys.executable, "-m", "meridian4", "verify", "--filter", "numeric"],
                          capture_output=True, text=True, env=env)
    assert proc.returncode == 1
    assert "FAIL numeric-jets" in proc.stdout


class TestConfigSchema:
    @pytest.mark.parametrize("mutate", [
        lambda d: d["surface"].update(family="torus"),
        lambda d: d["surface"]["curve"].update(kind="helix"),
        lambda d: d["surface"]["profile"].update(k=-1.0),
        lambda d: d["grid"].update(u=[1.0, 0.5, 3]),
        lambda d: d["grid"].update(v=[0.0, 1.0, 1]),
        lambda d: d.update(policy={"fd_step": -1}),
        lambda d: d.update(policy={"unknown": 1}),
        lambda d: d.update(outputs=["nope"]),
        lambda d: d["surface"]["profile"].update(k="one"),
    ])
    def test_rejects(self, mutate):
        doc = json.loads(json.dumps(SPHERE))
        mutate(doc)
        with pytest.raises(ConfigError):
            parse_config(doc)

    def test_custom_curve_and_profile(self):
        doc = {"surface": {"family": "meridian", "curve": {"kind": "custom", "kappa": "0.2 + 0.1*sin(v)"},
                           "profile": {"kind": "custom", "f": "sin(u)", "g": "-cos(u)"}},
               "grid": {"u": [0.5, 2.0, 3], "v": [0.0, 1.0, 3]}}
        cfg = parse_config(doc)
        p = cfg.build().meridian.profile(1.0)
        assert p.kappa_alpha == pytest.approx(1.0, abs=1e-14)

    def test_unknown_symbol(self):
        doc = {"surface": {"family": "immersion", "components": ["u", "v", "w", "0"]},
               "grid": {"u": [0, 1, 2], "v": [0, 1, 2]}}
        with pytest.raises(ConfigError):
            parse_config(doc)

    def test_policy_override(self):
        doc = dict(SPHERE, policy={"fd_step": 1e-4, "richardson_levels": 3})
        cfg = parse_config(doc)
        assert cfg.policy.fd_step == 1e-4 and cfg.policy.richardson_levels == 3
