"""Suite runner configs, report serialization, and the command line front end."""

import json
import subprocess
import sys

import numpy as np
import pytest

import hyperslice.suites as su
from hyperslice.algebra import OCTONION, QUATERNION
from hyperslice.cli import main
from hyperslice.integral import QuadratureSpec

FAST_YAML = """
suite: spherical
algebra: octonion
n: 2
seed: 3
samples: 50
quadrature:
  angular_nodes: 16
  radial_nodes: 8
  volume_refinement: 1
"""


@pytest.fixture
def fast_config(tmp_path):
    path = tmp_path / "cfg.yaml"
    path.write_text(FAST_YAML)
    return path


def test_load_config_fields(fast_config):
    cfg = su.load_config(fast_config)
    assert cfg.suite == "spherical"
    assert cfg.algebra == OCTONION
    assert cfg.seed == 3 and cfg.samples == 50
    assert cfg.quadrature == QuadratureSpec(16, 8, 1)


def test_load_config_overrides(fast_config):
    cfg = su.load_config(fast_config, {"suite": "products", "seed": 9})
    assert cfg.suite == "products" and cfg.seed == 9


def test_load_config_rejects_unknown_field(tmp_path):
    path = tmp_path / "bad.yaml"
    path.write_text("suite: algebra\nbogus: 1\n")
    with pytest.raises(ValueError, match="bogus"):
        su.load_config(path)
    path.write_text("suite: nosuchsuite\n")
    with pytest.raises(ValueError, match="nosuchsuite"):
        su.load_config(path)


def test_config_functions_loading(tmp_path):
    import hyperslice as hs
    from hyperslice.stem import stem_polynomial_to_json

    poly = hs.stem_polynomial(OCTONION, 2, {(1, 1): hs.one(OCTONION)})
    fpath = tmp_path / "fns.json"
    fpath.write_text(json.dumps([stem_polynomial_to_json(poly)]))
    cpath = tmp_path / "cfg.yaml"
    cpath.write_text("suite: products\nfunctions:\n  - fns.json\n")
    cfg = su.load_config(cpath)
    assert len(cfg.functions) == 1 and cfg.functions[0].arity == 2


def test_run_suite_deterministic_reports(fast_config):
    cfg = su.load_config(fast_config)
    r1 = su.run_suite(cfg)
    r2 = su.run_suite(cfg)
    assert r1 == r2  # equality ignores wall clock
    assert su.report_to_json(r1) == su.report_to_json(r2)
    r3 = su.run_suite(su.load_config(fast_config, {"seed": 4}))
    assert r1 != r3


def test_report_json_round_trip_and_stability(fast_config):
    cfg = su.load_config(fast_config)
    r = su.run_suite(cfg)
    text = su.report_to_json(r)
    back = su.report_from_json(text)
    assert back == r
    assert su.report_to_json(back) == text  # idempotent after first formatting
    data = json.loads(text)
    assert data["overall_pass"] is True
    assert list(data) == sorted(data)


def test_report_csv_header_and_rows(fast_config):
    cfg = su.load_config(fast_config)
    r = su.run_suite(cfg)
    csv_text = su.report_to_csv(r)
    lines = csv_text.strip().splitlines()
    assert lines[0] == "name,pass,metric,tolerance,M,R,V,abs_error,wall_ms"
    assert len(lines) == 1 + len(r.records)


def test_tolerance_overrides_apply(tmp_path):
    path = tmp_path / "cfg.yaml"
    path.write_text(
        "suite: spherical\nsamples: 20\ntolerances:\n  reconstruction_identity: 1.0e-30\n"
    )
    r = su.run_suite(su.load_config(path))
    rec = {x.name: x for x in r.records}["reconstruction_identity"]
    assert rec.tolerance == 1e-30
    assert not rec.passed
    assert not r.overall_pass


def test_all_suite_contains_mirror(tmp_path):
    path = tmp_path / "cfg.yaml"
    path.write_text("suite: all\nsamples: 10\nquadrature: {angular_nodes: 16, radial_nodes: 8, volume_refinement: 1}\n")
    cfg = su.load_config(path)
    r = su.run_suite(cfg)
    names = [rec.name for rec in r.records]
    assert any(n.startswith("algebra/") for n in names)
    assert any(n.startswith("zeros/") for n in names)
    assert any("[quaternion]/" in n for n in names)


def test_random_polynomial_and_units_determinism():
    rng1 = np.random.default_rng(5)
    rng2 = np.random.default_rng(5)
    p1 = su.random_polynomial(OCTONION, 2, 3, rng1)
    p2 = su.random_polynomial(OCTONION, 2, 3, rng2)
    assert dict(p1.terms).keys() == dict(p2.terms).keys()
    units = su.separated_units(QUATERNION, rng1, 3, min_sep=0.3)
    for i in range(3):
        for j in range(i + 1, 3):
            assert (units[i].value - units[j].value).norm() >= 0.3


def test_cli_text_and_exit_codes(fast_config, capsys):
    code = main(["run", "--config", str(fast_config)])
    out = capsys.readouterr().out
    assert code == 0
    assert "overall: PASS" in out


def test_cli_json_out_file(fast_config, tmp_path, capsys):
    out_path = tmp_path / "report.json"
    code = main(["run", "--config", str(fast_config), "--format", "json", "--out", str(out_path)])
    capsys.readouterr()
    assert code == 0
    data = json.loads(out_path.read_text())
    assert data["suite"] == "spherical"


def test_cli_failure_exit_code(tmp_path, capsys):
    path = tmp_path / "cfg.yaml"
    path.write_text(
        "suite: spherical\nsamples: 10\ntolerances:\n  reconstruction_identity: 1.0e-30\n"
    )
    assert main(["run", "--config", str(path)]) == 1
    capsys.readouterr()


def test_cli_config_error_exit_code(tmp_path, capsys):
    missing = tmp_path / "nope.yaml"
    assert main(["run", "--config", str(missing)]) == 2
    err = capsys.readouterr().err
    assert "config error" in err


def test_cli_suite_override(fast_config, capsys):
    code = main(["run", "--config", str(fast_config), "--suite", "algebra"])
    out = capsys.readouterr().out
    assert code == 0
    assert "octonion_nonassociative_witness" in out


def test_cli_table_output(capsys):
    assert main(["table", "--algebra", "octonion"]) == 0
    out = capsys.readouterr().out
    assert "octonion basis products" in out
    rows = [line for line in out.splitlines() if line.startswith("e")]
    assert len(rows) == 8
    # e1 row: e1*e1 = -e0, e1*e2 = +e3
    assert "-e0" in rows[1] and "+e3" in rows[1]

    assert main(["table", "--algebra", "quaternion"]) == 0
    out = capsys.readouterr().out
    assert "quaternion basis products" in out


def test_cli_byte_identical_output_subprocess(fast_config, tmp_path):
    outs = []
    for k in range(2):
        path = tmp_path / f"r{k}.json"
        subprocess.run(
            [sys.executable, "-m", "hyperslice.cli", "run", "--config", str(fast_config),
             "--format", "json", "--out", str(path)],
            check=True, capture_output=True,
        )
        outs.append(path.read_bytes())
    assert outs[0] == outs[1]
