import json

import numpy as np
import pytest

from parabolic_lab import cli, suites
from parabolic_lab.corpus import (CoefficientFamily, equivalence_corpus, random_boundary_data,
                                  read_manifest, scale_to_eta, write_manifest)


def test_eta_scaling_helpers():
    mem = equivalence_corpus(2)[8]
    zero = scale_to_eta(mem, 0.2, 0.0)
    assert zero.kind == "affine" and zero.params == {"slope": 0.0, "offset": 0.0}
    half = scale_to_eta(mem, 0.2, 0.1)
    assert half.params["amp_x"] == pytest.approx(0.5 * mem.params["amp_x"])
    with pytest.raises(ValueError):
        scale_to_eta(equivalence_corpus(2)[0], 0.0, 0.1)


def test_manifest_round_trip(tmp_path):
    members = equivalence_corpus(2)
    path = tmp_path / "corpus.json"
    write_manifest(path, members, {"rough_mid": {"eta": 0.1}})
    back, measured = read_manifest(path)
    assert back == members and measured["rough_mid"] == {"eta": 0.1}


def test_boundary_data_shape_and_sign():
    rng = np.random.default_rng(0)
    x = -1 + (np.arange(32) + 0.5) / 16
    t = np.arange(64) / 256
    f = random_boundary_data(rng, x, t, 5)
    assert f.shape == (5, 32, 64) and f.min() >= 0 and f.max() > 0
    assert not f[:, :, -4:].any()


def test_identity_family_is_trivial():
    fam = CoefficientFamily("identity")
    y = np.linspace(0, 1, 5)
    assert fam.trivial()
    assert np.array_equal(fam.A(y, y, y), np.broadcast_to(np.eye(2), (5, 2, 2)))
    assert not fam.B(y, y, y).any()


def test_unknown_config_key_rejected():
    with pytest.raises(KeyError):
        suites.merged({"a": 1}, {"b": 2})


def test_empty_result_writes_header(tmp_path):
    res = suites.SuiteResult("empty", ["a", "b"])
    paths = suites.emit_report(res, tmp_path)
    assert open(paths["csv"]).read() == "a,b\n"
    assert suites.validate_csv(paths["csv"], ["a", "b"])
    assert not suites.validate_csv(paths["csv"], ["a", "c"])


def test_gen_corpus_manifest(tmp_path):
    assert cli.run(["gen-corpus", "--out", str(tmp_path), "--grid", "32"]) == 0
    manifest = json.loads((tmp_path / "gen-corpus.manifest.json").read_text())
    assert manifest["passed"] and manifest["predicates"]["manifest_round_trip"]
    members, measured = read_manifest(tmp_path / "corpus.json")
    names = [m.name for m in members]
    assert "rough_mid@0" in names and measured["rough_mid@0"]["eta"] == 0.0


@pytest.mark.parametrize("cmd", ["solve", "bmo-scan"])
def test_rerun_is_byte_identical(tmp_path, cmd):
    a, b = tmp_path / "a", tmp_path / "b"
    assert cli.run([cmd, "--seed", "3", "--out", str(a)]) == 0
    assert cli.run([cmd, "--seed", "3", "--out", str(b)]) == 0
    for ext in (".csv", ".json", ".manifest.json"):
        assert (a / f"{cmd}{ext}").read_bytes() == (b / f"{cmd}{ext}").read_bytes()


def test_failing_predicate_sets_exit_code(tmp_path, capsys):
    cfg = tmp_path / "strict.json"
    cfg.write_text(json.dumps({"tol_harmonic": 1e-12, "n_fields": 2, "n_fields_3d": 0}))
    assert cli.run(["frac-op", str(cfg), "--grid", "32", "--out", str(tmp_path)]) == 1
    assert "FAIL  frac-op.harmonics_within_2pct" in capsys.readouterr().out


def test_report_collects_manifests(tmp_path):
    cli.run(["solve", "--out", str(tmp_path)])
    assert cli.run(["report", "--out", str(tmp_path)]) == 0
    rows = (tmp_path / "report.csv").read_text().splitlines()
    assert rows[0] == "suite,predicate,pass" and len(rows) > 1
