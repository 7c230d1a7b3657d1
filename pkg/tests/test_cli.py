import csv
import json

import pytest

from qdtau.cli import main

REF_CONFIG = {
    "zeros": [[0.0, 0.0]],
    "poles": [[1.0, 0.0], [-1.0, 0.0], [2.0, 0.0], [-2.0, 0.0], [0.5, 0.0]],
    "scale": [1.0, 0.0],
    "tolerance": 1e-10,
    "pairing": [[4, 2], [0, 5], [1, 3]],
}


@pytest.fixture
def ref_config_path(tmp_path):
    p = tmp_path / "ref.json"
    p.write_text(json.dumps(REF_CONFIG))
    return str(p)


def run(args, out=None):
    argv = list(args)
    if out is not None:
        argv += ["--out", str(out)]
    code = main(argv)
    report = json.loads(out.read_text()) if out is not None else None
    return code, report


def test_kappa_principal(tmp_path):
    code, rep = run(["kappa", "--genus", "0",
                     "--signature", "1,-1,-1,-1,-1,-1"],
                    tmp_path / "r.json")
    assert code == 0
    assert rep["results"] == {"kappa_plus": "-40/3", "kappa_minus": "56/3"}
    assert rep["schema"] == "qdtau-report/1"


def test_kappa_bad_signature():
    assert main(["kappa", "--signature", "1,spam"]) == 2


def test_kappa_inconsistent_signature():
    # orders must satisfy the genus-0 degree constraint
    assert main(["kappa", "--genus", "0", "--signature", "1,1"]) == 2


def test_unknown_command():
    assert main(["frobnicate"]) == 2


def test_picard_verify(tmp_path):
    code, rep = run(["picard", "verify", "--genus", "2", "--n", "1"],
                    tmp_path / "r.json")
    assert code == 0
    assert rep["passed"] is True
    assert set(rep["results"].values()) == {"0"}


def test_picard_classes(tmp_path):
    code, rep = run(["picard", "classes", "--genus", "0", "--n", "5"],
                    tmp_path / "r.json")
    assert code == 0
    lam = rep["results"]["lambda"]
    assert lam["lambda"] == "1"
    assert all(v == "0" for k, v in lam.items() if k != "lambda")
    assert rep["results"]["delta_inf"]["phi"] == "-5"


def test_picard_rejects_empty_moduli():
    assert main(["picard", "verify", "--genus", "0", "--n", "1"]) == 2


def test_periods_report(ref_config_path, tmp_path):
    code, rep = run(["periods", "--config", ref_config_path],
                    tmp_path / "r.json")
    assert code == 0
    assert rep["results"]["genus"] == 2
    assert len(rep["results"]["omega_minus"]) == 2
    assert len(rep["results"]["homological_coords"]) == 4
    assert rep["diagnostics"]["omega_symmetry_defect"] < 1e-8
    assert rep["diagnostics"]["omega_imag_min_eig"] > 0


def test_periods_missing_config(tmp_path):
    assert main(["periods", "--config", str(tmp_path / "nope.json")]) == 2


def test_periods_malformed_config(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text("{not json")
    assert main(["periods", "--config", str(p)]) == 2


def test_periods_invalid_geometry(tmp_path):
    cfg = dict(REF_CONFIG, zeros=[[1.0, 0.0]])  # zero collides with a pole
    del cfg["pairing"]
    p = tmp_path / "bad.json"
    p.write_text(json.dumps(cfg))
    assert main(["periods", "--config", str(p)]) == 2


def test_bergman_probe(ref_config_path, tmp_path):
    code, rep = run(["bergman", "--config", ref_config_path,
                     "--probe", "0.3,0.9", "-1.2,0.4"],
                    tmp_path / "r.json")
    assert code == 0
    re, im = rep["results"]["bhat"]
    assert abs(complex(re, im)) > 0
    assert rep["diagnostics"]["correction_defect"] < 1e-8


def test_tau_scaling(ref_config_path, tmp_path):
    code, rep = run(["tau", "scaling", "--config", ref_config_path],
                    tmp_path / "r.json")
    assert code == 0
    assert abs(rep["results"]["euler_pairing_plus"][0] + 40.0 / 3.0) < 1e-4
    assert abs(rep["results"]["euler_pairing_minus"][0] - 56.0 / 3.0) < 1e-4
    assert all(c["passed"] for c in rep["checks"])


def test_tau_degenerate_csv(tmp_path, capsys):
    out = tmp_path / "samples.csv"
    code = main(["tau", "degenerate", "--kind", "zero-pole",
                 "--out", str(out)])
    assert code == 0
    rep = json.loads(capsys.readouterr().out)
    assert abs(rep["results"]["gamma_plus"] + 8.0 / 3.0) < 0.05
    assert abs(rep["results"]["gamma_minus"] - 40.0 / 3.0) < 0.05
    with out.open() as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["t_abs", "re_dlogtau_p", "im_dlogtau_p",
                       "re_dlogtau_m", "im_dlogtau_m",
                       "gamma_running_p", "gamma_running_m"]
    assert len(rows) == 12
    assert all(len(r) == 7 for r in rows[1:])
    # |t| shrinks along the schedule
    t_abs = [float(r[0]) for r in rows[1:]]
    assert all(a > b for a, b in zip(t_abs, t_abs[1:]))


def test_tau_basis_change(tmp_path):
    sig = tmp_path / "sigma.json"
    sig.write_text(json.dumps(
        {"sigma": [[1, 0, 1, 0], [0, 1, 0, 0],
                   [0, 0, 1, 0], [0, 0, 0, 1]]}))
    code, rep = run(["tau", "basis-change", "--sigma", str(sig)],
                    tmp_path / "r.json")
    assert code == 0
    assert rep["results"]["plus_residual"] < 1e-8
    assert rep["results"]["minus_residual"] < 1e-8


def test_tau_basis_change_rejects_non_symplectic(tmp_path):
    sig = tmp_path / "sigma.json"
    sig.write_text(json.dumps([[1, 0, 0, 0], [0, 1, 0, 0],
                               [0, 0, 2, 0], [0, 0, 0, 1]]))
    assert main(["tau", "basis-change", "--sigma", str(sig)]) == 2


def test_suite_quick_byte_stable(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert main(["suite", "--out", str(a)]) == 0
    assert main(["suite", "--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    rep = json.loads(a.read_text())
    assert rep["passed"] is True
    assert rep["results"]["n_passed"] == rep["results"]["n_checks"]
