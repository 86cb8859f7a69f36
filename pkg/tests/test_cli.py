"""Command-line interface: parsing, config handling, output formats and
exit codes."""

import json
import math

import pytest

from mattis.cli import main


def run(capsys, *argv):
    rc = main(list(argv))
    out = capsys.readouterr()
    return rc, out.out, out.err


def parse_csv(text):
    lines = [ln for ln in text.strip().splitlines()]
    assert lines[0].startswith("# ")
    cols = lines[1].split(",")
    rows = []
    for ln in lines[2:]:
        vals = ln.split(",")
        rows.append(dict(zip(cols, vals)))
    return lines[0], rows


def test_dispersion_rows_and_axis_values(capsys):
    rc, out, _ = run(capsys, "dispersion", "--gamma1", "0.5", "--gamma2",
                     "0.3", "--ntheta", "12", "--pmag", "0.7")
    assert rc == 0
    _, rows = parse_csv(out)
    assert len(rows) == 12
    # theta = 0 row: p on the + axis, omega_+/v_F|p| = sqrt(1-gamma1^2),
    # omega_- = 0
    first = rows[0]
    assert float(first["theta"]) == 0.0
    assert float(first["omega_plus_over_vF_p"]) == pytest.approx(
        math.sqrt(1 - 0.25), abs=1e-12)
    assert float(first["omega_minus_over_vF_p"]) == 0.0


def test_dispersion_free_sum_rule(capsys):
    rc, out, _ = run(capsys, "dispersion", "--gamma1", "0", "--gamma2", "0",
                     "--ntheta", "7")
    assert rc == 0
    _, rows = parse_csv(out)
    for row in rows:
        s = float(row["omega_plus_over_vF_p"]) ** 2 \
            + float(row["omega_minus_over_vF_p"]) ** 2
        assert s == pytest.approx(1.0, abs=1e-12)


def test_free_energy_modes(capsys):
    rc, out, _ = run(capsys, "free-energy", "--gamma1", "0.5", "--gamma2",
                     "0.5", "--beta", "1", "--mode", "qft")
    assert rc == 0
    _, rows = parse_csv(out)
    assert float(rows[0]["qft_target"]) == pytest.approx(-1.28255, abs=5e-6)
    rc, out, _ = run(capsys, "free-energy", "--gamma1", "0.5", "--gamma2",
                     "0.5", "--beta", "2", "--l-over-a", "25",
                     "--mode", "lattice-sum", "--zq-mode", "closed")
    assert rc == 0
    _, rows = parse_csv(out)
    assert "omega_B" in rows[0] and "scaled_total" in rows[0]
    rc, out, _ = run(capsys, "free-energy", "--gamma1", "0.5", "--gamma2",
                     "0.5", "--beta", "2", "--mode", "split-integral")
    assert rc == 0
    _, rows = parse_csv(out)
    assert float(rows[0]["omega_less"]) < 0.0


def test_correlator_density_and_extrapolation(capsys):
    rc, out, _ = run(capsys, "correlator", "--l-over-a", "25", "--submode",
                     "density", "--x", "1.5", "--t", "0.5",
                     "--eps-seq", "0.8,0.6,0.4")
    assert rc == 0
    _, rows = parse_csv(out)
    assert len(rows) == 3
    assert "extrap_real" in rows[0]
    # the extrapolated value is shared across rows
    assert rows[0]["extrap_real"] == rows[2]["extrap_real"]


def test_correlator_fermion2_free(capsys):
    rc, out, _ = run(capsys, "correlator", "--l-over-a", "101", "--submode",
                     "fermion2", "--x", "1.5", "--t", "0.5",
                     "--epsilon", "0.8")
    assert rc == 0
    _, rows = parse_csv(out)
    closed = (1.0 / (2 * math.pi)) / (0.8 - 1j)
    got = complex(float(rows[0]["real"]), float(rows[0]["imag"]))
    assert abs(got - closed) / abs(closed) < 0.05
    assert rows[0]["klein"] == "1"


def test_correlator_fermion_n_from_config(capsys, tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text(
        "l_over_a = 25\n"
        "epsilon = 0.8\n"
        "submode = fermionN\n"
        "# four balanced insertions on one chain\n"
        "insertions = 1,1,1,2.0,0,0; -1,1,1,1.0,0,0; "
        "1,1,1,0.5,0,0; -1,1,1,0,0,0\n")
    rc, out, _ = run(capsys, "correlator", "--config", str(cfg))
    assert rc == 0
    _, rows = parse_csv(out)
    assert rows[0]["klein"] == "2"


def test_correlator_qft2(capsys):
    rc, out, _ = run(capsys, "correlator", "--gamma1", "0.5", "--gamma2",
                     "0.5", "--submode", "qft2", "--x", "3.0", "--t", "0",
                     "--l0", "1.0", "--epsilon", "0.01")
    assert rc == 0
    _, rows = parse_csv(out)
    assert rows[0]["delta_transverse"] == "dirac"


def test_cconst_single_and_sweep(capsys):
    rc, out, _ = run(capsys, "cconst", "--gamma1", "0.6", "--gamma2", "0")
    assert rc == 0
    _, rows = parse_csv(out)
    assert float(rows[0]["C"]) == 1.0
    assert float(rows[0]["cross_scheme_diff"]) < 1e-10
    rc, out, _ = run(capsys, "cconst", "--ngamma", "5")
    assert rc == 0
    _, rows = parse_csv(out)
    assert len(rows) == 5


def test_config_equals_flags(capsys, tmp_path):
    cfg = tmp_path / "p.cfg"
    cfg.write_text("gamma1 = 0.5\ngamma2 = 0.3\nntheta = 9\npmag = 0.7\n")
    rc1, out1, _ = run(capsys, "dispersion", "--config", str(cfg))
    rc2, out2, _ = run(capsys, "dispersion", "--gamma1", "0.5", "--gamma2",
                       "0.3", "--ntheta", "9", "--pmag", "0.7")
    assert rc1 == rc2 == 0
    assert out1 == out2


def test_flags_override_config(capsys, tmp_path):
    cfg = tmp_path / "p.cfg"
    cfg.write_text("gamma1 = 0.5\nntheta = 9\n")
    rc, out, _ = run(capsys, "dispersion", "--config", str(cfg),
                     "--gamma1", "0.0", "--gamma2", "0")
    assert rc == 0
    _, rows = parse_csv(out)
    assert float(rows[0]["omega_plus_over_vF_p"]) == pytest.approx(1.0)


def test_json_output_valid(capsys):
    rc, out, _ = run(capsys, "free-energy", "--beta", "inf", "--format",
                     "json", "--mode", "lattice-sum")
    assert rc == 0
    doc = json.loads(out)
    assert doc["meta"]["subcommand"] == "free-energy"
    assert doc["meta"]["beta"] == "inf"
    assert doc["rows"][0]["omega_B"] == 0.0


def test_float_roundtrip(capsys):
    rc, out, _ = run(capsys, "cconst", "--gamma1", "0.5", "--gamma2", "0.5")
    assert rc == 0
    _, rows = parse_csv(out)
    # %.17g is lossless for doubles
    assert float(rows[0]["C"]) == pytest.approx(0.9138765720906009,
                                                rel=1e-12)


def test_invalid_parameters_exit_code(capsys):
    rc, _, err = run(capsys, "dispersion", "--gamma1", "1.5")
    assert rc == 2
    assert "error:" in err
    rc, _, err = run(capsys, "free-energy", "--l-over-a", "10")
    assert rc == 2


def test_output_file(capsys, tmp_path):
    out_path = tmp_path / "disp.csv"
    rc, out, _ = run(capsys, "dispersion", "--ntheta", "4", "--out",
                     str(out_path))
    assert rc == 0 and out == ""
    _, rows = parse_csv(out_path.read_text())
    assert len(rows) == 4
