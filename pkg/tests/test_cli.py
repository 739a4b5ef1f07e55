"""Command-line interface: CSV contract, manifests, exit codes."""

import csv
import io
import json

import pytest

from rydtherm.cli import (
    EXIT_DATA,
    EXIT_NUMERIC,
    EXIT_OK,
    EXIT_USAGE,
    main,
)


def _run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def _rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_fw_basic(capsys):
    code, out, _ = _run(capsys, "fw", "--y", "1.0", "--y", "2.5")
    assert code == EXIT_OK
    rows = _rows(out)
    assert len(rows) == 2
    assert rows[0]["schema"] == "fw.v1"
    assert float(rows[0]["value_fast"]) == pytest.approx(-1.9994076, rel=1e-6)
    assert float(rows[0]["abs_diff"]) < 1e-6


def test_csv_is_rfc4180_crlf(capsys):
    code, out, _ = _run(capsys, "fig2", "--points", "3")
    assert code == EXIT_OK
    assert "\r\n" in out
    header = out.split("\r\n", 1)[0]
    assert header == "y,farley_wing,schema,manifest_id"


def test_twelve_significant_digits(capsys):
    _, out, _ = _run(capsys, "bbr", "--species", "sr", "--state", "30:3S1")
    row = _rows(out)[0]
    mantissa = row["shift_hz"].replace("-", "").replace(".", "").lstrip("0")
    assert len(mantissa) == 12


def test_byte_identical_reruns(tmp_path, capsys):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert main(["fig2", "--points", "50", "-o", str(a)]) == EXIT_OK
    assert main(["fig2", "--points", "50", "-o", str(b)]) == EXIT_OK
    capsys.readouterr()
    assert a.read_bytes() == b.read_bytes()


def test_manifest_id_excludes_output_paths(tmp_path, capsys):
    # the id names the computation, not where it was written
    a, b = tmp_path / "x.csv", tmp_path / "y.csv"
    main(["fw", "--y", "1.0", "-o", str(a)])
    main(["fw", "--y", "1.0", "-o", str(b)])
    capsys.readouterr()
    ra, rb = _rows(a.read_text()), _rows(b.read_text())
    assert ra[0]["manifest_id"] == rb[0]["manifest_id"]


def test_manifest_id_tracks_settings(capsys):
    _, out1, _ = _run(capsys, "fw", "--y", "1.0")
    _, out2, _ = _run(capsys, "fw", "--y", "1.0", "--temperature", "200")
    assert _rows(out1)[0]["manifest_id"] != _rows(out2)[0]["manifest_id"]


def test_manifest_out_file(tmp_path, capsys):
    mpath = tmp_path / "run.json"
    _, out, _ = _run(
        capsys, "fw", "--y", "1.0", "--manifest-out", str(mpath)
    )
    manifest = json.loads(mpath.read_text())
    assert manifest["manifest_id"] == _rows(out)[0]["manifest_id"]
    assert manifest["tool"] == "rydtherm"
    assert manifest["tool_version"]
    assert manifest["wall_time_s"] >= 0.0
    assert manifest["command"][:3] == ["rydtherm", "fw", "--y"]


def test_species_data_version_in_manifest(tmp_path, capsys):
    mpath = tmp_path / "run.json"
    _run(
        capsys,
        "bbr", "--species", "sr", "--state", "30:3S1",
        "--manifest-out", str(mpath),
    )
    manifest = json.loads(mpath.read_text())
    assert manifest["species"] == "Sr"
    assert manifest["species_data_version"].startswith("sr-")


def test_usage_errors_exit_2(capsys):
    assert _run(capsys, "fw")[0] == EXIT_USAGE  # no y values
    assert _run(capsys, "fig2", "--y-min", "5", "--y-max", "2")[0] == EXIT_USAGE
    assert _run(capsys, "bbr", "--state", "30:3S1")[0] == EXIT_USAGE  # no species
    assert (
        _run(capsys, "bbr", "--species", "sr", "--state", "30-3S1")[0]
        == EXIT_USAGE
    )
    assert (
        _run(capsys, "table1", "--species", "yb", "--n", ",")[0] == EXIT_USAGE
    )
    assert _run(capsys, "nonsense")[0] == EXIT_USAGE


def test_data_errors_exit_3(capsys, tmp_path):
    assert (
        _run(capsys, "bbr", "--species-file", "/no/such.species",
             "--state", "30:3S1")[0]
        == EXIT_DATA
    )
    bad = tmp_path / "bad.species"
    bad.write_text("format_version = 1\nname = Xx\n")
    assert (
        _run(capsys, "bbr", "--species-file", str(bad), "--state", "30:3S1")[0]
        == EXIT_DATA
    )
    # out-of-range n is a data-validation failure, not a crash
    assert (
        _run(capsys, "bbr", "--species", "sr", "--state", "500:3S1")[0]
        == EXIT_DATA
    )


def test_nonconvergence_exits_4_with_rows(capsys):
    code, out, err = _run(
        capsys,
        "bbr", "--species", "sr", "--state", "30:3S1", "--tolerance", "1e-9",
    )
    assert code == EXIT_NUMERIC
    rows = _rows(out)  # the table is still emitted, flagged unconverged
    assert rows[0]["converged"] == "false"
    assert "rydtherm" in err


def test_magic_no_root_exits_4(capsys):
    code, _, err = _run(
        capsys,
        "magic", "--species", "yb", "--n", "40",
        "--series", "3P0", "--k-ratio", "0.05",
    )
    # a nearly-collinear pair of beams has no root in the default bracket
    assert code in (EXIT_NUMERIC, EXIT_OK)
    if code == EXIT_NUMERIC:
        assert "numerical failure" in err


def test_bbr_both_routes(capsys):
    _, out, _ = _run(
        capsys,
        "bbr", "--species", "sr", "--state", "30:3S1", "--route", "both",
    )
    rows = _rows(out)
    assert [r["method"] for r in rows] == ["sum", "integral"]
    assert float(rows[0]["shift_hz"]) == pytest.approx(
        float(rows[1]["shift_hz"]), rel=1e-3
    )


def test_polarizability_command(capsys):
    code, out, _ = _run(
        capsys,
        "polarizability", "--species", "sr", "--state", "25:3D1",
    )
    assert code == EXIT_OK
    row = _rows(out)[0]
    assert row["schema"] == "polarizability.v1"
    assert float(row["alpha_hz_m2_v2"]) == pytest.approx(-91.8, rel=1e-2)
    code2, out2, _ = _run(
        capsys,
        "polarizability", "--species", "sr", "--state", "25:3D1",
        "--m-j", "scalar",
    )
    assert float(_rows(out2)[0]["alpha_hz_m2_v2"]) == pytest.approx(
        -141.0, rel=1e-2
    )


def test_table1_yb(capsys):
    code, out, _ = _run(capsys, "table1", "--species", "yb", "--n", "25,40")
    assert code == EXIT_OK
    rows = _rows(out)
    assert float(rows[0]["lambda_m_nm"]) == pytest.approx(1203.0, rel=0.02)
    assert float(rows[1]["lambda_m_nm"]) == pytest.approx(1142.0, rel=0.02)
    assert float(rows[0]["lambda_i_nm"]) == pytest.approx(607.8, rel=0.005)


def test_linewidth_command(capsys):
    code, out, _ = _run(
        capsys, "linewidth", "--species", "sr", "--state", "25:3D1"
    )
    assert code == EXIT_OK
    row = _rows(out)[0]
    assert float(row["total_hz"]) == pytest.approx(
        float(row["natural_hz"]) + float(row["bbr_fwhm_hz"]), rel=1e-9
    )


def test_thermo_invert_inline(capsys):
    code, out, _ = _run(
        capsys,
        "thermo", "invert", "--species", "sr", "--state", "30:3D1",
        "--offset-hz", "2350.73", "--sigma-hz", "0.16",
    )
    assert code == EXIT_OK
    row = _rows(out)[0]
    assert float(row["temperature_k"]) == pytest.approx(300.0, abs=0.05)
    assert float(row["sigma_temperature_k"]) == pytest.approx(0.01, rel=0.05)


def test_thermo_invert_requires_inputs(capsys):
    code, _, err = _run(capsys, "thermo", "invert", "--species", "sr")
    assert code == EXIT_USAGE
    assert "usage error" in err


def test_thermo_joint_from_csv(tmp_path, capsys):
    import rydtherm as rt
    from rydtherm.polarizability import static_polarizability
    from rydtherm.thermometry import transition_bbr_shift

    sr = rt.load_species("sr")
    lines = ["state,offset_hz,sigma_hz"]
    for n in (25, 30):
        st = sr.state(n, "3D1")
        offset = transition_bbr_shift(sr, st, 300.0)
        offset -= 0.5 * static_polarizability(st).value_hz_m2_v2 * 25.0
        lines.append(f"{n}:3D1,{offset:.9g},0.16")
    meas = tmp_path / "meas.csv"
    meas.write_text("\n".join(lines) + "\n")

    code, out, _ = _run(
        capsys,
        "thermo", "joint", "--species", "sr", "--measurements", str(meas),
    )
    assert code == EXIT_OK
    row = _rows(out)[0]
    assert float(row["temperature_k"]) == pytest.approx(300.0, abs=1e-3)
    assert float(row["field_v_per_m"]) == pytest.approx(5.0, abs=1e-3)


def test_thermo_budget(capsys):
    code, out, _ = _run(
        capsys,
        "thermo", "budget", "--species", "sr", "--state", "30:3D1",
        "--linewidth-hz", "3500",
    )
    assert code == EXIT_OK
    row = _rows(out)[0]
    assert float(row["temperature_sigma_k"]) == pytest.approx(0.01, rel=0.05)
    assert float(row["leverage"]) > 100.0


def test_fig3_small_grid(capsys):
    code, out, _ = _run(
        capsys,
        "fig3", "--species", "sr", "--series", "3S1",
        "--n-min", "30", "--n-max", "32",
    )
    assert code == EXIT_OK
    rows = _rows(out)
    assert [r["n"] for r in rows] == ["30", "31", "32"]
    assert all(r["converged"] == "true" for r in rows)
    assert all(r["schema"] == "fig3.v1" for r in rows)


def test_fig3_zero_temperature_column(capsys):
    code, out, _ = _run(
        capsys,
        "fig3", "--species", "sr", "--series", "3S1",
        "--n-min", "30", "--n-max", "31", "--temperature", "0",
    )
    assert code == EXIT_OK
    assert all(float(r["shift_hz"]) == 0.0 for r in _rows(out))


def test_version_and_help_exit_0(capsys):
    assert _run(capsys, "--version")[0] == 0
    with_help = main(["fig2", "--help"])
    capsys.readouterr()
    assert with_help == 0
