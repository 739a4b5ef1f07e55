"""Species data files: parsing, validation, state construction."""

import os
import shutil

import pytest

from rydtherm import constants as k
from rydtherm.species import (
    SpeciesDataError,
    bundled_species_path,
    load_species,
)


def test_names_and_versions(sr, yb, hydrogen):
    assert sr.name == "Sr"
    assert yb.name == "Yb"
    assert hydrogen.name == "H"
    for sp in (sr, yb, hydrogen):
        assert sp.data_version
        assert sp.key == f"{sp.name}:{sp.data_version}"


def test_state_quantum_numbers(sr):
    st = sr.state(30, "3S1")
    assert (st.L, st.S, st.J) == (0, 1.0, 1.0)
    st = sr.state(25, "3D2")
    assert (st.L, st.S, st.J) == (2, 1.0, 2.0)
    assert str(st) == "Sr 25 3D2"


def test_quantum_defect_lowers_n_eff(sr):
    for series in ("3S1", "3P1", "3D1"):
        st = sr.state(30, series)
        assert 0 < st.n_eff < st.n
    # defect shrinks with L: s > p > d for Sr triplets
    defects = [sr.state(30, s).n - sr.state(30, s).n_eff for s in ("3S1", "3P1", "3D1")]
    assert defects[0] > defects[1] > defects[2]


def test_binding_energy_ordering(sr):
    assert sr.state(30, "3S1").binding_au > sr.state(31, "3S1").binding_au > 0


def test_hydrogen_binding_exact(hydrogen):
    assert hydrogen.state(2, "1P1").binding_au == pytest.approx(1 / 8, rel=1e-12)
    assert hydrogen.state(1, "1S0").binding_au == pytest.approx(1 / 2, rel=1e-12)


def test_reduced_mass_shrinks_binding(sr, hydrogen):
    # hydrogen file is infinite-mass; Sr carries a finite-mass correction
    assert hydrogen.reduced_mass_factor == 1.0
    assert 0.99999 < sr.reduced_mass_factor < 1.0


def test_roles(sr, yb):
    meta = sr.metastable_state()
    assert (meta.n, meta.series) == (5, "3P0")
    assert sr.state_role(meta) == "metastable"
    assert sr.state_role(sr.state(5, "1S0")) == "ground"
    assert sr.state_role(sr.state(30, "3S1")) is None
    assert (yb.metastable_state().n, yb.metastable_state().series) == (6, "3P0")


def test_out_of_range_n_raises(sr):
    with pytest.raises(SpeciesDataError):
        sr.state(3, "3S1")
    with pytest.raises(SpeciesDataError):
        sr.state(500, "3S1")


def test_unknown_series_raises(sr):
    with pytest.raises(SpeciesDataError):
        sr.state(30, "3X1")
    with pytest.raises(SpeciesDataError):
        sr.state(30, "5S1")


def test_states_are_frozen_and_hashable(sr):
    st = sr.state(30, "3S1")
    with pytest.raises(Exception):
        st.n = 31
    assert st == sr.state(30, "3S1")
    assert len({st, sr.state(30, "3S1"), sr.state(31, "3S1")}) == 2


def test_line_lists_present(sr, yb):
    for sp in (sr, yb):
        for role in ("ground", "metastable"):
            lines, core = sp.bbr_lines[role]
            assert len(lines) >= 1
            assert core >= 0.0
            for line in lines:
                assert line.omega_au > 0
                assert line.d_au > 0
    assert len(sr.lattice_lines) >= 1
    assert sr.lattice_core_alpha_au >= 0.0


def test_ionization_limit_positive(sr, yb):
    for sp in (sr, yb):
        assert sp.ionization_limit_au > 0.2
        assert sp.clock_frequency_hz > 1e14
        assert 1000 < sp.magic_bracket_nm[1] or sp.magic_bracket_nm[0] > 1000


def test_load_by_path_matches_bundled(sr):
    by_path = load_species(bundled_species_path("sr"))
    assert by_path.key == sr.key
    assert by_path.state(30, "3S1").binding_au == sr.state(30, "3S1").binding_au


def test_env_data_dir_override(tmp_path, monkeypatch, sr):
    shutil.copy(bundled_species_path("sr"), tmp_path / "sr.species")
    monkeypatch.setenv("RYDTHERM_DATA_DIR", str(tmp_path))
    sp = load_species("sr")
    assert sp.key == sr.key


def test_missing_species_raises():
    with pytest.raises((SpeciesDataError, FileNotFoundError)):
        load_species("unobtainium")


def test_corrupt_file_raises(tmp_path):
    bad = tmp_path / "bad.species"
    bad.write_text("format_version = 1\nname = Xx\n")
    with pytest.raises(SpeciesDataError):
        load_species(str(bad))


def test_energy_au_is_negative_binding(sr):
    st = sr.state(40, "3D1")
    assert st.energy_au == pytest.approx(-st.binding_au, rel=1e-15)
    # physical scale: binding ~ 1/(2 n*^2) hartree
    assert st.binding_au == pytest.approx(
        sr.reduced_mass_factor / (2 * st.n_eff**2), rel=1e-12
    )
