import csv

import pytest

from molheat import database, materials as M
from molheat.errors import DomainError


def _same_cell(a: str, b: str) -> bool:
    if a == b:
        return True
    try:
        return float(a) == float(b)
    except ValueError:
        return False


def _rows(path):
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


def test_shipped_molecules_round_trip():
    raw = _rows(database.data_dir() / "molecules.csv")
    assert len(raw) == 14
    for row in raw:
        out = database.molecule_row(database.parse_molecule(row))
        for key in database.MOLECULE_FIELDS:
            assert _same_cell(row[key], out[key]), (row["name"], key, row[key], out[key])


def test_shipped_materials_round_trip():
    raw = _rows(database.data_dir() / "materials.csv")
    for row in raw:
        out = database.material_row(database.parse_material(row))
        for key in database.MATERIAL_FIELDS:
            want = row[key]
            if key == "mu_re" and not want and row["model"] == "constant":
                want = "1"
            if key in ("mu_im", "eps_im", "eps_re") and not want and row["model"] == "constant":
                want = "0"
            assert _same_cell(want, out[key]), (row["name"], key, want, out[key])


def test_dump_and_reload(tmp_path):
    mols = database.load_molecules()
    text = database.dump_csv([database.molecule_row(m) for m in mols.values()],
                             database.MOLECULE_FIELDS)
    p = tmp_path / "m.csv"
    p.write_text(text)
    again = database.load_molecules(p)
    assert again == mols


def test_shipped_content():
    mols = database.load_molecules()
    mats = database.load_materials()
    assert mols["OH"].A_so == pytest.approx(-4.189e12)
    assert mols["NH"].d_vib_override == pytest.approx((1.8e-31) ** 2)
    assert mats["Au"] == M.Drude(1.37e16, 4.12e13, "Au")
    drude = [n for n, m in mats.items() if isinstance(m, M.Drude)]
    assert len(drude) == 12
    assert database.resolve_material(mats, "glass", "rot").eps == 6.2 + 0.21j
    assert database.resolve_material(mats, "glass", "vib").eps == 6.4 + 0.74j
    with pytest.raises(KeyError):
        database.resolve_material(mats, "unobtainium", "rot")


def test_data_dir_env_override(tmp_path, monkeypatch):
    (tmp_path / "molecules.csv").write_text(
        ",".join(database.MOLECULE_FIELDS) + "\nXY,Sigma1,10,5,1,1,10,,\n")
    monkeypatch.setenv("MOLHEAT_DATA_DIR", str(tmp_path))
    assert database.data_dir() == tmp_path
    assert list(database.load_molecules()) == ["XY"]


def test_bad_header_and_values(tmp_path):
    p = tmp_path / "bad.csv"
    p.write_text("name,model\nAu,drude\n")
    with pytest.raises(DomainError):
        database.load_materials(p)
    p.write_text(",".join(database.MATERIAL_FIELDS) + "\nX,drude,abc,1,,,,\n")
    with pytest.raises(DomainError):
        database.load_materials(p)
    p.write_text(",".join(database.MATERIAL_FIELDS) + "\nX,lorentz,1,1,,,,\n")
    with pytest.raises(DomainError):
        database.load_materials(p)


def test_tabulated_material(tmp_path):
    (tmp_path / "film.csv").write_text(
        "omega_rad_s,eps_re,eps_im,mu_re,mu_im\n1e12,2,1,1,0\n1e14,4,3,1,0\n")
    (tmp_path / "materials.csv").write_text(
        ",".join(database.MATERIAL_FIELDS) + "\nfilm,table:film.csv,,,,,,\n")
    mats = database.load_materials(tmp_path / "materials.csv")
    eps, _ = M.eval_material(mats["film"], 1e13)
    assert eps == pytest.approx(3 + 2j)
    with pytest.raises(DomainError):
        database.material_row(mats["film"])
