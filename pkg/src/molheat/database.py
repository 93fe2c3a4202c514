"""CSV databases of molecules and materials.

The shipped files live in ``molheat/data``; the ``MOLHEAT_DATA_DIR``
environment variable points the loaders at another directory.
"""

from __future__ import annotations

import csv
import io
import math
import os
from pathlib import Path
from typing import Dict, Optional

from .errors import DomainError
from .materials import Constant, Drude, MaterialModel, Table
from .spectro import Molecule

MOLECULE_FIELDS = ["name", "state", "Be_GHz", "we_THz", "mue_1e-30Cm", "muep_1e-21C",
                   "m_1e-27kg", "A_THz", "dvib_Cm"]
MATERIAL_FIELDS = ["name", "model", "omegaP_rad_s", "gamma_rad_s", "eps_re", "eps_im",
                   "mu_re", "mu_im"]


def data_dir() -> Path:
    env = os.environ.get("MOLHEAT_DATA_DIR")
    return Path(env) if env else Path(__file__).with_name("data")


def _num(row, key, scale=1.0) -> Optional[float]:
    s = (row.get(key) or "").strip()
    if not s:
        return None
    try:
        return float(s) * scale
    except ValueError:
        raise DomainError(f"row {row.get('name')!r}: bad number {s!r} in column {key}") from None


def _fmt(x: Optional[float], scale=1.0) -> str:
    if x is None:
        return ""
    return f"{x / scale:.12g}"


def _check_header(reader, expected, path):
    if reader.fieldnames != expected:
        raise DomainError(f"{path}: expected header {','.join(expected)}")


def parse_molecule(row) -> Molecule:
    dvib = _num(row, "dvib_Cm")
    return Molecule(
        name=row["name"].strip(),
        ground_state_label=row["state"].strip(),
        B_e=_num(row, "Be_GHz", 1e9),
        omega_e=_num(row, "we_THz", 1e12),
        mu_e=_num(row, "mue_1e-30Cm", 1e-30),
        mu_e_prime=_num(row, "muep_1e-21C", 1e-21),
        m_reduced=_num(row, "m_1e-27kg", 1e-27),
        A_so=_num(row, "A_THz", 1e12),
        d_vib_override=None if dvib is None else dvib ** 2,
    )


def molecule_row(m: Molecule) -> Dict[str, str]:
    return {
        "name": m.name, "state": m.ground_state_label,
        "Be_GHz": _fmt(m.B_e, 1e9), "we_THz": _fmt(m.omega_e, 1e12),
        "mue_1e-30Cm": _fmt(m.mu_e, 1e-30), "muep_1e-21C": _fmt(m.mu_e_prime, 1e-21),
        "m_1e-27kg": _fmt(m.m_reduced, 1e-27), "A_THz": _fmt(m.A_so, 1e12),
        "dvib_Cm": _fmt(None if m.d_vib_override is None else math.sqrt(m.d_vib_override)),
    }


def parse_material(row, base: Optional[Path] = None) -> MaterialModel:
    name = row["name"].strip()
    model = row["model"].strip().lower()
    if model == "drude":
        return Drude(_num(row, "omegaP_rad_s"), _num(row, "gamma_rad_s"), name=name)
    if model == "constant":
        eps = complex(_num(row, "eps_re") or 0.0, _num(row, "eps_im") or 0.0)
        mu_re = _num(row, "mu_re")
        mu = complex(1.0 if mu_re is None else mu_re, _num(row, "mu_im") or 0.0)
        return Constant(eps, mu, name=name)
    if model.startswith("table:"):
        path = Path(row["model"].strip()[6:])
        if base is not None and not path.is_absolute():
            path = base / path
        return load_table(path, name)
    raise DomainError(f"material {name!r}: unknown model {row['model']!r}")


def material_row(m: MaterialModel) -> Dict[str, str]:
    row = dict.fromkeys(MATERIAL_FIELDS, "")
    row["name"] = m.name
    if isinstance(m, Drude):
        row.update(model="drude", omegaP_rad_s=_fmt(m.omega_P), gamma_rad_s=_fmt(m.gamma))
    elif isinstance(m, Constant):
        e, u = complex(m.eps), complex(m.mu)
        row.update(model="constant", eps_re=_fmt(e.real), eps_im=_fmt(e.imag),
                   mu_re=_fmt(u.real), mu_im=_fmt(u.imag))
    else:
        raise DomainError("tabulated materials are stored in their own files")
    return row


def load_table(path, name="") -> Table:
    """Read ``omega_rad_s,eps_re,eps_im,mu_re,mu_im`` rows into a Table."""
    rows = []
    with open(path, newline="") as fh:
        for r in csv.DictReader(fh):
            rows.append((float(r["omega_rad_s"]),
                         complex(float(r["eps_re"]), float(r["eps_im"])),
                         complex(float(r.get("mu_re") or 1.0), float(r.get("mu_im") or 0.0))))
    return Table(tuple(rows), name=name or Path(path).stem)


def load_molecules(path=None) -> Dict[str, Molecule]:
    path = Path(path) if path else data_dir() / "molecules.csv"
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        _check_header(reader, MOLECULE_FIELDS, path)
        return {m.name: m for m in map(parse_molecule, reader)}


def load_materials(path=None) -> Dict[str, MaterialModel]:
    path = Path(path) if path else data_dir() / "materials.csv"
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        _check_header(reader, MATERIAL_FIELDS, path)
        return {m.name: m for m in (parse_material(r, path.parent) for r in reader)}


def dump_csv(rows, fields) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n")
    w.writeheader()
    w.writerows(rows)
    return buf.getvalue()


def resolve_material(db: Dict[str, MaterialModel], name: str, channel: str) -> MaterialModel:
    """Look up ``name_<channel>`` first (band-specific constants such as
    glass), then ``name``."""
    for key in (f"{name}_{channel}", name):
        if key in db:
            return db[key]
    raise KeyError(name)
