"""Command-line interface.

Subcommands
-----------
freespace    per-channel free-space heating rates and lifetimes
scan         heating rates versus distance from a surface
critical     near-field scale and critical distance per molecule/material
populations  rate-equation evolution of a level ladder

Exit codes: 0 success, 2 input error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import warnings
from concurrent.futures import ProcessPoolExecutor
from typing import Iterable, List, Sequence

import numpy as np

from . import database, rates, scales, spectro
from .constants import c, um
from .errors import DomainError, QuadratureError, RangeError, RootNotFoundError
from .greens import QuadratureSpec
from .materials import Drude, HalfSpace, Slab, VACUUM, eval_material

EXIT_OK, EXIT_INPUT, EXIT_NUMERIC = 0, 2, 3


class InputError(Exception):
    pass


# --- output ----------------------------------------------------------------------

def _fmt(v):
    if isinstance(v, (float, np.floating)):
        return f"{float(v):.6g}"
    return str(v)


def _json_value(v):
    if isinstance(v, (float, np.floating)):
        v = float(f"{float(v):.6g}")
        return v if math.isfinite(v) else None
    return v


def write_rows(rows: Sequence[dict], fields: Sequence[str], fmt: str, out) -> None:
    if fmt == "csv":
        out.write(",".join(fields) + "\n")
        for r in rows:
            out.write(",".join(_fmt(r[f]) for f in fields) + "\n")
    else:
        for r in rows:
            out.write(json.dumps({f: _json_value(r[f]) for f in fields}) + "\n")


def _map(fn, items: List, jobs: int) -> List:
    if jobs <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, items))


# --- argument helpers ------------------------------------------------------------

def _csv_list(s: str) -> List[str]:
    return [x.strip() for x in s.split(",") if x.strip()]


def _floats(s: str) -> List[float]:
    try:
        return [float(x) for x in _csv_list(s)]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {s!r}")


def _spec(args) -> QuadratureSpec:
    return QuadratureSpec(rel_tol=args.tol) if args.tol is not None else QuadratureSpec()


def _molecules(args, names=None):
    db = database.load_molecules(args.molecule_db)
    names = names if names is not None else (_csv_list(args.molecule) if args.molecule else list(db))
    missing = [n for n in names if n not in db]
    if missing:
        raise InputError(f"unknown molecule(s): {', '.join(missing)}")
    return [db[n] for n in names]


def _material_db(args):
    return database.load_materials(args.material_db)


def _material(db, name, channel):
    try:
        return database.resolve_material(db, name, channel)
    except KeyError:
        raise InputError(f"unknown material: {name}") from None


def _reflector(db, args, material, channel):
    mat = _material(db, material, channel)
    if args.thickness is None:
        return HalfSpace(mat)
    sub = _material(db, args.substrate, channel) if args.substrate else VACUUM
    return Slab(mat, args.thickness * um, sub)


def _channel_kinds(sel):
    return ("rot", "vib") if sel == "all" else (sel,)


def _transitions(mol, kind):
    return spectro.rotational_channels(mol) if kind == "rot" else [spectro.vibrational_channel(mol)]


# --- freespace ---------------------------------------------------------------------

FREESPACE_FIELDS = ["molecule", "channel", "freq_GHz", "d2_Cm2", "d2_over_mue2", "T_K",
                    "rate_per_s", "lifetime_s"]


def cmd_freespace(args, out) -> int:
    mols = _molecules(args)
    temps = args.T
    rows = []
    for mol in mols:
        for kind in _channel_kinds(args.channel):
            trs = _transitions(mol, kind)
            for T in temps:
                total = 0.0
                for tr in trs:
                    g = rates.freespace_rate(tr, T)
                    total += g
                    rows.append(dict(molecule=mol.name, channel=tr.label,
                                     freq_GHz=tr.omega / (2 * math.pi * 1e9), d2_Cm2=tr.d2_total,
                                     d2_over_mue2=tr.d2_total / mol.mu_e ** 2, T_K=float(T),
                                     rate_per_s=g, lifetime_s=1.0 / g if g > 0 else math.inf))
                if len(trs) > 1:
                    d2 = sum(t.d2_total for t in trs)
                    rows.append(dict(molecule=mol.name, channel=f"{kind}(total)", freq_GHz=math.nan,
                                     d2_Cm2=d2, d2_over_mue2=d2 / mol.mu_e ** 2, T_K=float(T),
                                     rate_per_s=total,
                                     lifetime_s=1.0 / total if total > 0 else math.inf))
    write_rows(rows, FREESPACE_FIELDS, args.format, out)
    return EXIT_OK


# --- scan ----------------------------------------------------------------------------

SCAN_FIELDS = ["z_um", "rate_rot_per_s", "rate_vib_per_s", "rate_total_per_s", "error_per_s",
               "status"]


def _scan_point(task):
    z, T, channels, spec, mode = task
    out = {"rot": 0.0, "vib": 0.0}
    err = 0.0
    status = "ok"
    for kind, refl, trs in channels:
        for tr in trs:
            g0 = rates.freespace_rate(tr, T)
            try:
                if mode == "numeric":
                    ratio, e = rates.ratio_with_error(tr, z, refl, spec)
                else:
                    ratio, e = rates.surface_ratio(tr, z, refl, spec, mode), 0.0
            except QuadratureError as exc:
                status = "quadrature_failed"
                g = exc.estimate
                ratio = 1.0 + rates.green_ratio(g, tr.omega, tr.d2_z_fraction)
                e = exc.error * 6 * math.pi * c / tr.omega
            except RootNotFoundError:
                status = "root_not_found"
                ratio, e = math.nan, math.nan
            out[kind] += ratio * g0
            err += e * g0
    return out, err, status


def cmd_scan(args, out) -> int:
    if not args.molecule or "," in args.molecule:
        raise InputError("scan takes a single --molecule")
    (mol,) = _molecules(args, [args.molecule])
    if args.material is None or "," in args.material:
        raise InputError("scan takes a single --material")
    if not (1e-3 <= args.z_min < args.z_max <= 1e6):
        raise InputError("need 1e-3 <= z-min < z-max <= 1e6 (micrometres)")
    if args.points < 2:
        raise InputError("need at least two points")
    if len(args.T) != 1:
        raise InputError("scan takes a single temperature")
    db = _material_db(args)
    channels = []
    for kind in _channel_kinds(args.channel):
        refl = _reflector(db, args, args.material, kind)
        channels.append((kind, refl, _transitions(mol, kind)))
    zs = np.geomspace(args.z_min, args.z_max, args.points)
    spec = _spec(args)
    tasks = [(z * um, args.T[0], channels, spec, args.mode) for z in zs]
    results = _map(_scan_point, tasks, args.jobs)
    rows = []
    nan = math.nan
    for z, (vals, err, status) in zip(zs, results):
        rot = vals["rot"] if "rot" in _channel_kinds(args.channel) else nan
        vib = vals["vib"] if "vib" in _channel_kinds(args.channel) else nan
        rows.append(dict(z_um=z, rate_rot_per_s=rot, rate_vib_per_s=vib,
                         rate_total_per_s=vals["rot"] + vals["vib"], error_per_s=err,
                         status=status))
        if status != "ok":
            print(f"warning: {status} at z = {z:g} um", file=sys.stderr)
    write_rows(rows, SCAN_FIELDS, args.format, out)
    return EXIT_OK


# --- critical ------------------------------------------------------------------------

CRITICAL_FIELDS = ["molecule", "channel", "material", "freq_GHz", "z_nr_um", "z_c_um",
                   "z_c_empirical_um"]


def _critical_cell(task):
    mol_name, tr, mat_name, refl, spec = task
    eps, _ = eval_material(refl.material, tr.omega)
    z_nr = scales.z_nonretarded(tr.omega, eps)
    emp = math.nan
    if isinstance(refl.material, Drude):
        emp = scales.empirical_zc(tr.omega, refl.material.omega_P, refl.material.gamma)
    note = None
    try:
        z_c = scales.critical_distance(tr, refl, spec).z_c
    except (RootNotFoundError, QuadratureError) as exc:
        z_c = math.nan
        note = str(exc)
    row = dict(molecule=mol_name, channel=tr.label, material=mat_name,
               freq_GHz=tr.omega / (2 * math.pi * 1e9), z_nr_um=z_nr / um, z_c_um=z_c / um,
               z_c_empirical_um=emp / um)
    return row, note


def cmd_critical(args, out) -> int:
    mols = _molecules(args)
    db = _material_db(args)
    mats = _csv_list(args.material) if args.material else ["Au"]
    spec = _spec(args)
    tasks = []
    for mol in mols:
        for kind in _channel_kinds(args.channel):
            for tr in _transitions(mol, kind):
                for m in mats:
                    tasks.append((mol.name, tr, m, _reflector(db, args, m, kind), spec))
    results = _map(_critical_cell, tasks, args.jobs)
    for row, note in results:
        if note:
            print(f"warning: {row['molecule']} {row['channel']} on {row['material']}: {note}",
                  file=sys.stderr)
    write_rows([r for r, _ in results], CRITICAL_FIELDS, args.format, out)
    return EXIT_OK


# --- populations -----------------------------------------------------------------------

def _levels_from_file(path):
    with open(path) as fh:
        spec = json.load(fh)
    try:
        levels = [(str(l), float(e)) for l, e in spec["levels"]]
        d2 = np.array(spec["dipoles"], dtype=float)
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"{path}: expected {{'levels': [[label, energy_J], ...], "
                         f"'dipoles': [[...]]}} ({exc})") from None
    return levels, d2


def cmd_populations(args, out) -> int:
    if args.levels_file:
        levels, d2 = _levels_from_file(args.levels_file)
    else:
        if not args.molecule:
            raise InputError("populations needs --molecule or --levels-file")
        (mol,) = _molecules(args, [args.molecule])
        levels, d2 = rates.rigid_rotor_ladder(mol.B_e, mol.mu_e, args.levels)
    if len(args.T) != 1:
        raise InputError("populations takes a single temperature")
    T = args.T[0]
    z = refl = None
    if args.z is not None:
        if not args.material:
            raise InputError("--z needs --material")
        refl = _reflector(_material_db(args), args, args.material, "rot")
        z = args.z * um
    rm = rates.build_rate_matrix(levels, d2, T, z, refl, _spec(args))
    target = rates.steady_state(rm)
    nonzero = rm.gamma[rm.gamma > 0]
    if nonzero.size == 0:
        raise InputError("no transitions connect the levels")
    t_end = 1.0 / nonzero.max()
    for _ in range(200):
        if np.max(np.abs(rates.evolve_populations(rm, t_end) - target)) < 1e-6:
            break
        t_end *= 2.0
    else:
        raise ArithmeticError("populations did not reach the steady state")
    ts = np.concatenate([[0.0], np.geomspace(t_end * 1e-4, t_end, args.points - 1)])
    fields = ["t_s"] + list(rm.labels)
    rows = []
    for t in ts:
        p = rates.evolve_populations(rm, t)
        if not np.all(np.isfinite(p)):
            raise ArithmeticError("non-finite populations")
        rows.append(dict(zip(fields, [float(t)] + [float(x) for x in p])))
    write_rows(rows, fields, args.format, out)
    return EXIT_OK


# --- entry point ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--molecule-db", default=None, help="molecule CSV (default: shipped)")
    common.add_argument("--material-db", default=None, help="material CSV (default: shipped)")
    common.add_argument("--format", choices=("csv", "jsonl"), default="csv")
    common.add_argument("--jobs", type=int, default=1, help="worker processes for grids")
    common.add_argument("--tol", type=float, default=None, help="quadrature relative tolerance")
    common.add_argument("--T", type=_floats, default=[293.0], help="temperature(s) in K")
    common.add_argument("--channel", choices=("rot", "vib", "all"), default="all")
    common.add_argument("--molecule", default=None, help="molecule name(s), comma separated")
    common.add_argument("--material", default=None, help="material name(s), comma separated")
    common.add_argument("--thickness", type=float, default=None, help="slab thickness in um")
    common.add_argument("--substrate", default=None, help="slab substrate material")

    p = argparse.ArgumentParser(prog="molheat", description=__doc__.splitlines()[0],
                                formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("freespace", parents=[common], help="free-space rates and lifetimes")

    s = sub.add_parser("scan", parents=[common], help="rates versus distance")
    s.add_argument("--z-min", type=float, default=1.0, help="um")
    s.add_argument("--z-max", type=float, default=500.0, help="um")
    s.add_argument("--points", type=int, default=50)
    s.add_argument("--mode", choices=rates.MODES, default="numeric")

    sub.add_parser("critical", parents=[common], help="z_nr and z_c tables")

    q = sub.add_parser("populations", parents=[common], help="level populations versus time")
    q.add_argument("--levels", type=int, default=5, help="rigid-rotor levels N = 0..levels-1")
    q.add_argument("--levels-file", default=None, help="JSON with levels and dipoles")
    q.add_argument("--z", type=float, default=None, help="distance from the surface in um")
    q.add_argument("--points", type=int, default=40)
    return p


COMMANDS = {"freespace": cmd_freespace, "scan": cmd_scan, "critical": cmd_critical,
            "populations": cmd_populations}


def main(argv: Iterable[str] = None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    if any(T < 0 for T in args.T):
        print("error: temperatures must be non-negative", file=sys.stderr)
        return EXIT_INPUT
    if args.jobs < 1:
        print("error: --jobs must be at least 1", file=sys.stderr)
        return EXIT_INPUT
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("default")
            return COMMANDS[args.command](args, out)
    except (InputError, DomainError, RangeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (ArithmeticError, RootNotFoundError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
