"""Reading and writing sets, grids, supremands and reports."""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .errors import ParseError
from .setcore import DEFAULT_TOL, BoxUnion, FinitePairSet, Geometry, LatticeGrid
from .supremand import SampledSupremand


# --------------------------------------------------------------------------- JSON sets


def set_to_dict(E) -> dict:
    if isinstance(E, FinitePairSet):
        return {"kind": "finite", "m": E.m, "tol": E.tol, "points": E.points.tolist()}
    if isinstance(E, BoxUnion):
        return {"kind": "boxunion", "m": E.m, "tol": E.tol, "generators": E.generators.tolist()}
    raise TypeError(f"no JSON form for {type(E).__name__}")


def set_from_dict(d: dict):
    try:
        kind = d["kind"]
        m = int(d.get("m", 1))
        tol = float(d.get("tol", DEFAULT_TOL))
        if kind == "finite":
            pts = np.asarray(d["points"], dtype=float).reshape(-1, 2, m)
            return FinitePairSet(pts, m=m, tol=tol)
        if kind == "boxunion":
            gens = np.asarray(d["generators"], dtype=float).reshape(-1, 2, m)
            return BoxUnion(gens, m=m, tol=tol)
    except (KeyError, TypeError) as exc:
        raise ParseError(f"malformed set JSON: {exc}") from exc
    raise ParseError(f"unknown set kind {kind!r}")


def dump_json(obj: dict, path) -> None:
    Path(path).write_text(json.dumps(obj, indent=1, sort_keys=True) + "\n")


def load_json(path) -> dict:
    try:
        return json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: {exc}") from exc


# --------------------------------------------------------------------------- CSV grids


def _header(geom: Geometry) -> str:
    return "# " + " ".join(repr(v) if isinstance(v, float) else str(v) for v in geom.to_header())


def _parse_header(line: str) -> Geometry:
    if not line.startswith("#"):
        raise ParseError("grid CSV must start with a '# m lo hi ... n ...' header")
    tok = line[1:].split()
    try:
        m = int(tok[0])
        k = 2 * m
        if len(tok) != 1 + 3 * k:
            raise ParseError(f"header needs {1 + 3 * k} fields for m={m}, got {len(tok)}")
        rng = [float(t) for t in tok[1:1 + 2 * k]]
        n = [int(t) for t in tok[1 + 2 * k:]]
    except (ValueError, IndexError) as exc:
        raise ParseError(f"bad grid header: {exc}") from exc
    try:
        return Geometry(m, rng[0::2], rng[1::2], n)
    except ValueError as exc:
        raise ParseError(str(exc)) from exc


def _read_rows(path):
    lines = Path(path).read_text().splitlines()
    if not lines:
        raise ParseError(f"{path}: empty file")
    geom = _parse_header(lines[0])
    rows = [ln for ln in lines[1:] if ln.strip()]
    return geom, rows


def write_grid_csv(E: LatticeGrid, path) -> None:
    g = E.geometry
    occ = E.occupancy.reshape(-1, g.n[-1]).astype(np.uint8)
    body = "\n".join(",".join(map(str, r)) for r in occ)
    Path(path).write_text(_header(g) + "\n" + body + "\n")


def read_grid_csv(path) -> LatticeGrid:
    geom, rows = _read_rows(path)
    try:
        vals = np.array([[int(t) for t in r.split(",")] for r in rows], dtype=np.int64)
    except ValueError as exc:
        raise ParseError(f"{path}: grid entries must be 0/1 integers") from exc
    if vals.size != geom.size or not np.isin(vals, (0, 1)).all():
        raise ParseError(f"{path}: expected {geom.size} 0/1 entries, got {vals.size}")
    return LatticeGrid(geom, vals.astype(bool).reshape(geom.shape))


def write_supremand_csv(W: SampledSupremand, path) -> None:
    g = W.geometry
    rows = W.values.reshape(-1, g.n[-1])
    body = "\n".join(",".join("inf" if np.isinf(x) else "%.17g" % x for x in r) for r in rows)
    Path(path).write_text(_header(g) + "\n" + body + "\n")


def read_supremand_csv(path) -> SampledSupremand:
    geom, rows = _read_rows(path)
    try:
        vals = np.array([[float(t) for t in r.split(",")] for r in rows])
    except ValueError as exc:
        raise ParseError(f"{path}: supremand entries must be floats or 'inf'") from exc
    if vals.size != geom.size:
        raise ParseError(f"{path}: expected {geom.size} values, got {vals.size}")
    return SampledSupremand(geom, vals.reshape(geom.shape))


# --------------------------------------------------------------------------- dispatch


def read_set(path):
    """Finite or box-union JSON, or a grid CSV, chosen by file extension."""
    p = Path(path)
    if p.suffix == ".json":
        return set_from_dict(load_json(p))
    if p.suffix == ".csv":
        return read_grid_csv(p)
    raise ParseError(f"{path}: expected a .json or .csv set file")


def write_set(E, path) -> None:
    if isinstance(E, LatticeGrid):
        write_grid_csv(E, path)
    else:
        dump_json(set_to_dict(E), path)
