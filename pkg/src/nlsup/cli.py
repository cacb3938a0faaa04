"""Command-line front end.

Exit codes: 0 ok, 2 parse failure, 3 dimension mismatch, 4 untrusted level
schedule, 5 tolerance failure.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

import numpy as np

from . import io
from .cartesian import inclusion_feasible, maximal_cartesian
from .errors import DimensionError, ParseError, PreconditionError, UntrustedScheduleError
from .functional import SimpleFunction, eval_J, eval_Jrlx, lsc_check
from .hulls import sc_hull_boxes, sc_hull_grid
from .oscillation import OscillationSpec, build_sequence, error_table, weak_star_report
from .reproduce import EXAMPLES, run_example
from .setcore import FinitePairSet, Geometry, LatticeGrid, hat, rasterize, same_set
from .supremand import (
    CLOSED_FORMS,
    LevelSchedule,
    coercivity_report,
    hat_supremand,
    slc_envelope,
)

EXIT_OK, EXIT_PARSE, EXIT_DIM, EXIT_UNTRUSTED, EXIT_TOL = 0, 2, 3, 4, 5

log = logging.getLogger("nlsup")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(EXIT_PARSE)


def _emit(obj, out: str | None):
    text = json.dumps(obj, indent=1, sort_keys=True)
    if out:
        Path(out).write_text(text + "\n")
    else:
        print(text)


def _geometry(args, m: int) -> Geometry:
    if args.ranges is None or args.res is None:
        raise ParseError("--ranges LO HI and --res N are needed to rasterize")
    lo, hi = args.ranges
    return Geometry.square(m, lo, hi, args.res)


def _j_list(spec: str) -> tuple:
    """``"4..512"`` doubles from 4 to 512; ``"4,8,16"`` lists values."""
    if ".." in spec:
        a, b = (int(t) for t in spec.split(".."))
        out = []
        j = a
        while j <= b:
            out.append(j)
            j *= 2
        return tuple(out)
    return tuple(int(t) for t in spec.split(","))


def _levels(W, count):
    rep = coercivity_report(W)
    if not rep.coercive:
        raise UntrustedScheduleError("no sublevel set avoids the grid boundary")
    return LevelSchedule.uniform(rep.min_value, rep.trusted_max, count)


# --------------------------------------------------------------------------- commands


def cmd_hat(args) -> int:
    E = io.read_set(args.inp)
    io.write_set(hat(E), args.out)
    return EXIT_OK


def cmd_schull(args) -> int:
    E = io.read_set(args.inp)
    if isinstance(E, FinitePairSet):
        if E.m == 1 and same_set(hat(E), E):
            io.write_set(sc_hull_boxes(E), args.out)
            _emit({"iterations": 0, "converged": True, "cells_added": 0}, None)
            return EXIT_OK
        E = rasterize(E, _geometry(args, E.m))
    if not isinstance(E, LatticeGrid):
        io.write_set(E, args.out)
        return EXIT_OK
    res = sc_hull_grid(E)
    io.write_set(res.hull, args.out)
    _emit(res.report(), None)
    return EXIT_OK


def cmd_cliques(args) -> int:
    fam = maximal_cartesian(io.read_set(args.inp))
    _emit(fam.to_dict(), args.out)
    return EXIT_OK


def cmd_feasible(args) -> int:
    ok = inclusion_feasible(io.read_set(args.inp))
    print("feasible" if ok else "infeasible")
    if args.out:
        _emit({"feasible": ok}, args.out)
    return EXIT_OK


def cmd_envelope(args) -> int:
    W = io.read_supremand_csv(args.inp)
    Wh = hat_supremand(W)
    sched = _levels(Wh, args.levels)
    Wslc = slc_envelope(Wh, sched, apply_hat=False)
    io.write_supremand_csv(Wslc, args.out)
    meta = {k: Wslc.meta[k] for k in ("level_gap", "trusted_max", "iterations", "exact")}
    meta["per_level_iterations"] = meta.pop("iterations")
    if "note" in Wslc.meta:
        meta["note"] = Wslc.meta["note"]
    io.dump_json(meta, str(args.out) + ".json")
    return EXIT_OK


def cmd_lsc(args) -> int:
    W = io.read_supremand_csv(args.inp)
    verdict = lsc_check(W, _levels(W, args.levels))
    _emit(verdict.to_dict(), args.out)
    return EXIT_OK


def cmd_relax_eval(args) -> int:
    u = SimpleFunction.from_dict(io.load_json(args.u))
    if args.form:
        W = args.form
    elif args.inp:
        W = io.read_supremand_csv(args.inp)
    else:
        raise ParseError("give --in W.csv or --form NAME")
    value = eval_J(W, u) if args.plain else eval_Jrlx(W, u)
    _emit({"functional": "J" if args.plain else "J_rlx", "value": value}, args.out)
    return EXIT_OK


def cmd_oscillate(args) -> int:
    u = SimpleFunction.from_dict(io.load_json(args.inp))
    spec = OscillationSpec(np.array(args.alpha), np.array(args.beta), u, _j_list(args.j))
    reports = weak_star_report(spec, [build_sequence(spec, j) for j in spec.j_list])
    _emit([r.to_dict() for r in reports], args.out)
    if args.table:
        Path(args.table).write_text(error_table(reports, args.phi))
    return EXIT_OK


def cmd_examples(args) -> int:
    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)
    which = EXAMPLES if args.which == "all" else (args.which,)
    code = EXIT_OK
    for name in which:
        res = run_example(name)
        stem = name.replace(".", "_")
        (outdir / f"{stem}_table.txt").write_text(res.table())
        for key, val in res.fields.items():
            if key.startswith("W"):
                io.write_supremand_csv(val, outdir / f"{stem}_{key}.csv")
            elif key == "verdict":
                io.dump_json(val.to_dict(), outdir / f"{stem}_lsc.json")
        print(res.table(), end="")
        if not res.passed:
            code = EXIT_TOL
    return code


# --------------------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="nlsup", description=__doc__.splitlines()[0])
    p.add_argument("--seed", type=int, default=0, help="seed for randomised runs")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, fn, inp=True, out=True, help=None):
        sp = sub.add_parser(name, help=help)
        if inp:
            sp.add_argument("--in", dest="inp", required=True)
        if out:
            sp.add_argument("--out", required=name in ("hat", "schull", "envelope", "examples"))
        sp.set_defaults(fn=fn)
        return sp

    add("hat", cmd_hat, help="symmetric diagonal part of a set")
    sp = add("schull", cmd_schull, help="separately convex hull")
    sp.add_argument("--ranges", nargs=2, type=float)
    sp.add_argument("--res", type=int)
    add("cliques", cmd_cliques, help="maximal Cartesian subsets")
    add("feasible", cmd_feasible, help="whether the pair constraint admits any function")
    sp = add("envelope", cmd_envelope, help="separately level convex envelope of a supremand")
    sp.add_argument("--levels", type=int, default=64)
    sp = add("lsc", cmd_lsc, help="level-set fixed-point test")
    sp.add_argument("--levels", type=int, default=32)
    sp = add("relax-eval", cmd_relax_eval, inp=False, help="evaluate a functional on u")
    sp.add_argument("--in", dest="inp")
    sp.add_argument("--form", choices=sorted(CLOSED_FORMS))
    sp.add_argument("--u", required=True, help="SimpleFunction JSON")
    sp.add_argument("--plain", action="store_true", help="evaluate J instead of J_rlx")
    sp = add("oscillate", cmd_oscillate, help="oscillating sequence report")
    sp.add_argument("--alpha", type=float, nargs="+", required=True)
    sp.add_argument("--beta", type=float, nargs="+", required=True)
    sp.add_argument("--j", default="4..512")
    sp.add_argument("--table", help="two-column error-vs-j output")
    sp.add_argument("--phi", default="ind_0_0.5")
    sp = add("examples", cmd_examples, inp=False, help="rerun the worked examples")
    sp.add_argument("--which", choices=EXAMPLES + ("all",), default="all")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING)
    np.random.seed(args.seed)
    try:
        return args.fn(args)
    except DimensionError as exc:
        print(f"dimension error: {exc}", file=sys.stderr)
        return EXIT_DIM
    except UntrustedScheduleError as exc:
        print(f"untrusted schedule: {exc}", file=sys.stderr)
        return EXIT_UNTRUSTED
    except (ParseError, PreconditionError, ValueError, KeyError, OSError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
