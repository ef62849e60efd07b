"""Command-line front end: read a geometry, run one stage of the pipeline, print a JSON report.

Input schema::

    {"points": [[m, n], ...], "rays": R', "triangulation": [[i, j, k], ...],
     "brane": {"edge": [i, j], "framing": "b/a"}}

Any input argument may instead name a bundled example (c3_f1, c3_f1_2, kp2_f1).
Exit status: 0 when every assertion in the report holds, 1 otherwise, 2 on bad input.
"""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import BUNDLED, load_input, pipeline
from .batyrev import (NewtonPolytopeCollapse, ParameterDomainError, RegularityFailure,
                      ReductionFailure, batyrev_pipeline)
from .charges import ChargeError, charges_summary
from .closed_geometry import box_age_check, closed_summary, neighbor_framings
from .coefficients import CycNumber, LogSeries, fmt_cyc, fmt_q
from .hypergeometric import (closed_setup, disk_function, hypercorr_check, i_function,
                             mirror_maps)
from .numeric_mirror import NoMatchingRoot, NonSimpleRoots, open_mirror_numeric_check
from .open_geometry import GeometryError, fan_summary, parse_rational
from .picard_fuchs import (OrderTooSmall, annihilation_report, make_operator, solution_rank,
                           test_betas)


class InputError(ValueError):
    pass


def jsonable(obj):
    if isinstance(obj, bool) or obj is None or isinstance(obj, (str, int)):
        return obj
    if isinstance(obj, float):
        return obj
    if isinstance(obj, Fraction):
        return fmt_q(obj)
    if isinstance(obj, CycNumber):
        return fmt_cyc(obj)
    if isinstance(obj, LogSeries):
        return [{"exponents": [fmt_q(x) for x in e], "logs": list(k), "coefficient": jsonable(v)}
                for e, k, v in obj.items()]
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    return str(obj)


def _rationals(text):
    try:
        return tuple(parse_rational(s) for s in text.split(",") if s.strip())
    except (ValueError, ZeroDivisionError) as err:
        raise InputError(f"not a rational list: {text!r} ({err})") from err


def _rational(text):
    vals = _rationals(text)
    if len(vals) != 1:
        raise InputError(f"expected one rational, got {text!r}")
    return vals[0]


def _q_point(args, ch):
    if args.q is None:
        return (Fraction(1, 64),) * len(ch.s_coeffs)
    q = _rationals(args.q)
    if len(q) != len(ch.s_coeffs):
        raise InputError(f"--q needs {len(ch.s_coeffs)} values, got {len(q)}")
    return q


# ------------------------------------------------------------ subcommands

def cmd_build(args):
    fan3, fan4, _ = pipeline(load_input(args.input))
    vol3, volt, vol0, holds = fan4.volume_identity_check()
    ages = box_age_check(fan4)
    return {
        "open": fan_summary(fan3),
        "closed": closed_summary(fan4),
        "neighbor_framings": [{"s": s, "a": a, "b": b, "framing": f}
                              for s, a, b, f in neighbor_framings(fan4)],
        "box_ages": ages,
        "assertions": {"volume_identity": holds, "box_ages": all(r["holds"] for r in ages)},
    }


def cmd_charges(args):
    _, _, ch = pipeline(load_input(args.input))
    summary = charges_summary(ch)
    identities = ch.identity_check()
    asserts = {k: v for k, v in identities.items() if isinstance(v, bool)}
    return {"charges": summary, "assertions": asserts}


def cmd_pf(args):
    fan3, fan4, ch = pipeline(load_input(args.input))
    ops = [make_operator(b, ch) for b in test_betas(ch.Ltilde_basis)]
    expand = int(args.order - min(min(sum(op.monomial) for op in ops), 0))
    ifun = i_function(closed_setup(fan4, ch), expand)
    sols = [(str(k), v) for k, v in ifun.components()]
    rep = annihilation_report(ops, sols, args.order)
    rank, chosen = solution_rank(sols)
    vol = fan4.volume_identity_check()[1]
    return {
        "operators": [{"beta": op.beta, "operator": op.describe()} for op in ops],
        "safe_order": args.order, "expansion_order": expand,
        "checks": rep["checks"], "rank": rank, "rank_witnesses": chosen,
        "assertions": {"annihilated": rep["passed"], "rank_equals_volume": rank == vol},
    }


def cmd_ifun(args):
    fan3, fan4, ch = pipeline(load_input(args.input))
    setup = closed_setup(fan4, ch)
    ifun = i_function(setup, args.order)
    comps = [{"z_power": -n, "class": str(key), "series": v}
             for (n, key), v in ifun.components()]
    return {"order": args.order, "components": comps,
            "mirror_maps": {str(a): v for a, v in mirror_maps(setup, ifun).items()},
            "assertions": {}}


def cmd_disk(args):
    fan3, fan4, ch = pipeline(load_input(args.input))
    W = disk_function(ch, fan3, fan4, args.sector, args.order)
    if args.winding is not None:
        keep = [(e, k, v) for e, k, v in W.items() if e[-1] <= args.winding]
        W = LogSeries.zero(W.n)
        for e, k, v in keep:
            W = W + LogSeries.monomial(e, v, k)
    return {"order": args.order, "sector": args.sector, "winding": args.winding,
            "W": W, "assertions": {}}


def cmd_hypercorr(args):
    fan3, fan4, ch = pipeline(load_input(args.input))
    sectors = None if args.sector is None else [args.sector]
    rep = hypercorr_check(ch, fan3, fan4, args.order, sectors=sectors, p=args.eps_power)
    rep["assertions"] = {"correspondence": rep.pop("passed")}
    return rep


def cmd_batyrev(args):
    fan3, fan4, ch = pipeline(load_input(args.input))
    x = _rational(args.x) if args.x else Fraction(1, 64)
    out = batyrev_pipeline(ch, fan4, _q_point(args, ch), x)
    ext = out["extension"]
    names = ("H", "H_tilde", "H_0")
    rings = dict(zip(names, out["reports"]))
    iota = {"matrix": ext.iota, "monomials": ext.iota_monomials}
    return {"x": x, "rings": rings, "iota": iota, "pi": ext.pi,
            "assertions": dict(ext.checks)}


def cmd_numeric(args):
    fan3, fan4, ch = pipeline(load_input(args.input))
    x = _rational(args.x) if args.x else Fraction(1, 100)
    q = _q_point(args, ch) if ch.s_coeffs else ()
    W = disk_function(ch, fan3, fan4, 0, args.order)
    try:
        rep = open_mirror_numeric_check(W, ch, fan4, q, x, tol=args.tol)
    except NoMatchingRoot as err:
        rep = err.args[0]
    rep["assertions"] = {"matching_root": rep.pop("passed")}
    return rep


def cmd_verify(args):
    from . import suite
    if not args.all and not args.criterion:
        raise InputError("verify needs --all or --criterion N")
    numbers = range(1, len(suite.CRITERIA) + 1) if args.all else args.criterion
    checks = [suite.CRITERIA[k - 1]() for k in numbers]
    return {"criteria": [c.as_dict() for c in checks],
            "assertions": {f"criterion_{c.number}": c.passed for c in checks}}


COMMANDS = {
    "build": (cmd_build, "fans, volumes, extra cones and neighbor framings"),
    "charges": (cmd_charges, "charge lattices, divisor coordinates and the structural identities"),
    "pf": (cmd_pf, "Picard-Fuchs operators and annihilation of the I-function"),
    "ifun": (cmd_ifun, "closed I-function components through z^-2"),
    "disk": (cmd_disk, "disk function W_k"),
    "hypercorr": (cmd_hypercorr, "I-function against disk function under the framing limit"),
    "batyrev": (cmd_batyrev, "Batyrev rings, filtrations and the extension maps"),
    "numeric": (cmd_numeric, "floating-point comparison with roots of the mirror curve"),
    "verify": (cmd_verify, "acceptance suite on the bundled examples"),
}


def build_parser():
    p = argparse.ArgumentParser(prog="openclosed", description=__doc__.split("\n")[0])
    sub = p.add_subparsers(dest="command", required=True)
    for name, (_, helptext) in COMMANDS.items():
        sp = sub.add_parser(name, help=helptext)
        if name == "verify":
            sp.add_argument("--all", action="store_true")
            sp.add_argument("--criterion", type=int, action="append", choices=range(1, 11))
        else:
            sp.add_argument("input", help=f"JSON path or one of {', '.join(BUNDLED)}")
        sp.add_argument("--order", type=int, default=6)
        sp.add_argument("--winding", type=int)
        sp.add_argument("--q")
        sp.add_argument("--x")
        sp.add_argument("--sector", type=int)
        sp.add_argument("--tol", type=float, default=1e-8)
        sp.add_argument("--eps-power", type=int, default=2)
        sp.add_argument("--out")
    return p


def run(argv=None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    args = build_parser().parse_args(argv)
    if args.order < 0 or (args.winding is not None and args.winding < 0):
        print("error: orders must be non-negative", file=sys.stderr)
        return 2
    if args.command == "disk" and args.sector is None:
        args.sector = 0
    func = COMMANDS[args.command][0]
    try:
        report = func(args)
    except (InputError, GeometryError, ChargeError, ParameterDomainError, NewtonPolytopeCollapse,
            json.JSONDecodeError, OSError, KeyError, TypeError, ZeroDivisionError) as err:
        print(f"input error ({type(err).__name__}): {err}", file=sys.stderr)
        return 2
    except (RegularityFailure, ReductionFailure, NonSimpleRoots, OrderTooSmall,
            ArithmeticError, AssertionError) as err:
        report = {"error": f"{type(err).__name__}: {err}", "assertions": {"completed": False}}
    report["command"] = args.command
    report["passed"] = all(report["assertions"].values())
    text = json.dumps(jsonable(report), sort_keys=True, indent=2, ensure_ascii=False)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text, file=stdout)
    return 0 if report["passed"] else 1


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
