"""``kbl`` command-line interface.

Exit codes: 0 when every requested condition or check holds, 2 when some
fail (the output carries the certificates), 1 on invalid input.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from ._exact import as_fraction
from .biharmonic_match import (
    BiharmonicError,
    determinant_growth_exponent,
    exterior_extension,
    interior_extension,
    load_mode_json,
    matching_matrices,
    write_determinants_csv,
)
from .class_calculus import BlowupClass, corollary_families, cremona, epsilon_family, intersection
from .exact_geometry import (
    ChopSpec,
    DelzantPolytope,
    blown_up_projective_polytope,
    corner_chop,
)
from .radial_metrics import burns_simanca
from .report import SUITES, AnalysisError, Scenario, ScenarioError, analyze, format_table, to_json_text, verify_suite

__all__ = ["main", "build_parser"]


class _InputError(Exception):
    pass


def _read_json(path):
    try:
        return json.loads(Path(path).read_text())
    except OSError as exc:
        raise _InputError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise _InputError(f"{path} is not valid JSON: {exc}") from exc


def _emit(obj, out=None):
    text = to_json_text(obj)
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _rationals(text):
    return [as_fraction(x) for x in text.split(",") if x.strip()]


# ---------------------------------------------------------------------------
# subcommands


def _cmd_analyze(args):
    scen = Scenario.from_json(_read_json(args.scenario))
    rep = analyze(scen)
    _emit(rep.data, args.out)
    return rep.exit_code


def _load_polytope(args):
    if args.file:
        return DelzantPolytope.from_json(_read_json(args.file), require_delzant=True)
    if args.projective:
        labels, weights = [], []
        for c in args.chop or []:
            lab, _, w = c.partition(":")
            labels.append(int(lab))
            weights.append(as_fraction(w))
        return blown_up_projective_polytope(args.projective, labels, weights)
    raise _InputError("give a polytope file or --projective M")


def _polytope_summary(P):
    fut = list(P.futaki())
    return {"polytope": P.to_json(), "volume": P.volume(), "barycenter": list(P.barycenter()),
            "futaki": fut, "futaki_vanishes": all(x == 0 for x in fut)}


def _cmd_polytope(args):
    P = _load_polytope(args)
    if args.action == "chop":
        if args.vertex is None or args.weight is None:
            raise _InputError("chop needs --vertex and --weight")
        P = corner_chop(P, ChopSpec(args.vertex, as_fraction(args.weight)))
    _emit(_polytope_summary(P), args.out)
    return 0


def _cmd_classes(args):
    if args.action == "cremona":
        c = BlowupClass.from_json(json.loads(args.cls))
        img = cremona(c)
        _emit({"class": c.to_json(), "image": img.to_json(), "square": intersection(c, c),
               "image_square": intersection(img, img)})
        return 0
    if args.action == "family":
        base = BlowupClass.from_json(json.loads(args.cls)) if args.cls else BlowupClass(1, [])
        fam = epsilon_family(base, _rationals(args.weights), m=args.m, condition_iii_verified=args.verified)
        _emit(fam.to_json() | {"m": args.m, "drift_exponent": fam.drift_exponent})
        return 0
    params = dict(p.split("=", 1) for p in args.param or [])
    reps = corollary_families(args.case, params)
    _emit([r.to_json() for r in reps])
    return 0 if all(r.matches_printed and not r.violations for r in reps) else 2


def _cmd_bsmetric(args):
    prof = burns_simanca(args.m, args.T, cache_dir=args.cache)
    if args.csv:
        prof.to_csv(args.csv)
    res = prof.max_residual()
    out = {"m": args.m, "T": args.T, "psi0": prof.psi0, "max_abs_s": res,
           "decay_exponent": prof.decay_exponent() if args.m >= 3 else None,
           "tolerance": 1e-6, "pass": res < 1e-6 and prof.psi0 > 0}
    _emit(out)
    return 0 if out["pass"] else 2


def _cmd_biharmonic(args):
    if args.action == "match":
        mats = matching_matrices(args.m, args.lmax, args.variant)
        if args.csv:
            write_determinants_csv(args.csv, mats)
        out = {"m": args.m, "lmax": args.lmax, "variant": args.variant,
               "modes": [mm.to_json() for mm in mats],
               "all_nonzero": all(mm.det != 0 for mm in mats)}
        if args.lmax >= 12:
            out["growth_exponent"] = determinant_growth_exponent(mats)
        _emit(out)
        return 0 if out["all_nonzero"] else 2
    if not args.file:
        raise _InputError("extend needs a mode-coefficient JSON file")
    m, lmax, h, k = load_mode_json(_read_json(args.file))
    out = {"m": m, "lmax": lmax}
    for name, fn in (("interior", interior_extension), ("exterior", exterior_extension)):
        try:
            out[name] = fn(h, k).to_json()
        except BiharmonicError as exc:
            out[name] = {"error": exc.code, "value": str(exc.value)}
    _emit(out)
    return 0 if all("error" not in out[s] for s in ("interior", "exterior")) else 2


def _cmd_verify(args):
    names = list(SUITES) if args.suite == "all" else [args.suite]
    ok = True
    for n in names:
        res = verify_suite(n)
        print(format_table(res))
        ok &= res.passed
    return 0 if ok else 2


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="kbl", description="Checks for extremal metrics on blow-ups.")
    sub = p.add_subparsers(dest="command", required=True)

    a = sub.add_parser("analyze", help="run every check on a scenario file")
    a.add_argument("scenario")
    a.add_argument("--out")
    a.set_defaults(func=_cmd_analyze)

    q = sub.add_parser("polytope", help="corner chops and the Futaki functional")
    q.add_argument("action", choices=["chop", "futaki"])
    q.add_argument("file", nargs="?")
    q.add_argument("--projective", type=int, metavar="M", help="start from P^M")
    q.add_argument("--chop", action="append", metavar="LABEL:WEIGHT", help="chop a fixed point of P^M (labels 1..M+1)")
    q.add_argument("--vertex", type=int)
    q.add_argument("--weight")
    q.add_argument("--out")
    q.set_defaults(func=_cmd_polytope)

    c = sub.add_parser("classes", help="class calculus on blown-up P^2")
    c.add_argument("action", choices=["cremona", "family", "corollary"])
    c.add_argument("--class", dest="cls", help='class JSON, e.g. {"h":"1","e":["1/5","1/7","2/9"]}')
    c.add_argument("--weights", default="1")
    c.add_argument("--m", type=int, default=2)
    c.add_argument("--verified", action="store_true", help="condition (iii) holds: no weight drift")
    c.add_argument("--case", type=int, choices=[1, 2, 3], default=1)
    c.add_argument("--param", action="append", metavar="NAME=VALUE")
    c.set_defaults(func=_cmd_classes)

    b = sub.add_parser("bsmetric", help="Burns-Simanca profile")
    b.add_argument("--m", type=int, default=3)
    b.add_argument("--T", type=float, default=1e4)
    b.add_argument("--csv")
    b.add_argument("--cache")
    b.set_defaults(func=_cmd_bsmetric)

    h = sub.add_parser("biharmonic", help="extensions and matching determinants")
    h.add_argument("action", choices=["match", "extend"])
    h.add_argument("file", nargs="?")
    h.add_argument("--m", type=int, default=2)
    h.add_argument("--lmax", type=int, default=50)
    h.add_argument("--variant", choices=["extended", "constrained"], default="extended")
    h.add_argument("--csv")
    h.set_defaults(func=_cmd_biharmonic)

    v = sub.add_parser("verify", help="run a built-in verification suite")
    v.add_argument("suite", choices=[*SUITES, "all"])
    v.set_defaults(func=_cmd_verify)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (_InputError, ScenarioError, ValueError, TypeError, KeyError, json.JSONDecodeError) as exc:
        # module-level validation errors (GeometryError, ClassError, ...) are ValueErrors
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except AnalysisError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
