"""Command-line entry point: ``catcohom <subcommand> ...``.

Exit codes: 0 success or PASS, 1 verdict FAIL, 2 input error.  Errors are
reported on stdout as ``{"error": <class name>, "message": ...}``.
"""
from __future__ import annotations

import argparse
import sys

from . import errors
from .andre import DEFAULT_COMMA_GUARD, check_consistency, e2_page, page_json, page_passes
from .corpus import FIXTURES, write_fixture
from .exactalg import Ring
from .fincat import FinCat, FinFunctor, default_size_guard, label
from .fibcl import (
    cartan_leray,
    cartan_leray_report,
    grothendieck,
    identity_fibration,
    is_local,
)
from .formats import category_json, dumps, functor_json, load
from .homcalc import (
    bw_cohomology_range,
    bw_homology_range,
    colimit,
    hochschild_cohomology,
    hochschild_homology,
    limit,
    module_cohomology_range,
    module_homology_range,
    report,
)
from .natsys import Bimodule, Module, NaturalSystem, pullback


class UsageError(errors.CatCohomError):
    pass


class InputError(errors.CatCohomError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


# ---------------------------------------------------------------------------
# helpers


def _load(args, path, kind, validate=True):
    try:
        return load(path, kind, size_guard=args.size_guard, validate_coefficients=validate)
    except FileNotFoundError:
        raise InputError(f"no such file: {path}") from None
    except IsADirectoryError:
        raise InputError(f"is a directory: {path}") from None


def _attach(C: FinCat, D: NaturalSystem) -> NaturalSystem:
    """Move D onto C, matching objects and morphisms by their string labels."""
    if D.base is C:
        return D
    ob = {label(x): x for x in D.base.objects}
    mo = {label(f): f for f in D.base.morphisms}
    try:
        phi = FinFunctor(C, D.base, {x: ob[label(x)] for x in C.objects},
                         {f: mo[label(f)] for f in C.morphisms})
    except KeyError as exc:
        raise errors.NotAFunctor(f"coefficients live on a different category (no {exc})") from None
    if len(C.morphisms) != len(D.base.morphisms):
        raise errors.NotAFunctor("coefficients live on a different category")
    phi.validate()
    return pullback(phi, D)


def _check_ring(args, ring):
    if args.ring is None:
        return ring
    wanted = Ring.parse(args.ring)
    if wanted != ring:
        raise errors.RingMismatch(f"--ring {wanted} but the coefficients are over {ring}")
    return ring


def _coefficients(args):
    """The natural system, module or bimodule given on the command line."""
    given = [k for k in ("natsys", "module", "bimodule") if getattr(args, k, None)]
    if len(given) != 1:
        raise UsageError("give exactly one of --natsys, --module, --bimodule")
    kind = given[0]
    obj = _load(args, getattr(args, kind), kind)
    if args.cat:
        C = _load(args, args.cat, "category")
        if C != obj.base:
            raise errors.NotAFunctor("--cat differs from the category of the coefficients")
    return kind, obj


# ---------------------------------------------------------------------------
# subcommands


def cmd_validate(args):
    out = []
    for path in args.paths:
        try:
            obj = _load(args, path, None)
        except FileNotFoundError:
            raise InputError(f"no such file: {path}") from None
        entry = {"path": path, "valid": True}
        if isinstance(obj, FinCat):
            entry.update(kind="category", objects=len(obj.objects), morphisms=len(obj.morphisms))
        elif isinstance(obj, FinFunctor):
            entry.update(kind="functor")
        elif isinstance(obj, NaturalSystem):
            entry.update(kind="natsys", ring=str(obj.ring))
        elif isinstance(obj, Module):
            entry.update(kind="module", ring=str(obj.ring))
        elif isinstance(obj, Bimodule):
            entry.update(kind="bimodule", ring=str(obj.ring))
        else:
            entry.update(kind="action", fibers=len(obj.fibers))
        out.append(entry)
    return {"results": out}, 0


def _homology_like(args, homology):
    kind, obj = _coefficients(args)
    ring = _check_ring(args, obj.ring)
    N = args.max_degree
    C = obj.base
    if kind == "natsys":
        fn = bw_homology_range if homology else bw_cohomology_range
        res = fn(C, obj, N, args.normalized)
        theory = "BW"
    elif kind == "module":
        fn = module_homology_range if homology else module_cohomology_range
        res = fn(C, obj, N, args.normalized)
        theory = "colim" if homology else "lim"
    else:
        fn = hochschild_homology if homology else hochschild_cohomology
        res = [fn(C, obj, n, args.normalized) for n in range(N + 1)]
        theory = "HM"
    return report(theory, ring, res), 0


def cmd_cohomology(args):
    return _homology_like(args, False)


def cmd_homology(args):
    return _homology_like(args, True)


def _module_arg(args):
    if not args.module:
        raise UsageError("--module is required")
    return _load(args, args.module, "module")


def cmd_limit(args):
    F = _module_arg(args)
    ring = _check_ring(args, F.ring)
    return {"theory": "limit", "ring": str(ring), "value": limit(F.base, F).to_json()}, 0


def cmd_colimit(args):
    F = _module_arg(args)
    ring = _check_ring(args, F.ring)
    return {"theory": "colimit", "ring": str(ring), "value": colimit(F.base, F).to_json()}, 0


def cmd_hochschild(args):
    if not args.bimodule:
        raise UsageError("--bimodule is required")
    M = _load(args, args.bimodule, "bimodule")
    ring = _check_ring(args, M.ring)
    fn = hochschild_homology if args.homology else hochschild_cohomology
    res = [fn(M.base, M, n, args.normalized) for n in range(args.max_degree + 1)]
    return report("HM", ring, res), 0


def cmd_e2(args):
    if not (args.functor and args.natsys):
        raise UsageError("--functor and --natsys are required")
    u = _load(args, args.functor, "functor")
    D = _attach(u.source, _load(args, args.natsys, "natsys"))
    ring = _check_ring(args, D.ring)
    page = e2_page(u, D, args.max_total, ring=ring, homology=args.homology, jobs=args.jobs,
                   comma_guard=args.comma_guard)
    verdict = check_consistency(page)
    return page_json(page, verdict), 0 if page_passes(verdict) else 1


def _action_and_system(args, validate=True):
    if not (args.action and args.natsys):
        raise UsageError("--action and --natsys are required")
    A = _load(args, args.action, "action")
    fib = grothendieck(A)
    D = _attach(fib.total, _load(args, args.natsys, "natsys", validate))
    return A, fib, D


def cmd_cartan_leray(args):
    # cartan_leray checks cartesian inversion before the remaining functoriality laws
    A, fib, D = _action_and_system(args, validate=False)
    _check_ring(args, D.ring)
    page = cartan_leray(A, D, args.max_total)
    out = cartan_leray_report(page)
    return out, 0 if out["verdict"]["euler"] != "FAIL" and page_passes(out["verdict"]) else 1


def cmd_locality(args):
    if args.cat:
        C = _load(args, args.cat, "category")
        fib = identity_fibration(C)
        if not args.natsys:
            raise UsageError("--natsys is required")
        D = _attach(C, _load(args, args.natsys, "natsys"))
    else:
        _, fib, D = _action_and_system(args)
    _check_ring(args, D.ring)
    rows = is_local(fib, D, args.max_degree)
    for r in rows:
        r["b"] = label(r["b"])
    local = all(r["local"] for r in rows)
    return {"ring": str(D.ring), "local": local, "results": rows}, 0 if local else 1


def cmd_grothendieck(args):
    if not args.action:
        raise UsageError("--action is required")
    A = _load(args, args.action, "action")
    fib = grothendieck(A)
    return functor_json(fib.u, target=category_json(A.base)), 0


def cmd_example(args):
    if args.name not in FIXTURES:
        raise errors.UnknownFixture(f"unknown fixture {args.name!r}; known: {', '.join(FIXTURES)}")
    out_dir = args.out_dir or args.name
    files = write_fixture(args.name, out_dir, seed=args.seed)
    return {"fixture": args.name, "dir": out_dir, "files": files}, 0


# ---------------------------------------------------------------------------
# parser


def _common(p):
    p.add_argument("--out", help="write the report here instead of stdout")
    p.add_argument("--pretty", action="store_true", help="indent the JSON report")
    p.add_argument("--size-guard", type=int, default=None,
                   help="largest category accepted (default from CATCOHOM_SIZE_GUARD or 200)")
    p.add_argument("--ring", default=None, help="Z, Q or Fp:<p>; must match the input")


def _degree(value):
    n = int(value)
    if n < 1:
        raise argparse.ArgumentTypeError("degree bounds must be at least 1")
    return n


def build_parser():
    parser = _Parser(prog="catcohom", description="Exact (co)homology of finite categories.")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    p = sub.add_parser("validate", help="parse and validate JSON inputs")
    p.add_argument("paths", nargs="+")
    _common(p)
    p.set_defaults(fn=cmd_validate)

    for name, fn in (("cohomology", cmd_cohomology), ("homology", cmd_homology)):
        p = sub.add_parser(name, help=f"{name} with natural-system, module or bimodule coefficients")
        p.add_argument("--cat")
        p.add_argument("--natsys")
        p.add_argument("--module")
        p.add_argument("--bimodule")
        p.add_argument("--max-degree", type=_degree, default=3)
        g = p.add_mutually_exclusive_group()
        g.add_argument("--normalized", dest="normalized", action="store_true", default=True)
        g.add_argument("--full", dest="normalized", action="store_false")
        _common(p)
        p.set_defaults(fn=fn)

    for name, fn in (("limit", cmd_limit), ("colimit", cmd_colimit)):
        p = sub.add_parser(name, help=f"{name} of a module")
        p.add_argument("--module")
        _common(p)
        p.set_defaults(fn=fn)

    p = sub.add_parser("hochschild", help="Hochschild-Mitchell (co)homology of a bimodule")
    p.add_argument("--bimodule")
    p.add_argument("--max-degree", type=_degree, default=3)
    p.add_argument("--homology", action="store_true")
    g = p.add_mutually_exclusive_group()
    g.add_argument("--normalized", dest="normalized", action="store_true", default=True)
    g.add_argument("--full", dest="normalized", action="store_false")
    _common(p)
    p.set_defaults(fn=cmd_hochschild)

    p = sub.add_parser("e2", help="E2 page of the spectral sequence of a functor")
    p.add_argument("--functor")
    p.add_argument("--natsys")
    p.add_argument("--max-total", type=_degree, default=3)
    p.add_argument("--homology", action="store_true")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--comma-guard", type=int, default=DEFAULT_COMMA_GUARD)
    _common(p)
    p.set_defaults(fn=cmd_e2)

    p = sub.add_parser("cartan-leray", help="E2 page for a group acting on a category")
    p.add_argument("--action")
    p.add_argument("--natsys")
    p.add_argument("--max-total", type=_degree, default=3)
    _common(p)
    p.set_defaults(fn=cmd_cartan_leray)

    p = sub.add_parser("locality", help="check locality of a natural system on a fibration")
    p.add_argument("--action", help="fibration of this strict action")
    p.add_argument("--cat", help="identity fibration of this category")
    p.add_argument("--natsys")
    p.add_argument("--max-degree", type=_degree, default=2)
    _common(p)
    p.set_defaults(fn=cmd_locality)

    p = sub.add_parser("grothendieck", help="total category and projection of a strict action")
    p.add_argument("--action")
    _common(p)
    p.set_defaults(fn=cmd_grothendieck)

    p = sub.add_parser("example", help="write a bundled fixture")
    p.add_argument("name")
    p.add_argument("--out-dir")
    p.add_argument("--seed", type=int, default=0)
    _common(p)
    p.set_defaults(fn=cmd_example)
    return parser


def _emit(data, args, stream):
    text = dumps(data, getattr(args, "pretty", False))
    out = getattr(args, "out", None)
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        stream.write(text)


def run(argv=None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    args = None
    try:
        args = build_parser().parse_args(argv)
        if not getattr(args, "command", None):
            raise UsageError("missing subcommand")
        if args.size_guard is None:
            args.size_guard = default_size_guard()
        data, code = args.fn(args)
    except errors.CatCohomError as exc:
        data, code = {"error": type(exc).__name__, "message": str(exc)}, 2
    except (ValueError, OSError) as exc:
        data, code = {"error": "InputError", "message": str(exc)}, 2
    if code == 2:
        stdout.write(dumps(data))
    else:
        _emit(data, args, stdout)
    return code


def main(argv=None):
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
