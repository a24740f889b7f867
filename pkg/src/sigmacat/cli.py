"""Command-line interface.

Exit codes: 0 pass, 1 check or validation failure, 2 input error, 3 resource
bound exceeded.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace

from . import serialize, testkit
from .core import (
    BoundExceeded,
    Bounds,
    FinCategory,
    InvalidInstance,
    functor_category,
    slice_category,
    validate_category,
)
from .elements import SetPresheaf, category_of_elements, pi_presheaf, validate_set_presheaf, yoneda_presheaf
from .grothendieck import grothendieck, product_category_pi, validate_cat_presheaf
from .names import NameSyntaxError, parse
from .serialize import Instance, InstanceFormatError
from .theorems import (
    check_disc_fib,
    check_split_fib,
    check_theorem_ac,
    check_theorem_assoc,
    check_theorem_commute,
    sigma_PQ,
)

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_BOUND = 0, 1, 2, 3

CONSTRUCTIONS = ("elements", "grothendieck", "pi-presheaf", "product-pi", "sigma-pq", "functor-cat", "slice", "yoneda")
THEOREMS = ("ac", "assoc", "commute", "disc-fib", "split-fib")


class UsageError(Exception):
    pass


def _bounds(args) -> Bounds:
    if args.bound is None:
        return Bounds()
    return Bounds(max_morphisms=args.bound)


def _load(path: str, *kinds: str) -> Instance:
    inst = serialize.load(path)
    if kinds and inst.kind not in kinds:
        raise UsageError(f"{path}: expected {' or '.join(kinds)}, found {inst.kind}")
    return inst


def _arity(paths: list, n: int, what: str) -> None:
    if len(paths) != n:
        raise UsageError(f"{what} takes {n} input file{'s' if n != 1 else ''}, got {len(paths)}")


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)


def _counts(obj) -> str:
    if isinstance(obj, FinCategory):
        return f"category: {len(obj.objects)} objects, {len(obj.morphisms)} morphisms"
    if isinstance(obj, SetPresheaf):
        n = sum(len(v) for v in obj.values.values())
        return (f"set_presheaf on {len(obj.base.objects)} objects, {len(obj.base.morphisms)} morphisms; "
                f"{n} elements")
    total = sum(len(F.objects) for F in obj.fibers.values())
    return (f"cat_presheaf on {len(obj.base.objects)} objects, {len(obj.base.morphisms)} morphisms; "
            f"{total} fiber objects")


# -- commands -------------------------------------------------------------------

def cmd_validate(args) -> int:
    inst = _load(args.path)
    if inst.kind == "category":
        rep = validate_category(inst.value)
    elif inst.kind in ("set_presheaf", "bi_presheaf"):
        rep = validate_set_presheaf(inst.value)
    else:
        rep = validate_cat_presheaf(inst.value)
    if args.json:
        print(json.dumps({"kind": inst.kind, **rep.to_dict()}, indent=2, ensure_ascii=False))
    else:
        print(replace(rep, subject=inst.kind))
    return EXIT_OK if rep.ok else EXIT_FAIL


def _object_arg(args, C: FinCategory):
    if args.object is None:
        raise UsageError("--object is required")
    try:
        a = parse(args.object)
    except NameSyntaxError as exc:
        raise UsageError(f"--object: {exc}") from exc
    if a not in C.identity:
        raise UsageError(f"--object: {args.object} is not an object of the category")
    return a


def _require_category(C: FinCategory, path: str) -> None:
    rep = validate_category(C)
    if not rep.ok:
        raise InvalidInstance(f"{path} is not a valid category", rep)


def cmd_construct(args) -> int:
    kind, paths, bounds = args.construction, args.paths, _bounds(args)
    if kind == "elements":
        _arity(paths, 1, kind)
        result = category_of_elements(_load(paths[0], "set_presheaf", "bi_presheaf").value)[0]
    elif kind == "grothendieck":
        _arity(paths, 1, kind)
        result = grothendieck(_load(paths[0], "cat_presheaf", "q_presheaf").value)[0]
    elif kind in ("pi-presheaf", "product-pi"):
        _arity(paths, 1, kind)
        R = _load(paths[0], "bi_presheaf").value
        rep = validate_set_presheaf(R)
        if not rep.ok:
            raise InvalidInstance("invalid bi_presheaf", rep)
        result = pi_presheaf(R, bounds) if kind == "pi-presheaf" else product_category_pi(R, bounds)
    elif kind == "sigma-pq":
        _arity(paths, 2, kind)
        P = _load(paths[0], "cat_presheaf").value
        Q = _load(paths[1], "q_presheaf", "cat_presheaf").value
        result = sigma_PQ(P, Q)
    elif kind == "functor-cat":
        _arity(paths, 2, kind)
        C = _load(paths[0], "category").value
        D = _load(paths[1], "category").value
        _require_category(C, paths[0])
        _require_category(D, paths[1])
        result = functor_category(C, D, bounds)
    else:
        _arity(paths, 1, kind)
        C = _load(paths[0], "category").value
        _require_category(C, paths[0])
        a = _object_arg(args, C)
        result = slice_category(C, a) if kind == "slice" else yoneda_presheaf(C, a)
    text = serialize.dumps(result)
    _emit(text, args.out)
    print(_counts(result), file=sys.stdout if args.out else sys.stderr)
    return EXIT_OK


def _run_theorem(name: str, values: list, bounds: Bounds):
    if name == "ac":
        return check_theorem_ac(values[0], bounds)
    if name == "commute":
        return check_theorem_commute(values[0])
    if name == "assoc":
        return check_theorem_assoc(values[0], values[1])
    if name == "disc-fib":
        return check_disc_fib(values[0])
    return check_split_fib(values[0])


def _generated(name: str, seed: int) -> list:
    if name in ("ac", "commute"):
        return [testkit.gen_ac_instance(seed)]
    if name == "assoc":
        return list(testkit.gen_assoc_instance(seed))
    if name == "disc-fib":
        return [testkit.gen_elements_instance(seed)]
    return [testkit.gen_split_instance(seed)]


def cmd_check(args) -> int:
    name, paths, bounds = args.theorem, args.paths, _bounds(args)
    if args.seeds is not None:
        if paths:
            raise UsageError("--seeds generates its own instances; do not pass files")
        if args.seeds < 1:
            raise UsageError("--seeds must be positive")
        base = args.seed or 0
        reports = []
        for i in range(args.seeds):
            rep = _run_theorem(name, _generated(name, base + i), bounds)
            rep.instance = f"seed {base + i}; {rep.instance}"
            reports.append(rep)
        failed = [r for r in reports if not r.passed]
        if args.json:
            print(json.dumps({
                "theorem": name,
                "instances": len(reports),
                "failed": len(failed),
                "reports": [r.to_dict() for r in reports],
            }, indent=2, ensure_ascii=False))
        else:
            for r in reports:
                print(r if not r.passed else str(r).splitlines()[0])
            print(f"{name}: {len(reports) - len(failed)}/{len(reports)} passed")
        return EXIT_FAIL if failed else EXIT_OK

    if name in ("ac", "commute"):
        _arity(paths, 1, name)
        values = [_load(paths[0], "bi_presheaf").value]
    elif name == "assoc":
        _arity(paths, 2, name)
        values = [_load(paths[0], "cat_presheaf").value, _load(paths[1], "q_presheaf", "cat_presheaf").value]
    elif name == "disc-fib":
        _arity(paths, 1, name)
        values = [_load(paths[0], "set_presheaf", "bi_presheaf", "cat_presheaf", "q_presheaf").value]
    else:
        _arity(paths, 1, name)
        values = [_load(paths[0], "cat_presheaf", "q_presheaf").value]
    rep = _run_theorem(name, values, bounds)
    print(json.dumps(rep.to_dict(), indent=2, ensure_ascii=False) if args.json else rep)
    return EXIT_OK if rep.passed else EXIT_FAIL


def cmd_gen(args) -> int:
    p = testkit.GenParams(
        max_objects=args.objects,
        max_extra_morphisms=args.extra,
        max_fiber_size=args.fiber,
        seed=args.seed or 0,
        max_morphisms=args.max_morphisms,
    )
    kind = args.kind
    C = testkit.gen_category(p)
    if kind == "category":
        result, out_kind = C, None
    elif kind == "set_presheaf":
        result, out_kind = testkit.gen_set_presheaf(C, p.reseed(1)), None
    elif kind == "bi_presheaf":
        D = testkit.gen_category(p.reseed(2))
        result, out_kind = testkit.gen_bi_presheaf(C, D, p.reseed(1)), None
    elif kind == "cat_presheaf":
        result, out_kind = testkit.gen_cat_presheaf(C, p.reseed(1)), None
    else:
        if args.outer is not None:
            P = _load(args.outer, "cat_presheaf").value
            rep = validate_cat_presheaf(P)
            if not rep.ok:
                raise InvalidInstance("invalid outer presheaf", rep)
        else:
            P = testkit.gen_cat_presheaf(C, p.reseed(1))
        result, out_kind = testkit.gen_q_over_elements(P, p.reseed(3)), "q_presheaf"
    _emit(serialize.dumps(result, out_kind), args.out)
    return EXIT_OK


# -- argument parsing -------------------------------------------------------------

def _nonneg(text: str) -> int:
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text}") from None
    if n < 0:
        raise argparse.ArgumentTypeError(f"must be non-negative: {text}")
    return n


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable report")
    common.add_argument("--out", metavar="PATH", help="write the resulting instance to PATH")
    common.add_argument("--bound", type=_nonneg, metavar="N",
                        help="morphism limit per category for functor enumeration (default 12)")
    common.add_argument("--seed", type=_nonneg, metavar="N", help="generator seed")

    parser = argparse.ArgumentParser(
        prog="sigmacat",
        description="Finite categories, presheaves and their Grothendieck constructions.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    v = sub.add_parser("validate", parents=[common], help="check the laws of an instance file")
    v.add_argument("path")
    v.set_defaults(func=cmd_validate)

    c = sub.add_parser("construct", parents=[common], help="build a derived instance")
    c.add_argument("construction", choices=CONSTRUCTIONS)
    c.add_argument("paths", nargs="+")
    c.add_argument("--object", metavar="NAME", help="object for slice and yoneda")
    c.set_defaults(func=cmd_construct)

    k = sub.add_parser("check", parents=[common], help="verify an isomorphism or fibration claim")
    k.add_argument("theorem", choices=THEOREMS)
    k.add_argument("paths", nargs="*")
    k.add_argument("--seeds", type=int, metavar="N", help="check N generated instances starting at --seed")
    k.set_defaults(func=cmd_check)

    g = sub.add_parser("gen", parents=[common], help="generate a random valid instance")
    g.add_argument("kind", choices=serialize.KINDS)
    g.add_argument("--objects", type=_nonneg, default=3, metavar="N", help="maximum number of objects")
    g.add_argument("--extra", type=_nonneg, default=3, metavar="N", help="maximum number of generating morphisms")
    g.add_argument("--fiber", type=_nonneg, default=2, metavar="N", help="maximum size of a value set or fiber")
    g.add_argument("--max-morphisms", type=_nonneg, default=8, metavar="N",
                   help="maximum number of morphisms per generated category")
    g.add_argument("--outer", metavar="PATH", help="for q_presheaf: the cat_presheaf it lives over")
    g.set_defaults(func=cmd_gen)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except BoundExceeded as exc:
        print(f"error: resource bound exceeded: {exc}", file=sys.stderr)
        return EXIT_BOUND
    except testkit.RetryBudgetExhausted as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BOUND
    except InvalidInstance as exc:
        print(f"error: {exc}", file=sys.stderr)
        if exc.report is not None:
            print(exc.report, file=sys.stderr)
        return EXIT_FAIL
    except (InstanceFormatError, UsageError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
