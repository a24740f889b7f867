"""Acceptance suite: nine criteria, each run at its stated scale and time budget.

Run with ``pytest tests/test_acceptance.py -v`` (a summary line per criterion is
printed at the end) or directly with ``python tests/test_acceptance.py``.
"""
import sys
import time
from dataclasses import replace
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from acceptance_log import Result, record  # noqa: E402
from fixtures import arrow, one, z2  # noqa: E402
from golden_runner import GOLDEN, load_cases, run_case  # noqa: E402
from oracles import associate_ok, brute_associates, brute_functors, brute_product_set  # noqa: E402
from sigmacat import serialize  # noqa: E402
from sigmacat.core import (  # noqa: E402
    FinCategory,
    Functor,
    check_strict_inverse_pair,
    enumerate_functors,
    functor_category,
    opposite,
    product_category,
    slice_category,
    validate_category,
    validate_functor,
)
from sigmacat.elements import (  # noqa: E402
    category_of_elements,
    check_discrete_fibration,
    lifted_presheaf,
    pi_presheaf,
    product_set,
    second_projection,
    validate_set_presheaf,
    yoneda_slice_witness,
)
from sigmacat.grothendieck import (  # noqa: E402
    CatPresheaf,
    cat_product_set,
    check_cleavage,
    check_fibration,
    check_split_fibration,
    constant_cat_presheaf,
    designated_lift,
    find_associates,
    gr_morphism,
    grothendieck,
    product_category_pi,
    sigma_CR,
    sigma_DR,
    strip_endpoints,
    validate_cat_presheaf,
)
from sigmacat.testkit import (  # noqa: E402
    AC_PARAMS,
    LAW_PARAMS,
    gen_ac_instance,
    gen_assoc_instance,
    gen_bi_presheaf,
    gen_cat_presheaf,
    gen_category,
    gen_q_over_elements,
    gen_set_presheaf,
    mix,
)
from sigmacat.theorems import check_theorem_ac, check_theorem_assoc, check_theorem_commute, sigma_PQ  # noqa: E402

LAW_SEEDS = 1000
AC_SEEDS = 200
ASSOC_SEEDS = 100
COMMUTE_SEEDS = 200


def _law_instance(seed: int):
    p = replace(LAW_PARAMS, seed=mix(seed, 1))
    C = gen_category(p)
    D = gen_category(p.reseed(2))
    P = gen_set_presheaf(C, p.reseed(3))
    PP = gen_cat_presheaf(C, p.reseed(4))
    R = gen_bi_presheaf(C, D, p.reseed(5))
    Q = gen_q_over_elements(PP, p.reseed(6))
    return C, D, P, PP, R, Q


def _finish(number, title, failures, instances, start, budget=None) -> Result:
    elapsed = time.perf_counter() - start
    passed = not failures and (budget is None or elapsed <= budget)
    detail = ""
    if failures:
        detail = f"{len(failures)} failing, first: {failures[0]}"
    elif budget is not None and elapsed > budget:
        detail = "over time budget"
    return record(Result(number, title, passed, instances, elapsed, budget, detail))


# -- 1. law suites ------------------------------------------------------------------------------------

def criterion_1() -> Result:
    start = time.perf_counter()
    failures, checked = [], 0
    for s in range(LAW_SEEDS):
        C, D, P, PP, R, Q = _law_instance(s)
        reports = {
            "C": validate_category(C),
            "D": validate_category(D),
            "P": validate_set_presheaf(P),
            "cat P": validate_cat_presheaf(PP),
            "R": validate_set_presheaf(R),
            "Q": validate_cat_presheaf(Q),
            "elements of P": validate_category(category_of_elements(P)[0]),
            "Grothendieck of cat P": validate_category(grothendieck(PP)[0]),
            "Sigma^{D,R}": validate_cat_presheaf(sigma_DR(R)),
            "Sigma^{C,R}": validate_cat_presheaf(sigma_CR(R)),
            "Sigma^{P,Q}": validate_cat_presheaf(sigma_PQ(PP, Q)),
            "Pi R": validate_set_presheaf(pi_presheaf(R)),
            "Fun(C,D)": validate_category(functor_category(C, D)),
            "Pi(C, Sigma^{D,R})": validate_category(product_category_pi(R)),
            "C x D": validate_category(product_category(C, D)),
            "C^op": validate_category(opposite(C)),
        }
        for a in C.objects:
            reports[f"C/{a}"] = validate_category(slice_category(C, a))
        checked += len(reports)
        failures += [(s, name) for name, rep in reports.items() if not rep.ok]
    return _finish(1, f"law suites ({checked} objects validated)", failures, LAW_SEEDS, start, 120)


# -- 2-4. theorem suites --------------------------------------------------------------------------

def criterion_2() -> Result:
    start = time.perf_counter()
    failures = [s for s in range(AC_SEEDS) if not check_theorem_ac(gen_ac_instance(s)).passed]
    return _finish(2, "choice isomorphism", failures, AC_SEEDS, start, 60)


def criterion_3() -> Result:
    start = time.perf_counter()
    failures = [s for s in range(ASSOC_SEEDS) if not check_theorem_assoc(*gen_assoc_instance(s)).passed]
    return _finish(3, "associativity isomorphism", failures, ASSOC_SEEDS, start, 60)


def criterion_4() -> Result:
    start = time.perf_counter()
    failures = []
    for s in range(COMMUTE_SEEDS):
        R = gen_ac_instance(s)
        rep = check_theorem_commute(R)
        expected = sum(len(v) for v in R.values.values())
        sizes = {c.name: c.passed for c in rep.checks}
        if not rep.passed or not sizes.get("object count equals total size of R"):
            failures.append((s, expected))
    return _finish(4, "commutativity isomorphism", failures, COMMUTE_SEEDS, start, 30)


# -- 5. fixed identities --------------------------------------------------------------------------

def criterion_5() -> Result:
    start = time.perf_counter()
    failures, n = [], 0
    for s in range(LAW_SEEDS):
        C, D, *_ = _law_instance(s)
        n += 1
        E, _ = grothendieck(constant_cat_presheaf(C, D))
        if strip_endpoints(E) != product_category(C, D):
            failures.append((s, "constant"))
        for a in C.objects:
            F, G = yoneda_slice_witness(C, a)
            if not (validate_functor(F).ok and validate_functor(G).ok and check_strict_inverse_pair(F, G)):
                failures.append((s, "slice", a))
    return _finish(5, "constant fibers give products; representables give slices", failures, n, start)


# -- 6. fibrations -----------------------------------------------------------------------------------

def _negatives() -> list:
    """Hand-built cases each of which must be rejected."""
    out = []
    # a non-discrete fiber: pr1 of the Grothendieck construction is not a discrete fibration
    _, pr1 = grothendieck(constant_cat_presheaf(one(), z2()))
    out.append(("discrete fibration with a Z/2 fiber", check_discrete_fibration(pr1)))
    # a presheaf that is not strictly functorial is not split by the designated lifts
    A = arrow()
    bad = CatPresheaf(A, {"a": z2(), "b": one()}, {
        "1a": Functor(z2(), z2(), {"*": "*"}, {"1": "s", "s": "1"}),
        "1b": Functor(one(), one(), {"*": "*"}, {"1": "1"}),
        "f": Functor(one(), z2(), {"*": "*"}, {"1": "1"}),
    })
    out.append(("split fibration of a non-strict presheaf", check_split_fibration(bad)))
    # drop the only morphism over f: the projection has no lift of f at all
    P = constant_cat_presheaf(A, one())
    E, pr1 = grothendieck(P)
    mors = [m for m in E.morphisms if m.body[0][0] != "f"]
    keep = set(mors)
    sub = FinCategory(E.objects, [(m, E.dom[m], E.cod[m]) for m in mors], E.identity,
                      {k: v for k, v in E.table.items() if k[0] in keep and k[1] in keep})
    p = Functor(sub, A, pr1.obj_map, {m: pr1.mor_map[m] for m in mors})
    out.append(("fibration with a missing lift", check_fibration(p)))
    # a cleavage lifting identities by the non-trivial automorphism is cartesian but not split
    P = constant_cat_presheaf(A, z2())
    _, pr1 = grothendieck(P)
    base = designated_lift(P)

    def twisted(f, e):
        return gr_morphism(f, "s", e, e) if f in ("1a", "1b") else base(f, e)

    out.append(("non-split cleavage", check_cleavage(pr1, twisted)))
    return out


def criterion_6() -> Result:
    start = time.perf_counter()
    failures = []
    for s in range(LAW_SEEDS):
        _, _, P, PP, _, _ = _law_instance(s)
        if not check_discrete_fibration(category_of_elements(P)[1]):
            failures.append((s, "disc"))
        if not check_split_fibration(PP):
            failures.append((s, "split"))
    failures += [name for name, accepted in _negatives() if accepted]
    return _finish(6, "projections are (split/discrete) fibrations; negatives rejected", failures, LAW_SEEDS, start)


# -- 7. oracle equivalences ------------------------------------------------------------------------

def _canon_functor(om, mm):
    return tuple(sorted(om.items(), key=repr)), tuple(sorted(mm.items(), key=repr))


def _canon_family(fam):
    return tuple(sorted(fam.items(), key=repr))


def criterion_7() -> Result:
    start = time.perf_counter()
    failures, n = [], 0
    # functor enumeration against the full candidate space
    for s in range(AC_SEEDS):
        C = gen_category(replace(AC_PARAMS, seed=mix(s, 11)))
        D = gen_category(replace(AC_PARAMS, seed=mix(s, 12)))
        n += 1
        got = {_canon_functor(F.obj_map, F.mor_map) for F in enumerate_functors(C, D)}
        want = {_canon_functor(om, mm) for om, mm in brute_functors(C, D)}
        if got != want:
            failures.append((s, "functors"))
    # associates against filtering the library's own functor enumeration and the brute-force one
    for s in range(AC_SEEDS):
        R = gen_ac_instance(s)
        C, D = R.left, R.right
        functors = enumerate_functors(C, D)
        for fam in cat_product_set(sigma_DR(R)):
            n += 1
            got = {_canon_functor(F.obj_map, F.mor_map) for F in find_associates(R, fam)}
            filtered = {
                _canon_functor(F.obj_map, F.mor_map) for F in functors
                if all(F.obj_map[a] == fam[a][0] for a in C.objects)
                and all(associate_ok(R, fam, f, F.mor_map[f]) for f in C.morphisms)
            }
            brute = {_canon_functor(om, mm) for om, mm in brute_associates(R, fam)}
            if not got == filtered == brute:
                failures.append((s, "associates"))
    # product sets against filtering all choice functions
    for s in range(LAW_SEEDS):
        _, _, P, *_ = _law_instance(s)
        n += 1
        if {_canon_family(f) for f in product_set(P)} != {_canon_family(f) for f in brute_product_set(P)}:
            failures.append((s, "product set"))
    return _finish(7, "oracle equivalences", failures, n, start)


# -- 8. second projection ----------------------------------------------------------------------------

def criterion_8() -> Result:
    start = time.perf_counter()
    failures = []
    for s in range(LAW_SEEDS):
        _, _, P, *_ = _law_instance(s)
        fam = second_projection(P)
        if _canon_family(fam) not in {_canon_family(f) for f in product_set(lifted_presheaf(P))}:
            failures.append(s)
    return _finish(8, "second projection lies in the product set", failures, LAW_SEEDS, start)


# -- 9. CLI golden corpus ------------------------------------------------------------------------------

def criterion_9() -> Result:
    start = time.perf_counter()
    failures = []
    files = sorted(p for p in GOLDEN.rglob("*.json") if p.name != "cases.json")
    loadable = 0
    for path in files:
        text = path.read_text(encoding="utf-8")
        try:
            inst = serialize.loads(text)
        except serialize.InstanceFormatError:
            continue
        loadable += 1
        if serialize.dumps(inst) != text:
            failures.append(f"{path.name} is not byte-stable")
    cases = load_cases()
    for case in cases:
        problems = run_case(case).problems()
        if problems:
            failures.append(f"{' '.join(case['args'])}: {'; '.join(problems)}")
    codes = {c["exit"] for c in cases}
    if loadable < 10:
        failures.append(f"only {loadable} golden instances")
    if not {1, 2, 3} <= codes:
        failures.append(f"failure exit codes covered: {sorted(codes - {0})}")
    return _finish(9, f"CLI golden corpus ({loadable} instances, {len(cases)} invocations)",
                   failures, len(cases), start)


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
            criterion_6, criterion_7, criterion_8, criterion_9]


@pytest.mark.parametrize("criterion", CRITERIA, ids=[f"criterion_{i}" for i in range(1, 10)])
def test_acceptance(criterion):
    result = criterion()
    assert result.passed, result.line()


if __name__ == "__main__":
    results = [c() for c in CRITERIA]
    sys.exit(0 if all(r.passed for r in results) else 1)
