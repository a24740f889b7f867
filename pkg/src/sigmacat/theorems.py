"""Explicit isomorphism witnesses and full machine checks.

Each ``check_*`` function builds both categories, the witnessing functors, and
runs every law check, collecting the outcomes in a :class:`TheoremReport`.
Witnesses are constructed from their defining formulas, never searched for.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .core import (
    DEFAULT_BOUNDS,
    Bounds,
    CategoryError,
    FinCategory,
    Functor,
    InvalidInstance,
    check_strict_inverse_pair,
    validate_category,
    validate_functor,
)
from .elements import (
    BiPresheaf,
    SetPresheaf,
    category_of_elements,
    check_discrete_fibration,
    pi_presheaf,
    validate_set_presheaf,
)
from .grothendieck import (
    CatPresheaf,
    check_split_fibration,
    commutativity_witness,
    grothendieck,
    gr_morphism,
    pi_morphism,
    product_category_pi,
    sigma_CR,
    sigma_DR,
    unpack_gr,
    validate_cat_presheaf,
)
from .names import Name, Tagged, render


@dataclass
class Check:
    name: str
    passed: bool
    detail: str = ""
    witnesses: list = field(default_factory=list)

    def to_dict(self) -> dict:
        out = {"name": self.name, "passed": self.passed, "detail": self.detail}
        if self.witnesses:
            out["witnesses"] = self.witnesses
        return out


@dataclass
class TheoremReport:
    theorem: str
    instance: str = ""
    checks: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return bool(self.checks) and all(c.passed for c in self.checks)

    def check(self, name: str, passed: bool, detail: str = "") -> bool:
        self.checks.append(Check(name, bool(passed), detail))
        return bool(passed)

    def report(self, name: str, rep) -> bool:
        self.checks.append(
            Check(name, rep.ok, "" if rep.ok else str(rep), rep.to_dict()["violations"])
        )
        return rep.ok

    def to_dict(self) -> dict:
        return {
            "theorem": self.theorem,
            "instance": self.instance,
            "passed": self.passed,
            "checks": [c.to_dict() for c in self.checks],
        }

    def __str__(self) -> str:
        head = f"{self.theorem} [{self.instance}]: {'PASS' if self.passed else 'FAIL'}"
        lines = [head]
        for c in self.checks:
            lines.append(f"  {'ok  ' if c.passed else 'FAIL'} {c.name}")
            if c.detail and not c.passed:
                lines.extend("       " + ln for ln in c.detail.splitlines())
        return "\n".join(lines)


def _describe(C: FinCategory) -> str:
    return f"{len(C.objects)}ob/{len(C.morphisms)}mor"


# -- choice: Pi(C, Sigma^{D,R}) vs Sigma(Fun(C, D), Pi R) ---------------------

def ac_categories(R: BiPresheaf, bounds: Bounds = DEFAULT_BOUNDS) -> tuple[FinCategory, FinCategory]:
    """The two sides: the product category of R and the elements of Pi R."""
    left = product_category_pi(R, bounds)
    right, _ = category_of_elements(pi_presheaf(R, bounds))
    return left, right


def ac_functor(
    R: BiPresheaf, left: FinCategory, right: FinCategory
) -> Functor:
    """(Phi, F) |-> (F, second components of Phi); identity on transformations."""

    def on_obj(o):
        family, fn = o.body
        return (fn, tuple(u for _, u in family))

    def on_mor(m):
        eta, (s, t) = m.body
        return Tagged("el", (eta, (on_obj(s), on_obj(t))))

    F = Functor(
        left, right, {o: on_obj(o) for o in left.objects}, {m: on_mor(m) for m in left.morphisms}
    )
    _assert_lands(F, "AC")
    return F


def ca_functor(
    R: BiPresheaf, left: FinCategory, right: FinCategory
) -> Functor:
    """(F, Phi*) |-> ((F(a), Phi*_a))_a paired with F; identity on transformations."""
    C = R.left

    def on_obj(o):
        fn, star = o
        images = fn.body[0]
        return Tagged("pi", (tuple((images[i], star[i]) for i in range(len(C.objects))), fn))

    def on_mor(m):
        eta, (s, t) = m.body
        return pi_morphism(eta, on_obj(s), on_obj(t))

    G = Functor(
        right, left, {o: on_obj(o) for o in right.objects}, {m: on_mor(m) for m in right.morphisms}
    )
    _assert_lands(G, "CA")
    return G


def _assert_lands(F: Functor, label: str) -> None:
    for a, b in F.obj_map.items():
        if b not in F.target.identity:
            raise CategoryError(f"{label} sends {render(a)} outside its target")
    for m, n in F.mor_map.items():
        if n not in F.target.dom:
            raise CategoryError(f"{label} sends {render(m)} outside its target")


def _iso_checks(rep: TheoremReport, F: Functor, G: Functor, labels=("F", "G")) -> None:
    A, B = F.source, F.target
    rep.report("source category laws", validate_category(A))
    rep.report("target category laws", validate_category(B))
    okF = rep.report(f"{labels[0]} functor laws", validate_functor(F))
    okG = rep.report(f"{labels[1]} functor laws", validate_functor(G))
    if okF and okG:
        rep.check("strict inverse pair", check_strict_inverse_pair(F, G))
    else:
        rep.check("strict inverse pair", False, "skipped: functor laws failed")
    rep.check(
        "equal object counts",
        len(A.objects) == len(B.objects),
        f"{len(A.objects)} vs {len(B.objects)}",
    )
    rep.check(
        "equal morphism counts",
        len(A.morphisms) == len(B.morphisms),
        f"{len(A.morphisms)} vs {len(B.morphisms)}",
    )


def check_theorem_ac(R: BiPresheaf, bounds: Bounds = DEFAULT_BOUNDS) -> TheoremReport:
    rep = TheoremReport("ac")
    if not rep.report("input presheaf laws", validate_set_presheaf(R)):
        return rep
    left, right = ac_categories(R, bounds)
    rep.instance = f"C {_describe(R.left)}, D {_describe(R.right)}; sides {_describe(left)}"
    F = ac_functor(R, left, right)
    G = ca_functor(R, left, right)
    _iso_checks(rep, F, G, ("AC", "CA"))
    return rep


# -- commutativity of iterated Sigma ------------------------------------------

def check_theorem_commute(R: BiPresheaf) -> TheoremReport:
    rep = TheoremReport("commute")
    if not rep.report("input presheaf laws", validate_set_presheaf(R)):
        return rep
    C, D = R.left, R.right
    rep.report("Sigma^{D,R} presheaf laws", validate_cat_presheaf(sigma_DR(R)))
    rep.report("Sigma^{C,R} presheaf laws", validate_cat_presheaf(sigma_CR(R)))
    F, G = commutativity_witness(R)
    rep.instance = f"C {_describe(C)}, D {_describe(D)}; sides {_describe(F.source)}"
    _iso_checks(rep, F, G)
    expected = sum(len(R.values[(a, x)]) for a in C.objects for x in D.objects)
    rep.check(
        "object count equals total size of R",
        len(F.source.objects) == expected == len(F.target.objects),
        f"expected {expected}",
    )
    return rep


# -- associativity of the Grothendieck construction ---------------------------

def _require_compatible(P: CatPresheaf, Q: CatPresheaf) -> FinCategory:
    rep = validate_cat_presheaf(P)
    if not rep.ok:
        raise InvalidInstance("invalid outer presheaf", rep)
    E, _ = grothendieck(P)
    if Q.base != E:
        raise CategoryError("inner presheaf is not based on the Grothendieck construction of the outer one")
    rep = validate_cat_presheaf(Q)
    if not rep.ok:
        raise InvalidInstance("invalid inner presheaf", rep)
    return E


def q_restriction(P: CatPresheaf, Q: CatPresheaf, a: Name) -> CatPresheaf:
    """Q restricted to the fiber over ``a``: x |-> Q(a, x), j |-> Q(1_a, j)."""
    C = P.base
    if a not in C.identity:
        raise CategoryError(f"unknown object {render(a)}")
    _require_compatible(P, Q)
    return _q_restriction(P, Q, a)


def _q_restriction(P: CatPresheaf, Q: CatPresheaf, a: Name) -> CatPresheaf:
    C = P.base
    Fa = P.fibers[a]
    ia = C.identity[a]
    fibers = {x: Q.fibers[(a, x)] for x in Fa.objects}
    transitions = {
        j: Q.transitions[gr_morphism(ia, j, (a, Fa.dom[j]), (a, Fa.cod[j]))]
        for j in Fa.morphisms
    }
    return CatPresheaf(Fa, fibers, transitions)


def sigma_PQ(P: CatPresheaf, Q: CatPresheaf) -> CatPresheaf:
    """Over C: a |-> Grothendieck construction of Q restricted to the fiber over a."""
    _require_compatible(P, Q)
    C = P.base
    fibers = {a: grothendieck(_q_restriction(P, Q, a))[0] for a in C.objects}
    transitions = {}
    for f in C.morphisms:
        a, b = C.dom[f], C.cod[f]
        T, Fa = P.transitions[f], P.fibers[a]

        def lift(y, f=f, a=a, b=b, T=T, Fa=Fa):
            x = T.obj_map[y]
            return x, Q.transitions[gr_morphism(f, Fa.identity[x], (a, x), (b, y))]

        def on_obj(o, lift=lift):
            y, t = o
            x, Qf = lift(y)
            return (x, Qf.obj_map[t])

        src, tgt = fibers[b], fibers[a]
        mor_map = {}
        for m in src.morphisms:
            j, mu, s, t = unpack_gr(m)
            _, Qf = lift(s[0])
            mor_map[m] = gr_morphism(T.mor_map[j], Qf.mor_map[mu], on_obj(s), on_obj(t))
        transitions[f] = Functor(src, tgt, {o: on_obj(o) for o in src.objects}, mor_map)
    return CatPresheaf(C, fibers, transitions)


def assoc_witness(
    P: CatPresheaf, Q: CatPresheaf, sigma: Optional[CatPresheaf] = None
) -> tuple[Functor, Functor]:
    """(a, (x, u)) <-> ((a, x), u) between the two iterated constructions."""
    if sigma is None:
        sigma = sigma_PQ(P, Q)
    left, _ = grothendieck(sigma)
    right, _ = grothendieck(Q)

    def fwd_obj(o):
        a, (x, u) = o
        return ((a, x), u)

    def bwd_obj(o):
        (a, x), u = o
        return (a, (x, u))

    def fwd(m):
        f, inner, src, tgt = unpack_gr(m)
        i, lam, _, _ = unpack_gr(inner)
        (a, (x, _u)), (b, (y, _v)) = src, tgt
        return gr_morphism(gr_morphism(f, i, (a, x), (b, y)), lam, fwd_obj(src), fwd_obj(tgt))

    def bwd(m):
        fi, lam, src, tgt = unpack_gr(m)
        f, i, _, _ = unpack_gr(fi)
        ((a, x), u), ((b, y), v) = src, tgt
        inner_tgt = sigma.transitions[f].obj_map[(y, v)]
        inner = gr_morphism(i, lam, (x, u), inner_tgt)
        return gr_morphism(f, inner, bwd_obj(src), bwd_obj(tgt))

    F = Functor(left, right, {o: fwd_obj(o) for o in left.objects}, {m: fwd(m) for m in left.morphisms})
    G = Functor(right, left, {o: bwd_obj(o) for o in right.objects}, {m: bwd(m) for m in right.morphisms})
    return F, G


def check_theorem_assoc(P: CatPresheaf, Q: CatPresheaf) -> TheoremReport:
    rep = TheoremReport("assoc")
    if not rep.report("outer presheaf laws", validate_cat_presheaf(P)):
        return rep
    E, _ = grothendieck(P)
    if not rep.check("inner presheaf based on the outer construction", Q.base == E):
        return rep
    if not rep.report("inner presheaf laws", validate_cat_presheaf(Q)):
        return rep
    sigma = sigma_PQ(P, Q)
    for a in P.base.objects:
        rep.report(
            f"restriction over {render(a)} presheaf laws",
            validate_cat_presheaf(_q_restriction(P, Q, a)),
        )
    rep.report("Sigma^{P,Q} presheaf laws", validate_cat_presheaf(sigma))
    F, G = assoc_witness(P, Q, sigma)
    rep.instance = f"C {_describe(P.base)}, base of Q {_describe(E)}; sides {_describe(F.source)}"
    _iso_checks(rep, F, G)
    return rep


# -- fibrations -----------------------------------------------------------------

def check_disc_fib(P) -> TheoremReport:
    """First projection of a category of elements (or Grothendieck construction) is a discrete fibration."""
    rep = TheoremReport("disc-fib")
    if isinstance(P, SetPresheaf):
        if not rep.report("presheaf laws", validate_set_presheaf(P)):
            return rep
        E, pr1 = category_of_elements(P)
    else:
        if not rep.report("presheaf laws", validate_cat_presheaf(P)):
            return rep
        E, pr1 = grothendieck(P)
    rep.instance = f"total category {_describe(E)}"
    rep.report("projection functor laws", validate_functor(pr1))
    rep.check("discrete fibration", check_discrete_fibration(pr1))
    return rep


def check_split_fib(P: CatPresheaf) -> TheoremReport:
    rep = TheoremReport("split-fib")
    if not rep.report("presheaf laws", validate_cat_presheaf(P)):
        return rep
    E, pr1 = grothendieck(P)
    rep.instance = f"total category {_describe(E)}"
    rep.report("projection functor laws", validate_functor(pr1))
    rep.check("split fibration", check_split_fibration(P))
    return rep
