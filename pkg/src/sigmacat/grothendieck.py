"""Cat-valued presheaves and the Grothendieck construction.

A Cat-valued presheaf ``P`` on ``C`` has a fiber category ``P.fibers[a]`` for
each object and a transition functor ``P.transitions[f] : P(b) -> P(a)`` for
each ``f : a -> b``.  Functoriality is strict: transitions must compose on the
nose.

Morphisms of a Grothendieck construction are named
``gr[((f, phi), (source, target))]``; the endpoints are needed because the
pair ``(f, phi)`` alone does not determine the codomain.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Mapping, Optional

from .core import (
    DEFAULT_BOUNDS,
    BoundExceeded,
    Bounds,
    CategoryError,
    FinCategory,
    Functor,
    InvalidInstance,
    ValidationReport,
    check_enumeration_bounds,
    compose_functors,
    enumerate_nat_trans,
    functor_name,
    identity_functor,
    nat_name,
    relabel,
    search_functors,
    validate_category,
    validate_functor,
)
from .elements import (
    BiPresheaf,
    SetPresheaf,
    category_of_elements,
    el_morphism,
    validate_set_presheaf,
)
from .names import Name, Tagged, render, sort_names


@dataclass(frozen=True, eq=False)
class CatPresheaf:
    base: FinCategory
    fibers: Mapping
    transitions: Mapping

    def __eq__(self, other) -> bool:
        if not isinstance(other, CatPresheaf):
            return NotImplemented
        return (
            self.base == other.base
            and self.fibers == other.fibers
            and self.transitions == other.transitions
        )

    __hash__ = None  # type: ignore[assignment]


def validate_cat_presheaf(P: CatPresheaf) -> ValidationReport:
    rep = ValidationReport("cat presheaf")
    C = P.base
    rep.absorb(validate_category(C), "base")
    if not rep.ok:
        return rep
    for a in C.objects:
        if a not in P.fibers:
            rep.add("missing fiber", a)
        else:
            rep.absorb(validate_category(P.fibers[a]), f"fiber {render(a)}")
    for f in C.morphisms:
        if f not in P.transitions:
            rep.add("missing transition", f)
    if not rep.ok:
        return rep
    for f in C.morphisms:
        T = P.transitions[f]
        if T.source != P.fibers[C.cod[f]] or T.target != P.fibers[C.dom[f]]:
            rep.add("transition between the wrong fibers", f)
            continue
        rep.absorb(validate_functor(T), f"transition {render(f)}")
    if not rep.ok:
        return rep
    for a in C.objects:
        T, I = P.transitions[C.identity[a]], identity_functor(P.fibers[a])
        if T.obj_map != I.obj_map or T.mor_map != I.mor_map:
            rep.add("identity does not act as the identity functor", a)
    for g, f in C.composable_pairs():
        lhs = P.transitions[C.table[(g, f)]]
        rhs = compose_functors(P.transitions[f], P.transitions[g])
        if lhs.obj_map != rhs.obj_map or lhs.mor_map != rhs.mor_map:
            rep.add("strict contravariant composition", g, f)
    return rep


def _require_valid(P: CatPresheaf) -> None:
    rep = validate_cat_presheaf(P)
    if not rep.ok:
        raise InvalidInstance("invalid cat presheaf", rep)


def gr_morphism(f: Name, phi: Name, src: Name, tgt: Name) -> Tagged:
    return Tagged("gr", ((f, phi), (src, tgt)))


def unpack_gr(m: Tagged) -> tuple:
    """``gr[((f, phi), (src, tgt))]`` -> ``(f, phi, src, tgt)``."""
    (f, phi), (src, tgt) = m.body
    return f, phi, src, tgt


def grothendieck(P: CatPresheaf) -> tuple[FinCategory, Functor]:
    """The Grothendieck construction of ``P`` with its first projection."""
    _require_valid(P)
    C = P.base
    objects = [(a, x) for a in C.objects for x in P.fibers[a].objects]
    morphisms = []
    for f in C.morphisms:
        a, b = C.dom[f], C.cod[f]
        T, Fa = P.transitions[f], P.fibers[a]
        for y in P.fibers[b].objects:
            for phi in Fa.morphisms_into(T.obj_map[y]):
                src, tgt = (a, Fa.dom[phi]), (b, y)
                morphisms.append((gr_morphism(f, phi, src, tgt), src, tgt))
    identity = {
        (a, x): gr_morphism(C.identity[a], P.fibers[a].identity[x], (a, x), (a, x))
        for a, x in objects
    }
    out_of: dict = {}
    for m, s, t in morphisms:
        out_of.setdefault(s, []).append((m, t))
    table = {}
    for m, s, t in morphisms:
        f, phi = m.body[0]
        Fa = P.fibers[s[0]]
        T = P.transitions[f]
        for n, t2 in out_of.get(t, []):
            g, theta = n.body[0]
            table[(n, m)] = gr_morphism(
                C.table[(g, f)], Fa.table[(T.mor_map[theta], phi)], s, t2
            )
    E = FinCategory(objects, morphisms, identity, table)
    pr1 = Functor(E, C, {o: o[0] for o in E.objects}, {m: m.body[0][0] for m in E.morphisms})
    return E, pr1


def constant_cat_presheaf(C: FinCategory, D: FinCategory) -> CatPresheaf:
    one = identity_functor(D)
    return CatPresheaf(C, {a: D for a in C.objects}, {f: one for f in C.morphisms})


def strip_endpoints(E: FinCategory) -> FinCategory:
    """Rename ``gr[((f, phi), ends)]`` to the bare pair ``(f, phi)``.

    Raises :class:`CategoryError` when the pairs do not determine the
    morphisms, i.e. when some transition functor is not injective on objects.
    """
    return relabel(E, lambda o: o, lambda m: m.body[0])


def as_elements_names(E: FinCategory) -> FinCategory:
    """Rename a Grothendieck construction with discrete fibers to category-of-elements names."""
    def rename(m):
        f, _, src, tgt = unpack_gr(m)
        return el_morphism(f, src, tgt)

    return relabel(E, lambda o: o, rename)


def discrete_category(elements) -> FinCategory:
    elements = sort_names(elements)
    ids = {u: Tagged("id", u) for u in elements}
    return FinCategory(
        elements, [(ids[u], u, u) for u in elements], ids, {(i, i): i for i in ids.values()}
    )


def discretize(P: SetPresheaf) -> CatPresheaf:
    """A Set-valued presheaf viewed as a Cat-valued one with discrete fibers."""
    C = P.base
    fibers = {a: discrete_category(P.values[a]) for a in C.objects}
    transitions = {}
    for f in C.morphisms:
        act = P.actions[f]
        src, tgt = fibers[C.cod[f]], fibers[C.dom[f]]
        transitions[f] = Functor(
            src, tgt, dict(act), {Tagged("id", v): Tagged("id", act[v]) for v in src.objects}
        )
    return CatPresheaf(C, fibers, transitions)


def curry_left(R: BiPresheaf, a: Name) -> SetPresheaf:
    """The presheaf x |-> R(a, x) on the right factor."""
    C, D = R.left, R.right
    if a not in C.identity:
        raise CategoryError(f"unknown object {render(a)}")
    ia = C.identity[a]
    return SetPresheaf(
        D,
        {x: R.values[(a, x)] for x in D.objects},
        {phi: R.actions[(ia, phi)] for phi in D.morphisms},
    )


def curry_right(R: BiPresheaf, x: Name) -> SetPresheaf:
    """The presheaf a |-> R(a, x) on the left factor."""
    C, D = R.left, R.right
    if x not in D.identity:
        raise CategoryError(f"unknown object {render(x)}")
    ix = D.identity[x]
    return SetPresheaf(
        C,
        {a: R.values[(a, x)] for a in C.objects},
        {f: R.actions[(f, ix)] for f in C.morphisms},
    )


def _reindex_elements(src: FinCategory, tgt: FinCategory, on_obj: Callable) -> Functor:
    return Functor(
        src,
        tgt,
        {o: on_obj(o) for o in src.objects},
        {
            m: el_morphism(m.body[0], on_obj(src.dom[m]), on_obj(src.cod[m]))
            for m in src.morphisms
        },
    )


def sigma_DR(R: BiPresheaf) -> CatPresheaf:
    """Over the left factor: a |-> elements of x |-> R(a, x)."""
    rep = validate_set_presheaf(R)
    if not rep.ok:
        raise InvalidInstance("invalid bi-presheaf", rep)
    C, D = R.left, R.right
    fibers = {a: category_of_elements(curry_left(R, a))[0] for a in C.objects}
    transitions = {}
    for f in C.morphisms:
        a, b = C.dom[f], C.cod[f]

        def on_obj(o, f=f):
            x, u = o
            return (x, R.actions[(f, D.identity[x])][u])

        transitions[f] = _reindex_elements(fibers[b], fibers[a], on_obj)
    return CatPresheaf(C, fibers, transitions)


def sigma_CR(R: BiPresheaf) -> CatPresheaf:
    """Over the right factor: x |-> elements of a |-> R(a, x)."""
    rep = validate_set_presheaf(R)
    if not rep.ok:
        raise InvalidInstance("invalid bi-presheaf", rep)
    C, D = R.left, R.right
    fibers = {x: category_of_elements(curry_right(R, x))[0] for x in D.objects}
    transitions = {}
    for phi in D.morphisms:
        x, y = D.dom[phi], D.cod[phi]

        def on_obj(o, phi=phi):
            a, u = o
            return (a, R.actions[(C.identity[a], phi)][u])

        transitions[phi] = _reindex_elements(fibers[y], fibers[x], on_obj)
    return CatPresheaf(D, fibers, transitions)


def commutativity_witness(R: BiPresheaf) -> tuple[Functor, Functor]:
    """Mutually inverse functors swapping (a, (x, u)) and (x, (a, u))."""
    C, D = R.left, R.right
    left, _ = grothendieck(sigma_DR(R))
    right, _ = grothendieck(sigma_CR(R))

    def swap(o):
        a, (x, u) = o
        return (x, (a, u))

    def forward(m):
        f, inner, src, tgt = unpack_gr(m)
        phi = inner.body[0]
        b, (y, v) = tgt
        v2 = R.actions[(C.identity[b], phi)][v]
        a, (x, u) = src
        return gr_morphism(phi, el_morphism(f, (a, u), (b, v2)), swap(src), swap(tgt))

    def backward(m):
        phi, inner, src, tgt = unpack_gr(m)
        f = inner.body[0]
        y, (b, v) = tgt
        u2 = R.actions[(f, D.identity[y])][v]
        x, (a, u) = src
        return gr_morphism(f, el_morphism(phi, (x, u), (y, u2)), swap(src), swap(tgt))

    F = Functor(
        left, right, {o: swap(o) for o in left.objects}, {m: forward(m) for m in left.morphisms}
    )
    G = Functor(
        right, left, {o: swap(o) for o in right.objects}, {m: backward(m) for m in right.morphisms}
    )
    return F, G


def in_cat_product_set(P: CatPresheaf, family: Mapping) -> bool:
    C = P.base
    for a in C.objects:
        if a not in family or family[a] not in P.fibers[a].identity:
            return False
    return all(
        P.fibers[C.dom[f]].hom(family[C.dom[f]], P.transitions[f].obj_map[family[C.cod[f]]])
        for f in C.morphisms
    )


def cat_product_set(P: CatPresheaf, bounds: Bounds = DEFAULT_BOUNDS) -> list:
    """Families of fiber objects connected along every base morphism."""
    C = P.base
    total = 1
    for a in C.objects:
        total *= len(P.fibers[a].objects)
    if total > bounds.max_candidates:
        raise BoundExceeded("max_candidates", bounds.max_candidates, total)
    index = {a: i for i, a in enumerate(C.objects)}
    checks: list = [[] for _ in C.objects]
    for f in C.morphisms:
        checks[max(index[C.dom[f]], index[C.cod[f]])].append(f)
    out: list = []
    fam: dict = {}

    def connected(f) -> bool:
        a, b = C.dom[f], C.cod[f]
        return bool(P.fibers[a].hom(fam[a], P.transitions[f].obj_map[fam[b]]))

    def go(i: int) -> None:
        if i == len(C.objects):
            out.append(dict(fam))
            return
        a = C.objects[i]
        for x in P.fibers[a].objects:
            fam[a] = x
            if all(connected(f) for f in checks[i]):
                go(i + 1)
        fam.pop(a, None)

    go(0)
    return out


def associate_condition(R: BiPresheaf, family: Mapping, f: Name, psi: Name) -> bool:
    """Whether ``psi`` underlies a morphism Phi_a -> [Sigma(f)](Phi_b) in the fiber over a."""
    C, D = R.left, R.right
    a, b = C.dom[f], C.cod[f]
    (x, u), (y, v) = family[a], family[b]
    if D.dom[psi] != x or D.cod[psi] != y:
        return False
    moved = R.actions[(f, D.identity[y])][v]
    return R.actions[(C.identity[a], psi)][moved] == u


def find_associates(
    R: BiPresheaf, family: Mapping, sigma: Optional[CatPresheaf] = None
) -> list:
    """All functors C -> D whose object part is read off the family and whose
    morphisms satisfy :func:`associate_condition`."""
    if sigma is None:
        sigma = sigma_DR(R)
    if not in_cat_product_set(sigma, family):
        raise CategoryError("family is not in the product set")
    C, D = R.left, R.right
    obj_map = {a: family[a][0] for a in C.objects}
    return list(
        search_functors(
            C, D, obj_map=obj_map, allowed=lambda f, psi: associate_condition(R, family, f, psi)
        )
    )


def pi_object(C: FinCategory, family: Mapping, F: Functor) -> Tagged:
    return Tagged("pi", (tuple(family[a] for a in C.objects), functor_name(F)))


def pi_morphism(eta_name: Name, src: Name, tgt: Name) -> Tagged:
    return Tagged("pi", (eta_name, (src, tgt)))


def product_category_pi(R: BiPresheaf, bounds: Bounds = DEFAULT_BOUNDS) -> FinCategory:
    """Pairs (family, associate) with compatible natural transformations between them."""
    C, D = R.left, R.right
    check_enumeration_bounds(C, bounds)
    check_enumeration_bounds(D, bounds)
    sigma = sigma_DR(R)
    entries = []
    for fam in cat_product_set(sigma, bounds):
        for F in find_associates(R, fam, sigma):
            entries.append((pi_object(C, fam, F), fam, F))
    morphisms = []
    out_of: dict = {}
    for s, fam, F in entries:
        for t, fam2, G in entries:
            for eta in enumerate_nat_trans(F, G, bounds):
                if all(
                    R.actions[(C.identity[a], eta.components[a])][fam2[a][1]] == fam[a][1]
                    for a in C.objects
                ):
                    comps = tuple(eta.components[a] for a in C.objects)
                    m = pi_morphism(nat_name(eta), s, t)
                    morphisms.append((m, s, t))
                    out_of.setdefault(s, []).append((m, t, comps))
    identity = {}
    for s, fam, F in entries:
        fn = functor_name(F)
        comps = tuple(D.identity[F.obj_map[a]] for a in C.objects)
        identity[s] = pi_morphism(Tagged("nat", (fn, fn, comps)), s, s)
    table = {}
    for s, fam, F in entries:
        for m1, t, c1 in out_of.get(s, []):
            for m2, u, c2 in out_of.get(t, []):
                comps = tuple(D.table[(y, x)] for x, y in zip(c1, c2))
                fn, hn = s.body[1], u.body[1]
                table[(m2, m1)] = pi_morphism(Tagged("nat", (fn, hn, comps)), s, u)
    return FinCategory([e[0] for e in entries], morphisms, identity, table)


def is_cartesian(p: Functor, m: Name) -> bool:
    """Brute-force check that ``m`` is cartesian for ``p``."""
    E, C = p.source, p.target
    e1, e2 = E.dom[m], E.cod[m]
    pm = p.mor_map[m]
    for e0 in E.objects:
        for h in E.hom(e0, e2):
            ph = p.mor_map[h]
            for g in C.hom(p.obj_map[e0], p.obj_map[e1]):
                if C.table[(pm, g)] != ph:
                    continue
                sols = [
                    k for k in E.hom(e0, e1)
                    if p.mor_map[k] == g and E.table[(m, k)] == h
                ]
                if len(sols) != 1:
                    return False
    return True


def check_fibration(p: Functor) -> bool:
    """Every base morphism into p(e) has some cartesian lift with codomain e."""
    E, C = p.source, p.target
    for e in E.objects:
        for f in C.morphisms_into(p.obj_map[e]):
            if not any(
                p.mor_map[m] == f and is_cartesian(p, m) for m in E.morphisms_into(e)
            ):
                return False
    return True


def check_cleavage(p: Functor, lift: Callable[[Name, Name], Optional[Name]], split: bool = True) -> bool:
    """Check a choice of lifts: each is a cartesian morphism over its base
    morphism, and (when ``split``) identities and composites are preserved."""
    E, C = p.source, p.target
    for e in E.objects:
        b = p.obj_map[e]
        for f in C.morphisms_into(b):
            m = lift(f, e)
            if m is None or m not in E.dom:
                return False
            if E.cod[m] != e or p.mor_map[m] != f or not is_cartesian(p, m):
                return False
        if split and lift(C.identity[b], e) != E.identity[e]:
            return False
    if not split:
        return True
    for e in E.objects:
        c = p.obj_map[e]
        for g in C.morphisms_into(c):
            lg = lift(g, e)
            for f in C.morphisms_into(C.dom[g]):
                lf = lift(f, E.dom[lg])
                if lift(C.table[(g, f)], e) != E.table[(lg, lf)]:
                    return False
    return True


def designated_lift(P: CatPresheaf) -> Callable[[Name, Name], Name]:
    """The lift (f, 1) : (a, [P(f)](y)) -> (b, y)."""
    C = P.base

    def lift(f, e):
        b, y = e
        a = C.dom[f]
        x = P.transitions[f].obj_map[y]
        return gr_morphism(f, P.fibers[a].identity[x], (a, x), (b, y))

    return lift


def check_split_fibration(P: CatPresheaf) -> bool:
    """Whether the first projection of the Grothendieck construction is split by the designated lifts."""
    if not validate_cat_presheaf(P).ok:
        return False
    E, pr1 = grothendieck(P)
    return check_cleavage(pr1, designated_lift(P))
