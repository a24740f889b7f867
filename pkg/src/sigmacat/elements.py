"""Set-valued presheaves and the category of elements.

A presheaf ``P`` on ``C`` assigns a finite set ``P.values[a]`` to each object
and, contravariantly, a function ``P.actions[f]`` (a dict from ``P(b)`` to
``P(a)``) to each ``f : a -> b``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

from .core import (
    DEFAULT_BOUNDS,
    BoundExceeded,
    Bounds,
    CategoryError,
    FinCategory,
    Functor,
    InvalidInstance,
    ValidationReport,
    functor_category,
    functor_from_name,
    nat_from_name,
    product_category,
    slice_morphism,
    slice_object,
    slice_category,
    validate_category,
)
from .names import Name, Tagged, render, sort_names


@dataclass(frozen=True, eq=False)
class SetPresheaf:
    base: FinCategory
    values: Mapping
    actions: Mapping

    def __post_init__(self):
        object.__setattr__(self, "values", {a: sort_names(v) for a, v in self.values.items()})
        object.__setattr__(self, "actions", {m: dict(t) for m, t in self.actions.items()})

    def __eq__(self, other) -> bool:
        if not isinstance(other, SetPresheaf):
            return NotImplemented
        return (
            self.values == other.values
            and self.actions == other.actions
            and self.base == other.base
        )

    __hash__ = None  # type: ignore[assignment]


@dataclass(frozen=True, eq=False)
class BiPresheaf(SetPresheaf):
    """A presheaf on ``left x right`` that remembers its two factors."""

    left: FinCategory = None  # type: ignore[assignment]
    right: FinCategory = None  # type: ignore[assignment]

    @classmethod
    def over(cls, C: FinCategory, D: FinCategory, values: Mapping, actions: Mapping) -> "BiPresheaf":
        return cls(product_category(C, D), values, actions, C, D)

    @classmethod
    def from_presheaf(cls, P: SetPresheaf, C: FinCategory, D: FinCategory) -> "BiPresheaf":
        if P.base != product_category(C, D):
            raise CategoryError("presheaf base is not the product of the given factors")
        return cls(P.base, P.values, P.actions, C, D)


@dataclass(frozen=True, eq=False)
class PresheafMorphism:
    """A natural transformation between Set-valued presheaves, one function per object."""

    source: SetPresheaf
    target: SetPresheaf
    components: Mapping


def constant_set_presheaf(C: FinCategory, elements) -> SetPresheaf:
    elements = sort_names(elements)
    return SetPresheaf(
        C,
        {a: elements for a in C.objects},
        {m: {e: e for e in elements} for m in C.morphisms},
    )


def validate_set_presheaf(P: SetPresheaf) -> ValidationReport:
    rep = ValidationReport("set presheaf")
    C = P.base
    rep.absorb(validate_category(C), "base")
    if not rep.ok:
        return rep
    for a in C.objects:
        if a not in P.values:
            rep.add("missing value set", a)
        elif len(set(P.values[a])) != len(P.values[a]):
            rep.add("repeated element in value set", a)
    for m in C.morphisms:
        if m not in P.actions:
            rep.add("missing action", m)
    if not rep.ok:
        return rep
    for m in C.morphisms:
        src, tgt = P.values[C.cod[m]], set(P.values[C.dom[m]])
        act = P.actions[m]
        for v in src:
            if v not in act:
                rep.add("action not total", m, v)
            elif act[v] not in tgt:
                rep.add("action leaves its codomain", m, v, act[v])
        known = set(src)
        for v in act:
            if v not in known:
                rep.add("action defined outside its domain", m, v)
    if not rep.ok:
        return rep
    for a in C.objects:
        act = P.actions[C.identity[a]]
        if any(act[u] != u for u in P.values[a]):
            rep.add("identity does not act as identity", a)
    for g, f in C.composable_pairs():
        gf = C.table[(g, f)]
        pf, pg, pgf = P.actions[f], P.actions[g], P.actions[gf]
        for w in P.values[C.cod[g]]:
            if pgf[w] != pf[pg[w]]:
                rep.add("contravariant composition", g, f, w)
                break
    return rep


def _require_valid(P: SetPresheaf) -> None:
    rep = validate_set_presheaf(P)
    if not rep.ok:
        raise InvalidInstance("invalid set presheaf", rep)


def validate_presheaf_morphism(eta: PresheafMorphism) -> ValidationReport:
    rep = ValidationReport("presheaf morphism")
    P, Q = eta.source, eta.target
    if P.base != Q.base:
        rep.add("presheaves have different bases")
        return rep
    C = P.base
    for a in C.objects:
        comp = eta.components.get(a)
        if comp is None:
            rep.add("missing component", a)
            continue
        qa = set(Q.values[a])
        for u in P.values[a]:
            if u not in comp or comp[u] not in qa:
                rep.add("component is not a function into the target", a, u)
    if not rep.ok:
        return rep
    for f in C.morphisms:
        a, b = C.dom[f], C.cod[f]
        for v in P.values[b]:
            if Q.actions[f][eta.components[b][v]] != eta.components[a][P.actions[f][v]]:
                rep.add("naturality", f, v)
    return rep


def el_morphism(f: Name, src: Name, tgt: Name) -> Tagged:
    return Tagged("el", (f, (src, tgt)))


def category_of_elements(P: SetPresheaf) -> tuple[FinCategory, Functor]:
    """The category of elements of ``P`` with its projection to the base."""
    _require_valid(P)
    C = P.base
    objects = [(a, u) for a in C.objects for u in P.values[a]]
    morphisms = []
    for f in C.morphisms:
        a, b = C.dom[f], C.cod[f]
        for v in P.values[b]:
            src, tgt = (a, P.actions[f][v]), (b, v)
            morphisms.append((el_morphism(f, src, tgt), src, tgt))
    identity = {(a, u): el_morphism(C.identity[a], (a, u), (a, u)) for a, u in objects}
    out_of: dict = {}
    for m, s, t in morphisms:
        out_of.setdefault(s, []).append((m, t))
    table = {}
    for m, s, t in morphisms:
        for n, t2 in out_of.get(t, []):
            table[(n, m)] = el_morphism(C.table[(n.body[0], m.body[0])], s, t2)
    E = FinCategory(objects, morphisms, identity, table)
    pr1 = Functor(E, C, {o: o[0] for o in E.objects}, {m: m.body[0] for m in E.morphisms})
    return E, pr1


def elements_on_nat(eta: PresheafMorphism) -> Functor:
    """The functor between categories of elements induced by a presheaf morphism."""
    rep = validate_presheaf_morphism(eta)
    if not rep.ok:
        raise InvalidInstance("not a natural transformation", rep)
    EP, _ = category_of_elements(eta.source)
    EQ, _ = category_of_elements(eta.target)
    comp = eta.components

    def on_obj(o):
        a, u = o
        return (a, comp[a][u])

    return Functor(
        EP,
        EQ,
        {o: on_obj(o) for o in EP.objects},
        {
            m: el_morphism(m.body[0], on_obj(EP.dom[m]), on_obj(EP.cod[m]))
            for m in EP.morphisms
        },
    )


def compose_presheaf_morphisms(theta: PresheafMorphism, eta: PresheafMorphism) -> PresheafMorphism:
    return PresheafMorphism(
        eta.source,
        theta.target,
        {
            a: {u: theta.components[a][eta.components[a][u]] for u in eta.source.values[a]}
            for a in eta.source.base.objects
        },
    )


def identity_presheaf_morphism(P: SetPresheaf) -> PresheafMorphism:
    return PresheafMorphism(P, P, {a: {u: u for u in P.values[a]} for a in P.base.objects})


def yoneda_presheaf(C: FinCategory, a: Name) -> SetPresheaf:
    """The representable presheaf Mor(-, a), acting by precomposition."""
    if a not in C.identity:
        raise CategoryError(f"unknown object {render(a)}")
    values = {b: C.hom(b, a) for b in C.objects}
    actions = {f: {h: C.table[(h, f)] for h in values[C.cod[f]]} for f in C.morphisms}
    return SetPresheaf(C, values, actions)


def yoneda_slice_witness(C: FinCategory, a: Name) -> tuple[Functor, Functor]:
    """Explicit functors between the elements of Mor(-, a) and the slice C/a."""
    E, _ = category_of_elements(yoneda_presheaf(C, a))
    S = slice_category(C, a)

    def to_slice(o):
        return slice_object(C, o[1])

    F = Functor(
        E,
        S,
        {o: to_slice(o) for o in E.objects},
        {
            m: slice_morphism(m.body[0], to_slice(E.dom[m]), to_slice(E.cod[m]))
            for m in E.morphisms
        },
    )

    def from_slice(o):
        b, h = o.body
        return (b, h)

    G = Functor(
        S,
        E,
        {o: from_slice(o) for o in S.objects},
        {
            m: el_morphism(m.body[0], from_slice(S.dom[m]), from_slice(S.cod[m]))
            for m in S.morphisms
        },
    )
    return F, G


def restrict_presheaf(R: BiPresheaf, F: Functor) -> SetPresheaf:
    """Pull a presheaf on C x D back along the graph of ``F : C -> D``."""
    if F.source != R.left or F.target != R.right:
        raise CategoryError("functor does not match the factors of the presheaf base")
    C = F.source
    return SetPresheaf(
        C,
        {a: R.values[(a, F.obj_map[a])] for a in C.objects},
        {f: R.actions[(f, F.mor_map[f])] for f in C.morphisms},
    )


def in_product_set(P: SetPresheaf, family: Mapping) -> bool:
    C = P.base
    for a in C.objects:
        if a not in family or family[a] not in set(P.values[a]):
            return False
    return all(P.actions[f][family[C.cod[f]]] == family[C.dom[f]] for f in C.morphisms)


def product_set(P: SetPresheaf, bounds: Bounds = DEFAULT_BOUNDS) -> list:
    """All compatible families, as dicts from base objects to elements."""
    C = P.base
    total = 1
    for a in C.objects:
        total *= len(P.values[a])
    if total > bounds.max_candidates:
        raise BoundExceeded("max_candidates", bounds.max_candidates, total)
    index = {a: i for i, a in enumerate(C.objects)}
    checks: list = [[] for _ in C.objects]
    for f in C.morphisms:
        checks[max(index[C.dom[f]], index[C.cod[f]])].append(f)
    out: list = []
    fam: dict = {}

    def go(i: int) -> None:
        if i == len(C.objects):
            out.append(dict(fam))
            return
        a = C.objects[i]
        for u in P.values[a]:
            fam[a] = u
            if all(P.actions[f][fam[C.cod[f]]] == fam[C.dom[f]] for f in checks[i]):
                go(i + 1)
        fam.pop(a, None)

    go(0)
    return out


def family_tuple(C: FinCategory, family: Mapping) -> tuple:
    return tuple(family[a] for a in C.objects)


def pi_presheaf(R: BiPresheaf, bounds: Bounds = DEFAULT_BOUNDS) -> SetPresheaf:
    """The presheaf on Fun(C, D) sending F to the product set of R restricted along F."""
    C, D = R.left, R.right
    FC = functor_category(C, D, bounds)
    values = {}
    for fn in FC.objects:
        F = functor_from_name(fn, C, D)
        values[fn] = [family_tuple(C, fam) for fam in product_set(restrict_presheaf(R, F), bounds)]
    actions = {}
    for m in FC.morphisms:
        eta = nat_from_name(m, C, D)
        G = FC.cod[m]
        acts = [R.actions[(C.identity[a], eta.components[a])] for a in C.objects]
        actions[m] = {phi: tuple(act[x] for act, x in zip(acts, phi)) for phi in values[G]}
    return SetPresheaf(FC, values, actions)


def lifted_presheaf(P: SetPresheaf) -> SetPresheaf:
    """P pulled back to its own category of elements: (a, u) |-> P(a)."""
    E, pr1 = category_of_elements(P)
    return SetPresheaf(
        E,
        {o: P.values[o[0]] for o in E.objects},
        {m: P.actions[m.body[0]] for m in E.morphisms},
    )


def second_projection(P: SetPresheaf) -> dict:
    """The family (a, u) |-> u, checked to lie in the product set of the lifted presheaf."""
    lifted = lifted_presheaf(P)
    family = {o: o[1] for o in lifted.base.objects}
    if not in_product_set(lifted, family):
        raise CategoryError("second projection is not a compatible family")
    return family


def check_discrete_fibration(p: Functor) -> bool:
    """Every base morphism into p(e) has exactly one lift with codomain e."""
    E, C = p.source, p.target
    for e in E.objects:
        lifts: dict = {}
        for m in E.morphisms_into(e):
            lifts[p.mor_map[m]] = lifts.get(p.mor_map[m], 0) + 1
        for f in C.morphisms_into(p.obj_map[e]):
            if lifts.get(f, 0) != 1:
                return False
    return True
