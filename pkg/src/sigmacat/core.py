"""Finite categories stored as explicit composition tables.

Everything in the package is built on :class:`FinCategory`: base categories,
fibers of Cat-valued presheaves and every constructed category.  Values are
never mutated after construction; law checking is separate and reports
violations as data (:func:`validate_category`, :func:`validate_functor`,
:func:`validate_nat_trans`).
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Iterable, Iterator, Mapping, Optional

from .names import Name, Tagged, name_key, render, sort_names


class CategoryError(ValueError):
    """Raised for malformed input or misuse of an operation."""


class InvalidInstance(CategoryError):
    """An input failed validation where a valid one is required."""

    def __init__(self, message: str, report: "ValidationReport | None" = None):
        super().__init__(message)
        self.report = report


class BoundExceeded(CategoryError):
    """An enumeration would exceed its configured resource bound."""

    def __init__(self, bound: str, limit: int, actual: int):
        super().__init__(f"bound {bound}={limit} exceeded (needs {actual})")
        self.bound = bound
        self.limit = limit
        self.actual = actual


@dataclass(frozen=True)
class Bounds:
    """Resource limits for exponential enumerations."""

    max_objects: int = 4
    max_morphisms: int = 12
    max_candidates: int = 10**6


DEFAULT_BOUNDS = Bounds()


@dataclass(frozen=True)
class Violation:
    law: str
    witness: tuple
    detail: str = ""

    def to_dict(self) -> dict:
        return {
            "law": self.law,
            "witness": [render(w) if not isinstance(w, str) else w for w in self.witness],
            "detail": self.detail,
        }


@dataclass
class ValidationReport:
    subject: str
    violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def add(self, law: str, *witness, detail: str = "") -> None:
        self.violations.append(Violation(law, tuple(witness), detail))

    def absorb(self, other: "ValidationReport", prefix: str) -> None:
        for v in other.violations:
            self.violations.append(Violation(f"{prefix}: {v.law}", v.witness, v.detail))

    def to_dict(self) -> dict:
        return {
            "subject": self.subject,
            "ok": self.ok,
            "violations": [v.to_dict() for v in self.violations],
        }

    def __str__(self) -> str:
        if self.ok:
            return f"{self.subject}: ok"
        lines = [f"{self.subject}: {len(self.violations)} violation(s)"]
        for v in self.violations:
            wit = ", ".join(render(w) for w in v.witness)
            lines.append(f"  - {v.law} [{wit}]" + (f" {v.detail}" if v.detail else ""))
        return "\n".join(lines)


class FinCategory:
    """A finite category given by objects, morphisms, identities and a composition table.

    ``composition`` maps ``(g, f)`` to ``g . f``.  The constructor stores the
    data as given and only rejects duplicate identifiers; use
    :func:`validate_category` for the category axioms.
    """

    def __init__(
        self,
        objects: Iterable[Name],
        morphisms: Iterable[tuple[Name, Name, Name]],
        identity: Mapping[Name, Name],
        composition: Mapping[tuple[Name, Name], Name],
    ):
        objects = list(objects)
        if len(set(objects)) != len(objects):
            raise CategoryError("duplicate object identifiers")
        dom: dict = {}
        cod: dict = {}
        for m, d, c in morphisms:
            if m in dom:
                raise CategoryError(f"duplicate morphism identifier {render(m)}")
            dom[m] = d
            cod[m] = c
        self.objects: tuple = sort_names(objects)
        self.morphisms: tuple = sort_names(dom)
        self.dom: dict = dom
        self.cod: dict = cod
        self.identity: dict = dict(identity)
        self.table: dict = dict(composition)

    @classmethod
    def build(cls, objects, morphisms, identity, composition) -> "FinCategory":
        """Like the constructor, but fills in unit-law composites that are absent."""
        morphisms = list(morphisms)
        table = dict(composition)
        for m, d, c in morphisms:
            if d in identity:
                table.setdefault((m, identity[d]), m)
            if c in identity:
                table.setdefault((identity[c], m), m)
        return cls(objects, morphisms, identity, table)

    def compose(self, g: Name, f: Name) -> Name:
        try:
            return self.table[(g, f)]
        except KeyError:
            raise CategoryError(f"{render(g)} . {render(f)} is not defined") from None

    def id(self, a: Name) -> Name:
        return self.identity[a]

    def is_identity(self, m: Name) -> bool:
        return self.identity.get(self.dom[m]) == m

    @cached_property
    def _homs(self) -> dict:
        homs: dict = {}
        for m in self.morphisms:
            homs.setdefault((self.dom[m], self.cod[m]), []).append(m)
        return {k: tuple(v) for k, v in homs.items()}

    def hom(self, a: Name, b: Name) -> tuple:
        return self._homs.get((a, b), ())

    @cached_property
    def _into(self) -> dict:
        into: dict = {}
        for m in self.morphisms:
            into.setdefault(self.cod[m], []).append(m)
        return into

    def morphisms_into(self, b: Name) -> list:
        return self._into.get(b, [])

    @cached_property
    def _outof(self) -> dict:
        out: dict = {}
        for m in self.morphisms:
            out.setdefault(self.dom[m], []).append(m)
        return out

    def morphisms_from(self, a: Name) -> list:
        return self._outof.get(a, [])

    def composable_pairs(self) -> Iterator[tuple[Name, Name]]:
        for f in self.morphisms:
            for g in self.morphisms_from(self.cod[f]):
                yield g, f

    def __eq__(self, other) -> bool:
        if self is other:
            return True
        if not isinstance(other, FinCategory):
            return NotImplemented
        return (
            self.objects == other.objects
            and self.dom == other.dom
            and self.cod == other.cod
            and self.identity == other.identity
            and self.table == other.table
        )

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return f"<FinCategory {len(self.objects)} objects, {len(self.morphisms)} morphisms>"


def validate_category(C: FinCategory) -> ValidationReport:
    rep = ValidationReport("category")
    obs = set(C.objects)
    for m in C.morphisms:
        if C.dom[m] not in obs:
            rep.add("unknown domain", m, C.dom[m])
        if C.cod[m] not in obs:
            rep.add("unknown codomain", m, C.cod[m])
    for a in C.objects:
        i = C.identity.get(a)
        if i is None:
            rep.add("missing identity", a)
        elif i not in C.dom:
            rep.add("identity is not a morphism", a, i)
        elif C.dom[i] != a or C.cod[i] != a:
            rep.add("identity endpoints", a, i)
    for a in C.identity:
        if a not in obs:
            rep.add("identity for unknown object", a)
    for (g, f), h in C.table.items():
        if g not in C.dom or f not in C.dom:
            rep.add("composite of unknown morphisms", g, f)
        elif C.cod[f] != C.dom[g]:
            rep.add("composite defined on non-composable pair", g, f)
        elif h not in C.dom:
            rep.add("composite is not a morphism", g, f, h)
        elif C.dom[h] != C.dom[f] or C.cod[h] != C.cod[g]:
            rep.add("composite endpoints", g, f, h)
    for g, f in C.composable_pairs():
        if (g, f) not in C.table:
            rep.add("missing composite", g, f)
    if not rep.ok:
        return rep
    for f in C.morphisms:
        if C.table[(f, C.identity[C.dom[f]])] != f:
            rep.add("right unit law", f)
        if C.table[(C.identity[C.cod[f]], f)] != f:
            rep.add("left unit law", f)
    for f in C.morphisms:
        for g in C.morphisms_from(C.cod[f]):
            gf = C.table[(g, f)]
            for h in C.morphisms_from(C.cod[g]):
                if C.table[(h, gf)] != C.table[(C.table[(h, g)], f)]:
                    rep.add("associativity", h, g, f)
    return rep


def terminal_category(obj: Name = "*", mor: Name = "1") -> FinCategory:
    return FinCategory([obj], [(mor, obj, obj)], {obj: mor}, {(mor, mor): mor})


def empty_category() -> FinCategory:
    return FinCategory([], [], {}, {})


def opposite(C: FinCategory) -> FinCategory:
    return FinCategory(
        C.objects,
        [(m, C.cod[m], C.dom[m]) for m in C.morphisms],
        C.identity,
        {(f, g): h for (g, f), h in C.table.items()},
    )


def product_category(C: FinCategory, D: FinCategory) -> FinCategory:
    objects = [(a, x) for a in C.objects for x in D.objects]
    morphisms = [
        ((f, p), (C.dom[f], D.dom[p]), (C.cod[f], D.cod[p]))
        for f in C.morphisms
        for p in D.morphisms
    ]
    identity = {(a, x): (C.identity[a], D.identity[x]) for a, x in objects}
    table = {
        ((g, q), (f, p)): (C.table[(g, f)], D.table[(q, p)])
        for g, f in C.composable_pairs()
        for q, p in D.composable_pairs()
    }
    return FinCategory(objects, morphisms, identity, table)


def slice_object(C: FinCategory, h: Name) -> Tagged:
    return Tagged("slice", (C.dom[h], h))


def slice_morphism(f: Name, src: Name, tgt: Name) -> Tagged:
    return Tagged("slice", (f, (src, tgt)))


def slice_category(C: FinCategory, a: Name) -> FinCategory:
    """The slice C/a: objects are morphisms into ``a``, morphisms commuting triangles."""
    if a not in C.identity:
        raise CategoryError(f"unknown object {render(a)}")
    over = C.morphisms_into(a)
    objects = [slice_object(C, h) for h in over]
    morphisms = []
    for h in over:
        for h2 in over:
            for f in C.hom(C.dom[h], C.dom[h2]):
                if C.table[(h2, f)] == h:
                    s, t = slice_object(C, h), slice_object(C, h2)
                    morphisms.append((slice_morphism(f, s, t), s, t))
    identity = {
        slice_object(C, h): slice_morphism(C.identity[C.dom[h]], slice_object(C, h), slice_object(C, h))
        for h in over
    }
    by_src: dict = {}
    for m, s, t in morphisms:
        by_src.setdefault(s, []).append((m, t))
    table = {}
    for f_id, s, t in morphisms:
        for g_id, u in by_src.get(t, []):
            f, g = f_id.body[0], g_id.body[0]
            table[(g_id, f_id)] = slice_morphism(C.table[(g, f)], s, u)
    return FinCategory(objects, morphisms, identity, table)


@dataclass(frozen=True, eq=False)
class Functor:
    source: FinCategory
    target: FinCategory
    obj_map: Mapping
    mor_map: Mapping

    def __eq__(self, other) -> bool:
        if not isinstance(other, Functor):
            return NotImplemented
        return (
            self.obj_map == other.obj_map
            and self.mor_map == other.mor_map
            and self.source == other.source
            and self.target == other.target
        )

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return f"<Functor {self.source!r} -> {self.target!r}>"


@dataclass(frozen=True, eq=False)
class NatTrans:
    source: Functor
    target: Functor
    components: Mapping

    def __eq__(self, other) -> bool:
        if not isinstance(other, NatTrans):
            return NotImplemented
        return (
            self.components == other.components
            and self.source == other.source
            and self.target == other.target
        )

    __hash__ = None  # type: ignore[assignment]


def identity_functor(C: FinCategory) -> Functor:
    return Functor(C, C, {a: a for a in C.objects}, {m: m for m in C.morphisms})


def compose_functors(G: Functor, F: Functor) -> Functor:
    """The composite ``G . F`` (apply F first)."""
    if F.target != G.source:
        raise CategoryError("cannot compose functors: intermediate categories differ")
    return Functor(
        F.source,
        G.target,
        {a: G.obj_map[F.obj_map[a]] for a in F.source.objects},
        {m: G.mor_map[F.mor_map[m]] for m in F.source.morphisms},
    )


def validate_functor(F: Functor) -> ValidationReport:
    rep = ValidationReport("functor")
    C, D = F.source, F.target
    for a in C.objects:
        if a not in F.obj_map:
            rep.add("object map not total", a)
        elif F.obj_map[a] not in D.identity:
            rep.add("object image not in target", a, F.obj_map[a])
    for m in C.morphisms:
        if m not in F.mor_map:
            rep.add("morphism map not total", m)
        elif F.mor_map[m] not in D.dom:
            rep.add("morphism image not in target", m, F.mor_map[m])
    if not rep.ok:
        return rep
    for m in C.morphisms:
        fm = F.mor_map[m]
        if D.dom[fm] != F.obj_map[C.dom[m]] or D.cod[fm] != F.obj_map[C.cod[m]]:
            rep.add("endpoints not preserved", m, fm)
    for a in C.objects:
        if F.mor_map[C.identity[a]] != D.identity[F.obj_map[a]]:
            rep.add("identity not preserved", a)
    if not rep.ok:
        return rep
    for g, f in C.composable_pairs():
        if F.mor_map[C.table[(g, f)]] != D.table.get((F.mor_map[g], F.mor_map[f])):
            rep.add("composition not preserved", g, f)
    return rep


def validate_nat_trans(eta: NatTrans) -> ValidationReport:
    rep = ValidationReport("natural transformation")
    F, G = eta.source, eta.target
    if F.source != G.source or F.target != G.target:
        rep.add("functors are not parallel")
        return rep
    C, D = F.source, F.target
    for a in C.objects:
        c = eta.components.get(a)
        if c is None:
            rep.add("missing component", a)
        elif c not in D.dom or D.dom[c] != F.obj_map[a] or D.cod[c] != G.obj_map[a]:
            rep.add("component has wrong endpoints", a, c)
    if not rep.ok:
        return rep
    for f in C.morphisms:
        a, b = C.dom[f], C.cod[f]
        lhs = D.table[(G.mor_map[f], eta.components[a])]
        rhs = D.table[(eta.components[b], F.mor_map[f])]
        if lhs != rhs:
            rep.add("naturality", f)
    return rep


def identity_nat_trans(F: Functor) -> NatTrans:
    return NatTrans(F, F, {a: F.target.identity[F.obj_map[a]] for a in F.source.objects})


def vertical_compose(theta: NatTrans, eta: NatTrans) -> NatTrans:
    """``theta . eta`` for eta : F => G and theta : G => H."""
    if eta.target != theta.source:
        raise CategoryError("natural transformations are not composable")
    D = eta.source.target
    return NatTrans(
        eta.source,
        theta.target,
        {a: D.table[(theta.components[a], eta.components[a])] for a in eta.source.source.objects},
    )


def check_enumeration_bounds(C: FinCategory, bounds: Bounds, what: str = "category") -> None:
    if len(C.objects) > bounds.max_objects:
        raise BoundExceeded("max_objects", bounds.max_objects, len(C.objects))
    if len(C.morphisms) > bounds.max_morphisms:
        raise BoundExceeded("max_morphisms", bounds.max_morphisms, len(C.morphisms))


def search_functors(
    C: FinCategory,
    D: FinCategory,
    obj_map: Optional[Mapping] = None,
    allowed: Optional[Callable[[Name, Name], bool]] = None,
) -> Iterator[Functor]:
    """Backtracking search over functors C -> D.

    ``obj_map`` fixes the object part; ``allowed(m, candidate)`` restricts the
    images of individual morphisms.  Output order is deterministic.
    """
    order = [m for m in C.morphisms if not C.is_identity(m)]
    pos = {m: i for i, m in enumerate(order)}
    for m in C.morphisms:
        pos.setdefault(m, -1)
    # each composition constraint is checked once, when its last morphism is assigned
    checks: list = [[] for _ in order]
    for g, f in C.composable_pairs():
        h = C.table[(g, f)]
        last = max(pos[g], pos[f], pos[h])
        if last >= 0:
            checks[last].append((g, f, h))

    if obj_map is not None:
        obj_maps: Iterable = [dict(obj_map)]
    else:
        obj_maps = (
            dict(zip(C.objects, images))
            for images in itertools.product(D.objects, repeat=len(C.objects))
        )

    for om in obj_maps:
        base = {C.identity[a]: D.identity[om[a]] for a in C.objects}
        cands = []
        for m in order:
            cs = D.hom(om[C.dom[m]], om[C.cod[m]])
            if allowed is not None:
                cs = tuple(c for c in cs if allowed(m, c))
            cands.append(cs)
        if any(not cs for cs in cands):
            continue
        mm = dict(base)
        yield from _extend(C, D, om, mm, order, cands, checks, 0)


def _extend(C, D, om, mm, order, cands, checks, i):
    if i == len(order):
        yield Functor(C, D, dict(om), {m: mm[m] for m in C.morphisms})
        return
    m = order[i]
    for c in cands[i]:
        mm[m] = c
        if all(D.table.get((mm[g], mm[f])) == mm[h] for g, f, h in checks[i]):
            yield from _extend(C, D, om, mm, order, cands, checks, i + 1)
    del mm[m]


def enumerate_functors(C: FinCategory, D: FinCategory, bounds: Bounds = DEFAULT_BOUNDS) -> list:
    """All functors C -> D, duplicate-free and in a deterministic order."""
    check_enumeration_bounds(C, bounds)
    check_enumeration_bounds(D, bounds)
    return list(search_functors(C, D))


def enumerate_nat_trans(F: Functor, G: Functor, bounds: Bounds = DEFAULT_BOUNDS) -> list:
    if F.source != G.source or F.target != G.target:
        raise CategoryError("functors are not parallel")
    C, D = F.source, F.target
    cands = [D.hom(F.obj_map[a], G.obj_map[a]) for a in C.objects]
    total = 1
    for cs in cands:
        total *= len(cs)
    if total > bounds.max_candidates:
        raise BoundExceeded("max_candidates", bounds.max_candidates, total)
    index = {a: i for i, a in enumerate(C.objects)}
    checks: list = [[] for _ in C.objects]
    for f in C.morphisms:
        checks[max(index[C.dom[f]], index[C.cod[f]])].append(f)
    out: list = []
    comps: dict = {}

    def go(i: int) -> None:
        if i == len(C.objects):
            out.append(NatTrans(F, G, dict(comps)))
            return
        a = C.objects[i]
        for c in cands[i]:
            comps[a] = c
            if all(
                D.table[(G.mor_map[f], comps[C.dom[f]])] == D.table[(comps[C.cod[f]], F.mor_map[f])]
                for f in checks[i]
            ):
                go(i + 1)
        comps.pop(a, None)

    go(0)
    return out


def functor_name(F: Functor) -> Tagged:
    C = F.source
    return Tagged(
        "fun",
        (tuple(F.obj_map[a] for a in C.objects), tuple(F.mor_map[m] for m in C.morphisms)),
    )


def functor_from_name(name: Tagged, C: FinCategory, D: FinCategory) -> Functor:
    obs, mors = name.body
    return Functor(C, D, dict(zip(C.objects, obs)), dict(zip(C.morphisms, mors)))


def nat_name(eta: NatTrans) -> Tagged:
    C = eta.source.source
    return Tagged(
        "nat",
        (functor_name(eta.source), functor_name(eta.target), tuple(eta.components[a] for a in C.objects)),
    )


def nat_from_name(name: Tagged, C: FinCategory, D: FinCategory) -> NatTrans:
    src, tgt, comps = name.body
    return NatTrans(
        functor_from_name(src, C, D), functor_from_name(tgt, C, D), dict(zip(C.objects, comps))
    )


def functor_category(C: FinCategory, D: FinCategory, bounds: Bounds = DEFAULT_BOUNDS) -> FinCategory:
    """Fun(C, D): functors as objects, natural transformations as morphisms."""
    functors = enumerate_functors(C, D, bounds)
    names = [functor_name(F) for F in functors]
    morphisms = []
    by_pair: dict = {}
    for F, fn in zip(functors, names):
        for G, gn in zip(functors, names):
            for eta in enumerate_nat_trans(F, G, bounds):
                comps = tuple(eta.components[a] for a in C.objects)
                n = Tagged("nat", (fn, gn, comps))
                morphisms.append((n, fn, gn))
                by_pair.setdefault(fn, []).append((n, gn, comps))
    identity = {
        fn: Tagged("nat", (fn, fn, tuple(D.identity[F.obj_map[a]] for a in C.objects)))
        for F, fn in zip(functors, names)
    }
    table = {}
    for n1, fn, gn in morphisms:
        c1 = n1.body[2]
        for n2, hn, c2 in by_pair.get(gn, []):
            comps = tuple(D.table[(y, x)] for x, y in zip(c1, c2))
            table[(n2, n1)] = Tagged("nat", (fn, hn, comps))
    return FinCategory(names, morphisms, identity, table)


def functor_on_names(A: FinCategory, B: FinCategory, on_obj: Callable, on_mor: Callable) -> Functor:
    """Build a functor from per-object and per-morphism rules."""
    return Functor(
        A, B, {a: on_obj(a) for a in A.objects}, {m: on_mor(m) for m in A.morphisms}
    )


def check_strict_inverse_pair(F: Functor, G: Functor) -> bool:
    """True iff ``G . F`` and ``F . G`` are identity functors on the nose."""
    if F.source != G.target or F.target != G.source:
        raise CategoryError("functors are not opposite-directed between the same categories")
    A, B = F.source, F.target
    for a in A.objects:
        if G.obj_map.get(F.obj_map.get(a)) != a:
            return False
    for m in A.morphisms:
        if G.mor_map.get(F.mor_map.get(m)) != m:
            return False
    for b in B.objects:
        if F.obj_map.get(G.obj_map.get(b)) != b:
            return False
    for m in B.morphisms:
        if F.mor_map.get(G.mor_map.get(m)) != m:
            return False
    return True


def relabel(
    C: FinCategory, obj_rename: Callable[[Name], Name], mor_rename: Callable[[Name], Name]
) -> FinCategory:
    """Rename objects and morphisms; the renamings must be injective."""
    ob = {a: obj_rename(a) for a in C.objects}
    mo = {m: mor_rename(m) for m in C.morphisms}
    if len(set(ob.values())) != len(ob) or len(set(mo.values())) != len(mo):
        raise CategoryError("renaming is not injective")
    return FinCategory(
        ob.values(),
        [(mo[m], ob[C.dom[m]], ob[C.cod[m]]) for m in C.morphisms],
        {ob[a]: mo[i] for a, i in C.identity.items()},
        {(mo[g], mo[f]): mo[h] for (g, f), h in C.table.items()},
    )


def find_isomorphisms(A: FinCategory, B: FinCategory, bounds: Bounds = DEFAULT_BOUNDS) -> list:
    """Brute-force search for strict isomorphisms; a cross-check for tiny instances only."""
    if len(A.objects) != len(B.objects) or len(A.morphisms) != len(B.morphisms):
        return []
    check_enumeration_bounds(A, bounds)
    out = []
    for perm in itertools.permutations(B.objects):
        om = dict(zip(A.objects, perm))
        for F in search_functors(A, B, obj_map=om):
            if len(set(F.mor_map.values())) == len(A.morphisms):
                out.append(F)
    return out
