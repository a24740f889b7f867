"""Seeded generators for small valid categories and presheaves.

Every generator is a pure function of its parameters and seed.  Categories
are built as concrete subcategories of finite sets: a few random functions
between small carrier sets, running forward along the object order, are
closed under composition, which makes the category axioms hold by
construction and the underlying graph acyclic.  Set-valued presheaves are quotients of
sums of representables and terminal presheaves by a random congruence, and
Cat-valued presheaves are assembled from a handful of strictly functorial
building blocks.
"""
from __future__ import annotations

import random
import string
from dataclasses import dataclass, replace
from itertools import product

from .core import (
    FinCategory,
    Functor,
    InvalidInstance,
    empty_category,
    identity_functor,
    opposite,
    product_category,
    validate_category,
)
from .elements import BiPresheaf, SetPresheaf, validate_set_presheaf
from .grothendieck import (
    CatPresheaf,
    constant_cat_presheaf,
    discretize,
    grothendieck,
    sigma_DR,
    validate_cat_presheaf,
)

MASK64 = (1 << 64) - 1


def mix(seed: int, salt: int = 0) -> int:
    """SplitMix64 step; used to advance and split seeds deterministically."""
    z = (seed + salt + 0x9E3779B97F4A7C15) & MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


@dataclass(frozen=True)
class GenParams:
    max_objects: int = 3
    max_extra_morphisms: int = 3
    max_fiber_size: int = 2
    seed: int = 0
    max_morphisms: int = 8
    max_carrier: int = 2

    def __post_init__(self):
        for name in ("max_objects", "max_extra_morphisms", "max_fiber_size", "max_morphisms", "max_carrier"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be non-negative")
        if not 0 <= self.seed <= MASK64:
            raise ValueError("seed must be a 64-bit unsigned integer")

    def reseed(self, salt: int) -> "GenParams":
        return replace(self, seed=mix(self.seed, salt))


class RetryBudgetExhausted(RuntimeError):
    pass


RETRY_BUDGET = 64


def _object_names(n: int) -> list:
    if n <= len(string.ascii_lowercase):
        return list(string.ascii_lowercase[:n])
    return [f"o{i}" for i in range(n)]


def _close(gens: set, carriers: dict, limit: int):
    """Close a set of (dom, cod, function) triples under composition, or None if it grows past ``limit``."""
    mors = set(gens)
    frontier = list(mors)
    while frontier:
        new = []
        for f in frontier:
            for g in list(mors):
                for first, second in ((f, g), (g, f)):
                    if first[1] == second[0]:
                        h = (first[0], second[1], tuple(second[2][i] for i in first[2]))
                        if h not in mors:
                            mors.add(h)
                            new.append(h)
                            if len(mors) > limit:
                                return None
        frontier = new
    return mors


def gen_category(p: GenParams) -> FinCategory:
    """A random small category; always passes :func:`validate_category`."""
    rng = random.Random(p.seed)
    if p.max_objects == 0:
        return empty_category()
    n = rng.randint(1, p.max_objects)
    obs = _object_names(n)
    carrier = max(1, p.max_carrier)
    carriers = {a: rng.randint(1, carrier) for a in obs}
    mors = {(a, a, tuple(range(carriers[a]))) for a in obs}
    limit = max(p.max_morphisms, n)
    for _ in range(rng.randint(0, p.max_extra_morphisms) if n > 1 else 0):
        # generators run forward in object order, so the only endomorphisms are identities
        i, j = sorted(rng.sample(range(n), 2))
        a, b = obs[i], obs[j]
        fn = tuple(rng.randrange(carriers[b]) for _ in range(carriers[a]))
        closed = _close(mors | {(a, b, fn)}, carriers, limit)
        if closed is not None:
            mors = closed
    ordered = sorted(mors, key=lambda m: (obs.index(m[0]), obs.index(m[1]), m[2]))
    names = {}
    k = 0
    for m in ordered:
        if m[0] == m[1] and m[2] == tuple(range(carriers[m[0]])):
            names[m] = f"1{m[0]}"
        else:
            names[m] = f"f{k}"
            k += 1
    table = {}
    for f in ordered:
        for g in ordered:
            if f[1] == g[0]:
                h = (f[0], g[1], tuple(g[2][i] for i in f[2]))
                table[(names[g], names[f])] = names[h]
    C = FinCategory(
        obs,
        [(names[m], m[0], m[1]) for m in ordered],
        {a: f"1{a}" for a in obs},
        table,
    )
    return C


class _UnionFind:
    def __init__(self, items):
        self.parent = {x: x for x in items}

    def find(self, x):
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, x, y) -> bool:
        rx, ry = self.find(x), self.find(y)
        if rx == ry:
            return False
        if repr(rx) > repr(ry):
            rx, ry = ry, rx
        self.parent[ry] = rx
        return True


def gen_set_presheaf(C: FinCategory, p: GenParams) -> SetPresheaf:
    """A random presheaf on ``C`` with at most ``max_fiber_size`` elements per object."""
    for attempt in range(RETRY_BUDGET):
        P = _gen_set_presheaf_once(C, p.reseed(attempt) if attempt else p)
        if validate_set_presheaf(P).ok:
            return P
    raise RetryBudgetExhausted("could not generate a valid set presheaf")


def _gen_set_presheaf_once(C: FinCategory, p: GenParams) -> SetPresheaf:
    rng = random.Random(mix(p.seed, 0x5E7))
    bound = p.max_fiber_size
    if bound == 0 or not C.objects:
        return SetPresheaf(C, {a: () for a in C.objects}, {f: {} for f in C.morphisms})
    summands = []
    for _ in range(rng.randint(1, 3)):
        summands.append(None if rng.random() < 0.25 else rng.choice(C.objects))
    if bound == 1 and None not in summands:
        summands.append(None)
    # elements of the sum: (summand index, morphism into its representing object) or (index, "*")
    elems = {
        b: [(i, "*") if s is None else (i, h) for i, s in enumerate(summands)
            for h in (["*"] if s is None else C.hom(b, s))]
        for b in C.objects
    }

    def act(f, e):
        i, h = e
        return e if h == "*" else (i, C.table[(h, f)])

    uf = _UnionFind([(b, e) for b in C.objects for e in elems[b]])

    def close(pending):
        while pending:
            b, e1, e2 = pending.pop()
            for f in C.morphisms_into(b):
                a = C.dom[f]
                x, y = act(f, e1), act(f, e2)
                if uf.union((a, x), (a, y)):
                    pending.append((a, x, y))

    pending = []
    for _ in range(rng.randint(0, 2)):
        b = rng.choice(C.objects)
        if len(elems[b]) >= 2:
            e1, e2 = rng.sample(elems[b], 2)
            if uf.union((b, e1), (b, e2)):
                pending.append((b, e1, e2))
    close(pending)
    while True:
        over = [
            b for b in C.objects
            if len({uf.find((b, e)) for e in elems[b]}) > bound
        ]
        if not over:
            break
        b = over[0]
        reps = sorted({uf.find((b, e)) for e in elems[b]}, key=repr)
        e1, e2 = rng.sample(reps, 2)
        uf.union(e1, e2)
        close([(b, e1[1], e2[1])])

    names = {}
    values = {}
    for b in C.objects:
        reps = sorted({uf.find((b, e)) for e in elems[b]}, key=repr)
        for i, r in enumerate(reps):
            names[r] = f"u{i}"
        values[b] = [names[r] for r in reps]
    actions = {}
    for f in C.morphisms:
        a, b = C.dom[f], C.cod[f]
        table = {}
        for e in elems[b]:
            table[names[uf.find((b, e))]] = names[uf.find((a, act(f, e)))]
        actions[f] = table
    return SetPresheaf(C, values, actions)


def gen_bi_presheaf(C: FinCategory, D: FinCategory, p: GenParams) -> BiPresheaf:
    P = gen_set_presheaf(product_category(C, D), p)
    return BiPresheaf(P.base, P.values, P.actions, C, D)


def _fiber_params(p: GenParams, salt: int) -> GenParams:
    return GenParams(
        max_objects=p.max_fiber_size,
        max_extra_morphisms=p.max_extra_morphisms,
        max_fiber_size=p.max_fiber_size,
        seed=mix(p.seed, salt),
        max_morphisms=p.max_morphisms,
        max_carrier=min(p.max_carrier, p.max_fiber_size),
    )


def _subset_presheaf(P: SetPresheaf) -> CatPresheaf:
    """a |-> subsets of P(a) ordered by inclusion; transitions take direct images."""
    C = P.base
    fibers = {}
    for a in C.objects:
        subsets = [
            tuple(u for u, keep in zip(P.values[a], bits) if keep)
            for bits in product((False, True), repeat=len(P.values[a]))
        ]
        incl = [(s, t) for s in subsets for t in subsets if set(s) <= set(t)]
        fibers[a] = FinCategory(
            subsets,
            [(("sub", s, t), s, t) for s, t in incl],
            {s: ("sub", s, s) for s in subsets},
            {
                (("sub", t, w), ("sub", s, t)): ("sub", s, w)
                for s, t in incl
                for t2, w in incl
                if t2 == t
            },
        )
    transitions = {}
    for f in C.morphisms:
        a, b = C.dom[f], C.cod[f]
        act = P.actions[f]

        # direct image along P(f) : P(b) -> P(a); monotone and strictly functorial
        def image(t, a=a, act=act):
            hit = {act[v] for v in t}
            return tuple(u for u in P.values[a] if u in hit)

        src, tgt = fibers[b], fibers[a]
        transitions[f] = Functor(
            src,
            tgt,
            {t: image(t) for t in src.objects},
            {m: ("sub", image(m[1]), image(m[2])) for m in src.morphisms},
        )
    return CatPresheaf(C, fibers, transitions)


def _pointwise_opposite(P: CatPresheaf) -> CatPresheaf:
    fibers = {a: opposite(F) for a, F in P.fibers.items()}
    C = P.base
    transitions = {
        f: Functor(fibers[C.cod[f]], fibers[C.dom[f]], T.obj_map, T.mor_map)
        for f, T in P.transitions.items()
    }
    return CatPresheaf(C, fibers, transitions)


def _product_with_constant(P: CatPresheaf, K: FinCategory) -> CatPresheaf:
    C = P.base
    fibers = {a: product_category(K, F) for a, F in P.fibers.items()}
    transitions = {}
    for f, T in P.transitions.items():
        src, tgt = fibers[C.cod[f]], fibers[C.dom[f]]
        transitions[f] = Functor(
            src,
            tgt,
            {(k, y): (k, T.obj_map[y]) for k, y in src.objects},
            {(m, n): (m, T.mor_map[n]) for m, n in src.morphisms},
        )
    return CatPresheaf(C, fibers, transitions)


KINDS = ("constant", "discrete", "subsets", "sigma", "product")


def gen_cat_presheaf(C: FinCategory, p: GenParams) -> CatPresheaf:
    """A random strict Cat-valued presheaf with fibers of at most ``max_fiber_size`` objects."""
    for attempt in range(RETRY_BUDGET):
        q = p.reseed(attempt) if attempt else p
        P = _gen_cat_presheaf_once(C, q)
        if P is None:
            continue
        if all(len(F.objects) <= p.max_fiber_size for F in P.fibers.values()):
            if validate_cat_presheaf(P).ok:
                return P
    K = gen_category(_fiber_params(p, 0xC0))
    P = constant_cat_presheaf(C, K)
    if not validate_cat_presheaf(P).ok:
        raise RetryBudgetExhausted("could not generate a valid cat presheaf")
    return P


def _gen_cat_presheaf_once(C: FinCategory, p: GenParams):
    rng = random.Random(mix(p.seed, 0xCA7))
    kind = rng.choice(KINDS)
    fp = _fiber_params(p, 0xF1)
    if kind == "constant":
        P = constant_cat_presheaf(C, gen_category(fp))
    elif kind == "discrete":
        P = discretize(gen_set_presheaf(C, fp))
    elif kind == "subsets":
        P = _subset_presheaf(gen_set_presheaf(C, replace(fp, max_fiber_size=1)))
    elif kind == "sigma":
        D = gen_category(replace(fp, max_objects=2))
        P = sigma_DR(gen_bi_presheaf(C, D, replace(fp, max_fiber_size=1)))
    else:
        K = gen_category(replace(fp, max_objects=max(1, p.max_fiber_size // 2)))
        P = _product_with_constant(discretize(gen_set_presheaf(C, fp)), K)
    if rng.random() < 0.3:
        P = _pointwise_opposite(P)
    return P


def gen_q_over_elements(P: CatPresheaf, p: GenParams) -> CatPresheaf:
    """A random Cat-valued presheaf on the Grothendieck construction of ``P``."""
    E, _ = grothendieck(P)
    return gen_cat_presheaf(E, p)


def is_thin(C: FinCategory) -> bool:
    return all(len(C.hom(a, b)) <= 1 for a in C.objects for b in C.objects)


def has_noninjective_action(P: SetPresheaf) -> bool:
    return any(len(set(t.values())) < len(t) for t in P.actions.values())


# -- instance families used by the theorem suites and `check --seeds` ---------

LAW_PARAMS = GenParams(max_objects=3, max_extra_morphisms=3, max_fiber_size=3, max_morphisms=8)
AC_PARAMS = GenParams(max_objects=2, max_extra_morphisms=3, max_fiber_size=2, max_morphisms=4)
ASSOC_PARAMS = GenParams(max_objects=2, max_extra_morphisms=2, max_fiber_size=2, max_morphisms=4)


def gen_ac_instance(seed: int, p: GenParams = AC_PARAMS) -> BiPresheaf:
    """A presheaf on C x D sized for exhaustive checks over Fun(C, D)."""
    C = gen_category(replace(p, seed=mix(seed, 1)))
    D = gen_category(replace(p, seed=mix(seed, 2)))
    return gen_bi_presheaf(C, D, replace(p, seed=mix(seed, 3)))


def gen_assoc_instance(seed: int, p: GenParams = ASSOC_PARAMS) -> tuple[CatPresheaf, CatPresheaf]:
    """An outer presheaf P on C and an inner presheaf Q on the Grothendieck construction of P."""
    C = gen_category(replace(p, seed=mix(seed, 1)))
    P = gen_cat_presheaf(C, replace(p, seed=mix(seed, 2)))
    Q = gen_q_over_elements(P, replace(p, seed=mix(seed, 3)))
    return P, Q


def gen_split_instance(seed: int, p: GenParams = LAW_PARAMS) -> CatPresheaf:
    C = gen_category(replace(p, seed=mix(seed, 1)))
    return gen_cat_presheaf(C, replace(p, seed=mix(seed, 2)))


def gen_elements_instance(seed: int, p: GenParams = LAW_PARAMS) -> SetPresheaf:
    C = gen_category(replace(p, seed=mix(seed, 1)))
    return gen_set_presheaf(C, replace(p, seed=mix(seed, 2)))
