"""Small hand-built categories and presheaves shared by the test modules."""
from sigmacat.core import FinCategory, Functor
from sigmacat.elements import BiPresheaf, SetPresheaf
from sigmacat.grothendieck import CatPresheaf


def one():
    return FinCategory.build(["*"], [("1", "*", "*")], {"*": "1"}, {})


def arrow():
    """a --f--> b"""
    return FinCategory.build(
        ["a", "b"], [("1a", "a", "a"), ("1b", "b", "b"), ("f", "a", "b")], {"a": "1a", "b": "1b"}, {}
    )


def chain3():
    """The free category on a --f--> b --g--> c."""
    return FinCategory.build(
        ["a", "b", "c"],
        [("1a", "a", "a"), ("1b", "b", "b"), ("1c", "c", "c"), ("f", "a", "b"), ("g", "b", "c"), ("gf", "a", "c")],
        {"a": "1a", "b": "1b", "c": "1c"},
        {("g", "f"): "gf"},
    )


def free4():
    """The free category on a --f--> b --g--> c --h--> d."""
    obs = ["a", "b", "c", "d"]
    paths = {("a", "b"): "f", ("b", "c"): "g", ("c", "d"): "h",
             ("a", "c"): "gf", ("b", "d"): "hg", ("a", "d"): "hgf"}
    mors = [(f"1{o}", o, o) for o in obs] + [(m, s, t) for (s, t), m in paths.items()]
    table = {}
    for (s1, t1), m1 in paths.items():
        for (s2, t2), m2 in paths.items():
            if t1 == s2:
                table[(m2, m1)] = paths[(s1, t2)]
    return FinCategory.build(obs, mors, {o: f"1{o}" for o in obs}, table)


def parallel():
    """Two parallel arrows f, g : a -> b."""
    return FinCategory.build(
        ["a", "b"],
        [("1a", "a", "a"), ("1b", "b", "b"), ("f", "a", "b"), ("g", "a", "b")],
        {"a": "1a", "b": "1b"},
        {},
    )


def idempotent():
    """One object with a single idempotent e . e = e."""
    return FinCategory.build(["*"], [("1", "*", "*"), ("e", "*", "*")], {"*": "1"}, {("e", "e"): "e"})


def z2():
    """The group of order two as a one-object category."""
    return FinCategory.build(["*"], [("1", "*", "*"), ("s", "*", "*")], {"*": "1"}, {("s", "s"): "1"})


def span():
    """a <--p-- c --q--> b"""
    return FinCategory.build(
        ["a", "b", "c"],
        [("1a", "a", "a"), ("1b", "b", "b"), ("1c", "c", "c"), ("p", "c", "a"), ("q", "c", "b")],
        {"a": "1a", "b": "1b", "c": "1c"},
        {},
    )


ALL_CATEGORIES = [one, arrow, chain3, parallel, idempotent, z2, span]


def set_presheaf(C, values, actions):
    """Presheaf with identity actions filled in."""
    acts = {C.identity[a]: {u: u for u in values[a]} for a in C.objects}
    acts.update(actions)
    return SetPresheaf(C, values, acts)


def constant_singleton_bi(C, D):
    return BiPresheaf.over(
        C,
        D,
        {(a, x): ["*"] for a in C.objects for x in D.objects},
        {(f, g): {"*": "*"} for f in C.morphisms for g in D.morphisms},
    )


def non_discrete_over_one():
    """A Cat-valued presheaf on 1 whose fiber is the arrow category."""
    A = arrow()
    I = Functor(A, A, {"a": "a", "b": "b"}, {"1a": "1a", "1b": "1b", "f": "f"})
    return CatPresheaf(one(), {"*": A}, {"1": I})
