import pytest
from hypothesis import given, settings, strategies as st

from fixtures import ALL_CATEGORIES, arrow, constant_singleton_bi, non_discrete_over_one, one, parallel, set_presheaf, span, z2
from oracles import brute_product_set, elements_counts, is_isomorphic
from sigmacat.core import (
    CategoryError,
    Functor,
    InvalidInstance,
    check_strict_inverse_pair,
    enumerate_functors,
    functor_category,
    functor_from_name,
    identity_functor,
    product_category,
    slice_category,
    validate_category,
    validate_functor,
)
from sigmacat.elements import (
    BiPresheaf,
    PresheafMorphism,
    category_of_elements,
    check_discrete_fibration,
    compose_presheaf_morphisms,
    constant_set_presheaf,
    elements_on_nat,
    identity_presheaf_morphism,
    in_product_set,
    lifted_presheaf,
    pi_presheaf,
    product_set,
    restrict_presheaf,
    second_projection,
    validate_presheaf_morphism,
    validate_set_presheaf,
    yoneda_presheaf,
    yoneda_slice_witness,
)
from sigmacat.grothendieck import grothendieck
from sigmacat.testkit import GenParams, gen_bi_presheaf, gen_category, gen_set_presheaf, mix

seeds = st.integers(min_value=0, max_value=2**64 - 1)


def gen_pair(s, **kw):
    C = gen_category(GenParams(seed=s, **kw))
    return C, gen_set_presheaf(C, GenParams(seed=mix(s, 1), max_fiber_size=3, **kw))


# -- validation -------------------------------------------------------------------

@pytest.mark.parametrize("make", ALL_CATEGORIES)
def test_constant_presheaf_is_valid(make):
    assert validate_set_presheaf(constant_set_presheaf(make(), ["x", "y"])).ok


def test_identity_acting_non_trivially_is_named():
    A = arrow()
    P = set_presheaf(A, {"a": ["u", "w"], "b": ["v"]}, {"f": {"v": "u"}, "1a": {"u": "w", "w": "w"}})
    rep = validate_set_presheaf(P)
    assert [v.witness for v in rep.violations if v.law == "identity does not act as identity"] == [("a",)]


def test_actions_must_be_total_functions_into_the_right_set():
    A = arrow()
    assert not validate_set_presheaf(set_presheaf(A, {"a": ["u"], "b": ["v"]}, {"f": {}})).ok
    assert not validate_set_presheaf(set_presheaf(A, {"a": ["u"], "b": ["v"]}, {"f": {"v": "zz"}})).ok
    assert not validate_set_presheaf(set_presheaf(A, {"a": ["u"], "b": ["v"]}, {"f": {"v": "u", "q": "u"}})).ok


def test_contravariant_composition_violation():
    G = z2()
    P = set_presheaf(G, {"*": ["p", "q"]}, {"s": {"p": "p", "q": "p"}})
    rep = validate_set_presheaf(P)
    assert any(v.law == "contravariant composition" for v in rep.violations)


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_restriction_along_functors_is_valid(s):
    C = gen_category(GenParams(seed=s, max_objects=2, max_morphisms=4))
    D = gen_category(GenParams(seed=mix(s, 1), max_objects=2, max_morphisms=4))
    R = gen_bi_presheaf(C, D, GenParams(seed=mix(s, 2)))
    for F in enumerate_functors(C, D):
        assert validate_set_presheaf(restrict_presheaf(R, F)).ok


def test_restriction_trivial_cases():
    R = constant_singleton_bi(arrow(), span())
    for F in enumerate_functors(arrow(), span()):
        RF = restrict_presheaf(R, F)
        assert RF == constant_set_presheaf(arrow(), ["*"])
    R1 = BiPresheaf.over(one(), one(), {("*", "*"): ["r1", "r2"]}, {("1", "1"): {"r1": "r1", "r2": "r2"}})
    (F,) = enumerate_functors(one(), one())
    RF = restrict_presheaf(R1, F)
    assert RF.values == {"*": ("r1", "r2")}


def test_restriction_rejects_foreign_functor():
    R = constant_singleton_bi(arrow(), arrow())
    with pytest.raises(CategoryError):
        restrict_presheaf(R, identity_functor(span()))


# -- category of elements ---------------------------------------------------------------

def test_elements_of_a_set_over_one_is_discrete():
    E, _ = category_of_elements(set_presheaf(one(), {"*": ["u", "v"]}, {}))
    assert len(E.objects) == 2 and len(E.morphisms) == 2
    assert all(E.is_identity(m) for m in E.morphisms)


@pytest.mark.parametrize("make", ALL_CATEGORIES)
def test_elements_of_constant_singleton_is_isomorphic_to_base(make):
    C = make()
    E, pr1 = category_of_elements(constant_set_presheaf(C, ["*"]))
    # pr1 is bijective here, and its inverse is explicit
    inv_obj = {a: (a, "*") for a in C.objects}
    inv_mor = {pr1.mor_map[m]: m for m in E.morphisms}
    G = Functor(C, E, inv_obj, inv_mor)
    assert validate_functor(G).ok
    assert check_strict_inverse_pair(pr1, G)


def test_elements_over_arrow_is_arrow():
    P = set_presheaf(arrow(), {"a": ["u"], "b": ["v"]}, {"f": {"v": "u"}})
    E, _ = category_of_elements(P)
    assert set(E.objects) == {("a", "u"), ("b", "v")}
    non_identity = [m for m in E.morphisms if not E.is_identity(m)]
    assert len(non_identity) == 1
    (m,) = non_identity
    assert (E.dom[m], E.cod[m]) == (("a", "u"), ("b", "v"))
    assert is_isomorphic(E, arrow())


@settings(max_examples=80, deadline=None)
@given(seeds)
def test_elements_of_generated_presheaves(s):
    C, P = gen_pair(s)
    E, pr1 = category_of_elements(P)
    assert validate_category(E).ok
    assert validate_functor(pr1).ok
    assert (len(E.objects), len(E.morphisms)) == elements_counts(P)
    assert check_discrete_fibration(pr1)
    # each morphism f* : (a, u) -> (b, v) satisfies [P(f)](v) = u
    for m in E.morphisms:
        (a, u), (b, v) = E.dom[m], E.cod[m]
        assert P.actions[pr1.mor_map[m]][v] == u


def test_invalid_presheaf_is_rejected():
    bad = set_presheaf(arrow(), {"a": ["u"], "b": ["v"]}, {"f": {}})
    with pytest.raises(InvalidInstance):
        category_of_elements(bad)


# -- functoriality in the presheaf ---------------------------------------------------------

def test_elements_on_identity_is_identity():
    P = set_presheaf(arrow(), {"a": ["u", "w"], "b": ["v"]}, {"f": {"v": "u"}})
    F = elements_on_nat(identity_presheaf_morphism(P))
    assert F == identity_functor(category_of_elements(P)[0])


def test_elements_on_collapsing_map():
    P = set_presheaf(one(), {"*": ["u", "v"]}, {})
    Q = set_presheaf(one(), {"*": ["w"]}, {})
    F = elements_on_nat(PresheafMorphism(P, Q, {"*": {"u": "w", "v": "w"}}))
    assert set(F.obj_map.values()) == {("*", "w")}


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_elements_on_generated_natural_transformations(s):
    """Natural maps P => Q, found by brute force, induce functors between the categories of elements."""
    from itertools import product

    C, P = gen_pair(s, max_objects=2, max_morphisms=4)
    Q = gen_set_presheaf(C, GenParams(seed=mix(s, 7), max_fiber_size=2))
    found = 0
    choices = [list(product(Q.values[a], repeat=len(P.values[a]))) for a in C.objects]
    for combo in product(*choices):
        comps = {a: dict(zip(P.values[a], img)) for a, img in zip(C.objects, combo)}
        eta = PresheafMorphism(P, Q, comps)
        if not validate_presheaf_morphism(eta).ok:
            continue
        found += 1
        F = elements_on_nat(eta)
        assert validate_functor(F).ok
        EQ = F.target
        for m in F.source.morphisms:
            assert F.mor_map[m] in EQ.dom
        if found > 20:
            break
    # composites are respected too
    I = identity_presheaf_morphism(P)
    assert elements_on_nat(compose_presheaf_morphisms(I, I)) == elements_on_nat(I)


def test_non_natural_map_is_rejected():
    P = set_presheaf(arrow(), {"a": ["u1", "u2"], "b": ["v"]}, {"f": {"v": "u1"}})
    Q = set_presheaf(arrow(), {"a": ["u1", "u2"], "b": ["v"]}, {"f": {"v": "u1"}})
    eta = PresheafMorphism(P, Q, {"a": {"u1": "u2", "u2": "u1"}, "b": {"v": "v"}})
    with pytest.raises(InvalidInstance):
        elements_on_nat(eta)


# -- Yoneda and slices ------------------------------------------------------------------------

def test_yoneda_examples():
    Y = yoneda_presheaf(one(), "*")
    assert Y == constant_set_presheaf(one(), ["1"])
    Yb = yoneda_presheaf(arrow(), "b")
    assert Yb.values == {"a": ("f",), "b": ("1b",)}
    assert Yb.actions["f"] == {"1b": "f"}
    with pytest.raises(CategoryError):
        yoneda_presheaf(arrow(), "zz")


@pytest.mark.parametrize("make", ALL_CATEGORIES)
def test_yoneda_elements_are_the_slice(make):
    C = make()
    for a in C.objects:
        assert validate_set_presheaf(yoneda_presheaf(C, a)).ok
        F, G = yoneda_slice_witness(C, a)
        assert F.target == slice_category(C, a)
        assert validate_functor(F).ok and validate_functor(G).ok
        assert check_strict_inverse_pair(F, G)


# -- product sets --------------------------------------------------------------------------------

def test_product_set_examples():
    assert len(product_set(set_presheaf(one(), {"*": ["u", "v"]}, {}))) == 2
    # an empty value set leaves no families at all
    P = set_presheaf(arrow(), {"a": ["u"], "b": []}, {"f": {}})
    assert validate_set_presheaf(P).ok
    assert product_set(P) == []
    Q = set_presheaf(arrow(), {"a": ["u1", "u2"], "b": ["v"]}, {"f": {"v": "u1"}})
    assert product_set(Q) == [{"a": "u1", "b": "v"}]


@settings(max_examples=100, deadline=None)
@given(seeds)
def test_product_set_matches_brute_force(s):
    _, P = gen_pair(s)
    got = product_set(P)
    assert sorted(map(sorted, (f.items() for f in got))) == sorted(
        map(sorted, (f.items() for f in brute_product_set(P)))
    )
    assert all(in_product_set(P, f) for f in got)


# -- the presheaf of product sets on Fun(C, D) ---------------------------------------------------------

def test_pi_presheaf_over_one():
    R = BiPresheaf.over(one(), one(), {("*", "*"): ["r1", "r2"]}, {("1", "1"): {"r1": "r1", "r2": "r2"}})
    PR = pi_presheaf(R)
    assert len(PR.base.objects) == 1
    (F,) = PR.base.objects
    assert len(PR.values[F]) == 2


def test_pi_presheaf_of_constant_singleton():
    R = constant_singleton_bi(arrow(), arrow())
    PR = pi_presheaf(R)
    assert all(len(v) == 1 for v in PR.values.values())
    assert validate_set_presheaf(PR).ok


@pytest.mark.parametrize("seed", range(25))
def test_pi_presheaf_over_arrow_squared_matches_brute_force(seed):
    R = gen_bi_presheaf(arrow(), arrow(), GenParams(seed=seed, max_fiber_size=2))
    PR = pi_presheaf(R)
    assert validate_set_presheaf(PR).ok
    for fn in PR.base.objects:
        F = functor_from_name(fn, arrow(), arrow())
        assert len(PR.values[fn]) == len(brute_product_set(restrict_presheaf(R, F)))


def test_pi_presheaf_base_is_the_functor_category():
    R = constant_singleton_bi(arrow(), parallel())
    assert pi_presheaf(R).base == functor_category(arrow(), parallel())


# -- the second projection -------------------------------------------------------------------------

def test_second_projection_examples():
    P = set_presheaf(one(), {"*": ["u"]}, {})
    assert second_projection(P) == {("*", "u"): "u"}
    E = set_presheaf(arrow(), {"a": [], "b": []}, {"f": {}})
    assert second_projection(E) == {}


@settings(max_examples=100, deadline=None)
@given(seeds)
def test_second_projection_is_a_compatible_family(s):
    _, P = gen_pair(s)
    fam = second_projection(P)
    lifted = lifted_presheaf(P)
    assert validate_set_presheaf(lifted).ok
    assert fam in product_set(lifted)
    E = lifted.base
    for m in E.morphisms:
        (a, u), (b, v) = E.dom[m], E.cod[m]
        assert lifted.actions[m][fam[(b, v)]] == fam[(a, u)]


# -- discrete fibrations ------------------------------------------------------------------------------

def test_identity_is_a_discrete_fibration():
    assert check_discrete_fibration(identity_functor(span()))


def test_non_discrete_fiber_is_not_a_discrete_fibration():
    _, pr1 = grothendieck(non_discrete_over_one())
    assert not check_discrete_fibration(pr1)


def test_product_projection_is_not_a_discrete_fibration():
    P = product_category(arrow(), arrow())
    pr = Functor(P, arrow(), {o: o[0] for o in P.objects}, {m: m[0] for m in P.morphisms})
    assert validate_functor(pr).ok
    assert not check_discrete_fibration(pr)
