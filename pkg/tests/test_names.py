import pytest
from hypothesis import given, strategies as st

from sigmacat.names import NameSyntaxError, Tagged, name_key, parse, render, sort_names

atoms = st.text(min_size=0, max_size=6)
tags = st.from_regex(r"[A-Za-z_][A-Za-z0-9_\-]{0,4}", fullmatch=True)
names = st.recursive(
    atoms,
    lambda inner: st.one_of(
        st.lists(inner, max_size=3).map(tuple),
        st.builds(Tagged, tags, inner),
    ),
    max_leaves=12,
)


@given(names)
def test_render_parse_round_trip(n):
    assert parse(render(n)) == n


@given(st.lists(names, max_size=8))
def test_name_key_is_a_total_order_consistent_with_equality(ns):
    s = sort_names(ns)
    keys = [name_key(n) for n in s]
    assert keys == sorted(keys)
    for a in ns:
        for b in ns:
            assert (name_key(a) == name_key(b)) == (a == b)


def test_tagged_is_not_a_tuple():
    assert Tagged("el", ("f", "g")) != ("el", ("f", "g"))
    assert Tagged("el", "x") != Tagged("gr", "x")


@pytest.mark.parametrize(
    "name, text",
    [
        ("a", "a"),
        ("v x", '"v x"'),
        ("", '""'),
        (("a", "u"), "(a,u)"),
        (("a",), "(a,)"),
        ((), "()"),
        (Tagged("el", ("f", (("a", "u"), ("b", "v x")))), 'el[(f,((a,u),(b,"v x")))]'),
    ],
)
def test_render_examples(name, text):
    assert render(name) == text
    assert parse(text) == name


@pytest.mark.parametrize("bad", ["(a", "(a)", "a]", "x[a", "(a,b))", "", '"unterminated', "1x[a]"])
def test_parse_rejects_malformed(bad):
    with pytest.raises(NameSyntaxError):
        parse(bad)


def test_render_rejects_non_names():
    with pytest.raises(TypeError):
        render(3)
