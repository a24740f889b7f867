"""
Categories of elements and slices
=================================

A presheaf on a small category is a family of finite sets with restriction
maps.  Its category of elements has one object per element and is fibred
discretely over the base.
"""

from sigmacat import FinCategory, validate_category
from sigmacat.core import check_strict_inverse_pair, slice_category
from sigmacat.elements import (
    SetPresheaf,
    category_of_elements,
    check_discrete_fibration,
    yoneda_slice_witness,
)
from sigmacat.names import render

# the walking arrow a --f--> b
C = FinCategory.build(
    ["a", "b"], [("1a", "a", "a"), ("1b", "b", "b"), ("f", "a", "b")], {"a": "1a", "b": "1b"}, {}
)
print(validate_category(C))

# two elements over b, both restricting to the single element over a
P = SetPresheaf(
    C,
    {"a": ["u"], "b": ["v", "w"]},
    {"1a": {"u": "u"}, "1b": {"v": "v", "w": "w"}, "f": {"v": "u", "w": "u"}},
)
E, pr1 = category_of_elements(P)
for m in E.morphisms:
    print(render(m), ":", render(E.dom[m]), "->", render(E.cod[m]))

# every base morphism into pr1(e) lifts uniquely
print("discrete fibration:", check_discrete_fibration(pr1))

# the elements of a representable are the slice over its object
span = FinCategory.build(
    ["a", "b", "c"],
    [("1a", "a", "a"), ("1b", "b", "b"), ("1c", "c", "c"), ("p", "c", "a"), ("q", "c", "b")],
    {"a": "1a", "b": "1b", "c": "1c"},
    {},
)
F, G = yoneda_slice_witness(span, "a")
print("slice objects:", [render(o) for o in slice_category(span, "a").objects])
print("strict isomorphism:", check_strict_inverse_pair(F, G))
