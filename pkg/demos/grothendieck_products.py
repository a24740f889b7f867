"""
Grothendieck constructions and products
=======================================

A Cat-valued presheaf assigns a category to each object and a functor to
each morphism.  With a constant value the construction is just a product,
and the projection to the base always splits.
"""

from sigmacat import FinCategory
from sigmacat.core import product_category
from sigmacat.elements import check_discrete_fibration
from sigmacat.grothendieck import (
    check_split_fibration,
    constant_cat_presheaf,
    grothendieck,
    strip_endpoints,
)
from sigmacat.testkit import GenParams, gen_cat_presheaf, gen_category

arrow = FinCategory.build(
    ["a", "b"], [("1a", "a", "a"), ("1b", "b", "b"), ("f", "a", "b")], {"a": "1a", "b": "1b"}, {}
)
z2 = FinCategory.build(["*"], [("1", "*", "*"), ("s", "*", "*")], {"*": "1"}, {("s", "s"): "1"})

# constant fibre Z/2 over the arrow
P = constant_cat_presheaf(arrow, z2)
E, pr1 = grothendieck(P)
print(len(E.objects), "objects,", len(E.morphisms), "morphisms")

# morphisms carry their endpoints; stripping them leaves the product
print("equals the product:", strip_endpoints(E) == product_category(arrow, z2))

# split, but not discrete: the fibre has a non-identity automorphism
print("split fibration:", check_split_fibration(P))
print("discrete fibration:", check_discrete_fibration(pr1))

# the same holds for random strict presheaves
for seed in range(5):
    C = gen_category(GenParams(seed=seed))
    Q = gen_cat_presheaf(C, GenParams(seed=seed, max_fiber_size=3))
    print(seed, len(C.objects), "base objects, split:", check_split_fibration(Q))
