"""Finite categories, Set- and Cat-valued presheaves, and exhaustive checks of
the isomorphisms between their Grothendieck constructions."""

from .core import (
    DEFAULT_BOUNDS,
    BoundExceeded,
    Bounds,
    CategoryError,
    FinCategory,
    Functor,
    InvalidInstance,
    NatTrans,
    ValidationReport,
    compose_functors,
    empty_category,
    enumerate_functors,
    enumerate_nat_trans,
    functor_category,
    identity_functor,
    opposite,
    product_category,
    slice_category,
    terminal_category,
    validate_category,
    validate_functor,
    validate_nat_trans,
)
from .elements import (
    BiPresheaf,
    PresheafMorphism,
    SetPresheaf,
    category_of_elements,
    check_discrete_fibration,
    lifted_presheaf,
    pi_presheaf,
    product_set,
    second_projection,
    validate_set_presheaf,
    yoneda_presheaf,
    yoneda_slice_witness,
)
from .grothendieck import (
    CatPresheaf,
    cat_product_set,
    check_split_fibration,
    commutativity_witness,
    constant_cat_presheaf,
    find_associates,
    grothendieck,
    product_category_pi,
    sigma_CR,
    sigma_DR,
    validate_cat_presheaf,
)
from .names import Tagged, parse, render
from .theorems import (
    TheoremReport,
    assoc_witness,
    check_disc_fib,
    check_split_fib,
    check_theorem_ac,
    check_theorem_assoc,
    check_theorem_commute,
    sigma_PQ,
)

__version__ = "0.1.0"
