"""
Iterating the Grothendieck construction
=======================================

Given P over C and Q over the total category of P, the two ways of
bracketing the iterated construction give strictly isomorphic categories.
"""

from sigmacat.grothendieck import grothendieck
from sigmacat.names import render
from sigmacat.testkit import gen_assoc_instance
from sigmacat.theorems import assoc_witness, check_theorem_assoc, sigma_PQ

P, Q = gen_assoc_instance(3)
E, _ = grothendieck(P)
print("base:", len(P.base.objects), "objects; total of P:", len(E.objects), "objects")

S = sigma_PQ(P, Q)
for a, fiber in S.fibers.items():
    print("fibre over", render(a), "has", len(fiber.objects), "objects")

F, G = assoc_witness(P, Q)
for o in F.source.objects[:4]:
    print(render(o), "|->", render(F.obj_map[o]))

print(check_theorem_assoc(P, Q))

bad = [s for s in range(100) if not check_theorem_assoc(*gen_assoc_instance(s)).passed]
print("failures over 100 seeds:", bad)
