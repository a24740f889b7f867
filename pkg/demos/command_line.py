"""
Driving the command-line tool
=============================

Every command reads and writes JSON instance files, and the exit status
says what happened: 0 pass, 1 failed check, 2 bad input, 3 bound exceeded.
"""

import os
import tempfile

from sigmacat.cli import main

work = tempfile.mkdtemp()
cat = os.path.join(work, "c.json")
pre = os.path.join(work, "p.json")
fun = os.path.join(work, "fun.json")

print("gen:", main(["gen", "category", "--seed", "5", "--out", cat]))
print("validate:", main(["validate", cat]))
print("gen presheaf:", main(["gen", "cat_presheaf", "--seed", "5", "--out", pre]))
print("split-fib:", main(["check", "split-fib", pre]))

# functor categories grow quickly; --bound caps the morphisms of the domain
print("functor-cat:", main(["construct", "functor-cat", cat, cat, "--out", fun]))
print("with --bound 0:", main(["construct", "functor-cat", cat, cat, "--bound", "0"]))

# batch mode runs generated instances
print("batch:", main(["check", "assoc", "--seeds", "20"]))
