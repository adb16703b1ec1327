"""Change one coefficient of 3dr from 1 to 2 and see which checks notice.

Seven of the eight changes break both equations.  Doubling the numerator of
the third component does not break the tetrahedron equation: the result is
again a tetrahedron map, proved symbolically below.  It does break the
reflection equation with the unchanged 3dj.
"""
from tetrarefl.catalog import MAPS
from tetrarefl.verifier import Backend, check_equation

RULES = {
    "f-num": lambda a, b, c: (2 * a * b / (a + c), a + c, b * c / (a + c)),
    "f-den-x1": lambda a, b, c: (a * b / (2 * a + c), a + c, b * c / (a + c)),
    "f-den-x3": lambda a, b, c: (a * b / (a + 2 * c), a + c, b * c / (a + c)),
    "g-x1": lambda a, b, c: (a * b / (a + c), 2 * a + c, b * c / (a + c)),
    "g-x3": lambda a, b, c: (a * b / (a + c), a + 2 * c, b * c / (a + c)),
    "h-num": lambda a, b, c: (a * b / (a + c), a + c, 2 * b * c / (a + c)),
    "h-den-x1": lambda a, b, c: (a * b / (a + c), a + c, b * c / (2 * a + c)),
    "h-den-x3": lambda a, b, c: (a * b / (a + c), a + c, b * c / (a + 2 * c)),
}

for name, rule in RULES.items():
    R = MAPS["3dr"].with_func(rule, id=f"3dr~{name}")
    te = check_equation("te", Backend.symbolic(), {"R": R}, name=f"te({R.id})")
    tre = check_equation("tre", Backend.sample(500, seed=4), {"R": R}, name=f"tre({R.id})")
    print(f"{name:9s} te {te.result:4s}  tre {tre.result:4s}", end="")
    if tre.counterexample is not None:
        print("  witness", ", ".join(tre.counterexample.input[:3]), "...")
    else:
        print()
