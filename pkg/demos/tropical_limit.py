"""Read the subtraction-free formulas over min-plus and recover the crystal maps."""
from tetrarefl import catalog
from tetrarefl.scalars import MIN_PLUS, RATIONALS, semifield_eval
from tetrarefl.verifier import Backend, check_boundary_match, check_equation, check_tropical_limit

f = catalog.EXPRESSIONS["3dr"][0]
print(f, "at (2,3,1)")
print("  over Q+      :", semifield_eval(f, {"x1": 2, "x2": 3, "x3": 1}, RATIONALS))
print("  over min-plus:", semifield_eval(f, {"x1": 2, "x2": 3, "x3": 1}, MIN_PLUS))
print("  crystal map  :", catalog.MAPS["3dr-crystal"](2, 3, 1)[0])

print(check_tropical_limit("3dr").summary())
print(check_tropical_limit("3dj").summary())

crystal = catalog.MAPS["3dr-crystal"]
print(check_equation("te", Backend.exhaustive(6), {"R": crystal}, name="te-crystal").summary())
print(check_boundary_match(crystal, catalog.MAPS["3dj-crystal"], Backend.exhaustive(6)).summary())
print(check_equation("tre-crystal", Backend.exhaustive(4)).summary())
