"""Fold the tetrahedral composite of 3dr back onto four slots and compare
with the closed-form boundary map."""
from fractions import Fraction

from tetrarefl import catalog
from tetrarefl.kernel import boundarize, eval_composite, phi, phi_inv, SpaceSignature
from tetrarefl.verifier import Backend, check_boundary_match, check_equation, is_boundarizable

R = catalog.MAPS["3dr"]
x = (Fraction(1),) * 4

print("phi(x) =", phi(x))
trace = []
y = eval_composite(catalog.TE, phi(x), {"R": R}, SpaceSignature.numbered(6), trace=trace)
for name, state in trace:
    print(f"  {name:10s} -> {', '.join(map(str, state))}")
print("phi_inv(T(phi(x))) =", ", ".join(map(str, phi_inv(y))))
print("3dj(x)             =", ", ".join(map(str, catalog.MAPS["3dj"](*x))))
print()

for rid in ("3dr", "3dr-electrical", "3dr-vec"):
    lam = "symbolic" if rid == "3dr-electrical" else None
    R = catalog.get_map(rid)
    print(is_boundarizable(R, Backend.symbolic(), lam).summary())
    print(check_boundary_match(R, catalog.get_map(catalog.PARTNERS[rid]), Backend.symbolic(), lam).summary())

# J built from R satisfies the reflection equation with R
J = boundarize(catalog.MAPS["3dr"])
print(check_equation("tre", Backend.sample(100, seed=1), {"J": J}, name="tre(3dr, bd(3dr))").summary())
