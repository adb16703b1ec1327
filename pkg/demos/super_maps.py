"""Mixed integer/bit maps M and N, their composite N M M N and its boundary map X."""
from tetrarefl import catalog
from tetrarefl.kernel import boundarize, eval_composite
from tetrarefl.verifier import Backend, check_boundary_match, check_equation, check_symmetric

spec = catalog.get_equation("te-super-1")
for x in [(3, 0, 0, 2, 0, 0), (0, 0, 0, 2, 0, 0), (3, 0, 0, 0, 0, 0)]:
    for side, expr in (("lhs", spec.lhs), ("rhs", spec.rhs)):
        trace = []
        eval_composite(expr, x, spec.maps(), spec.signature, trace=trace)
        print(side, x, "".join(f" -{n}-> {s}" for n, s in trace))
    print()

for eq in ("te-super-1", "te-super-2"):
    print(check_equation(eq, Backend.exhaustive(8)).summary())
print(check_boundary_match(catalog.get_map("super-T"), catalog.MAPS["3dx"], Backend.exhaustive(8)).summary())
print(check_equation("tre-super", Backend.exhaustive(4)).summary())

print("bd(super-T)(0,0,5,0) =", boundarize(catalog.get_map("super-T"))(0, 0, 5, 0))

# M is not symmetric; the first witness in lexicographic order
print(check_symmetric(catalog.MAPS["3dm"], Backend.exhaustive(8)).summary())
