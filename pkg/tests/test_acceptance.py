"""The ten acceptance criteria, each one test with its own verdict line."""
import time
from fractions import Fraction

from tetrarefl import catalog
from tetrarefl.catalog import MAPS, electrical
from tetrarefl.kernel import boundarize, eval_composite
from tetrarefl.verifier import (
    SYMBOLIC, Backend, check_boundary_match, check_equation, check_involutive, check_r20,
    check_symmetric, is_boundarizable, trace_appendix,
)

from conftest import PERTURBATIONS


def _clock():
    t0 = time.perf_counter()
    return lambda: time.perf_counter() - t0


def test_c01_tetrahedron_3dr(acceptance):
    elapsed = _clock()
    proof = check_equation("te", Backend.symbolic())
    samples = check_equation("te", Backend.sample(1000, seed=1))
    t = elapsed()
    ok = proof.passed and samples.passed and samples.instances == 1000 and t < 5
    acceptance(1, ok, f"te(3dr) symbolic {proof.result}, 1000 samples {samples.result}, {t:.2f}s (< 5s)")


def test_c02_boundarizable(acceptance):
    reports = [
        is_boundarizable(MAPS["3dr"], Backend.symbolic()),
        is_boundarizable(electrical(), Backend.symbolic(), lam=SYMBOLIC),
        is_boundarizable(MAPS["3dr-vec"], Backend.symbolic()),
    ]
    ok = all(r.passed and r.backend == "symbolic" for r in reports)
    acceptance(2, ok, "bd-cond symbolic: " + ", ".join(f"{r.equation} {r.result}" for r in reports))


def test_c03_boundarization_matches_closed_form(acceptance):
    elapsed = _clock()
    reports = [
        check_boundary_match(MAPS["3dr"], MAPS["3dj"], Backend.symbolic()),
        check_boundary_match(electrical(), MAPS["3dj-electrical"], Backend.symbolic(), lam=SYMBOLIC),
        check_boundary_match(MAPS["3dr-vec"], MAPS["3dj-vec"], Backend.symbolic()),
    ]
    spot = boundarize(MAPS["3dr"])(*(Fraction(1),) * 4)
    want = (Fraction(1, 5), Fraction(5, 3), Fraction(9, 5), Fraction(1, 3))
    t = elapsed()
    ok = all(r.passed for r in reports) and spot == want and t < 30
    acceptance(3, ok, "bd-match symbolic: " + ", ".join(r.result for r in reports)
               + f"; J(1,1,1,1) = ({', '.join(map(str, spot))}); {t:.2f}s (< 30s)")


def test_c04_reflection_equation(acceptance):
    elapsed = _clock()
    b = Backend.sample(500, seed=4)
    reports = [
        check_equation("tre", b),
        check_equation("tre-1para", b),
        check_equation("tre", b, {"R": MAPS["3dr-vec"], "J": MAPS["3dj-vec"]}, name="tre-vec"),
    ]
    reports += [check_equation("tre-1para", b, lam=lam, name=f"tre-1para(lambda={lam})")
                for lam in (Fraction(1), Fraction(2), Fraction(1, 3))]
    t = elapsed()
    ok = all(r.passed and r.instances >= 500 for r in reports) and t < 60
    acceptance(4, ok, f"{len(reports)} runs x 500 samples: "
               + ", ".join(f"{r.equation} {r.result}" for r in reports) + f"; {t:.2f}s (< 60s)")


def test_c05_tropical_suite(acceptance):
    elapsed = _clock()
    crystal = MAPS["3dr-crystal"]
    te = check_equation("te", Backend.exhaustive(6), {"R": crystal}, name="te-crystal")
    tre = check_equation("tre-crystal", Backend.exhaustive(4))
    match = check_boundary_match(crystal, MAPS["3dj-crystal"], Backend.exhaustive(6))
    t = elapsed()
    ok = (te.passed and te.instances == 7 ** 6 and tre.passed and tre.instances == 5 ** 9
          and match.passed and match.instances == 7 ** 4 and t < 300)
    acceptance(5, ok, f"te-crystal {te.instances} states {te.result}, tre-crystal {tre.instances} "
               f"states {tre.result}, bd-match {match.instances} states {match.result}; {t:.1f}s (< 300s)")


def _case_chains(x1, x4):
    """Expected intermediate states of both sides for (x1,0,0,x4,0,0)."""
    if x4 == 0:
        s = (x1, 0, 0, 0, 0, 0)
        return [s] * 4, [s] * 4
    if x1 == 0:
        lhs = [(0, 0, 1, x4 - 1, 0, 1), (0, 0, 1, x4 - 1, 0, 1),
               (1, 0, 0, x4 - 1, 1, 1), (1, 0, 0, x4 - 1, 1, 1)]
        rhs = [(0, 1, 0, x4 - 1, 1, 0), (0, 1, 0, x4 - 1, 1, 0),
               (1, 0, 0, x4 - 1, 1, 1), (1, 0, 0, x4 - 1, 1, 1)]
        return lhs, rhs
    lhs = [(x1, 0, 1, x4 - 1, 0, 1), (x1 - 1, 1, 1, x4 - 1, 0, 0),
           (x1, 1, 0, x4 - 1, 1, 0), (x1, 0, 0, x4, 0, 0)]
    rhs = [(x1, 1, 0, x4 - 1, 1, 0), (x1 - 1, 1, 1, x4 - 1, 0, 0),
           (x1, 0, 1, x4 - 1, 0, 1), (x1, 0, 0, x4, 0, 0)]
    return lhs, rhs


def test_c06_super_suite(acceptance):
    elapsed = _clock()
    reports = [
        check_equation("te-super-1", Backend.exhaustive(8)),
        check_equation("te-super-2", Backend.exhaustive(8)),
        check_boundary_match(catalog.get_map("super-T"), MAPS["3dx"], Backend.exhaustive(8)),
        check_equation("tre-super", Backend.exhaustive(4)),
    ]
    spec = catalog.get_equation("te-super-1")
    maps = spec.maps()
    chains_ok = True
    for x1 in range(0, 9):
        for x4 in range(0, 9):
            want_l, want_r = _case_chains(x1, x4)
            for expr, want, order in ((spec.lhs, want_l, ["N[3,4,6]", "M[1,2,6]", "M[1,3,5]", "N[2,4,5]"]),
                                      (spec.rhs, want_r, ["N[2,4,5]", "M[1,3,5]", "M[1,2,6]", "N[3,4,6]"])):
                trace = []
                eval_composite(expr, (x1, 0, 0, x4, 0, 0), maps, spec.signature, trace=trace)
                chains_ok &= [name for name, _ in trace] == order
                chains_ok &= [state for _, state in trace] == want
    t = elapsed()
    ok = all(r.passed for r in reports) and chains_ok and t < 600
    acceptance(6, ok, ", ".join(f"{r.equation} {r.instances} states {r.result}" for r in reports)
               + f"; three proof-case chains {'reproduced' if chains_ok else 'DIFFER'}; {t:.1f}s (< 600s)")


def test_c07_r20(acceptance):
    elapsed = _clock()
    reports = [
        check_r20("homogeneous", Backend.sample(200, seed=7)),
        check_r20("homogeneous", Backend.sample(200, seed=7), R=electrical(Fraction(1))),
        check_r20("super", Backend.exhaustive(2)),
    ]
    t = elapsed()
    ok = (all(r.passed for r in reports) and reports[0].instances == 200
          and reports[2].instances >= 10 ** 4 and t < 300)
    acceptance(7, ok, ", ".join(f"{r.equation} {r.instances} {r.result}" for r in reports) + f"; {t:.1f}s")


def test_c08_appendix_traces(acceptance):
    reports = [trace_appendix("A", Backend.sample(50, seed=8)),
               trace_appendix("B", Backend.sample(50, seed=8))]
    ok = all(r.passed and r.instances == 50 and len(r.details) == 27
             and all(row["result"] == "pass" for row in r.details) for r in reports)
    acceptance(8, ok, ", ".join(f"{r.equation}: {len(r.details)} lines x {r.instances} states {r.result}"
                                for r in reports))


def _backend_for(m):
    if all(d.integral for d in m.domains):
        return Backend.exhaustive(8 if m.arity <= 4 else 4)
    return Backend.symbolic()


def test_c09_flag_matrix(acceptance):
    rows, ok = [], True
    maps = [catalog.get_map(i) for i in catalog.map_ids()]
    for m in maps:
        lam = SYMBOLIC if "lambda" in m.params else None
        inv = check_involutive(m, _backend_for(m), lam)
        ok &= inv.passed == m.involutive
        rows.append(f"{m.id} inv={inv.result}")
        if m.symmetric is not None:
            sym = check_symmetric(m, _backend_for(m), lam)
            ok &= sym.passed == m.symmetric
            if not m.symmetric:
                ok &= sym.counterexample is not None
                cex = sym.counterexample
                rows.append(f"{m.id} sym=fail at {cex.input}")
            else:
                rows.append(f"{m.id} sym={sym.result}")
    # every boundarization is involutive, whatever closed form it has
    for rid in ("3dr", "3dr-electrical", "3dr-vec", "3dr-crystal", "super-T"):
        R = catalog.get_map(rid)
        J = boundarize(R)
        lam = SYMBOLIC if "lambda" in R.params else None
        inv = check_involutive(J, _backend_for(J) if rid != "3dr-electrical" else Backend.symbolic(), lam)
        ok &= inv.passed
        rows.append(f"{J.id} inv={inv.result}")
    acceptance(9, ok, "; ".join(rows))


def test_c10_negative_controls(acceptance, perturbed):
    """Each 1 -> 2 coefficient change must break te and tre with a witness."""
    rows, ok = [], True
    for name in PERTURBATIONS:
        R = perturbed(name)
        te = check_equation("te", Backend.sample(1000, seed=1), {"R": R}, name=f"te({R.id})")
        tre = check_equation("tre", Backend.sample(500, seed=4), {"R": R}, name=f"tre({R.id})")
        caught_te = not te.passed and te.counterexample is not None
        caught_tre = not tre.passed and tre.counterexample is not None
        ok &= caught_te and caught_tre
        if not caught_te:
            # tell a sampling miss apart from a map that really solves te
            proof = check_equation("te", Backend.symbolic(), {"R": R}, name=f"te({R.id})")
            name += f" (symbolic te: {'holds' if proof.passed else 'fails'})"
        rows.append(f"{name}: te {'caught' if caught_te else 'NOT caught'}, "
                    f"tre {'caught' if caught_tre else 'NOT caught'}")
    acceptance(10, ok, "; ".join(rows))
