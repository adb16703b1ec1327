from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from tetrarefl import catalog
from tetrarefl.catalog import MAPS
from tetrarefl.kernel import (
    ArityMismatch, CompositeSyntaxError, NotInY, SpaceSignature, UnknownLabel, UnknownMap,
    apply_indexed, boundarize, eval_composite, parse_composite, phi, phi_inv, tetrahedral,
)
from tetrarefl.scalars import Domain, DomainMismatch

Q6 = SpaceSignature.numbered(6)
ONES = (F(1),) * 6


def test_apply_indexed_first_worked_step():
    assert apply_indexed(MAPS["3dr"], ("3", "4", "6"), ONES, Q6) == (1, 1, F(1, 2), 2, 1, F(1, 2))


def test_apply_indexed_reversed_labels():
    x, y, z, w = F(2), F(3), F(5), F(7)
    f, g, h = MAPS["3dr"](z, y, x)
    sig = SpaceSignature.numbered(4)
    assert apply_indexed(MAPS["3dr"], ("3", "2", "1"), (x, y, z, w), sig) == (h, g, f, w)


def test_apply_indexed_super_case():
    sig = catalog.get_equation("te-super-1").signature
    for x1 in range(4):
        for x4 in range(1, 5):
            out = apply_indexed(MAPS["3dn"], ("3", "4", "6"), (x1, 0, 0, x4, 0, 0), sig)
            assert out == (x1, 0, 1, x4 - 1, 0, 1)


def _sandwich(m, labels, state, sig):
    """Explicit P^-1 R_sorted P with P moving label t to the t-th smallest position."""
    pos = [sig.index(l) for l in labels]
    srt = sorted(pos)
    moved = list(state)
    for p, s in zip(pos, srt):
        moved[s] = state[p]
    acted = apply_indexed(m, [sig.labels[s] for s in srt], tuple(moved), sig)
    back = list(acted)
    for p, s in zip(pos, srt):
        back[p] = acted[s]
    return tuple(back)


positive = st.fractions(min_value=F(1, 50), max_value=50)


@settings(max_examples=60, deadline=None)
@given(st.permutations(["1", "3", "4"]), st.lists(positive, min_size=5, max_size=5))
def test_conjugation_law_arity3(labels, values):
    sig = SpaceSignature.numbered(5)
    state = tuple(values)
    assert apply_indexed(MAPS["3dr"], labels, state, sig) == _sandwich(MAPS["3dr"], labels, state, sig)


@settings(max_examples=60, deadline=None)
@given(st.permutations(["1", "2", "4", "5"]), st.lists(positive, min_size=5, max_size=5))
def test_conjugation_law_arity4(labels, values):
    sig = SpaceSignature.numbered(5)
    state = tuple(values)
    assert apply_indexed(MAPS["3dj"], labels, state, sig) == _sandwich(MAPS["3dj"], labels, state, sig)


@settings(max_examples=40, deadline=None)
@given(st.lists(positive, min_size=6, max_size=6), st.sampled_from([("1", "2", "6"), ("2", "4", "5")]))
def test_untouched_slots_and_involution(values, labels):
    state = tuple(values)
    out = apply_indexed(MAPS["3dr"], labels, state, Q6)
    for i, l in enumerate(Q6.labels):
        if l not in labels:
            assert out[i] == state[i]
    assert apply_indexed(MAPS["3dr"], labels, out, Q6) == state


def test_apply_indexed_errors():
    with pytest.raises(ArityMismatch):
        apply_indexed(MAPS["3dr"], ("1", "2"), ONES, Q6)
    with pytest.raises(UnknownLabel):
        apply_indexed(MAPS["3dr"], ("1", "2", "9"), ONES, Q6)
    with pytest.raises(DomainMismatch):
        apply_indexed(MAPS["3dm"], ("1", "2", "3"), ONES, Q6)
    sig = SpaceSignature.numbered(3, Domain.NONNEG_INT)
    with pytest.raises(DomainMismatch):
        apply_indexed(MAPS["3dr-crystal"], ("1", "2", "3"), (1, -1, 0), sig)


def test_parse_composite():
    t = parse_composite("R[2,4,5] R[1,3,5] R[1,2,6] R[3,4,6]")
    assert len(t) == 4 and t.factors[-1] == ("R", ("3", "4", "6"))
    assert str(t) == "R[2,4,5] R[1,3,5] R[1,2,6] R[3,4,6]"
    assert parse_composite(str(t)) == t
    assert parse_composite("R[4b,8b,9b]").factors == (("R", ("4b", "8b", "9b")),)
    assert len(parse_composite("")) == 0
    assert parse_composite("J[1,2,3,4]").factors[0][1] == ("1", "2", "3", "4")
    assert len(parse_composite("T[1,2,3,4,5,6]").factors[0][1]) == 6


@pytest.mark.parametrize("text,pos", [("R[1,2,3] ?", 9), ("R[1,2]", 2), ("R[1,2,3", 0), ("R[1,2,x-y]", 2)])
def test_parse_errors_report_position(text, pos):
    with pytest.raises(CompositeSyntaxError) as e:
        parse_composite(text)
    assert e.value.pos == pos


def test_eval_composite_tetrahedral_all_ones():
    trace = []
    out = eval_composite(catalog.TE, ONES, {"R": MAPS["3dr"]}, Q6, trace=trace)
    assert out == (F(1, 5), F(5, 3), F(5, 3), F(9, 5), F(1, 3), F(1, 3))
    assert [name for name, _ in trace] == ["R[3,4,6]", "R[1,2,6]", "R[1,3,5]", "R[2,4,5]"]
    assert trace[0][1] == (1, 1, F(1, 2), 2, 1, F(1, 2))


def test_eval_composite_identity_and_purity():
    state = (F(3), F(1, 2), F(7))
    assert eval_composite("", state, {}, SpaceSignature.numbered(3)) == state
    before = tuple(ONES)
    eval_composite(catalog.TE, ONES, {"R": MAPS["3dr"]}, Q6)
    assert ONES == before


def test_eval_composite_super_case_one():
    spec = catalog.get_equation("te-super-1")
    assert eval_composite(spec.lhs, (2, 0, 0, 3, 0, 0), spec.maps(), spec.signature) == (2, 0, 0, 3, 0, 0)


def test_unknown_map():
    with pytest.raises(UnknownMap):
        eval_composite("Q[1,2,3]", ONES, {"R": MAPS["3dr"]}, Q6)


def test_phi_and_inverse():
    assert phi((1, 2, 3, 4)) == (1, 2, 2, 3, 4, 4)
    y = (F(1, 5), F(5, 3), F(5, 3), F(9, 5), F(1, 3), F(1, 3))
    assert phi_inv(y) == (F(1, 5), F(5, 3), F(9, 5), F(1, 3))
    assert phi(phi_inv(y)) == y
    assert phi_inv(phi((1, 2, 3, 4))) == (1, 2, 3, 4)
    with pytest.raises(NotInY):
        phi_inv((1, 2, 3, 3, 4, 4))
    with pytest.raises(NotInY):
        phi_inv((1, 2, 2, 3, 4, 5))


def test_boundarize_examples():
    assert boundarize(MAPS["3dr"])(*(F(1),) * 4) == (F(1, 5), F(5, 3), F(9, 5), F(1, 3))
    assert boundarize(MAPS["3dr-crystal"])(1, 1, 1, 1) == (1, 1, 1, 1)
    J = boundarize(catalog.get_map("super-T"))
    for x4 in range(1, 9):
        assert J(0, 0, x4, 0) == (1, 0, x4 - 1, 1)


def test_boundarize_rejects_wrong_shapes():
    with pytest.raises(ArityMismatch):
        boundarize(MAPS["3dj"])
    with pytest.raises(DomainMismatch):
        boundarize(tetrahedral(MAPS["3dm"]).with_func(lambda *x: x, domains=(Domain.NONNEG_INT, Domain.BIT, Domain.NONNEG_INT) * 2))


def test_boundarize_surfaces_not_in_y():
    leaky = MAPS["3dr"].with_func(lambda a, b, c: (2 * a * b / (a + c), a + c, b * c / (a + c)))
    with pytest.raises(NotInY):
        boundarize(leaky)(F(1), F(2), F(3), F(4))


def test_tetrahedral_orders_agree_at_a_point():
    p = (F(2), F(3), F(1, 2), F(5), F(7, 3), F(1))
    assert tetrahedral(MAPS["3dr"], "left")(*p) == tetrahedral(MAPS["3dr"], "right")(*p)
