"""Concrete tetrahedron maps, boundary maps and the named equations they satisfy.

Map rules are written once, with plain operators, so the same function
evaluates on Fractions, on symbolic RatFuncs and (for the integer maps) on
numpy arrays.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .kernel import (
    CompositeExpr, LocalMap, SpaceSignature, bind, composite_map, parse_composite,
)
from .scalars import Domain, max_, min_

Q = Domain.POS_RATIONAL
Z = Domain.NONNEG_INT
B = Domain.BIT
Q2 = Domain.POS_RATIONAL_PAIR

DEFAULT_LAMBDA = Fraction(1)


# --- birational maps on positive rationals ---------------------------------

def _3dr(x1, x2, x3):
    d = x1 + x3
    return x1 * x2 / d, d, x2 * x3 / d


def _3dj(x1, x2, x3, x4):
    y1 = x1 * (x2 + x4) ** 2 + x3 * x4 ** 2
    y2 = x1 * (x2 + x4) + x3 * x4
    return x1 * x2 ** 2 * x3 / y1, y1 / y2, y2 ** 2 / y1, x2 * x3 * x4 / y2


def electrical(lam=DEFAULT_LAMBDA) -> LocalMap:
    """One-parameter deformation of ``3dr``; ``lam`` = 0 gives ``3dr`` back.
    ``lam`` may be a rational or a symbolic RatFunc."""

    def rule(x1, x2, x3):
        d = x1 + x3 + lam * x1 * x2 * x3
        return x1 * x2 / d, d, x2 * x3 / d

    return LocalMap("3dr-electrical", (Q,) * 3, rule, involutive=True, symmetric=True,
                    params={"lambda": lam}, description="electrical tetrahedron map",
                    rebuild=electrical)


def electrical_boundary(lam=DEFAULT_LAMBDA) -> LocalMap:
    def rule(x1, x2, x3, x4):
        s = x2 + x4 + 2 * lam * x2 * x3 * x4
        y1 = x1 * (x2 + x4) * s + x3 * x4 ** 2
        y2 = x1 * s + x3 * x4
        return x1 * x2 ** 2 * x3 / y1, y1 / y2, y2 ** 2 / y1, x2 * x3 * x4 / y2

    return LocalMap("3dj-electrical", (Q,) * 4, rule, involutive=True,
                    params={"lambda": lam}, description="closed-form boundary map of 3dr-electrical",
                    rebuild=electrical_boundary)


def _3dr_vec(p1, p2, p3):
    (x1, y1), (x2, y2), (x3, y3) = p1, p2, p3
    s = x1 + x3
    t = x1 * y1 + x3 * y3
    return ((x1 * x2 / s, s * y1 * y2 / t),
            (s, t / s),
            (x2 * x3 / s, s * y2 * y3 / t))


def _3dj_vec(p1, p2, p3, p4):
    (x1, y1), (x2, y2), (x3, y3), (x4, y4) = p1, p2, p3, p4
    z1 = x1 * (x2 + x4) ** 2 + x3 * x4 ** 2
    z2 = x1 * (x2 + x4) + x3 * x4
    w1 = x1 * y1 * (x2 * y2 + x4 * y4) ** 2 + x3 * x4 ** 2 * y3 * y4 ** 2
    w2 = x1 * y1 * (x2 * y2 + x4 * y4) + x3 * x4 * y3 * y4
    return ((x1 * x2 ** 2 * x3 / z1, y1 * y2 ** 2 * y3 * z1 / w1),
            (z1 / z2, z2 * w1 / (z1 * w2)),
            (z2 ** 2 / z1, z1 * w2 ** 2 / (z2 ** 2 * w1)),
            (x2 * x3 * x4 / z2, y2 * y3 * y4 * z2 / w2))


# --- piecewise-linear maps on integers ---------------------------------------

def _3dr_crystal(x1, x2, x3):
    m = min_(x1, x3)
    return x1 + x2 - m, m, x2 + x3 - m


def _3dj_crystal(x1, x2, x3, x4):
    y1 = min_(x1 + 2 * min_(x2, x4), x3 + 2 * x4)
    y2 = min_(x1 + min_(x2, x4), x3 + x4)
    return x1 + 2 * x2 + x3 - y1, y1 - y2, 2 * y2 - y1, x2 + x3 + x4 - y2


def _3dm(x1, x2, x3):
    v = min_(x1 + x2, x3)
    return x1 + x2 - v, v, x2 + x3 - v


def _3dn(x1, x2, x3):
    w = min_(x2, 1 - x1 - x3)
    return x1 + w, x2 - w, x3 + w


def _3dx(x1, x2, x3, x4):
    # the inner minima can be negative; the outer max restores y >= 0
    y1 = max_(x3 + min_(x1 + 2 * x2 + x4 - 1, 2 * x4), 0)
    y2 = max_(x3 + min_(x1 + x2 + x4 - 1, x4), 0)
    return x1 + 2 * x2 + x3 - y1, y1 - y2, 2 * y2 - y1, x2 + x3 + x4 - y2


MAPS = {
    "3dr": LocalMap("3dr", (Q,) * 3, _3dr, involutive=True, symmetric=True,
                    description="birational tetrahedron map"),
    "3dj": LocalMap("3dj", (Q,) * 4, _3dj, involutive=True,
                    description="closed-form boundary map of 3dr"),
    "3dr-electrical": electrical(),
    "3dj-electrical": electrical_boundary(),
    "3dr-vec": LocalMap("3dr-vec", (Q2,) * 3, _3dr_vec, involutive=True, symmetric=True,
                        description="two-component tetrahedron map"),
    "3dj-vec": LocalMap("3dj-vec", (Q2,) * 4, _3dj_vec, involutive=True,
                        description="closed-form boundary map of 3dr-vec"),
    "3dr-crystal": LocalMap("3dr-crystal", (Z,) * 3, _3dr_crystal, involutive=True, symmetric=True,
                            description="min-plus limit of 3dr"),
    "3dj-crystal": LocalMap("3dj-crystal", (Z,) * 4, _3dj_crystal, involutive=True,
                            description="min-plus limit of 3dj"),
    "3dm": LocalMap("3dm", (Z, B, B), _3dm, involutive=True, symmetric=False,
                    description="super map M"),
    "3dn": LocalMap("3dn", (B, Z, B), _3dn, involutive=True, symmetric=True,
                    description="super map N"),
    "3dx": LocalMap("3dx", (Z, B, Z, B), _3dx, involutive=True,
                    description="super boundary map X"),
}

# tetrahedron map -> registered closed form of its boundarization
PARTNERS = {
    "3dr": "3dj",
    "3dr-electrical": "3dj-electrical",
    "3dr-vec": "3dj-vec",
    "3dr-crystal": "3dj-crystal",
    "super-T": "3dx",
}

SUPER_T_TEXT = "N[2,4,5] M[1,3,5] M[1,2,6] N[3,4,6]"


def super_tetrahedral(order="left") -> LocalMap:
    """Mixed tetrahedral composite N M M N on Z x B x B x Z x B x B."""
    expr = parse_composite(SUPER_T_TEXT)
    if order != "left":
        expr = expr.reversed()
    return composite_map("super-T", expr, {"M": MAPS["3dm"], "N": MAPS["3dn"]},
                         (Z, B, B, Z, B, B), involutive=True)


def get_map(map_id: str, lam=None) -> LocalMap:
    """Look up a map by id; ``lam`` re-parametrizes the electrical pair."""
    if map_id == "super-T":
        return super_tetrahedral()
    if lam is not None:
        if map_id == "3dr-electrical":
            return electrical(lam)
        if map_id == "3dj-electrical":
            return electrical_boundary(lam)
    try:
        return MAPS[map_id]
    except KeyError:
        raise KeyError(f"unknown map {map_id!r}; known maps: {', '.join(map_ids())}") from None


def map_ids():
    return sorted(MAPS) + ["super-T"]


# Subtraction-free expression forms of 3dr and 3dj, for evaluation in any
# semifield.  Over min-plus they give the crystal maps.
EXPRESSIONS = {
    "3dr": ("x1*x2/(x1+x3)", "x1+x3", "x2*x3/(x1+x3)"),
    "3dj": (
        "x1*x2**2*x3/(x1*(x2+x4)**2+x3*x4**2)",
        "(x1*(x2+x4)**2+x3*x4**2)/(x1*(x2+x4)+x3*x4)",
        "(x1*(x2+x4)+x3*x4)**2/(x1*(x2+x4)**2+x3*x4**2)",
        "x2*x3*x4/(x1*(x2+x4)+x3*x4)",
    ),
}
EXPRESSION_PARTNERS = {"3dr": "3dr-crystal", "3dj": "3dj-crystal"}


@dataclass(frozen=True)
class CatalogEntry:
    id: str
    map: LocalMap
    involutive: bool
    symmetric: bool | None
    boundarizable: bool | None
    partner: str | None


def catalog():
    entries = []
    for mid in map_ids():
        m = get_map(mid)
        partner = PARTNERS.get(mid)
        if partner is None:
            partner = next((k for k, v in PARTNERS.items() if v == mid), None)
        boundarizable = True if mid in PARTNERS else (None if m.arity == 4 else False)
        entries.append(CatalogEntry(mid, m, m.involutive, m.symmetric, boundarizable, partner))
    return entries


# --- equations -----------------------------------------------------------------

@dataclass(frozen=True)
class EquationSpec:
    id: str
    signature: SpaceSignature
    lhs: CompositeExpr
    rhs: CompositeExpr
    bindings: dict = field(default_factory=dict)
    description: str = ""

    def maps(self, overrides=None, lam=None):
        """Bound LocalMaps for every name used in the equation."""
        out = {name: get_map(mid, lam) for name, mid in self.bindings.items()}
        out.update(overrides or {})
        return out


R20_LABELS = "1 2 2b 3 4 4b 5 5b 6 6b 7 8 8b 9 9b"

TE = "R[2,4,5] R[1,3,5] R[1,2,6] R[3,4,6]"
TE_USUAL = "R[1,2,3] R[1,4,5] R[2,4,6] R[3,5,6]"
TRE_LHS = "R[4,8,9] J[3,5,7,9] R[2,6,9] R[2,5,8] J[1,6,7,8] J[1,2,3,4] R[4,5,6]"
TRE_RHS = "R[4,5,6] J[1,2,3,4] J[1,6,7,8] R[2,5,8] R[2,6,9] J[3,5,7,9] R[4,8,9]"
R20_LHS = ("R[4,8,9] R[4b,8b,9b] R[5,7,9] R[3,5b,9] R[3,5,9b] R[5b,7,9b] "
           "R[2,6,9b] R[2b,6b,9] R[2,5b,8] R[2b,5,8b] "
           "R[6b,7,8b] R[1,6,8b] R[1,6b,8] R[6,7,8] "
           "R[2,3,4] R[1,2b,4] R[1,2,4b] R[2b,3,4b] R[4b,5b,6b] R[4,5,6]")
R20_RHS = ("R[4,5,6] R[4b,5b,6b] R[2,3,4] R[1,2b,4] R[1,2,4b] R[2b,3,4b] "
           "R[6b,7,8b] R[1,6,8b] R[1,6b,8] R[6,7,8] "
           "R[2b,5,8b] R[2,5b,8] R[2b,6b,9] R[2,6,9b] "
           "R[5,7,9] R[3,5b,9] R[3,5,9b] R[5b,7,9b] R[4b,8b,9b] R[4,8,9]")
R20_SUPER_LHS = ("M[4,8,9] M[4b,8b,9b] N[5,7,9] M[3,5b,9] M[3,5,9b] N[5b,7,9b] "
                 "M[2,6,9b] M[2b,6b,9] M[2,5b,8] M[2b,5,8b] "
                 "N[6b,7,8b] M[1,6,8b] M[1,6b,8] N[6,7,8] "
                 "R[2,3,4] R[1,2b,4] R[1,2,4b] R[2b,3,4b] M[4b,5b,6b] M[4,5,6]")
R20_SUPER_RHS = ("M[4,5,6] M[4b,5b,6b] R[2,3,4] R[1,2b,4] R[1,2,4b] R[2b,3,4b] "
                 "N[6b,7,8b] M[1,6,8b] M[1,6b,8] N[6,7,8] "
                 "M[2b,5,8b] M[2,5b,8] M[2b,6b,9] M[2,6,9b] "
                 "N[5,7,9] M[3,5b,9] M[3,5,9b] N[5b,7,9b] M[4b,8b,9b] M[4,8,9]")
TRE_SUPER_LHS = "M[4,8,9] X[3,5,7,9] M[2,6,9] M[2,5,8] X[1,6,7,8] J[1,2,3,4] M[4,5,6]"
TRE_SUPER_RHS = "M[4,5,6] J[1,2,3,4] X[1,6,7,8] M[2,5,8] M[2,6,9] X[3,5,7,9] M[4,8,9]"

# Mixed signatures.  Neither is written out explicitly anywhere; both are forced
# by the factors: M is Z x B x B, N is B x Z x B, X is Z x B x Z x B and the
# crystal maps are all Z.  E.g. in tre-super M[4,8,9] puts 4 in Z and 8,9 in
# B, X[3,5,7,9] puts 3,7 in Z and 5,9 in B, J[1,2,3,4] puts 1..4 in Z and
# M[4,5,6] puts 5,6 in B.  infer_signature() redoes this unification and the
# registry asserts agreement.
_Z_SLOTS = {
    "te-super-1": {"1", "4"},
    "te-super-2": {"1", "2", "3"},
    "tre-super": {"1", "2", "3", "4", "7"},
    "r20-super": {"1", "2", "2b", "3", "4", "4b", "7"},
}


def _mixed(labels, eq_id):
    labels = labels.split()
    zs = _Z_SLOTS[eq_id]
    return SpaceSignature(tuple(labels), tuple(Z if l in zs else B for l in labels))


def infer_signature(labels, exprs, maps) -> SpaceSignature:
    """Unify every factor's argument domains into one slot typing."""
    labels = labels.split() if isinstance(labels, str) else list(labels)
    found = {}
    for expr in exprs:
        for name, ls in expr:
            m = maps[name]
            for l, d in zip(ls, m.domains):
                if found.setdefault(l, d) != d:
                    raise ValueError(f"slot {l} used as both {found[l].value} and {d.value} ({name}{list(ls)})")
    missing = [l for l in labels if l not in found]
    if missing:
        raise ValueError(f"slots {missing} are never acted on")
    return SpaceSignature(tuple(labels), tuple(found[l] for l in labels))


def _eq(eq_id, sig, lhs, rhs, bindings, description):
    lhs_e, rhs_e = parse_composite(lhs), parse_composite(rhs)
    spec = EquationSpec(eq_id, sig, lhs_e, rhs_e, dict(bindings), description)
    maps = spec.maps()
    inferred = infer_signature(sig.labels, (lhs_e, rhs_e), maps)
    if inferred != sig:
        raise AssertionError(f"{eq_id}: declared signature {sig.header()} != inferred {inferred.header()}")
    bind(lhs_e, maps, sig)
    bind(rhs_e, maps, sig)
    return spec


def _build_registry():
    q6, q9 = SpaceSignature.numbered(6), SpaceSignature.numbered(9)
    q15 = SpaceSignature.from_labels(R20_LABELS)
    specs = [
        _eq("te", q6, TE, str(parse_composite(TE).reversed()), {"R": "3dr"},
            "tetrahedron equation"),
        _eq("te-usual", q6, TE_USUAL, str(parse_composite(TE_USUAL).reversed()), {"R": "3dr"},
            "tetrahedron equation in the usual index convention"),
        _eq("tre", q9, TRE_LHS, TRE_RHS, {"R": "3dr", "J": "3dj"},
            "3D reflection equation"),
        _eq("tre-1para", q9, TRE_LHS, TRE_RHS, {"R": "3dr-electrical", "J": "3dj-electrical"},
            "3D reflection equation for the electrical pair"),
        _eq("tre-crystal", SpaceSignature.numbered(9, Z), TRE_LHS, TRE_RHS,
            {"R": "3dr-crystal", "J": "3dj-crystal"},
            "3D reflection equation for the min-plus pair"),
        _eq("r20", q15, R20_LHS, R20_RHS, {"R": "3dr"},
            "doubled identity on 15 slots behind the reflection equation"),
        _eq("te-super-1", _mixed("1 2 3 4 5 6", "te-super-1"),
            "N[2,4,5] M[1,3,5] M[1,2,6] N[3,4,6]", "N[3,4,6] M[1,2,6] M[1,3,5] N[2,4,5]",
            {"M": "3dm", "N": "3dn"}, "mixed tetrahedron equation N M M N"),
        _eq("te-super-2", _mixed("1 2 3 4 5 6", "te-super-2"),
            "R[1,2,3] M[1,4,5] M[2,4,6] M[3,5,6]", "M[3,5,6] M[2,4,6] M[1,4,5] R[1,2,3]",
            {"R": "3dr-crystal", "M": "3dm"}, "mixed tetrahedron equation R M M M"),
        _eq("r20-super", _mixed(R20_LABELS, "r20-super"), R20_SUPER_LHS, R20_SUPER_RHS,
            {"M": "3dm", "N": "3dn", "R": "3dr-crystal"}, "mixed doubled identity on 15 slots"),
        _eq("tre-super", _mixed("1 2 3 4 5 6 7 8 9", "tre-super"), TRE_SUPER_LHS, TRE_SUPER_RHS,
            {"M": "3dm", "X": "3dx", "J": "3dj-crystal"}, "mixed 3D reflection equation"),
    ]
    return {s.id: s for s in specs}


_REGISTRY = _build_registry()


def equation_registry():
    return list(_REGISTRY.values())


def get_equation(eq_id: str) -> EquationSpec:
    try:
        return _REGISTRY[eq_id]
    except KeyError:
        raise KeyError(f"unknown equation {eq_id!r}; known equations: {', '.join(_REGISTRY)}") from None


def equation_ids():
    return list(_REGISTRY)
