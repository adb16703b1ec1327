"""Exact verification of set-theoretical tetrahedron and 3D reflection maps,
and the folding construction that turns one into the other."""
from .scalars import (
    Domain, DomainMismatch, UnboundVariable, DivisionByAdditiveAbsorber,
    RATIONALS, MIN_PLUS, parse_rational, format_rational, parse_value, format_value,
    semifield_eval,
)
from .symbolic import MultiPoly, RatFunc, ratfunc_equal, symbolic_state, term_budget, BudgetExceeded
from .kernel import (
    SpaceSignature, LocalMap, CompositeExpr, apply_indexed, parse_composite, eval_composite,
    composite_map, phi, phi_inv, in_y, tetrahedral, boundarize,
    ArityMismatch, UnknownLabel, UnknownMap, NotInY, CompositeSyntaxError,
)
from .catalog import (
    MAPS, PARTNERS, get_map, map_ids, electrical, electrical_boundary, super_tetrahedral,
    EquationSpec, equation_registry, get_equation, equation_ids,
)
from .verifier import (
    Backend, VerificationReport, Counterexample, BackendIncompatible, BoxTooLarge,
    enumerate_box, check_equation, check_involutive, check_symmetric, is_boundarizable,
    check_boundary_match, check_tetrahedral_orders, check_r20, check_reconnection,
    check_tropical_limit, trace_appendix, load_appendix,
)

__version__ = "0.1.0"
