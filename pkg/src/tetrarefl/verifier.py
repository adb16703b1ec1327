"""Identity checking on three backends.

``symbolic``
    evaluates both sides on a generic point of rational functions and decides
    equality exactly; a pass is a proof.
``sample``
    evaluates at seeded random points with exact arithmetic; any failing
    point is a definitive refutation.
``exhaustive``
    enumerates a finite box of integer states, vectorized with numpy.

Every check reduces to the same shape: a list of slot domains and a function
``state -> (lhs, rhs)``.  The runners below handle the backends once for all
of them.
"""
from __future__ import annotations

import itertools
import json
import random
import time
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import catalog
from .kernel import (
    CompositeSyntaxError, LocalMap, NotInY, SpaceSignature, bind, boundarize,
    parse_composite, phi, run_bound, tetrahedral, values_equal,
)
from .scalars import Domain, DomainMismatch, MIN_PLUS, format_value, semifield_eval
from .symbolic import BudgetExceeded, RatFunc, ratfunc_equal, symbolic_state, term_budget

SYMBOLIC = "symbolic"
DEFAULT_INT_SAMPLE_BOUND = 8
DATA_DIR = Path(__file__).parent / "data"


class BackendIncompatible(ValueError):
    pass


class BoxTooLarge(OverflowError):
    pass


class AppendixParseError(CompositeSyntaxError):
    def __init__(self, msg, path, lineno, pos=0):
        SyntaxError.__init__(self, f"{path}:{lineno}: {msg}")
        self.path = path
        self.lineno = lineno
        self.pos = pos


@dataclass(frozen=True)
class Backend:
    kind: str
    count: int = 0
    seed: int = 0
    bound: int | None = None
    ceiling: int = 20_000_000
    budget: int | None = None

    def __post_init__(self):
        if self.kind not in ("symbolic", "sample", "exhaustive"):
            raise ValueError(f"unknown backend kind {self.kind!r}")
        if self.kind == "sample" and self.count < 1:
            raise ValueError("sample backend needs count >= 1")
        if self.kind == "exhaustive" and (self.bound is None or self.bound < 0):
            raise ValueError("exhaustive backend needs a finite bound >= 0")

    @classmethod
    def symbolic(cls, budget=None):
        return cls("symbolic", budget=budget)

    @classmethod
    def sample(cls, count, seed=0, bound=None):
        return cls("sample", count=count, seed=seed, bound=bound)

    @classmethod
    def exhaustive(cls, bound, ceiling=20_000_000):
        return cls("exhaustive", bound=bound, ceiling=ceiling)

    def describe(self) -> str:
        if self.kind == "symbolic":
            return "symbolic"
        if self.kind == "sample":
            extra = f", bound={self.bound}" if self.bound is not None else ""
            return f"sample(count={self.count}, seed={self.seed}{extra})"
        return f"exhaustive(bound={self.bound})"


@dataclass
class Counterexample:
    input: tuple
    lhs: tuple
    rhs: tuple
    note: str = ""

    def to_dict(self):
        d = {"input": list(self.input), "lhs": list(self.lhs), "rhs": list(self.rhs)}
        if self.note:
            d["note"] = self.note
        return d

    @classmethod
    def from_dict(cls, d):
        return cls(tuple(d["input"]), tuple(d["lhs"]), tuple(d["rhs"]), d.get("note", ""))


_KEYS = ("equation", "backend", "seed", "instances", "result", "counterexample", "details", "elapsed_ms")


@dataclass
class VerificationReport:
    equation: str
    backend: str
    seed: int | None
    instances: int | str
    result: str
    counterexample: Counterexample | None = None
    elapsed_ms: int | None = None
    details: list | None = None

    @property
    def passed(self) -> bool:
        return self.result == "pass"

    def __bool__(self):
        return self.passed

    def to_dict(self, timing=True):
        d = {"equation": self.equation, "backend": self.backend, "seed": self.seed,
             "instances": self.instances, "result": self.result}
        if self.counterexample is not None:
            d["counterexample"] = self.counterexample.to_dict()
        if self.details is not None:
            d["details"] = self.details
        d["elapsed_ms"] = self.elapsed_ms if timing else None
        return d

    def to_json(self, timing=False) -> str:
        """Structured form.  Wall time is left out (null) unless ``timing``
        is set, so equal inputs give byte-identical output."""
        return json.dumps(self.to_dict(timing), indent=2)

    @classmethod
    def from_json(cls, text):
        d = json.loads(text)
        unknown = set(d) - set(_KEYS)
        if unknown:
            raise ValueError(f"unknown report fields {sorted(unknown)}")
        cex = d.get("counterexample")
        return cls(d["equation"], d["backend"], d["seed"], d["instances"], d["result"],
                   Counterexample.from_dict(cex) if cex else None, d.get("elapsed_ms"),
                   d.get("details"))

    def summary(self) -> str:
        count = "proved" if self.instances == "proved" else f"{self.instances} instances"
        line = f"{self.equation}: {self.result.upper()} [{self.backend}, {count}]"
        if self.counterexample is not None:
            c = self.counterexample
            line += (f"\n  input: {', '.join(c.input)}\n  lhs:   {', '.join(c.lhs)}"
                     f"\n  rhs:   {', '.join(c.rhs)}")
            if c.note:
                line += f"\n  note:  {c.note}"
        return line


# ---------------------------------------------------------------------------
# enumeration

def _box_axes(domains, bound):
    shape, offset = [], []
    for d in domains:
        if d is Domain.BIT:
            shape.append(2)
            offset.append(0)
        elif d is Domain.NONNEG_INT:
            shape.append(bound + 1)
            offset.append(0)
        elif d is Domain.INT:
            shape.append(2 * bound + 1)
            offset.append(-bound)
        else:
            raise BackendIncompatible(f"exhaustive backend cannot enumerate {d.value} slots")
    return tuple(shape), tuple(offset)


def _domains_of(signature):
    return signature.domains if isinstance(signature, SpaceSignature) else tuple(signature)


def box_size(signature, bound) -> int:
    shape, _ = _box_axes(_domains_of(signature), bound)
    return int(np.prod(shape, dtype=object))


def enumerate_box(signature, bound, ceiling=20_000_000):
    """All integer states with Z-slots in ``0..bound`` (``-bound..bound`` for
    signed slots) and bit slots in {0,1}, lexicographically."""
    domains = _domains_of(signature)
    shape, offset = _box_axes(domains, bound)
    n = box_size(domains, bound)
    if n > ceiling:
        raise BoxTooLarge(f"box has {n} states, ceiling is {ceiling}")
    ranges = [range(o, o + s) for s, o in zip(shape, offset)]
    return itertools.product(*ranges)


def box_batches(domains, bound, ceiling=20_000_000, batch=1 << 17):
    """Yield ``(start, state)`` where ``state`` holds one int64 array per slot,
    covering the box in lexicographic order."""
    shape, offset = _box_axes(domains, bound)
    n = box_size(domains, bound)
    if n > ceiling:
        raise BoxTooLarge(f"box has {n} states, ceiling is {ceiling}")
    for start in range(0, n, batch):
        idx = np.arange(start, min(start + batch, n), dtype=np.int64)
        coords = np.unravel_index(idx, shape)
        yield start, tuple(c.astype(np.int64) + o for c, o in zip(coords, offset))


def member_mask(domain, values):
    """Elementwise membership for arrays, plain bool for scalars."""
    if isinstance(values, np.ndarray):
        if domain is Domain.BIT:
            return (values == 0) | (values == 1)
        if domain is Domain.NONNEG_INT:
            return values >= 0
        if domain is Domain.INT:
            return np.ones(values.shape, dtype=bool)
        return np.zeros(values.shape, dtype=bool)
    return domain.contains(values)


# ---------------------------------------------------------------------------
# backend runners

def _flatten(values):
    out = []
    for v in values:
        if isinstance(v, tuple):
            out.extend(v)
        else:
            out.append(v)
    return out


def _fmt(state):
    return tuple(format_value(v) for v in state)


def _draw(rng, domain, bound):
    if domain is Domain.POS_RATIONAL:
        return Fraction(rng.randint(1, 1 << 16), rng.randint(1, 1 << 16))
    if domain is Domain.POS_RATIONAL_PAIR:
        return (_draw(rng, Domain.POS_RATIONAL, bound), _draw(rng, Domain.POS_RATIONAL, bound))
    if domain is Domain.BIT:
        return rng.randint(0, 1)
    if domain is Domain.NONNEG_INT:
        return rng.randint(0, bound)
    return rng.randint(-bound, bound)


def sample_states(domains, count, seed=0, bound=DEFAULT_INT_SAMPLE_BOUND):
    """The seeded points the sample backend uses.  Rationals have numerator
    and denominator uniform on [1, 2^16]."""
    rng = random.Random(seed)
    return [tuple(_draw(rng, d, bound) for d in domains) for _ in range(count)]


def _rebind_lambda(maps, lam):
    if lam is None:
        return dict(maps)
    out = {}
    for name, m in maps.items():
        out[name] = m.rebuild(lam) if m.rebuild is not None else m
    return out


def _parse_lambda(lam):
    if lam is None or lam == SYMBOLIC or isinstance(lam, RatFunc):
        return lam
    return Fraction(lam)


def run_check(name, domains, make, backend, lam=None, admissible=None):
    """Drive one check on ``backend``.

    ``make(lam)`` returns the function ``state -> (lhs, rhs)``; ``lam`` is the
    electrical parameter (None, a rational, or a RatFunc variable when the
    backend is symbolic and the parameter is left free).  ``admissible``
    filters the instance set.
    """
    lam = _parse_lambda(lam)
    t0 = time.perf_counter()
    if backend.kind == "symbolic":
        instances, cex = _run_symbolic(domains, make, backend, lam)
    elif backend.kind == "sample":
        if lam == SYMBOLIC:
            raise BackendIncompatible("a free parameter needs the symbolic backend")
        instances, cex = _run_sample(domains, make(lam), backend, admissible)
    else:
        if lam == SYMBOLIC:
            raise BackendIncompatible("a free parameter needs the symbolic backend")
        instances, cex = _run_exhaustive(domains, make(lam), backend, admissible)
    elapsed = int(round((time.perf_counter() - t0) * 1000))
    seed = backend.seed if backend.kind == "sample" else None
    return VerificationReport(name, backend.describe(), seed, instances,
                              "fail" if cex else "pass", cex, elapsed)


def _run_symbolic(domains, make, backend, lam):
    bad = [d.value for d in domains if not d.birational]
    if bad:
        raise BackendIncompatible(f"symbolic backend needs rational slots, got {', '.join(bad)}")
    extra = ("lam",) if lam == SYMBOLIC else ()
    state, extras = symbolic_state(domains, extra=extra)
    evaluate = make(extras[0] if extras else lam)
    with term_budget(backend.budget):
        try:
            lhs, rhs = evaluate(state)
        except NotInY as e:
            return "proved", _symbolic_witness(domains, make, lam, state, note=f"not in Y: {e}")
        equal = all(ratfunc_equal(a, b) for a, b in zip(_flatten(lhs), _flatten(rhs)))
    if equal:
        return "proved", None
    return "proved", _symbolic_witness(domains, make, lam, state)


def _symbolic_witness(domains, make, lam, state, note=""):
    """A concrete rational point where the two sides differ."""
    rng = random.Random(0)
    for _ in range(200):
        lam_value = Fraction(rng.randint(1, 1 << 16), rng.randint(1, 1 << 16)) if lam == SYMBOLIC else lam
        point = tuple(_draw(rng, d, 0) for d in domains)
        try:
            lhs, rhs = make(lam_value)(point)
        except NotInY as e:
            return Counterexample(_fmt(point), (), (), note or f"not in Y: {e}")
        if not all(values_equal(a, b) for a, b in zip(lhs, rhs)):
            if lam == SYMBOLIC:
                note = (note + "; " if note else "") + f"lambda = {format_value(lam_value)}"
            return Counterexample(_fmt(point), _fmt(lhs), _fmt(rhs), note)
    return Counterexample((), (), (), note or "symbolic sides differ; no rational witness found in 200 points")


def _compare(evaluate, state):
    try:
        lhs, rhs = evaluate(state)
    except (NotInY, DomainMismatch) as e:
        return Counterexample(_fmt(state), (), (), f"{type(e).__name__}: {e}")
    if len(lhs) != len(rhs) or not all(values_equal(a, b) for a, b in zip(lhs, rhs)):
        return Counterexample(_fmt(state), _fmt(lhs), _fmt(rhs))
    return None


def _run_sample(domains, evaluate, backend, admissible):
    bound = backend.bound if backend.bound is not None else DEFAULT_INT_SAMPLE_BOUND
    rng = random.Random(backend.seed)
    checked = draws = 0
    while checked < backend.count:
        draws += 1
        if draws > 100 * backend.count:
            break
        state = tuple(_draw(rng, d, bound) for d in domains)
        if admissible is not None and not admissible(state):
            continue
        checked += 1
        cex = _compare(evaluate, state)
        if cex:
            return checked, cex
    return checked, None


def _run_exhaustive(domains, evaluate, backend, admissible):
    checked = 0
    for _, state in box_batches(domains, backend.bound, backend.ceiling):
        if admissible is not None:
            mask = np.asarray(admissible(state), dtype=bool)
            if not mask.any():
                continue
            state = tuple(s[mask] for s in state)
        n = len(state[0])
        try:
            lhs, rhs = evaluate(state)
            diff = np.zeros(n, dtype=bool)
            for a, b in zip(lhs, rhs):
                diff |= np.broadcast_to(np.asarray(a) != np.asarray(b), (n,))
        except (NotInY, DomainMismatch):
            diff = None
        if diff is None or diff.any():
            # redo the offending batch one state at a time to name the first bad one
            start = 0 if diff is None else int(np.argmax(diff))
            for i in range(start, n):
                cex = _compare(evaluate, tuple(int(s[i]) for s in state))
                if cex:
                    return checked + i + 1, cex
        checked += n
    return checked, None


# ---------------------------------------------------------------------------
# checks

def check_equation(spec, backend, maps=None, lam=None, name=None) -> VerificationReport:
    """Check ``lhs == rhs`` of a registered equation.  ``maps`` overrides the
    registered bindings (e.g. ``{"R": 3dr-vec}``); ``lam`` re-parametrizes
    any electrical map, ``"symbolic"`` leaving it free."""
    if isinstance(spec, str):
        spec = catalog.get_equation(spec)
    base = spec.maps(maps)
    signature = catalog.infer_signature(spec.signature.labels, (spec.lhs, spec.rhs), base)

    def make(lam_value):
        bound_maps = _rebind_lambda(base, lam_value)
        lb = bind(spec.lhs, bound_maps, signature)
        rb = bind(spec.rhs, bound_maps, signature)
        return lambda s: (run_bound(lb, s), run_bound(rb, s))

    return run_check(name or spec.id, signature.domains, make, backend, lam)


def _single(m, lam_value):
    return _rebind_lambda({"m": m}, lam_value)["m"]


def check_involutive(m: LocalMap, backend, lam=None) -> VerificationReport:
    def make(lam_value):
        f = _single(m, lam_value)
        return lambda x: (f(*f(*x)), tuple(x))

    return run_check(f"involutive({m.id})", m.domains, make, backend, lam)


def check_symmetric(m: LocalMap, backend, lam=None) -> VerificationReport:
    """``R == P R P`` with P reversing the slots, on the states where both
    sides are defined (x and its reversal both in the domain)."""

    def make(lam_value):
        f = _single(m, lam_value)
        return lambda x: (f(*x), tuple(reversed(f(*reversed(tuple(x))))))

    def admissible(x):
        masks = [member_mask(d, v) for d, v in zip(m.domains, reversed(tuple(x)))]
        out = masks[0]
        for k in masks[1:]:
            out = out & k
        return out

    return run_check(f"symmetric({m.id})", m.domains, make, backend, lam, admissible)


def _tetra(R_or_T):
    return tetrahedral(R_or_T) if R_or_T.arity == 3 else R_or_T


def _rebuild_tetra(R_or_T, lam_value):
    if lam_value is None or "lambda" not in R_or_T.params:
        return _tetra(R_or_T)
    return _tetra(_single(R_or_T, lam_value))


def _folded_domains(T):
    d = T.domains
    return (d[0], d[1], d[3], d[4])


def is_boundarizable(R_or_T: LocalMap, backend, lam=None) -> VerificationReport:
    """Whether the tetrahedral composite maps the folded subset Y into Y.
    Accepts an arity-3 map or a prebuilt arity-6 composite."""
    T = _tetra(R_or_T)

    def make(lam_value):
        t = _rebuild_tetra(R_or_T, lam_value)

        def evaluate(x):
            y = t.func(*phi(tuple(x)))
            return (y[1], y[4]), (y[2], y[5])

        return evaluate

    return run_check(f"bd-cond({R_or_T.id})", _folded_domains(T), make, backend, lam)


def check_boundary_match(R_or_T: LocalMap, J: LocalMap, backend, lam=None) -> VerificationReport:
    """Boundarization of ``R_or_T`` against a closed-form map ``J``."""
    T = _tetra(R_or_T)
    if _folded_domains(T) != J.domains:
        raise DomainMismatch(f"{J.id} acts on {[d.value for d in J.domains]}, "
                             f"the folded composite on {[d.value for d in _folded_domains(T)]}")

    def make(lam_value):
        built = boundarize(_rebuild_tetra(R_or_T, lam_value))
        closed = _single(J, lam_value)
        return lambda x: (built.func(*x), closed(*x))

    return run_check(f"bd-match({R_or_T.id},{J.id})", J.domains, make, backend, lam)


def check_tetrahedral_orders(R: LocalMap, backend, lam=None) -> VerificationReport:
    """The two stored factor orders of T agree; this is the tetrahedron
    equation restated on T."""

    def make(lam_value):
        r = _single(R, lam_value)
        a, b = tetrahedral(r, "left"), tetrahedral(r, "right")
        return lambda x: (a.func(*x), b.func(*x))

    return run_check(f"T-orders({R.id})", R.domains * 2, make, backend, lam)


def check_r20(variant="homogeneous", backend=None, R=None, lam=None) -> VerificationReport:
    """The doubled 20-factor identity on 15 slots.  ``homogeneous`` uses a
    single map R (3dr unless given); ``super`` the mixed M, N, R-crystal
    version."""
    backend = backend or Backend.sample(200)
    if variant == "homogeneous":
        spec = catalog.get_equation("r20")
        return check_equation(spec, backend, {"R": R} if R is not None else None, lam,
                              name=f"r20({(R.id if R is not None else '3dr')})")
    if variant == "super":
        return check_equation("r20-super", backend)
    raise ValueError(f"unknown variant {variant!r}; use 'homogeneous' or 'super'")


# T-form of the 15-slot identity: the four-factor groups become one T each
R20_TETRA_LHS = ("R[4,8,9] R[4b,8b,9b] T[3,5,5b,7,9,9b] R[2,6,9b] R[2b,6b,9] R[2,5b,8] R[2b,5,8b] "
                 "T[1,6,6b,7,8,8b] T[1,2,2b,3,4,4b] R[4b,5b,6b] R[4,5,6]")
R20_TETRA_RHS = ("R[4,5,6] R[4b,5b,6b] T[1,2,2b,3,4,4b] T[1,6,6b,7,8,8b] R[2b,5,8b] R[2,5b,8] "
                 "R[2b,6b,9] R[2,6,9b] T[3,5,5b,7,9,9b] R[4b,8b,9b] R[4,8,9]")
_UNBARRED = ("1", "2", "3", "4", "5", "6", "7", "8", "9")


def doubled(x):
    """(x1..x9) -> (x1,x2,x2,x3,x4,x4,x5,x5,x6,x6,x7,x8,x8,x9,x9) in the
    15-slot ordering."""
    x1, x2, x3, x4, x5, x6, x7, x8, x9 = x
    return (x1, x2, x2, x3, x4, x4, x5, x5, x6, x6, x7, x8, x8, x9, x9)


def check_reconnection(backend, R=None, lam=None) -> VerificationReport:
    """Act with both sides of the T-form identity on doubled states.

    Every T receives and returns a folded state, and cutting each T into two
    copies of J leaves the unbarred slots exactly as the 3D reflection
    equation built from J = boundarize(R) produces them.  Both sides of the
    reflection equation are compared with the unbarred slots of the T-form
    sides.
    """
    R = R if R is not None else catalog.MAPS["3dr"]
    sig = SpaceSignature.from_labels(catalog.R20_LABELS, R.domains[0])
    sig9 = SpaceSignature.numbered(9, R.domains[0])
    unbarred = [sig.index(l) for l in _UNBARRED]
    lhs_e, rhs_e = parse_composite(R20_TETRA_LHS), parse_composite(R20_TETRA_RHS)
    tre_l, tre_r = parse_composite(catalog.TRE_LHS), parse_composite(catalog.TRE_RHS)

    def make(lam_value):
        r = _single(R, lam_value)
        T = tetrahedral(r)
        J = boundarize(T)
        maps = {"R": r, "T": _folded_checked(T)}
        lb, rb = bind(lhs_e, maps, sig), bind(rhs_e, maps, sig)
        jl, jr = bind(tre_l, {"R": r, "J": J}, sig9), bind(tre_r, {"R": r, "J": J}, sig9)

        def evaluate(x):
            big = doubled(tuple(x))
            left, right = run_bound(lb, big), run_bound(rb, big)
            pick = lambda s: tuple(s[i] for i in unbarred)
            return pick(left) + pick(right), run_bound(jl, tuple(x)) + run_bound(jr, tuple(x))

        return evaluate

    return run_check(f"reconnection({R.id})", R.domains[:1] * 9, make, backend, lam)


def _folded_checked(T):
    """T that raises NotInY unless it maps a folded input to a folded output."""
    from .kernel import in_y

    def func(*y):
        if not in_y(y):
            raise NotInY("T received a state outside Y")
        out = T.func(*y)
        if not in_y(out):
            raise NotInY("T returned a state outside Y")
        return out

    return T.with_func(func, id=T.id)


def check_tropical_limit(expr_id="3dr", bound=None, low=None) -> VerificationReport:
    """Evaluate the subtraction-free expressions of ``expr_id`` over min-plus
    and compare with the crystal map on the integer box."""
    exprs = catalog.EXPRESSIONS[expr_id]
    crystal = catalog.MAPS[catalog.EXPRESSION_PARTNERS[expr_id]]
    n = len(exprs)
    if expr_id == "3dr":
        domain, bound = Domain.INT, 5 if bound is None else bound
    else:
        domain, bound = Domain.NONNEG_INT, 6 if bound is None else bound
    names = [f"x{i}" for i in range(1, n + 1)]

    def make(_):
        def evaluate(x):
            env = dict(zip(names, x))
            return tuple(semifield_eval(e, env, MIN_PLUS) for e in exprs), crystal.func(*x)
        return evaluate

    return run_check(f"tropical({expr_id}->{crystal.id})", (domain,) * n, make,
                     Backend.exhaustive(bound))


# ---------------------------------------------------------------------------
# appendix traces

def load_appendix(which=None, path=None):
    """Parse an appendix data file into ``(signature_labels, [CompositeExpr])``.

    Lines are DSL composites; ``#`` starts a comment; the ``# labels:``
    header fixes the slot ordering.
    """
    if path is None:
        path = DATA_DIR / f"appendix_{which.lower()}.txt"
    path = Path(path)
    labels, lines = None, []
    for lineno, raw in enumerate(path.read_text().splitlines(), 1):
        text = raw.strip()
        if text.startswith("#"):
            body = text[1:].strip()
            if body.startswith("labels:"):
                labels = body[len("labels:"):].split()
            continue
        text = text.split("#", 1)[0].strip()
        if not text:
            continue
        try:
            lines.append((lineno, parse_composite(text)))
        except CompositeSyntaxError as e:
            raise AppendixParseError(str(e), path, lineno, e.pos) from None
    if labels is None:
        raise AppendixParseError("missing '# labels:' header", path, 1)
    return labels, lines


def trace_appendix(which="A", backend=None, R=None, lam=None, path=None) -> VerificationReport:
    """Every line of a derivation must act like its first line.

    Appendix A is read over positive rationals with R (3dr unless given);
    Appendix B over the mixed signature of the super identity.  The report's
    ``details`` lists each line with its verdict; the counterexample names
    the first line that differs.
    """
    backend = backend or Backend.sample(50)
    which = which.upper()
    labels, lines = load_appendix(which, path)
    if which == "A":
        R = R if R is not None else catalog.MAPS["3dr"]
        base = {"R": R}
        sig = SpaceSignature.from_labels(labels, R.domains[0])
    else:
        spec = catalog.get_equation("r20-super")
        base = spec.maps()
        sig = spec.signature
        if tuple(labels) != sig.labels:
            raise AppendixParseError("label header does not match the 15-slot ordering", path or which, 1)

    for lineno, expr in lines:
        try:
            bind(expr, _rebind_lambda(base, None), sig)
        except (KeyError, ValueError) as e:
            raise AppendixParseError(str(e), path or f"appendix {which}", lineno) from None

    def make(lam_value):
        maps = _rebind_lambda(base, lam_value)
        bound_lines = [bind(expr, maps, sig) for _, expr in lines]

        def evaluate(x):
            outs = [run_bound(b, x) for b in bound_lines]
            return outs[0] * (len(outs) - 1), sum(outs[1:], ())

        return evaluate

    report = run_check(f"appendix-{which}", sig.domains, make, backend, lam)
    # lines are numbered 1.. in derivation order; file line numbers only
    # matter for parse errors
    verdicts = {k: "pass" for k in range(1, len(lines) + 1)}
    cex = report.counterexample
    if cex is not None and cex.lhs:
        n = len(sig)
        bad = next(k for k in range(len(cex.rhs)) if cex.lhs[k] != cex.rhs[k]) // n + 2
        report.counterexample = Counterexample(
            cex.input, cex.lhs[:n], cex.rhs[(bad - 2) * n:(bad - 1) * n],
            f"line {bad} differs from line 1 (file line {lines[bad - 1][0]})")
        for k in range(bad, len(lines) + 1):
            verdicts[k] = "fail" if k == bad else "not checked"
    report.details = [{"line": k, "result": v} for k, v in verdicts.items()]
    return report


__all__ = [
    "Backend", "BackendIncompatible", "BoxTooLarge", "AppendixParseError", "Counterexample",
    "VerificationReport", "enumerate_box", "box_batches", "box_size", "member_mask",
    "sample_states", "run_check", "check_equation", "check_involutive", "check_symmetric",
    "is_boundarizable", "check_boundary_match", "check_tetrahedral_orders", "check_r20",
    "check_reconnection", "check_tropical_limit", "load_appendix", "trace_appendix", "doubled",
    "BudgetExceeded", "SYMBOLIC",
]
