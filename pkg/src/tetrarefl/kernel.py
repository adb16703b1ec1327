"""Indexed application of local maps on product spaces, composites and
their text syntax, and the folding construction that turns a tetrahedron
map into a boundary map.

A *state* is a tuple with one entry per slot.  An entry is a single value
(Fraction, int, pair, RatFunc) or a numpy integer array holding that slot
for a whole batch of states; every operation here is written so that both
work unchanged.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Callable, Mapping, Sequence

import numpy as np

from .scalars import Domain, DomainMismatch


class ArityMismatch(ValueError):
    pass


class UnknownLabel(KeyError):
    pass


class UnknownMap(KeyError):
    pass


class NotInY(ValueError):
    pass


class CompositeSyntaxError(SyntaxError):
    def __init__(self, msg, text="", pos=0):
        super().__init__(f"{msg} at position {pos}")
        self.text = text
        self.pos = pos


@dataclass(frozen=True)
class SpaceSignature:
    labels: tuple
    domains: tuple

    def __post_init__(self):
        labels = tuple(str(l) for l in self.labels)
        domains = tuple(self.domains)
        if len(set(labels)) != len(labels):
            raise ValueError(f"duplicate labels in {labels}")
        if len(domains) != len(labels):
            raise ValueError("need one domain per label")
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "domains", domains)
        object.__setattr__(self, "_index", {l: i for i, l in enumerate(labels)})

    @classmethod
    def numbered(cls, n, domain=Domain.POS_RATIONAL):
        return cls(tuple(str(i) for i in range(1, n + 1)), (domain,) * n)

    @classmethod
    def from_labels(cls, labels, domain=Domain.POS_RATIONAL, overrides=None):
        """``overrides`` maps label -> domain for the slots that differ."""
        labels = labels.split() if isinstance(labels, str) else list(labels)
        overrides = overrides or {}
        return cls(tuple(labels), tuple(overrides.get(l, domain) for l in labels))

    def index(self, label) -> int:
        try:
            return self._index[str(label)]
        except KeyError:
            raise UnknownLabel(f"label {label!r} not in signature {' '.join(self.labels)}") from None

    def __len__(self):
        return len(self.labels)

    def header(self) -> str:
        return " ".join(f"{l}:{d.value}" for l, d in zip(self.labels, self.domains))


@dataclass(frozen=True, eq=False)
class LocalMap:
    """A map on a fixed tuple of slot domains.

    ``func`` takes one positional argument per slot and returns a tuple of the
    same length.  The flags are declarations; the verifier re-checks them.
    """

    id: str
    domains: tuple
    func: Callable
    involutive: bool = False
    symmetric: bool | None = None
    params: Mapping = field(default_factory=dict)
    description: str = ""
    # lam -> the same map at another parameter value, for parametrized maps
    rebuild: Callable | None = None

    @property
    def arity(self) -> int:
        return len(self.domains)

    def __call__(self, *args, check=True):
        if len(args) != self.arity:
            raise ArityMismatch(f"{self.id} takes {self.arity} arguments, got {len(args)}")
        if check:
            _check_domains(self, args, "input")
        out = tuple(self.func(*args))
        if check:
            _check_domains(self, out, "output")
        return out

    def with_func(self, func, id=None, **changes):
        """Copy with a different rule, e.g. a perturbed variant for negative controls."""
        kw = dict(id=id or self.id + "~", domains=self.domains, func=func,
                  involutive=self.involutive, symmetric=self.symmetric,
                  params=self.params, description=self.description, rebuild=None)
        kw.update(changes)
        return LocalMap(**kw)

    def __repr__(self):
        doms = "x".join(d.value for d in self.domains)
        extra = "".join(f" {k}={v}" for k, v in self.params.items())
        return f"<LocalMap {self.id} on {doms}{extra}>"


def _check_domains(m, values, what):
    for t, (v, d) in enumerate(zip(values, m.domains)):
        if not d.contains(v):
            raise DomainMismatch(f"{m.id}: {what} {t + 1} = {_short(v)} is not in {d.value}")


def _short(v):
    if isinstance(v, np.ndarray):
        return f"array(min={v.min()}, max={v.max()})"
    return str(v)


def apply_indexed(m: LocalMap, labels: Sequence, state: tuple,
                  signature: SpaceSignature, check=True) -> tuple:
    """Act with ``m`` on the slots named by ``labels``.

    The map reads the selected values in label order and writes its outputs
    back in label order; for ascending labels this is the plain embedding,
    otherwise it equals conjugating the ascending action by the sorting
    permutation.  All other slots are untouched; ``state`` is not modified.
    """
    if len(labels) != m.arity:
        raise ArityMismatch(f"{m.id} has arity {m.arity} but got labels {list(labels)}")
    positions = [signature.index(l) for l in labels]
    if len(set(positions)) != len(positions):
        raise ValueError(f"repeated label in {list(labels)}")
    return _apply_at(m, positions, state, signature, check)


def _apply_at(m, positions, state, signature, check):
    if check:
        for t, p in enumerate(positions):
            if signature.domains[p] != m.domains[t]:
                raise DomainMismatch(
                    f"{m.id} argument {t + 1} expects {m.domains[t].value}, slot "
                    f"{signature.labels[p]} is {signature.domains[p].value}")
    out = m(*(state[p] for p in positions), check=check)
    new = list(state)
    for p, v in zip(positions, out):
        new[p] = v
    return tuple(new)


@dataclass(frozen=True)
class CompositeExpr:
    """Product of indexed maps, written left to right as in ``A[...] B[...]``;
    the rightmost factor acts first."""

    factors: tuple = ()

    def __str__(self):
        return " ".join(f"{name}[{','.join(labels)}]" for name, labels in self.factors)

    def __len__(self):
        return len(self.factors)

    def __iter__(self):
        return iter(self.factors)

    def reversed(self):
        return CompositeExpr(self.factors[::-1])

    def __add__(self, other):
        return CompositeExpr(self.factors + other.factors)

    def map_names(self):
        return sorted({name for name, _ in self.factors})

    def relabel(self, mapping):
        return CompositeExpr(tuple((n, tuple(mapping.get(l, l) for l in ls)) for n, ls in self.factors))

    def rename(self, mapping):
        return CompositeExpr(tuple((mapping.get(n, n), ls) for n, ls in self.factors))


_TOKEN = re.compile(r"\s*(?:(?P<factor>(?P<name>[A-Za-z_][A-Za-z0-9_-]*)\[(?P<labels>[^\]]*)\])|(?P<bad>\S))")
_LABEL = re.compile(r"^[A-Za-z0-9]+$")


def parse_composite(text: str) -> CompositeExpr:
    """Parse ``"R[2,4,5] R[1,3,5]"``-style text.  Labels are alphanumeric;
    a trailing ``b`` is the usual spelling of a barred label (``4b``)."""
    factors = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None or m.group("bad") is not None:
            where = m.start("bad") if m is not None else pos
            raise CompositeSyntaxError(f"expected NAME[labels], found {text[where:where + 10]!r}", text, where)
        raw = m.group("labels")
        labels = tuple(l.strip() for l in raw.split(","))
        for l in labels:
            if not _LABEL.match(l):
                raise CompositeSyntaxError(f"bad label {l!r}", text, m.start("labels"))
        if len(labels) not in (3, 4, 6):
            raise CompositeSyntaxError(f"factor {m.group('name')} needs 3, 4 or 6 labels, got {len(labels)}",
                                       text, m.start("labels"))
        factors.append((m.group("name"), labels))
        pos = m.end()
    return CompositeExpr(tuple(factors))


def bind(expr: CompositeExpr, maps: Mapping[str, LocalMap], signature: SpaceSignature):
    """Resolve names and labels once; returns (map, positions) pairs in
    application order (rightmost factor first)."""
    bound = []
    for name, labels in reversed(expr.factors):
        try:
            m = maps[name]
        except KeyError:
            raise UnknownMap(f"no map bound to {name!r}; bound names: {sorted(maps)}") from None
        if len(labels) != m.arity:
            raise ArityMismatch(f"{name}{list(labels)}: {m.id} has arity {m.arity}")
        positions = tuple(signature.index(l) for l in labels)
        if len(set(positions)) != len(positions):
            raise ValueError(f"repeated label in {name}{list(labels)}")
        for t, p in enumerate(positions):
            if signature.domains[p] != m.domains[t]:
                raise DomainMismatch(
                    f"{name}[{','.join(labels)}]: argument {t + 1} of {m.id} expects "
                    f"{m.domains[t].value}, slot {labels[t]} is {signature.domains[p].value}")
        bound.append((m, positions))
    return bound


def eval_composite(expr, state, maps, signature, check=True, trace=None):
    """Apply ``expr`` to ``state``.  If ``trace`` is a list, each intermediate
    state is appended to it together with the factor that produced it."""
    if isinstance(expr, str):
        expr = parse_composite(expr)
    state = tuple(state)
    if len(state) != len(signature):
        raise ValueError(f"state has {len(state)} slots, signature has {len(signature)}")
    bound = bind(expr, maps, signature)
    names = [f"{n}[{','.join(ls)}]" for n, ls in reversed(expr.factors)]
    for step, name in zip(bound, names):
        state = run_bound((step,), state, check)
        if trace is not None:
            trace.append((name, state))
    return state


def run_bound(bound, state, check=True):
    """Apply pre-bound factors; used by the verifier's hot loops."""
    for m, positions in bound:
        out = m(*(state[p] for p in positions), check=check)
        new = list(state)
        for p, v in zip(positions, out):
            new[p] = v
        state = tuple(new)
    return state


def composite_map(id: str, expr, maps, domains, labels=None, **flags) -> LocalMap:
    """Package a composite as a LocalMap on its whole space."""
    if isinstance(expr, str):
        expr = parse_composite(expr)
    domains = tuple(domains)
    labels = labels or [str(i) for i in range(1, len(domains) + 1)]
    sig = SpaceSignature(tuple(labels), domains)
    bound = bind(expr, maps, sig)

    def func(*xs):
        return run_bound(bound, xs, check=False)

    return LocalMap(id, domains, func, description=str(expr), **flags)


# ---------------------------------------------------------------------------
# folding X^4 <-> Y and the tetrahedral composite

TETRA_LEFT = parse_composite("R[2,4,5] R[1,3,5] R[1,2,6] R[3,4,6]")
TETRA_RIGHT = TETRA_LEFT.reversed()


def values_equal(a, b) -> bool:
    if isinstance(a, np.ndarray) or isinstance(b, np.ndarray):
        return bool(np.array_equal(a, b))
    if isinstance(a, tuple):
        return len(a) == len(b) and all(values_equal(u, v) for u, v in zip(a, b))
    return bool(a == b)


def phi(x):
    x1, x2, x3, x4 = x
    return (x1, x2, x2, x3, x4, x4)


def in_y(y) -> bool:
    return values_equal(y[1], y[2]) and values_equal(y[4], y[5])


def phi_inv(y):
    if len(y) != 6:
        raise ValueError("phi_inv takes a 6-slot state")
    if not values_equal(y[1], y[2]):
        raise NotInY(f"slot 2 ({_short(y[1])}) differs from slot 3 ({_short(y[2])})")
    if not values_equal(y[4], y[5]):
        raise NotInY(f"slot 5 ({_short(y[4])}) differs from slot 6 ({_short(y[5])})")
    return (y[0], y[1], y[3], y[4])


def tetrahedral(R: LocalMap, order="left") -> LocalMap:
    """The tetrahedral composite of ``R`` as an arity-6 map, in either of the
    two factor orders."""
    expr = TETRA_LEFT if order == "left" else TETRA_RIGHT
    T = composite_map(f"T({R.id})", expr, {"R": R}, R.domains * 2, involutive=R.involutive)
    if R.rebuild is None:
        return T
    return T.with_func(T.func, id=T.id, params=R.params,
                       rebuild=lambda lam: tetrahedral(R.rebuild(lam), order))


def boundarize(R_or_T: LocalMap, id=None) -> LocalMap:
    """Boundary map J = phi_inv . T . phi.

    Accepts an arity-3 map (its tetrahedral composite is formed) or an
    already built arity-6 composite, which covers mixed composites such as
    N M M N.  Evaluating J at a point where T leaves the folded subset raises
    :class:`NotInY`.
    """
    T = tetrahedral(R_or_T) if R_or_T.arity == 3 else R_or_T
    if T.arity != 6:
        raise ArityMismatch("boundarize needs an arity-3 map or an arity-6 composite")
    d = T.domains
    if d[1] != d[2] or d[4] != d[5]:
        raise DomainMismatch("slots 2,3 and 5,6 of the composite must share domains")

    def func(x1, x2, x3, x4):
        return phi_inv(T.func(*phi((x1, x2, x3, x4))))

    base = R_or_T.id[2:-1] if R_or_T.id.startswith("T(") else R_or_T.id
    return LocalMap(id or f"bd({base})", (d[0], d[1], d[3], d[4]), func,
                    involutive=T.involutive, params=R_or_T.params,
                    description=f"phi_inv . {T.id} . phi",
                    rebuild=(None if R_or_T.rebuild is None
                             else lambda lam: boundarize(R_or_T.rebuild(lam), id)))
