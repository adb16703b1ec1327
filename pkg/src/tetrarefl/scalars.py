"""Slot domains, exact rationals and the two semifields used by the catalog.

Rationals are plain :class:`fractions.Fraction` values (always in lowest
terms, denominator positive).  Integer slots hold Python ints, or numpy
integer arrays when a whole batch of states is pushed through a composite at
once.
"""
from __future__ import annotations

import ast
import enum
from fractions import Fraction

import numpy as np


class DomainMismatch(ValueError):
    pass


class UnboundVariable(KeyError):
    pass


class DivisionByAdditiveAbsorber(ZeroDivisionError):
    pass


class Domain(enum.Enum):
    """Value set of a single slot."""

    POS_RATIONAL = "Q+"
    NONNEG_INT = "Z+"
    INT = "Z"
    BIT = "B"
    POS_RATIONAL_PAIR = "Q+^2"

    @property
    def finite(self) -> bool:
        return self is Domain.BIT

    @property
    def integral(self) -> bool:
        return self in (Domain.NONNEG_INT, Domain.INT, Domain.BIT)

    @property
    def birational(self) -> bool:
        return self in (Domain.POS_RATIONAL, Domain.POS_RATIONAL_PAIR)

    def contains(self, value) -> bool:
        """Membership test.  Arrays are tested elementwise (all must pass);
        symbolic values are accepted without inspection."""
        if isinstance(value, np.ndarray):
            if self is Domain.NONNEG_INT:
                return bool((value >= 0).all())
            if self is Domain.BIT:
                return bool(((value == 0) | (value == 1)).all())
            return self is Domain.INT
        if self is Domain.POS_RATIONAL:
            if isinstance(value, (Fraction, int)) and not isinstance(value, bool):
                return value > 0
            return _is_symbolic(value)
        if self is Domain.POS_RATIONAL_PAIR:
            return (isinstance(value, tuple) and len(value) == 2
                    and all(Domain.POS_RATIONAL.contains(v) for v in value))
        if not isinstance(value, (int, np.integer)) or isinstance(value, bool):
            return False
        if self is Domain.NONNEG_INT:
            return value >= 0
        if self is Domain.BIT:
            return value in (0, 1)
        return True


def _is_symbolic(value) -> bool:
    # avoid importing the symbolic kernel here
    return type(value).__name__ == "RatFunc"


def pos_rational(value) -> Fraction:
    """Coerce to a strictly positive Fraction."""
    q = parse_rational(value) if isinstance(value, str) else Fraction(value)
    if q <= 0:
        raise DomainMismatch(f"{q} is not a positive rational")
    return q


def parse_rational(text: str) -> Fraction:
    """Parse ``"p/q"`` or ``"p"`` exactly.  Decimal and float syntax is rejected."""
    s = text.strip()
    num, sep, den = s.partition("/")
    try:
        p = int(num)
        q = int(den) if sep else 1
    except ValueError:
        raise ValueError(f"not an exact rational: {text!r}") from None
    if q == 0:
        raise ZeroDivisionError(f"zero denominator in {text!r}")
    return Fraction(p, q)


def format_rational(q) -> str:
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def format_value(value) -> str:
    """Text form of one slot value: ``p/q`` for rationals, ``a:b`` for pairs."""
    if isinstance(value, tuple):
        return ":".join(format_value(v) for v in value)
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, Fraction):
        return format_rational(value)
    return str(value)


def parse_value(text: str, domain: Domain):
    text = text.strip()
    if domain is Domain.POS_RATIONAL_PAIR:
        parts = text.split(":")
        if len(parts) != 2:
            raise ValueError(f"pair value must be written a:b, got {text!r}")
        value = tuple(parse_rational(p) for p in parts)
    elif domain is Domain.POS_RATIONAL:
        value = parse_rational(text)
    else:
        q = parse_rational(text)
        if q.denominator != 1:
            raise DomainMismatch(f"{text!r} is not an integer")
        value = q.numerator
    if not domain.contains(value):
        raise DomainMismatch(f"{text!r} is not in {domain.value}")
    return value


def min_(a, b):
    """``min`` that also works elementwise on numpy arrays."""
    if isinstance(a, np.ndarray) or isinstance(b, np.ndarray):
        return np.minimum(a, b)
    return min(a, b)


def max_(a, b):
    if isinstance(a, np.ndarray) or isinstance(b, np.ndarray):
        return np.maximum(a, b)
    return max(a, b)


class Semifield:
    """A commutative semifield given by its three operations and unit."""

    name = "semifield"
    one = None

    def add(self, a, b):
        raise NotImplementedError

    def mul(self, a, b):
        raise NotImplementedError

    def div(self, a, b):
        raise NotImplementedError

    def constant(self, k: int):
        raise NotImplementedError

    def power(self, a, n: int):
        out = self.one
        for _ in range(n):
            out = self.mul(out, a)
        return out

    def __repr__(self):
        return f"<{self.name}>"


class PositiveRationals(Semifield):
    name = "Q>0"
    one = Fraction(1)

    def add(self, a, b):
        return a + b

    def mul(self, a, b):
        return a * b

    def div(self, a, b):
        if b == 0:
            raise DivisionByAdditiveAbsorber("division by zero")
        return Fraction(a) / b

    def constant(self, k):
        return Fraction(k)

    def power(self, a, n):
        return Fraction(a) ** n


class MinPlus(Semifield):
    """Tropical semifield (Z, min, +, -, 0).  Positive integer constants
    tropicalize to 0."""

    name = "min-plus"
    one = 0

    def add(self, a, b):
        return min_(a, b)

    def mul(self, a, b):
        return a + b

    def div(self, a, b):
        return a - b

    def constant(self, k):
        return 0

    def power(self, a, n):
        return n * a


RATIONALS = PositiveRationals()
MIN_PLUS = MinPlus()

_BINOPS = {ast.Add: "add", ast.Mult: "mul", ast.Div: "div"}


def parse_expression(text: str) -> ast.expr:
    """Parse a subtraction-free expression (``+ * / **``, names, positive
    integer constants) into a Python AST, rejecting everything else."""
    tree = ast.parse(text.replace("^", "**"), mode="eval").body
    for node in ast.walk(tree):
        if isinstance(node, ast.BinOp):
            if isinstance(node.op, ast.Pow):
                exp = node.right
                if not (isinstance(exp, ast.Constant) and type(exp.value) is int and exp.value >= 1):
                    raise ValueError(f"exponent must be a positive integer literal in {text!r}")
            elif type(node.op) not in _BINOPS:
                raise ValueError(f"operator {type(node.op).__name__} not allowed in {text!r}")
        elif isinstance(node, ast.Constant):
            if type(node.value) is not int or node.value <= 0:
                raise ValueError(f"only positive integer constants allowed in {text!r}")
        elif not isinstance(node, (ast.Name, ast.Load, ast.expr_context, ast.operator)):
            raise ValueError(f"unsupported syntax {type(node).__name__} in {text!r}")
    return tree


def semifield_eval(expr, bindings: dict, field: Semifield = RATIONALS):
    """Evaluate a subtraction-free expression exactly in ``field``.

    >>> semifield_eval("x1*x2/(x1+x3)", {"x1": 2, "x2": 3, "x3": 1}, MIN_PLUS)
    4
    """
    tree = parse_expression(expr) if isinstance(expr, str) else expr

    def ev(node):
        if isinstance(node, ast.Name):
            try:
                return bindings[node.id]
            except KeyError:
                raise UnboundVariable(node.id) from None
        if isinstance(node, ast.Constant):
            return field.constant(node.value)
        if isinstance(node.op, ast.Pow):
            return field.power(ev(node.left), node.right.value)
        return getattr(field, _BINOPS[type(node.op)])(ev(node.left), ev(node.right))

    return ev(tree)

