"""Multivariate polynomials and rational functions over Q.

Rational functions are never reduced by a GCD.  Denominators are kept as
products of the polynomials that have been divided by, and numerators are
trial-divided by those factors, which keeps expression swell in check when
birational maps are composed.  Equality is decided by cross-multiplying and
testing the expanded difference for zero.
"""
from __future__ import annotations

import contextlib
import heapq
import contextvars
from fractions import Fraction
from numbers import Rational

_term_budget = contextvars.ContextVar("term_budget", default=None)


class BudgetExceeded(RuntimeError):
    pass


@contextlib.contextmanager
def term_budget(limit):
    """Raise :class:`BudgetExceeded` if any product inside the block has more
    than ``limit`` terms.  ``None`` disables the guard."""
    token = _term_budget.set(limit)
    try:
        yield
    finally:
        _term_budget.reset(token)


# Exponent vectors are packed into one int, FIELD bits per variable with
# the first variable most significant, so monomial multiplication is integer
# addition and integer order is lex order.  The top bit of every field is a
# guard: it must stay clear, and it makes the divisibility test one
# subtraction.
FIELD = 16
_FMASK = (1 << (FIELD - 1)) - 1
MAX_EXPONENT = _FMASK


class ExponentOverflow(OverflowError):
    pass


def _shifts(n):
    return [FIELD * (n - 1 - i) for i in range(n)]


def _guard(n):
    g = 0
    for sh in _shifts(n):
        g |= 1 << (sh + FIELD - 1)
    return g


def _encode(exp, n):
    k = 0
    for e, sh in zip(exp, _shifts(n)):
        if not 0 <= e <= MAX_EXPONENT:
            raise ExponentOverflow(f"exponent {e} outside 0..{MAX_EXPONENT}")
        k |= e << sh
    return k


def _decode(k, n):
    return tuple((k >> sh) & _FMASK for sh in _shifts(n))


def _coeff(c):
    """Integral coefficients are kept as ints (much faster to multiply)."""
    if isinstance(c, Fraction) and c.denominator == 1:
        return c.numerator
    return c


class MultiPoly:
    """Sparse polynomial with exact rational coefficients.

    ``terms`` maps exponent tuples (one entry per variable in ``variables``)
    to nonzero coefficients; internally the exponents are packed ints.
    """

    __slots__ = ("variables", "_t", "_hash", "_maxexp")

    def __init__(self, variables, terms=None):
        self.variables = tuple(variables)
        n = len(self.variables)
        self._t = {}
        for exp, c in (terms or {}).items():
            if len(exp) != n:
                raise ValueError("exponent vector length does not match variable table")
            c = _coeff(Fraction(c))
            if c:
                self._t[_encode(exp, n)] = c

    @classmethod
    def _raw(cls, variables, packed):
        p = cls.__new__(cls)
        p.variables = variables
        p._t = packed
        return p

    @classmethod
    def constant(cls, variables, c):
        variables = tuple(variables)
        c = _coeff(Fraction(c))
        return cls._raw(variables, {0: c} if c else {})

    @classmethod
    def variable(cls, variables, name):
        variables = tuple(variables)
        if variables.count(name) != 1:
            raise KeyError(name)
        return cls._raw(variables, {1 << _shifts(len(variables))[variables.index(name)]: 1})

    @property
    def terms(self):
        n = len(self.variables)
        return {_decode(k, n): Fraction(c) for k, c in self._t.items()}

    def _coerce(self, other):
        if isinstance(other, MultiPoly):
            if other.variables != self.variables:
                raise ValueError("polynomials over different variable tables")
            return other
        if isinstance(other, Rational):
            return MultiPoly.constant(self.variables, other)
        return NotImplemented

    def is_zero(self):
        return not self._t

    def is_constant(self):
        return not self._t or (len(self._t) == 1 and 0 in self._t)

    def constant_value(self):
        return Fraction(self._t.get(0, 0))

    def __len__(self):
        return len(self._t)

    def degree(self):
        return max((sum(e) for e in self.terms), default=0)

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        terms = dict(self._t)
        for e, c in other._t.items():
            s = terms.get(e, 0) + c
            if s:
                terms[e] = s
            else:
                terms.pop(e, None)
        return MultiPoly._raw(self.variables, terms)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly._raw(self.variables, {e: -c for e, c in self._t.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b = self._t, other._t
        if len(a) < len(b):
            a, b = b, a
        terms = {}
        get = terms.get
        for e1, c1 in b.items():
            for e2, c2 in a.items():
                e = e1 + e2
                terms[e] = get(e, 0) + c1 * c2
        terms = {e: c for e, c in terms.items() if c}
        if terms and (self._overflow_risk() or other._overflow_risk()):
            guard = _guard(len(self.variables))
            if any(e & guard for e in terms):
                raise ExponentOverflow("an exponent exceeds the packed field width")
        limit = _term_budget.get()
        if limit is not None and len(terms) > limit:
            raise BudgetExceeded(f"polynomial product with {len(terms)} terms exceeds budget {limit}")
        return MultiPoly._raw(self.variables, terms)

    __rmul__ = __mul__

    def _overflow_risk(self):
        return max(self.max_exponents(), default=0) > MAX_EXPONENT // 2

    def max_exponents(self):
        """Largest exponent of each variable (cached)."""
        try:
            return self._maxexp
        except AttributeError:
            n = len(self.variables)
            if not self._t:
                self._maxexp = (0,) * n
            else:
                self._maxexp = tuple(
                    max((k >> sh) & _FMASK for k in self._t) for sh in _shifts(n))
            return self._maxexp

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative exponent")
        out = MultiPoly.constant(self.variables, 1)
        base = self
        while n:
            if n & 1:
                out = out * base
            n >>= 1
            if n:
                base = base * base
        return out

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self._t == other._t

    def __hash__(self):
        # polynomials are not mutated after construction
        try:
            return self._hash
        except AttributeError:
            self._hash = hash((self.variables, frozenset(self._t.items())))
            return self._hash

    def monomial_content(self):
        """Exponentwise minimum over all terms."""
        n = len(self.variables)
        if not self._t:
            return (0,) * n
        return tuple(min((k >> sh) & _FMASK for k in self._t) for sh in _shifts(n))

    def shift(self, exp, sign=-1):
        """Multiply (``sign`` = 1) or divide (``sign`` = -1) every term by the
        monomial ``exp``."""
        d = _encode(exp, len(self.variables))
        if sign < 0:
            if any(min((k >> sh) & _FMASK for k in self._t) < e
                   for e, sh in zip(exp, _shifts(len(exp)))):
                raise ValueError("monomial does not divide every term")
            return MultiPoly._raw(self.variables, {k - d: c for k, c in self._t.items()})
        out = {k + d: c for k, c in self._t.items()}
        if any(k & _guard(len(exp)) for k in out):
            raise ExponentOverflow("an exponent exceeds the packed field width")
        return MultiPoly._raw(self.variables, out)

    def scale(self, c):
        c = Fraction(c)
        if not c:
            return MultiPoly._raw(self.variables, {})
        c = _coeff(c)
        return MultiPoly._raw(self.variables, {e: _coeff(v * c) for e, v in self._t.items()})

    def sorted_terms(self):
        """Terms in graded lexicographic order, largest first."""
        return sorted(self.terms.items(), key=lambda t: (sum(t[0]), t[0]), reverse=True)

    def leading_coefficient(self):
        return self.sorted_terms()[0][1] if self._t else Fraction(0)

    def evaluate(self, point):
        """Evaluate at ``point`` (mapping name -> value, or a sequence aligned
        with the variable table)."""
        if isinstance(point, dict):
            point = [point[v] for v in self.variables]
        n = len(self.variables)
        total = Fraction(0)
        for k, c in self._t.items():
            t = Fraction(c)
            for x, e in zip(point, _decode(k, n)):
                if e:
                    t *= x ** e
            total += t
        return total

    def __str__(self):
        if not self._t:
            return "0"
        parts = []
        for e, c in self.sorted_terms():
            mono = "*".join(v if k == 1 else f"{v}^{k}" for v, k in zip(self.variables, e) if k)
            coeff = str(c) if c.denominator == 1 else f"({c})"
            if mono and c in (1, -1):
                parts.append(mono if c == 1 else "-" + mono)
            else:
                parts.append(f"{coeff}*{mono}" if mono else coeff)
        return " + ".join(parts).replace("+ -", "- ")

    def __repr__(self):
        return f"MultiPoly({self})"


class RatFunc:
    """Quotient of two polynomials on a shared variable table.

    The denominator is kept as a product of monic factors (a dict factor ->
    multiplicity); the numerator is expanded.  Factors are whatever
    polynomials have been divided by, split against the factors already
    known.  The only cancellation performed is exact trial division of the
    numerator by those factors, so results are not necessarily in lowest
    terms.
    """

    __slots__ = ("num", "fac", "_den")

    def __init__(self, num: MultiPoly, den: MultiPoly | None = None):
        if den is None:
            self.num, self.fac, self._den = num, {}, None
            return
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        if num.variables != den.variables:
            raise ValueError("numerator and denominator over different variable tables")
        c, fac = _split(den, ())
        self.num, self.fac = _cancel(num.scale(Fraction(1) / c), fac)
        self._den = None

    @classmethod
    def _make(cls, num, fac):
        r = cls.__new__(cls)
        r.num, r.fac, r._den = num, fac, None
        return r

    @classmethod
    def variable(cls, variables, name):
        return cls(MultiPoly.variable(variables, name))

    @property
    def variables(self):
        return self.num.variables

    @property
    def den(self) -> MultiPoly:
        """Expanded denominator (monic under graded lex order)."""
        if self._den is None:
            self._den = _product(self.fac, self.variables)
        return self._den

    def _coerce(self, other):
        if isinstance(other, RatFunc):
            if other.variables != self.variables:
                raise ValueError("rational functions over different variable tables")
            return other
        if isinstance(other, MultiPoly):
            return RatFunc(other)
        if isinstance(other, Rational):
            return RatFunc(MultiPoly.constant(self.variables, other))
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if self.num.is_zero():
            return other
        if other.num.is_zero():
            return self
        lcm = dict(self.fac)
        for f, k in other.fac.items():
            if lcm.get(f, 0) < k:
                lcm[f] = k
        num = (self.num * _cofactor(lcm, self.fac, self.variables)
               + other.num * _cofactor(lcm, other.fac, self.variables))
        return RatFunc._make(*_cancel(num, lcm))

    __radd__ = __add__

    def __neg__(self):
        return RatFunc._make(-self.num, self.fac)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, fa = _cancel(self.num, other.fac)
        b, fb = _cancel(other.num, self.fac)
        fac = dict(fa)
        for f, k in fb.items():
            fac[f] = fac.get(f, 0) + k
        return RatFunc._make(a * b, fac)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if other.num.is_zero():
            raise ZeroDivisionError("division by the zero rational function")
        # (a / A) / (b / B) = a B / (A b): cancel shared factors of A and B first
        down = dict(self.fac)
        up = {}
        for f, k in other.fac.items():
            shared = min(k, down.get(f, 0))
            if shared:
                down[f] -= shared
                if not down[f]:
                    del down[f]
            if k - shared:
                up[f] = k - shared
        c, new = _split(other.num, list(self.fac) + list(other.fac))
        num, rest = _cancel(self.num.scale(Fraction(1) / c), new)
        for f, k in rest.items():
            down[f] = down.get(f, 0) + k
        num = num * _product(up, self.variables) if up else num
        return RatFunc._make(*_cancel(num, down)) if up else RatFunc._make(num, down)

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def __pow__(self, n: int):
        if n < 0:
            return RatFunc(MultiPoly.constant(self.variables, 1)) / self ** (-n)
        return RatFunc._make(self.num ** n, {f: k * n for f, k in self.fac.items()})

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return ratfunc_equal(self, other)

    __hash__ = None

    def evaluate(self, point):
        d = Fraction(1)
        for f, k in self.fac.items():
            d *= f.evaluate(point) ** k
        if d == 0:
            raise ZeroDivisionError("denominator vanishes at this point")
        return self.num.evaluate(point) / d

    def size(self):
        return len(self.num) + sum(len(f) for f in self.fac)

    def __str__(self):
        if not self.fac:
            return str(self.num)
        return f"({self.num}) / ({self.den})"

    def __repr__(self):
        return f"RatFunc({self})"


def _product(fac, variables):
    out = MultiPoly.constant(variables, 1)
    for f, k in fac.items():
        out = out * f ** k
    return out


def _cofactor(lcm, fac, variables):
    return _product({f: k - fac.get(f, 0) for f, k in lcm.items() if k > fac.get(f, 0)}, variables)


def _split(p, known):
    """Write ``p = c * prod(factors)`` with monic factors: single variables
    for the monomial content, then as many of the ``known`` factors as
    divide, then whatever is left."""
    variables = p.variables
    lc = p.leading_coefficient()
    p = p.scale(Fraction(1) / lc)
    fac = {}
    content = p.monomial_content()
    if any(content):
        p = p.shift(content)
        for name, k in zip(variables, content):
            if k:
                fac[MultiPoly.variable(variables, name)] = k
    for f in known:
        if p.is_constant():
            break
        if len(f) == 1:
            continue
        while True:
            q = divide_exact(p, f)
            if q is None:
                break
            fac[f] = fac.get(f, 0) + 1
            p = q
    if not p.is_constant():
        fac[p] = fac.get(p, 0) + 1
    return lc, fac


def _cancel(num, fac):
    """Trial-divide ``num`` by the factors in ``fac``."""
    if not fac or num.is_zero():
        return num, (fac if not num.is_zero() else {})
    fac = dict(fac)
    for f in list(fac):
        while fac[f]:
            q = divide_exact(num, f)
            if q is None:
                break
            num = q
            fac[f] -= 1
        if not fac[f]:
            del fac[f]
    return num, fac


def divide_exact(g: MultiPoly, f: MultiPoly):
    """Quotient ``g / f`` if ``f`` divides ``g`` exactly, else None."""
    if f.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    if g.is_zero():
        return g
    if f.is_constant():
        return g.scale(Fraction(1) / f.constant_value())
    if any(a > b for a, b in zip(f.max_exponents(), g.max_exponents())):
        return None
    guard = _guard(len(g.variables))
    ft = f._t
    lf = max(ft)
    cf = Fraction(ft[lf])
    ftail = [(e, v) for e, v in ft.items() if e != lf]
    r = dict(g._t)
    heap = [-e for e in r]
    heapq.heapify(heap)
    q = {}
    while heap:
        lt = -heapq.heappop(heap)
        c = r.get(lt)
        if c is None:
            continue
        if ((lt | guard) - lf) & guard != guard:
            return None
        shift = lt - lf
        c = _coeff(c / cf)
        q[shift] = c
        del r[lt]
        for e, v in ftail:
            ee = e + shift
            nv = r.get(ee, 0) - c * v
            if nv:
                if ee not in r:
                    heapq.heappush(heap, -ee)
                r[ee] = nv
            else:
                r.pop(ee, None)
    return MultiPoly._raw(g.variables, q)


def ratfunc_equal(a: RatFunc, b: RatFunc) -> bool:
    """True iff ``a.num * b.den - b.num * a.den`` is the zero polynomial.

    Before cross-multiplying, the two factored denominators are rewritten
    over a common refinement (a factor of one side that divides a factor of
    the other splits it) and each numerator is trial-divided by its own
    refined factors.  Only exact divisions are used and the ring has no zero
    divisors, so the test is unchanged; the products just get smaller.
    """
    if a.variables != b.variables:
        raise ValueError("rational functions over different variable tables")
    if a.fac == b.fac:
        return a.num == b.num
    basis = _refine(list(a.fac) + list(b.fac))
    an, fa = _cancel(a.num, _express(a.fac, basis))
    bn, fb = _cancel(b.num, _express(b.fac, basis))
    if fa == fb:
        return an == bn
    lcm = dict(fa)
    for f, k in fb.items():
        if lcm.get(f, 0) < k:
            lcm[f] = k
    left = an * _cofactor(lcm, fa, a.variables)
    right = bn * _cofactor(lcm, fb, a.variables)
    return (left - right).is_zero()


def _refine(factors):
    """Split factors against each other until no basis element divides
    another."""
    basis = []
    todo = sorted(set(factors), key=len)
    while todo:
        f = todo.pop(0)
        if f.is_constant() or f in basis:
            continue
        for g in basis:
            q = divide_exact(f, g)
            if q is not None:
                todo.insert(0, q)
                break
        else:
            for g in list(basis):
                q = divide_exact(g, f)
                if q is not None:
                    basis.remove(g)
                    todo.insert(0, q)
            basis.append(f)
            basis.sort(key=len)
    return basis


def _express(fac, basis):
    """Rewrite a factor dict over ``basis`` (every factor is a product of
    basis elements by construction)."""
    out = {}
    for f, k in fac.items():
        rest = f
        for g in basis:
            while not rest.is_constant():
                q = divide_exact(rest, g)
                if q is None:
                    break
                out[g] = out.get(g, 0) + k
                rest = q
            if rest.is_constant():
                break
        if not rest.is_constant():
            out[rest] = out.get(rest, 0) + k
    return out


def symbolic_state(domains, names=None, extra=()):
    """Generic point: one fresh variable per slot (two for pair slots).

    ``names`` may repeat a name to tie slots together, e.g. the six names
    ``x1 x2 x2 x3 x4 x4`` give a generic element of the folded subset.
    ``extra`` adds further variables (such as a symbolic parameter) to the
    shared table; they are returned after the state.
    """
    from .scalars import Domain

    domains = list(domains)
    if names is None:
        names = [f"x{i + 1}" for i in range(len(domains))]
    if len(names) != len(domains):
        raise ValueError("need one name per slot")
    table = []
    for name, dom in zip(names, domains):
        if not dom.birational:
            raise ValueError(f"symbolic slots must be rational, got {dom.value}")
        wanted = [name, "y" + name[1:] if name.startswith("x") else name + "_y"] \
            if dom is Domain.POS_RATIONAL_PAIR else [name]
        for w in wanted:
            if w not in table:
                table.append(w)
    table.extend(extra)
    var = {v: RatFunc.variable(table, v) for v in table}
    state = []
    for name, dom in zip(names, domains):
        if dom is Domain.POS_RATIONAL_PAIR:
            state.append((var[name], var["y" + name[1:] if name.startswith("x") else name + "_y"]))
        else:
            state.append(var[name])
    return tuple(state), tuple(var[v] for v in extra)
