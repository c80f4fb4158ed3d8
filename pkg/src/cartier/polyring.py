"""Sparse multivariate polynomials over a prime field F_p.

A polynomial is stored as a dict mapping exponent tuples to nonzero
coefficients in range(p).  Terms are ordered by graded reverse lex unless the
ring was built with an elimination block.
"""

from __future__ import annotations

import re
from functools import total_ordering

from .errors import ExponentOverflow, PolySyntaxError

EXP_LIMIT = 2**31 - 1


@total_ordering
class _NegInfinity:
    """Gauge of the zero polynomial.  Smaller than every integer."""

    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __lt__(self, other):
        return other is not self

    def __eq__(self, other):
        return other is self

    def __hash__(self):
        return hash("-inf-gauge")

    def __repr__(self):
        return "-inf"

    def __add__(self, other):
        return self

    __radd__ = __add__


NEG_INF = _NegInfinity()


def is_prime(p):
    if not isinstance(p, int) or p < 2:
        return False
    i = 2
    while i * i <= p:
        if p % i == 0:
            return False
        i += 1
    return True


def grevlex_key(exp):
    return (sum(exp), tuple(-a for a in reversed(exp)))


def _check_exp(exp):
    for a in exp:
        if a > EXP_LIMIT:
            raise ExponentOverflow(f"exponent {a} exceeds {EXP_LIMIT}")
    return exp


class PolyRing:
    """The ring F_p[x_1..x_n].

    ``elim`` > 0 selects a block order where the first ``elim`` variables are
    eliminated: total degree in them is compared first, grevlex breaks ties.
    """

    def __init__(self, p, names, elim=0):
        if not is_prime(p):
            raise ValueError(f"p={p} is not prime")
        names = tuple(names)
        if len(set(names)) != len(names) or not names:
            raise ValueError("variable names must be distinct and nonempty")
        for nm in names:
            if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", nm):
                raise ValueError(f"bad variable name {nm!r}")
        self.p = p
        self.names = names
        self.n = len(names)
        self.elim = elim
        if elim:
            self.key = lambda u: (sum(u[:elim]), grevlex_key(u))
        else:
            self.key = grevlex_key
        self._zero_exp = (0,) * self.n

    def __eq__(self, other):
        return (isinstance(other, PolyRing) and self.p == other.p
                and self.names == other.names and self.elim == other.elim)

    def __hash__(self):
        return hash((self.p, self.names, self.elim))

    def __repr__(self):
        return f"PolyRing(F_{self.p}[{', '.join(self.names)}])"

    def poly(self, terms):
        p = self.p
        return Poly(self, {u: c % p for u, c in terms.items() if c % p})

    def zero(self):
        return Poly(self, {})

    def one(self):
        return Poly(self, {self._zero_exp: 1})

    def const(self, c):
        return self.poly({self._zero_exp: c})

    def var(self, i):
        if isinstance(i, str):
            i = self.names.index(i)
        u = [0] * self.n
        u[i] = 1
        return Poly(self, {tuple(u): 1})

    def gens(self):
        return [self.var(i) for i in range(self.n)]

    def monomial(self, exp, c=1):
        exp = tuple(exp)
        if len(exp) != self.n:
            raise ValueError("exponent length mismatch")
        return self.poly({_check_exp(exp): c})

    def parse(self, text):
        return _Parser(self, text).parse()

    def with_order(self, elim):
        return PolyRing(self.p, self.names, elim)

    def extend(self, new_names, elim=0):
        """Ring with ``new_names`` prepended (for elimination)."""
        return PolyRing(self.p, tuple(new_names) + self.names, elim)


class Poly:
    __slots__ = ("ring", "terms", "_lead")

    def __init__(self, ring, terms):
        self.ring = ring
        self.terms = terms
        self._lead = None

    # basic predicates
    def is_zero(self):
        return not self.terms

    def is_monomial(self):
        return len(self.terms) == 1

    def is_constant(self):
        return not self.terms or (len(self.terms) == 1
                                  and self.ring._zero_exp in self.terms)

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, int):
            other = self.ring.const(other)
        return isinstance(other, Poly) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    # ordering data
    def lead(self):
        if self._lead is None:
            if not self.terms:
                raise ValueError("zero polynomial has no leading term")
            self._lead = max(self.terms, key=self.ring.key)
        return self._lead

    def lead_coeff(self):
        return self.terms[self.lead()]

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda t: self.ring.key(t[0]),
                      reverse=True)

    def gauge(self):
        """max over terms of the largest exponent; NEG_INF for zero."""
        if not self.terms:
            return NEG_INF
        return max(max(u) if u else 0 for u in self.terms)

    def degree(self):
        if not self.terms:
            return NEG_INF
        return max(sum(u) for u in self.terms)

    # arithmetic
    def _coerce(self, other):
        if isinstance(other, Poly):
            if other.ring != self.ring:
                raise ValueError("polynomials from different rings")
            return other
        if isinstance(other, int):
            return self.ring.const(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        p = self.ring.p
        out = dict(self.terms)
        for u, c in other.terms.items():
            v = (out.get(u, 0) + c) % p
            if v:
                out[u] = v
            else:
                out.pop(u, None)
        return Poly(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        p = self.ring.p
        return Poly(self.ring, {u: p - c for u, c in self.terms.items()})

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
        p = self.ring.p
        a, b = self.terms, other.terms
        if len(a) < len(b):
            a, b = b, a
        out = {}
        for u, c in b.items():
            for v, d in a.items():
                w = tuple(x + y for x, y in zip(u, v))
                out[w] = (out.get(w, 0) + c * d) % p
        res = {w: c for w, c in out.items() if c}
        if res:
            _check_exp(max(res, key=max) if self.ring.n else ())
        return Poly(self.ring, res)

    __rmul__ = __mul__

    def scale(self, c):
        c %= self.ring.p
        if not c:
            return self.ring.zero()
        p = self.ring.p
        return Poly(self.ring, {u: v * c % p for u, v in self.terms.items()})

    def mul_monomial(self, exp, c=1):
        p = self.ring.p
        out = {}
        for u, v in self.terms.items():
            w = tuple(x + y for x, y in zip(u, exp))
            out[w] = v * c % p
        if out:
            _check_exp(max(out, key=max))
        return Poly(self.ring, {w: v for w, v in out.items() if v})

    def __pow__(self, k):
        if not isinstance(k, int) or k < 0:
            raise ValueError("exponent must be a nonnegative int")
        result = self.ring.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def monic(self):
        c = self.lead_coeff()
        return self.scale(pow(c, -1, self.ring.p))

    def frobenius_power(self, e):
        """f^(p^e): in characteristic p, exponents scale and coefficients stay."""
        q = self.ring.p**e
        out = {}
        for u, c in self.terms.items():
            out[_check_exp(tuple(a * q for a in u))] = c
        return Poly(self.ring, out)

    def __repr__(self):
        return f"Poly({self})"

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        names = self.ring.names
        for u, c in self.sorted_terms():
            mon = "*".join(
                nm if a == 1 else f"{nm}^{a}"
                for nm, a in zip(names, u) if a)
            if not mon:
                parts.append(str(c))
            elif c == 1:
                parts.append(mon)
            else:
                parts.append(f"{c}*{mon}")
        return " + ".join(parts)


def frob_decompose(f, e):
    """Write f = sum_j r_j^(p^e) x^j with 0 <= j_i < p^e.

    Returns a dict j -> r_j (only nonzero components).
    """
    q = f.ring.p**e
    comps = {}
    for u, c in f.terms.items():
        j = tuple(a % q for a in u)
        r = tuple(a // q for a in u)
        comps.setdefault(j, {})[r] = c
    return {j: Poly(f.ring, t) for j, t in comps.items()}


def trace_component(f, e):
    """T_e(f): the component r_j of f at j = (q-1, ..., q-1)."""
    q = f.ring.p**e
    out = {}
    for u, c in f.terms.items():
        if all(a % q == q - 1 for a in u):
            out[tuple(a // q for a in u)] = c
    return Poly(f.ring, out)


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(\*\*|[-+*^()]))")


class _Parser:
    """Recursive descent parser for sums of products of powers."""

    def __init__(self, ring, text):
        self.ring = ring
        self.text = text
        self.toks = []
        pos = 0
        while pos < len(text):
            if text[pos:].strip() == "":
                break
            m = _TOKEN.match(text, pos)
            if not m or m.end() == pos:
                raise PolySyntaxError(f"unexpected character {text[pos]!r}", pos)
            start = m.start(m.lastindex)
            kind = ("num", "name", "op")[m.lastindex - 1]
            val = m.group(m.lastindex)
            if val == "**":
                val = "^"
            self.toks.append((kind, val, start))
            pos = m.end()
        self.i = 0

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else (None, None, len(self.text))

    def take(self):
        tok = self.peek()
        self.i += 1
        return tok

    def parse(self):
        if not self.toks:
            raise PolySyntaxError("empty polynomial", 0)
        f = self.expr()
        kind, val, pos = self.peek()
        if kind is not None:
            raise PolySyntaxError(f"unexpected token {val!r}", pos)
        return f

    def expr(self):
        sign = 1
        kind, val, _ = self.peek()
        if val in ("+", "-"):
            self.take()
            sign = -1 if val == "-" else 1
        f = self.term()
        if sign < 0:
            f = -f
        while True:
            kind, val, _ = self.peek()
            if val == "+":
                self.take()
                f = f + self.term()
            elif val == "-":
                self.take()
                f = f - self.term()
            else:
                return f

    def term(self):
        f = self.power()
        while True:
            kind, val, _ = self.peek()
            if val == "*":
                self.take()
                f = f * self.power()
            elif kind in ("num", "name") or val == "(":
                f = f * self.power()  # implicit multiplication
            else:
                return f

    def power(self):
        f = self.atom()
        kind, val, _ = self.peek()
        if val == "^":
            self.take()
            kind, val, pos = self.take()
            if kind != "num":
                raise PolySyntaxError("exponent must be a nonnegative integer", pos)
            k = int(val)
            if k > EXP_LIMIT:
                raise ExponentOverflow(f"exponent {k} exceeds {EXP_LIMIT}")
            f = f**k
        return f

    def atom(self):
        kind, val, pos = self.take()
        if kind == "num":
            return self.ring.const(int(val))
        if kind == "name":
            if val not in self.ring.names:
                raise PolySyntaxError(f"unknown variable {val!r}", pos)
            return self.ring.var(val)
        if val == "(":
            f = self.expr()
            kind, val2, pos2 = self.take()
            if val2 != ")":
                raise PolySyntaxError("expected ')'", pos2)
            return f
        if kind is None:
            raise PolySyntaxError("unexpected end of input", pos)
        raise PolySyntaxError(f"unexpected token {val!r}", pos)
