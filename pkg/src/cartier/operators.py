"""p^-e linear operators m -> T_e(f*m) and the algebras they generate."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import NoDescent, WordLimitExceeded
from .ideals import Ideal, QuotientContext, mono_root, mono_root_product
from .polyring import Poly, frob_decompose, trace_component

DEFAULT_WORD_LIMIT = 10000


def op_descends(e, f, I):
    """True iff f*I is inside I^[p^e], so T_e(f*-) induces a map on S/I."""
    if I.is_zero():
        return True
    br = I.bracket(e)
    return all(br.contains(f * g) for g in I.gb)


@dataclass(frozen=True)
class CartierOp:
    e: int
    f: Poly
    ctx: QuotientContext

    def __post_init__(self):
        if self.e < 1:
            raise ValueError("operator degree must be >= 1")
        if self.f.ring != self.ctx.ring:
            raise ValueError("operator polynomial lives in another ring")
        if not op_descends(self.e, self.f, self.ctx.I):
            raise NoDescent(
                f"T_{self.e}({self.f} * -) does not preserve the quotient ideal")

    @property
    def q(self):
        return self.ctx.ring.p**self.e

    def __hash__(self):
        return hash((self.e, self.f))

    def __eq__(self, other):
        return (isinstance(other, CartierOp) and self.e == other.e
                and self.f == other.f and self.ctx is other.ctx)

    def apply_poly(self, m):
        return trace_component(self.f * m, self.e)

    def apply_ideal(self, N):
        """phi(N): generated by every Frobenius component of f*n over generators n.

        T_e(x^b f n) picks the component of f n at j = q-1-b, so letting b run
        over exponents < q recovers all components.
        """
        ring = self.ctx.ring
        if N.is_zero() or N <= self.ctx.I:
            return self.ctx.I
        q = self.q
        if N.is_monomial and self.f.is_monomial():
            (w,) = self.f.terms
            img = Ideal(ring, _mono=mono_root(N.monomials(), w, q))
        else:
            comps = []
            for g in N.gb:
                if self.ctx.I.contains(g):
                    continue  # lands in I by descent
                comps.extend(frob_decompose(self.f * g, self.e).values())
            img = Ideal(ring, comps)
        return self.ctx.lift(img)

    def apply_twisted(self, A, N):
        """phi(A * N) without forming the product when everything is monomial."""
        if (A.is_monomial and N.is_monomial and self.f.is_monomial()
                and self.ctx.is_polynomial_ring):
            (w,) = self.f.terms
            A_arr = A.mono_array() if len(A.monomials()) >= 64 else None
            return Ideal(self.ctx.ring, _mono=mono_root_product(
                A.monomials(), N.monomials(), w, self.q, A_arr))
        return self.apply_ideal(A * N)

    def compose(self, other):
        """self o other: apply other first.  (e,f) o (e',f') = (e+e', f^(p^e') f')."""
        return CartierOp(self.e + other.e,
                         self.f.frobenius_power(other.e) * other.f, self.ctx)

    def __str__(self):
        return f"(e={self.e}, f={self.f})"


def op_compose(phi, psi):
    return phi.compose(psi)


def twist_exponent(t, p, e):
    """ceil(t*(p^e - 1)) in exact arithmetic."""
    t = Fraction(t)
    return math.ceil(t * (p**e - 1))


def twist_power(a, t, e):
    if a is None:
        return None
    n = twist_exponent(t, a.ring.p, e)
    return a.power(n)


@dataclass(frozen=True)
class GaugeBound:
    K: int
    B: int


class CartierAlgebra:
    """Algebra generated by finitely many CartierOps, optionally twisted by a^t.

    The twist multiplies the degree-e piece by a^ceil(t(p^e-1)).
    """

    def __init__(self, ctx, generators, twist=None, word_limit=DEFAULT_WORD_LIMIT,
                 _shared=None):
        generators = list(generators)
        if not generators:
            raise ValueError("need at least one generator")
        for g in generators:
            if g.ctx is not ctx:
                raise ValueError("generators must share the ring context")
        self.ctx = ctx
        self.generators = generators
        self.word_limit = word_limit
        if twist is not None:
            a, t = twist
            t = Fraction(t)
            if t < 0:
                raise ValueError("twist exponent must be >= 0")
            if a.ring != ctx.ring:
                raise ValueError("twist ideal lives in another ring")
            twist = (a, t)
        self.twist = twist
        # word lists and twisted images are shared by all twists of one algebra
        self._shared = _shared if _shared is not None else {"words": {}, "images": {}}
        self._words = self._shared["words"]

    def __repr__(self):
        gens = ", ".join(str(g) for g in self.generators)
        tw = ""
        if self.twist is not None:
            tw = f", twist={self.twist[0]!r}^{self.twist[1]}"
        return f"CartierAlgebra({self.ctx!r}, [{gens}]{tw})"

    @classmethod
    def full(cls, ctx, **kw):
        """The algebra generated by T_1 itself, i.e. all of C on a polynomial ring."""
        return cls(ctx, [CartierOp(1, ctx.ring.one(), ctx)], **kw)

    @classmethod
    def degree_one(cls, ctx, **kw):
        """Generated by all degree-1 maps of S/I, i.e. T_1(f *) for f in (I^[p] : I).

        This is all of C_R when C_R is generated in degree 1, e.g. for a
        hypersurface; on a polynomial ring it is the full algebra."""
        if ctx.is_polynomial_ring:
            return cls.full(ctx, **kw)
        Ip = ctx.I.bracket(1)
        gens = [f for f in Ip.colon(ctx.I).gb if not Ip.contains(f)]
        return cls(ctx, [CartierOp(1, f, ctx) for f in gens], **kw)

    @property
    def p(self):
        return self.ctx.ring.p

    def with_twist(self, a, t):
        return CartierAlgebra(self.ctx, self.generators, (a, t), self.word_limit,
                              self._shared)

    def untwisted(self):
        return CartierAlgebra(self.ctx, self.generators, None, self.word_limit,
                              self._shared)

    def twisted_image(self, e, i, N):
        """w_i(a^n N) for the i-th word of degree e, n = ceil(t(p^e - 1)); memoized."""
        a, t = self.twist
        n = twist_exponent(t, self.p, e)
        key = (a, n, e, i, N)
        cache = self._shared["images"]
        hit = cache.get(key)
        if hit is None:
            if len(cache) > 200000:
                cache.clear()
            hit = self.words(e)[i].apply_twisted(a.power(n), N)
            cache[key] = hit
        return hit

    @property
    def is_twisted(self):
        """A twist by the unit ideal or by t = 0 changes nothing."""
        if self.twist is None:
            return False
        a, t = self.twist
        return t != 0 and not a.is_unit()

    def words(self, e):
        """All compositions of generators of total degree exactly e (deduplicated)."""
        if e in self._words:
            return self._words[e]
        if e <= 0:
            return []
        out = []
        seen = set()
        for g in self.generators:
            if g.e == e:
                cands = [g]
            elif g.e < e:
                cands = [g.compose(w) for w in self.words(e - g.e)]
            else:
                cands = []
            for w in cands:
                key = (w.e, w.f)
                if key not in seen:
                    seen.add(key)
                    out.append(w)
                    if len(out) > self.word_limit:
                        raise WordLimitExceeded(
                            f"more than {self.word_limit} words of degree {e}")
        self._words[e] = out
        return out

    def algebra_words(self, e_cap):
        return {e: self.words(e) for e in range(1, e_cap + 1)}

    def twist_power(self, e):
        if not self.is_twisted:
            return None
        a, t = self.twist
        return twist_power(a, t, e)

    def gauge_bound(self):
        p = self.p
        K = max(max(g.f.gauge(), 0) for g in self.generators)
        B = K // (p - 1) + 1
        if self.twist is not None:
            a, t = self.twist
            gens = a.gb
            if gens:
                d = max(g.gauge() for g in gens)
                B += math.ceil(t * d)
        return GaugeBound(K, B)
