"""Ideals of F_p[x] via reduced Groebner bases, plus quotient contexts.

An ideal of a quotient R = S/I is stored as its preimage in S (an ideal
containing I).  Monomial ideals skip Buchberger entirely and keep their
minimal generators as exponent tuples.
"""

from __future__ import annotations

import heapq
import itertools

import numpy as np

from .errors import CartierError
from .polyring import NEG_INF, Poly, PolyRing


# monomial helpers -----------------------------------------------------------

def divides(a, b):
    return all(x <= y for x, y in zip(a, b))


def lcm_exp(a, b):
    return tuple(max(x, y) for x, y in zip(a, b))


_NP_MIN = 256  # below this many candidates plain Python is faster


def _staircase(arr):
    """Minimal rows of an (m, 2) integer array, as a tuple of tuples."""
    if len(arr) == 0:
        return ()
    return tuple(map(tuple, _staircase_arr(arr).tolist()))


def _staircase_arr(arr):
    if arr.max(initial=0) >= _PACK_LIMIT:
        order = np.lexsort((arr[:, 1], arr[:, 0]))
        pts = arr[order]
        ys = pts[:, 1]
        keep = np.empty(len(ys), dtype=bool)
        keep[0] = True
        keep[1:] = ys[1:] < np.minimum.accumulate(ys)[:-1]
        return pts[keep]
    return _unpack(_staircase_keys(_pack(arr)))


# Two exponents packed into one int64 (x high, y low) sort in lex order, and
# adding packed keys adds exponents as long as both stay below 2^31.
_PACK_LIMIT = 1 << 31
_LOW = (1 << 32) - 1


def _pack(arr):
    return (arr[:, 0] << 32) | arr[:, 1]


def _unpack(keys):
    return np.stack((keys >> 32, keys & _LOW), axis=1)


def _staircase_keys(keys):
    """Minimal elements of packed exponent pairs, sorted by x."""
    keys = np.sort(keys, kind="stable")  # timsort: inputs are a few sorted runs
    ys = keys & _LOW
    keep = np.empty(len(ys), dtype=bool)
    keep[0] = True
    keep[1:] = ys[1:] < np.minimum.accumulate(ys)[:-1]
    return keys[keep]


def mono_product(A, B):
    """Minimal generators of (x^A)(x^B) for exponent-tuple collections A, B."""
    if not A or not B:
        return ()
    n = len(A[0])
    if n == 2 and len(A) * len(B) >= _NP_MIN:
        a = np.asarray(A, dtype=np.int64)
        b = np.asarray(B, dtype=np.int64)
        return _staircase((a[:, None, :] + b[None, :, :]).reshape(-1, 2))
    if n == 2:
        return minimalize([(u0 + v0, u1 + v1) for u0, u1 in A for v0, v1 in B])
    return minimalize(tuple(x + y for x, y in zip(u, v)) for u in A for v in B)


def mono_root_product(A, B, shift, q, A_arr=None):
    """Minimal generators of floor((u + v + shift) / q) over u in A, v in B."""
    if not A or not B:
        return ()
    if len(A[0]) == 2 and len(A) * len(B) >= _NP_MIN:
        a = A_arr if A_arr is not None else np.asarray(A, dtype=np.int64)
        b = np.asarray(B, dtype=np.int64) + np.asarray(shift, dtype=np.int64)
        return _staircase(((a[:, None, :] + b[None, :, :]) // q).reshape(-1, 2))
    return minimalize(tuple((x + y + z) // q for x, y, z in zip(u, v, shift))
                      for u in A for v in B)


def mono_root(A, shift, q):
    """Minimal generators of floor((u + shift) / q) over u in A."""
    if not A:
        return ()
    if len(A[0]) == 2 and len(A) >= _NP_MIN:
        a = np.asarray(A, dtype=np.int64)
        return _staircase((a + np.asarray(shift, dtype=np.int64)) // q)
    return minimalize(tuple((x + y) // q for x, y in zip(u, shift)) for u in A)


def minimalize(exps):
    """Minimal elements of a set of exponent tuples under divisibility."""
    exps = set(exps)
    if not exps:
        return ()
    n = len(next(iter(exps)))
    if n == 2:
        out = []
        best = None
        for a, b in sorted(exps):
            if best is None or b < best:
                out.append((a, b))
                best = b
        return tuple(out)
    kept = []
    for u in sorted(exps, key=sum):
        if not any(divides(v, u) for v in kept):
            kept.append(u)
    return tuple(kept)


def _heapkey_fn(ring):
    elim = ring.elim
    if elim:
        return lambda u: (-sum(u[:elim]), -sum(u)) + u[::-1]
    return lambda u: (-sum(u),) + u[::-1]


# reduction and Buchberger --------------------------------------------------

def normal_form(f, basis):
    """Full reduction of f modulo a list of monic polynomials."""
    if not f.terms or not basis:
        return f
    ring = f.ring
    p = ring.p
    hk = _heapkey_fn(ring)
    leads = [(g.lead(), g) for g in basis]
    work = dict(f.terms)
    heap = [(hk(u), u) for u in work]
    heapq.heapify(heap)
    rem = {}
    while heap:
        _, u = heapq.heappop(heap)
        c = work.pop(u, 0)
        if not c:
            continue
        for lu, g in leads:
            if divides(lu, u):
                shift = tuple(a - b for a, b in zip(u, lu))
                for v, d in g.terms.items():
                    if v == lu:
                        continue
                    w = tuple(a + b for a, b in zip(v, shift))
                    old = work.get(w)
                    nv = ((old or 0) - c * d) % p
                    if nv:
                        work[w] = nv
                        if old is None:
                            heapq.heappush(heap, (hk(w), w))
                    elif old is not None:
                        del work[w]
                break
        else:
            rem[u] = c
    return Poly(ring, rem)


def _spoly(f, g):
    lf, lg = f.lead(), g.lead()
    l = lcm_exp(lf, lg)
    a = f.mul_monomial(tuple(x - y for x, y in zip(l, lf)))
    b = g.mul_monomial(tuple(x - y for x, y in zip(l, lg)))
    return a - b


def _interreduce(basis):
    """Turn a Groebner basis into the reduced one, sorted by lead descending."""
    basis = [g.monic() for g in basis if g]
    leads = [g.lead() for g in basis]
    keep = []
    for i, g in enumerate(basis):
        li = leads[i]
        dominated = False
        for j, lj in enumerate(leads):
            if j != i and divides(lj, li) and (lj != li or j < i):
                dominated = True
                break
        if not dominated:
            keep.append(g)
    out = []
    for i, g in enumerate(keep):
        others = keep[:i] + keep[i + 1:]
        lt = g.lead()
        tail = Poly(g.ring, {u: c for u, c in g.terms.items() if u != lt})
        r = normal_form(tail, others)
        r.terms[lt] = 1
        out.append(Poly(g.ring, r.terms))
    key = basis[0].ring.key if basis else None
    out.sort(key=lambda g: key(g.lead()), reverse=True)
    return tuple(out)


def groebner(polys, max_steps=None):
    """Reduced Groebner basis (tuple of monic Poly) of the ideal generated by polys."""
    polys = [g.monic() for g in polys if g]
    if not polys:
        return ()
    ring = polys[0].ring
    key = ring.key
    for g in polys:
        if g.is_constant():
            return (ring.one(),)
    basis = []
    pairs = []  # heap of (lcm key, tie, i, j)
    tie = itertools.count()

    def add(h):
        h = h.monic()
        lh = h.lead()
        basis.append(h)
        k = len(basis) - 1
        for i in range(k):
            li = basis[i].lead()
            l = lcm_exp(li, lh)
            heapq.heappush(pairs, (_heapkey_fn(ring)(l), next(tie), i, k))

    polys.sort(key=lambda g: key(g.lead()))
    for g in polys:
        r = normal_form(g, basis)
        if r:
            if r.is_constant():
                return (ring.one(),)
            add(r)
    done = set()
    steps = 0
    while pairs:
        _, _, i, j = heapq.heappop(pairs)
        li, lj = basis[i].lead(), basis[j].lead()
        done.add((i, j))
        # coprime leads: s-polynomial reduces to zero
        if all(a == 0 or b == 0 for a, b in zip(li, lj)):
            continue
        l = lcm_exp(li, lj)
        # chain criterion
        skip = False
        for k in range(len(basis)):
            if k in (i, j):
                continue
            if divides(basis[k].lead(), l):
                a, b = min(i, k), max(i, k)
                c, d = min(j, k), max(j, k)
                if (a, b) in done and (c, d) in done:
                    skip = True
                    break
        if skip:
            continue
        steps += 1
        if max_steps is not None and steps > max_steps:
            from .errors import IterationCap
            raise IterationCap("Buchberger step cap reached")
        r = normal_form(_spoly(basis[i], basis[j]), basis)
        if r:
            if r.is_constant():
                return (ring.one(),)
            add(r)
    return _interreduce(basis)


def lift(target, gens):
    """Cofactors h with target = sum h_i gens_i, or None if target not in the ideal.

    Buchberger with tracked representations; only meant for small inputs.
    """
    ring = target.ring
    p = ring.p
    m = len(gens)
    zero = ring.zero()
    basis = []  # (poly, cofactors)
    for i, g in enumerate(gens):
        if g:
            vec = [zero] * m
            vec[i] = ring.one()
            basis.append((g, vec))

    def reduce_tracked(f, vec):
        vec = list(vec)
        rem = ring.zero()
        while f:
            lt = f.lead()
            c = f.terms[lt]
            for g, gv in basis:
                lg = g.lead()
                if divides(lg, lt):
                    coef = c * pow(g.lead_coeff(), -1, p) % p
                    shift = tuple(a - b for a, b in zip(lt, lg))
                    f = f - g.mul_monomial(shift, coef)
                    mono = ring.monomial(shift, coef)
                    vec = [v + mono * w for v, w in zip(vec, gv)]
                    break
            else:
                rem = rem + ring.monomial(lt, c)
                f = f - ring.monomial(lt, c)
        return rem, vec

    # vec tracks how much of the basis was subtracted; rem = f - sum vec_i g_i
    def spair(a, b):
        (f, fv), (g, gv) = a, b
        lf, lg = f.lead(), g.lead()
        l = lcm_exp(lf, lg)
        cf = pow(f.lead_coeff(), -1, p)
        cg = pow(g.lead_coeff(), -1, p)
        sf = tuple(x - y for x, y in zip(l, lf))
        sg = tuple(x - y for x, y in zip(l, lg))
        s = f.mul_monomial(sf, cf) - g.mul_monomial(sg, cg)
        mf, mg = ring.monomial(sf, cf), ring.monomial(sg, cg)
        sv = [mf * x - mg * y for x, y in zip(fv, gv)]
        return s, sv

    queue = [(i, j) for j in range(len(basis)) for i in range(j)]
    while queue:
        i, j = queue.pop(0)
        s, sv = spair(basis[i], basis[j])
        rem, sub = reduce_tracked(s, [zero] * m)
        if rem:
            vec = [a - b for a, b in zip(sv, sub)]
            basis.append((rem, vec))
            k = len(basis) - 1
            queue.extend((a, k) for a in range(k))
    rem, sub = reduce_tracked(target, [zero] * m)
    if rem:
        return None
    return sub


def divide_exact(f, g):
    """f / g when g divides f exactly, else raise."""
    ring = f.ring
    p = ring.p
    q = ring.zero()
    r = f
    lg = g.lead()
    inv = pow(g.lead_coeff(), -1, p)
    while r:
        lt = r.lead()
        if not divides(lg, lt):
            raise CartierError("inexact division")
        shift = tuple(a - b for a, b in zip(lt, lg))
        c = r.terms[lt] * inv % p
        q = q + ring.monomial(shift, c)
        r = r - g.mul_monomial(shift, c)
    return q


# the Ideal type -------------------------------------------------------------

class Ideal:
    """Ideal of a PolyRing, canonically represented by its reduced GB."""

    __slots__ = ("ring", "_gb", "_mono", "_pow", "_hash", "_arr", "__weakref__")

    def __init__(self, ring, gens=(), _gb=None, _mono=None):
        self.ring = ring
        self._pow = None
        self._hash = None
        self._arr = None
        if _mono is not None:
            self._mono = _mono
            self._gb = None
            return
        if _gb is not None:
            self._gb = _gb
            self._mono = None
            if all(g.is_monomial() for g in _gb):
                self._mono = tuple(g.lead() for g in _gb)
            return
        gens = [g for g in gens if g]
        if all(g.is_monomial() for g in gens):
            self._mono = minimalize(g.lead() for g in gens)
            self._gb = None
        else:
            self._gb = groebner(gens)
            self._mono = None
            if all(g.is_monomial() for g in self._gb):
                self._mono = tuple(g.lead() for g in self._gb)

    @classmethod
    def from_monomials(cls, ring, exps):
        return cls(ring, _mono=minimalize(exps))

    @classmethod
    def unit(cls, ring):
        return cls(ring, _mono=(ring._zero_exp,))

    @classmethod
    def zero(cls, ring):
        return cls(ring, _mono=())

    @property
    def gb(self):
        if self._gb is None:
            key = self.ring.key
            mons = sorted(self._mono, key=key, reverse=True)
            self._gb = tuple(Poly(self.ring, {u: 1}) for u in mons)
        return self._gb

    @property
    def is_monomial(self):
        return self._mono is not None

    def monomials(self):
        if self._mono is None:
            raise CartierError("ideal is not monomial")
        return self._mono

    def is_unit(self):
        if self._mono is not None:
            return self.ring._zero_exp in self._mono
        return len(self._gb) == 1 and self._gb[0].is_constant()

    def is_zero(self):
        if self._mono is not None:
            return not self._mono
        return not self._gb

    def _canon(self):
        if self._mono is not None:
            return ("m", frozenset(self._mono))
        return ("g", frozenset(self._gb))

    def __eq__(self, other):
        if not isinstance(other, Ideal):
            return NotImplemented
        if self is other:
            return True
        if hash(self) != hash(other):
            return False
        return self.ring == other.ring and self._canon() == other._canon()

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self._canon())
        return self._hash

    def mono_array(self):
        """Monomial generators as a cached int64 array."""
        if self._arr is None:
            self._arr = np.asarray(self.monomials(), dtype=np.int64)
        return self._arr

    def gauge(self):
        """Largest gauge among the reduced GB elements."""
        if self._mono is not None:
            if not self._mono:
                return NEG_INF
            return max(max(u) for u in self._mono)
        if not self._gb:
            return NEG_INF
        return max(g.gauge() for g in self._gb)

    def reduce(self, f):
        if self._mono is not None:
            return Poly(f.ring, {u: c for u, c in f.terms.items()
                                 if not any(divides(m, u) for m in self._mono)})
        return normal_form(f, list(self._gb))

    def contains(self, f):
        if not f:
            return True
        if self._mono is not None:
            return all(any(divides(m, u) for m in self._mono) for u in f.terms)
        return not normal_form(f, list(self._gb))

    __contains__ = contains

    def __le__(self, other):
        if self._mono is not None and other._mono is not None:
            return all(any(divides(m, u) for m in other._mono) for u in self._mono)
        return all(other.contains(g) for g in self.gb)

    def __ge__(self, other):
        return other <= self

    def __add__(self, other):
        if self._mono is not None and other._mono is not None:
            return Ideal(self.ring, _mono=minimalize(self._mono + other._mono))
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        if self.is_unit() or other.is_unit():
            return Ideal.unit(self.ring)
        return Ideal(self.ring, list(self.gb) + list(other.gb))

    def __mul__(self, other):
        if self._mono is not None and other._mono is not None:
            return Ideal(self.ring, _mono=mono_product(self._mono, other._mono))
        return Ideal(self.ring, [f * g for f in self.gb for g in other.gb])

    def times_poly(self, f):
        if f.is_monomial() and self._mono is not None:
            (w,) = f.terms
            return Ideal(self.ring, _mono=tuple(
                tuple(a + b for a, b in zip(u, w)) for u in self._mono))
        return Ideal(self.ring, [f * g for g in self.gb])

    def power(self, k):
        """I^k, cached on the ideal (powers of a fixed twist ideal recur)."""
        if k == 0:
            return Ideal.unit(self.ring)
        if self._pow is None:
            self._pow = {1: self}
        cache = self._pow
        if k in cache:
            return cache[k]
        below = max(j for j in cache if j <= k)
        cur = cache[below]
        if self._mono is not None and self.ring.n == 2:
            # step through intermediate powers as arrays
            gens = self.mono_array()
            arr = cur.mono_array()
            top = int(gens.max(initial=0)) * k
            if top < _PACK_LIMIT:
                gk = _pack(gens)
                keys = _pack(arr)
                for _ in range(below, k):
                    keys = _staircase_keys((keys[None, :] + gk[:, None]).reshape(-1))
                arr = _unpack(keys)
            else:
                for _ in range(below, k):
                    arr = _staircase_arr((arr[:, None, :] + gens[None, :, :]).reshape(-1, 2))
            res = Ideal(self.ring, _mono=tuple(map(tuple, arr.tolist())))
            res._arr = arr
            cache[k] = res
            return res
        if self._mono is None and len(self._gb) == 1:
            res = Ideal(self.ring, _gb=(self._gb[0] ** k,))
            cache[k] = res
            return res
        for j in range(below + 1, k + 1):
            cur = cur * self
            cache[j] = cur
        return cur

    def bracket(self, e):
        """Frobenius power I^[p^e]."""
        if self._mono is not None:
            q = self.ring.p**e
            return Ideal(self.ring, _mono=tuple(
                tuple(a * q for a in u) for u in self._mono))
        return Ideal(self.ring, [g.frobenius_power(e) for g in self.gb])

    def intersect(self, other):
        ring = self.ring
        if self._mono is not None and other._mono is not None:
            return Ideal(ring, _mono=minimalize(
                lcm_exp(u, v) for u in self._mono for v in other._mono))
        if self.is_zero() or other.is_zero():
            return Ideal.zero(ring)
        if self.is_unit():
            return other
        if other.is_unit():
            return self
        big = ring.extend(("_t",), elim=1)
        t = big.var(0)

        def up(f):
            return Poly(big, {(0,) + u: c for u, c in f.terms.items()})

        gens = [t * up(f) for f in self.gb] + [(1 - t) * up(g) for g in other.gb]
        gb = groebner(gens)
        out = [Poly(ring, {u[1:]: c for u, c in g.terms.items()})
               for g in gb if all(u[0] == 0 for u in g.terms)]
        return Ideal(ring, out)

    def colon_poly(self, g):
        """(I : g)."""
        ring = self.ring
        if not g:
            return Ideal.unit(ring)
        if g.is_monomial() and self._mono is not None:
            (w,) = g.terms
            return Ideal(ring, _mono=minimalize(
                tuple(max(a - b, 0) for a, b in zip(u, w)) for u in self._mono))
        inter = self.intersect(Ideal(ring, [g]))
        return Ideal(ring, [divide_exact(h, g) for h in inter.gb])

    def colon(self, other):
        """(I : J) as the intersection of (I : g) over generators g of J."""
        res = Ideal.unit(self.ring)
        for g in other.gb:
            res = res.intersect(self.colon_poly(g))
        return res

    def saturate(self, other, cap=64):
        cur = self
        for _ in range(cap):
            nxt = cur.colon(other)
            if nxt == cur:
                return cur
            cur = nxt
        from .errors import IterationCap
        raise IterationCap("saturation did not stabilize")

    def __repr__(self):
        return f"Ideal({', '.join(str(g) for g in self.gb) or '0'})"


def monomial_radical(ideal):
    """Radical of a monomial ideal: squarefree supports of its generators."""
    from .errors import NotMonomial
    if not ideal.is_monomial:
        raise NotMonomial("radical is only computed for monomial ideals")
    exps = ideal.monomials()
    return Ideal.from_monomials(
        ideal.ring, [tuple(1 if a else 0 for a in u) for u in exps])


class QuotientContext:
    """R = S / I.  Ideals of R are S-ideals containing I."""

    def __init__(self, ring: PolyRing, defining: Ideal | None = None,
                 minimal_primes=None, domain=None):
        self.ring = ring
        self.I = defining if defining is not None else Ideal.zero(ring)
        if self.I.ring != ring:
            raise ValueError("defining ideal lives in another ring")
        self.minimal_primes = minimal_primes
        self._domain = domain

    def __repr__(self):
        names = ", ".join(self.ring.names)
        if self.is_polynomial_ring:
            return f"F_{self.ring.p}[{names}]"
        return f"F_{self.ring.p}[{names}]/{self.I!r}"

    @property
    def is_polynomial_ring(self):
        return self.I.is_zero()

    @property
    def is_domain(self):
        if self.is_polynomial_ring:
            return True
        if self._domain is not None:
            return self._domain
        return False

    def ideal(self, gens):
        gens = [g if isinstance(g, Poly) else self.ring.parse(g) for g in gens]
        return Ideal(self.ring, gens) + self.I

    def lift(self, ideal):
        return ideal + self.I

    def unit(self):
        return Ideal.unit(self.ring)

    def zero(self):
        return self.I

    def contains(self, ideal, f):
        return ideal.contains(f)

    def format(self, ideal):
        """Generators of the ideal modulo I, lead-descending."""
        if ideal <= self.I:
            return "(0)"
        gb = [g for g in ideal.gb if not self.I.contains(g)]
        return "(" + ", ".join(str(g) for g in gb) + ")"


def monomial_minimal_primes(ideal):
    """Minimal primes of a monomial ideal: minimal variable sets meeting every generator."""
    from .errors import NotMonomial
    if not ideal.is_monomial:
        raise NotMonomial("minimal primes are only computed for monomial ideals")
    ring = ideal.ring
    exps = ideal.monomials()
    if not exps:
        return [Ideal.zero(ring)]
    if ring._zero_exp in exps:
        return []
    supports = [frozenset(i for i, a in enumerate(u) if a) for u in exps]
    found = []
    for k in range(1, ring.n + 1):
        for subset in itertools.combinations(range(ring.n), k):
            s = set(subset)
            if any(f <= s for f in found):
                continue
            if all(sup & s for sup in supports):
                found.append(frozenset(s))
    return [Ideal(ring, [ring.var(i) for i in sorted(s)]) for s in found]
