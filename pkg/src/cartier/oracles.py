"""Brute-force oracles used to cross-check the main pipeline.

They only use the polynomial layer for arithmetic: no Groebner bases, no
closure iterations.  Results are wrapped as Ideals purely for comparison.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction

from .errors import ExponentOverflow, NotMonomial
from .polyring import EXP_LIMIT


# nu invariants ----------------------------------------------------------------

def nu_value(f, e):
    """max r with f^r outside (x_1^q, ..., x_n^q), q = p^e.

    Powers are built one factor at a time, dropping every term with an
    exponent >= q (those already lie in the bracket power).
    """
    ring = f.ring
    p = ring.p
    q = p**e
    if q > EXP_LIMIT:
        raise ExponentOverflow(f"p^e = {q} exceeds the exponent limit")
    if ring._zero_exp in f.terms:
        raise ValueError("f must lie in the homogeneous maximal ideal")
    if not f.terms:
        raise ValueError("f must be nonzero")
    cur = {ring._zero_exp: 1}
    r = 0
    while True:
        nxt = {}
        for u, c in cur.items():
            for v, d in f.terms.items():
                w = tuple(a + b for a, b in zip(u, v))
                if max(w) >= q:
                    continue
                nxt[w] = (nxt.get(w, 0) + c * d) % p
        nxt = {w: c for w, c in nxt.items() if c}
        if not nxt:
            return r
        cur = nxt
        r += 1


# Newton polyhedra -----------------------------------------------------------

def _minimal(exps):
    exps = sorted(set(exps), key=sum)
    kept = []
    for u in exps:
        if not any(all(a <= b for a, b in zip(v, u)) for v in kept):
            kept.append(u)
    return kept


def _nullvector(rows, ncols):
    """A nonzero rational vector in the kernel when it is one-dimensional, else None."""
    m = [list(map(Fraction, r)) for r in rows]
    piv_cols = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                fac = m[i][c]
                m[i] = [x - fac * y for x, y in zip(m[i], m[r])]
        piv_cols.append(c)
        r += 1
    free = [c for c in range(ncols) if c not in piv_cols]
    if len(free) != 1:
        return None
    fc = free[0]
    v = [Fraction(0)] * ncols
    v[fc] = Fraction(1)
    for i, c in enumerate(piv_cols):
        v[c] = -m[i][fc]
    return v


class NewtonPolyhedron:
    """conv(generator exponents) + positive orthant, as facet inequalities
    alpha . u >= gamma with alpha >= 0 and gamma > 0 (coordinate facets omitted)."""

    def __init__(self, exps):
        self.points = _minimal(exps)
        self.n = len(self.points[0]) if self.points else 0
        self.facets = self._facets()

    def _facets(self):
        n = self.n
        pts = self.points
        if not pts or any(sum(u) == 0 for u in pts):
            return []
        # unknowns (alpha_1..alpha_n, gamma); point rows alpha.g - gamma = 0,
        # ray rows alpha_i = 0
        rows = [list(g) + [-1] for g in pts]
        rows += [[1 if j == i else 0 for j in range(n)] + [0] for i in range(n)]
        found = set()
        for combo in itertools.combinations(range(len(rows)), n):
            if all(k >= len(pts) for k in combo):
                continue
            v = _nullvector([rows[k] for k in combo], n + 1)
            if v is None:
                continue
            if all(x <= 0 for x in v[:n]):
                v = [-x for x in v]
            alpha, gamma = v[:n], v[n]
            if any(x < 0 for x in alpha) or gamma <= 0:
                continue
            if any(sum(a * b for a, b in zip(alpha, g)) < gamma for g in pts):
                continue
            # normalize to coprime integers
            den = math.lcm(*(x.denominator for x in v))
            ints = [int(x * den) for x in v]
            gcd = math.gcd(*ints)
            found.add(tuple(x // gcd for x in ints))
        return sorted((f[:n], f[n]) for f in found)

    def interior(self, z, t):
        """z in the interior of t * Newt (z in the positive orthant)."""
        return all(sum(a * b for a, b in zip(alpha, z)) > t * gamma
                   for alpha, gamma in self.facets)


def _monomial_exps(ideal):
    if not all(g.is_monomial() for g in ideal.gb):
        raise NotMonomial("monomial_tau needs a monomial ideal")
    return [g.lead() for g in ideal.gb]


def monomial_tau_exps(exps, t, n):
    """Minimal exponents u with u + 1 interior to t * Newt."""
    t = Fraction(t)
    if not exps:
        return []
    if t == 0:
        return [(0,) * n]
    newt = NewtonPolyhedron(exps)
    if not newt.facets:
        return [(0,) * n]
    D = max(max(u) for u in newt.points)
    box = math.floor(t * D) + 1
    good = []
    for u in itertools.product(range(box + 1), repeat=n):
        if newt.interior([a + 1 for a in u], t):
            good.append(u)
    return _minimal(good)


def monomial_tau(a, t):
    """tau(a^t) for a monomial ideal of a polynomial ring, from its Newton polyhedron."""
    from .ideals import Ideal
    ring = a.ring
    exps = _monomial_exps(a)
    return Ideal.from_monomials(ring, monomial_tau_exps(exps, t, ring.n))


# one-variable closed ideals ---------------------------------------------------

def _trim(c):
    while c and c[-1] == 0:
        c.pop()
    return c


def _upoly(f):
    """Coefficient list of a univariate Poly."""
    if f.ring.n != 1:
        raise ValueError("one variable only")
    deg = max((u[0] for u in f.terms), default=-1)
    c = [0] * (deg + 1)
    for u, v in f.terms.items():
        c[u[0]] = v
    return c


def _umod(a, b, p):
    a = list(a)
    inv = pow(b[-1], -1, p)
    while len(a) >= len(b) and a:
        k = a[-1] * inv % p
        s = len(a) - len(b)
        for i, v in enumerate(b):
            a[s + i] = (a[s + i] - k * v) % p
        _trim(a)
    return a


def _ugcd(a, b, p):
    a, b = _trim(list(a)), _trim(list(b))
    while b:
        a, b = b, _umod(a, b, p)
    if a:
        inv = pow(a[-1], -1, p)
        a = [x * inv % p for x in a]
    return a


def bruteforce_closed_ideals(C, B=12):
    """F-pure C-stable ideals among 0, R and (x^k), 1 <= k <= B, on F_p[x].

    For N = (h), U(N) is generated by the gcd of all T_e(f * x^b * h); the
    sum of the iterates U^j(N) is again principal, found by repeated gcds.
    """
    from .ideals import Ideal
    ctx = C.ctx
    ring = ctx.ring
    if ring.n != 1 or not ctx.is_polynomial_ring:
        raise ValueError("one-variable polynomial ring only")
    p = ring.p
    e_f = [(g.e, g.f) for g in C.generators]
    out = [Ideal.zero(ring)]
    for k in range(0, B + 1):
        h = [0] * k + [1]
        if _cplus_gen(e_f, h, p) == h:
            out.append(Ideal.from_monomials(ring, [(k,)]))
    return out


def _cplus_gen(e_f, h, p):
    """Monic generator of sum_{j>=1} U^j((h)) ([] for the zero ideal)."""
    cur = _ugcd_image_of(e_f, h, p)
    while cur:
        nxt = _ugcd(cur, _ugcd_image_of(e_f, cur, p), p)
        if nxt == cur:
            break
        cur = nxt
    return cur


def _ugcd_image_of(e_f, h, p):
    """Generator of U((h)) for a univariate h."""
    g = []
    for e, f in e_f:
        q = p**e
        fc = _upoly(f)
        prod = [0] * (len(fc) + len(h) - 1)
        for i, a in enumerate(fc):
            for j, b in enumerate(h):
                prod[i + j] = (prod[i + j] + a * b) % p
        for b in range(q):
            out = {}
            for i, c in enumerate(prod):
                if c and (i + b) % q == q - 1:
                    out[(i + b) // q] = c
            if out:
                hh = [0] * (max(out) + 1)
                for i, c in out.items():
                    hh[i] = c
                g = _ugcd(g, hh, p)
    return g


# bounded-degree membership ----------------------------------------------------

def _monomials_upto(n, D):
    for total in range(D + 1):
        for u in itertools.product(range(total + 1), repeat=n):
            if sum(u) == total:
                yield u


def _solvable_mod_p(cols, target, p):
    """Is target in the F_p-span of the column vectors (dicts key -> coeff)?"""
    pivots = {}  # pivot key -> reduced vector
    def reduce(v):
        v = dict(v)
        for k, piv in pivots.items():
            c = v.get(k, 0)
            if c:
                for kk, val in piv.items():
                    nv = (v.get(kk, 0) - c * val) % p
                    if nv:
                        v[kk] = nv
                    else:
                        v.pop(kk, None)
        return v
    for col in cols:
        v = reduce(col)
        if not v:
            continue
        k = min(v)
        inv = pow(v[k], -1, p)
        v = {kk: val * inv % p for kk, val in v.items()}
        for kk, piv in pivots.items():
            c = piv.get(k, 0)
            if c:
                for k2, val in v.items():
                    nv = (piv.get(k2, 0) - c * val) % p
                    if nv:
                        piv[k2] = nv
                    else:
                        piv.pop(k2, None)
        pivots[k] = v
    return not reduce(target)


def linear_membership(f, gens, D):
    """True iff f = sum h_i g_i with every deg h_i <= D, by linear algebra over F_p.

    For homogeneous gens and f it suffices to take D = deg f, which makes the
    answer exact ideal membership.
    """
    ring = f.ring
    if not f:
        return True
    cols = []
    for g in gens:
        if not g.terms:
            continue
        for u in _monomials_upto(ring.n, D):
            cols.append(dict(g.mul_monomial(u).terms))
    return _solvable_mod_p(cols, dict(f.terms), ring.p)
