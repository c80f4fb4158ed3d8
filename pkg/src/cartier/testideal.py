"""Test ideals: C-closures, test elements, tau(M, C, a^t), the non-reduced case, Skoda."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

from . import fpure
from .errors import (IterationCap, MissingMinimalPrimes, NoDescent,
                     NoTestElement, NotMonomial)
from .ideals import (Ideal, QuotientContext, monomial_minimal_primes,
                     monomial_radical)
from .operators import CartierAlgebra, CartierOp, op_descends


# closure --------------------------------------------------------------------

def closure_fixed_cap(C, G, e_cap=None, start=None):
    """Smallest C-stable ideal containing G: N <- N + U(N) until stable."""
    cur = C.ctx.lift(G)
    if start is not None:
        cur = cur + start
    for _ in range(fpure.ITER_CAP):
        if cur.is_unit():
            return cur
        nxt = cur + fpure.single_step(C, cur, e_cap)
        if nxt == cur:
            return cur
        cur = nxt
    raise IterationCap("closure did not stabilize")


def closure(C, G, e_cap=None):
    return fpure._adaptive(C, lambda E: closure_fixed_cap(C, G, E), e_cap)[0]


# minimal primes and R° --------------------------------------------------------

def minimal_primes(ctx):
    """Minimal primes of S/I as S-ideals containing I."""
    if ctx.minimal_primes is not None:
        return list(ctx.minimal_primes)
    if ctx.is_polynomial_ring or ctx.is_domain:
        return [ctx.I]
    if ctx.I.is_monomial:
        return monomial_minimal_primes(ctx.I)
    raise MissingMinimalPrimes(
        "minimal primes of the quotient are needed; supply them or set domain = true")


def in_r_circ(c, primes):
    """c lies outside every minimal prime."""
    return bool(c) and not any(eta.contains(c) for eta in primes)


def support_primes(M, primes):
    """Minimal primes eta with M not inside eta (the generic points of Supp M)."""
    return [eta for eta in primes if not (M <= eta)]


def _pick_in_r_circ(gens, primes):
    """An element of the ideal generated by gens lying in R°, or None."""
    gens = [g for g in gens if g]
    for g in gens:
        if in_r_circ(g, primes):
            return g
    for k in range(2, len(gens) + 1):
        for sub in itertools.combinations(gens, k):
            s = sub[0]
            for h in sub[1:]:
                s = s + h
            if in_r_circ(s, primes):
                return s
    return None


def _squarefree_support(f):
    """For a monomial, the product of the variables it involves; else f."""
    if f.is_monomial():
        (u,) = f.terms
        return f.ring.monomial(tuple(1 if a else 0 for a in u))
    return f


def jacobian_gens(ctx, primes):
    """Generators of the ideal of h x h minors of the Jacobian of I, h = codim."""
    I = ctx.I
    if I.is_zero():
        return []
    ring = ctx.ring
    gens = list(I.gb)
    h = min((len(eta.gb) for eta in primes if all(g.is_monomial() and g.degree() == 1
                                                   for g in eta.gb)), default=1)
    h = max(1, min(h, len(gens), ring.n))
    jac = [[_partial(g, i) for i in range(ring.n)] for g in gens]
    out = []
    for rows in itertools.combinations(range(len(gens)), h):
        for cols in itertools.combinations(range(ring.n), h):
            out.append(_det([[jac[r][c] for c in cols] for r in rows]))
    return [g for g in out if g]


def _partial(f, i):
    ring = f.ring
    out = {}
    for u, c in f.terms.items():
        if u[i]:
            v = list(u)
            v[i] -= 1
            out[tuple(v)] = c * u[i]
    return ring.poly(out)


def _det(m):
    if len(m) == 1:
        return m[0][0]
    total = m[0][0].ring.zero()
    for j in range(len(m)):
        minor = [row[:j] + row[j + 1:] for row in m[1:]]
        term = m[0][j] * _det(minor)
        total = total + term if j % 2 == 0 else total - term
    return total


def generator_factor(ctx, op, primes):
    """An element of R° cutting out where op falls short of the full algebra.

    Every operator descending to S/I is T_e(h * -) with h in (I^[q] : I), so
    op = T_e(f * -) is a unit multiple of a full generator exactly off
    V(U), U = ((f) + I^[q]) : (I^[q] : I).  On a polynomial ring U = (f).
    Returns None when nothing is needed (U = R) or U lies in a minimal prime.
    """
    ring = ctx.ring
    if ctx.I.is_zero():
        U = Ideal(ring, [op.f])
    else:
        br = ctx.I.bracket(op.e)
        U = (Ideal(ring, [op.f]) + br).colon(br.colon(ctx.I))
    if U.is_unit():
        return None
    r = _pick_in_r_circ(list(U.gb), primes)
    return None if r is None else _squarefree_support(r)


def candidate_test_element(C, primes):
    """A default c in R°: the product of one element from each source that
    applies.  Multiplying a test element by anything in R° keeps it one, so
    extra factors are safe; for twisted algebras they only slow convergence.

    Sources: the Jacobian of the quotient (singular locus), each algebra
    generator (where it is not a full generator, see generator_factor), and
    the radical of the twist ideal (where the twist is not the unit ideal).
    """
    ctx = C.ctx
    ring = ctx.ring
    c = ring.one()
    jac = jacobian_gens(ctx, primes)
    if jac:
        j = _pick_in_r_circ(jac, primes)
        if j is None:
            raise NoTestElement("no Jacobian element avoids the minimal primes")
        c = c * j
    for g in C.generators:
        f = generator_factor(ctx, g, primes)
        if f is not None:
            c = c * f
    if C.is_twisted:
        a, _ = C.twist
        rad = monomial_radical(a).gb if a.is_monomial else a.gb
        r = _pick_in_r_circ(list(rad), primes)
        if r is None:
            raise NoTestElement("no element of the twist radical avoids the minimal primes")
        c = c * r
    return ctx.I.reduce(c)


# test element verification --------------------------------------------------

@dataclass
class TestElement:
    c: object
    checks: dict = field(default_factory=dict)

    @property
    def verified(self):
        return bool(self.checks) and all(self.checks.values())

    def passed(self):
        return [k for k, v in self.checks.items() if v]

    def __str__(self):
        return str(self.c)


def verify_test_element(C, Mu, c, primes, e_cap=None, J=None):
    """Necessary conditions for c to be a test element (results recorded per check)."""
    te = TestElement(c)
    if not in_r_circ(c, primes):
        te.checks["in_R_circ"] = False
        return te
    te.checks["in_R_circ"] = True
    if J is None:
        J = closure_fixed_cap(C, Mu.times_poly(c), e_cap)
    J2 = closure_fixed_cap(C, Mu.times_poly(c * c), e_cap)
    te.checks["power_independent"] = J == J2
    te.checks["fpure"] = fpure.cplus_fixed_cap(C, J, e_cap) == J
    sup = support_primes(Mu, primes)
    col = J.colon(Mu) if sup else None
    te.checks["generic_agreement"] = all(not (col <= eta) for eta in sup)
    return te


# tau --------------------------------------------------------------------------

@dataclass
class TauResult:
    tau: Ideal
    test_element: TestElement
    e_cap_used: int
    fpure_certified: bool
    underline: Ideal = None


def _tau_at_cap(C, M, c, primes, E, start=None):
    rep = fpure.underline_fixed_cap(C, M, E)
    Mu = rep.underline
    if Mu <= C.ctx.I:
        return Mu, Mu
    J = closure_fixed_cap(C, Mu.times_poly(c), E, start=start)
    return J, Mu


def tau(C, M=None, c=None, minimal_primes_=None, e_cap=None, verify=True):
    """tau(M, C): the closure of c * underline(M) for a test element c.

    Twisted algebras are evaluated at increasing degree caps until the answer
    repeats; each cap gives a lower bound on the true value.
    """
    ctx = C.ctx
    if M is None:
        M = ctx.unit()
    fpure.require_submodule(C, M)
    primes = minimal_primes_ if minimal_primes_ is not None else minimal_primes(ctx)
    if c is None:
        c = candidate_test_element(C, primes)
    elif not in_r_circ(c, primes):
        raise NoTestElement(f"c = {c} lies in a minimal prime")

    if not C.is_twisted:
        J, Mu = _tau_at_cap(C, M, c, primes, None)
        E = 0
    elif e_cap is not None:
        J, Mu = _tau_at_cap(C, M, c, primes, e_cap)
        E = e_cap
    else:
        J, Mu, E = _tau_adaptive(C, M, c, primes)
    if Mu <= ctx.I:
        te = TestElement(c, {"in_R_circ": in_r_circ(c, primes)})
        return TauResult(Mu, te, E, True, Mu)
    te = verify_test_element(C, Mu, c, primes, E or None, J=J) if verify \
        else TestElement(c, {"in_R_circ": True})
    if verify and not te.verified:
        raise NoTestElement(
            f"c = {c} failed checks: "
            + ", ".join(k for k, v in te.checks.items() if not v))
    return TauResult(J, te, E, te.checks.get("fpure", False), Mu)


def _tau_adaptive(C, M, c, primes):
    E = fpure.auto_e_cap(C, extra_gauge=max(c.gauge(), 0))
    J, Mu = _tau_at_cap(C, M, c, primes, E)
    for E1 in range(E + 1, E + fpure.CAP_WINDOW + 1):
        if J.is_unit():
            return J, Mu, E1 - 1
        J1, Mu1 = _tau_at_cap(C, M, c, primes, E1, start=J)
        if J1 == J and Mu1 == Mu:
            return J1, Mu1, E1
        J, Mu = J1, Mu1
    raise IterationCap("twisted degree cap did not stabilize")


def is_fregular(C, M=None, **kw):
    ctx = C.ctx
    if M is None:
        M = ctx.unit()
    res = tau(C, M, **kw)
    return res.tau == res.underline == M


# non-reduced quotients --------------------------------------------------------

def reduced_context(ctx, radical=None):
    """R_red = S / sqrt(I), with sqrt(I) computed for monomial I or supplied."""
    if radical is None:
        if not ctx.I.is_monomial:
            raise NotMonomial("radical of a non-monomial quotient must be supplied")
        radical = monomial_radical(ctx.I)
    return QuotientContext(ctx.ring, radical, minimal_primes=ctx.minimal_primes,
                           domain=ctx._domain)


def reduced_algebra(C, ctx_red):
    """The generators viewed on R_red.

    An operator preserving I also preserves sqrt(I), so this only fails when
    a supplied radical is wrong."""
    gens = []
    for g in C.generators:
        if not op_descends(g.e, g.f, ctx_red.I):
            raise NoDescent(
                f"generator (e={g.e}, f={g.f}) does not induce an operator on "
                f"S/sqrt(I)")
        gens.append(CartierOp(g.e, g.f, ctx_red))
    return CartierAlgebra(ctx_red, gens, C.twist, C.word_limit)


@dataclass
class NonreducedResult:
    tau: Ideal
    underline: Ideal
    test_element: TestElement
    reduced_ctx: QuotientContext


def tau_nonreduced(C, radical=None, c=None, e_cap=None):
    """tau(R, C) for non-reduced R: work with (underline R, C_red).

    The stable member underline(R) is killed by the nilradical, so the closure
    of c * underline(R) can be taken inside R while c ranges over R_red°.
    """
    ctx = C.ctx
    rep = fpure.underline(C, ctx.unit(), e_cap)
    Mu = rep.underline
    ctx_red = reduced_context(ctx, radical)
    C_red = reduced_algebra(C, ctx_red)
    if Mu <= ctx.I:
        return NonreducedResult(Mu, Mu, TestElement(ctx.ring.zero()), ctx_red)
    primes = minimal_primes(ctx_red)
    if c is None:
        c = candidate_test_element(C_red, primes)
    E = rep.e_cap_used or None
    J = closure_fixed_cap(C, Mu.times_poly(c), E)
    te = verify_test_element(C, Mu, c, primes, E, J=J)
    if not te.verified:
        raise NoTestElement(
            f"c = {c} failed checks: "
            + ", ".join(k for k, v in te.checks.items() if not v))
    return NonreducedResult(J, Mu, te, ctx_red)


# Skoda ------------------------------------------------------------------------

@dataclass
class SkodaReport:
    t: Fraction
    lhs: Ideal
    rhs: Ideal
    containment: bool
    equality: bool
    equality_expected: bool


def skoda_check(C, a, t, M=None, **kw):
    """Compare a * tau(a^(t-1)) with tau(a^t); equality expected once t >= #gens(a)."""
    t = Fraction(t)
    if t < 1:
        raise ValueError("Skoda needs t >= 1")
    base = C.untwisted()
    lhs_tau = tau(base.with_twist(a, t - 1), M, **kw).tau
    rhs = tau(base.with_twist(a, t), M, **kw).tau
    lhs = C.ctx.lift(a * lhs_tau)
    mu = len(a.gb)
    return SkodaReport(t, lhs, rhs, lhs <= rhs, lhs == rhs, t >= mu)
