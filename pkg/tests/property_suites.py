"""Randomized property suites, 200 examples each.

Not collected on its own: tests/test_acceptance.py runs every suite.  Each
suite bumps a counter per executed example so the caller can check the
case count.
"""

from __future__ import annotations

from collections import Counter
from fractions import Fraction

from hypothesis import assume, given
from hypothesis import strategies as st

from cartier import fpure, jumping, testideal
from cartier.errors import NoTestElement
from cartier.ideals import Ideal
from cartier.operators import CartierOp
from cartier.polyring import NEG_INF, frob_decompose

from strategies import (SUITE, algebra_cases, monomial_ideals, polys,
                        small_rings, twist_cases)

RUNS = Counter()


def _le(g, bound):
    return g == NEG_INF or g <= bound


# operators -------------------------------------------------------------------

@st.composite
def _op_case(draw):
    R = draw(small_rings())
    e = draw(st.integers(1, 2 if R.p <= 3 else 1))
    q = R.p**e
    f = draw(polys(R, hi=2 * q, max_terms=4))
    m = draw(polys(R, hi=2 * q, max_terms=4))
    r = draw(polys(R, hi=3, max_terms=3))
    return R, e, f, m, r


@SUITE
@given(_op_case())
def suite_linearity(case):
    """phi(r^q m) == r phi(m)."""
    R, e, f, m, r = case
    from cartier.ideals import QuotientContext
    phi = CartierOp(e, f, QuotientContext(R))
    assert phi.apply_poly(r.frobenius_power(e) * m) == r * phi.apply_poly(m)
    assert phi.apply_poly(m + r) == phi.apply_poly(m) + phi.apply_poly(r)
    RUNS["linearity"] += 1


@SUITE
@given(small_rings(), st.data())
def suite_frob_decompose(R, data):
    """f == sum x^j r_j^q, and every r_j has gauge <= gauge(f) / q."""
    e = data.draw(st.integers(1, 3 if R.p == 2 else 2))
    q = R.p**e
    f = data.draw(polys(R, hi=3 * q, max_terms=6))
    comps = frob_decompose(f, e)
    back = R.zero()
    for j, rj in comps.items():
        assert all(0 <= a < q for a in j)
        assert rj
        back = back + rj.frobenius_power(e).mul_monomial(j)
        assert rj.gauge() <= f.gauge() // q
    assert back == f
    RUNS["frob_decompose"] += 1


@SUITE
@given(_op_case())
def suite_contraction(case):
    """gauge(phi(m)) <= floor((gauge(m) + gauge(f)) / q)."""
    R, e, f, m, _ = case
    from cartier.ideals import QuotientContext
    assume(f and m)
    phi = CartierOp(e, f, QuotientContext(R))
    assert _le(phi.apply_poly(m).gauge(), (m.gauge() + f.gauge()) // R.p**e)
    RUNS["contraction"] += 1


@SUITE
@given(small_rings(primes=(2, 3)), st.data())
def suite_composition(R, data):
    """compose(phi, psi) applied to m == phi(psi(m)); words contract gauge."""
    from cartier.ideals import QuotientContext
    ctx = QuotientContext(R)
    ops = []
    for _ in range(data.draw(st.integers(2, 3))):
        e = data.draw(st.integers(1, 2))
        ops.append(CartierOp(e, data.draw(polys(R, hi=R.p**e, max_terms=3)), ctx))
    m = data.draw(polys(R, hi=12, max_terms=4))
    word = ops[0]
    expect = ops[-1].apply_poly(m)
    for op in reversed(ops[:-1]):
        expect = op.apply_poly(expect)
    for op in ops[1:]:
        word = word.compose(op)
    # word = ops[0] o ops[1] o ... : the last one acts first
    assert word.apply_poly(m) == expect
    K = max(max(op.f.gauge(), 0) for op in ops)
    if m:
        bound = Fraction(m.gauge(), R.p**word.e) + Fraction(K, R.p - 1)
        assert _le(word.apply_poly(m).gauge(), bound)
    RUNS["composition"] += 1


# fixed points ------------------------------------------------------------------

@SUITE
@given(algebra_cases(), st.data())
def suite_underline(case, data):
    """The chain descends to a fixed point of C_+; idempotent; largest F-pure."""
    ctx, C, M = case
    rep = fpure.underline(C, M)
    for a, b in zip(rep.chain, rep.chain[1:]):
        assert b <= a
    Mu = rep.underline
    assert fpure.cplus(C, Mu) == Mu
    assert fpure.underline(C, Mu).underline == Mu
    assert rep.is_fpure == (rep.chain[0] == Mu)
    J = data.draw(monomial_ideals(ctx.ring, hi=2, kmax=2, allow_unit=True))
    N = fpure.underline(C, testideal.closure(C, ctx.lift(M * J)).intersect(M)).underline
    assert N <= Mu
    RUNS["underline"] += 1


def _tau_or_skip(C, M, **kw):
    try:
        return testideal.tau(C, M, **kw)
    except NoTestElement:
        assume(False)


@SUITE
@given(st.one_of(algebra_cases(), twist_cases().map(
    lambda c: (c[0], c[1].with_twist(c[2], Fraction(1, 2)), c[0].unit()))))
def suite_tau_fpure(case):
    """tau is F-pure and only depends on underline(M)."""
    ctx, C, M = case
    res = _tau_or_skip(C, M)
    assert fpure.cplus(C, res.tau) == res.tau
    assert res.tau <= res.underline
    if not C.is_twisted:
        assert _tau_or_skip(C, res.underline).tau == res.tau
    RUNS["tau_fpure"] += 1


@SUITE
@given(algebra_cases(), st.integers(0, 2))
def suite_tau_independence(case, which):
    """closure(c^t M_u) agrees for t = 1, 2, 3, and for a second test element."""
    ctx, C, M = case
    res = _tau_or_skip(C, M)
    Mu, c = res.underline, res.test_element.c
    if Mu <= ctx.I:
        RUNS["tau_independence"] += 1
        return
    for k in (2, 3):
        assert testideal.closure(C, Mu.times_poly(c**k)) == res.tau
    R = ctx.ring
    primes = testideal.minimal_primes(ctx)
    v = R.var(which % R.n)
    other = c * (v + R.one())
    if testideal.in_r_circ(c * v, primes):
        other = c * v
    assert _tau_or_skip(C, M, c=other).tau == res.tau
    RUNS["tau_independence"] += 1


@SUITE
@given(algebra_cases(monomial_only=True, nmax=3))
def suite_reduced_annihilator(case):
    """F-pure submodules have radical annihilators (monomial cases)."""
    ctx, C, M = case
    Mu = fpure.underline(C, M).underline
    assert fpure.check_reduced_annihilator(ctx, Mu)
    tau = _tau_or_skip(C, M).tau
    assert fpure.check_reduced_annihilator(ctx, tau)
    RUNS["reduced_annihilator"] += 1


@SUITE
@given(algebra_cases(monomial_only=True, nmax=3))
def suite_gauge_generation(case):
    """underline(M) is generated by its members of gauge <= B (plus I)."""
    ctx, C, M = case
    Mu = fpure.underline(C, M).underline
    B = C.gauge_bound().B
    low = Ideal.from_monomials(ctx.ring, [u for u in Mu.monomials() if max(u) <= B])
    assert ctx.lift(low) == Mu
    RUNS["gauge_generation"] += 1


# twists ----------------------------------------------------------------------

@SUITE
@given(twist_cases(), st.sampled_from([Fraction(1), Fraction(3, 2), Fraction(2),
                                       Fraction(5, 2), Fraction(3)]))
def suite_skoda(case, t):
    """a tau(a^(t-1)) is inside tau(a^t) for t >= 1, equal once t >= #gens."""
    ctx, C, a = case
    rep = testideal.skoda_check(C, a, t)
    assert rep.containment
    if rep.equality_expected:
        assert rep.equality
    RUNS["skoda"] += 1


@SUITE
@given(twist_cases(hi=3, kmax=2), st.data())
def suite_monotone_right_continuous(case, data):
    """tau(a^t) shrinks as t grows and is constant just right of each jump."""
    ctx, C, a = case
    p = ctx.ring.p
    E = 2
    step = Fraction(1, p**E - 1)
    curve = jumping.TauCurve(C, None, a)
    ks = sorted(data.draw(st.lists(st.integers(0, 2 * (p**E - 1)), min_size=2,
                                   max_size=4, unique=True)))
    for k0, k1 in zip(ks, ks[1:]):
        assert curve(k1 * step) <= curve(k0 * step)
    rep = jumping.jumps_in_range(C, None, a, 2, E, curve=curve)
    assert len(rep.ideals) == len(rep.jumps) + 1
    for J0, J1 in zip(rep.ideals, rep.ideals[1:]):
        assert J1 <= J0 and J1 != J0
    for b in rep.jumps:
        if b + step <= 2 and b + step not in rep.jumps:
            assert curve(b) == curve(b + step)
    distinct = {curve(k * step) for k in range(0, 2 * (p**E - 1) + 1)}
    assert len(distinct) == len(rep.jumps) + 1
    RUNS["monotone_right_continuous"] += 1


SUITES = {
    "p^-e linearity": suite_linearity,
    "frob_decompose reconstruction and gauge bound": suite_frob_decompose,
    "contraction": suite_contraction,
    "composition coherence": suite_composition,
    "descending chain and cplus(underline) == underline": suite_underline,
    "tau is F-pure": suite_tau_fpure,
    "t- and c-independence of tau": suite_tau_independence,
    "radical annihilators": suite_reduced_annihilator,
    "Skoda containment and equality": suite_skoda,
    "monotonicity and right-continuity": suite_monotone_right_continuous,
    "gauge-truncated regeneration of underline": suite_gauge_generation,
}

COUNTER_OF = {
    suite_linearity: "linearity",
    suite_frob_decompose: "frob_decompose",
    suite_contraction: "contraction",
    suite_composition: "composition",
    suite_underline: "underline",
    suite_tau_fpure: "tau_fpure",
    suite_tau_independence: "tau_independence",
    suite_reduced_annihilator: "reduced_annihilator",
    suite_skoda: "skoda",
    suite_monotone_right_continuous: "monotone_right_continuous",
    suite_gauge_generation: "gauge_generation",
}


def run_suite(fn):
    """Run one suite; returns the number of examples it executed."""
    key = COUNTER_OF[fn]
    before = RUNS[key]
    fn()
    return RUNS[key] - before
