from fractions import Fraction

import pytest

from cartier import fpure, testideal
from cartier.errors import MissingMinimalPrimes, NoDescent, NoTestElement
from cartier.ideals import Ideal, QuotientContext
from cartier.operators import CartierAlgebra, CartierOp
from cartier.polyring import PolyRing


def nonreduced(p):
    R = PolyRing(p, ["x", "y"])
    ctx = QuotientContext(R, Ideal(R, [R.parse("x^2*y")]))
    f = R.parse(f"x^{2 * p - 2}*y^{p - 1}")
    return ctx, CartierAlgebra(ctx, [CartierOp(1, f, ctx)])


@pytest.mark.parametrize("p", [2, 3, 5, 7])
def test_tau_nonreduced_example(p):
    ctx, C = nonreduced(p)
    res = testideal.tau_nonreduced(C)
    assert ctx.format(res.underline) == "(x)"
    assert res.tau == ctx.ideal(["x^2", "x*y"])
    assert ctx.format(res.tau) == "(x^2, x*y)"
    assert res.test_element.verified
    assert res.reduced_ctx.I == Ideal(ctx.ring, [ctx.ring.parse("x*y")])


@pytest.mark.parametrize("p", [2, 3, 5, 7])
def test_tau_of_reduced_quotient(p):
    R = PolyRing(p, ["x", "y"])
    ctx = QuotientContext(R, Ideal(R, [R.parse("x*y")]))
    C = CartierAlgebra(ctx, [CartierOp(1, R.parse(f"x^{p - 1}*y^{p - 1}"), ctx)])
    res = testideal.tau(C)
    assert res.tau == ctx.ideal(["x", "y"])
    assert res.underline == ctx.unit()


def test_test_element_in_minimal_prime_rejected():
    ctx, C = nonreduced(5)
    x = ctx.ring.var(0)
    with pytest.raises(NoTestElement):
        testideal.tau_nonreduced(C, c=x)
    y = ctx.ring.var(1)
    assert testideal.tau_nonreduced(C, c=x + y).tau == ctx.ideal(["x^2", "x*y"])


def test_reduced_algebra_needs_descent():
    # compatible ideals have compatible radicals, so only a wrong supplied
    # radical can fail here
    ctx, C = nonreduced(3)
    R = ctx.ring
    with pytest.raises(NoDescent):
        testideal.tau_nonreduced(C, radical=Ideal(R, [R.parse("x + y")]))


@pytest.mark.parametrize("p", [2, 3, 5])
def test_line_with_root_operator(p):
    R = PolyRing(p, ["x"])
    ctx = QuotientContext(R)
    x = R.var(0)
    C = CartierAlgebra(ctx, [CartierOp(1, x**(p - 1), ctx)])
    res = testideal.tau(C)
    assert res.tau == Ideal(R, [x])
    assert res.underline == ctx.unit()
    assert not testideal.is_fregular(C)


def test_degenerate_generator_on_quotient():
    # on S/(y) the generator (1, xy) acts as x^n -> x^(n/2): tau = (x)
    R = PolyRing(2, ["x", "y"])
    ctx = QuotientContext(R, Ideal(R, [R.parse("y")]))
    C = CartierAlgebra(ctx, [CartierOp(1, R.parse("x*y"), ctx)])
    res = testideal.tau(C)
    assert res.tau == ctx.ideal(["x"])
    assert testideal.generator_factor(ctx, C.generators[0],
                                      testideal.minimal_primes(ctx)) == R.var(0)


def test_full_algebra_is_fregular():
    R = PolyRing(3, ["x", "y"])
    ctx = QuotientContext(R)
    assert testideal.is_fregular(CartierAlgebra.full(ctx))


def test_hypersurface_needs_primes_or_domain():
    R = PolyRing(7, ["x", "y"])
    g = R.parse("x^2 + y^3")
    ctx = QuotientContext(R, Ideal(R, [g]))
    C = CartierAlgebra(ctx, [CartierOp(1, g**6, ctx)])
    with pytest.raises(MissingMinimalPrimes):
        testideal.tau(C)
    ctx = QuotientContext(R, Ideal(R, [g]), domain=True)
    C = CartierAlgebra(ctx, [CartierOp(1, g**6, ctx)])
    res = testideal.tau(C)
    m = ctx.ideal(["x", "y"])
    assert res.underline == m and res.tau == m
    assert res.test_element.c == R.parse("2*x")  # from the Jacobian


def test_verify_records_every_check():
    ctx, C = nonreduced(3)
    Mu = fpure.underline(C).underline
    primes = testideal.minimal_primes(testideal.reduced_context(ctx))
    x, y = ctx.ring.gens()
    te = testideal.verify_test_element(C, Mu, x + y, primes)
    assert te.checks == {"in_R_circ": True, "power_independent": True,
                         "fpure": True, "generic_agreement": True}
    assert te.verified
    bad = testideal.verify_test_element(C, Mu, x, primes)
    assert bad.checks == {"in_R_circ": False} and not bad.verified


def test_twisted_tau_and_skoda():
    R = PolyRing(3, ["x", "y"])
    ctx = QuotientContext(R)
    C = CartierAlgebra.full(ctx)
    m = Ideal(R, [R.var(0), R.var(1)])
    assert testideal.tau(C.with_twist(m, Fraction(3, 2))).tau == ctx.unit()
    assert testideal.tau(C.with_twist(m, 2)).tau == m
    rep = testideal.skoda_check(C, m, 2)
    assert rep.containment and rep.equality and rep.equality_expected
    with pytest.raises(ValueError):
        testideal.skoda_check(C, m, Fraction(1, 2))


def test_tau_depends_only_on_underline():
    ctx, C = nonreduced(3)
    R = ctx.ring
    red = QuotientContext(R, Ideal(R, [R.parse("x*y")]))
    Cr = CartierAlgebra(red, [CartierOp(1, R.parse("x^2*y^2"), red)])
    M = red.ideal(["x"])
    assert testideal.tau(Cr, M).tau == testideal.tau(
        Cr, fpure.underline(Cr, M).underline).tau


def test_minimal_primes():
    R = PolyRing(2, ["x", "y"])
    ctx = QuotientContext(R, Ideal(R, [R.parse("x^2*y")]))
    got = sorted(ctx.format(P) for P in testideal.minimal_primes(ctx))
    assert got == ["(x)", "(y)"]
    assert testideal.minimal_primes(QuotientContext(R)) == [Ideal.zero(R)]
