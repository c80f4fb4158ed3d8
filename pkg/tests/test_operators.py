from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from cartier.errors import NoDescent, WordLimitExceeded
from cartier.ideals import Ideal, QuotientContext
from cartier.operators import (CartierAlgebra, CartierOp, GaugeBound, op_compose,
                               op_descends, twist_exponent)
from cartier.polyring import PolyRing, frob_decompose

from strategies import SUITE, algebra_cases, monomial_ideals, polys, ring


def _ctx(p, names, quotient=()):
    R = PolyRing(p, names)
    return QuotientContext(R, Ideal(R, [R.parse(s) for s in quotient]))


def test_basic_operator_values():
    ctx = _ctx(2, ["x"])
    x = ctx.ring.var(0)
    phi = CartierOp(1, ctx.ring.one(), ctx)
    assert phi.apply_poly(x**3) == x
    assert phi.apply_poly(x**4).is_zero()
    assert phi.apply_ideal(Ideal(ctx.ring, [x**3])) == Ideal(ctx.ring, [x])
    assert phi.apply_ideal(Ideal.zero(ctx.ring)).is_zero()


def test_root_operator_on_line():
    # f = x^(p-1) realizes x^n -> x^(n/p)
    for p in (2, 3, 5):
        ctx = _ctx(p, ["x"])
        x = ctx.ring.var(0)
        phi = CartierOp(1, x**(p - 1), ctx)
        for n in range(3 * p):
            expect = x**(n // p) if n % p == 0 else ctx.ring.zero()
            assert phi.apply_poly(x**n) == expect


def test_descent_check():
    ctx = _ctx(5, ["x", "y"], ["x^2*y"])
    R = ctx.ring
    assert op_descends(1, R.parse("x^8*y^4"), ctx.I)
    assert not op_descends(1, R.one(), ctx.I)
    with pytest.raises(NoDescent):
        CartierOp(1, R.one(), ctx)
    CartierOp(1, R.parse("x^8*y^4"), ctx)


def test_bad_operator_arguments():
    ctx = _ctx(3, ["x"])
    with pytest.raises(ValueError):
        CartierOp(0, ctx.ring.one(), ctx)
    other = _ctx(3, ["y"])
    with pytest.raises(ValueError):
        CartierOp(1, other.ring.one(), ctx)


def test_composition_formula():
    ctx = _ctx(3, ["x", "y"])
    R = ctx.ring
    phi = CartierOp(1, R.parse("x + y"), ctx)
    psi = CartierOp(2, R.parse("x*y"), ctx)
    w = op_compose(phi, psi)
    assert w.e == 3
    assert w.f == R.parse("x + y").frobenius_power(2) * R.parse("x*y")


def test_words_deduplicated_and_limited():
    ctx = _ctx(2, ["x"])
    one = ctx.ring.one()
    C = CartierAlgebra(ctx, [CartierOp(1, one, ctx), CartierOp(1, one, ctx)])
    assert len(C.words(3)) == 1
    x = ctx.ring.var(0)
    C2 = CartierAlgebra(ctx, [CartierOp(1, one, ctx), CartierOp(1, x, ctx)],
                        word_limit=5)
    assert len(C2.words(2)) == 4
    with pytest.raises(WordLimitExceeded):
        C2.words(3)


def test_mixed_degree_words():
    ctx = _ctx(2, ["x"])
    one = ctx.ring.one()
    C = CartierAlgebra(ctx, [CartierOp(1, one, ctx), CartierOp(2, ctx.ring.var(0), ctx)])
    # degree 3: 1+1+1, 1+2, 2+1
    assert sorted(w.e for w in C.words(3)) == [3, 3, 3]


def test_twist_exponent_exact():
    assert twist_exponent(Fraction(5, 6), 7, 1) == 5
    assert twist_exponent(Fraction(5, 6), 7, 2) == 40
    assert twist_exponent(Fraction(1, 2), 3, 1) == 1
    assert twist_exponent(Fraction(1, 3), 4 - 1, 2) == 3  # 8/3 -> 3
    assert twist_exponent(0, 5, 3) == 0


def test_gauge_bound():
    ctx = _ctx(3, ["x", "y"])
    R = ctx.ring
    C = CartierAlgebra(ctx, [CartierOp(1, R.parse("x^4*y"), ctx)])
    assert C.gauge_bound() == GaugeBound(K=4, B=3)
    a = Ideal(R, [R.parse("x^2"), R.parse("y^3")])
    assert C.with_twist(a, Fraction(1, 2)).gauge_bound() == GaugeBound(K=4, B=5)


def test_twist_flags():
    ctx = _ctx(3, ["x"])
    C = CartierAlgebra.full(ctx)
    a = Ideal(ctx.ring, [ctx.ring.var(0)])
    assert not C.is_twisted
    assert not C.with_twist(a, 0).is_twisted
    assert not C.with_twist(Ideal.unit(ctx.ring), 1).is_twisted
    assert C.with_twist(a, Fraction(1, 3)).is_twisted
    with pytest.raises(ValueError):
        C.with_twist(a, -1)


@SUITE
@given(algebra_cases(quotient=True, nmax=2), st.data())
def test_descent_consistency(case, data):
    """Descended operators send I into I."""
    ctx, C, _ = case
    R = ctx.ring
    for g in ctx.I.gb:
        h = data.draw(polys(R, hi=4, max_terms=3))
        for op in C.generators:
            assert ctx.I.contains(op.apply_poly(g * h))


@SUITE
@given(st.sampled_from([2, 3]), st.data())
def test_apply_ideal_fast_path_matches_components(p, data):
    R = ring(p, 2)
    ctx = QuotientContext(R)
    e = data.draw(st.integers(1, 2))
    f = R.monomial((data.draw(st.integers(0, 6)), data.draw(st.integers(0, 6))))
    N = data.draw(monomial_ideals(R, hi=6))
    op = CartierOp(e, f, ctx)
    comps = []
    for g in N.gb:
        comps.extend(frob_decompose(f * g, e).values())
    assert op.apply_ideal(N) == Ideal(R, comps)
    a = data.draw(monomial_ideals(R, hi=4))
    assert op.apply_twisted(a, N) == op.apply_ideal(a * N)


def test_degree_one_algebra():
    ctx = _ctx(5, ["x", "y"], ["x^2*y"])
    C = CartierAlgebra.degree_one(ctx)
    assert [g.f for g in C.generators] == [ctx.ring.parse("x^8*y^4")]
    plain = _ctx(3, ["x"])
    assert CartierAlgebra.degree_one(plain).generators[0].f == plain.ring.one()
