"""Fixed points of Cartier algebras: C_+ N, the stable member of C_+^e M, F-purity."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import IterationCap, NotMonomial
from .ideals import Ideal, lift, monomial_radical
from .polyring import frob_decompose

ITER_CAP = 64
CAP_WINDOW = 8  # how far past the starting degree the twisted search may go


def _ppart(n, p):
    r = 1
    while n % p == 0:
        n //= p
        r *= p
    return r


def auto_e_cap(C, extra_gauge=0):
    """Starting degree cap for a twisted algebra.

    Truncating the twisted sum at degree E undershoots by roughly
    (gauge of the multiplier + twist slack) / p^E, while distinct answers are
    separated by about 1/den(t).  We start at the first E where p^E clears
    den(t) times the gauge mass of everything multiplied in.
    """
    if not C.is_twisted:
        return 1
    a, t = C.twist
    p = C.p
    d = max(max(g.gauge() for g in a.gb), 0)
    need = Fraction(t).denominator * (1 + extra_gauge + d) * max(d, 1)
    e = 1
    while p**e < need:
        e += 1
    return e


def single_step(C, N, e_cap=None):
    """U(N): one application of the generators (untwisted) or of all twisted
    words of degree <= e_cap."""
    ctx = C.ctx
    if N.is_zero() or N <= ctx.I:
        return ctx.I
    if not C.is_twisted:
        out = ctx.I
        for g in C.generators:
            out = out + g.apply_ideal(N)
            if out.is_unit():
                break
        return out
    if e_cap is None:
        raise ValueError("twisted single_step needs a degree cap")
    out = ctx.I
    for e in range(1, e_cap + 1):
        for i in range(len(C.words(e))):
            out = out + ctx.lift(C.twisted_image(e, i, N))
            if out.is_unit():
                return out
    return out


def cplus_fixed_cap(C, N, e_cap=None):
    """C_+N = sum_k U^k(N) at a fixed cap, by ascending iteration."""
    cur = single_step(C, N, e_cap)
    for _ in range(ITER_CAP):
        nxt = cur + single_step(C, cur, e_cap)
        if nxt == cur:
            return cur
        cur = nxt
    raise IterationCap("C_+ ascent did not stabilize")


def _adaptive(C, run, e_cap, extra_gauge=0):
    """Evaluate run(E) at caps E, E+1, ... until two consecutive values agree.

    Returns (value, E).  Untwisted algebras need no cap.  A unit-ideal value
    cannot grow further, so it ends the search at once.
    """
    if not C.is_twisted:
        return run(None), 0
    if e_cap is not None:
        return run(e_cap), e_cap
    E = auto_e_cap(C, extra_gauge)
    prev = run(E)
    for E1 in range(E + 1, E + CAP_WINDOW + 1):
        if _is_top(C, prev):
            return prev, E1 - 1
        cur = run(E1)
        if cur == prev:
            return cur, E1
        prev = cur
    raise IterationCap("twisted degree cap did not stabilize")


def _is_top(C, value):
    if isinstance(value, Ideal):
        return value.is_unit()
    return False


def cplus(C, N, e_cap=None):
    return _adaptive(C, lambda E: cplus_fixed_cap(C, N, E), e_cap)[0]


@dataclass
class FpureReport:
    underline: Ideal
    chain: list = field(default_factory=list)
    stable_at: int = 0
    is_fpure: bool = False
    nilpotency_order: int | None = None
    e_cap_used: int = 0


def underline_fixed_cap(C, M, e_cap=None):
    chain = [M]
    cur = M
    for k in range(ITER_CAP):
        nxt = cplus_fixed_cap(C, cur, e_cap)
        if nxt == cur:
            zero = cur <= C.ctx.I
            return FpureReport(
                underline=cur, chain=chain, stable_at=k,
                is_fpure=(k == 0),
                nilpotency_order=(_first_zero(C, chain) if zero else None),
                e_cap_used=e_cap or 0)
        chain.append(nxt)
        cur = nxt
    raise IterationCap("descending chain C_+^e M did not stabilize")


def _first_zero(C, chain):
    for i, J in enumerate(chain):
        if J <= C.ctx.I:
            return i
    return len(chain)


def require_submodule(C, M):
    """Raise ValueError unless M is stable under the (untwisted) generators.

    A C-submodule is also stable under every twist of C, so checking the
    untwisted algebra suffices.
    """
    if M.is_unit() or M <= C.ctx.I:
        return
    if not cplus(C.untwisted(), M) <= M:
        raise ValueError("M is not a C-submodule; take its closure first")


def underline(C, M=None, e_cap=None):
    """Stable member of M, C_+M, C_+^2 M, ... with the chain that led there.

    M must be a C-submodule (the chain only descends for those)."""
    if M is None:
        M = C.ctx.unit()
    require_submodule(C, M)
    if not C.is_twisted:
        return underline_fixed_cap(C, M, None)
    rep, E = _adaptive_report(C, M, e_cap)
    return rep


def _adaptive_report(C, M, e_cap):
    holder = {}

    def run(E):
        rep = underline_fixed_cap(C, M, E)
        holder[E] = rep
        return rep.underline

    _, E = _adaptive(C, run, e_cap)
    rep = holder[E]
    rep.e_cap_used = E
    return rep, E


def is_fpure(C, M=None, e_cap=None):
    if M is None:
        M = C.ctx.unit()
    return cplus(C, M, e_cap) == M


def is_nilpotent(C, M=None, e_cap=None):
    """Smallest n with C_+^n M = 0, or None when M is not nilpotent."""
    return underline(C, M, e_cap).nilpotency_order


@dataclass
class Witness:
    word: object  # the CartierOp
    g: object     # w(g) == 1

    def __str__(self):
        return f"e={self.word.e}, g={self.g}"


def fpure_witness(C, max_degree=None):
    """A word w and g in R with w(g) = 1, or None if (R, C) is not F-pure.

    Only the untwisted algebra is searched.  For each degree the image of R
    under each word is generated by the Frobenius components of the word's
    polynomial f; if they generate the unit ideal, write 1 = sum h_j r_j and
    g = sum h_j^q x^(q-1-j).  Modulo the quotient ideal the preimage is a
    representative.
    """
    ctx = C.ctx
    ring = ctx.ring
    if not is_fpure(C.untwisted()):
        return None
    if max_degree is None:
        max_degree = 6
    for e in range(1, max_degree + 1):
        q = ring.p**e
        for w in C.words(e):
            comps = frob_decompose(w.f, e)
            js = sorted(comps)
            gens = [comps[j] for j in js] + list(ctx.I.gb)
            if not Ideal(ring, gens).is_unit():
                continue
            cof = lift(ring.one(), gens)
            if cof is None:
                continue
            g = ring.zero()
            for j, h in zip(js, cof):
                if h:
                    g = g + h.frobenius_power(e).mul_monomial(
                        tuple(q - 1 - a for a in j))
            g = ctx.I.reduce(g)
            if ctx.I.reduce(w.apply_poly(g) - ring.one()).is_zero():
                return Witness(w, g)
    return None


def annihilator(ctx, M):
    """Ann_R(M) = (I : M) as an ideal of S containing I."""
    return ctx.I.colon(M)


def check_reduced_annihilator(ctx, M, radical=None):
    """True iff Ann_R(M) is radical.  Needs a monomial annihilator or a supplied radical."""
    ann = annihilator(ctx, M)
    if radical is None:
        if not ann.is_monomial:
            raise NotMonomial("annihilator is not monomial; supply its radical")
        radical = monomial_radical(ann)
    return radical == ann
