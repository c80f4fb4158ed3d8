"""tau(M, C, a^t) as a function of t: jumping numbers and F-pure thresholds."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import CartierError, NotFpure
from .fpure import is_fpure
from .testideal import tau


def tau_t(C, M, a, t, **kw):
    """tau(M, C^(a^t)).  t = 0 (or a = R) is the untwisted test ideal."""
    return tau_t_result(C, M, a, t, **kw).tau


def tau_t_result(C, M, a, t, **kw):
    t = Fraction(t)
    if t < 0:
        raise ValueError("t must be >= 0")
    return tau(C.untwisted().with_twist(a, t), M, **kw)


class TauCurve:
    """Memoized t -> tau(M, C, a^t) (memo keyed by exact rational t)."""

    def __init__(self, C, M, a, **kw):
        self.C, self.M, self.a, self.kw = C, M, a, kw
        self.memo = {}

    def __call__(self, t):
        t = Fraction(t)
        if t not in self.memo:
            self.memo[t] = tau_t(self.C, self.M, self.a, t, **self.kw)
        return self.memo[t]


@dataclass
class JumpReport:
    jumps: list
    ideals: list
    resolution: Fraction
    T: Fraction
    unresolved: list = field(default_factory=list)

    def intervals(self):
        """(a, b, ideal) triples covering [0, T]; the last one is closed at T."""
        pts = [Fraction(0)] + list(self.jumps)
        out = []
        for i, J in enumerate(self.ideals):
            lo = pts[i]
            hi = self.jumps[i] if i < len(self.jumps) else None
            out.append((lo, hi, J))
        return out


def _grid_count(T, step):
    n = T / step
    if n.denominator != 1:
        raise ValueError(f"T={T} is not on the grid of step {step}")
    return int(n)


def jumps_in_range(C, M, a, T, E, curve=None, **kw):
    """Jumps of t -> tau on the grid of step 1/(p^E - 1) up to T.

    Each jump is reported at the first grid point whose ideal differs from
    the previous grid point (right-continuity makes that the new value).
    """
    T = Fraction(T)
    if T <= 0 or E < 1:
        raise ValueError("need T > 0 and E >= 1")
    p = C.ctx.ring.p
    step = Fraction(1, p**E - 1)
    N = _grid_count(T, step)
    f = curve or TauCurve(C, M, a, **kw)
    found = []

    def rec(lo, hi):
        tl, th = f(lo * step), f(hi * step)
        if tl == th:
            return
        if not (th <= tl):
            raise CartierError(
                f"monotonicity violated between t={lo * step} and t={hi * step}")
        if hi - lo == 1:
            found.append(hi)
            return
        mid = (lo + hi) // 2
        rec(lo, mid)
        rec(mid, hi)

    rec(0, N)
    found.sort()
    jumps = [k * step for k in found]
    ideals = [f(0)] + [f(j) for j in jumps]
    unresolved = [jumps[i] for i in range(1, len(jumps))
                  if jumps[i] - jumps[i - 1] < 2 * step]
    return JumpReport(jumps, ideals, step, T, unresolved)


def fpt(C, a, E, T=None, M=None, curve=None, **kw):
    """First grid point t <= T (step 1/(p^E-1)) with tau(a^t) != tau(R); None if none."""
    ctx = C.ctx
    base = C.untwisted()
    if not is_fpure(base):
        raise NotFpure("the untwisted pair is not F-pure")
    if T is None:
        T = Fraction(ctx.ring.n)
    T = Fraction(T)
    p = ctx.ring.p
    step = Fraction(1, p**E - 1)
    N = _grid_count(T, step)
    f = curve or TauCurve(C, M, a, **kw)
    t0 = f(0)
    if f(T) == t0:
        return None
    lo, hi = 0, N  # tau(lo) == t0, tau(hi) != t0
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if f(mid * step) == t0:
            lo = mid
        else:
            hi = mid
    return hi * step
