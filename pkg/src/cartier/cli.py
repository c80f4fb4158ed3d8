"""Command line front end: `cartier <task> --config job.toml`.

Exit codes: 0 ok, 2 config or parse error, 3 resource cap hit,
4 verification failure.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, field
from fractions import Fraction

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from . import __version__, fpure, jumping, oracles, testideal
from .errors import CartierError, ConfigError
from .ideals import Ideal, QuotientContext
from .operators import DEFAULT_WORD_LIMIT, CartierAlgebra, CartierOp
from .polyring import PolyRing

TASKS = ("underline", "fpure", "tau", "tau-nonreduced", "jumps", "fpt", "skoda")
ORACLES = ("nu", "monomial-tau", "closed-ideals")


def parse_rational(value, what):
    if isinstance(value, bool) or isinstance(value, float):
        raise ConfigError(f"{what} must be an integer or a 'num/den' string")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        parts = text.split("/")
        try:
            if len(parts) == 1:
                return Fraction(int(parts[0]))
            if len(parts) == 2:
                return Fraction(int(parts[0]), int(parts[1]))
        except (ValueError, ZeroDivisionError):
            pass
    raise ConfigError(f"{what}: cannot read {value!r} as a rational num/den")


def _need(table, key, kind, where):
    if key not in table:
        raise ConfigError(f"missing key '{key}' in [{where}]")
    v = table[key]
    if not isinstance(v, kind) or isinstance(v, bool) and kind is not bool:
        raise ConfigError(f"[{where}] {key} has the wrong type")
    return v


def _opt(table, key, kind, where, default=None):
    if key not in table:
        return default
    return _need(table, key, kind, where)


def _str_list(v, where):
    if not isinstance(v, list) or not all(isinstance(x, str) for x in v):
        raise ConfigError(f"{where} must be a list of strings")
    return v


@dataclass
class JobConfig:
    ring: PolyRing
    ctx: QuotientContext
    algebra: CartierAlgebra
    a: Ideal | None = None
    t: Fraction | None = None
    task: dict = field(default_factory=dict)
    radical: Ideal | None = None


def _parse_poly(ring, text, where):
    try:
        return ring.parse(text)
    except ConfigError as exc:
        raise ConfigError(f"{where}: {exc} in {text!r}") from exc


def load_config(data, word_limit=None):
    """Build a JobConfig from a parsed TOML tree."""
    known = {"ring", "cartier", "pair", "task"}
    extra = set(data) - known
    if extra:
        raise ConfigError(f"unknown sections: {', '.join(sorted(extra))}")
    ring_t = data.get("ring")
    if not isinstance(ring_t, dict):
        raise ConfigError("missing [ring] section")
    p = _need(ring_t, "p", int, "ring")
    names = _str_list(_need(ring_t, "vars", list, "ring"), "[ring] vars")
    try:
        ring = PolyRing(p, names)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    quot = [_parse_poly(ring, s, "[ring] quotient")
            for s in _str_list(_opt(ring_t, "quotient", list, "ring", []), "[ring] quotient")]
    I = Ideal(ring, quot)
    primes = None
    if "minimal_primes" in ring_t:
        mp = _need(ring_t, "minimal_primes", list, "ring")
        primes = [Ideal(ring, [_parse_poly(ring, s, "[ring] minimal_primes")
                               for s in _str_list(gens, "[ring] minimal_primes entry")]) + I
                  for gens in mp]
    domain = _opt(ring_t, "domain", bool, "ring", None)
    radical = None
    if "radical" in ring_t:
        radical = Ideal(ring, [_parse_poly(ring, s, "[ring] radical")
                               for s in _str_list(ring_t["radical"], "[ring] radical")])
    ctx = QuotientContext(ring, I, minimal_primes=primes, domain=domain)

    cart = data.get("cartier")
    if not isinstance(cart, dict):
        raise ConfigError("missing [cartier] section")
    gens_t = _need(cart, "generators", list, "cartier")
    if not gens_t:
        raise ConfigError("[cartier] generators must be nonempty")
    gens = []
    for g in gens_t:
        if not isinstance(g, dict):
            raise ConfigError("each generator must be a table {e = ..., f = ...}")
        e = _need(g, "e", int, "cartier.generators")
        f = _parse_poly(ring, _need(g, "f", str, "cartier.generators"), "generator f")
        if e < 1:
            raise ConfigError("generator degree e must be >= 1")
        gens.append(CartierOp(e, f, ctx))
    task_t = data.get("task", {})
    if not isinstance(task_t, dict):
        raise ConfigError("[task] must be a table")
    wl = word_limit or _opt(task_t, "word_limit", int, "task", DEFAULT_WORD_LIMIT)
    C = CartierAlgebra(ctx, gens, word_limit=wl)

    a = t = None
    pair = data.get("pair")
    if pair is not None:
        if not isinstance(pair, dict):
            raise ConfigError("[pair] must be a table")
        if "a" in pair:
            a = Ideal(ring, [_parse_poly(ring, s, "[pair] a")
                             for s in _str_list(pair["a"], "[pair] a")])
        if "t" in pair:
            t = parse_rational(pair["t"], "[pair] t")
            if t < 0:
                raise ConfigError("[pair] t must be >= 0")
    return JobConfig(ring, ctx, C, a, t, task_t, radical)


def format_ideal(ctx, J):
    return ctx.format(J)


def _braces(ctx, J):
    return "{" + ctx.format(J)[1:-1] + "}"


def _frac(x):
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


class Report:
    def __init__(self, task, cfg, e_cap, resolution):
        self.head = [f"# cartier {__version__}", f"# task: {task}"]
        if cfg is not None:
            self.head.append(f"# p: {cfg.ring.p}")
            self.head.append(f"# word_limit: {cfg.algebra.word_limit}")
        self.head.append(f"# e_cap: {e_cap if e_cap is not None else 'auto'}")
        self.head.append(f"# resolution: {resolution if resolution is not None else '-'}")
        self.meta = []
        self.body = []

    def text(self):
        return "\n".join(self.head + self.meta + self.body) + "\n"


def _te_meta(rep, te, E):
    rep.meta.append(f"# test_element: {te.c}")
    rep.meta.append("# checks passed: " + (", ".join(te.passed()) or "none"))
    if E:
        rep.meta.append(f"# e_cap_used: {E}")


def _require_pair(cfg, need_t=True):
    if cfg.a is None:
        raise ConfigError("this task needs [pair] a")
    if need_t and cfg.t is None:
        raise ConfigError("this task needs [pair] t")


def _task_value(cfg, key, cli_value, default=None):
    if cli_value is not None:
        return cli_value
    v = cfg.task.get(key, default)
    return v


def run_task(task, cfg, e_cap=None, resolution=None):
    C = cfg.algebra
    ctx = cfg.ctx
    c_text = cfg.task.get("c")
    c = _parse_poly(cfg.ring, c_text, "[task] c") if c_text else None
    if task in ("tau", "underline", "fpure") and cfg.a is not None and cfg.t is not None:
        C = C.with_twist(cfg.a, cfg.t)
    rep = Report(task, cfg, e_cap, resolution)
    if task == "underline":
        r = fpure.underline(C, None, e_cap)
        for k, J in enumerate(r.chain):
            rep.body.append(f"C_+^{k} R = {format_ideal(ctx, J)}")
        rep.body.append(f"underline = {format_ideal(ctx, r.underline)}")
        rep.body.append(f"stable_at = {r.stable_at}")
        rep.body.append("F-pure: " + ("yes" if r.is_fpure else "no"))
        if r.nilpotency_order is not None:
            rep.body.append(f"nilpotent: order {r.nilpotency_order}")
        if r.e_cap_used:
            rep.meta.append(f"# e_cap_used: {r.e_cap_used}")
    elif task == "fpure":
        if C.is_twisted:
            ok = fpure.is_fpure(C, None, e_cap)
            rep.body.append("F-pure: " + ("yes" if ok else "no"))
        else:
            w = fpure.fpure_witness(C)
            if w is None:
                ok = fpure.is_fpure(C)
                rep.body.append("F-pure: yes; witness: none found" if ok else "F-pure: no")
            else:
                rep.body.append(f"F-pure: yes; witness: {w}")
    elif task == "tau":
        r = testideal.tau(C, None, c=c, e_cap=e_cap)
        _te_meta(rep, r.test_element, r.e_cap_used)
        rep.body.append(f"underline = {format_ideal(ctx, r.underline)}")
        rep.body.append(f"tau = {format_ideal(ctx, r.tau)}")
        reg = r.tau == r.underline == ctx.unit()
        rep.body.append("F-regular: " + ("yes" if reg else "no"))
    elif task == "tau-nonreduced":
        r = testideal.tau_nonreduced(C, radical=cfg.radical, c=c, e_cap=e_cap)
        _te_meta(rep, r.test_element, 0)
        rep.body.append(f"reduced quotient: S / {format_ideal(QuotientContext(cfg.ring), r.reduced_ctx.I)}")
        rep.body.append(f"underline = {format_ideal(ctx, r.underline)}")
        rep.body.append(f"tau = {format_ideal(ctx, r.tau)}")
    elif task == "jumps":
        _require_pair(cfg, need_t=False)
        T = parse_rational(_task_value(cfg, "T", None, None), "[task] T") \
            if "T" in cfg.task else None
        if T is None:
            raise ConfigError("jumps needs [task] T")
        E = _task_value(cfg, "resolution", resolution, 2)
        r = jumping.jumps_in_range(C, None, cfg.a, T, E, c=c)
        rep.head[-1] = f"# resolution: 1/{cfg.ring.p**E - 1} (E = {E})"
        rep.body.append("jumps = {" + ", ".join(_frac(j) for j in r.jumps) + "}"
                        + " (resolution-limited)")
        for lo, hi, J in r.intervals():
            if hi is None:
                rep.body.append(f"[{_frac(lo)}, {_frac(T)}] -> {_braces(ctx, J)}")
            else:
                rep.body.append(f"[{_frac(lo)}, {_frac(hi)}) -> {_braces(ctx, J)}")
        if r.unresolved:
            rep.body.append("unresolved: " + ", ".join(_frac(j) for j in r.unresolved))
    elif task == "fpt":
        _require_pair(cfg, need_t=False)
        E = _task_value(cfg, "resolution", resolution, 2)
        T = parse_rational(cfg.task["T"], "[task] T") if "T" in cfg.task else None
        r = jumping.fpt(C, cfg.a, E, T=T, c=c)
        rep.head[-1] = f"# resolution: 1/{cfg.ring.p**E - 1} (E = {E})"
        bound = T if T is not None else Fraction(cfg.ring.n)
        rep.body.append(f"fpt = {_frac(r)}" if r is not None else f"fpt > {_frac(bound)}")
    elif task == "skoda":
        _require_pair(cfg)
        r = testideal.skoda_check(C, cfg.a, cfg.t, c=c, e_cap=e_cap)
        rep.body.append(f"a * tau(a^{_frac(r.t - 1)}) = {format_ideal(ctx, r.lhs)}")
        rep.body.append(f"tau(a^{_frac(r.t)}) = {format_ideal(ctx, r.rhs)}")
        rep.body.append("containment: " + ("yes" if r.containment else "no"))
        rep.body.append("equality: " + ("yes" if r.equality else "no")
                        + " (expected: " + ("yes" if r.equality_expected else "not asserted") + ")")
    else:
        raise ConfigError(f"unknown task {task!r}")
    return rep


def run_oracle(which, cfg, resolution=None):
    rep = Report(f"oracle {which}", cfg, None, resolution)
    ring = cfg.ring
    S = QuotientContext(ring)
    if which == "nu":
        _require_pair(cfg, need_t=False)
        if len(cfg.a.gb) != 1:
            raise ConfigError("oracle nu needs a principal [pair] a")
        f = cfg.a.gb[0]
        E = _task_value(cfg, "resolution", resolution, 1)
        for e in range(1, E + 1):
            rep.body.append(f"nu({ring.p}^{e}) = {oracles.nu_value(f, e)}")
    elif which == "monomial-tau":
        _require_pair(cfg)
        rep.body.append(f"tau = {format_ideal(S, oracles.monomial_tau(cfg.a, cfg.t))}")
    elif which == "closed-ideals":
        B = cfg.task.get("B", 12)
        if not isinstance(B, int) or isinstance(B, bool):
            raise ConfigError("[task] B must be an integer")
        out = oracles.bruteforce_closed_ideals(cfg.algebra, B)
        for J in sorted(out, key=lambda J: (not J.is_unit(), J.is_zero(),
                                            J.gauge() if not J.is_zero() else 0)):
            rep.body.append(format_ideal(S, J))
    else:
        raise ConfigError(f"unknown oracle {which!r}")
    return rep


def build_parser():
    ap = argparse.ArgumentParser(
        prog="cartier",
        description="Cartier algebras over F_p: F-purity, test ideals, jumping numbers.",
        epilog="The full algebra on a polynomial ring is entered as the single "
               "generator { e = 1, f = \"1\" }.")
    ap.add_argument("task", choices=TASKS + ("oracle",))
    ap.add_argument("oracle_name", nargs="?", choices=ORACLES,
                    help="oracle to run when task is 'oracle'")
    ap.add_argument("--config", required=True)
    ap.add_argument("--e-cap", type=int, default=None)
    ap.add_argument("--resolution", type=int, default=None)
    ap.add_argument("--word-limit", type=int, default=None)
    return ap


def main(argv=None):
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    try:
        try:
            with open(args.config, "rb") as fh:
                data = tomllib.load(fh)
        except OSError as exc:
            raise ConfigError(f"cannot read config: {exc}") from exc
        except tomllib.TOMLDecodeError as exc:
            raise ConfigError(f"config is not valid TOML: {exc}") from exc
        cfg = load_config(data, args.word_limit)
        named = cfg.task.get("name")
        if args.task == "oracle":
            if args.oracle_name is None:
                raise ConfigError("oracle needs a name: " + ", ".join(ORACLES))
            rep = run_oracle(args.oracle_name, cfg, args.resolution)
        else:
            if named is not None and named != args.task:
                raise ConfigError(
                    f"config names task {named!r} but {args.task!r} was requested")
            e_cap = args.e_cap if args.e_cap is not None else cfg.task.get("e_cap")
            rep = run_task(args.task, cfg, e_cap, args.resolution)
    except CartierError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    sys.stdout.write(rep.text())
    return 0


if __name__ == "__main__":
    sys.exit(main())
