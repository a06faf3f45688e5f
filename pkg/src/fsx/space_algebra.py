"""Symbolic algebra over parameterized function spaces.

Expressions are immutable trees.  Leaves are concrete families (Lebesgue
with a power or named weight, Lorentz, Lambda, Marcinkiewicz, the zero space
and the space of all measurable functions); interior nodes are the space
constructions (Kothe dual, pointwise product, multipliers, symmetrization,
convexification, Cesaro, Tandori, sum, intersection).

Exponents are exact: every finite exponent is a ``Fraction`` and infinity is
``math.inf``.  Reciprocal arithmetic such as 1/p3 = 1/p2 - 1/p1 therefore
never picks up rounding.

``simplify`` rewrites to a fixed point.  Every rule that fires is logged;
every node left symbolic carries a note naming the hypothesis that blocked it.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Iterator, Union

from . import weights as W

INF = math.inf
Num = Union[Fraction, float]

DOMAINS = ("inf", "01")


class DomainMismatch(ValueError):
    pass


class BadExponent(ValueError):
    pass


# -- exact numbers -------------------------------------------------------------

def num(x) -> Num:
    """Coerce to an exact exponent: Fraction, or inf."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise BadExponent(f"not a number: {x!r}")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, float):
        if math.isinf(x):
            if x < 0:
                raise BadExponent("negative infinity is not an exponent")
            return INF
        if math.isnan(x):
            raise BadExponent("NaN exponent")
        return Fraction(repr(x))
    if isinstance(x, str):
        s = x.strip()
        if s in ("inf", "+inf", "oo"):
            return INF
        try:
            return Fraction(s)
        except (ValueError, ZeroDivisionError):
            raise BadExponent(f"not a number: {x!r}") from None
    raise BadExponent(f"not a number: {x!r}")


def inv(x: Num) -> Num:
    if x == INF:
        return Fraction(0)
    if x == 0:
        return INF
    return 1 / x


def fmt_num(x: Num) -> str:
    """Shortest exact rendering: integer, terminating decimal, or a/b."""
    if x == INF:
        return "inf"
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    d = x.denominator
    for p in (2, 5):
        while d % p == 0:
            d //= p
    if d == 1:
        s = f"{float(x)!r}"
        if Fraction(s) == x and "e" not in s:
            return s
    return f"{x.numerator}/{x.denominator}"


def _pos(x: Num, what: str) -> Num:
    x = num(x)
    if not x > 0:
        raise BadExponent(f"{what} must be positive, got {fmt_num(x) if x != INF else 'inf'}")
    return x


# -- symbolic weights ----------------------------------------------------------

@dataclass(frozen=True)
class PowerW:
    alpha: Fraction = Fraction(0)

    def __post_init__(self):
        a = num(self.alpha)
        if a == INF:
            raise BadExponent("weight exponent must be finite")
        object.__setattr__(self, "alpha", a)

    def text(self) -> str:
        return f"t^{fmt_num(self.alpha) if self.alpha >= 0 else '-' + fmt_num(-self.alpha)}"

    def numeric(self) -> W.Weight:
        return W.Power(float(self.alpha))


@dataclass(frozen=True)
class NamedW:
    id: str

    def __post_init__(self):
        if self.id not in W.NAMED_IDS:
            raise UnknownWeight(self.id)

    def text(self) -> str:
        return self.id

    def numeric(self) -> W.Weight:
        return W.named_weight(self.id)


class UnknownWeight(KeyError):
    pass


Weight = Union[PowerW, NamedW]
ONE = PowerW(Fraction(0))


# -- expression tree -------------------------------------------------------------

@dataclass(frozen=True)
class Expr:
    domain: str = field(default="inf", kw_only=True)
    notes: tuple = field(default=(), compare=False, kw_only=True, repr=False)

    def children(self) -> tuple["Expr", ...]:
        return ()

    def with_children(self, kids) -> "Expr":
        return self

    def __str__(self) -> str:
        from .syntax import print_expr

        return print_expr(self)


@dataclass(frozen=True)
class Zero(Expr):
    pass


@dataclass(frozen=True)
class MeasurableAll(Expr):
    pass


@dataclass(frozen=True)
class Lebesgue(Expr):
    p: Num = Fraction(1)
    weight: Weight = ONE

    def __post_init__(self):
        object.__setattr__(self, "p", _pos(self.p, "p"))


@dataclass(frozen=True)
class Lorentz(Expr):
    p: Num = Fraction(1)
    q: Num = Fraction(1)

    def __post_init__(self):
        object.__setattr__(self, "p", _pos(self.p, "p"))
        object.__setattr__(self, "q", _pos(self.q, "q"))


@dataclass(frozen=True)
class Lambda(Expr):
    """Lambda_{p, w^p}; the weight is stored before the power."""

    p: Num = Fraction(1)
    weight: Weight = ONE

    def __post_init__(self):
        object.__setattr__(self, "p", _pos(self.p, "p"))


@dataclass(frozen=True)
class Marc(Expr):
    weight: Weight = ONE


@dataclass(frozen=True)
class _Unary(Expr):
    e: Expr = None

    def children(self):
        return (self.e,)

    def with_children(self, kids):
        return replace(self, e=kids[0], notes=())


@dataclass(frozen=True)
class _Binary(Expr):
    a: Expr = None
    b: Expr = None

    def children(self):
        return (self.a, self.b)

    def with_children(self, kids):
        return replace(self, a=kids[0], b=kids[1], notes=())


@dataclass(frozen=True)
class Dual(_Unary):
    pass


@dataclass(frozen=True)
class Symmetrize(_Unary):
    pass


@dataclass(frozen=True)
class Cesaro(_Unary):
    pass


@dataclass(frozen=True)
class Tandori(_Unary):
    pass


@dataclass(frozen=True)
class Convexify(_Unary):
    r: Num = Fraction(1)

    def __post_init__(self):
        object.__setattr__(self, "r", _pos(self.r, "convexification exponent"))


@dataclass(frozen=True)
class Product(_Binary):
    pass


@dataclass(frozen=True)
class Multiplier(_Binary):
    pass


@dataclass(frozen=True)
class Sum(_Binary):
    pass


@dataclass(frozen=True)
class Intersect(_Binary):
    pass


LEAVES = (Zero, MeasurableAll, Lebesgue, Lorentz, Lambda, Marc)


def walk(e: Expr) -> Iterator[Expr]:
    yield e
    for c in e.children():
        yield from walk(c)


def with_domain(e: Expr, domain: str) -> Expr:
    kids = tuple(with_domain(c, domain) for c in e.children())
    out = e.with_children(kids) if kids else e
    return replace(out, domain=domain)


def is_leaf(e: Expr) -> bool:
    return isinstance(e, LEAVES)


@dataclass(frozen=True)
class Unknown:
    """No rule applies; ``reason`` names the missing or failed hypothesis."""

    reason: str

    def __bool__(self):
        return False


# -- small closed forms ------------------------------------------------------------

def conjugate(p):
    """p' with 1/p + 1/p' = 1 for p > 1; 1 for p = inf; inf for p <= 1."""
    exact = isinstance(p, Fraction)
    if p == INF or (isinstance(p, float) and math.isinf(p)):
        return Fraction(1) if exact else 1.0
    if not p > 0:
        raise BadExponent("conjugate needs p > 0")
    if p <= 1:
        return INF
    return p / (p - 1)


def aoki_exponent(C: float) -> float:
    """Exponent p in (0, 1] with C = 2^{1/p - 1}."""
    if C < 1:
        raise ValueError("quasi-norm constant must be >= 1")
    return 1.0 / (1.0 + math.log2(C))


def rho_hat(theta: float) -> tuple[float, float]:
    """Dual of rho(u, v) = u^theta v^(1-theta) under
    rho_hat(a, b) = inf (a u + b v) / rho(u, v); returns (theta, K) with
    rho_hat(a, b) = K a^theta b^(1-theta)."""
    if not 0 < theta < 1:
        if theta in (0, 1):
            return float(theta), 1.0
        raise ValueError("theta must lie in [0, 1]")
    K = theta ** -theta * (1 - theta) ** -(1 - theta)
    return float(theta), float(K)


def dual_power_function(theta: float, const: float = 1.0) -> tuple[float, float]:
    """Dual of const * u^theta v^(1-theta): the constant divides."""
    t, K = rho_hat(theta)
    return t, K / const


# -- views of leaves ---------------------------------------------------------------

def as_lorentz(e: Expr):
    """(p, q) for Lorentz leaves and unweighted Lebesgue, else None."""
    if isinstance(e, Lorentz):
        return e.p, e.q
    if isinstance(e, Lebesgue) and e.weight == ONE:
        return e.p, e.p
    return None


def as_power_lebesgue(e: Expr):
    if isinstance(e, Lebesgue) and isinstance(e.weight, PowerW):
        return e.p, e.weight.alpha
    return None


def is_linf(e: Expr) -> bool:
    return as_lorentz(e) == (INF, INF)


def lorentz_leaf(p: Num, q: Num, domain: str) -> Expr:
    if p == INF and q != INF:
        return Zero(domain=domain)
    if p == q:
        return Lebesgue(p, ONE, domain=domain)
    return Lorentz(p, q, domain=domain)


def normalize_leaf(e: Expr):
    """Canonical spelling of a leaf, or None when it is already canonical.

    Returns (new_leaf, rule_id, description)."""
    d = e.domain
    if isinstance(e, Lorentz):
        if e.p == INF and e.q != INF:
            return Zero(domain=d), "lorentz-infinite-p", "L^{inf,q} is the zero space for finite q"
        if e.p == e.q:
            return Lebesgue(e.p, domain=d), "lorentz-diagonal", "L^{p,p} is L^p"
        return None
    if isinstance(e, Lambda) and isinstance(e.weight, PowerW):
        a, p = e.weight.alpha, e.p
        if p == INF:
            return Marc(e.weight, domain=d), "lambda-infinite", "Lambda with p=inf is Marcinkiewicz"
        s = a + 1 / p
        if s <= 0:
            return Zero(domain=d), "lambda-trivial", "Lambda_{p,t^{ap}} is zero unless ap > -1"
        return lorentz_leaf(1 / s, p, d), "lambda-as-lorentz", "Lambda_{q,t^{q/p-1}} is L^{p,q}"
    if isinstance(e, Marc) and isinstance(e.weight, PowerW):
        a = e.weight.alpha
        if a < 0:
            return Zero(domain=d), "marc-trivial", "M_{t^a} is zero for a < 0"
        if a == 0:
            return Lebesgue(INF, domain=d), "marc-as-linf", "M_1 is L^inf"
        return Lorentz(1 / a, INF, domain=d), "marc-as-lorentz", "M_{t^{1/p}} is L^{p,inf}"
    return None


# -- rules: conjugate-type operations ------------------------------------------------

def _same_domain(*es: Expr) -> str:
    doms = {e.domain for e in es}
    if len(doms) > 1:
        raise DomainMismatch(f"mixed domains {sorted(doms)}")
    return doms.pop()


def convexify(e: Expr, r) -> Expr | Unknown:
    """E^{(r)} = {x : |x|^r in E}."""
    r = _pos(r, "r")
    d = e.domain
    if r == 1:
        return e
    if isinstance(e, (Zero, MeasurableAll)):
        return e
    if isinstance(e, Lorentz):
        return Lorentz(e.p * r, e.q * r, domain=d)
    if isinstance(e, Lebesgue) and isinstance(e.weight, PowerW):
        return Lebesgue(e.p * r, PowerW(e.weight.alpha / r), domain=d)
    if isinstance(e, Lambda) and isinstance(e.weight, PowerW):
        return Lambda(e.p * r, PowerW(e.weight.alpha / r), domain=d)
    if isinstance(e, Marc) and isinstance(e.weight, PowerW):
        return Marc(PowerW(e.weight.alpha / r), domain=d)
    if isinstance(e, Tandori):
        inner = convexify(e.e, r)
        return Tandori(inner, domain=d) if not isinstance(inner, Unknown) else inner
    return Unknown(f"no convexification rule for {type(e).__name__}")


def lorentz_multiplier(p1, q1, p2, q2, domain="inf") -> Expr:
    """M(L^{p1,q1}, L^{p2,q2}) by the full Lorentz case analysis."""
    if p1 == INF and q1 == INF:
        return lorentz_leaf(p2, q2, domain)
    if p2 == INF and q2 == INF:
        return Zero(domain=domain)
    if p1 == INF or p2 == INF:
        # one side is the zero space L^{inf,q}
        return MeasurableAll(domain=domain) if p1 == INF else Zero(domain=domain)
    if p1 < p2 or (p1 == p2 and q1 > q2):
        return Zero(domain=domain)
    p3 = inv(inv(p2) - inv(p1))
    q3 = inv(inv(q2) - inv(q1)) if q1 > q2 else INF
    return lorentz_leaf(p3, q3, domain)


def lorentz_multiplier_case(p1, q1, p2, q2) -> str:
    """'zero' or 'resolved' for finite p1, p2 (which branch of the case split)."""
    return "zero" if (p1 < p2 or (p1 == p2 and q1 > q2)) else "resolved"


def lorentz_dual(p, q, domain="inf") -> Expr:
    """Kothe dual of L^{p,q} as M(L^{p,q}, L^1)."""
    return lorentz_multiplier(p, q, Fraction(1), Fraction(1), domain)


def kothe_dual(e: Expr) -> Expr | Unknown:
    d = e.domain
    if isinstance(e, Zero):
        return MeasurableAll(domain=d)
    if isinstance(e, MeasurableAll):
        return Zero(domain=d)
    lz = as_lorentz(e)
    if lz is not None:
        return lorentz_dual(*lz, d)
    pl = as_power_lebesgue(e)
    if pl is not None:
        p, a = pl
        if p < 1:
            return Zero(domain=d)
        return Lebesgue(conjugate(p), PowerW(-a), domain=d)
    if isinstance(e, (Lambda, Marc)):
        n = normalize_leaf(e)
        if n is not None:
            return kothe_dual(n[0])
    if isinstance(e, Cesaro):
        why = cesaro_gate(e.e, d)
        if why:
            return Unknown(f"Cesaro duality: {why}")
        inner = kothe_dual(e.e)
        return Tandori(inner, domain=d) if not isinstance(inner, Unknown) else inner
    if isinstance(e, Tandori):
        inner = kothe_dual(e.e)
        if isinstance(inner, Unknown):
            return inner
        why = cesaro_gate(inner, d)
        if why:
            return Unknown(f"Tandori duality: {why}")
        return Cesaro(inner, domain=d)
    return Unknown(f"no Kothe dual rule for {type(e).__name__}")


def product(a: Expr, b: Expr) -> Expr | Unknown:
    """Pointwise product space a . b."""
    d = _same_domain(a, b)
    if isinstance(a, Zero) or isinstance(b, Zero):
        return Zero(domain=d)
    if is_linf(b) and not isinstance(a, MeasurableAll):
        return a
    if is_linf(a) and not isinstance(b, MeasurableAll):
        return b
    la, lb = as_lorentz(a), as_lorentz(b)
    if la is not None and lb is not None:
        return lorentz_leaf(inv(inv(la[0]) + inv(lb[0])), inv(inv(la[1]) + inv(lb[1])), d)
    pa, pb = as_power_lebesgue(a), as_power_lebesgue(b)
    if pa is not None and pb is not None:
        p = inv(inv(pa[0]) + inv(pb[0]))
        return Lebesgue(p, PowerW(pa[1] + pb[1]), domain=d)
    for x, y in ((a, b), (b, a)):
        if isinstance(x, Cesaro) and isinstance(y, Tandori):
            F = product(x.e, y.e)
            if isinstance(F, Unknown):
                return F
            why = cesaro_gate(x.e, d) or cesaro_gate(F, d)
            if why:
                return Unknown(f"Cesaro factorization: {why}")
            if multiplier(x.e, F) != y.e:
                return Unknown("Cesaro factorization: the Tandori factor is not M(E, F)")
            return Cesaro(F, domain=d)
    return Unknown(f"no product rule for {type(a).__name__} . {type(b).__name__}")


def cesaro_gate(E: Expr, domain: str) -> str | None:
    """None when E is a symmetric Banach space with H bounded (Lorentz or
    Lebesgue catalog) on (0, inf); otherwise the failed hypothesis."""
    if domain != "inf":
        return "only the half-line (0, inf) is covered"
    lz = as_lorentz(E)
    if lz is None:
        return f"{type(E).__name__} is outside the Lorentz/Lebesgue catalog"
    p, q = lz
    if p == INF and q == INF:
        return None
    if p == INF:
        return "L^{inf,q} is the zero space"
    if not p > 1:
        return "Hardy operator unbounded (needs p > 1)"
    if not q >= 1:
        return "not a Banach space (needs q >= 1)"
    return None


def multiplier(a: Expr, b: Expr) -> Expr | Unknown:
    """Pointwise multiplier space M(a, b) = {x : x y in b for all y in a}."""
    d = _same_domain(a, b)
    if isinstance(a, Zero):
        return MeasurableAll(domain=d)
    if isinstance(b, MeasurableAll):
        return MeasurableAll(domain=d)
    if isinstance(b, Zero) or isinstance(a, MeasurableAll):
        return Zero(domain=d)
    la, lb = as_lorentz(a), as_lorentz(b)
    if la is not None and lb is not None:
        return lorentz_multiplier(la[0], la[1], lb[0], lb[1], d)
    pa, pb = as_power_lebesgue(a), as_power_lebesgue(b)
    if pa is not None and pb is not None:
        (p, al), (q, be) = pa, pb
        if q > p:
            return Zero(domain=d)
        s = INF if p == q else inv(inv(q) - inv(p))
        return Lebesgue(s, PowerW(be - al), domain=d)
    if _lambda_like(a) and _lambda_like(b):
        return power_lambda_multiplier(a, b)
    if isinstance(a, Cesaro) and isinstance(b, Cesaro):
        return cesaro_multiplier(a.e, b.e, d)
    if isinstance(a, Tandori) and isinstance(b, Tandori):
        # M(E~, F~) = M((F~)', (E~)') = M(C F', C E')
        fa, fb = kothe_dual(b), kothe_dual(a)
        if isinstance(fa, Unknown) or isinstance(fb, Unknown):
            return Unknown("Tandori multipliers need both duals")
        if not (isinstance(fa, Cesaro) and isinstance(fb, Cesaro)):
            return Unknown("Tandori multipliers: duals are not Cesaro spaces")
        return cesaro_multiplier(fa.e, fb.e, d)
    return Unknown(f"no multiplier rule for M({type(a).__name__}, {type(b).__name__})")


def cesaro_multiplier(E: Expr, F: Expr, d: str) -> Expr | Unknown:
    """M(CE, CF) = Tandori(M(E, F)) when F factors through E."""
    why = cesaro_gate(E, d) or cesaro_gate(F, d)
    if why:
        return Unknown(f"Cesaro multipliers: {why}")
    G = multiplier(E, F)
    if isinstance(G, Unknown):
        return G
    if isinstance(G, Zero):
        return Unknown("Cesaro multipliers: M(E, F) = {0}, so F does not factor through E")
    if product(E, G) != lorentz_leaf(*as_lorentz(F), d):
        return Unknown("Cesaro multipliers: F is not E . M(E, F)")
    return Tandori(G, domain=d)


# -- power-weight Lambda / Marcinkiewicz multipliers --------------------------------

def _lambda_like(e: Expr) -> bool:
    return isinstance(e, (Lambda, Marc)) and isinstance(e.weight, PowerW)


@dataclass(frozen=True)
class Condition:
    name: str
    holds: bool
    statement: str


def power_multiplier_conditions(p, q, a, b) -> list[Condition]:
    """Hypotheses for M(Lambda_{p,t^{ap}}, Lambda_{q,t^{bq}}) (p, q may be inf,
    meaning Marcinkiewicz spaces M_{t^a}, M_{t^b}).

    Names: normable_E, normable_F (both symmetrizations nonzero and
    normable), dual_F_nontrivial, nontrivial_multiplier_dual (the Kothe dual
    of E . F' symmetrizes to a nonzero space), hardy_dual_F (H* bounded on
    F), plus range conditions of each case.
    """
    p, q, a, b = num(p), num(q), Fraction(a), Fraction(b)
    ip, iq = inv(p), inv(q)
    out: list[Condition] = []
    if p != INF and q != INF and 1 < q < p:
        s_inv = iq - ip
        out += [
            Condition("normable_E", -ip < a < 1 - ip, "-1/p < a < 1 - 1/p"),
            Condition("normable_F", -iq < b < 1 - iq, "-1/q < b < 1 - 1/q"),
            Condition("dual_F_nontrivial", b < 1 - iq, "b < 1 - 1/q"),
            Condition("nontrivial_multiplier_dual", (b - a) / s_inv > -1, "(b - a) pq/(p - q) > -1"),
            Condition("hardy_dual_F", b > -iq, "b > -1/q"),
        ]
    elif p != INF and q == 1 and 1 < p:
        out += [
            Condition("normable_E", -ip < a < 1 - ip, "-1/p < a < 1 - 1/p"),
            Condition("normable_F", -1 < b < 0, "-1 < b < 0"),
            Condition("nontrivial_multiplier_dual", (b - a) / (1 - ip) > -1, "(b - a) p/(p - 1) > -1"),
        ]
    elif p == INF and q == 1:
        out += [
            Condition("normable_E", 0 <= a < 1, "0 <= a < 1"),
            Condition("normable_F", -1 < b <= 0, "-1 < b <= 0"),
            Condition("nontrivial_multiplier_dual", b - a > -1, "b - a > -1"),
        ]
    elif p != INF and p == q and p >= 1:
        out += [
            Condition("normable_E", -ip < a < 1 - ip, "-1/p < a < 1 - 1/p"),
            Condition("normable_F", -ip < b < 1 - ip, "-1/p < b < 1 - 1/p"),
            Condition("nontrivial_multiplier_dual", b - a >= 0, "b - a >= 0"),
            Condition("hardy_dual_product", b - a < ip, "b - a < 1/p"),
        ]
    elif p == INF and q == INF:
        out += [
            Condition("normable_E", 0 < a < 1, "0 < a < 1"),
            Condition("normable_F", 0 < b < 1, "0 < b < 1"),
            Condition("nontrivial_multiplier_dual", b - a >= 0, "b - a >= 0"),
        ]
    else:
        out.append(Condition("exponent_range", False, "needs 1 < q < p < inf, q = 1 < p <= inf, or 1 <= p = q <= inf"))
    return out


def power_lambda_multiplier(a: Expr, b: Expr) -> Expr | Unknown:
    """Gated multiplier rule between power-weight Lambda/Marcinkiewicz spaces."""
    d = _same_domain(a, b)
    p = INF if isinstance(a, Marc) else a.p
    q = INF if isinstance(b, Marc) else b.p
    al, be = a.weight.alpha, b.weight.alpha
    conds = power_multiplier_conditions(p, q, al, be)
    failed = [c for c in conds if not c.holds]
    if failed:
        return Unknown("failed: " + ", ".join(f"{c.name} ({c.statement})" for c in failed))
    w = PowerW(be - al)
    if p == q:
        return Marc(w, domain=d)
    s = inv(inv(q) - inv(p))
    return Lambda(s, w, domain=d)


# -- symmetrization ------------------------------------------------------------------

def symmetrize(e: Expr) -> Expr | Unknown:
    """E^(*) = {x : x* in E}."""
    d = e.domain
    if isinstance(e, (Zero, MeasurableAll, Lorentz, Lambda, Marc)):
        return e
    if isinstance(e, Lebesgue):
        if e.weight == ONE:
            return e
        if e.p == INF:
            return Marc(e.weight, domain=d)
        return Lambda(e.p, e.weight, domain=d)
    if isinstance(e, Tandori) and as_lorentz(e.e) is not None:
        # the majorant of a decreasing function is itself
        return Unknown("Tandori spaces are not symmetric")
    return Unknown(f"no symmetrization rule for {type(e).__name__}")


def product_symmetrization_gate(a: Expr, b: Expr) -> str | None:
    """Hypotheses for (E . F)^(*) = E^(*) . F^(*) on power-weight Lebesgue
    spaces: both symmetrizations nonzero (D_2 and H_r* are then bounded)."""
    for name, e in (("E", a), ("F", b)):
        pl = as_power_lebesgue(e)
        if pl is None:
            if as_lorentz(e) is not None:
                continue
            return f"{name} is not a power-weight Lebesgue space"
        p, al = pl
        ok = al >= 0 if p == INF else al + 1 / p > 0
        if not ok:
            return f"{name}^(*) = {{0}} (needs a + 1/p > 0)"
    return None


# -- classification --------------------------------------------------------------------

@dataclass
class ConditionReport:
    nontrivial: str = "unknown"
    quasi_normed: str = "unknown"
    normable: str = "unknown"
    fatou: str = "assumed"
    notes: list = field(default_factory=list)

    def to_json_obj(self) -> dict:
        return {
            "nontrivial": self.nontrivial,
            "quasi_normed": self.quasi_normed,
            "normable": self.normable,
            "fatou": self.fatou,
            "notes": list(self.notes),
        }


def _yn(b: bool) -> str:
    return "yes" if b else "no"


def classify_power_lambda(p, a) -> ConditionReport:
    """Lambda_{p, t^{ap}} with exact exponents."""
    p, a = num(p), Fraction(a)
    nontrivial = a * p > -1
    rep = ConditionReport(nontrivial=_yn(nontrivial), quasi_normed="yes")
    if not nontrivial:
        rep.normable = "yes"
        rep.notes.append("integral of t^{ap} near 0 diverges: only the zero function")
        return rep
    if p > 1:
        rep.normable = _yn(-1 / p < a < 1 - 1 / p)
        rep.notes.append("normable iff -1/p < a < 1 - 1/p")
    elif p == 1:
        rep.normable = _yn(-1 < a <= 0)
        rep.notes.append("p = 1: normable iff W(t)/t is essentially decreasing, i.e. -1 < a <= 0")
    else:
        rep.normable = "no"
        rep.notes.append("p < 1: contains a copy of l^p")
    return rep


def classify_power_marc(a) -> ConditionReport:
    a = Fraction(a)
    rep = ConditionReport(nontrivial=_yn(a >= 0), quasi_normed="yes")
    if a < 0:
        rep.normable = "yes"
        rep.notes.append("t^a x*(t) is unbounded near 0 for a < 0")
        return rep
    rep.normable = _yn(a < 1)
    rep.notes.append("normable iff the integral of 1/t^a over (0, t) is O(t^{1-a}), i.e. a < 1")
    return rep


def doubling_check(G, lo_exp: int = -20, hi_exp: int = 20, bound: float = 1e3):
    """Sampled Delta_2 test of G over dyadic points 2^k: returns
    (verdict, worst ratio)."""
    worst = 0.0
    growth = []
    for k in range(lo_exp, hi_exp):
        t = 2.0 ** k
        g1, g2 = G(t), G(2 * t)
        if math.isinf(g1):
            return "no" if worst else "unknown", INF
        if g1 == 0:
            continue
        r = INF if math.isinf(g2) else g2 / g1
        growth.append(r)
        worst = max(worst, r)
    if math.isinf(worst) or worst > bound:
        return "no", worst
    return "yes", worst


def classify(e: Expr) -> ConditionReport:
    """Verdicts from closed-form criteria; anything else stays unknown."""
    if isinstance(e, Zero):
        return ConditionReport("no", "yes", "yes", notes=["the zero space"])
    if isinstance(e, MeasurableAll):
        return ConditionReport("yes", "no", "no", notes=["all measurable functions carry no quasi-norm"])
    if isinstance(e, Lorentz):
        p, q = e.p, e.q
        if p == INF:
            if q == INF:
                return ConditionReport("yes", "yes", "yes", notes=["L^inf"])
            return ConditionReport("no", "yes", "yes", notes=["L^{inf,q} = {0} for finite q"])
        if q == INF:
            rep = classify_power_marc(inv(p))
        else:
            rep = classify_power_lambda(q, inv(p) - inv(q))
        rep.notes.insert(0, "Lorentz L^{p,q} as Lambda_{q, t^{q/p - 1}}")
        return rep
    if isinstance(e, Lebesgue):
        if e.weight == ONE:
            return classify(Lorentz(e.p, e.p, domain=e.domain))
        rep = ConditionReport("yes", "yes", _yn(e.p >= 1), notes=["weighted Lebesgue space"])
        sym = classify(symmetrize(e))
        rep.notes.append(
            f"symmetrization: nontrivial={sym.nontrivial}, quasi_normed={sym.quasi_normed}, normable={sym.normable}"
        )
        return rep
    if isinstance(e, Lambda):
        if isinstance(e.weight, PowerW):
            return classify_power_lambda(e.p, e.weight.alpha)
        return _classify_named_lambda(e)
    if isinstance(e, Marc):
        if isinstance(e.weight, PowerW):
            return classify_power_marc(e.weight.alpha)
        return _classify_named_marc(e)
    if isinstance(e, Cesaro):
        lz = as_lorentz(e.e)
        if lz is not None and e.domain == "inf":
            p, q = lz
            if p < 1 or (p == 1 and q != INF):
                return ConditionReport("no", "yes", "yes", notes=["H f ~ c/t is not in E near infinity"])
            if cesaro_gate(e.e, e.domain) is None:
                return ConditionReport("yes", "yes", "yes", notes=["Cesaro space of a Banach space with H bounded"])
        return ConditionReport(notes=["Cesaro space outside the closed-form catalog"])
    if isinstance(e, Tandori):
        inner = classify(e.e)
        return ConditionReport(inner.nontrivial, inner.quasi_normed, inner.normable,
                               notes=["inherits the verdicts of the inner symmetric space"] + inner.notes)
    s = simplify(e)
    if s.expr != e and is_leaf(s.expr) or isinstance(s.expr, (Cesaro, Tandori)):
        rep = classify(s.expr)
        rep.notes.insert(0, f"classified after simplification to {s.expr}")
        return rep
    return ConditionReport(notes=["compound expression with no closed form"])


def _classify_named_lambda(e: Lambda) -> ConditionReport:
    w = e.weight.numeric()
    p = float(e.p)
    G = lambda t: w.moment(0.0, t, p)
    rep = ConditionReport()
    small = G(2.0 ** -20)
    rep.nontrivial = _yn(not math.isinf(small))
    verdict, worst = doubling_check(G)
    rep.quasi_normed = verdict
    rep.notes.append(f"sampled doubling ratio W(2t)/W(t) up to {worst:.4g}")
    if verdict == "no":
        rep.normable = "no"
        rep.notes.append("not quasi-normed, hence not normable (not even a linear space)")
    return rep


def _classify_named_marc(e: Marc) -> ConditionReport:
    w = e.weight.numeric()
    G = lambda t: w.sup_on(0.0, t)
    rep = ConditionReport(nontrivial=_yn(not math.isinf(G(2.0 ** -20))))
    verdict, worst = doubling_check(G)
    rep.quasi_normed = verdict
    rep.notes.append(f"sampled doubling ratio of the fundamental function up to {worst:.4g}")
    if verdict == "no":
        rep.normable = "no"
    return rep


# -- simplification ----------------------------------------------------------------------

@dataclass
class SimplifyResult:
    expr: Expr
    log: list
    unresolved: list

    @property
    def resolved(self) -> bool:
        return not self.unresolved

    def to_json_obj(self) -> dict:
        return {
            "expr": str(self.expr),
            "log": self.log,
            "unresolved": [{"node": n, "reason": r} for n, r in self.unresolved],
        }


def _note(e: Expr, reason: str) -> Expr:
    return replace(e, notes=tuple(dict.fromkeys(e.notes + (reason,))))


def _fold_unknown(res, e: Expr):
    if isinstance(res, Unknown):
        return _note(e, res.reason), None
    return res, True


class _Simplifier:
    def __init__(self, fatou: bool = True):
        self.fatou = fatou
        self.log: list = []

    def emit(self, rule: str, citation: str):
        self.log.append({"rule": rule, "citation": citation})

    def skip(self, rule: str, reason: str):
        entry = {"rule": rule, "citation": reason}
        if entry not in self.log:
            self.log.append(entry)

    # structural rules that must see the node before its children change
    def pre(self, e: Expr) -> Expr:
        if isinstance(e, Dual) and isinstance(e.e, Dual) and self.fatou:
            inner = e.e.e
            rep = classify(inner)
            if rep.normable == "yes" and rep.nontrivial == "yes":
                self.emit("second-dual", "E'' = E for a Banach function space with the Fatou property")
                return inner
        if isinstance(e, Symmetrize) and isinstance(e.e, Intersect):
            self.emit("sym-intersection", "(E cap F)^(*) = E^(*) cap F^(*)")
            x = e.e
            return Intersect(Symmetrize(x.a, domain=e.domain), Symmetrize(x.b, domain=e.domain), domain=e.domain)
        if isinstance(e, Symmetrize) and isinstance(e.e, Product):
            x = e.e
            why = product_symmetrization_gate(x.a, x.b)
            if why is None:
                self.emit("sym-product", "(E . F)^(*) = E^(*) . F^(*) when both symmetrizations are nonzero")
                return Product(Symmetrize(x.a, domain=e.domain), Symmetrize(x.b, domain=e.domain), domain=e.domain)
            self.skip("sym-product-skipped", f"product/symmetrization commutation not applied: {why}")
        return e

    def node(self, e: Expr) -> Expr:
        if is_leaf(e):
            n = normalize_leaf(e)
            if n is None:
                return e
            self.emit(n[1], n[2])
            return n[0]
        d = e.domain
        if isinstance(e, Dual):
            res = kothe_dual(e.e)
            if not isinstance(res, Unknown):
                self.emit("kothe-dual", _dual_citation(e.e))
                return res
            return _note(e, res.reason)
        if isinstance(e, Product):
            res = product(e.a, e.b)
            if not isinstance(res, Unknown):
                self.emit("product", _product_citation(e.a, e.b))
                return res
            return _note(e, res.reason)
        if isinstance(e, Multiplier):
            res = multiplier(e.a, e.b)
            if not isinstance(res, Unknown):
                self.emit("multiplier", _multiplier_citation(e.a, e.b))
                return res
            return _note(e, res.reason)
        if isinstance(e, Symmetrize):
            res = symmetrize(e.e)
            if not isinstance(res, Unknown):
                self.emit("symmetrize", "[L^p(w)]^(*) = Lambda_{p,w^p}; [L^inf(w)]^(*) = M_w; symmetric spaces are fixed")
                return replace(res, notes=res.notes + e.notes) if e.notes else res
            return _note(e, res.reason)
        if isinstance(e, Convexify):
            res = convexify(e.e, e.r)
            if not isinstance(res, Unknown):
                self.emit("convexify", "(L^{p,q})^{(r)} = L^{pr,qr}; L^p(t^a)^{(r)} = L^{pr}(t^{a/r})")
                return res
            return _note(e, res.reason)
        if isinstance(e, Cesaro):
            lz = as_lorentz(e.e)
            if isinstance(e.e, Zero):
                self.emit("cesaro-zero", "C{0} = {0}")
                return e.e
            if lz is not None and d == "inf" and (lz[0] < 1 or (lz[0] == 1 and lz[1] != INF)):
                self.emit("cesaro-trivial", "H f ~ c/t near infinity is not in E, so CE = {0}")
                return Zero(domain=d)
            if lz is None:
                return _note(e, f"Cesaro space of {type(e.e).__name__} kept symbolic")
            return e
        if isinstance(e, Tandori):
            if isinstance(e.e, Zero) or is_linf(e.e):
                self.emit("tandori-fixed", "the majorant has the same sup norm; {0} stays {0}")
                return e.e
            if as_lorentz(e.e) is None:
                return _note(e, f"Tandori space of {type(e.e).__name__} kept symbolic")
            return e
        if isinstance(e, Sum):
            a, b = e.a, e.b
            if isinstance(a, Zero):
                return b
            if isinstance(b, Zero):
                return a
            if a == b:
                self.emit("sum-idempotent", "E + E = E")
                return a
            if isinstance(a, MeasurableAll) or isinstance(b, MeasurableAll):
                return MeasurableAll(domain=d)
            return _note(e, "sums have no closed form (only (E+F)^(*) contains E^(*) + F^(*))")
        if isinstance(e, Intersect):
            a, b = e.a, e.b
            if a == b:
                self.emit("cap-idempotent", "E cap E = E")
                return a
            if isinstance(a, Zero) or isinstance(b, Zero):
                return Zero(domain=d)
            if isinstance(a, MeasurableAll):
                return b
            if isinstance(b, MeasurableAll):
                return a
            return _note(e, "intersections have no closed form")
        return e

    def run(self, e: Expr) -> Expr:
        e = self.pre(e)
        kids = e.children()
        if kids:
            new = tuple(self.run(k) for k in kids)
            if new != kids:
                e = e.with_children(new)
        return self.node(e)


def _dual_citation(e: Expr) -> str:
    if as_lorentz(e) is not None:
        return "Kothe dual of L^{p,q} as M(L^{p,q}, L^1)"
    if isinstance(e, Cesaro):
        return "(CE)' = Tandori(E') on (0, inf)"
    if isinstance(e, Tandori):
        return "Tandori(E)' = C(E') on (0, inf)"
    if isinstance(e, Lebesgue):
        return "L^p(w)' = L^{p'}(1/w) for p >= 1; {0} for p < 1"
    return "Kothe duality of the trivial spaces"


def _product_citation(a: Expr, b: Expr) -> str:
    if isinstance(a, Cesaro) or isinstance(b, Cesaro):
        return "CF = CE . M(CE, CF) when F = E . M(E, F)"
    if as_lorentz(a) is not None and as_lorentz(b) is not None:
        return "L^{p1,q1} . L^{p2,q2} = L^{p,q}, reciprocal addition in both indices"
    return "L^{p0}(w0) . L^{p1}(w1) = L^p(w0 w1), 1/p = 1/p0 + 1/p1"


def _multiplier_citation(a: Expr, b: Expr) -> str:
    if isinstance(a, Cesaro):
        return "M(CE, CF) = Tandori(M(E, F)) when F = E . M(E, F)"
    if isinstance(a, Tandori):
        return "M(Tandori E, Tandori F) = M(C F', C E')"
    if as_lorentz(a) is not None and as_lorentz(b) is not None:
        return "Lorentz multipliers: {0} if p1 < p2 or (p1 = p2, q1 > q2), else L^{p3,q3}"
    if _lambda_like(a):
        return "power-weight Lambda/Marcinkiewicz multipliers under the normability conditions"
    return "weighted Lebesgue multipliers M(L^p(t^a), L^q(t^b))"


def unresolved_nodes(e: Expr) -> list[tuple[str, str]]:
    out = []
    for n in walk(e):
        for r in n.notes:
            out.append((str(n), r))
    return out


def simplify(e: Expr, fatou: bool = True, max_rounds: int = 64) -> SimplifyResult:
    """Rewrite to a fixed point; unresolved nodes keep notes explaining why."""
    s = _Simplifier(fatou)
    cur = e
    for _ in range(max_rounds):
        nxt = s.run(cur)
        if nxt == cur and [n.notes for n in walk(nxt)] == [n.notes for n in walk(cur)]:
            cur = nxt
            break
        cur = nxt
    return SimplifyResult(cur, s.log, unresolved_nodes(cur))


def is_canonical(e: Expr) -> bool:
    """Leaves, and Cesaro/Tandori of Lorentz-type leaves."""
    if is_leaf(e):
        return normalize_leaf(e) is None
    if isinstance(e, (Cesaro, Tandori)):
        return as_lorentz(e.e) is not None
    return False


# -- bridge to the numeric layer ----------------------------------------------------------

def to_numeric(e: Expr, density: int = 64):
    """NumericSpace for a leaf or a Cesaro/Tandori/convexified leaf."""
    from . import norms as N

    L = INF if e.domain == "inf" else 1.0
    f = lambda x: INF if x == INF else float(x)
    if isinstance(e, Lebesgue):
        return N.WeightedLebesgue(f(e.p), e.weight.numeric(), L)
    if isinstance(e, Lorentz):
        return N.Lorentz(f(e.p), f(e.q), L)
    if isinstance(e, Lambda):
        return N.Lambda(f(e.p), e.weight.numeric(), L)
    if isinstance(e, Marc):
        return N.Marcinkiewicz(e.weight.numeric(), L)
    if isinstance(e, Cesaro):
        return N.Cesaro(to_numeric(e.e, density), density)
    if isinstance(e, Tandori):
        return N.Tandori(to_numeric(e.e, density))
    if isinstance(e, Convexify):
        return N.Convexified(to_numeric(e.e, density), f(e.r))
    if isinstance(e, Symmetrize):
        s = symmetrize(e.e)
        if not isinstance(s, Unknown):
            return to_numeric(s, density)
    raise N.UnsupportedFamily(f"no numeric evaluator for {type(e).__name__}")
