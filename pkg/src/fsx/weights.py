"""Positive weights with exact (or quadrature-backed) moment integrals.

Every weight answers three questions used by the norm evaluators:

* ``w(t)`` pointwise;
* ``moment(a, b, p, beta)`` = integral of ``w(t)^p t^beta`` over ``(a, b)``,
  returning ``inf`` on divergence;
* ``sup_on(a, b)`` = supremum of ``w`` over ``[a, b)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate

from .stepfn import StepFunction

INF = math.inf


def _tpow_integral(a: float, b: float, g: float) -> float:
    """Integral of t^g over (a, b) with 0 <= a <= b <= inf."""
    if b <= a:
        return 0.0
    if g == -1.0:
        if a == 0.0 or math.isinf(b):
            return INF
        return math.log(b / a)
    e = g + 1.0
    if e < 0 and a == 0.0:
        return INF
    if e > 0 and math.isinf(b):
        return INF
    hi = 0.0 if math.isinf(b) else b ** e
    lo = 0.0 if a == 0.0 else a ** e
    return (hi - lo) / e


def _quad(fn, a: float, b: float, points=None) -> float:
    with np.errstate(all="ignore"):
        if math.isinf(b):
            val, _ = integrate.quad(fn, a, b, limit=400)
        else:
            val, _ = integrate.quad(fn, a, b, limit=400, points=points)
    return float(val)


class Weight:
    name = "weight"

    def __call__(self, t):
        raise NotImplementedError

    def moment(self, a: float, b: float, p: float, beta: float = 0.0) -> float:
        if b <= a:
            return 0.0
        return _quad(lambda t: float(self(t)) ** p * t ** beta, a, b)

    def sup_on(self, a: float, b: float) -> float:
        ts = np.linspace(a, b, 257)[:-1]
        ts[0] = a if a > 0 else min(1e-300, b / 2)
        return float(np.max(self(ts)))

    @property
    def is_power(self) -> bool:
        return False

    def label(self) -> str:
        return self.name


@dataclass(frozen=True)
class Power(Weight):
    """t^alpha."""

    alpha: float = 0.0

    @property
    def name(self):
        return f"t^{_num(self.alpha)}"

    @property
    def is_power(self) -> bool:
        return True

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        with np.errstate(divide="ignore"):
            out = t ** self.alpha if self.alpha else np.ones_like(t)
        return out if out.ndim else float(out)

    def moment(self, a, b, p, beta=0.0):
        return _tpow_integral(a, b, self.alpha * p + beta)

    def sup_on(self, a, b):
        if self.alpha > 0:
            return b ** self.alpha
        if self.alpha == 0:
            return 1.0
        return INF if a == 0 else a ** self.alpha

    def times(self, other: "Power") -> "Power":
        return Power(self.alpha + other.alpha)


@dataclass(frozen=True)
class Exp(Weight):
    """e^{ct}."""

    c: float = 1.0
    name: str = field(default="exp", compare=False)

    def __call__(self, t):
        out = np.exp(self.c * np.asarray(t, dtype=float))
        return out if out.ndim else float(out)

    def moment(self, a, b, p, beta=0.0):
        if b <= a:
            return 0.0
        k = self.c * p
        if beta != 0.0:
            if math.isinf(b) and k >= 0:
                return INF
            return _quad(lambda t: math.exp(k * t) * t ** beta, a, b)
        if k == 0:
            return b - a
        if math.isinf(b):
            return INF if k > 0 else -math.exp(k * a) / k
        try:
            return math.exp(k * a) * math.expm1(k * (b - a)) / k
        except OverflowError:
            return INF

    def sup_on(self, a, b):
        return math.exp(self.c * (b if self.c > 0 else a))


@dataclass(frozen=True)
class ShiftedPole(Weight):
    """1 on (0, a), then 1/(t - a): integrable singularity only for p < 1."""

    a: float = 1.0
    name: str = field(default="pole", compare=False)

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        with np.errstate(divide="ignore"):
            out = np.where(t < self.a, 1.0, 1.0 / np.maximum(t - self.a, 0.0))
        return out if out.ndim else float(out)

    def moment(self, lo, hi, p, beta=0.0):
        if hi <= lo:
            return 0.0
        a = self.a
        head = _tpow_integral(lo, min(hi, a), beta) if lo < a else 0.0
        s, e = max(lo, a), hi
        if e <= s:
            return head
        if s == a and p >= 1:
            return INF
        if beta == 0.0:
            u0, u1 = s - a, e - a
            if p == 1:
                tail = INF if math.isinf(u1) else math.log(u1 / u0)
            else:
                tail = _tpow_integral(u0, u1, -p)
        else:
            if math.isinf(e) and beta - p >= -1:
                return INF
            tail = _quad(lambda t: (t - a) ** -p * t ** beta, s, e)
        return head + tail

    def sup_on(self, lo, hi):
        if hi <= self.a:
            return 1.0
        if lo <= self.a:
            return INF
        return max(1.0, 1.0 / (lo - self.a)) if lo < self.a else 1.0 / (lo - self.a)


@dataclass(frozen=True)
class InverseDistance(Weight):
    """1/(c - t) on (0, c); infinite at and beyond c."""

    c: float = 1.0
    name: str = field(default="inv", compare=False)

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        with np.errstate(divide="ignore"):
            out = np.where(t < self.c, 1.0 / (self.c - t), INF)
        return out if out.ndim else float(out)

    def moment(self, a, b, p, beta=0.0):
        if b <= a:
            return 0.0
        if b > self.c or (b == self.c and p >= 1):
            return INF
        if beta == 0.0:
            u0, u1 = self.c - b, self.c - a
            return math.log(u1 / u0) if p == 1 and u0 > 0 else _tpow_integral(u0, u1, -p)
        return _quad(lambda t: (self.c - t) ** -p * t ** beta, a, b)

    def sup_on(self, a, b):
        return INF if b >= self.c else 1.0 / (self.c - b)


@dataclass(frozen=True)
class Decay(Weight):
    """(1 + t)^{-k}: decreasing, bounded by 1, integrable for k > 1."""

    k: float = 9.0
    name: str = field(default="decay", compare=False)

    def __call__(self, t):
        out = (1.0 + np.asarray(t, dtype=float)) ** -self.k
        return out if out.ndim else float(out)

    def moment(self, a, b, p, beta=0.0):
        if b <= a:
            return 0.0
        if beta == 0.0:
            return _tpow_integral(1.0 + a, 1.0 + b, -self.k * p)
        if math.isinf(b) and beta - self.k * p >= -1:
            return INF
        return _quad(lambda t: (1.0 + t) ** (-self.k * p) * t ** beta, a, b)

    def sup_on(self, a, b):
        return (1.0 + a) ** -self.k


@dataclass(frozen=True)
class Alternating(Weight):
    """Weight equal to ``base`` on every other unit interval and 1 elsewhere.

    ``variant=0`` puts ``base`` on (2n, 2n+1); ``variant=1`` on (2n+1, 2n+2).
    """

    variant: int = 0
    base: Decay = Decay()

    @property
    def name(self):
        return f"alt{self.variant}"

    def _on_base(self, t):
        return (np.floor(t).astype(np.int64) % 2) == self.variant

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        out = np.where(self._on_base(t), self.base(t), 1.0)
        return out if out.ndim else float(out)

    def moment(self, a, b, p, beta=0.0):
        if b <= a:
            return 0.0
        if math.isinf(b):
            # tail: bounded by the unit-weight integral, which needs beta < -1
            if beta >= -1:
                return INF
            cut = max(math.ceil(a) + 2, 4096.0)
            return self.moment(a, cut, p, beta) + _quad(
                lambda t: float(self(t)) ** p * t ** beta, cut, INF
            )
        total = 0.0
        n0, n1 = int(math.floor(a)), int(math.ceil(b))
        for n in range(n0, n1):
            lo, hi = max(a, float(n)), min(b, float(n + 1))
            if hi <= lo:
                continue
            if n % 2 == self.variant:
                total += self.base.moment(lo, hi, p, beta)
            else:
                total += _tpow_integral(lo, hi, beta)
        return total

    def sup_on(self, a, b):
        if b - a >= 1 or math.floor(a) != math.floor(b - 1e-300):
            return 1.0
        return float(self.base(a)) if self._on_base(np.array(a)) else 1.0


@dataclass(frozen=True, eq=False)
class Tabulated(Weight):
    """Step-function weight; its last value is extended to infinity."""

    step: StepFunction
    name: str = "tabulated"

    def __eq__(self, other):
        return isinstance(other, Tabulated) and self.step == other.step

    def __hash__(self):
        return hash(self.step)

    def _ext(self) -> tuple[np.ndarray, np.ndarray]:
        b = np.concatenate((self.step.breaks, [INF]))
        v = np.concatenate((self.step.vals, [self.step.vals[-1]]))
        return b, v

    def __call__(self, t):
        b, v = self._ext()
        t = np.asarray(t, dtype=float)
        out = v[np.minimum(np.searchsorted(b, t, side="right"), v.size - 1)]
        return out if out.ndim else float(out)

    def moment(self, a, b, p, beta=0.0):
        if b <= a:
            return 0.0
        br, v = self._ext()
        lefts = np.concatenate(([0.0], br[:-1]))
        lo = np.maximum(lefts, a)
        hi = np.minimum(br, b)
        total = 0.0
        for l, h, val in zip(lo, hi, v):
            if h > l:
                total += val ** p * _tpow_integral(l, h, beta)
        return total

    def sup_on(self, a, b):
        br, v = self._ext()
        lefts = np.concatenate(([0.0], br[:-1]))
        mask = (lefts < b) & (br > a)
        return float(v[mask].max())


def dyadic_weights(depth: int = 60) -> tuple[Tabulated, Tabulated]:
    """The pair (w, v) on (0, 1) built on dyadic blocks A_n = (2^-n, 2^-n+1).

    ``w`` is 1 on the left half of A_n and (3/2)^n on the right half;
    ``v`` is (3/2)^n on all of A_n.  Below 2^-depth the innermost block's
    values continue down to 0.
    """
    wb, wv, vb, vv = [], [], [], []
    for n in range(depth, 0, -1):
        a = 1.5 ** n
        mid, hi = 1.5 * 2.0 ** -n, 2.0 ** (-n + 1)
        wb += [mid, hi]
        wv += [1.0, a]
        vb.append(hi)
        vv.append(a)
    w = Tabulated(StepFunction(wb, wv, 1.0), "dyadic")
    v = Tabulated(StepFunction(vb, vv, 1.0), "dyadicv")
    return w, v


def _num(x: float) -> str:
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    if float(x).is_integer():
        return str(int(x))
    return repr(float(x))


_DYADIC = None


def named_weight(name: str) -> Weight:
    global _DYADIC
    if name in ("dyadic", "dyadicv"):
        if _DYADIC is None:
            _DYADIC = dyadic_weights()
        return _DYADIC[0] if name == "dyadic" else _DYADIC[1]
    try:
        return NAMED[name]()
    except KeyError:
        raise KeyError(f"unknown weight {name!r}; known: {sorted(NAMED_IDS)}") from None


NAMED = {
    "exp": lambda: Exp(1.0),
    "pole": lambda: ShiftedPole(1.0),
    "inv": lambda: InverseDistance(1.0),
    "decay": lambda: Decay(),
    "alt0": lambda: Alternating(0),
    "alt1": lambda: Alternating(1),
}
NAMED_IDS = frozenset(NAMED) | {"dyadic", "dyadicv"}
