"""Quasi-norm evaluation on step functions for the numeric space families."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .operators import hardy
from .stepfn import (
    INF,
    StepFunction,
    combine,
    indicator,
    piece_grid,
    rearrange,
    resample,
    tandori_majorant,
    zero,
)
from .weights import Power, Weight


class ZeroNorm(ValueError):
    pass


class UnsupportedFamily(ValueError):
    pass


@dataclass(frozen=True)
class NormResult:
    value: float
    resampling_error: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "value", float(self.value))
        object.__setattr__(self, "resampling_error", float(self.resampling_error))

    def to_json_obj(self) -> dict:
        out = {"value": "inf" if math.isinf(self.value) else self.value}
        if self.resampling_error:
            out["resampling_error"] = self.resampling_error
        return out


def _root(total: float, p: float) -> float:
    return INF if math.isinf(total) else total ** (1.0 / p)


class NumericSpace:
    L: float = INF
    symmetric = False

    def evaluate(self, f: StepFunction) -> NormResult:
        return NormResult(self._norm(f))

    def _norm(self, f: StepFunction) -> float:
        raise NotImplementedError

    def __call__(self, f: StepFunction) -> float:
        return self.evaluate(f).value


@dataclass(frozen=True)
class WeightedLebesgue(NumericSpace):
    """||f w||_p."""

    p: float
    weight: Weight = Power(0.0)
    L: float = INF

    def _norm(self, f):
        mask = f.vals != 0
        a, b, v = f.lefts[mask], f.breaks[mask], np.abs(f.vals[mask])
        if v.size == 0:
            return 0.0
        w = self.weight
        if math.isinf(self.p):
            return max(vi * w.sup_on(ai, bi) for ai, bi, vi in zip(a, b, v))
        p = self.p
        total = sum(vi ** p * w.moment(ai, bi, p) for ai, bi, vi in zip(a, b, v))
        return _root(total, p)


@dataclass(frozen=True)
class Lorentz(NumericSpace):
    """L^{p,q}: (integral of [t^{1/p} f*(t)]^q dt/t)^{1/q}."""

    p: float
    q: float
    L: float = INF
    symmetric = True

    def _norm(self, f):
        s = rearrange(f)
        if s.n == 0:
            return 0.0
        a, b, v = s.lefts, s.breaks, s.vals
        p, q = self.p, self.q
        if math.isinf(p):
            return float(v.max()) if math.isinf(q) else INF
        if math.isinf(q):
            return float(np.max(v * b ** (1.0 / p)))
        e = q / p
        total = float(np.sum(v ** q * (b ** e - a ** e))) / e
        return total ** (1.0 / q)


@dataclass(frozen=True)
class Lambda(NumericSpace):
    """Lambda_{p, w^p}: ||f* w||_p, weight stored before the power."""

    p: float
    weight: Weight = Power(0.0)
    L: float = INF
    symmetric = True

    def _norm(self, f):
        return WeightedLebesgue(self.p, self.weight, self.L)._norm(rearrange(f))


@dataclass(frozen=True)
class Marcinkiewicz(NumericSpace):
    """M_w: sup of w f*."""

    weight: Weight = Power(0.0)
    L: float = INF
    symmetric = True

    def _norm(self, f):
        return WeightedLebesgue(INF, self.weight, self.L)._norm(rearrange(f))


class _OverT(Weight):
    """w(t)/t, for the tail of a Hardy average."""

    def __init__(self, w: Weight):
        self.w = w
        self.name = f"{w.name}/t"

    def __call__(self, t):
        return self.w(t) / np.asarray(t, dtype=float)

    def moment(self, a, b, p, beta=0.0):
        return self.w.moment(a, b, p, beta - p)


@dataclass(frozen=True)
class Cesaro(NumericSpace):
    """CE: ||H|f| ||_E for weighted Lebesgue E.

    H|f| is resampled on its support with ``density`` points per source piece
    (plus a geometric refinement toward 0 when the weight is singular there);
    past the support H|f| = P/t and that tail is integrated exactly.
    """

    inner: NumericSpace
    density: int = 64

    @property
    def L(self):
        return self.inner.L

    def evaluate(self, f):
        E = self.inner
        if not isinstance(E, WeightedLebesgue):
            raise UnsupportedFamily("Cesaro norms are implemented over weighted Lebesgue spaces")
        if f.n == 0:
            return NormResult(0.0)
        af = abs(f)
        h = hardy(af, 1.0)
        T = af.breaks[-1]
        grid = piece_grid(af, self.density)
        head, err = resample(h, grid, self.L)
        mass = float(np.sum(af.vals * af.lengths))
        w = E.weight
        tail_w = Power(w.alpha - 1.0) if isinstance(w, Power) else _OverT(w)
        if math.isinf(E.p):
            hv = E._norm(head)
            tv = mass * tail_w.sup_on(T, self.L) if T < self.L else 0.0
            return NormResult(max(hv, tv), err)
        p = E.p
        hv = E._norm(head)
        tail = mass ** p * tail_w.moment(T, self.L, p) if T < self.L else 0.0
        return NormResult(_root(hv ** p + tail, p), err)


@dataclass(frozen=True)
class Tandori(NumericSpace):
    """Norm of the right-tail supremum majorant in the inner space."""

    inner: NumericSpace

    @property
    def L(self):
        return self.inner.L

    @property
    def symmetric(self):
        return self.inner.symmetric

    def evaluate(self, f):
        return self.inner.evaluate(tandori_majorant(f))


@dataclass(frozen=True)
class Convexified(NumericSpace):
    """E^{(r)}: || |f|^r ||_E^{1/r}."""

    inner: NumericSpace
    r: float

    @property
    def L(self):
        return self.inner.L

    @property
    def symmetric(self):
        return self.inner.symmetric

    def evaluate(self, f):
        res = self.inner.evaluate(f.power(self.r))
        return NormResult(_root(res.value, self.r), res.resampling_error)


def norm(S: NumericSpace, f: StepFunction) -> float:
    """Quasi-norm of ``f`` in ``S``; divergent norms are ``inf``, not errors."""
    return S.evaluate(f).value


norm_value = norm


def evaluate_norm(S: NumericSpace, f: StepFunction) -> NormResult:
    return S.evaluate(f)


# -- pairings and one-sided bounds ------------------------------------------

def kothe_pairing(f: StepFunction, g: StepFunction) -> float:
    """Integral of |f g|, exact on the common refinement."""
    prod = combine(abs(f), abs(g), np.multiply)
    return float(np.sum(prod.vals * prod.lengths))


def default_multiplier_bank(x: StepFunction, profiles: Sequence[float] = (-0.75, -0.5, -0.25, 0.25, 0.5)) -> list[StepFunction]:
    """Level-set indicators of x, chi_(0,a) at its breakpoints, and power
    profiles t^gamma sampled on the pieces of x."""
    bank: list[StepFunction] = []
    if x.n == 0:
        return [indicator(1.0, L=x.L)]
    ax = abs(x)
    for lam in np.unique(ax.vals[ax.vals > 0]):
        bank.append(ax.map_values(lambda v, lam=lam: (v >= lam).astype(float)))
    for b in x.breaks:
        bank.append(indicator(float(b), L=x.L))
    mids = 0.5 * (x.lefts + x.breaks)
    for g in profiles:
        bank.append(StepFunction._raw(x.breaks, mids ** g, x.L))
    return bank


def multiplier_norm_lower(
    E: NumericSpace, F: NumericSpace, x: StepFunction, bank: Sequence[StepFunction] | None = None
) -> float:
    """max over the bank of ||x y||_F / ||y||_E: a lower bound for ||x||_{M(E,F)}."""
    if bank is None:
        bank = default_multiplier_bank(x)
    best = 0.0
    for y in bank:
        ny = norm(E, y)
        if ny == 0:
            if y.is_zero():
                continue
            raise ZeroNorm("bank element with zero norm")
        if math.isinf(ny):
            continue
        best = max(best, norm(F, x * y) / ny)
    return best


def power_split(theta: float) -> Callable[[StepFunction], tuple[StepFunction, StepFunction]]:
    """u = (|u|^theta sgn u) * |u|^(1-theta)."""

    def split(u: StepFunction):
        a = np.abs(u.vals)
        g = StepFunction._raw(u.breaks, np.sign(u.vals) * a ** theta, u.L)
        h = StepFunction._raw(u.breaks, a ** (1.0 - theta), u.L)
        return g, h

    return split


def product_norm_upper(
    E: NumericSpace,
    F: NumericSpace,
    u: StepFunction,
    split: Callable[[StepFunction], tuple[StepFunction, StepFunction]] | None = None,
) -> float:
    """||x||_E ||y||_F for the split u = x y: an upper bound for ||u||_{E.F}."""
    if u.is_zero():
        return 0.0
    if split is None:
        pe, pf = getattr(E, "p", None), getattr(F, "p", None)
        theta = 0.5 if pe is None or pf is None else (1 / pe) / (1 / pe + 1 / pf)
        split = power_split(theta)
    x, y = split(u)
    return norm(E, x) * norm(F, y)


def weak_unit(E: NumericSpace, n_max: int) -> StepFunction:
    """Sum over n <= n_max of chi_(n-1,n) / (b_n ||chi_(n-1,n)||_E),
    b_n = 2^n max(1, 1/||chi_(n-1,n)||_E)."""
    if n_max < 1:
        raise ZeroNorm("weak unit needs at least one block")
    breaks, vals = [], []
    for n in range(1, n_max + 1):
        c = indicator(float(n - 1), float(n), L=E.L)
        nc = norm(E, c)
        if nc == 0 or math.isinf(nc):
            raise ZeroNorm(f"||chi_({n - 1},{n})|| = {nc}")
        b = 2.0 ** n * max(1.0, 1.0 / nc)
        breaks.append(float(n))
        vals.append(1.0 / (b * nc))
    return StepFunction(breaks, vals, E.L)


# -- sequence spaces (truncated) ---------------------------------------------

def lp_seq_norm(x: np.ndarray, p: float) -> float:
    a = np.abs(np.asarray(x, dtype=float))
    return float(a.max()) if math.isinf(p) else float(np.sum(a ** p) ** (1.0 / p))


def ces_seq_norm(x: np.ndarray, p: float) -> float:
    """ces_p: l^p norm of the running averages of |x|."""
    a = np.abs(np.asarray(x, dtype=float))
    avg = np.cumsum(a) / np.arange(1, a.size + 1)
    return lp_seq_norm(avg, p)


def tandori_seq_norm(x: np.ndarray, r: float) -> float:
    """Tandori sequence norm: l^r norm of the tail suprema of |x|."""
    a = np.abs(np.asarray(x, dtype=float))
    tail = np.maximum.accumulate(a[::-1])[::-1]
    return lp_seq_norm(tail, r)
