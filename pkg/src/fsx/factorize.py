"""Explicit factorizations x = g h.

``lp_factorize`` splits a function across weighted Lebesgue spaces with
norm equality.  ``explicit_sym_factorize`` builds a factorization through
symmetrized spaces: split x*, smooth the first factor with H_r H_r*, divide,
and carry both factors back to x with the rank map.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .norms import Lambda, Marcinkiewicz, NumericSpace, WeightedLebesgue, norm, power_split
from .operators import hardy_composite, hardy_norm_bound
from .stepfn import (
    INF,
    StepFunction,
    combine,
    piece_grid,
    rank_function,
    rearrange,
    resample,
    zero,
)
from .weights import Power, Weight


class ExponentMismatch(ValueError):
    pass


class WeightMismatch(ValueError):
    pass


class UnsupportedWeight(ValueError):
    pass


@dataclass
class Factorization:
    """g h reproduces the target.  When ``g_tpow``/``h_tpow`` are nonzero the
    actual factors are ``g(t) t^g_tpow`` and ``h(t) t^h_tpow``."""

    g: StepFunction
    h: StepFunction
    product_residual: float
    norm_product: float
    target_norm: float
    kappa: float | None = None
    g_tpow: float = 0.0
    h_tpow: float = 0.0
    constants: dict = field(default_factory=dict)

    def to_json_obj(self) -> dict:
        enc = lambda v: "inf" if isinstance(v, float) and math.isinf(v) else v
        out = {
            "g": self.g.to_json_obj(),
            "h": self.h.to_json_obj(),
            "product_residual": enc(self.product_residual),
            "norm_product": enc(self.norm_product),
            "target_norm": enc(self.target_norm),
            "kappa": enc(self.kappa),
        }
        if self.g_tpow or self.h_tpow:
            out["g_tpow"], out["h_tpow"] = self.g_tpow, self.h_tpow
        if self.constants:
            out["constants"] = {k: enc(v) for k, v in self.constants.items()}
        return out


def _inv(p: float) -> float:
    return 0.0 if math.isinf(p) else 1.0 / p


def _alpha(w: Weight | None) -> float:
    if w is None:
        return 0.0
    if isinstance(w, Power):
        return float(w.alpha)
    raise UnsupportedWeight(f"only power weights factor in closed form, got {w.label()}")


def _relative_residual(target: StepFunction, prod_vals: Callable[[np.ndarray], np.ndarray], breaks) -> float:
    b = np.asarray(breaks, dtype=float)
    if b.size == 0:
        return 0.0
    lefts = np.concatenate(([0.0], b[:-1]))
    mids = 0.5 * (lefts + b)
    want = np.abs(target(mids))
    got = np.abs(prod_vals(mids))
    scale = np.maximum(want, np.finfo(float).tiny)
    rel = np.where((want == 0) & (got == 0), 0.0, np.abs(got - want) / scale)
    return float(rel.max())


def lp_factorize(
    f: StepFunction,
    p: float,
    p0: float,
    p1: float,
    w: Weight | None = None,
    w0: Weight | None = None,
    w1: Weight | None = None,
    tol: float = 1e-12,
) -> Factorization:
    """f = g h with ||g||_{L^p0(w0)} ||h||_{L^p1(w1)} = ||f||_{L^p(w)}.

    g = (|f| w)^{p/p0} sgn f / w0 and h = (|f| w)^{p/p1} / w1.  With power
    weights the t-powers are carried in ``g_tpow``/``h_tpow``.
    """
    if math.isinf(p):
        raise ExponentMismatch("p must be finite")
    if abs(_inv(p) - _inv(p0) - _inv(p1)) > tol:
        raise ExponentMismatch(f"1/{p} != 1/{p0} + 1/{p1}")
    a, a0, a1 = _alpha(w), _alpha(w0), _alpha(w1)
    if abs(a - a0 - a1) > tol:
        raise WeightMismatch(f"t^{a} != t^{a0} * t^{a1}")
    e0, e1 = p * _inv(p0), p * _inv(p1)
    av = np.abs(f.vals)
    on = av > 0
    gv = np.where(on, av ** e0 * np.sign(f.vals), 0.0)
    hv = np.where(on, av ** e1, 0.0)
    g = StepFunction._raw(f.breaks, gv, f.L)
    h = StepFunction._raw(f.breaks, hv, f.L)
    gt, ht = a * e0 - a0, a * e1 - a1
    W = lambda al: Power(al) if al else Power(0.0)
    ng = norm(WeightedLebesgue(p0, W(gt + a0), f.L), g)
    nh = norm(WeightedLebesgue(p1, W(ht + a1), f.L), h)
    target = norm(WeightedLebesgue(p, W(a), f.L), f)

    def prod(t):
        return g(t) * h(t) * (t ** (gt + ht) if gt + ht else 1.0)

    res = _relative_residual(f, prod, f.breaks)
    return Factorization(g, h, res, ng * nh, target, 1.0, gt, ht)


# -- factorization through symmetrized spaces -------------------------------------

def symmetrized(E: NumericSpace) -> NumericSpace:
    """Numeric model of E^(*): the same norm applied to x*."""
    if getattr(E, "symmetric", False):
        return E
    if isinstance(E, WeightedLebesgue):
        if math.isinf(E.p):
            return Marcinkiewicz(E.weight, E.L)
        return Lambda(E.p, E.weight, E.L)
    raise UnsupportedWeight(f"no symmetrized model for {type(E).__name__}")


def product_space(E: NumericSpace, F: NumericSpace) -> NumericSpace:
    """E . F for power-weight Lebesgue spaces."""
    if not (isinstance(E, WeightedLebesgue) and isinstance(F, WeightedLebesgue)):
        raise UnsupportedWeight("product spaces are modelled for weighted Lebesgue spaces only")
    p = 1.0 / (_inv(E.p) + _inv(F.p))
    return WeightedLebesgue(p, Power(_alpha(E.weight) + _alpha(F.weight)), E.L)


def half_convexification(E: WeightedLebesgue) -> tuple[float, float]:
    """(p, alpha) of E^{(1/2)} for E = L^p(t^alpha): L^{p/2}(t^{2 alpha})."""
    return E.p / 2.0, 2.0 * _alpha(E.weight)


def smoothing_constants(E: NumericSpace, F: NumericSpace, r: float = 1.0) -> dict:
    """C0, D0 (H_r, H_r* on E^{(1/2)}) and C1, D1 (on F^{(1/2)}) in closed
    form, with kappa = sqrt(C0 D0 C1 D1)."""
    pe, ae = half_convexification(E)
    pf, af = half_convexification(F)
    C0 = hardy_norm_bound(pe, ae, r, "H")
    D0 = hardy_norm_bound(pe, ae, r, "H*")
    C1 = hardy_norm_bound(pf, af, r, "H")
    D1 = hardy_norm_bound(pf, af, r, "H*")
    return {"C0": C0, "D0": D0, "C1": C1, "D1": D1, "kappa": math.sqrt(C0 * D0 * C1 * D1)}


def default_base_split(E: NumericSpace, F: NumericSpace):
    pe, pf = _inv(getattr(E, "p", 2.0)), _inv(getattr(F, "p", 2.0))
    theta = 0.5 if pe + pf == 0 else pe / (pe + pf)
    return power_split(theta)


def _safe_div(num: StepFunction, den: StepFunction) -> StepFunction:
    def op(a, b):
        with np.errstate(divide="ignore", invalid="ignore"):
            return np.where(a == 0, 0.0, a / b)

    return combine(num, den, op)


def explicit_sym_factorize(
    x: StepFunction,
    E: NumericSpace,
    F: NumericSpace,
    r: float = 1.0,
    base_split=None,
    G: NumericSpace | None = None,
    density: int = 8,
    geometric: int = 16,
) -> Factorization:
    """Factor |x| through E^(*) . F^(*) by smoothing a split of x*.

    phi2 = [H_r H_r* phi^2]^{1/2} is decreasing and dominates phi, so
    x* / phi2 is controlled as well.

    The sign of x is put on g.  ``target_norm`` is ||x||_{G^(*)} with G = E.F
    by default; ``constants['split']`` is the empirical ratio
    ||phi||_E ||psi||_F / ||x*||_G of the base split.
    """
    L = x.L
    if x.is_zero():
        z = zero(L)
        return Factorization(z, z, 0.0, 0.0, 0.0)
    if base_split is None:
        base_split = default_base_split(E, F)
    if G is None:
        G = product_space(E, F)
    xs = rearrange(x)
    phi, psi = base_split(xs)
    phi1 = phi.power(2.0)
    T = xs.support_bound
    grid = piece_grid(xs, density, geometric=geometric, upto=T)
    # phi2 = [H_r H_r* phi1]^{1/2}, folded into the Evaluable's power
    phi2, rs_err = resample(hardy_composite(phi1, r).with_power(0.5 / r), grid, L)
    if np.any(phi2.vals[phi2.breaks <= T] <= 0):
        raise ZeroDivisionError("smoothed factor vanishes on the support of x*")
    rank = rank_function(x)
    phi3 = rank.pullback(phi2)
    psi3 = _safe_div(abs(x), phi3)
    g = combine(phi3, x, lambda a, s: np.where(s != 0, a * np.sign(s), 0.0))
    h = psi3
    res = _relative_residual(x, lambda t: g(t) * h(t), np.union1d(g.breaks, h.breaks))
    Es, Fs, Gs = symmetrized(E), symmetrized(F), symmetrized(G)
    norm_product = norm(Es, g) * norm(Fs, h)
    target = norm(Gs, x)
    consts = {"resampling_error": rs_err}
    try:
        sc = smoothing_constants(E, F, r)
        split = norm(E, phi) * norm(F, psi) / norm(G, xs)
        consts.update(sc, split=split)
        kappa = sc["kappa"] * split
    except (UnsupportedWeight, AttributeError):
        kappa = None
    return Factorization(g, h, res, norm_product, target, kappa, constants=consts)


def smoothed_factor(x: StepFunction, r: float = 1.0, base_split=None, density: int = 8, geometric: int = 16):
    """(phi, phi2) on the rearranged side, for monotonicity/domination checks."""
    xs = rearrange(x)
    split = base_split or power_split(0.5)
    phi, _ = split(xs)
    grid = piece_grid(xs, density, geometric=geometric, upto=xs.support_bound)
    phi2, err = resample(hardy_composite(phi.power(2.0), r).with_power(0.5 / r), grid, x.L)
    return phi, phi2, err


@dataclass
class FactorizationReport:
    status: str
    product_residual: float
    ratio: float
    kappa_max: float
    reasons: list

    def to_json_obj(self) -> dict:
        return {
            "status": self.status,
            "product_residual": self.product_residual,
            "ratio": self.ratio,
            "kappa_max": self.kappa_max,
            "reasons": self.reasons,
        }


def certify_factorization(
    fac: Factorization, kappa_max: float, tol: float = 1e-6, rel: float = 1e-9
) -> FactorizationReport:
    """PASS iff the product reproduces the target and
    target <= norm_product <= kappa_max * target."""
    reasons = []
    if not fac.product_residual <= tol:
        reasons.append(f"product residual {fac.product_residual:.3g} > {tol:g}")
    t, n = fac.target_norm, fac.norm_product
    ratio = n / t if t > 0 else (1.0 if n == 0 else INF)
    if n < t * (1 - rel):
        reasons.append(f"norm product {n:.6g} below target {t:.6g}")
    if n > kappa_max * t * (1 + rel):
        reasons.append(f"ratio {ratio:.6g} exceeds kappa {kappa_max:.6g}")
    return FactorizationReport("FAIL" if reasons else "PASS", fac.product_residual, ratio, kappa_max, reasons)
