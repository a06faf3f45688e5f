"""Hardy averaging operators on step functions, in closed form.

For ``u = |f|^r`` with pieces ``[a_k, b_k)`` and values ``u_k``::

    H u(t)  = u_k + (P_k - u_k a_k) / t                on piece k
    H* u(t) = (S_{k+1} + u_k log b_k) - u_k log t      on piece k

where ``P_k`` is the integral of ``u`` over ``(0, a_k)`` and ``S_{k+1}`` the
integral of ``u(s)/s`` over ``(b_k, T)``.  Every transform therefore lives in
the span of ``1, 1/t, log t`` piecewise, which is what :class:`Evaluable`
stores.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .stepfn import EvaluableUndefinedAt, StepFunction, dilate, indicator

INF = math.inf


class SingularSample(ValueError):
    pass


class Evaluable:
    """Piecewise ``[c0 + c1/t + c2 log t]^power`` on ``[a, b)`` pieces.

    Negative bases (rounding noise only) are clamped to 0 before the power.
    The function vanishes past the last piece.
    """

    __slots__ = ("a", "b", "c0", "c1", "c2", "power")

    def __init__(self, a, b, c0, c1, c2, power: float = 1.0):
        self.a = np.asarray(a, dtype=float)
        self.b = np.asarray(b, dtype=float)
        self.c0 = np.asarray(c0, dtype=float)
        self.c1 = np.asarray(c1, dtype=float)
        self.c2 = np.asarray(c2, dtype=float)
        self.power = float(power)

    @classmethod
    def zero(cls) -> "Evaluable":
        e = np.empty(0)
        return cls(e, e, e, e, e)

    def __len__(self) -> int:
        return int(self.a.size)

    @property
    def breakpoints(self) -> np.ndarray:
        return self.b.copy()

    def with_power(self, power: float) -> "Evaluable":
        return Evaluable(self.a, self.b, self.c0, self.c1, self.c2, power)

    def base(self, t) -> np.ndarray:
        t = np.atleast_1d(np.asarray(t, dtype=float))
        if np.any(t < 0):
            raise EvaluableUndefinedAt(float(t[t < 0][0]))
        out = np.zeros_like(t)
        if len(self) == 0:
            return out
        k = np.searchsorted(self.a, t, side="right") - 1
        inside = (k >= 0) & (t < self.b[np.maximum(k, 0)])
        kk = k[inside]
        ti = t[inside]
        c1, c2 = self.c1[kk], self.c2[kk]
        at_zero = ti == 0
        if np.any(at_zero & ((c1 != 0) | (c2 != 0))):
            raise EvaluableUndefinedAt(0.0)
        with np.errstate(divide="ignore", invalid="ignore"):
            v = self.c0[kk] + np.where(c1 != 0, c1 / ti, 0.0) + np.where(c2 != 0, c2 * np.log(ti), 0.0)
        out[inside] = v
        return out

    def evaluate(self, t) -> np.ndarray:
        v = self.base(t)
        if self.power == 1.0:
            return v
        return np.maximum(v, 0.0) ** self.power

    def __call__(self, t):
        scalar = np.ndim(t) == 0
        v = self.evaluate(t)
        return float(v[0]) if scalar else v

    def __add__(self, other: "Evaluable") -> "Evaluable":
        if self.power != 1.0 or other.power != 1.0:
            raise ValueError("only bases (power 1) can be added")
        if not (np.array_equal(self.a, other.a) and np.array_equal(self.b, other.b)):
            raise ValueError("Evaluable sum needs identical piece structure")
        return Evaluable(self.a, self.b, self.c0 + other.c0, self.c1 + other.c1, self.c2 + other.c2)

    def to_json_obj(self) -> dict:
        pieces = []
        for a, b, c0, c1, c2 in zip(self.a, self.b, self.c0, self.c1, self.c2):
            pieces.append({"a": float(a), "b": "inf" if math.isinf(b) else float(b),
                           "c0": float(c0), "c1": float(c1), "c2": float(c2)})
        return {"power": self.power, "pieces": pieces}

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj())

    @classmethod
    def from_json_obj(cls, obj: dict) -> "Evaluable":
        ps = obj["pieces"]
        col = lambda k: [INF if p[k] == "inf" else p[k] for p in ps]
        return cls(col("a"), col("b"), col("c0"), col("c1"), col("c2"), obj.get("power", 1.0))


# -- transforms -------------------------------------------------------------

def _pieces(f: StepFunction, r: float):
    return f.lefts, f.breaks, np.abs(f.vals) ** r


def _average_base(f: StepFunction, r: float) -> Evaluable:
    a, b, u = _pieces(f, r)
    if a.size == 0:
        return Evaluable.zero()
    mass = u * (b - a)
    P = np.concatenate(([0.0], np.cumsum(mass)))
    A = np.append(a, b[-1])
    B = np.append(b, f.L)
    c0 = np.append(u, 0.0)
    c1 = np.append(P[:-1] - u * a, P[-1])
    return Evaluable(A, B, c0, c1, np.zeros_like(c0))


def _tail_base(f: StepFunction, r: float) -> Evaluable:
    a, b, u = _pieces(f, r)
    if a.size == 0:
        return Evaluable.zero()
    with np.errstate(divide="ignore"):
        logs = np.where(u > 0, np.log(b) - np.log(np.where(a > 0, a, 1.0)), 0.0)
    logs[0] = 0.0  # the first piece never enters a suffix sum
    contrib = u * logs
    S_next = np.concatenate((np.cumsum(contrib[::-1])[::-1][1:], [0.0]))
    A = np.append(a, b[-1])
    B = np.append(b, f.L)
    c0 = np.append(S_next + u * np.log(b), 0.0)
    c2 = np.append(-u, 0.0)
    return Evaluable(A, B, c0, np.zeros_like(c0), c2)


def hardy(f: StepFunction, r: float = 1.0) -> Evaluable:
    """H_r f = [H(|f|^r)]^{1/r}; H g(t) = (1/t) * integral of g over (0, t)."""
    if not r > 0:
        raise ValueError("r must be positive")
    return _average_base(f, r).with_power(1.0 / r)


def hardy_dual(f: StepFunction, r: float = 1.0, l: float | None = None) -> Evaluable:
    """H_r* f = [H*(|f|^r)]^{1/r}; H* g(t) = integral of g(s)/s over (t, l).

    ``l`` defaults to the domain length; since ``f`` vanishes beyond its
    support bound the value of ``l`` never changes the result.
    """
    if not r > 0:
        raise ValueError("r must be positive")
    return _tail_base(f, r).with_power(1.0 / r)


def average_evaluable(g: Evaluable) -> Evaluable:
    """H applied to an Evaluable base whose pieces carry no 1/t term.

    Uses the antiderivative ``c0 t + c2 (t log t - t)`` piece by piece, so the
    result is again of the form ``c0' + c1'/t + c2' log t``.
    """
    if g.power != 1.0:
        raise ValueError("average_evaluable works on bases (power 1)")
    if len(g) == 0:
        return Evaluable.zero()
    if np.any(g.c1 != 0):
        raise ValueError("pieces with a 1/t term are not handled")
    a, b, c0, c2 = g.a, g.b, g.c0, g.c2
    n = len(g)

    def F(k, t):
        if t == 0:
            return 0.0
        return c0[k] * t + c2[k] * (t * math.log(t) - t)

    # integral over each finite piece, then running totals at left ends
    I_left = np.zeros(n)
    acc = 0.0
    for k in range(n):
        I_left[k] = acc
        if math.isinf(b[k]):
            continue
        if c2[k] == 0:
            acc += c0[k] * (b[k] - a[k])
        else:
            # integral of c0 + c2 log s = (c0 - c2)(b - a) + c2 (b log b - a log a)
            alog = a[k] * math.log(a[k]) if a[k] > 0 else 0.0
            acc += (c0[k] - c2[k]) * (b[k] - a[k]) + c2[k] * (b[k] * math.log(b[k]) - alog)
    d0 = c0 - c2
    K = np.array([I_left[k] - F(k, a[k]) for k in range(n)])
    return Evaluable(a, b, d0, K, c2)


def hardy_composite(f: StepFunction, r: float = 1.0) -> Evaluable:
    """H_r H_r* f, by exact integration of the H* pieces."""
    return average_evaluable(_tail_base(f, r)).with_power(1.0 / r)


def hardy_identity_residual(f: StepFunction, r: float, samples: Sequence[float]) -> float:
    """Max relative gap between H_r H_r* f and (H_r f^r + H_r* f^r)^{1/r}.

    The left side integrates the H* image, the right side sums the two
    separately built transforms; agreement checks both constructions.
    """
    t = np.asarray(samples, dtype=float)
    if np.any(t == 0):
        raise SingularSample("sample at t=0 where H* is singular")
    if f.n == 0:
        return 0.0
    left = hardy_composite(f, r).evaluate(t)
    right = (_average_base(f, r) + _tail_base(f, r)).with_power(1.0 / r).evaluate(t)
    scale = np.maximum(np.abs(left), np.finfo(float).tiny)
    rel = np.where((left == 0) & (right == 0), 0.0, np.abs(left - right) / scale)
    return float(rel.max()) if rel.size else 0.0


# -- operator norms ---------------------------------------------------------

def hardy_norm_bound(p: float, alpha: float, r: float, which: str = "H") -> float:
    """Closed-form bound for ||H_r|| or ||H_r*|| on L^p(t^alpha); inf when
    the boundedness condition fails."""
    inv_p = 0.0 if math.isinf(p) else 1.0 / p
    if r > p:
        return INF
    if which == "H":
        s = 1.0 - alpha * r - r * inv_p
        return s ** (-1.0 / r) if r * (alpha + inv_p) < 1 else INF
    if which in ("H*", "Hstar", "dual"):
        s = alpha * r + r * inv_p
        return s ** (-1.0 / r) if alpha + inv_p > 0 else INF
    raise ValueError(f"which must be 'H' or 'H*', got {which!r}")


@dataclass
class OperatorNormEstimate:
    lower_bound: float
    witnesses: list = field(default_factory=list)
    declared_unbounded: bool = False
    growth: list = field(default_factory=list)

    def to_json_obj(self) -> dict:
        enc = lambda x: "inf" if math.isinf(x) else x
        return {
            "bound": enc(self.lower_bound),
            "witnesses": [[w, enc(r)] for w, r in self.witnesses],
            "unbounded": self.declared_unbounded,
        }


def default_dilation_family(domain_length: float = INF, size: int = 20) -> list[StepFunction]:
    if math.isinf(domain_length):
        return [indicator(float(n)) for n in range(1, size + 1)]
    return [indicator(domain_length * 2.0 ** -n, L=domain_length) for n in range(1, size + 1)]


def estimate_dilation_constant(
    E,
    bank: Sequence[StepFunction] | None = None,
    threshold: float = 1e6,
    family_size: int = 20,
) -> OperatorNormEstimate:
    """Empirical lower bound for A_E in ||D_2 x*|| <= A ||x*||.

    The bank is read in order as a parameterized family: unboundedness is
    declared only when the ratios grow monotonically and end past
    ``threshold`` (an infinite ratio counts immediately).
    """
    from .norms import ZeroNorm, norm as norm_value

    L = getattr(E, "L", INF)
    if bank is None:
        bank = default_dilation_family(L, family_size)
    ratios = []
    witnesses = []
    for i, x in enumerate(bank):
        nx = norm_value(E, x)
        if nx == 0 and not x.is_zero():
            raise ZeroNorm(f"bank element {i} has zero norm")
        if nx == 0:
            continue
        d = norm_value(E, dilate(x, 2.0, L))
        ratio = INF if math.isinf(d) else d / nx
        ratios.append(ratio)
        witnesses.append((i, ratio))
    if not ratios:
        raise ZeroNorm("empty bank")
    lb = max(ratios)
    unbounded = any(math.isinf(r) for r in ratios) or (
        len(ratios) >= 2
        and all(b >= a for a, b in zip(ratios, ratios[1:]))
        and ratios[-1] > threshold
    )
    return OperatorNormEstimate(lb, witnesses, unbounded, ratios)
