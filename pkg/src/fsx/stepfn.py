"""Exact piecewise-constant functions on (0, L).

A step function is stored as strictly increasing right endpoints
``b_0 < b_1 < ... < b_{n-1}`` and one signed value per piece, piece ``k``
being ``[b_{k-1}, b_k)`` with ``b_{-1} = 0``.  Beyond the last breakpoint the
function is zero, so the support is always finite even when ``L`` is infinite.
Functions are right-continuous; every norm in this package is an integral or
an essential supremum, so the choice at jump points never matters.
"""
from __future__ import annotations

import io
import json
import math
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

import numpy as np

INF = math.inf


class StepError(ValueError):
    pass


class NonMonotoneBreakpoints(StepError):
    pass


class NegativeLength(StepError):
    pass


class OutsideDomain(StepError):
    pass


class EvaluableUndefinedAt(StepError):
    def __init__(self, t: float):
        super().__init__(f"function is undefined at t={t!r}")
        self.t = t


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a, dtype=float)
    a.setflags(write=False)
    return a


class StepFunction:
    """Signed step function on (0, L); immutable."""

    __slots__ = ("breaks", "vals", "L")

    def __init__(self, breaks: Sequence[float], vals: Sequence[float], L: float = INF):
        b = np.asarray(breaks, dtype=float).ravel()
        v = np.asarray(vals, dtype=float).ravel()
        L = float(L)
        if b.shape != v.shape:
            raise StepError(f"{b.size} breakpoints but {v.size} values")
        if not (L > 0):
            raise NegativeLength(f"domain length must be positive, got {L}")
        if b.size:
            if not np.all(np.isfinite(b)):
                raise OutsideDomain("breakpoints must be finite")
            if not np.all(np.isfinite(v)):
                raise StepError("values must be finite")
            if b[0] <= 0:
                raise NegativeLength(f"first piece (0, {b[0]}) has nonpositive length")
            if np.any(np.diff(b) <= 0):
                raise NonMonotoneBreakpoints("breakpoints must be strictly increasing")
            if b[-1] > L:
                raise OutsideDomain(f"breakpoint {b[-1]} exceeds domain length {L}")
        b, v = _canonical(b, v)
        self._set(b, v, L)

    def _set(self, b, v, L):
        object.__setattr__(self, "breaks", _frozen(b))
        object.__setattr__(self, "vals", _frozen(v))
        object.__setattr__(self, "L", L)

    def __setattr__(self, name, value):
        raise AttributeError("StepFunction is immutable")

    @classmethod
    def _raw(cls, breaks: np.ndarray, vals: np.ndarray, L: float) -> "StepFunction":
        # trusted constructor: inputs already sorted; still canonicalized
        obj = cls.__new__(cls)
        b, v = _canonical(np.asarray(breaks, dtype=float), np.asarray(vals, dtype=float))
        obj._set(b, v, float(L))
        return obj

    # -- structure -------------------------------------------------------
    @property
    def n(self) -> int:
        return int(self.breaks.size)

    @property
    def lefts(self) -> np.ndarray:
        if self.n == 0:
            return np.empty(0)
        return np.concatenate(([0.0], self.breaks[:-1]))

    @property
    def lengths(self) -> np.ndarray:
        return np.diff(np.concatenate(([0.0], self.breaks)))

    @property
    def abs_vals(self) -> np.ndarray:
        return np.abs(self.vals)

    @property
    def signs(self) -> np.ndarray:
        return np.sign(self.vals)

    @property
    def support_bound(self) -> float:
        return float(self.breaks[-1]) if self.n else 0.0

    @property
    def support_measure(self) -> float:
        return float(np.sum(self.lengths[self.vals != 0]))

    def is_zero(self) -> bool:
        return self.n == 0

    def pieces(self) -> Iterable[tuple[float, float, float]]:
        return zip(self.lefts.tolist(), self.breaks.tolist(), self.vals.tolist())

    # -- evaluation ------------------------------------------------------
    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        idx = np.searchsorted(self.breaks, t, side="right")
        ext = np.concatenate((self.vals, [0.0]))
        out = ext[np.minimum(idx, self.n)]
        out = np.where(t < 0, 0.0, out)
        return out if out.ndim else float(out)

    # -- arithmetic ------------------------------------------------------
    def __abs__(self) -> "StepFunction":
        return StepFunction._raw(self.breaks, np.abs(self.vals), self.L)

    def __neg__(self) -> "StepFunction":
        return StepFunction._raw(self.breaks, -self.vals, self.L)

    def scale(self, c: float) -> "StepFunction":
        return StepFunction._raw(self.breaks, c * self.vals, self.L)

    def power(self, p: float) -> "StepFunction":
        """|f|^p, exponent applied per piece."""
        a = np.abs(self.vals)
        with np.errstate(divide="ignore"):
            out = np.where(a > 0, a ** p, 0.0)
        return StepFunction._raw(self.breaks, out, self.L)

    def map_values(self, fn: Callable[[np.ndarray], np.ndarray]) -> "StepFunction":
        return StepFunction._raw(self.breaks, fn(self.vals), self.L)

    def __add__(self, other):
        return combine(self, other, np.add)

    def __sub__(self, other):
        return combine(self, other, np.subtract)

    def __mul__(self, other):
        if isinstance(other, StepFunction):
            return combine(self, other, np.multiply)
        return self.scale(float(other))

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if not isinstance(other, StepFunction):
            return NotImplemented
        return (
            self.L == other.L
            and np.array_equal(self.breaks, other.breaks)
            and np.array_equal(self.vals, other.vals)
        )

    def __hash__(self):
        return hash((self.L, self.breaks.tobytes(), self.vals.tobytes()))

    def __repr__(self) -> str:
        L = "inf" if math.isinf(self.L) else repr(self.L)
        return f"StepFunction(breaks={self.breaks.tolist()}, vals={self.vals.tolist()}, L={L})"

    # -- serialization ---------------------------------------------------
    def to_json_obj(self) -> dict:
        return {
            "L": "inf" if math.isinf(self.L) else self.L,
            "breaks": self.breaks.tolist(),
            "vals": self.vals.tolist(),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj())

    @classmethod
    def from_json_obj(cls, obj: dict) -> "StepFunction":
        L = obj.get("L", "inf")
        L = INF if L in ("inf", None) else float(L)
        return cls(obj["breaks"], obj["vals"], L)

    @classmethod
    def from_json(cls, text: str) -> "StepFunction":
        return cls.from_json_obj(json.loads(text))

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write(f"# L={'inf' if math.isinf(self.L) else repr(self.L)}\n")
        for b, v in zip(self.breaks.tolist(), self.vals.tolist()):
            buf.write(f"{b!r},{v!r}\n")
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> "StepFunction":
        L = INF
        breaks, vals = [], []
        for line in text.splitlines():
            line = line.strip()
            if not line:
                continue
            if line.startswith("#"):
                key, _, val = line[1:].strip().partition("=")
                if key.strip() == "L":
                    L = float(val)
                continue
            b, v = line.split(",")
            breaks.append(float(b))
            vals.append(float(v))
        return cls(breaks, vals, L)


def _canonical(b: np.ndarray, v: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Merge equal neighbours and drop trailing zero pieces."""
    if b.size == 0:
        return b, v
    keep = np.ones(b.size, dtype=bool)
    keep[:-1] = v[:-1] != v[1:]
    b, v = b[keep], v[keep]
    nz = np.nonzero(v)[0]
    if nz.size == 0:
        return np.empty(0), np.empty(0)
    last = nz[-1] + 1
    return b[:last], v[:last]


def make_step(breaks: Sequence[float], vals: Sequence[float], L: float = INF) -> StepFunction:
    return StepFunction(breaks, vals, L)


def indicator(a: float, b: float | None = None, L: float = INF, value: float = 1.0) -> StepFunction:
    """value * chi_(a, b); ``indicator(b)`` is chi_(0, b)."""
    if b is None:
        a, b = 0.0, a
    if a <= 0:
        return StepFunction([b], [value], L)
    return StepFunction([a, b], [0.0, value], L)


def zero(L: float = INF) -> StepFunction:
    return StepFunction([], [], L)


def common_refinement(*fs: StepFunction) -> np.ndarray:
    pts = [f.breaks for f in fs if f.n]
    if not pts:
        return np.empty(0)
    return np.unique(np.concatenate(pts))


def combine(f: StepFunction, g: StepFunction, op) -> StepFunction:
    L = min(f.L, g.L)
    grid = common_refinement(f, g)
    grid = grid[grid <= L]
    if grid.size == 0:
        return zero(L)
    lefts = np.concatenate(([0.0], grid[:-1]))
    return StepFunction._raw(grid, op(f(lefts), g(lefts)), L)


# -- distribution and rearrangement ---------------------------------------

def distribution(f: StepFunction, lam: float) -> float:
    """Measure of {|f| > lam}."""
    if lam < 0:
        raise ValueError("lambda must be nonnegative")
    return float(np.sum(f.lengths[f.abs_vals > lam]))


def _descending_order(f: StepFunction, support_only: bool = True) -> np.ndarray:
    a = f.abs_vals
    # stable sort on -|v| keeps earlier pieces first among ties
    order = np.argsort(-a, kind="stable")
    if support_only:
        order = order[a[order] > 0]
    return order


def rearrange(f: StepFunction) -> StepFunction:
    """Nonincreasing rearrangement f*, exact."""
    order = _descending_order(f)
    if order.size == 0:
        return zero(f.L)
    lengths = f.lengths[order]
    return StepFunction._raw(np.cumsum(lengths), f.abs_vals[order], f.L)


@dataclass(frozen=True)
class PieceMap:
    """Measure-preserving piecewise translation.

    Source interval ``[src_a[k], src_b[k])`` is moved onto
    ``[offset[k], offset[k] + len)``.
    """

    src_a: np.ndarray
    src_b: np.ndarray
    offset: np.ndarray
    L: float = INF

    def __len__(self) -> int:
        return int(self.src_a.size)

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        order = np.argsort(self.src_a)
        a, b, o = self.src_a[order], self.src_b[order], self.offset[order]
        k = np.searchsorted(a, t, side="right") - 1
        k = np.clip(k, 0, max(len(a) - 1, 0))
        inside = (len(a) > 0) & (t >= a[k]) & (t < b[k])
        out = np.where(inside, o[k] + (t - a[k]), np.nan)
        return out if out.ndim else float(out)

    def pairs(self) -> list[tuple[tuple[float, float], float]]:
        return [((float(a), float(b)), float(o)) for a, b, o in zip(self.src_a, self.src_b, self.offset)]

    def pullback(self, g: StepFunction) -> StepFunction:
        """g composed with this map, as a step function on the source side."""
        breaks: list[np.ndarray] = []
        vals: list[np.ndarray] = []
        order = np.argsort(self.src_a)
        prev_end = 0.0
        for k in order:
            sa, sb, o = float(self.src_a[k]), float(self.src_b[k]), float(self.offset[k])
            if sa > prev_end:
                breaks.append(np.array([sa]))
                vals.append(np.array([0.0]))
            length = sb - sa
            inner = g.breaks[(g.breaks > o) & (g.breaks < o + length)]
            local_b = np.concatenate((sa + (inner - o), [sb]))
            local_b = np.maximum.accumulate(np.clip(local_b, sa, sb))
            local_left = np.concatenate(([o], inner))
            local_v = g(local_left)
            good = np.diff(np.concatenate(([sa], local_b))) > 0
            breaks.append(local_b[good])
            vals.append(np.asarray(local_v)[good])
            prev_end = sb
        if not breaks:
            return zero(self.L)
        return StepFunction._raw(np.concatenate(breaks), np.concatenate(vals), self.L)


def rank_function(f: StepFunction, support_only: bool = True) -> PieceMap:
    """Rank map carrying |f| onto f*: larger values first, ties by position."""
    order = _descending_order(f, support_only=support_only)
    lengths = f.lengths[order]
    offsets = np.concatenate(([0.0], np.cumsum(lengths)[:-1])) if order.size else np.empty(0)
    return PieceMap(f.lefts[order], f.breaks[order], offsets, f.L)


# -- dilation and majorant ------------------------------------------------

def dilate(f: StepFunction, s: float, L: float | None = None) -> StepFunction:
    """D_s f(t) = f(t/s), truncated to the domain (0, L)."""
    if not s > 0:
        raise ValueError("dilation factor must be positive")
    L = f.L if L is None else float(L)
    if f.n == 0:
        return zero(L)
    b = f.breaks * s
    v = f.vals
    if b[-1] > L:
        k = int(np.searchsorted(b, L, side="left"))
        b = np.concatenate((b[:k], [L]))
        v = v[: k + 1]
        if b.size >= 2 and b[-1] <= b[-2]:
            b, v = b[:-1], v[:-1]
    return StepFunction._raw(b, v, L)


def tandori_majorant(f: StepFunction) -> StepFunction:
    """Right-tail essential supremum of |f|: reverse running maximum."""
    if f.n == 0:
        return zero(f.L)
    tail = np.maximum.accumulate(f.abs_vals[::-1])[::-1]
    return StepFunction._raw(f.breaks, tail, f.L)


# -- resampling ------------------------------------------------------------

def _evaluate(g, t: np.ndarray) -> np.ndarray:
    if hasattr(g, "evaluate"):
        return np.asarray(g.evaluate(t), dtype=float)
    with np.errstate(all="ignore"):
        return np.asarray(g(t), dtype=float) * np.ones_like(t)


def resample(g, grid: Sequence[float], L: float = INF) -> tuple[StepFunction, float]:
    """Midpoint step surrogate of ``g`` on the pieces (0, g_0), (g_0, g_1), ...

    Returns the step function together with the resampling error
    ``max |g(mid) - g(endpoint)|`` over all pieces.  The implicit left end 0 is
    never evaluated; an explicit 0 in the grid is, and raises if ``g`` is
    singular there.
    """
    grid = np.asarray(grid, dtype=float)
    if grid.size == 0:
        return zero(L), 0.0
    if np.any(np.diff(grid) <= 0):
        raise NonMonotoneBreakpoints("grid must be strictly increasing")
    if grid[0] < 0:
        raise OutsideDomain("grid must lie in [0, L]")
    if grid[0] == 0:
        g0 = _evaluate(g, np.array([0.0]))
        if not np.all(np.isfinite(g0)):
            raise EvaluableUndefinedAt(0.0)
        grid = grid[1:]
        if grid.size == 0:
            return zero(L), 0.0
    lefts = np.concatenate(([0.0], grid[:-1]))
    mids = 0.5 * (lefts + grid)
    vm = _evaluate(g, mids)
    vr = _evaluate(g, grid)
    if not np.all(np.isfinite(vm)):
        bad = mids[~np.isfinite(vm)][0]
        raise EvaluableUndefinedAt(float(bad))
    if not np.all(np.isfinite(vr)):
        bad = grid[~np.isfinite(vr)][0]
        raise EvaluableUndefinedAt(float(bad))
    err = np.abs(vm - vr)
    if lefts.size > 1:
        vl = vr[:-1]
        err[1:] = np.maximum(err[1:], np.abs(vm[1:] - vl))
    return StepFunction._raw(grid, vm, L), float(err.max()) if err.size else 0.0


def piece_grid(f: StepFunction, density: int = 8, geometric: int = 0, upto: float | None = None) -> np.ndarray:
    """Breakpoints of ``f`` subdivided uniformly, plus an optional geometric
    refinement of the first piece toward 0."""
    b = f.breaks
    if upto is not None:
        b = np.concatenate((b[b < upto], [upto])) if (b.size == 0 or b[-1] != upto) else b
    if b.size == 0:
        return b
    lefts = np.concatenate(([0.0], b[:-1]))
    frac = np.arange(1, density + 1) / density
    pts = (lefts[:, None] + (b - lefts)[:, None] * frac[None, :]).ravel()
    if geometric > 0:
        first = pts[0]
        pts = np.concatenate((first * 2.0 ** -np.arange(geometric, 0, -1), pts))
    return np.unique(pts)
