"""Range characteristic, preimage selector, modulus search, and the
back-and-forth Banach bijection on net-presented compact spaces.

Every 2^-k comparison is decided exactly; where a target point is known only
through approximants, Cantor threshold tests are still exact (bits up to the
threshold index are determined by any deep enough approximant), while
interval tests use one guard level of slack, documented at the call sites.

Desk-scale honesty boundary: the classical range functional answers both
ways using full zero detection. Here a rejection is definite (a failed net
test at some level refutes membership outright), but a "still in range"
answer is a promise that grows with the checked level, unless the function
carries its own exact_range predicate.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, List, Optional

import numpy as np

from ..errors import (
    ConstructionStalledError,
    ExhaustionError,
    NoValidModulusError,
    RangeInconsistencyError,
)
from ..streams import FuelLike, LazySeq, _bound
from .dyadic import Dyadic
from .spaces import (
    ApproxPoint,
    BitStream,
    CantorPoint,
    CompactSpace,
    IntervalPoint,
    Point,
    Value,
)
from .ucfun import UCFun

__all__ = [
    "RangeAnswer",
    "range_char",
    "preimage_select",
    "modulus_of",
    "modulus_valid",
    "BanachHResult",
    "banach_H",
    "apply_point",
]

VIA_F = "via-F"
VIA_G_INV = "via-G-inverse"


@dataclass(frozen=True)
class RangeAnswer:
    """Either a sound rejection at a witnessed level, or membership promised
    up to the checked level."""

    kind: str  # "definitely-out" | "in-range-up-to"
    level: int

    @property
    def out(self) -> bool:
        return self.kind == "definitely-out"

    @property
    def in_range(self) -> bool:
        return not self.out

    def to_json(self) -> dict:
        return {"kind": self.kind, "level": self.level}


def _cantor_target_bits(y: Point, through: int) -> Callable[[int], int]:
    if isinstance(y, CantorPoint):
        return y.stream.bit
    # an approximant one level past `through` pins bits 0..through exactly;
    # a capped approximant can leave its very last guard bit soft
    level = min(through + 1, getattr(y, "m_max", through + 1))
    return y.approx(level).bit


def _interval_target(y: Point, m: int) -> Dyadic:
    if isinstance(y, IntervalPoint):
        return y.value
    level = min(m + 2, getattr(y, "m_max", m + 2))
    return y.approx(level)  # proxy with one guard level of slack


def _interval_image(F: UCFun, x: Value, m: int) -> Dyadic:
    if F._value_map is not None:
        return F.raw_image(x)
    return F.precision_image(x, m + 2)  # decoded code: two guard levels


def _image_matches(X: CompactSpace, F: UCFun, level: int, i: int, y: Point, m: int) -> bool:
    """d(F(x_{level,i}), y) < 2^-m."""
    x = X.net_point(level, i)
    if X.kind == "cantor":
        yb = _cantor_target_bits(y, m)
        if F.solver:
            return F.image_agrees(x, yb, m)
        w = F.image_value(x, m + 2)
        return all(w.bit(n) == yb(n) for n in range(m + 1))
    return X.dist_lt_pow2(_interval_image(F, x, m), _interval_target(y, m), m)


def _net_witness_exists(X: CompactSpace, F: UCFun, level: int, y: Point, m: int) -> bool:
    if level > X.max_level:
        raise ValueError(f"modulus lookup {level} beyond the space cap {X.max_level}")
    if X.kind == "cantor" and F.solver:
        return F.find_witness(level, (), _cantor_target_bits(y, m), m) is not None
    return any(_image_matches(X, F, level, i, y, m) for i in range(X.level_count(level)))


def range_char(X: CompactSpace, F: UCFun, y: Point, m_max: int) -> RangeAnswer:
    """For each m <= m_max test whether some level-h(m) net point maps
    strictly within 2^-m of y. The first failing m refutes membership; if
    none fails, membership is promised up to m_max.

    When F carries exact_range, a definite rejection is cross-checked against
    it; disagreement means the function object is inconsistent.
    """
    for m in range(m_max + 1):
        if not _net_witness_exists(X, F, F.modulus(m), y, m):
            if F.exact_range is not None and F.exact_range(y):
                raise RangeInconsistencyError(
                    f"{F.name}: net test refutes membership at level {m} "
                    "but exact_range claims it")
            return RangeAnswer("definitely-out", m)
    return RangeAnswer("in-range-up-to", m_max)


def _padded_modulus(F: UCFun) -> Callable[[int], int]:
    return lambda k: max(F.modulus(k), k + 3)


def preimage_select(X: CompactSpace, F: UCFun, y: Point, m_max: int) -> Point:
    """Select a rapidly converging preimage of y under F, level by level.

    approx(m) is the least-index net point at the padded-modulus level
    satisfying, verbatim: (1) its image lies strictly within 2^-m of y;
    (2) for every j with m < j <= m_max some deeper net point maps within
    2^-j of y while sitting strictly within 2^-(m+2) of the candidate;
    (3) it lies within 2^-m of the previous level's choice.

    Clause (2) is the bounded stand-in for the zero-detection lookahead that
    keeps each choice close to a true preimage; the caller owes the
    precondition that range_char(..., m_max) was not a rejection.

    Fuel artifact: with the lookahead cut at m_max, the top level or two can
    sit a guard bit farther from the true preimage than the unbounded
    construction allows; choose m_max a few levels above the precision
    actually consumed (more for maps that expand distances, like padding).
    """
    pad = _padded_modulus(F)

    def candidates(m: int, prev: Optional[Value]):
        level = pad(m)
        if level > X.max_level:
            raise ValueError(f"padded modulus {level} beyond the space cap {X.max_level}")
        if X.kind == "cantor" and F.solver:
            fixed = prev.bits(m) if prev is not None else ()
            for i in F.iter_witnesses(level, fixed, _cantor_target_bits(y, m), m):
                yield X.net_point(level, i)
            return
        # double the radius so the superset covers the closed ball, then
        # filter with the exact <= test
        ids = (X.ids_in_ball(level, prev, Dyadic.pow2(-m).double()) if prev is not None
               else range(X.level_count(level)))
        for i in ids:
            x = X.net_point(level, i)
            if prev is not None and not X.dist_le_pow2(prev, x, m):
                continue
            if _image_matches(X, F, level, i, y, m):
                yield x

    def lookahead_ok(cand: Value, m: int) -> bool:
        for j in range(m + 1, m_max + 1):
            level = pad(j)
            if level > X.max_level:
                raise ValueError(f"padded modulus {level} beyond the space cap {X.max_level}")
            if X.kind == "cantor" and F.solver:
                fixed = cand.bits(m + 3)
                if F.find_witness(level, fixed, _cantor_target_bits(y, j), j) is None:
                    return False
                continue
            hit = False
            for i in X.ids_in_ball(level, cand, Dyadic.pow2(-(m + 2))):
                x = X.net_point(level, i)
                if X.dist_lt_pow2(x, cand, m + 2) and _image_matches(X, F, level, i, y, j):
                    hit = True
                    break
            if not hit:
                return False
        return True

    def compute_level(m: int, below: List[Value]) -> Value:
        prev = below[m - 1] if m > 0 else None
        for cand in candidates(m, prev):
            if lookahead_ok(cand, m):
                return cand
        raise ConstructionStalledError(m)

    return ApproxPoint(compute_level, m_max)


def _net_tables(X: CompactSpace, F: UCFun, cap: int):
    """Integer-rescaled values and images of every net point of level <= cap.

    Interval values scale exactly to 2^-(cap+1); images to their own common
    power of two. Cantor words pad to a fixed width so XOR finds the first
    disagreement. Rescaling is exact, so the comparisons below stay exact.
    """
    values: List[Value] = []
    for j in range(cap + 1):
        values.extend(X.net_point(j, i) for i in range(X.level_count(j)))
    if X.kind == "interval":
        xs = np.array([v.scaled_int(cap + 1) for v in values], dtype=np.int64)
        images = [_interval_image(F, v, cap + 2) for v in values]
        q = max(max(f.exp for f in images), cap + 2)
        fs = np.array([f.scaled_int(q) for f in images], dtype=np.int64)
        return xs, fs, cap + 1, q
    width_x, width_f = cap + 1, cap + 2
    xs = np.array([_word_int(v, width_x) for v in values], dtype=np.int64)
    fs = np.array([_word_int(F.image_value(v, width_f - 1), width_f) for v in values],
                  dtype=np.int64)
    return xs, fs, width_x, width_f


def _word_int(v: BitStream, width: int) -> int:
    out = 0
    for b in v.bits(width):
        out = (out << 1) | b
    return out


_CHUNK = 512


def _violating_min_dx(X, xs, fs, x_scale, f_scale, m: int) -> Optional[int]:
    """Minimum x-distance (integer-scaled, interval) or minimum value XOR
    (cantor) over the pairs whose images are at least 2^-(m+1) apart.
    Returns None when no pair violates. 0 means an equal-value violation."""
    best: Optional[int] = None
    n = len(xs)
    for lo in range(0, n, _CHUNK):
        xi = xs[lo:lo + _CHUNK, None]
        fi = fs[lo:lo + _CHUNK, None]
        if X.kind == "interval":
            # |df| >= 2^-(m+1) at scale 2^-f_scale
            mask = np.abs(fi - fs[None, :]) >= (1 << (f_scale - m - 1))
            dx = np.abs(xi - xs[None, :])
        else:
            # image disagreement at or before index m+1 <=> prefixes differ
            shift = f_scale - (m + 2)
            mask = (fi >> shift) != (fs[None, :] >> shift)
            dx = xi ^ xs[None, :]
        if mask.any():
            v = int(dx[mask].min())
            best = v if best is None else min(best, v)
    return best


def modulus_of(X: CompactSpace, F: UCFun, level_cap: int) -> LazySeq:
    """Recompute a modulus for F, ignoring its stored one: M(m) is the least
    n <= level_cap such that every pair of net points (all levels up to the
    cap, mixed) at distance below 2^-n has images within 2^-(m+1).

    The half-step slack 2^-(m+1) in the search is what makes the result a
    genuine 2^-m modulus on the nets. Queries are capped at level_cap, since
    deeper image comparisons would be undetermined at this net resolution.
    """
    if level_cap > X.max_level:
        raise ValueError(f"level_cap {level_cap} beyond the space cap {X.max_level}")
    tables = _net_tables(X, F, level_cap)

    def value(m: int) -> int:
        if m > level_cap:
            raise ValueError(f"modulus query {m} beyond level_cap {level_cap}")
        xs, fs, x_scale, f_scale = tables
        dmin = _violating_min_dx(X, xs, fs, x_scale, f_scale, m)
        if dmin is None:
            return 0
        if dmin == 0:
            raise NoValidModulusError(m, level_cap)
        if X.kind == "interval":
            # least n with 2^-n <= dmin / 2^x_scale
            for n in range(level_cap + 1):
                if (1 << (x_scale - n)) <= dmin:
                    return n
        else:
            # first disagreement of the closest violating pair
            t = x_scale - dmin.bit_length()
            if t <= level_cap:
                return t
        raise NoValidModulusError(m, level_cap)

    return LazySeq(value, name=f"modulus({F.name})")


def modulus_valid(X: CompactSpace, F: UCFun, modulus: LazySeq, m: int, level_cap: int) -> bool:
    """The final verification: over ALL net pairs up to the cap, distance
    below 2^-modulus(m) forces image distance below 2^-m."""
    xs, fs, x_scale, f_scale = _net_tables(X, F, level_cap)
    n = modulus(m)
    for lo in range(0, len(xs), _CHUNK):
        xi = xs[lo:lo + _CHUNK, None]
        fi = fs[lo:lo + _CHUNK, None]
        if X.kind == "interval":
            close = np.abs(xi - xs[None, :]) < (1 << (x_scale - n))
            bad = np.abs(fi - fs[None, :]) >= (1 << (f_scale - m))
        else:
            zx = xi ^ xs[None, :]
            close = (zx >> (x_scale - n - 1)) == 0 if n < x_scale else (zx == 0)
            zf = fi ^ fs[None, :]
            bad = (zf >> (f_scale - m - 1)) != 0
        if (close & bad).any():
            return False
    return True


def apply_point(X: CompactSpace, F: UCFun, x: Point, m_max: int) -> Point:
    """F(x) as a point: the function's own exact action when it has one,
    else exact image bits / rounded exact values for exact-backed x, else
    the net action on x's approximants through the modulus."""
    if F.exact_apply is not None:
        return F.exact_apply(x)
    if isinstance(x, CantorPoint):
        return ApproxPoint(
            lambda m, _: F.image_value(x.stream, m), m_max)
    if isinstance(x, IntervalPoint):
        return ApproxPoint(
            lambda m, _: F.image_value(x.value, m), m_max)

    def compute(m: int, _below) -> Value:
        level = F.modulus(m + 1) + 1
        return X.round_value(F.image_value(x.approx(level), m + 1), m)

    return ApproxPoint(compute, m_max)


@dataclass
class BanachHResult:
    point: Point
    tag: str
    stage: Optional[int]  # first definite chain break, None when it never broke
    out_level: int

    def approx(self) -> Value:
        return self.point.approx(self.out_level)

    def to_json(self) -> dict:
        return {
            "tag": self.tag,
            "stage": self.stage,
            "out_level": self.out_level,
            "approx": str(self.approx()),
        }


def _range_bit(X: CompactSpace, fn: UCFun, p: Point, m_max: int) -> int:
    if fn.exact_range is not None:
        return 1 if fn.exact_range(p) else 0
    ans = range_char(X, fn, p, m_max)
    if ans.out:
        return 0
    raise ExhaustionError(
        f"range of {fn.name} at the chain point is unresolved and no "
        "exact_range is available", m_max)


def _preimage_point(X: CompactSpace, fn: UCFun, p: Point, m_max: int) -> Point:
    if fn.exact_preimage is not None:
        return fn.exact_preimage(p)
    return preimage_select(X, fn, p, m_max)


def banach_H(X: CompactSpace, F: UCFun, G: UCFun, x: Point, out_level: int,
             fuel: FuelLike, m_max: Optional[int] = None) -> BanachHResult:
    """The bijection of the back-and-forth construction, evaluated at x.

    The chain alternately asks: is x in the range of G, is G^-1(x) in the
    range of F, and so on. The parity of the first definite "no" (stage n0)
    decides the direction: odd parity sends x along F, even parity sends it
    to its G-preimage. A chain confirmed in-range at every stage within fuel
    follows F, matching the never-halting branch of the construction.

    Each stage needs a definite range answer: the function's exact_range, or
    a net-test rejection. Anything weaker raises ExhaustionError rather than
    guessing (the honest stand-in for the zero-detection oracle).
    """
    b = _bound(fuel)
    if m_max is None:
        m_max = out_level + 2
    stage: Optional[int] = None
    current: Point = x
    for n in range(1, b + 1):
        fn = G if n % 2 == 1 else F
        if _range_bit(X, fn, current, m_max) == 0:
            stage = n
            break
        current = _preimage_point(X, fn, current, m_max)
    T = 1 if stage is None else stage % 2
    if T == 1:
        return BanachHResult(apply_point(X, F, x, max(out_level, m_max)),
                             VIA_F, stage, out_level)
    return BanachHResult(_preimage_point(X, G, x, m_max), VIA_G_INV, stage, out_level)
