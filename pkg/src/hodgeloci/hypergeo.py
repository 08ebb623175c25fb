"""Gauss hypergeometric series, the purely-imaginary period ratio, and numeric
sampling of the degree-N isogeny locus.

For F(z) = 2F1(1/2, 1/2, 1 | z) and real t in (0, 1), the ratio
tau(t) = F(1-t)/F(t) is the imaginary part of the period ratio of the
associated elliptic curve; it decreases monotonically from +infinity to 0.
The locus function

    F(1 - t1) F(t2) - N F(1 - t2) F(t1)

vanishes exactly when tau(t1) = N * tau(t2); its zero locus is sampled by
inverting tau with bisection.  Coefficients are generated exactly (Fractions)
once per parameter triple and cached as floats; evaluation truncates
adaptively using the geometric tail bound |next term| / (1 - z).
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Sequence, Tuple

from hodgeloci.errors import OutOfDomain, TargetOutOfRange

DELTA = 0.01  # domain margin: t in [DELTA, 1 - DELTA]


@dataclass(frozen=True)
class HypParams:
    """Parameters (a, b, c) of a hypergeometric series; c must not be a
    non-positive integer."""

    a: Fraction
    b: Fraction
    c: Fraction

    def __post_init__(self):
        a, b, c = (Fraction(x) for x in (self.a, self.b, self.c))
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "c", c)
        if c.denominator == 1 and c <= 0:
            raise ValueError("c must not be a non-positive integer")


PARAMS_HALF = HypParams(Fraction(1, 2), Fraction(1, 2), Fraction(1))


@dataclass(frozen=True)
class TruncSeries1D:
    """Truncated one-variable series with exact rational coefficients."""

    coefficients: Tuple[Fraction, ...]

    @property
    def order(self) -> int:
        return len(self.coefficients) - 1

    def eval_float(self, z: float) -> float:
        total = 0.0
        zp = 1.0
        for c in self.coefficients:
            total += float(c) * zp
            zp *= z
        return total


def hyp2f1(params: HypParams, order: int) -> TruncSeries1D:
    """Exact truncated hypergeometric series via the term recurrence
    c_{n+1} = c_n (a+n)(b+n) / ((c+n)(n+1)), c_0 = 1."""
    if order < 0:
        raise ValueError("order must be non-negative")
    a, b, c = params.a, params.b, params.c
    coeffs = [Fraction(1)]
    for n in range(order):
        coeffs.append(coeffs[-1] * (a + n) * (b + n) / ((c + n) * (n + 1)))
    return TruncSeries1D(tuple(coeffs))


# float coefficient cache, extended on demand, keyed by parameters; the lists
# are append-only, so readers only need the lock while extending
_FLOAT_COEFFS: Dict[HypParams, List[float]] = {}
_EXACT_LAST: Dict[HypParams, Fraction] = {}
_CACHE_LOCK = threading.Lock()


def _float_coeffs(params: HypParams, n: int) -> List[float]:
    cached = _FLOAT_COEFFS.get(params)
    if cached is not None and len(cached) > n:
        return cached
    with _CACHE_LOCK:
        cached = _FLOAT_COEFFS.get(params)
        if cached is None:
            cached = [1.0]
            _FLOAT_COEFFS[params] = cached
            _EXACT_LAST[params] = Fraction(1)
        if len(cached) <= n:
            a, b, c = params.a, params.b, params.c
            last = _EXACT_LAST[params]
            for k in range(len(cached) - 1, n):
                last = last * (a + k) * (b + k) / ((c + k) * (k + 1))
                cached.append(float(last))
            _EXACT_LAST[params] = last
    return cached


def eval_2f1(params: HypParams, z: float, tol: float = 1e-12) -> float:
    """Adaptively truncated evaluation for 0 <= z < 1.

    Stops when the geometric tail bound |term| / (1 - z) drops below tol;
    sound whenever the term ratio stays below 1, which holds for the
    parameter ranges used here (a, b <= c + 1 termwise check enforced).
    """
    if not 0.0 <= z < 1.0:
        raise OutOfDomain(f"series evaluation needs 0 <= z < 1, got {z}")
    total = 0.0
    zp = 1.0
    n = 0
    block = 64
    coeffs = _float_coeffs(params, block)
    while True:
        while n < len(coeffs):
            term = coeffs[n] * zp
            total += term
            zp *= z
            n += 1
            if n > 8 and abs(coeffs[n - 1] * zp) / (1.0 - z) < tol:
                return total
        block *= 2
        coeffs = _float_coeffs(params, block)


def tau_of_t(t: float, tol: float = 1e-12) -> float:
    """Imaginary part of the period ratio: F(1-t)/F(t) on [DELTA, 1-DELTA]."""
    if not DELTA <= t <= 1.0 - DELTA:
        raise OutOfDomain(f"t = {t} outside [{DELTA}, {1.0 - DELTA}]")
    return eval_2f1(PARAMS_HALF, 1.0 - t, tol) / eval_2f1(PARAMS_HALF, t, tol)


def invert_tau(s_target: float, tol: float = 1e-10) -> float:
    """The t with tau(t) = s_target, by bisection on the decreasing ratio."""
    if s_target <= 0.0:
        raise TargetOutOfRange("the imaginary period ratio is positive")
    lo, hi = DELTA, 1.0 - DELTA
    f_lo = tau_of_t(lo)
    f_hi = tau_of_t(hi)
    if not f_hi <= s_target <= f_lo:
        raise TargetOutOfRange(
            f"target {s_target} outside attained range [{f_hi:.6g}, {f_lo:.6g}]")
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        val = tau_of_t(mid)
        if abs(val - s_target) < tol:
            return mid
        if val > s_target:
            lo = mid
        else:
            hi = mid
        if hi - lo < 1e-16:
            return mid
    return 0.5 * (lo + hi)


def locus_function(t1: float, t2: float, n_iso: int, tol: float = 1e-12) -> float:
    """F(1-t1) F(t2) - N F(1-t2) F(t1), the defining function of the degree-N
    isogeny locus; each distinct argument is evaluated exactly once, so the
    N = 1 diagonal vanishes identically."""
    if not (DELTA <= t1 <= 1.0 - DELTA and DELTA <= t2 <= 1.0 - DELTA):
        raise OutOfDomain("arguments must lie in the margin interval")
    values: Dict[float, float] = {}
    for z in (1.0 - t1, t2, 1.0 - t2, t1):
        if z not in values:
            values[z] = eval_2f1(PARAMS_HALF, z, tol)
    return values[1.0 - t1] * values[t2] - n_iso * values[1.0 - t2] * values[t1]


@dataclass(frozen=True)
class LocusSample:
    """Numerically sampled points of the degree-N isogeny locus."""

    n_iso: int
    points: Tuple[Tuple[float, float, float], ...]  # (t1, t2, residual)
    skipped: Tuple[float, ...]
    tol: float

    @property
    def flagged(self) -> Tuple[Tuple[float, float, float], ...]:
        return tuple(p for p in self.points if p[2] >= self.tol)


def sample_locus(n_iso: int, t1_grid: Sequence[float], tol: float = 1e-8) -> LocusSample:
    """For each grid point t1, solve tau(t2) = tau(t1)/N and record the
    residual of the locus function; out-of-range targets are skipped."""
    if n_iso < 1:
        raise ValueError("the isogeny degree must be a positive integer")
    points = []
    skipped = []
    for t1 in t1_grid:
        target = tau_of_t(t1) / n_iso
        try:
            t2 = invert_tau(target, tol=min(tol * 1e-2, 1e-10))
        except TargetOutOfRange:
            skipped.append(t1)
            continue
        resid = abs(locus_function(t1, t2, n_iso))
        points.append((t1, t2, resid))
    return LocusSample(n_iso, tuple(points), tuple(skipped), tol)
