"""Exact large-Q enumeration of Farey index statistics.

Every statistic walks the sequence with the integer recurrence (one division
per element, denominators only unless a subinterval restriction needs the
fractions themselves) and is exact: sums and counts are Python integers,
comparisons against asymptotic predictions happen only at report time.

All walks over (0, t] can be split into subinterval chunks whose partial sums
merge associatively; results are identical for every chunk count, which is
what makes the `workers` parameter a pure throughput knob.
"""

from __future__ import annotations

import math
import multiprocessing
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Tuple, Union

from . import bcz
from .farey import seek, totient_summatory
from .geometry import ConvexPolygon

Number = Union[int, float, Fraction]


# ---------------------------------------------------------------------------
# analytic constants for the second-moment prediction
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def euler_gamma() -> float:
    """Euler's constant via the harmonic-sum expansion H_n - ln n - 1/2n + ..."""
    n = 10_000
    h = sum(1.0 / k for k in range(1, n + 1))
    return h - math.log(n) - 1 / (2 * n) + 1 / (12 * n**2) - 1 / (120 * n**4)


@lru_cache(maxsize=None)
def zeta_prime_over_zeta_two() -> float:
    """zeta'(2)/zeta(2), from the log series with an Euler-Maclaurin tail."""
    n = 20_000
    s = sum(math.log(k) / k**2 for k in range(2, n + 1))
    a = n + 1
    tail = (math.log(a) + 1) / a  # integral of ln(x)/x^2 from a
    tail += math.log(a) / a**2 / 2  # + f(a)/2
    tail -= (1 - 2 * math.log(a)) / a**3 / 12  # - f'(a)/12
    zeta_prime = -(s + tail)
    return zeta_prime / (math.pi**2 / 6)


def second_moment_prediction(q_max: int) -> float:
    """Leading term of the sum of squared indices over F_Q."""
    c = math.log(2 * q_max) - zeta_prime_over_zeta_two() - 17 / 8 + 2 * euler_gamma()
    return 24 / math.pi**2 * q_max**2 * c


# ---------------------------------------------------------------------------
# chunked walking machinery
# ---------------------------------------------------------------------------

def _chunk_bounds(t_end: Fraction, workers: int) -> list[Tuple[Fraction, Fraction]]:
    w = max(1, int(workers))
    cuts = [t_end * j / w for j in range(w + 1)]
    return list(zip(cuts[:-1], cuts[1:]))


def _interval_state(order: int, t0: Fraction):
    """Denominator/numerator state of the walker seeked to t0."""
    w = seek(order, t0)
    return (
        w.prev.numerator,
        w.prev.denominator,
        w.curr.numerator,
        w.curr.denominator,
    )


def _chunk_index_sum(task) -> int:
    """Exact sum of indices over gamma in (t0, t1]."""
    order, t0, t1 = task
    pn, pd, cn, cd = _interval_state(order, t0)
    n1, d1 = t1.numerator, t1.denominator
    total = 0
    while cn * d1 <= n1 * cd:
        k = (order + pd) // cd
        total += k
        pn, pd, cn, cd = cn, cd, k * cn - pn, k * cd - pd
    return total


def _chunk_histogram(task) -> dict:
    """Exact counts of each index value over gamma in (t0, t1].

    Counts merge associatively, so any chunking reproduces the same histogram
    and every statistic derived from it is independent of the worker count.
    """
    order, t0, t1 = task
    pn, pd, cn, cd = _interval_state(order, t0)
    n1, d1 = t1.numerator, t1.denominator
    hist: dict = {}
    while cn * d1 <= n1 * cd:
        k = (order + pd) // cd
        hist[k] = hist.get(k, 0) + 1
        pn, pd, cn, cd = cn, cd, k * cn - pn, k * cd - pd
    return hist


def _chunk_autocorr(task) -> int:
    """Sum of nu_i * nu_{i+h} over gamma_i in (t0, t1]."""
    order, h, t0, t1 = task
    pn, pd, cn, cd = _interval_state(order, t0)
    # lookahead denominators, advanced h elements
    lp, lc = pd, cd
    for _ in range(h):
        k = (order + lp) // lc
        lp, lc = lc, k * lc - lp
    n1, d1 = t1.numerator, t1.denominator
    total = 0
    while cn * d1 <= n1 * cd:
        k = (order + pd) // cd
        kh = (order + lp) // lc
        total += k * kh
        pn, pd, cn, cd = cn, cd, k * cn - pn, k * cd - pd
        lp, lc = lc, kh * lc - lp
    return total


def _chunk_lu(task) -> Tuple[int, int]:
    """Counts of the low/high threshold coincidences nu = floor((2Q+1)/q) - 1 (or -0)."""
    order, k_target, t0, t1 = task
    pn, pd, cn, cd = _interval_state(order, t0)
    n1, d1 = t1.numerator, t1.denominator
    top = 2 * order + 1
    low = 0
    high = 0
    while cn * d1 <= n1 * cd:
        k = (order + pd) // cd
        if k == k_target:
            v = top // cd
            if k == v - 1:
                low += 1
            elif k == v:
                high += 1
        pn, pd, cn, cd = cn, cd, k * cn - pn, k * cd - pd
    return low, high


_CHUNK_FNS = {
    "sum": _chunk_index_sum,
    "hist": _chunk_histogram,
    "autocorr": _chunk_autocorr,
    "lu": _chunk_lu,
}


def _dispatch(task):
    kind, payload = task
    return _CHUNK_FNS[kind](payload)


def _run_chunks(kind: str, payloads: list, workers: int) -> list:
    tasks = [(kind, p) for p in payloads]
    if workers > 1 and len(tasks) > 1:
        try:
            with multiprocessing.Pool(min(workers, len(tasks))) as pool:
                return pool.map(_dispatch, tasks)
        except OSError:
            pass  # no process support here; chunked merge is identical anyway
    return [_dispatch(t) for t in tasks]


# ---------------------------------------------------------------------------
# whole-sequence statistics
# ---------------------------------------------------------------------------

def sum_index(q_max: int, workers: int = 1) -> int:
    """Exact sum of all N(Q) indices; equals 3 N(Q) - 1 identically."""
    if workers > 1:
        return partial_index_sum(q_max, Fraction(1), workers=workers)
    total = 0
    qp, qc = 1, q_max
    for _ in range(totient_summatory(q_max)):
        k = (q_max + qp) // qc
        total += k
        qp, qc = qc, k * qc - qp
    return total


def partial_index_sum(q_max: int, t, workers: int = 1) -> int:
    """Exact sum of indices over gamma <= t."""
    t = Fraction(t)
    if not (0 <= t <= 1):
        raise ValueError("t must lie in [0, 1]")
    if t == 0:
        return 0
    payloads = [(q_max, t0, t1) for t0, t1 in _chunk_bounds(t, workers)]
    return sum(_run_chunks("sum", payloads, workers))


def index_histogram(q_max: int, t=Fraction(1), workers: int = 1) -> dict:
    """Exact counts {index value: occurrences} over gamma <= t."""
    t = Fraction(t)
    if not (0 < t <= 1):
        raise ValueError("t must lie in (0, 1]")
    payloads = [(q_max, t0, t1) for t0, t1 in _chunk_bounds(t, workers)]
    merged: dict = {}
    for part in _run_chunks("hist", payloads, workers):
        for k, c in part.items():
            merged[k] = merged.get(k, 0) + c
    return merged


def sum_index_power(q_max: int, alpha, workers: int = 1) -> Union[int, float]:
    """Sum of nu^alpha over F_Q: exact integer for integer alpha, float otherwise.

    Evaluated from the exact index histogram in a fixed value order, so the
    result is bit-identical for every worker count.
    """
    alpha = Fraction(alpha)
    if alpha <= 0:
        raise ValueError("alpha must be positive")
    if alpha == 1:
        return sum_index(q_max, workers=workers)
    hist = index_histogram(q_max, workers=workers)
    if alpha.denominator == 1:
        e = alpha.numerator
        return sum(c * k**e for k, c in sorted(hist.items()))
    a = float(alpha)
    return sum(c * float(k) ** a for k, c in sorted(hist.items()))


def autocorr_sum(q_max: int, h: int, workers: int = 1) -> int:
    """S_h(Q): sum of nu_i * nu_{i+h} over one period, indices cyclic mod N(Q)."""
    if h < 1:
        raise ValueError("h must be >= 1")
    n = totient_summatory(q_max)
    h = h % n or n  # the index sequence has period N(Q)
    if workers > 1:
        payloads = [(q_max, h, t0, t1) for t0, t1 in _chunk_bounds(Fraction(1), workers)]
        return sum(_run_chunks("autocorr", payloads, workers))
    qp, qc = 1, q_max
    lp, lc = 1, q_max
    for _ in range(h):
        k = (q_max + lp) // lc
        lp, lc = lc, k * lc - lp
    total = 0
    for _ in range(n):
        k = (q_max + qp) // qc
        kh = (q_max + lp) // lc
        total += k * kh
        qp, qc = qc, k * qc - qp
        lp, lc = lc, kh * lc - lp
    return total


def autocorr_sum_interval(q_max: int, h: int, t, workers: int = 1) -> int:
    """S_{h,t}(Q): the autocorrelation sum restricted to gamma_i <= t."""
    if h < 1:
        raise ValueError("h must be >= 1")
    t = Fraction(t)
    if not (0 < t <= 1):
        raise ValueError("t must lie in (0, 1]")
    payloads = [(q_max, h, t0, t1) for t0, t1 in _chunk_bounds(t, workers)]
    return sum(_run_chunks("autocorr", payloads, workers))


def lu_counts(q_max: int, k: int, t=Fraction(1), workers: int = 1) -> Tuple[int, int]:
    """(L, U): counts of gamma <= t with nu = k hitting floor((2Q+1)/q) - 1 resp. - 0."""
    if k < 1:
        raise ValueError("k must be >= 1")
    t = Fraction(t)
    if not (0 < t <= 1):
        raise ValueError("t must lie in (0, 1]")
    payloads = [(q_max, k, t0, t1) for t0, t1 in _chunk_bounds(t, workers)]
    results = _run_chunks("lu", payloads, workers)
    return sum(r[0] for r in results), sum(r[1] for r in results)


def hall_shiu_identity(q_max: int) -> Tuple[int, int]:
    """Both sides of the exact closed-form count identity; they must be equal.

    lhs counts fractions whose index equals floor(2Q/q) - 1 for their
    denominator q; rhs is Q(2Q+1) - N(2Q) - 2N(Q) + 1.  The identity holds for
    every Q >= 1.  With the threshold floor((2Q+1)/q) - 1 instead, the count
    exceeds the rhs by sum of phi(d) over the divisors d <= Q of 2Q+1 (those
    denominators admit only the lower index value), so that variant agrees
    with no similarly clean closed form.
    """
    lhs = 0
    top = 2 * q_max
    qp, qc = 1, q_max
    for _ in range(totient_summatory(q_max)):
        k = (q_max + qp) // qc
        if k == top // qc - 1:
            lhs += 1
        qp, qc = qc, k * qc - qp
    rhs = q_max * (2 * q_max + 1) - totient_summatory(2 * q_max) - 2 * totient_summatory(q_max) + 1
    return lhs, rhs


def visible_points_count(p: ConvexPolygon, scale: int) -> int:
    """Number of coprime integer pairs inside the closed polygon scale * p.

    Brute force over the bounding box with exact edge tests and gcd filtering.
    """
    if scale < 1:
        raise ValueError("scale must be >= 1")
    if not p.vertices:
        return 0
    verts = [(v.x * scale, v.y * scale) for v in p.vertices]
    n = len(verts)
    edges = []
    for i in range(n):
        ax, ay = verts[i]
        bx, by = verts[(i + 1) % n]
        # inside <=> (bx-ax)(y-ay) - (by-ay)(x-ax) >= 0, cleared of denominators
        a = -(by - ay)
        b = bx - ax
        c = a * ax + b * ay
        den = math.lcm(a.denominator, b.denominator, c.denominator)
        edges.append((int(a * den), int(b * den), int(c * den)))
    x_lo = math.ceil(min(v[0] for v in verts))
    x_hi = math.floor(max(v[0] for v in verts))
    y_lo = math.ceil(min(v[1] for v in verts))
    y_hi = math.floor(max(v[1] for v in verts))
    count = 0
    for x in range(x_lo, x_hi + 1):
        for y in range(y_lo, y_hi + 1):
            if math.gcd(x, y) != 1:
                continue
            if all(a * x + b * y >= c for a, b, c in edges):
                count += 1
    return count


# ---------------------------------------------------------------------------
# statistics paired with their asymptotic predictions
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class StatRecord:
    """One experiment row: exact value next to its predicted leading term."""

    order: int
    stat: str
    parameter: str
    exact_value: Union[int, Fraction]
    prediction: Union[Fraction, float]
    ratio: float
    error_bound_form: str


def _make_record(order, stat, parameter, exact, prediction, bound_form) -> StatRecord:
    if prediction == 0:
        ratio = math.nan
    elif isinstance(prediction, Fraction):
        ratio = float(Fraction(exact) / prediction)
    else:
        ratio = float(exact) / prediction
    return StatRecord(order, stat, parameter, exact, prediction, ratio, bound_form)


def autocorr_record(q_max: int, h: int, t=Fraction(1), workers: int = 1) -> StatRecord:
    t = Fraction(t)
    n = totient_summatory(q_max)
    a_h = bcz.autocorrelation_constant(h)
    if t == 1:
        exact = autocorr_sum(q_max, h, workers=workers)
        return _make_record(q_max, "S_h", f"h={h}", exact, a_h * n, "Q*log(Q)^2")
    exact = autocorr_sum_interval(q_max, h, t, workers=workers)
    return _make_record(
        q_max, "S_h", f"h={h};t={t}", exact, t * a_h * n, "Q^(3/2+eps)"
    )


def moment_record(q_max: int, alpha, workers: int = 1) -> StatRecord:
    alpha = Fraction(alpha)
    n = totient_summatory(q_max)
    exact = sum_index_power(q_max, alpha, workers=workers)
    if alpha == 1:
        prediction: Union[Fraction, float] = 2 * n * bcz.b_alpha(1).value
        bound = "Q*log(Q)^2"
    else:
        prediction = 2 * n * bcz.b_alpha(alpha).value
        bound = "Q*log(Q)" if alpha < 1 else "Q^alpha*log(Q)"
    return _make_record(q_max, "moment", f"alpha={alpha}", exact, prediction, bound)


def second_moment_record(q_max: int, workers: int = 1) -> StatRecord:
    """Exact sum of squared indices against its logarithmic leading term."""
    if q_max < 2:
        raise ValueError("need Q >= 2")
    exact = sum_index_power(q_max, 2, workers=workers)
    return _make_record(
        q_max, "moment", "alpha=2", exact, second_moment_prediction(q_max), "Q*log(Q)^2"
    )


def lu_records(q_max: int, k: int, t=Fraction(1), workers: int = 1) -> Tuple[StatRecord, StatRecord]:
    t = Fraction(t)
    n = totient_summatory(q_max)
    low, high = lu_counts(q_max, k, t, workers=workers)
    suffix = f"k={k}" if t == 1 else f"k={k};t={t}"
    rec_l = _make_record(
        q_max, "L", suffix, low, t * bcz.lower_frequency(k) * n, "k + Q*log(Q)/k"
    )
    rec_u = _make_record(
        q_max, "U", suffix, high, t * bcz.upper_frequency(k) * n, "k + Q*log(Q)/k"
    )
    return rec_l, rec_u


def partial_record(q_max: int, t, workers: int = 1) -> StatRecord:
    t = Fraction(t)
    n = totient_summatory(q_max)
    exact = partial_index_sum(q_max, t, workers=workers)
    return _make_record(q_max, "partial", f"t={t}", exact, 3 * n * t, "Q^(3/2+eps)")
