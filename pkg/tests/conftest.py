"""Shared brute-force oracles for the test suite.

Everything here is deliberately independent of the package internals: Farey
sequences come from sorting all reduced fractions, index values from the
neighbor-sum quotient, convex hulls from a monotone chain over integer points.
"""

from __future__ import annotations

import math
from fractions import Fraction

import pytest


def brute_farey(q_max):
    """All reduced fractions in (0, 1] with denominator <= q_max, ascending."""
    seen = set()
    for q in range(1, q_max + 1):
        for a in range(1, q + 1):
            if math.gcd(a, q) == 1:
                seen.add(Fraction(a, q))
    return sorted(seen)


def brute_indices(q_max):
    """(fractions, denominators, indices) of F_Q by the neighbor-sum quotient."""
    fr = brute_farey(q_max)
    dens = [f.denominator for f in fr]
    n = len(fr)
    out = []
    for i in range(n):
        before = dens[i - 1] if i else 1            # predecessor of 1/Q is 0/1
        after = dens[i + 1] if i + 1 < n else dens[0]  # successor of 1/1 is 1 + 1/Q
        assert (before + after) % dens[i] == 0
        out.append((before + after) // dens[i])
    return fr, dens, out


def cross2(o, a, b):
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def hull(points):
    """Convex hull, counterclockwise without collinear points (monotone chain)."""
    pts = sorted(set(points))
    if len(pts) <= 2:
        return pts
    def build(seq):
        out = []
        for p in seq:
            while len(out) >= 2 and cross2(out[-2], out[-1], p) <= 0:
                out.pop()
            out.append(p)
        return out
    lower = build(pts)
    upper = build(reversed(pts))
    return lower[:-1] + upper[:-1]


def shoelace2(points):
    """Twice the signed area of a polygon given as coordinate tuples."""
    total = 0
    n = len(points)
    for i in range(n):
        x0, y0 = points[i]
        x1, y1 = points[(i + 1) % n]
        total += x0 * y1 - x1 * y0
    return total


@pytest.fixture(scope="session")
def autocorr_ratios():
    """S_h(Q) / (A(h) N(Q)) for h in {1, 2} across the convergence ladder."""
    from farey_index import autocorr_sum, autocorrelation_constant, totient_summatory

    data = {}
    for h in (1, 2):
        limit = float(autocorrelation_constant(h))
        for q in (500, 1000, 2000, 4000):
            data[h, q] = autocorr_sum(q, h) / (limit * totient_summatory(q))
    return data
