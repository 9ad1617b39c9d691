"""The area-preserving transfer map on the Farey triangle and its constants.

Phase space is the triangle {(x, y) in [0,1]^2 : x + y > 1}.  The map sends
(x, y) to (y, k y - x) with k = floor((1+x)/y); on the region where k is
constant it acts as a fixed unimodular matrix, so it preserves area exactly
and maps rational convex polygons to rational convex polygons.

Key structural facts used throughout (all verified by the test suite):

  * the region of index k is a triangle (k = 1) or quadrilateral (k >= 2)
    with area 1/6 resp. 4/(k (k+1) (k+2));
  * the map mirrors each region across the diagonal: T R_k = S R_k where
    S(x, y) = (y, x), and T^{-1} = S T S;
  * the "star" region (index >= k) is a triangle of area 2/(k (k+1)) whose
    one-step image is its mirror, which makes infinite tails of region sums
    telescope in closed form.

Push-forwards decompose a polygon against the regions branch by branch.  A
piece containing the corner (1, 0) meets infinitely many regions; once the
unclipped remainder equals a full star region the loop emits that region's
mirror in one step (exact, by the mirror identity), so every push-forward
stays a finite union of convex polygons.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Tuple, Union

from .geometry import (
    ConvexPolygon,
    GeometryError,
    Point2,
    UnimodularMap,
    apply_map,
    clip_convex,
    polygon_area,
)

#: The Farey triangle, as a closed polygon.
FAREY_TRIANGLE = ConvexPolygon(((0, 1), (1, 0), (1, 1)))

#: Mirror across the diagonal x = y.
SWAP = UnimodularMap(0, 1, 1, 0)

# decomposition loops abort past this region index; legitimate absorption
# of a full corner star happens at small index
_REGION_SCAN_LIMIT = 1024


class TailCertificateError(GeometryError):
    """A geometric tail-containment certificate failed at the chosen cutoff."""


def _branch(k: int) -> UnimodularMap:
    # (x, y) -> (y, k y - x), determinant +1
    return UnimodularMap(0, 1, -1, k)


def region_index(p: Point2) -> int:
    """The branch index floor((1+x)/y) of a point strictly inside the triangle."""
    if not (0 < p.x <= 1 and 0 < p.y <= 1 and p.x + p.y > 1):
        raise ValueError("point is outside the Farey triangle")
    ratio = (1 + p.x) / p.y
    return ratio.numerator // ratio.denominator


def bcz_apply(p: Point2) -> Tuple[Point2, int]:
    """One step of the transfer map; returns ((y, k y - x), k)."""
    k = region_index(p)
    return Point2(p.y, k * p.y - p.x), k


@dataclass(frozen=True)
class OrbitState:
    """Orbit data: L_0, ..., L_{r+1} and the branch indices kappa_1..kappa_r."""

    L: Tuple[Fraction, ...]
    kappas: Tuple[int, ...]


def orbit(p: Point2, r: int) -> OrbitState:
    """Iterate the map r times from p, recording the L-recursion and indices.

    Satisfies L_{i+1} = kappa_i * L_i - L_{i-1} with L_0 = x, L_1 = y.
    """
    if r < 0:
        raise ValueError("orbit length must be >= 0")
    values = [p.x, p.y]
    kappas = []
    current = p
    for _ in range(r):
        current, k = bcz_apply(current)
        kappas.append(k)
        values.append(current.y)
    return OrbitState(tuple(values), tuple(kappas))


@lru_cache(maxsize=None)
def region_polygon(k: int) -> ConvexPolygon:
    """Closure of the region with branch index k.

    k = 1 is the top triangle (0,1), (1,1), (1/3, 2/3); for k >= 2 the region
    is the quadrilateral between the lines y = (1+x)/k and y = (1+x)/(k+1).
    """
    if k < 1:
        raise ValueError("region index must be >= 1")
    if k == 1:
        return ConvexPolygon(((0, 1), (1, 1), (Fraction(1, 3), Fraction(2, 3))))
    return ConvexPolygon(
        (
            (Fraction(k - 1, k + 1), Fraction(2, k + 1)),
            (1, Fraction(2, k)),
            (1, Fraction(2, k + 1)),
            (Fraction(k, k + 2), Fraction(2, k + 2)),
        )
    )


@lru_cache(maxsize=None)
def region_star_polygon(k: int) -> ConvexPolygon:
    """Closure of the union of all regions with index >= k (a triangle)."""
    if k < 1:
        raise ValueError("region index must be >= 1")
    if k == 1:
        return FAREY_TRIANGLE
    return ConvexPolygon(
        (
            (Fraction(k - 1, k + 1), Fraction(2, k + 1)),
            (1, Fraction(2, k)),
            (1, 0),
        )
    )


@lru_cache(maxsize=None)
def region_area(k: int) -> Fraction:
    return polygon_area(region_polygon(k))


@lru_cache(maxsize=None)
def star_area(k: int) -> Fraction:
    return polygon_area(region_star_polygon(k))


def upper_lower_triangles(k: int) -> Tuple[ConvexPolygon, ConvexPolygon]:
    """Split region k into its upper and lower triangle (upper empty for k=1).

    Doubling their areas gives the limit frequencies u_k and l_k of the two
    index/denominator count statistics.
    """
    if k < 1:
        raise ValueError("region index must be >= 1")
    lower = ConvexPolygon(
        (
            (Fraction(k, k + 2), Fraction(2, k + 2)),
            (Fraction(k - 1, k + 1), Fraction(2, k + 1)),
            (1, Fraction(2, k + 1)),
        )
    )
    if k == 1:
        return ConvexPolygon(), lower
    upper = ConvexPolygon(
        (
            (1, Fraction(2, k)),
            (Fraction(k - 1, k + 1), Fraction(2, k + 1)),
            (1, Fraction(2, k + 1)),
        )
    )
    return upper, lower


@lru_cache(maxsize=None)
def lower_frequency(k: int) -> Fraction:
    """l_k = 2 * area of the lower triangle of region k."""
    return 2 * polygon_area(upper_lower_triangles(k)[1])


@lru_cache(maxsize=None)
def upper_frequency(k: int) -> Fraction:
    """u_k = 2 * area of the upper triangle of region k (0 for k = 1)."""
    return 2 * polygon_area(upper_lower_triangles(k)[0])


def mirror_polygon(p: ConvexPolygon) -> ConvexPolygon:
    return apply_map(p, SWAP)


@dataclass(frozen=True)
class PolygonSet:
    """A finite union of convex polygons with pairwise disjoint interiors."""

    pieces: Tuple[ConvexPolygon, ...] = ()

    def __post_init__(self):
        object.__setattr__(
            self, "pieces", tuple(p for p in self.pieces if p.vertices)
        )

    @property
    def area(self) -> Fraction:
        return sum((polygon_area(p) for p in self.pieces), Fraction(0))


SetLike = Union[PolygonSet, ConvexPolygon]


def _as_set(s: SetLike) -> PolygonSet:
    if isinstance(s, PolygonSet):
        return s
    return PolygonSet((s,))


def mirror_set(s: SetLike) -> PolygonSet:
    s = _as_set(s)
    return PolygonSet(tuple(mirror_polygon(p) for p in s.pieces))


def set_polygon_intersection_area(s: SetLike, poly: ConvexPolygon) -> Fraction:
    s = _as_set(s)
    return sum(
        (polygon_area(clip_convex(piece, poly)) for piece in s.pieces), Fraction(0)
    )


def set_intersection_area(s1: SetLike, s2: SetLike) -> Fraction:
    s1 = _as_set(s1)
    s2 = _as_set(s2)
    total = Fraction(0)
    for p in s1.pieces:
        for q in s2.pieces:
            total += polygon_area(clip_convex(p, q))
    return total


def symmetric_difference_area(s1: SetLike, s2: SetLike) -> Fraction:
    """Area of the symmetric difference; 0 iff the two unions agree as sets."""
    s1 = _as_set(s1)
    s2 = _as_set(s2)
    return s1.area + s2.area - 2 * set_intersection_area(s1, s2)


def _check_inside_triangle(p: ConvexPolygon) -> None:
    for v in p.vertices:
        if not (0 <= v.x <= 1 and 0 <= v.y <= 1 and v.x + v.y >= 1):
            raise GeometryError(f"piece escaped the Farey triangle at {v}")


def _step_piece(piece: ConvexPolygon) -> list[ConvexPolygon]:
    """One exact application of the map to a convex piece of the triangle."""
    _check_inside_triangle(piece)
    total = polygon_area(piece)
    if total == 0:
        return []

    # the branch index (1+x)/y is a ratio of linear forms, so its extrema over
    # a convex polygon are attained at vertices; a vertex at (1, 0) makes the
    # piece meet infinitely many regions and is handled by star absorption
    k_lo = None
    k_hi = None
    corner = False
    for v in piece.vertices:
        if v.y == 0:
            corner = True
            continue
        ratio = (1 + v.x) / v.y
        k_v = ratio.numerator // ratio.denominator
        k_lo = k_v if k_lo is None else min(k_lo, k_v)
        k_hi = k_v if k_hi is None else max(k_hi, k_v)

    out = []
    acc = Fraction(0)
    k = max(1, k_lo)
    while True:
        part = clip_convex(piece, region_polygon(k))
        if part.vertices:
            out.append(apply_map(part, _branch(k)))
            acc += polygon_area(part)
        if acc == total:
            break
        if corner:
            # remainder is piece . star(k+1); if it fills the whole star,
            # its image is the mirrored star (one exact piece)
            if total - acc == star_area(k + 1):
                out.append(mirror_polygon(region_star_polygon(k + 1)))
                break
        elif k >= k_hi:
            raise GeometryError("region decomposition failed to exhaust piece")
        if k >= _REGION_SCAN_LIMIT:
            raise GeometryError("region decomposition did not terminate")
        k += 1
    return out


def push_forward(s: SetLike, h: int) -> PolygonSet:
    """Exact image of a polygon set under the h-th iterate of the map.

    Negative h applies the inverse, via T^{-1} = S T S.  Total area is
    preserved exactly at every step.
    """
    s = _as_set(s)
    if h == 0:
        return s
    if h < 0:
        return mirror_set(push_forward(mirror_set(s), -h))
    for _ in range(h):
        s = PolygonSet(tuple(q for p in s.pieces for q in _step_piece(p)))
    return s


# ---------------------------------------------------------------------------
# Star-intersection areas and the autocorrelation constants
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def _forward_star_pieces(m: int, steps: int) -> Tuple[ConvexPolygon, ...]:
    """Pieces of T^(steps+1) applied to star region m.

    The first application is free (the mirror identity); the remaining
    `steps` applications are exact push-forwards.
    """
    base = PolygonSet((mirror_polygon(region_star_polygon(m)),))
    pushed = push_forward(base, steps)
    if pushed.area != star_area(m):
        raise GeometryError("push-forward lost area")
    return pushed.pieces


@lru_cache(maxsize=None)
def _backward_star_pieces(n: int, steps: int) -> Tuple[ConvexPolygon, ...]:
    """Pieces of T^(-steps) applied to star region n (S T^steps S conjugation)."""
    if steps == 0:
        return (region_star_polygon(n),)
    base = PolygonSet((mirror_polygon(region_star_polygon(n)),))
    pushed = push_forward(base, steps)
    return tuple(mirror_polygon(p) for p in pushed.pieces)


def star_intersection_area(h: int, m: int, n: int) -> Fraction:
    """Exact area of (T^h star_m) . star_n.

    The exponent is split between a forward image of star_m and a backward
    image of star_n so that neither side needs more than about h/2 explicit
    push-forward steps.
    """
    if h < 1 or m < 1 or n < 1:
        raise ValueError("need h >= 1 and region indices >= 1")
    if m == 1:
        return star_area(n)
    if n == 1:
        return star_area(m)
    fwd = (h + 2) // 2
    bwd = h - fwd
    left = _forward_star_pieces(m, fwd - 1)
    right = _backward_star_pieces(n, bwd)
    total = Fraction(0)
    for p in left:
        for q in right:
            total += polygon_area(clip_convex(p, q))
    return total


def intersection_area_table(h: int, size: int) -> list[list[Fraction]]:
    """The size-by-size matrix of star-intersection areas for exponent h."""
    if h < 1 or size < 2:
        raise ValueError("need h >= 1 and size >= 2")
    return [
        [star_intersection_area(h, m, n) for n in range(1, size + 1)]
        for m in range(1, size + 1)
    ]


def _star_row_sum(h: int, m: int) -> Fraction:
    """Sum over n >= 2 of area((T^h star_m) . star_n), with exact tails.

    The terms are nonincreasing in n.  Once a term vanishes the rest vanish;
    once a term equals the full star area the image contains every later star
    and the remaining sum telescopes to 2/n.
    """
    total = Fraction(0)
    n = 2
    while True:
        a_n = star_intersection_area(h, m, n)
        if a_n == 0:
            return total
        if a_n == star_area(n):
            return total + Fraction(2, n)
        total += a_n
        n += 1
        if n > _REGION_SCAN_LIMIT:
            raise TailCertificateError(f"row sum for m={m} did not terminate")


@lru_cache(maxsize=None)
def autocorrelation_constant(h: int, block_limit: int | None = None) -> Fraction:
    """The exact rational autocorrelation constant A(h).

    A(h)/2 is the doubly infinite sum of star-intersection areas.  Row m=1 and
    column n=1 are analytic (each equals the sum of all star areas, 3/2, so
    together they contribute 5/2).  Rows 2 <= m < M are summed exactly with
    telescoped tails.  Rows m >= M (default M = 4h + 2) are certified by the
    geometry of the M-th image: it must avoid star_3 entirely, and must either
    avoid star_2 (rows contribute nothing) or lie inside it (rows contribute
    the telescoped star areas, 2/M).  Nestedness of the stars transfers the
    certificate to every row beyond M; any other configuration raises.
    """
    if h < 1:
        raise ValueError("h must be >= 1")
    cutoff = block_limit if block_limit is not None else 4 * h + 2
    if cutoff < 3:
        raise ValueError("block limit too small")

    half = Fraction(5, 2)
    for m in range(2, cutoff):
        half += _star_row_sum(h, m)

    into_star3 = star_intersection_area(h, cutoff, 3)
    if into_star3 != 0:
        raise TailCertificateError(
            f"tail rows still meet star_3 at cutoff {cutoff}; raise the block limit"
        )
    into_star2 = star_intersection_area(h, cutoff, 2)
    if into_star2 == star_area(cutoff):
        half += Fraction(2, cutoff)
    elif into_star2 != 0:
        raise TailCertificateError(
            f"image of star_{cutoff} splits across star_2; raise the block limit"
        )
    return 2 * half


# ---------------------------------------------------------------------------
# The power-moment constant B_alpha
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PowerMomentConstant:
    """Value of B_alpha with a certified error bound.

    `value` is exact (a Fraction, tail_bound 0) when alpha is an integer;
    otherwise it is a float enclosed within +/- tail_bound.
    """

    value: Union[Fraction, float]
    tail_bound: float
    terms: int
    exact: bool

    def __float__(self) -> float:
        return float(self.value)


_AREA_FORMULA_CHECKED = False


def _certified_region_area(k: int) -> float:
    """Float area of region k, from polygons for small k, by the certified
    closed form 4/(k (k+1) (k+2)) beyond."""
    global _AREA_FORMULA_CHECKED
    if k <= 64:
        return float(region_area(k))
    if not _AREA_FORMULA_CHECKED:
        for j in range(2, 65):
            if region_area(j) * j * (j + 1) * (j + 2) != 4:
                raise GeometryError("region area closed form failed certification")
        _AREA_FORMULA_CHECKED = True
    return 4.0 / (k * (k + 1.0) * (k + 2.0))


def b_alpha(alpha, tol: float = 1e-8) -> PowerMomentConstant:
    """B_alpha = sum over k of k^alpha * area(region k), for 0 < alpha < 2.

    For alpha = 1 the sum telescopes and the exact value is returned.  For
    other alpha the partial sum is completed with an integral enclosure of the
    tail: the k-th term lies between 4 k^(alpha-3) (1 - 3/k) and 4 k^(alpha-3),
    so bracketing integrals pin the tail within a width that is driven below
    2*tol before summation starts.
    """
    alpha = Fraction(alpha)
    if not (0 < alpha < 2):
        raise ValueError("alpha must lie in (0, 2)")
    if tol <= 0:
        raise ValueError("tol must be positive")

    if alpha.denominator == 1:  # alpha == 1
        cut = 64
        value = sum((k * region_area(k) for k in range(1, cut + 1)), Fraction(0))
        value += Fraction(4, cut + 2)  # telescoped tail of 4/((k+1)(k+2))
        return PowerMomentConstant(value, 0.0, cut, True)

    a = float(alpha)

    def tail_bracket(cut: int):
        upper = 4.0 * cut ** (a - 2) / (2 - a)
        lower = 4.0 * (cut + 1) ** (a - 2) / (2 - a) - 12.0 * cut ** (a - 3) / (3 - a)
        return lower, upper

    cut = 1024
    while True:
        lower, upper = tail_bracket(cut)
        if (upper - lower) / 2 <= tol:
            break
        cut *= 2
        if cut > 1 << 26:
            raise ValueError("tolerance not achievable by direct summation")

    partial = _certified_region_area(1)  # k = 1 term: 1^alpha * 1/6
    for k in range(2, cut + 1):
        partial += k ** a * _certified_region_area(k)
    value = partial + (upper + lower) / 2
    return PowerMomentConstant(value, (upper - lower) / 2, cut, False)
