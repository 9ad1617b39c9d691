"""Transfer-map geometry: regions, push-forwards, tables and exact constants."""

import math
from fractions import Fraction

import pytest

from farey_index import (
    FAREY_TRIANGLE,
    Point2,
    PolygonSet,
    TailCertificateError,
    autocorrelation_constant,
    b_alpha,
    bcz_apply,
    intersection_area_table,
    lower_frequency,
    orbit,
    polygon_area,
    push_forward,
    region_polygon,
    region_star_polygon,
    star_intersection_area,
    totient_summatory,
    upper_frequency,
    upper_lower_triangles,
)
from farey_index.bcz import (
    mirror_polygon,
    mirror_set,
    set_intersection_area,
    star_area,
    symmetric_difference_area,
)

from conftest import brute_farey

F = Fraction


def test_bcz_apply_examples():
    image, k = bcz_apply(Point2(1, 1))
    assert (image, k) == (Point2(1, 1), 2)  # fixed point

    image, k = bcz_apply(Point2(F(3, 5), F(4, 5)))
    assert k == 2 and image == Point2(F(4, 5), 1)

    # denominators (1, 5)/5 advance to (5, 4)/5 for Q = 5
    image, k = bcz_apply(Point2(F(1, 5), 1))
    assert k == 1 and image == Point2(1, F(4, 5))

    with pytest.raises(ValueError):
        bcz_apply(Point2(F(1, 4), F(1, 4)))  # below the diagonal
    with pytest.raises(ValueError):
        bcz_apply(Point2(1, 0))


def test_orbit_examples():
    state = orbit(Point2(F(2, 3), F(2, 3)), 0)
    assert state.L == (F(2, 3), F(2, 3)) and state.kappas == ()

    state = orbit(Point2(1, 1), 3)
    assert state.kappas == (2, 2, 2)
    assert state.L == (1, 1, 1, 1, 1)

    # orbit of (1/5, 1) carries the index sequence of F_5
    state = orbit(Point2(F(1, 5), 1), 9)
    assert state.kappas == (1, 2, 3, 1, 5, 1, 3, 2, 1)
    # the L-recursion invariant holds along the orbit
    for i in range(1, len(state.kappas) + 1):
        assert state.L[i + 1] == state.kappas[i - 1] * state.L[i] - state.L[i - 1]


def test_orbit_matches_farey_denominators():
    # kappa_{r+1} equals the index of the (i+r)-th fraction, for every start i
    for q_max in range(2, 51, 7):
        fr = brute_farey(q_max)
        dens = [1] + [f.denominator for f in fr]
        ext = dens + dens[1:]
        for i in range(1, len(fr) + 1):
            state = orbit(Point2(F(dens[i - 1], q_max), F(dens[i], q_max)), 3)
            for r in range(3):
                assert state.kappas[r] == (q_max + ext[i + r - 1]) // ext[i + r]


def test_region_polygon_areas():
    assert polygon_area(region_polygon(1)) == F(1, 6)
    assert polygon_area(region_polygon(2)) == F(1, 6)
    assert polygon_area(region_polygon(5)) == F(2, 105)
    for k in range(2, 101):
        assert polygon_area(region_polygon(k)) == F(4, k * (k + 1) * (k + 2))


def test_region_star_areas_and_partition():
    assert region_star_polygon(1) == FAREY_TRIANGLE
    assert star_area(1) == F(1, 2)
    assert star_area(2) == F(1, 3)
    assert star_area(5) == F(1, 15)
    for cut in range(1, 101):
        partial = sum((polygon_area(region_polygon(k)) for k in range(1, cut + 1)), F(0))
        assert partial + star_area(cut + 1) == F(1, 2)


def test_upper_lower_triangles_and_frequencies():
    upper, lower = upper_lower_triangles(1)
    assert not upper and polygon_area(lower) == F(1, 6)
    assert upper_frequency(1) == 0
    assert lower_frequency(1) == F(1, 3)
    assert upper_frequency(2) == F(2, 9)

    for k in range(1, 51):
        upper, lower = upper_lower_triangles(k)
        # the two triangles tile the region
        assert polygon_area(upper) + polygon_area(lower) == polygon_area(region_polygon(k))
        assert lower_frequency(k) == 4 * (F(1, (k + 1) ** 2) - F(1, k + 1) + F(1, k + 2))
        if k >= 2:
            assert upper_frequency(k) == 4 * (F(1, k) - F(1, k + 1) - F(1, (k + 1) ** 2))


def test_push_forward_identity_and_mirror():
    assert push_forward(region_polygon(3), 0).pieces == (region_polygon(3),)
    for k in range(1, 51):
        pushed = push_forward(region_polygon(k), 1)
        assert symmetric_difference_area(pushed, PolygonSet((mirror_polygon(region_polygon(k)),))) == 0


def test_push_forward_preserves_area_to_depth_four():
    for k in range(1, 51):
        target = polygon_area(region_polygon(k))
        current = PolygonSet((region_polygon(k),))
        for _ in range(4):
            current = push_forward(current, 1)
            assert current.area == target


def test_push_forward_inverse_round_trip():
    for k in range(1, 51):
        start = PolygonSet((region_polygon(k),))
        round_trip = push_forward(push_forward(start, 1), -1)
        assert symmetric_difference_area(round_trip, start) == 0
    # and through the stars, which exercise the corner absorption
    for m in (2, 3, 5):
        start = PolygonSet((region_star_polygon(m),))
        round_trip = push_forward(push_forward(start, 2), -2)
        assert symmetric_difference_area(round_trip, start) == 0


EXPECTED_TABLE_H1 = [
    ["1/2", "1/3", "1/6", "1/10", "1/15"],
    ["1/3", "1/6", "1/30", "1/210", "0"],
    ["1/6", "1/30", "0", "0", "0"],
    ["1/10", "1/210", "0", "0", "0"],
    ["1/15", "0", "0", "0", "0"],
]

EXPECTED_TABLE_H2 = [
    ["1/2", "1/3", "1/6", "1/10", "1/15", "1/21", "1/28", "1/36"],
    ["1/3", "23/84", "31/210", "2/21", "1/15", "1/21", "1/28", "1/36"],
    ["1/6", "31/210", "1/10", "13/210", "1/30", "1/70", "1/220", "1/1170"],
    ["1/10", "2/21", "13/210", "1/42", "1/231", "0", "0", "0"],
    ["1/15", "1/15", "1/30", "1/231", "0", "0", "0", "0"],
    ["1/21", "1/21", "1/70", "0", "0", "0", "0", "0"],
    ["1/28", "1/28", "1/220", "0", "0", "0", "0", "0"],
    ["1/36", "1/36", "1/1170", "0", "0", "0", "0", "0"],
]


def test_intersection_table_h1():
    table = intersection_area_table(1, 5)
    for m in range(5):
        for n in range(5):
            assert table[m][n] == F(EXPECTED_TABLE_H1[m][n]), (m + 1, n + 1)
    # the large-index families: first column 2/(m(m+1)), all later columns empty
    for m in (5, 10, 20, 50):
        assert star_intersection_area(1, m, 1) == F(2, m * (m + 1))
        assert star_intersection_area(1, m, 2) == 0


def test_intersection_table_h2():
    table = intersection_area_table(2, 8)
    for m in range(8):
        for n in range(8):
            assert table[m][n] == F(EXPECTED_TABLE_H2[m][n]), (m + 1, n + 1)
    for m in (9, 12, 30):
        assert star_intersection_area(2, m, 1) == F(2, m * (m + 1))
        assert star_intersection_area(2, m, 2) == F(2, m * (m + 1))
        assert star_intersection_area(2, m, 3) == 0


@pytest.mark.parametrize("h", [1, 2, 3])
def test_intersection_table_symmetry(h):
    size = 4 * h + 4
    table = intersection_area_table(h, size)
    for m in range(size):
        for n in range(m + 1, size):
            assert table[m][n] == table[n][m], (h, m + 1, n + 1)


def test_emptiness_bounds():
    # coarse bound: images of star m avoid star n when min(m, n) > 2^(h+1)
    for h in (1, 2):
        c = 2 ** (h + 1)
        for m, n in ((c + 1, c + 1), (c + 1, c + 4), (c + 4, c + 1)):
            assert star_intersection_area(h, m, n) == 0
    # sharper bound: at m = 4h + 2 the image already avoids star 3
    for h in (1, 2, 3):
        assert star_intersection_area(h, 4 * h + 2, 3) == 0


def test_autocorrelation_constants_exact():
    assert autocorrelation_constant(1) == F(192, 35)
    assert autocorrelation_constant(2) == F(796727, 90090)


def test_autocorrelation_constant_from_table_sum():
    # h=1: full double sum assembled from the 5x5 table plus analytic tails
    table = intersection_area_table(1, 5)
    block = sum(table[m][n] for m in range(1, 4) for n in range(1, 4))
    row_and_column = 2 * sum((star_area(m) for m in range(1, 5)), F(0)) - star_area(1)
    tails = 2 * F(2, 5)  # remaining first-row and first-column star areas
    assert 2 * (block + row_and_column + tails) == F(192, 35)


def test_autocorrelation_matches_enumeration():
    # the exact geometric constant explains the actual Farey statistic
    from farey_index import autocorr_sum

    for h in (1, 2, 3):
        limit = float(autocorrelation_constant(h))
        n = totient_summatory(800)
        ratio = autocorr_sum(800, h) / (limit * n)
        assert abs(ratio - 1) < 0.005, (h, ratio)


def test_autocorrelation_certificate_failure_is_loud():
    with pytest.raises((TailCertificateError, ValueError)):
        autocorrelation_constant(2, block_limit=3)


def test_b_alpha_exact_at_one():
    result = b_alpha(1)
    assert result.exact and result.value == F(3, 2) and result.tail_bound == 0


def test_b_alpha_near_zero_exponent():
    # as alpha -> 0 the sum tends to the triangle area 1/2
    result = b_alpha(F(1, 100), tol=1e-9)
    assert abs(float(result.value) - 0.5) < 0.02


def test_b_alpha_two_evaluation_routes_agree():
    # direct sum over regions vs the increment form over star regions
    for alpha in (F(1, 2), F(3, 4)):
        direct = b_alpha(alpha, tol=1e-10)
        a = float(alpha)
        total = 0.0
        cutoff = 40_000
        for m in range(1, cutoff + 1):
            inc = m**a - (m - 1) ** a
            area = 0.5 if m == 1 else 2.0 / (m * (m + 1))
            total += inc * area
        tail = 2 * a * cutoff ** (a - 2) / (2 - a)
        assert abs(float(direct.value) - total) <= direct.tail_bound + tail + 1e-12


def test_b_alpha_rejects_bad_input():
    with pytest.raises(ValueError):
        b_alpha(2)
    with pytest.raises(ValueError):
        b_alpha(F(1, 2), tol=0)


def test_star_images_under_pushes_keep_area():
    for m in (2, 3, 7):
        for h in (1, 2, 3):
            base = PolygonSet((region_star_polygon(m),))
            assert push_forward(base, h).area == star_area(m)


def test_direct_push_route_agrees_with_split_route():
    # the table entries use a forward/backward split; the direct push of the
    # star through two steps must land on the same intersection areas
    from farey_index.bcz import set_polygon_intersection_area

    pushed = push_forward(PolygonSet((region_star_polygon(3),)), 2)
    assert set_polygon_intersection_area(pushed, region_star_polygon(3)) == F(1, 10)
    assert set_polygon_intersection_area(pushed, region_star_polygon(2)) == F(31, 210)
    pushed1 = push_forward(PolygonSet((region_star_polygon(2),)), 1)
    assert set_polygon_intersection_area(pushed1, region_star_polygon(4)) == F(1, 210)


def test_push_forward_rejects_pieces_outside_triangle():
    from farey_index import ConvexPolygon, GeometryError

    outside = PolygonSet((ConvexPolygon(((0, 0), (1, 0), (0, 1))),))
    with pytest.raises(GeometryError):
        push_forward(outside, 1)
    with pytest.raises(ValueError):
        orbit(Point2(1, 1), -1)


def test_set_intersection_area_against_symmetry():
    left = push_forward(PolygonSet((region_star_polygon(2),)), 1)
    right = PolygonSet((region_star_polygon(3),))
    value = set_intersection_area(left, right)
    assert value == star_intersection_area(1, 2, 3) == F(1, 30)
    mirrored = mirror_set(left)
    assert mirrored.area == left.area
