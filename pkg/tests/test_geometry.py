import itertools

import pytest

from pg_qldpc.claims import conic_table, hyperoval_table
from pg_qldpc.geometry import (
    GeometryInvariantError,
    ProjectiveLine,
    ProjectivePoint,
    UnsupportedFieldError,
    build_plane,
    check_plane_axioms,
    classify_lines,
    conic_line_census,
    field_ops,
    has_no_three_collinear,
    hyperoval_counts,
    incidence,
    nucleus,
    polynomial_str,
    standard_conic,
)


@pytest.mark.parametrize("s", [1, 2, 3, 4, 8])
def test_field_inverses(s):
    gf = field_ops(s)
    for a in range(1, gf.q):
        assert gf.mul(a, gf.inv(a)) == 1


@pytest.mark.parametrize("s", [2, 3, 4])
def test_field_distributive(s):
    gf = field_ops(s)
    for a, b, c in itertools.product(range(gf.q), repeat=3):
        assert gf.mul(a, b ^ c) == gf.mul(a, b) ^ gf.mul(a, c)
        assert gf.mul(gf.mul(a, b), c) == gf.mul(a, gf.mul(b, c))


@pytest.mark.parametrize("s", [0, 9])
def test_unsupported_field(s):
    with pytest.raises(UnsupportedFieldError):
        field_ops(s)


def test_zero_has_no_inverse():
    with pytest.raises(ZeroDivisionError):
        field_ops(3).inv(0)


def test_polynomial_str():
    assert polynomial_str(0b10011) == "x^4+x+1"
    assert polynomial_str(0b111) == "x^2+x+1"


def test_plane_counts_and_axioms(field_s, geometry_of):
    plane, _ = geometry_of(field_s)
    q = plane.q
    assert len(plane.points) == len(plane.lines) == q * q + q + 1
    assert all(len(pts) == q + 1 for pts in plane.line_points)
    assert check_plane_axioms(plane) == []


def test_plane_order_is_canonical():
    plane = build_plane(1)
    assert [str(p) for p in plane.points[:3]] == ["[0,0,1]", "[0,1,0]", "[0,1,1]"]
    assert str(plane.lines[0]) == "(0,0,1)"
    assert plane.points == tuple(sorted(plane.points))


def test_incidence_matches_line_points():
    plane = build_plane(2)
    for li, line in enumerate(plane.lines):
        expected = {pi for pi, p in enumerate(plane.points) if incidence(plane.gf, p, line)}
        assert expected == set(plane.line_points[li])


def test_incidence_example():
    gf = field_ops(1)
    assert incidence(gf, ProjectivePoint((1, 1, 0)), ProjectiveLine((1, 1, 1)))
    assert not incidence(gf, ProjectivePoint((1, 0, 0)), ProjectiveLine((1, 1, 1)))


def test_line_through_and_meet():
    plane = build_plane(2)
    a, b = 3, 11
    li = plane.line_through(a, b)
    assert plane.on_line(a, li) and plane.on_line(b, li)
    assert plane.meet(li, (li + 1) % len(plane.lines)) in plane.line_points[li]


def test_conic_and_nucleus(field_s, geometry_of):
    plane, partition = geometry_of(field_s)
    conic = standard_conic(plane)
    assert len(conic) == plane.q + 1
    assert has_no_three_collinear(plane, conic)
    assert nucleus(plane, conic) == plane.index_of_point((0, 1, 0))
    assert partition.hyperoval == conic | {partition.nucleus}
    assert has_no_three_collinear(plane, partition.hyperoval)


def test_conic_line_census(field_s, geometry_of):
    plane, partition = geometry_of(field_s)
    census = conic_line_census(plane, partition.conic_points)
    table = conic_table(field_s)
    assert len(census.tangent) == table["tangent_lines"]
    assert len(census.secant) == table["secant_lines"]
    assert len(census.skew) == table["skew_lines"]


@pytest.mark.parametrize("s", [1, 2, 3, 4])
def test_hyperoval_table(s, geometry_of):
    plane, partition = geometry_of(s)
    counts = hyperoval_counts(plane, partition)
    table = hyperoval_table(s)
    assert counts["hyperoval_points"] == table["hyperoval_points"]
    assert counts["secant_lines"] == table["secant_lines"]
    assert counts["skew_lines"] == table["skew_lines"]
    assert counts["secant_per_point"] == {table["secant_per_point"]}
    assert counts["skew_per_point"] == {table["skew_per_point"]}


def test_fano_partition(geometry_of):
    plane, partition = geometry_of(1)
    assert [str(plane.lines[li]) for li in partition.skew_lines] == ["(1,1,1)"]
    assert len(partition.secant_lines) == 6


def test_classify_lines_rejects_non_hyperoval():
    plane = build_plane(1)
    # A full line plus one more point meets that line three times.
    bad = frozenset(plane.line_points[0]) | {next(p for p in range(7) if p not in plane.line_points[0])}
    with pytest.raises(GeometryInvariantError):
        classify_lines(plane, bad)
