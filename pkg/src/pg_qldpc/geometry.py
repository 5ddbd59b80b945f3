"""The projective plane PG(2,2^s), its standard conic and regular hyperoval."""

from __future__ import annotations

import itertools
import logging
import random
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Iterable

from pg_qldpc.configuration import MAX_FIELD_S

# Reduction polynomials, as integer bitmasks (bit i = coefficient of x^i).
IRREDUCIBLE_POLYNOMIALS: dict[int, int] = {
    1: 0b10,          # x
    2: 0b111,         # x^2 + x + 1
    3: 0b1011,        # x^3 + x + 1
    4: 0b10011,       # x^4 + x + 1
    5: 0b100101,      # x^5 + x^2 + 1
    6: 0b1000011,     # x^6 + x + 1
    7: 0b10000011,    # x^7 + x + 1
    8: 0b100011101,   # x^8 + x^4 + x^3 + x^2 + 1
}


class UnsupportedFieldError(ValueError):
    """Raised when s is outside the tabulated range."""


class GeometryInvariantError(RuntimeError):
    """Raised when a computed configuration contradicts a theorem of the plane."""


def polynomial_str(poly: int) -> str:
    """Render a bitmask polynomial as text, e.g. ``x^2+x+1``."""
    terms = []
    for i in range(poly.bit_length() - 1, -1, -1):
        if (poly >> i) & 1:
            terms.append("1" if i == 0 else "x" if i == 1 else f"x^{i}")
    return "+".join(terms)


##########################
# Field arithmetic
##########################

class GaloisField:
    """GF(2^s) with elements encoded as integers in ``[0, 2^s)``.

    Multiplication and inversion are tabulated at construction; addition is XOR.
    """

    def __init__(self, s: int):
        """Tabulate multiplication and inverses for GF(2^s)."""
        if s not in IRREDUCIBLE_POLYNOMIALS:
            raise UnsupportedFieldError(f"s={s} is outside the supported range 1..{MAX_FIELD_S}")
        self.s = s
        self.q = 1 << s
        self.poly = IRREDUCIBLE_POLYNOMIALS[s]
        self._mul = [[self._carryless_mul(a, b) for b in range(self.q)] for a in range(self.q)]
        self._inv = [0] * self.q
        for a in range(1, self.q):
            row = self._mul[a]
            self._inv[a] = next(b for b in range(1, self.q) if row[b] == 1)

    def _carryless_mul(self, a: int, b: int) -> int:
        product = 0
        while b:
            if b & 1:
                product ^= a
            b >>= 1
            a <<= 1
            if a >> self.s:
                a ^= self.poly
        return product

    @staticmethod
    def add(a: int, b: int) -> int:
        """Add two field elements."""
        return a ^ b

    def mul(self, a: int, b: int) -> int:
        """Multiply two field elements."""
        return self._mul[a][b]

    def inv(self, a: int) -> int:
        """Return the multiplicative inverse of a nonzero element."""
        if a == 0:
            raise ZeroDivisionError("0 has no inverse in GF(2^s)")
        return self._inv[a]

    def elements(self) -> range:
        """Return all field elements."""
        return range(self.q)

    def __repr__(self) -> str:
        """Show s and the reduction polynomial."""
        return f"GaloisField(s={self.s}, poly={polynomial_str(self.poly)})"


@lru_cache(maxsize=None)
def field_ops(s: int) -> GaloisField:
    """Return the (cached) field GF(2^s) for 1 ≤ s ≤ 8."""
    return GaloisField(s)


##########################
# Points, lines and the plane
##########################

Triple = tuple[int, int, int]


def normalize(gf: GaloisField, coords: Triple) -> Triple:
    """Scale a nonzero triple so its first nonzero coordinate is 1."""
    lead = next((c for c in coords if c), None)
    if lead is None:
        raise ValueError("the zero vector is not a projective point")
    if lead == 1:
        return coords
    inv = gf.inv(lead)
    return (gf.mul(inv, coords[0]), gf.mul(inv, coords[1]), gf.mul(inv, coords[2]))


@dataclass(frozen=True, order=True)
class ProjectivePoint:
    """A point [x,y,z] in normalized coordinates."""

    coords: Triple

    def __str__(self) -> str:
        """Render as [x,y,z]."""
        return "[{},{},{}]".format(*self.coords)


@dataclass(frozen=True, order=True)
class ProjectiveLine:
    """A line (a,b,c), the set of points with ax + by + cz = 0."""

    coeffs: Triple

    def __str__(self) -> str:
        """Render as (a,b,c)."""
        return "({},{},{})".format(*self.coeffs)


def incidence(gf: GaloisField, point: ProjectivePoint, line: ProjectiveLine) -> bool:
    """Return whether ``point`` lies on ``line``."""
    (x, y, z), (a, b, c) = point.coords, line.coeffs
    return (gf.mul(a, x) ^ gf.mul(b, y) ^ gf.mul(c, z)) == 0


def _canonical_triples(q: int) -> list[Triple]:
    triples = [(0, 0, 1)]
    triples += [(0, 1, z) for z in range(q)]
    triples += [(1, y, z) for y in range(q) for z in range(q)]
    return sorted(triples)


def _spanning_pair(gf: GaloisField, coeffs: Triple) -> tuple[Triple, Triple]:
    # Two independent solutions of ax + by + cz = 0; characteristic 2 makes
    # the swapped-coordinate vectors orthogonal to (a,b,c).
    a, b, c = coeffs
    if a:
        return (b, a, 0), (c, 0, a)
    if b:
        return (1, 0, 0), (0, c, b)
    return (1, 0, 0), (0, 1, 0)


@dataclass(frozen=True)
class PlaneModel:
    """PG(2,q) with points and lines in canonical lexicographic order."""

    s: int
    points: tuple[ProjectivePoint, ...]
    lines: tuple[ProjectiveLine, ...]
    line_points: tuple[tuple[int, ...], ...]
    point_lines: tuple[tuple[int, ...], ...]

    @property
    def q(self) -> int:
        """Field order 2^s."""
        return 1 << self.s

    @property
    def gf(self) -> GaloisField:
        """The coordinate field."""
        return field_ops(self.s)

    @cached_property
    def point_index(self) -> dict[Triple, int]:
        """Map normalized coordinates to point indices."""
        return {p.coords: i for i, p in enumerate(self.points)}

    @cached_property
    def line_sets(self) -> tuple[frozenset[int], ...]:
        """Points of every line as frozensets."""
        return tuple(frozenset(pts) for pts in self.line_points)

    def index_of_point(self, coords: Triple) -> int:
        """Return the index of the point with the given coordinates."""
        return self.point_index[normalize(self.gf, coords)]

    def on_line(self, point: int, line: int) -> bool:
        """Return whether the point lies on the line."""
        return point in self.line_sets[line]

    def line_through(self, p1: int, p2: int) -> int:
        """Return the unique line through two distinct points."""
        common = set(self.point_lines[p1]) & set(self.point_lines[p2])
        if len(common) != 1:
            raise GeometryInvariantError(f"points {p1},{p2} share {len(common)} lines")
        return common.pop()

    def meet(self, l1: int, l2: int) -> int:
        """Return the unique point on two distinct lines."""
        common = self.line_sets[l1] & self.line_sets[l2]
        if len(common) != 1:
            raise GeometryInvariantError(f"lines {l1},{l2} share {len(common)} points")
        return next(iter(common))


def build_plane(s: int) -> PlaneModel:
    """Enumerate PG(2,2^s) in canonical order with its incidence lists."""
    gf = field_ops(s)
    triples = _canonical_triples(gf.q)
    points = tuple(ProjectivePoint(t) for t in triples)
    lines = tuple(ProjectiveLine(t) for t in triples)
    index = {t: i for i, t in enumerate(triples)}

    line_points: list[tuple[int, ...]] = []
    point_lines: list[list[int]] = [[] for _ in points]
    for li, line in enumerate(lines):
        v1, v2 = _spanning_pair(gf, line.coeffs)
        on_line = {index[normalize(gf, v2)]}
        for t in gf.elements():
            combo = (v1[0] ^ gf.mul(t, v2[0]), v1[1] ^ gf.mul(t, v2[1]), v1[2] ^ gf.mul(t, v2[2]))
            on_line.add(index[normalize(gf, combo)])
        ordered = tuple(sorted(on_line))
        line_points.append(ordered)
        for p in ordered:
            point_lines[p].append(li)

    logging.debug(f"built PG(2,{gf.q}) with {len(points)} points")
    return PlaneModel(
        s=s,
        points=points,
        lines=lines,
        line_points=tuple(line_points),
        point_lines=tuple(tuple(pl) for pl in point_lines),
    )


def check_plane_axioms(plane: PlaneModel, sample: int | None = None, seed: int = 0) -> list[str]:
    """Check the projective plane axioms; return a description of each violation.

    Pair checks are exhaustive unless ``sample`` limits them to that many
    random pairs.
    """
    q, n = plane.q, len(plane.points)
    problems: list[str] = []
    if n != q * q + q + 1 or len(plane.lines) != n:
        problems.append(f"expected {q * q + q + 1} points and lines, got {n} and {len(plane.lines)}")
    if any(len(pts) != q + 1 for pts in plane.line_points):
        problems.append("a line does not have q+1 points")
    if any(len(ls) != q + 1 for ls in plane.point_lines):
        problems.append("a point does not lie on q+1 lines")

    pairs: Iterable[tuple[int, int]]
    if sample is None:
        pairs = itertools.combinations(range(n), 2)
    else:
        rng = random.Random(seed)
        pairs = (tuple(rng.sample(range(n), 2)) for _ in range(sample))
    for i, j in pairs:
        if len(set(plane.point_lines[i]) & set(plane.point_lines[j])) != 1:
            problems.append(f"points {i},{j} are not on exactly one common line")
            break
        if len(plane.line_sets[i] & plane.line_sets[j]) != 1:
            problems.append(f"lines {i},{j} do not meet in exactly one point")
            break

    # A quadrangle: [1,0,0], [0,1,0], [0,0,1], [1,1,1].
    frame = [plane.index_of_point(t) for t in ((1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 1))]
    for trio in itertools.combinations(frame, 3):
        if not has_no_three_collinear(plane, trio):
            problems.append("the standard frame has three collinear points")
            break
    return problems


def has_no_three_collinear(plane: PlaneModel, point_set: Iterable[int]) -> bool:
    """Return whether no line contains three or more of the given points."""
    chosen = set(point_set)
    return all(len(chosen.intersection(pts)) <= 2 for pts in plane.line_points)


##########################
# Conic, nucleus, hyperoval
##########################

def standard_conic(plane: PlaneModel) -> frozenset[int]:
    """Return the q+1 points of the conic y^2 = xz."""
    gf = plane.gf
    conic = {plane.index_of_point((1, t, gf.mul(t, t))) for t in gf.elements()}
    conic.add(plane.index_of_point((0, 0, 1)))
    return frozenset(conic)


def tangent_lines(plane: PlaneModel, conic: frozenset[int]) -> list[int]:
    """Return the lines meeting the conic in exactly one point."""
    return [li for li, pts in enumerate(plane.line_points) if len(conic.intersection(pts)) == 1]


@dataclass(frozen=True)
class ConicCensus:
    """Lines of the plane grouped by how they meet a conic."""

    skew: tuple[int, ...]
    tangent: tuple[int, ...]
    secant: tuple[int, ...]


def conic_line_census(plane: PlaneModel, conic: frozenset[int]) -> ConicCensus:
    """Split the lines into conic-skew, tangent and conic-secant lines."""
    groups: dict[int, list[int]] = {0: [], 1: [], 2: []}
    for li, pts in enumerate(plane.line_points):
        meets = len(conic.intersection(pts))
        if meets > 2:
            raise GeometryInvariantError(f"line {plane.lines[li]} meets the conic {meets} times")
        groups[meets].append(li)
    return ConicCensus(skew=tuple(groups[0]), tangent=tuple(groups[1]), secant=tuple(groups[2]))


def nucleus(plane: PlaneModel, conic: frozenset[int]) -> int:
    """Return the common point of all tangents to the conic (q even)."""
    tangents = tangent_lines(plane, conic)
    if len(tangents) != plane.q + 1:
        raise GeometryInvariantError(f"expected {plane.q + 1} tangents, found {len(tangents)}")
    common = set(plane.line_points[tangents[0]])
    for li in tangents[1:]:
        common &= set(plane.line_points[li])
    if len(common) != 1:
        raise GeometryInvariantError(f"tangents are not concurrent (common points: {sorted(common)})")
    point = common.pop()
    if point in conic:
        raise GeometryInvariantError("the tangents meet on the conic")
    return point


@dataclass(frozen=True)
class HyperovalPartition:
    """A regular hyperoval and the secant/skew split of all lines."""

    conic_points: frozenset[int]
    nucleus: int
    hyperoval: frozenset[int]
    secant_lines: tuple[int, ...]
    skew_lines: tuple[int, ...]

    def non_hyperoval_points(self, plane: PlaneModel) -> tuple[int, ...]:
        """Return the points off the hyperoval, in plane order."""
        return tuple(p for p in range(len(plane.points)) if p not in self.hyperoval)


def classify_lines(plane: PlaneModel, hyperoval: frozenset[int], conic: frozenset[int] | None = None, nucleus_point: int | None = None) -> HyperovalPartition:
    """Classify every line as secant (2 hyperoval points) or skew (none)."""
    if len(hyperoval) != plane.q + 2:
        raise GeometryInvariantError(f"a hyperoval has q+2={plane.q + 2} points, got {len(hyperoval)}")
    secant, skew = [], []
    for li, pts in enumerate(plane.line_points):
        meets = len(hyperoval.intersection(pts))
        if meets == 2:
            secant.append(li)
        elif meets == 0:
            skew.append(li)
        else:
            raise GeometryInvariantError(f"line {plane.lines[li]} meets the hyperoval {meets} times")
    return HyperovalPartition(
        conic_points=conic if conic is not None else frozenset(),
        nucleus=nucleus_point if nucleus_point is not None else -1,
        hyperoval=hyperoval,
        secant_lines=tuple(secant),
        skew_lines=tuple(skew),
    )


def regular_hyperoval(plane: PlaneModel) -> HyperovalPartition:
    """Build the standard conic, its nucleus and the resulting line partition."""
    conic = standard_conic(plane)
    nuc = nucleus(plane, conic)
    return classify_lines(plane, conic | {nuc}, conic=conic, nucleus_point=nuc)


def hyperoval_counts(plane: PlaneModel, partition: HyperovalPartition) -> dict[str, int | set[int]]:
    """Count hyperoval points, secant and skew lines, and lines per outside point.

    Per-point counts are returned as the set of values observed over all
    non-hyperoval points, so a regular structure gives singleton sets.
    """
    secant = set(partition.secant_lines)
    on_secant, on_skew = set(), set()
    for p in partition.non_hyperoval_points(plane):
        lines = plane.point_lines[p]
        k = sum(1 for li in lines if li in secant)
        on_secant.add(k)
        on_skew.add(len(lines) - k)
    return {
        "hyperoval_points": len(partition.hyperoval),
        "secant_lines": len(partition.secant_lines),
        "skew_lines": len(partition.skew_lines),
        "secant_per_point": on_secant,
        "skew_per_point": on_skew,
    }
