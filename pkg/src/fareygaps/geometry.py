"""Exact convex polygons with rational vertices.

Polygons are closed sets; every area and inclusion statement built on them is
meant up to sets of measure zero.  Half-planes are triples (a, b, c) standing
for a*x + b*y <= c.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from gmpy2 import mpq

# gmpy2 rationals are several times faster than Fraction, compare and hash
# equal to it, and mix freely with int and Fraction operands.
Rational = type(mpq())
Point = tuple[Rational, Rational]
HalfPlane = tuple[Rational, Rational, Rational]
ZERO = mpq(0)


def _frac(v) -> Rational:
    if isinstance(v, Rational):
        return v
    if isinstance(v, Fraction):
        return mpq(v.numerator, v.denominator)
    if isinstance(v, str):
        return mpq(Fraction(v))
    return mpq(v)


def _cross(o: Point, p: Point, r: Point) -> Rational:
    return (p[0] - o[0]) * (r[1] - o[1]) - (p[1] - o[1]) * (r[0] - o[0])


def _simplify(pts: list[Point]) -> list[Point]:
    # drop repeated and collinear vertices of a convex ring
    out: list[Point] = []
    for p in pts:
        if not out or out[-1] != p:
            out.append(p)
    while len(out) > 1 and out[0] == out[-1]:
        out.pop()
    changed = True
    while changed and len(out) >= 3:
        changed = False
        n = len(out)
        for i in range(n):
            if _cross(out[i - 1], out[i], out[(i + 1) % n]) == 0:
                del out[i]
                changed = True
                break
    return out


@dataclass(frozen=True)
class RationalPolygon:
    """Convex polygon, vertices counterclockwise, no repeats or collinear runs.

    An empty vertex tuple (or fewer than three vertices) is the empty set
    for all area purposes.
    """

    vertices: tuple[Point, ...]

    @classmethod
    def from_points(cls, pts: Iterable[Sequence]) -> "RationalPolygon":
        ring = [(_frac(x), _frac(y)) for x, y in pts]
        ring = _simplify(ring)
        if len(ring) >= 3 and _signed_area2(ring) < 0:
            ring.reverse()
        return cls(tuple(ring))

    @property
    def is_empty(self) -> bool:
        return len(self.vertices) < 3

    def area(self) -> Rational:
        if self.is_empty:
            return ZERO
        return _signed_area2(self.vertices) / 2

    def clip(self, hp: HalfPlane) -> "RationalPolygon":
        """Intersection with the half-plane a*x + b*y <= c."""
        a, b, c = (_frac(v) for v in hp)
        pts = self.vertices
        if not pts:
            return self
        vals = [a * x + b * y - c for x, y in pts]
        if all(v <= 0 for v in vals):
            return self
        if all(v >= 0 for v in vals):
            # at most a boundary segment survives
            return RationalPolygon(())
        out: list[Point] = []
        n = len(pts)
        for i in range(n):
            p, vp = pts[i], vals[i]
            r, vr = pts[(i + 1) % n], vals[(i + 1) % n]
            if vp <= 0:
                out.append(p)
            if (vp < 0 < vr) or (vr < 0 < vp):
                t = vp / (vp - vr)
                out.append((p[0] + t * (r[0] - p[0]), p[1] + t * (r[1] - p[1])))
        ring = _simplify(out)
        return RationalPolygon(tuple(ring) if len(ring) >= 3 else ())

    def clip_all(self, hps: Iterable[HalfPlane]) -> "RationalPolygon":
        poly = self
        for hp in hps:
            poly = poly.clip(hp)
            if poly.is_empty:
                break
        return poly

    def halfplanes(self) -> list[HalfPlane]:
        """Edge constraints whose intersection is this polygon."""
        out = []
        n = len(self.vertices)
        for i in range(n):
            (x0, y0), (x1, y1) = self.vertices[i], self.vertices[(i + 1) % n]
            # interior lies to the left of each counterclockwise edge
            a, b = y1 - y0, x0 - x1
            out.append((a, b, a * x0 + b * y0))
        return out

    def intersect(self, other: "RationalPolygon") -> "RationalPolygon":
        if self.is_empty or other.is_empty:
            return RationalPolygon(())
        return self.clip_all(other.halfplanes())

    def transform(self, m: Sequence[Sequence[int]]) -> "RationalPolygon":
        """Image under the linear map with matrix m (acting on column vectors)."""
        (p, r), (s, t) = m
        pts = [(p * x + r * y, s * x + t * y) for x, y in self.vertices]
        if p * t - r * s > 0:
            # orientation-preserving bijection: the ring stays convex and ccw
            return RationalPolygon(tuple(pts))
        return RationalPolygon.from_points(pts)

    def centroid(self) -> Point:
        pts = self.vertices
        n = len(pts)
        acc_x = acc_y = ZERO
        a2 = ZERO
        for i in range(n):
            (x0, y0), (x1, y1) = pts[i], pts[(i + 1) % n]
            w = x0 * y1 - x1 * y0
            a2 += w
            acc_x += (x0 + x1) * w
            acc_y += (y0 + y1) * w
        return acc_x / (3 * a2), acc_y / (3 * a2)

    def contains(self, pt: Sequence) -> bool:
        x, y = _frac(pt[0]), _frac(pt[1])
        return all(a * x + b * y <= c for a, b, c in self.halfplanes())

    def to_floats(self) -> list[tuple[float, float]]:
        return [(float(x), float(y)) for x, y in self.vertices]

    def same_vertex_set(self, pts: Iterable[Sequence]) -> bool:
        return set(self.vertices) == {(_frac(x), _frac(y)) for x, y in pts}

    def to_json(self) -> dict:
        return {
            "vertices": [[str(x), str(y)] for x, y in self.vertices],
            "vertices_float": [[float(x), float(y)] for x, y in self.vertices],
            "area": str(self.area()),
        }


def _signed_area2(pts: Sequence[Point]) -> Rational:
    n = len(pts)
    s = ZERO
    for i in range(n):
        (x0, y0), (x1, y1) = pts[i], pts[(i + 1) % n]
        s += x0 * y1 - x1 * y0
    return s


def difference(pieces: Sequence[RationalPolygon], cut: RationalPolygon) -> list[RationalPolygon]:
    """Convex decomposition of (union of pieces) minus ``cut``, up to measure zero."""
    if cut.is_empty:
        return [p for p in pieces if not p.is_empty]
    hps = cut.halfplanes()
    out = []
    for piece in pieces:
        rest = piece
        for a, b, c in hps:
            outside = rest.clip((-a, -b, -c))
            if not outside.is_empty:
                out.append(outside)
            rest = rest.clip((a, b, c))
            if rest.is_empty:
                break
    return out


UNIT_SQUARE = RationalPolygon.from_points([(0, 0), (1, 0), (1, 1), (0, 1)])
