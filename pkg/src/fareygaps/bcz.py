"""The BCZ map on the Farey triangle and the regions built from it.

The Farey triangle is {(x, y) in (0,1]^2 : x + y > 1} and the map is
T(x, y) = (y, kappa*y - x) with kappa = floor((1 + x) / y).  On the cylinder
where kappa = K the map is the unimodular matrix [[0, 1], [-1, K]], so images
and preimages of convex polygons inside one cylinder stay convex and exact.

Consecutive Farey denominators satisfy T(q_i/Q, q_{i+1}/Q) = (q_{i+1}/Q, q_{i+2}/Q),
which is what ties the dynamics to gap statistics.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import NamedTuple, Sequence, Union as _U

import numpy as np

from .geometry import Rational, RationalPolygon, UNIT_SQUARE, difference

Number = _U[int, float, Fraction]


class TrianglePoint(NamedTuple):
    x: Number
    y: Number

    def in_triangle(self) -> bool:
        return 0 < self.x <= 1 and 0 < self.y <= 1 and self.x + self.y > 1


def kappa(x: Number, y: Number) -> int:
    """floor((1 + x) / y); exact unless an argument is a float."""
    if isinstance(x, int) and isinstance(y, int):
        return (1 + x) // y
    return math.floor((1 + x) / y)


def apply_T(p: Sequence[Number]) -> TrianglePoint:
    x, y = p
    return TrianglePoint(y, kappa(x, y) * y - x)


def apply_T_inverse(p: Sequence[Number]) -> TrianglePoint:
    x, y = p
    return TrianglePoint(kappa(y, x) * x - y, x)


def apply_T_lattice(Q: int, u: np.ndarray, v: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """T on points (u/Q, v/Q) given by integer numerators over the fixed denominator Q.

    Returns the numerators of the image, again over Q.  Exact integer arithmetic.
    """
    K = (Q + u) // v
    return v, K * v - u


def cylinder_matrix(K: int) -> tuple[tuple[int, int], tuple[int, int]]:
    return ((0, 1), (-1, K))


def _mat_mul(m, n):
    return (
        (m[0][0] * n[0][0] + m[0][1] * n[1][0], m[0][0] * n[0][1] + m[0][1] * n[1][1]),
        (m[1][0] * n[0][0] + m[1][1] * n[1][0], m[1][0] * n[0][1] + m[1][1] * n[1][1]),
    )


def _mat_inv_unimodular(m):
    (p, r), (s, t) = m
    return ((t, -r), (-s, p))


TRIANGLE = RationalPolygon.from_points([(1, 0), (1, 1), (0, 1)])


@lru_cache(maxsize=None)
def cylinder_polygon(K: int) -> RationalPolygon:
    """Closure of the cylinder {kappa = K}: K*y - 1 <= x <= (K+1)*y - 1 inside the triangle.

    K = 1 gives the triangle (0,1), (1,1), (1/3,2/3); K >= 2 a quadrilateral.
    """
    if K < 1:
        raise ValueError("K must be >= 1")
    one = Fraction(1)
    return TRIANGLE.clip_all(
        [
            (Fraction(-1), Fraction(K), one),  # K*y - x <= 1
            (one, Fraction(-(K + 1)), -one),  # x - (K+1)*y <= -1
        ]
    )


def cylinder_area(K: int) -> Fraction:
    """Exact area of a cylinder: 1/6 for K = 1, 4/(K(K+1)(K+2)) otherwise."""
    if K == 1:
        return Fraction(1, 6)
    return Fraction(4, K * (K + 1) * (K + 2))


def kappa_range(poly: RationalPolygon) -> tuple[int, float]:
    """Cylinder indices a polygon inside the triangle can meet.

    (1 + x)/y is linear-fractional, so its extremes are attained at vertices.
    The upper end is ``math.inf`` when the polygon touches y = 0.
    """
    vals = []
    for x, y in poly.vertices:
        vals.append(math.inf if y == 0 else (1 + x) / y)
    lo = max(1, math.floor(min(vals)))
    hi = max(vals)
    return lo, (hi if hi == math.inf else math.floor(hi))


def image_T(poly: RationalPolygon) -> list[RationalPolygon]:
    """T(poly) as a list of convex pieces, one per cylinder met with positive area."""
    lo, hi = kappa_range(poly)
    if hi == math.inf:
        raise ValueError("polygon touches the corner (1, 0); its image needs infinitely many pieces")
    out = []
    for K in range(lo, int(hi) + 1):
        piece = poly.intersect(cylinder_polygon(K))
        if not piece.is_empty:
            out.append(piece.transform(cylinder_matrix(K)))
    return out


# ---------------------------------------------------------------------------
# words


@dataclass(frozen=True)
class CylinderWord:
    letters: tuple[int, ...]

    def __post_init__(self):
        if not self.letters or any(x < 1 for x in self.letters):
            raise ValueError(f"invalid word {self.letters!r}")

    @classmethod
    def of(cls, *letters: int) -> "CylinderWord":
        return cls(tuple(int(x) for x in letters))

    def __len__(self) -> int:
        return len(self.letters)

    def __str__(self) -> str:
        return "(" + ",".join(map(str, self.letters)) + ")"


@dataclass(frozen=True)
class WordRegion:
    """The word polygon together with the linear form of its last coordinate.

    ``polygon`` is T_{x1} ∩ T^{-1} T_{x2} ∩ ... in the original coordinates
    and ``image`` is its image under T^{len(word)}.  On the polygon that power
    of T is the single matrix ``matrix``; its second row (c, d) gives
    pi_2 ∘ T^{len}(x, y) = c*x + d*y.
    """

    word: CylinderWord
    polygon: RationalPolygon
    image: RationalPolygon
    matrix: tuple[tuple[int, int], tuple[int, int]]

    @property
    def linear_form(self) -> tuple[int, int]:
        return self.matrix[1]

    def extend(self, K: int) -> "WordRegion":
        img = self.image.intersect(cylinder_polygon(K))
        m = _mat_mul(cylinder_matrix(K), self.matrix)
        word = CylinderWord(self.word.letters + (K,))
        if img.is_empty:
            return WordRegion(word, img, img, m)
        pre = img.transform(_mat_inv_unimodular(self.matrix))
        return WordRegion(word, pre, img.transform(cylinder_matrix(K)), m)

    def next_letters(self) -> tuple[int, float]:
        """Range of cylinder indices the current image can enter."""
        return kappa_range(self.image)


def cylinder_region(K: int) -> WordRegion:
    poly = cylinder_polygon(K)
    return WordRegion(CylinderWord((K,)), poly, poly.transform(cylinder_matrix(K)), cylinder_matrix(K))


def word_region(w: CylinderWord | Sequence[int]) -> WordRegion:
    letters = w.letters if isinstance(w, CylinderWord) else tuple(w)
    reg = cylinder_region(letters[0])
    for K in letters[1:]:
        if reg.polygon.is_empty:
            return WordRegion(CylinderWord(letters), reg.polygon, reg.polygon, reg.matrix)
        reg = reg.extend(K)
    return WordRegion(CylinderWord(letters), reg.polygon, reg.image, reg.matrix)


def word_polygon(w: CylinderWord | Sequence[int]) -> RationalPolygon:
    """T_{x1} ∩ T^{-1} T_{x2} ∩ ... ∩ T^{-(n-1)} T_{xn}; empty when infeasible."""
    return word_region(w).polygon


# ---------------------------------------------------------------------------
# set expressions over cylinders and T, for inclusion checks


class Region:
    def __or__(self, other: "Region") -> "Region":
        return Union_(self, other)

    def __and__(self, other: "Region") -> "Region":
        return Inter(self, other)

    def pieces(self) -> list[RationalPolygon]:
        raise NotImplementedError


@dataclass(frozen=True)
class Cyl(Region):
    K: int

    def pieces(self):
        return [cylinder_polygon(self.K)]

    def __str__(self):
        return f"T_{self.K}"


@dataclass(frozen=True)
class Img(Region):
    of: Region

    def pieces(self):
        out = []
        for p in self.of.pieces():
            out.extend(image_T(p))
        return out

    def __str__(self):
        return f"T({self.of})"


@dataclass(frozen=True)
class Inter(Region):
    left: Region
    right: Region

    def pieces(self):
        out = []
        for p in self.left.pieces():
            for r in self.right.pieces():
                c = p.intersect(r)
                if not c.is_empty:
                    out.append(c)
        return out

    def __str__(self):
        return f"({self.left} ∩ {self.right})"


@dataclass(frozen=True)
class Union_(Region):
    left: Region
    right: Region

    def pieces(self):
        return self.left.pieces() + self.right.pieces()

    def __str__(self):
        return f"({self.left} ∪ {self.right})"


def T(region: Region) -> Img:
    return Img(region)


@dataclass
class InclusionResult:
    holds: bool
    excess_area: Rational
    witness: tuple[Rational, Rational] | None = None
    lhs: str = ""
    rhs: str = ""

    def __bool__(self) -> bool:
        return self.holds


def check_inclusion(lhs: Region, rhs: Region) -> InclusionResult:
    """Decide lhs ⊆ rhs up to measure zero, exactly.

    On failure the witness is the centroid of the largest leftover piece,
    which is an interior point of lhs outside rhs.
    """
    rest = lhs.pieces()
    for cut in rhs.pieces():
        rest = difference(rest, cut)
        if not rest:
            break
    excess = sum((p.area() for p in rest), Rational(0))
    witness = None
    if rest:
        witness = max(rest, key=lambda p: p.area()).centroid()
    return InclusionResult(excess == 0, excess, witness, str(lhs), str(rhs))


# ---------------------------------------------------------------------------
# hyperbolic regions and their areas


@dataclass(frozen=True)
class HyperbolicRegion:
    """{(x, y) in polygon : x * (c*x + d*y) >= threshold}.

    For d > 0 this is the part of the polygon above the convex curve
    y = alpha*x + beta/x with alpha = -c/d and beta = threshold/d.
    """

    polygon: RationalPolygon
    c: int
    d: int
    threshold: float

    def area(self) -> float:
        return float(polygon_area_above_curve(self.polygon, -self.c / self.d, np.array([self.threshold / self.d]))[0])


@dataclass
class _Slabs:
    xa: np.ndarray
    xb: np.ndarray
    lo_m: np.ndarray
    lo_b: np.ndarray
    hi_m: np.ndarray
    hi_b: np.ndarray


def _slabs(poly: RationalPolygon) -> _Slabs:
    verts = poly.to_floats()
    n = len(verts)
    xs = sorted({v[0] for v in poly.vertices})
    lower = []
    upper = []
    for i in range(n):
        (x0, y0), (x1, y1) = poly.vertices[i], poly.vertices[(i + 1) % n]
        if x0 == x1:
            continue
        m = (y1 - y0) / (x1 - x0)
        b = y0 - m * x0
        # counterclockwise: lower chain runs left to right
        (lower if x1 > x0 else upper).append((min(x0, x1), max(x0, x1), m, b))
    rows = []
    for xa, xb in zip(xs, xs[1:]):
        lo = next(e for e in lower if e[0] <= xa and xb <= e[1])
        hi = next(e for e in upper if e[0] <= xa and xb <= e[1])
        rows.append((float(xa), float(xb), float(lo[2]), float(lo[3]), float(hi[2]), float(hi[3])))
    arr = np.array(rows, dtype=float).reshape(-1, 6)
    return _Slabs(*(arr[:, j] for j in range(6)))


def _below_interval(A: float, B: float, C: np.ndarray, xa: float, xb: float):
    """Interval of [xa, xb] where A x^2 + B x + C < 0, for C > 0 (vectorized in C).

    With C > 0 this set meets x > 0 in a single interval because it equals the
    set where a convex curve lies under a line.
    """
    s = np.full(C.shape, xa)
    t = np.full(C.shape, xb)
    empty = np.zeros(C.shape, dtype=bool)
    if A == 0.0:
        if B >= 0.0:
            empty[:] = True
        else:
            s = np.maximum(s, -C / B)
    else:
        disc = B * B - 4.0 * A * C
        if A > 0.0:
            ok = disc > 0.0
            sq = np.sqrt(np.where(ok, disc, 0.0))
            # stable root pair
            qv = -0.5 * (B + math.copysign(1.0, B) * sq) if B != 0.0 else -0.5 * sq
            with np.errstate(divide="ignore", invalid="ignore"):
                r1 = qv / A
                r2 = np.where(qv != 0.0, C / qv, 0.0)
            lo = np.minimum(r1, r2)
            hi = np.maximum(r1, r2)
            empty |= ~ok
            s = np.maximum(s, lo)
            t = np.minimum(t, hi)
        else:
            sq = np.sqrt(np.maximum(disc, 0.0))
            # roots have opposite signs; keep the positive one
            r_pos = (-B - sq) / (2.0 * A)
            s = np.maximum(s, r_pos)
    empty |= s >= t
    return s, t, empty


def _line_minus_curve_integral(m, b, alpha, beta, s, t):
    return (m - alpha) * (t * t - s * s) / 2.0 + b * (t - s) - beta * (np.log(t) - np.log(s))


def polygon_area_above_curve(poly: RationalPolygon, alpha: float, beta: np.ndarray) -> np.ndarray:
    """Area of {(x, y) in poly : y >= alpha*x + beta/x} for each beta > 0.

    The polygon is sliced at its vertex abscissae.  Inside a slab the region
    is bounded above by one edge and below by another; the curve lies under
    each of those lines on a single interval, and the area is the integral of
    (upper - curve) over the first interval minus (lower - curve) over the
    second.  Both integrals are closed form (polynomial + logarithm).
    """
    beta = np.atleast_1d(np.asarray(beta, dtype=float))
    out = np.zeros(beta.shape)
    if poly.is_empty:
        return out
    sl = _slabs(poly)
    nonpos = beta <= 0.0
    pos = ~nonpos
    if np.any(nonpos):
        out[nonpos] = float(poly.area()) if alpha <= 0 else _area_above_line(poly, alpha)
    if not np.any(pos):
        return out
    bp = beta[pos]
    acc = np.zeros(bp.shape)
    for j in range(len(sl.xa)):
        xa, xb = sl.xa[j], sl.xb[j]
        for m, b, sign in ((sl.hi_m[j], sl.hi_b[j], 1.0), (sl.lo_m[j], sl.lo_b[j], -1.0)):
            s, t, empty = _below_interval(alpha - m, -b, bp, xa, xb)
            s = np.where(empty, 1.0, s)
            t = np.where(empty, 1.0, t)
            val = _line_minus_curve_integral(m, b, alpha, bp, s, t)
            acc += sign * np.where(empty, 0.0, val)
    out[pos] = np.maximum(acc, 0.0)
    return out


def _area_above_line(poly: RationalPolygon, alpha: float) -> float:
    clipped = poly.clip((Fraction(alpha), Fraction(-1), Fraction(0)))
    return float(clipped.area())


def omega_area(region: CylinderWord | Sequence[int] | str, k: int, xi: float) -> float:
    """Area of the part of a region where the gap function is at least k/xi.

    ``region == "unit"`` means the whole triangle with g(x, y) = x*y; any
    other value is a word w, with g(x, y) = x * pi_2(T^{len(w)}(x, y)) on the
    word polygon.  Returns 0 for xi <= 0 and the full area for xi = inf.
    """
    if xi <= 0:
        return 0.0
    if isinstance(region, str):
        if region != "unit":
            raise ValueError(f"unknown region {region!r}")
        poly, c, d = TRIANGLE, 0, 1
    else:
        reg = word_region(region)
        poly = reg.polygon
        c, d = reg.linear_form
    if poly.is_empty:
        return 0.0
    if d <= 0:
        raise ValueError("gap function is not positive on this word")
    if math.isinf(xi):
        return float(poly.area())
    return float(polygon_area_above_curve(poly, -c / d, np.array([k / xi / d]))[0])
