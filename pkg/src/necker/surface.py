"""Combinatorial model of the Necker cube surface.

The surface is the union of unit squares in R^3 whose vertices lie on the
three lattice slices ``{v in Z^3 : v . (1,1,1) = i}`` for ``i = -1, 0, 1``.
Squares are value objects addressed by their level -1 corner and a cyclically
ordered pair of coordinate axes; everything else is computed on demand.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations
from typing import Iterable, Sequence

Vec3 = tuple[int, int, int]
QVec3 = tuple[Fraction, Fraction, Fraction]

UNIT = ((1, 0, 0), (0, 1, 0), (0, 0, 1))
FAVORITE_BASE: Vec3 = (-1, 0, 0)
DECK_W1: Vec3 = (1, -1, 0)
DECK_W2: Vec3 = (0, 1, -1)


def level(p: Sequence) -> int | Fraction:
    return p[0] + p[1] + p[2]


def vadd(p: Sequence, q: Sequence) -> tuple:
    return (p[0] + q[0], p[1] + q[1], p[2] + q[2])


def vsub(p: Sequence, q: Sequence) -> tuple:
    return (p[0] - q[0], p[1] - q[1], p[2] - q[2])


def vscale(c, p: Sequence) -> tuple:
    return (c * p[0], c * p[1], c * p[2])


def dot(p: Sequence, q: Sequence):
    return p[0] * q[0] + p[1] * q[1] + p[2] * q[2]


@dataclass(frozen=True, order=True)
class SquareId:
    """A constituent square: base corner on level -1 plus the axis pair (k, k+1 mod 3)."""

    base: Vec3
    axes: tuple[int, int]

    def __post_init__(self) -> None:
        k, l = self.axes
        if k not in (0, 1, 2) or l != (k + 1) % 3:
            raise ValueError(f"axes must be (k, k+1 mod 3), got {self.axes}")
        if len(self.base) != 3 or level(self.base) != -1:
            raise ValueError(f"base must lie on level -1, got {self.base}")
        object.__setattr__(self, "base", tuple(int(c) for c in self.base))

    @classmethod
    def from_axis_set(cls, base: Sequence[int], a: int, b: int) -> "SquareId":
        """Build a square from an unordered pair of distinct axes."""
        if a == b:
            raise ValueError("axes must be distinct")
        k = a if (a + 1) % 3 == b else b
        return cls(tuple(base), (k, (k + 1) % 3))

    @property
    def face(self) -> int:
        return self.axes[0]

    @property
    def third_axis(self) -> int:
        return (self.axes[0] + 2) % 3

    def __str__(self) -> str:
        return f"{list(self.base)}/{self.axes[0]}{self.axes[1]}"


FAVORITE_SQUARE = SquareId(FAVORITE_BASE, (2, 0))


def square_vertices(s: SquareId) -> tuple[Vec3, Vec3, Vec3, Vec3]:
    """Corners in cyclic order: base, base+e_k, base+e_k+e_l, base+e_l."""
    k, l = s.axes
    v0 = s.base
    v1 = vadd(v0, UNIT[k])
    v2 = vadd(v1, UNIT[l])
    v3 = vadd(v0, UNIT[l])
    return v0, v1, v2, v3


# Corner j of the unit chart; side j joins corner j to corner j+1.
CHART_CORNERS = ((0, 0), (1, 0), (1, 1), (0, 1))


def rotate(vec: Sequence, quarter_turns: int) -> tuple:
    """Rotate a planar vector counterclockwise by a multiple of 90 degrees."""
    x, y = vec
    r = quarter_turns % 4
    if r == 0:
        return (x, y)
    if r == 1:
        return (-y, x)
    if r == 2:
        return (-x, -y)
    return (y, -x)


@dataclass(frozen=True)
class Adjacency:
    square: SquareId
    side: int
    rotation: int  # quarter turns; neighbor chart vectors map to ours by rotate(., rotation)


def adjacent_square(s: SquareId, side: int) -> Adjacency:
    """The square across ``side`` of ``s``, the matching side, and the chart rotation."""
    k, l = s.axes
    m = s.third_axis
    v0 = s.base
    if side == 0:
        other, other_side = SquareId.from_axis_set(v0, k, m), 3
    elif side == 3:
        other, other_side = SquareId.from_axis_set(v0, l, m), 0
    elif side == 1:
        base = vsub(vadd(v0, UNIT[k]), UNIT[m])
        other, other_side = SquareId.from_axis_set(base, m, l), 2
    elif side == 2:
        base = vsub(vadd(v0, UNIT[l]), UNIT[m])
        other, other_side = SquareId.from_axis_set(base, m, k), 1
    else:
        raise ValueError(f"side must be 0..3, got {side}")
    return Adjacency(other, other_side, (side + 2 - other_side) % 4)


def squares_at_vertex(p: Sequence[int]) -> list[tuple[SquareId, int]]:
    """All (square, corner index) pairs incident to the lattice point ``p``."""
    p = tuple(int(c) for c in p)
    lev = level(p)
    if lev not in (-1, 0, 1):
        raise ValueError(f"{p} is not a vertex of the surface (level {lev})")
    candidates: set[Vec3] = set()
    if lev == -1:
        candidates.add(p)
    elif lev == 0:
        candidates.update(vsub(p, e) for e in UNIT)
    else:
        for i in range(3):
            for j in range(i + 1, 3):
                candidates.add(vsub(vsub(p, UNIT[i]), UNIT[j]))
    found = []
    for base in sorted(candidates):
        for k in range(3):
            sq = SquareId(base, (k, (k + 1) % 3))
            verts = square_vertices(sq)
            if p in verts:
                found.append((sq, verts.index(p)))
    return found


def cone_angle(p: Sequence[int]) -> int:
    """Total angle at a vertex in quarter turns (3 on levels +-1, 6 on level 0)."""
    return len(squares_at_vertex(p))


def project(x: Sequence) -> QVec3:
    """Orthogonal projection onto the plane perpendicular to (1,1,1)."""
    xs = tuple(Fraction(c) for c in x)
    shift = level(xs) / 3
    return (xs[0] - shift, xs[1] - shift, xs[2] - shift)


def lattice_coordinates(x: Sequence) -> tuple[Fraction, Fraction]:
    """Coordinates of a plane point in the deck basis (w1, w2)."""
    x = project(x)
    return (x[0], -x[2])


def from_lattice_coordinates(m, n) -> QVec3:
    m, n = Fraction(m), Fraction(n)
    return (m, n - m, -n)


def deck_coordinate(s: SquareId) -> tuple[tuple[int, int], int]:
    """Deck position (m, n) of the square's base relative to the favorite square, and its face."""
    d = vsub(s.base, FAVORITE_BASE)
    return (d[0], -d[2]), s.face


def chart_to_space(s: SquareId, point: Sequence) -> QVec3:
    k, l = s.axes
    out = [Fraction(c) for c in s.base]
    out[k] += Fraction(point[0])
    out[l] += Fraction(point[1])
    return tuple(out)


def chart_vector_to_space(s: SquareId, vec: Sequence) -> tuple:
    k, l = s.axes
    out = [0, 0, 0]
    out[k] += vec[0]
    out[l] += vec[1]
    return tuple(out)


# --- isometries -------------------------------------------------------------

Matrix3 = tuple[Vec3, Vec3, Vec3]


def _signed_permutations() -> list[Matrix3]:
    # +-P for the six permutation matrices P; these are exactly the linear parts fixing +-(1,1,1)
    mats = []
    for perm in permutations(range(3)):
        for sign in (1, -1):
            rows = [[0, 0, 0] for _ in range(3)]
            for i, j in enumerate(perm):
                rows[i][j] = sign
            mats.append(tuple(tuple(r) for r in rows))
    return mats


SIGNED_PERMUTATIONS: tuple[Matrix3, ...] = tuple(_signed_permutations())
IDENTITY3: Matrix3 = ((1, 0, 0), (0, 1, 0), (0, 0, 1))


def matvec(mat: Matrix3, x: Sequence) -> tuple:
    return tuple(dot(row, x) for row in mat)


def matmul(a: Matrix3, b: Matrix3) -> Matrix3:
    cols = list(zip(*b))
    return tuple(tuple(dot(row, col) for col in cols) for row in a)


def transpose(a: Matrix3) -> Matrix3:
    return tuple(tuple(col) for col in zip(*a))


@dataclass(frozen=True)
class NeckerIsometry:
    """The map x -> P x + v with P a signed permutation fixing the line R(1,1,1)."""

    matrix: Matrix3
    translation: tuple

    def __post_init__(self) -> None:
        if self.matrix not in SIGNED_PERMUTATIONS:
            raise ValueError("matrix must be +-(permutation matrix)")
        t = tuple(Fraction(c) for c in self.translation)
        if level(t) != 0:
            raise ValueError("translation must be orthogonal to (1,1,1)")
        object.__setattr__(self, "translation", t)

    @classmethod
    def identity(cls) -> "NeckerIsometry":
        return cls(IDENTITY3, (0, 0, 0))

    @classmethod
    def translation_by(cls, w: Sequence) -> "NeckerIsometry":
        return cls(IDENTITY3, tuple(w))

    @property
    def preserves_surface(self) -> bool:
        return all(c.denominator == 1 for c in self.translation)

    @property
    def is_translation(self) -> bool:
        return self.matrix == IDENTITY3

    def __call__(self, x: Sequence) -> QVec3:
        return vadd(matvec(self.matrix, [Fraction(c) for c in x]), self.translation)

    def linear(self, x: Sequence) -> tuple:
        return matvec(self.matrix, x)

    def __matmul__(self, other: "NeckerIsometry") -> "NeckerIsometry":
        """Composition: (self @ other)(x) = self(other(x))."""
        return NeckerIsometry(
            matmul(self.matrix, other.matrix),
            vadd(matvec(self.matrix, other.translation), self.translation),
        )

    def inverse(self) -> "NeckerIsometry":
        inv = transpose(self.matrix)
        return NeckerIsometry(inv, vscale(-1, matvec(inv, self.translation)))

    def __pow__(self, n: int) -> "NeckerIsometry":
        base = self if n >= 0 else self.inverse()
        out = NeckerIsometry.identity()
        for _ in range(abs(n)):
            out = base @ out
        return out

    def order(self, limit: int = 12) -> int | None:
        g = self
        for n in range(1, limit + 1):
            if g == NeckerIsometry.identity():
                return n
            g = self @ g
        return None

    def fixed_point(self) -> QVec3:
        """The unique fixed point on the plane perpendicular to (1,1,1); requires no fixed direction there."""
        # Solve (I - P) x = v together with x . 1 = 0.
        rows = [
            [Fraction(int(i == j) - self.matrix[i][j]) for j in range(3)] + [self.translation[i]]
            for i in range(3)
        ]
        rows.append([Fraction(1)] * 3 + [Fraction(0)])
        solution = _solve_consistent(rows, 3)
        if solution is None:
            raise ValueError("isometry has no isolated fixed point on the plane")
        return solution


def _solve_consistent(rows: list[list[Fraction]], nvars: int) -> QVec3 | None:
    """Gauss-Jordan on an augmented system; returns the unique solution or None."""
    rows = [r[:] for r in rows]
    pivots = []
    r = 0
    for c in range(nvars):
        pivot = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        pv = rows[r][c]
        rows[r] = [x / pv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
    if len(pivots) < nvars:
        return None
    if any(all(x == 0 for x in row[:nvars]) and row[nvars] != 0 for row in rows):
        return None
    return tuple(rows[i][nvars] for i in range(nvars))


def apply_isometry(g: NeckerIsometry, s: SquareId) -> SquareId:
    """Image of a square, renormalized to its canonical SquareId."""
    if not g.preserves_surface:
        raise ValueError("isometry translation is not a lattice vector")
    images = [tuple(int(c) for c in g(v)) for v in square_vertices(s)]
    base = next(v for v in images if level(v) == -1)
    axes = []
    for v in images:
        d = vsub(v, base)
        if level(v) == 0:
            axes.append(d.index(1))
    return SquareId.from_axis_set(base, *axes)


def iter_window_squares(radius: int) -> Iterable[SquareId]:
    """Squares whose deck coordinates lie in [-radius, radius]^2."""
    for m in range(-radius, radius + 1):
        for n in range(-radius, radius + 1):
            base = vadd(vadd(FAVORITE_BASE, vscale(m, DECK_W1)), vscale(n, DECK_W2))
            for k in range(3):
                yield SquareId(base, (k, (k + 1) % 3))
