"""First homology of the double cover of the half-cube surface.

Classes are integer 4-vectors over the ordered basis (g0, g1, g3, g4) of the
six core curves g0..g5; the other two curves are g2 = -g0 - g4 and
g5 = -g1 - g3.
"""

from __future__ import annotations

from enum import Enum
from fractions import Fraction
from typing import Sequence

Vector = tuple[int, int, int, int]
Matrix = tuple[tuple, ...]

BASIS_INDEX = {0: 0, 1: 1, 3: 2, 4: 3}


def curve(j: int) -> Vector:
    """The class of core curve g_j (indices taken mod 6)."""
    j %= 6
    if j in BASIS_INDEX:
        v = [0, 0, 0, 0]
        v[BASIS_INDEX[j]] = 1
        return tuple(v)
    if j == 2:
        return (-1, 0, 0, -1)
    return (0, -1, -1, 0)


# intersection numbers among basis curves; i(g_j, g_{j+1}) = 1 cyclically
_PAIRING = {(0, 1): 1, (3, 4): 1}


def _form() -> Matrix:
    order = (0, 1, 3, 4)
    rows = []
    for a in order:
        row = []
        for b in order:
            row.append(_PAIRING.get((a, b), 0) - _PAIRING.get((b, a), 0))
        rows.append(tuple(row))
    return tuple(rows)


INTERSECTION_FORM = _form()


def intersect(x: Sequence[int], y: Sequence[int]) -> int:
    return sum(x[i] * INTERSECTION_FORM[i][j] * y[j] for i in range(4) for j in range(4))


def add(*vs: Sequence[int]) -> Vector:
    return tuple(sum(v[i] for v in vs) for i in range(4))


def scale(c: int, v: Sequence[int]) -> Vector:
    return tuple(c * x for x in v)


def beta(j: int) -> Vector:
    return add(curve(j), curve(j + 3))


def lifts_to_cover(x: Sequence[int]) -> bool:
    """A class lifts exactly when it pairs trivially with beta_0 and beta_1."""
    return intersect(beta(0), x) == 0 and intersect(beta(1), x) == 0


# --- matrices -----------------------------------------------------------------

def identity(n: int = 4) -> Matrix:
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def matmul(a: Matrix, b: Matrix) -> Matrix:
    n, m, p = len(a), len(b), len(b[0])
    return tuple(tuple(sum(a[i][k] * b[k][j] for k in range(m)) for j in range(p)) for i in range(n))


def apply(m: Matrix, v: Sequence) -> tuple:
    return tuple(sum(m[i][j] * v[j] for j in range(len(v))) for i in range(len(m)))


def transpose(m: Matrix) -> Matrix:
    return tuple(tuple(col) for col in zip(*m))


def from_columns(cols: Sequence[Sequence]) -> Matrix:
    return transpose(tuple(tuple(c) for c in cols))


def _twist_matrix(cores: Sequence[int], sign: int) -> Matrix:
    """alpha -> alpha + sign * sum_j i(g_j, alpha) g_j over the given cores."""
    cols = []
    for e in identity():
        img = e
        for j in cores:
            img = add(img, scale(sign * intersect(curve(j), e), curve(j)))
        cols.append(img)
    return from_columns(cols)


GENERATOR_ACTION = {
    "h": _twist_matrix((1, 3, 5), +1),
    "v": _twist_matrix((0, 2, 4), -1),
}


def invert_unimodular(m: Matrix) -> Matrix:
    inv = invert(m)
    if any(Fraction(x).denominator != 1 for row in inv for x in row):
        raise ValueError("matrix is not unimodular")
    return tuple(tuple(int(x) for x in row) for row in inv)


def invert(m: Matrix) -> tuple:
    n = len(m)
    aug = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(m)]
    for c in range(n):
        p = next(r for r in range(c, n) if aug[r][c] != 0)
        aug[c], aug[p] = aug[p], aug[c]
        pv = aug[c][c]
        aug[c] = [x / pv for x in aug[c]]
        for r in range(n):
            if r != c and aug[r][c] != 0:
                f = aug[r][c]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[c])]
    return tuple(tuple(row[n:]) for row in aug)


GENERATOR_ACTION["H"] = invert_unimodular(GENERATOR_ACTION["h"])
GENERATOR_ACTION["V"] = invert_unimodular(GENERATOR_ACTION["v"])


def psi_star(word: str) -> Matrix:
    """Action on homology of a word in h, v (upper case for inverses); the rightmost letter acts first."""
    out = identity()
    for letter in word:
        out = matmul(out, GENERATOR_ACTION[letter])
    return out


def preserves_form(m: Matrix) -> bool:
    return matmul(matmul(transpose(m), INTERSECTION_FORM), m) == INTERSECTION_FORM


# --- the rho + rho splitting ---------------------------------------------------

SPLITTING_BASIS = from_columns([
    curve(1),
    add(curve(2), scale(-1, curve(0))),
    curve(3),
    add(curve(4), scale(-1, curve(2))),
])


def in_basis_B(m: Matrix) -> tuple:
    """Rewrite a gamma-basis matrix in the basis (g1, g2-g0, g3, g4-g2)."""
    c = SPLITTING_BASIS
    return tuple(tuple(Fraction(x) for x in row) for row in matmul(matmul(invert(c), m), c))


def block_diagonal(a, b) -> tuple:
    return (
        (a[0][0], a[0][1], 0, 0),
        (a[1][0], a[1][1], 0, 0),
        (0, 0, b[0][0], b[0][1]),
        (0, 0, b[1][0], b[1][1]),
    )


# --- the subspaces W+ and W- -------------------------------------------------------

class WSpace(str, Enum):
    PLUS = "W+"
    MINUS = "W-"
    OTHER = "other"


W_PLUS = (add(curve(0), curve(3)), add(curve(1), curve(4)))
W_MINUS = (add(curve(0), scale(-1, curve(3))), add(curve(1), scale(-1, curve(4))))


def rank(vectors: Sequence[Sequence]) -> int:
    rows = [[Fraction(x) for x in v] for v in vectors]
    r = 0
    ncols = len(rows[0]) if rows else 0
    for c in range(ncols):
        p = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c] / rows[r][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        r += 1
    return r


def same_span(u: Sequence[Sequence], w: Sequence[Sequence]) -> bool:
    ru, rw = rank(u), rank(w)
    return ru == rw == rank(list(u) + list(w))


def w_space_image(word: str) -> WSpace:
    m = psi_star(word)
    image = [apply(m, v) for v in W_PLUS]
    if same_span(image, W_PLUS):
        return WSpace.PLUS
    if same_span(image, W_MINUS):
        return WSpace.MINUS
    return WSpace.OTHER
