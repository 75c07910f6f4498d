"""Words in the twists h, v; the level-2 congruence group; Veech group membership.

Words are strings over ``h, v, H, V`` where upper case is the inverse letter.
Evaluation multiplies left to right, so the rightmost letter acts first.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .flow import Direction, ParityClass

Mat = tuple[tuple[int, int], tuple[int, int]]

IDENTITY: Mat = ((1, 0), (0, 1))
ROTATION: Mat = ((0, -1), (1, 0))

M_GENERATORS: dict[str, Mat] = {
    "h": ((1, 2), (0, 1)),
    "H": ((1, -2), (0, 1)),
    "v": ((1, 0), (2, 1)),
    "V": ((1, 0), (-2, 1)),
}
RHO_GENERATORS: dict[str, Mat] = {
    "h": ((1, 3), (0, 1)),
    "H": ((1, -3), (0, 1)),
    "v": ((1, 0), (1, 1)),
    "V": ((1, 0), (-1, 1)),
}


class NotInGamma2(ValueError):
    """The matrix is not congruent to the identity mod 2."""


def mul(a: Mat, b: Mat) -> Mat:
    return (
        (a[0][0] * b[0][0] + a[0][1] * b[1][0], a[0][0] * b[0][1] + a[0][1] * b[1][1]),
        (a[1][0] * b[0][0] + a[1][1] * b[1][0], a[1][0] * b[0][1] + a[1][1] * b[1][1]),
    )


def det(a: Mat) -> int:
    return a[0][0] * a[1][1] - a[0][1] * a[1][0]


def neg(a: Mat) -> Mat:
    return ((-a[0][0], -a[0][1]), (-a[1][0], -a[1][1]))


def inverse(a: Mat) -> Mat:
    d = det(a)
    if d not in (1, -1):
        raise ValueError("matrix is not unimodular")
    return ((a[1][1] * d, -a[0][1] * d), (-a[1][0] * d, a[0][0] * d))


def apply(a: Mat, v: Sequence[int]) -> tuple[int, int]:
    return (a[0][0] * v[0] + a[0][1] * v[1], a[1][0] * v[0] + a[1][1] * v[1])


def projectively_equal(a: Mat, b: Mat) -> bool:
    return a == b or a == neg(b)


@dataclass(frozen=True)
class TwoByTwo:
    """Integer 2x2 matrix with an equality mode; projective mode identifies A with -A."""

    rows: Mat
    projective: bool = True

    def __eq__(self, other) -> bool:
        other_rows = other.rows if isinstance(other, TwoByTwo) else other
        if self.projective:
            return projectively_equal(self.rows, other_rows)
        return self.rows == other_rows

    def __hash__(self) -> int:
        rows = self.rows
        if self.projective and (rows[0][0], rows[0][1]) < (0, 0) or (
            self.projective and rows[0] == (0, 0) and rows[1] < (0, 0)
        ):
            rows = neg(rows)
        return hash(rows)


INVERSE_LETTER = {"h": "H", "H": "h", "v": "V", "V": "v"}


def reduce_word(word: str) -> str:
    out: list[str] = []
    for c in word:
        if c not in INVERSE_LETTER:
            raise ValueError(f"unknown letter {c!r}")
        if out and out[-1] == INVERSE_LETTER[c]:
            out.pop()
        else:
            out.append(c)
    return "".join(out)


def invert_word(word: str) -> str:
    return "".join(INVERSE_LETTER[c] for c in reversed(word))


def _evaluate(word: str, gens: dict[str, Mat]) -> Mat:
    out = IDENTITY
    for c in word:
        out = mul(out, gens[c])
    return out


def m_of(word: str) -> Mat:
    return _evaluate(word, M_GENERATORS)


def rho_of(word: str) -> Mat:
    return _evaluate(word, RHO_GENERATORS)


def _power(letter: str, k: int) -> str:
    return (letter if k > 0 else INVERSE_LETTER[letter]) * abs(k)


def _nearest_multiple(x: int, step: int) -> int:
    """k minimizing |x + k * step|."""
    return -round(Fraction(x, step))


def gamma2_decompose(a: Mat) -> tuple[str, int]:
    """Write a determinant-one matrix congruent to I mod 2 as sign * M(word)."""
    if det(a) != 1:
        raise ValueError("determinant must be 1")
    if (a[0][1] % 2, a[1][0] % 2, a[0][0] % 2, a[1][1] % 2) != (0, 0, 1, 1):
        raise NotInGamma2(f"{a} is not congruent to the identity mod 2")
    # Reduce the first column (odd, even) by alternating h- and v-powers until it is (+-1, 0).
    left = ""
    cur = a
    while cur[1][0] != 0:
        x, y = cur[0][0], cur[1][0]
        if abs(x) > abs(y):
            k = _nearest_multiple(x, 2 * y)
            letter = "h"
        else:
            k = _nearest_multiple(y, 2 * x)
            letter = "v"
        piece = _power(letter, k)
        cur = mul(m_of(piece), cur)
        left = piece + left
    sign = cur[0][0]
    upper = cur if sign == 1 else neg(cur)
    rest = _power("h", upper[0][1] // 2)
    # m_of(left) * a = sign * m_of(rest)  =>  a = sign * m_of(left^-1 rest)
    word = reduce_word(invert_word(left) + rest)
    if (m_of(word) if sign == 1 else neg(m_of(word))) != a:
        raise AssertionError("decomposition failed to reproduce the matrix")
    return word, sign


def reduce_direction(d: Direction) -> str:
    """A word w with M(w) (a, b) in {+-(1,1)}, {+-(0,1)} or {+-(1,0)} according to the parity class."""
    x, y = d.a, d.b
    word = ""
    cls = d.parity_class
    while True:
        if cls is ParityClass.ODD and abs(x) == abs(y):
            break
        if cls is not ParityClass.ODD and 0 in (x, y):
            break
        if abs(x) > abs(y):
            k = _nearest_multiple(x, 2 * y)
            letter = "h"
            x += 2 * k * y
        else:
            k = _nearest_multiple(y, 2 * x)
            letter = "v"
            y += 2 * k * x
        word = _power(letter, k) + word
    if cls is ParityClass.ODD and x == -y:
        # (1,-1) -> h -> (-1,-1) ; (-1,1) -> h -> (1,1)
        word = "h" + word
    return reduce_word(word)


def class_images_mod2(a: Mat) -> tuple[str, str]:
    """Parity classes of A(1,0) and A(0,1)."""
    def cls(v):
        x, y = v[0] % 2, v[1] % 2
        return {(1, 0): "E2", (0, 1): "E1", (1, 1): "O"}[(x, y)]

    return cls(apply(a, (1, 0))), cls(apply(a, (0, 1)))


@dataclass
class Membership:
    member: bool
    word: str | None
    sign: int | None
    rotated: bool
    reason: str

    def to_record(self) -> dict:
        return {"member": self.member, "word": self.word, "rotated": self.rotated, "reason": self.reason}


def veech_membership(a: Sequence[Sequence[int]]) -> Membership:
    """Decide whether A (up to sign) is the derivative of an affine automorphism of the four-fold cover."""
    a = tuple(tuple(row) for row in a)
    if any(not isinstance(x, int) for row in a for x in row):
        raise ValueError("matrix entries must be integers")
    d = det(a)
    if d not in (1, -1):
        raise ValueError(f"determinant must be +-1, got {d}")
    if d == -1:
        return Membership(False, None, None, False, "orientation-reversing")
    rotated = False
    if class_images_mod2(a)[0] == "E1":
        a = mul(ROTATION, a)
        rotated = True
    a_mod = tuple(tuple(x % 2 for x in row) for row in a)
    if a_mod != ((1, 0), (0, 1)):
        return Membership(False, None, None, rotated, "permutes the parity classes")
    word, sign = gamma2_decompose(a)
    if rho_of(word) == IDENTITY:
        return Membership(True, word, sign, rotated, "rho is trivial")
    return Membership(False, word, sign, rotated, "rho is nontrivial")


def veech_contains(a: Sequence[Sequence[int]]) -> bool:
    return veech_membership(a).member
