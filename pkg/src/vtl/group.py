"""Exact arithmetic in the torus-bundle groups Z^2 x|_A Z.

Elements are stored in the normal form a^p b^q t^k. The product is

    (u, k) * (v, l) = (u + A^k v, k + l)

so t a t^-1 = A(a) and t b t^-1 = A(b), where A(a) is the first column
of A. All coordinates are checked against 64-bit (p, q) and 32-bit (k)
signed ranges.
"""

from __future__ import annotations

import enum
import functools
import re
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import ArithmeticOverflow, BadMatrix, IllegalLetter

INT64_MIN = -(2**63)
INT64_MAX = 2**63 - 1
INT32_MIN = -(2**31)
INT32_MAX = 2**31 - 1
MAX_POWER = 10**6


def _check64(x: int) -> int:
    if not INT64_MIN <= x <= INT64_MAX:
        raise ArithmeticOverflow(f"value {x} exceeds the signed 64-bit range")
    return x


def _check32(x: int) -> int:
    if not INT32_MIN <= x <= INT32_MAX:
        raise ArithmeticOverflow(f"fiber coordinate {x} exceeds the signed 32-bit range")
    return x


@dataclass(frozen=True)
class SL2Matrix:
    """Row-major integer 2x2 matrix with determinant +-1."""

    m11: int
    m12: int
    m21: int
    m22: int

    def __post_init__(self):
        for x in (self.m11, self.m12, self.m21, self.m22):
            if not isinstance(x, int) or isinstance(x, bool):
                raise BadMatrix(f"matrix entries must be integers, got {x!r}")
            _check64(x)
        if self.det not in (1, -1):
            raise BadMatrix(f"determinant {self.det} is not +-1 for {self.entries}")

    @property
    def det(self) -> int:
        return self.m11 * self.m22 - self.m12 * self.m21

    @property
    def entries(self) -> tuple[int, int, int, int]:
        return (self.m11, self.m12, self.m21, self.m22)

    @property
    def is_identity(self) -> bool:
        return self.entries == (1, 0, 0, 1)

    def __matmul__(self, other: SL2Matrix) -> SL2Matrix:
        a, b, c, d = self.entries
        e, f, g, h = other.entries
        return SL2Matrix(
            _check64(a * e + b * g),
            _check64(a * f + b * h),
            _check64(c * e + d * g),
            _check64(c * f + d * h),
        )

    def inverse(self) -> SL2Matrix:
        # adjugate divided by det; det is +-1 so division is a sign flip
        s = self.det
        return SL2Matrix(s * self.m22, -s * self.m12, -s * self.m21, s * self.m11)

    def __str__(self):
        return ",".join(str(x) for x in self.entries)


IDENTITY = SL2Matrix(1, 0, 0, 1)


@functools.lru_cache(maxsize=4096)
def matrix_power(A: SL2Matrix, k: int) -> SL2Matrix:
    """A^k by repeated squaring. Negative k goes through the exact inverse."""
    if abs(k) > MAX_POWER:
        raise ArithmeticOverflow(f"exponent {k} exceeds |k| <= {MAX_POWER}")
    if k < 0:
        A, k = A.inverse(), -k
    result = IDENTITY
    base = A
    while k:
        if k & 1:
            result = result @ base
        k >>= 1
        if k:
            base = base @ base
    return result


def apply(A: SL2Matrix, v: tuple[int, int]) -> tuple[int, int]:
    x, y = v
    return (_check64(A.m11 * x + A.m12 * y), _check64(A.m21 * x + A.m22 * y))


@functools.total_ordering
@dataclass(frozen=True, eq=True)
class GroupElement:
    """The element a^p b^q t^k. Ordered by (k, p, q)."""

    p: int
    q: int
    k: int = 0

    def __post_init__(self):
        _check64(self.p)
        _check64(self.q)
        _check32(self.k)

    @property
    def sort_key(self) -> tuple[int, int, int]:
        return (self.k, self.p, self.q)

    def __lt__(self, other: GroupElement):
        if not isinstance(other, GroupElement):
            return NotImplemented
        return self.sort_key < other.sort_key

    def __iter__(self):
        return iter((self.p, self.q, self.k))

    def __repr__(self):
        return f"({self.p},{self.q},{self.k})"


E = GroupElement(0, 0, 0)


class Kind(enum.Enum):
    ABELIAN2 = "abelian2"
    BUNDLE = "bundle"


@dataclass(frozen=True)
class TorusBundleGroup:
    matrix: SL2Matrix
    kind: Kind = Kind.BUNDLE
    name: str = "custom"

    def __post_init__(self):
        if self.kind is Kind.ABELIAN2 and not self.matrix.is_identity:
            raise BadMatrix("Z^2 uses the identity matrix")

    @property
    def identity(self) -> GroupElement:
        return E

    def power(self, k: int) -> SL2Matrix:
        return matrix_power(self.matrix, k)

    def contains(self, g: GroupElement) -> bool:
        return self.kind is Kind.BUNDLE or g.k == 0

    def multiply(self, g: GroupElement, h: GroupElement) -> GroupElement:
        return multiply(self, g, h)

    def inverse(self, g: GroupElement) -> GroupElement:
        return inverse(self, g)

    @property
    def geometry(self) -> str:
        """One of "abelian" (Z^2), "euclidean", "nil", "sol"."""
        if self.kind is Kind.ABELIAN2:
            return "abelian"
        A = self.matrix
        tr = abs(A.m11 + A.m22)
        if A.det == -1:
            # A^2 has trace tr^2 + 2
            return "euclidean" if tr == 0 else "sol"
        if tr < 2 or A.entries in ((1, 0, 0, 1), (-1, 0, 0, -1)):
            return "euclidean"
        return "nil" if tr == 2 else "sol"

    def __str__(self):
        return self.name


Z2 = TorusBundleGroup(IDENTITY, Kind.ABELIAN2, "z2")
HEISENBERG = TorusBundleGroup(SL2Matrix(1, 1, 0, 1), Kind.BUNDLE, "nil")
SOL = TorusBundleGroup(SL2Matrix(2, 1, 1, 1), Kind.BUNDLE, "sol")

NAMED_GROUPS = {"z2": Z2, "nil": HEISENBERG, "sol": SOL}


def custom_group(entries: Sequence[int]) -> TorusBundleGroup:
    if len(entries) != 4:
        raise BadMatrix(f"expected 4 matrix entries, got {len(entries)}")
    return TorusBundleGroup(SL2Matrix(*entries), Kind.BUNDLE, "custom")


def multiply(G: TorusBundleGroup, g: GroupElement, h: GroupElement) -> GroupElement:
    if G.kind is Kind.ABELIAN2:
        if g.k or h.k:
            raise IllegalLetter("Z^2 elements have no fiber coordinate")
        return GroupElement(_check64(g.p + h.p), _check64(g.q + h.q), 0)
    x, y = apply(G.power(g.k), (h.p, h.q))
    return GroupElement(_check64(g.p + x), _check64(g.q + y), _check32(g.k + h.k))


def inverse(G: TorusBundleGroup, g: GroupElement) -> GroupElement:
    x, y = apply(G.power(-g.k), (g.p, g.q))
    return GroupElement(-x, -y, -g.k)


# -- words -----------------------------------------------------------------

LETTERS = {
    "a": GroupElement(1, 0, 0),
    "b": GroupElement(0, 1, 0),
    "t": GroupElement(0, 0, 1),
}

Letter = tuple[str, int]  # (name, +1 or -1)

_TOKEN = re.compile(r"([abtABT])(?:\^(-?\d+))?")


@dataclass(frozen=True)
class Word:
    """A word over a, b, t. Each letter is (name, sign) with sign -1 for inverse."""

    letters: tuple[Letter, ...] = ()

    @classmethod
    def parse(cls, text: str) -> Word:
        """Parse e.g. ``"tB"``, ``"t b^-1"`` or ``"a^3 B"``. Uppercase means inverse.

        ``"e"`` or ``""`` is the empty word.
        """
        s = "".join(text.split())
        if s in ("", "e", "1"):
            return cls(())
        letters: list[Letter] = []
        pos = 0
        while pos < len(s):
            m = _TOKEN.match(s, pos)
            if m is None:
                raise IllegalLetter(f"cannot parse word {text!r} at {s[pos:]!r}")
            ch, exp = m.group(1), int(m.group(2)) if m.group(2) else 1
            sign = -1 if ch.isupper() else 1
            if exp < 0:
                sign, exp = -sign, -exp
            letters.extend([(ch.lower(), sign)] * exp)
            pos = m.end()
        return cls(tuple(letters))

    def reduced(self) -> Word:
        stack: list[Letter] = []
        for name, sign in self.letters:
            if stack and stack[-1] == (name, -sign):
                stack.pop()
            else:
                stack.append((name, sign))
        return Word(tuple(stack))

    def inverse(self) -> Word:
        return Word(tuple((n, -s) for n, s in reversed(self.letters)))

    def __len__(self):
        return len(self.letters)

    def __str__(self):
        if not self.letters:
            return "e"
        return "".join(n if s > 0 else n.upper() for n, s in self.letters)


def evaluate_word(G: TorusBundleGroup, w: Word | str | Iterable[Letter]) -> GroupElement:
    if isinstance(w, str):
        w = Word.parse(w)
    elif not isinstance(w, Word):
        w = Word(tuple(w))
    g = E
    for name, sign in w.letters:
        if name not in LETTERS or sign not in (1, -1):
            raise IllegalLetter(f"illegal letter {(name, sign)!r}")
        if name == "t" and G.kind is Kind.ABELIAN2:
            raise IllegalLetter("t is not a letter of Z^2")
        x = LETTERS[name]
        g = multiply(G, g, x if sign > 0 else inverse(G, x))
    return g
