"""Exact rational helpers: parsing, Gaussian rationals and small dense linear algebra.

Matrices are plain lists of rows of :class:`fractions.Fraction`. Everything here
is sized for the tiny systems the rest of the package produces (at most a few
dozen unknowns), so clarity wins over speed.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence, Union

RationalLike = Union[int, str, Fraction]

__all__ = [
    "GaussianRational",
    "as_fraction",
    "format_fraction",
    "parse_gaussian",
    "format_gaussian",
    "rref",
    "rank",
    "nullspace",
    "det",
    "solve_unique",
    "primitive_integer_vector",
]


def as_fraction(x) -> Fraction:
    """Coerce ints, ``"p/q"`` strings and Fractions to a Fraction.

    Floats are rejected on purpose: they would silently break exactness.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    if isinstance(x, float):
        raise TypeError(f"refusing float {x!r}; pass an exact rational (int, 'p/q' or Fraction)")
    # sympy Rational and friends
    try:
        return Fraction(int(x.p), int(x.q))
    except AttributeError:
        raise TypeError(f"cannot interpret {x!r} as a rational") from None


def format_fraction(x: Fraction) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


@dataclass(frozen=True)
class GaussianRational:
    """An element ``real + i*imag`` of Q(i)."""

    real: Fraction = Fraction(0)
    imag: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "real", as_fraction(self.real))
        object.__setattr__(self, "imag", as_fraction(self.imag))

    @classmethod
    def coerce(cls, x) -> "GaussianRational":
        if isinstance(x, GaussianRational):
            return x
        if isinstance(x, complex):
            raise TypeError("refusing Python complex; use GaussianRational")
        if isinstance(x, (tuple, list)) and len(x) == 2:
            return cls(x[0], x[1])
        return cls(as_fraction(x), Fraction(0))

    def conjugate(self) -> "GaussianRational":
        return GaussianRational(self.real, -self.imag)

    def norm2(self) -> Fraction:
        return self.real * self.real + self.imag * self.imag

    def __add__(self, other):
        o = GaussianRational.coerce(other)
        return GaussianRational(self.real + o.real, self.imag + o.imag)

    __radd__ = __add__

    def __neg__(self):
        return GaussianRational(-self.real, -self.imag)

    def __sub__(self, other):
        return self + (-GaussianRational.coerce(other))

    def __rsub__(self, other):
        return GaussianRational.coerce(other) - self

    def __mul__(self, other):
        o = GaussianRational.coerce(other)
        return GaussianRational(
            self.real * o.real - self.imag * o.imag,
            self.real * o.imag + self.imag * o.real,
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = GaussianRational.coerce(other)
        n = o.norm2()
        if n == 0:
            raise ZeroDivisionError("division by zero Gaussian rational")
        num = self * o.conjugate()
        return GaussianRational(num.real / n, num.imag / n)

    def __rtruediv__(self, other):
        return GaussianRational.coerce(other) / self

    def __eq__(self, other):
        try:
            o = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        return self.real == o.real and self.imag == o.imag

    def __hash__(self):
        return hash((self.real, self.imag))

    def __bool__(self):
        return bool(self.real) or bool(self.imag)

    def __complex__(self):
        return complex(float(self.real), float(self.imag))

    def __repr__(self):
        if self.imag == 0:
            return f"GaussianRational({self.real})"
        return f"GaussianRational({self.real} + {self.imag}i)"

    def to_json(self):
        return [format_fraction(self.real), format_fraction(self.imag)]


def parse_gaussian(text: str) -> GaussianRational:
    """Parse ``"a/b+c/di"`` (also ``"3"``, ``"-i"``, ``"2/3i"``, ``"1-1/2i"``)."""
    s = str(text).replace(" ", "")
    if not s:
        raise ValueError("empty Gaussian rational")
    if not s.endswith("i"):
        return GaussianRational(as_fraction(s), Fraction(0))
    body = s[:-1]
    cut = max(body.rfind("+"), body.rfind("-"))
    re_part, im_part = (body[:cut], body[cut:]) if cut > 0 else ("0", body)
    if im_part in ("", "+"):
        im_part = "1"
    elif im_part == "-":
        im_part = "-1"
    try:
        return GaussianRational(as_fraction(re_part), as_fraction(im_part))
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"cannot parse Gaussian rational {text!r}") from exc


def format_gaussian(z: GaussianRational) -> str:
    """Inverse of :func:`parse_gaussian` in the canonical ``"a/b+c/di"`` form."""
    z = GaussianRational.coerce(z)
    im = format_fraction(z.imag)
    sign = "" if im.startswith("-") else "+"
    return f"{format_fraction(z.real)}{sign}{im}i"


# --------------------------------------------------------------------------
# linear algebra over Q


def _copy(rows: Sequence[Sequence]) -> list[list[Fraction]]:
    return [[as_fraction(x) for x in row] for row in rows]


def rref(rows: Sequence[Sequence], ncols: int | None = None):
    """Reduced row echelon form. Returns ``(R, pivot_columns)``."""
    a = _copy(rows)
    if not a:
        return [], []
    n = len(a[0]) if ncols is None else ncols
    pivots: list[int] = []
    r = 0
    for c in range(n):
        p = next((i for i in range(r, len(a)) if a[i][c] != 0), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        inv = 1 / a[r][c]
        a[r] = [x * inv for x in a[r]]
        for i in range(len(a)):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == len(a):
            break
    return a, pivots


def rank(rows: Sequence[Sequence]) -> int:
    if not rows:
        return 0
    return len(rref(rows)[1])


def nullspace(rows: Sequence[Sequence], ncols: int | None = None) -> list[list[Fraction]]:
    """Basis of ``{x : A x = 0}``; one vector per free column."""
    if not rows:
        if ncols is None:
            raise ValueError("ncols required for an empty system")
        return [[Fraction(int(i == j)) for i in range(ncols)] for j in range(ncols)]
    n = len(rows[0]) if ncols is None else ncols
    r, piv = rref(rows, n)
    free = [c for c in range(n) if c not in piv]
    basis = []
    for f in free:
        v = [Fraction(0)] * n
        v[f] = Fraction(1)
        for i, pc in enumerate(piv):
            v[pc] = -r[i][f]
        basis.append(v)
    return basis


def det(rows: Sequence[Sequence]) -> Fraction:
    a = _copy(rows)
    n = len(a)
    if any(len(row) != n for row in a):
        raise ValueError("determinant of a non-square matrix")
    d = Fraction(1)
    for c in range(n):
        p = next((i for i in range(c, n) if a[i][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            a[c], a[p] = a[p], a[c]
            d = -d
        d *= a[c][c]
        for i in range(c + 1, n):
            if a[i][c] != 0:
                f = a[i][c] / a[c][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    return d


def solve_unique(rows: Sequence[Sequence], rhs: Sequence) -> list[Fraction] | None:
    """Unique solution of ``A x = b`` or ``None`` (singular or inconsistent)."""
    aug = [list(row) + [b] for row, b in zip(rows, rhs)]
    n = len(rows[0])
    r, piv = rref(aug, n + 1)
    if n in piv or len(piv) < n:
        return None
    return [r[i][n] for i in range(n)]


def primitive_integer_vector(v: Iterable) -> list[int]:
    """Scale a rational vector to the primitive integer vector with the same direction."""
    v = [as_fraction(x) for x in v]
    den = 1
    for x in v:
        den = den * x.denominator // gcd(den, x.denominator)
    ints = [int(x * den) for x in v]
    g = 0
    for x in ints:
        g = gcd(g, abs(x))
    if g == 0:
        raise ValueError("zero vector has no primitive representative")
    return [x // g for x in ints]


def matmul(a, b):
    return [[sum((x * y for x, y in zip(row, col)), Fraction(0)) for col in zip(*b)] for row in a]


def transpose(a):
    return [list(col) for col in zip(*a)]
