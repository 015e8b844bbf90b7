"""Exact rational and Gaussian-rational linear algebra.

Scalars are :class:`fractions.Fraction`. Matrices are immutable
:class:`RatMatrix` objects; vectors are plain tuples of ``Fraction``.
Elimination is done fraction-free on integer rows (each row is first scaled
by the lcm of its denominators), which keeps intermediate entries equal to
minors of the input instead of letting rational coefficients blow up.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Sequence, Union

Scalar = Union[int, Fraction, str]
Vector = tuple  # tuple[Fraction, ...]


def to_fraction(x: Scalar) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(x, (int, str)):
        return Fraction(x)
    raise TypeError(f"cannot convert {x!r} to an exact rational")


def parse_rational(s: Scalar) -> Fraction:
    """Parse ``"p/q"``, ``"p"`` or an int. Floats are rejected on purpose."""
    if isinstance(s, str):
        try:
            return Fraction(s.strip())
        except ValueError as exc:
            raise ValueError(f"malformed rational {s!r}") from exc
    return to_fraction(s)


def format_rational(x: Fraction) -> str:
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def vec(xs: Iterable[Scalar]) -> Vector:
    return tuple(to_fraction(x) for x in xs)


def dot(u: Sequence, v: Sequence):
    if len(u) != len(v):
        raise ValueError(f"length mismatch: {len(u)} vs {len(v)}")
    return sum((a * b for a, b in zip(u, v)), Fraction(0))


def primitive_integer_vector(v: Sequence) -> tuple[int, ...]:
    """Positive multiple of a nonzero rational vector with coprime integer entries."""
    v = vec(v)
    if all(x == 0 for x in v):
        raise ValueError("zero vector has no primitive representative")
    den = lcm(*(x.denominator for x in v))
    ints = [int(x * den) for x in v]
    g = 0
    for x in ints:
        g = gcd(g, x)
    return tuple(x // g for x in ints)


@dataclass(frozen=True)
class GaussianRational:
    """An element re + i*im of Q(i)."""

    re: Fraction = Fraction(0)
    im: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "re", to_fraction(self.re))
        object.__setattr__(self, "im", to_fraction(self.im))

    @classmethod
    def coerce(cls, x) -> GaussianRational:
        if isinstance(x, GaussianRational):
            return x
        if isinstance(x, complex):
            raise TypeError("float complex numbers are not exact; pass re/im rationals")
        return cls(to_fraction(x), Fraction(0))

    def __add__(self, other):
        o = GaussianRational.coerce(other)
        return GaussianRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __sub__(self, other):
        return self + (-GaussianRational.coerce(other))

    def __rsub__(self, other):
        return GaussianRational.coerce(other) - self

    def __mul__(self, other):
        o = GaussianRational.coerce(other)
        return GaussianRational(self.re * o.re - self.im * o.im,
                                self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = GaussianRational.coerce(other)
        n = o.abs2()
        if n == 0:
            raise ZeroDivisionError("division by zero in Q(i)")
        w = self * o.conj()
        return GaussianRational(w.re / n, w.im / n)

    def conj(self) -> GaussianRational:
        return GaussianRational(self.re, -self.im)

    def abs2(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def to_json(self) -> dict:
        return {"re": format_rational(self.re), "im": format_rational(self.im)}

    @classmethod
    def from_json(cls, obj) -> GaussianRational:
        if isinstance(obj, dict):
            unknown = set(obj) - {"re", "im"}
            if unknown:
                raise ValueError(f"unexpected keys in Gaussian rational: {sorted(unknown)}")
            return cls(parse_rational(obj.get("re", 0)), parse_rational(obj.get("im", 0)))
        return cls(parse_rational(obj), Fraction(0))

    def __repr__(self):
        return f"GaussianRational({format_rational(self.re)}, {format_rational(self.im)})"


I = GaussianRational(0, 1)


class RatMatrix:
    """Immutable dense matrix over Q."""

    __slots__ = ("rows", "ncols")

    def __init__(self, rows: Iterable[Iterable[Scalar]], ncols: int | None = None):
        rows = tuple(vec(r) for r in rows)
        if ncols is None:
            if not rows:
                raise ValueError("ncols is required for a matrix without rows")
            ncols = len(rows[0])
        for r in rows:
            if len(r) != ncols:
                raise ValueError(f"ragged matrix: row of length {len(r)}, expected {ncols}")
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "ncols", ncols)

    def __setattr__(self, name, value):
        raise AttributeError("RatMatrix is immutable")

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @property
    def shape(self) -> tuple[int, int]:
        return (len(self.rows), self.ncols)

    @classmethod
    def identity(cls, n: int) -> RatMatrix:
        return cls([[int(i == j) for j in range(n)] for i in range(n)], ncols=n)

    @classmethod
    def zeros(cls, r: int, c: int) -> RatMatrix:
        return cls([[0] * c for _ in range(r)], ncols=c)

    @classmethod
    def from_columns(cls, cols: Sequence[Sequence[Scalar]], nrows: int) -> RatMatrix:
        if not cols:
            return cls([[] for _ in range(nrows)], ncols=0)
        return cls(zip(*cols), ncols=len(cols)) if nrows else cls([], ncols=len(cols))

    @property
    def T(self) -> RatMatrix:
        return RatMatrix(zip(*self.rows), ncols=self.nrows) if self.ncols else \
            RatMatrix([], ncols=self.nrows)

    def col(self, j: int) -> Vector:
        return tuple(r[j] for r in self.rows)

    def __matmul__(self, other):
        if isinstance(other, RatMatrix):
            if self.ncols != other.nrows:
                raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
            cols = [other.col(j) for j in range(other.ncols)]
            return RatMatrix([[dot(r, c) for c in cols] for r in self.rows],
                             ncols=other.ncols)
        v = vec(other)
        if len(v) != self.ncols:
            raise ValueError(f"shape mismatch {self.shape} @ vector of length {len(v)}")
        return tuple(dot(r, v) for r in self.rows)

    def __eq__(self, other):
        return isinstance(other, RatMatrix) and self.shape == other.shape \
            and self.rows == other.rows

    def __hash__(self):
        return hash((self.ncols, self.rows))

    def __repr__(self):
        body = ", ".join("[" + ", ".join(format_rational(x) for x in r) + "]"
                         for r in self.rows)
        return f"RatMatrix([{body}], ncols={self.ncols})"

    def to_json(self) -> list:
        return [[format_rational(x) for x in r] for r in self.rows]

    def rank(self) -> int:
        return rank(self)

    def rref(self) -> tuple[RatMatrix, tuple[int, ...]]:
        return rref(self)


def _integer_rows(rows) -> list[list[int]]:
    out = []
    for r in rows:
        den = lcm(*(x.denominator for x in r)) if r else 1
        out.append([int(x * den) for x in r])
    return out


def _fraction_free_reduce(rows: list[list[int]], ncols: int):
    """Fraction-free Gauss-Jordan on an integer matrix, in place.

    On return the first ``len(pivots)`` rows carry ``d`` on their pivot
    column and zeros on every other pivot column, remaining rows are zero.
    Every division below is exact (entries stay integer minors).
    """
    r = 0
    d = 1
    pivots = []
    nrows = len(rows)
    for c in range(ncols):
        p = next((i for i in range(r, nrows) if rows[i][c] != 0), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        piv = rows[r][c]
        prow = rows[r]
        for i in range(nrows):
            if i == r:
                continue
            row = rows[i]
            f = row[c]
            new = []
            for x, y in zip(row, prow):
                q, rem = divmod(piv * x - f * y, d)
                assert rem == 0, "fraction-free elimination lost exactness"
                new.append(q)
            rows[i] = new
        d = piv
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return rows, tuple(pivots), d


def rref(M: RatMatrix) -> tuple[RatMatrix, tuple[int, ...]]:
    """Canonical reduced row echelon form: nonzero rows only, leading ones,
    pivot columns increasing. Returns ``(R, pivot_columns)``."""
    rows = _integer_rows(M.rows)
    rows, pivots, _ = _fraction_free_reduce(rows, M.ncols)
    out = []
    for i, c in enumerate(pivots):
        lead = rows[i][c]
        out.append([Fraction(x, lead) for x in rows[i]])
    return RatMatrix(out, ncols=M.ncols), pivots


def rank(M: RatMatrix) -> int:
    rows = _integer_rows(M.rows)
    _, pivots, _ = _fraction_free_reduce(rows, M.ncols)
    return len(pivots)


def kernel_basis(M: RatMatrix) -> list[Vector]:
    """Basis of {x : Mx = 0}, one vector per free column (free entry 1)."""
    R, pivots = rref(M)
    free = [j for j in range(M.ncols) if j not in pivots]
    basis = []
    for f in free:
        x = [Fraction(0)] * M.ncols
        x[f] = Fraction(1)
        for i, c in enumerate(pivots):
            x[c] = -R.rows[i][f]
        basis.append(tuple(x))
    return basis


def solve_linear(M: RatMatrix, b: Sequence[Scalar]) -> Vector | None:
    """Exact solution of ``M x = b``, or ``None`` when inconsistent.

    Underdetermined systems get the canonical representative with every free
    variable set to 0.
    """
    b = vec(b)
    if len(b) != M.nrows:
        raise ValueError(f"right-hand side has length {len(b)}, matrix has {M.nrows} rows")
    aug = RatMatrix([r + (bi,) for r, bi in zip(M.rows, b)], ncols=M.ncols + 1)
    R, pivots = rref(aug)
    if pivots and pivots[-1] == M.ncols:
        return None
    x = [Fraction(0)] * M.ncols
    for i, c in enumerate(pivots):
        x[c] = R.rows[i][-1]
    return tuple(x)


def det(M: RatMatrix) -> Fraction:
    """Determinant by Bareiss elimination."""
    n = M.nrows
    if n != M.ncols:
        raise ValueError("determinant of a non-square matrix")
    if n == 0:
        return Fraction(1)
    scale = Fraction(1)
    rows = []
    for r in M.rows:
        den = lcm(*(x.denominator for x in r))
        scale /= den
        rows.append([int(x * den) for x in r])
    sign = 1
    prev = 1
    for k in range(n - 1):
        if rows[k][k] == 0:
            p = next((i for i in range(k + 1, n) if rows[i][k] != 0), None)
            if p is None:
                return Fraction(0)
            rows[k], rows[p] = rows[p], rows[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                rows[i][j] = (rows[i][j] * rows[k][k] - rows[i][k] * rows[k][j]) // prev
        prev = rows[k][k]
    return sign * rows[n - 1][n - 1] * scale


def inverse(M: RatMatrix) -> RatMatrix:
    n = M.nrows
    if n != M.ncols:
        raise ValueError("inverse of a non-square matrix")
    aug = RatMatrix([r + tuple(int(i == j) for j in range(n)) for i, r in enumerate(M.rows)],
                    ncols=2 * n)
    R, pivots = rref(aug)
    if pivots[:n] != tuple(range(n)) or (n and len(pivots) < n):
        raise ZeroDivisionError("matrix is singular")
    return RatMatrix([r[n:] for r in R.rows], ncols=n)


def real_projection_span(basis: Sequence[Sequence[GaussianRational]],
                         m: int | None = None) -> RatMatrix:
    """Echelon basis of p(span_C basis), p taking real parts.

    p(span_C{a_k}) is spanned over R by p(a_k) = Re a_k and
    p(i a_k) = -Im a_k.
    """
    basis = [tuple(GaussianRational.coerce(z) for z in a) for a in basis]
    if m is None:
        if not basis:
            return RatMatrix([], ncols=0)
        m = len(basis[0])
    gens = []
    for a in basis:
        if len(a) != m:
            raise ValueError(f"basis vector of length {len(a)}, expected {m}")
        gens.append([z.re for z in a])
        gens.append([-z.im for z in a])
    R, _ = rref(RatMatrix(gens, ncols=m))
    return R


def realification(basis: Sequence[Sequence[GaussianRational]], m: int) -> RatMatrix:
    """Rows spanning span_C(basis) viewed as a real subspace of R^{2m}
    (coordinates: real parts, then imaginary parts)."""
    rows = []
    for a in basis:
        a = [GaussianRational.coerce(z) for z in a]
        rows.append([z.re for z in a] + [z.im for z in a])
        ia = [I * z for z in a]
        rows.append([z.re for z in ia] + [z.im for z in ia])
    return RatMatrix(rows, ncols=2 * m)


def complex_dimension(basis: Sequence[Sequence[GaussianRational]], m: int) -> int:
    return rank(realification(basis, m)) // 2
