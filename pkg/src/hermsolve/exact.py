"""Exact scalars and dense matrices over the Gaussian rationals Q(i).

A :class:`Matrix` stores its entries as integer Gaussian numerators over a
single positive common denominator, kept in lowest terms.  Products, sums and
the elimination kernels (rank, inertia) therefore run in pure integer
arithmetic; :class:`GaussianRational` is the element type seen at the API
boundary.

Rationals are :class:`fractions.Fraction` throughout.
"""

from __future__ import annotations

import functools
import math
import operator
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import DimensionMismatch, NotHermitian, SingularMatrix

Rational = Fraction

__all__ = [
    "Rational",
    "GaussianRational",
    "I",
    "Matrix",
    "Inertia",
    "PinvBundle",
    "rank",
    "inertia",
    "pinv",
    "mp_inverse",
    "e_proj",
    "f_proj",
    "inverse",
    "rref",
    "frobenius_norm_sq",
    "is_psd",
    "range_contains",
    "range_equal",
]


def _to_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("bool is not a scalar")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"cannot convert {type(x).__name__} to an exact rational")


class GaussianRational:
    """Immutable complex number with rational real and imaginary parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        object.__setattr__(self, "re", _to_fraction(re))
        object.__setattr__(self, "im", _to_fraction(im))

    def __setattr__(self, name, value):
        raise AttributeError("GaussianRational is immutable")

    @classmethod
    def coerce(cls, x) -> "GaussianRational":
        if isinstance(x, GaussianRational):
            return x
        return cls(x)

    def __add__(self, other):
        try:
            o = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        return GaussianRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        try:
            o = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        return GaussianRational(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        try:
            o = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        try:
            o = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        if not self.im and not o.im:
            return GaussianRational(self.re * o.re)
        return GaussianRational(
            self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        try:
            o = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        d = o.abs2()
        if not d:
            raise ZeroDivisionError("division by zero Gaussian rational")
        num = self * o.conjugate()
        return GaussianRational(num.re / d, num.im / d)

    def __rtruediv__(self, other):
        try:
            o = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        return o / self

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __pos__(self):
        return self

    def conjugate(self) -> "GaussianRational":
        return GaussianRational(self.re, -self.im)

    def abs2(self) -> Fraction:
        """Squared modulus, exact."""
        return self.re * self.re + self.im * self.im

    def is_real(self) -> bool:
        return not self.im

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __eq__(self, other):
        try:
            o = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        if not self.im:
            return hash(self.re)
        return hash((self.re, self.im))

    def __repr__(self):
        return f"GaussianRational({str(self.re)!r}, {str(self.im)!r})"

    def __str__(self):
        if not self.im:
            return str(self.re)
        if not self.re:
            return f"{self.im}i"
        sign = "+" if self.im > 0 else "-"
        return f"{self.re}{sign}{abs(self.im)}i"


I = GaussianRational(0, 1)


def _split(x) -> tuple[Fraction, Fraction]:
    if isinstance(x, GaussianRational):
        return x.re, x.im
    return _to_fraction(x), Fraction(0)


class Matrix:
    """Dense immutable m x n matrix over Q(i).

    ``Matrix([[1, 2], [3, 4]])`` builds from nested rows; entries may be
    ``int``, ``Fraction``, rational strings such as ``"1/2"``, or
    :class:`GaussianRational`.  Zero-row and zero-column matrices are legal.
    """

    __slots__ = ("rows", "cols", "_den", "_re", "_im", "_real", "_hash")

    def __init__(self, data: Sequence[Sequence] = (), cols: int | None = None):
        rows = len(data)
        if cols is None:
            cols = len(data[0]) if rows else 0
        flat = []
        for r, row in enumerate(data):
            if len(row) != cols:
                raise DimensionMismatch("ragged matrix rows", where=f"row {r}")
            flat.extend(row)
        self._init_from_scalars(rows, cols, flat)

    def _init_from_scalars(self, rows, cols, flat):
        parts = [_split(x) for x in flat]
        den = math.lcm(1, *(p.denominator for pr in parts for p in pr))
        re = [p[0].numerator * (den // p[0].denominator) for p in parts]
        im = [p[1].numerator * (den // p[1].denominator) for p in parts]
        self._set(rows, cols, re, im, den)

    def _set(self, rows, cols, re, im, den):
        g = math.gcd(den, *re, *im)
        if g > 1:
            den //= g
            re = [x // g for x in re]
            im = [x // g for x in im]
        self.rows = rows
        self.cols = cols
        self._den = den
        self._re = tuple(re)
        self._im = tuple(im)
        self._real = not any(self._im)
        self._hash = None

    @classmethod
    def _raw(cls, rows, cols, re, im, den=1) -> "Matrix":
        obj = cls.__new__(cls)
        obj._set(rows, cols, re, im, den)
        return obj

    # -- constructors ---------------------------------------------------

    @classmethod
    def from_entries(cls, rows: int, cols: int, entries: Iterable) -> "Matrix":
        flat = list(entries)
        if len(flat) != rows * cols:
            raise DimensionMismatch(
                f"expected {rows * cols} entries, got {len(flat)}"
            )
        obj = cls.__new__(cls)
        obj._init_from_scalars(rows, cols, flat)
        return obj

    @classmethod
    def zeros(cls, rows: int, cols: int | None = None) -> "Matrix":
        cols = rows if cols is None else cols
        z = [0] * (rows * cols)
        return cls._raw(rows, cols, z, list(z))

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        re = [0] * (n * n)
        re[:: n + 1] = [1] * n
        return cls._raw(n, n, re, [0] * (n * n))

    @classmethod
    def diag(cls, values: Sequence) -> "Matrix":
        n = len(values)
        flat = [0] * (n * n)
        for i, v in enumerate(values):
            flat[i * n + i] = v
        return cls.from_entries(n, n, flat)

    @classmethod
    def block(cls, grid: Sequence[Sequence["Matrix | None"]]) -> "Matrix":
        """Assemble a block matrix; ``None`` stands for a zero block.

        Row heights and column widths are inferred from the non-``None``
        blocks.  Any inconsistency raises :class:`DimensionMismatch` naming
        the block coordinates.
        """
        nbr = len(grid)
        nbc = len(grid[0]) if nbr else 0
        heights: list[int | None] = [None] * nbr
        widths: list[int | None] = [None] * nbc
        for i, brow in enumerate(grid):
            if len(brow) != nbc:
                raise DimensionMismatch("ragged block grid", where=f"block row {i}")
            for j, blk in enumerate(brow):
                if blk is None:
                    continue
                if heights[i] is None:
                    heights[i] = blk.rows
                elif heights[i] != blk.rows:
                    raise DimensionMismatch(
                        f"block has {blk.rows} rows, expected {heights[i]}",
                        where=(i, j),
                    )
                if widths[j] is None:
                    widths[j] = blk.cols
                elif widths[j] != blk.cols:
                    raise DimensionMismatch(
                        f"block has {blk.cols} cols, expected {widths[j]}",
                        where=(i, j),
                    )
        for i, h in enumerate(heights):
            if h is None:
                raise DimensionMismatch("cannot infer block row height", where=(i, "*"))
        for j, w in enumerate(widths):
            if w is None:
                raise DimensionMismatch("cannot infer block column width", where=("*", j))
        den = math.lcm(1, *(b._den for brow in grid for b in brow if b is not None))
        total_r, total_c = sum(heights), sum(widths)
        re = [0] * (total_r * total_c)
        im = [0] * (total_r * total_c)
        r0 = 0
        for i, brow in enumerate(grid):
            c0 = 0
            for j, blk in enumerate(brow):
                if blk is not None and blk.rows and blk.cols:
                    s = den // blk._den
                    for bi in range(blk.rows):
                        base = (r0 + bi) * total_c + c0
                        src = bi * blk.cols
                        re[base : base + blk.cols] = [
                            x * s for x in blk._re[src : src + blk.cols]
                        ]
                        im[base : base + blk.cols] = [
                            x * s for x in blk._im[src : src + blk.cols]
                        ]
                c0 += widths[j]
            r0 += heights[i]
        return cls._raw(total_r, total_c, re, im, den)

    @classmethod
    def hstack(cls, *blocks: "Matrix") -> "Matrix":
        return cls.block([list(blocks)])

    @classmethod
    def vstack(cls, *blocks: "Matrix") -> "Matrix":
        return cls.block([[b] for b in blocks])

    # -- access ---------------------------------------------------------

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def is_square(self) -> bool:
        return self.rows == self.cols

    def is_real(self) -> bool:
        return self._real

    def __getitem__(self, ij) -> GaussianRational:
        i, j = ij
        if not (0 <= i < self.rows and 0 <= j < self.cols):
            raise IndexError(ij)
        k = i * self.cols + j
        return GaussianRational(
            Fraction(self._re[k], self._den), Fraction(self._im[k], self._den)
        )

    @property
    def entries(self) -> tuple[GaussianRational, ...]:
        """Row-major entries."""
        d = self._den
        return tuple(
            GaussianRational(Fraction(r, d), Fraction(i, d))
            for r, i in zip(self._re, self._im)
        )

    def to_rows(self) -> list[list[GaussianRational]]:
        e = self.entries
        return [list(e[i * self.cols : (i + 1) * self.cols]) for i in range(self.rows)]

    def submatrix(self, r0: int, r1: int, c0: int, c1: int) -> "Matrix":
        """Rows ``r0:r1`` and columns ``c0:c1``."""
        nr, nc = r1 - r0, c1 - c0
        re, im = [], []
        for i in range(r0, r1):
            base = i * self.cols
            re.extend(self._re[base + c0 : base + c1])
            im.extend(self._im[base + c0 : base + c1])
        return Matrix._raw(nr, nc, re, im, self._den)

    def select_columns(self, idx: Sequence[int]) -> "Matrix":
        n = self.cols
        re = [self._re[i * n + j] for i in range(self.rows) for j in idx]
        im = [self._im[i * n + j] for i in range(self.rows) for j in idx]
        return Matrix._raw(self.rows, len(idx), re, im, self._den)

    def select_rows(self, idx: Sequence[int]) -> "Matrix":
        n = self.cols
        re = [self._re[i * n + j] for i in idx for j in range(n)]
        im = [self._im[i * n + j] for i in idx for j in range(n)]
        return Matrix._raw(len(idx), n, re, im, self._den)

    # -- arithmetic -----------------------------------------------------

    def _check_same(self, other, op):
        if self.shape != other.shape:
            raise DimensionMismatch(
                f"cannot {op} {self.rows}x{self.cols} and {other.rows}x{other.cols}"
            )

    def _combine(self, other, sign):
        den = math.lcm(self._den, other._den)
        sa, sb = den // self._den, den // other._den
        if sign > 0:
            re = [a * sa + b * sb for a, b in zip(self._re, other._re)]
            im = [a * sa + b * sb for a, b in zip(self._im, other._im)]
        else:
            re = [a * sa - b * sb for a, b in zip(self._re, other._re)]
            im = [a * sa - b * sb for a, b in zip(self._im, other._im)]
        return Matrix._raw(self.rows, self.cols, re, im, den)

    def __add__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        self._check_same(other, "add")
        return self._combine(other, 1)

    def __sub__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        self._check_same(other, "subtract")
        return self._combine(other, -1)

    def __neg__(self):
        return Matrix._raw(
            self.rows, self.cols, [-x for x in self._re], [-x for x in self._im], self._den
        )

    def scale(self, c) -> "Matrix":
        cr, ci = _split(c)
        den = cr.denominator * ci.denominator
        nr = cr.numerator * ci.denominator
        ni = ci.numerator * cr.denominator
        re = [a * nr - b * ni for a, b in zip(self._re, self._im)]
        im = [a * ni + b * nr for a, b in zip(self._re, self._im)]
        return Matrix._raw(self.rows, self.cols, re, im, self._den * den)

    def __mul__(self, c):
        if isinstance(c, Matrix):
            return NotImplemented
        try:
            return self.scale(c)
        except TypeError:
            return NotImplemented

    __rmul__ = __mul__

    def __matmul__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        if self.cols != other.rows:
            raise DimensionMismatch(
                f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}"
            )
        m, k, n = self.rows, self.cols, other.cols
        ar, ai = self._re, self._im
        br, bi = other._re, other._im
        mul = operator.mul
        bcr = [br[j::n] for j in range(n)] if k else [()] * n
        re = []
        if self._real and other._real:
            for i in range(m):
                row = ar[i * k : (i + 1) * k]
                re.extend(sum(map(mul, row, col)) for col in bcr)
            im = [0] * (m * n)
        else:
            bci = [bi[j::n] for j in range(n)] if k else [()] * n
            im = []
            for i in range(m):
                rr = ar[i * k : (i + 1) * k]
                ri = ai[i * k : (i + 1) * k]
                for cr, ci in zip(bcr, bci):
                    re.append(sum(map(mul, rr, cr)) - sum(map(mul, ri, ci)))
                    im.append(sum(map(mul, rr, ci)) + sum(map(mul, ri, cr)))
        return Matrix._raw(m, n, re, im, self._den * other._den)

    @property
    def H(self) -> "Matrix":
        """Conjugate transpose."""
        m, n = self.rows, self.cols
        re = [self._re[i * n + j] for j in range(n) for i in range(m)]
        im = [-self._im[i * n + j] for j in range(n) for i in range(m)]
        return Matrix._raw(n, m, re, im, self._den)

    @property
    def T(self) -> "Matrix":
        m, n = self.rows, self.cols
        re = [self._re[i * n + j] for j in range(n) for i in range(m)]
        im = [self._im[i * n + j] for j in range(n) for i in range(m)]
        return Matrix._raw(n, m, re, im, self._den)

    def conj(self) -> "Matrix":
        return Matrix._raw(self.rows, self.cols, self._re, [-x for x in self._im], self._den)

    # -- predicates -----------------------------------------------------

    def is_zero(self) -> bool:
        return not any(self._re) and self._real

    def is_hermitian(self) -> bool:
        """Exact test of A = A*; never symmetrizes."""
        if self.rows != self.cols:
            return False
        n, re, im = self.cols, self._re, self._im
        for i in range(n):
            if im[i * n + i]:
                return False
            for j in range(i + 1, n):
                if re[i * n + j] != re[j * n + i] or im[i * n + j] != -im[j * n + i]:
                    return False
        return True

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return (
            self.shape == other.shape
            and self._den == other._den
            and self._re == other._re
            and self._im == other._im
        )

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.rows, self.cols, self._den, self._re, self._im))
        return self._hash

    def __repr__(self):
        rows = ", ".join(
            "[" + ", ".join(str(x) for x in row) + "]" for row in self.to_rows()
        )
        return f"Matrix({self.rows}x{self.cols}: [{rows}])"

    # -- integer views used by the kernels -------------------------------

    def _int_rows(self):
        n = self.cols
        re = [list(self._re[i * n : (i + 1) * n]) for i in range(self.rows)]
        im = [list(self._im[i * n : (i + 1) * n]) for i in range(self.rows)]
        return re, im


@dataclass(frozen=True)
class Inertia:
    """Inertia triple (i+, i-, i0) of a Hermitian matrix."""

    plus: int
    minus: int
    zero: int

    @property
    def rank(self) -> int:
        return self.plus + self.minus

    @property
    def order(self) -> int:
        return self.plus + self.minus + self.zero

    def swapped(self) -> "Inertia":
        return Inertia(self.minus, self.plus, self.zero)

    def __iter__(self):
        return iter((self.plus, self.minus, self.zero))


@dataclass(frozen=True)
class PinvBundle:
    """Moore-Penrose inverse together with the two orthogonal projectors.

    ``e_proj`` is I - A A^+ (m x m) and ``f_proj`` is I - A^+ A (n x n).
    """

    pinv: Matrix
    e_proj: Matrix
    f_proj: Matrix
    rank: int


# ---------------------------------------------------------------------------
# rank: fraction-free (Bareiss) elimination on the integer numerators
# ---------------------------------------------------------------------------


def _rank_real(a: list[list[int]], m: int, n: int) -> int:
    r = 0
    prev = 1
    for c in range(n):
        if r == m:
            break
        piv = None
        best = None
        for i in range(r, m):
            v = a[i][c]
            if v and (best is None or abs(v) < best):
                piv, best = i, abs(v)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        prow = a[r]
        p = prow[c]
        for i in range(r + 1, m):
            row = a[i]
            f = row[c]
            if f:
                for j in range(c + 1, n):
                    row[j] = (p * row[j] - f * prow[j]) // prev
            else:
                for j in range(c + 1, n):
                    row[j] = (p * row[j]) // prev
            row[c] = 0
        prev = p
        r += 1
    return r


def _gdiv(xr, xi, yr, yi):
    # exact quotient in Z[i]
    d = yr * yr + yi * yi
    return (xr * yr + xi * yi) // d, (xi * yr - xr * yi) // d


def _rank_complex(ar, ai, m, n) -> int:
    r = 0
    pr_, pi_ = 1, 0
    for c in range(n):
        if r == m:
            break
        piv = next((i for i in range(r, m) if ar[i][c] or ai[i][c]), None)
        if piv is None:
            continue
        ar[r], ar[piv] = ar[piv], ar[r]
        ai[r], ai[piv] = ai[piv], ai[r]
        qr, qi = ar[r], ai[r]
        p_re, p_im = qr[c], qi[c]
        for i in range(r + 1, m):
            rr, ri = ar[i], ai[i]
            f_re, f_im = rr[c], ri[c]
            for j in range(c + 1, n):
                # p*x - f*q, then exact division by the previous pivot
                x_re = p_re * rr[j] - p_im * ri[j] - (f_re * qr[j] - f_im * qi[j])
                x_im = p_re * ri[j] + p_im * rr[j] - (f_re * qi[j] + f_im * qr[j])
                rr[j], ri[j] = _gdiv(x_re, x_im, pr_, pi_)
            rr[c] = ri[c] = 0
        pr_, pi_ = p_re, p_im
        r += 1
    return r


def rank(A: Matrix) -> int:
    """Exact rank via fraction-free elimination."""
    m, n = A.shape
    if m == 0 or n == 0 or A.is_zero():
        return 0
    # eliminate along the shorter side
    if n > m:
        A = A.H
        m, n = n, m
    re, im = A._int_rows()
    if A.is_real():
        return _rank_real(re, m, n)
    return _rank_complex(re, im, m, n)


# ---------------------------------------------------------------------------
# inertia: congruence reduction with 1x1 and 2x2 hyperbolic pivots
# ---------------------------------------------------------------------------


def _content_reduce(re, im):
    g = 0
    for row in re:
        g = math.gcd(g, *row)
    for row in im:
        g = math.gcd(g, *row)
    if g > 1:
        re = [[x // g for x in row] for row in re]
        im = [[x // g for x in row] for row in im]
    return re, im


def _inertia_int(re: list[list[int]], im: list[list[int]], real: bool) -> Inertia:
    plus = minus = 0
    n0 = len(re)
    while re:
        k = len(re)
        piv = next((i for i in range(k) if re[i][i]), None)
        if piv is not None:
            p = re[piv][piv]
            if p > 0:
                plus += 1
                s = 1
            else:
                minus += 1
                s = -1
            ap = abs(p)
            rest = [i for i in range(k) if i != piv]
            # |p| * Schur complement:  |p| D - sgn(p) * a_{.k} a_{k.}
            col_r = [re[i][piv] for i in rest]
            col_i = [im[i][piv] for i in rest]
            if real:
                new_re = [
                    [ap * re[i][j] - s * col_r[a] * col_r[b] for b, j in enumerate(rest)]
                    for a, i in enumerate(rest)
                ]
                new_im = [[0] * len(rest) for _ in rest]
            else:
                new_re, new_im = [], []
                for a, i in enumerate(rest):
                    xr, xi = col_r[a], col_i[a]
                    row_r, row_i = [], []
                    for b, j in enumerate(rest):
                        # a_ik * a_kj with a_kj = conj(a_jk)
                        yr, yi = col_r[b], -col_i[b]
                        row_r.append(ap * re[i][j] - s * (xr * yr - xi * yi))
                        row_i.append(ap * im[i][j] - s * (xr * yi + xi * yr))
                    new_re.append(row_r)
                    new_im.append(row_i)
        else:
            pair = None
            for i in range(k):
                for j in range(i + 1, k):
                    if re[i][j] or im[i][j]:
                        pair = (i, j)
                        break
                if pair:
                    break
            if pair is None:
                break
            plus += 1
            minus += 1
            i0, j0 = pair
            a_re, a_im = re[i0][j0], im[i0][j0]
            na = a_re * a_re + a_im * a_im
            rest = [t for t in range(k) if t not in pair]
            new_re, new_im = [], []
            for p_ in rest:
                # A_{p i} and A_{p j}
                pir, pii = re[p_][i0], im[p_][i0]
                pjr, pji = re[p_][j0], im[p_][j0]
                # u = A_pi * a ; v = A_pj * conj(a)
                ur, ui = pir * a_re - pii * a_im, pir * a_im + pii * a_re
                vr, vi = pjr * a_re + pji * a_im, pji * a_re - pjr * a_im
                row_r, row_i = [], []
                for q in rest:
                    jqr, jqi = re[j0][q], im[j0][q]
                    iqr, iqi = re[i0][q], im[i0][q]
                    tr = (ur * jqr - ui * jqi) + (vr * iqr - vi * iqi)
                    ti = (ur * jqi + ui * jqr) + (vr * iqi + vi * iqr)
                    row_r.append(na * re[p_][q] - tr)
                    row_i.append(na * im[p_][q] - ti)
                new_re.append(row_r)
                new_im.append(row_i)
        re, im = _content_reduce(new_re, new_im)
    return Inertia(plus, minus, n0 - plus - minus)


def inertia(A: Matrix) -> Inertia:
    """Exact inertia of a Hermitian matrix by Sylvester congruence.

    Pivot order: first nonzero diagonal entry of the active block; when the
    whole active diagonal vanishes, the first nonzero off-diagonal entry in
    row-major order gives a 2x2 hyperbolic pivot worth (1, 1).
    """
    if not A.is_hermitian():
        raise NotHermitian()
    n = A.rows
    if n == 0:
        return Inertia(0, 0, 0)
    re, im = A._int_rows()
    return _inertia_int(re, im, A.is_real())


def is_psd(A: Matrix) -> bool:
    return A.is_hermitian() and inertia(A).minus == 0


def range_contains(A: Matrix, B: Matrix) -> bool:
    """R(B) subset of R(A), decided as rank[A, B] = rank(A)."""
    return rank(Matrix.hstack(A, B)) == rank(A)


def range_equal(U: Matrix, V: Matrix) -> bool:
    rk = rank(Matrix.hstack(U, V))
    return rk == rank(U) == rank(V)


# ---------------------------------------------------------------------------
# reduced echelon form, inverse, Moore-Penrose inverse
# ---------------------------------------------------------------------------


def rref(A: Matrix) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form and the pivot column indices."""
    m, n = A.shape
    rows = A.to_rows()
    pivots: list[int] = []
    r = 0
    for c in range(n):
        if r == m:
            break
        piv = next((i for i in range(r, m) if rows[i][c]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = 1 / rows[r][c]
        rows[r] = [x * inv for x in rows[r]]
        for i in range(m):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
    return Matrix(rows, cols=n), pivots


def inverse(A: Matrix) -> Matrix:
    """Exact inverse by Gauss-Jordan; raises SingularMatrix."""
    if not A.is_square():
        raise DimensionMismatch(f"cannot invert {A.rows}x{A.cols} matrix")
    n = A.rows
    R, piv = rref(Matrix.hstack(A, Matrix.identity(n)))
    if piv[:n] != list(range(n)):
        raise SingularMatrix("matrix is singular")
    return R.submatrix(0, n, n, 2 * n)


@functools.lru_cache(maxsize=8192)
def pinv(A: Matrix) -> PinvBundle:
    """Moore-Penrose inverse from the full-rank factorization A = F G.

    F collects the pivot columns of A and G the nonzero rows of its reduced
    echelon form; then A^+ = G* (G G*)^{-1} (F* F)^{-1} F*.
    """
    m, n = A.shape
    R, piv = rref(A)
    r = len(piv)
    if r == 0:
        P = Matrix.zeros(n, m)
    else:
        F = A.select_columns(piv)
        G = R.submatrix(0, r, 0, n)
        P = G.H @ inverse(G @ G.H) @ inverse(F.H @ F) @ F.H
    E = Matrix.identity(m) - A @ P
    Fp = Matrix.identity(n) - P @ A
    return PinvBundle(P, E, Fp, r)


def mp_inverse(A: Matrix) -> Matrix:
    return pinv(A).pinv


def e_proj(A: Matrix) -> Matrix:
    """E_A = I - A A^+."""
    return pinv(A).e_proj


def f_proj(A: Matrix) -> Matrix:
    """F_A = I - A^+ A."""
    return pinv(A).f_proj


def frobenius_norm_sq(A: Matrix) -> Fraction:
    s = sum(x * x for x in A._re) + sum(x * x for x in A._im)
    return Fraction(s, A._den * A._den)
