"""Exact scalars and dense exact linear algebra.

Elements of a prime field F_p are plain ints in ``[0, p)``; rationals are
:class:`fractions.Fraction`.  Matrices are lists of rows, vectors are lists.
Everything here works in the row-vector convention: a vector ``x`` is mapped by
a matrix ``M`` to ``x * M``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence


class InvalidScalar(ArithmeticError):
    """Raised on division by zero or on values that do not name a field element."""


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


@dataclass(frozen=True)
class FieldSpec:
    """A prime field (``characteristic = p``) or the rationals (``characteristic = 0``)."""

    characteristic: int = 101

    def __post_init__(self):
        p = self.characteristic
        if not isinstance(p, int) or p < 0 or (p > 0 and not _is_prime(p)):
            raise ValueError(f"field characteristic must be 0 or a prime, got {p!r}")

    @property
    def zero(self):
        return 0 if self.characteristic else Fraction(0)

    @property
    def one(self):
        return 1 if self.characteristic else Fraction(1)

    def __call__(self, value):
        """Coerce an int, Fraction or ``"num/den"`` string into the field."""
        p = self.characteristic
        if isinstance(value, str):
            text = value.strip()
            try:
                if "/" in text:
                    num, den = text.split("/", 1)
                    num, den = int(num), int(den)
                else:
                    num, den = int(text), 1
            except ValueError:
                raise InvalidScalar(f"cannot parse scalar {value!r}") from None
            return self.div(self(num), self(den))
        if isinstance(value, bool):
            raise InvalidScalar(f"not a scalar: {value!r}")
        if isinstance(value, Fraction):
            if p:
                return self.div(self(value.numerator), self(value.denominator))
            return value
        if isinstance(value, int):
            return value % p if p else Fraction(value)
        raise InvalidScalar(f"not a scalar: {value!r}")

    def add(self, a, b):
        return (a + b) % self.characteristic if self.characteristic else a + b

    def sub(self, a, b):
        return (a - b) % self.characteristic if self.characteristic else a - b

    def mul(self, a, b):
        return (a * b) % self.characteristic if self.characteristic else a * b

    def neg(self, a):
        return (-a) % self.characteristic if self.characteristic else -a

    def inv(self, a):
        if a == 0:
            raise InvalidScalar("inverse of zero")
        if self.characteristic:
            return pow(a, -1, self.characteristic)
        return 1 / a

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def format(self, a) -> str:
        if self.characteristic:
            return str(a)
        a = Fraction(a)
        return str(a.numerator) if a.denominator == 1 else f"{a.numerator}/{a.denominator}"

    def to_json(self, a):
        """Integer when possible, else a ``"num/den"`` string."""
        if self.characteristic:
            return int(a)
        a = Fraction(a)
        return a.numerator if a.denominator == 1 else f"{a.numerator}/{a.denominator}"

    def random_nonzero(self, rng):
        if self.characteristic:
            return rng.randrange(1, self.characteristic)
        while True:
            num = rng.randint(-9, 9)
            if num:
                return Fraction(num, rng.randint(1, 5))


# -- dense linear algebra ----------------------------------------------------


def rref(field: FieldSpec, rows: Sequence[Sequence], ncols: int | None = None):
    """Reduced row echelon form.

    Returns ``(R, pivots, rank)`` where ``R`` has the same shape as the input
    (zero rows collected at the bottom) and ``pivots`` lists pivot columns.
    """
    R = [[field(x) if not isinstance(x, (int, Fraction)) else x for x in row] for row in rows]
    if field.characteristic:
        p = field.characteristic
        R = [[x % p for x in row] for row in R]
    else:
        R = [[Fraction(x) for x in row] for row in R]
    if ncols is None:
        ncols = len(R[0]) if R else 0
    pivots: list[int] = []
    r = 0
    for col in range(ncols):
        if r == len(R):
            break
        found = next((i for i in range(r, len(R)) if R[i][col] != 0), None)
        if found is None:
            continue
        R[r], R[found] = R[found], R[r]
        inv = field.inv(R[r][col])
        R[r] = [field.mul(inv, x) for x in R[r]]
        pivot_row = R[r]
        for i in range(len(R)):
            if i != r and R[i][col] != 0:
                factor = R[i][col]
                R[i] = [field.sub(x, field.mul(factor, y)) for x, y in zip(R[i], pivot_row)]
        pivots.append(col)
        r += 1
    return R, pivots, r


def rank(field: FieldSpec, rows: Sequence[Sequence]) -> int:
    return rref(field, rows)[2]


def row_basis(field: FieldSpec, rows: Sequence[Sequence], ncols: int) -> list[list]:
    """Nonzero rows of the reduced echelon form: a canonical basis of the row space."""
    R, _, r = rref(field, rows, ncols)
    return R[:r]


def transpose(rows: Sequence[Sequence], ncols: int | None = None) -> list[list]:
    if not rows:
        return [[] for _ in range(ncols or 0)]
    return [list(col) for col in zip(*rows)]


def matmul(field: FieldSpec, A: Sequence[Sequence], B: Sequence[Sequence], inner: int | None = None, ncols: int | None = None) -> list[list]:
    if ncols is None:
        ncols = len(B[0]) if B else 0
    out = []
    for row in A:
        acc = [field.zero] * ncols
        for k, a in enumerate(row):
            if a == 0:
                continue
            for j, b in enumerate(B[k]):
                if b != 0:
                    acc[j] = field.add(acc[j], field.mul(a, b))
        out.append(acc)
    return out


def vec_mat(field: FieldSpec, v: Sequence, M: Sequence[Sequence], ncols: int) -> list:
    return matmul(field, [v], M, ncols=ncols)[0]


def left_kernel(field: FieldSpec, rows: Sequence[Sequence], ncols: int) -> list[list]:
    """Basis (in reduced echelon form) of ``{x : x * M = 0}`` where ``M`` has the given rows."""
    m = len(rows)
    if m == 0:
        return []
    # x M = 0  <=>  M^T x^T = 0; solve via rref of M^T.
    MT = transpose(rows) if ncols else []
    R, pivots, r = rref(field, MT, m)
    free = [c for c in range(m) if c not in set(pivots)]
    basis = []
    for fcol in free:
        v = [field.zero] * m
        v[fcol] = field.one
        for i, pc in enumerate(pivots):
            v[pc] = field.neg(R[i][fcol])
        basis.append(v)
    return row_basis(field, basis, m)


def solve_membership(field: FieldSpec, span: Sequence[Sequence], v: Sequence):
    """Coefficients ``a`` with ``sum(a[k] * span[k]) == v``, or ``None`` if ``v`` is outside the row space."""
    k = len(span)
    n = len(v)
    if k == 0:
        return [] if all(field(x) == 0 for x in v) else None
    # Augment the transposed system [span^T | v^T] and row reduce.
    aug = [[field(span[r][c]) for r in range(k)] + [field(v[c])] for c in range(n)]
    R, pivots, rk = rref(field, aug, k + 1)
    if k in pivots:
        return None
    coeffs = [field.zero] * k
    for i, pc in enumerate(pivots):
        coeffs[pc] = R[i][k]
    return coeffs


@dataclass(frozen=True)
class ExactMatrix:
    """Immutable matrix over a :class:`FieldSpec`."""

    field: FieldSpec
    entries: tuple

    @classmethod
    def from_rows(cls, field: FieldSpec, rows, ncols: int | None = None) -> "ExactMatrix":
        rows = tuple(tuple(field(x) for x in row) for row in rows)
        if ncols is not None and any(len(r) != ncols for r in rows):
            raise ValueError("ragged matrix")
        if rows and len({len(r) for r in rows}) > 1:
            raise ValueError("ragged matrix")
        return cls(field, rows)

    @property
    def rows(self) -> int:
        return len(self.entries)

    @property
    def cols(self) -> int:
        return len(self.entries[0]) if self.entries else 0

    def transpose(self) -> "ExactMatrix":
        return ExactMatrix(self.field, tuple(tuple(c) for c in zip(*self.entries)))

    def rref(self):
        R, pivots, r = rref(self.field, self.entries, self.cols)
        return ExactMatrix(self.field, tuple(tuple(row) for row in R)), pivots, r

    def rank(self) -> int:
        return self.rref()[2]

    def tolist(self) -> list[list]:
        return [list(r) for r in self.entries]


class Subspace:
    """Row space of a set of vectors, kept as a sparse reduced echelon basis.

    Vectors may be given dense (sequences) or sparse (``{index: scalar}``).
    """

    def __init__(self, field: FieldSpec, ambient: int, vectors=()):
        self.field = field
        self.ambient = ambient
        self._rows: dict[int, dict[int, object]] = {}
        for v in vectors:
            self.add(v)

    def _sparse(self, v) -> dict:
        F = self.field
        if isinstance(v, dict):
            return {k: F(x) if not isinstance(x, (int, Fraction)) else x for k, x in v.items() if x != 0}
        return {k: F(x) for k, x in enumerate(v) if x != 0}

    def reduce(self, v) -> dict:
        """Remainder of ``v`` after clearing every pivot column."""
        F = self.field
        r = self._sparse(v)
        for pc in [k for k in r if k in self._rows]:
            a = r.get(pc, 0)
            if a == 0:
                continue
            for k, y in self._rows[pc].items():
                val = F.sub(r.get(k, F.zero), F.mul(a, y))
                if val == 0:
                    r.pop(k, None)
                else:
                    r[k] = val
        return r

    def add(self, v) -> bool:
        """Insert ``v``; returns whether the dimension grew."""
        F = self.field
        r = self.reduce(v)
        if not r:
            return False
        lead = min(r)
        inv = F.inv(r[lead])
        r = {k: F.mul(inv, x) for k, x in r.items()}
        for pc, row in self._rows.items():
            a = row.get(lead)
            if a:
                for k, y in r.items():
                    val = F.sub(row.get(k, F.zero), F.mul(a, y))
                    if val == 0:
                        row.pop(k, None)
                    else:
                        row[k] = val
        self._rows[lead] = r
        return True

    @property
    def dim(self) -> int:
        return len(self._rows)

    @property
    def pivots(self) -> tuple:
        return tuple(sorted(self._rows))

    @property
    def sparse_basis(self) -> list[dict]:
        return [dict(self._rows[pc]) for pc in self.pivots]

    @property
    def basis(self) -> list[tuple]:
        F = self.field
        out = []
        for pc in self.pivots:
            row = [F.zero] * self.ambient
            for k, x in self._rows[pc].items():
                row[k] = x
            out.append(tuple(row))
        return out

    def contains(self, v) -> bool:
        return not self.reduce(v)

    def coordinates(self, v):
        """Coefficients of ``v`` on :attr:`sparse_basis`, or ``None`` if ``v`` is outside."""
        r = self._sparse(v)
        if self.reduce(r):
            return None
        return [r.get(pc, self.field.zero) for pc in self.pivots]

    def __le__(self, other: "Subspace") -> bool:
        return all(other.contains(v) for v in self._rows.values())

    def __eq__(self, other) -> bool:
        if not isinstance(other, Subspace):
            return NotImplemented
        return self.ambient == other.ambient and self._rows == other._rows

    def __add__(self, other: "Subspace") -> "Subspace":
        return Subspace(self.field, self.ambient, list(self._rows.values()) + list(other._rows.values()))

    def __repr__(self):
        return f"Subspace(dim={self.dim}, ambient={self.ambient})"
