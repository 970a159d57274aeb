"""Exact integer matrix and lattice algebra.

Everything in this module is computed over arbitrary-precision integers;
there is no floating point and no modular shortcut anywhere.  The one
canonical form used throughout the package is the *column* Hermite normal
form with the lower-triangular convention: pivot rows strictly increase,
pivots are positive, each entry in a pivot row outside the pivot column is
reduced into [0, pivot).  Two sublattices are equal iff their canonical
bases are identical, so lattice equality is plain value equality.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd, prod
from typing import Iterable, Optional, Sequence


class LatticeError(ValueError):
    """Base class for exact-linear-algebra failures."""


class AmbientMismatch(LatticeError):
    """Two lattices of different ambient rank were combined."""


class NotASublattice(LatticeError):
    """Containment precondition failed."""


class InfiniteQuotient(LatticeError):
    """Quotient of lattices of different rank requested."""


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (g, s, t) with g = gcd(a, b) >= 0 and s*a + t*b = g."""
    s0, s1 = 1, 0
    t0, t1 = 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if a < 0:
        a, s0, t0 = -a, -s0, -t0
    return a, s0, t0


@dataclass(frozen=True)
class Mat:
    """Immutable integer matrix, row-major entries."""

    rows: int
    cols: int
    entries: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.rows < 0 or self.cols < 0:
            raise LatticeError("negative dimensions")
        if len(self.entries) != self.rows * self.cols:
            raise LatticeError("entry count does not match dimensions")
        if not all(isinstance(x, int) for x in self.entries):
            raise LatticeError("entries must be integers")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], cols: Optional[int] = None) -> "Mat":
        rows = [list(r) for r in rows]
        if rows:
            width = len(rows[0])
            if any(len(r) != width for r in rows):
                raise LatticeError("ragged rows")
        else:
            width = 0 if cols is None else cols
        flat = tuple(int(x) for r in rows for x in r)
        return cls(len(rows), width, flat)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[int]], rows: Optional[int] = None) -> "Mat":
        columns = [list(c) for c in columns]
        if columns:
            height = len(columns[0])
            if any(len(c) != height for c in columns):
                raise LatticeError("ragged columns")
        else:
            height = 0 if rows is None else rows
        flat = tuple(int(columns[j][i]) for i in range(height) for j in range(len(columns)))
        return cls(height, len(columns), flat)

    @classmethod
    def identity(cls, n: int) -> "Mat":
        return cls(n, n, tuple(1 if i == j else 0 for i in range(n) for j in range(n)))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "Mat":
        return cls(rows, cols, (0,) * (rows * cols))

    def __getitem__(self, key: tuple[int, int]) -> int:
        i, j = key
        if not (0 <= i < self.rows and 0 <= j < self.cols):
            raise IndexError(key)
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> tuple[int, ...]:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def col(self, j: int) -> tuple[int, ...]:
        return tuple(self.entries[i * self.cols + j] for i in range(self.rows))

    def to_rows(self) -> list[list[int]]:
        return [list(self.row(i)) for i in range(self.rows)]

    def columns(self) -> list[tuple[int, ...]]:
        return [self.col(j) for j in range(self.cols)]

    def transpose(self) -> "Mat":
        return Mat(self.cols, self.rows,
                   tuple(self.entries[i * self.cols + j]
                         for j in range(self.cols) for i in range(self.rows)))

    def __matmul__(self, other: "Mat") -> "Mat":
        if self.cols != other.rows:
            raise LatticeError("dimension mismatch in product")
        out = []
        for i in range(self.rows):
            ri = self.row(i)
            for j in range(other.cols):
                out.append(sum(ri[k] * other.entries[k * other.cols + j]
                               for k in range(self.cols)))
        return Mat(self.rows, other.cols, tuple(out))

    def apply(self, vec: Sequence[int]) -> tuple[int, ...]:
        if len(vec) != self.cols:
            raise LatticeError("vector length mismatch")
        return tuple(sum(self.row(i)[k] * vec[k] for k in range(self.cols))
                     for i in range(self.rows))

    def __add__(self, other: "Mat") -> "Mat":
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise LatticeError("shape mismatch in sum")
        return Mat(self.rows, self.cols,
                   tuple(a + b for a, b in zip(self.entries, other.entries)))

    def __sub__(self, other: "Mat") -> "Mat":
        return self + other.scale(-1)

    def scale(self, c: int) -> "Mat":
        return Mat(self.rows, self.cols, tuple(c * x for x in self.entries))

    def hstack(self, other: "Mat") -> "Mat":
        if self.rows != other.rows:
            raise LatticeError("row mismatch in hstack")
        rows = [list(self.row(i)) + list(other.row(i)) for i in range(self.rows)]
        return Mat.from_rows(rows, cols=self.cols + other.cols)

    def vstack(self, other: "Mat") -> "Mat":
        if self.cols != other.cols:
            raise LatticeError("column mismatch in vstack")
        return Mat(self.rows + other.rows, self.cols, self.entries + other.entries)

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def is_identity(self) -> bool:
        return self.is_square and self == Mat.identity(self.rows)

    def det(self) -> int:
        """Determinant by fraction-free (Bareiss) elimination."""
        if not self.is_square:
            raise LatticeError("determinant of non-square matrix")
        n = self.rows
        if n == 0:
            return 1
        a = [list(self.row(i)) for i in range(n)]
        sign = 1
        prev = 1
        for k in range(n - 1):
            if a[k][k] == 0:
                for i in range(k + 1, n):
                    if a[i][k]:
                        a[k], a[i] = a[i], a[k]
                        sign = -sign
                        break
                else:
                    return 0
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
                a[i][k] = 0
            prev = a[k][k]
        return sign * a[n - 1][n - 1]

    def is_unimodular(self) -> bool:
        return self.is_square and abs(self.det()) == 1

    def __str__(self) -> str:
        return "[" + "; ".join(" ".join(str(x) for x in self.row(i))
                               for i in range(self.rows)) + "]"


def stack_rows(mats: Sequence[Mat], cols: Optional[int] = None) -> Mat:
    """Vertical stack; `cols` disambiguates the empty stack."""
    mats = [m for m in mats]
    if not mats:
        if cols is None:
            raise LatticeError("empty stack needs explicit column count")
        return Mat.zeros(0, cols)
    out = mats[0]
    for m in mats[1:]:
        out = out.vstack(m)
    return out


def _row_hnf(rows: Iterable[Sequence[int]]) -> list[list[int]]:
    """Row Hermite normal form of the row span.

    Output rows are nonzero, pivot columns strictly increase, pivots are
    positive and entries above each pivot lie in [0, pivot).
    """
    work = [list(r) for r in rows if any(r)]
    if not work:
        return []
    ncols = len(work[0])
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(work)) if work[i][c]), None)
        if piv is None:
            continue
        work[r], work[piv] = work[piv], work[r]
        for i in range(r + 1, len(work)):
            b = work[i][c]
            if b == 0:
                continue
            a = work[r][c]
            if b % a == 0:
                q = b // a
                work[i] = [y - q * x for x, y in zip(work[r], work[i])]
                continue
            g, s, t = xgcd(a, b)
            u, v = a // g, b // g
            row_r = [s * x + t * y for x, y in zip(work[r], work[i])]
            row_i = [-v * x + u * y for x, y in zip(work[r], work[i])]
            work[r], work[i] = row_r, row_i
        if work[r][c] < 0:
            work[r] = [-x for x in work[r]]
        p = work[r][c]
        for i in range(r):
            q = work[i][c] // p
            if q:
                work[i] = [x - q * y for x, y in zip(work[i], work[r])]
        r += 1
        if r == len(work):
            break
    return [row for row in work[:r] if any(row)]


def column_hnf(m: Mat) -> Mat:
    """Canonical column HNF of the column span of `m` (zero columns dropped)."""
    reduced = _row_hnf(m.col(j) for j in range(m.cols))
    return Mat.from_columns(reduced, rows=m.rows)


@dataclass(frozen=True)
class SmithDecomposition:
    """U @ m @ V = diag(d) padded with zeros; d is a divisibility chain."""

    d: tuple[int, ...]
    U: Mat
    V: Mat


def smith(m: Mat) -> SmithDecomposition:
    """Smith normal form with unimodular transforms.

    Returns d (positive divisibility chain, zeros omitted), U (rows x rows)
    and V (cols x cols) with U @ m @ V diagonal, entry i equal to d[i] for
    i < len(d) and 0 beyond.
    """
    nr, nc = m.rows, m.cols
    a = [list(m.row(i)) for i in range(nr)]
    u = [[1 if i == j else 0 for j in range(nr)] for i in range(nr)]
    v = [[1 if i == j else 0 for j in range(nc)] for i in range(nc)]

    def row_combine(i1, i2, s, t, p, q):
        # rows (i1, i2) <- (s*i1 + t*i2, p*i1 + q*i2), applied to a and u
        for mat in (a, u):
            r1, r2 = mat[i1], mat[i2]
            mat[i1] = [s * x + t * y for x, y in zip(r1, r2)]
            mat[i2] = [p * x + q * y for x, y in zip(r1, r2)]

    def col_combine(j1, j2, s, t, p, q):
        for mat in (a, v):
            for row in mat:
                x, y = row[j1], row[j2]
                row[j1] = s * x + t * y
                row[j2] = p * x + q * y

    t0 = 0
    while t0 < min(nr, nc):
        # pick a pivot of minimal absolute value in the trailing block
        best = None
        for i in range(t0, nr):
            for j in range(t0, nc):
                x = a[i][j]
                if x and (best is None or abs(x) < abs(best[2])):
                    best = (i, j, x)
        if best is None:
            break
        bi, bj, _ = best
        if bi != t0:
            a[t0], a[bi] = a[bi], a[t0]
            u[t0], u[bi] = u[bi], u[t0]
        if bj != t0:
            for mat in (a, v):
                for row in mat:
                    row[t0], row[bj] = row[bj], row[t0]
        while True:
            for i in range(t0 + 1, nr):
                b = a[i][t0]
                if b:
                    p = a[t0][t0]
                    if b % p == 0:
                        # elementary step keeps the pivot row untouched
                        row_combine(t0, i, 1, 0, -(b // p), 1)
                    else:
                        g, s, t = xgcd(p, b)
                        row_combine(t0, i, s, t, -(b // g), p // g)
            dirty = False
            for j in range(t0 + 1, nc):
                b = a[t0][j]
                if b:
                    p = a[t0][t0]
                    if b % p == 0:
                        col_combine(t0, j, 1, 0, -(b // p), 1)
                    else:
                        g, s, t = xgcd(p, b)
                        col_combine(t0, j, s, t, -(b // g), p // g)
                        dirty = True
            if dirty or any(a[i][t0] for i in range(t0 + 1, nr)):
                continue
            p = a[t0][t0]
            stray = next(((i, j) for i in range(t0 + 1, nr)
                          for j in range(t0 + 1, nc) if a[i][j] % p), None)
            if stray is None:
                break
            # fold the offending row into the pivot row and re-reduce
            i, _ = stray
            a[t0] = [x + y for x, y in zip(a[t0], a[i])]
            u[t0] = [x + y for x, y in zip(u[t0], u[i])]
        t0 += 1

    for i in range(min(nr, nc)):
        if a[i][i] < 0:
            a[i] = [-x for x in a[i]]
            u[i] = [-x for x in u[i]]
    d = tuple(a[i][i] for i in range(min(nr, nc)) if a[i][i])
    dec = SmithDecomposition(d, Mat.from_rows(u, cols=nr), Mat.from_rows(v, cols=nc))
    if __debug__:
        check = dec.U @ m @ dec.V
        for i in range(nr):
            for j in range(nc):
                want = d[i] if i == j and i < len(d) else 0
                assert check[i, j] == want, "smith decomposition failed to verify"
    return dec


def hnf_snf(m: Mat) -> tuple[Mat, SmithDecomposition]:
    """Canonical column HNF of the span of `m` together with its SNF."""
    return column_hnf(m), smith(m)


def solve_columns(b: Mat, target: Mat) -> Optional[Mat]:
    """Integral X with b @ X == target, or None if no integral solution."""
    if b.rows != target.rows:
        raise LatticeError("shape mismatch in solve")
    dec = smith(b)
    rank = len(dec.d)
    ut = dec.U @ target
    cols = []
    for j in range(target.cols):
        y = [0] * b.cols
        for i in range(b.rows):
            val = ut[i, j]
            if i < rank:
                q, r = divmod(val, dec.d[i])
                if r:
                    return None
                if i < b.cols:
                    y[i] = q
            elif val:
                return None
        cols.append(dec.V.apply(y))
    return Mat.from_columns(cols, rows=b.cols)


def solve_vector(b: Mat, vec: Sequence[int]) -> Optional[tuple[int, ...]]:
    sol = solve_columns(b, Mat.from_columns([list(vec)], rows=b.rows))
    return None if sol is None else sol.col(0)


@dataclass(frozen=True)
class Sublattice:
    """A sublattice of Z^ambient_rank in canonical column HNF basis."""

    ambient_rank: int
    basis: Mat

    def __post_init__(self) -> None:
        b = self.basis
        if b.rows != self.ambient_rank:
            raise LatticeError("basis height differs from ambient rank")
        if b.cols > self.ambient_rank:
            raise LatticeError("more basis vectors than ambient rank")
        pivots = []
        for j in range(b.cols):
            col = b.col(j)
            p = next((i for i, x in enumerate(col) if x), None)
            if p is None:
                raise LatticeError("zero basis column")
            if col[p] < 0:
                raise LatticeError("negative pivot")
            pivots.append(p)
        if any(p2 <= p1 for p1, p2 in zip(pivots, pivots[1:])):
            raise LatticeError("pivot rows not strictly increasing")
        for j, p in enumerate(pivots):
            for j2 in range(b.cols):
                if j2 != j and not (0 <= b[p, j2] < b[p, j]):
                    raise LatticeError("pivot row not reduced")

    @classmethod
    def from_columns(cls, ambient_rank: int, columns: Iterable[Sequence[int]]) -> "Sublattice":
        cols = [list(c) for c in columns]
        if any(len(c) != ambient_rank for c in cols):
            raise LatticeError("column length differs from ambient rank")
        reduced = _row_hnf(cols)
        return cls(ambient_rank, Mat.from_columns(reduced, rows=ambient_rank))

    @classmethod
    def from_matrix(cls, m: Mat) -> "Sublattice":
        return cls(m.rows, column_hnf(m))

    @classmethod
    def full(cls, ambient_rank: int) -> "Sublattice":
        return cls(ambient_rank, Mat.identity(ambient_rank))

    @classmethod
    def zero(cls, ambient_rank: int) -> "Sublattice":
        return cls(ambient_rank, Mat.zeros(ambient_rank, 0))

    @classmethod
    def scaled(cls, ambient_rank: int, n: int) -> "Sublattice":
        """n * Z^ambient_rank (n >= 1)."""
        if n < 1:
            raise LatticeError("scale must be positive")
        return cls(ambient_rank, Mat.identity(ambient_rank).scale(n))

    @property
    def rank(self) -> int:
        return self.basis.cols

    @property
    def is_full(self) -> bool:
        return self.rank == self.ambient_rank and self.basis.is_identity()

    def _pivots(self) -> list[int]:
        out = []
        for j in range(self.basis.cols):
            col = self.basis.col(j)
            out.append(next(i for i, x in enumerate(col) if x))
        return out

    def coords_of(self, vec: Sequence[int]) -> Optional[tuple[int, ...]]:
        """Coordinates of `vec` in the basis, or None if not a member."""
        if len(vec) != self.ambient_rank:
            raise AmbientMismatch("vector length differs from ambient rank")
        x = list(vec)
        coords = []
        for j, p in enumerate(self._pivots()):
            q, r = divmod(x[p], self.basis[p, j])
            if r:
                return None
            coords.append(q)
            if q:
                col = self.basis.col(j)
                x = [xi - q * ci for xi, ci in zip(x, col)]
        if any(x):
            return None
        return tuple(coords)

    def contains_vector(self, vec: Sequence[int]) -> bool:
        return self.coords_of(vec) is not None

    def contains(self, other: "Sublattice") -> bool:
        if other.ambient_rank != self.ambient_rank:
            raise AmbientMismatch("ambient ranks differ")
        return all(self.contains_vector(other.basis.col(j))
                   for j in range(other.rank))

    def image_under(self, a: Mat) -> "Sublattice":
        """The lattice a @ L inside Z^(a.rows)."""
        if a.cols != self.ambient_rank:
            raise AmbientMismatch("matrix width differs from ambient rank")
        return Sublattice.from_matrix(a @ self.basis)

    def index_in_ambient(self) -> Optional[int]:
        """|Z^r / L| when L is full rank, else None."""
        if self.rank != self.ambient_rank:
            return None
        return abs(self.basis.det())

    def reduce_vector(self, vec: Sequence[int]) -> tuple[int, ...]:
        """Canonical coset representative of `vec` modulo a full-rank lattice."""
        if self.rank != self.ambient_rank:
            raise LatticeError("coset reduction needs a full-rank lattice")
        x = list(vec)
        for j in range(self.rank):
            q = x[j] // self.basis[j, j]
            if q:
                col = self.basis.col(j)
                x = [xi - q * ci for xi, ci in zip(x, col)]
        return tuple(x)

    def __str__(self) -> str:
        cols = ", ".join(str(list(self.basis.col(j))) for j in range(self.rank))
        return f"<lattice rank {self.rank} in Z^{self.ambient_rank}: {cols}>"


def kernel_lattice(m: Mat) -> Sublattice:
    """{x in Z^cols : m @ x = 0}, canonical."""
    dec = smith(m)
    rank = len(dec.d)
    cols = [dec.V.col(j) for j in range(rank, m.cols)]
    return Sublattice.from_columns(m.cols, cols)


def preimage_lattice(m: Mat, target: Sublattice) -> Sublattice:
    """{x in Z^cols : m @ x in target}."""
    if m.rows != target.ambient_rank:
        raise AmbientMismatch("matrix height differs from target ambient rank")
    if target.rank == 0:
        return kernel_lattice(m)
    block = m.hstack(target.basis.scale(-1))
    ker = kernel_lattice(block)
    cols = [ker.basis.col(j)[:m.cols] for j in range(ker.rank)]
    return Sublattice.from_columns(m.cols, cols)


def preimage_mod(m: Mat, n: int) -> Sublattice:
    """{x in Z^cols : m @ x == 0 mod n}; always contains n Z^cols."""
    if n < 1:
        raise LatticeError("modulus must be >= 1")
    if n == 1 or m.rows == 0:
        return Sublattice.full(m.cols)
    return preimage_lattice(m, Sublattice.scaled(m.rows, n))


def lattice_meet_join(a: Sublattice, b: Sublattice) -> tuple[Sublattice, Sublattice, Optional[int]]:
    """(a intersect b, a + b, index of the meet in the join or None)."""
    if a.ambient_rank != b.ambient_rank:
        raise AmbientMismatch("ambient ranks differ")
    r = a.ambient_rank
    join = Sublattice.from_columns(
        r, [a.basis.col(j) for j in range(a.rank)] + [b.basis.col(j) for j in range(b.rank)])
    if a.rank == 0 or b.rank == 0:
        meet = Sublattice.zero(r)
    else:
        block = a.basis.hstack(b.basis.scale(-1))
        ker = kernel_lattice(block)
        cols = [a.basis.apply(ker.basis.col(j)[:a.rank]) for j in range(ker.rank)]
        meet = Sublattice.from_columns(r, cols)
    if meet.rank != join.rank:
        return meet, join, None
    return meet, join, quotient_invariants(join, meet).order


@dataclass(frozen=True)
class FinAbGroup:
    """Finite abelian group by invariant factors d1 | d2 | ...; all >= 2."""

    invariant_factors: tuple[int, ...]

    def __post_init__(self) -> None:
        d = self.invariant_factors
        if any(x < 2 for x in d):
            raise LatticeError("invariant factors must be >= 2")
        if any(d[i + 1] % d[i] for i in range(len(d) - 1)):
            raise LatticeError("invariant factors must form a divisibility chain")

    @classmethod
    def trivial(cls) -> "FinAbGroup":
        return cls(())

    @classmethod
    def from_diagonal(cls, diag: Iterable[int]) -> "FinAbGroup":
        return cls(tuple(x for x in diag if x != 1))

    @property
    def order(self) -> int:
        return prod(self.invariant_factors)

    @property
    def exponent(self) -> int:
        return self.invariant_factors[-1] if self.invariant_factors else 1

    @property
    def is_trivial(self) -> bool:
        return not self.invariant_factors

    def __str__(self) -> str:
        if self.is_trivial:
            return "1"
        return " + ".join(f"Z/{d}" for d in self.invariant_factors)


def quotient_invariants(sup: Sublattice, sub: Sublattice) -> FinAbGroup:
    """Invariant factors of sup/sub; requires sub <= sup of equal rank."""
    if sup.ambient_rank != sub.ambient_rank:
        raise AmbientMismatch("ambient ranks differ")
    coords = []
    for j in range(sub.rank):
        c = sup.coords_of(sub.basis.col(j))
        if c is None:
            raise NotASublattice("second lattice is not contained in the first")
        coords.append(list(c))
    if sub.rank != sup.rank:
        raise InfiniteQuotient("ranks differ, quotient is infinite")
    x = Mat.from_columns(coords, rows=sup.rank)
    return FinAbGroup.from_diagonal(smith(x).d)


def restrict_endomorphism(a: Mat, lattice: Sublattice) -> Mat:
    """Matrix of a|_lattice in the lattice basis; requires a @ L <= L."""
    if a.cols != lattice.ambient_rank or a.rows != lattice.ambient_rank:
        raise AmbientMismatch("endomorphism shape differs from ambient rank")
    sol = solve_columns(lattice.basis, a @ lattice.basis)
    if sol is None:
        raise LatticeError("lattice is not stable under the endomorphism")
    return sol


def is_stable(a: Mat, lattice: Sublattice) -> bool:
    """Whether a @ L = L (equality of canonical lattices)."""
    return lattice.image_under(a) == lattice
