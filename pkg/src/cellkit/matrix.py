"""Dense exact matrices and the linear-algebra kernels built on them.

Matrices are immutable, dense, and carry a single :class:`~cellkit.rings.RingSpec`
shared by every entry (entries are stored as raw canonical values).  The
public operations -- :func:`rank`, :func:`kernel_basis`, :func:`determinant`,
:func:`smith_normal_form`, :func:`content_gcd`, :func:`solve` -- are the only
linear algebra the higher layers use.

Rank and kernels over Z/m are deliberately refused for composite m: every
question the theory asks about such rings factors through the prime divisors
of m, and refusing here forces callers onto that path.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, lcm

from . import _elim
from .errors import (
    CompositeModulusRank,
    DimensionMismatch,
    NonSquare,
    WrongRing,
)
from .rings import RingSpec, Scalar, canonical_reduction, is_prime


@dataclass(frozen=True)
class Matrix:
    """Immutable dense matrix over one coefficient ring."""

    ring: RingSpec
    rows: tuple[tuple, ...]
    n_rows: int = field(init=False)
    n_cols: int = field(init=False)

    def __post_init__(self):
        norm = self.ring.normalize
        rows = tuple(tuple(norm(v) for v in r) for r in self.rows)
        widths = {len(r) for r in rows}
        if len(widths) > 1:
            raise DimensionMismatch("ragged rows")
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "n_rows", len(rows))
        object.__setattr__(self, "n_cols", widths.pop() if widths else 0)

    # -- constructors -------------------------------------------------------

    @classmethod
    def from_rows(cls, ring: RingSpec, rows) -> "Matrix":
        return cls(ring, tuple(tuple(r) for r in rows))

    @classmethod
    def identity(cls, ring: RingSpec, n: int) -> "Matrix":
        one, zero = ring.one(), ring.zero()
        return cls(ring, tuple(
            tuple(one if i == j else zero for j in range(n)) for i in range(n)
        ))

    @classmethod
    def zeros(cls, ring: RingSpec, n_rows: int, n_cols: int) -> "Matrix":
        zero = ring.zero()
        return cls(ring, tuple(tuple(zero for _ in range(n_cols)) for _ in range(n_rows)))

    @classmethod
    def column(cls, ring: RingSpec, values) -> "Matrix":
        return cls(ring, tuple((v,) for v in values))

    # -- basic structure -----------------------------------------------------

    def entry(self, i: int, j: int) -> Scalar:
        return Scalar(self.ring, self.rows[i][j])

    def column_values(self, j: int) -> tuple:
        return tuple(r[j] for r in self.rows)

    def is_square(self) -> bool:
        return self.n_rows == self.n_cols

    def is_zero(self) -> bool:
        zero = self.ring.zero()
        return all(v == zero for r in self.rows for v in r)

    def is_symmetric(self) -> bool:
        return self.is_square() and all(
            self.rows[i][j] == self.rows[j][i]
            for i in range(self.n_rows)
            for j in range(i + 1, self.n_cols)
        )

    def transpose(self) -> "Matrix":
        return Matrix(self.ring, tuple(zip(*self.rows)) if self.rows else ())

    def __add__(self, other: "Matrix") -> "Matrix":
        self._check_same_shape(other)
        add = self.ring.add
        return Matrix(self.ring, tuple(
            tuple(add(a, b) for a, b in zip(ra, rb))
            for ra, rb in zip(self.rows, other.rows)
        ))

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._check_same_shape(other)
        sub = self.ring.sub
        return Matrix(self.ring, tuple(
            tuple(sub(a, b) for a, b in zip(ra, rb))
            for ra, rb in zip(self.rows, other.rows)
        ))

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.ring != other.ring:
            raise WrongRing(f"mixed rings {self.ring} and {other.ring}")
        if self.n_cols != other.n_rows:
            raise DimensionMismatch(
                f"cannot multiply {self.n_rows}x{self.n_cols} by {other.n_rows}x{other.n_cols}"
            )
        rng = self.ring
        cols = other.transpose().rows
        out = []
        for r in self.rows:
            out_row = []
            for c in cols:
                acc = rng.zero()
                for a, b in zip(r, c):
                    if a and b:
                        acc = rng.add(acc, rng.mul(a, b))
                out_row.append(acc)
            out.append(tuple(out_row))
        return Matrix(rng, tuple(out))

    def scale(self, factor) -> "Matrix":
        f = self.ring.normalize(factor)
        mul = self.ring.mul
        return Matrix(self.ring, tuple(tuple(mul(f, v) for v in r) for r in self.rows))

    def map_to_ring(self, target: RingSpec) -> "Matrix":
        reduce = canonical_reduction(self.ring, target)
        return Matrix(target, tuple(tuple(reduce(v) for v in r) for r in self.rows))

    def _check_same_shape(self, other: "Matrix") -> None:
        if self.ring != other.ring:
            raise WrongRing(f"mixed rings {self.ring} and {other.ring}")
        if (self.n_rows, self.n_cols) != (other.n_rows, other.n_cols):
            raise DimensionMismatch("shape mismatch")

    def __str__(self):
        body = "; ".join(" ".join(str(v) for v in r) for r in self.rows)
        return f"[{body}]"


# ---------------------------------------------------------------------------
# helpers
# ---------------------------------------------------------------------------


def _int_rows_from_rational(m: Matrix) -> list[list[int]]:
    """Scale each row of a Q-matrix to integers (row scaling keeps row space)."""
    out = []
    for r in m.rows:
        mult = lcm(*(v.denominator for v in r)) if r else 1
        out.append([int(v * mult) for v in r])
    return out


def _field_modulus(ring: RingSpec) -> int:
    """The prime behind field-style elimination, checking Z/m for primality."""
    if ring.kind == "Zm" and not is_prime(ring.modulus):
        raise CompositeModulusRank(
            f"rank/kernel over {ring} is undefined; reduce modulo the prime divisors of {ring.modulus}"
        )
    return ring.modulus


# ---------------------------------------------------------------------------
# public operations
# ---------------------------------------------------------------------------


def rank(m: Matrix) -> int:
    """Row rank; Z is ranked after embedding into Q."""
    ring = m.ring
    if m.n_rows == 0 or m.n_cols == 0:
        return 0
    if ring.kind == "Z":
        return _elim.int_rank([list(r) for r in m.rows])
    if ring.kind == "Q":
        return _elim.int_rank(_int_rows_from_rational(m))
    p = _field_modulus(ring)
    if _elim.p_fits_int64(p):
        return _elim.rref_mod_p(_np_rows(m), p)[0].shape[0]
    span = _elim._FieldSpan(RingSpec("Fp", p), m.n_cols)
    for r in m.rows:
        span.add(r)
    return span.dim


def _np_rows(m: Matrix):
    import numpy as np

    return np.array([[int(v) for v in r] for r in m.rows], dtype=np.int64)


def kernel_basis(m: Matrix) -> Matrix:
    """Matrix whose columns span {v : m v = 0}; requires a field ring."""
    ring = m.ring
    if ring.kind == "Z":
        raise WrongRing("kernel_basis needs a field; embed into Q or reduce mod p first")
    if ring.kind == "Q":
        rows = [[Fraction(v) for v in r] for r in m.rows]
        rr, pivots = _elim.rational_rref(rows)
        free = [c for c in range(m.n_cols) if c not in pivots]
        cols = []
        for fc in free:
            v = [Fraction(0)] * m.n_cols
            v[fc] = Fraction(1)
            for i, pc in enumerate(pivots):
                v[pc] = -rr[i][fc]
            cols.append(v)
        return _matrix_from_columns(ring, cols, m.n_cols)
    p = _field_modulus(ring)
    if _elim.p_fits_int64(p):
        ker = _elim.kernel_mod_p(_np_rows(m), p)
        return Matrix(ring, tuple(tuple(int(x) for x in row) for row in ker))
    fring = RingSpec("Fp", p)
    rr_span = _elim._FieldSpan(fring, m.n_cols)
    for r in m.rows:
        rr_span.add(r)
    pivots = rr_span.pivots
    rr = rr_span.rows
    free = [c for c in range(m.n_cols) if c not in pivots]
    cols = []
    for fc in free:
        v = [0] * m.n_cols
        v[fc] = 1
        for i, pc in enumerate(pivots):
            v[pc] = fring.neg(rr[i][fc])
        cols.append(v)
    return _matrix_from_columns(ring, cols, m.n_cols)


def _matrix_from_columns(ring: RingSpec, cols, n: int) -> Matrix:
    if not cols:
        return Matrix(ring, tuple(() for _ in range(n)))
    return Matrix(ring, tuple(tuple(col[i] for col in cols) for i in range(n)))


def determinant(m: Matrix) -> Scalar:
    """Exact determinant (Bareiss over Z/Q; residue arithmetic otherwise)."""
    if not m.is_square():
        raise NonSquare(f"determinant of a {m.n_rows}x{m.n_cols} matrix")
    ring = m.ring
    if m.n_rows == 0:
        return Scalar(ring, ring.one())
    if ring.kind == "Z":
        return Scalar(ring, _elim.bareiss_det([list(r) for r in m.rows]))
    if ring.kind == "Q":
        scaled = []
        denom = 1
        for r in m.rows:
            mult = lcm(*(v.denominator for v in r)) if r else 1
            denom *= mult
            scaled.append([int(v * mult) for v in r])
        return Scalar(ring, Fraction(_elim.bareiss_det(scaled), denom))
    # Z/m (prime or not): lift to Z, compute there, reduce back.
    lifted = [[int(v) for v in r] for r in m.rows]
    return Scalar(ring, _elim.bareiss_det(lifted) % ring.modulus)


def content_gcd(m: Matrix) -> int:
    """gcd of the absolute values of all entries of an integer matrix."""
    if m.ring.kind != "Z":
        raise WrongRing(f"content_gcd needs an integer matrix, got {m.ring}")
    g = 0
    for r in m.rows:
        for v in r:
            g = gcd(g, v)
            if g == 1:
                return 1
    return g


def smith_normal_form(m: Matrix) -> tuple[Matrix, Matrix, Matrix]:
    """Smith normal form over Z: returns (U, S, V) with U m V = S.

    U and V are unimodular; S is diagonal with d1 | d2 | ... >= 0.  Pivots are
    chosen as the smallest nonzero absolute value in the remaining block,
    first occurrence in row-major order on ties, so results are reproducible.
    """
    if m.ring.kind != "Z":
        raise WrongRing(f"smith_normal_form needs ring Z, got {m.ring}")
    s = [list(r) for r in m.rows]
    nr, nc = m.n_rows, m.n_cols
    u = [[int(i == j) for j in range(nr)] for i in range(nr)]
    v = [[int(i == j) for j in range(nc)] for i in range(nc)]

    def row_op(dst, src, factor):
        srow, urow = s[src], u[src]
        sd, ud = s[dst], u[dst]
        for j in range(nc):
            sd[j] -= factor * srow[j]
        for j in range(nr):
            ud[j] -= factor * urow[j]

    def col_op(dst, src, factor):
        for i in range(nr):
            s[i][dst] -= factor * s[i][src]
        for i in range(nc):
            v[i][dst] -= factor * v[i][src]

    def swap_rows(a, b):
        if a != b:
            s[a], s[b] = s[b], s[a]
            u[a], u[b] = u[b], u[a]

    def swap_cols(a, b):
        if a != b:
            for i in range(nr):
                s[i][a], s[i][b] = s[i][b], s[i][a]
            for i in range(nc):
                v[i][a], v[i][b] = v[i][b], v[i][a]

    def negate_row(a):
        s[a] = [-x for x in s[a]]
        u[a] = [-x for x in u[a]]

    def min_pivot(t):
        best = None
        for i in range(t, nr):
            row = s[i]
            for j in range(t, nc):
                x = row[j]
                if x and (best is None or abs(x) < best[0]):
                    best = (abs(x), i, j)
        return best

    for t in range(min(nr, nc)):
        while True:
            best = min_pivot(t)
            if best is None:
                break
            _, pi, pj = best
            swap_rows(t, pi)
            swap_cols(t, pj)
            if s[t][t] < 0:
                negate_row(t)
            piv = s[t][t]
            clean = True
            for i in range(t + 1, nr):
                if s[i][t]:
                    q = s[i][t] // piv
                    if q:
                        row_op(i, t, q)
                    if s[i][t]:
                        clean = False
            for j in range(t + 1, nc):
                if s[t][j]:
                    q = s[t][j] // piv
                    if q:
                        col_op(j, t, q)
                    if s[t][j]:
                        clean = False
            if not clean:
                continue
            # Edging is clear; pull in any block entry the pivot misses so the
            # divisibility chain d_t | d_{t+1} | ... holds.
            fix = None
            for i in range(t + 1, nr):
                row = s[i]
                for j in range(t + 1, nc):
                    if row[j] % piv:
                        fix = i
                        break
                if fix is not None:
                    break
            if fix is None:
                break
            row_op(t, fix, -1)
        if min_pivot(t) is None and s[t][t] == 0:
            break

    ring = m.ring
    return (
        Matrix(ring, tuple(tuple(r) for r in u)),
        Matrix(ring, tuple(tuple(r) for r in s)),
        Matrix(ring, tuple(tuple(r) for r in v)),
    )


def snf_diagonal(m: Matrix) -> tuple[int, ...]:
    """Just the invariant factors d1 | d2 | ... (zeros included)."""
    _, s, _ = smith_normal_form(m)
    return tuple(s.rows[i][i] for i in range(min(s.n_rows, s.n_cols)))


def solve(a: Matrix, b: Matrix) -> Matrix | None:
    """Some x with a x = b, or None when the system is inconsistent.

    Over fields free variables are set to zero; over Z the solution is found
    through Smith normal form and is None when no integral solution exists.
    """
    if b.n_cols != 1 or a.n_rows != b.n_rows:
        raise DimensionMismatch(
            f"solve needs a column of height {a.n_rows}, got {b.n_rows}x{b.n_cols}"
        )
    ring = a.ring
    if ring != b.ring:
        raise WrongRing(f"mixed rings {ring} and {b.ring}")
    rhs = [r[0] for r in b.rows]
    if ring.kind == "Z":
        return _solve_integer(a, rhs)
    if ring.kind == "Q":
        rows = [[Fraction(x) for x in row] + [Fraction(c)] for row, c in zip(a.rows, rhs)]
        rr, pivots = _elim.rational_rref(rows)
        n = a.n_cols
        x = [Fraction(0)] * n
        for i, pc in enumerate(pivots):
            if pc == n:
                return None
            x[pc] = rr[i][n]
        return Matrix.column(ring, x)
    p = _field_modulus(ring)
    if _elim.p_fits_int64(p):
        import numpy as np

        sol = _elim.solve_mod_p(
            _np_rows(a), np.array([int(c) for c in rhs], dtype=np.int64), p
        )
        if sol is None:
            return None
        return Matrix.column(ring, [int(x) for x in sol])
    fring = RingSpec("Fp", p)
    rows = [list(row) + [c] for row, c in zip(a.rows, rhs)]
    span = _elim._FieldSpan(fring, a.n_cols + 1)
    for r in rows:
        span.add(r)
    n = a.n_cols
    x = [0] * n
    for row, pc in zip(span.rows, span.pivots):
        if pc == n:
            return None
        x[pc] = row[n]
    # _FieldSpan rows are reduced, so pivot coordinates are the solution.
    return Matrix.column(ring, x)


def _solve_integer(a: Matrix, rhs: list[int]) -> Matrix | None:
    u, s, v = smith_normal_form(a)
    c = [sum(u.rows[i][k] * rhs[k] for k in range(len(rhs))) for i in range(a.n_rows)]
    n = a.n_cols
    y = [0] * n
    for i in range(a.n_rows):
        d = s.rows[i][i] if i < min(a.n_rows, n) else 0
        if d == 0:
            if c[i] != 0:
                return None
        else:
            q, r = divmod(c[i], d)
            if r:
                return None
            y[i] = q
    x = [sum(v.rows[i][k] * y[k] for k in range(n)) for i in range(n)]
    return Matrix.column(a.ring, x)
