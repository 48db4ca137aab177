"""Internal elimination and span engines.

Three exact back ends sit behind the public matrix operations and the
subspace bookkeeping in the algebra layer:

* vectorized row reduction mod p on int64 numpy arrays (used whenever the
  modulus is small enough that no intermediate product can overflow),
* fraction-free integer elimination for Z and Q work (rows stay integral,
  stripped by their gcd, so entries remain small on structured input),
* a generic reduced-echelon engine running on ring arithmetic, used where
  coefficients relative to the basis are needed or the modulus is huge.

Nothing in this module is part of the public API.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd

import numpy as np

from .errors import WrongRing
from .rings import RingSpec, is_prime

_INT64_LIMIT = 2**62


def p_fits_int64(p: int, acc_len: int = 1) -> bool:
    """True when acc_len accumulated products of residues mod p fit in int64."""
    return (p - 1) * (p - 1) * max(acc_len, 1) + (p - 1) < _INT64_LIMIT


# ---------------------------------------------------------------------------
# mod-p batch elimination (numpy int64)
# ---------------------------------------------------------------------------


def rref_mod_p(rows: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form of an int64 array mod p.

    Returns (R, pivot_cols) with R of shape (rank, n), pivots normalized to 1
    and pivot columns cleared above and below.
    """
    a = np.array(rows, dtype=np.int64) % p
    if a.ndim != 2:
        raise ValueError("rref_mod_p needs a 2-d array")
    m, n = a.shape
    pivots: list[int] = []
    r = 0
    for c in range(n):
        if r == m:
            break
        nz = np.nonzero(a[r:, c])[0]
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            a[[r, i]] = a[[i, r]]
        inv = pow(int(a[r, c]), -1, p)
        a[r] = (a[r] * inv) % p
        col = a[:, c].copy()
        col[r] = 0
        mask = col != 0
        if mask.any():
            a[mask] = (a[mask] - np.outer(col[mask], a[r])) % p
        pivots.append(c)
        r += 1
    return a[:r], pivots


def kernel_mod_p(rows: np.ndarray, p: int) -> np.ndarray:
    """Columns spanning {v : A v = 0 mod p}; shape (n, nullity)."""
    a = np.array(rows, dtype=np.int64)
    n = a.shape[1]
    rr, pivots = rref_mod_p(a, p)
    free = [c for c in range(n) if c not in pivots]
    out = np.zeros((n, len(free)), dtype=np.int64)
    for k, fc in enumerate(free):
        out[fc, k] = 1
        for i, pc in enumerate(pivots):
            out[pc, k] = (-int(rr[i, fc])) % p
    return out


def solve_mod_p(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray | None:
    """One solution of A x = b mod p, or None when inconsistent."""
    a = np.array(a, dtype=np.int64) % p
    b = np.array(b, dtype=np.int64) % p
    m, n = a.shape
    aug = np.concatenate([a, b.reshape(m, 1)], axis=1)
    rr, pivots = rref_mod_p(aug, p)
    x = np.zeros(n, dtype=np.int64)
    for i, pc in enumerate(pivots):
        if pc == n:
            return None
        x[pc] = rr[i, n]
    return x


# ---------------------------------------------------------------------------
# fraction-free integer elimination
# ---------------------------------------------------------------------------


def _strip_row(row: list[int]) -> None:
    g = 0
    for v in row:
        g = gcd(g, v)
        if g == 1:
            return
    if g > 1:
        for i, v in enumerate(row):
            row[i] = v // g


def int_echelon(rows: list[list[int]]) -> tuple[list[list[int]], list[int]]:
    """Fraction-free row echelon form of integer rows.

    Returns (rows, pivot_cols); each surviving row is gcd-stripped with a
    positive pivot.  Only the span is preserved, not reduced-form
    coefficients.
    """
    work = [list(r) for r in rows if any(r)]
    n = len(rows[0]) if rows else 0
    ech: list[list[int]] = []
    pivots: list[int] = []
    for v in work:
        for row, pc in zip(ech, pivots):
            if v[pc]:
                a, b = row[pc], v[pc]
                g = gcd(a, b)
                fa, fb = a // g, b // g
                for i in range(pc, n):
                    v[i] = fa * v[i] - fb * row[i]
        pc = next((i for i, x in enumerate(v) if x), None)
        if pc is None:
            continue
        if v[pc] < 0:
            v = [-x for x in v]
        _strip_row(v)
        k = next((j for j, q in enumerate(pivots) if q > pc), len(pivots))
        ech.insert(k, v)
        pivots.insert(k, pc)
    return ech, pivots


def int_rank(rows: list[list[int]]) -> int:
    return len(int_echelon(rows)[0])


def bareiss_det(rows: list[list[int]]) -> int:
    """Exact determinant of a square integer matrix (Bareiss elimination)."""
    a = [list(r) for r in rows]
    n = len(a)
    if n == 0:
        return 1
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
        pk = a[k][k]
        for i in range(k + 1, n):
            aik = a[i][k]
            ri, rk = a[i], a[k]
            for j in range(k + 1, n):
                ri[j] = (pk * ri[j] - aik * rk[j]) // prev
            ri[k] = 0
        prev = pk
    return sign * a[n - 1][n - 1]


def rational_rref(
    rows: list[list[Fraction]],
) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form over Q (pivots 1, pivot columns cleared).

    Internally fraction-free: rows are scaled to primitive integer vectors,
    eliminated with cross-multiplication and gcd stripping, and only divided
    by their pivots at the very end.  RREF is unique, so this matches the
    naive Fraction elimination exactly while staying in (small) integers.
    """
    from math import lcm

    int_rows = []
    for r in rows:
        if not any(r):
            continue
        mult = lcm(*(
            (x.denominator if isinstance(x, Fraction) else 1) for x in r
        ))
        int_rows.append([int(x * mult) for x in r])
    if not int_rows:
        return [], []
    ech, pivots = int_echelon(int_rows)
    # back-eliminate above each pivot, fraction-free
    for i in range(len(ech) - 1, -1, -1):
        pc = pivots[i]
        piv = ech[i][pc]
        for j in range(i):
            c = ech[j][pc]
            if c:
                g = gcd(piv, c)
                fa, fb = piv // g, c // g
                ech[j] = [fa * x - fb * y for x, y in zip(ech[j], ech[i])]
                _strip_row(ech[j])
    out = []
    for row, pc in zip(ech, pivots):
        piv = row[pc]
        out.append([Fraction(x, piv) for x in row])
    return out, pivots


# ---------------------------------------------------------------------------
# span builders
# ---------------------------------------------------------------------------


class _ModPSpan:
    """Incremental reduced echelon basis mod p on int64 vectors."""

    def __init__(self, p: int, ambient: int):
        self.p = p
        self.ambient = ambient
        self.rows: list[np.ndarray] = []
        self.pivots: list[int] = []

    @property
    def dim(self) -> int:
        return len(self.rows)

    def _reduce(self, vec) -> np.ndarray:
        v = np.asarray(vec, dtype=np.int64) % self.p
        for row, pc in zip(self.rows, self.pivots):
            c = int(v[pc])
            if c:
                v = (v - c * row) % self.p
        return v

    def add(self, vec) -> bool:
        v = self._reduce(vec)
        nz = np.nonzero(v)[0]
        if nz.size == 0:
            return False
        pc = int(nz[0])
        v = (v * pow(int(v[pc]), -1, self.p)) % self.p
        for i, row in enumerate(self.rows):
            c = int(row[pc])
            if c:
                self.rows[i] = (row - c * v) % self.p
        k = next((j for j, q in enumerate(self.pivots) if q > pc), len(self.pivots))
        self.rows.insert(k, v)
        self.pivots.insert(k, pc)
        return True

    def add_many(self, vectors) -> None:
        mat = np.asarray(list(vectors), dtype=np.int64)
        if mat.size == 0:
            return
        rr, _ = rref_mod_p(mat, self.p)
        for row in rr:
            self.add(row)

    def contains(self, vec) -> bool:
        return not self._reduce(vec).any()

    def residual(self, vec) -> list[int]:
        return [int(x) for x in self._reduce(vec)]

    def coords(self, vec) -> list[int] | None:
        """Coefficients of vec on the echelon basis, or None if outside."""
        v = np.asarray(vec, dtype=np.int64) % self.p
        out = [int(v[pc]) for pc in self.pivots]
        for c, row in zip(out, self.rows):
            if c:
                v = (v - c * row) % self.p
        if v.any():
            return None
        return out

    def basis(self) -> list[list[int]]:
        return [[int(x) for x in row] for row in self.rows]


class _FieldSpan:
    """Incremental reduced echelon basis using RingSpec field arithmetic."""

    def __init__(self, ring: RingSpec, ambient: int):
        self.ring = ring
        self.ambient = ambient
        self.rows: list[list] = []
        self.pivots: list[int] = []

    @property
    def dim(self) -> int:
        return len(self.rows)

    def _reduce(self, vec) -> list:
        rng = self.ring
        v = [rng.normalize(x) for x in vec]
        zero = rng.zero()
        for row, pc in zip(self.rows, self.pivots):
            c = v[pc]
            if c != zero:
                v = [rng.sub(x, rng.mul(c, y)) for x, y in zip(v, row)]
        return v

    def add(self, vec) -> bool:
        rng = self.ring
        v = self._reduce(vec)
        zero = rng.zero()
        pc = next((i for i, x in enumerate(v) if x != zero), None)
        if pc is None:
            return False
        inv = rng.invert(v[pc])
        v = [rng.mul(inv, x) for x in v]
        for i, row in enumerate(self.rows):
            c = row[pc]
            if c != zero:
                self.rows[i] = [rng.sub(x, rng.mul(c, y)) for x, y in zip(row, v)]
        k = next((j for j, q in enumerate(self.pivots) if q > pc), len(self.pivots))
        self.rows.insert(k, v)
        self.pivots.insert(k, pc)
        return True

    def add_many(self, vectors) -> None:
        for v in vectors:
            self.add(v)

    def contains(self, vec) -> bool:
        zero = self.ring.zero()
        return all(x == zero for x in self._reduce(vec))

    def residual(self, vec) -> list:
        return self._reduce(vec)

    def coords(self, vec) -> list | None:
        rng = self.ring
        v = [rng.normalize(x) for x in vec]
        zero = rng.zero()
        out = [v[pc] for pc in self.pivots]
        for c, row in zip(out, self.rows):
            if c != zero:
                v = [rng.sub(x, rng.mul(c, y)) for x, y in zip(v, row)]
        if any(x != zero for x in v):
            return None
        return out

    def basis(self) -> list[list]:
        return [list(row) for row in self.rows]


class _IntSpan:
    """Fraction-free integer span tracker (membership and rank only)."""

    def __init__(self, ambient: int):
        self.ambient = ambient
        self.rows: list[list[int]] = []
        self.pivots: list[int] = []

    @property
    def dim(self) -> int:
        return len(self.rows)

    def _reduce(self, vec) -> list[int]:
        v = [int(x) for x in vec]
        for row, pc in zip(self.rows, self.pivots):
            if v[pc]:
                a, b = row[pc], v[pc]
                g = gcd(a, b)
                fa, fb = a // g, b // g
                v = [fa * x - fb * y for x, y in zip(v, row)]
        return v

    def add(self, vec) -> bool:
        v = self._reduce(vec)
        pc = next((i for i, x in enumerate(v) if x), None)
        if pc is None:
            return False
        if v[pc] < 0:
            v = [-x for x in v]
        _strip_row(v)
        k = next((j for j, q in enumerate(self.pivots) if q > pc), len(self.pivots))
        self.rows.insert(k, v)
        self.pivots.insert(k, pc)
        return True

    def add_many(self, vectors) -> None:
        for v in vectors:
            self.add(v)

    def contains(self, vec) -> bool:
        return not any(self._reduce(vec))

    def residual(self, vec) -> list[int]:
        return self._reduce(vec)

    def basis(self) -> list[list[int]]:
        return [list(row) for row in self.rows]


def _to_fraction_vec(vec):
    return [x if isinstance(x, Fraction) else Fraction(x) for x in vec]


def rref_generic(ring: RingSpec, rows: list[list]) -> tuple[list[list], list[int]]:
    """Reduced row echelon form over any field-like ring; rows as raw values."""
    if not rows:
        return [], []
    if ring.kind == "Q":
        rr, pivots = rational_rref([_to_fraction_vec(r) for r in rows])
        return rr, pivots
    if ring.kind == "Fp" or (ring.kind == "Zm" and is_prime(ring.modulus)):
        p = ring.modulus
        if p_fits_int64(p):
            arr = np.array([[int(x) for x in r] for r in rows], dtype=np.int64)
            rr, pivots = rref_mod_p(arr, p)
            return [[int(x) for x in row] for row in rr], pivots
        span = _FieldSpan(RingSpec("Fp", p), len(rows[0]))
        for r in rows:
            span.add(r)
        return [list(r) for r in span.rows], list(span.pivots)
    raise WrongRing(f"no field elimination over {ring}")


class _QSpan(_FieldSpan):
    def __init__(self, ambient: int):
        from .rings import rationals

        super().__init__(rationals(), ambient)


def solve_many(ring: RingSpec, m_rows: list[list], rhs_cols: list[list]) -> list[list | None]:
    """Solve M x = b for several right-hand sides with one elimination.

    Returns one solution per column (free variables zero) or None where the
    system is inconsistent.  Field rings only.
    """
    k = len(m_rows)
    n = len(m_rows[0]) if k else 0
    zero, one = ring.zero(), ring.one()
    aug = [
        list(row) + [one if i == j else zero for j in range(k)]
        for i, row in enumerate(m_rows)
    ]
    rr, pivots = rref_generic(ring, aug)
    sol_rows = [(pc, row[n:]) for pc, row in zip(pivots, rr) if pc < n]
    constraint_rows = [row[n:] for pc, row in zip(pivots, rr) if pc >= n]

    def dot(t, b):
        acc = zero
        for x, y in zip(t, b):
            if x != zero and y != zero:
                acc = ring.add(acc, ring.mul(x, y))
        return acc

    out = []
    for b in rhs_cols:
        if any(dot(t, b) != zero for t in constraint_rows):
            out.append(None)
            continue
        x = [zero] * n
        for pc, t in sol_rows:
            x[pc] = dot(t, b)
        out.append(x)
    return out


def span_builder(ring: RingSpec, ambient: int, need_coords: bool = False):
    """Pick the right span engine for the ring.

    Over Z the span is taken inside the Q vector space (rank/membership in
    the rational sense) -- integral spans are not needed anywhere in cellkit.
    """
    if ring.kind in ("Fp",) or (ring.kind == "Zm" and is_prime(ring.modulus)):
        p = ring.modulus
        if p_fits_int64(p):
            return _ModPSpan(p, ambient)
        return _FieldSpan(RingSpec("Fp", p), ambient)
    if ring.kind in ("Z", "Q"):
        if need_coords or ring.kind == "Q":
            return _QSpan(ambient)
        return _IntSpan(ambient)
    raise WrongRing(f"no span arithmetic over {ring}")
