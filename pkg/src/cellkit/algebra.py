"""Finite free algebras given by sparse structure constants, and their modules.

An :class:`Algebra` is a free module of finite rank over one of the supported
coefficient rings, with multiplication stored sparsely: ``structure[(i, j)]``
is the expansion of ``b_i * b_j`` as a tuple of ``(k, coefficient)`` pairs.
Modules are presented concretely by one action matrix per basis element, so
every representation-theoretic question downstream reduces to exact linear
algebra.

All values are immutable after construction and all operations are pure.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import _elim
from .errors import (
    DimensionMismatch,
    NonTerminating,
    NotAnIdeal,
    NotNilpotent,
    WrongRing,
)
from .matrix import Matrix, kernel_basis
from .rings import RingSpec, canonical_reduction

StructureTable = dict[tuple[int, int], tuple[tuple[int, object], ...]]


@dataclass(eq=True)
class Algebra:
    """A finite free algebra over ``ring`` presented by structure constants."""

    ring: RingSpec
    dim: int
    basis_labels: tuple[str, ...]
    structure: StructureTable
    unit: tuple

    def __post_init__(self):
        if len(self.basis_labels) != self.dim:
            raise DimensionMismatch("basis_labels length must equal dim")
        if len(self.unit) != self.dim:
            raise DimensionMismatch("unit vector length must equal dim")
        norm = self.ring.normalize
        zero = self.ring.zero()
        table: StructureTable = {}
        for (i, j), terms in self.structure.items():
            cleaned = tuple(
                (k, c)
                for k, c in ((k, norm(c)) for k, c in terms)
                if c != zero
            )
            if cleaned:
                table[(i, j)] = cleaned
        self.structure = table
        self.unit = tuple(norm(v) for v in self.unit)

    # -- element arithmetic on dense coefficient vectors --------------------

    def zero_vector(self) -> list:
        return [self.ring.zero()] * self.dim

    def basis_vector(self, i: int) -> list:
        v = self.zero_vector()
        v[i] = self.ring.one()
        return v

    def product_basis(self, i: int, j: int) -> tuple[tuple[int, object], ...]:
        return self.structure.get((i, j), ())

    def multiply_vectors(self, u, v) -> list:
        rng = self.ring
        zero = rng.zero()
        out = self.zero_vector()
        nz_u = [(i, a) for i, a in enumerate(u) if a != zero]
        nz_v = [(j, b) for j, b in enumerate(v) if b != zero]
        for i, a in nz_u:
            for j, b in nz_v:
                terms = self.structure.get((i, j))
                if not terms:
                    continue
                ab = rng.mul(a, b)
                for k, c in terms:
                    out[k] = rng.add(out[k], rng.mul(ab, c))
        return out

    def multiply_vector_basis(self, u, j: int) -> list:
        """u * b_j for a dense coefficient vector u."""
        rng = self.ring
        zero = rng.zero()
        out = self.zero_vector()
        for i, a in enumerate(u):
            if a == zero:
                continue
            for k, c in self.structure.get((i, j), ()):
                out[k] = rng.add(out[k], rng.mul(a, c))
        return out

    def multiply_basis_vector(self, i: int, v) -> list:
        """b_i * v for a dense coefficient vector v."""
        rng = self.ring
        zero = rng.zero()
        out = self.zero_vector()
        for j, b in enumerate(v):
            if b == zero:
                continue
            for k, c in self.structure.get((i, j), ()):
                out[k] = rng.add(out[k], rng.mul(b, c))
        return out

    def left_mult_rows(self, x) -> list[list]:
        """Rows of the matrix of left multiplication by the element x."""
        rng = self.ring
        zero = rng.zero()
        rows = [[zero] * self.dim for _ in range(self.dim)]
        for i, a in enumerate(x):
            if a == zero:
                continue
            for j in range(self.dim):
                for k, c in self.structure.get((i, j), ()):
                    rows[k][j] = rng.add(rows[k][j], rng.mul(a, c))
        return rows

    def opposite(self) -> "Algebra":
        table = {(j, i): terms for (i, j), terms in self.structure.items()}
        return Algebra(self.ring, self.dim, self.basis_labels, table, self.unit)

    def __hash__(self):  # identity hash: algebras are used as cache keys
        return id(self)


@dataclass(eq=True)
class AlgebraModule:
    """A left module over ``parent`` given by one action matrix per basis element."""

    parent: Algebra
    rank: int
    action: tuple[Matrix, ...]

    def __post_init__(self):
        if len(self.action) != self.parent.dim:
            raise DimensionMismatch("one action matrix per algebra basis element")
        for m in self.action:
            if m.n_rows != self.rank or m.n_cols != self.rank:
                raise DimensionMismatch("action matrices must be rank x rank")
            if m.ring != self.parent.ring:
                raise WrongRing("action matrices must live over the algebra's ring")

    def act_basis(self, i: int, vec) -> list:
        rng = self.parent.ring
        zero = rng.zero()
        rows = self.action[i].rows
        out = []
        for r in rows:
            acc = zero
            for a, b in zip(r, vec):
                if a != zero and b != zero:
                    acc = rng.add(acc, rng.mul(a, b))
            out.append(acc)
        return out

    def action_of_element(self, coeffs) -> Matrix:
        """Matrix of the action of an algebra element given by coefficients."""
        rng = self.parent.ring
        zero = rng.zero()
        rows = [[zero] * self.rank for _ in range(self.rank)]
        for i, a in enumerate(coeffs):
            if a == zero:
                continue
            mat = self.action[i].rows
            for r in range(self.rank):
                row = mat[r]
                dst = rows[r]
                for c in range(self.rank):
                    v = row[c]
                    if v != zero:
                        dst[c] = rng.add(dst[c], rng.mul(a, v))
        return Matrix(self.parent.ring, tuple(tuple(r) for r in rows))

    def representation_violations(self) -> list[str]:
        """All (i, j) where action(b_i) action(b_j) != sum gamma^k action(b_k),
        plus a check that the unit acts as the identity."""
        a = self.parent
        out = []
        unit_mat = self.action_of_element(a.unit)
        if unit_mat != Matrix.identity(a.ring, self.rank):
            out.append("unit does not act as the identity")
        for i in range(a.dim):
            for j in range(a.dim):
                lhs = self.action[i] @ self.action[j]
                rhs = Matrix.zeros(a.ring, self.rank, self.rank)
                for k, c in a.product_basis(i, j):
                    rhs = rhs + self.action[k].scale(c)
                if lhs != rhs:
                    out.append(f"representation property fails at ({i}, {j})")
        return out


def regular_module(a: Algebra) -> AlgebraModule:
    """The left regular module; intended for desk-scale algebras."""
    mats = []
    for i in range(a.dim):
        rng = a.ring
        zero = rng.zero()
        rows = [[zero] * a.dim for _ in range(a.dim)]
        for j in range(a.dim):
            for k, c in a.structure.get((i, j), ()):
                rows[k][j] = rng.add(rows[k][j], c)
        mats.append(Matrix(rng, tuple(tuple(r) for r in rows)))
    return AlgebraModule(a, a.dim, tuple(mats))


# ---------------------------------------------------------------------------
# validation
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class AlgebraValidationReport:
    violations: tuple[str, ...]

    @property
    def valid(self) -> bool:
        return not self.violations


def validate_algebra(a: Algebra) -> AlgebraValidationReport:
    """Check the unit law and associativity on all basis triples.

    Violations are data, not exceptions; each one names the offending
    element or triple.
    """
    rng = a.ring
    zero = rng.zero()
    out = []
    for i in range(a.dim):
        e = a.basis_vector(i)
        if a.multiply_vectors(a.unit, e) != e:
            out.append(f"unit law fails on the left at basis index {i}")
        if a.multiply_vectors(e, list(a.unit)) != e:
            out.append(f"unit law fails on the right at basis index {i}")

    struct = a.structure
    for i in range(a.dim):
        for j in range(a.dim):
            ij = struct.get((i, j), ())
            for k in range(a.dim):
                left: dict[int, object] = {}
                for m, c in ij:
                    for t, d in struct.get((m, k), ()):
                        left[t] = rng.add(left.get(t, zero), rng.mul(c, d))
                right: dict[int, object] = {}
                for m, c in struct.get((j, k), ()):
                    for t, d in struct.get((i, m), ()):
                        right[t] = rng.add(right.get(t, zero), rng.mul(c, d))
                keys = set(left) | set(right)
                if any(left.get(t, zero) != right.get(t, zero) for t in keys):
                    out.append(f"associativity fails at triple ({i}, {j}, {k})")
    return AlgebraValidationReport(tuple(out))


# ---------------------------------------------------------------------------
# base change and quotients
# ---------------------------------------------------------------------------


def base_change(a: Algebra, target: RingSpec) -> Algebra:
    """Apply the canonical coefficient reduction to every structure constant."""
    reduce = canonical_reduction(a.ring, target)
    table: StructureTable = {}
    for key, terms in a.structure.items():
        table[key] = tuple((k, reduce(c)) for k, c in terms)
    unit = tuple(reduce(v) for v in a.unit)
    return Algebra(target, a.dim, a.basis_labels, table, unit)


def quotient_by_basis_ideal(a: Algebra, ideal_indices) -> Algebra:
    """Quotient by the span of the indexed basis elements.

    The span must be a two-sided ideal; the first product falling outside it
    is reported as a witness.
    """
    ideal = frozenset(ideal_indices)
    for i in ideal:
        for j in range(a.dim):
            for key in ((i, j), (j, i)):
                for k, _c in a.structure.get(key, ()):
                    if k not in ideal:
                        raise NotAnIdeal(
                            f"product b_{key[0]} * b_{key[1]} leaves the span "
                            f"(term at basis index {k})",
                            witness=key,
                        )
    survivors = [i for i in range(a.dim) if i not in ideal]
    new_index = {old: new for new, old in enumerate(survivors)}
    table: StructureTable = {}
    for (i, j), terms in a.structure.items():
        if i in ideal or j in ideal:
            continue
        kept = tuple((new_index[k], c) for k, c in terms if k not in ideal)
        if kept:
            table[(new_index[i], new_index[j])] = kept
    labels = tuple(a.basis_labels[i] for i in survivors)
    unit = tuple(a.unit[i] for i in survivors)
    return Algebra(a.ring, len(survivors), labels, table, unit)


# ---------------------------------------------------------------------------
# generating sets (internal speed-up for Hom systems)
# ---------------------------------------------------------------------------

_GEN_CACHE: dict[int, tuple[int, ...]] = {}


def _right_mult_int_rows(a: Algebra, g: int) -> list[list[int]]:
    """Integer matrix R with R v = (v * b_g), after scaling out denominators."""
    from fractions import Fraction
    from math import lcm

    entries: dict[tuple[int, int], object] = {}
    denom = 1
    for i in range(a.dim):
        for k, c in a.structure.get((i, g), ()):
            entries[(k, i)] = c
            if isinstance(c, Fraction):
                denom = lcm(denom, c.denominator)
    rows = [[0] * a.dim for _ in range(a.dim)]
    for (k, i), c in entries.items():
        rows[k][i] = int(c * denom)
    return rows


def generating_indices(a: Algebra) -> tuple[int, ...]:
    """A small set of basis indices generating ``a`` as a unital algebra.

    Greedy: walk the basis in order, adding any element outside the subalgebra
    generated so far; the subalgebra span is closed with a worklist of
    matrix-vector products (every word in the generators is reached).
    Equivariance under these generators implies equivariance under the whole
    algebra, which shrinks Hom systems a lot.
    """
    import numpy as np

    cached = _GEN_CACHE.get(id(a))
    if cached is not None:
        return cached
    ring = a.ring
    if not ring.has_field_arithmetic():
        raise WrongRing("generating sets are computed over fields")

    modular = ring.is_modular and _elim.p_fits_int64(ring.modulus, a.dim)
    p = ring.modulus if ring.is_modular else None
    span = _elim.span_builder(ring, a.dim) if ring.is_modular else _elim._IntSpan(a.dim)

    def as_vec(raw):
        if ring.kind == "Q":
            return _clear_denominators(raw)
        return [int(x) for x in raw]

    def apply(mat, vec):
        if modular:
            return list(map(int, (mat @ np.asarray(vec, dtype=np.int64)) % p))
        if isinstance(mat, np.ndarray):
            vmax = max((abs(x) for x in vec), default=0)
            if int(np.abs(mat).max()) * vmax * a.dim < 2**62:
                return [int(x) for x in mat @ np.asarray(vec, dtype=np.int64)]
            mat = mat.tolist()
        return [sum(r[i] * vec[i] for i in range(a.dim) if vec[i]) for r in mat]

    def build(g: int):
        rows = _right_mult_int_rows(a, g)
        if modular:
            return np.array(rows, dtype=np.int64) % p
        if all(abs(v) < 2**20 for r in rows for v in r):
            return np.array(rows, dtype=np.int64)
        return rows

    span.add(as_vec(a.unit))
    gens: list[int] = []
    mats: list = []
    for idx in range(a.dim):
        if span.contains(as_vec(a.basis_vector(idx))):
            continue
        gens.append(idx)
        mats.append(build(idx))
        frontier = [list(r) for r in span.basis()]
        while frontier:
            w = frontier.pop()
            for mat in mats:
                prod = apply(mat, w)
                if span.add(prod):
                    frontier.append(prod)
    result = tuple(gens)
    _GEN_CACHE[id(a)] = result
    return result


# ---------------------------------------------------------------------------
# bulk products (shared by radical powers and regular-module bookkeeping)
# ---------------------------------------------------------------------------


def _clear_denominators(vec) -> list[int]:
    from fractions import Fraction
    from math import gcd, lcm

    fracs = [x if isinstance(x, Fraction) else Fraction(x) for x in vec]
    mult = lcm(*(f.denominator for f in fracs)) if fracs else 1
    ints = [int(f * mult) for f in fracs]
    g = 0
    for v in ints:
        g = gcd(g, v)
        if g == 1:
            return ints
    return [v // g for v in ints] if g > 1 else ints


def _left_mult_rows_int(a: Algebra, x_int: list[int]) -> list[list[int]]:
    rows = [[0] * a.dim for _ in range(a.dim)]
    for i, c in enumerate(x_int):
        if not c:
            continue
        for j in range(a.dim):
            for k, g in a.structure.get((i, j), ()):
                rows[k][j] += c * int(g)
    return rows


def left_multiply_many(a: Algebra, x, vectors: list[list]) -> list[list[int]]:
    """[x * v for v in vectors] as integer vectors (inputs scaled as needed).

    Over Q the inputs are scaled to primitive integer vectors first, which is
    harmless everywhere this is used (only spans of the results matter).
    Over F_p the results are canonical residues.
    """
    import numpy as np

    ring = a.ring
    if ring.kind == "Q":
        x_int = _clear_denominators(x)
        vecs = [_clear_denominators(v) for v in vectors]
    else:
        x_int = [int(v) for v in x]
        vecs = [[int(y) for y in v] for v in vectors]
    rows = _left_mult_rows_int(a, x_int)
    if not vecs:
        return []
    if ring.is_modular:
        p = ring.modulus
        if _elim.p_fits_int64(p, a.dim):
            mat = np.array(rows, dtype=np.int64) % p
            cols = (np.array(vecs, dtype=np.int64).T) % p
            prod = (mat @ cols) % p
            return [list(map(int, prod[:, j])) for j in range(prod.shape[1])]
        return [
            [sum(r[i] * v[i] for i in range(a.dim)) % p for r in rows]
            for v in vecs
        ]
    bound = max((max(map(abs, r), default=0) for r in rows), default=0)
    vbound = max((max(map(abs, v), default=0) for v in vecs), default=0)
    if bound * vbound * a.dim < 2**62:
        mat = np.array(rows, dtype=np.int64)
        cols = np.array(vecs, dtype=np.int64).T
        prod = mat @ cols
        return [list(map(int, prod[:, j])) for j in range(prod.shape[1])]
    return [
        [sum(r[i] * v[i] for i in range(a.dim)) for r in rows]
        for v in vecs
    ]


def products_span(a: Algebra, xs: list[list], ys: list[list]) -> list[list]:
    """Echelon basis of span{x * y : x in xs, y in ys} (field or Z/Q span)."""
    span = _elim.span_builder(a.ring, a.dim)
    for x in xs:
        for w in left_multiply_many(a, x, ys):
            span.add(w)
    return span.basis()


def nilpotency_chain(a: Algebra, vectors: list[list], max_steps: int | None = None) -> list[list[list]]:
    """Bases of span(V), span(V)^2, ... down to zero; raises if not nilpotent."""
    span = _elim.span_builder(a.ring, a.dim)
    for v in vectors:
        span.add(v)
    chain = [span.basis()]
    steps = max_steps if max_steps is not None else a.dim + 1
    current = chain[0]
    for _ in range(steps):
        if not current:
            return chain
        nxt = products_span(a, chain[0], current)
        if len(nxt) >= len(current):
            raise NotNilpotent(
                f"powers stopped shrinking at dimension {len(nxt)}"
            )
        chain.append(nxt)
        current = nxt
    if current:
        raise NotNilpotent("powers did not reach zero within dim(A) steps")
    return chain


# ---------------------------------------------------------------------------
# Hom spaces and radical filtrations
# ---------------------------------------------------------------------------


def hom_space(m: AlgebraModule, n: AlgebraModule) -> list[Matrix]:
    """Basis of the intertwiner space {f : f a = a f for all a} over a field."""
    a = m.parent
    if not (n.parent is a or n.parent == a):
        raise WrongRing("hom_space needs modules over the same algebra")
    ring = a.ring
    if not ring.has_field_arithmetic():
        raise WrongRing(f"hom_space needs a field ring, got {ring}")
    if m.rank == 0 or n.rank == 0:
        return []
    gens = generating_indices(a)
    unknowns = n.rank * m.rank

    def fidx(r, c):
        return r * m.rank + c

    zero = ring.zero()
    rows = []
    for g in gens:
        am = m.action[g].rows
        an = n.action[g].rows
        for r in range(n.rank):
            for c in range(m.rank):
                row = [zero] * unknowns
                for s in range(m.rank):
                    row[fidx(r, s)] = ring.add(row[fidx(r, s)], am[s][c])
                for t in range(n.rank):
                    row[fidx(t, c)] = ring.sub(row[fidx(t, c)], an[r][t])
                rows.append(tuple(row))
    ker = kernel_basis(Matrix(ring, tuple(rows)))
    out = []
    for col in range(ker.n_cols):
        vals = ker.column_values(col)
        out.append(
            Matrix(ring, tuple(
                tuple(vals[fidx(r, c)] for c in range(m.rank))
                for r in range(n.rank)
            ))
        )
    return out


def module_subspace_chain(m: AlgebraModule, rad_vectors) -> list[list[list]]:
    """Bases of M >= rad M >= rad^2 M >= ... , ending at the zero space."""
    a = m.parent
    ring = a.ring
    rad_mats = [m.action_of_element(x) for x in rad_vectors]
    full = [list(Matrix.identity(ring, m.rank).rows[i]) for i in range(m.rank)]
    chain = [full]
    current = full
    while True:
        span = _elim.span_builder(ring, m.rank)
        for mat in rad_mats:
            for v in current:
                rng = ring
                w = [rng.zero()] * m.rank
                rows = mat.rows
                for r in range(m.rank):
                    acc = rng.zero()
                    for x, y in zip(rows[r], v):
                        if x != rng.zero() and y != rng.zero():
                            acc = rng.add(acc, rng.mul(x, y))
                    w[r] = acc
                span.add(w)
        nxt = span.basis()
        if len(nxt) == 0:
            chain.append([])
            return chain
        if len(nxt) >= len(current):
            raise NonTerminating(
                "radical chain stopped decreasing; the supplied ideal is not nilpotent"
            )
        chain.append(nxt)
        current = nxt


def radical_filtration(m: AlgebraModule, rad_vectors) -> list[AlgebraModule]:
    """Layers M/rad M, rad M/rad^2 M, ... as modules with induced actions.

    ``rad_vectors`` must span a nilpotent two-sided ideal of the parent
    algebra (cellkit obtains it from the cellular layer); a chain that stops
    strictly decreasing raises :class:`NonTerminating`.
    """
    a = m.parent
    if not a.ring.has_field_arithmetic():
        raise WrongRing(f"radical_filtration needs a field ring, got {a.ring}")
    chain = module_subspace_chain(m, rad_vectors)
    return [
        subquotient_module(m, upper, lower)
        for upper, lower in zip(chain, chain[1:])
    ]


def subquotient_module(m: AlgebraModule, upper: list[list], lower: list[list]) -> AlgebraModule:
    """The module (span upper)/(span lower) with induced action matrices."""
    a = m.parent
    ring = a.ring
    span = _elim.span_builder(ring, m.rank)
    for v in lower:
        span.add(v)
    n_lower = span.dim
    reps = [v for v in upper if span.add(v)]
    q = len(reps)
    if q == 0:
        return AlgebraModule(a, 0, tuple(Matrix(ring, tuple()) for _ in range(a.dim)))

    # Solve B x = w for B = [reps | lower-basis] against every needed image at
    # once, through one reduced echelon pass on the augmented system.
    lower_span = _elim.span_builder(ring, m.rank)
    for v in lower:
        lower_span.add(v)
    basis_cols = reps + lower_span.basis()
    width = len(basis_cols)
    rhs_cols = []
    for i in range(a.dim):
        for v in reps:
            rhs_cols.append(m.act_basis(i, v))
    aug_rows = []
    for r in range(m.rank):
        row = [col[r] for col in basis_cols] + [col[r] for col in rhs_cols]
        aug_rows.append(row)
    rr, pivots = _elim.rref_generic(ring, aug_rows)
    coords = {}
    for i, pc in enumerate(pivots):
        if pc >= width:
            raise NonTerminating("action leaves the filtration subspace")
        coords[pc] = rr[i]
    zero = ring.zero()
    mats = []
    pos = 0
    for _i in range(a.dim):
        rows = [[zero] * q for _ in range(q)]
        for c in range(q):
            col_index = width + pos
            for r in range(q):
                row = coords.get(r)
                rows[r][c] = row[col_index] if row is not None else zero
            pos += 1
        mats.append(Matrix(ring, tuple(tuple(r) for r in rows)))
    return AlgebraModule(a, q, tuple(mats))
