"""Schur algebras on the orbit basis, their heredity chain, and a
machine-validated codeterminant cell datum.

The algebra is realized as the symmetric-group-equivariant endomorphisms of
the d-th tensor power of R^n.  A basis element xi_{i,j} is indexed by the
diagonal orbit of a pair (i, j) of multi-indices and acts by

    xi_{i,j} (e_{s_1} x ... x e_{s_d}) = sum of e_{l_1} x ... x e_{l_d}
    over l with (l, s) in the orbit of (i, j).

Structure constants are extracted by composing these (0/1, orbit-supported)
matrices; the extraction verifies that every composite equals the claimed
combination entry by entry, and because the basis matrices have pairwise
disjoint supports this certifies associativity of the abstract table.

The cell candidate is the codeterminant basis Y_{S,T} = xi_{i(S), l} *
xi_{l, i(T)} indexed by pairs of semistandard tableaux of each partition
shape, with the reversed dominance order as the cell order.  It is never
assumed cellular: the change of basis must be unimodular over Z and the
axiom validator must pass, otherwise construction fails loudly.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import permutations, product

from ..algebra import Algebra, base_change
from ..cellular import CellDatum, validate_cell_datum
from ..errors import (
    CandidateNotBasis,
    CandidateNotCellular,
    ChainNotIncreasing,
    InternalConsistencyError,
    SizeLimit,
)
from .. import _elim
from ..matrix import Matrix
from ..rings import RingSpec, integers
from .combinatorics import dominance_linear_extension, partitions_at_most, semistandard_tableaux

Index = tuple[int, ...]


def _weight(i: Index, n: int) -> tuple[int, ...]:
    counts = [0] * n
    for v in i:
        counts[v - 1] += 1
    return tuple(counts)


def _canonical_pair(i: Index, j: Index) -> tuple[Index, Index]:
    cols = sorted(zip(i, j))
    return tuple(c[0] for c in cols), tuple(c[1] for c in cols)


def _orbit(i: Index, j: Index) -> set[tuple[Index, Index]]:
    cols = list(zip(i, j))
    seen = set()
    for perm in permutations(cols):
        seen.add((tuple(c[0] for c in perm), tuple(c[1] for c in perm)))
    return seen


def _index_position(i: Index, n: int) -> int:
    pos = 0
    for v in i:
        pos = pos * n + (v - 1)
    return pos


def _weight_index(lam: tuple[int, ...]) -> Index:
    out = []
    for value, count in enumerate(lam, start=1):
        out.extend([value] * count)
    return tuple(out)


def _compositions(d: int, n: int) -> list[tuple[int, ...]]:
    out = []

    def build(remaining: int, parts: tuple[int, ...]):
        if len(parts) == n:
            if remaining == 0:
                out.append(parts)
            return
        for v in range(remaining + 1):
            build(remaining - v, parts + (v,))

    build(d, ())
    return sorted(out)


@dataclass
class SchurData:
    """A Schur algebra with its orbit basis and quasi-hereditary scaffolding."""

    ring: RingSpec
    n: int
    d: int
    algebra: Algebra
    integral_algebra: Algebra
    orbit_reps: tuple[tuple[Index, Index], ...]
    weights: tuple[tuple[int, ...], ...]
    weight_idempotent_index: dict
    partitions: tuple[tuple[int, ...], ...]  # increasing linear extension of dominance
    chain_idempotents: tuple[tuple, ...]  # e^k coefficient vectors, k = 1..t
    involution: tuple[int, ...]
    _cellular_cache: object = field(default=None, repr=False, compare=False)


def schur_algebra(ring: RingSpec, n: int, d: int, limit: int = 10_000) -> SchurData:
    """Build S_R(n, d); the integral table is constructed first and reduced.

    The tensor-space dimension n^d is guarded by ``limit``.
    """
    if n < 1 or d < 1:
        raise ValueError(f"schur_algebra needs n, d >= 1, got ({n}, {d})")
    if n**d > limit:
        raise SizeLimit(
            f"tensor space dimension {n}^{d} = {n**d} exceeds the limit {limit}"
        )

    indices = list(product(range(1, n + 1), repeat=d))
    reps = sorted({_canonical_pair(i, j) for i in indices for j in indices})
    dim = len(reps)
    rep_position = {rep: k for k, rep in enumerate(reps)}

    # Sparse 0/1 matrices on the tensor space: column -> list of rows.
    mats: list[dict[int, list[int]]] = []
    orbit_of_entry: dict[tuple[int, int], int] = {}
    orbit_sizes = []
    for k, (i, j) in enumerate(reps):
        cols: dict[int, list[int]] = {}
        orb = _orbit(i, j)
        for l, s in orb:
            lp, sp = _index_position(l, n), _index_position(s, n)
            cols.setdefault(sp, []).append(lp)
            orbit_of_entry[(lp, sp)] = k
        mats.append(cols)
        orbit_sizes.append(len(orb))

    structure = {}
    for a in range(dim):
        amat = mats[a]
        for b in range(dim):
            bmat = mats[b]
            prod_cols: dict[int, dict[int, int]] = {}
            for s, mids in bmat.items():
                acc: dict[int, int] = {}
                for m in mids:
                    for l in amat.get(m, ()):
                        acc[l] = acc.get(l, 0) + 1
                if acc:
                    prod_cols[s] = acc
            coeffs: dict[int, int] = {}
            mass = 0
            for s, acc in prod_cols.items():
                for l, count in acc.items():
                    k = orbit_of_entry[(l, s)]
                    known = coeffs.get(k)
                    if known is None:
                        coeffs[k] = count
                    elif known != count:
                        raise InternalConsistencyError(
                            f"composite xi_{a} xi_{b} is not constant on orbit {k}"
                        )
                    mass += count
            if sum(coeffs[k] * orbit_sizes[k] for k in coeffs) != mass:
                raise InternalConsistencyError(
                    f"composite xi_{a} xi_{b} does not decompose over the orbit basis"
                )
            if coeffs:
                structure[(a, b)] = tuple(sorted(coeffs.items()))

    weights = _compositions(d, n)
    weight_idx = {}
    for lam in weights:
        i = _weight_index(lam)
        weight_idx[lam] = rep_position[(i, i)]
    unit = [0] * dim
    for lam in weights:
        unit[weight_idx[lam]] = 1

    labels = tuple(
        "xi[" + ",".join(map(str, i)) + "|" + ",".join(map(str, j)) + "]"
        for i, j in reps
    )
    integral = Algebra(integers(), dim, labels, structure, tuple(unit))

    parts = dominance_linear_extension(partitions_at_most(d, n))
    t = len(parts)
    chain = []
    for k in range(1, t + 1):
        vec = [0] * dim
        for l in range(k, t + 1):
            lam = parts[l - 1] + (0,) * (n - len(parts[l - 1]))
            vec[weight_idx[lam]] = 1
        chain.append(tuple(vec))

    involution = tuple(rep_position[_canonical_pair(j, i)] for i, j in reps)

    alg = integral if ring.kind == "Z" else base_change(integral, ring)
    chain_ring = tuple(tuple(ring.normalize(v) for v in vec) for vec in chain)
    return SchurData(
        ring=ring,
        n=n,
        d=d,
        algebra=alg,
        integral_algebra=integral,
        orbit_reps=tuple(reps),
        weights=tuple(weights),
        weight_idempotent_index=weight_idx,
        partitions=tuple(parts),
        chain_idempotents=chain_ring,
        involution=involution,
    )


@dataclass(frozen=True)
class IdealSpan:
    """The two-sided ideal S e^k S, described by an explicit spanning basis.

    These ideals are generally *not* spans of subsets of the orbit basis
    (already for S(2,2) the ideal S e^2 S has dimension 9 but touches all 10
    basis indices), so the honest description is a basis of the span plus
    the set of basis indices it involves.
    """

    k: int
    dimension: int
    basis: tuple[tuple, ...]
    support: frozenset[int]


def heredity_chain(sd: SchurData) -> list[IdealSpan]:
    """The chain of ideals J_k = S e^k S, k = 1..t, with built-in checks.

    Spans are computed over the fraction field when the ring is Z.  J_1 must
    be the whole algebra, the chain must be strictly decreasing in k, and
    every J_k must be stable under the involution; violations raise.
    """
    a = sd.algebra
    span_ring = a.ring
    iota = sd.involution
    ideals: list[IdealSpan] = []
    spans = []
    for k, vec in enumerate(sd.chain_idempotents, start=1):
        e = [a.ring.normalize(v) for v in vec]
        span = _elim.span_builder(span_ring, a.dim)
        support: set[int] = set()
        zero = a.ring.zero()
        for i in range(a.dim):
            xe = a.multiply_basis_vector(i, e)
            for j in range(a.dim):
                v = a.multiply_vector_basis(xe, j)
                span.add(v)
                support.update(idx for idx, c in enumerate(v) if c != zero)
        basis = tuple(tuple(r) for r in span.basis())
        for v in basis:
            flipped = [zero] * a.dim
            for idx, c in enumerate(v):
                flipped[iota[idx]] = a.ring.add(flipped[iota[idx]], c)
            if not span.contains(flipped):
                raise InternalConsistencyError(
                    f"J_{k} is not stable under the involution"
                )
        ideals.append(IdealSpan(k, span.dim, basis, frozenset(support)))
        spans.append(span)
    if ideals and ideals[0].dimension != a.dim:
        raise ChainNotIncreasing("J_1 is not the whole algebra")
    for upper, lower in zip(spans, spans[1:]):
        lo_dim = lower.dim
        if not (lo_dim < upper.dim):
            raise ChainNotIncreasing("heredity chain is not strictly increasing")
        for v in lower.basis():
            if not upper.contains(v):
                raise ChainNotIncreasing("chain members are not nested")
    return ideals


# ---------------------------------------------------------------------------
# codeterminant cell datum
# ---------------------------------------------------------------------------


def _reading_index(tableau: tuple[tuple[int, ...], ...]) -> Index:
    out = []
    for row in tableau:
        out.extend(row)
    return tuple(out)


def _content(tableau: tuple[tuple[int, ...], ...], n: int) -> tuple[int, ...]:
    counts = [0] * n
    for row in tableau:
        for v in row:
            counts[v - 1] += 1
    return tuple(counts)


def _tableau_label(tableau: tuple[tuple[int, ...], ...]) -> str:
    return "/".join("".join(map(str, row)) for row in tableau)


@dataclass
class CellularSchur:
    """The Schur algebra rebased to its codeterminant cell basis."""

    algebra: Algebra  # over the SchurData ring, basis = codeterminants
    datum: CellDatum
    integral_algebra: Algebra  # the same algebra over Z
    change_of_basis: Matrix  # columns: codeterminants in xi coordinates, over Z


def codeterminant_cell_datum(sd: SchurData) -> CellularSchur:
    """Assemble and validate the codeterminant cell candidate.

    Y_{S,T} = xi_{i(S), l(lam)} xi_{l(lam), i(T)} over pairs of semistandard
    lam-tableaux, lam running over the partitions; cell order is reversed
    dominance.  Hard-errors: :class:`CandidateNotBasis` when the change of
    basis is not unimodular over Z, :class:`CandidateNotCellular` when the
    axiom validator rejects, both carrying diagnostics.
    """
    if sd._cellular_cache is not None:
        return sd._cellular_cache

    integral = sd.integral_algebra
    n, d = sd.n, sd.d
    dim = integral.dim
    rep_position = {rep: k for k, rep in enumerate(sd.orbit_reps)}

    # cell order: ascending = reversed dominance extension
    cell_labels = tuple(reversed(sd.partitions))
    tableaux = {lam: tuple(semistandard_tableaux(lam, n)) for lam in cell_labels}

    y_keys: list[tuple] = []
    index = {}
    for lam in cell_labels:
        for s in tableaux[lam]:
            for t in tableaux[lam]:
                index[(lam, s, t)] = len(y_keys)
                y_keys.append((lam, s, t))
    if len(y_keys) != dim:
        raise CandidateNotBasis(
            f"{len(y_keys)} codeterminants for dimension {dim}; counts must match"
        )

    # Y in xi coordinates, through one structure-table lookup per key.
    y_vectors: list[dict[int, int]] = []
    for lam, s, t in y_keys:
        ell = _weight_index(lam + (0,) * (n - len(lam)))
        left = rep_position[_canonical_pair(_reading_index(s), ell)]
        right = rep_position[_canonical_pair(ell, _reading_index(t))]
        vec = {k: int(c) for k, c in integral.structure.get((left, right), ())}
        if not vec:
            raise CandidateNotBasis(
                f"codeterminant at ({lam}, {_tableau_label(s)}, {_tableau_label(t)}) is zero"
            )
        y_vectors.append(vec)

    # The change of basis is block diagonal over pairs of outer weights.
    xi_block: dict[tuple, list[int]] = {}
    for k, (i, j) in enumerate(sd.orbit_reps):
        xi_block.setdefault((_weight(i, n), _weight(j, n)), []).append(k)
    y_block: dict[tuple, list[int]] = {}
    for pos, (lam, s, t) in enumerate(y_keys):
        y_block.setdefault((_content(s, n), _content(t, n)), []).append(pos)

    inverse_blocks: dict[tuple, tuple[list[int], list[list[int]]]] = {}
    for key, y_positions in y_block.items():
        xi_rows = xi_block.get(key, [])
        if len(xi_rows) != len(y_positions):
            raise CandidateNotBasis(
                f"weight block {key} has {len(xi_rows)} basis rows but "
                f"{len(y_positions)} codeterminants"
            )
        for pos in y_positions:
            for k in y_vectors[pos]:
                if (_weight(sd.orbit_reps[k][0], n), _weight(sd.orbit_reps[k][1], n)) != key:
                    raise CandidateNotBasis(
                        "codeterminant support leaves its outer-weight block"
                    )
        size = len(xi_rows)
        block = [[y_vectors[pos].get(k, 0) for pos in y_positions] for k in xi_rows]
        det = _elim.bareiss_det([row[:] for row in block])
        if det not in (1, -1):
            raise CandidateNotBasis(
                f"weight block {key} has determinant {det}; change of basis "
                "is not unimodular over Z"
            )
        inv = _integer_inverse(block)
        inverse_blocks[key] = (xi_rows, inv)

    def to_y_coordinates(xi_vec: dict[int, int], key: tuple) -> dict[int, int]:
        xi_rows, inv = inverse_blocks[key]
        row_pos = {k: r for r, k in enumerate(xi_rows)}
        col = [0] * len(xi_rows)
        for k, c in xi_vec.items():
            col[row_pos[k]] = c
        out = {}
        for r in range(len(inv)):
            val = sum(inv[r][c] * col[c] for c in range(len(col)))
            if val:
                out[y_block[key][r]] = val
        return out

    # Structure constants in the codeterminant basis.
    structure = {}
    for a_pos, (lam_a, s_a, t_a) in enumerate(y_keys):
        for b_pos, (lam_b, s_b, t_b) in enumerate(y_keys):
            acc: dict[int, int] = {}
            for i, ci in y_vectors[a_pos].items():
                for j, cj in y_vectors[b_pos].items():
                    f = ci * cj
                    for k, c in integral.structure.get((i, j), ()):
                        acc[k] = acc.get(k, 0) + f * int(c)
            acc = {k: c for k, c in acc.items() if c}
            if not acc:
                continue
            key = (_content(s_a, n), _content(t_b, n))
            y_coords = to_y_coordinates(acc, key)
            if y_coords:
                structure[(a_pos, b_pos)] = tuple(sorted(y_coords.items()))

    unit_vec: dict[int, int] = {}
    for lam in sd.weights:
        k = sd.weight_idempotent_index[lam]
        unit_vec[k] = unit_vec.get(k, 0) + 1
    unit = [0] * dim
    by_key: dict[tuple, dict[int, int]] = {}
    for k, c in unit_vec.items():
        i, j = sd.orbit_reps[k]
        by_key.setdefault((_weight(i, n), _weight(j, n)), {})[k] = c
    for key, vec in by_key.items():
        for pos, c in to_y_coordinates(vec, key).items():
            unit[pos] += c

    labels = tuple(
        f"Y[{','.join(map(str, lam))}|{_tableau_label(s)}|{_tableau_label(t)}]"
        for lam, s, t in y_keys
    )
    rebased = Algebra(integers(), dim, labels, structure, tuple(unit))

    leq = frozenset(
        (a, b)
        for a in cell_labels
        for b in cell_labels
        if _dominance_geq(a, b)
    )
    involution = tuple(index[(lam, t, s)] for lam, s, t in y_keys)
    datum = CellDatum(cell_labels, leq, tableaux, index, involution)

    report = validate_cell_datum(rebased, datum)
    if not report.valid:
        raise CandidateNotCellular(
            f"codeterminant candidate for S({sd.n},{sd.d}) violates "
            f"{report.axioms_violated()}: {report.violations[:3]}",
            report=report,
        )

    algebra = rebased if sd.ring.kind == "Z" else base_change(rebased, sd.ring)
    e_matrix = Matrix(
        integers(),
        tuple(
            tuple(y_vectors[pos].get(k, 0) for pos in range(dim))
            for k in range(dim)
        ),
    )
    result = CellularSchur(
        algebra=algebra,
        datum=datum,
        integral_algebra=rebased,
        change_of_basis=e_matrix,
    )
    sd._cellular_cache = result
    return result


def _dominance_geq(a: tuple[int, ...], b: tuple[int, ...]) -> bool:
    """a <=_cell b for the Schur datum: b below-or-equal a in dominance."""
    from .combinatorics import dominance_leq

    return dominance_leq(b, a)


def _integer_inverse(block: list[list[int]]) -> list[list[int]]:
    """Exact inverse of a unimodular integer matrix, as integer rows."""
    from fractions import Fraction

    size = len(block)
    aug = [
        [Fraction(v) for v in row] + [Fraction(int(i == j)) for j in range(size)]
        for i, row in enumerate(block)
    ]
    rr, pivots = _elim.rational_rref(aug)
    if pivots[:size] != list(range(size)):
        raise CandidateNotBasis("weight block is singular")
    inv = []
    for i in range(size):
        row = rr[i][size:]
        if any(f.denominator != 1 for f in row):
            raise CandidateNotBasis("inverse of a unimodular block must be integral")
        inv.append([int(f) for f in row])
    return inv
