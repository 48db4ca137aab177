"""Cell data, their machine validation, and everything they buy.

A :class:`CellDatum` equips an algebra whose basis is a cell basis with the
combinatorial bookkeeping: the poset of cell labels, the index sets M(lambda),
the bijection (lambda, S, T) -> basis index, and the involution as an index
permutation.  From a validated datum this module derives cell modules, the
bilinear-form Gram matrices, simple modules over fields, the radical of the
algebra, and the decomposition and Cartan matrices.

Conventions.  The stored label order is a linear extension of the cell order;
"lower terms" always means strictly smaller cell labels.  The quasi-hereditary
order used by the analysis layer is the reverse of the cell order.  The
decomposition matrix satisfies D[lam][mu] != 0 only when lam <= mu in the cell
order (equivalently mu <= lam in the quasi-hereditary order), with diagonal 1.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import islice

from . import _elim
from .algebra import (
    Algebra,
    AlgebraModule,
    hom_space,
    left_multiply_many,
    nilpotency_chain,
    radical_filtration,
    subquotient_module,
)
from .errors import (
    DatumInvalid,
    InternalConsistencyError,
    WitnessDependence,
    WrongRing,
)
from .matrix import Matrix, determinant, kernel_basis, rank as matrix_rank
from .rings import RingSpec, Scalar, integers


@dataclass(eq=True)
class CellDatum:
    """Cell-basis bookkeeping for an algebra of matching dimension.

    ``labels`` lists the cell poset in a linear extension of the cell order;
    ``leq`` is the full order relation as (smaller, larger) pairs including
    the diagonal; ``tableaux`` maps each label to its ordered index set;
    ``index`` realizes the bijection (label, S, T) -> basis index; and
    ``involution`` is the index permutation that should realize S <-> T.

    The constructor checks only well-formedness (a genuine bijection, a
    permutation, a genuine partial order); the algebraic axioms are the job
    of :func:`validate_cell_datum` so that defective data can be built and
    reported on.
    """

    labels: tuple
    leq: frozenset
    tableaux: dict
    index: dict
    involution: tuple[int, ...]

    def __post_init__(self):
        dim = sum(len(self.tableaux[lam]) ** 2 for lam in self.labels)
        seen = sorted(self.index.values())
        if seen != list(range(dim)):
            raise ValueError("index map is not a bijection onto 0..dim-1")
        expected_keys = {
            (lam, s, t)
            for lam in self.labels
            for s in self.tableaux[lam]
            for t in self.tableaux[lam]
        }
        if set(self.index) != expected_keys:
            raise ValueError("index map keys do not match the tableaux sets")
        if sorted(self.involution) != list(range(dim)):
            raise ValueError("involution is not a permutation of the basis")
        labset = set(self.labels)
        if len(self.labels) != len(labset):
            raise ValueError("duplicate cell labels")
        for a, b in self.leq:
            if a not in labset or b not in labset:
                raise ValueError("leq relation mentions unknown labels")
        for a in self.labels:
            if (a, a) not in self.leq:
                raise ValueError(f"leq not reflexive at {a!r}")
        for a, b in self.leq:
            if a != b and (b, a) in self.leq:
                raise ValueError(f"leq not antisymmetric on {a!r}, {b!r}")
        for a, b in self.leq:
            for c in self.labels:
                if (b, c) in self.leq and (a, c) not in self.leq:
                    raise ValueError(f"leq not transitive via {a!r} <= {b!r} <= {c!r}")
        inverse = [None] * dim
        for key, i in self.index.items():
            inverse[i] = key
        object.__setattr__(self, "_inverse", tuple(inverse))

    @property
    def dim(self) -> int:
        return len(self._inverse)

    def triple_of(self, i: int):
        return self._inverse[i]

    def lt(self, a, b) -> bool:
        return a != b and (a, b) in self.leq

    def members(self, lam) -> tuple:
        return tuple(self.tableaux[lam])

    def swap_partner(self, i: int) -> int:
        lam, s, t = self._inverse[i]
        return self.index[(lam, t, s)]

    def __hash__(self):
        return id(self)


@dataclass(frozen=True)
class CellModule:
    """A cell module: the label plus its concrete action matrices."""

    label: object
    module: AlgebraModule


@dataclass(frozen=True)
class GramData:
    """Gram matrix of the cell bilinear form at one label."""

    label: object
    gram: Matrix


@dataclass(frozen=True)
class CellValidationReport:
    violations: tuple[tuple[str, str], ...]

    @property
    def valid(self) -> bool:
        return not self.violations

    def axioms_violated(self) -> tuple[str, ...]:
        return tuple(sorted({axiom for axiom, _ in self.violations}))


# ---------------------------------------------------------------------------
# validation
# ---------------------------------------------------------------------------


def validate_cell_datum(a: Algebra, d: CellDatum, max_reports: int = 50) -> CellValidationReport:
    """Check the cell-basis axioms against the structure constants.

    C1: the counting identity (sum of squares of index-set sizes equals the
    algebra dimension).  C2: the index swap squares to the identity and
    extends to an algebra anti-automorphism.  C3: left multiplication is
    triangular with coefficients independent of the right tableau.  Every
    violation is reported as data, tagged with the axiom it breaks.
    """
    out: list[tuple[str, str]] = []

    if d.dim != a.dim:
        out.append((
            "C1",
            f"sum of |M(lambda)|^2 is {d.dim} but the algebra has dimension {a.dim}",
        ))
        return CellValidationReport(tuple(out))

    iota = d.involution
    for i in range(a.dim):
        if iota[iota[i]] != i:
            out.append(("C2", f"involution does not square to the identity at index {i}"))
            break
    for i in range(a.dim):
        if iota[i] != d.swap_partner(i):
            lam, s, t = d.triple_of(i)
            out.append((
                "C2",
                f"involution sends index {i} = ({lam!r}, {s!r}, {t!r}) to "
                f"{iota[i]} instead of the (S, T) swap {d.swap_partner(i)}",
            ))
            if len(out) >= max_reports:
                return CellValidationReport(tuple(out))

    # C2, anti-automorphism: iota(b_i b_j) == iota(b_j) iota(b_i) for all pairs.
    struct = a.structure
    zero = a.ring.zero()
    for i in range(a.dim):
        for j in range(a.dim):
            lhs = {}
            for k, c in struct.get((i, j), ()):
                lhs[iota[k]] = c
            rhs = dict(struct.get((iota[j], iota[i]), ()))
            if lhs != rhs:
                out.append((
                    "C2",
                    f"involution fails to reverse the product at pair ({i}, {j})",
                ))
                if len(out) >= max_reports:
                    return CellValidationReport(tuple(out))

    # C3: for each a and each (lambda, S), the expansions of a * C(S, T) agree
    # across T after discarding strictly lower terms.
    for ai in range(a.dim):
        for lam in d.labels:
            members = d.members(lam)
            for s in members:
                reference = None
                for t in members:
                    terms = struct.get((ai, d.index[(lam, s, t)]), ())
                    r_map = {}
                    ok = True
                    for k, c in terms:
                        mu, u, v = d.triple_of(k)
                        if mu == lam:
                            if v != t:
                                out.append((
                                    "C3",
                                    f"b_{ai} * C[{lam!r}; {s!r}, {t!r}] hits "
                                    f"C[{lam!r}; {u!r}, {v!r}] with a foreign right index",
                                ))
                                ok = False
                            else:
                                r_map[u] = c
                        elif not d.lt(mu, lam):
                            out.append((
                                "C3",
                                f"b_{ai} * C[{lam!r}; {s!r}, {t!r}] has a term at "
                                f"label {mu!r} which is not strictly below {lam!r}",
                            ))
                            ok = False
                        if len(out) >= max_reports:
                            return CellValidationReport(tuple(out))
                    if not ok:
                        continue
                    if reference is None:
                        reference = r_map
                    elif reference != r_map:
                        out.append((
                            "C3",
                            f"coefficients r_a(U, S) for b_{ai}, lambda={lam!r}, "
                            f"S={s!r} depend on the right tableau",
                        ))
                        if len(out) >= max_reports:
                            return CellValidationReport(tuple(out))
    return CellValidationReport(tuple(out))


# ---------------------------------------------------------------------------
# cell modules, Gram matrices
# ---------------------------------------------------------------------------


def cell_module(a: Algebra, d: CellDatum, lam) -> CellModule:
    """The cell module at ``lam``: actions on span{C(S, T0)} mod lower terms."""
    members = d.members(lam)
    t0 = members[0]
    pos = {s: r for r, s in enumerate(members)}
    r = len(members)
    ring = a.ring
    zero = ring.zero()
    mats = []
    for ai in range(a.dim):
        rows = [[zero] * r for _ in range(r)]
        for c, s in enumerate(members):
            for k, coeff in a.structure.get((ai, d.index[(lam, s, t0)]), ()):
                mu, u, v = d.triple_of(k)
                if mu == lam:
                    if v != t0:
                        raise DatumInvalid(
                            f"extracting theta({lam!r}): foreign right index at "
                            f"b_{ai} * C[{lam!r}; {s!r}, {t0!r}]"
                        )
                    rows[pos[u]][c] = ring.add(rows[pos[u]][c], coeff)
                elif not d.lt(mu, lam):
                    raise DatumInvalid(
                        f"extracting theta({lam!r}): term at non-lower label {mu!r}"
                    )
        mats.append(Matrix(ring, tuple(tuple(row) for row in rows)))
    return CellModule(lam, AlgebraModule(a, r, tuple(mats)))


def right_cell_module(a: Algebra, d: CellDatum, lam) -> AlgebraModule:
    """The right cell module, presented over the opposite algebra.

    Twisting the left cell module through the involution: the opposite
    algebra's basis element i acts by the left action of iota(i).
    """
    left = cell_module(a, d, lam).module
    iota = d.involution
    mats = tuple(left.action[iota[i]] for i in range(a.dim))
    return AlgebraModule(a.opposite(), left.rank, mats)


def _gram_rows_for_witness(a: Algebra, d: CellDatum, lam, u0, v0):
    members = d.members(lam)
    ring = a.ring
    zero = ring.zero()
    target = d.index[(lam, u0, v0)]
    rows = []
    for s in members:
        left_idx = d.index[(lam, u0, s)]
        row = []
        for t in members:
            right_idx = d.index[(lam, t, v0)]
            val = zero
            for k, c in a.structure.get((left_idx, right_idx), ()):
                mu, uu, vv = d.triple_of(k)
                if mu == lam:
                    if k != target:
                        raise DatumInvalid(
                            f"gram({lam!r}): product C[{u0!r}, {s!r}] * C[{t!r}, {v0!r}] "
                            f"has a top-layer term at ({uu!r}, {vv!r})"
                        )
                    val = c
                elif not d.lt(mu, lam):
                    raise DatumInvalid(
                        f"gram({lam!r}): product has a term at non-lower label {mu!r}"
                    )
            row.append(val)
        rows.append(tuple(row))
    return tuple(rows)


def gram_matrix(a: Algebra, d: CellDatum, lam, strict: bool = False) -> GramData:
    """Gram matrix of the bilinear form on the cell module at ``lam``.

    Entries are read off the product C(U0, S) * C(T, V0) at the witness
    (U0, V0) = (first, first).  A couple of extra witnesses are spot-checked
    by default; ``strict`` recomputes with every witness pair and demands
    bit-identical results, raising :class:`WitnessDependence` otherwise.
    """
    members = d.members(lam)
    u0 = members[0]
    base = _gram_rows_for_witness(a, d, lam, u0, u0)
    if strict:
        witnesses = [(u, v) for u in members for v in members]
    else:
        witnesses = list(islice(
            ((u, v) for u in members for v in members if (u, v) != (u0, u0)), 2
        ))
    for u, v in witnesses:
        other = _gram_rows_for_witness(a, d, lam, u, v)
        if other != base:
            raise WitnessDependence(
                f"gram({lam!r}) depends on the witness pair ({u!r}, {v!r}); "
                "the datum is not cellular"
            )
    g = Matrix(a.ring, base)
    if not g.is_symmetric():
        raise DatumInvalid(
            f"gram({lam!r}) is not symmetric; reporting as a datum defect"
        )
    return GramData(lam, g)


def gram_rank(a: Algebra, d: CellDatum, lam, field: RingSpec | None = None) -> int:
    """Rank of the Gram matrix over a field: the dimension of L(lam) (0 = none)."""
    from .algebra import base_change

    work = a
    if field is not None and field != a.ring:
        work = base_change(a, field)
    if not work.ring.has_field_arithmetic():
        raise WrongRing(f"gram_rank needs a field, got {work.ring}")
    return matrix_rank(gram_matrix(work, d, lam).gram)


# ---------------------------------------------------------------------------
# simple modules, radical, decomposition data
# ---------------------------------------------------------------------------


def simple_modules(a: Algebra, d: CellDatum, field: RingSpec | None = None) -> list[tuple[object, AlgebraModule]]:
    """The simple modules L(mu) = theta(mu)/rad(phi_mu) for mu with G_mu != 0.

    The radical of the form is the kernel of the Gram matrix; the kernel is
    checked to be stable under the action before quotienting.
    """
    from .algebra import base_change

    work = a
    if field is not None and field != a.ring:
        work = base_change(a, field)
    if not work.ring.has_field_arithmetic():
        raise WrongRing(f"simple_modules needs a field, got {work.ring}")
    ring = work.ring
    out = []
    for mu in d.labels:
        gram = gram_matrix(work, d, mu).gram
        if gram.is_zero():
            continue
        theta = cell_module(work, d, mu).module
        ker = kernel_basis(gram)
        ker_cols = [list(ker.column_values(j)) for j in range(ker.n_cols)]
        if ker_cols:
            span = _elim.span_builder(ring, theta.rank)
            for v in ker_cols:
                span.add(v)
            for i in range(work.dim):
                for v in ker_cols:
                    if not span.contains(theta.act_basis(i, v)):
                        raise InternalConsistencyError(
                            f"kernel of gram({mu!r}) is not a submodule; "
                            "the datum or the extraction is broken"
                        )
        full = [list(r) for r in Matrix.identity(ring, theta.rank).rows]
        simple = subquotient_module(theta, full, ker_cols)
        out.append((mu, simple))
    return out


def radical_of_algebra(a: Algebra, d: CellDatum, field: RingSpec | None = None) -> list[list]:
    """Basis of rad A = {x : x acts as zero on every simple module}.

    Verified nilpotent by powering the span until it reaches zero; failure
    to shrink raises :class:`NotNilpotent`, signalling an internal
    inconsistency rather than bad input.
    """
    from .algebra import base_change

    work = a
    if field is not None and field != a.ring:
        work = base_change(a, field)
    if not work.ring.has_field_arithmetic():
        raise WrongRing(f"radical_of_algebra needs a field, got {work.ring}")
    simples = simple_modules(work, d)
    ring = work.ring
    rows = []
    for _mu, simple in simples:
        for r in range(simple.rank):
            for c in range(simple.rank):
                rows.append(tuple(
                    simple.action[i].rows[r][c] for i in range(work.dim)
                ))
    if not rows:
        rows = [tuple(ring.zero() for _ in range(work.dim))]
    ker = kernel_basis(Matrix(ring, tuple(rows)))
    rad = [list(ker.column_values(j)) for j in range(ker.n_cols)]
    nilpotency_chain(work, rad)
    return rad


@dataclass(frozen=True)
class DecompositionData:
    """Decomposition matrix with its row and column labels (cell order)."""

    row_labels: tuple
    col_labels: tuple
    matrix: Matrix  # over Z: multiplicities [theta(lam) : L(mu)]

    def entry(self, lam, mu) -> int:
        i = self.row_labels.index(lam)
        j = self.col_labels.index(mu)
        return int(self.matrix.rows[i][j])


@dataclass(frozen=True)
class CartanData:
    labels: tuple
    matrix: Matrix  # over Z
    det: Scalar


def decomposition_matrix(a: Algebra, d: CellDatum, field: RingSpec | None = None) -> DecompositionData:
    """D[lam][mu] = [theta(lam) : L(mu)], computed layer by layer.

    Each cell module is filtered by the radical; every semisimple layer is
    decomposed by Hom-space dimensions, which count multiplicities because
    End(L) is first verified to be the ground field.  The result is checked
    on the spot for unit diagonal, cell-order triangularity and the
    composition-length row sums.
    """
    from .algebra import base_change

    work = a
    if field is not None and field != a.ring:
        work = base_change(a, field)
    if not work.ring.has_field_arithmetic():
        raise WrongRing(f"decomposition_matrix needs a field, got {work.ring}")
    simples = simple_modules(work, d)
    mus = tuple(mu for mu, _ in simples)
    for mu, simple in simples:
        if len(hom_space(simple, simple)) != 1:
            raise InternalConsistencyError(
                f"End(L({mu!r})) is not one-dimensional; multiplicity counts "
                "would be wrong, aborting"
            )
    rad = radical_of_algebra(work, d)
    rows = []
    for lam in d.labels:
        theta = cell_module(work, d, lam).module
        layers = radical_filtration(theta, rad) if theta.rank else []
        counts = [0] * len(mus)
        for layer in layers:
            if layer.rank == 0:
                continue
            for j, (_mu, simple) in enumerate(simples):
                counts[j] += len(hom_space(simple, layer))
        rows.append(tuple(counts))
    dmat = Matrix(integers(), tuple(rows))

    dims = {mu: simple.rank for mu, simple in simples}
    for i, lam in enumerate(d.labels):
        expected = len(d.members(lam))
        total = sum(int(c) * dims[mu] for c, mu in zip(dmat.rows[i], mus))
        if total != expected:
            raise InternalConsistencyError(
                f"composition lengths of theta({lam!r}) sum to {total}, "
                f"expected |M({lam!r})| = {expected}"
            )
        for j, mu in enumerate(mus):
            c = int(dmat.rows[i][j])
            if mu == lam:
                if c != 1:
                    raise InternalConsistencyError(
                        f"[theta({lam!r}) : L({lam!r})] = {c}, expected 1"
                    )
            elif c != 0 and not d.lt(lam, mu):
                raise InternalConsistencyError(
                    f"decomposition matrix breaks triangularity at "
                    f"({lam!r}, {mu!r})"
                )
    return DecompositionData(tuple(d.labels), mus, dmat)


def cartan_matrix(a: Algebra, d: CellDatum, field: RingSpec | None = None) -> CartanData:
    """Cartan matrix C = D^T D and its exact determinant."""
    dec = decomposition_matrix(a, d, field)
    c = dec.matrix.transpose() @ dec.matrix
    return CartanData(dec.col_labels, c, determinant(c))


# ---------------------------------------------------------------------------
# regular-module composition multiplicities (consistency cross-check)
# ---------------------------------------------------------------------------


def block_selector_elements(a: Algebra, simples) -> dict:
    """For each simple L, an element acting as the identity on L and as zero
    on every other simple (a lift of the central idempotent of A/rad A)."""
    ring = a.ring
    zero, one = ring.zero(), ring.one()
    rows = []
    for _mu, s in simples:
        for r in range(s.rank):
            for c in range(s.rank):
                rows.append([s.action[i].rows[r][c] for i in range(a.dim)])
    rhs_cols = []
    offset = 0
    total = sum(s.rank**2 for _mu, s in simples)
    for _mu, s in simples:
        col = [zero] * total
        for r in range(s.rank):
            col[offset + r * s.rank + r] = one
        rhs_cols.append(col)
        offset += s.rank**2
    sols = _elim.solve_many(ring, rows, rhs_cols)
    out = {}
    for (mu, _s), sol in zip(simples, sols):
        if sol is None:
            raise InternalConsistencyError(
                f"no block selector for L({mu!r}); A -> A/rad is not surjective?!"
            )
        out[mu] = sol
    return out


def regular_composition_multiplicities(a: Algebra, d: CellDatum, field: RingSpec | None = None) -> dict:
    """[A : L(mu)] for the left regular module, via its radical series.

    Works on subspace bases instead of materialized quotient modules so the
    desk-scale algebras stay cheap: the multiplicity of L(mu) in a semisimple
    subquotient U/U' is rank(e_mu action on U/U') / dim L(mu), where e_mu is
    the block selector of L(mu).
    """
    from .algebra import base_change

    work = a
    if field is not None and field != a.ring:
        work = base_change(a, field)
    ring = work.ring
    simples = simple_modules(work, d)
    rad = radical_of_algebra(work, d)
    selectors = block_selector_elements(work, simples)
    dims = {mu: s.rank for mu, s in simples}

    chain = [[list(r) for r in Matrix.identity(ring, work.dim).rows]]
    chain.extend(nilpotency_chain(work, rad) if rad else [[]])

    counts = {mu: 0 for mu, _s in simples}
    for upper, lower in zip(chain, chain[1:]):
        lower_span = _elim.span_builder(ring, work.dim)
        for v in lower:
            lower_span.add(v)
        base_dim = lower_span.dim
        for mu, _s in simples:
            span = _elim.span_builder(ring, work.dim)
            for v in lower:
                span.add(v)
            for w in left_multiply_many(work, selectors[mu], upper):
                span.add(w)
            counts[mu] += (span.dim - base_dim) // dims[mu]
            if (span.dim - base_dim) % dims[mu]:
                raise InternalConsistencyError(
                    f"block rank of L({mu!r}) is not a multiple of its dimension"
                )
    return counts
