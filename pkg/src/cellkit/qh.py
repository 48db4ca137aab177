"""Quasi-heredity decisions and homological dimension formulas.

Over a field, a cellular algebra is split quasi-hereditary exactly when it
has finite global dimension, and that is decided by several equivalent
criteria: every Gram matrix is nonzero, the number of simple modules equals
the number of cell labels, the Cartan determinant is 1, and every cell layer
squares to a nonzero ideal.  ``qh_check_field`` evaluates the first three and
*requires* them to agree (disagreement is an implementation bug, not a
mathematical outcome); ``heredity_layer_check`` runs the fourth and
cross-checks it against the Gram criterion.

Over Z the decision reduces to residue fields: a prime is bad exactly when
some Gram matrix vanishes identically mod p, which is read off integer
content gcds and then re-verified fieldwise.  Over Z/m the verdict is the
conjunction over the prime divisors of m.

Dimension formulas follow the closed forms for Schur algebras: over a field
of characteristic p the global dimension is 2d - 2*alpha_p(d) (alpha_0 = d),
over Z it is 1 + 2d - 2*min_p alpha_p(d), and the finitistic dimension of the
Schur algebra over Z/m is 2d - min over prime divisors of 2*alpha_p(d).

Order convention: reports state results against the stored cell order; the
quasi-hereditary order is its reverse.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .algebra import Algebra, base_change
from .cellular import (
    CellDatum,
    cartan_matrix,
    gram_matrix,
    simple_modules,
)
from .errors import (
    CriteriaDisagree,
    EmptyInput,
    HypothesisViolated,
    InternalConsistencyError,
    WrongRing,
)
from .matrix import content_gcd, rank as matrix_rank
from .rings import (
    RingSpec,
    Scalar,
    integers,
    is_squarefree,
    prime_factors,
    prime_field,
    rationals,
)
from .families.combinatorics import alpha_p, min_alpha_over_primes, partitions_at_most

ORDER_NOTE = "orders: cell order as stored; quasi-hereditary order is its reverse"


@dataclass(frozen=True)
class QHReport:
    """Verdict and per-criterion evidence for one (algebra, ring) pair."""

    ring: RingSpec
    verdict: bool
    chain_length: int
    per_lambda_gram_nonzero: dict
    n_simples: int | None = None
    cartan_det: Scalar | None = None
    bad_primes: frozenset[int] = frozenset()
    fatal_gram_zero: bool = False
    notes: tuple[str, ...] = ()
    field_reports: dict = field(default_factory=dict)


@dataclass(frozen=True)
class DimensionReport:
    """Global/finitistic dimension values and bounds for one algebra."""

    gldim_exact: int | None
    gldim_upper_bound: float
    findim_lower: int
    findim_upper: float
    per_residue_field: dict
    notes: tuple[str, ...] = ()

    def __post_init__(self):
        if self.gldim_exact is not None:
            if not (self.findim_lower <= self.gldim_exact <= self.gldim_upper_bound):
                raise InternalConsistencyError(
                    "dimension report violates lower <= exact <= upper"
                )


def _as_field(a: Algebra, d: CellDatum, fld: RingSpec | None) -> tuple[Algebra, RingSpec]:
    work = a
    if fld is not None and fld != a.ring:
        work = base_change(a, fld)
    if not work.ring.has_field_arithmetic():
        raise WrongRing(f"a field ring is required, got {work.ring}")
    return work, work.ring


def qh_check_field(a: Algebra, d: CellDatum, fld: RingSpec | None = None) -> QHReport:
    """Decide quasi-heredity over a field by three routes that must agree.

    (a) every Gram matrix has positive rank; (b) the number of simple modules
    equals the number of cell labels; (c) the Cartan determinant is 1.
    A disagreement raises :class:`CriteriaDisagree` (exit code 3 territory).
    """
    work, fld = _as_field(a, d, fld)
    gram_nonzero = {}
    for lam in d.labels:
        gram_nonzero[lam] = matrix_rank(gram_matrix(work, d, lam).gram) > 0
    crit_a = all(gram_nonzero.values())

    simples = simple_modules(work, d)
    crit_b = len(simples) == len(d.labels)

    cartan = cartan_matrix(work, d)
    det = cartan.det
    crit_c = det.value == 1

    if not (crit_a == crit_b == crit_c):
        raise CriteriaDisagree(
            f"equivalent criteria disagree over {fld}: gram-nonzero={crit_a}, "
            f"simple-count={crit_b}, cartan-det-one={crit_c} (det={det})"
        )
    return QHReport(
        ring=fld,
        verdict=crit_a,
        chain_length=len(d.labels),
        per_lambda_gram_nonzero=gram_nonzero,
        n_simples=len(simples),
        cartan_det=det,
        notes=(ORDER_NOTE,),
    )


def heredity_layer_check(a: Algebra, d: CellDatum, fld: RingSpec | None = None) -> dict:
    """Per-label verdicts: does the cell layer square to nonzero in A/A(<lam)?

    Descends through the cell chain; each result is cross-checked against the
    Gram-rank criterion and a mismatch raises :class:`CriteriaDisagree`.
    """
    work, fld = _as_field(a, d, fld)
    zero = work.ring.zero()
    results = {}
    for lam in reversed(d.labels):
        members = d.members(lam)
        layer = [d.index[(lam, s, t)] for s in members for t in members]
        squared_nonzero = False
        for i in layer:
            for j in layer:
                for k, c in work.structure.get((i, j), ()):
                    mu = d.triple_of(k)[0]
                    if not d.lt(mu, lam) and c != zero:
                        squared_nonzero = True
                        break
                if squared_nonzero:
                    break
            if squared_nonzero:
                break
        results[lam] = squared_nonzero
        gram_nonzero = not gram_matrix(work, d, lam).gram.is_zero()
        if squared_nonzero != gram_nonzero:
            raise CriteriaDisagree(
                f"layer-squared and Gram criteria disagree at {lam!r} over {fld}: "
                f"J^2 nonzero = {squared_nonzero}, gram nonzero = {gram_nonzero}"
            )
    return {lam: results[lam] for lam in d.labels}


def bad_primes_over_Z(a: Algebra, d: CellDatum) -> tuple[frozenset[int], bool]:
    """Primes p with some Gram matrix identically zero mod p, plus a fatal
    flag set when a Gram matrix is zero over Z itself (no residue field works).

    Every reported prime is re-verified by running the fieldwise check over
    F_p and demanding failure.
    """
    if a.ring.kind != "Z":
        raise WrongRing(f"bad_primes_over_Z needs ring Z, got {a.ring}")
    fatal = False
    primes: set[int] = set()
    for lam in d.labels:
        g = gram_matrix(a, d, lam).gram
        if g.is_zero():
            fatal = True
            continue
        content = content_gcd(g)
        if content > 1:
            primes.update(prime_factors(content))
    for p in sorted(primes):
        report = qh_check_field(a, d, prime_field(p))
        if report.verdict:
            raise InternalConsistencyError(
                f"prime {p} was reported bad but the fieldwise check passes over F_{p}"
            )
    return frozenset(primes), fatal


def qh_check_ring(a: Algebra, d: CellDatum, ring: RingSpec | None = None) -> QHReport:
    """Dispatch the quasi-heredity decision by coefficient ring.

    Fields go through the three-way fieldwise check; Z through bad primes;
    Z/m through the fieldwise check at every prime divisor of m.
    """
    ring = ring or a.ring
    if ring != a.ring:
        a = base_change(a, ring)
    if ring.kind in ("Q", "Fp"):
        return qh_check_field(a, d)
    if ring.kind == "Z":
        primes, fatal = bad_primes_over_Z(a, d)
        gram_nonzero = {
            lam: not gram_matrix(a, d, lam).gram.is_zero() for lam in d.labels
        }
        field_reports = {
            f"F{p}": qh_check_field(a, d, prime_field(p)) for p in sorted(primes)
        }
        notes = [ORDER_NOTE]
        if fatal:
            notes.append(
                "some Gram matrix vanishes over Z itself; no residue field works"
            )
        return QHReport(
            ring=ring,
            verdict=(not fatal) and not primes,
            chain_length=len(d.labels),
            per_lambda_gram_nonzero=gram_nonzero,
            bad_primes=primes,
            fatal_gram_zero=fatal,
            notes=tuple(notes),
            field_reports=field_reports,
        )
    if ring.kind == "Zm":
        m = ring.modulus
        field_reports = {}
        for p in prime_factors(m):
            fp = prime_field(p)
            field_reports[f"F{p}"] = qh_check_field(base_change(a, fp), d)
        verdict = all(r.verdict for r in field_reports.values())
        notes = [ORDER_NOTE]
        if not is_squarefree(m):
            notes.append(
                f"Z/{m} is not regular (square factor); the quasi-hereditary "
                "property is still characterized residue-fieldwise"
            )
        return QHReport(
            ring=ring,
            verdict=verdict,
            chain_length=len(d.labels),
            per_lambda_gram_nonzero={
                lam: all(
                    r.per_lambda_gram_nonzero[lam] for r in field_reports.values()
                )
                for lam in d.labels
            },
            notes=tuple(notes),
            field_reports=field_reports,
        )
    raise WrongRing(f"unsupported ring {ring}")


# ---------------------------------------------------------------------------
# dimension formulas
# ---------------------------------------------------------------------------


def ring_global_dimension(ring: RingSpec) -> float:
    """0 for fields, 1 for Z, 0 for squarefree Z/m (a product of fields),
    infinity for Z/m with a square factor."""
    if ring.kind in ("Q", "Fp"):
        return 0
    if ring.kind == "Z":
        return 1
    if ring.kind == "Zm":
        return 0 if is_squarefree(ring.modulus) else math.inf
    raise WrongRing(f"unsupported ring {ring}")


def ring_finitistic_dimension(ring: RingSpec) -> int:
    """0 for fields and for every Z/m (self-injective), 1 for Z."""
    if ring.kind in ("Q", "Fp", "Zm"):
        return 0
    if ring.kind == "Z":
        return 1
    raise WrongRing(f"unsupported ring {ring}")


def gldim_bound(chain_length: int, ring: RingSpec) -> float:
    """The generic bound 2(t-1) + gldim R for a heredity chain of length t."""
    if chain_length < 1:
        raise ValueError(f"chain length must be >= 1, got {chain_length}")
    return 2 * (chain_length - 1) + ring_global_dimension(ring)


def gldim_schur(ring: RingSpec, n: int, d: int) -> DimensionReport:
    """Exact global dimension of the Schur algebra S(n, d), for n >= d.

    Field of characteristic p: 2d - 2*alpha_p(d) (characteristic 0 gives 0);
    Z: 1 + 2d - 2*min over all primes of alpha_p(d); squarefree Z/m:
    2d - min over prime divisors (the ring is a product of fields).  A ring
    with a square factor is not regular: :class:`HypothesisViolated`, use
    :func:`findim_schur_mod_m`.
    """
    t = len(partitions_at_most(d, n))
    if n < d:
        err = HypothesisViolated(
            f"gldim_schur needs n >= d, got n={n} < d={d}; only the generic "
            f"bound 2(t-1)+gldim R = {gldim_bound(t, ring)} is available"
        )
        err.fallback = DimensionReport(
            gldim_exact=None,
            gldim_upper_bound=gldim_bound(t, ring),
            findim_lower=0,
            findim_upper=gldim_bound(t, ring),
            per_residue_field={},
            notes=("hypothesis n >= d violated; reporting the generic bound only",),
        )
        raise err
    bound = gldim_bound(t, ring)
    if ring.kind == "Q":
        per = {0: 2 * d - 2 * alpha_p(d, 0)}
        exact = per[0]
    elif ring.kind == "Fp":
        p = ring.modulus
        per = {p: 2 * d - 2 * alpha_p(d, p)}
        exact = per[p]
    elif ring.kind == "Z":
        per = {p: 2 * d - 2 * alpha_p(d, p) for p in prime_factors_up_to(d)}
        sup = 2 * d - 2 * min_alpha_over_primes(d)
        exact = 1 + sup
        return DimensionReport(
            gldim_exact=exact,
            gldim_upper_bound=bound,
            findim_lower=sup,
            findim_upper=1 + sup,
            per_residue_field=per,
            notes=(
                "residue fields are F_p for all primes p; alpha_p(d) = d for "
                "every p > d, where the fieldwise global dimension is 0",
            ),
        )
    elif ring.kind == "Zm":
        m = ring.modulus
        if not is_squarefree(m):
            err = HypothesisViolated(
                f"Z/{m} has a square factor, hence infinite global dimension; "
                "use findim_schur_mod_m for the finitistic dimension"
            )
            raise err
        per = {p: 2 * d - 2 * alpha_p(d, p) for p in prime_factors(m)}
        exact = max(per.values())
    else:
        raise WrongRing(f"unsupported ring {ring}")
    # Over a field (or a product of fields) finite gldim equals findim.
    return DimensionReport(
        gldim_exact=exact,
        gldim_upper_bound=bound,
        findim_lower=exact,
        findim_upper=exact,
        per_residue_field=per,
    )


def prime_factors_up_to(d: int) -> list[int]:
    from .rings import is_prime

    return [p for p in range(2, d + 1) if is_prime(p)]


def findim_schur_mod_m(n: int, d: int, m: int) -> int:
    """Finitistic dimension of the Schur algebra over Z/m: the best residue
    field wins, 2d - min over prime divisors p of m of 2*alpha_p(d)."""
    if n < d:
        raise HypothesisViolated(f"findim_schur_mod_m needs n >= d, got n={n} < d={d}")
    if m < 2:
        raise HypothesisViolated(f"modulus must be >= 2, got {m}")
    return 2 * d - 2 * min_alpha_over_primes(d, prime_factors(m))


def findim_bounds(per_field_gldims, ring: RingSpec) -> tuple[int, float]:
    """(lower, upper) bounds for findim A from per-residue-field global
    dimensions: sup <= findim A <= findim R + sup."""
    values = list(
        per_field_gldims.values() if isinstance(per_field_gldims, dict) else per_field_gldims
    )
    if not values:
        raise EmptyInput("findim_bounds needs at least one residue-field value")
    lower = max(values)
    return lower, lower + ring_finitistic_dimension(ring)
