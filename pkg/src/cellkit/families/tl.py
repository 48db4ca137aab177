"""Temperley-Lieb algebras on the diagram basis, with their cell datum.

A diagram on n strands is a crossingless perfect matching of 2n boundary
points: 0..n-1 along the bottom (left to right) and n..2n-1 along the top
(left to right).  The product x * y stacks x above y (x's bottom edge glued
to y's top edge) and multiplies by delta once per closed loop.

The cell structure is the classical one: a diagram with t through-strands is
the gluing of a top half S and a bottom half T, the cell label is t, and the
cell order is the usual order on through-strand counts (composition can only
lower them, so fewer through-strands means lower in the chain).
"""

from __future__ import annotations

from dataclasses import dataclass

from ..algebra import Algebra
from ..cellular import CellDatum, validate_cell_datum
from ..errors import InternalConsistencyError
from ..rings import RingSpec, Scalar
from .combinatorics import catalan

HalfDiagram = tuple[tuple[int, int], ...]  # sorted arcs; unmatched points are through


def _circle_position(point: int, n: int) -> int:
    """Order around the rectangle boundary: bottom left-to-right, then top
    right-to-left, so crossingless means balanced brackets."""
    return point if point < n else 3 * n - 1 - point


def noncrossing_matchings(n_points: int) -> list[tuple[int, ...]]:
    """All crossingless perfect matchings of n_points points on a line."""
    if n_points % 2:
        return []
    out: list[tuple[int, ...]] = []
    match = [-1] * n_points

    def fill(segments: list[list[int]]):
        segments = [s for s in segments if s]
        if not segments:
            out.append(tuple(match))
            return
        seg, rest = segments[0], segments[1:]
        a = seg[0]
        # matching a inside its segment splits it into independent halves
        for idx in range(1, len(seg), 2):
            b = seg[idx]
            match[a], match[b] = b, a
            fill([seg[1:idx], seg[idx + 1:]] + rest)

    fill([list(range(n_points))])
    return out


def tl_diagrams(n: int) -> list[tuple[int, ...]]:
    """All TL diagrams on n strands as involution tuples, deterministic order."""
    diagrams = []
    for circ in noncrossing_matchings(2 * n):
        match = [-1] * (2 * n)
        for q in range(2 * n):
            point = q if q < n else 3 * n - 1 - q
            partner_q = circ[q]
            partner = partner_q if partner_q < n else 3 * n - 1 - partner_q
            match[point] = partner
        diagrams.append(tuple(match))
    return sorted(diagrams)


def identity_diagram(n: int) -> tuple[int, ...]:
    return tuple((i + n) % (2 * n) for i in range(2 * n))


def compose_diagrams(x: tuple[int, ...], y: tuple[int, ...], n: int) -> tuple[tuple[int, ...], int]:
    """Stack x above y; returns (resulting diagram, number of closed loops).

    The interface identifies x's bottom point i with y's top point n + i.
    The result keeps y's bottom boundary and x's top boundary; loops are the
    interface cycles no boundary strand passes through.
    """
    result = [-1] * (2 * n)
    visited = [False] * n  # interface nodes, in x-bottom coordinates

    for start in range(2 * n):
        if result[start] != -1:
            continue
        side, v = ("x", start) if start >= n else ("y", start)
        while True:
            if side == "y":
                w = y[v]
                if w < n:
                    end = w  # bottom boundary of the result
                    break
                visited[w - n] = True
                side, v = "x", w - n
            else:
                w = x[v]
                if w >= n:
                    end = w  # top boundary of the result
                    break
                visited[w] = True
                side, v = "y", n + w
        result[start], result[end] = end, start

    loops = 0
    for i in range(n):
        if visited[i]:
            continue
        loops += 1
        v = i
        while not visited[v]:
            visited[v] = True
            w = x[v]  # x-bottom to x-bottom arc inside the loop
            visited[w] = True
            v = y[n + w] - n  # back through y's top-to-top arc
    return tuple(result), loops


def through_count(diagram: tuple[int, ...], n: int) -> int:
    return sum(1 for i in range(n) if diagram[i] >= n)


def top_half(diagram: tuple[int, ...], n: int) -> HalfDiagram:
    arcs = sorted(
        (diagram[p] - n, p - n)
        for p in range(n, 2 * n)
        if diagram[p] >= n and diagram[p] < p
    )
    return tuple((min(a, b), max(a, b)) for a, b in arcs)


def bottom_half(diagram: tuple[int, ...], n: int) -> HalfDiagram:
    arcs = sorted(
        (diagram[p], p)
        for p in range(n)
        if diagram[p] < n and diagram[p] < p
    )
    return tuple(arcs)


def glue_halves(top: HalfDiagram, bottom: HalfDiagram, n: int) -> tuple[int, ...]:
    """The diagram with top half ``top`` and bottom half ``bottom``."""
    match = [-1] * (2 * n)
    used_top = set()
    used_bottom = set()
    for a, b in top:
        match[n + a], match[n + b] = n + b, n + a
        used_top.update((a, b))
    for a, b in bottom:
        match[a], match[b] = b, a
        used_bottom.update((a, b))
    through_top = [p for p in range(n) if p not in used_top]
    through_bottom = [p for p in range(n) if p not in used_bottom]
    if len(through_top) != len(through_bottom):
        raise ValueError("halves have different through-strand counts")
    for b, t in zip(through_bottom, through_top):
        match[b], match[n + t] = n + t, b
    return tuple(match)


def flip_diagram(diagram: tuple[int, ...], n: int) -> tuple[int, ...]:
    """Vertical mirror: swaps the top and bottom boundary."""
    def mirror(p):
        return p + n if p < n else p - n

    out = [-1] * (2 * n)
    for p in range(2 * n):
        out[mirror(p)] = mirror(diagram[p])
    return tuple(out)


@dataclass
class TLData:
    """A Temperley-Lieb algebra with its diagram basis and cell datum."""

    n: int
    delta: Scalar
    diagrams: tuple[tuple[int, ...], ...]
    algebra: Algebra
    datum: CellDatum


def _diagram_label(diagram: tuple[int, ...], n: int) -> str:
    pairs = sorted((min(p, diagram[p]), max(p, diagram[p])) for p in range(2 * n))
    seen = []
    for pair in pairs:
        if pair not in seen:
            seen.append(pair)
    return "d" + "".join(f"({a},{b})" for a, b in seen)


def half_label(half: HalfDiagram) -> str:
    return "h" + ("".join(f"({a},{b})" for a, b in half) or "()")


def tl_algebra(ring: RingSpec, n: int, delta, validate: bool = True) -> TLData:
    """Build TL_n(delta) over ``ring`` together with its validated cell datum."""
    if n < 1:
        raise ValueError(f"tl_algebra needs n >= 1, got {n}")
    delta_s = delta if isinstance(delta, Scalar) else ring.scalar(delta)
    if delta_s.ring != ring:
        raise ValueError("delta must live in the coefficient ring")
    diagrams = tl_diagrams(n)
    if len(diagrams) != catalan(n):
        raise InternalConsistencyError(
            f"enumerated {len(diagrams)} diagrams, expected Catalan({n}) = {catalan(n)}"
        )
    position = {diag: i for i, diag in enumerate(diagrams)}

    max_loops = n
    powers = [ring.one()]
    for _ in range(max_loops + 1):
        powers.append(ring.mul(powers[-1], delta_s.value))

    structure = {}
    zero = ring.zero()
    for i, x in enumerate(diagrams):
        for j, y in enumerate(diagrams):
            prod, loops = compose_diagrams(x, y, n)
            coeff = powers[loops]
            if coeff != zero:
                structure[(i, j)] = ((position[prod], coeff),)

    unit = [zero] * len(diagrams)
    unit[position[identity_diagram(n)]] = ring.one()
    labels_str = tuple(_diagram_label(diag, n) for diag in diagrams)
    alg = Algebra(ring, len(diagrams), labels_str, structure, tuple(unit))

    lambdas = sorted({through_count(diag, n) for diag in diagrams})
    halves: dict[int, list[HalfDiagram]] = {lam: [] for lam in lambdas}
    for diag in diagrams:
        lam = through_count(diag, n)
        th = top_half(diag, n)
        if th not in halves[lam]:
            halves[lam].append(th)
    tableaux = {lam: tuple(sorted(halves[lam])) for lam in lambdas}
    index = {}
    for lam in lambdas:
        for s in tableaux[lam]:
            for t in tableaux[lam]:
                index[(lam, s, t)] = position[glue_halves(s, t, n)]
    involution = tuple(position[flip_diagram(diag, n)] for diag in diagrams)
    leq = frozenset(
        (a, b) for a in lambdas for b in lambdas if a <= b
    )
    datum = CellDatum(tuple(lambdas), leq, tableaux, index, involution)
    if validate:
        report = validate_cell_datum(alg, datum)
        if not report.valid:
            raise InternalConsistencyError(
                f"TL_{n}(delta={delta_s}) datum failed validation: "
                f"{report.violations[:3]}"
            )
    return TLData(n, delta_s, tuple(diagrams), alg, datum)
