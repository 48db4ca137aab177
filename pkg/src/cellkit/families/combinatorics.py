"""Partitions, dominance order, semistandard tableaux, digit sums."""

from __future__ import annotations

from math import comb

from ..errors import NotPrime, SizeMismatch
from ..rings import is_prime


def catalan(n: int) -> int:
    return comb(2 * n, n) // (n + 1)


def partitions_at_most(d: int, max_parts: int) -> list[tuple[int, ...]]:
    """All partitions of d into at most max_parts parts, ascending lex order."""
    out: list[tuple[int, ...]] = []

    def build(remaining: int, cap: int, prefix: tuple[int, ...]):
        if remaining == 0:
            out.append(prefix)
            return
        if len(prefix) == max_parts:
            return
        for part in range(min(cap, remaining), 0, -1):
            build(remaining - part, part, prefix + (part,))

    build(d, d, ())
    return sorted(out)


def dominance_leq(lam: tuple[int, ...], mu: tuple[int, ...]) -> bool:
    """lam <= mu in dominance order: every prefix sum of lam is <= mu's."""
    if sum(lam) != sum(mu):
        raise SizeMismatch(f"partitions of different sizes: {lam} vs {mu}")
    width = max(len(lam), len(mu))
    acc_l = acc_m = 0
    for j in range(width):
        acc_l += lam[j] if j < len(lam) else 0
        acc_m += mu[j] if j < len(mu) else 0
        if acc_l > acc_m:
            return False
    return True


def dominance_linear_extension(partitions) -> list[tuple[int, ...]]:
    """Ascending lexicographic order, which refines dominance.

    At equal sizes, lam strictly below mu in dominance forces lam before mu
    lexicographically, so sorting is a valid increasing enumeration.
    """
    return sorted(partitions)


def semistandard_tableaux(shape: tuple[int, ...], n: int) -> list[tuple[tuple[int, ...], ...]]:
    """All semistandard tableaux of the given shape with entries in 1..n.

    Rows weakly increase, columns strictly increase; listed in lexicographic
    order of the row-reading word.
    """
    rows = len(shape)
    out: list[tuple[tuple[int, ...], ...]] = []
    tableau: list[list[int]] = [[0] * width for width in shape]

    def fill(r: int, c: int):
        if r == rows:
            out.append(tuple(tuple(row) for row in tableau))
            return
        nr, nc = (r, c + 1) if c + 1 < shape[r] else (r + 1, 0)
        lo = 1
        if c > 0:
            lo = max(lo, tableau[r][c - 1])
        if r > 0:
            lo = max(lo, tableau[r - 1][c] + 1)
        for value in range(lo, n + 1):
            tableau[r][c] = value
            fill(nr, nc)

    if rows == 0:
        return [()]
    fill(0, 0)
    return out


def alpha_p(d: int, p: int) -> int:
    """Digit sum of d in base p; alpha_0(d) is d itself."""
    if d < 0:
        raise ValueError(f"alpha_p needs d >= 0, got {d}")
    if p == 0:
        return d
    if not is_prime(p):
        raise NotPrime(f"alpha_p needs p = 0 or p prime, got {p}")
    total = 0
    while d:
        total += d % p
        d //= p
    return total


def min_alpha_over_primes(d: int, primes=None) -> int:
    """min over primes of alpha_p(d); over all primes when none are given.

    For p > d the base-p digits of d are the single digit d, so the global
    minimum only needs the primes up to d (and d itself as a fallback).
    """
    if primes is None:
        candidates = [p for p in range(2, d + 1) if is_prime(p)]
        values = [alpha_p(d, p) for p in candidates]
        values.append(d)
        return min(values)
    values = [alpha_p(d, p) for p in primes]
    if not values:
        raise ValueError("empty prime set")
    return min(values)
