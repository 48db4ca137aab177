"""Built-in algebra families: Schur algebras and Temperley-Lieb algebras."""

from .combinatorics import (
    alpha_p,
    catalan,
    dominance_leq,
    partitions_at_most,
    semistandard_tableaux,
)
from .schur import SchurData, CellularSchur, codeterminant_cell_datum, heredity_chain, schur_algebra
from .tl import TLData, tl_algebra

__all__ = [
    "alpha_p",
    "catalan",
    "dominance_leq",
    "partitions_at_most",
    "semistandard_tableaux",
    "SchurData",
    "CellularSchur",
    "codeterminant_cell_datum",
    "heredity_chain",
    "schur_algebra",
    "TLData",
    "tl_algebra",
]
