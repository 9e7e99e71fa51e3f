"""Closed itemsets, minimal generators, generic rule bases and concise
representations of frequent itemsets."""
from .context import (CapacityError, ExtractionContext, absolute_minsup, parse_fimi,
                      read_fimi, supp_conj, supp_disj, supp_neg)
from .prince import IcebergLattice, prince
from .bases import Rule, extract_gba, extract_gbe, extract_igb
from .dcpr import dcpr_mine, regenerate_frequent
from .ndi import derive_support, mine_ndi

__version__ = "0.1.0"

__all__ = [
    "CapacityError",
    "ExtractionContext",
    "IcebergLattice",
    "Rule",
    "absolute_minsup",
    "dcpr_mine",
    "derive_support",
    "extract_gba",
    "extract_gbe",
    "extract_igb",
    "mine_ndi",
    "parse_fimi",
    "prince",
    "read_fimi",
    "regenerate_frequent",
    "supp_conj",
    "supp_disj",
    "supp_neg",
]
