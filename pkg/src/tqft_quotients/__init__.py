"""Exact SO(3) quantum representations of mapping class groups and their finite quotients."""

from .cyclotomic import Cyclotomic, SplitPrime, complex_embed, find_split_primes, reduce_mod
from .skein import SkeinParams, verlinde_rank

__version__ = "0.1.0"

__all__ = [
    "Cyclotomic",
    "SkeinParams",
    "SplitPrime",
    "complex_embed",
    "find_split_primes",
    "reduce_mod",
    "verlinde_rank",
]
