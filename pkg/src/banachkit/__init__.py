"""banachkit: computable content of Banach's strengthening of
Schroeder--Bernstein.

Fuel-bounded omniscience realizers and their interreductions, range/bounding
translations, the Banach bijection on N through a binary-tree encoding, and
exact-dyadic epsilon-net algorithms (range, preimage, modulus, bijection) on
compact metric spaces.
"""

from . import banach_nat, metric, omniscience, ranges, streams
from .streams import (
    Exhausted,
    Found,
    Fuel,
    LazySeq,
    OracleResult,
    UltimatelyConstantSeq,
    diagonal,
    lpo,
    mu,
    mu0,
    parse_seq,
    prefix,
)

__version__ = "0.1.0"

__all__ = [
    "banach_nat", "metric", "omniscience", "ranges", "streams",
    "Exhausted", "Found", "Fuel", "LazySeq", "OracleResult",
    "UltimatelyConstantSeq", "diagonal", "lpo", "mu", "mu0",
    "parse_seq", "prefix", "__version__",
]
