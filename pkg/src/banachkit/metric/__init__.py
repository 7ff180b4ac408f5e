"""Compact metric spaces as finite nets with exact dyadic arithmetic, and the
range / preimage / modulus / bijection algorithms on them."""

from .dyadic import Dyadic, parse_dyadic
from .spaces import (
    BitStream,
    CantorPoint,
    CantorSpace,
    CompactSpace,
    IntervalPoint,
    Point,
    UnitInterval,
    cantor_space,
    unit_interval,
    verify_metric_axioms,
    verify_net_property,
)
from .ucfun import UCFun, cantor_fun, interval_fun
from .ops import (
    BanachHResult,
    RangeAnswer,
    banach_H,
    modulus_of,
    modulus_valid,
    preimage_select,
    range_char,
)
from .gadgets import (
    constant_fun,
    halving_gadget,
    identity_fun,
    padding_gadget,
    preimage_gadget,
    sigma_seq,
)
from .codes import CodeEntry, check_code, decode_code

__all__ = [
    "Dyadic", "parse_dyadic",
    "BitStream", "CantorPoint", "CantorSpace", "CompactSpace", "IntervalPoint",
    "Point", "UnitInterval", "cantor_space", "unit_interval",
    "verify_metric_axioms", "verify_net_property",
    "UCFun", "cantor_fun", "interval_fun",
    "BanachHResult", "RangeAnswer", "banach_H", "modulus_of", "modulus_valid",
    "preimage_select", "range_char",
    "constant_fun", "halving_gadget", "identity_fun", "padding_gadget",
    "preimage_gadget", "sigma_seq",
    "CodeEntry", "check_code", "decode_code",
]
