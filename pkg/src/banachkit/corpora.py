"""Seeded verification corpora shared by the CLI corpus command and the
acceptance tests.

Generators build inputs whose ground truth is known by construction (planted
first zeros, vanishing parity classes, block-shift injections with sources in
block zero, table-backed functions with exact range sets), so every check
compares an implementation against an independent fact.
"""

from __future__ import annotations

import random
from typing import Dict, List, Tuple

from . import banach_nat, omniscience, ranges
from .metric import Dyadic, IntervalPoint, banach_H, halving_gadget
from .streams import Fuel, LazySeq, UltimatelyConstantSeq

__all__ = [
    "planted_zero_seq",
    "parity_promise_seq",
    "block_shift_injection",
    "block_permutation",
    "random_shift_pair",
    "table_fn_with_exact_range",
    "halving_chain_law",
    "run_suite",
]


def planted_zero_seq(rng: random.Random, fuel: int) -> Tuple[UltimatelyConstantSeq, int]:
    """A sequence whose first zero sits at a known position below fuel."""
    k = rng.randrange(fuel)
    head = [rng.randint(1, 9) for _ in range(k)] + [0]
    head += [rng.randint(0, 9) for _ in range(rng.randrange(8))]
    return UltimatelyConstantSeq(head, rng.randint(0, 3)), k


def parity_promise_seq(rng: random.Random, fuel: int) -> Tuple[UltimatelyConstantSeq, int]:
    """A sequence vanishing on one whole parity class, with a nonzero on the
    other class below fuel; returns (sequence, vanishing parity)."""
    p = rng.randrange(2)
    first_nonzero = rng.randrange(fuel // 2) * 2 + (1 - p)
    length = first_nonzero + 1 + 2 * rng.randrange(8)
    head = [0] * length
    for i in range(1 - p, length, 2):
        head[i] = rng.randint(1, 9) if i >= first_nonzero else 0
    head[first_nonzero] = rng.randint(1, 9)
    return UltimatelyConstantSeq(head, 0), p


def block_shift_injection(seed: int, block: int) -> LazySeq:
    """An injection mapping block k bijectively onto block k+1 (so block 0 is
    missed and every backward chain descends); the per-block permutation is
    derived deterministically from the seed."""

    def gen(n: int) -> int:
        k, r = divmod(n, block)
        perm = random.Random(seed * 2_000_003 + k).sample(range(block), block)
        return (k + 1) * block + perm[r]

    return LazySeq(gen, name=f"shift[{seed}]")


def block_permutation(seed: int, block: int) -> LazySeq:
    """A bijection permuting each block in place (every chain cycles)."""

    def gen(n: int) -> int:
        k, r = divmod(n, block)
        perm = random.Random(seed * 2_000_003 + k + 1_000_001).sample(range(block), block)
        return k * block + perm[r]

    return LazySeq(gen, name=f"perm[{seed}]")


def random_shift_pair(rng: random.Random) -> banach_nat.BoundedInjPair:
    """A bounded pair whose chains all resolve: both injections shift blocks
    upward, so backward traces reach block 0 within 2n/block steps."""
    block = rng.choice([4, 8, 16])
    f0 = block_shift_injection(rng.randrange(1 << 30), block)
    f1 = block_shift_injection(rng.randrange(1 << 30), block)
    ident = LazySeq(lambda n: n, name="identity")
    return banach_nat.BoundedInjPair(f0, f1, ident, ident, verified_prefix=4)


def table_fn_with_exact_range(rng: random.Random, length: int = 200,
                              vmax: int = 160):
    """A table-backed function with constant tail; its range and least
    witnesses are known exactly. Returns (f, range set, least-witness map,
    valid bounding function)."""
    table = [rng.randrange(vmax) for _ in range(length)]
    tail = rng.randrange(vmax)
    values = set(table) | {tail}
    least: Dict[int, int] = {}
    for t, v in enumerate(table + [tail]):
        least.setdefault(v, t)

    f = LazySeq(lambda n: table[n] if n < length else tail, name="table-fn")
    b = LazySeq(lambda n: least.get(n, 0), name="table-bounds")
    return f, values, least, b


def halving_chain_law(x: Dyadic) -> Tuple[Dyadic, str]:
    """Ground truth for the halving pair's bijection at a dyadic x in [0,1]:
    with k the least stage at which 2^(k-1) x leaves [0, 1/2], the value is
    x/2 for odd k and 2x for even k; 0 is fixed."""
    if x == Dyadic.zero():
        return x, "via-F"
    half = Dyadic(1, 1)
    k = 1
    y = x
    while not half < y:
        y = y.double()
        k += 1
    return (x.half(), "via-F") if k % 2 == 1 else (x.double(), "via-G-inverse")


def _fail(failures: List[dict], suite: str, case: int, detail: str):
    failures.append({"suite": suite, "case": case, "detail": detail})


def _check_reductions(rng: random.Random, cases: int, failures: List[dict]):
    fuel = Fuel(256)
    exact_min = omniscience.llpomin_realizer()
    exact_llpo = omniscience.llpo_from_llpomin(exact_min)
    from_lpo_min = omniscience.llpomin_from_lpo(omniscience.lpo_realizer())
    from_llpo_min = omniscience.llpomin_from_llpo(exact_llpo)
    from_lpo_llpo = omniscience.llpo_from_lpo(omniscience.lpo_realizer())

    for case in range(cases):
        s, k = planted_zero_seq(rng, fuel.bound)
        want = k % 2
        for name, realizer in (("llpomin_from_llpo", from_llpo_min),
                               ("llpomin_from_lpo", from_lpo_min)):
            got = realizer(s, fuel)
            if not got.found or got.value != want:
                _fail(failures, "reductions", case, f"{name}: {got} != {want}")
        gr = omniscience.grilliot_lpo(exact_min, s, fuel)
        if not gr.found or gr.value != 0:
            _fail(failures, "reductions", case, f"grilliot on zero input: {gr}")

        t, p = parity_promise_seq(rng, fuel.bound)
        for name, realizer in (("llpo_from_llpomin", exact_llpo),
                               ("llpo_from_lpo", from_lpo_llpo)):
            got = realizer(t, fuel)
            if not got.found or got.value != p:
                _fail(failures, "reductions", case, f"{name}: {got} != parity {p}")


def _check_translators(rng: random.Random, cases: int, failures: List[dict]):
    for case in range(cases):
        f, values, least, b = table_fn_with_exact_range(rng)
        chi = ranges.t_beta_to_rho(f, b)
        for n in range(129):
            if (chi(n) == 1) != (n in values):
                _fail(failures, "translators", case, f"beta->rho wrong at {n}")
                break
        exact_chi = LazySeq(lambda n: 1 if n in values else 0)
        res = ranges.t_rho_to_beta(f, exact_chi, Fuel(256))
        for n in range(129):
            r = res(n)
            want = least.get(n)
            if want is None:
                if not (r.found and r.value == 0):
                    _fail(failures, "translators", case, f"rho->beta nonmember at {n}: {r}")
                    break
            elif not (r.found and r.value == want):
                _fail(failures, "translators", case, f"rho->beta witness at {n}: {r}")
                break


def _check_banach_nat(rng: random.Random, cases: int, failures: List[dict]):
    fuel = Fuel(512)
    for case in range(cases):
        pair = random_shift_pair(rng)
        h = banach_nat.banach_bijection_nat(pair, 64, 256)
        report = banach_nat.verify_banach(pair, h, 64)
        if not report.ok:
            _fail(failures, "banach-nat", case, f"verify: {report.violations[:3]}")
            continue
        for m in range(64):
            cls = banach_nat.chain_trace(pair, m, "A", fuel)
            if cls.origin == "unresolved":
                _fail(failures, "banach-nat", case, f"chain at {m} unresolved")
                break
            if h.tags[m] != cls.direction:
                _fail(failures, "banach-nat", case,
                      f"direction mismatch at {m}: tree {h.tags[m]}, chain {cls.direction}")
                break


def _check_metric(rng: random.Random, cases: int, failures: List[dict]):
    F, G = halving_gadget()
    X = F.space
    for case in range(cases):
        x = Dyadic(rng.randrange(1 << 10), 10)
        want, tag = halving_chain_law(x)
        res = banach_H(X, F, G, IntervalPoint(x), 10, Fuel(64))
        got = res.point.value if isinstance(res.point, IntervalPoint) else None
        if got != want or res.tag != tag:
            _fail(failures, "metric", case,
                  f"H({x}) = {got}/{res.tag}, want {want}/{tag}")


_SUITES = {
    "reductions": _check_reductions,
    "translators": _check_translators,
    "banach-nat": _check_banach_nat,
    "metric": _check_metric,
}


def run_suite(suite: str, rng: random.Random, cases: int) -> List[dict]:
    """Run one named suite (or all); returns failure records, empty = pass."""
    failures: List[dict] = []
    names = sorted(_SUITES) if suite == "all" else [suite]
    for name in names:
        _SUITES[name](rng, cases, failures)
    return failures
