import itertools

import pytest

from banachkit.errors import (
    ConstructionStalledError,
    ExhaustionError,
    RangeInconsistencyError,
)
from banachkit.metric import (
    BitStream,
    CantorPoint,
    Dyadic,
    IntervalPoint,
    banach_H,
    constant_fun,
    halving_gadget,
    identity_fun,
    modulus_of,
    modulus_valid,
    padding_gadget,
    preimage_select,
    range_char,
    sigma_seq,
)
from banachkit.corpora import halving_chain_law
from banachkit.metric.ucfun import interval_fun
from banachkit.streams import Fuel, LazySeq

HALF = Dyadic(1, 1)
QUARTER = Dyadic(1, 2)


@pytest.fixture(scope="module")
def halving():
    F, G = halving_gadget()
    return F.space, F, G


@pytest.fixture(scope="module")
def padding():
    F, G = padding_gadget()
    return F.space, F, G


class TestRangeChar:
    def test_three_quarters_out(self, halving):
        X, F, _ = halving
        ans = range_char(X, F, IntervalPoint(Dyadic(3, 2)), 8)
        assert ans.out and ans.level == 2

    def test_quarter_in(self, halving):
        X, F, _ = halving
        ans = range_char(X, F, IntervalPoint(QUARTER), 8)
        assert ans.in_range and ans.level == 8

    def test_all_ones_out_on_cantor(self, padding):
        X, F, _ = padding
        ans = range_char(X, F, CantorPoint(BitStream.constant(1)), 8)
        assert ans.out and ans.level == 1

    def test_padded_point_in_range(self, padding):
        X, F, _ = padding
        y = F.exact_apply(sigma_seq(2))
        assert range_char(X, F, y, 8).in_range

    def test_constant_cantor_fun_small_modulus(self, padding):
        # modulus 0 keeps the net level below the precision index; the
        # witness search must then read the word's zero tail
        X, _, _ = padding
        target = CantorPoint(BitStream((1, 0, 1), (0,)))
        const = constant_fun(X, target.stream)
        assert range_char(X, const, target, 6).in_range
        out = range_char(X, const, CantorPoint(BitStream.constant(1)), 6)
        assert out.out and out.level == 1

    def test_inconsistent_exact_range_detected(self, halving):
        X, _, _ = halving
        lying = interval_fun(X, lambda v: v.half(), LazySeq(lambda k: k),
                             exact_range=lambda p: True)
        with pytest.raises(RangeInconsistencyError):
            range_char(X, lying, IntervalPoint(Dyadic(3, 2)), 8)


class TestPreimageSelect:
    def test_halving_unique_preimage(self, halving):
        # the last two levels carry the bounded-lookahead slack, so the
        # closeness claim is checked away from the m_max boundary
        X, F, _ = halving
        p = preimage_select(X, F, IntervalPoint(QUARTER), 8)
        for m in range(7):
            assert abs(p.approx(m) - HALF) <= Dyadic.pow2(-m)
        for m in range(9):
            # clause (1) verbatim, at every produced level
            assert abs(F.raw_image(p.approx(m)) - QUARTER) < Dyadic.pow2(-m)

    def test_identity_recovers_target(self, halving):
        X, _, _ = halving
        ident = identity_fun(X)
        y = Dyadic(5, 3)
        p = preimage_select(X, ident, IntervalPoint(y), 8)
        for m in range(9):
            assert abs(p.approx(m) - y) <= Dyadic.pow2(-m)

    def test_padding_unpads(self, padding):
        # padding doubles disagreement indices, so pinning the preimage at
        # level m takes lookahead 2m+4; the clause-(1) guarantee needs none
        X, F, _ = padding
        target = CantorPoint(BitStream((1,), (1,)))
        y = F.exact_apply(target)
        p = preimage_select(X, F, y, 24)
        for m in range(2, 9):
            assert X.dist_le_pow2(p.approx(m), target.stream, m)

    def test_rapid_convergence(self, halving):
        X, F, _ = halving
        p = preimage_select(X, F, IntervalPoint(Dyadic(3, 3)), 8)
        for m in range(8):
            assert abs(p.approx(m) - p.approx(m + 1)) <= Dyadic.pow2(-m)

    def test_approx_beyond_cap_rejected(self, halving):
        X, F, _ = halving
        p = preimage_select(X, F, IntervalPoint(QUARTER), 4)
        with pytest.raises(ValueError):
            p.approx(5)

    def test_stalls_on_empty_preimage(self, halving):
        # constant map: only its value has a preimage
        X, _, _ = halving
        const = constant_fun(X, QUARTER)
        with pytest.raises(ConstructionStalledError):
            preimage_select(X, const, IntervalPoint(Dyadic(3, 2)), 6).approx(6)


def brute_modulus(X, F, cap, m):
    """Independent oracle: scan all net pairs up to cap with pure dyadic
    arithmetic for the least workable modulus value."""
    points = [X.net_point(j, i) for j in range(cap + 1) for i in range(X.level_count(j))]
    if X.kind == "interval":
        images = [F.raw_image(v) for v in points]
    else:
        images = [F.image_value(v, cap + 1) for v in points]
    for n in range(cap + 1):
        ok = True
        for (u, fu), (v, fv) in itertools.combinations(zip(points, images), 2):
            if X.dist_lt_pow2(u, v, n) and not X.dist_lt_pow2(fu, fv, m + 1):
                ok = False
                break
        if ok:
            return n
    return None


class TestModulus:
    def test_halving_is_identity(self, halving):
        X, F, _ = halving
        M = modulus_of(X, F, 10)
        assert [M(m) for m in range(9)] == list(range(9))

    def test_constant_is_zero(self, halving):
        X, _, _ = halving
        M = modulus_of(X, constant_fun(X, HALF), 8)
        assert [M(m) for m in range(5)] == [0, 0, 0, 0, 0]

    def test_padding_halves_the_level(self, padding):
        # a disagreement at t > n doubles to 2t > 2n in the image, so the
        # brute-force least modulus is ceil(m/2), not m
        X, F, _ = padding
        M = modulus_of(X, F, 8)
        assert [M(m) for m in range(9)] == [(m + 1) // 2 for m in range(9)]

    def test_interval_identity_needs_one_more(self, halving):
        X, _, _ = halving
        M = modulus_of(X, identity_fun(X), 8)
        assert [M(m) for m in range(6)] == [m + 1 for m in range(6)]

    @pytest.mark.parametrize("space_kind", ["interval", "cantor"])
    def test_matches_pure_python_brute_force(self, space_kind, halving, padding):
        X, F, _ = halving if space_kind == "interval" else padding
        M = modulus_of(X, F, 5)
        for m in range(6):
            assert M(m) == brute_modulus(X, F, 5, m)

    def test_validity_invariant(self, halving):
        X, F, _ = halving
        M = modulus_of(X, F, 8)
        assert all(modulus_valid(X, F, M, m, 8) for m in range(7))

    def test_recomputation_matches_stored(self, halving):
        X, F, _ = halving
        M = modulus_of(X, F, 8)
        for m in range(8):
            assert M(m) == F.modulus(m)  # both the identity

    def test_query_beyond_cap(self, halving):
        X, F, _ = halving
        with pytest.raises(ValueError):
            modulus_of(X, F, 6)(7)

    def test_discontinuous_map_has_no_valid_modulus(self, halving):
        # a step function: nets straddle the jump at every level, so even
        # the finest candidate fails
        from banachkit.errors import NoValidModulusError

        X, _, _ = halving
        step = interval_fun(X, lambda v: Dyadic(1) if HALF < v else Dyadic(0),
                            LazySeq(lambda k: k), name="step")
        with pytest.raises(NoValidModulusError):
            modulus_of(X, step, 6)(3)


class TestBanachHInterval:
    def test_half_maps_to_one(self, halving):
        X, F, G = halving
        res = banach_H(X, F, G, IntervalPoint(HALF), 10, Fuel(64))
        assert res.point.value == Dyadic(1) and res.tag == "via-G-inverse"
        assert res.stage == 2

    def test_x_n_family(self, halving):
        X, F, G = halving
        for n in range(2, 21):
            x = HALF + Dyadic.pow2(-n)
            res = banach_H(X, F, G, IntervalPoint(x), 10, Fuel(64))
            assert res.tag == "via-F"
            assert res.point.value == QUARTER + Dyadic.pow2(-(n + 1))

    def test_zero_is_fixed(self, halving):
        X, F, G = halving
        res = banach_H(X, F, G, IntervalPoint(Dyadic.zero()), 10, Fuel(32))
        assert res.point.value == Dyadic.zero() and res.tag == "via-F"
        assert res.stage is None

    @pytest.mark.parametrize("num,exp", [(1, 2), (3, 2), (1, 3), (5, 4), (11, 6), (1, 9)])
    def test_chain_law(self, halving, num, exp):
        X, F, G = halving
        x = Dyadic(num, exp)
        want, tag = halving_chain_law(x)
        res = banach_H(X, F, G, IntervalPoint(x), 10, Fuel(64))
        assert (res.point.value, res.tag) == (want, tag)

    def test_banach_condition(self, halving):
        X, F, G = halving
        for num in (1, 3, 7, 13):
            x = Dyadic(num, 4)
            res = banach_H(X, F, G, IntervalPoint(x), 12, Fuel(64))
            if res.tag == "via-F":
                assert res.point.value == F.exact_apply(IntervalPoint(x)).value
            else:
                assert G.exact_apply(res.point).value == x


class TestBanachHCantor:
    def test_sigma_family_goes_via_f(self, padding):
        X, F, G = padding
        for n in range(5):
            res = banach_H(X, F, G, sigma_seq(n), 12, Fuel(32))
            assert res.tag == "via-F" and res.stage == 1

    def test_ten_repeating_maps_to_ones(self, padding):
        X, F, G = padding
        x = CantorPoint(BitStream((), (1, 0)))
        res = banach_H(X, F, G, x, 31, Fuel(32))
        assert res.tag == "via-G-inverse" and res.stage == 2
        assert res.point.stream.bits(32) == (1,) * 32


class TestBanachHWithoutExactRange:
    def test_definite_rejection_suffices(self, halving):
        X, _, _ = halving
        bare = interval_fun(X, lambda v: v.half(), LazySeq(lambda k: k), name="bare-halve")
        res = banach_H(X, bare, bare, IntervalPoint(Dyadic(3, 2)), 6, Fuel(8))
        assert res.tag == "via-F" and res.stage == 1
        assert res.approx() == Dyadic(3, 3)

    def test_unresolved_chain_exhausts(self, halving):
        X, _, _ = halving
        bare = interval_fun(X, lambda v: v.half(), LazySeq(lambda k: k), name="bare-halve")
        with pytest.raises(ExhaustionError):
            banach_H(X, bare, bare, IntervalPoint(QUARTER), 6, Fuel(8))


class TestBitIdenticalReruns:
    def test_preimage_pipeline_repeats_exactly(self):
        # fresh objects end to end: same literals, same bytes out
        def run_once():
            F, G = halving_gadget()
            X = F.space
            p = preimage_select(X, F, IntervalPoint(Dyadic(3, 3)), 8)
            res = banach_H(X, F, G, IntervalPoint(Dyadic(5, 4)), 10, Fuel(64))
            M = modulus_of(X, F, 6)
            return ([str(p.approx(m)) for m in range(9)],
                    str(res.approx()), res.tag,
                    [M(m) for m in range(7)])

        assert run_once() == run_once()


class TestConcurrency:
    def test_shared_preimage_point_from_threads(self, halving):
        import threading

        X, F, _ = halving
        p = preimage_select(X, F, IntervalPoint(QUARTER), 8)
        out = []

        def worker():
            out.append([p.approx(m) for m in range(9)])

        threads = [threading.Thread(target=worker) for _ in range(6)]
        for t in threads:
            t.start()
        for t in threads:
            t.join()
        assert all(o == out[0] for o in out)


class TestUCFunInvariant:
    def test_modulus_validity_on_sampled_nets(self, halving):
        # sampled net pairs: d(u,v) < 2^-modulus(k) forces image distance
        # below 2^-k (apply evaluated two guard levels deep)
        X, F, _ = halving
        for k in (1, 3, 5):
            lvl = F.modulus(k) + 1
            pts = [X.net_point(lvl, i) for i in range(0, X.level_count(lvl), 3)]
            for u in pts:
                for v in pts:
                    if X.dist_lt_pow2(u, v, F.modulus(k)):
                        fu = F.apply_value(u, k + 2)
                        fv = F.apply_value(v, k + 2)
                        assert X.dist_lt_pow2(fu, fv, k)


class TestApplyExamples:
    def test_halving_apply_value(self, halving):
        _, F, _ = halving
        assert F.apply_value(Dyadic(3, 2), 6) == Dyadic(3, 3)

    def test_exact_range_examples(self, halving):
        _, F, _ = halving
        assert not F.exact_range(IntervalPoint(Dyadic(3, 2)))
        assert F.exact_range(IntervalPoint(HALF))

    def test_padding_displayed_example(self, padding):
        _, F, _ = padding
        x = BitStream((1, 0, 1, 1), (0,))
        assert F.image_value(x, 7).bits(8) == (1, 0, 0, 0, 1, 0, 1, 0)
