"""Linear deterministic channel: bounds, constructions, verification."""

import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cifc_cms import gf2, ldc


def rank_difference_oracle(c, d, a, b):
    """Independent oracle for f: the rank increment at the second
    receiver once the first receiver's observation space is fixed."""
    m = max(a, b, c, d)
    if m == 0:
        return 0
    first = np.hstack([gf2.shift_matrix(m, m - a), gf2.shift_matrix(m, m - b)])
    second = np.hstack([gf2.shift_matrix(m, m - c), gf2.shift_matrix(m, m - d)])
    return gf2.rank(np.vstack([first, second])) - gf2.rank(first)


class TestFFunction:
    def test_complete_grid_matches_rank_oracle(self):
        for c, d, a, b in itertools.product(range(5), repeat=4):
            assert ldc.f_function(c, d, a, b) == \
                rank_difference_oracle(c, d, a, b), (c, d, a, b)

    def test_spot_values(self):
        assert ldc.f_function(3, 1, 2, 0) == 1
        assert ldc.f_function(2, 2, 2, 2) == 0
        assert ldc.f_function(4, 0, 0, 0) == 4

    def test_rejects_negative(self):
        with pytest.raises(ValueError):
            ldc.f_function(-1, 0, 0, 0)


class TestOuterBound3:
    def test_breakdown_terms(self):
        g = ldc.LdcGains.from_matrix([[3, 1, 2], [0, 4, 1], [2, 2, 5]])
        bound = ldc.ldc3_sum_outer(g)
        terms = dict(bound.terms)
        assert terms["rx1_full"] == 3
        assert terms["rx2_conditional"] == ldc.f_function(4, 1, 1, 2)
        assert terms["rx3_private"] == max(0, 5 - max(2, 1))
        assert bound.value == sum(terms.values())

    def test_symmetric_specialization(self):
        # for nd != ni the 3-user formula collapses to the K-user one
        for nd, ni in itertools.product(range(5), repeat=2):
            if nd == ni:
                continue
            g = ldc.LdcGains.symmetric(nd, ni, 3)
            expected = 2 * max(nd, ni) + max(0, nd - ni)
            assert ldc.ldc3_sum_outer(g).value == expected

    def test_requires_three_users(self):
        with pytest.raises(ValueError):
            ldc.ldc3_sum_outer(ldc.LdcGains.symmetric(2, 1, 4))


class TestSymCapacityFormula:
    def test_main_branch(self):
        assert ldc.ldc_k_sym_sum_capacity(4, 2, 3).value == 10
        assert ldc.ldc_k_sym_sum_capacity(2, 4, 3).value == 8
        assert ldc.ldc_k_sym_sum_capacity(4, 2, 5).value == 18

    def test_mac_branch(self):
        bound = ldc.ldc_k_sym_sum_capacity(3, 3, 4)
        assert bound.value == 3
        assert bound.note == "mac"

    def test_degenerate_branches(self):
        assert ldc.ldc_k_sym_sum_capacity(0, 0, 3).value == 0
        assert ldc.ldc_k_sym_sum_capacity(0, 3, 3).value == 6

    def test_rejects_bad_args(self):
        with pytest.raises(ValueError):
            ldc.ldc_k_sym_sum_capacity(-1, 0, 3)
        with pytest.raises(ValueError):
            ldc.ldc_k_sym_sum_capacity(1, 1, 1)


class TestSymScheme:
    @pytest.mark.parametrize("nd,ni,k", [(4, 2, 3), (2, 4, 3), (5, 1, 4),
                                         (1, 5, 2), (3, 0, 3), (0, 3, 4)])
    def test_exhaustive_verification(self, nd, ni, k):
        g = ldc.LdcGains.symmetric(nd, ni, k)
        s = ldc.build_sym_scheme(nd, ni, k)
        assert s.respects_cms()
        report = ldc.verify_scheme(g, s, mode="exhaustive")
        assert report.passed, report.counterexample
        assert s.total_bits == (k - 1) * max(nd, ni) + max(0, nd - ni)

    def test_mac_corner(self):
        g = ldc.LdcGains.symmetric(3, 3, 3)
        s = ldc.build_sym_scheme(3, 3, 3)
        assert s.rates == (3, 0, 0)
        assert ldc.verify_scheme(g, s, mode="exhaustive").passed

    def test_per_user_rates(self):
        s = ldc.build_sym_scheme(2, 1, 3)
        assert s.rates == (2, 2, 1)


class TestGenericScheme3:
    @pytest.mark.parametrize("n", [
        [[3, 1, 2], [0, 4, 1], [2, 2, 5]],
        [[1, 0, 0], [0, 1, 0], [0, 0, 1]],
        [[0, 0, 0], [0, 0, 0], [0, 0, 0]],
        [[2, 2, 2], [2, 2, 2], [2, 2, 2]],
        [[0, 3, 1], [1, 0, 2], [3, 1, 0]],
        [[5, 5, 5], [5, 5, 5], [5, 5, 0]],
    ])
    def test_hits_outer_bound_and_verifies(self, n):
        g = ldc.LdcGains.from_matrix(n)
        s = ldc.build_generic3_scheme(g)
        assert s.total_bits == ldc.ldc3_sum_outer(g).value
        assert s.respects_cms()
        assert ldc.verify_scheme(g, s, mode="exhaustive").passed

    @given(st.integers(0, 2 ** 31 - 1))
    @settings(max_examples=25, deadline=None)
    def test_random_gains(self, seed):
        rng = np.random.default_rng(seed)
        g = ldc.LdcGains.from_matrix(rng.integers(0, 5, size=(3, 3)))
        s = ldc.build_generic3_scheme(g)
        assert s.total_bits == ldc.ldc3_sum_outer(g).value
        assert ldc.verify_scheme(g, s, samples=2000).passed


class TestVerifyScheme:
    def test_detects_sabotaged_decoder(self):
        g = ldc.LdcGains.symmetric(4, 2, 3)
        s = ldc.build_sym_scheme(4, 2, 3)
        bad_dec = list(s.decoders)
        d0 = bad_dec[0].copy()
        d0[0, 0] ^= 1
        bad_dec[0] = d0
        broken = ldc.LdcScheme(rates=s.rates, encoders=s.encoders,
                               decoders=tuple(bad_dec))
        report = ldc.verify_scheme(g, broken, mode="exhaustive")
        assert not report.passed
        assert report.counterexample is not None
        msgs, user, decoded = report.counterexample
        assert user == 0
        assert decoded != msgs[0]

    def test_sampled_mode_detects_sabotage_too(self):
        g = ldc.LdcGains.symmetric(4, 2, 3)
        s = ldc.build_sym_scheme(4, 2, 3)
        bad_enc = list(s.encoders)
        e1 = bad_enc[1].copy()
        e1[:, :] = 0
        bad_enc[1] = e1
        broken = ldc.LdcScheme(rates=s.rates, encoders=tuple(bad_enc),
                               decoders=s.decoders)
        report = ldc.verify_scheme(g, broken, mode="sampled", samples=500)
        assert not report.passed

    def test_auto_picks_exhaustive_for_small(self):
        g = ldc.LdcGains.symmetric(2, 1, 3)
        s = ldc.build_sym_scheme(2, 1, 3)
        assert ldc.verify_scheme(g, s, mode="auto").mode == "exhaustive"

    def test_auto_picks_sampled_for_large(self):
        g = ldc.LdcGains.symmetric(6, 3, 6)
        s = ldc.build_sym_scheme(6, 3, 6)
        report = ldc.verify_scheme(g, s, mode="auto", samples=500)
        assert report.mode == "sampled"
        assert report.passed


class TestDominance:
    def test_uniform_input_attains_bound_on_invertible_channel(self):
        g = ldc.LdcGains.from_matrix([[2, 1, 0], [0, 2, 1], [1, 0, 2]])
        report = ldc.outer_bound_dominance_check(g, trials=50, seed=0)
        assert report.all_within
        assert report.max_observed <= report.closed_form + 1e-12

    def test_rejects_large_channels(self):
        with pytest.raises(ValueError):
            ldc.outer_bound_dominance_check(ldc.LdcGains.symmetric(4, 1, 3))


class TestCmsConstraint:
    def test_violation_detected(self):
        s = ldc.build_sym_scheme(4, 2, 3)
        bad = list(s.encoders)
        e0 = bad[0].copy()
        e0[0, -1] = 1  # transmitter 1 touching user 3's message
        bad[0] = e0
        broken = ldc.LdcScheme(rates=s.rates, encoders=tuple(bad),
                               decoders=s.decoders)
        assert not broken.respects_cms()
