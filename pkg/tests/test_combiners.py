import numpy as np
import pytest
from hypothesis import given, strategies as st

from ddfwsc.combiners import (
    SchemeId,
    beta_wsc2,
    combine_lar,
    combine_sc,
    combine_wsc,
    lar_bits,
    lar_power_factor,
    wsc_bits,
)

finite = st.floats(allow_nan=False, allow_infinity=False, min_value=-1e6, max_value=1e6)


class TestCombineWsc:
    def test_relay_selected(self):
        selected, bit = combine_wsc(1.0, -3.0, 0.5)
        assert selected == -3.0 and bit == -1

    def test_beta_one_is_sc(self):
        assert combine_wsc(-2.0, 1.0, 1.0) == (-2.0, -1)

    def test_small_beta_prefers_direct(self):
        selected, bit = combine_wsc(1.0, 5.0, 1e-9)
        assert selected == 1.0 and bit == 1

    def test_tie_goes_to_direct(self):
        selected, _ = combine_wsc(2.0, -2.0, 1.0)
        assert selected == 2.0

    def test_invalid_beta(self):
        with pytest.raises(ValueError):
            combine_wsc(1.0, 1.0, 0.0)
        with pytest.raises(ValueError):
            combine_wsc(1.0, 1.0, -0.5)

    @given(finite, finite)
    def test_sc_equals_wsc_at_unit_weight(self, xi0, xi2):
        assert combine_sc(xi0, xi2) == combine_wsc(xi0, xi2, 1.0)

    @given(finite, finite, st.floats(min_value=0.01, max_value=10),
           st.floats(min_value=1e-3, max_value=1e3))
    def test_scale_invariance(self, xi0, xi2, beta, c):
        _, bit = combine_wsc(xi0, xi2, beta)
        _, bit_scaled = combine_wsc(c * xi0, c * xi2, beta)
        assert bit == bit_scaled


class TestAdaptiveWeight:
    def test_linear_branch(self):
        assert beta_wsc2(2.0, 4.0) == 0.5

    def test_saturation(self):
        assert beta_wsc2(7.0, 4.0) == 1.0

    def test_zero_relay_snr(self):
        assert beta_wsc2(0.0, 4.0) == 0.0

    def test_invalid_inputs(self):
        with pytest.raises(ValueError):
            beta_wsc2(1.0, 0.0)
        with pytest.raises(ValueError):
            beta_wsc2(-1.0, 4.0)

    def test_matches_lar_factor_pointwise(self):
        for g1 in np.linspace(0, 10, 50):
            assert beta_wsc2(g1, 4.0) == lar_power_factor(g1, 4.0)

    def test_monotone_and_bounded(self):
        vals = [beta_wsc2(g, 3.0) for g in np.linspace(0, 12, 200)]
        assert all(0 <= v <= 1 for v in vals)
        assert all(b >= a for a, b in zip(vals, vals[1:]))


class TestLar:
    def test_power_factor_values(self):
        assert lar_power_factor(2.0, 4.0) == 0.5
        assert lar_power_factor(7.0, 4.0) == 1.0
        assert lar_power_factor(0.0, 4.0) == 0.0

    def test_combine(self):
        assert combine_lar(1.0, -0.5) == 1
        assert combine_lar(0.2, -0.5) == -1


class TestVectorized:
    def test_wsc_bits_matches_scalar(self):
        rng = np.random.default_rng(2)
        xi0 = rng.normal(size=200)
        xi2 = rng.normal(size=200)
        for beta in (0.3, 1.0, 2.0):
            vec = wsc_bits(xi0, xi2, beta)
            scalar = [combine_wsc(a, b, beta)[1] for a, b in zip(xi0, xi2)]
            assert vec.tolist() == scalar

    def test_wsc_bits_zero_beta_is_direct_only(self):
        rng = np.random.default_rng(3)
        xi0 = rng.normal(size=100)
        xi2 = rng.normal(size=100)
        assert np.array_equal(wsc_bits(xi0, xi2, 0.0), np.where(xi0 >= 0, 1, -1))

    def test_lar_bits_matches_scalar(self):
        rng = np.random.default_rng(4)
        xi0 = rng.normal(size=100)
        xiL = rng.normal(size=100)
        vec = lar_bits(xi0, xiL)
        assert vec.tolist() == [combine_lar(a, b) for a, b in zip(xi0, xiL)]


def test_lar_worse_than_wsc2_high_snr():
    # At 30 dB the relay power cutback inflates the dominant noise term of
    # the differential decision variable, so LAR must lose to WSC2 on
    # paired realizations.
    from ddfwsc.link import SystemParams
    from ddfwsc.simulator import SimConfig, run_simulation

    params = SystemParams(p0_over_n0_db=30.0, block_len=256)
    cfg = SimConfig(params=params, schemes=(SchemeId.WSC2, SchemeId.LAR),
                    max_blocks=30_000, min_errors=100, seed=77)
    results = {r.scheme: r for r in run_simulation(cfg)}
    assert results[SchemeId.LAR].ber > results[SchemeId.WSC2].ber
