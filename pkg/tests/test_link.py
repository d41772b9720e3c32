import numpy as np
import pytest

from ddfwsc.analysis import ClosedFormContext, cdf_xi0
from ddfwsc.fading import derive_stream
from ddfwsc.link import (
    SystemParams,
    decision_variable,
    diff_encode,
    estimate_relay_snr,
    relay_detect,
    simulate_block,
)


class TestDiffEncode:
    def test_direct_recursion(self):
        out = diff_encode(np.array([1, -1, -1]))
        assert out.tolist() == [1, 1, -1, 1]

    def test_all_ones_identity(self):
        out = diff_encode(np.ones(5, dtype=int))
        assert out.tolist() == [1] * 6

    def test_round_trip(self):
        rng = np.random.default_rng(0)
        bits = np.where(rng.random(100) > 0.5, 1, -1)
        s = diff_encode(bits)
        decoded = relay_detect(s.astype(complex))
        assert np.array_equal(decoded, bits)

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            diff_encode(np.array([]))


class TestDecisionVariable:
    def test_aligned(self):
        assert decision_variable(1 + 0j, 1 + 0j) == 1.0

    def test_orthogonal(self):
        assert decision_variable(1j, 1 + 0j) == 0.0

    def test_arithmetic(self):
        assert decision_variable(2 + 1j, 1 - 1j) == pytest.approx(1.0)


class TestRelayDetect:
    def test_noiseless(self):
        s = diff_encode(np.array([-1, 1])).astype(complex)
        assert relay_detect(s).tolist() == [-1, 1]

    def test_short_input_rejected(self):
        with pytest.raises(ValueError):
            relay_detect(np.array([1 + 0j]))

    def test_rayleigh_dbpsk_ber(self):
        # Relay BER over Rayleigh fading must match 1/(2(1+gbar1)).
        # Small blocks keep the fading-induced clustering negligible.
        gbar1 = 10.0
        rng = np.random.default_rng(123)
        L, blocks = 16, 62_500
        h = np.sqrt(0.5) * (rng.standard_normal((blocks, 1)) + 1j * rng.standard_normal((blocks, 1)))
        bits = np.where(rng.random((blocks, L)) > 0.5, 1, -1)
        s = np.concatenate([np.ones((blocks, 1)), np.cumprod(bits, axis=1)], axis=1)
        n = np.sqrt(0.5) * (rng.standard_normal((blocks, L + 1)) + 1j * rng.standard_normal((blocks, L + 1)))
        y = np.sqrt(gbar1) * h * s + n
        dec = np.where((y[:, 1:] * np.conj(y[:, :-1])).real >= 0, 1, -1)
        ber = np.mean(dec != bits)
        assert ber == pytest.approx(1 / (2 * (1 + gbar1)), abs=0.002)


class TestEstimateRelaySnr:
    def test_all_zero_clamps(self):
        assert estimate_relay_snr(np.zeros(10, dtype=complex), 9) == 0.0

    def test_noiseless_bias(self):
        # With P0|h1|^2 = 3 and no noise the estimator reads 3 - 1 = 2:
        # the noise-floor subtraction biases the clean-signal case.
        y = np.sqrt(3.0) * np.ones(257, dtype=complex)
        assert estimate_relay_snr(y, 256) == pytest.approx(2.0)

    def test_unbiased_mean(self):
        rng = np.random.default_rng(5)
        gamma1, L, trials = 5.0, 256, 10_000
        s = np.ones(L + 1)
        ests = np.empty(trials)
        for t in range(trials):
            n = np.sqrt(0.5) * (rng.standard_normal(L + 1) + 1j * rng.standard_normal(L + 1))
            ests[t] = estimate_relay_snr(np.sqrt(gamma1) * s + n, L)
        assert np.mean(ests) == pytest.approx(5.0, abs=0.05)

    def test_std_shrinks_with_block_length(self):
        rng = np.random.default_rng(6)
        stds = []
        for L in (64, 256, 1024):
            s = np.ones(L + 1)
            ests = [
                estimate_relay_snr(
                    np.sqrt(5.0) * s
                    + np.sqrt(0.5) * (rng.standard_normal(L + 1) + 1j * rng.standard_normal(L + 1)),
                    L,
                )
                for _ in range(2000)
            ]
            stds.append(np.std(ests))
        # std should scale roughly like 1/sqrt(L): each 4x in L halves it.
        assert stds[0] / stds[1] == pytest.approx(2.0, rel=0.25)
        assert stds[1] / stds[2] == pytest.approx(2.0, rel=0.25)


class TestSimulateBlock:
    def test_dead_relay_channel(self):
        params = SystemParams(p0_over_n0_db=10.0, sigma_sq=(1.0, 0.0, 1.0))
        obs = simulate_block(params, derive_stream(1, 0))
        # Relay sees pure noise; its decisions cannot track the data.
        mismatches = np.count_nonzero(obs.relay_bits != obs.tx_bits)
        assert 0 < mismatches < obs.tx_bits.size

    def test_noiseless_limit(self):
        params = SystemParams(p0_over_n0_db=80.0)
        obs = simulate_block(params, derive_stream(2, 0))
        assert np.array_equal(obs.relay_bits, obs.tx_bits)
        assert np.array_equal(np.sign(obs.xi0), obs.tx_bits)

    def test_high_relay_snr_forwards_faithfully(self):
        params = SystemParams(p0_over_n0_db=10.0, sigma_sq=(1.0, 10 ** 5, 1.0))
        errs = bits = 0
        for b in range(40):
            obs = simulate_block(params, derive_stream(3, b))
            errs += np.count_nonzero(obs.relay_bits != obs.tx_bits)
            bits += obs.tx_bits.size
        assert errs / bits < 1e-4

    def test_gamma1_exact_definition(self):
        params = SystemParams(p0_over_n0_db=13.0)
        obs = simulate_block(params, derive_stream(4, 7))
        assert obs.gamma1_exact >= 0
        assert np.isfinite(obs.gamma1_est)

    def test_xi0_matches_analytic_cdf(self):
        # Empirical CDF of the direct-link decision variable, conditioned
        # on d(k) = +1, against the closed-form CDF at gbar0 = 5.
        # Short blocks: the sup-distance noise floor scales with the number
        # of independent fading draws, not the number of bits.
        params = SystemParams(p0_over_n0_db=10 * np.log10(5.0), block_len=4)
        samples = []
        for b in range(40_000):
            obs = simulate_block(params, derive_stream(42, b))
            samples.append(obs.xi0 * obs.tx_bits)
        x = np.sort(np.concatenate(samples))
        ctx = ClosedFormContext(5.0, 5.0, 5.0)
        emp = np.arange(1, x.size + 1) / x.size
        sup = np.max(np.abs(emp - cdf_xi0(x, ctx)))
        assert sup < 0.01

    def test_lar_equals_relay_branch_when_beta_one(self):
        # Huge gamma1 saturates the LAR factor at 1, so the LAR branch must
        # reuse the relay-link observables bit for bit.
        params = SystemParams(p0_over_n0_db=10.0, sigma_sq=(1.0, 10 ** 5, 1.0))
        obs = simulate_block(params, derive_stream(8, 1))
        assert obs.gamma1_exact >= params.gamma_bars[2]
        assert np.array_equal(obs.xiL, obs.xi2)

    def test_invalid_params(self):
        with pytest.raises(ValueError):
            SystemParams(p0_over_n0_db=0.0, block_len=0)
        with pytest.raises(ValueError):
            SystemParams(p0_over_n0_db=0.0, sigma_sq=(-1.0, 1.0, 1.0))
        with pytest.raises(ValueError):
            SystemParams(p0_over_n0_db=0.0, snr_mode="guess")
