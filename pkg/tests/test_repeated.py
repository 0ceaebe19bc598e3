import math
import warnings

import numpy as np
import pytest

from specgap.corpus import generate
from specgap.errors import HypothesisError, InputError, SpectrumError
from specgap.field import DensityFunction, PrimeField, convolve, dft
from specgap.repeated import (
    PrecisionWarning,
    build_difference_chain,
    gamma_threshold,
    iterated_convolution,
    k_range_check,
    tfold_convolution,
    theorem2_report,
)

from . import oracles
from .helpers import random_function


def scan_bases(A, ds, p):
    members = set(A)
    return [b for b in range(p) if b in members and all((b + d) % p in members for d in ds)]


class TestChain:
    def test_two_point(self):
        c = build_difference_chain({1, 5}, PrimeField(67), seed=0)
        assert c.ds == (4,) and c.base == 1 and c.m == 1
        assert c.steps[0].method == "unique"

    def test_singleton(self):
        c = build_difference_chain({9}, PrimeField(67), seed=0)
        assert c.ds == () and c.base == 9 and c.m == 0

    @pytest.mark.parametrize("size", [2, 5, 8, 12, 20])
    def test_random_4099(self, size, rng):
        F = PrimeField(4099)
        for _ in range(5):
            A = rng.choice(4099, size, replace=False).tolist()
            c = build_difference_chain(A, F, seed=7)
            assert scan_bases(A, c.ds, 4099) == [c.base]
            assert c.base_candidates() == [c.base]
            for prev, nxt in zip(c.sets, c.sets[1:]):
                assert set(nxt) < set(prev)
            assert len(c.sets[-1]) == 1

    def test_seed_reproducible(self, rng):
        A = rng.choice(257, 30, replace=False).tolist()
        F = PrimeField(257)
        assert build_difference_chain(A, F, 3) == build_difference_chain(A, F, 3)

    def test_sets_follow_definition(self, rng):
        p = 101
        A = rng.choice(p, 15, replace=False).tolist()
        c = build_difference_chain(A, PrimeField(p), seed=1)
        members = set(A)
        for i, d in enumerate(c.ds):
            want = {b for b in c.sets[i] if (b + d) % p in members}
            assert set(c.sets[i + 1]) == want


class TestThresholds:
    def test_values(self):
        assert gamma_threshold(3, 0.5, 0.25 * 40, 40) == pytest.approx(1 / 24)
        assert gamma_threshold(3, 1.0, 17, 17) == pytest.approx(1 / 3)
        assert gamma_threshold(4, 0.5, 0.25 * 40, 40) == pytest.approx(0.015625)

    def test_errors(self):
        with pytest.raises(HypothesisError):
            gamma_threshold(2, 0.5, 1, 11)
        with pytest.raises(SpectrumError):
            gamma_threshold(3, 0.0, 1, 11)

    def test_k_range(self):
        assert k_range_check(1, 3, 101) is False
        lnp = math.log(101)
        assert lnp**2 * (15 * math.log(lnp)) ** -4 == pytest.approx(7.7e-5, rel=0.05)
        with pytest.raises(InputError):
            k_range_check(0, 3, 101)
        with pytest.raises(InputError):
            k_range_check(1, 3, 13)

    def test_k_range_large_p(self):
        # ln p = 1e6: the window is wide
        assert k_range_check(1, 3, 10**434295) is True


class TestTfold:
    @pytest.mark.parametrize("t", [2, 3, 5])
    def test_constant(self, t):
        f = DensityFunction(PrimeField(13), np.ones(13))
        assert np.allclose(tfold_convolution(f, t), 13 ** (t - 1), rtol=1e-12)

    def test_t2_is_convolve(self, rng):
        f = random_function(101, rng)
        assert np.allclose(tfold_convolution(f, 2), convolve(f, f), rtol=1e-9, atol=1e-9)

    @pytest.mark.parametrize("t", [3, 4])
    def test_matches_oracle(self, t, rng):
        f = random_function(31, rng)
        want = list(f.values)
        for _ in range(t - 1):
            want = oracles.convolve(want, list(f.values), 31)
        want = np.real(want)
        assert np.allclose(tfold_convolution(f, t), want, rtol=1e-6, atol=0)

    def test_iterated_matches_oracle(self, rng):
        xs = [rng.random(31) + 1j * rng.random(31) for _ in range(3)]
        want = oracles.convolve(oracles.convolve(list(xs[0]), list(xs[1]), 31), list(xs[2]), 31)
        assert np.allclose(iterated_convolution(xs), want, rtol=1e-9)

    def test_t_too_small(self, rng):
        with pytest.raises(InputError):
            tfold_convolution(random_function(11, rng), 1)

    def test_precision_warning(self):
        f = DensityFunction.from_set(PrimeField(11), {0})
        with pytest.warns(PrecisionWarning):
            tfold_convolution(f, 3)


class TestReport:
    def test_constant(self):
        f = DensityFunction(PrimeField(17), np.ones(17))
        v = theorem2_report(f, 1, 3, seed=0)
        assert v.gamma == 0 and v.gamma_ok
        assert v.positive_everywhere
        assert v.min_value == pytest.approx(17**2)
        assert not v.falsifications

    @pytest.mark.parametrize("p", [11, 101])
    def test_remark(self, p):
        v = theorem2_report(generate("spectral-remark", p), 3, 3, seed=0)
        assert v.gamma_ok and v.gamma < v.gamma_threshold
        assert v.positive_everywhere and v.min_value > v.eps_pos
        assert v.identity_error < 1e-6
        assert v.support_inclusion_ok
        assert not v.falsifications
        if p == 11:
            assert any(n.startswith("k_range_undefined") for n in v.notes)

    def test_remark_values(self):
        f = generate("spectral-remark", 11)
        tf = tfold_convolution(f, 3)
        want = np.real(oracles.convolve(oracles.convolve(list(f.values), list(f.values), 11), list(f.values), 11))
        assert np.allclose(tf, want, rtol=1e-9)
        assert tf.min() > 0

    def test_indicator_consistency(self, rng):
        field = PrimeField(101)
        f = DensityFunction.from_set(field, rng.choice(101, 50, replace=False))
        v = theorem2_report(f, 1, 3, seed=4)
        assert not v.in_hypothesis or v.positive_everywhere
        assert not v.falsifications

    @pytest.mark.parametrize("t", [3, 4])
    def test_random_identity(self, t, rng):
        for _ in range(5):
            f = random_function(31, rng)
            k = int(rng.integers(1, 5))
            if dft(f).lam(k) <= 0:
                continue
            with warnings.catch_warnings():
                warnings.simplefilter("ignore", PrecisionWarning)
                v = theorem2_report(f, k, t, seed=1)
            if v.identity_error is not None:
                assert v.identity_error < 1e-6
            assert "support_inclusion" not in v.falsifications

    def test_t_too_small(self):
        with pytest.raises(HypothesisError):
            theorem2_report(generate("spectral-remark", 11), 3, 2, seed=0)
