import numpy as np
import pytest

from specgap import kernels

from . import oracles


def test_backend_is_reported():
    assert kernels.BACKEND in kernels.backends()


@pytest.mark.parametrize("p", [3, 5, 7, 31])
def test_direct_dft_matches_bruteforce(backend, rng, p):
    v = rng.random(p) + 1j * rng.random(p)
    want = np.array(oracles.dft(list(v), p))
    np.testing.assert_allclose(backend.direct_dft(v, 1), want, atol=1e-10)
    np.testing.assert_allclose(backend.direct_dft(v, -1), np.conj(oracles.dft(list(np.conj(v)), p)), atol=1e-10)


@pytest.mark.parametrize("p", [3, 11, 37])
def test_direct_convolve_matches_bruteforce(backend, rng, p):
    f = rng.random(p) + 1j * rng.random(p)
    g = rng.random(p) - 0.5j * rng.random(p)
    f[rng.random(p) < 0.3] = 0
    want = np.array(oracles.convolve(list(f), list(g), p))
    np.testing.assert_allclose(backend.direct_convolve(f, g), want, atol=1e-10)


def test_pair_sum_counts_handles_negative_inputs(backend):
    xs = np.array([0, 1, 4], dtype=np.int64)
    ys = np.array([0, -1, -4], dtype=np.int64)
    counts = backend.pair_sum_counts(xs, ys, 5)
    want = oracles.rep_counts([0, 1, 4], [0, 1, 4], 5)
    assert counts.tolist() == [want.get(d, 0) for d in range(5)]


@pytest.mark.parametrize("p,rs,cap,expected", [
    (7, [3], 1, 2),
    (101, [3, 7], 10, None),
    (11, [0, 0], 0, 1),
    (13, [1], 0, 0),  # nothing maps 1 to 0
])
def test_dilation_scan(backend, p, rs, cap, expected):
    m = backend.dilation_scan(np.array(rs, dtype=np.int64), p, cap)
    if expected is None:
        brute = next(m for m in range(1, p) if all(min((m * r) % p, p - (m * r) % p) <= cap for r in rs))
        assert m == brute
    else:
        assert m == expected


def test_backends_agree(rng):
    found = kernels.backends()
    if len(found) < 2:
        pytest.skip("compiled extension not built")
    py, cy = found["python"], found["cython"]
    p = 257
    v = rng.random(p) + 1j * rng.random(p)
    np.testing.assert_allclose(py.direct_dft(v, 1), cy.direct_dft(v, 1), rtol=1e-12, atol=1e-10)
    g = rng.random(p).astype(complex)
    np.testing.assert_allclose(py.direct_convolve(v, g), cy.direct_convolve(v, g), rtol=1e-12, atol=1e-10)
    xs = rng.choice(p, 40, replace=False).astype(np.int64)
    assert np.array_equal(py.pair_sum_counts(xs, -xs, p), cy.pair_sum_counts(xs, -xs, p))
    rs = rng.choice(p, 3).astype(np.int64)
    assert py.dilation_scan(rs, p, 40) == cy.dilation_scan(rs, p, 40)
