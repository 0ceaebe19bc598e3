import numpy as np

from specgap.field import DensityFunction, PrimeField


def random_function(p, rng, indicator=False):
    field = PrimeField(p)
    if indicator:
        size = int(rng.integers(1, p))
        return DensityFunction.from_set(field, rng.choice(p, size=size, replace=False))
    return DensityFunction(field, rng.random(p))


def smooth_mixture(p, rng, terms=3):
    """1/2 + a random cosine mixture with total amplitude at most 1/2."""
    n = np.arange(p)
    freqs = rng.integers(1, p, size=terms)
    amps = rng.dirichlet(np.ones(terms)) * rng.uniform(0.05, 0.5)
    phases = rng.uniform(0, 2 * np.pi, size=terms)
    vals = 0.5 + sum(a * np.cos(2 * np.pi * ((f * n) % p) / p + ph) for f, a, ph in zip(freqs, amps, phases))
    return DensityFunction(PrimeField(p), np.clip(vals, 0.0, 1.0))
