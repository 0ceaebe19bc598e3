"""Prime fields, [0,1]-valued functions on them, and their Fourier spectra.

Sign convention: the forward transform is ``fhat(a) = sum_n f(n) e^{+2 pi i a n / p}``
and the inverse carries ``e^{-2 pi i a n / p}`` with a ``1/p`` factor.
Convolution is ``(f*g)(n) = sum_m f(m) g(n - m)``, so that
``(f*g)(n) = p^{-1} sum_a fhat(a) ghat(a) e^{-2 pi i a n / p}``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence

import numpy as np
from sympy import isprime

from . import kernels
from .errors import CompositeModulus, FieldMismatch, InputError, OutOfRange, SpectrumError

VALUE_TOL = 1e-12
IMAG_TOL = 1e-9
# Relative width of a magnitude tie block in order_spectrum.
TIE_RTOL = 1e-12


@dataclass(frozen=True)
class PrimeField:
    p: int

    def __post_init__(self):
        p = self.p
        if isinstance(p, bool) or not isinstance(p, (int, np.integer)):
            raise InputError(f"modulus must be an integer, got {p!r}")
        object.__setattr__(self, "p", int(p))
        if p < 3:
            raise InputError(f"modulus must be at least 3, got {p}")
        if not isprime(int(p)):
            raise CompositeModulus(f"composite modulus: {p} is not prime")

    def residue(self, x: int) -> int:
        return int(x) % self.p

    def inverse(self, x: int) -> int:
        x = int(x) % self.p
        if x == 0:
            raise ZeroDivisionError("0 has no inverse mod p")
        return pow(x, -1, self.p)


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr = np.array(arr, copy=True)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class DensityFunction:
    """A function ``F_p -> [0, 1]``.

    In indicator mode the values are exactly 0/1 and ``support`` is the set
    whose indicator this is; convolutions then run on exact integers.
    """

    field: PrimeField
    values: np.ndarray
    indicator: bool = False

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=np.float64)
        p = self.field.p
        if vals.shape != (p,):
            raise InputError(f"expected {p} values, got shape {vals.shape}")
        if not np.all(np.isfinite(vals)):
            raise InputError("values must be finite")
        if self.indicator:
            if not np.all((vals == 0.0) | (vals == 1.0)):
                raise InputError("indicator values must be exactly 0 or 1")
        else:
            lo, hi = vals.min(), vals.max()
            if lo < -VALUE_TOL or hi > 1 + VALUE_TOL:
                raise OutOfRange(f"values must lie in [0, 1]; found range [{lo}, {hi}]")
            vals = np.clip(vals, 0.0, 1.0)
        object.__setattr__(self, "values", _frozen(vals))

    @classmethod
    def from_set(cls, field: PrimeField, residues: Iterable[int]) -> "DensityFunction":
        vals = np.zeros(field.p)
        for r in residues:
            r = int(r)
            if not 0 <= r < field.p:
                raise OutOfRange(f"residue {r} out of range for p={field.p}")
            vals[r] = 1.0
        return cls(field, vals, indicator=True)

    @classmethod
    def from_values(cls, field: PrimeField, values: Sequence[float]) -> "DensityFunction":
        return cls(field, np.asarray(values, dtype=np.float64))

    @property
    def p(self) -> int:
        return self.field.p

    @property
    def theta(self) -> float:
        """Mean value of the function."""
        return float(self.values.sum()) / self.p

    @property
    def support(self) -> np.ndarray:
        return np.flatnonzero(self.values)

    def is_zero(self) -> bool:
        return not np.any(self.values)


@dataclass(frozen=True, eq=False)
class Spectrum:
    field: PrimeField
    coeffs: np.ndarray
    order: np.ndarray
    magnitudes: np.ndarray

    @property
    def p(self) -> int:
        return self.field.p

    def top(self, k: int) -> list[int]:
        """The frequencies a_1..a_k."""
        return [int(a) for a in self.order[:k]]

    def lam(self, i: int) -> float:
        """|lambda_i| for 1-based rank i."""
        return float(self.magnitudes[i - 1])


@dataclass(frozen=True)
class GapCertificate:
    k: int
    gamma: float
    lambda_k: float
    lambda_k1: float

    def __post_init__(self):
        if not self.lambda_k > 0:
            raise SpectrumError(f"lambda_{self.k} is zero; no gap certificate exists")
        if self.lambda_k1 > self.gamma * self.lambda_k * (1 + 1e-12):
            raise SpectrumError("certificate does not witness the stated gap")


class Inversion(NamedTuple):
    values: np.ndarray
    imag_residue: float
    # True when a nonzero (but negligible) imaginary part was dropped.
    discarded_imag: bool


def _check_field(a: PrimeField, b: PrimeField):
    if a.p != b.p:
        raise FieldMismatch(f"field mismatch: p={a.p} vs p={b.p}")


def fourier(values, method: str = "fast") -> np.ndarray:
    """Raw forward transform of a length-p complex sequence."""
    values = np.asarray(values, dtype=np.complex128)
    if method == "fast":
        return values.shape[0] * np.fft.ifft(values)
    if method == "direct":
        return kernels.direct_dft(np.ascontiguousarray(values), 1)
    raise ValueError(f"unknown transform method {method!r}")


def inverse_fourier(coeffs, method: str = "fast") -> np.ndarray:
    """Raw inverse transform (complex output)."""
    coeffs = np.asarray(coeffs, dtype=np.complex128)
    p = coeffs.shape[0]
    if method == "fast":
        return np.fft.fft(coeffs) / p
    if method == "direct":
        return kernels.direct_dft(np.ascontiguousarray(coeffs), -1) / p
    raise ValueError(f"unknown transform method {method!r}")


def order_spectrum(coeffs) -> tuple[np.ndarray, np.ndarray]:
    """Sort frequencies by decreasing magnitude, ties by ascending frequency.

    Magnitudes equal up to ``TIE_RTOL * max`` are treated as tied (so a
    conjugate pair is ordered by index, not by rounding noise) and the
    reported magnitude of every member of a tie block is the block maximum.
    Magnitudes at or below the tie width are reported as exactly 0.
    """
    mags = np.abs(np.asarray(coeffs, dtype=np.complex128))
    p = mags.shape[0]
    top = mags.max() if p else 0.0
    width = TIE_RTOL * top
    order = np.lexsort((np.arange(p), -mags))
    sorted_mags = mags[order]
    out_order = np.empty(p, dtype=np.int64)
    out_mags = np.empty(p, dtype=np.float64)
    i = 0
    while i < p:
        j = i + 1
        while j < p and sorted_mags[j - 1] - sorted_mags[j] <= width:
            j += 1
        block = np.sort(order[i:j])
        level = sorted_mags[i] if sorted_mags[i] > width else 0.0
        out_order[i:j] = block
        out_mags[i:j] = level
        i = j
    return out_order, out_mags


def dft(f: DensityFunction, method: str = "fast") -> Spectrum:
    coeffs = fourier(f.values, method)
    if f.indicator or np.all(f.values >= 0):
        # fhat(0) = sum f is real and exactly computable.
        coeffs[0] = float(np.sum(f.values))
    order, mags = order_spectrum(coeffs)
    return Spectrum(f.field, _frozen(coeffs), _frozen(order), _frozen(mags))


def spectrum_from_coeffs(field: PrimeField, coeffs) -> Spectrum:
    coeffs = np.asarray(coeffs, dtype=np.complex128)
    if coeffs.shape != (field.p,):
        raise InputError(f"expected {field.p} coefficients, got shape {coeffs.shape}")
    order, mags = order_spectrum(coeffs)
    return Spectrum(field, _frozen(coeffs), _frozen(order), _frozen(mags))


def idft(s: Spectrum, method: str = "fast", tol: float = IMAG_TOL) -> Inversion:
    """Invert a spectrum to a real sequence.

    Raises SpectrumError if the imaginary part exceeds ``tol`` anywhere.
    """
    z = inverse_fourier(s.coeffs, method)
    resid = float(np.max(np.abs(z.imag))) if z.size else 0.0
    if resid > tol:
        raise SpectrumError(
            f"spectrum does not invert to a real function (imaginary residue {resid:.3g})"
        )
    return Inversion(z.real.copy(), resid, resid > 0.0)


def _as_complex(g, p: int) -> np.ndarray:
    if isinstance(g, DensityFunction):
        return g.values.astype(np.complex128)
    g = np.asarray(g, dtype=np.complex128)
    if g.shape != (p,):
        raise FieldMismatch(f"sequence of length {g.shape} does not live on F_{p}")
    return g


def convolve(f: DensityFunction, g, method: str = "transform") -> np.ndarray:
    """``(f*g)(n) = sum_m f(m) g(n - m)``.

    When both arguments are indicator functions the result is an exact
    int64 array of representation counts regardless of ``method``.
    Otherwise ``method`` is ``"transform"`` (FFT) or ``"direct"`` (O(p^2)
    double loop). Real inputs give a real array.
    """
    p = f.p
    if isinstance(g, DensityFunction):
        _check_field(f.field, g.field)
        if f.indicator and g.indicator:
            return kernels.pair_sum_counts(
                np.ascontiguousarray(f.support, dtype=np.int64),
                np.ascontiguousarray(g.support, dtype=np.int64),
                p,
            )
    gv = _as_complex(g, p)
    fv = f.values.astype(np.complex128)
    if method == "transform":
        out = np.fft.fft(fourier(fv) * fourier(gv)) / p
    elif method == "direct":
        out = kernels.direct_convolve(fv, np.ascontiguousarray(gv))
    else:
        raise ValueError(f"unknown convolution method {method!r}")
    if np.isrealobj(g) or isinstance(g, DensityFunction):
        return out.real.copy()
    return out


def modulate(f: DensityFunction, d: int) -> np.ndarray:
    """``g(n) = e^{2 pi i d n / p} f(n)``; its transform is ``fhat(a + d)``."""
    p = f.p
    n = np.arange(p)
    phase = np.exp(2j * np.pi * ((int(d) * n) % p) / p)
    return phase * f.values


def gap_ratio(s: Spectrum, k: int) -> GapCertificate:
    if not 1 <= k <= s.p - 1:
        raise SpectrumError(f"k must lie in [1, p-1], got {k}")
    lk, lk1 = s.lam(k), s.lam(k + 1)
    if lk <= 0:
        raise SpectrumError(f"lambda_{k} is zero; no gap certificate exists")
    return GapCertificate(k=k, gamma=lk1 / lk, lambda_k=lk, lambda_k1=lk1)


def positive_count(values, p: int, tol: float = 1e-9) -> int:
    """Count entries that are positive: exact for integer arrays, ``> tol*p`` otherwise."""
    values = np.asarray(values)
    if np.issubdtype(values.dtype, np.integer):
        return int(np.count_nonzero(values > 0))
    return int(np.count_nonzero(values > tol * p))
