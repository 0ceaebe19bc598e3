"""Positivity of t-fold convolutions under a spectral gap.

The engine is a chain of differences ``d_1..d_m`` on the top-k frequency set
``A`` such that exactly one ``b`` has ``b, b + d_1, ..., b + d_m`` all in
``A``. Modulating ``m`` of the ``t`` copies of ``f`` by these differences
isolates a single main term in the Fourier inversion sum, and the t-fold
convolution is positive wherever that term beats the error.
"""
from __future__ import annotations

import logging
import math
import warnings
from dataclasses import dataclass
from typing import Iterable, Optional

import numpy as np

from . import kernels
from .differences import (
    lemma3_few_reps,
    lemma3_unique,
    min_rep_difference,
    rep_table,
    residue_set,
)
from .errors import ChainError, HypothesisError, InputError, SpectrumError
from .field import DensityFunction, PrimeField, dft, fourier, gap_ratio, modulate

log = logging.getLogger(__name__)

# Above this p the product of modulated copies is formed with FFTs instead of
# the O(p^2) direct kernel.
DIRECT_LIMIT = 4099
IDENTITY_RTOL = 1e-6


class PrecisionWarning(RuntimeWarning):
    pass


@dataclass(frozen=True)
class ChainStep:
    d: int
    method: str
    size_before: int
    size_after: int
    bound: float  # 20 |A_{i-1}| (ln|A|)^2 / ln p
    at_boundary: bool

    @property
    def bound_ok(self) -> bool:
        return self.size_after <= self.bound


@dataclass(frozen=True)
class DifferenceChain:
    field: PrimeField
    A: tuple[int, ...]
    ds: tuple[int, ...]
    sets: tuple[tuple[int, ...], ...]
    steps: tuple[ChainStep, ...]
    base: int

    @property
    def m(self) -> int:
        return len(self.ds)

    def base_candidates(self) -> list[int]:
        """Every b in F_p with b and all b + d_i in A, by a full scan."""
        p = self.field.p
        members = np.zeros(p, dtype=bool)
        members[list(self.A)] = True
        ok = members.copy()
        b = np.arange(p)
        for d in self.ds:
            ok &= members[(b + d) % p]
        return [int(x) for x in np.flatnonzero(ok)]


def build_difference_chain(A: Iterable[int], field: PrimeField, seed: int) -> DifferenceChain:
    """Shrink ``A_0 = A`` by ``A_i = {b in A_{i-1} : b + d_i in A}`` down to one point.

    While ``3|A_i| ln|A| > ln p`` each ``d_i`` comes from ``lemma3_few_reps``
    (or, when ``|A| < 10`` puts that lemma out of reach, from the exhaustive
    minimiser of the representation count). Once ``3|A_i| ln|A| <= ln p``
    the last difference comes from ``lemma3_unique``. A step that already
    leaves a single survivor ends the chain.
    """
    p = field.p
    A = residue_set(A, p, "A")
    n = len(A)
    if n == 1:
        return DifferenceChain(field, A, (), (A,), (), A[0])
    in_A = np.zeros(p, dtype=bool)
    in_A[list(A)] = True
    lnA, lnp = math.log(n), math.log(p)

    current = A
    ds, sets, steps = [], [A], []
    for step in range(1, n + 1):
        size = len(current)
        lhs = 3 * size * lnA
        at_boundary = abs(lhs - lnp) <= 1e-12 * lnp
        if lhs <= lnp or at_boundary:
            d = lemma3_unique(A, current, field, allow_equality=True).d
            method = "unique"
        elif n >= 10 and 2 * n <= p:
            res = lemma3_few_reps(A, current, field, seed=[seed, step])
            d, method = res.d, f"few_reps/{res.path}"
        else:
            d, _ = min_rep_difference(rep_table(A, current, field))
            method = "exhaustive_min"
        survivors = tuple(b for b in current if in_A[(b + d) % p])
        if len(survivors) >= size and size > 1:
            d, _ = min_rep_difference(rep_table(A, current, field))
            method = "exhaustive_min"
            survivors = tuple(b for b in current if in_A[(b + d) % p])
            if len(survivors) >= size:
                raise ChainError(f"no difference shrinks A_{step - 1} (size {size})")
        steps.append(
            ChainStep(d, method, size, len(survivors), 20 * size * lnA**2 / lnp, at_boundary)
        )
        ds.append(d)
        sets.append(survivors)
        current = survivors
        if len(current) == 1:
            break
    else:
        raise ChainError("difference chain did not terminate")

    chain = DifferenceChain(field, A, tuple(ds), tuple(sets), tuple(steps), current[0])
    return chain


def gamma_threshold(t: int, theta: float, lambda_k: float, p: int) -> float:
    """``t^{-1} theta^{2-t} (lambda_k / p)^{t-1}``."""
    if t < 3:
        raise HypothesisError("the threshold is stated for t >= 3")
    if not theta > 0:
        raise SpectrumError("theta must be positive")
    if not lambda_k > 0:
        raise SpectrumError("lambda_k must be positive")
    return theta ** (2 - t) * (lambda_k / p) ** (t - 1) / t


def k_range_check(k: int, t: int, p: int) -> bool:
    """``k < (ln p)^{t-1} (5 t ln ln p)^{2-2t}``."""
    if k < 1:
        raise InputError("k must be at least 1")
    if p < 16:
        raise InputError(f"p={p} is too small for the iterated-log window (need p >= 16)")
    lnp = math.log(p)
    log_limit = (t - 1) * math.log(lnp) - (2 * t - 2) * math.log(5 * t * math.log(lnp))
    return math.log(k) < log_limit


def tfold_convolution(f: DensityFunction, t: int) -> np.ndarray:
    """``n -> p^{-1} sum_a fhat(a)^t e^{-2 pi i a n / p}``.

    Emits PrecisionWarning when the largest term exceeds the smallest output
    by more than 2**52 (the result's small entries are then noise).
    """
    if t < 2:
        raise InputError("t must be at least 2")
    p = f.p
    F = fourier(f.values)
    F[0] = float(np.sum(f.values))
    out = (np.fft.fft(F**t) / p).real
    scale = float(np.max(np.abs(F))) ** t / p
    floor = float(np.min(np.abs(out)))
    if scale > 0 and (floor == 0 or scale / floor > 2.0**52):
        warnings.warn(
            f"t-fold convolution dynamic range exceeds 2^52 (p={p}, t={t})",
            PrecisionWarning,
            stacklevel=2,
        )
    return out


def iterated_convolution(seqs: list[np.ndarray]) -> np.ndarray:
    """Convolve complex sequences left to right; direct kernel for p <= DIRECT_LIMIT."""
    cur = np.ascontiguousarray(seqs[0], dtype=np.complex128)
    p = cur.shape[0]
    for nxt in seqs[1:]:
        nxt = np.ascontiguousarray(nxt, dtype=np.complex128)
        if p <= DIRECT_LIMIT:
            cur = kernels.direct_convolve(cur, nxt)
        else:
            cur = np.fft.fft(fourier(cur) * fourier(nxt)) / p
    return cur


@dataclass(frozen=True)
class Theorem2Verdict:
    p: int
    k: int
    t: int
    seed: int
    theta: float
    lambda_k: float
    gamma: float
    gamma_threshold: float
    gamma_ok: bool
    k_range_ok: bool
    in_hypothesis: bool
    positive_everywhere: bool
    min_value: float
    eps_pos: float
    chain: DifferenceChain
    identity_error: Optional[float]
    max_error: Optional[float]
    error_bound: float
    support_inclusion_ok: Optional[bool]
    notes: tuple[str, ...] = ()
    falsifications: tuple[str, ...] = ()


def theorem2_report(f: DensityFunction, k: int, t: int, seed: int, tol: float = 1e-9) -> Theorem2Verdict:
    """Evaluate the hypotheses and verify every numeric step of the positivity argument.

    The formal hypothesis flag and the empirical positivity check are kept
    separate: at desk-scale p the k-window is usually empty, but the chain,
    transform identity, error bound and support inclusion are still checked.
    """
    if f.is_zero():
        raise SpectrumError("f is identically zero")
    if t < 3:
        raise HypothesisError("t must be at least 3")
    p = f.p
    field = f.field
    s = dft(f)
    cert = gap_ratio(s, k)
    theta = f.theta
    thr = gamma_threshold(t, theta, cert.lambda_k, p)
    notes, flags = [], []
    try:
        k_ok = k_range_check(k, t, p)
    except InputError as exc:
        k_ok = False
        notes.append(f"k_range_undefined: {exc}")
    gamma_ok = cert.gamma < thr
    inside = gamma_ok and k_ok

    chain = build_difference_chain(s.top(k), field, seed)
    if len(chain.base_candidates()) != 1:
        flags.append("base_not_unique")
    if any(step.at_boundary for step in chain.steps):
        notes.append("chain_boundary_equality")

    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", PrecisionWarning)
        tf = tfold_convolution(f, t)
    if caught:
        notes.append("tfold_precision_limited")
    eps = tol * p
    min_value = float(tf.min())
    positive = min_value > eps
    scale = (theta * p) ** (t - 1)
    error_bound = t * cert.gamma * (theta * p) ** (t - 2) * cert.lambda_k

    identity_error = max_error = inclusion = None
    m = chain.m
    if m <= t:
        seqs = [f.values] * (t - m) + [modulate(f, d) for d in chain.ds]
        prod = iterated_convolution(seqs)
        coeffs = np.array(s.coeffs)
        predicted = coeffs ** (t - m)
        for d in chain.ds:
            predicted = predicted * np.roll(coeffs, -d)
        measured = fourier(prod, "direct" if p <= DIRECT_LIMIT else "fast")
        identity_error = float(np.max(np.abs(measured - predicted)) / max(np.max(np.abs(predicted)), 1e-300))
        if identity_error > IDENTITY_RTOL:
            flags.append("transform_identity")

        x = chain.base
        n = np.arange(p)
        main = predicted[x] * np.exp(-2j * np.pi * ((x * n) % p) / p) / p
        max_error = float(np.max(np.abs(prod - main)))
        if max_error > error_bound * (1 + 1e-9) + tol * scale:
            flags.append("error_bound_exceeded")

        mag = np.abs(prod)
        inclusion = bool(
            np.all(mag <= tf + tol * scale) and np.all((mag <= eps) | (tf > eps))
        )
        if not inclusion:
            flags.append("support_inclusion")
    else:
        notes.append(f"chain_longer_than_t: m={m}")

    if inside and not positive:
        flags.append("tfold_not_positive")
    for flag in flags:
        log.error("falsification: %s (p=%d, k=%d, t=%d)", flag, p, k, t)

    return Theorem2Verdict(
        p=p,
        k=k,
        t=t,
        seed=seed,
        theta=theta,
        lambda_k=cert.lambda_k,
        gamma=cert.gamma,
        gamma_threshold=thr,
        gamma_ok=gamma_ok,
        k_range_ok=k_ok,
        in_hypothesis=inside,
        positive_everywhere=positive,
        min_value=min_value,
        eps_pos=eps,
        chain=chain,
        identity_error=identity_error,
        max_error=max_error,
        error_bound=error_bound,
        support_inclusion_ok=inclusion,
        notes=tuple(notes),
        falsifications=tuple(flags),
    )
