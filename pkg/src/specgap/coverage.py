"""Spectral-gap lower bounds for the support of ``f*f``.

A gap ``|lambda_{k+1}| <= gamma |lambda_k|`` with ``4**k < p`` forces

    |{n : (f*f)(n) > 0}| >= p (1 - 2 theta p^2 gamma^2 / lambda_k^2).

The report reproduces the argument numerically: it picks a difference ``d``
with a unique representation ``a_y - a_x`` among the top-k frequencies,
splits ``(f*g)(n)`` (with ``g`` the d-modulate of ``f``) into a main term of
constant modulus plus an error ``E(n)``, checks the L2 budget on ``E`` and
counts the points where the main term dominates.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Iterable, Optional

import numpy as np

from .differences import find_unique_difference
from .errors import NoUniqueDifference, SpectrumError
from .field import (
    DensityFunction,
    PrimeField,
    Spectrum,
    convolve,
    dft,
    gap_ratio,
    positive_count,
)

log = logging.getLogger(__name__)

L2_SLACK = 1e-6


def theorem1_bound(p: int, theta: float, gamma: float, lambda_k: float) -> float:
    if not lambda_k > 0:
        raise SpectrumError("lambda_k must be positive")
    return max(0.0, p * (1.0 - 2.0 * theta * p * p * gamma * gamma / (lambda_k * lambda_k)))


def t1_in_hypothesis(k: int, p: int) -> bool:
    """``1 <= k < ln p / ln 4``, decided exactly as ``4**k < p``."""
    return k >= 1 and 4**k < p


@dataclass(frozen=True)
class GapDifference:
    d: int
    a_x: int
    a_y: int
    method: str


def select_gap_difference(s: Spectrum, k: int) -> GapDifference:
    """Unique difference ``d = a_y - a_x`` within the top-k frequencies."""
    A = s.top(k)
    if k == 1:
        return GapDifference(0, A[0], A[0], "singleton")
    u = find_unique_difference(A, s.field, "auto")
    a_y, a_x = u.witness
    return GapDifference(u.d, a_x, a_y, u.method)


@dataclass(frozen=True, eq=False)
class ErrorProfile:
    values: np.ndarray
    l2: float
    l2_budget: float
    good_count: int
    threshold: float
    main_modulus: float
    margin: float = 0.0

    @property
    def good_mask(self) -> np.ndarray:
        """Points where the error is below ``lambda_k^2 / p`` by more than ``margin``."""
        return np.abs(self.values) < self.threshold - self.margin


def error_profile(
    f: DensityFunction, s: Spectrum, k: int, d: int, a_x: int, tol: float = 1e-9
) -> ErrorProfile:
    """``E(n) = p^{-1} sum_{a != a_x} e^{-2 pi i a n/p} fhat(a) fhat(a + d)``.

    A point is good when ``|E(n)|`` clears ``lambda_k^2 / p`` by ``tol * p``;
    points within rounding of the threshold are not counted.
    """
    p = s.p
    if not (0 <= a_x < p and 0 <= d < p):
        raise IndexError("d and a_x must be residues mod p")
    cert = gap_ratio(s, k)
    coeffs = np.asarray(s.coeffs)
    h = coeffs * np.roll(coeffs, -d)
    main = abs(h[a_x]) / p
    h[a_x] = 0.0
    E = np.fft.fft(h) / p
    threshold = cert.lambda_k**2 / p
    l2 = float(np.sum(np.abs(E) ** 2))
    budget = 2.0 * cert.gamma**2 * cert.lambda_k**2 * float(coeffs[0].real)
    margin = tol * p
    good = int(np.count_nonzero(np.abs(E) < threshold - margin))
    E.setflags(write=False)
    return ErrorProfile(E, l2, budget, good, threshold, main, margin)


@dataclass(frozen=True)
class CoverageReport:
    p: int
    k: int
    gamma: float
    theta: float
    lambda_k: float
    bound: float
    exact_support: int
    slack: float
    d: Optional[int]
    a_x: Optional[int]
    a_y: Optional[int]
    in_hypothesis: bool
    difference_method: Optional[str]
    good_count: Optional[int]
    l2_error: Optional[float]
    l2_budget: Optional[float]
    eps_pos: float
    falsifications: tuple[str, ...] = ()


def theorem1_report(f: DensityFunction, k: int, tol: float = 1e-9) -> CoverageReport:
    """Bound, exact support and internal checks of the argument for one ``(f, k)``.

    Out-of-hypothesis k is allowed; the bound is still evaluated but only the
    checks that do not depend on ``4**k < p`` can raise falsification flags.
    """
    if f.is_zero():
        raise SpectrumError("f is identically zero")
    p = f.p
    s = dft(f)
    cert = gap_ratio(s, k)
    theta = f.theta
    bound = theorem1_bound(p, theta, cert.gamma, cert.lambda_k)
    ff = convolve(f, f)
    support = positive_count(ff, p, tol)
    inside = t1_in_hypothesis(k, p)
    flags = []

    try:
        gd = select_gap_difference(s, k)
    except NoUniqueDifference:
        gd = None
    prof = None
    if gd is not None:
        prof = error_profile(f, s, k, gd.d, gd.a_x, tol)
        if prof.l2 > prof.l2_budget + L2_SLACK:
            flags.append("l2_budget_exceeded")
        # (f*f)(n) >= |(f*g)(n)| >= main - |E(n)|, which is positive on good points
        floor = prof.main_modulus - np.abs(prof.values) - tol * p
        if np.any(prof.good_mask & (np.asarray(ff) < floor)):
            flags.append("good_point_uncovered")
        if support < prof.good_count:
            flags.append("good_count_exceeds_support")
    if inside and support < math.ceil(bound - 1e-9):
        flags.append("support_below_bound")
    for flag in flags:
        log.error("falsification: %s (p=%d, k=%d)", flag, p, k)

    return CoverageReport(
        p=p,
        k=k,
        gamma=cert.gamma,
        theta=theta,
        lambda_k=cert.lambda_k,
        bound=bound,
        exact_support=support,
        slack=support - bound,
        d=None if gd is None else gd.d,
        a_x=None if gd is None else gd.a_x,
        a_y=None if gd is None else gd.a_y,
        in_hypothesis=inside,
        difference_method=None if gd is None else gd.method,
        good_count=None if prof is None else prof.good_count,
        l2_error=None if prof is None else prof.l2,
        l2_budget=None if prof is None else prof.l2_budget,
        eps_pos=0.0 if f.indicator else tol * p,
        falsifications=tuple(flags),
    )


PROBE_FAMILIES = ("indicator-random", "interval", "ap-union", "spectral")


def _probe_function(field, family: str, k: int, rng: np.random.Generator) -> DensityFunction:
    p = field.p
    if family == "indicator-random":
        size = int(rng.integers(1, p // 2 + 1))
        return DensityFunction.from_set(field, rng.choice(p, size=size, replace=False))
    if family == "interval":
        length = int(rng.integers(1, p // 2 + 1))
        start = int(rng.integers(0, p))
        return DensityFunction.from_set(field, {(start + i) % p for i in range(length)})
    if family == "ap-union":
        members = set()
        for _ in range(int(rng.integers(1, 4))):
            start, step = int(rng.integers(0, p)), int(rng.integers(1, p))
            length = int(rng.integers(1, max(2, p // 6)))
            members.update((start + i * step) % p for i in range(length))
        return DensityFunction.from_set(field, members)
    if family == "spectral":
        # 1/2 + sum r_j cos(2 pi a_j n / p + phi_j): k-1 nonzero off-zero
        # coefficients when the a_j are distinct pairs, so the gap sits near k.
        pairs = max(1, (k - 1) // 2)
        freqs = rng.choice(np.arange(1, (p + 1) // 2), size=min(pairs, (p - 1) // 2), replace=False)
        amps = rng.dirichlet(np.ones(len(freqs))) * 0.5
        phases = rng.uniform(0, 2 * np.pi, size=len(freqs))
        n = np.arange(p)
        vals = 0.5 + sum(
            r * np.cos(2 * np.pi * a * n / p + ph) for a, r, ph in zip(freqs, amps, phases)
        )
        return DensityFunction(field, np.clip(vals, 0.0, 1.0))
    raise ValueError(f"unknown probe family {family!r}")


@dataclass(frozen=True)
class ProbeRow:
    k: int
    trials: int
    best_gamma_found: Optional[float]
    best_family: Optional[str]
    coverage_at_best: Optional[float]
    strong_count: int
    coverage_observed: Optional[float]
    bound_at_best: Optional[float]


def conjecture_probe(
    p: int,
    k_range: Iterable[int],
    trials: int,
    seed: int,
    strong_gap: float = 0.25,
    tol: float = 1e-9,
) -> list[ProbeRow]:
    """Empirical search for strong gaps at k beyond ``ln p / ln 4``.

    Trial ``j`` at ``k`` draws from family ``PROBE_FAMILIES[j % 4]`` with
    generator ``default_rng([seed, k, j])``. A trial counts as strong when
    its gap ratio at k is at most ``strong_gap``; ``coverage_observed`` is
    the smallest support fraction of ``f*f`` among strong trials.
    """
    field = PrimeField(p)
    rows = []
    for k in k_range:
        if not 1 <= k <= p - 1:
            raise ValueError(f"k={k} outside [1, p-1]")
        best = None
        strong = []
        for j in range(trials):
            rng = np.random.default_rng([seed, k, j])
            family = PROBE_FAMILIES[j % len(PROBE_FAMILIES)]
            f = _probe_function(field, family, k, rng)
            if f.is_zero():
                continue
            s = dft(f)
            if s.lam(k) <= 0:
                continue
            cert = gap_ratio(s, k)
            cover = positive_count(convolve(f, f), p, tol) / p
            if best is None or cert.gamma < best[0]:
                best = (cert.gamma, family, cover, theorem1_bound(p, f.theta, cert.gamma, cert.lambda_k))
            if cert.gamma <= strong_gap:
                strong.append(cover)
        rows.append(
            ProbeRow(
                k=k,
                trials=trials,
                best_gamma_found=None if best is None else best[0],
                best_family=None if best is None else best[1],
                coverage_at_best=None if best is None else best[2],
                strong_count=len(strong),
                coverage_observed=min(strong) if strong else None,
                bound_at_best=None if best is None else best[3] / p,
            )
        )
    return rows
