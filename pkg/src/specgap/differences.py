"""Representation counts of differences, and constructions of rare differences.

Every difference returned from this module has its representation count
certified by exact enumeration, whichever path produced it.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Optional

import numpy as np

from . import kernels
from .diophantine import DilationWitness, balanced, find_dilation
from .errors import HypothesisError, InputError, NoUniqueDifference, OutOfRange
from .field import PrimeField

MAX_TRIES = 100


def residue_set(residues: Iterable[int], p: int, name: str = "set") -> tuple[int, ...]:
    """Validate residues and return them sorted."""
    out = []
    for r in residues:
        r = int(r)
        if not 0 <= r < p:
            raise OutOfRange(f"{name}: residue {r} out of range for p={p}")
        out.append(r)
    if len(set(out)) != len(out):
        raise InputError(f"{name}: residues must be distinct")
    if not out:
        raise InputError(f"{name}: must be nonempty")
    return tuple(sorted(out))


@dataclass(frozen=True, eq=False)
class RepTable:
    """``counts[d] = #{(b1, b2) in B1 x B2 : b1 - b2 = d}``."""

    field: PrimeField
    B1: tuple[int, ...]
    B2: tuple[int, ...]
    counts: np.ndarray

    def nu(self, d: int) -> int:
        return int(self.counts[int(d) % self.field.p])

    def witness(self, d: int) -> tuple[int, int]:
        """Some pair (b1, b2) with b1 - b2 = d."""
        p = self.field.p
        s1 = set(self.B1)
        for b2 in self.B2:
            b1 = (int(d) + b2) % p
            if b1 in s1:
                return b1, b2
        raise NoUniqueDifference(f"{d} is not in B1 - B2")

    def unique(self) -> np.ndarray:
        return np.flatnonzero(self.counts == 1)

    def as_dict(self) -> dict[int, int]:
        return {int(d): int(self.counts[d]) for d in np.flatnonzero(self.counts)}


def rep_table(B1: Iterable[int], B2: Iterable[int], field: PrimeField) -> RepTable:
    p = field.p
    b1 = residue_set(B1, p, "B1")
    b2 = residue_set(B2, p, "B2")
    counts = kernels.pair_sum_counts(
        np.asarray(b1, dtype=np.int64),
        np.asarray([-b for b in b2], dtype=np.int64),
        p,
    )
    counts.setflags(write=False)
    return RepTable(field, b1, b2, counts)


@dataclass(frozen=True)
class UniqueDifference:
    d: int
    witness: tuple[int, int]
    method: str  # "constructive" or "exhaustive"
    dilation: Optional[DilationWitness] = None


def _smallest_unique(table: RepTable) -> UniqueDifference:
    ds = table.unique()
    if ds.size == 0:
        raise NoUniqueDifference("no difference has a unique representation")
    d = int(ds[0])
    return UniqueDifference(d, table.witness(d), "exhaustive")


def find_unique_difference(
    B: Iterable[int], field: PrimeField, method: str = "auto"
) -> UniqueDifference:
    """A difference with exactly one representation in ``B - B``.

    ``constructive`` dilates B into ``(-p/4, p/4)`` and takes max minus min;
    it needs ``p > 4**|B|``. ``exhaustive`` returns the smallest unique
    difference. ``auto`` picks constructive whenever it applies.
    """
    p = field.p
    b = residue_set(B, p, "B")
    t = len(b)
    table = rep_table(b, b, field)
    if method == "auto":
        method = "constructive" if p > 4**t else "exhaustive"
    if method == "exhaustive":
        return _smallest_unique(table)
    if method != "constructive":
        raise ValueError(f"unknown method {method!r}")
    if not p > 4**t:
        raise HypothesisError(f"constructive path needs p > 4^t; p={p}, t={t}")

    w = find_dilation(b, field)
    c = {x: balanced(w.m * x, p) for x in b}
    if any(4 * abs(v) >= p for v in c.values()):
        raise AssertionError(f"dilated set escapes (-p/4, p/4): m={w.m}")
    bx = min(b, key=c.__getitem__)
    by = max(b, key=c.__getitem__)
    d = (by - bx) % p
    if table.nu(d) != 1:
        raise AssertionError(f"constructive difference {d} is not unique")
    return UniqueDifference(d, (by, bx), "constructive", w)


def _interval_candidates(
    B1: tuple[int, ...], B2: tuple[int, ...], m: int, p: int
) -> list[tuple[int, int, int]]:
    """Candidate differences from the largest empty arc of ``m*B1``.

    Returns ``(d, c1, c2)`` triples in original coordinates, lower endpoint first.
    """
    minv = pow(m, -1, p)
    c1 = sorted((m * b) % p for b in B1)
    n = len(c1)
    best, u, v = -1, None, None
    for i in range(n):
        lo = c1[i]
        hi = c1[(i + 1) % n] + (p if i == n - 1 else 0)
        if hi - lo > best:
            best, u, v = hi - lo, lo, hi % p
    c2 = [balanced(m * b, p) for b in B2]
    lo2, hi2 = min(c2), max(c2)
    out = []
    for end, c in ((u, lo2), (v, hi2)):
        dd = (end - c) % p
        out.append(((dd * minv) % p, (end * minv) % p, (c * minv) % p))
    return out


def _interval_unique(table: RepTable, B1, B2, m: int, p: int) -> Optional[tuple[int, tuple[int, int]]]:
    for d, b1, b2 in _interval_candidates(B1, B2, m, p):
        if table.nu(d) == 1:
            return d, (b1, b2)
    return None


def lemma3_unique(
    B1: Iterable[int], B2: Iterable[int], field: PrimeField, allow_equality: bool = False
) -> UniqueDifference:
    """A difference with a unique representation ``b1 - b2``, for small ``B2``.

    Requires ``1 <= |B1| <= p/2`` and ``3 |B2| ln|B1| < ln p`` (``<=`` with
    ``allow_equality``). Dilates ``B2`` close to 0, then reads the answer
    off either end of the largest empty arc of the dilated ``B1``; falls
    back to the smallest unique difference if neither end certifies.
    """
    p = field.p
    b1 = residue_set(B1, p, "B1")
    b2 = residue_set(B2, p, "B2")
    if not 2 * len(b1) <= p:
        raise HypothesisError(f"|B1| = {len(b1)} exceeds p/2")
    lhs, lnp = 3 * len(b2) * math.log(len(b1)), math.log(p)
    if not (lhs < lnp or (allow_equality and abs(lhs - lnp) <= 1e-12 * lnp)):
        raise HypothesisError(
            "3|B2| ln|B1| >= ln p; use lemma3_few_reps for this pair"
        )
    table = rep_table(b1, b2, field)
    if len(b1) == 1:
        # B1 - B2 is a reflected translate of B2: every element is unique.
        d = min((b1[0] - y) % p for y in b2)
        return UniqueDifference(d, table.witness(d), "constructive")

    w = find_dilation(b2, field)
    hit = _interval_unique(table, b1, b2, w.m, p)
    if hit is not None:
        return UniqueDifference(hit[0], hit[1], "constructive", w)
    return _smallest_unique(table)


@dataclass(frozen=True)
class FewRepsResult:
    d: int
    bound: float
    nu: int
    path: str  # "randomized" or "exhaustive"
    attempts: int
    subset_size: int
    bound_violation: bool


def few_reps_bound(n1: int, n2: int, p: int) -> float:
    return 20 * n2 * math.log(n1) ** 2 / math.log(p)


def min_rep_difference(table: RepTable) -> tuple[int, int]:
    """Smallest d in B1 - B2 attaining the minimum representation count."""
    present = np.flatnonzero(table.counts)
    vals = table.counts[present]
    d = int(present[np.argmin(vals)])
    return d, int(table.counts[d])


def lemma3_few_reps(
    B1: Iterable[int],
    B2: Iterable[int],
    field: PrimeField,
    seed: int,
    max_tries: int = MAX_TRIES,
) -> FewRepsResult:
    """A difference in ``B1 - B2`` with at most ``20|B2|(ln|B1|)^2/ln p`` representations.

    Samples ``B' in B2`` with per-element probability ``ln p / (3|B2| ln|B1|)``,
    keeps it when ``0 < |B'| < ln p / (2 ln|B1|)``, and extracts a difference
    unique against ``B'`` from the largest empty arc of a dilate of ``B1``.
    That difference is accepted if its count against ``B2`` meets the bound.
    After ``max_tries`` rejected samples the exhaustive minimiser is used.
    A bound miss at that point is reported via ``bound_violation``.
    """
    p = field.p
    b1 = residue_set(B1, p, "B1")
    b2 = residue_set(B2, p, "B2")
    n1, n2 = len(b1), len(b2)
    if not (10 <= n1 and 2 * n1 <= p):
        raise HypothesisError(f"need 10 <= |B1| <= p/2, got |B1| = {n1}")
    lnp, ln1 = math.log(p), math.log(n1)
    if not 3 * n2 * ln1 > lnp:
        raise HypothesisError("3|B2| ln|B1| <= ln p; use lemma3_unique for this pair")

    bound = few_reps_bound(n1, n2, p)
    q = lnp / (3 * n2 * ln1)
    size_cap = lnp / (2 * ln1)
    table = rep_table(b1, b2, field)
    rng = np.random.default_rng(seed)

    for attempt in range(1, max_tries + 1):
        keep = rng.random(n2) < q
        sub = tuple(x for x, k in zip(b2, keep) if k)
        if not 0 < len(sub) < size_cap:
            continue
        w = find_dilation(sub, field)
        sub_table = rep_table(b1, sub, field)
        hit = _interval_unique(sub_table, b1, sub, w.m, p)
        if hit is None:
            continue
        d = hit[0]
        if table.nu(d) <= bound:
            return FewRepsResult(d, bound, table.nu(d), "randomized", attempt, len(sub), False)

    d, nu = min_rep_difference(table)
    return FewRepsResult(d, bound, nu, "exhaustive", max_tries, 0, nu > bound)
