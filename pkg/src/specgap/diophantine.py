"""Dirichlet box principle: dilations that make a few residues simultaneously small."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
from sympy import integer_nthroot

from . import kernels
from .errors import InputError, OutOfRange
from .field import PrimeField


def balanced(x: int, p: int) -> int:
    """Representative of ``x mod p`` in ``(-p/2, p/2]``."""
    x = int(x) % p
    return x if 2 * x <= p else x - p


def dirichlet_cap(p: int, t: int) -> int:
    """Largest integer c with ``c <= p**(1 - 1/t)``, computed exactly."""
    if t < 1:
        raise InputError("need at least one residue")
    root, _ = integer_nthroot(p ** (t - 1), t)
    return int(root)


@dataclass(frozen=True)
class DilationWitness:
    m: int
    bound: float
    achieved: int
    cap: int

    def max_distance(self, residues: Sequence[int], p: int) -> float:
        """Recompute ``max_i ||m r_i / p||`` from scratch."""
        worst = 0.0
        for r in residues:
            x = self.m * int(r) / p
            worst = max(worst, abs(x - round(x)))
        return worst


def scan_dilation(residues: Sequence[int], p: int, cap: int) -> int:
    """Smallest nonzero m with every ``|balanced(m r)| <= cap``; 0 if there is none."""
    rs = np.ascontiguousarray([int(r) % p for r in residues], dtype=np.int64)
    if cap >= p // 2:
        return 1
    return int(kernels.dilation_scan(rs, p, cap))


def find_dilation(residues: Sequence[int], field: PrimeField) -> DilationWitness:
    """Smallest m in 1..p-1 with ``|balanced(m r_i)| <= p**(1-1/t)`` for all i.

    The pigeonhole argument guarantees such an m; failing to find one is a bug.
    """
    p = field.p
    rs = list(residues)
    t = len(rs)
    for r in rs:
        if not 0 <= int(r) < p:
            raise OutOfRange(f"residue {r} out of range for p={p}")
    cap = dirichlet_cap(p, t)
    m = scan_dilation(rs, p, cap)
    if m == 0:
        raise AssertionError(f"box principle violated for p={p}, residues={rs}")
    achieved = max((abs(balanced(m * r, p)) for r in rs), default=0)
    return DilationWitness(m=m, bound=p ** (1 - 1 / t), achieved=achieved, cap=cap)


def dilate_set(residues: Iterable[int], m: int, p: int) -> frozenset[int]:
    if int(m) % p == 0:
        raise InputError("dilation constant must be nonzero mod p")
    return frozenset(balanced(m * int(b), p) for b in residues)
