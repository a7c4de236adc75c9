"""Deciding the B2 property, by sums and by differences."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .core import B2Set

# Sum-table entries allowed before switching to the sort-based check.
DEFAULT_TABLE_BUDGET = 2**31


class NotB2Error(ValueError):
    """Raised where a genuine B2 set is a precondition."""


@dataclass(frozen=True)
class B2Verdict:
    is_b2: bool
    # (a, b, c, d) with a + b == c + d, a >= b, c >= d, (a, b) < (c, d)
    witness: Optional[tuple[int, int, int, int]] = None

    def __bool__(self):
        return self.is_b2

    def describe(self) -> str:
        if self.is_b2:
            return "B2: all pairwise sums distinct"
        a, b, c, d = self.witness
        return f"not B2: {a}+{b} = {c}+{d}"


def _pair_sums(x: np.ndarray) -> np.ndarray:
    i, j = np.triu_indices(len(x))  # j >= i, so x[j] >= x[i]
    return x[i] + x[j]


def _pairs_with_sum(elements: tuple[int, ...], s: int) -> list[tuple[int, int]]:
    members = set(elements)
    return [(a, s - a) for a in elements if 2 * a >= s and (s - a) in members]


def verify_b2(A: B2Set, table_budget: int = DEFAULT_TABLE_BUDGET) -> B2Verdict:
    """Check that all sums a + b (a >= b) are distinct.

    On failure the witness is the smallest colliding sum, realised by its two
    lexicographically smallest pairs (a, b) with a >= b.
    """
    if A.k < 2:
        return B2Verdict(True)
    x = A.array()
    sums = _pair_sums(x)
    if 2 * A.N + 1 <= table_budget:
        table = np.bincount(sums, minlength=2 * A.N + 1)
        hits = np.flatnonzero(table > 1)
        if hits.size == 0:
            return B2Verdict(True)
        s = int(hits[0])
    else:
        sums.sort()
        dup = np.flatnonzero(sums[1:] == sums[:-1])
        if dup.size == 0:
            return B2Verdict(True)
        s = int(sums[dup[0]])
    pairs = _pairs_with_sum(A.elements, s)
    (a, b), (c, d) = pairs[:2]
    return B2Verdict(False, (a, b, c, d))


def _differences(x: np.ndarray) -> np.ndarray:
    i, j = np.triu_indices(len(x), k=1)
    return x[j] - x[i]


def difference_multiset(A: B2Set) -> list[int]:
    """All k(k-1)/2 positive differences, ascending, with multiplicity."""
    if A.k < 2:
        return []
    d = _differences(A.array())
    d.sort()
    return d.tolist()


def difference_array(A: B2Set) -> np.ndarray:
    if A.k < 2:
        return np.zeros(0, dtype=np.int64)
    return _differences(A.array())


def verify_b2_by_differences(A: B2Set) -> B2Verdict:
    """Same verdict as :func:`verify_b2`, derived from repeated differences.

    A repeat a - b == c - d gives the sum collision a + d == b + c; the witness
    is built from the smallest repeated difference.
    """
    if A.k < 2:
        return B2Verdict(True)
    x = A.array()
    i, j = np.triu_indices(len(x), k=1)
    d = x[j] - x[i]
    order = np.argsort(d, kind="stable")
    ds = d[order]
    rep = np.flatnonzero(ds[1:] == ds[:-1])
    if rep.size == 0:
        return B2Verdict(True)
    r = int(rep[0])
    p, q = order[r], order[r + 1]
    a, b = int(x[j[p]]), int(x[i[p]])
    c, e = int(x[j[q]]), int(x[i[q]])
    first = (max(a, e), min(a, e))
    second = (max(b, c), min(b, c))
    w = min(first, second) + max(first, second)
    return B2Verdict(False, w)


def require_b2(A: B2Set) -> None:
    if A.verified:
        return
    verdict = verify_b2(A)
    if not verdict:
        raise NotB2Error(f"input set fails the B2 check ({verdict.describe()})")
