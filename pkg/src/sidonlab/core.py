"""Basic types and exact counting statistics.

Everything here works in integers; real-valued norms are derived at the very
end so that identities can be checked with zero tolerance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Iterable, Sequence

import numpy as np


@dataclass(frozen=True)
class B2Set:
    """A strictly increasing set of integers inside ``{1, ..., ambient_bound}``.

    Construction does not check the B2 property; ``verified`` is only set once
    :func:`sidonlab.verify.verify_b2` has passed.
    """

    elements: tuple[int, ...]
    ambient_bound: int
    verified: bool = field(default=False, compare=False)

    def __post_init__(self):
        if self.ambient_bound < 1:
            raise ValueError(f"ambient bound must be positive, got {self.ambient_bound}")
        prev = 0
        for e in self.elements:
            if e <= prev:
                raise ValueError("elements must be positive and strictly increasing")
            prev = e
        if self.elements and self.elements[-1] > self.ambient_bound:
            raise ValueError(
                f"element {self.elements[-1]} exceeds ambient bound {self.ambient_bound}"
            )

    @property
    def k(self) -> int:
        return len(self.elements)

    @property
    def N(self) -> int:
        return self.ambient_bound

    def array(self) -> np.ndarray:
        return np.asarray(self.elements, dtype=np.int64)

    def mark_verified(self) -> "B2Set":
        return replace(self, verified=True)

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)


def make_b2_set(elements: Iterable[int], ambient_bound: int) -> B2Set:
    """Sort ``elements`` and wrap them; duplicates and out-of-range values raise."""
    elems = sorted(int(e) for e in elements)
    for a, b in zip(elems, elems[1:]):
        if a == b:
            raise ValueError(f"duplicate element {a}")
    if elems and elems[0] < 1:
        raise ValueError(f"element {elems[0]} is below 1")
    if elems and elems[-1] > ambient_bound:
        raise ValueError(f"element {elems[-1]} exceeds ambient bound {ambient_bound}")
    return B2Set(tuple(elems), int(ambient_bound))


@dataclass(frozen=True)
class ResidueProfile:
    modulus: int
    counts: tuple[int, ...]
    total: int

    def __post_init__(self):
        if self.modulus < 1:
            raise ValueError("modulus must be >= 1")
        if len(self.counts) != self.modulus:
            raise ValueError("need exactly one count per residue class")
        if any(c < 0 for c in self.counts):
            raise ValueError("counts must be nonnegative")
        if sum(self.counts) != self.total:
            raise ValueError("counts do not sum to total")

    @classmethod
    def from_counts(cls, counts: Sequence[int]) -> "ResidueProfile":
        counts = tuple(int(c) for c in counts)
        return cls(len(counts), counts, sum(counts))

    def centered(self) -> list[float]:
        """delta(x) = a(x) - S/m."""
        mean = self.total / self.modulus
        return [c - mean for c in self.counts]


@dataclass(frozen=True)
class DifferenceCorrelation:
    modulus: int
    values: tuple[int, ...]

    @property
    def d0(self) -> int:
        return self.values[0]


@dataclass(frozen=True)
class DeviationStats:
    l2: float
    linf: float
    # sum_x (m*a(x) - k)^2, i.e. m^2 * l2^2 as an exact integer
    l2_squared_times_m2: int


def residue_profile(A: B2Set | Sequence[int], m: int) -> ResidueProfile:
    if m < 1:
        raise ValueError(f"modulus must be >= 1, got {m}")
    elems = A.elements if isinstance(A, B2Set) else tuple(A)
    if not elems:
        return ResidueProfile(m, (0,) * m, 0)
    counts = np.bincount(np.asarray(elems, dtype=np.int64) % m, minlength=m)
    return ResidueProfile(m, tuple(int(c) for c in counts), len(elems))


def variance_identity_sides(profile: ResidueProfile) -> tuple[int, int]:
    """Both sides of the variance identity, scaled by m^2 to stay integral.

    Returns ``(sum_x (m a(x) - S)^2, m^2 sum_x a(x)^2 - m S^2)``.
    """
    m, S = profile.modulus, profile.total
    lhs = sum((m * a - S) ** 2 for a in profile.counts)
    rhs = m * m * sum(a * a for a in profile.counts) - m * S * S
    return lhs, rhs


def deviation(profile: ResidueProfile) -> DeviationStats:
    m, k = profile.modulus, profile.total
    lhs, rhs = variance_identity_sides(profile)
    if lhs != rhs:
        raise ArithmeticError(f"variance identity failed: {lhs} != {rhs}")
    mean = k / m
    l2 = math.sqrt(math.fsum((a - mean) ** 2 for a in profile.counts))
    linf = max(abs(m * a - k) for a in profile.counts) / m
    return DeviationStats(l2=l2, linf=linf, l2_squared_times_m2=lhs)


def difference_correlation(profile: ResidueProfile) -> DifferenceCorrelation:
    """d(j) = sum_i a(i) a(i+j), the number of ordered pairs with a-b = j mod m."""
    # k^2 fits comfortably in int64 at any feasible set size
    a = np.asarray(profile.counts, dtype=np.int64)
    m = profile.modulus
    values = tuple(int(np.dot(a, np.roll(a, -j))) for j in range(m))
    return DifferenceCorrelation(m, values)
