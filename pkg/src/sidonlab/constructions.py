"""Classical dense B2 families: Erdos-Turan, Bose-Chowla, Singer, Mian-Chowla."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .core import B2Set
from .finite_field import gf_build, is_prime, power_orbit
from .verify import verify_b2

FAMILIES = ("bose_chowla", "erdos_turan", "mian_chowla", "singer")
MAX_MIAN_CHOWLA = 10**4


class ConstructionError(ValueError):
    pass


@dataclass(frozen=True)
class ConstructionOutput:
    set: B2Set
    family: str
    parameter: int
    advertised_k: int
    advertised_N: int
    cyclic_modulus: Optional[int] = None

    @property
    def ell(self) -> float:
        """Density shortfall sqrt(N) - k."""
        return self.advertised_N**0.5 - self.advertised_k


def _require_prime(p) -> int:
    if isinstance(p, bool) or not isinstance(p, (int, np.integer)) or not is_prime(int(p)):
        raise ConstructionError(f"p must be prime, got {p!r}")
    return int(p)


def _finish(elements, family, param, k, N, cyclic=None) -> ConstructionOutput:
    A = B2Set(tuple(sorted(int(a) for a in elements)), N)
    if A.k != k:
        raise ConstructionError(f"{family}({param}) produced {A.k} elements, expected {k}")
    verdict = verify_b2(A)
    if not verdict:
        raise ConstructionError(f"{family}({param}) is not B2: {verdict.describe()}")
    return ConstructionOutput(A.mark_verified(), family, param, k, N, cyclic)


def erdos_turan(p: int) -> ConstructionOutput:
    """{2 p i + (i^2 mod p) + 1 : 0 <= i < p} inside [1, 2 p^2]."""
    p = _require_prime(p)
    elems = [2 * p * i + (i * i) % p + 1 for i in range(p)]
    return _finish(elems, "erdos_turan", p, p, 2 * p * p)


def bose_chowla(p: int) -> ConstructionOutput:
    """{a in [1, p^2 - 1] : theta^a - theta in GF(p)}, theta generating GF(p^2)*.

    The result is Sidon modulo p^2 - 1, not just in the integers.
    """
    p = _require_prime(p)
    F = gf_build(p, 2)
    n = p * p - 1
    # row a of the orbit is theta^a; theta^a - theta lies in GF(p) iff the
    # x-coefficients agree
    orbit = power_orbit(F, n + 1)
    target = orbit[1, 1]
    exps = np.flatnonzero(orbit[1 : n + 1, 1] == target) + 1
    return _finish(exps, "bose_chowla", p, p, n, cyclic=n)


def singer(p: int) -> ConstructionOutput:
    """Perfect difference set modulo p^2 + p + 1 from GF(p^3).

    Collect a in [0, v) with g^a in span{1, g}; shifting by one puts the set
    in [1, v].
    """
    p = _require_prime(p)
    F = gf_build(p, 3)
    v = p * p + p + 1
    orbit = power_orbit(F, v)
    g = np.array(F.generator, dtype=np.int64)
    # det[1; g; y] over GF(p) vanishes iff y is in span{1, g}
    det = (g[1] * orbit[:, 2] - g[2] * orbit[:, 1]) % p
    exps = np.flatnonzero(det == 0) + 1
    return _finish(exps, "singer", p, p + 1, v, cyclic=v)


def mian_chowla(count: int) -> ConstructionOutput:
    """Greedy B2 sequence: start at 1, append the least integer keeping all sums a + b (a >= b) distinct."""
    if isinstance(count, bool) or not isinstance(count, (int, np.integer)) or not 1 <= count <= MAX_MIAN_CHOWLA:
        raise ConstructionError(f"count must be in [1, {MAX_MIAN_CHOWLA}], got {count!r}")
    count = int(count)
    seq = [1]
    # used[d] marks d as an existing positive difference; distinct differences
    # (a > b) is equivalent to distinct sums (a >= b)
    used = np.zeros(1024, dtype=bool)
    window = 64
    start = 2
    while len(seq) < count:
        if used.size < start + window:
            used = np.concatenate([used, np.zeros(max(used.size, start + window), dtype=bool)])
        bad = np.zeros(window, dtype=bool)
        for a in seq:
            bad |= used[start - a : start - a + window]
        free = np.flatnonzero(~bad)
        if free.size == 0:
            start += window
            window *= 2
            continue
        c = start + int(free[0])
        used[c - np.asarray(seq)] = True
        seq.append(c)
        start = c + 1
        window = max(64, window // 2)
    return _finish(seq, "mian_chowla", count, count, seq[-1])


BUILDERS: dict[str, Callable[[int], ConstructionOutput]] = {
    "bose_chowla": bose_chowla,
    "erdos_turan": erdos_turan,
    "mian_chowla": mian_chowla,
    "singer": singer,
}


def construct(family: str, param: int) -> ConstructionOutput:
    try:
        builder = BUILDERS[family]
    except KeyError:
        raise ConstructionError(f"unknown family {family!r}; choose from {', '.join(FAMILIES)}") from None
    return builder(param)
