"""Arithmetic in GF(p^e) for prime p and e in {1, 2, 3}.

Elements are coefficient tuples ``(c0, c1, ..., c_{e-1})`` in the polynomial
basis ``1, x, ..., x^{e-1}``, lowest degree first.  "Lexicographic" always
refers to comparing these tuples as Python tuples.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Optional, Sequence

import numpy as np

Element = tuple[int, ...]

MAX_PRIME = 10**6
# Largest multiplicative group for which a full power table may be materialised.
TABLE_BUDGET = 10**7


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def prime_factors(n: int) -> list[int]:
    out = []
    f = 2
    while f * f <= n:
        if n % f == 0:
            out.append(f)
            while n % f == 0:
                n //= f
        f += 1 if f == 2 else 2
    if n > 1:
        out.append(n)
    return out


def _poly_has_root(coeffs: Sequence[int], p: int) -> bool:
    for t in range(p):
        acc = 0
        for c in reversed(coeffs):
            acc = (acc * t + c) % p
        if acc == 0:
            return True
    return False


@dataclass(frozen=True)
class FieldTable:
    p: int
    e: int
    # monic, lowest degree first, length e + 1
    modulus_polynomial: tuple[int, ...]
    generator: Element
    table_budget: int = TABLE_BUDGET

    @property
    def order(self) -> int:
        return self.p**self.e

    @property
    def one(self) -> Element:
        return (1,) + (0,) * (self.e - 1)

    @cached_property
    def mult_matrix(self) -> np.ndarray:
        """Matrix of y -> generator * y on coefficient vectors (columns = images of basis)."""
        cols = []
        for i in range(self.e):
            basis = tuple(int(i == j) for j in range(self.e))
            cols.append(gf_mul(self, self.generator, basis))
        return np.array(cols, dtype=np.int64).T

    @cached_property
    def power_table(self) -> tuple[Element, ...]:
        """Entry a is generator**a for a in [0, p^e - 2]."""
        n = self.order - 1
        if n > self.table_budget:
            raise ValueError(
                f"GF({self.p}^{self.e}) has {n} nonzero elements, over the table budget {self.table_budget}"
            )
        return tuple(tuple(int(c) for c in row) for row in power_orbit(self, n))

    @cached_property
    def log_table(self) -> dict[Element, int]:
        return {v: a for a, v in enumerate(self.power_table)}


def _check_element(f: FieldTable, x: Sequence[int]) -> Element:
    x = tuple(x)
    if len(x) != f.e or any((not isinstance(c, (int, np.integer))) or c < 0 or c >= f.p for c in x):
        raise ValueError(f"malformed element {x!r} for GF({f.p}^{f.e})")
    return tuple(int(c) for c in x)


def _mul(p: int, e: int, mod: tuple[int, ...], x: Element, y: Element) -> Element:
    prod = [0] * (2 * e - 1)
    for i, a in enumerate(x):
        if a:
            for j, b in enumerate(y):
                prod[i + j] += a * b
    # x^e = -(mod[0] + ... + mod[e-1] x^{e-1})
    for deg in range(2 * e - 2, e - 1, -1):
        c = prod[deg] % p
        if c:
            for i in range(e):
                prod[deg - e + i] -= c * mod[i]
        prod[deg] = 0
    return tuple(v % p for v in prod[:e])


def gf_mul(f: FieldTable, x: Sequence[int], y: Sequence[int]) -> Element:
    x = _check_element(f, x)
    y = _check_element(f, y)
    return _mul(f.p, f.e, f.modulus_polynomial, x, y)


def gf_pow(f: FieldTable, x: Sequence[int], n: int) -> Element:
    x = _check_element(f, x)
    result = f.one
    while n:
        if n & 1:
            result = _mul(f.p, f.e, f.modulus_polynomial, result, x)
        x = _mul(f.p, f.e, f.modulus_polynomial, x, x)
        n >>= 1
    return result


def _smallest_modulus(p: int, e: int) -> tuple[int, ...]:
    if e == 1:
        # GF(p) itself; reduction mod x is never exercised
        return (0, 1)
    for low in itertools.product(range(p), repeat=e):
        coeffs = low + (1,)
        if not _poly_has_root(coeffs, p):
            return coeffs
    raise AssertionError("an irreducible polynomial always exists")


def _has_full_order(p: int, e: int, mod: tuple[int, ...], g: Element, factors: list[int]) -> bool:
    n = p**e - 1
    one = (1,) + (0,) * (e - 1)
    probe = FieldTable(p, e, mod, one)
    return all(gf_pow(probe, g, n // r) != one for r in factors)


def gf_build(
    p: int,
    e: int,
    modulus: Optional[Sequence[int]] = None,
    table_budget: int = TABLE_BUDGET,
) -> FieldTable:
    """Build GF(p^e) with a deterministic modulus polynomial and generator.

    The power table is computed lazily and is refused above ``table_budget``;
    the field itself (generator, multiplication) is available at any size.
    """
    if not isinstance(p, (int, np.integer)) or not is_prime(int(p)):
        raise ValueError(f"{p} is not prime")
    if p > MAX_PRIME:
        raise ValueError(f"p = {p} exceeds supported maximum {MAX_PRIME}")
    if e not in (1, 2, 3):
        raise ValueError(f"extension degree must be 1, 2 or 3, got {e}")
    p, e = int(p), int(e)
    if modulus is None:
        mod = _smallest_modulus(p, e)
    else:
        mod = tuple(int(c) % p for c in modulus)
        if len(mod) != e + 1 or mod[-1] != 1:
            raise ValueError("modulus must be monic of degree e")
        if e > 1 and _poly_has_root(mod, p):
            raise ValueError(f"modulus {mod} is reducible over GF({p})")
    factors = prime_factors(p**e - 1) if p**e > 2 else []
    for g in itertools.product(range(p), repeat=e):
        if not any(g):
            continue
        if _has_full_order(p, e, mod, g, factors):
            return FieldTable(p, e, mod, g, table_budget)
    raise AssertionError("the multiplicative group is cyclic")


def power_orbit(f: FieldTable, count: int, block: int = 1024) -> np.ndarray:
    """Rows generator**a for a in [0, count), as a (count, e) int64 array.

    Multiplication by the generator is linear over GF(p), so the orbit is built
    blockwise: a short sequential seed, then repeated jumps by generator**block.
    """
    e, p = f.e, f.p
    out = np.empty((count, e), dtype=np.int64)
    if count == 0:
        return out
    T = f.mult_matrix
    seed_len = min(block, count)
    v = np.array(f.one, dtype=np.int64)
    for a in range(seed_len):
        out[a] = v
        v = (T @ v) % p
    jump = np.eye(e, dtype=np.int64)
    for _ in range(seed_len):
        jump = (T @ jump) % p
    pos = seed_len
    cur = out[:seed_len].T.copy()
    while pos < count:
        cur = (jump @ cur) % p
        take = min(seed_len, count - pos)
        out[pos : pos + take] = cur[:, :take].T
        pos += take
    return out
