"""Cosine polynomials: evaluation, the mod-m frequency filter, certified minima."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .core import B2Set
from .verify import difference_multiset, require_b2

TWO_PI = 2.0 * math.pi
# above this many term*point products the FFT path is used
DIRECT_WORK_LIMIT = 4_000_000
REFINE_ITERATIONS = 60


class CertificationError(ArithmeticError):
    """A minimisation result violated its own certificate."""


@dataclass(frozen=True)
class CosinePolynomial:
    """x -> constant + sum_j weights[j] * cos(frequencies[j] * x)."""

    constant: float
    frequencies: tuple[int, ...] = ()
    weights: tuple[float, ...] = ()

    def __post_init__(self):
        if len(self.frequencies) != len(self.weights):
            raise ValueError("frequencies and weights differ in length")
        prev = 0
        for f in self.frequencies:
            if f <= prev:
                raise ValueError("frequencies must be positive and strictly increasing")
            prev = f

    @classmethod
    def from_terms(cls, constant: float, terms: Iterable[tuple[int, float]]) -> "CosinePolynomial":
        terms = list(terms)
        return cls(float(constant), tuple(int(f) for f, _ in terms), tuple(float(w) for _, w in terms))

    @classmethod
    def pure(cls, frequencies: Sequence[int], constant: float = 0.0) -> "CosinePolynomial":
        return cls(float(constant), tuple(int(f) for f in frequencies), (1.0,) * len(frequencies))

    @property
    def terms(self) -> list[tuple[int, float]]:
        return list(zip(self.frequencies, self.weights))

    @property
    def lambda_max(self) -> int:
        return self.frequencies[-1] if self.frequencies else 0

    @property
    def lipschitz_constant(self) -> float:
        return math.fsum(abs(w) * f for f, w in self.terms)

    @property
    def scale(self) -> float:
        return abs(self.constant) + math.fsum(abs(w) for w in self.weights)

    def __call__(self, x):
        return evaluate(self, x)


@dataclass(frozen=True)
class MinimizationResult:
    argmin_x: float
    min_value: float
    certified_lower_bound: float
    grid_size: int
    lipschitz_constant: float


@dataclass(frozen=True)
class ProbeReport:
    N_terms: int
    lambda_max: int
    epsilon: float
    M_star: float
    A_empirical: float
    # -certified lower bound: M_star can be no larger than this
    M_star_upper: float
    epsilon_gt_3_over_N: bool


def cosine_from_b2(A: B2Set) -> CosinePolynomial:
    """|sum_a e^{iax}|^2 = k + 2 sum over positive differences of cos(d x)."""
    require_b2(A)
    diffs = difference_multiset(A)
    return CosinePolynomial(float(A.k), tuple(diffs), (2.0,) * len(diffs))


def evaluate(poly: CosinePolynomial, x):
    """Pointwise evaluation at scalar or array ``x`` by direct summation."""
    xs = np.atleast_1d(np.asarray(x, dtype=float))
    if not poly.frequencies:
        out = np.full(xs.shape, poly.constant)
    else:
        f = np.asarray(poly.frequencies, dtype=float)
        w = np.asarray(poly.weights)
        out = np.empty(xs.shape)
        step = max(1, DIRECT_WORK_LIMIT // (8 * len(f)))
        for s in range(0, xs.size, step):
            block = np.cos(np.outer(xs[s : s + step], f))
            out[s : s + step] = poly.constant + (block * w).sum(axis=1)
    if np.ndim(x) == 0:
        return float(out[0])
    return out


def _grid_direct(poly: CosinePolynomial, n: int) -> np.ndarray:
    return evaluate(poly, TWO_PI * np.arange(n) / n)


def _grid_fft(poly: CosinePolynomial, n: int) -> np.ndarray:
    coeffs = np.zeros(n, dtype=complex)
    np.add.at(coeffs, np.asarray(poly.frequencies, dtype=np.int64) % n, poly.weights)
    return poly.constant + n * np.fft.ifft(coeffs).real


def evaluate_grid(poly: CosinePolynomial, grid_size: int, method: str = "auto") -> np.ndarray:
    """Values at x_t = 2 pi t / grid_size, t = 0, ..., grid_size - 1."""
    if grid_size < 1:
        raise ValueError(f"grid_size must be >= 1, got {grid_size}")
    if method == "auto":
        method = "direct" if len(poly.frequencies) * grid_size <= DIRECT_WORK_LIMIT else "fft"
    if not poly.frequencies:
        return np.full(grid_size, poly.constant)
    if method == "direct":
        return _grid_direct(poly, grid_size)
    if method == "fft":
        return _grid_fft(poly, grid_size)
    raise ValueError(f"unknown method {method!r}")


def _ternary(poly: CosinePolynomial, lo: float, hi: float) -> tuple[float, float]:
    for _ in range(REFINE_ITERATIONS):
        a = lo + (hi - lo) / 3
        b = hi - (hi - lo) / 3
        if evaluate(poly, a) <= evaluate(poly, b):
            hi = b
        else:
            lo = a
    x = 0.5 * (lo + hi)
    return x, evaluate(poly, x)


def min_grid_size(poly: CosinePolynomial) -> int:
    return max(8 * poly.lambda_max, 64) if poly.frequencies else 1


def minimize(poly: CosinePolynomial, grid_size: int | None = None) -> MinimizationResult:
    """Grid scan, ternary refinement on both neighbouring cells, Lipschitz certificate.

    Every point lies within pi / grid_size of a grid point, so
    min >= (best value found) - L * pi / grid_size with L = sum |w_j| lambda_j.
    """
    need = min_grid_size(poly)
    if grid_size is None:
        grid_size = need
    if grid_size < need:
        raise ValueError(f"grid_size {grid_size} too small; need at least {need} for lambda_max {poly.lambda_max}")
    L = poly.lipschitz_constant
    values = evaluate_grid(poly, grid_size)
    t = int(np.argmin(values))
    h = TWO_PI / grid_size
    best_x, best = t * h, float(values[t])
    if poly.frequencies:
        x0 = t * h
        for lo, hi in ((x0 - h, x0), (x0, x0 + h)):
            x, v = _ternary(poly, lo, hi)
            if v < best:
                best_x, best = x, v
    result = MinimizationResult(
        argmin_x=best_x % TWO_PI,
        min_value=best,
        certified_lower_bound=best - L * math.pi / grid_size,
        grid_size=grid_size,
        lipschitz_constant=L,
    )
    if not (math.isfinite(result.min_value) and result.certified_lower_bound <= result.min_value <= float(values.min())):
        raise CertificationError(f"inconsistent minimisation result {result}")
    return result


def mod_filter(poly: CosinePolynomial, m: int, rescale: bool = True) -> CosinePolynomial:
    """Keep the terms whose frequency is divisible by m.

    This is convolution with the uniform measure on the m-th roots of unity:
    q(x) = (1/m) sum_t p(x + 2 pi t / m).  With ``rescale`` the surviving
    frequencies are divided by m, giving r(x) = q(x / m).
    """
    if m < 1:
        raise ValueError(f"m must be >= 1, got {m}")
    kept = [(f // m if rescale else f, w) for f, w in poly.terms if f % m == 0]
    return CosinePolynomial.from_terms(poly.constant, kept)


def root_of_unity_average(poly: CosinePolynomial, m: int, x) -> np.ndarray:
    """(1/m) sum_{t<m} p(x + 2 pi t / m), computed in the time domain."""
    xs = np.asarray(x, dtype=float)
    shifted = xs.reshape(-1, 1) + TWO_PI * np.arange(m) / m
    vals = np.asarray(evaluate(poly, shifted.ravel())).reshape(shifted.shape)
    return (vals.sum(axis=1) / m).reshape(xs.shape)


def cosine_min_probe(frequencies: Sequence[int], grid_factor: int = 8) -> ProbeReport:
    """Minimum of the unit-weight cosine sum and the implied constant M / (eps^2 N)."""
    freqs = [int(f) for f in frequencies]
    if not freqs:
        raise ValueError("need at least one frequency")
    n = len(freqs)
    poly = CosinePolynomial.pure(freqs)
    lam = poly.lambda_max
    if lam >= 2 * n:
        raise ValueError(f"lambda_max = {lam} >= 2 * {n}: no positive slack epsilon")
    eps = 2 - lam / n
    res = minimize(poly, max(grid_factor * lam, 64))
    M = -res.min_value
    return ProbeReport(
        N_terms=n,
        lambda_max=lam,
        epsilon=eps,
        M_star=M,
        A_empirical=M / (eps * eps * n),
        M_star_upper=-res.certified_lower_bound,
        epsilon_gt_3_over_N=eps > 3 / n,
    )
