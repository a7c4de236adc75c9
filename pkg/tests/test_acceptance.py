"""Exit criteria, one test each, with their tolerances and time budgets.

A pass/fail line per criterion is printed in the terminal summary.
"""

import functools
import itertools
import json
import math
import time
from pathlib import Path

import numpy as np
import pytest

from oracles import primes_upto
from sidonlab.constructions import bose_chowla, construct, erdos_turan, mian_chowla, singer
from sidonlab.core import B2Set, ResidueProfile, variance_identity_sides
from sidonlab.cosine import (
    CosinePolynomial,
    cosine_from_b2,
    evaluate,
    evaluate_grid,
    minimize,
    mod_filter,
    root_of_unity_average,
    cosine_min_probe,
)
from sidonlab.experiment import ExperimentConfig, run_to_file
from sidonlab.residue import analyze_set, proof_trace
from sidonlab.verify import verify_b2, verify_b2_by_differences

RESULTS: dict[int, tuple[str, str]] = {}
BASELINE = json.loads((Path(__file__).parent / "fixtures" / "uniformity_baseline.json").read_text())
PRIMES_101 = primes_upto(101)
DESK_PRIMES = [p for p in primes_upto(293) if p >= 101]


def criterion(number, title, budget):
    def deco(fn):
        @functools.wraps(fn)
        def wrapper(*args, **kwargs):
            start = time.perf_counter()
            try:
                fn(*args, **kwargs)
                elapsed = time.perf_counter() - start
                assert elapsed < budget, f"took {elapsed:.2f}s, budget {budget}s"
            except BaseException as exc:
                RESULTS[number] = ("FAIL", f"{title}: {str(exc).splitlines()[0] if str(exc) else type(exc).__name__}")
                raise
            RESULTS[number] = ("PASS", f"{title} ({elapsed:.2f}s < {budget}s)")

        return wrapper

    return deco


@functools.lru_cache(maxsize=None)
def criterion1_sets():
    return [construct(f, p) for f in ("erdos_turan", "bose_chowla", "singer") for p in PRIMES_101]


@criterion(1, "constructions valid for p <= 101; Singer perfect for p <= 31", 10)
def test_c01_constructions():
    criterion1_sets.cache_clear()
    for out in criterion1_sets():
        fresh = B2Set(out.set.elements, out.set.N)
        assert verify_b2(fresh).is_b2, (out.family, out.parameter)
        assert fresh.k == out.advertised_k and fresh.N == out.advertised_N
        p = out.parameter
        expect_k, expect_N = {
            "erdos_turan": (p, 2 * p * p),
            "bose_chowla": (p, p * p - 1),
            "singer": (p + 1, p * p + p + 1),
        }[out.family]
        assert (fresh.k, fresh.N) == (expect_k, expect_N)
        if out.family == "singer" and p <= 31:
            v = p * p + p + 1
            diffs = sorted((a - b) % v for a, b in itertools.permutations(fresh.elements, 2))
            assert diffs == list(range(1, v))


@criterion(2, "mian_chowla(10) == {1,2,3,5,8,13,21,31,45,66}", 1)
def test_c02_mian_chowla():
    assert list(mian_chowla(10).set) == [1, 2, 3, 5, 8, 13, 21, 31, 45, 66]


@criterion(3, "proof identities exact for criterion-1 sets x m in [1, 50]", 10)
def test_c03_proof_identities():
    for out in criterion1_sets():
        A = out.set
        k = A.k
        for m in range(1, 51):
            t = proof_trace(A, m)
            d = t.d.values
            assert t.d.d0 == k + 2 * t.N_m
            assert sum(d) == k * k
            assert max(d) <= t.d.d0
            assert t.d.d0 >= -(-k * k // m)


@criterion(4, "variance identity exact on 1000 random profiles", 1)
def test_c04_variance_identity():
    rng = np.random.default_rng(4)
    for _ in range(1000):
        m = int(rng.integers(1, 65))
        prof = ResidueProfile.from_counts(rng.integers(0, 21, size=m).tolist())
        lhs, rhs = variance_identity_sides(prof)
        S = prof.total
        assert lhs == sum((m * a - S) ** 2 for a in prof.counts)
        assert lhs == rhs == m * m * sum(a * a for a in prof.counts) - m * S * S


@criterion(5, "sums/differences verdicts agree on 10000 random sets", 5)
def test_c05_verifier_equivalence():
    rng = np.random.default_rng(5)
    for _ in range(10_000):
        size = int(rng.integers(2, 15))
        xs = sorted(rng.choice(np.arange(1, 201), size=size, replace=False).tolist())
        A = B2Set(tuple(xs), 200)
        v1, v2 = verify_b2(A), verify_b2_by_differences(A)
        assert v1.is_b2 == v2.is_b2
        for v in (v1, v2):
            if v.witness:
                a, b, c, d = v.witness
                assert a + b == c + d and a >= b and c >= d and (a, b) != (c, d)
                assert {a, b, c, d} <= set(xs)
            else:
                assert v.is_b2


def _random_poly(rng):
    n = int(rng.integers(1, 31))
    freqs = np.sort(rng.choice(np.arange(1, 201), size=n, replace=False))
    return CosinePolynomial.from_terms(float(rng.normal()), zip(freqs.tolist(), rng.normal(size=n).tolist()))


@criterion(6, "mod filter equals root-of-unity average within 1e-9 relative", 10)
def test_c06_filter():
    rng = np.random.default_rng(6)
    for _ in range(100):
        p = _random_poly(rng)
        for m in range(1, 13):
            xs = rng.uniform(0, 2 * math.pi, size=1000)
            freq_domain = evaluate(mod_filter(p, m), m * xs)
            time_domain = root_of_unity_average(p, m, xs)
            assert np.max(np.abs(freq_domain - time_domain)) <= 1e-9 * p.scale


@criterion(7, "minimizer hits -9/8 and certificates survive 10x finer grids", 30)
def test_c07_minimizer():
    r = minimize(CosinePolynomial.from_terms(0, [(1, 1), (2, 1)]))
    assert abs(r.min_value + 1.125) <= 1e-6
    assert r.certified_lower_bound <= r.min_value
    rng = np.random.default_rng(7)
    for _ in range(100):
        p = _random_poly(rng)
        r = minimize(p)
        assert r.certified_lower_bound <= r.min_value
        assert evaluate_grid(p, 10 * r.grid_size).min() >= r.certified_lower_bound


@criterion(8, "f(0) = k^2 exactly; grid min of f >= -1e-6 k (p <= 61)", 60)
def test_c08_f_expansion():
    for out in criterion1_sets():
        A = out.set
        f = cosine_from_b2(A)
        assert evaluate(f, 0.0) == A.k**2
        if out.parameter <= 61:
            assert evaluate_grid(f, 8 * f.lambda_max).min() >= -1e-6 * A.k


@criterion(9, "ratio_l2 and uniformity within 1.01x of the frozen baseline", 60)
def test_c09_uniformity_reproduction():
    for fam, build in (("singer", singer), ("bose_chowla", bose_chowla)):
        R_max = BASELINE["families"][fam]["R_max"]
        U_max = BASELINE["families"][fam]["U_max"]
        for p in DESK_PRIMES:
            A = build(p).set
            assert A.N**0.5 - A.k < 1
            for m in range(2, 11):
                rec = analyze_set(A, m)
                assert rec.bound.branch == 1
                assert rec.ratio_l2 == pytest.approx(rec.stats.l2 / (A.N**0.375 / m**0.25), rel=1e-12)
                assert rec.ratio_l2 <= R_max * 1.01, (fam, p, m)
                assert rec.uniformity <= U_max * 1.01, (fam, p, m)


@criterion(10, "m = 2 deviation over N^(3/8) within 1.01x of baseline (Bose-Chowla)", 10)
def test_c10_lindstrom():
    top = BASELINE["lindstrom_m2_max"]
    for p in DESK_PRIMES:
        A = bose_chowla(p).set
        rec = analyze_set(A, 2)
        assert rec.stats.l2 / A.N**0.375 <= top * 1.01, p


@criterion(11, "Cosine-minimum probe: A([1]) = 1, A([1,2]) = 0.5625, M* > 0", 30)
def test_c11_probe():
    assert cosine_min_probe([1]).A_empirical == 1
    assert abs(cosine_min_probe([1, 2]).A_empirical - 0.5625) <= 1e-6
    rng = np.random.default_rng(11)
    for _ in range(100):
        n = int(rng.integers(1, 201))
        top = int(rng.integers(n, 2 * n))  # lambda_max <= 2n - 1
        freqs = sorted(rng.choice(np.arange(1, top + 1), size=n, replace=False).tolist())
        assert cosine_min_probe(freqs).M_star > 0


@criterion(12, "identical configs give byte-identical CSV", 10)
def test_c12_determinism(tmp_path):
    config = ExperimentConfig(
        families=["bose_chowla", "erdos_turan", "singer"],
        primes=[101, 103, 107],
        moduli="2..10",
        check_f=True,
    )
    a = run_to_file(config, tmp_path / "a.csv").read_bytes()
    b = run_to_file(config, tmp_path / "b.csv").read_bytes()
    assert a == b
    assert len(a.splitlines()) == 1 + 3 * 3 * 9
