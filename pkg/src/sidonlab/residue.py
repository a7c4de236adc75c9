"""Residue-class uniformity of B2 sets: the two-branch bound, regimes, proof trace."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Optional

from .core import (
    B2Set,
    DeviationStats,
    DifferenceCorrelation,
    ResidueProfile,
    deviation,
    difference_correlation,
    residue_profile,
)
from .verify import NotB2Error, difference_array, require_b2


@dataclass(frozen=True)
class BoundReport:
    N: int
    k: int
    ell: float
    m: int
    threshold: float
    branch: int
    bound_value: float
    # finite stand-ins for the little-o hypotheses; reported, never enforced
    m_lt_sqrtN: bool
    ell_lt_sqrtN: bool
    ell_over_sqrtN: float
    m_over_sqrtN: float


@dataclass(frozen=True)
class RegimeClassification:
    case1: bool
    m_vs_N16: float
    m_vs_halfpower: float
    predicted_uniform: bool


@dataclass(frozen=True)
class ProofTrace:
    m: int
    k: int
    N: int
    d: DifferenceCorrelation
    N_m: int
    identity_d0: bool
    lower_d0: bool
    cauchy_schwarz: bool
    sum_dj: bool
    c: float
    epsilon: float
    lambda_max_div_m: int
    dichotomy_holds: bool

    @property
    def identities_hold(self) -> bool:
        return self.identity_d0 and self.lower_d0 and self.cauchy_schwarz and self.sum_dj


@dataclass(frozen=True)
class AnalysisRecord:
    A: B2Set
    m: int
    profile: ResidueProfile
    stats: DeviationStats
    bound: BoundReport
    regime: RegimeClassification
    trace: ProofTrace
    ratio_l2: float
    uniformity: float

    def row(self, family: str = "custom", param: Optional[int] = None) -> dict:
        """Flat record with the CSV/JSON field names, in column order."""
        return {
            "family": family,
            "param": param,
            "N": self.bound.N,
            "k": self.bound.k,
            "ell": self.bound.ell,
            "m": self.m,
            "dev_l2": self.stats.l2,
            "dev_linf": self.stats.linf,
            "bound": self.bound.bound_value,
            "branch": self.bound.branch,
            "ratio_l2": self.ratio_l2,
            "uniformity": self.uniformity,
            "N_m": self.trace.N_m,
            "d0": self.trace.d.d0,
            "epsilon": self.trace.epsilon,
            "dichotomy": self.trace.dichotomy_holds,
        }


def uniformity_bound(N: int, k: int, m: int) -> BoundReport:
    """Right-hand side of the uniformity bound with the absolute constant set to 1.

    Branch 1 (N^{3/8} / m^{1/4}) applies when ell <= N^{1/4} m^{1/2}, which
    includes every negative ell; otherwise branch 2 (N^{1/4} ell^{1/2} / m^{1/2}).
    """
    if N < 1 or k < 0 or m < 1:
        raise ValueError(f"need N >= 1, k >= 0, m >= 1; got N={N}, k={k}, m={m}")
    root = math.sqrt(N)
    ell = root - k
    threshold = N**0.25 * math.sqrt(m)
    if ell <= threshold:
        branch, value = 1, N**0.375 / m**0.25
    else:
        branch, value = 2, N**0.25 * math.sqrt(ell) / math.sqrt(m)
    return BoundReport(
        N=N,
        k=k,
        ell=ell,
        m=m,
        threshold=threshold,
        branch=branch,
        bound_value=value,
        m_lt_sqrtN=m < root,
        ell_lt_sqrtN=ell < root,
        ell_over_sqrtN=ell / root,
        m_over_sqrtN=m / root,
    )


def classify_regime(bound: BoundReport) -> RegimeClassification:
    N, m, ell = bound.N, bound.m, bound.ell
    case1 = bound.branch == 1
    m_vs_N16 = m / N ** (1 / 6)
    m_vs_half = m * ell / math.sqrt(N)
    predicted = m_vs_N16 < 1 if case1 else m_vs_half < 1
    return RegimeClassification(case1, m_vs_N16, m_vs_half, predicted)


def _trace(A: B2Set, m: int, c: float, profile: ResidueProfile) -> ProofTrace:
    k, N = A.k, A.N
    d = difference_correlation(profile)
    diffs = difference_array(A)
    divisible = diffs[diffs % m == 0]
    N_m = int(divisible.size)
    lam_max = int(divisible.max()) if N_m else 0
    d0 = d.d0
    eps = c * math.sqrt(m / math.sqrt(N))
    return ProofTrace(
        m=m,
        k=k,
        N=N,
        d=d,
        N_m=N_m,
        identity_d0=d0 == k + 2 * N_m,
        lower_d0=m * d0 >= k * k,
        cauchy_schwarz=max(d.values) == d0,
        sum_dj=sum(d.values) == k * k,
        c=c,
        epsilon=eps,
        lambda_max_div_m=lam_max,
        dichotomy_holds=N >= (2 - eps) * m * N_m,
    )


def proof_trace(A: B2Set, m: int, c: float = 1.0) -> ProofTrace:
    """Every intermediate quantity of the counting argument, computed exactly."""
    if m < 1:
        raise ValueError(f"modulus must be >= 1, got {m}")
    require_b2(A)
    return _trace(A, m, c, residue_profile(A, m))


def analyze_set(A: B2Set, m: int, c: float = 1.0) -> AnalysisRecord:
    if m < 1:
        raise ValueError(f"modulus must be >= 1, got {m}")
    require_b2(A)
    if A.k == 0:
        raise ValueError("uniformity ratio is undefined for the empty set")
    profile = residue_profile(A, m)
    stats = deviation(profile)
    bound = uniformity_bound(A.N, A.k, m)
    return AnalysisRecord(
        A=A,
        m=m,
        profile=profile,
        stats=stats,
        bound=bound,
        regime=classify_regime(bound),
        trace=_trace(A, m, c, profile),
        ratio_l2=stats.l2 / bound.bound_value,
        uniformity=stats.linf * m / A.k,
    )


def summary(record: AnalysisRecord) -> dict:
    """Nested plain-dict view, for JSON output of a single analysis."""
    out = record.row()
    out["counts"] = list(record.profile.counts)
    out["d"] = list(record.trace.d.values)
    out["threshold"] = record.bound.threshold
    out["regime"] = asdict(record.regime)
    out["hypotheses"] = {
        "m_lt_sqrtN": record.bound.m_lt_sqrtN,
        "ell_over_sqrtN": record.bound.ell_over_sqrtN,
        "m_over_sqrtN": record.bound.m_over_sqrtN,
    }
    out["identities"] = {
        "d0_eq_k_plus_2Nm": record.trace.identity_d0,
        "d0_ge_k2_over_m": record.trace.lower_d0,
        "dj_le_d0": record.trace.cauchy_schwarz,
        "sum_dj_eq_k2": record.trace.sum_dj,
    }
    out["lambda_max_div_m"] = record.trace.lambda_max_div_m
    return out
