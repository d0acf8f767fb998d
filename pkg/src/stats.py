"""
Distribution diagnostics for indicator vectors.

Conventions: skewness and kurtosis are the simple sample moments g1 and g2
(excess), with standard errors sqrt(6/n) and sqrt(24/n). The KS test compares
the standardized sample to N(0, 1) and reads p from the asymptotic Kolmogorov
distribution at sqrt(n) * D; no Lilliefors correction is applied, so p-values
are conservative when mean and sd are estimated from the sample.
"""
from dataclasses import dataclass
from itertools import combinations
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np
from scipy import stats as sps

from .errors import DomainError

SKEWNESS_CONVENTION = "g1 (simple sample moments)"
KURTOSIS_CONVENTION = "g2 (excess, simple sample moments)"
KS_VARIANT = "one-sample vs fitted normal, asymptotic Kolmogorov p, no Lilliefors correction"


@dataclass(frozen=True)
class DistributionSummary:
    n: int
    mean: float
    sd: float
    skewness: Optional[float]
    kurtosis: Optional[float]
    se_skewness: float
    se_kurtosis: float
    ks_statistic: Optional[float]
    ks_p_value: Optional[float]
    note: Optional[str] = None


@dataclass(frozen=True)
class KSResult:
    statistic: float
    p_value: float


@dataclass(frozen=True)
class SpearmanResult:
    rho: Optional[float]
    n: int

    @property
    def rho_squared(self) -> Optional[float]:
        return None if self.rho is None else self.rho * self.rho


@dataclass(frozen=True)
class HistogramBin:
    low: float
    high: float
    count: int


@dataclass(frozen=True)
class QQPoint:
    theoretical_quantile: float
    sample_quantile: float


@dataclass(frozen=True)
class PlotData:
    histogram: List[HistogramBin]
    qq: List[QQPoint]


def _as_sample(xs: Sequence[float], minimum: int) -> np.ndarray:
    values = np.asarray(xs, dtype=float).ravel()
    if values.size < minimum:
        raise DomainError(f"need at least {minimum} values, got {values.size}")
    if not np.isfinite(values).all():
        raise DomainError("sample contains non-finite values")
    return values


def ks_normal_test(xs: Sequence[float]) -> KSResult:
    """One-sample KS statistic of xs against the normal with the sample's mean and sd."""
    values = _as_sample(xs, 4)
    if np.ptp(values) == 0:
        raise DomainError("KS normality test needs a sample with non-zero variance")
    z = (values - values.mean()) / values.std(ddof=1)
    statistic = float(sps.kstest(z, "norm").statistic)
    p_value = float(sps.kstwobign.sf(np.sqrt(values.size) * statistic))
    return KSResult(statistic=statistic, p_value=min(max(p_value, 0.0), 1.0))


def summarize(xs: Sequence[float]) -> DistributionSummary:
    values = _as_sample(xs, 4)
    n = values.size
    sd = float(values.std(ddof=1)) if np.ptp(values) > 0 else 0.0
    se_skew = float(np.sqrt(6.0 / n))
    se_kurt = float(np.sqrt(24.0 / n))
    if sd == 0:
        return DistributionSummary(
            n=n, mean=float(values.mean()), sd=0.0, skewness=None, kurtosis=None,
            se_skewness=se_skew, se_kurtosis=se_kurt, ks_statistic=None, ks_p_value=None,
            note="zero variance: skewness, kurtosis and KS are undefined",
        )
    ks = ks_normal_test(values)
    return DistributionSummary(
        n=n,
        mean=float(values.mean()),
        sd=sd,
        skewness=float(sps.skew(values, bias=True)),
        kurtosis=float(sps.kurtosis(values, fisher=True, bias=True)),
        se_skewness=se_skew,
        se_kurtosis=se_kurt,
        ks_statistic=ks.statistic,
        ks_p_value=ks.p_value,
    )


def spearman(xs: Sequence[float], ys: Sequence[float]) -> SpearmanResult:
    """Pearson correlation of mid-ranks; rho is None when either side has no rank variance."""
    x = np.asarray(xs, dtype=float).ravel()
    y = np.asarray(ys, dtype=float).ravel()
    if x.size != y.size:
        raise DomainError(f"length mismatch: {x.size} vs {y.size}")
    if x.size < 3:
        raise DomainError("Spearman correlation needs at least 3 pairs")
    rx = sps.rankdata(x, method="average")
    ry = sps.rankdata(y, method="average")
    rx -= rx.mean()
    ry -= ry.mean()
    sxx = float(rx @ rx)
    syy = float(ry @ ry)
    if sxx == 0 or syy == 0:
        return SpearmanResult(rho=None, n=int(x.size))
    rho = float(rx @ ry) / float(np.sqrt(sxx * syy))
    return SpearmanResult(rho=min(max(rho, -1.0), 1.0), n=int(x.size))


def correlation_matrix(columns: Mapping[str, Sequence[float]]) -> Dict[Tuple[str, str], SpearmanResult]:
    """Spearman results for every pair of named vectors, in insertion order."""
    return {
        (a, b): spearman(columns[a], columns[b])
        for a, b in combinations(list(columns), 2)
    }


def plot_data(xs: Sequence[float], bins: int) -> PlotData:
    """Equal-width histogram over [min, max] and normal Q-Q pairs."""
    values = _as_sample(xs, 2)
    if bins < 1:
        raise DomainError("bins must be at least 1")
    counts, edges = np.histogram(values, bins=bins)
    histogram = [
        HistogramBin(low=float(edges[k]), high=float(edges[k + 1]), count=int(counts[k]))
        for k in range(bins)
    ]
    ordered = np.sort(values)
    n = ordered.size
    theoretical = sps.norm.ppf((np.arange(1, n + 1) - 0.5) / n)
    qq = [QQPoint(float(t), float(s)) for t, s in zip(theoretical, ordered)]
    return PlotData(histogram=histogram, qq=qq)
