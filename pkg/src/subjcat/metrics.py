"""Per-category percentile ranks, rank dispersion per journal, and the two tests."""

from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np
from scipy.special import betainc
from scipy.stats import rankdata

from .corpus import Category, Corpus, check_system


class UndefinedCorrelationError(ValueError):
    pass


class DegenerateTestError(ValueError):
    pass


@dataclass(frozen=True)
class PercentileRanking:
    category: tuple[str, str]
    journal: str
    percentile: float


@dataclass(frozen=True)
class RankDispersion:
    journal: str
    category_count: int
    mm: float
    var: float
    mean_percentile: float


@dataclass(frozen=True)
class ScoreBucketStats:
    category_count: int
    n: int
    max: float
    min: float
    q1: float
    median: float
    q3: float
    mean: float
    sd: float


def percentile_ranks(category: Category, scores: Mapping[str, float]) -> list[PercentileRanking]:
    """Percentile of each member within the category, (N - R + 0.5) / N * 100.

    R is the 1-based rank by descending score with ties sharing their average
    rank, so the best journal gets the highest percentile and the values stay
    strictly inside (0, 100).
    """
    ids = sorted(category.members)
    if not ids:
        raise ValueError(f"category {category.name!r} has no members")
    missing = [i for i in ids if scores.get(i) is None]
    if missing:
        raise KeyError(f"category {category.name!r}: no score for {missing[:5]}")
    values = np.array([scores[i] for i in ids], dtype=float)
    n = len(ids)
    ranks = rankdata(-values, method="average")
    pct = (n - ranks + 0.5) / n * 100.0
    return [PercentileRanking(category.ref, jid, float(p)) for jid, p in zip(ids, pct)]


def dispersion(journal: str, percentiles: Sequence[float]) -> RankDispersion:
    """Min-max range and population variance of one journal's percentiles."""
    values = [float(p) for p in percentiles]
    if not values:
        raise ValueError(f"journal {journal!r} has no percentiles")
    n = len(values)
    # fsum makes the result independent of the order of the percentiles
    mean = math.fsum(values) / n
    lo, hi = min(values), max(values)
    if lo == hi:
        return RankDispersion(journal, n, 0.0, 0.0, lo)
    var = math.fsum((p - mean) ** 2 for p in values) / n
    return RankDispersion(journal, n, hi - lo, var, mean)


def journal_percentiles(corpus: Corpus, system: str) -> dict[str, list[float]]:
    """corpus id -> its percentiles across its categories in ``system`` (category-name order)."""
    scores = corpus.scores(check_system(system))
    out = defaultdict(list)
    for cat in corpus.categories(system):
        for pr in percentile_ranks(cat, scores):
            out[pr.journal].append(pr.percentile)
    return dict(sorted(out.items()))


def journal_dispersions(corpus: Corpus, system: str) -> list[RankDispersion]:
    return [dispersion(jid, pcts) for jid, pcts in journal_percentiles(corpus, system).items()]


def _describe(values) -> dict:
    a = np.asarray(values, dtype=float)
    q1, med, q3 = np.percentile(a, [25, 50, 75])
    return dict(
        n=len(a), max=float(a.max()), min=float(a.min()), q1=float(q1),
        median=float(med), q3=float(q3), mean=float(a.mean()), sd=float(a.std()),
    )


def score_buckets(corpus: Corpus, system: str) -> list[ScoreBucketStats]:
    """Raw score statistics grouped by how many categories a journal has in ``system``.

    Quartiles use linear interpolation between order statistics; sd is the
    population standard deviation.
    """
    check_system(system)
    groups = defaultdict(list)
    for j in corpus.journals:
        rec = j.record(system)
        groups[len(rec.categories)].append(rec.score)
    return [ScoreBucketStats(category_count=k, **_describe(v)) for k, v in sorted(groups.items())]


def dispersion_buckets(dispersions: Iterable[RankDispersion]) -> list[dict]:
    """MM and VAR quartiles/means per category count (the data behind the box plots)."""
    groups = defaultdict(list)
    for d in dispersions:
        groups[d.category_count].append(d)
    rows = []
    for k, ds in sorted(groups.items()):
        row = {"category_count": k, "n": len(ds)}
        for field in ("mm", "var"):
            stats = _describe([getattr(d, field) for d in ds])
            for key in ("min", "q1", "median", "q3", "max", "mean"):
                row[f"{field}_{key}"] = stats[key]
        rows.append(row)
    return rows


def pearson(x: Sequence[float], y: Sequence[float]) -> tuple[float, float]:
    """Sample correlation r and its two-sided p-value (t-test with n - 2 df)."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape or x.ndim != 1:
        raise ValueError("x and y must be 1-d and of equal length")
    n = len(x)
    if n < 3:
        raise ValueError("need at least 3 observations")
    dx = x - x.mean()
    dy = y - y.mean()
    sxx, syy = float(dx @ dx), float(dy @ dy)
    if sxx == 0 or syy == 0:
        raise UndefinedCorrelationError("correlation undefined for a constant vector")
    r = float(dx @ dy) / math.sqrt(sxx * syy)
    r = min(1.0, max(-1.0, r))
    if abs(r) == 1.0:
        return r, 0.0
    df = n - 2
    t2 = r * r * df / (1.0 - r * r)
    # two-sided t tail through the regularized incomplete beta function
    p = float(betainc(0.5 * df, 0.5, df / (df + t2)))
    return r, min(1.0, max(0.0, p))


@dataclass(frozen=True)
class WilcoxonResult:
    statistic: float
    p: float
    n: int
    w_plus: float
    w_minus: float
    z: float


MIN_WILCOXON_N = 10


def wilcoxon_signed_rank(pairs: Iterable[tuple[float, float]]) -> WilcoxonResult:
    """Paired signed-rank test on differences b - a.

    Zero differences are dropped and tied absolute differences share average
    ranks. statistic = min(W+, W-); p is two-sided from the normal
    approximation with tie-corrected variance and a 0.5 continuity correction.
    """
    d = np.array([b - a for a, b in pairs], dtype=float)
    d = d[d != 0]
    n = len(d)
    if n == 0:
        raise DegenerateTestError("all paired differences are zero")
    if n < MIN_WILCOXON_N:
        raise ValueError(f"{n} non-zero differences; the normal approximation needs >= {MIN_WILCOXON_N}")
    absd = np.abs(d)
    ranks = rankdata(absd, method="average")
    w_plus = float(ranks[d > 0].sum())
    w_minus = float(ranks[d < 0].sum())
    _, ties = np.unique(absd, return_counts=True)
    mu = n * (n + 1) / 4.0
    var = n * (n + 1) * (2 * n + 1) / 24.0 - float((ties**3 - ties).sum()) / 48.0
    w = min(w_plus, w_minus)
    z = max(abs(w - mu) - 0.5, 0.0) / math.sqrt(var)
    p = min(1.0, math.erfc(z / math.sqrt(2.0)))
    return WilcoxonResult(w, p, n, w_plus, w_minus, -z)
