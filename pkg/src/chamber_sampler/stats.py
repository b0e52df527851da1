"""Frequency summaries and uniformity statistics for sampler output."""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

import numpy as np
from scipy import stats

SIGMAS = 5.0


def total_variation(p, q) -> float:
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    return 0.5 * float(np.abs(p - q).sum())


def chi_square_uniform(counts) -> tuple[float, float]:
    """Pearson statistic and p-value against the uniform law on the cells."""
    c = np.asarray(counts, dtype=float)
    if c.size < 2:
        return 0.0, 1.0
    expected = c.sum() / c.size
    stat = float(((c - expected) ** 2 / expected).sum())
    return stat, float(stats.chi2.sf(stat, c.size - 1))


def binomial_floor(p: float, n: int, sigmas: float = SIGMAS) -> float:
    """``p`` minus ``sigmas`` binomial standard deviations of a frequency."""
    return p - sigmas * np.sqrt(p * (1 - p) / n)


@dataclass
class FrequencyReport:
    counts: dict
    total: int
    min_frequency: float
    max_frequency: float
    ratio: float
    tv_to_uniform: float | None
    chi2: float
    p_value: float
    support_size: int
    missing: int

    def to_dict(self) -> dict:
        return {
            "counts": {",".join(map(str, key)): int(v) for key, v in sorted(self.counts.items())},
            "total": self.total,
            "min_frequency": self.min_frequency,
            "max_frequency": self.max_frequency,
            "ratio": self.ratio,
            "tv_to_uniform": self.tv_to_uniform,
            "chi2": self.chi2,
            "p_value": self.p_value,
            "support_size": self.support_size,
            "missing": self.missing,
        }


def frequency_report(records, support=None) -> FrequencyReport:
    """Summarize draws (hashable keys such as sign or label tuples).

    With ``support`` the statistics run over the full reference set, so
    never-drawn cells count as zero.
    """
    counts = Counter(tuple(int(v) for v in r) for r in records)
    total = sum(counts.values())
    if support is not None:
        cells = sorted({tuple(int(v) for v in s) for s in support})
        extra = set(counts) - set(cells)
        if extra:
            raise ValueError(f"{len(extra)} drawn keys lie outside the reference support")
    else:
        cells = sorted(counts)
    vec = np.array([counts.get(c, 0) for c in cells], dtype=float)
    freq = vec / total if total else vec
    lo = float(freq.min()) if freq.size else 0.0
    hi = float(freq.max()) if freq.size else 0.0
    tv = total_variation(freq, np.full(freq.size, 1.0 / freq.size)) if support is not None and total else None
    chi2, pv = chi_square_uniform(vec)
    return FrequencyReport(
        counts=dict(counts),
        total=total,
        min_frequency=lo,
        max_frequency=hi,
        ratio=hi / lo if lo > 0 else float("inf"),
        tv_to_uniform=tv,
        chi2=chi2,
        p_value=pv,
        support_size=len(cells),
        missing=int((vec == 0).sum()),
    )
