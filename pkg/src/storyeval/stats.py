"""Two-sample t-test, distance-stratified sampling, and judgment tallies."""

from __future__ import annotations

import math
import random
from collections import Counter, defaultdict
from dataclasses import dataclass
from typing import Sequence

from scipy.stats import t as t_dist

from .corpus import Judgment, VERDICTS, resolve_verdict
from .distances import CorpusReport
from .errors import DegenerateSample, SampleTooLarge


@dataclass(frozen=True)
class TTestResult:
    t: float
    p: float
    dof: float


def welch_t_test(sample_a: Sequence[float], sample_b: Sequence[float],
                 pooled: bool = False) -> TTestResult:
    """Welch's unequal-variance t-test, two-sided.

    Degrees of freedom follow Welch-Satterthwaite; the p-value is twice the
    t-distribution survival function at |t|. Set `pooled=True` for Student's
    equal-variance variant instead. Samples with fewer than two values, or
    with zero variance on both sides, raise DegenerateSample.
    """
    n1, n2 = len(sample_a), len(sample_b)
    if n1 < 2 or n2 < 2:
        raise DegenerateSample(f"need at least 2 values per sample, got {n1} and {n2}")
    m1 = math.fsum(sample_a) / n1
    m2 = math.fsum(sample_b) / n2
    v1 = math.fsum((x - m1) ** 2 for x in sample_a) / (n1 - 1)
    v2 = math.fsum((x - m2) ** 2 for x in sample_b) / (n2 - 1)
    if v1 == 0.0 and v2 == 0.0:
        raise DegenerateSample("both samples have zero variance")

    if pooled:
        sp2 = ((n1 - 1) * v1 + (n2 - 1) * v2) / (n1 + n2 - 2)
        se = math.sqrt(sp2 * (1 / n1 + 1 / n2))
        dof = float(n1 + n2 - 2)
    else:
        se2 = v1 / n1 + v2 / n2
        se = math.sqrt(se2)
        dof = se2 ** 2 / ((v1 / n1) ** 2 / (n1 - 1) + (v2 / n2) ** 2 / (n2 - 1))

    t = (m1 - m2) / se
    p = 2.0 * float(t_dist.sf(abs(t), dof))
    return TTestResult(t=t, p=min(p, 1.0), dof=dof)


def sample_by_distance(report: CorpusReport, n: int, bins: int = 10,
                       seed: int = 0) -> list[str]:
    """Stratified sample of sequence ids following the d_hm distribution.

    The per-story distances are split into `bins` equal-width bins over
    [min, max]; each bin gets a slot count proportional to its mass
    (largest-remainder rounding, so per-bin counts deviate from the exact
    quota by less than 1), and ids are drawn uniformly without replacement
    within bins. Deterministic for a fixed seed.
    """
    if bins < 1:
        raise ValueError(f"bins must be >= 1, got {bins}")
    if n > report.n:
        raise SampleTooLarge(f"asked for {n} of {report.n} stories")
    if n < 0:
        raise ValueError("sample size must be nonnegative")
    if n == 0:
        return []

    # Stable ordering regardless of how the report was assembled.
    records = sorted(report.per_story, key=lambda r: r.sequence_id)
    lo = min(r.d_hm for r in records)
    hi = max(r.d_hm for r in records)
    width = (hi - lo) / bins

    members: list[list[str]] = [[] for _ in range(bins)]
    for rec in records:
        idx = 0 if width == 0.0 else min(int((rec.d_hm - lo) / width), bins - 1)
        members[idx].append(rec.sequence_id)

    total = len(records)
    quotas = [n * len(m) / total for m in members]
    counts = [int(q) for q in quotas]
    remainders = sorted(range(bins), key=lambda b: (-(quotas[b] - counts[b]), b))
    for b in remainders[: n - sum(counts)]:
        counts[b] += 1

    rng = random.Random(seed)
    sample: list[str] = []
    for ids, k in zip(members, counts):
        sample.extend(rng.sample(ids, k))
    return sample


@dataclass(frozen=True)
class SystemTally:
    system: str
    n: int
    counts: dict[str, int]
    percentages: dict[str, float]


@dataclass(frozen=True)
class JudgmentTally:
    per_system: dict[str, SystemTally]
    total: int


def judgment_tally(judgments: Sequence[Judgment]) -> JudgmentTally:
    """Count canonical verdicts per system after de-randomizing presentation.

    Judgment construction already rejects unknown options, so every verdict
    falls in the four-way set; empty input yields all-zero tallies.
    """
    by_system: dict[str, Counter] = defaultdict(Counter)
    for j in judgments:
        by_system[j.system][resolve_verdict(j.option, j.presentation_order)] += 1

    per_system = {}
    for system, counter in sorted(by_system.items()):
        n = sum(counter.values())
        counts = {v: counter.get(v, 0) for v in VERDICTS}
        percentages = {v: (100.0 * counts[v] / n if n else 0.0) for v in VERDICTS}
        per_system[system] = SystemTally(system=system, n=n, counts=counts,
                                         percentages=percentages)
    return JudgmentTally(per_system=per_system,
                         total=sum(t.n for t in per_system.values()))


def distances_by_verdict(judgments: Sequence[Judgment],
                         report: CorpusReport) -> dict[str, list[float]]:
    """Group the report's per-story d_hm values by each judgment's verdict.

    Supports the comparison of d_hm under "human better" vs "both fine"
    judgments; only judgments for the report's system and for sequences the
    report covers contribute.
    """
    dhm = {r.sequence_id: r.d_hm for r in report.per_story}
    groups: dict[str, list[float]] = {v: [] for v in VERDICTS}
    for j in judgments:
        if j.system != report.system or j.sequence_id not in dhm:
            continue
        groups[resolve_verdict(j.option, j.presentation_order)].append(dhm[j.sequence_id])
    return groups
