"""Least perceptible difference in sentiment, from pairwise preferences.

From each best/worst response we can read off pairwise preferences: the
best item beats every other item in the tuple, and every other item beats
the worst one (the best-vs-worst pair is counted once). Aggregated per
term pair, these yield per-pair human agreement rates, which are averaged
in sliding windows over the score difference d to produce the agreement
curve. The least perceptible difference is the smallest d from which the
confidence lower bound on agreement stays above chance.

Window membership is decided in exact rational arithmetic, so the curve is
a deterministic function of the pair counts and score differences: two
algebraically equivalent implementations produce identical curves, and
shifting all scores by a constant that is exact in floating point leaves
the curve bit-identical.
"""

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Mapping

from scipy.stats import norm

from .design import Tuple4
from .errors import DataError
from .scoring import Response, _check_membership, _tuple_index
from .stats import wilson_lower_bound
from .terms import ScoredLexicon

logger = logging.getLogger(__name__)

DEFAULT_WINDOW = 0.01
DEFAULT_GRID_STEP = 0.001
DEFAULT_CONFIDENCE = 0.999


@dataclass(frozen=True)
class PairJudgment:
    """Directed preference counts for one unordered term pair.

    infer_pairs emits pairs in lexicographic orientation; agreement_curve
    reorients them so that hi is the higher-scored term.
    """

    hi: str
    lo: str
    n_hi_preferred: int
    n_lo_preferred: int


@dataclass(frozen=True)
class CurvePoint:
    d: float
    mean_agreement: float
    n_pairs: int
    n_judgments: int
    lower_bound: float
    pooled_agreement: float


@dataclass
class AgreementCurve:
    points: list[CurvePoint]
    window: float
    grid_step: float
    confidence: float
    z: float


def confidence_z(confidence: float, two_sided: bool = False) -> float:
    """Normal quantile for a confidence level, one-sided by default
    (0.999 -> 3.09023; two-sided 0.999 -> 3.29053)."""
    if not 0 < confidence < 1:
        raise ValueError("confidence must be in (0, 1)")
    q = (1 + confidence) / 2 if two_sided else confidence
    return float(norm.ppf(q))


def infer_pairs(responses: list[Response], tuples: list[Tuple4]) -> list[PairJudgment]:
    """Aggregate directed preference counts over all responses.

    Each response contributes 5 directed counts: best over the three
    others, the two non-extremes over worst, with best-over-worst counted
    once. Output is sorted by the lexicographic pair key.
    """
    by_id = _tuple_index(tuples)
    _check_membership(responses, by_id)
    counts: dict[tuple[str, str], list[int]] = {}
    for r in responses:
        items = by_id[r.tuple_id].items
        for i in range(4):
            for j in range(i + 1, 4):
                a, b = items[i], items[j]
                if a == r.best or b == r.worst:
                    winner = a
                elif b == r.best or a == r.worst:
                    winner = b
                else:
                    continue
                key = (a, b) if a < b else (b, a)
                slot = counts.setdefault(key, [0, 0])
                slot[0 if winner == key[0] else 1] += 1
    return [
        PairJudgment(hi=a, lo=b, n_hi_preferred=na, n_lo_preferred=nb)
        for (a, b), (na, nb) in sorted(counts.items())
    ]


def _scores_of(lexicon: ScoredLexicon | Mapping[str, float]) -> Mapping[str, float]:
    return lexicon.entries if isinstance(lexicon, ScoredLexicon) else lexicon


def agreement_curve(
    pairs: list[PairJudgment],
    lexicon: ScoredLexicon | Mapping[str, float],
    window: float = DEFAULT_WINDOW,
    grid_step: float = DEFAULT_GRID_STEP,
    confidence: float = DEFAULT_CONFIDENCE,
    two_sided: bool = False,
) -> AgreementCurve:
    """Mean human agreement as a function of score difference.

    For every pair, d is the score difference oriented so d >= 0 and the
    per-pair agreement is the fraction of judgments preferring the
    higher-scored term. A grid point at d covers pairs with difference in
    [d - window, d + window]; its mean_agreement averages per-pair
    agreements, while lower_bound is the Wilson lower limit on the pooled
    judgment counts in the window. Empty grid points are omitted.
    """
    scores = _scores_of(lexicon)
    z = confidence_z(confidence, two_sided)
    step_f = Fraction(str(grid_step))
    window_f = Fraction(str(window))
    if step_f <= 0 or window_f < 0:
        raise ValueError("grid_step must be positive and window nonnegative")

    # per grid index: [agreement sum (Fraction), n_pairs, hi counts, all counts]
    bins: dict[int, list] = {}
    for pair in pairs:
        for term in (pair.hi, pair.lo):
            if term not in scores:
                raise DataError(f"pair ({pair.hi!r}, {pair.lo!r}): {term!r} missing from lexicon")
        total = pair.n_hi_preferred + pair.n_lo_preferred
        if total == 0:
            continue
        if scores[pair.hi] >= scores[pair.lo]:
            hi, lo = pair.hi, pair.lo
            n_hi, n_lo = pair.n_hi_preferred, pair.n_lo_preferred
        else:
            hi, lo = pair.lo, pair.hi
            n_hi, n_lo = pair.n_lo_preferred, pair.n_hi_preferred
        d = Fraction(scores[hi]) - Fraction(scores[lo])
        agreement = Fraction(n_hi, total)
        k_lo = max(0, math.ceil((d - window_f) / step_f))
        k_hi = math.floor((d + window_f) / step_f)
        for k in range(k_lo, k_hi + 1):
            slot = bins.setdefault(k, [Fraction(0), 0, 0, 0])
            slot[0] += agreement
            slot[1] += 1
            slot[2] += n_hi
            slot[3] += total

    points = []
    for k in sorted(bins):
        agreement_sum, n_pairs, pooled_hi, pooled_total = bins[k]
        points.append(CurvePoint(
            d=k * grid_step,
            mean_agreement=float(agreement_sum / n_pairs),
            n_pairs=n_pairs,
            n_judgments=pooled_total,
            lower_bound=wilson_lower_bound(pooled_hi, pooled_total, z),
            pooled_agreement=pooled_hi / pooled_total,
        ))
    return AgreementCurve(
        points=points, window=window, grid_step=grid_step, confidence=confidence, z=z,
    )


def least_perceptible_difference(curve: AgreementCurve) -> float | None:
    """Smallest grid d whose confidence lower bound exceeds 50% there and at
    every populated grid point above it. None if no such point exists."""
    if not curve.points:
        raise DataError("agreement curve has no populated grid points")
    start = None
    for point in reversed(curve.points):
        if point.lower_bound > 0.5:
            start = point.d
        else:
            break
    if start is None:
        logger.warning(
            "no grid point has a lower bound above 0.5 that persists to the "
            "end of the curve; least perceptible difference is undefined"
        )
    return start


def save_curve(curve: AgreementCurve, path: str | Path) -> None:
    """TSV with columns d, mean_agreement, n_pairs, n_judgments, lower_bound."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("d\tmean_agreement\tn_pairs\tn_judgments\tlower_bound\n")
        for p in curve.points:
            fh.write(
                f"{p.d:.3f}\t{p.mean_agreement:.6f}\t{p.n_pairs}\t"
                f"{p.n_judgments}\t{p.lower_bound:.6f}\n"
            )
