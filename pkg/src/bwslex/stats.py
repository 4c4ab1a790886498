"""Correlation and binomial-bound helpers.

Pearson and Spearman are computed over exact rationals (fractions.Fraction)
so that vectors which are exactly affine images of each other correlate to
exactly +/-1.0, with no floating-point shortfall. Spearman uses average
ranks for ties.
"""

import math
from fractions import Fraction
from typing import Sequence


def average_ranks(values: Sequence[float]) -> list[Fraction]:
    """1-based ranks; tied values share the average of their positions."""
    order = sorted(range(len(values)), key=lambda i: values[i])
    ranks: list[Fraction] = [Fraction(0)] * len(values)
    i = 0
    while i < len(order):
        j = i
        while j + 1 < len(order) and values[order[j + 1]] == values[order[i]]:
            j += 1
        rank = Fraction(i + 1 + j + 1, 2)
        for k in range(i, j + 1):
            ranks[order[k]] = rank
        i = j + 1
    return ranks


def _pearson_fraction(xs: Sequence[Fraction], ys: Sequence[Fraction]) -> float:
    n = len(xs)
    if n != len(ys):
        raise ValueError("length mismatch")
    if n < 2:
        raise ValueError("need at least 2 points")
    mx = sum(xs, Fraction(0)) / n
    my = sum(ys, Fraction(0)) / n
    sxx = sum((x - mx) ** 2 for x in xs)
    syy = sum((y - my) ** 2 for y in ys)
    sxy = sum((x - mx) * (y - my) for x, y in zip(xs, ys))
    if sxx == 0 or syy == 0:
        raise ValueError("constant input has no defined correlation")
    ratio = sxy * sxy / (sxx * syy)  # exact r^2
    if ratio == 1:
        return 1.0 if sxy > 0 else -1.0
    return math.copysign(math.sqrt(float(ratio)), float(sxy))


def pearson(xs: Sequence[float], ys: Sequence[float]) -> float:
    return _pearson_fraction([Fraction(x) for x in xs], [Fraction(y) for y in ys])


def spearman(xs: Sequence[float], ys: Sequence[float]) -> float:
    """Rank correlation with average-rank tie handling."""
    return _pearson_fraction(average_ranks(xs), average_ranks(ys))


def wilson_lower_bound(successes: int, trials: int, z: float) -> float:
    """Lower limit of the Wilson score interval for a binomial proportion.

    z is the normal quantile for the desired confidence (one- or two-sided
    is the caller's choice). Clamped to [0, 1].
    """
    if trials <= 0:
        raise ValueError("trials must be positive")
    if not 0 <= successes <= trials:
        raise ValueError("successes must lie in [0, trials]")
    p = successes / trials
    z2 = z * z
    center = p + z2 / (2 * trials)
    margin = z * math.sqrt(p * (1 - p) / trials + z2 / (4 * trials * trials))
    lower = (center - margin) / (1 + z2 / trials)
    return min(1.0, max(0.0, lower))
