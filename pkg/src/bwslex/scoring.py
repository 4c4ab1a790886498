"""Turning raw best/worst responses into scores and quality measures.

The counting procedure: a term's score is the number of judgments choosing
it as best, minus the number choosing it as worst, divided by the number of
judgments whose tuple contains it. Scores therefore live in [-1, 1].

File formats:
  responses  JSON lines with fields response_id, annotator_id, tuple_id,
             best, worst, unix_ms (extra fields are ignored on load)
  gold key   TSV: tuple_id <TAB> expected_best <TAB> expected_worst
"""

import json
import statistics
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from pathlib import Path
from random import Random

from .design import Tuple4
from .errors import DataError, FormatError
from .stats import pearson, spearman
from .terms import ScoredLexicon

DEFAULT_GOLD_THRESHOLD = 0.70


@dataclass(frozen=True)
class Response:
    """One annotator's best/worst choice for one tuple."""

    response_id: str
    annotator_id: str
    tuple_id: str
    best: str
    worst: str
    unix_ms: int

    def __post_init__(self):
        if self.best == self.worst:
            raise DataError(
                f"response {self.response_id}: best and worst are both {self.best!r}"
            )


# tuple_id -> (expected_best, expected_worst)
GoldKey = dict[str, tuple[str, str]]


@dataclass
class QualityReport:
    per_annotator_gold_accuracy: dict[str, float]
    discarded_annotators: set[str]
    ungraded_annotators: set[str]
    majority_agreement: float | None = None


@dataclass
class SplitHalfResult:
    spearman_mean: float
    pearson_mean: float
    spearman_std: float
    pearson_std: float
    spearman_values: list[float] = field(default_factory=list)
    pearson_values: list[float] = field(default_factory=list)
    excluded_tuples: int = 0


def _tuple_index(tuples: list[Tuple4]) -> dict[str, Tuple4]:
    return {t.tuple_id: t for t in tuples}


def _check_membership(responses: list[Response], by_id: dict[str, Tuple4]) -> None:
    for r in responses:
        tup = by_id.get(r.tuple_id)
        if tup is None:
            raise DataError(f"response {r.response_id} references unknown tuple {r.tuple_id!r}")
        if r.best not in tup.items or r.worst not in tup.items:
            raise DataError(
                f"response {r.response_id}: best/worst not among items of {r.tuple_id}"
            )


def filter_annotators(
    responses: list[Response],
    gold: GoldKey,
    threshold: float = DEFAULT_GOLD_THRESHOLD,
    tuples: list[Tuple4] | None = None,
) -> tuple[list[Response], QualityReport]:
    """Drop every response from annotators with low gold-question accuracy.

    Each response to a gold tuple yields two graded answers (the best pick
    and the worst pick); an annotator's accuracy is correct answers over
    answers given. Annotators below the threshold lose all their responses.
    Annotators who saw no gold question are kept and flagged in the report.
    """
    if tuples is not None:
        known = {t.tuple_id for t in tuples} | set(gold)
        for r in responses:
            if r.tuple_id not in known:
                raise DataError(
                    f"response {r.response_id} references unknown tuple {r.tuple_id!r}"
                )
    graded: dict[str, int] = defaultdict(int)
    correct: dict[str, int] = defaultdict(int)
    annotators: set[str] = set()
    for r in responses:
        annotators.add(r.annotator_id)
        key = gold.get(r.tuple_id)
        if key is None:
            continue
        expected_best, expected_worst = key
        graded[r.annotator_id] += 2
        correct[r.annotator_id] += int(r.best == expected_best)
        correct[r.annotator_id] += int(r.worst == expected_worst)

    accuracy = {a: correct[a] / graded[a] for a in graded}
    discarded = {a for a, acc in accuracy.items() if acc < threshold}
    ungraded = annotators - set(graded)
    kept = [r for r in responses if r.annotator_id not in discarded]
    report = QualityReport(
        per_annotator_gold_accuracy=accuracy,
        discarded_annotators=discarded,
        ungraded_annotators=ungraded,
    )
    return kept, report


def score(responses: list[Response], tuples: list[Tuple4]) -> ScoredLexicon:
    """Apply the counting procedure. Terms that appear in no annotated tuple
    are omitted; raises DataError on an empty response list."""
    if not responses:
        raise DataError("cannot score an empty response list")
    by_id = _tuple_index(tuples)
    _check_membership(responses, by_id)
    best = Counter()
    worst = Counter()
    appearances = Counter()
    for r in responses:
        appearances.update(by_id[r.tuple_id].items)
        best[r.best] += 1
        worst[r.worst] += 1
    entries = {
        surface: (best[surface] - worst[surface]) / appearances[surface]
        for surface in sorted(appearances)
    }
    return ScoredLexicon(entries=entries)


def majority_agreement(
    responses: list[Response],
    tuples: list[Tuple4],
    average: str = "pooled",
) -> float:
    """Fraction of answers that match the majority answer of their question.

    Every tuple poses two questions (the best pick and the worst pick).
    When the mode is tied, every tied answer counts as matching. With
    average="pooled" the fraction is matching answers over all answers;
    with average="per_question" it is the mean of per-question fractions.
    """
    if average not in ("pooled", "per_question"):
        raise ValueError(f"unknown average mode {average!r}")
    by_id = _tuple_index(tuples)
    _check_membership(responses, by_id)
    questions: dict[tuple[str, str], Counter] = defaultdict(Counter)
    for r in responses:
        questions[(r.tuple_id, "best")][r.best] += 1
        questions[(r.tuple_id, "worst")][r.worst] += 1
    if not questions:
        raise DataError("no responses to measure agreement on")
    matched = 0
    total = 0
    fractions = []
    for counts in questions.values():
        top = max(counts.values())
        m = sum(c for c in counts.values() if c == top)
        n = sum(counts.values())
        matched += m
        total += n
        fractions.append(m / n)
    if average == "pooled":
        return matched / total
    return sum(fractions) / len(fractions)


def split_half_reliability(
    responses: list[Response],
    tuples: list[Tuple4],
    n_splits: int = 10,
    seed: int = 0,
) -> SplitHalfResult:
    """Correlation between scores computed from two random halves of the
    responses, averaged over n_splits random splits.

    Each tuple's responses are partitioned into halves whose sizes differ by
    at most one; both halves are scored independently and compared on the
    terms scored by both. Tuples with fewer than two responses are excluded
    and counted in the result. Split k uses an RNG seeded with
    seed * 1_000_003 + k, so splits are reproducible and independent.
    """
    by_tuple: dict[str, list[Response]] = defaultdict(list)
    for r in responses:
        by_tuple[r.tuple_id].append(r)
    usable = {tid: rs for tid, rs in by_tuple.items() if len(rs) >= 2}
    excluded = len(by_tuple) - len(usable)
    if not usable:
        raise DataError("no tuple has at least two responses")

    spearman_values: list[float] = []
    pearson_values: list[float] = []
    for split in range(n_splits):
        rng = Random(seed * 1_000_003 + split)
        half_a: list[Response] = []
        half_b: list[Response] = []
        for tid in sorted(usable):
            rs = usable[tid][:]
            rng.shuffle(rs)
            cut = (len(rs) + 1) // 2
            half_a.extend(rs[:cut])
            half_b.extend(rs[cut:])
        lex_a = score(half_a, tuples)
        lex_b = score(half_b, tuples)
        shared = sorted(set(lex_a.entries) & set(lex_b.entries))
        va = [lex_a[s] for s in shared]
        vb = [lex_b[s] for s in shared]
        spearman_values.append(spearman(va, vb))
        pearson_values.append(pearson(va, vb))

    return SplitHalfResult(
        spearman_mean=statistics.fmean(spearman_values),
        pearson_mean=statistics.fmean(pearson_values),
        spearman_std=statistics.pstdev(spearman_values),
        pearson_std=statistics.pstdev(pearson_values),
        spearman_values=spearman_values,
        pearson_values=pearson_values,
        excluded_tuples=excluded,
    )


def save_responses(responses: list[Response], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for r in responses:
            fh.write(json.dumps({
                "response_id": r.response_id,
                "annotator_id": r.annotator_id,
                "tuple_id": r.tuple_id,
                "best": r.best,
                "worst": r.worst,
                "unix_ms": r.unix_ms,
            }) + "\n")


def load_responses(path: str | Path) -> list[Response]:
    responses: list[Response] = []
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line:
                continue
            try:
                rec = json.loads(line)
                responses.append(Response(
                    response_id=str(rec["response_id"]),
                    annotator_id=str(rec["annotator_id"]),
                    tuple_id=str(rec["tuple_id"]),
                    best=str(rec["best"]),
                    worst=str(rec["worst"]),
                    unix_ms=int(rec["unix_ms"]),
                ))
            except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
                raise FormatError(f"{path}:{lineno}: bad response record ({exc})") from None
    return responses


def load_gold(path: str | Path) -> GoldKey:
    gold: GoldKey = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.rstrip("\n")
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) != 3:
                raise FormatError(f"{path}:{lineno}: expected 3 tab-separated columns")
            tuple_id, expected_best, expected_worst = (p.strip() for p in parts)
            if expected_best == expected_worst:
                raise FormatError(f"{path}:{lineno}: expected best equals expected worst")
            if tuple_id in gold:
                raise FormatError(f"{path}:{lineno}: duplicate gold tuple {tuple_id!r}")
            gold[tuple_id] = (expected_best, expected_worst)
    return gold
