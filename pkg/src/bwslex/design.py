"""Randomized 4-tuple annotation designs and their validation.

A design over N terms with repetition factor f contains f*N tuples of four
distinct terms such that

  1. no two tuples contain the same set of four terms,
  2. no term repeats within a tuple,
  3. every term appears in exactly 4*f tuples,
  4. no pair of terms co-occurs more often than a configured cap.

Construction: each repetition concatenates four independent shuffles of the
term list and slices the result into N chunks of four, which makes per-term
counts exact by construction. A seeded local-search pass then swaps items
between tuples (count-preserving moves) until the remaining criteria hold.

The RNG is Python's random.Random (Mersenne Twister), which is seedable and
produces identical streams on all platforms, so a design is fully determined
by (terms, factor, seed, pair_cap).
"""

import json
import math
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from random import Random

from .errors import DesignInfeasibleError, FormatError
from .terms import Term

DEFAULT_PAIR_CAP = 2


@dataclass(frozen=True)
class Tuple4:
    """One annotation question: four distinct term surfaces in the order
    they are presented to annotators."""

    tuple_id: str
    items: tuple[str, str, str, str]

    def key(self) -> tuple[str, ...]:
        """Order-insensitive identity of the question."""
        return tuple(sorted(self.items))


@dataclass
class DesignReport:
    n_terms: int
    n_tuples: int
    per_term_counts: dict[str, int]
    max_pair_cooccurrence: int
    duplicate_tuple_sets: int
    within_tuple_duplicates: int
    unknown_terms: int
    violations: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


def _pair_key(a: str, b: str) -> tuple[str, str]:
    return (a, b) if a < b else (b, a)


def _tuple_pairs(items) -> list[tuple[str, str]]:
    out = []
    for i in range(len(items)):
        for j in range(i + 1, len(items)):
            out.append(_pair_key(items[i], items[j]))
    return out


class _RepairState:
    """Mutable design state during local-search repair.

    Tuples are lists of surfaces. Swapping tuples[i][p] with tuples[j][q]
    preserves every per-term count, so only criteria 1, 2 and 4 are scored.
    """

    def __init__(self, tuples: list[list[str]], cap: int):
        self.tuples = tuples
        self.cap = cap
        self.pair_count: Counter = Counter()
        self.set_count: Counter = Counter()
        for items in tuples:
            self.pair_count.update(_tuple_pairs(items))
            self.set_count[tuple(sorted(items))] += 1

    def tuple_badness(self, idx: int) -> int:
        items = self.tuples[idx]
        bad = 4 - len(set(items))
        if self.set_count[tuple(sorted(items))] > 1:
            bad += 1
        for pk in _tuple_pairs(items):
            over = self.pair_count[pk] - self.cap
            if over > 0:
                bad += over
        return bad

    def problem_indices(self) -> list[int]:
        return [i for i in range(len(self.tuples)) if self.tuple_badness(i) > 0]

    def _apply(self, i: int, p: int, j: int, q: int) -> None:
        ti, tj = self.tuples[i], self.tuples[j]
        self.pair_count.subtract(_tuple_pairs(ti))
        self.pair_count.subtract(_tuple_pairs(tj))
        self.set_count[tuple(sorted(ti))] -= 1
        self.set_count[tuple(sorted(tj))] -= 1
        ti[p], tj[q] = tj[q], ti[p]
        self.pair_count.update(_tuple_pairs(ti))
        self.pair_count.update(_tuple_pairs(tj))
        self.set_count[tuple(sorted(ti))] += 1
        self.set_count[tuple(sorted(tj))] += 1

    def try_swap(self, i: int, p: int, j: int, q: int) -> bool:
        """Apply the swap if it strictly reduces local badness; else undo."""
        before = self.tuple_badness(i) + self.tuple_badness(j)
        self._apply(i, p, j, q)
        after = self.tuple_badness(i) + self.tuple_badness(j)
        if after < before:
            return True
        self._apply(i, p, j, q)  # swap the same positions back
        return False


def generate_design(
    terms: list[Term],
    factor: int = 2,
    seed: int = 0,
    pair_cap: int = DEFAULT_PAIR_CAP,
    max_rounds: int = 200,
) -> list[Tuple4]:
    """Generate factor * len(terms) 4-tuples meeting the design criteria.

    Deterministic for fixed (terms, factor, seed, pair_cap). Raises
    DesignInfeasibleError when a criterion cannot be met, naming it.
    """
    n = len(terms)
    if factor < 1:
        raise DesignInfeasibleError("factor must be >= 1")
    if n < 4:
        raise DesignInfeasibleError(
            f"criterion 2 (distinct items): need at least 4 terms, got {n}"
        )
    n_tuples = factor * n
    if math.comb(n, 4) < n_tuples:
        raise DesignInfeasibleError(
            f"criterion 1 (no duplicate tuple sets): only {math.comb(n, 4)} distinct "
            f"4-sets exist for {n} terms but {n_tuples} tuples were requested"
        )
    # each term pairs with 3 others in each of its 4*factor tuples
    min_cap = math.ceil(12 * factor / (n - 1))
    if pair_cap < min_cap:
        raise DesignInfeasibleError(
            f"criterion 4 (pair co-occurrence): cap {pair_cap} is below the "
            f"pigeonhole minimum {min_cap} for {n} terms at factor {factor}"
        )

    rng = Random(seed)
    surfaces = [t.surface for t in terms]
    tuples: list[list[str]] = []
    for _ in range(factor):
        seq: list[str] = []
        for _ in range(4):
            block = surfaces[:]
            rng.shuffle(block)
            seq.extend(block)
        tuples.extend(seq[i * 4:(i + 1) * 4] for i in range(n))

    state = _RepairState(tuples, pair_cap)
    for _ in range(max_rounds):
        problems = state.problem_indices()
        if not problems:
            break
        rng.shuffle(problems)
        progressed = False
        for i in problems:
            if state.tuple_badness(i) == 0:
                continue
            for _ in range(200):
                j = rng.randrange(len(tuples))
                if j == i:
                    continue
                if state.try_swap(i, rng.randrange(4), j, rng.randrange(4)):
                    progressed = True
                    break
        if not progressed:
            break
    leftovers = state.problem_indices()
    if leftovers:
        raise DesignInfeasibleError(
            f"repair did not converge: {len(leftovers)} tuples still violate "
            f"criteria 1/2/4 (try a larger pair cap or another seed)"
        )

    for items in tuples:
        rng.shuffle(items)  # randomized presentation order
    width = len(str(n_tuples - 1))
    return [
        Tuple4(tuple_id=f"t{i:0{width}d}", items=tuple(items))
        for i, items in enumerate(tuples)
    ]


def validate_design(
    tuples: list[Tuple4],
    terms: list[Term],
    cap: int = DEFAULT_PAIR_CAP,
) -> DesignReport:
    """Independently recount a design and flag every criterion violation."""
    known = {t.surface for t in terms}
    per_term = Counter()
    pair_count = Counter()
    set_count = Counter()
    within_dupes = 0
    unknown = 0
    for tup in tuples:
        per_term.update(tup.items)
        pair_count.update(_tuple_pairs(tup.items))
        set_count[tup.key()] += 1
        if len(set(tup.items)) != len(tup.items):
            within_dupes += 1
        unknown += sum(1 for s in tup.items if s not in known)

    duplicate_sets = sum(c - 1 for c in set_count.values() if c > 1)
    max_pair = max(pair_count.values(), default=0)

    violations: list[str] = []
    if duplicate_sets:
        violations.append(f"criterion 1: {duplicate_sets} duplicate tuple sets")
    if within_dupes:
        violations.append(f"criterion 2: {within_dupes} tuples with repeated items")
    counts = [per_term.get(t.surface, 0) for t in terms]
    if counts and max(counts) - min(counts) > 1:
        violations.append(
            f"criterion 3: per-term counts range from {min(counts)} to {max(counts)}"
        )
    if max_pair > cap:
        violations.append(f"criterion 4: max pair co-occurrence {max_pair} exceeds cap {cap}")
    if unknown:
        violations.append(f"{unknown} tuple items reference unknown terms")

    return DesignReport(
        n_terms=len(terms),
        n_tuples=len(tuples),
        per_term_counts={t.surface: per_term.get(t.surface, 0) for t in terms},
        max_pair_cooccurrence=max_pair,
        duplicate_tuple_sets=duplicate_sets,
        within_tuple_duplicates=within_dupes,
        unknown_terms=unknown,
        violations=violations,
    )


def save_tuples(tuples: list[Tuple4], path: str | Path) -> None:
    """Write one JSON record per line: {"tuple_id": ..., "items": [...]}."""
    with open(path, "w", encoding="utf-8") as fh:
        for tup in tuples:
            fh.write(json.dumps({"tuple_id": tup.tuple_id, "items": list(tup.items)}) + "\n")


def load_tuples(path: str | Path) -> list[Tuple4]:
    tuples: list[Tuple4] = []
    seen: set[str] = set()
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line:
                continue
            try:
                record = json.loads(line)
                tuple_id = record["tuple_id"]
                items = record["items"]
            except (json.JSONDecodeError, KeyError, TypeError) as exc:
                raise FormatError(f"{path}:{lineno}: bad tuple record ({exc})") from None
            if not isinstance(items, list) or len(items) != 4:
                raise FormatError(f"{path}:{lineno}: expected exactly 4 items")
            if tuple_id in seen:
                raise FormatError(f"{path}:{lineno}: duplicate tuple_id {tuple_id!r}")
            seen.add(tuple_id)
            tuples.append(Tuple4(tuple_id=str(tuple_id), items=tuple(str(s) for s in items)))
    return tuples
