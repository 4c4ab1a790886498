"""How negators, modals, and degree adverbs shift the sentiment of the
words they modify.

A lexicon that contains both phrases (modifier chain + content word) and
their content words yields modifier pairs: (phrase score, content score).
Group impact tables report average score differences and how many phrases
moved up or down by at least the least perceptible difference. Two classic
composition rules are evaluated against the pairs: polarity reversal
(phrase = -content) and the fixed shift (phrase = content - sign(content)*b).
"""

import math
import statistics
from dataclasses import dataclass
from pathlib import Path

from .errors import DataError
from .terms import ModifierEntry, ScoredLexicon, decompose, format_score

DEFAULT_LPD = 0.069
DEFAULT_POS_THRESHOLD = 0.3
DEFAULT_MIN_PAIRS = 5

# a chain with any negator counts as negation; else any modal; else adverbs
CATEGORY_PRECEDENCE = ("negator", "modal", "degree_adverb")

ON_POSITIVE = "on_positive"
ON_NEGATIVE = "on_negative"


@dataclass(frozen=True)
class ModifierPair:
    phrase: str
    content: str
    modifier_key: str
    category: str
    phrase_score: float
    content_score: float
    n_modifiers: int = 1

    @property
    def diff(self) -> float:
        return self.phrase_score - self.content_score


@dataclass(frozen=True)
class GroupImpactRow:
    group: str
    polarity: str
    category: str
    avg_diff: float
    n_pairs: int
    n_up: int
    n_down: int

    @property
    def n_within_lpd(self) -> int:
        return self.n_pairs - self.n_up - self.n_down


@dataclass(frozen=True)
class ShiftFit:
    key: str
    b: float
    mae: float
    rmse: float
    n: int


def chain_category(chain: tuple[ModifierEntry, ...]) -> str:
    present = {entry.category for entry in chain}
    for category in CATEGORY_PRECEDENCE:
        if category in present:
            return category
    raise ValueError("empty modifier chain")


def build_pairs(
    lexicon: ScoredLexicon,
    inventory: list[ModifierEntry],
) -> tuple[list[ModifierPair], list[str]]:
    """Pair every decomposable phrase with its content word's score.

    Returns (pairs, missing): phrases that decompose but whose content word
    is not in the lexicon are not errors; they come back in `missing`.
    """
    pairs: list[ModifierPair] = []
    missing: list[str] = []
    for surface, phrase_score in lexicon.entries.items():
        decomposition = decompose(surface, inventory)
        if decomposition is None:
            continue
        content = decomposition.content_word
        if content not in lexicon:
            missing.append(surface)
            continue
        pairs.append(ModifierPair(
            phrase=surface,
            content=content,
            modifier_key=decomposition.modifier_key,
            category=chain_category(decomposition.modifier_chain),
            phrase_score=phrase_score,
            content_score=lexicon[content],
            n_modifiers=len(decomposition.modifier_chain),
        ))
    return pairs, missing


def filter_by_polarity(
    pairs: list[ModifierPair],
    polarity: str,
    pos_threshold: float = DEFAULT_POS_THRESHOLD,
) -> list[ModifierPair]:
    if polarity == ON_POSITIVE:
        return [p for p in pairs if p.content_score >= pos_threshold]
    if polarity == ON_NEGATIVE:
        return [p for p in pairs if p.content_score <= -pos_threshold]
    raise ValueError(f"unknown polarity {polarity!r}")


def _impact_row(group, polarity, category, members, lpd) -> GroupImpactRow:
    diffs = [p.diff for p in members]
    if category == "degree_adverb":
        avg = statistics.fmean(abs(d) for d in diffs)
    else:
        avg = statistics.fmean(diffs)
    return GroupImpactRow(
        group=group,
        polarity=polarity,
        category=category,
        avg_diff=avg,
        n_pairs=len(members),
        n_up=sum(1 for d in diffs if d >= lpd),
        n_down=sum(1 for d in diffs if d <= -lpd),
    )


def group_impact(
    pairs: list[ModifierPair],
    lpd: float = DEFAULT_LPD,
    pos_threshold: float = DEFAULT_POS_THRESHOLD,
) -> list[GroupImpactRow]:
    """Impact rows per modifier category and per modifier key, split into
    content words at or above pos_threshold and at or below its negation.

    avg_diff is the signed mean difference for negators and modals and the
    mean absolute difference for degree adverbs. n_up / n_down count pairs
    whose difference clears the least perceptible difference either way;
    pairs inside it count in neither.
    """
    rows: list[GroupImpactRow] = []
    for polarity in (ON_POSITIVE, ON_NEGATIVE):
        selected = filter_by_polarity(pairs, polarity, pos_threshold)
        for category in CATEGORY_PRECEDENCE:
            members = [p for p in selected if p.category == category]
            if members:
                rows.append(_impact_row(category, polarity, category, members, lpd))
        by_key: dict[str, list[ModifierPair]] = {}
        for p in selected:
            by_key.setdefault(p.modifier_key, []).append(p)
        key_rows = [
            _impact_row(key, polarity, members[0].category, members, lpd)
            for key, members in by_key.items()
        ]
        key_rows.sort(key=lambda r: (-abs(r.avg_diff), r.group))
        rows.extend(key_rows)
    return rows


def fit_fixed_shift(
    pairs: list[ModifierPair],
    scope: str = "global",
    polarity: str | None = None,
    pos_threshold: float = DEFAULT_POS_THRESHOLD,
) -> list[ShiftFit]:
    """Least-squares fit of phrase = content - sign(content) * b.

    The closed form is b = mean over pairs of sign(content) * (content -
    phrase). scope is "global", "per_category", or "per_modifier"; empty
    scopes are omitted. polarity optionally restricts pairs first.
    """
    if polarity is not None:
        pairs = filter_by_polarity(pairs, polarity, pos_threshold)
    if scope == "global":
        groups = {"all": pairs}
    elif scope == "per_category":
        groups = {}
        for p in pairs:
            groups.setdefault(p.category, []).append(p)
    elif scope == "per_modifier":
        groups = {}
        for p in pairs:
            groups.setdefault(p.modifier_key, []).append(p)
    else:
        raise ValueError(f"unknown scope {scope!r}")

    fits: list[ShiftFit] = []
    for key in sorted(groups):
        members = groups[key]
        if not members:
            continue
        b = statistics.fmean(
            math.copysign(1.0, p.content_score) * (p.content_score - p.phrase_score)
            for p in members
        )
        residuals = [
            p.phrase_score - (p.content_score - math.copysign(1.0, p.content_score) * b)
            for p in members
        ]
        fits.append(ShiftFit(
            key=key,
            b=b,
            mae=statistics.fmean(abs(r) for r in residuals),
            rmse=math.sqrt(statistics.fmean(r * r for r in residuals)),
            n=len(members),
        ))
    return fits


def evaluate_reversal(pairs: list[ModifierPair]) -> tuple[float, float, int]:
    """Residual summary (mae, rmse, n) of phrase = -content.

    Callers should pass negator pairs; the rule is only motivated there.
    """
    if not pairs:
        raise DataError("no pairs to evaluate")
    residuals = [p.phrase_score - (-p.content_score) for p in pairs]
    mae = statistics.fmean(abs(r) for r in residuals)
    rmse = math.sqrt(statistics.fmean(r * r for r in residuals))
    return mae, rmse, len(residuals)


def fit_group_line(
    pairs: list[ModifierPair],
    group: str | None = None,
) -> tuple[float, float]:
    """Ordinary least squares of phrase score on content score.

    group selects pairs by category or modifier key; None fits all given
    pairs. Returns (intercept, slope). Raises DataError when fewer than two
    pairs remain or all content scores coincide.
    """
    if group is not None:
        pairs = [p for p in pairs if group in (p.category, p.modifier_key)]
    if len(pairs) < 2:
        raise DataError("need at least two pairs to fit a line")
    xs = [p.content_score for p in pairs]
    ys = [p.phrase_score for p in pairs]
    mx = statistics.fmean(xs)
    my = statistics.fmean(ys)
    sxx = sum((x - mx) ** 2 for x in xs)
    if sxx == 0:
        raise DataError("all content scores are equal; slope is undefined")
    sxy = sum((x - mx) * (y - my) for x, y in zip(xs, ys))
    beta = sxy / sxx
    alpha = my - beta * mx
    return alpha, beta


def emit_report(
    rows: list[GroupImpactRow],
    fits: list[ShiftFit],
    pairs: list[ModifierPair],
    out_dir: str | Path,
    min_pairs: int = DEFAULT_MIN_PAIRS,
    reversal: tuple[float, float, int] | None = None,
    lpd: float = DEFAULT_LPD,
    pos_threshold: float = DEFAULT_POS_THRESHOLD,
) -> list[Path]:
    """Write the analysis artifacts into out_dir and return their paths.

    group_impact.tsv             per-category rows (the group-level table)
    modifier_impact.tsv          per-modifier-key rows with >= min_pairs pairs
    modifier_impact_single.tsv   same, restricted to single-modifier chains
    shift_fits.tsv               fixed-shift fits
    scatter.tsv                  content_score, phrase_score, modifier_key, category
    summary.txt                  human-readable recap
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written: list[Path] = []
    header = "group\tpolarity\tavg_diff\tn_pairs\tn_up\tn_down\n"
    categories = set(CATEGORY_PRECEDENCE)

    group_path = out / "group_impact.tsv"
    with open(group_path, "w", encoding="utf-8") as fh:
        fh.write(header)
        for r in rows:
            if r.group in categories:
                fh.write(_impact_line(r))
    written.append(group_path)

    modifier_path = out / "modifier_impact.tsv"
    with open(modifier_path, "w", encoding="utf-8") as fh:
        fh.write(header)
        for r in rows:
            if r.group not in categories and r.n_pairs >= min_pairs:
                fh.write(_impact_line(r))
    written.append(modifier_path)

    single_rows = group_impact(
        [p for p in pairs if p.n_modifiers == 1], lpd=lpd, pos_threshold=pos_threshold,
    )
    single_path = out / "modifier_impact_single.tsv"
    with open(single_path, "w", encoding="utf-8") as fh:
        fh.write(header)
        for r in single_rows:
            if r.group not in categories and r.n_pairs >= min_pairs:
                fh.write(_impact_line(r))
    written.append(single_path)

    fits_path = out / "shift_fits.tsv"
    with open(fits_path, "w", encoding="utf-8") as fh:
        fh.write("key\tb\tmae\trmse\tn\n")
        for f in fits:
            fh.write(f"{f.key}\t{f.b:.6f}\t{f.mae:.6f}\t{f.rmse:.6f}\t{f.n}\n")
    written.append(fits_path)

    scatter_path = out / "scatter.tsv"
    with open(scatter_path, "w", encoding="utf-8") as fh:
        fh.write("content_score\tphrase_score\tmodifier_key\tcategory\n")
        for p in sorted(pairs, key=lambda p: (p.category, p.modifier_key, p.phrase)):
            fh.write(
                f"{format_score(p.content_score)}\t{format_score(p.phrase_score)}\t"
                f"{p.modifier_key}\t{p.category}\n"
            )
    written.append(scatter_path)

    summary_path = out / "summary.txt"
    with open(summary_path, "w", encoding="utf-8") as fh:
        fh.write(f"modifier pairs analyzed: {len(pairs)}\n\n")
        for r in rows:
            if r.group in categories:
                fh.write(
                    f"{r.group} {r.polarity}: avg diff {r.avg_diff:+.3f} over "
                    f"{r.n_pairs} pairs ({r.n_up} up, {r.n_down} down, "
                    f"{r.n_within_lpd} within the least perceptible difference)\n"
                )
        if reversal is not None:
            mae, rmse, n = reversal
            fh.write(
                f"\npolarity reversal (phrase = -content) on negator pairs: "
                f"mae {mae:.3f}, rmse {rmse:.3f}, n {n}\n"
            )
        if fits:
            fh.write("\nfixed-shift fits (phrase = content - sign(content) * b):\n")
            for f in fits:
                fh.write(f"  {f.key}: b {f.b:.3f}, mae {f.mae:.3f}, rmse {f.rmse:.3f}, n {f.n}\n")
    written.append(summary_path)
    return written


def _impact_line(r: GroupImpactRow) -> str:
    return (
        f"{r.group}\t{r.polarity}\t{format_score(r.avg_diff)}\t"
        f"{r.n_pairs}\t{r.n_up}\t{r.n_down}\n"
    )
