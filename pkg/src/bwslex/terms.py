"""Terms, modifier inventory, phrase decomposition, and lexicon file I/O.

File formats:
  terms file          one term per line, UTF-8, blank lines skipped
  modifier inventory  TSV: surface <TAB> category, category in
                      {negator, modal, degree_adverb}; '#' lines are comments
  lexicon             TSV: term <TAB> score, scores printed with 3 decimals

All surfaces are normalized on load: lowercased, stripped, internal
whitespace collapsed to single spaces.
"""

import importlib.resources
from dataclasses import dataclass, field
from pathlib import Path

from .errors import FormatError

MODIFIER_CATEGORIES = ("negator", "modal", "degree_adverb")


@dataclass(frozen=True)
class Term:
    """A single word or multi-word phrase. The surface doubles as the
    identifier everywhere terms are referenced by files (tuples, responses);
    id is the positional handle assigned by the loader."""

    id: str
    surface: str


@dataclass(frozen=True)
class ModifierEntry:
    surface: str
    category: str

    def __post_init__(self):
        if self.category not in MODIFIER_CATEGORIES:
            raise FormatError(
                f"unknown modifier category {self.category!r} for {self.surface!r}; "
                f"expected one of {', '.join(MODIFIER_CATEGORIES)}"
            )

    @property
    def tokens(self) -> tuple[str, ...]:
        return tuple(self.surface.split(" "))


@dataclass(frozen=True)
class PhraseDecomposition:
    """A phrase split into a left-to-right modifier chain plus one content word."""

    modifier_chain: tuple[ModifierEntry, ...]
    content_word: str

    @property
    def modifier_key(self) -> str:
        """The joined chain surface, e.g. 'would be very'."""
        return " ".join(entry.surface for entry in self.modifier_chain)


@dataclass
class ScoredLexicon:
    """Mapping of term surface to sentiment score in [-1, 1]."""

    entries: dict[str, float] = field(default_factory=dict)

    def __post_init__(self):
        for surface, score in self.entries.items():
            if not -1.0 <= score <= 1.0:
                raise FormatError(f"score {score} for {surface!r} outside [-1, 1]")

    def __len__(self) -> int:
        return len(self.entries)

    def __contains__(self, surface: str) -> bool:
        return surface in self.entries

    def __getitem__(self, surface: str) -> float:
        return self.entries[surface]


def normalize_surface(raw: str) -> str:
    return " ".join(raw.lower().split())


def load_terms(path: str | Path) -> list[Term]:
    """Read a one-term-per-line file into Terms with sequential ids.

    Blank lines are skipped. A surface occurring twice (after
    normalization) raises FormatError naming the offending line.
    """
    terms: list[Term] = []
    seen: dict[str, int] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            surface = normalize_surface(raw)
            if not surface:
                continue
            if surface in seen:
                raise FormatError(
                    f"{path}: duplicate term {surface!r} at line {lineno} "
                    f"(first seen at line {seen[surface]})"
                )
            seen[surface] = lineno
            terms.append(Term(id=f"t{len(terms):05d}", surface=surface))
    return terms


def load_modifier_inventory(path: str | Path) -> list[ModifierEntry]:
    """Parse the modifier inventory TSV: surface <TAB> category."""
    entries: list[ModifierEntry] = []
    seen: dict[str, int] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.rstrip("\n")
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) != 2:
                raise FormatError(f"{path}:{lineno}: expected 2 tab-separated columns, got {len(parts)}")
            surface = normalize_surface(parts[0])
            category = parts[1].strip()
            if not surface:
                raise FormatError(f"{path}:{lineno}: empty modifier surface")
            if category not in MODIFIER_CATEGORIES:
                raise FormatError(
                    f"{path}:{lineno}: unknown category {category!r} "
                    f"(expected one of {', '.join(MODIFIER_CATEGORIES)})"
                )
            if surface in seen:
                raise FormatError(
                    f"{path}:{lineno}: duplicate modifier {surface!r} "
                    f"(first seen at line {seen[surface]})"
                )
            seen[surface] = lineno
            entries.append(ModifierEntry(surface=surface, category=category))
    return entries


def default_inventory_path() -> Path:
    """Location of the modifier inventory shipped with the package."""
    return Path(str(importlib.resources.files("bwslex") / "data" / "modifiers.tsv"))


def load_default_inventory() -> list[ModifierEntry]:
    return load_modifier_inventory(default_inventory_path())


def decompose(phrase: Term | str, inventory: list[ModifierEntry]) -> PhraseDecomposition | None:
    """Split a phrase into modifiers plus a single trailing content word.

    Matching is greedy longest-match from the left over inventory surfaces
    (so 'would not be' wins over 'would not'), and never consumes the last
    token, which becomes the content word. Returns None for single-word
    phrases and for phrases whose leading tokens cannot be fully consumed
    by inventory entries.
    """
    surface = phrase.surface if isinstance(phrase, Term) else phrase
    tokens = surface.split(" ")
    if len(tokens) < 2:
        return None
    by_tokens = {entry.tokens: entry for entry in inventory}
    max_len = max((len(k) for k in by_tokens), default=0)
    chain: list[ModifierEntry] = []
    pos = 0
    while pos < len(tokens) - 1:
        matched = None
        # leave at least the final token for the content word
        for length in range(min(max_len, len(tokens) - 1 - pos), 0, -1):
            entry = by_tokens.get(tuple(tokens[pos:pos + length]))
            if entry is not None:
                matched = entry
                break
        if matched is None:
            return None
        chain.append(matched)
        pos += len(matched.tokens)
    return PhraseDecomposition(modifier_chain=tuple(chain), content_word=tokens[-1])


def format_score(score: float) -> str:
    """Render a score with exactly 3 decimals; negative zero prints as 0.000."""
    text = f"{score:.3f}"
    return "0.000" if text == "-0.000" else text


def save_lexicon(lexicon: ScoredLexicon, path: str | Path) -> None:
    """Write term <TAB> score lines with 3-decimal scores."""
    with open(path, "w", encoding="utf-8") as fh:
        for surface, score in lexicon.entries.items():
            fh.write(f"{surface}\t{format_score(score)}\n")


def load_lexicon(path: str | Path) -> ScoredLexicon:
    """Read a term <TAB> score file, checking scores stay inside [-1, 1]."""
    entries: dict[str, float] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.rstrip("\n")
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) != 2:
                raise FormatError(f"{path}:{lineno}: expected 2 tab-separated columns, got {len(parts)}")
            surface = normalize_surface(parts[0])
            try:
                score = float(parts[1])
            except ValueError:
                raise FormatError(f"{path}:{lineno}: score {parts[1]!r} is not a number") from None
            if not -1.0 <= score <= 1.0:
                raise FormatError(f"{path}:{lineno}: score {score} outside [-1, 1]")
            if surface in entries:
                raise FormatError(f"{path}:{lineno}: duplicate lexicon entry {surface!r}")
            entries[surface] = score
    return ScoredLexicon(entries=entries)
