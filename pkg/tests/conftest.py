import os
from pathlib import Path

import pytest

from bwslex.design import Tuple4
from bwslex.terms import ScoredLexicon, Term, load_lexicon

DATA_DIR = Path(__file__).parent / "data"


def make_terms(n: int, prefix: str = "w") -> list[Term]:
    width = max(3, len(str(n - 1)))
    return [Term(id=f"t{i:05d}", surface=f"{prefix}{i:0{width}d}") for i in range(n)]


def window_design(surfaces: list[str]) -> list[Tuple4]:
    """Sliding 4-windows over rank-ordered surfaces, window starting at j
    repeated (n - 3 - j) times.

    Under noiseless annotators this design separates every rank: the term
    at rank r scores ((n-3-(r-3)) - (n-3-r)) / sum of the four windows
    containing it, which is strictly increasing in r. It deliberately
    repeats question sets, which scoring permits (only the design validator
    objects), to pin down an exactly known score staircase.
    """
    n = len(surfaces)
    assert n >= 5
    tuples = []
    counter = 0
    for j in range(n - 3):
        window = tuple(surfaces[j:j + 4])
        for _ in range(n - 3 - j):
            tuples.append(Tuple4(tuple_id=f"s{counter:06d}", items=window))
            counter += 1
    return tuples


@pytest.fixture(scope="session")
def reference_lexicon() -> ScoredLexicon:
    return load_lexicon(DATA_DIR / "reference_scores.tsv")


def published_lexicon_path() -> Path | None:
    """The published SCL-NMA file, if the user has dropped it in.

    Checked at $SCL_NMA_PATH and tests/data/SCL-NMA.txt. Table-level
    reproduction tests run only when it is present.
    """
    env = os.environ.get("SCL_NMA_PATH")
    if env and Path(env).is_file():
        return Path(env)
    local = DATA_DIR / "SCL-NMA.txt"
    return local if local.is_file() else None
