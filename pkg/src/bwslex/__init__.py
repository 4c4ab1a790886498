"""Best-Worst Scaling toolkit for building and analyzing fine-grained
sentiment lexicons: tuple design, response collection, score aggregation,
reliability measures, least-perceptible-difference estimation, and
modifier composition analysis."""

__version__ = "0.1.0"

from .composition import (
    GroupImpactRow,
    ModifierPair,
    ShiftFit,
    build_pairs,
    evaluate_reversal,
    fit_fixed_shift,
    fit_group_line,
    group_impact,
)
from .design import DesignReport, Tuple4, generate_design, load_tuples, save_tuples, validate_design
from .errors import BwslexError, DataError, DesignInfeasibleError, FormatError
from .lpd import (
    AgreementCurve,
    CurvePoint,
    PairJudgment,
    agreement_curve,
    infer_pairs,
    least_perceptible_difference,
)
from .scoring import (
    GoldKey,
    QualityReport,
    Response,
    SplitHalfResult,
    filter_annotators,
    load_gold,
    load_responses,
    majority_agreement,
    save_responses,
    score,
    split_half_reliability,
)
from .simulate import SimConfig, simulate
from .stats import pearson, spearman, wilson_lower_bound
from .terms import (
    ModifierEntry,
    PhraseDecomposition,
    ScoredLexicon,
    Term,
    decompose,
    load_lexicon,
    load_modifier_inventory,
    load_terms,
    save_lexicon,
)

__all__ = [
    "AgreementCurve", "BwslexError", "CurvePoint", "DataError", "DesignInfeasibleError",
    "DesignReport", "FormatError", "GoldKey", "GroupImpactRow", "ModifierEntry",
    "ModifierPair", "PairJudgment", "PhraseDecomposition", "QualityReport", "Response",
    "ScoredLexicon", "ShiftFit", "SimConfig", "SplitHalfResult", "Term", "Tuple4",
    "agreement_curve", "build_pairs", "decompose", "evaluate_reversal", "filter_annotators",
    "fit_fixed_shift", "fit_group_line", "generate_design", "group_impact", "infer_pairs",
    "least_perceptible_difference", "load_gold", "load_lexicon", "load_modifier_inventory",
    "load_responses", "load_terms", "load_tuples", "majority_agreement", "pearson",
    "save_lexicon", "save_responses", "save_tuples", "score", "simulate", "spearman",
    "split_half_reliability", "validate_design", "wilson_lower_bound",
]
