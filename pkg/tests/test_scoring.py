from random import Random

import pytest
import scipy.stats
from hypothesis import given, settings
from hypothesis import strategies as st

from bwslex.design import Tuple4, generate_design
from bwslex.errors import DataError
from bwslex.scoring import (
    Response,
    filter_annotators,
    load_gold,
    load_responses,
    majority_agreement,
    save_responses,
    score,
    split_half_reliability,
)
from bwslex.simulate import SimConfig, simulate
from bwslex.stats import pearson, spearman
from conftest import make_terms, window_design


def make_response(i, annotator, tuple_id, best, worst):
    return Response(
        response_id=f"r{i}", annotator_id=annotator, tuple_id=tuple_id,
        best=best, worst=worst, unix_ms=1000 + i,
    )


def random_responses(tuples, n_annotators, seed):
    rng = Random(seed)
    responses = []
    i = 0
    for a in range(n_annotators):
        for tup in tuples:
            best, worst = rng.sample(list(tup.items), 2)
            responses.append(make_response(i, f"ann{a}", tup.tuple_id, best, worst))
            i += 1
    return responses


def brute_force_scores(responses, tuples):
    by_id = {t.tuple_id: t for t in tuples}
    out = {}
    terms = {s for t in tuples for s in t.items}
    for term in terms:
        n = sum(1 for r in responses if term in by_id[r.tuple_id].items)
        if n == 0:
            continue
        b = sum(1 for r in responses if r.best == term)
        w = sum(1 for r in responses if r.worst == term)
        out[term] = (b - w) / n
    return out


def test_score_matches_brute_force_on_random_instances():
    rng = Random(20240512)
    for case in range(50):
        n_terms = rng.randint(8, 20)
        terms = make_terms(n_terms)
        tuples = generate_design(terms, factor=2, seed=rng.randrange(2**32), pair_cap=6)
        responses = random_responses(tuples, rng.randint(1, 10), seed=rng.randrange(2**32))
        lexicon = score(responses, tuples)
        assert lexicon.entries == brute_force_scores(responses, tuples), f"case {case}"


def test_score_simple_counts():
    tuples = [Tuple4("t0", ("a", "b", "c", "d"))]
    responses = [
        make_response(0, "x", "t0", "a", "d"),
        make_response(1, "y", "t0", "a", "c"),
        make_response(2, "z", "t0", "b", "a"),
    ]
    lex = score(responses, tuples)
    assert lex["a"] == (2 - 1) / 3
    assert lex["b"] == (1 - 0) / 3
    assert lex["d"] == (0 - 1) / 3


def test_score_always_best_is_one():
    tuples = [Tuple4("t0", ("a", "b", "c", "d"))]
    responses = [make_response(i, f"x{i}", "t0", "a", "b") for i in range(5)]
    lex = score(responses, tuples)
    assert lex["a"] == 1.0
    assert lex["c"] == 0.0


def test_score_empty_responses_error():
    with pytest.raises(DataError):
        score([], [Tuple4("t0", ("a", "b", "c", "d"))])


def test_score_unknown_tuple_error():
    with pytest.raises(DataError, match="unknown tuple"):
        score([make_response(0, "x", "zzz", "a", "b")], [Tuple4("t0", ("a", "b", "c", "d"))])


def test_score_order_and_relabeling_invariant():
    terms = make_terms(10)
    tuples = generate_design(terms, factor=1, seed=2, pair_cap=5)
    responses = random_responses(tuples, 4, seed=77)
    base = score(responses, tuples).entries
    assert score(list(reversed(responses)), tuples).entries == base
    relabeled = [
        Response(r.response_id, "ann-" + r.annotator_id[::-1], r.tuple_id, r.best, r.worst, r.unix_ms)
        for r in responses
    ]
    assert score(relabeled, tuples).entries == base


def test_score_bounds_and_zero_sum():
    terms = make_terms(12)
    tuples = generate_design(terms, factor=2, seed=6, pair_cap=5)
    responses = random_responses(tuples, 5, seed=13)
    lex = score(responses, tuples)
    assert all(-1.0 <= s <= 1.0 for s in lex.entries.values())
    # each response contributes one +1 and one -1 across numerators
    by_id = {t.tuple_id: t for t in tuples}
    numerators = {
        term: sum(1 for r in responses if r.best == term) - sum(1 for r in responses if r.worst == term)
        for term in lex.entries
    }
    assert sum(numerators.values()) == 0


def test_filter_annotators_threshold():
    tuples = [Tuple4(f"g{i}", ("a", "b", "c", "d")) for i in range(10)]
    gold = {f"g{i}": ("a", "d") for i in range(10)}
    # 13 of 20 graded answers correct: accuracy 0.65 < 0.70
    responses = []
    for i in range(10):
        best = "a" if i < 7 else "b"          # 7 correct best answers
        worst = "d" if i < 6 else "c"         # 6 correct worst answers
        responses.append(make_response(i, "weak", f"g{i}", best, worst))
    responses.append(make_response(100, "strong", "g0", "a", "d"))
    kept, report = filter_annotators(responses, gold, threshold=0.70, tuples=tuples)
    assert report.per_annotator_gold_accuracy["weak"] == pytest.approx(0.65)
    assert report.discarded_annotators == {"weak"}
    assert [r.annotator_id for r in kept] == ["strong"]


def test_filter_annotators_perfect_kept():
    gold = {"g0": ("a", "d")}
    responses = [make_response(0, "good", "g0", "a", "d")]
    kept, report = filter_annotators(responses, gold)
    assert kept == responses
    assert report.discarded_annotators == set()


def test_filter_annotators_no_gold_kept_and_flagged():
    gold = {"g0": ("a", "d")}
    responses = [make_response(0, "fresh", "t5", "x", "y")]
    kept, report = filter_annotators(responses, gold)
    assert kept == responses
    assert report.ungraded_annotators == {"fresh"}


def test_filter_annotators_extreme_thresholds():
    gold = {"g0": ("a", "d")}
    responses = [
        make_response(0, "imperfect", "g0", "a", "c"),
        make_response(1, "imperfect", "t1", "x", "y"),
    ]
    kept, _ = filter_annotators(responses, gold, threshold=0.0)
    assert kept == responses
    kept, _ = filter_annotators(responses, gold, threshold=1.0 + 1e-9)
    assert kept == []


def test_majority_agreement_basic():
    tuples = [Tuple4("t0", ("a", "b", "c", "d"))]
    responses = [
        make_response(i, f"x{i}", "t0", "a" if i < 8 else "b", "d")
        for i in range(10)
    ]
    # best question: 8/10 match the mode; worst question: 10/10
    assert majority_agreement(responses, tuples) == pytest.approx(18 / 20)
    assert majority_agreement(responses, tuples, average="per_question") == pytest.approx((0.8 + 1.0) / 2)


def test_majority_agreement_unanimous():
    tuples = [Tuple4("t0", ("a", "b", "c", "d")), Tuple4("t1", ("a", "b", "c", "e"))]
    responses = [
        make_response(i, f"x{i}", tid, "a", "b")
        for i, tid in enumerate(["t0"] * 3 + ["t1"] * 3)
    ]
    assert majority_agreement(responses, tuples) == 1.0


def test_majority_agreement_tie_counts_all():
    tuples = [Tuple4("t0", ("a", "b", "c", "d"))]
    responses = [
        make_response(0, "x", "t0", "a", "d"),
        make_response(1, "y", "t0", "b", "d"),
    ]
    # best question tied a/b: both count as majority
    assert majority_agreement(responses, tuples) == 1.0


def test_split_half_noiseless_is_exactly_one():
    terms = make_terms(30)
    tuples = window_design([t.surface for t in terms])
    latent = {t.surface: -1 + 2 * i / 29 for i, t in enumerate(terms)}
    responses = simulate(tuples, SimConfig(latent=latent, n_annotators=10, noise_sigma=0.0, seed=0))
    result = split_half_reliability(responses, tuples, n_splits=4, seed=1)
    assert result.spearman_mean == 1.0
    assert result.pearson_mean == 1.0
    assert result.spearman_std == 0.0


def test_split_half_excludes_single_response_tuples():
    tuples = [Tuple4("t0", ("a", "b", "c", "d")), Tuple4("t1", ("a", "b", "c", "e"))]
    responses = [
        make_response(0, "x", "t0", "a", "b"),
        make_response(1, "y", "t0", "a", "b"),
        make_response(2, "z", "t1", "a", "b"),
    ]
    result = split_half_reliability(responses, tuples, n_splits=2, seed=0)
    assert result.excluded_tuples == 1


def test_responses_file_roundtrip(tmp_path):
    responses = [make_response(0, "x", "t0", "a", "b"), make_response(1, "y", "t1", "c", "d")]
    path = tmp_path / "responses.jsonl"
    save_responses(responses, path)
    assert load_responses(path) == responses
    assert '"response_id"' in path.read_text(encoding="utf-8").splitlines()[0]


def test_gold_file_roundtrip(tmp_path):
    path = tmp_path / "gold.tsv"
    path.write_text("t3\talpha\tbeta\n", encoding="utf-8")
    assert load_gold(path) == {"t3": ("alpha", "beta")}


def test_response_invariant_best_not_worst():
    with pytest.raises(DataError):
        make_response(0, "x", "t0", "a", "a")


# correlation helpers: oracle is scipy, plus exact boundary behavior

def test_spearman_self_and_negation():
    values = [0.2, -0.4, 0.9, 0.11, -0.3]
    assert spearman(values, values) == 1.0
    assert spearman(values, [-v for v in values]) == -1.0
    assert pearson(values, values) == 1.0


def test_pearson_affine_invariance_exact():
    xs = [0.125, -0.5, 0.75, 0.25, -0.875]  # dyadic, so the affine map is exact
    ys = [2.0 * x + 0.25 for x in xs]
    assert pearson(xs, ys) == 1.0
    assert pearson(xs, [-2.0 * x + 0.25 for x in xs]) == -1.0


@given(st.lists(st.floats(min_value=-1, max_value=1, allow_nan=False), min_size=3, max_size=40))
@settings(max_examples=60)
def test_spearman_monotone_transform_invariance(xs):
    if len(set(xs)) < 2:
        return
    # exactly strictly monotone value mapping, immune to float collapse
    position = {v: i for i, v in enumerate(sorted(set(xs)))}
    ys = [float(position[x] ** 2 + 1) for x in xs]
    assert spearman(xs, ys) == 1.0


def test_correlations_match_scipy():
    rng = Random(5)
    for _ in range(25):
        n = rng.randint(5, 60)
        xs = [rng.uniform(-1, 1) for _ in range(n)]
        ys = [rng.uniform(-1, 1) for _ in range(n)]
        if rng.random() < 0.3:  # force ties
            xs = [round(x, 1) for x in xs]
            ys = [round(y, 1) for y in ys]
        if len(set(xs)) < 2 or len(set(ys)) < 2:
            continue
        assert pearson(xs, ys) == pytest.approx(scipy.stats.pearsonr(xs, ys).statistic, abs=1e-12)
        assert spearman(xs, ys) == pytest.approx(scipy.stats.spearmanr(xs, ys).statistic, abs=1e-12)


def test_correlation_constant_input_raises():
    with pytest.raises(ValueError):
        pearson([1.0, 1.0, 1.0], [0.1, 0.2, 0.3])
