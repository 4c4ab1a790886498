"""Acceptance suite: one test per acceptance criterion, each printing a
[PASS]/[FAIL] line (run with -s to watch them live).

Oracles here are deliberately re-implemented from scratch rather than
imported from the package, so every criterion is checked through an
independent code path.
"""

import json
import math
import os
import signal
import statistics
import subprocess
import sys
import threading
import time
import urllib.error
import urllib.request
from collections import defaultdict
from fractions import Fraction
from random import Random

import numpy as np
import pytest
from scipy.stats import norm

from bwslex.composition import build_pairs, evaluate_reversal, filter_by_polarity, fit_fixed_shift, group_impact
from bwslex.design import Tuple4, generate_design, save_tuples, validate_design
from bwslex.lpd import agreement_curve, infer_pairs, least_perceptible_difference
from bwslex.scoring import Response, score, split_half_reliability
from bwslex.service import AnnotationService, Campaign, make_server
from bwslex.simulate import SimConfig, simulate
from bwslex.stats import spearman, wilson_lower_bound
from bwslex.terms import load_default_inventory, load_lexicon
from conftest import make_terms, published_lexicon_path, window_design


def report(name: str, ok: bool, detail: str = "") -> None:
    line = f"[{'PASS' if ok else 'FAIL'}] {name}"
    if detail:
        line += f"  ({detail})"
    print(line)
    assert ok, line


# ---------------------------------------------------------------- criterion 1

def test_design_constraints():
    terms = make_terms(3207, prefix="term")
    started = time.perf_counter()
    tuples = generate_design(terms, factor=2, seed=2024)
    elapsed = time.perf_counter() - started
    rep = validate_design(tuples, terms, cap=2)
    ok = (
        rep.n_tuples == 6414
        and rep.duplicate_tuple_sets == 0
        and rep.within_tuple_duplicates == 0
        and set(rep.per_term_counts.values()) == {8}
        and rep.max_pair_cooccurrence <= 2
        and elapsed < 30.0
    )
    report(
        "design constraints: 3207 terms, factor 2",
        ok,
        f"{rep.n_tuples} tuples, max pair {rep.max_pair_cooccurrence}, {elapsed:.2f}s",
    )


# ---------------------------------------------------------------- criterion 2

def _brute_force_scores(responses, tuples):
    by_id = {t.tuple_id: t for t in tuples}
    out = {}
    for term in {s for t in tuples for s in t.items}:
        n = sum(1 for r in responses if term in by_id[r.tuple_id].items)
        if n == 0:
            continue
        b = sum(1 for r in responses if r.best == term)
        w = sum(1 for r in responses if r.worst == term)
        out[term] = (b - w) / n
    return out


def test_counting_procedure():
    rng = Random(424242)
    failures = 0
    for _ in range(50):
        terms = make_terms(rng.randint(8, 20))
        tuples = generate_design(terms, factor=2, seed=rng.randrange(2**32), pair_cap=6)
        responses = []
        for a in range(rng.randint(1, 10)):
            for i, tup in enumerate(tuples):
                best, worst = rng.sample(list(tup.items), 2)
                responses.append(Response(
                    response_id=f"r{a}-{i}", annotator_id=f"ann{a}",
                    tuple_id=tup.tuple_id, best=best, worst=worst, unix_ms=i,
                ))
        if score(responses, tuples).entries != _brute_force_scores(responses, tuples):
            failures += 1
    report("counting procedure equals brute-force recount on 50 instances",
           failures == 0, f"{failures} mismatches")


# ---------------------------------------------------------------- criterion 3

def test_oracle_recovery():
    surfaces = [t.surface for t in make_terms(100)]
    tuples = window_design(surfaces)
    latent = {s: -1 + 2 * i / 99 for i, s in enumerate(surfaces)}
    latent_vec = [latent[s] for s in surfaces]

    noiseless = simulate(tuples, SimConfig(latent=latent, n_annotators=10,
                                           noise_sigma=0.0, seed=0))
    lexicon = score(noiseless, tuples)
    rho = spearman([lexicon[s] for s in surfaces], latent_vec)
    halves = split_half_reliability(noiseless, tuples, n_splits=3, seed=5)

    means = []
    for sigma in (0.1, 0.3, 0.8):
        rhos = []
        for seed in (11, 22, 33):
            responses = simulate(tuples, SimConfig(latent=latent, n_annotators=10,
                                                   noise_sigma=sigma, seed=seed))
            noisy = score(responses, tuples)
            rhos.append(spearman([noisy[s] for s in surfaces], latent_vec))
        means.append(statistics.fmean(rhos))
    decreasing = means[0] > means[1] > means[2]

    ok = (rho == 1.0
          and halves.spearman_mean == 1.0 and halves.pearson_mean == 1.0
          and decreasing)
    report(
        "oracle recovery: noiseless rank identity and degradation under noise",
        ok,
        f"rho={rho}, split-half=({halves.spearman_mean}, {halves.pearson_mean}), "
        f"noisy means={[round(m, 3) for m in means]}",
    )


# ---------------------------------------------------------------- criterion 4

def test_table_reproduction_fixture(reference_lexicon):
    inventory = load_default_inventory()
    pairs, _ = build_pairs(reference_lexicon, inventory)
    by_phrase = {p.phrase: p for p in pairs}

    mae_good, _, _ = evaluate_reversal([by_phrase["never good"]])
    mae_better, _, _ = evaluate_reversal([by_phrase["never better"]])
    rows = group_impact(pairs, lpd=0.069, pos_threshold=0.3)
    never_row = next(r for r in rows if r.group == "never" and r.polarity == "on_positive")

    ok = (
        abs(mae_good - 0.014) <= 0.001
        and abs(mae_better - 1.152) <= 0.001
        and never_row.n_up >= 1
        and by_phrase["never better"].diff >= 0.069
    )
    report(
        "fixture lexicon: reversal residuals and 'never better' classified up",
        ok,
        f"residuals {mae_good:.3f}/{mae_better:.3f}, never-up {never_row.n_up}",
    )


@pytest.mark.skipif(published_lexicon_path() is None,
                    reason="published SCL-NMA lexicon not present "
                           "(set SCL_NMA_PATH or add tests/data/SCL-NMA.txt)")
def test_table_reproduction_published():
    lexicon = load_lexicon(published_lexicon_path())
    inventory = load_default_inventory()
    pairs, _ = build_pairs(lexicon, inventory)
    rows = group_impact(pairs, lpd=0.069, pos_threshold=0.3)

    def row(group, polarity):
        return next(r for r in rows if r.group == group and r.polarity == polarity)

    neg_pos = row("negator", "on_positive")
    neg_neg = row("negator", "on_negative")
    mod_pos = row("modal", "on_positive")
    mod_neg = row("modal", "on_negative")
    adv_pos = row("degree_adverb", "on_positive")
    adv_neg = row("degree_adverb", "on_negative")
    wnb = row("will not be", "on_positive")

    ok = (
        abs(neg_pos.avg_diff - (-0.926)) <= 0.001
        and (neg_pos.n_pairs, neg_pos.n_up, neg_pos.n_down) == (265, 1, 264)
        and abs(neg_neg.avg_diff - 0.791) <= 0.001
        and (neg_neg.n_pairs, neg_neg.n_up, neg_neg.n_down) == (71, 71, 0)
        and abs(mod_pos.avg_diff - (-0.317)) <= 0.001 and mod_pos.n_pairs == 258
        and abs(mod_neg.avg_diff - 0.238) <= 0.001 and mod_neg.n_pairs == 72
        and abs(adv_pos.avg_diff - 0.201) <= 0.001 and adv_pos.n_pairs == 435
        and abs(adv_neg.avg_diff - 0.166) <= 0.001 and adv_neg.n_pairs == 163
        and abs(wnb.avg_diff - (-1.066)) <= 0.001 and wnb.n_pairs == 9
    )
    report("published lexicon reproduces the group and per-modifier tables", ok)


# ---------------------------------------------------------------- criterion 5

def _oracle_lpd(responses, tuples, scores, confidence=0.999):
    """From-scratch pipeline: preference counting, sliding-window curve with
    exact rational membership, Wilson bound from the closed form, suffix
    threshold scan. Returns (lpd value, curve dict keyed by grid index)."""
    by_id = {t.tuple_id: t for t in tuples}
    prefs = defaultdict(lambda: [0, 0])
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
                prefs[key][0 if winner == key[0] else 1] += 1

    oriented = []
    for (a, b), (na, nb) in prefs.items():
        if na + nb == 0:
            continue
        hi, lo, nh, nl = (a, b, na, nb) if scores[a] >= scores[b] else (b, a, nb, na)
        oriented.append((Fraction(scores[hi]) - Fraction(scores[lo]),
                         Fraction(nh, nh + nl), nh, nh + nl))
    oriented.sort(key=lambda item: item[0])

    step, window = Fraction(1, 1000), Fraction(1, 100)
    z = float(norm.ppf(confidence))
    distances = [item[0] for item in oriented]
    k_max = math.floor((distances[-1] + window) / step)
    points = {}
    left = right = 0
    for k in range(k_max + 1):
        center = k * step
        while left < len(distances) and distances[left] < center - window:
            left += 1
        if right < left:
            right = left
        while right < len(distances) and distances[right] <= center + window:
            right += 1
        members = oriented[left:right]
        if not members:
            continue
        pooled_k = sum(m[2] for m in members)
        pooled_n = sum(m[3] for m in members)
        p = pooled_k / pooled_n
        lb = (p + z * z / (2 * pooled_n)
              - z * math.sqrt(p * (1 - p) / pooled_n + z * z / (4 * pooled_n * pooled_n))) \
            / (1 + z * z / pooled_n)
        lb = min(1.0, max(0.0, lb))
        mean = float(sum((m[1] for m in members), Fraction(0)) / len(members))
        points[k] = (mean, len(members), pooled_n, lb)

    start = None
    for k in sorted(points, reverse=True):
        if points[k][3] > 0.5:
            start = k
        else:
            break
    return (start * 0.001 if start is not None else None), points


def test_lpd_pipeline():
    terms = make_terms(200)
    surfaces = [t.surface for t in terms]
    latents = np.random.default_rng(7).uniform(-1, 1, 200)
    latent = {s: float(v) for s, v in zip(surfaces, latents)}
    tuples = generate_design(terms, factor=2, seed=7)
    responses = simulate(tuples, SimConfig(latent=latent, n_annotators=10,
                                           noise_sigma=0.15, seed=7))
    lexicon = score(responses, tuples)
    pairs = infer_pairs(responses, tuples)
    curve = agreement_curve(pairs, lexicon)
    value = least_perceptible_difference(curve)

    oracle_value, oracle_points = _oracle_lpd(responses, tuples, lexicon.entries)
    curve_by_k = {round(p.d / 0.001): (p.mean_agreement, p.n_pairs, p.n_judgments, p.lower_bound)
                  for p in curve.points}
    same_curve = (
        set(curve_by_k) == set(oracle_points)
        and all(
            curve_by_k[k][:3] == oracle_points[k][:3]
            and abs(curve_by_k[k][3] - oracle_points[k][3]) <= 1e-12
            for k in oracle_points
        )
    )
    report("lpd pipeline matches an independent re-implementation exactly",
           value == oracle_value and value is not None and same_curve,
           f"lpd={value}, oracle={oracle_value}, points={len(curve.points)}")

    # shift invariance: on dyadic scores the +0.25 shift is exact in IEEE
    # arithmetic, so the curves must be identical point for point; raw
    # floating scores round under the shift, which may only perturb window
    # membership at exact bin edges, so the detected value must not move.
    snapped = {t: round(s * 64) / 64 for t, s in lexicon.entries.items()}
    base = agreement_curve(pairs, snapped)
    shifted = agreement_curve(pairs, {t: s + 0.25 for t, s in snapped.items()})
    raw_shifted = agreement_curve(pairs, {t: s + 0.25 for t, s in lexicon.entries.items()})
    report("agreement curve invariant under +0.25 score shift",
           base.points == shifted.points
           and least_perceptible_difference(raw_shifted) == value)

    rng = Random(99)
    wilson_ok = True
    for _ in range(100):
        n = rng.randint(1, 4000)
        k = rng.randint(0, n)
        z = rng.uniform(0.4, 4.0)
        p = k / n
        expected = (p + z * z / (2 * n) - z * math.sqrt(p * (1 - p) / n + z * z / (4 * n * n))) \
            / (1 + z * z / n)
        if abs(wilson_lower_bound(k, n, z) - min(1.0, max(0.0, expected))) > 1e-12:
            wilson_ok = False
    report("wilson lower bound matches closed form to 1e-12 on 100 cases", wilson_ok)


# ---------------------------------------------------------------- criterion 6

def test_shift_fitting(reference_lexicon):
    from bwslex.composition import ModifierPair

    rng = Random(6)
    planted = []
    for i in range(40):
        content = rng.uniform(0.31, 1.0) * rng.choice([1, -1])
        planted.append(ModifierPair(
            phrase=f"p{i}", content=f"c{i}", modifier_key="not", category="negator",
            phrase_score=content - math.copysign(1.0, content) * 0.3,
            content_score=content,
        ))
    fit, = fit_fixed_shift(planted, scope="global")
    planted_ok = abs(fit.b - 0.3) <= 1e-12 and fit.rmse <= 1e-12

    inventory = load_default_inventory()
    pairs, _ = build_pairs(reference_lexicon, inventory)
    negators_pos = filter_by_polarity(
        [p for p in pairs if p.category == "negator"], "on_positive",
    )
    fixture_fit, = fit_fixed_shift(negators_pos, scope="global")
    mean_diff = statistics.fmean(p.diff for p in negators_pos)
    fixture_ok = abs(fixture_fit.b - (-mean_diff)) <= 1e-12

    report("fixed-shift fit: planted recovery and closed-form identity",
           planted_ok and fixture_ok,
           f"planted b={fit.b:.15f}, fixture b={fixture_fit.b:.6f}")


# ---------------------------------------------------------------- criterion 7

def _post_json(url, payload):
    request = urllib.request.Request(
        url, data=json.dumps(payload).encode(),
        headers={"Content-Type": "application/json"}, method="POST",
    )
    try:
        with urllib.request.urlopen(request, timeout=10) as response:
            return response.status, json.loads(response.read())
    except urllib.error.HTTPError as err:
        return err.code, json.loads(err.read())


def _get_json(url):
    with urllib.request.urlopen(url, timeout=10) as response:
        body = response.read()
        return response.status, json.loads(body) if body else None


def _service_tuples(n):
    surfaces = [f"item{i:03d}" for i in range(n + 3)]
    return [Tuple4(f"t{i:03d}", tuple(surfaces[i:i + 4])) for i in range(n)]


def test_service_durability_concurrent(tmp_path):
    tuples = _service_tuples(50)
    campaign = Campaign(tuples, {}, target=8, gold_rate=0.0, seed=1)
    service = AnnotationService(campaign, tmp_path)
    server = make_server(service, port=0)
    port = server.server_address[1]
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    base = f"http://127.0.0.1:{port}"
    errors = []

    def client(name):
        try:
            while True:
                status, task = _get_json(f"{base}/api/task?annotator={name}")
                if status == 204 or task is None:
                    return
                status, ack = _post_json(f"{base}/api/response", {
                    "annotator_id": name, "tuple_id": task["tuple_id"],
                    "best": task["items"][0], "worst": task["items"][1],
                })
                if status != 200 or ack.get("status") != "ok":
                    errors.append((name, status, ack))
                    return
        except Exception as exc:  # pragma: no cover
            errors.append((name, repr(exc)))

    threads = [threading.Thread(target=client, args=(f"ann{i}",)) for i in range(8)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    progress = service.progress()
    server.shutdown()
    server.server_close()
    service.close()

    log_lines = [ln for ln in (tmp_path / "responses.jsonl").read_text().splitlines() if ln]
    replayed = AnnotationService(Campaign(tuples, {}, target=8, gold_rate=0.0, seed=1), tmp_path)
    replay_progress = replayed.progress()
    replayed.close()
    counts = replayed.campaign.completed

    ok = (
        not errors
        and len(log_lines) == 400
        and progress["responses_total"] == 400
        and replay_progress == progress
        and all(c <= 8 for c in counts.values())
    )
    report("service durability: 8 concurrent clients, 400 responses, exact replay",
           ok, f"log={len(log_lines)}, progress={progress['fraction_complete']:.2f}")


def test_service_kill_and_restart(tmp_path):
    tuples = _service_tuples(12)
    tuples_path = tmp_path / "tuples.jsonl"
    save_tuples(tuples, tuples_path)
    data_dir = tmp_path / "data"

    def start_server():
        proc = subprocess.Popen(
            [sys.executable, "-m", "bwslex.cli", "serve",
             "--tuples", str(tuples_path), "--data-dir", str(data_dir),
             "--target", "2", "--gold-rate", "0", "--port", "0"],
            stdout=subprocess.PIPE, stderr=subprocess.STDOUT, text=True,
        )
        deadline = time.time() + 15
        while time.time() < deadline:
            line = proc.stdout.readline()
            if "listening on" in line:
                return proc, int(line.rsplit(":", 1)[1])
        proc.kill()
        raise RuntimeError("server did not start")

    proc, port = start_server()
    base = f"http://127.0.0.1:{port}"
    acknowledged = []
    try:
        for annotator in ("a", "b"):
            for _ in range(6):
                status, task = _get_json(f"{base}/api/task?annotator={annotator}")
                if status == 204:
                    break
                status, ack = _post_json(f"{base}/api/response", {
                    "annotator_id": annotator, "tuple_id": task["tuple_id"],
                    "best": task["items"][0], "worst": task["items"][1],
                })
                if status == 200 and ack["status"] == "ok":
                    acknowledged.append((annotator, task["tuple_id"]))
    finally:
        os.kill(proc.pid, signal.SIGKILL)
        proc.wait()

    proc, port = start_server()
    base = f"http://127.0.0.1:{port}"
    try:
        _, progress = _get_json(f"{base}/api/progress")
        log_records = [
            json.loads(line)
            for line in (data_dir / "responses.jsonl").read_text().splitlines() if line
        ]
        logged = {(r["annotator_id"], r["tuple_id"]) for r in log_records}
        ok = (
            progress["responses_total"] == len(acknowledged)
            and set(acknowledged) <= logged
            and len(log_records) == len(acknowledged)
        )
        report("service durability: SIGKILL loses no acknowledged response",
               ok, f"acked={len(acknowledged)}, replayed={progress['responses_total']}")
    finally:
        os.kill(proc.pid, signal.SIGKILL)
        proc.wait()
